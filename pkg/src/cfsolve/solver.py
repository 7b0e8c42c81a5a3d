"""Breadth-first subdivision driver.

Each popped state goes through: preconditioning (a transient copy used as a
guide), reduction by integer lower bounds, exclusion, inclusion and finally a
split.  Before a split the solver checks that the split hyperplane carries no
common zero; if it might, another split point is tried, so that every zero
stays in the open interior of exactly one child.
"""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import partial
from typing import Sequence

from .homography import DomainBox, Homography, Step, split_matrices
from .inclexcl import (
    Reason,
    TestVerdict,
    Verdict,
    exclusion_test,
    inclusion_test,
    jacobian_determinant,
)
from .reduction import precondition_polys, reduce, scale_spread
from .state import SystemState, _push_shift, _push_split, initial_state
from .tensorpoly import Sign, TensorPoly, evaluate, sign_summary, substitute_axis
from . import unicf

__all__ = [
    "SolveConfig",
    "SolveStats",
    "Certificate",
    "IsolationResult",
    "StepKind",
    "StepResult",
    "RootReport",
    "solve",
    "step",
    "report_roots",
    "refine_result",
    "face_may_vanish",
    "SPLIT_POINTS",
]

log = logging.getLogger(__name__)

# candidate split points, tried in order when a face may carry a zero
SPLIT_POINTS = tuple(
    Fraction(p)
    for p in ("1", "15/16", "17/16", "29/32", "35/32", "3/4", "5/4", "7/8", "9/8", "1/2", "2", "13/16", "19/16")
)


@dataclass(frozen=True)
class SolveConfig:
    max_depth: int = 64
    use_precondition: bool = True
    use_reduction: bool = True
    lower_bound_strategy: str = "exact"
    use_upper_bounds: bool = False
    spread: int = 0
    split: str = "binary"
    split_point: str = "unit"
    projection: str = "plain"
    face_check_depth: int = 6
    jobs: int = 1

    def __post_init__(self):
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.lower_bound_strategy not in ("exact", "cauchy"):
            raise ValueError("lower_bound_strategy must be 'exact' or 'cauchy'")
        if self.split not in ("binary", "full"):
            raise ValueError("split must be 'binary' or 'full'")
        if self.split_point not in ("unit", "balanced"):
            raise ValueError("split_point must be 'unit' or 'balanced'")
        if self.projection not in ("plain", "bernstein"):
            raise ValueError("projection must be 'plain' or 'bernstein'")
        if self.spread < 0:
            raise ValueError("spread must be >= 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass
class SolveStats:
    iterations: int = 0
    subdivisions: int = 0
    solutions: int = 0
    excluded: int = 0
    depth_limited: int = 0
    reductions: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


class Certificate(enum.Enum):
    MIRANDA_JACOBIAN = "MirandaJacobian"
    DEPTH_LIMIT = "DepthLimit"


@dataclass(frozen=True)
class IsolationResult:
    box: DomainBox
    certificate: Certificate
    trace: tuple = ()
    depth: int = 0
    stats: SolveStats | None = field(default=None, compare=False, repr=False)

    @property
    def certified(self) -> bool:
        return self.certificate is Certificate.MIRANDA_JACOBIAN


class StepKind(enum.Enum):
    EXCLUDED = "excluded"
    INCLUDED = "included"
    CHILDREN = "children"
    DEPTH_LIMITED = "depth_limited"


@dataclass(frozen=True)
class StepResult:
    kind: StepKind
    verdict: TestVerdict | None = None
    result: IsolationResult | None = None
    children: tuple[SystemState, ...] = ()
    reduced: bool = False


# -- face check ----------------------------------------------------------------


def _strictly_signed(f: TensorPoly) -> bool:
    """Nonzero constant term and one coefficient sign: no zero on the closed orthant."""
    s = sign_summary(f)
    if s is not Sign.ALL_NONNEG and s is not Sign.ALL_NONPOS:
        return False
    return f.coeffs.flat[0] != 0


def _common_positive_root_univariate(polys: list[TensorPoly]) -> bool:
    g = None
    for f in polys:
        if f.is_zero:
            continue
        g = list(f.trimmed().flat) if g is None else unicf.poly_gcd(g, list(f.trimmed().flat))
        if len(g) == 1:
            return False
    if g is None:
        return True
    return unicf.min_positive_root(g) is not None


def _may_vanish(polys: list[TensorPoly], budget: int) -> bool:
    if any(_strictly_signed(f) for f in polys if not f.is_zero):
        return False
    if budget == 0:
        return True
    n = polys[0].nvars
    from .homography import subdivide

    for _, child, _ in subdivide(polys, Homography.identity(n)):
        if _may_vanish(child, budget - 1):
            return True
    return False


def face_may_vanish(polys: Sequence[TensorPoly], k: int, point, budget: int = 6) -> bool:
    """Whether the polynomials may share a zero with ``x_k = point``, the
    other coordinates positive.  False is a proof; True may be spurious."""
    face = [substitute_axis(f, k, Fraction(point), drop=True) for f in polys]
    if face[0].nvars == 0:
        return all(f.coeffs[()] == 0 for f in face)
    face = [f.trimmed() for f in face]
    if face[0].nvars == 1:
        return _common_positive_root_univariate(face)
    nonzero = [f for f in face if not f.is_zero]
    if not nonzero:
        return True
    return _may_vanish(nonzero, budget)


# -- one loop body ---------------------------------------------------------------


@dataclass(frozen=True)
class _Context:
    cfg: SolveConfig
    det: TensorPoly | None


def _split_axes(state: SystemState, cfg: SolveConfig) -> list[int]:
    if cfg.split == "full":
        return list(range(state.nvars))
    return [state.depth % state.nvars]


def _preferred_point(state: SystemState, k: int, cfg: SolveConfig) -> Fraction:
    """Local split point: 1, or on bounded axes the power of two closest to
    ``delta/gamma``, whose image is the midpoint of the box side."""
    m = state.H.axes[k]
    if cfg.split_point == "unit" or m.gamma == 0 or m.delta == 0:
        return Fraction(1)
    t = Fraction(abs(m.delta), abs(m.gamma))
    e = t.numerator.bit_length() - t.denominator.bit_length()
    # pick e or e +/- 1, whichever is closest to t in ratio
    best = min((e - 1, e, e + 1), key=lambda j: abs(math.log2(t) - j))
    return Fraction(2) ** best


def _split(state: SystemState, cfg: SolveConfig) -> list[SystemState]:
    axes = _split_axes(state, cfg)
    children = [state]
    for k in axes:
        point = None
        base = _preferred_point(state, k, cfg)
        for cand in SPLIT_POINTS:
            cand = cand * base
            if not face_may_vanish(state.polys, k, cand, cfg.face_check_depth):
                point = cand
                break
        if point is None:
            log.warning("no zero-free split hyperplane found on axis %d; splitting at 1", k)
            point = Fraction(1)
        lo_m, up_m = split_matrices(point)
        nxt = []
        for ch in children:
            if point == 1:
                up_trace = ch.trace[:k] + (_push_shift(ch.trace[k], 1),) + ch.trace[k + 1 :]
                lo_trace = ch.trace[:k] + (_push_split(ch.trace[k]),) + ch.trace[k + 1 :]
            else:
                up_trace = lo_trace = ch.trace[:k] + (None,) + ch.trace[k + 1 :]
            nxt.append(ch.with_steps([Step(k, up_m)], trace=up_trace))
            nxt.append(ch.with_steps([Step(k, lo_m)], trace=lo_trace))
        children = nxt
    return [
        SystemState(c.polys, c.H, c.originals, state.depth + 1, c.trace, c.jacobian)
        for c in children
    ]


def step(state: SystemState, cfg: SolveConfig | None = None, det: TensorPoly | None = None) -> StepResult:
    """Apply the loop body once to ``state``."""
    cfg = cfg or SolveConfig()
    guide = None
    if cfg.use_precondition and state.square:
        polys, ok = precondition_polys(state.polys, state.H, state.originals)
        if ok:
            guide = tuple(polys)
    reduced = False
    if cfg.use_reduction:
        r = reduce(
            state,
            cfg.lower_bound_strategy,
            upper=cfg.use_upper_bounds,
            guide=guide,
            projection=cfg.projection,
        )
        if r.empty:
            b = r.bounds[-1]
            reason = Reason.BOUND_SENTINEL if b.mu == math.inf or b.M <= 0 else Reason.EMPTY_BOUNDS_INTERSECTION
            return StepResult(StepKind.EXCLUDED, TestVerdict(Verdict.EMPTY, reason, axis=r.empty_axis))
        reduced = r.progress or r.state is not state
        state = r.state
        if guide is not None:
            guide = r.guide
    v = exclusion_test(state, guide=guide, use_bounds=False)
    if v.empty:
        return StepResult(StepKind.EXCLUDED, v, reduced=reduced)
    if state.square:
        v = inclusion_test(state, guide=guide, det=det if det is not None else state.jacobian)
        if v.unique:
            res = IsolationResult(state.box(), Certificate.MIRANDA_JACOBIAN, state.trace, state.depth)
            return StepResult(StepKind.INCLUDED, v, res, reduced=reduced)
    if state.depth >= cfg.max_depth:
        res = IsolationResult(state.box(), Certificate.DEPTH_LIMIT, state.trace, state.depth)
        return StepResult(StepKind.DEPTH_LIMITED, result=res, reduced=reduced)
    return StepResult(StepKind.CHILDREN, children=tuple(_split(state, cfg)), reduced=reduced)


def _step_ctx(ctx: _Context, state: SystemState) -> StepResult:
    return step(state, ctx.cfg, ctx.det)


# -- driver ----------------------------------------------------------------------


def _scaled_box(domain: DomainBox, ell: int) -> DomainBox:
    s = 2**ell
    return DomainBox([(lo * s, hi if hi == math.inf else hi * s) for lo, hi in domain])


def _unscaled(b: DomainBox, ell: int) -> DomainBox:
    s = 2**ell
    return DomainBox([(lo / s, hi if hi == math.inf else hi / s) for lo, hi in b])


def solve(
    system: Sequence[TensorPoly],
    domain: DomainBox | None = None,
    cfg: SolveConfig | None = None,
    *,
    on_state=None,
) -> tuple[list[IsolationResult], SolveStats]:
    """Isolate the real zeros of ``system`` inside ``domain``.

    Returns the result boxes sorted by lower corner and the run statistics.
    ``on_state(state, step_result)`` is called for every popped state, in
    processing order (single-process runs only).
    """
    cfg = cfg or SolveConfig()
    system = list(system)
    if not system:
        raise ValueError("empty system")
    n = system[0].nvars
    if any(f.nvars != n for f in system):
        raise ValueError("inconsistent number of variables")
    if domain is None:
        domain = DomainBox.orthant(n)
    if any(f.is_zero for f in system):
        raise ValueError("system contains the zero polynomial")
    ell = cfg.spread
    if ell:
        system = scale_spread(system, ell)
        domain = _scaled_box(domain, ell)
    det = jacobian_determinant(system) if len(system) == n else None
    root = initial_state(system, domain, det)
    stats = SolveStats()
    results: list[IsolationResult] = []
    ctx = _Context(cfg, det)

    def account(st: SystemState, out: StepResult, level: list):
        stats.iterations += 1
        if out.reduced:
            stats.reductions += 1
        if out.kind is StepKind.EXCLUDED:
            stats.excluded += 1
        elif out.kind is StepKind.INCLUDED:
            stats.solutions += 1
            results.append(out.result)
        elif out.kind is StepKind.DEPTH_LIMITED:
            stats.depth_limited += 1
            results.append(out.result)
            log.debug("depth limit reached on box %s", out.result.box)
        else:
            stats.subdivisions += 1
            level.extend(out.children)
        if on_state is not None:
            on_state(st, out)

    level = [root]
    if cfg.jobs > 1 and on_state is None:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            while level:
                nxt: list[SystemState] = []
                chunk = max(1, len(level) // (cfg.jobs * 4))
                for st, out in zip(level, pool.map(partial(_step_ctx, ctx), level, chunksize=chunk)):
                    account(st, out, nxt)
                level = nxt
    else:
        while level:
            nxt = []
            for st in level:
                account(st, step(st, cfg, det), nxt)
            level = nxt

    if stats.depth_limited:
        log.warning(
            "%d box(es) reached the depth limit %d without certification",
            stats.depth_limited,
            cfg.max_depth,
        )
    if ell:
        results = [
            IsolationResult(_unscaled(r.box, ell), r.certificate, r.trace, r.depth) for r in results
        ]
    results.sort(key=lambda r: (tuple(r.box.lower), tuple(r.box.upper)))
    results = [IsolationResult(r.box, r.certificate, r.trace, r.depth, stats) for r in results]
    return results, stats


# -- reporting -------------------------------------------------------------------


@dataclass(frozen=True)
class RootReport:
    box: DomainBox
    certificate: Certificate
    cf: tuple[tuple[int, ...], ...]
    exact: tuple[bool, ...]
    point: tuple[Fraction | None, ...]


def _root_in_closed(f: list[int], lo: Fraction, hi: Fraction) -> bool:
    g = unicf.squarefree_part(f)
    if len(g) == 1:
        return g == [0]
    if unicf._evaluate(g, lo) == 0 or unicf._evaluate(g, hi) == 0:
        return True
    # roots inside (lo, hi) are the positive roots of the map sending 0 -> lo, inf -> hi
    from .homography import for_box, apply_homography

    H = for_box(DomainBox([(lo, hi)]))
    return bool(unicf.isolate_positive_roots(apply_homography(TensorPoly(g), H)))


def _exact_coordinates(system, b: DomainBox):
    n = b.nvars
    cand = [unicf.simplest_rational(lo, hi, open=True) for lo, hi in b]
    if all(evaluate(f, cand) == 0 for f in system):
        return [True] * n, cand
    if n == 1:
        return [False], [None]
    if n == 2:
        flags, pts = [], []
        for k in range(2):
            j = 1 - k
            face = [substitute_axis(f, k, cand[k], drop=True).trimmed() for f in system]
            nonzero = [list(f.flat) for f in face if not f.is_zero]
            if not nonzero:
                ok = True
            else:
                g = nonzero[0]
                for h in nonzero[1:]:
                    g = unicf.poly_gcd(g, h)
                lo, hi = b[j]
                ok = _root_in_closed(g, lo, hi)
            flags.append(ok)
            pts.append(cand[k] if ok else None)
        return flags, pts
    return [False] * n, [None] * n


def _prefix_lengths(b: DomainBox, flags) -> list[int]:
    return [
        math.inf if ex or hi == math.inf else len(unicf.cf_of_interval(lo, hi))
        for (lo, hi), ex in zip(b, flags)
    ]


def refine_result(
    result: IsolationResult,
    system: Sequence[TensorPoly],
    quotients: int,
    *,
    max_rounds: int = 256,
    width: int = 64,
) -> IsolationResult:
    """Shrink a certified box until every coordinate prefix has ``quotients``
    partial quotients (or the round budget runs out).

    The Jacobian determinant keeps one sign on the certified box, so it holds
    a single zero and any certified sub-box contains that same zero.  The
    search keeps a frontier of boxes not yet excluded and jumps to the first
    certified one; the returned box is always certified.
    """
    if not result.certified or not result.box.bounded:
        return result
    system = list(system)
    flags, _ = _exact_coordinates(system, result.box)
    if min(_prefix_lengths(result.box, flags)) >= quotients:
        return result
    cfg = SolveConfig(split="full")
    best = result
    frontier = None
    for _ in range(max_rounds):
        if frontier is None:
            # a fresh preconditioner at the centre of the current certified box
            b = best.box
            mid = [(lo + hi) / 2 for lo, hi in b]
            pre, ok = precondition_polys(system, Homography.identity(b.nvars), system, point=mid)
            guide_sys = pre if ok else system
            det = jacobian_determinant(guide_sys)
            frontier = [initial_state(guide_sys, b, det)]
        survivors, certified = [], []
        for st in frontier:
            for ch in _split(st, cfg):
                if exclusion_test(ch, use_bounds=False).empty:
                    continue
                survivors.append(ch)
                if inclusion_test(ch, det=det).unique:
                    certified.append(ch)
        if not survivors:
            break
        if certified:
            ch = certified[0]
            best = IsolationResult(ch.box(), result.certificate, result.trace, result.depth + ch.depth, result.stats)
            if min(_prefix_lengths(best.box, flags)) >= quotients:
                break
            frontier = None
        elif len(survivors) > width:
            break
        else:
            frontier = survivors
    return best


def report_roots(
    results: Sequence[IsolationResult],
    system: Sequence[TensorPoly] | None = None,
    *,
    quotients: int = 0,
) -> list[RootReport]:
    """Continued-fraction prefixes of every root coordinate.

    For each axis the prefix is the list of partial quotients shared by all
    numbers in the open box interval; it is exact (and complete) when the
    coordinate is detected to be rational.  With ``quotients`` and the system
    given, certified boxes are first refined so that each inexact prefix
    reaches that length; the report then carries the refined box.
    """
    out = []
    for r in results:
        if quotients and system is not None:
            r = refine_result(r, system, quotients)
        b = r.box
        if system is not None and b.bounded:
            flags, pts = _exact_coordinates(list(system), b)
        else:
            flags, pts = [False] * b.nvars, [None] * b.nvars
        cfs = []
        for k, (lo, hi) in enumerate(b):
            if flags[k]:
                cfs.append(tuple(unicf.cf_of_rational(pts[k])))
            else:
                cfs.append(tuple(unicf.cf_of_interval(lo, hi)))
        out.append(RootReport(b, r.certificate, tuple(cfs), tuple(flags), tuple(pts)))
    return out
