"""Exclusion and inclusion certificates for a subdivision state.

Exclusion verdicts prove that the open box holds no common zero; inclusion
verdicts prove that it holds exactly one.  ``Unknown`` is always a safe answer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .homography import Homography, apply_homography
from .reduction import system_bounds
from .state import SystemState
from .tensorpoly import (
    Sign,
    TensorPoly,
    face_lower,
    face_upper,
    interval_evaluate,
    partial_derivative,
    sign_summary,
)

__all__ = [
    "Verdict",
    "Reason",
    "TestVerdict",
    "exclusion_test",
    "sign_exclusion",
    "interval_exclusion",
    "miranda_matrix",
    "has_perfect_matching",
    "miranda_test",
    "jacobian_determinant",
    "jacobian_sign_constant",
    "inclusion_test",
]


class Verdict(enum.Enum):
    EMPTY = "empty"
    UNIQUE_ROOT = "unique_root"
    UNKNOWN = "unknown"


class Reason(enum.Enum):
    ALL_SAME_SIGN = "all_same_sign"
    INTERVAL_SIGN_CONSTANT = "interval_sign_constant"
    EMPTY_BOUNDS_INTERSECTION = "empty_bounds_intersection"
    BOUND_SENTINEL = "bound_sentinel"


@dataclass(frozen=True)
class TestVerdict:
    kind: Verdict
    reason: Reason | None = None
    index: int | None = None
    axis: int | None = None

    @property
    def empty(self) -> bool:
        return self.kind is Verdict.EMPTY

    @property
    def unique(self) -> bool:
        return self.kind is Verdict.UNIQUE_ROOT


UNKNOWN = TestVerdict(Verdict.UNKNOWN)


# -- exclusion ---------------------------------------------------------------


def sign_exclusion(polys: Sequence[TensorPoly]) -> TestVerdict:
    """A nonzero polynomial with one coefficient sign has no zero in the open orthant."""
    for i, f in enumerate(polys):
        s = sign_summary(f)
        if s is Sign.ALL_NONNEG or s is Sign.ALL_NONPOS:
            return TestVerdict(Verdict.EMPTY, Reason.ALL_SAME_SIGN, index=i)
    return UNKNOWN


def interval_exclusion(originals: Sequence[TensorPoly], H: Homography) -> TestVerdict:
    b = H.box()
    if not b.bounded:
        return UNKNOWN
    for i, f in enumerate(originals):
        lo, hi = interval_evaluate(f, list(b))
        if lo > 0 or hi < 0:
            return TestVerdict(Verdict.EMPTY, Reason.INTERVAL_SIGN_CONSTANT, index=i)
    return UNKNOWN


def bounds_exclusion(polys: Sequence[TensorPoly], strategy: str = "exact") -> TestVerdict:
    n = polys[0].nvars
    for k in range(n):
        for i, f in enumerate(polys):
            if f.is_zero:
                continue
            if system_bounds([f], k, strategy).empty:
                return TestVerdict(Verdict.EMPTY, Reason.BOUND_SENTINEL, index=i, axis=k)
        if system_bounds(polys, k, strategy).empty:
            return TestVerdict(Verdict.EMPTY, Reason.EMPTY_BOUNDS_INTERSECTION, axis=k)
    return UNKNOWN


def exclusion_test(
    state: SystemState,
    *,
    guide: Sequence[TensorPoly] | None = None,
    use_bounds: bool = True,
    strategy: str = "exact",
) -> TestVerdict:
    """Sign inspection, then interval evaluation, then projection bounds.

    ``guide`` is an optional second polynomial list with the same common
    zeros (a preconditioned copy); it is inspected as well.
    """
    lists = [state.polys] if guide is None else [guide, state.polys]
    for polys in lists:
        v = sign_exclusion(polys)
        if v.empty:
            return v
    v = interval_exclusion(state.originals, state.H)
    if v.empty:
        return v
    if use_bounds:
        for polys in lists:
            v = bounds_exclusion(polys, strategy)
            if v.empty:
                return v
    return UNKNOWN


# -- Miranda -----------------------------------------------------------------


def _opposite(a: Sign, b: Sign) -> bool:
    return {a, b} == {Sign.ALL_NONNEG, Sign.ALL_NONPOS}


def miranda_matrix(polys: Sequence[TensorPoly]) -> list[list[int]]:
    """Entry ``(i, j)`` is 1 when ``f_i`` has opposite constant signs on the
    two faces orthogonal to axis ``j``."""
    n = polys[0].nvars
    mat = []
    for f in polys:
        row = []
        for j in range(n):
            lo = sign_summary(face_lower(f, j))
            hi = sign_summary(face_upper(f, j))
            row.append(int(_opposite(lo, hi)))
        mat.append(row)
    return mat


def has_perfect_matching(mat: Sequence[Sequence[int]]) -> bool:
    """Whether the square 0-1 matrix dominates a permutation matrix (Kuhn)."""
    n = len(mat)
    match_col: list[int | None] = [None] * n

    def augment(r: int, seen: list[bool]) -> bool:
        for c in range(n):
            if mat[r][c] and not seen[c]:
                seen[c] = True
                if match_col[c] is None or augment(match_col[c], seen):
                    match_col[c] = r
                    return True
        return False

    return all(augment(r, [False] * n) for r in range(n))


def miranda_test(state_or_polys) -> bool:
    polys = state_or_polys.polys if isinstance(state_or_polys, SystemState) else state_or_polys
    polys = list(polys)
    n = polys[0].nvars
    if len(polys) != n:
        raise ValueError("Miranda test needs a square system")
    if any(f.is_zero for f in polys):
        return False
    return has_perfect_matching(miranda_matrix(polys))


# -- Jacobian ----------------------------------------------------------------


def _det(rows: list[list[TensorPoly]]) -> TensorPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def jacobian_determinant(system: Sequence[TensorPoly]) -> TensorPoly:
    """Symbolic ``det J`` by cofactor expansion."""
    n = system[0].nvars
    if len(system) != n:
        raise ValueError("Jacobian determinant needs a square system")
    rows = [[partial_derivative(f, j) for j in range(n)] for f in system]
    return _det(rows).trimmed()


def jacobian_sign_constant(state: SystemState, det: TensorPoly | None = None) -> bool:
    """True when ``det J`` of the input system cannot vanish on the box."""
    if not state.square:
        raise ValueError("Jacobian test needs a square system")
    b = state.box()
    if not b.bounded:
        return False
    if det is None:
        det = state.jacobian if state.jacobian is not None else jacobian_determinant(state.originals)
    lo, hi = interval_evaluate(det, list(b))
    if lo > 0 or hi < 0:
        return True
    s = sign_summary(apply_homography(det, state.H))
    return s is Sign.ALL_NONNEG or s is Sign.ALL_NONPOS


def inclusion_test(
    state: SystemState,
    *,
    guide: Sequence[TensorPoly] | None = None,
    det: TensorPoly | None = None,
) -> TestVerdict:
    """UniqueRoot when Miranda holds (on ``guide`` or the state's polynomials)
    and the Jacobian determinant keeps its sign on the bounded box."""
    if not state.square or not state.box().bounded:
        return UNKNOWN
    candidates = [state.polys] if guide is None else [guide, state.polys]
    if not any(miranda_test(list(p)) for p in candidates):
        return UNKNOWN
    if not jacobian_sign_constant(state, det):
        return UNKNOWN
    return TestVerdict(Verdict.UNIQUE_ROOT)

