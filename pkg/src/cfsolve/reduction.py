"""Enveloping univariate bounds, domain reduction and Jacobian preconditioning.

For a polynomial ``f`` in the positive orthant, the coefficients of ``x_k**i``
range (over the other exponents) between a minimum and a maximum.  The two
univariate polynomials built from those extremes sandwich the scaled values of
``f``, so their sign patterns give lower and upper bounds on the ``k``-th
coordinate of every positive zero of ``f``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np

from .homography import Homography, Step, shift_step, split_matrices, transform
from .state import SystemState, _push_shift, _push_split
from .tensorpoly import TensorPoly, evaluate, partial_derivative
from . import unicf

__all__ = [
    "AxisBounds",
    "projection_lower",
    "projection_upper",
    "axis_bounds",
    "system_bounds",
    "integer_shift",
    "reduce",
    "ReduceResult",
    "jacobian_at_ones",
    "center_point",
    "jacobian_at",
    "precondition_polys",
    "precondition",
    "scale_spread",
]

INF = math.inf


@dataclass(frozen=True)
class AxisBounds:
    """Every positive zero satisfies ``mu <= x_k <= M``.

    ``mu_strict`` / ``M_strict`` sharpen the inequality to a strict one.  The
    defaults (0, inf) carry no information.
    """

    mu: Fraction | float = Fraction(0)
    M: Fraction | float = INF
    mu_strict: bool = False
    M_strict: bool = False

    @property
    def empty(self) -> bool:
        if self.mu == INF or self.M <= 0:
            return True
        if self.mu > self.M:
            return True
        return self.mu == self.M and (self.mu_strict or self.M_strict)

    def intersect(self, other: "AxisBounds") -> "AxisBounds":
        if other.mu > self.mu:
            mu, ms = other.mu, other.mu_strict
        elif other.mu < self.mu:
            mu, ms = self.mu, self.mu_strict
        else:
            mu, ms = self.mu, self.mu_strict or other.mu_strict
        if other.M < self.M:
            M, Ms = other.M, other.M_strict
        elif other.M > self.M:
            M, Ms = self.M, self.M_strict
        else:
            M, Ms = self.M, self.M_strict or other.M_strict
        return AxisBounds(mu, M, ms, Ms)


# -- projections ------------------------------------------------------------


def _other_axes(f: TensorPoly, k: int) -> tuple[int, ...]:
    return tuple(s for s in range(f.nvars) if s != k)


def _bernstein_weights(f: TensorPoly, k: int, H: Homography) -> np.ndarray:
    w = np.ones(f.coeffs.shape, dtype=object)
    for s in _other_axes(f, k):
        m = H.axes[s]
        if m.gamma <= 0 or m.delta <= 0:
            continue
        d = f.degrees[s]
        vec = np.empty(d + 1, dtype=object)
        vec[:] = [math.comb(d, i) * m.gamma**i * m.delta ** (d - i) for i in range(d + 1)]
        shape = [1] * f.nvars
        shape[s] = d + 1
        w = w * vec.reshape(shape)
    return w


def _projection(f: TensorPoly, k: int, pick, H=None) -> list:
    if f.nvars == 1:
        raise ValueError("projection bounds need at least two variables")
    c = f.coeffs
    if H is not None:
        w = _bernstein_weights(f, k, H)
        c = np.vectorize(Fraction, otypes=[object])(c, w)
    slabs = np.moveaxis(c, k, 0).reshape(f.degrees[k] + 1, -1)
    return [pick(row) for row in slabs]


def _as_int_poly(vals: list) -> list[int]:
    den = 1
    for v in vals:
        den = math.lcm(den, Fraction(v).denominator)
    return [int(Fraction(v) * den) for v in vals]


def projection_lower(f: TensorPoly, k: int, H: Homography | None = None) -> TensorPoly:
    """``m_k``: per power of ``x_k``, the smallest coefficient over the others.

    With ``H`` given, coefficients are first divided by the Bernstein weights of
    the bounded other axes of ``H`` (and the result scaled back to integers).
    """
    vals = _projection(f, k, min, H)
    return TensorPoly(_as_int_poly(vals), trim=False)


def projection_upper(f: TensorPoly, k: int, H: Homography | None = None) -> TensorPoly:
    """``M_k``: per power of ``x_k``, the largest coefficient over the others."""
    vals = _projection(f, k, max, H)
    return TensorPoly(_as_int_poly(vals), trim=False)


# -- bounds ----------------------------------------------------------------


def _low_sign(a: list[int]) -> int:
    for c in a:
        if c:
            return 1 if c > 0 else -1
    return 0


def _high_sign(a: list[int]) -> int:
    return _low_sign(a[::-1])


def _lower_from(a: list[int], strategy: str):
    """``(mu, strict)`` with ``a`` negative-definite-near-0 made positive-first.

    ``a`` has a positive lowest coefficient here; zeros of the enveloped
    polynomial satisfy ``x >= first positive root of a``.
    """
    if strategy == "cauchy":
        lb = unicf.positive_root_lower_bound(a)
        return (INF, False) if lb == INF else (Fraction(lb), False)
    root = unicf.min_positive_root(a)
    if root is None:
        return INF, False
    if root.exact:
        return root.lower, False
    k, root = unicf.floor_of_root(list(unicf.squarefree_part(a)), root)
    if root.exact:
        return root.lower, False
    return root.lower, True


def _upper_from(a: list[int], strategy: str):
    """``(M, strict)``; ``a`` is positive at infinity and zeros need ``a <= 0``."""
    if strategy == "cauchy":
        ub = unicf.positive_root_upper_bound(a)
        return Fraction(ub), False
    root = unicf.max_positive_root(a)
    if root is None:
        return Fraction(0), False
    if root.exact:
        return root.upper, False
    return root.upper, True


def axis_bounds(
    f: TensorPoly,
    k: int,
    strategy: str = "exact",
    *,
    upper: bool = True,
    H: Homography | None = None,
) -> AxisBounds:
    """Bounds on ``x_k`` over the positive zeros of ``f``.

    The lower bound comes from whichever envelope is negative (``M_k``) or
    positive (``m_k``) near ``x_k = 0``; the upper bound symmetrically from
    the signs near infinity.  ``mu = inf`` or ``M = 0`` certify that ``f`` has
    no zero in the open orthant.
    """
    if f.is_zero:
        raise ValueError("zero polynomial")
    if f.nvars == 1:
        lo = hi = list(f.flat)
    else:
        lo = list(projection_lower(f, k, H).flat)
        hi = list(projection_upper(f, k, H).flat)
    # unless the envelopes coincide, f / S lies strictly between them, so a
    # root of an envelope is never a coordinate of a zero of f
    tight = lo == hi
    mu, mus = Fraction(0), False
    if _low_sign(hi) < 0:
        mu, mus = _lower_from([-c for c in hi], strategy)
    elif _low_sign(lo) > 0:
        mu, mus = _lower_from(lo, strategy)
    M, Ms = INF, False
    if upper and mu != INF:
        if _high_sign(hi) < 0:
            M, Ms = _upper_from([-c for c in hi], strategy)
        elif _high_sign(lo) > 0:
            M, Ms = _upper_from(lo, strategy)
    if not tight:
        mus = mus or (mu != 0 and mu != INF)
        Ms = Ms or M != INF
    return AxisBounds(mu, M, mus, Ms)


def system_bounds(polys: Sequence[TensorPoly], k: int, strategy: str = "exact", **kw) -> AxisBounds:
    """Intersection of the per-polynomial bounds on axis ``k``."""
    acc = AxisBounds()
    for f in polys:
        if f.is_zero:
            continue
        acc = acc.intersect(axis_bounds(f, k, strategy, **kw))
        if acc.empty:
            break
    return acc


def integer_shift(b: AxisBounds) -> int:
    """Largest integer strictly below every admissible coordinate."""
    if b.mu == INF:
        raise ValueError("empty bounds")
    if b.mu_strict:
        return max(0, math.floor(b.mu))
    return max(0, math.ceil(b.mu) - 1)


# -- reduction -------------------------------------------------------------


@dataclass(frozen=True)
class ReduceResult:
    state: SystemState
    shifts: tuple[int, ...]
    bounds: tuple[AxisBounds, ...]
    empty_axis: int | None = None
    guide: tuple[TensorPoly, ...] | None = None

    @property
    def progress(self) -> bool:
        return any(self.shifts)

    @property
    def empty(self) -> bool:
        return self.empty_axis is not None


def reduce(
    state: SystemState,
    strategy: str = "exact",
    *,
    upper: bool = False,
    guide: Sequence[TensorPoly] | None = None,
    projection: str = "plain",
) -> ReduceResult:
    """Shift every axis by the integer part of its lower bound.

    Bounds are computed on ``guide`` (defaults to the state's polynomials,
    typically a preconditioned copy) and the same shifts are applied to both
    lists.  With ``upper`` set, an axis whose shifted upper bound is below 1
    is narrowed to its lower unit child.
    """
    polys = list(state.polys if guide is None else guide)
    Hproj = state.H if projection == "bernstein" else None
    bounds = []
    for k in range(state.nvars):
        b = system_bounds(polys, k, strategy, upper=upper, H=Hproj)
        bounds.append(b)
        if b.empty:
            return ReduceResult(state, (0,) * state.nvars, tuple(bounds), k, tuple(polys))
    shifts = tuple(integer_shift(b) for b in bounds)
    steps: list[Step] = [shift_step(k, l) for k, l in enumerate(shifts) if l]
    trace = tuple(_push_shift(t, l) for t, l in zip(state.trace, shifts))
    if upper:
        for k, b in enumerate(bounds):
            # only a bound below 1 is used: it is then the lower unit child,
            # so the split geometry and the quotient trace stay intact
            top = b.M - shifts[k]
            if top < 1 or (top == 1 and b.M_strict):
                steps.append(Step(k, split_matrices(1)[0]))
                trace = trace[:k] + (_push_split(trace[k]),) + trace[k + 1 :]
    if not steps:
        return ReduceResult(state, shifts, tuple(bounds), None, tuple(polys))
    new = state.with_steps(steps, trace=trace)
    if guide is not None:
        polys, _ = transform(steps, polys, state.H)
    else:
        polys = list(new.polys)
    return ReduceResult(new, shifts, tuple(bounds), None, tuple(polys))


# -- preconditioning ---------------------------------------------------------


def jacobian_at_ones(polys: Sequence[TensorPoly]) -> list[list[int]]:
    """Jacobian of the system at the local point ``(1, ..., 1)``.

    ``d/dx_j f (1,...,1)`` is the sum of ``i_j * c_i`` over all coefficients.
    """
    out = []
    for f in polys:
        row = []
        c = f.coeffs
        for j in range(f.nvars):
            shape = [1] * f.nvars
            shape[j] = c.shape[j]
            idx = np.arange(c.shape[j], dtype=object).reshape(shape)
            row.append(int((c * idx).sum()) if c.size else 0)
        out.append(row)
    return out


def _inverse(mat: list[list[int]]) -> list[list[Fraction]] | None:
    n = len(mat)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                fct = a[r][col]
                a[r] = [x - fct * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def _lift(f: TensorPoly, H: Homography, degrees: Sequence[int]) -> TensorPoly:
    """Multiply by ``(gamma_k x_k + delta_k)**(D_k - d_k)`` to reach ``degrees``."""
    for k, D in enumerate(degrees):
        extra = D - f.degrees[k]
        if extra <= 0:
            continue
        m = H.axes[k]
        terms = {}
        for i in range(extra + 1):
            exps = [0] * f.nvars
            exps[k] = i
            terms[tuple(exps)] = math.comb(extra, i) * m.gamma**i * m.delta ** (extra - i)
        deg = [0] * f.nvars
        deg[k] = extra
        f = f * TensorPoly.from_terms(terms, f.nvars, deg)
    return f


def center_point(H: Homography) -> tuple[Fraction, ...]:
    """A fixed interior point of ``box(H)``: the midpoint of every bounded side.

    Along a bounded axis the local preimage of the midpoint is ``delta/gamma``;
    along an unbounded axis the image of local 1 is used.
    """
    pts = []
    for m in H.axes:
        if m.gamma != 0 and m.delta != 0:
            pts.append(m(Fraction(abs(m.delta), abs(m.gamma))))
        else:
            pts.append(m(1))
    return tuple(pts)


def jacobian_at(system: Sequence[TensorPoly], point: Sequence[Fraction]) -> list[list[Fraction]]:
    n = len(point)
    return [[evaluate(partial_derivative(f, j), point) for j in range(n)] for f in system]


def precondition_polys(
    polys: Sequence[TensorPoly],
    H: Homography,
    originals: Sequence[TensorPoly] | None = None,
    *,
    point: Sequence[Fraction] | None = None,
):
    """``J^-1 * F`` for a Jacobian ``J`` taken inside the box.

    With ``originals`` (the untransformed system, ``polys[i] = H(originals[i])``)
    ``J`` is the Jacobian of the originals at :func:`center_point`; otherwise
    it is the Jacobian of ``polys`` at local ``(1, ..., 1)``.  An explicit
    ``point`` (in the coordinates of the originals) overrides both.  The transformed
    polynomials are lifted to common degrees first, so each row of the result
    is again the transform of a combination of the original polynomials.
    Returns ``(polys, ok)``; ``ok`` is False (and the input returned) when
    the system is not square or ``J`` is singular.
    """
    polys = list(polys)
    n = H.nvars
    if len(polys) != n:
        return polys, False
    if point is not None:
        jac = jacobian_at(polys if originals is None else originals, point)
    elif originals is not None:
        jac = jacobian_at(originals, center_point(H))
    else:
        jac = jacobian_at_ones(polys)
    inv = _inverse(jac)
    if inv is None:
        return polys, False
    degs = [max(f.degrees[k] for f in polys) for k in range(n)]
    lifted = [_lift(f, H, degs) for f in polys]
    out = []
    for row in inv:
        den = 1
        for v in row:
            den = math.lcm(den, v.denominator)
        acc = None
        for v, g in zip(row, lifted):
            if v == 0:
                continue
            term = g * int(v * den)
            acc = term if acc is None else acc + term
        out.append(acc.primitive())
    return out, True


def precondition(state: SystemState) -> tuple[SystemState, bool]:
    """State whose polynomials are replaced by their preconditioned versions."""
    polys, ok = precondition_polys(state.polys, state.H, state.originals)
    if not ok:
        return state, False
    return replace(state, polys=tuple(polys)), True


# -- spreading ---------------------------------------------------------------


def scale_spread(system: Sequence[TensorPoly], ell: int) -> list[TensorPoly]:
    """Substitute ``x_k -> x_k / 2**ell`` and clear denominators.

    Coefficient ``c_i`` becomes ``c_i * 2**(ell * sum_k (d_k - i_k))``, so every
    root is multiplied by ``2**ell``.
    """
    if ell < 0:
        raise ValueError("spread exponent must be nonnegative")
    if ell == 0:
        return list(system)
    out = []
    for f in system:
        arr = np.empty(f.coeffs.shape, dtype=object)
        for idx, c in np.ndenumerate(f.coeffs):
            arr[idx] = c << (ell * sum(d - i for d, i in zip(f.degrees, idx)))
        out.append(TensorPoly(arr).primitive())
    return out
