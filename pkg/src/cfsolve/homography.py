"""Per-axis Moebius maps identifying a box with the positive orthant.

Each axis carries an integer matrix ``[[alpha, beta], [gamma, delta]]`` acting
as ``x -> (alpha*x + beta) / (gamma*x + delta)``.  The transformed polynomial
of ``f`` is ``prod_k (gamma_k x_k + delta_k)**d_k * f(H(x))``; its positive
zeros are in bijection with the zeros of ``f`` inside ``box(H)``.

Steps compose on the right: applying the step matrix ``S`` to an axis map
``A`` gives ``A @ S``, and the polynomial is transformed by the same ``S``.
Quadruples are never divided by their gcd, so the evaluation identity above
holds exactly for every map produced here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .tensorpoly import (
    TensorPoly,
    contract_axis,
    mobius_axis,
    reciprocal_axis,
    shift_axis,
)

__all__ = [
    "AxisMap",
    "DomainBox",
    "Homography",
    "Step",
    "shift_step",
    "reciprocal_step",
    "contraction_step",
    "mobius_step",
    "apply_step",
    "transform",
    "apply_homography",
    "for_box",
    "box",
    "split_axis",
    "subdivide",
    "bernstein_coeffs",
]

INF = math.inf


def _endpoint(num: int, den: int):
    return INF if den == 0 else Fraction(num, den)


@dataclass(frozen=True)
class AxisMap:
    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        if self.alpha * self.delta - self.beta * self.gamma == 0:
            raise ValueError("singular axis map")

    @classmethod
    def identity(cls) -> "AxisMap":
        return cls(1, 0, 0, 1)

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return (self.alpha, self.beta), (self.gamma, self.delta)

    @property
    def determinant(self) -> int:
        return self.alpha * self.delta - self.beta * self.gamma

    @property
    def increasing(self) -> bool:
        """True when the map preserves orientation on the positive half line."""
        return self.determinant > 0

    def compose(self, a: int, b: int, c: int, d: int) -> "AxisMap":
        """``self @ [[a, b], [c, d]]``."""
        return AxisMap(
            self.alpha * a + self.beta * c,
            self.alpha * b + self.beta * d,
            self.gamma * a + self.delta * c,
            self.gamma * b + self.delta * d,
        )

    def __call__(self, x) -> Fraction | float:
        if x == INF:
            return _endpoint(self.alpha, self.gamma)
        x = Fraction(x)
        den = self.gamma * x + self.delta
        if den == 0:
            return INF
        return (self.alpha * x + self.beta) / den

    def inverse(self, y) -> Fraction | float:
        """Preimage of ``y`` on the extended half line."""
        if y == INF:
            return _endpoint(-self.delta, self.gamma) if self.gamma else INF
        y = Fraction(y)
        den = self.alpha - self.gamma * y
        if den == 0:
            return INF
        return (self.delta * y - self.beta) / den

    def interval(self) -> tuple:
        """The sorted image of ``[0, inf]``."""
        a = _endpoint(self.beta, self.delta)
        b = _endpoint(self.alpha, self.gamma)
        return (a, b) if a <= b else (b, a)


class DomainBox:
    """Axis-aligned box with rational lower and rational or infinite upper ends."""

    __slots__ = ("_iv",)

    def __init__(self, intervals: Sequence[tuple]):
        iv = []
        for lo, hi in intervals:
            if lo == INF or lo == -INF:
                raise ValueError("lower endpoints must be finite")
            lo = Fraction(lo)
            hi = INF if hi == INF else Fraction(hi)
            if hi == -INF or lo > hi:
                raise ValueError(f"empty interval [{lo}, {hi}]")
            iv.append((lo, hi))
        self._iv = tuple(iv)

    @classmethod
    def orthant(cls, n: int) -> "DomainBox":
        return cls([(0, INF)] * n)

    @property
    def intervals(self) -> tuple:
        return self._iv

    @property
    def nvars(self) -> int:
        return len(self._iv)

    @property
    def bounded(self) -> bool:
        return all(hi != INF for _, hi in self._iv)

    @property
    def lower(self) -> tuple[Fraction, ...]:
        return tuple(lo for lo, _ in self._iv)

    @property
    def upper(self) -> tuple:
        return tuple(hi for _, hi in self._iv)

    def contains(self, point, *, strict: bool = False) -> bool:
        for (lo, hi), x in zip(self._iv, point):
            if strict:
                if not lo < x < hi:
                    return False
            elif not lo <= x <= hi:
                return False
        return True

    def width(self, k: int):
        lo, hi = self._iv[k]
        return hi - lo

    def __iter__(self) -> Iterator[tuple]:
        return iter(self._iv)

    def __len__(self) -> int:
        return len(self._iv)

    def __getitem__(self, k: int) -> tuple:
        return self._iv[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, DomainBox) and self._iv == other._iv

    def __hash__(self) -> int:
        return hash(self._iv)

    def __repr__(self) -> str:
        return f"DomainBox({list(self._iv)!r})"

    def __str__(self) -> str:
        return " x ".join(f"[{lo}, {'inf' if hi == INF else hi}]" for lo, hi in self._iv)


@dataclass(frozen=True)
class Homography:
    axes: tuple[AxisMap, ...]

    @classmethod
    def identity(cls, n: int) -> "Homography":
        return cls((AxisMap.identity(),) * n)

    @property
    def nvars(self) -> int:
        return len(self.axes)

    def compose_axis(self, k: int, a: int, b: int, c: int, d: int) -> "Homography":
        axes = list(self.axes)
        axes[k] = axes[k].compose(a, b, c, d)
        return Homography(tuple(axes))

    def __call__(self, x: Sequence) -> tuple:
        return tuple(m(v) for m, v in zip(self.axes, x))

    def inverse(self, y: Sequence) -> tuple:
        return tuple(m.inverse(v) for m, v in zip(self.axes, y))

    def box(self) -> DomainBox:
        return DomainBox([m.interval() for m in self.axes])


def _as_fraction(x) -> Fraction:
    return Fraction(x)


def for_box(b: DomainBox) -> Homography:
    """Homography sending ``0 -> lower`` and ``inf -> upper`` on every axis."""
    axes = []
    for lo, hi in b:
        p, q = lo.numerator, lo.denominator
        if hi == INF:
            axes.append(AxisMap(q, p, 0, q) if q != 1 else AxisMap(1, p, 0, 1))
            continue
        if hi == lo:
            raise ValueError("degenerate interval")
        r, s = hi.numerator, hi.denominator
        alpha, beta, gamma, delta = r * q, p * s, s * q, q * s
        g = math.gcd(math.gcd(alpha, beta), math.gcd(gamma, delta))
        axes.append(AxisMap(alpha // g, beta // g, gamma // g, delta // g))
    return Homography(tuple(axes))


def box(H: Homography) -> DomainBox:
    return H.box()


# -- steps ----------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One generator (or composite) acting on a single axis as a 2x2 matrix."""

    axis: int
    matrix: tuple[int, int, int, int]
    kind: str = "M"
    param: int = 0


def shift_step(k: int, c: int) -> Step:
    if c < 0:
        raise ValueError("shift must be nonnegative")
    return Step(k, (1, c, 0, 1), "T", c)


def reciprocal_step(k: int) -> Step:
    return Step(k, (0, 1, 1, 0), "R")


def contraction_step(k: int, c: int) -> Step:
    if c < 1:
        raise ValueError("contraction factor must be >= 1")
    return Step(k, (c, 0, 0, 1), "C", c)


def mobius_step(k: int, a: int, b: int, c: int, d: int) -> Step:
    if a * d - b * c == 0:
        raise ValueError("singular step matrix")
    return Step(k, (a, b, c, d))


def apply_step(f: TensorPoly, step: Step) -> TensorPoly:
    k = step.axis
    if step.kind == "T":
        return shift_axis(f, k, step.param)
    if step.kind == "R":
        return reciprocal_axis(f, k)
    if step.kind == "C":
        return contract_axis(f, k, step.param)
    return mobius_axis(f, k, *step.matrix)


def transform(steps, polys: Sequence[TensorPoly], H: Homography):
    """Apply one step or a sequence of steps to polynomials and homography."""
    if isinstance(steps, Step):
        steps = [steps]
    polys = list(polys)
    for st in steps:
        polys = [apply_step(f, st) for f in polys]
        H = H.compose_axis(st.axis, *st.matrix)
    return polys, H


def apply_homography(f: TensorPoly, H: Homography) -> TensorPoly:
    """``prod_k (gamma_k x_k + delta_k)**d_k * f(H(x))``."""
    if H.nvars != f.nvars:
        raise ValueError("dimension mismatch")
    for k, m in enumerate(H.axes):
        if m != AxisMap.identity():
            f = mobius_axis(f, k, m.alpha, m.beta, m.gamma, m.delta)
    return f


# -- subdivision -----------------------------------------------------------


def split_matrices(point) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(lower, upper) step matrices splitting ``[0, inf)`` at ``p/q``.

    The lower child ``y -> p / (q*y + q)`` covers ``(0, p/q)`` and the upper
    child ``y -> y + p/q`` (scaled to ``(q*y + p)/q``) covers ``(p/q, inf)``.
    Both put the split point at local coordinate 0.
    """
    point = Fraction(point)
    p, q = point.numerator, point.denominator
    if p <= 0:
        raise ValueError("split point must be positive")
    return (0, p, q, q), (q, p, 0, q)


def split_axis(polys: Sequence[TensorPoly], H: Homography, k: int, point=1):
    """Split axis ``k`` at local coordinate ``point``; returns (lower, upper)."""
    lo_m, up_m = split_matrices(point)
    if point == 1:
        upper = transform(shift_step(k, 1), polys, H)
        lower = transform([reciprocal_step(k), shift_step(k, 1)], polys, H)
        return lower, upper
    return (
        transform(Step(k, lo_m), polys, H),
        transform(Step(k, up_m), polys, H),
    )


def subdivide(polys: Sequence[TensorPoly], H: Homography, axes=None, points=None):
    """Children of a split at local ``points`` along ``axes`` (default: all, at 1).

    Returns ``2**len(axes)`` triples ``(bits, polys, H)`` in binary counter
    order; bit ``j`` set means the lower child along ``axes[j]``.
    """
    n = H.nvars
    axes = list(range(n)) if axes is None else list(axes)
    points = [1] * len(axes) if points is None else list(points)
    children = [((), list(polys), H)]
    for k, pt in zip(axes, points):
        nxt = []
        for bits, ps, h in children:
            (lp, lh), (up, uh) = split_axis(ps, h, k, pt)
            nxt.append((bits + (0,), up, uh))
            nxt.append((bits + (1,), lp, lh))
        children = nxt
    out = [(sum(b << j for j, b in enumerate(bits)), ps, h) for bits, ps, h in children]
    out.sort(key=lambda t: t[0])
    return [(tuple((code >> j) & 1 for j in range(len(axes))), ps, h) for code, ps, h in out]


# -- Bernstein correspondence ------------------------------------------------


def bernstein_coeffs(f: TensorPoly, H: Homography) -> np.ndarray:
    """Bernstein coefficients of ``f`` over ``box(H)`` read off ``H(f)``.

    Index ``i`` along an axis refers to the Bernstein basis of the sorted
    interval ``[lower, upper]``.
    """
    if any(m.gamma == 0 or m.delta == 0 for m in H.axes):
        raise ValueError("Bernstein coefficients need a bounded box")
    hf = apply_homography(f, H)
    out = np.empty(hf.coeffs.shape, dtype=object)
    degs = hf.degrees
    for idx, c in np.ndenumerate(hf.coeffs):
        w = 1
        for k, i in enumerate(idx):
            m, d = H.axes[k], degs[k]
            w *= math.comb(d, i) * m.gamma**i * m.delta ** (d - i)
        out[idx] = Fraction(c, w)
    for k, m in enumerate(H.axes):
        if Fraction(m.beta, m.delta) > Fraction(m.alpha, m.gamma):
            out = np.flip(out, axis=k)
    return np.ascontiguousarray(out)
