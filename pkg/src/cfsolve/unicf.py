"""Univariate continued-fraction root isolation over the integers.

Polynomials are handled as coefficient lists, constant term first.  Every
public function also accepts a one-variable :class:`TensorPoly`.

The isolation engine walks the tree of Moebius maps ``x = (a*y + b)/(c*y + d)``
generated by integer shifts ``y -> y + l`` and the split ``y -> 1/(1 + y)``,
using Descartes' rule of signs as inclusion/exclusion criterion.  The tree is
explored depth first, left to right in ``x``, so roots come out sorted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .tensorpoly import TensorPoly

__all__ = [
    "RootInterval",
    "CFExpansion",
    "IsolationDepthError",
    "sign_variations",
    "positive_root_upper_bound",
    "positive_root_lower_bound",
    "integer_lower_bound",
    "min_positive_root",
    "max_positive_root",
    "isolate_positive_roots",
    "refine_root",
    "floor_of_root",
    "push_quotient",
    "cf_of_rational",
    "cf_of_interval",
    "simplest_rational",
    "root_expansion",
    "squarefree_part",
    "poly_gcd",
]

DEFAULT_MAX_STEPS = 128


class IsolationDepthError(RuntimeError):
    """Raised when a root needs more continued-fraction steps than allowed."""


@dataclass(frozen=True, order=True)
class RootInterval:
    """Interval ``(lower, upper)`` holding exactly one root.

    When ``exact`` is set the root is the rational ``lower == upper``;
    otherwise the root lies strictly inside the open interval.
    """

    lower: Fraction
    upper: Fraction
    exact: bool = False

    def __contains__(self, x) -> bool:
        if self.exact:
            return x == self.lower
        return self.lower < x < self.upper


# -- coefficient list helpers --------------------------------------------


def _coeffs(f) -> list[int]:
    if isinstance(f, TensorPoly):
        if f.nvars != 1:
            raise ValueError("expected a univariate polynomial")
        a = list(f.flat)
    else:
        a = [int(c) for c in f]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [0]


def _is_zero(a: Sequence[int]) -> bool:
    return all(c == 0 for c in a)


def sign_variations(coeffs) -> int:
    """Number of sign changes in the sequence of nonzero coefficients."""
    count = 0
    last = 0
    for c in coeffs:
        if c == 0:
            continue
        if last and (c > 0) != (last > 0):
            count += 1
        last = c
    return count


def _taylor_shift(a: list[int], c: int) -> list[int]:
    a = list(a)
    if c == 0:
        return a
    d = len(a) - 1
    for i in range(d):
        for j in range(d - 1, i - 1, -1):
            a[j] += c * a[j + 1]
    return a


def _evaluate(a: Sequence[int], x: Fraction) -> Fraction:
    r = Fraction(0)
    for c in reversed(a):
        r = r * x + c
    return r


def _sign_at(a: Sequence[int], x: Fraction) -> int:
    v = _evaluate(a, x)
    return (v > 0) - (v < 0)


def _sign_right(a: Sequence[int], x: Fraction) -> int:
    """Sign of squarefree ``a`` just to the right of ``x``."""
    s = _sign_at(a, x)
    return s if s else _sign_at(_derivative(a), x)


def _strip_x(a: list[int]) -> list[int]:
    i = 0
    while i < len(a) - 1 and a[i] == 0:
        i += 1
    return a[i:]


def _derivative(a: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(a)][1:] or [0]


def _primitive(a: Sequence) -> list[int]:
    """Scale a rational coefficient list to a primitive integer list, leading term > 0."""
    den = 1
    for c in a:
        den = den * Fraction(c).denominator // math.gcd(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in a]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    if g == 0:
        return [0]
    ints = [c // g for c in ints]
    while len(ints) > 1 and ints[-1] == 0:
        ints.pop()
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    lb = b[-1]
    while len(a) >= len(b) and not _is_zero(a):
        q = a[-1] / lb
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        while len(a) > 1 and a[-1] == 0:
            a.pop()
    return a


def poly_gcd(a, b) -> list[int]:
    """Primitive gcd of two integer polynomials (coefficient lists)."""
    a = _coeffs(a)
    b = _coeffs(b)
    if _is_zero(a):
        return _primitive(b) if not _is_zero(b) else [0]
    if _is_zero(b):
        return _primitive(a)
    x = [Fraction(c) for c in _primitive(a)]
    y = [Fraction(c) for c in _primitive(b)]
    while not _is_zero(y):
        x, y = y, [Fraction(c) for c in _primitive(_poly_rem(x, y))]
    return _primitive(x)


def _poly_div_exact(a: list[int], b: list[int]) -> list[int]:
    num = [Fraction(c) for c in a]
    quot = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(num) >= len(b) and not _is_zero(num):
        q = num[-1] / b[-1]
        shift = len(num) - len(b)
        quot[shift] = q
        for i, c in enumerate(b):
            num[shift + i] -= q * c
        num.pop()
    return _primitive(quot)


def squarefree_part(f) -> list[int]:
    """Primitive squarefree part ``f / gcd(f, f')``."""
    a = _coeffs(f)
    if len(a) <= 2:
        return _primitive(a) if not _is_zero(a) else [0]
    g = poly_gcd(a, _derivative(a))
    if len(g) == 1:
        return _primitive(a)
    return _poly_div_exact(a, g)


# -- root bounds ---------------------------------------------------------


def _ceil_log2(r: Fraction) -> int:
    """Smallest ``t`` with ``2**t >= r`` for rational ``r > 0``."""
    p, q = r.numerator, r.denominator
    t = p.bit_length() - q.bit_length()
    while (q << t if t >= 0 else q) < (p if t >= 0 else p << -t):
        t += 1
    while (q << (t - 1) if t - 1 >= 0 else q) >= (p if t - 1 >= 0 else p << (1 - t)):
        t -= 1
    return t


def positive_root_upper_bound(f) -> Fraction:
    """Power-of-two upper bound on the positive roots (Kioustelidis type).

    Returns 0 when the coefficients show that there is no positive root.
    """
    a = _coeffs(f)
    d = len(a) - 1
    if a[-1] < 0:
        a = [-c for c in a]
    lead = a[-1]
    best = None
    for i in range(d):
        if a[i] < 0:
            m = d - i
            t = _ceil_log2(Fraction(-a[i], lead))
            e = -((-t) // m)
            best = e if best is None else max(best, e)
    if best is None:
        return Fraction(0)
    return Fraction(2) ** (best + 1)


def positive_root_lower_bound(f) -> Fraction:
    """Lower bound on the positive roots, from the bound of the reciprocal.

    Returns ``math.inf`` when no positive root can exist.
    """
    a = _strip_x(_coeffs(f))
    ub = positive_root_upper_bound(a[::-1])
    if ub == 0:
        return math.inf
    return 1 / ub


def _floor_lower_bound(a: list[int]) -> int:
    lb = positive_root_lower_bound(a)
    if lb == math.inf:
        return 0
    return math.floor(lb)


# -- isolation engine ----------------------------------------------------


def _iter_roots(a: tuple[int, ...], max_steps: int) -> Iterator[RootInterval]:
    f = _strip_x(list(a))
    if len(f) <= 1:
        return
    stack: list = [("region", f, (1, 0, 0, 1), 0)]
    while stack:
        item = stack.pop()
        if item[0] == "point":
            yield RootInterval(item[1], item[1], True)
            continue
        _, f, (a_, b_, c_, d_), steps = item
        v = sign_variations(f)
        if v == 0:
            continue
        if v == 1 and len(f) == 2:
            y = Fraction(-f[0], f[1])
            yield RootInterval((a_ * y + b_) / (c_ * y + d_), (a_ * y + b_) / (c_ * y + d_), True)
            continue
        if v == 1:
            lo = Fraction(b_, d_)
            if c_ == 0:
                bound = positive_root_upper_bound(f)
                hi = (a_ * bound + b_) / (c_ * bound + d_)
            else:
                hi = Fraction(a_, c_)
            yield RootInterval(min(lo, hi), max(lo, hi))
            continue
        if steps >= max_steps:
            raise IsolationDepthError(
                f"root isolation exceeded {max_steps} continued-fraction steps"
            )
        increasing = a_ * d_ - b_ * c_ > 0
        lb = _floor_lower_bound(f)
        if lb >= 1:
            f = _taylor_shift(f, lb)
            b_, d_ = a_ * lb + b_, c_ * lb + d_
            region = ("region", f, (a_, b_, c_, d_), steps + 1)
            if f[0] == 0:
                point = ("point", Fraction(b_, d_))
                region = ("region", _strip_x(f), (a_, b_, c_, d_), steps + 1)
                seq = [point, region] if increasing else [region, point]
                stack.extend(reversed(seq))
            else:
                stack.append(region)
            continue
        upper = _taylor_shift(f, 1)
        lower = _taylor_shift(f[::-1], 1)
        up_map = (a_, a_ + b_, c_, c_ + d_)
        lo_map = (b_, a_ + b_, d_, c_ + d_)
        seq = [("region", lower, lo_map, steps + 1)]
        if upper[0] == 0:
            seq = [
                ("region", _strip_x(lower), lo_map, steps + 1),
                ("point", Fraction(a_ + b_, c_ + d_)),
            ]
            upper = _strip_x(upper)
        seq.append(("region", upper, up_map, steps + 1))
        if not increasing:
            seq.reverse()
        stack.extend(reversed(seq))


@lru_cache(maxsize=65536)
def _all_roots(a: tuple[int, ...], max_steps: int) -> tuple[RootInterval, ...]:
    return tuple(_iter_roots(a, max_steps))


@lru_cache(maxsize=65536)
def _first_root(a: tuple[int, ...], max_steps: int) -> RootInterval | None:
    return next(_iter_roots(a, max_steps), None)


def _prepared(f) -> tuple[int, ...]:
    a = _coeffs(f)
    if _is_zero(a):
        raise ValueError("zero polynomial has no isolated roots")
    return tuple(squarefree_part(_strip_x(a)))


def isolate_positive_roots(f, max_steps: int = DEFAULT_MAX_STEPS) -> list[RootInterval]:
    """Isolating intervals of all positive real roots, in increasing order."""
    return list(_all_roots(_prepared(f), max_steps))


def refine_root(f, root: RootInterval, *, until=None, width=None) -> RootInterval:
    """Bisect an isolating interval until ``until(interval)`` holds or it is
    narrower than ``width``.  ``f`` must change sign across the root."""
    if root.exact:
        return root
    a = list(_prepared(f))
    lo, hi = root.lower, root.upper
    s_lo = _sign_right(a, lo)

    def done():
        cur = RootInterval(lo, hi)
        if until is not None and until(cur):
            return True
        if width is not None and hi - lo <= width:
            return True
        return until is None and width is None

    while not done():
        mid = (lo + hi) / 2
        s = _sign_at(a, mid)
        if s == 0:
            return RootInterval(mid, mid, True)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return RootInterval(lo, hi)


def min_positive_root(f, max_steps: int = DEFAULT_MAX_STEPS) -> RootInterval | None:
    """Isolating interval of the smallest positive root, or None."""
    return _first_root(_prepared(f), max_steps)


def max_positive_root(f, max_steps: int = DEFAULT_MAX_STEPS) -> RootInterval | None:
    """Isolating interval of the largest positive root, or None.

    Computed as the reciprocal of the smallest root of the reversed polynomial.
    """
    a = _prepared(f)
    rev = _strip_x(list(a))[::-1]
    r = _first_root(tuple(squarefree_part(rev)), max_steps)
    if r is None:
        return None
    if r.exact:
        return RootInterval(1 / r.lower, 1 / r.lower, True)
    if r.lower == 0:
        r = refine_root(rev, r, until=lambda iv: iv.lower > 0)
        if r.exact:
            return RootInterval(1 / r.lower, 1 / r.lower, True)
    return RootInterval(1 / r.upper, 1 / r.lower)


def floor_of_root(a: list[int], root: RootInterval) -> tuple[int, RootInterval]:
    """Exact ``floor`` of the root isolated by ``root`` (sign change required)."""
    if root.exact:
        return math.floor(root.lower), root
    a = squarefree_part(_strip_x(list(a)))
    lo, hi = root.lower, root.upper
    s_lo = _sign_right(a, lo)
    while True:
        k = math.floor(lo)
        if hi <= k + 1:
            return k, RootInterval(lo, hi)
        # test an integer strictly inside (lo, hi)
        m = k + 1 if hi - lo <= 2 else math.floor((lo + hi) / 2)
        if m <= lo:
            m = k + 1
        s = _sign_at(a, Fraction(m))
        if s == 0:
            return m, RootInterval(Fraction(m), Fraction(m), True)
        if s == s_lo:
            lo = Fraction(m)
        else:
            hi = Fraction(m)


def integer_lower_bound(f, strategy: str = "exact", max_steps: int = DEFAULT_MAX_STEPS):
    """Integer lower bound on the positive roots of ``f``.

    ``"exact"`` returns ``floor`` of the smallest positive root; ``"cauchy"``
    returns ``floor`` of a cheap coefficient bound.  Both return ``math.inf``
    when ``f`` has no positive root (for ``"cauchy"``: when Descartes' rule
    proves it).
    """
    a = _coeffs(f)
    if _is_zero(a):
        raise ValueError("zero polynomial")
    if strategy == "cauchy":
        lb = positive_root_lower_bound(a)
        return lb if lb == math.inf else math.floor(lb)
    if strategy != "exact":
        raise ValueError(f"unknown bound strategy {strategy!r}")
    root = min_positive_root(a, max_steps)
    if root is None:
        return math.inf
    return floor_of_root(list(_prepared(a)), root)[0]


# -- continued fractions -------------------------------------------------


@dataclass(frozen=True)
class CFExpansion:
    """Partial quotients with their convergents ``P_i / Q_i``."""

    quotients: tuple[int, ...] = ()
    P: tuple[int, ...] = field(default=(), repr=False)
    Q: tuple[int, ...] = field(default=(), repr=False)

    @classmethod
    def from_quotients(cls, quotients) -> "CFExpansion":
        e = cls()
        for c in quotients:
            e = push_quotient(e, c)
        return e

    @property
    def convergents(self) -> list[Fraction]:
        return [Fraction(p, q) for p, q in zip(self.P, self.Q)]

    @property
    def value(self) -> Fraction:
        return Fraction(self.P[-1], self.Q[-1])

    def __len__(self):
        return len(self.quotients)


def push_quotient(e: CFExpansion, c: int) -> CFExpansion:
    """Append a partial quotient and extend the convergent recurrences."""
    c = int(c)
    n = len(e.quotients)
    if n > 0 and c < 1:
        raise ValueError("partial quotients after the first must be >= 1")
    p1, q1 = (e.P[-1], e.Q[-1]) if n else (1, 0)
    p2, q2 = (e.P[-2], e.Q[-2]) if n > 1 else ((1, 0) if n == 1 else (0, 1))
    return CFExpansion(e.quotients + (c,), e.P + (c * p1 + p2,), e.Q + (c * q1 + q2,))


def cf_of_rational(x) -> list[int]:
    """Finite continued fraction of a rational number."""
    x = Fraction(x)
    out = []
    while True:
        a = math.floor(x)
        out.append(a)
        x -= a
        if x == 0:
            return out
        x = 1 / x


def cf_of_interval(lo, hi, max_terms: int = 64) -> list[int]:
    """Partial quotients shared by every number strictly inside ``(lo, hi)``."""
    out: list[int] = []
    lo, hi = Fraction(lo), hi if hi == math.inf else Fraction(hi)
    while len(out) < max_terms:
        if hi == math.inf:
            break
        a = math.floor(lo)
        if hi > a + 1:
            break
        out.append(a)
        lo, hi = lo - a, hi - a
        if lo == 0:
            break
        lo, hi = 1 / hi, 1 / lo
    return out


def root_expansion(f, root: RootInterval, terms: int) -> CFExpansion:
    """First ``terms`` partial quotients of the root isolated by ``root``.

    Stops early if the root turns out to be rational.
    """
    g = list(_prepared(f))
    e = CFExpansion()
    cur = root
    while len(e) < terms:
        if cur.exact:
            for c in cf_of_rational(cur.lower)[: terms - len(e)]:
                e = push_quotient(e, c)
            break
        c, cur = floor_of_root(g, cur)
        e = push_quotient(e, c)
        if cur.exact:
            break
        g = _taylor_shift(g, c) if c >= 0 else _shift_signed(g, c)
        cur = RootInterval(cur.lower - c, cur.upper - c)
        if cur.lower == 0:
            cur = refine_root(g, cur, until=lambda iv: iv.lower > 0)
        g = _strip_x(g)[::-1]
        cur = RootInterval(1 / cur.upper, 1 / cur.lower, True) if cur.exact else RootInterval(1 / cur.upper, 1 / cur.lower)
    return e


def _shift_signed(a: list[int], c: int) -> list[int]:
    # x -> x + c for negative c: mirror, shift by -c, mirror back
    mirrored = [v if i % 2 == 0 else -v for i, v in enumerate(a)]
    shifted = _taylor_shift(mirrored, -c)
    return [v if i % 2 == 0 else -v for i, v in enumerate(shifted)]


def simplest_rational(lo, hi, open: bool = False) -> Fraction:
    """Rational with the smallest denominator in ``[lo, hi]`` (or ``(lo, hi)``)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi or (open and lo == hi):
        raise ValueError("empty interval")
    if not open:
        if lo <= 0 <= hi:
            return Fraction(0)
        if hi < 0:
            return -simplest_rational(-hi, -lo)
        a = math.ceil(lo)
        if a <= hi:
            return Fraction(a)
        a = math.floor(lo)
        # lo and hi share the integer part a and neither is an integer
        return a + 1 / simplest_rational(1 / (hi - a), 1 / (lo - a))
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_rational(-hi, -lo, open=True)
    a = math.floor(lo) + 1
    if a < hi:
        return Fraction(a)
    a -= 1
    if lo == a:
        return a + Fraction(1, math.floor(1 / (hi - a)) + 1)
    return a + 1 / simplest_rational(1 / (hi - a), 1 / (lo - a), open=True)
