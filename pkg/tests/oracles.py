"""Independent reference implementations used by the test-suite.

Nothing here imports the solver internals: the oracles work on sympy
expressions, plain Fractions and mpmath numbers.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from pathlib import Path

import mpmath
import sympy as sp

from cfsolve import parse_system
from cfsolve.tensorpoly import TensorPoly

DATA = Path(__file__).parent / "data"

X, Y = sp.symbols("x y")


def P(text: str, variables: str = "x,y") -> TensorPoly:
    """One polynomial from text over the given comma-separated variables."""
    names = [v.strip() for v in variables.split(",")]
    return parse_system(text, names).polys[0]


def system(text: str, variables: str = "x,y") -> list[TensorPoly]:
    names = [v.strip() for v in variables.split(",")]
    return list(parse_system(text, names).polys)


def load(name: str) -> list[TensorPoly]:
    return list(parse_system((DATA / name).read_text()).polys)


SIGMA1_TEXT = "x^2 + y^2 - x*y - 1; 10*x*y - 4"


# -- sympy bridges -------------------------------------------------------------


def to_sympy(f: TensorPoly, syms=None):
    syms = syms or sp.symbols(f"x0:{f.nvars}")
    expr = 0
    for exps, c in f.terms().items():
        term = sp.Integer(c)
        for s, e in zip(syms, exps):
            term *= s**e
        expr += term
    return sp.expand(expr)


def from_sympy(expr, syms) -> TensorPoly:
    poly = sp.Poly(sp.expand(expr), *syms)
    return TensorPoly.from_terms({m: int(c) for m, c in poly.terms()}, len(syms))


# -- univariate Sturm oracle ---------------------------------------------------


def _pdiv_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[-1] / b[-1]
        off = len(a) - len(b)
        for i, c in enumerate(b):
            a[off + i] -= q * c
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def _trim(a):
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a


def sturm_sequence(coeffs: list[int]) -> list[list[Fraction]]:
    """Sturm chain of the squarefree part (low-to-high coefficient lists)."""
    sq = sp.Poly(list(reversed(_trim(coeffs))), X).sqf_part().all_coeffs()[::-1]
    p0 = _trim([Fraction(int(c)) for c in sq])
    p1 = _trim([i * c for i, c in enumerate(p0)][1:] or [Fraction(0)])
    seq = [p0, p1]
    while any(seq[-1]) and len(seq[-1]) > 1:
        r = _pdiv_rem(seq[-2], seq[-1])
        if not any(r):
            break
        seq.append([-c for c in r])
    return seq


def _value(a, x: Fraction) -> Fraction:
    r = Fraction(0)
    for c in reversed(a):
        r = r * x + c
    return r


def _changes(seq, x: Fraction) -> int:
    signs = [v for v in (_value(p, x) for p in seq) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def sturm_count(coeffs: list[int], lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``."""
    seq = sturm_sequence(coeffs)
    return _changes(seq, Fraction(lo)) - _changes(seq, Fraction(hi))


def cauchy_bound(coeffs: list[int]) -> Fraction:
    a = _trim(coeffs)
    return 1 + Fraction(max(abs(c) for c in a[:-1]), abs(a[-1])) if len(a) > 1 else Fraction(1)


def positive_root_count(coeffs: list[int]) -> int:
    return sturm_count(coeffs, Fraction(0), cauchy_bound(coeffs))


def smallest_positive_root_floor(coeffs: list[int]):
    """floor of the smallest positive root by Sturm counts at integers, or inf."""
    if positive_root_count(coeffs) == 0:
        return math.inf
    k = 0
    while sturm_count(coeffs, Fraction(0), Fraction(k + 1)) == 0:
        k += 1
    # the smallest root lies in (k, k+1]
    at_end = _value([Fraction(c) for c in coeffs], Fraction(k + 1)) == 0
    inside = sturm_count(coeffs, Fraction(k), Fraction(k + 1)) - int(at_end)
    return k if inside else k + 1


def random_int_poly(rng: random.Random, max_deg: int = 8, bits: int = 16) -> list[int]:
    d = rng.randint(1, max_deg)
    lim = 2**bits
    a = [rng.randint(-lim, lim) for _ in range(d + 1)]
    if a[-1] == 0:
        a[-1] = rng.choice((-1, 1)) * rng.randint(1, lim)
    return a


def random_rooted_poly(rng: random.Random, max_deg: int = 8) -> list[int]:
    """Product of small integer linear/quadratic factors: many positive roots,
    rational roots and repeated roots show up often."""
    poly = [1]
    deg = 0
    target = rng.randint(1, max_deg)
    while deg < target:
        if rng.random() < 0.7 or target - deg < 2:
            p, q = rng.randint(-6, 9), rng.randint(1, 4)
            fac = [-p, q]
        else:
            fac = [rng.randint(-8, 8), rng.randint(-8, 8), rng.randint(1, 4)]
        out = [0] * (len(poly) + len(fac) - 1)
        for i, a in enumerate(poly):
            for j, b in enumerate(fac):
                out[i + j] += a * b
        poly = out
        deg = len(poly) - 1
    return poly


# -- bivariate root oracle -------------------------------------------------------


def real_roots_2d(polys, box=None, dps: int = 60):
    """Real common zeros of two bivariate polynomials.

    Candidates are pairs of real roots of the two eliminants; a pair is kept
    when both polynomials vanish to high precision.  Returns mpmath pairs.
    """
    f, g = (to_sympy(p, (X, Y)) if isinstance(p, TensorPoly) else p for p in polys)

    def roots_of(res, var):
        out = set()
        for fac, _m in sp.factor_list(res)[1]:
            if sp.Poly(fac, var).degree() < 1:
                continue
            for r in sp.Poly(fac, var).real_roots():
                out.add(sp.N(r, dps))
        return sorted(out)

    rx = sp.resultant(f, g, Y)
    ry = sp.resultant(f, g, X)
    if rx == 0 or ry == 0:
        raise ValueError("system is not zero-dimensional")
    xs = roots_of(rx, X)
    ys = roots_of(ry, Y)
    tol = sp.Float(10) ** (-(dps // 2))
    found = []
    fl = sp.lambdify((X, Y), f, "mpmath")
    gl = sp.lambdify((X, Y), g, "mpmath")
    with mpmath.workdps(dps):
        for xv in xs:
            for yv in ys:
                a, b = mpmath.mpf(str(xv)), mpmath.mpf(str(yv))
                if abs(fl(a, b)) < tol and abs(gl(a, b)) < tol:
                    found.append((a, b))
    if box is not None:
        found = [p for p in found if in_box(p, box, strict=False)]
    return found


def in_box(point, box, strict: bool = True) -> bool:
    with mpmath.workdps(60):
        for v, (lo, hi) in zip(point, box):
            lo = mpmath.mpf(lo.numerator) / lo.denominator
            hi = mpmath.inf if hi == math.inf else mpmath.mpf(hi.numerator) / hi.denominator
            if strict and not (lo < v < hi):
                return False
            if not strict and not (lo <= v <= hi):
                return False
    return True


def exact_in_box(point, box, strict: bool = True) -> bool:
    for v, (lo, hi) in zip(point, box):
        if strict and not (lo < v < hi):
            return False
        if not strict and not (lo <= v <= hi):
            return False
    return True


# -- random systems with known simple roots ------------------------------------


def _line(rng):
    while True:
        a, b = rng.randint(-4, 4), rng.randint(-4, 4)
        if a or b:
            return a, b, rng.randint(-6, 6)


def _meet(l1, l2):
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return (Fraction(-c1 * b2 + c2 * b1, det), Fraction(-a1 * c2 + a2 * c1, det))


def random_line_system(rng: random.Random):
    """{L1*L2, L3*L4} for random integer lines in general position.

    Returns ``(text, roots)`` where ``roots`` are the exact intersection points,
    all simple.  Lines are redrawn until no two are parallel or equal and no
    three are concurrent.
    """
    while True:
        lines = [_line(rng) for _ in range(4)]
        pts = {}
        ok = True
        for i in range(4):
            for j in range(i + 1, 4):
                p = _meet(lines[i], lines[j])
                if p is None:
                    ok = False
                    break
                pts.setdefault(p, []).append((i, j))
            if not ok:
                break
        if not ok or any(len(v) > 1 for v in pts.values()):
            continue
        roots = [p for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] for p in [_meet(lines[i], lines[j])]]
        fmt = lambda l: f"({l[0]}*x + {l[1]}*y + {l[2]})"
        text = f"{fmt(lines[0])}*{fmt(lines[1])}; {fmt(lines[2])}*{fmt(lines[3])}"
        return text, roots


def random_circle_system(rng: random.Random):
    """{circle, L1*L2}: irrational roots, found by the resultant oracle."""
    while True:
        a, b, r = rng.randint(-2, 2), rng.randint(-2, 2), rng.randint(1, 3)
        l1, l2 = _line(rng), _line(rng)
        if _meet(l1, l2) is None:
            continue
        fmt = lambda l: f"({l[0]}*x + {l[1]}*y + {l[2]})"
        text = f"(x - {a})^2 + (y - {b})^2 - {r * r}; {fmt(l1)}*{fmt(l2)}"
        polys = system(text)
        try:
            roots = real_roots_2d(polys)
        except ValueError:
            continue
        if len(roots) < 1:
            continue
        # demand simple roots: the Jacobian must not vanish at any root
        det = sp.Matrix([to_sympy(p, (X, Y)) for p in polys]).jacobian([X, Y]).det()
        dl = sp.lambdify((X, Y), det, "mpmath")
        with mpmath.workdps(60):
            if any(abs(dl(*p)) < mpmath.mpf(10) ** -20 for p in roots):
                continue
        # no two roots may coincide (tangency duplicates) either
        if len({(mpmath.nstr(p[0], 30), mpmath.nstr(p[1], 30)) for p in roots}) != len(roots):
            continue
        return text, roots


# -- Bernstein basis by linear algebra ------------------------------------------


def _binom_poly(lo: Fraction, hi: Fraction, d: int, i: int) -> list[Fraction]:
    """Coefficients (low to high) of C(d,i) (x-lo)^i (hi-x)^(d-i) / (hi-lo)^d."""
    out = [Fraction(1)]
    for fac in [[-lo, Fraction(1)]] * i + [[hi, Fraction(-1)]] * (d - i):
        nxt = [Fraction(0)] * (len(out) + 1)
        for a, u in enumerate(out):
            nxt[a] += u * fac[0]
            nxt[a + 1] += u * fac[1]
        out = nxt
    scale = Fraction(math.comb(d, i)) / (hi - lo) ** d
    return [c * scale for c in out]


def _solve_linear(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [row[:] + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                fct = a[r][col] / a[col][col]
                a[r] = [x - fct * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def bernstein_by_linear_solve(terms: dict, degrees, box) -> dict:
    """Bernstein coefficients of ``sum terms[e] x^e`` on ``box`` from the
    monomial-to-Bernstein change of basis, solved as one dense linear system."""
    import itertools

    idxs = list(itertools.product(*[range(d + 1) for d in degrees]))
    pos = {e: i for i, e in enumerate(idxs)}
    per_axis = [
        [_binom_poly(Fraction(lo), Fraction(hi), d, i) for i in range(d + 1)]
        for (lo, hi), d in zip(box, degrees)
    ]
    cols = []
    for idx in idxs:
        col = [Fraction(0)] * len(idxs)
        for mono in idxs:
            v = Fraction(1)
            for k, (i, e) in enumerate(zip(idx, mono)):
                v *= per_axis[k][i][e]
            col[pos[mono]] = v
        cols.append(col)
    mat = [[cols[j][i] for j in range(len(idxs))] for i in range(len(idxs))]
    rhs = [Fraction(terms.get(e, 0)) for e in idxs]
    sol = _solve_linear(mat, rhs)
    return dict(zip(idxs, sol))
