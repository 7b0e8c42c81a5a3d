import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfsolve.tensorpoly import TensorPoly
from cfsolve.unicf import (
    CFExpansion,
    RootInterval,
    _ceil_log2,
    cf_of_interval,
    cf_of_rational,
    floor_of_root,
    integer_lower_bound,
    isolate_positive_roots,
    max_positive_root,
    min_positive_root,
    poly_gcd,
    positive_root_lower_bound,
    positive_root_upper_bound,
    push_quotient,
    refine_root,
    root_expansion,
    sign_variations,
    simplest_rational,
    squarefree_part,
)
from oracles import (
    positive_root_count,
    random_int_poly,
    random_rooted_poly,
    smallest_positive_root_floor,
    sturm_count,
)


def value(a, x):
    r = Fraction(0)
    for c in reversed(a):
        r = r * x + c
    return r


def check_against_sturm(a):
    """Isolation agrees with the Sturm oracle: same count, every interval
    holds exactly one root, intervals sorted and disjoint."""
    roots = isolate_positive_roots(a)
    assert len(roots) == positive_root_count(a)
    prev_hi = Fraction(0)
    for r in roots:
        assert r.lower >= prev_hi
        if r.exact:
            assert value(a, r.lower) == 0
            prev_hi = r.lower
            continue
        assert 0 <= r.lower < r.upper
        inside = sturm_count(a, r.lower, r.upper) - int(value(a, r.upper) == 0)
        assert inside == 1
        prev_hi = r.upper
    # exact roots are never also counted by a neighbouring open interval
    for r, s in zip(roots, roots[1:]):
        assert (r.upper if not r.exact else r.lower) <= s.lower


# -- basics -----------------------------------------------------------------------


def test_sign_variations_examples():
    assert sign_variations([1, -3, 2]) == 2
    assert sign_variations([1, 1, 1]) == 0
    assert sign_variations([1, 0, -1]) == 1


def test_integer_lower_bound_examples():
    assert integer_lower_bound([2, -3, 1]) == 1
    assert integer_lower_bound([-1, -1, 1]) == 1
    assert integer_lower_bound([1, 1, 1]) == math.inf
    assert integer_lower_bound(TensorPoly([2, -3, 1])) == 1


def test_cauchy_strategy_is_a_lower_bound():
    for a in ([2, -3, 1], [-1, -1, 1], [-50, 1], [6, -5, 1]):
        assert integer_lower_bound(a, "cauchy") <= integer_lower_bound(a)
    assert integer_lower_bound([1, 1, 1], "cauchy") == math.inf
    with pytest.raises(ValueError):
        integer_lower_bound([1, -1], "bogus")


def test_min_max_positive_root_examples():
    a = [2, -3, 1]
    lo, hi = min_positive_root(a), max_positive_root(a)
    assert 1 in lo and 2 in hi
    assert min_positive_root([-1, 1]) == max_positive_root([-1, 1]) == RootInterval(1, 1, True)
    assert min_positive_root([-1, 2]) == RootInterval(Fraction(1, 2), Fraction(1, 2), True)
    assert min_positive_root([1, 0, 1]) is None


def test_isolate_examples():
    roots = isolate_positive_roots([2, -3, 1])
    assert len(roots) == 2
    assert 1 in roots[0] and 2 in roots[1]
    assert isolate_positive_roots([1, 0, 1]) == []


def test_isolate_ignores_zero_and_negative_roots():
    # x^2 (x + 1)(x - 3)
    a = [0, 0, -3, -2, 1]
    roots = isolate_positive_roots(a)
    assert len(roots) == 1 and 3 in roots[0]


def test_roots_at_origin_do_not_disturb_bounds():
    assert integer_lower_bound([0, -3, 1]) == 3
    assert integer_lower_bound([0, 0, -30, 1]) == 30
    a = [0, -2, 0, 1]  # x (x^2 - 2)
    (r,) = isolate_positive_roots(a)
    assert root_expansion(a, r, 5).quotients == (1, 2, 2, 2, 2)


def test_refine_from_an_endpoint_that_is_a_root():
    # (x - 1)(x - 3/2): an interval starting at the root 1 still refines
    a = [3, -5, 2]
    r = refine_root(a, RootInterval(Fraction(1), Fraction(2)), width=Fraction(1, 1000))
    assert r.exact or r.lower < Fraction(3, 2) < r.upper


def test_isolate_multiple_roots_are_reported_once():
    # (x - 2)^3 (x - 1/3)^2
    a = [1]
    for fac in ([-2, 1], [-2, 1], [-2, 1], [-1, 3], [-1, 3]):
        a = [sum(a[i] * fac[j - i] for i in range(len(a)) if 0 <= j - i < len(fac)) for j in range(len(a) + 1)]
    roots = isolate_positive_roots(a)
    assert len(roots) == 2
    assert Fraction(1, 3) in roots[0] and 2 in roots[1]


@pytest.mark.parametrize("seed", range(40))
def test_isolate_matches_sturm_oracle(seed):
    rng = random.Random(seed)
    check_against_sturm(random_int_poly(rng, max_deg=6))
    check_against_sturm(random_rooted_poly(rng, max_deg=8))


def test_clustered_roots():
    # roots 1000/999, 1001/1000 and 1: separation about 1e-6
    a = [1]
    for fac in ([-1000, 999], [-1001, 1000], [-1, 1], [5, -7, 2]):
        a = [sum(a[i] * fac[j - i] for i in range(len(a)) if 0 <= j - i < len(fac)) for j in range(len(a) + len(fac) - 1)]
    check_against_sturm(a)


def test_large_coefficients():
    a = [-(2**300) - 1, 0, 2**300]
    roots = isolate_positive_roots(a)
    assert len(roots) == 1
    r = refine_root(a, roots[0], width=Fraction(1, 10**30))
    assert r.upper - r.lower <= Fraction(1, 10**30) or r.exact


# -- bounds ------------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(30))
def test_root_bounds_enclose_roots(seed):
    rng = random.Random(1000 + seed)
    a = random_rooted_poly(rng)
    ub = positive_root_upper_bound(a)
    lb = positive_root_lower_bound(a)
    roots = isolate_positive_roots(a)
    if not roots:
        return
    assert all((r.lower if r.exact else r.upper) <= ub or r.lower < ub for r in roots)
    for r in roots:
        # the root lies in [lower, upper]; compare conservatively
        if r.exact:
            assert lb <= r.lower <= ub
        else:
            assert r.upper > lb and r.lower < ub
    # the exact strategy gives the floor of the smallest positive root
    assert integer_lower_bound(a) == smallest_positive_root_floor(a)


@given(st.fractions(min_value=Fraction(1, 10**6), max_value=10**6))
def test_ceil_log2_brute_force(r):
    t = _ceil_log2(r)
    assert Fraction(2) ** t >= r
    assert Fraction(2) ** (t - 1) < r


# -- refinement --------------------------------------------------------------------


def test_refine_and_floor():
    a = [-2, 0, 1]  # sqrt(2)
    (r,) = isolate_positive_roots(a)
    r = refine_root(a, r, width=Fraction(1, 10**12))
    assert r.lower < Fraction(14142135623731, 10**13) and r.upper > Fraction(14142135623730, 10**13)
    k, r2 = floor_of_root(a, r)
    assert k == 1
    assert r2.lower >= 1 and r2.upper <= 2


def test_floor_of_integer_root_is_exact():
    a = [-3, 1]
    (r,) = isolate_positive_roots(a)
    k, r2 = floor_of_root(a, r)
    assert k == 3 and r2.exact


# -- continued fractions ------------------------------------------------------------


def test_push_quotient_examples():
    e = CFExpansion()
    for c in (1, 2, 3):
        e = push_quotient(e, c)
    assert e.convergents == [1, Fraction(3, 2), Fraction(10, 7)]
    e = push_quotient(push_quotient(CFExpansion(), 0), 1)
    assert e.convergents == [0, 1]


def test_push_quotient_rejects_nonpositive_tail():
    with pytest.raises(ValueError):
        push_quotient(CFExpansion.from_quotients([1]), 0)


@given(st.lists(st.integers(1, 10**6), min_size=2, max_size=40), st.integers(-100, 100))
def test_convergent_identities(qs, head):
    e = CFExpansion.from_quotients([head] + qs)
    for i in range(len(e.P)):
        assert math.gcd(e.P[i], e.Q[i]) == 1
    for i in range(len(e.P) - 1):
        assert e.P[i + 1] * e.Q[i] - e.P[i] * e.Q[i + 1] == (-1) ** i


def test_golden_ratio_convergents_satisfy_bound():
    e = CFExpansion.from_quotients([1] * 30)
    with mpmath.workdps(50):
        phi = (1 + mpmath.sqrt(5)) / 2
        for n in range(29):
            err = abs(phi - mpmath.mpf(e.P[n]) / e.Q[n])
            assert err <= mpmath.mpf(1) / (e.Q[n] * e.Q[n + 1])


def test_root_expansion_sqrt2_and_phi():
    a = [-2, 0, 1]
    (r,) = isolate_positive_roots(a)
    assert root_expansion(a, r, 12).quotients == (1,) + (2,) * 11
    a = [-1, -1, 1]
    (r,) = isolate_positive_roots(a)
    assert root_expansion(a, r, 15).quotients == (1,) * 15


def test_root_expansion_rational_root_stops():
    a = [-7, 5]  # 7/5 = [1; 2, 2]
    (r,) = isolate_positive_roots(a)
    assert root_expansion(a, r, 10).quotients == (1, 2, 2)


@given(st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6))
def test_cf_of_rational_round_trip(x):
    assert CFExpansion.from_quotients(cf_of_rational(x)).value == x


def test_cf_of_interval():
    # every number strictly between 7/5 = [1; 2, 2] and 10/7 = [1; 2, 3] starts [1; 2, 2]
    assert cf_of_interval(Fraction(7, 5), Fraction(10, 7)) == [1, 2, 2]
    assert cf_of_interval(0, 2) == []
    assert cf_of_interval(1, math.inf) == []


@given(
    st.fractions(min_value=0, max_value=100, max_denominator=500),
    st.fractions(min_value=Fraction(1, 10**6), max_value=1, max_denominator=10**6),
    st.fractions(min_value=0, max_value=1, max_denominator=1000),
)
def test_cf_of_interval_is_shared_prefix(lo, w, t):
    hi = lo + w
    prefix = cf_of_interval(lo, hi)
    inner = lo + w * t if 0 < t < 1 else lo + w / 2
    full = cf_of_rational(inner)
    assert full[: len(prefix)] == prefix


def test_simplest_rational():
    assert simplest_rational(Fraction(1, 3), Fraction(2, 3)) == Fraction(1, 2)
    assert simplest_rational(0, 2, open=True) == 1
    assert simplest_rational(0, 1, open=True) == Fraction(1, 2)
    assert simplest_rational(Fraction(-7, 3), Fraction(-2, 1)) == -2
    assert simplest_rational(1, 1) == 1
    with pytest.raises(ValueError):
        simplest_rational(1, 1, open=True)


@given(
    st.fractions(min_value=-20, max_value=20, max_denominator=12),
    st.fractions(min_value=Fraction(1, 12), max_value=5, max_denominator=12),
    st.booleans(),
)
def test_simplest_rational_brute_force(lo, w, open_):
    hi = lo + w
    got = simplest_rational(lo, hi, open=open_)
    ok = (lambda v: lo < v < hi) if open_ else (lambda v: lo <= v <= hi)
    assert ok(got)
    for q in range(1, got.denominator + 1):
        for p in range(math.floor(lo * q) - 1, math.ceil(hi * q) + 2):
            v = Fraction(p, q)
            if ok(v):
                assert q > got.denominator or (q == got.denominator and abs(v) >= abs(got))


# -- algebra helpers -------------------------------------------------------------------


def test_gcd_and_squarefree():
    # (x - 1)^2 (x + 2) and (x - 1)(x - 5)
    assert poly_gcd([2, -3, 0, 1], [5, -6, 1]) == [-1, 1]
    assert squarefree_part([2, -3, 0, 1]) == [-2, 1, 1]
