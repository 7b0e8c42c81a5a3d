import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cfsolve import DomainBox, ParseError, format_system, parse_box, parse_system
from cfsolve.tensorpoly import TensorPoly
from oracles import DATA, SIGMA1_TEXT


def test_sigma1():
    s = parse_system(SIGMA1_TEXT)
    assert s.variables == ("x", "y")
    f1, f2 = s.polys
    assert f1.terms() == {(2, 0): 1, (0, 2): 1, (1, 1): -1, (0, 0): -1}
    assert f2.terms() == {(1, 1): 10, (0, 0): -4}


def test_single_variable_identity():
    s = parse_system("x")
    assert s.variables == ("x",)
    assert s.polys[0] == TensorPoly([0, 1])


def test_first_appearance_order():
    assert parse_system("y*z + x; x").variables == ("y", "z", "x")


def test_header_fixes_order():
    s = parse_system("vars y, x; x - 2*y")
    assert s.variables == ("y", "x")
    assert s.polys[0].terms() == {(1, 0): -2, (0, 1): 1}


def test_undeclared_variable_under_header():
    with pytest.raises(ParseError) as e:
        parse_system("vars x, y;\nx + z")
    assert e.value.line == 2 and e.value.column == 5


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("x + 1.5", 1, 5),
        ("x + 2e3", 1, 5),
        ("x +\n  * y", 2, 3),
        ("(x + 1", 1, 7),
        ("x $ 1", 1, 3),
        ("x^-1", 1, 3),
    ],
)
def test_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_system(text)
    assert (e.value.line, e.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(e.value)


def test_empty_input():
    with pytest.raises(ParseError):
        parse_system("  # nothing\n ; ")


def test_expansion_and_powers():
    s = parse_system("(x + y)^3 - x**3; 2*(x - 1)*(x + 1)")
    assert s.polys[0].terms() == {(2, 1): 3, (1, 2): 3, (0, 3): 1}
    assert s.polys[1].terms() == {(2, 0): 2, (0, 0): -2}


def test_big_integers():
    big = 7**120
    s = parse_system(f"{big}*x^2 - {big + 1}")
    assert s.polys[0].terms() == {(2,): big, (0,): -(big + 1)}


def test_comments_and_blank_entries():
    s = parse_system("# circle\nx^2 + y^2 - 1;  # first\n;\nx - y;\n")
    assert len(s) == 2


def test_fixture_files():
    for name in ("sigma1.sys", "sigma2.sys", "sigma3.sys"):
        s = parse_system((DATA / name).read_text())
        assert s.variables == ("x", "y") and len(s) == 2


# -- round trip -----------------------------------------------------------------------


def test_round_trip_fixture():
    s = parse_system(SIGMA1_TEXT)
    assert parse_system(format_system(s)) == s


@st.composite
def systems(draw):
    n = draw(st.integers(1, 3))
    names = draw(st.lists(st.sampled_from(["x", "y", "z", "u", "v1"]), min_size=n, max_size=n, unique=True))
    polys = []
    for _ in range(draw(st.integers(1, 3))):
        terms = draw(
            st.dictionaries(
                st.tuples(*[st.integers(0, 4)] * n),
                st.integers(-(2**80), 2**80).filter(bool),
                min_size=1,
                max_size=6,
            )
        )
        polys.append(TensorPoly.from_terms(terms, n))
    return names, polys


@given(systems())
def test_round_trip_property(sys_):
    names, polys = sys_
    text = format_system(polys, names)
    back = parse_system(text)
    assert back.variables == tuple(names)
    assert [f.trimmed() for f in back.polys] == [f.trimmed() for f in polys]
    assert format_system(back) == text


# -- boxes ------------------------------------------------------------------------------


def test_parse_box_examples():
    assert parse_box("-2:3,-2:2") == DomainBox([(-2, 3), (-2, 2)])
    assert parse_box("0:inf") == DomainBox([(0, math.inf)])
    assert parse_box("1/2:3/2") == DomainBox([(Fraction(1, 2), Fraction(3, 2))])
    assert parse_box("0:1", 3) == DomainBox([(0, 1)] * 3)


@pytest.mark.parametrize("text", ["3:1", "1:1", "1/0:2", "a:b", "0:1:2", "inf:3", "1.5:2"])
def test_parse_box_errors(text):
    with pytest.raises(ParseError):
        parse_box(text)


def test_parse_box_dimension_mismatch():
    with pytest.raises(ParseError):
        parse_box("0:1,0:1", 3)


@given(st.lists(st.tuples(st.fractions(max_denominator=50), st.fractions(min_value=Fraction(1, 50), max_denominator=50)), min_size=1, max_size=4))
def test_parse_box_round_trip(ivs):
    b = DomainBox([(lo, lo + w) for lo, w in ivs])
    text = ",".join(f"{lo}:{hi}" for lo, hi in b)
    assert parse_box(text) == b
