import gmpy2
import pytest
from gmpy2 import mpc, mpfr, mpq
from hypothesis import given
from hypothesis import strategies as st

from waring import linalg
from waring.errors import Inconsistent, ParseError
from waring.scalar import (
    TolerancePolicy,
    format_scalar,
    homogeneous_roots,
    is_zero,
    parse_scalar,
    univariate_roots,
    working_precision,
)

rationals = st.fractions(max_denominator=50).map(lambda f: mpq(f.numerator, f.denominator))


def test_policy_bounds():
    with pytest.raises(ValueError):
        TolerancePolicy(32)
    with pytest.raises(ValueError):
        TolerancePolicy(256, zero_threshold=mpfr(2) ** -10)
    assert TolerancePolicy(256).zero_threshold == mpfr(2) ** -128
    assert TolerancePolicy(64).zero_threshold < mpfr(2) ** -32


def test_roots_of_t2_minus_1(prec):
    roots = sorted((r, m) for r, m in univariate_roots([1, 0, -1], prec))
    assert roots == [(-1, 1), (1, 1)]


def test_double_root(prec):
    assert univariate_roots([1, -4, 4], prec) == [(2, 2)]


def test_quintic_roots_match_newton(prec):
    # coarse grid starts polished by plain Newton iteration at 256 bits
    p = lambda z: z ** 5 - z - 1
    dp = lambda z: 5 * z ** 4 - 1
    got = [r for r, m in univariate_roots([1, 0, 0, 0, -1, -1], prec)]
    assert len(got) == 5
    for r in got:
        z = mpc(complex(r))
        for _ in range(200):
            z = z - p(z) / dp(z)
        assert abs(z - r) <= mpfr(2) ** -128 * max(1, abs(z))


def test_homogeneous_roots_include_infinity(prec):
    # X^2 Y: root [0:1] twice and [1:0] once
    roots = dict(homogeneous_roots([0, 1, 0, 0], prec))
    assert roots[(0, 1)] == 2 and roots[(1, 0)] == 1


def test_is_zero():
    pol = TolerancePolicy()
    assert is_zero(mpq(0, 1), pol)
    with working_precision(pol):
        assert is_zero(mpc(mpfr(2) ** -256), pol)
    assert not is_zero(mpq(1, 10 ** 50), pol)


@given(rationals, rationals, rationals)
def test_field_axioms_exact(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if b != 0:
        assert (a / b) * b == a


@given(rationals)
def test_format_parse_rational_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


def test_format_parse_complex_roundtrip(prec):
    z = mpc(gmpy2.const_pi(), -mpfr(1) / 3)
    back = parse_scalar(format_scalar(z, 256))
    assert abs(back - z) <= mpfr(2) ** -240


def test_parse_errors():
    for bad in ["", "1/0", "abc", "1..2"]:
        with pytest.raises(ParseError):
            parse_scalar(bad)


def test_exact_kernel_and_solve():
    A = [[1, 2, 3], [2, 4, 6]]
    ker = linalg.kernel(A)
    assert len(ker) == 2
    for v in ker:
        assert linalg.mat_vec(A, v) == [0, 0]
    with pytest.raises(Inconsistent):
        linalg.solve(A, [1, 1])
    assert linalg.solve([[2, 0], [0, 4]], [1, 1]) == [mpq(1, 2), mpq(1, 4)]


def test_exact_elimination_never_leaves_rationals():
    R, piv = linalg.rref([[3, 1], [1, 7]])
    assert piv == [0, 1]
    assert all(isinstance(x, type(mpq(1))) for row in R for x in row)
