import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from waring.errors import DegreeMismatch, NotDivisible, NotInKernel, ParseError
from waring.poly import (
    Form,
    ParamForm,
    binary,
    contract,
    embed_from_line,
    evaluate,
    evaluate_dual,
    monomials,
    parse_form,
    power,
    restrict_to_line,
    substitute,
)

X = sympy.symbols("x0:3")


def to_sympy(f):
    xs = X[: f.nvars]
    return sympy.expand(sum(sympy.Rational(int(c.numerator), int(c.denominator))
                            * sympy.prod(x ** e for x, e in zip(xs, exps))
                            for exps, c in f.terms()))


def rand_form(seed, nvars, degree, lo=-5, hi=5):
    r = random.Random(seed)
    return Form.from_coeffs(nvars, degree, [r.randint(lo, hi) for _ in monomials(nvars, degree)])


def sympy_contract(p, f):
    # each x^i in the operator acts as d/dx_i
    xs = X[: f.nvars]
    out = 0
    for exps, c in p.terms():
        g = to_sympy(f)
        for x, e in zip(xs, exps):
            g = sympy.diff(g, x, e)
        out += sympy.Rational(int(c.numerator), int(c.denominator)) * g
    return sympy.expand(out)


seeds = st.integers(0, 10 ** 6)


def test_single_derivative():
    assert contract(Form.variable(3, 0), Form.monomial((2, 1, 0))) == Form.monomial((1, 1, 0), 2)


def test_mixed_derivative():
    p = Form.monomial((1, 1))
    assert contract(p, Form.monomial((2, 2))) == Form.monomial((1, 1), 4)


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        contract(Form.monomial((3, 0)), Form.monomial((1, 1)))


@given(seeds, st.integers(1, 3), st.integers(0, 2))
def test_contract_matches_sympy(seed, dp, nv):
    nvars = 2 + nv % 2
    p = rand_form(seed, nvars, dp)
    f = rand_form(seed + 1, nvars, 5)
    assert sympy.expand(to_sympy(contract(p, f)) - sympy_contract(p, f)) == 0


@given(seeds)
def test_contract_composes(seed):
    p, q, f = rand_form(seed, 3, 1), rand_form(seed + 1, 3, 2), rand_form(seed + 2, 3, 5)
    assert contract(p * q, f) == contract(p, contract(q, f))


def test_evaluate_dual_simple():
    p = Form.monomial((1, 1))
    assert evaluate_dual(p, Form.linear([2, 3])) == 6
    assert evaluate_dual(Form.monomial((5, 0, 0)), Form.variable(3, 1)) == 0


@given(seeds)
def test_evaluate_dual_is_substitution(seed):
    p = rand_form(seed, 3, 4)
    v = rand_form(seed + 1, 3, 1)
    assert evaluate_dual(p, v) == evaluate(p, list(v.coeffs))


def test_power():
    x0, x1 = Form.variable(2, 0), Form.variable(2, 1)
    assert power(x0, 5) == Form.monomial((5, 0))
    assert power(x0 + x1, 2) == Form.from_coeffs(2, 2, [1, 2, 1])


def test_powers_of_distinct_lines_independent():
    from waring import linalg
    d = 5
    cols = [power(binary([1, k]), d).coeffs for k in range(d + 1)]
    assert linalg.rank(cols) == d + 1


@given(seeds)
def test_substitute_matches_sympy(seed):
    f = rand_form(seed, 3, 3)
    images = [rand_form(seed + i + 1, 2, 1) for i in range(3)]
    sub = {X[i]: to_sympy(images[i]).subs({X[0]: sympy.Symbol("u"), X[1]: sympy.Symbol("w")}) for i in range(3)}
    expect = sympy.expand(to_sympy(f).subs(sub, simultaneous=True))
    got = to_sympy(substitute(f, images)).subs({X[0]: sympy.Symbol("u"), X[1]: sympy.Symbol("w")}, simultaneous=True)
    assert sympy.expand(got - expect) == 0


def test_param_contract_is_t_linear():
    f = rand_form(3, 3, 5)
    p = rand_form(4, 3, 2)
    F = ParamForm((f, Form.zero(3, 5)))
    assert F.contract(p).rows == (contract(p, f), Form.zero(3, 3))


def test_param_evaluate():
    x0, x1 = Form.monomial((5, 0)), Form.monomial((0, 5))
    F = ParamForm((x0, x1))
    assert F.evaluate(1, 0) == x0
    assert F.evaluate(0, 0).is_zero()


@given(seeds)
def test_param_evaluation_commutes_with_contraction(seed):
    r = random.Random(seed)
    F = ParamForm(tuple(rand_form(seed + i, 3, 5) for i in range(3)))
    p = rand_form(seed + 9, 3, 2)
    lam, mu = mpq(r.randint(-9, 9)), mpq(r.randint(-9, 9))
    assert F.contract(p).evaluate(lam, mu) == contract(p, F.evaluate(lam, mu))


def test_param_substitute_identity_and_inverse():
    F = ParamForm(tuple(rand_form(i, 3, 5) for i in range(4)))
    assert F.substitute(((1, 0), (0, 1))) == F
    M = ((mpq(2), mpq(1)), (mpq(1), mpq(1)))
    Minv = ((mpq(1), mpq(-1)), (mpq(-1), mpq(2)))
    assert F.substitute(M).substitute(Minv) == F


@given(seeds)
def test_param_substitute_is_multiplicative(seed):
    r = random.Random(seed)
    F = ParamForm(tuple(rand_form(seed + i, 2, 2) for i in range(2)))
    G = ParamForm(tuple(rand_form(seed + 5 + i, 2, 1) for i in range(3)))
    M = tuple(tuple(mpq(r.randint(-4, 4)) for _ in range(2)) for _ in range(2))
    assert (F * G).substitute(M) == F.substitute(M) * G.substitute(M)


def test_exact_divide():
    G = ParamForm(tuple(rand_form(i, 3, 2) for i in range(3)))
    t0t1 = binary([0, 1, 0])
    assert G.mul_t(t0t1).exact_divide(binary([1, 0])).exact_divide(binary([0, 1])) == G
    with pytest.raises(NotDivisible):
        ParamForm((Form.variable(3, 0), Form.zero(3, 1))).exact_divide(binary([0, 1]))


def test_restrict_to_coordinate_line():
    f = Form.monomial((5, 0, 0))
    assert restrict_to_line(f, Form.variable(3, 2)) == Form.monomial((5, 0))
    with pytest.raises(NotInKernel):
        restrict_to_line(Form.monomial((0, 0, 5)), Form.variable(3, 2))


@given(seeds)
def test_embed_restrict_roundtrip(seed):
    r = random.Random(seed)
    while True:
        l = Form.linear([r.randint(-4, 4) for _ in range(3)])
        if not l.is_zero():
            break
    g = rand_form(seed, 2, 5)
    f = embed_from_line(g, l)
    assert contract(l, f).is_zero()
    assert embed_from_line(restrict_to_line(f, l), l) == f


def test_parse_form():
    f = parse_form("vars=3 deg=5\n5 0 0 = 1\n")
    assert f == Form.monomial((5, 0, 0))
    g = parse_form("vars=3 deg=5\n1 2 2 = 1\n")
    assert g == Form.monomial((1, 2, 2))
    with pytest.raises(ParseError):
        parse_form("vars=3 deg=5\n1 2 1 = 1\n")


@given(seeds)
def test_text_roundtrip(seed):
    f = rand_form(seed, 3, 5, -1000, 1000).scale(mpq(1, 7))
    assert parse_form(f.to_text()) == f
