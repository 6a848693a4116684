import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from waring.apolarity import binary_rank, is_power
from waring.errors import CubeInput, ExceptionalParameter, SquareQ
from waring.poly import Form, ParamForm, binary, contract, power
from waring.ranklocus import (
    build_r,
    compute_lr_bad_set,
    defining_rhs,
    r_quotient,
    rank3_element,
    sample_rank_two,
    split_quadric,
    squared_lhs,
)

X0, X1 = Form.variable(2, 0), Form.variable(2, 1)
seeds = st.integers(0, 10 ** 6)


def rand_linear(r, lo=-6, hi=6):
    while True:
        v = [r.randint(lo, hi), r.randint(lo, hi)]
        if any(v):
            return binary(v)


def rand_pencil(seed, k=3):
    r = random.Random(seed)
    factors = [rand_linear(r) for _ in range(k)]
    while True:
        x0, x1 = rand_linear(r), rand_linear(r)
        if x0.coeffs[0] * x1.coeffs[1] != x0.coeffs[1] * x1.coeffs[0]:
            return build_r(factors, x0, x1)


def test_cubic_example():
    P = build_r([Form.linear([1, 0])], X0, X1)
    assert P.r == ParamForm((Form.monomial((2, 1), 6), Form.monomial((0, 3), 2)))
    lr = P.r.contract(Form.linear([1, 0]))
    assert lr == ParamForm((Form.monomial((1, 1), 12), Form.zero(2, 2)))
    assert P.a[0] == binary([1, 0])
    full = r_quotient(P, (0,))
    assert full.rows == (Form.monomial((1, 1), 12),) == (P.q.scale(2 * 6),)


def _sympy_r(P):
    # t0 t1 r(t0^2, t1^2) from a direct expansion of the defining identity
    t0, t1, y0, y1 = sympy.symbols("t0 t1 y0 y1")

    def lin(f):
        return sum(sympy.Rational(int(c.numerator), int(c.denominator)) * v for c, v in zip(f.coeffs, (y0, y1)))

    def ev(l, f):
        return sum(sympy.Rational(int(a.numerator), int(a.denominator)) * sympy.Rational(int(b.numerator), int(b.denominator))
                   for a, b in zip(l.coeffs, f.coeffs))

    xa, xb = lin(P.x0), lin(P.x1)
    p = lambda u, w: sympy.prod(ev(l, P.x0) * u + ev(l, P.x1) * w for l in P.factors)
    d = P.degree
    g = p(t0, -t1) * (t0 * xa + t1 * xb) ** d - p(t0, t1) * (t0 * xa - t1 * xb) ** d
    return sympy.expand(sympy.cancel(g / (t0 * t1))), (t0, t1, y0, y1)


@pytest.mark.parametrize("seed", range(5))
def test_r_matches_independent_expansion(seed):
    P = rand_pencil(seed)
    expect, (t0, t1, y0, y1) = _sympy_r(P)
    got = 0
    n = P.r.tdegree
    for j, row in enumerate(P.r.rows):
        poly = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * y0 ** e[0] * y1 ** e[1] for e, c in row.terms())
        got += poly * t0 ** (2 * (n - j)) * t1 ** (2 * j)
    assert sympy.expand(got - expect) == 0


@given(seeds)
def test_defining_identity_exact(seed):
    P = rand_pencil(seed)
    assert (squared_lhs(P) - defining_rhs(P)).is_zero()


def test_square_q():
    with pytest.raises(SquareQ):
        build_r([X0], X0 + X1, X0 + X1)
    with pytest.raises(SquareQ):
        split_quadric(power(X0 + X1, 2))


def test_quotients():
    P = rand_pencil(11)
    assert r_quotient(P, ()) == P.r
    full = r_quotient(P, (0, 1, 2))
    assert full.tdegree == 0 and full.rows[0] == P.q.scale(2 * 120)


def test_rank_two_samples(policy):
    P = rand_pencil(5)
    r = random.Random(5)
    n = 0
    while n < 20:
        lam, mu = r.randint(-20, 20), r.randint(-20, 20)
        if (lam, mu) == (0, 0) or P.is_exceptional(lam, mu, policy):
            continue
        n += 1
        assert binary_rank(sample_rank_two(P, lam, mu, policy), policy) == 2
    with pytest.raises(ExceptionalParameter):
        sample_rank_two(P, 1, 0, policy)


def test_roots_give_powers(policy):
    P = rand_pencil(8)
    for (lam, mu), v in zip(P.roots, P.v):
        r = P.r.evaluate(lam, mu)
        assert r.is_zero() or is_power(r)
        if not r.is_zero():
            v5 = power(v, 5)
            j = max(range(6), key=lambda i: abs(v5.coeffs[i]))
            assert r == v5.scale(r.coeffs[j] / v5.coeffs[j])


@pytest.mark.parametrize("seed", range(4))
def test_rank3_element(policy, seed):
    r = random.Random(seed)
    p = rand_linear(r) * rand_linear(r)
    a, b = r.randint(1, 5), r.randint(-5, -1)
    t = X0 * X1 * (X0.scale(a) + X1.scale(b))
    dec = rank3_element(p, t, policy, random.Random(seed))
    g = dec.to_form()
    assert len(dec) == 3 and binary_rank(g, policy) == 3
    c = contract(p, g)
    assert not c.is_zero(policy)
    assert (c - t).is_zero(policy, scale=t.norm())


def test_rank3_rejects_cube(policy):
    with pytest.raises(CubeInput):
        rank3_element(X0 * X1, power(X0, 3), policy)


def test_bad_set_square_case(policy):
    bad = compute_lr_bad_set(power(X0, 2), X0, X1, X0 + X1, policy)
    assert len(bad.F) == 1
    c = bad.F[0]
    assert is_power(c) and c.coeffs[1:] == (0, 0, 0)


def test_bad_set_generic_case(policy):
    q = X0 * X1
    xs = [Form.linear([2, 1]), Form.linear([1, -3]), Form.linear([1, 4])]
    bad = compute_lr_bad_set(q, *xs, policy)
    assert len(bad.F) == 6
    for h, xh in enumerate(xs[:2]):
        for member in (bad.v1, bad.v2)[h:h + 1] + bad.vhk[2 * h: 2 * h + 2]:
            d = contract(xh, member)
            # the derivative is a multiple of x0 x1 times a linear form
            assert d.coeffs[0] == 0 and d.coeffs[-1] == 0


def test_bad_set_degenerate_direction(policy):
    bad = compute_lr_bad_set(X0 * X1, Form.linear([1, 2]), Form.linear([2, 1]), Form.linear([0, 1]), policy)
    assert (bad.u0 - bad.u1).is_zero() or (bad.u0 + bad.u1).is_zero()
