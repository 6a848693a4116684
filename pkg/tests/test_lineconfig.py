import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from waring.apolarity import is_power
from waring.errors import NonTransverse
from waring.lineconfig import (
    certify,
    double_refine,
    factor_conic,
    find_apolar_split_quartic,
    pairwise_distinct,
    recap_tangent_lines,
    refine_configuration,
    vanishes,
)
from waring.poly import Form, contract, power, product
from waring.synthetic import random_quintic, three_line_instance

x = [Form.variable(3, i) for i in range(3)]
e = x  # the dual variables act as partial derivatives


def _check(conf, f, policy):
    assert conf.certified
    assert pairwise_distinct(conf.lines, policy)
    assert vanishes(conf.lines, f, policy)
    again = certify(f, conf.lines, policy)
    assert all(ok for _, ok in again)


def test_fermat_gives_two_lines(policy):
    f = power(x[0], 5) + power(x[1], 5) + power(x[2], 5)
    conf = refine_configuration(f, random.Random(0), policy)
    assert conf.kind == 2
    _check(conf, f, policy)


def test_single_power_gives_two_lines(policy):
    v = Form.linear([1, 2, -1])
    f = power(v, 5)
    conf = refine_configuration(f, random.Random(0), policy)
    assert conf.kind == 2
    for l in conf.lines:
        assert contract(l, f).is_zero()


def test_random_quintic_gives_four_lines(policy):
    f = random_quintic(random.Random(42))
    conf = refine_configuration(f, random.Random(0), policy)
    assert conf.kind == 4
    _check(conf, f, policy)


def test_hard_monomial_is_certified(policy):
    f = Form.monomial((1, 2, 2))
    conf = refine_configuration(f, random.Random(0), policy)
    _check(conf, f, policy)


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6))
def test_random_quintics_always_certified(seed):
    f = random_quintic(random.Random(seed))
    conf = refine_configuration(f, random.Random(seed))
    assert conf.certified
    assert vanishes(conf.lines, f)


def test_three_line_planted_instance(policy):
    f, lines = three_line_instance(3)
    assert vanishes(lines, f, policy)
    conf = refine_configuration(f, random.Random(3), policy)
    _check(conf, f, policy)


def test_split_quartic(policy):
    f = random_quintic(random.Random(9))
    rng = random.Random(9)
    for _ in range(16):
        lines = find_apolar_split_quartic(f, rng, policy)
        if lines is not None:
            break
    assert lines is not None and len(lines) == 4
    assert pairwise_distinct(lines, policy) and vanishes(lines, f, policy)


def test_factor_conic(policy):
    g, h = Form.linear([1, 2, 3]), Form.linear([2, -1, 1])
    fac = factor_conic(g * h, policy)
    assert fac is not None
    assert (fac[0] * fac[1] - g * h).is_zero(policy, scale=10)
    assert factor_conic(x[0] * x[0] + x[1] * x[1] + x[2] * x[2], policy) is None


def test_tangent_of_linear_curve(policy):
    # x^2 ⌟ f = 0 (f has no x2^2 terms) and x^1 ⌟ f = 0
    f = power(x[0], 5) + x[2] * power(x[0], 4).scale(3)
    lines = recap_tangent_lines(f, e[2], e[1], policy)
    assert len(lines) == 1
    assert (lines[0] - e[1]).is_zero()


def test_tangents_annihilate_engineered_quintic(policy):
    # x^0 (x^2)^2 kills f: every monomial with x2^2 or higher avoids x0
    rng = random.Random(5)
    f = Form.monomial((0, 3, 2), 2)
    for exps in [(5, 0, 0), (4, 1, 0), (3, 2, 0), (0, 5, 0), (4, 0, 1), (2, 2, 1), (0, 4, 1), (3, 1, 1)]:
        f = f + Form.monomial(exps, rng.randint(1, 9))
    assert contract(e[0] * e[2] * e[2], f).is_zero()
    lines = double_refine(f, e[0], e[2], random.Random(1), policy)
    assert len(lines) in (3, 4)
    assert pairwise_distinct(lines, policy)
    assert vanishes(lines, f, policy)


def test_non_transverse(policy):
    f = power(x[0], 5)
    with pytest.raises(NonTransverse):
        recap_tangent_lines(f, e[2], e[0] * e[0], policy)


def test_cube_branch_returns_three_lines(policy):
    # G = x^1 x^2 ⌟ f = x0^3, a cube
    f = power(x[0], 5) + x[2] * x[1] * power(x[0], 3)
    assert contract(e[1] * e[2] * e[2], f).is_zero()
    lines = double_refine(f, e[1], e[2], random.Random(0), policy)
    assert len(lines) == 3
    assert vanishes(lines, f, policy)


def test_double_refine_picks_first_line(policy):
    # x^2 squared kills f, so any x1 works
    rng = random.Random(2)
    f = Form.zero(3, 5)
    for exps in [(5, 0, 0), (3, 2, 0), (1, 4, 0), (0, 5, 0), (4, 0, 1), (1, 3, 1), (2, 2, 1)]:
        f = f + Form.monomial(exps, rng.randint(-9, 9) or 1)
    lines = double_refine(f, None, e[2], random.Random(4), policy)
    assert vanishes(lines, f, policy) and pairwise_distinct(lines, policy)


def test_certificate_table_lists_every_predicate(policy):
    f = random_quintic(random.Random(1))
    conf = refine_configuration(f, random.Random(1), policy)
    table = conf.certificate_table().splitlines()
    assert len(table) == len(conf.cert) == 6
    assert all(line.endswith(": true") for line in table)
    prod = contract(product(list(conf.lines[:3]), 3), f)
    assert not is_power(prod)
