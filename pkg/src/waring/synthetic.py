"""Seeded test inputs, including quintics whose pipeline stays rational.

`rational_four_line_instance` plants a four-line configuration in which the
two contracted quadrics factor over Q, so every pencil identity of the
four-line construction can be checked with exact arithmetic.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .lineconfig import normalize_line, pairwise_distinct
from .poly import Form, contract, embed_from_line, line_basis, monomials, product


def random_quintic(rng, nvars=3, lo=-10, hi=10):
    n = len(monomials(nvars, 5))
    return Form.from_coeffs(nvars, 5, [rng.randint(lo, hi) for _ in range(n)])


def random_line(rng, lo=-6, hi=6):
    while True:
        v = [rng.randint(lo, hi) for _ in range(3)]
        if any(v):
            return normalize_line(Form.linear(v))


def random_on_line(l, rng, degree=5, lo=-6, hi=6):
    b = Form.from_coeffs(2, degree, [rng.randint(lo, hi) for _ in range(degree + 1)])
    return embed_from_line(b, l)


def _random_linear_on(l, rng):
    u, w, _ = line_basis(l)
    while True:
        a, b = rng.randint(-5, 5), rng.randint(-5, 5)
        if a or b:
            return Form.linear([a * x + b * y for x, y in zip(u, w)])


def _with_contraction(ops, l, target, rng):
    """Quintic on the line ``l`` with ``prod(ops) ⌟ g = target``."""
    basis = [embed_from_line(Form.monomial(e), l) for e in monomials(2, 5)]
    op = product(ops, 3)
    cols = [contract(op, b).coeffs for b in basis]
    A = [[col[i] for col in cols] for i in range(len(cols[0]))]
    x = linalg.solve(A, list(target.coeffs))
    for v in linalg.kernel(A, len(basis)):
        c = rng.randint(-3, 3)
        x = [a + c * b for a, b in zip(x, v)]
    g = Form.zero(3, 5)
    for c, b in zip(x, basis):
        g = g + b.scale(c)
    return g


@dataclass(frozen=True)
class PlantedInstance:
    f: Form
    lines: tuple
    x: tuple
    y: tuple


def rational_four_line_instance(seed):
    """Quintic apolar to four rational lines with rationally split quadrics.

    ``l1 l2 l3 ⌟ f = x0 x1`` and ``l1 l2 l4 ⌟ f = y0 y1`` with all of
    ``x0, x1, y0, y1`` rational.
    """
    rng = random.Random(seed)
    while True:
        lines = tuple(random_line(rng) for _ in range(4))
        if not pairwise_distinct(lines):
            continue
        l1, l2, l3, l4 = lines
        x0, x1 = _random_linear_on(l4, rng), _random_linear_on(l4, rng)
        y0, y1 = _random_linear_on(l3, rng), _random_linear_on(l3, rng)
        if not (pairwise_distinct((x0, x1)) and pairwise_distinct((y0, y1))):
            continue
        try:
            g4 = _with_contraction([l1, l2, l3], l4, x0 * x1, rng)
            g3 = _with_contraction([l1, l2, l4], l3, y0 * y1, rng)
        except linalg.Inconsistent:
            continue
        f = g4 + g3 + random_on_line(l1, rng) + random_on_line(l2, rng)
        return PlantedInstance(f, lines, (x0, x1), (y0, y1))


def three_line_instance(seed):
    """Generic quintic apolar to three random lines."""
    rng = random.Random(seed)
    while True:
        lines = tuple(random_line(rng) for _ in range(3))
        if pairwise_distinct(lines):
            break
    f = Form.zero(3, 5)
    for l in lines:
        f = f + random_on_line(l, rng)
    return f, lines
