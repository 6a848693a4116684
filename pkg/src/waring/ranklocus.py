"""Pencils of rank-two forms with a prescribed contraction.

Given linear operators ``l^1 .. l^k`` (with product ``p``) and a quadric
``q = x0 * x1`` that is not a square, `build_r` produces the form ``r`` whose
coefficients are binary forms of degree ``k`` in ``(t0, t1)`` such that every
specialisation ``r(lam, mu)`` outside a finite exceptional set has Waring
rank two and satisfies ``p ⌟ r(lam, mu) ∈ <q>``.

Everything is computed in the ambient variables; ``x0, x1`` may be forms in
two or three variables.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .apolarity import (
    Decomposition,
    _points_of,
    _random_combo,
    _small,
    apolar_kernel,
    is_power,
    is_squarefree,
    linear_factors,
)
from .errors import (
    CubeInput,
    ExceptionalParameter,
    IdentityFailure,
    Inconsistent,
    NotDivisible,
    RetriesExhausted,
    SquareQ,
)
from .linalg import cross
from .poly import Form, ParamForm, binary, contract, embed_from_line, pair, power, product, restrict_to_line
from .scalar import DEFAULT_POLICY, ONE, ZERO, at_policy_precision, as_scalar, is_exact, working_precision


@dataclass(frozen=True)
class RankTwoPencil:
    degree: int
    factors: tuple
    x0: Form
    x1: Form
    r: ParamForm
    a: tuple
    roots: tuple
    v: tuple

    @property
    def p(self):
        return product(self.factors, self.x0.nvars)

    @property
    def q(self):
        return self.x0 * self.x1

    @property
    def exceptional(self):
        return self.roots + ((ONE, ZERO), (ZERO, ONE))

    def is_exceptional(self, lam, mu, policy=DEFAULT_POLICY):
        for a, b in self.exceptional:
            d = lam * b - mu * a
            if is_exact(d):
                if d == 0:
                    return True
            elif abs(d) <= policy.zero_threshold * max(abs(lam), abs(mu), abs(a), abs(b), 1) ** 2:
                return True
        return False


def _distinct(x0, x1, policy):
    if x0.nvars == 2:
        det = x0.coeffs[0] * x1.coeffs[1] - x0.coeffs[1] * x1.coeffs[0]
        mags = [abs(det)]
    else:
        mags = [abs(c) for c in cross(x0.coeffs, x1.coeffs)]
    if all(is_exact(c) for c in x0.coeffs + x1.coeffs):
        return any(m != 0 for m in mags)
    return max(mags) > policy.zero_threshold * max(x0.norm(), 1) * max(x1.norm(), 1)


def build_r(factors, x0, x1, policy=DEFAULT_POLICY):
    """Construct the rank-two pencil for ``p = prod(factors)`` and ``q = x0*x1``."""
    factors = tuple(factors)
    k = len(factors)
    d = k + 2
    with working_precision(policy):
        if not _distinct(x0, x1, policy):
            raise SquareQ("x0 and x1 are proportional")
        ev0 = [pair(l, x0.coeffs) for l in factors]
        ev1 = [pair(l, x1.coeffs) for l in factors]
        p_minus = product([binary([a, -b]) for a, b in zip(ev0, ev1)], 2) if k else Form.constant(2, 1)
        p_plus = product([binary([a, b]) for a, b in zip(ev0, ev1)], 2) if k else Form.constant(2, 1)
        plus = ParamForm((x0, x1)).power(d)
        minus = ParamForm((x0, -x1)).power(d)
        g = plus.mul_t(p_minus) - minus.mul_t(p_plus)
        try:
            h = g.exact_divide(binary([1, 0]), policy).exact_divide(binary([0, 1]), policy)
            r = h.desquare(policy)
        except NotDivisible as exc:
            raise IdentityFailure(f"pencil construction: {exc}", stage="build_r") from exc
        a = tuple(binary([u * u, -w * w]) for u, w in zip(ev0, ev1))
        roots = tuple((w * w, u * u) for u, w in zip(ev0, ev1))
        v = tuple(x0.scale(w) - x1.scale(u) for u, w in zip(ev0, ev1))
        return RankTwoPencil(d, factors, x0, x1, r, a, roots, v)


def defining_rhs(P):
    """``p(t0 x0 - t1 x1)(t0 x0 + t1 x1)^d - p(t0 x0 + t1 x1)(t0 x0 - t1 x1)^d``."""
    ev0 = [pair(l, P.x0.coeffs) for l in P.factors]
    ev1 = [pair(l, P.x1.coeffs) for l in P.factors]
    p_minus = product([binary([a, -b]) for a, b in zip(ev0, ev1)], 2)
    p_plus = product([binary([a, b]) for a, b in zip(ev0, ev1)], 2)
    plus = ParamForm((P.x0, P.x1)).power(P.degree)
    minus = ParamForm((P.x0, -P.x1)).power(P.degree)
    return plus.mul_t(p_minus) - minus.mul_t(p_plus)


def squared_lhs(P):
    """``t0 t1 * r(t0^2, t1^2)``."""
    zero = Form.zero(P.r.nvars, P.r.degree)
    rows = [zero]
    for j, row in enumerate(P.r.rows):
        rows.append(row)
        if j < P.r.tdegree:
            rows.append(zero)
    rows.append(zero)
    return ParamForm(tuple(rows))


def r_quotient(P, subset, policy=DEFAULT_POLICY):
    """``(prod_{i in I} l^i ⌟ r) / prod_{i in I} a^i`` as an exact quotient."""
    with working_precision(policy):
        out = P.r
        for i in subset:
            out = out.contract(P.factors[i])
        for i in subset:
            out = out.exact_divide(P.a[i], policy)
        return out


def sample_rank_two(P, lam, mu, policy=DEFAULT_POLICY):
    lam, mu = as_scalar(lam), as_scalar(mu)
    if P.is_exceptional(lam, mu, policy):
        raise ExceptionalParameter(f"[{lam}:{mu}] lies in the exceptional set")
    with working_precision(policy):
        return P.r.evaluate(lam, mu)


@at_policy_precision
def split_quadric(q, line=None, policy=DEFAULT_POLICY):
    """Linear forms ``x0, x1`` with ``q = x0 * x1``.

    Binary quadrics are factored directly; ternary ones must be annihilated
    by ``line`` and are factored on it. Raises `SquareQ` for squares.
    """
    with working_precision(policy):
        if q.nvars == 3:
            qb = restrict_to_line(q, line, policy)
        else:
            qb = q
        roots = linear_factors(qb, policy)
        if len(roots) != 2:
            raise SquareQ("quadric is a square")
        (a0, b0), _ = roots[0]
        (a1, b1), _ = roots[1]
        f0 = binary([b0, -a0])
        f1 = binary([b1, -a1])
        prod = f0 * f1
        j = max(range(3), key=lambda i: abs(prod.coeffs[i]))
        f0 = f0.scale(qb.coeffs[j] / prod.coeffs[j])
        if q.nvars == 3:
            return embed_from_line(f0, line), embed_from_line(f1, line)
        return f0, f1


def rank3_element(p, t, policy=DEFAULT_POLICY, rng=None, max_tries=64):
    """A binary quintic ``g`` of rank 3 with ``p ⌟ g = t``.

    ``p`` is a binary quadratic operator and ``t`` a binary cubic which is
    not a cube. A random cubic operator ``c`` with ``c ⌟ t = 0`` and three
    distinct roots, none a root of ``p``, fixes the three points; the
    coefficients then follow from ``p ⌟ v^5 = 20 p(v) v^3``.
    """
    rng = rng or random.Random(0)
    with working_precision(policy):
        if is_power(t, policy) or t.is_zero(policy):
            raise CubeInput("target cubic is a cube")
        K = apolar_kernel(t, 3, policy)
        for _ in range(max_tries):
            c = _random_combo(K, rng)
            if c.is_zero(policy) or not is_squarefree(c, policy):
                continue
            points = _points_of(c, policy)
            if len(points) != 3:
                continue
            vals = [contract(p, power(Form.linear(v), 2)).coeffs[0] / 2 for v in points]
            if any(_small(v, policy) for v in vals):
                continue
            cubes = [power(Form.linear(v), 3).coeffs for v in points]
            A = [[col[i] for col in cubes] for i in range(4)]
            try:
                a = linalg.solve(A, list(t.coeffs), policy)
            except Inconsistent:
                continue
            if any(_small(x, policy) for x in a):
                continue
            coeffs = [x / (20 * v) for x, v in zip(a, vals)]
            dec = Decomposition(2, 5, tuple((cf, tuple(v)) for cf, v in zip(coeffs, points)))
            return dec
        raise RetriesExhausted("no rank-3 element found", stage="rank3_element")



# ---------------------------------------------------------------------------
# diagnostic: the finite set of cubic classes to avoid when splitting


@dataclass(frozen=True)
class LrBadSet:
    u0: Form
    u1: Form
    v1: Form
    v2: Form
    vhk: tuple
    F: tuple


def _proportional(a, b, policy):
    if a.is_zero(policy) or b.is_zero(policy):
        return a.is_zero(policy) and b.is_zero(policy)
    ca, cb = a.coeffs, b.coeffs
    for i in range(len(ca)):
        for j in range(i + 1, len(ca)):
            m = ca[i] * cb[j] - ca[j] * cb[i]
            if (m != 0) if is_exact(m) else abs(m) > policy.zero_threshold * a.norm() * b.norm():
                return False
    return True


@at_policy_precision
def compute_lr_bad_set(q, x1, x2, x3, policy=DEFAULT_POLICY):
    """Cubic classes built from a binary quadric and three binary operators."""
    with working_precision(policy):
        if is_power(q, policy):
            # q = c * y^2: the only class is <y^3>
            kern = apolar_kernel(q, 1, policy)[0]
            y = binary([kern.coeffs[1], -kern.coeffs[0]])
            cube = power(y, 3)
            zero = Form.zero(2, 3)
            return LrBadSet(y, y, zero, zero, (), (cube,))
        y0, y1 = split_quadric(q, policy=policy)
        u0 = y0.scale(pair(x3, y1.coeffs)) + y1.scale(pair(x3, y0.coeffs))
        u1 = y0.scale(pair(x3, y1.coeffs)) - y1.scale(pair(x3, y0.coeffs))
        vs = []
        for xh in (x1, x2):
            vs.append(power(u0, 3).scale(pair(xh, u1.coeffs)) - power(u1, 3).scale(pair(xh, u0.coeffs)))
        vhk = []
        ys = (y0, y1)
        for xh in (x1, x2):
            for k in (0, 1):
                yk, yo = ys[k], ys[1 - k]
                vhk.append(power(yk, 3).scale(pair(xh, yo.coeffs))
                           - (power(yk, 2) * yo).scale(3 * pair(xh, yk.coeffs)))
        classes = []
        for c in vs + vhk:
            if c.is_zero(policy):
                continue
            if not any(_proportional(c, e, policy) for e in classes):
                classes.append(c)
        return LrBadSet(u0, u1, vs[0], vs[1], tuple(vhk), tuple(classes))


__all__ = [
    "LrBadSet",
    "RankTwoPencil",
    "build_r",
    "compute_lr_bad_set",
    "defining_rhs",
    "r_quotient",
    "rank3_element",
    "sample_rank_two",
    "split_quadric",
    "squared_lhs",
]
