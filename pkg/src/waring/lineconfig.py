"""Configurations of lines apolar to a ternary quintic.

A configuration of ``k`` pairwise distinct lines ``l^1 .. l^k`` (linear
operators) is apolar to ``f`` when ``l^1 ... l^k ⌟ f = 0``. The quintic
decomposition needs one of three certified shapes:

* ``k = 2``: ``l1 l2 ⌟ f = 0``;
* ``k = 3``: ``l1 l2 l3 ⌟ f = 0`` with ``l1 l3 ⌟ f`` and ``l1 l2 ⌟ f`` not cubes
  and ``l2 l3 ⌟ f`` nonzero;
* ``k = 4``: ``l1 l2 l3 l4 ⌟ f = 0`` with ``l1 l2 l3 ⌟ f`` and ``l1 l2 l4 ⌟ f``
  not squares and ``l1 l3 l4 ⌟ f``, ``l2 l3 l4 ⌟ f`` nonzero.

`refine_configuration` searches for one of these and re-checks every
predicate before returning.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from . import linalg
from .apolarity import apolar_kernel, find_kernel_line_in_pencil, is_power, linear_factors
from .errors import DegenerateG, NonTransverse, NotInKernel, RetriesExhausted, ZeroForm
from .linalg import cross
from .poly import (
    Form,
    contract,
    dual_embed,
    dual_restrict,
    evaluate,
    line_basis,
    monomials,
    product,
    restrict_to_line,
)
from .scalar import (
    DEFAULT_POLICY,
    ONE,
    ZERO,
    at_policy_precision,
    is_exact,
    sqrt,
    univariate_roots,
    working_precision,
)


@dataclass(frozen=True)
class LineConfiguration:
    lines: tuple
    kind: int
    cert: tuple = ()
    attempts: int = 0
    route: str = ""

    @property
    def certified(self):
        return bool(self.cert) and all(ok for _, ok in self.cert)

    def certificate_table(self):
        return "\n".join(f"{name} : {'true' if ok else 'false'}" for name, ok in self.cert)


# ---------------------------------------------------------------------------
# small predicates


def normalize_line(l):
    """Scale so the largest-magnitude coordinate (first on ties) equals 1."""
    mags = [abs(c) for c in l.coeffs]
    k = mags.index(max(mags))
    return l.scale(1 / l.coeffs[k])


@at_policy_precision
def distinct(l, m, policy=DEFAULT_POLICY):
    c = cross(l.coeffs, m.coeffs)
    if all(is_exact(x) for x in l.coeffs + m.coeffs):
        return any(x != 0 for x in c)
    return max(abs(x) for x in c) > policy.zero_threshold * l.norm() * m.norm()


@at_policy_precision
def pairwise_distinct(lines, policy=DEFAULT_POLICY):
    return all(distinct(a, b, policy) for a, b in combinations(lines, 2))


def _scale(f):
    return max(f.norm(), 1)


@at_policy_precision
def vanishes(ops, f, policy=DEFAULT_POLICY):
    g = contract(product(ops, 3), f)
    return g.is_zero(policy, scale=_scale(f))


@at_policy_precision
def is_square_or_zero(q, policy=DEFAULT_POLICY, scale=1):
    return q.is_zero(policy, scale) or is_power(q, policy)


@at_policy_precision
def certify(f, lines, policy=DEFAULT_POLICY):
    """Evaluate the certificate predicates for the configuration shape."""
    k = len(lines)
    cert = [("lines distinct", pairwise_distinct(lines, policy))]
    s = _scale(f)

    def c(*idx):
        return contract(product([lines[i] for i in idx], 3), f)

    if k == 2:
        cert.append(("l1l2 f = 0", c(0, 1).is_zero(policy, s)))
    elif k == 3:
        cert.append(("l1l2l3 f = 0", c(0, 1, 2).is_zero(policy, s)))
        cert.append(("l1l3 f not cube", not is_square_or_zero(c(0, 2), policy, s)))
        cert.append(("l1l2 f not cube", not is_square_or_zero(c(0, 1), policy, s)))
        cert.append(("l2l3 f != 0", not c(1, 2).is_zero(policy, s)))
    elif k == 4:
        cert.append(("l1l2l3l4 f = 0", c(0, 1, 2, 3).is_zero(policy, s)))
        cert.append(("l1l2l3 f not square", not is_square_or_zero(c(0, 1, 2), policy, s)))
        cert.append(("l1l2l4 f not square", not is_square_or_zero(c(0, 1, 3), policy, s)))
        cert.append(("l1l3l4 f != 0", not c(0, 2, 3).is_zero(policy, s)))
        cert.append(("l2l3l4 f != 0", not c(1, 2, 3).is_zero(policy, s)))
    else:
        raise ValueError("configurations have 2, 3 or 4 lines")
    return tuple(cert)


def _try_orders(f, lines, policy):
    """First ordering of the lines whose certificate passes, or None."""
    k = len(lines)
    if k == 4:
        orders = []
        for pair in combinations(range(4), 2):
            rest = [i for i in range(4) if i not in pair]
            orders.append(rest + list(pair))
    elif k == 3:
        orders = [[i] + [j for j in range(3) if j != i] for i in range(3)]
    else:
        orders = [[0, 1]]
    for order in orders:
        ls = tuple(lines[i] for i in order)
        cert = certify(f, ls, policy)
        if all(ok for _, ok in cert):
            return ls, cert
    return None


# ---------------------------------------------------------------------------
# conics


def conic_matrix(q):
    """Symmetric matrix of a ternary quadric."""
    M = [[ZERO] * 3 for _ in range(3)]
    for e, c in zip(monomials(3, 2), q.coeffs):
        idx = [i for i in range(3) for _ in range(e[i])]
        i, j = idx
        if i == j:
            M[i][i] = c
        else:
            M[i][j] = c / 2
            M[j][i] = c / 2
    return M


def _adjugate(A):
    adj = [[ZERO] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != j]
            c = [x for x in range(3) if x != i]
            minor = A[r[0]][c[0]] * A[r[1]][c[1]] - A[r[0]][c[1]] * A[r[1]][c[0]]
            adj[i][j] = minor if (i + j) % 2 == 0 else -minor
    return adj


@at_policy_precision
def factor_conic(q, policy=DEFAULT_POLICY):
    """Two distinct linear factors of a rank-two ternary quadric, or None."""
    A = conic_matrix(q)
    adj = _adjugate(A)
    amax = max(abs(adj[i][i]) for i in range(3))
    exact = q.is_exact()
    qs = max(q.norm(), 1)
    if (amax == 0) if exact else (amax <= policy.zero_threshold * qs * qs):
        return None
    i = max(range(3), key=lambda t: abs(adj[t][t]))
    pi = sqrt(-4 * adj[i][i])
    p = [-4 * adj[t][i] / pi for t in range(3)]
    px = [[ZERO, -p[2], p[1]], [p[2], ZERO, -p[0]], [-p[1], p[0], ZERO]]
    for sign in (1, -1):
        B = [[A[r][c] + sign * px[r][c] / 2 for c in range(3)] for r in range(3)]
        r0, c0 = max(((r, c) for r in range(3) for c in range(3)), key=lambda rc: abs(B[rc[0]][rc[1]]))
        g = Form.linear([B[r][c0] for r in range(3)])
        h = Form.linear([B[r0][c] / B[r0][c0] for c in range(3)])
        if (g * h - q).is_zero(policy, scale=qs):
            return g, h
    return None


def _cubic_on_pencil(qa, qb):
    """Coefficients (descending) of ``det(qa + tau qb)`` in ``tau``."""
    taus = [0, 1, -1, 2]
    vals = [linalg.det3(conic_matrix(qa + qb.scale(t))) for t in taus]
    V = [[t ** 3, t ** 2, t, 1] for t in taus]
    return linalg.solve(V, vals)


@at_policy_precision
def reducible_members(qa, qb, policy=DEFAULT_POLICY, rng=None):
    """Line pairs from degenerate conics in the pencil ``qa + tau qb``."""
    coeffs = _cubic_on_pencil(qa, qb)
    scale = max(abs(c) for c in coeffs) if any(c != 0 for c in coeffs) else 0
    out = []
    cands = []
    if scale == 0 or all(
        (c == 0) if is_exact(c) else abs(c) <= policy.zero_threshold * max(qa.norm(), qb.norm()) ** 3
        for c in coeffs
    ):
        rng = rng or random.Random(0)
        cands = [qa + qb.scale(rng.randint(-9, 9)) for _ in range(3)] + [qa, qb]
    else:
        for tau, _ in univariate_roots(coeffs, policy):
            cands.append(qa + qb.scale(tau))
        lead = coeffs[0]
        if (lead == 0) if is_exact(lead) else abs(lead) <= policy.zero_threshold * scale:
            cands.append(qb)
    for c in cands:
        fac = factor_conic(c, policy)
        if fac is not None:
            out.append(tuple(normalize_line(x) for x in fac))
    return out


# ---------------------------------------------------------------------------
# searches


def _random_line(rng):
    while True:
        v = [rng.randint(-9, 9) for _ in range(3)]
        if any(v):
            return normalize_line(Form.linear(v))


def _random_combo(basis, rng):
    out = basis[0].scale(ZERO)
    for b in basis:
        out = out + b.scale(rng.randint(-9, 9))
    return out


@at_policy_precision
def find_apolar_split_quartic(f, rng, policy=DEFAULT_POLICY):
    """Four distinct lines with ``l1 l2 l3 l4 ⌟ f = 0``, or None.

    ``l1, l2`` are random; ``l3 l4`` is a reducible conic in the net
    ``{q : l1 l2 q ⌟ f = 0}``, found on a random pencil of that net through
    the cubic discriminant.
    """
    with working_precision(policy):
        l1 = _random_line(rng)
        l2 = _random_line(rng)
        if not distinct(l1, l2, policy):
            return None
        base = product([l1, l2], 3)
        cols = [contract(base * Form.monomial(e), f).coeffs for e in monomials(3, 2)]
        M = [[col[i] for col in cols] for i in range(3)]
        N = [Form(3, 2, tuple(v)) for v in linalg.kernel(M, 6, policy)]
        if len(N) < 3:
            return None
        qa = _random_combo(N, rng)
        qb = _random_combo(N, rng)
        if qa.is_zero(policy) or qb.is_zero(policy):
            return None
        for l3, l4 in reducible_members(qa, qb, policy, rng):
            lines = (l1, l2, l3, l4)
            if pairwise_distinct(lines, policy) and vanishes(lines, f, policy):
                return lines
        return None


def recap_tangent_lines(f, x, p, policy=DEFAULT_POLICY):
    """Tangents to ``p = 0`` where it meets the line ``x = 0``.

    Requires ``x^2 ⌟ f = 0`` and ``p ⌟ f = 0``; the tangents multiply to an
    operator annihilating ``f``.
    """
    with working_precision(policy):
        pb = dual_restrict(p, x)
        roots = linear_factors(pb, policy)
        if any(m > 1 for _, m in roots) or len(roots) != p.degree:
            raise NonTransverse("curve meets the line with multiplicity")
        u, w, _ = line_basis(x)
        grads = [contract(Form.variable(3, i), p) for i in range(3)]
        lines = []
        for (a, b), _ in roots:
            z = [a * ui + b * wi for ui, wi in zip(u, w)]
            l = Form.linear([evaluate(g, z) for g in grads])
            if l.is_zero(policy, scale=max(p.norm(), 1)):
                raise NonTransverse("singular point of the curve on the line")
            lines.append(normalize_line(l))
        if not vanishes(lines, f, policy):
            raise NotInKernel("tangent product does not annihilate f", stage="recap_tangent_lines")
        return lines


def _binary_line(a, b):
    """Binary linear operator vanishing at the point (a, b)."""
    return Form.linear([b, -a])


def double_refine(f, x1, x2, rng=None, policy=DEFAULT_POLICY, max_tries=64):
    """Configuration through ``x1`` given ``x1 x2^2 ⌟ f = 0``.

    Returns either three lines ``(x1, x2, l3)`` or four lines
    ``(x1, l2, l3, l4)`` apolar to ``f``; ``x1=None`` lets the routine pick
    ``x1`` when ``x2^2 ⌟ f = 0``.
    """
    rng = rng or random.Random(0)
    with working_precision(policy):
        if x1 is None:
            for _ in range(max_tries):
                cand = _random_line(rng)
                if not distinct(cand, x2, policy):
                    continue
                try:
                    return double_refine(f, cand, x2, rng, policy, max_tries)
                except DegenerateG:
                    continue
            raise DegenerateG("no admissible x1", stage="double_refine")
        s = _scale(f)
        if not contract(x1 * x2 * x2, f).is_zero(policy, s):
            raise NotInKernel("x1 x2^2 does not annihilate f", stage="double_refine")
        fp = contract(x1, f)
        G = contract(x2, fp)
        Gb = restrict_to_line(G, x2, policy, check=False)
        if Gb.is_zero(policy, s) or is_power(Gb, policy):
            ker = apolar_kernel(Gb, 1, policy)
            L3 = ker[0] if ker else Form.linear([ONE, ZERO])
            base = dual_embed(L3, x2)
            for c in range(0, 8):
                l3 = normalize_line(base + x2.scale(c))
                if pairwise_distinct((x1, x2, l3), policy):
                    return (x1, x2, l3)
            raise DegenerateG("cannot lift the annihilating line", stage="double_refine")
        V = apolar_kernel(Gb, 3, policy)
        X1 = dual_restrict(x1, x2)
        k = line_basis(x2)[2]
        xs = [ZERO] * 3
        xs[k] = 1 / x2.coeffs[k]
        x_2 = Form.linear(xs)
        F = fp - x_2 * G
        Fb = restrict_to_line(F, x2, policy, check=False)
        for _ in range(max_tries):
            H = _random_combo(V, rng)
            if H.is_zero(policy):
                continue
            roots = linear_factors(H, policy)
            if len(roots) != 3 or any(m > 1 for _, m in roots):
                continue
            Ls = [_binary_line(a, b) for (a, b), _ in roots]
            if not all(distinct2(L, X1, policy) for L in Ls):
                continue
            if any(contract(Ls[i] * Ls[j], Gb).is_zero(policy, s) for i, j in combinations(range(3), 2)):
                continue
            rhs = [-c for c in contract(H, Fb).coeffs]
            cols = [contract(Form.monomial(e), Gb).coeffs for e in monomials(2, 2)]
            A = [[col[i] for col in cols] for i in range(2)]
            Kv = linalg.solve(A, rhs, policy)
            Kb = Form(2, 2, tuple(Kv))
            p = dual_embed(H, x2) + x2 * dual_embed(Kb, x2)
            try:
                tangents = recap_tangent_lines(fp, x2, p, policy)
            except (NonTransverse, NotInKernel):
                continue
            lines = (x1,) + tuple(tangents)
            if pairwise_distinct(lines, policy):
                return lines
        raise DegenerateG("no admissible cubic found", stage="double_refine")


def distinct2(a, b, policy=DEFAULT_POLICY):
    d = a.coeffs[0] * b.coeffs[1] - a.coeffs[1] * b.coeffs[0]
    if is_exact(d):
        return d != 0
    return abs(d) > policy.zero_threshold * a.norm() * b.norm()


def _square_root_vector(q):
    """``v`` with ``q`` proportional to ``v^2`` (q a nonzero square)."""
    cols = [contract(Form.variable(3, i), q) for i in range(3)]
    best = max(cols, key=lambda c: c.norm())
    return best


def _repairs(f, lines, rng, policy):
    """Deterministic repairs of a failing four-line configuration."""
    s = _scale(f)
    out = []
    for i in range(4):
        others = [lines[j] for j in range(4) if j != i]
        qi = contract(product(others, 3), f)
        if qi.is_zero(policy, s) or not is_power(qi, policy):
            continue
        v = _square_root_vector(qi)
        u, w, _ = line_basis(v)
        m1, m2 = Form.linear(u), Form.linear(w)
        for a, b in combinations(range(3), 2):
            x3, x4 = others[a], others[b]
            g = contract(x3 * x4, f)
            l1 = find_kernel_line_in_pencil(m1, m2, g, policy)
            if l1 is None or l1.is_zero(policy):
                continue
            l1 = normalize_line(l1)
            if distinct(l1, x3, policy) and distinct(l1, x4, policy):
                out.append((l1, x3, x4))
                continue
            pair = (x4, x3) if not distinct(l1, x3, policy) else (x3, x4)
            try:
                out.append(double_refine(f, pair[0], pair[1], rng, policy))
            except (DegenerateG, NotInKernel):
                continue
    return out


def _kernel_line_configs(f, policy):
    K1 = apolar_kernel(f, 1, policy)
    if len(K1) >= 2:
        return (normalize_line(K1[0]), normalize_line(K1[1]))
    if len(K1) == 1:
        l = normalize_line(K1[0])
        for i in range(3):
            e = Form.variable(3, i)
            if distinct(l, e, policy):
                return (l, e)
    return None


def _reducible_kernel_conic(f, rng, policy):
    K2 = apolar_kernel(f, 2, policy)
    cands = []
    for q in K2:
        fac = factor_conic(q, policy)
        if fac is not None:
            cands.append(tuple(normalize_line(x) for x in fac))
    for qa, qb in combinations(K2, 2):
        cands.extend(reducible_members(qa, qb, policy, rng))
    for c in cands:
        if pairwise_distinct(c, policy) and vanishes(c, f, policy):
            return c
    return None


def refine_configuration(f, rng=None, policy=DEFAULT_POLICY, max_retries=64):
    """A certified configuration of kind 2, 3 or 4 for the quintic ``f``."""
    if f.nvars != 3:
        raise ValueError("ternary form expected")
    if f.is_zero(policy):
        raise ZeroForm("zero form")
    rng = rng or random.Random(0)
    with working_precision(policy):
        lines = _kernel_line_configs(f, policy)
        if lines is None:
            lines = _reducible_kernel_conic(f, rng, policy)
        if lines is not None:
            cert = certify(f, lines, policy)
            if all(ok for _, ok in cert):
                return LineConfiguration(lines, 2, cert, 0, "kernel")
        for attempt in range(1, max_retries + 1):
            lines = find_apolar_split_quartic(f, rng, policy)
            if lines is None:
                continue
            found = _try_orders(f, lines, policy)
            route = "net of conics"
            if found is None:
                for i in range(4):
                    rest = tuple(lines[j] for j in range(4) if j != i)
                    if vanishes(rest, f, policy):
                        found = _try_orders(f, rest, policy)
                        if found:
                            break
            if found is None:
                route = "repair"
                for cand in _repairs(f, lines, rng, policy):
                    found = _try_orders(f, cand, policy)
                    if found is not None:
                        break
            if found is not None:
                ls, cert = found
                return LineConfiguration(ls, len(ls), cert, attempt, route)
        raise RetriesExhausted("no certified configuration found", stage="refine_configuration")
