"""Catalecticants, apolar operators and binary Waring decompositions."""
from __future__ import annotations

import random
from dataclasses import dataclass

import gmpy2

from . import linalg
from .errors import Inconsistent, RetriesExhausted, ZeroForm
from .poly import (
    Form,
    contract,
    dual_embed,
    dual_restrict,
    line_basis,
    monomials,
    num_monomials,
    power,
    restrict_to_line,
)
from .scalar import MPC, DEFAULT_POLICY, ONE, ZERO, at_policy_precision, homogeneous_roots, is_exact, working_precision


@dataclass(frozen=True)
class Decomposition:
    """``sum c * (a . x)^degree`` over ``terms = ((c, a), ...)``."""

    nvars: int
    degree: int
    terms: tuple

    def __len__(self):
        return len(self.terms)

    def precision(self):
        """Largest working precision among the stored scalars (bits)."""
        bits = [x.precision[0] for c, a in self.terms for x in (c, *a) if isinstance(x, MPC)]
        return max(bits, default=gmpy2.get_context().precision)

    def to_form(self):
        with gmpy2.context(gmpy2.get_context(), precision=self.precision()):
            out = Form.zero(self.nvars, self.degree)
            for c, a in self.terms:
                out = out + power(Form.linear(a), self.degree).scale(c)
            return out

    def residual(self, f):
        """``||f - sum||_inf / ||f||_inf`` (0 for an exact match)."""
        with gmpy2.context(gmpy2.get_context(), precision=self.precision()):
            diff = f - self.to_form()
            n = f.norm()
            return diff.norm() / n if n != 0 else diff.norm()

    def __add__(self, other):
        return Decomposition(self.nvars, self.degree, self.terms + other.terms)


def catalecticant(f, delta):
    """Matrix of ``p -> p ⌟ f`` on operators of degree ``delta``.

    Columns follow ``monomials(nvars, delta)``, rows follow the monomials of
    degree ``deg f - delta``.
    """
    n, d = f.nvars, f.degree
    cols = []
    for e in monomials(n, delta):
        cols.append(contract(Form.monomial(e), f).coeffs)
    m = num_monomials(n, d - delta)
    return [[cols[j][i] for j in range(len(cols))] for i in range(m)]


@at_policy_precision
def apolar_kernel(f, delta, policy=DEFAULT_POLICY):
    """Basis of the operators of degree ``delta`` annihilating ``f``."""
    M = catalecticant(f, delta)
    return [Form(f.nvars, delta, tuple(v)) for v in linalg.kernel(M, num_monomials(f.nvars, delta), policy)]


@at_policy_precision
def is_power(f, policy=DEFAULT_POLICY):
    """True when ``f`` is a nonzero multiple of ``l^d`` for a linear ``l``.

    Tested on the 2x2 minors of the first catalecticant; this also works for
    ternary forms that live on a line.
    """
    if f.degree == 0:
        return not f.is_zero(policy)
    if f.is_zero(policy):
        return False
    cols = [contract(Form.variable(f.nvars, i), f).coeffs for i in range(f.nvars)]
    exact = f.is_exact()
    tol = None if exact else policy.zero_threshold * max(abs(c) for col in cols for c in col) ** 2
    m = len(cols[0])
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            for a in range(m):
                for b in range(a + 1, m):
                    minor = cols[i][a] * cols[j][b] - cols[i][b] * cols[j][a]
                    if (minor != 0) if exact else (abs(minor) > tol):
                        return False
    return True


def is_nonzero(f, policy=DEFAULT_POLICY, scale=1):
    return not f.is_zero(policy, scale)


def linear_factors(g, policy=DEFAULT_POLICY):
    """Roots of a binary operator ``g`` as points ``(a, b)`` with multiplicity."""
    return homogeneous_roots(list(g.coeffs), policy)


@at_policy_precision
def is_squarefree(g, policy=DEFAULT_POLICY):
    return all(m == 1 for _, m in linear_factors(g, policy))


def _solve_coefficients(f, points, policy):
    d = f.degree
    cols = [power(Form.linear(p), d).coeffs for p in points]
    A = [[col[i] for col in cols] for i in range(len(cols[0]))]
    return linalg.solve(A, list(f.coeffs), policy)


def _points_of(g, policy):
    return [pt for pt, _ in linear_factors(g, policy)]


def _random_combo(basis, rng):
    out = basis[0].scale(ZERO)
    for b in basis:
        out = out + b.scale(rng.randint(-7, 7) or 1)
    return out


def sylvester_data(f, policy=DEFAULT_POLICY):
    """``(s, kernel basis at s)`` for a nonzero binary form."""
    d = f.degree
    for s in range(1, d + 2):
        ker = apolar_kernel(f, s, policy)
        if ker:
            return s, ker
    raise ZeroForm("no apolar operator found")


def _rank_from_data(f, s, ker, policy):
    d = f.degree
    if len(ker) >= 2:
        return s
    if is_squarefree(ker[0], policy):
        return s
    return d + 2 - s


def binary_rank(f, policy=DEFAULT_POLICY):
    """Waring rank of a binary form (0 for the zero form)."""
    if f.nvars != 2:
        raise ValueError("binary_rank expects a binary form")
    with working_precision(policy):
        if f.is_zero(policy):
            return 0
        if f.degree == 0:
            return 1
        s, ker = sylvester_data(f, policy)
        return _rank_from_data(f, s, ker, policy)


def binary_decompose(f, policy=DEFAULT_POLICY, rng=None, max_tries=64):
    """Minimal Waring decomposition of a binary form."""
    if f.nvars != 2:
        raise ValueError("binary_decompose expects a binary form")
    rng = rng or random.Random(0)
    with working_precision(policy):
        if f.is_zero(policy):
            return Decomposition(2, f.degree, ())
        d = f.degree
        if d == 0:
            return Decomposition(2, 0, ((f.coeffs[0], (ONE, ZERO)),))
        s, ker = sylvester_data(f, policy)
        r = _rank_from_data(f, s, ker, policy)
        if r == s and len(ker) == 1:
            candidates = [ker[0]]
            basis = None
        else:
            basis = ker if r == s else apolar_kernel(f, r, policy)
            candidates = []
        tries = 0
        while True:
            if candidates:
                g = candidates.pop()
            else:
                if tries >= max_tries:
                    raise RetriesExhausted("no squarefree apolar operator found", stage="binary")
                tries += 1
                g = _random_combo(basis, rng)
                if g.is_zero(policy):
                    continue
            if not is_squarefree(g, policy):
                continue
            points = _points_of(g, policy)
            try:
                coeffs = _solve_coefficients(f, points, policy)
            except Inconsistent:
                continue
            return Decomposition(2, d, tuple((c, tuple(p)) for c, p in zip(coeffs, points)))


@at_policy_precision
def line_rank(f, l, policy=DEFAULT_POLICY):
    """Waring rank of a ternary form annihilated by the line ``l``."""
    return binary_rank(restrict_to_line(f, l, policy), policy)


@at_policy_precision
def line_decompose(f, l, policy=DEFAULT_POLICY, rng=None):
    """Decompose a ternary form annihilated by ``l`` using points on ``l``."""
    dec = binary_decompose(restrict_to_line(f, l, policy), policy, rng)
    u, w, _ = line_basis(l)
    terms = tuple((c, tuple(a * ui + b * wi for ui, wi in zip(u, w))) for c, (a, b) in dec.terms)
    return Decomposition(3, f.degree, terms)


def _small(x, policy):
    return x == 0 if is_exact(x) else abs(x) <= policy.zero_threshold


@at_policy_precision
def find_kernel_line_in_pencil(m1, m2, f, policy=DEFAULT_POLICY):
    """A nonzero ``c1*m1 + c2*m2`` annihilating ``f``, or None."""
    a = contract(m1, f).coeffs
    b = contract(m2, f).coeffs
    ker = linalg.kernel([[x, y] for x, y in zip(a, b)], 2, policy)
    if not ker:
        return None
    c1, c2 = ker[0]
    return m1.scale(c1) + m2.scale(c2)


__all__ = [
    "Decomposition",
    "apolar_kernel",
    "binary_decompose",
    "binary_rank",
    "catalecticant",
    "dual_embed",
    "dual_restrict",
    "find_kernel_line_in_pencil",
    "is_power",
    "is_squarefree",
    "line_decompose",
    "line_rank",
]
