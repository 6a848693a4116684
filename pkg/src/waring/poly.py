"""Homogeneous forms, contraction, and forms depending on a pencil parameter.

A `Form` stores the coefficients of a homogeneous polynomial in ``nvars``
variables against the monomials of its degree listed in descending
lexicographic order of exponent vectors. The same class represents both a
form and a differential operator acting on forms: ``contract(p, f)`` lets
the variable ``x_i`` of ``p`` act on ``f`` as the partial derivative in
``x_i``.

`ParamForm` is a form whose coefficients are binary forms in pencil
coordinates ``t0, t1``; it is stored as one `Form` per ``t``-monomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DegreeMismatch, NotDivisible, NotInKernel, ParseError
from .scalar import (
    DEFAULT_POLICY,
    ONE,
    ZERO,
    at_policy_precision,
    as_scalar,
    format_scalar,
    is_exact,
    parse_scalar,
)


@lru_cache(maxsize=None)
def monomials(nvars, degree):
    """Exponent tuples of the given degree, descending lex order."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for a in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(nvars, degree):
    return {e: i for i, e in enumerate(monomials(nvars, degree))}


def num_monomials(nvars, degree):
    return math.comb(nvars + degree - 1, degree)


@lru_cache(maxsize=None)
def _mul_table(nvars, d1, d2):
    idx = monomial_index(nvars, d1 + d2)
    m1, m2 = monomials(nvars, d1), monomials(nvars, d2)
    return tuple(
        (i, j, idx[tuple(a + b for a, b in zip(e1, e2))])
        for i, e1 in enumerate(m1)
        for j, e2 in enumerate(m2)
    )


def _falling(b, a):
    out = 1
    for k in range(a):
        out *= b - k
    return out


@lru_cache(maxsize=None)
def _contract_table(nvars, e, d):
    """Entries (i, j, k, c): p_i * f_j contributes c * x^k."""
    idx = monomial_index(nvars, d - e)
    rows = []
    for i, a in enumerate(monomials(nvars, e)):
        for j, b in enumerate(monomials(nvars, d)):
            if all(x <= y for x, y in zip(a, b)):
                c = 1
                for x, y in zip(a, b):
                    c *= _falling(y, x)
                rows.append((i, j, idx[tuple(y - x for x, y in zip(a, b))], c))
    return tuple(rows)


@dataclass(frozen=True, slots=True)
class Form:
    nvars: int
    degree: int
    coeffs: tuple

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, nvars, degree):
        return cls(nvars, degree, (ZERO,) * num_monomials(nvars, degree))

    @classmethod
    def from_dict(cls, nvars, degree, terms):
        idx = monomial_index(nvars, degree)
        c = [ZERO] * len(idx)
        for e, v in terms.items():
            e = tuple(e)
            if len(e) != nvars or sum(e) != degree:
                raise DegreeMismatch(f"monomial {e} not of degree {degree} in {nvars} variables")
            c[idx[e]] += as_scalar(v)
        return cls(nvars, degree, tuple(c))

    @classmethod
    def from_coeffs(cls, nvars, degree, coeffs):
        coeffs = tuple(as_scalar(c) for c in coeffs)
        if len(coeffs) != num_monomials(nvars, degree):
            raise DegreeMismatch("coefficient count does not match degree")
        return cls(nvars, degree, coeffs)

    @classmethod
    def linear(cls, vec):
        return cls(len(vec), 1, tuple(as_scalar(v) for v in vec))

    @classmethod
    def variable(cls, nvars, i):
        return cls.linear([ONE if j == i else ZERO for j in range(nvars)])

    @classmethod
    def constant(cls, nvars, c=1):
        return cls(nvars, 0, (as_scalar(c),))

    @classmethod
    def monomial(cls, exps, c=1):
        return cls.from_dict(len(exps), sum(exps), {tuple(exps): c})

    # inspection -----------------------------------------------------------

    def terms(self):
        """(exponent, coefficient) pairs with nonzero coefficient."""
        return [(e, c) for e, c in zip(monomials(self.nvars, self.degree), self.coeffs) if c != 0]

    def coeff(self, exps):
        return self.coeffs[monomial_index(self.nvars, self.degree)[tuple(exps)]]

    def norm(self):
        return max((abs(c) for c in self.coeffs), default=ZERO)

    def is_exact(self):
        return all(is_exact(c) for c in self.coeffs)

    def is_zero(self, policy=DEFAULT_POLICY, scale=1):
        if self.is_exact():
            return all(c == 0 for c in self.coeffs)
        return self.norm() <= policy.zero_threshold * scale

    def vector(self):
        return list(self.coeffs)

    # arithmetic -----------------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars or self.degree != other.degree:
            raise DegreeMismatch(
                f"forms of shape ({self.nvars},{self.degree}) and ({other.nvars},{other.degree})"
            )

    def __add__(self, other):
        self._check(other)
        return Form(self.nvars, self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return Form(self.nvars, self.degree, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Form(self.nvars, self.degree, tuple(-a for a in self.coeffs))

    def scale(self, c):
        return Form(self.nvars, self.degree, tuple(c * a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Form):
            if other.nvars != self.nvars:
                raise DegreeMismatch("variable count mismatch")
            out = [ZERO] * num_monomials(self.nvars, self.degree + other.degree)
            a, b = self.coeffs, other.coeffs
            for i, j, k in _mul_table(self.nvars, self.degree, other.degree):
                if a[i] != 0 and b[j] != 0:
                    out[k] += a[i] * b[j]
            return Form(self.nvars, self.degree + other.degree, tuple(out))
        if isinstance(other, ParamForm):
            return NotImplemented
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(1 / as_scalar(c))

    def __pow__(self, k):
        return power(self, k)

    # text -----------------------------------------------------------------

    def to_text(self, precision_bits=None):
        lines = [f"vars={self.nvars} deg={self.degree}"]
        for e, c in self.terms():
            lines.append(" ".join(map(str, e)) + " = " + format_scalar(c, precision_bits))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        body = " + ".join(
            f"({format_scalar(c, 64)})*" + "*".join(f"x{i}^{k}" for i, k in enumerate(e) if k)
            for e, c in self.terms()
        )
        return f"Form[{self.nvars},{self.degree}]({body or '0'})"


def power(f, k):
    out = Form.constant(f.nvars, 1)
    base = f
    while k:
        if k & 1:
            out = out * base
        k >>= 1
        if k:
            base = base * base
    return out


def product(forms, nvars=None):
    forms = list(forms)
    out = Form.constant(nvars if nvars is not None else forms[0].nvars, 1)
    for f in forms:
        out = out * f
    return out


def contract(p, f):
    """Apply ``p`` as a constant-coefficient differential operator to ``f``."""
    if isinstance(f, ParamForm):
        return f.contract(p)
    if p.nvars != f.nvars:
        raise DegreeMismatch("variable count mismatch")
    if p.degree > f.degree:
        raise DegreeMismatch("operator degree exceeds form degree")
    out = [ZERO] * num_monomials(f.nvars, f.degree - p.degree)
    a, b = p.coeffs, f.coeffs
    for i, j, k, c in _contract_table(f.nvars, p.degree, f.degree):
        if a[i] != 0 and b[j] != 0:
            out[k] += c * a[i] * b[j]
    return Form(f.nvars, f.degree - p.degree, tuple(out))


def evaluate(f, v):
    """Plain substitution ``f(v)``."""
    total = ZERO
    for e, c in zip(monomials(f.nvars, f.degree), f.coeffs):
        if c != 0:
            t = c
            for vi, k in zip(v, e):
                if k:
                    t = t * vi ** k
            total = total + t
    return total


def evaluate_dual(p, v):
    """``(1/d!) p ⌟ v^d`` for a linear form or vector ``v``; equals ``p(v)``."""
    d = p.degree
    v = v if isinstance(v, Form) else Form.linear(v)
    val = contract(p, power(v, d))
    return val.coeffs[0] / math.factorial(d)


def pair(l, v):
    """Value of a linear form on a coordinate vector."""
    return sum((a * b for a, b in zip(l.coeffs if isinstance(l, Form) else l, v)), ZERO)


def substitute(f, images):
    """Replace variable ``x_i`` by the linear form ``images[i]``."""
    if len(images) != f.nvars:
        raise DegreeMismatch("one image per variable required")
    m = images[0].nvars
    pw = [[Form.constant(m, 1)] for _ in images]
    for i, img in enumerate(images):
        for _ in range(f.degree):
            pw[i].append(pw[i][-1] * img)
    out = Form.zero(m, f.degree)
    for e, c in f.terms():
        t = Form.constant(m, c)
        for i, k in enumerate(e):
            if k:
                t = t * pw[i][k]
        out = out + t
    return out


def _pivot(l):
    """Index of the largest-magnitude coordinate (first one on ties)."""
    mags = [abs(c) for c in l.coeffs]
    best = max(mags)
    return mags.index(best)


def line_basis(l):
    """Basis ``u, w`` of the plane ``{v : l(v) = 0}`` and the pivot index."""
    k = _pivot(l)
    i, j = [t for t in range(3) if t != k]
    lk = l.coeffs[k]
    u = [ZERO] * 3
    w = [ZERO] * 3
    u[i] = ONE
    u[k] = -l.coeffs[i] / lk
    w[j] = ONE
    w[k] = -l.coeffs[j] / lk
    return u, w, k


def restrict_to_line(f, l, policy=DEFAULT_POLICY, check=True):
    """Binary form in coordinates ``(U, W)`` of a form annihilated by ``l``.

    Only the monomials free of the pivot variable are kept; the result is
    well defined on forms ``f`` with ``l ⌟ f = 0``.
    """
    if check:
        r = contract(l, f)
        if not r.is_zero(policy, scale=max(f.norm(), 1)):
            raise NotInKernel("form is not annihilated by the line")
    u, w, k = line_basis(l)
    i, j = [t for t in range(3) if t != k]
    terms = {}
    for e, c in zip(monomials(3, f.degree), f.coeffs):
        if e[k] == 0:
            terms[(e[i], e[j])] = c
    return Form.from_dict(2, f.degree, terms)


def embed_from_line(g, l):
    """Inverse of `restrict_to_line`: ``U -> u``, ``W -> w`` as linear forms."""
    u, w, _ = line_basis(l)
    return substitute(g, [Form.linear(u), Form.linear(w)])


def dual_restrict(p, l):
    """An operator ``p`` viewed on the plane ``l = 0``: ``p(U u + W w)``."""
    u, w, _ = line_basis(l)
    return substitute(p, [Form.linear([u[t], w[t]]) for t in range(3)])


def dual_embed(pb, l):
    """A ternary operator whose `dual_restrict` is ``pb``.

    Lifts are unique modulo ``l``; this one does not involve the pivot
    variable.
    """
    _, _, k = line_basis(l)
    i, j = [t for t in range(3) if t != k]
    return substitute(pb, [Form.variable(3, i), Form.variable(3, j)])


# ---------------------------------------------------------------------------
# text format


@at_policy_precision
def parse_form(text, policy=DEFAULT_POLICY):
    """Read ``vars=<n> deg=<d>`` then ``<exponents> = <scalar>`` lines.

    Decimal coefficients are read at the policy precision.
    """
    lines = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), start=1)]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty input", line=1)
    n0, head = lines[0]
    try:
        fields = dict(tok.split("=", 1) for tok in head.split())
        nvars = int(fields["vars"])
        degree = int(fields["deg"])
    except (KeyError, ValueError) as exc:
        raise ParseError("header must read 'vars=<n> deg=<d>'", line=n0) from exc
    if nvars not in (2, 3) or degree < 0:
        raise ParseError("unsupported header values", line=n0)
    terms = {}
    for n, ln in lines[1:]:
        lhs, sep, rhs = ln.partition("=")
        if not sep:
            raise ParseError("expected '<exponents> = <scalar>'", line=n)
        try:
            e = tuple(int(x) for x in lhs.split())
        except ValueError as exc:
            raise ParseError("bad exponent", line=n, column=1) from exc
        if len(e) != nvars or sum(e) != degree or min(e) < 0:
            raise ParseError(f"monomial {e} does not match header", line=n, column=1)
        try:
            c = parse_scalar(rhs)
        except ParseError as exc:
            raise ParseError(str(exc), line=n, column=len(lhs) + 2) from exc
        terms[e] = terms.get(e, ZERO) + c
    return Form.from_dict(nvars, degree, terms)


# ---------------------------------------------------------------------------
# forms over the pencil coordinates t0, t1


def binary(coeffs):
    """Binary form in (t0, t1): ``coeffs[j]`` multiplies ``t0^(e-j) t1^j``."""
    return Form(2, len(coeffs) - 1, tuple(as_scalar(c) for c in coeffs))


@dataclass(frozen=True, slots=True)
class ParamForm:
    """``sum_j t0^(e-j) t1^j * rows[j]`` with all rows of one shape."""

    rows: tuple

    @property
    def tdegree(self):
        return len(self.rows) - 1

    @property
    def nvars(self):
        return self.rows[0].nvars

    @property
    def degree(self):
        return self.rows[0].degree

    @classmethod
    def constant(cls, f):
        return cls((f,))

    @classmethod
    def linear_pencil(cls, a, b):
        """``t0*a + t1*b``."""
        return cls((a, b))

    def __add__(self, other):
        if self.tdegree != other.tdegree:
            raise DegreeMismatch("t-degree mismatch")
        return ParamForm(tuple(a + b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other):
        if self.tdegree != other.tdegree:
            raise DegreeMismatch("t-degree mismatch")
        return ParamForm(tuple(a - b for a, b in zip(self.rows, other.rows)))

    def __neg__(self):
        return ParamForm(tuple(-a for a in self.rows))

    def scale(self, c):
        return ParamForm(tuple(r.scale(c) for r in self.rows))

    def mul_t(self, s):
        """Multiply by a binary form ``s`` in (t0, t1)."""
        out = [Form.zero(self.nvars, self.degree)] * (self.tdegree + s.degree + 1)
        for k, c in enumerate(s.coeffs):
            if c == 0:
                continue
            for j, r in enumerate(self.rows):
                out[j + k] = out[j + k] + r.scale(c)
        return ParamForm(tuple(out))

    def __mul__(self, other):
        if isinstance(other, ParamForm):
            out = [Form.zero(self.nvars, self.degree + other.degree)] * (self.tdegree + other.tdegree + 1)
            for j, a in enumerate(self.rows):
                for k, b in enumerate(other.rows):
                    out[j + k] = out[j + k] + a * b
            return ParamForm(tuple(out))
        if isinstance(other, Form):
            return ParamForm(tuple(r * other for r in self.rows))
        return self.scale(other)

    __rmul__ = __mul__

    def power(self, k):
        out = ParamForm((Form.constant(self.nvars, 1),))
        for _ in range(k):
            out = out * self
        return out

    def contract(self, p):
        return ParamForm(tuple(contract(p, r) for r in self.rows))

    def evaluate(self, lam, mu):
        e = self.tdegree
        out = Form.zero(self.nvars, self.degree)
        for j, r in enumerate(self.rows):
            out = out + r.scale(as_scalar(lam) ** (e - j) * as_scalar(mu) ** j)
        return out

    def norm(self):
        return max(r.norm() for r in self.rows)

    def is_exact(self):
        return all(r.is_exact() for r in self.rows)

    def is_zero(self, policy=DEFAULT_POLICY, scale=1):
        return all(r.is_zero(policy, scale) for r in self.rows)

    def substitute(self, M):
        """``t0 -> M[0][0] t0 + M[0][1] t1``, ``t1 -> M[1][0] t0 + M[1][1] t1``."""
        a = binary([M[0][0], M[0][1]])
        b = binary([M[1][0], M[1][1]])
        e = self.tdegree
        out = None
        for j, r in enumerate(self.rows):
            s = power(a, e - j) * power(b, j)
            term = ParamForm((r,)).mul_t(s)
            out = term if out is None else out + term
        return out

    def exact_divide(self, s, policy=DEFAULT_POLICY):
        """Quotient by a binary linear form ``s``; raises `NotDivisible`."""
        if s.degree != 1:
            raise DegreeMismatch("division only by linear binary forms")
        alpha, beta = s.coeffs
        rows = self.rows
        e = self.tdegree
        zero = Form.zero(self.nvars, self.degree)
        if e == 0:
            raise NotDivisible("t-degree zero")
        q = [zero] * e
        if abs(alpha) >= abs(beta):
            prev = zero
            for j in range(e):
                prev = (rows[j] - prev.scale(beta)).scale(1 / alpha)
                q[j] = prev
            rem = rows[e] - q[e - 1].scale(beta)
        else:
            nxt = zero
            for j in range(e - 1, -1, -1):
                nxt = (rows[j + 1] - nxt.scale(alpha)).scale(1 / beta)
                q[j] = nxt
            rem = rows[0] - q[0].scale(alpha)
        scale = max(self.norm(), 1)
        if not rem.is_zero(policy, scale=scale):
            raise NotDivisible("nonzero remainder", remainder_norm=rem.norm())
        return ParamForm(tuple(q))

    def desquare(self, policy=DEFAULT_POLICY):
        """Rewrite a form in ``t0^2, t1^2`` as one in ``t0, t1``."""
        if self.tdegree % 2:
            raise NotDivisible("odd t-degree")
        scale = max(self.norm(), 1)
        for j in range(1, self.tdegree, 2):
            if not self.rows[j].is_zero(policy, scale=scale):
                raise NotDivisible("odd powers of t present", remainder_norm=self.rows[j].norm())
        return ParamForm(self.rows[::2])
