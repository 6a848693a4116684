"""Scalars, tolerance policy and root extraction.

Two kinds of scalar flow through the package:

* exact rationals (``gmpy2.mpq``), used for everything that can stay rational;
* arbitrary precision complex numbers (``gmpy2.mpc``), which appear only when a
  root extraction forces an algebraic extension.

Plain Python arithmetic works on both and mixing them promotes to complex at
the working precision of the current gmpy2 context (see `working_precision`).
"""
from __future__ import annotations

import functools
import inspect
import math
import re
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr, mpq, mpz

from .errors import DegenerateInput, ParseError

MPQ = type(mpq(0))
MPC = type(mpc(0))
MPFR = type(mpfr(0))
MPZ = type(mpz(0))

ZERO = mpq(0)
ONE = mpq(1)


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical stand-in for exact vanishing.

    ``zero_threshold`` defaults to ``2**(-precision_bits/2)``, clamped to
    ``2**-33`` so that 64-bit runs satisfy the strict bound below.
    """

    precision_bits: int = 256
    zero_threshold: object = field(default=None)

    def __post_init__(self):
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be >= 64")
        thr = self.zero_threshold
        if thr is None:
            thr = mpfr(2) ** (-max(self.precision_bits // 2, 33))
        thr = mpfr(thr)
        if not (0 < thr < mpfr(2) ** -32):
            raise ValueError("zero_threshold must lie in (0, 2**-32)")
        object.__setattr__(self, "zero_threshold", thr)


DEFAULT_POLICY = TolerancePolicy()


@contextmanager
def working_precision(policy):
    """Run the body with gmpy2 complex arithmetic at the policy precision."""
    with gmpy2.context(gmpy2.get_context(), precision=policy.precision_bits):
        yield


def is_exact(x):
    return isinstance(x, (MPQ, int))


def as_scalar(x):
    """Coerce ints/fractions/strings to mpq and floats/complex to mpc."""
    if isinstance(x, (MPQ, MPC)):
        return x
    if isinstance(x, (int, MPZ, Fraction)):
        return mpq(x)
    if isinstance(x, str):
        return parse_scalar(x)
    return mpc(x)


def magnitude(x):
    """|x| as an mpq (exact) or mpfr."""
    return abs(x)


def is_zero(x, policy=DEFAULT_POLICY, scale=1):
    """Exact test for rationals, ``|x| <= zero_threshold*scale`` otherwise."""
    if is_exact(x):
        return x == 0
    return abs(x) <= policy.zero_threshold * scale


def to_complex(x):
    return x if isinstance(x, MPC) else mpc(x)


def exact_sqrt(x):
    """Square root of a nonnegative rational if it is rational, else None."""
    if not is_exact(x):
        return None
    x = mpq(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    if gmpy2.is_square(n) and gmpy2.is_square(d):
        return mpq(gmpy2.isqrt(n), gmpy2.isqrt(d))
    return None


def sqrt(x):
    r = exact_sqrt(x)
    if r is not None:
        return r
    return gmpy2.sqrt(to_complex(x))


# ---------------------------------------------------------------------------
# univariate polynomials as descending coefficient lists


def _strip(p):
    i = 0
    while i < len(p) - 1 and p[i] == 0:
        i += 1
    return list(p[i:])


def _deriv(p):
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [ZERO]


def _horner(p, z):
    acc = p[0]
    for c in p[1:]:
        acc = acc * z + c
    return acc


def _horner2(p, z):
    """Value and first derivative."""
    v = p[0]
    dv = 0 * z
    for c in p[1:]:
        dv = dv * z + v
        v = v * z + c
    return v, dv


def _divmod_exact(a, b):
    a = _strip(a)
    b = _strip(b)
    if len(a) < len(b):
        return [ZERO], a
    q = [ZERO] * (len(a) - len(b) + 1)
    r = list(a)
    for i in range(len(q)):
        c = r[i] / b[0]
        q[i] = c
        for j, bj in enumerate(b):
            r[i + j] -= c * bj
    rem = _strip(r[len(q):] or [ZERO])
    return q, rem


def _monic(p):
    p = _strip(p)
    return [c / p[0] for c in p]


def _gcd_exact(a, b):
    a, b = _strip(a), _strip(b)
    while not (len(b) == 1 and b[0] == 0):
        _, r = _divmod_exact(a, b)
        a, b = b, r
    return _monic(a)


def _yun(p):
    """Squarefree factorisation over Q: list of (factor, multiplicity)."""
    p = _monic(p)
    if len(p) == 1:
        return []
    dp = _deriv(p)
    a = _gcd_exact(p, dp)
    b, _ = _divmod_exact(p, a)
    c, _ = _divmod_exact(dp, a)
    d = [x - y for x, y in zip(_pad(c, len(b) - 1), _pad(_deriv(b), len(b) - 1))]
    out = []
    i = 1
    while len(_strip(b)) > 1:
        a = _gcd_exact(b, d)
        b, _ = _divmod_exact(b, a)
        c, _ = _divmod_exact(d, a)
        if len(a) > 1:
            out.append((a, i))
        db = _deriv(b)
        n = max(len(c), len(db))
        d = [x - y for x, y in zip(_pad(c, n - 1), _pad(db, n - 1))]
        i += 1
    return out


def _pad(p, deg):
    p = _strip(p)
    return [ZERO] * (deg + 1 - len(p)) + p


def _aberth(p, prec):
    """All roots of a complex polynomial (descending coefficients)."""
    n = len(p) - 1
    lead = p[0]
    a = [to_complex(c) / lead for c in p]
    if n == 1:
        return [-a[1]]
    mags = [abs(a[k]) for k in range(1, n + 1)]
    if all(m == 0 for m in mags):
        return [mpc(0)] * n
    bound = 2 * max(gmpy2.root(m, k) for k, m in enumerate(mags, start=1) if m != 0)
    radius = bound / 2
    two_pi = 2 * gmpy2.const_pi()
    z = [radius * gmpy2.exp(mpc(0, 1) * (two_pi * k / n + mpfr("0.4"))) for k in range(n)]
    eps = mpfr(2) ** (-prec + 8)
    maxit = 50 + 2 * prec
    for _ in range(maxit):
        converged = True
        for k in range(n):
            v, dv = _horner2(a, z[k])
            if v == 0:
                continue
            if dv == 0:
                z[k] += eps * max(1, abs(z[k])) * 1024
                converged = False
                continue
            ratio = v / dv
            s = sum((1 / (z[k] - z[j]) for j in range(n) if j != k and z[k] != z[j]), mpc(0))
            w = ratio / (1 - ratio * s)
            z[k] -= w
            if abs(w) > eps * max(1, abs(z[k])):
                converged = False
        if converged:
            break
    return z


def _cluster(z, thr):
    """Group numerically coincident roots; returns list of (member list)."""
    n = len(z)
    left = list(range(n))
    groups = []
    while left:
        k = left.pop(0)
        scale = max(1, abs(z[k]))
        wide = thr ** (mpfr(1) / max(n, 2)) * scale
        group = [k] + [j for j in left if abs(z[j] - z[k]) <= wide]
        while len(group) > 1:
            centre = sum((z[j] for j in group), mpc(0)) / len(group)
            radius = thr ** (mpfr(1) / len(group)) * scale
            far = max(group, key=lambda j: abs(z[j] - centre))
            diam = max(abs(z[i] - z[j]) for i in group for j in group)
            if diam <= radius:
                break
            group.remove(far)
        for j in group[1:]:
            left.remove(j)
        groups.append(group)
    return groups


def _polish(p, root, mult, prec, steps=12):
    q = list(p)
    for _ in range(mult - 1):
        q = _deriv(q)
    eps = mpfr(2) ** (-prec + 4)
    for _ in range(steps):
        v, dv = _horner2(q, root)
        if dv == 0:
            break
        step = v / dv
        root -= step
        if abs(step) <= eps * max(1, abs(root)):
            break
    return root


def _exact_low_degree_roots(factor):
    """Rational roots of a monic rational factor of degree <= 2, or None."""
    if len(factor) == 2:
        return [-factor[1]]
    if len(factor) == 3:
        b, c = factor[1], factor[2]
        disc = b * b - 4 * c
        r = exact_sqrt(disc)
        if r is not None:
            return [(-b + r) / 2, (-b - r) / 2]
    return None


def univariate_roots(coeffs, policy=DEFAULT_POLICY):
    """Roots with multiplicity of a univariate polynomial.

    ``coeffs`` are in descending degree order. Exact inputs get exact
    multiplicities (squarefree factorisation over Q) and rational roots when
    a factor of degree <= 2 splits over Q; everything else is located by
    Aberth-Ehrlich iteration, clustered, then Newton-polished.
    """
    coeffs = [as_scalar(c) for c in coeffs]
    scale = max((abs(c) for c in coeffs), default=0)
    if scale == 0:
        raise DegenerateInput("all coefficients vanish")
    if all(is_exact(c) for c in coeffs):
        p = _strip(coeffs)
        if len(p) == 1:
            return []
        out = []
        prec = gmpy2.get_context().precision
        for factor, mult in _yun(p):
            roots = _exact_low_degree_roots(factor)
            if roots is None:
                roots = [_polish(factor, r, 1, prec) for r in _aberth(factor, prec)]
            out.extend((r, mult) for r in roots)
        return out
    thr = policy.zero_threshold
    p = list(coeffs)
    while len(p) > 1 and abs(p[0]) <= thr * scale:
        p.pop(0)
    if len(p) == 1:
        raise DegenerateInput("leading coefficient negligible for every degree")
    prec = gmpy2.get_context().precision
    z = _aberth(p, prec)
    out = []
    for group in _cluster(z, thr):
        centre = sum((z[j] for j in group), mpc(0)) / len(group)
        m = len(group)
        out.append((_polish(p, centre, m, prec), m))
    return out


def homogeneous_roots(coeffs, policy=DEFAULT_POLICY):
    """Zeros ``[a:b]`` of a binary form with multiplicity.

    ``coeffs[j]`` multiplies ``X**(d-j) * Y**j``; each zero (a, b) satisfies
    ``F(a, b) = 0``.
    """
    coeffs = [as_scalar(c) for c in coeffs]
    d = len(coeffs) - 1
    scale = max((abs(c) for c in coeffs), default=0)
    if scale == 0:
        raise DegenerateInput("zero binary form")
    exact = all(is_exact(c) for c in coeffs)

    def negligible(c):
        return c == 0 if exact else abs(c) <= policy.zero_threshold * scale

    lead = 0
    while negligible(coeffs[lead]):
        lead += 1
    trail = 0
    while negligible(coeffs[d - trail]):
        trail += 1
    out = []
    if lead:
        out.append(((ONE, ZERO), lead))
    if trail:
        out.append(((ZERO, ONE), trail))
    core = coeffs[lead: d + 1 - trail]
    if len(core) <= 1:
        return out
    if exact or abs(core[0]) >= abs(core[-1]):
        out.extend(((r, ONE), m) for r, m in univariate_roots(core, policy))
    else:
        out.extend(((ONE, r), m) for r, m in univariate_roots(core[::-1], policy))
    return out


# ---------------------------------------------------------------------------
# text form


def decimal_digits(precision_bits):
    return int(math.ceil(precision_bits * math.log10(2))) + 2


def _format_real(x, digits, sign=False):
    x = x if isinstance(x, MPFR) else mpfr(x)
    mant, exp, _ = gmpy2.digits(x, 10, digits)
    neg = mant.startswith("-")
    mant = mant.lstrip("-")
    if set(mant) <= {"0"}:
        body = "0"
        neg = False
    else:
        body = f"{mant[0]}.{mant[1:]}e{exp - 1}"
    if neg:
        return "-" + body
    return ("+" if sign else "") + body


def format_real(x, digits=6):
    """Short decimal rendering of a nonnegative residual-like quantity."""
    if is_exact(x):
        return format_scalar(x)
    return _format_real(x, digits)


def format_scalar(x, precision_bits=None):
    """``num/den`` (plain ``num`` when den is 1) or ``re±im i``."""
    if is_exact(x):
        x = mpq(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if not isinstance(x, MPC):
        x = to_complex(x)
    bits = precision_bits or x.precision[0]
    digits = decimal_digits(bits)
    return f"{_format_real(x.real, digits)}{_format_real(x.imag, digits, sign=True)}i"


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"


def parse_scalar(text):
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty scalar")
    if _RATIONAL.match(s):
        num, _, den = s.partition("/")
        if den and int(den) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return mpq(int(num), int(den or 1))
    m = re.fullmatch(rf"({_REAL})?(?:([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-])i)?", s)
    if m and (m.group(1) or m.group(2)):
        re_part = mpfr(m.group(1)) if m.group(1) else mpfr(0)
        im_txt = m.group(2)
        if im_txt is None:
            im_part = mpfr(0)
        elif im_txt in "+-":
            im_part = mpfr(im_txt + "1")
        else:
            im_part = mpfr(im_txt)
        return mpc(re_part, im_part)
    if re.fullmatch(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i", s):
        return mpc(0, mpfr(s[:-1]))
    raise ParseError(f"cannot parse scalar {text!r}")


def at_policy_precision(fn):
    """Run ``fn`` inside `working_precision` of its ``policy`` argument."""
    sig = inspect.signature(fn)

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        bound = sig.bind_partial(*args, **kwargs)
        policy = bound.arguments.get("policy") or DEFAULT_POLICY
        with working_precision(policy):
            return fn(*args, **kwargs)

    return wrapper
