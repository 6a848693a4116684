"""Ternary quintics as sums of at most ten fifth powers.

The dispatcher obtains a certified line configuration and then

* ``k = 2``: splits ``f`` into two forms living on the two lines
  (binary ranks at most 5 + 5);
* ``k = 3``: builds a rank-3 piece on the second line, splits the rest
  between the first and third lines and scans the one-parameter freedom
  until the ranks are at most 4 and 3;
* ``k = 4``: glues two rank-two pencils along a change of pencil coordinates
  so that ``f`` becomes a sum of pieces on the four lines with binary ranks
  at most 3, 3, 2, 2.

Every result is re-expanded and compared with ``f``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .apolarity import Decomposition, binary_decompose, line_decompose, line_rank
from .errors import (
    CertificationViolated,
    IdentityFailure,
    Inconsistent,
    ParseError,
    RetriesExhausted,
    SingularChange,
    ZeroForm,
)
from .lineconfig import LineConfiguration, refine_configuration
from .linalg import cross
from .poly import (
    Form,
    ParamForm,
    binary,
    contract,
    dual_restrict,
    embed_from_line,
    line_basis,
    monomials,
    power,
    product,
    restrict_to_line,
)
from .ranklocus import build_r, r_quotient, rank3_element, split_quadric
from .scalar import (
    DEFAULT_POLICY,
    ONE,
    ZERO,
    as_scalar,
    at_policy_precision,
    format_real,
    format_scalar,
    is_exact,
    parse_scalar,
    working_precision,
)


@dataclass
class RunReport:
    """Ordered ``key = value`` record of a decomposition run."""

    entries: list = field(default_factory=list)

    def add(self, key, value):
        self.entries.append((key, value))

    def get(self, key, default=None):
        for k, v in reversed(self.entries):
            if k == key:
                return v
        return default

    def to_text(self):
        return "".join(f"{k} = {v}\n" for k, v in self.entries)


@dataclass
class DecompState:
    f: Form
    config: LineConfiguration
    P4: object = None
    P3: object = None
    M4: tuple = None
    M3: tuple = None
    a13: Form = None
    a23: Form = None
    a14: Form = None
    a24: Form = None
    a43: Form = None
    f3: ParamForm = None
    f4: ParamForm = None
    g: ParamForm = None
    f34: ParamForm = None
    f12: ParamForm = None
    v12: tuple = None
    v34: tuple = None
    sample: tuple = None
    nu: object = None
    pieces: tuple = None


T0 = binary([1, 0])


def _pscale(f):
    return max(f.norm(), 1)


def _require_zero(form, policy, scale, what):
    if not form.is_zero(policy, scale=scale):
        raise IdentityFailure(f"{what} does not vanish", stage=what)


def _subst(s, M):
    a = binary([M[0][0], M[0][1]])
    b = binary([M[1][0], M[1][1]])
    e = s.degree
    out = Form.zero(2, e)
    for j, c in enumerate(s.coeffs):
        out = out + (power(a, e - j) * power(b, j)).scale(c)
    return out


def normalizing_change(a3):
    """2x2 change ``M`` with ``a3 ∘ M = t0``."""
    alpha, beta = a3.coeffs
    if abs(alpha) >= abs(beta):
        if alpha == 0:
            raise SingularChange("zero linear form")
        return ((1 / alpha, -beta / alpha), (ZERO, ONE))
    return ((ZERO, ONE), (1 / beta, -alpha / beta))


# ---------------------------------------------------------------------------
# splitting a form between two lines


def line_space_basis(l, degree=5):
    """Ternary forms on the line ``l``: embedded binary monomials."""
    return [embed_from_line(Form.monomial(e), l) for e in monomials(2, degree)]


@at_policy_precision
def split_on_lines(h, l1, l2, policy=DEFAULT_POLICY):
    """``(g1, g2)`` with ``h = g1 + g2``, ``l1 ⌟ g1 = 0``, ``l2 ⌟ g2 = 0``."""
    B1 = line_space_basis(l1, h.degree)
    B2 = line_space_basis(l2, h.degree)
    cols = [b.coeffs for b in B1 + B2]
    A = [[col[i] for col in cols] for i in range(len(h.coeffs))]
    x = linalg.solve(A, list(h.coeffs), policy)
    g1 = Form.zero(3, h.degree)
    g2 = Form.zero(3, h.degree)
    for c, b in zip(x[: len(B1)], B1):
        g1 = g1 + b.scale(c)
    for c, b in zip(x[len(B1):], B2):
        g2 = g2 + b.scale(c)
    return g1, g2


def _meet(l1, l2):
    """Point common to the lines ``l1 = 0`` and ``l2 = 0`` as a linear form."""
    return Form.linear(cross(l1.coeffs, l2.coeffs))


def _draw(rng, scale):
    return as_scalar(rng.randint(-64, 64)) * scale / 16


def _nu_scale(base, v5):
    n = base.norm()
    m = v5.norm()
    if n == 0 or m == 0:
        return ONE
    r = n / m
    return r if is_exact(r) else as_scalar(int(abs(r)) + 1)


@at_policy_precision
def scan_pencil(g1, g2, v5, l1, l2, caps, rng, policy, max_tries):
    """First ``nu`` (0, then seeded draws) with ``rk(g1 + nu v5) <= caps[0]``
    and ``rk(g2 - nu v5) <= caps[1]`` on the respective lines."""
    scale = _nu_scale(g1 + g2, v5)
    for attempt in range(max_tries + 1):
        nu = ZERO if attempt == 0 else _draw(rng, scale)
        a = g1 + v5.scale(nu)
        b = g2 - v5.scale(nu)
        ra = line_rank(a, l1, policy)
        rb = line_rank(b, l2, policy)
        if ra <= caps[0] and rb <= caps[1]:
            return nu, a, b, attempt
    raise RetriesExhausted("no admissible splitting parameter", stage="scan_pencil")


# ---------------------------------------------------------------------------
# four lines


@at_policy_precision
def build_f4(state, policy=DEFAULT_POLICY):
    f = state.f
    l1, l2, l3, l4 = state.config.lines
    q = contract(product([l1, l2, l3], 3), f)
    x0, x1 = split_quadric(q, l4, policy)
    P4 = build_r([l1, l2, l3], x0, x1, policy)
    M = normalizing_change(P4.a[2])
    f4 = P4.r.substitute(M)
    a14 = _subst(P4.a[0], M)
    a24 = _subst(P4.a[1], M)
    a34 = _subst(P4.a[2], M)
    _require_zero(a34 - T0, policy, 1, "a34 normalisation")
    lhs = f4.contract(product([l1, l2, l3], 3))
    rhs = ParamForm.constant(q).mul_t(a14 * a24 * T0).scale(240)
    _require_zero_p(lhs - rhs, policy, _pscale(f) * _pscale_p(lhs), "f4 identity")
    state.P4, state.M4, state.f4, state.a14, state.a24 = P4, M, f4, a14, a24
    return state


def _pscale_p(F):
    return max(F.norm(), 1)


def _require_zero_p(F, policy, scale, what):
    if not F.is_zero(policy, scale=scale):
        raise IdentityFailure(f"{what} does not hold", stage=what)


def match_change(R, target, policy=DEFAULT_POLICY):
    """Invertible ``M`` with ``R.substitute(M) == target`` for t-linear pencils."""
    R0, R1 = R.rows
    A = [[a, b] for a, b in zip(R0.coeffs, R1.coeffs)]
    try:
        m00, m10 = linalg.solve(A, list(target.rows[0].coeffs), policy)
        m01, m11 = linalg.solve(A, list(target.rows[1].coeffs), policy)
    except Inconsistent as exc:
        raise SingularChange("no matching change of pencil coordinates", stage="build_f3_matched") from exc
    det = m00 * m11 - m01 * m10
    if (det == 0) if is_exact(det) else abs(det) <= policy.zero_threshold * max(abs(m00), abs(m11), abs(m01), abs(m10)) ** 2:
        raise SingularChange("matching change is singular", stage="build_f3_matched")
    return ((m00, m01), (m10, m11))


@at_policy_precision
def build_f3_matched(state, policy=DEFAULT_POLICY):
    f = state.f
    l1, l2, l3, l4 = state.config.lines
    q3 = contract(product([l1, l2, l4], 3), f)
    y0, y1 = split_quadric(q3, l3, policy)
    P3 = build_r([l1, l2, l4], y0, y1, policy)
    r3p = r_quotient(P3, [0, 1], policy)
    f4p = state.f4.contract(l1 * l2)
    f4p = f4p.exact_divide(state.a14, policy).exact_divide(state.a24, policy)
    c12 = contract(l1 * l2, f).scale(240)
    target = ParamForm((c12 - f4p.rows[0], -f4p.rows[1]))
    s = max(_pscale_p(target), _pscale(f))
    _require_zero_p(target.contract(l3), policy, s, "l3 contraction of the f3 target")
    fp3 = target.contract(l4) - ParamForm.constant(contract(product([l1, l2, l4], 3), f)).mul_t(T0).scale(240)
    _require_zero_p(fp3, policy, s, "fp3 identity")
    M = match_change(r3p, target, policy)
    state.P3, state.M3 = P3, M
    state.f3 = P3.r.substitute(M)
    state.a13 = _subst(P3.a[0], M)
    state.a23 = _subst(P3.a[1], M)
    state.a43 = _subst(P3.a[2], M)
    _require_zero(state.a43 - T0, policy, max(state.a43.norm(), 1), "a43 normalisation")
    return state


@at_policy_precision
def assemble(state, policy=DEFAULT_POLICY):
    f = state.f
    l1, l2, l3, l4 = state.config.lines
    g = state.f3.mul_t(state.a14 * state.a24) + state.f4.mul_t(state.a13 * state.a23)
    s = max(_pscale_p(g), _pscale(f))
    _require_zero(g.rows[-1], policy, s, "g at (0,1)")
    f34 = g.exact_divide(T0, policy)
    A = state.a13 * state.a23 * state.a14 * state.a24
    f12 = ParamForm.constant(f).mul_t(A).scale(240) - f34
    g12 = g.contract(l1 * l2) - ParamForm.constant(contract(l1 * l2, f)).mul_t(A * T0).scale(240)
    _require_zero_p(g12, policy, s, "g12 identity")
    _require_zero_p(f12.contract(l1 * l2), policy, s, "f12 identity")
    lhs = ParamForm.constant(f).mul_t(A * T0).scale(240)
    rhs = f12.mul_t(T0) + state.f3.mul_t(state.a14 * state.a24) + state.f4.mul_t(state.a13 * state.a23)
    _require_zero_p(lhs - rhs, policy, s, "F1234 identity")
    state.g, state.f34, state.f12 = g, f34, f12
    return state


def _val(s, lam, mu):
    e = s.degree
    return sum((c * lam ** (e - j) * mu ** j for j, c in enumerate(s.coeffs)), ZERO)


def _nonzero(x, policy, scale=1):
    return x != 0 if is_exact(x) else abs(x) > policy.zero_threshold * scale


@at_policy_precision
def choose_sample(state, rng, policy=DEFAULT_POLICY, max_tries=64):
    """Seeded ``(lam, mu)`` and the three evaluated pieces."""
    l1, l2, l3, l4 = state.config.lines
    for attempt in range(1, max_tries + 1):
        lam = as_scalar(rng.choice([k for k in range(-12, 13) if k]))
        mu = as_scalar(rng.randint(-12, 12))
        vals = [_val(a, lam, mu) for a in (state.a13, state.a23, state.a14, state.a24)]
        sc = max(abs(lam), abs(mu), 1)
        if not all(_nonzero(v, policy, sc) for v in vals):
            continue
        f12s = state.f12.evaluate(lam, mu)
        f3s = state.f3.evaluate(lam, mu)
        f4s = state.f4.evaluate(lam, mu)
        if line_rank(f3s, l3, policy) != 2 or line_rank(f4s, l4, policy) != 2:
            continue
        s = max(f12s.norm(), 1)
        if contract(l1, f12s).is_zero(policy, s) or contract(l2, f12s).is_zero(policy, s):
            continue
        a13, a23, a14, a24 = vals
        A = 240 * a13 * a23 * a14 * a24
        state.sample = (lam, mu)
        state.pieces = (f12s.scale(1 / A), f3s.scale(a14 * a24 / (A * lam)), f4s.scale(a13 * a23 / (A * lam)))
        return state, attempt
    raise RetriesExhausted("no admissible pencil parameter", stage="choose_sample")


@at_policy_precision
def split_f12(F, l1, l2, rng, policy=DEFAULT_POLICY, max_tries=64):
    """``F = F1 + F2`` on the lines ``l1``, ``l2`` with binary ranks <= 3."""
    s = max(F.norm(), 1)
    if contract(l1, F).is_zero(policy, s) or contract(l2, F).is_zero(policy, s):
        raise CertificationViolated("piece lives on a single line", stage="split_f12")
    F1, F2 = split_on_lines(F, l1, l2, policy)
    v5 = power(_meet(l1, l2), 5)
    return scan_pencil(F1, F2, v5, l1, l2, (3, 3), rng, policy, max_tries)


@at_policy_precision
def decompose_four(f, config, rng, policy, report, max_retries=64):
    state = DecompState(f, config)
    build_f4(state, policy)
    report.add("stage", "f4")
    build_f3_matched(state, policy)
    report.add("stage", "f3")
    assemble(state, policy)
    report.add("stage", "assemble")
    state, tries = choose_sample(state, rng, policy, max_retries)
    report.add("sample", f"{state.sample[0]} {state.sample[1]}")
    report.add("sample_tries", tries)
    l1, l2, l3, l4 = config.lines
    F12, F3, F4 = state.pieces
    nu, P1, P2, nu_tries = split_f12(F12, l1, l2, rng, policy, max_retries)
    state.nu = nu
    report.add("nu_tries", nu_tries)
    dec = Decomposition(3, 5, ())
    ranks = []
    for piece, line in ((P1, l1), (P2, l2), (F3, l3), (F4, l4)):
        d = line_decompose(piece, line, policy, rng) if not piece.is_zero(policy) else Decomposition(3, 5, ())
        ranks.append(len(d))
        dec = dec + d
    report.add("piece_ranks", " ".join(map(str, ranks)))
    return dec, state


# ---------------------------------------------------------------------------
# two and three lines


@at_policy_precision
def decompose_two(f, config, rng, policy, report):
    l1, l2 = config.lines
    g1, g2 = split_on_lines(f, l1, l2, policy)
    dec = Decomposition(3, 5, ())
    ranks = []
    for g, l in ((g1, l1), (g2, l2)):
        d = line_decompose(g, l, policy, rng) if not g.is_zero(policy, max(f.norm(), 1)) else Decomposition(3, 5, ())
        ranks.append(len(d))
        dec = dec + d
    report.add("piece_ranks", " ".join(map(str, ranks)))
    return dec


@at_policy_precision
def decompose_three(f, config, rng, policy, report, max_retries=64):
    l1, l2, l3 = config.lines
    t = restrict_to_line(contract(l1 * l3, f), l2, policy)
    p = dual_restrict(l1 * l3, l2)
    d2 = rank3_element(p, t, policy, rng, max_retries)
    u, w, _ = line_basis(l2)
    g2_terms = tuple((c, tuple(a * ui + b * wi for ui, wi in zip(u, w))) for c, (a, b) in d2.terms)
    g2dec = Decomposition(3, 5, g2_terms)
    g2 = g2dec.to_form()
    h1, h3 = split_on_lines(f - g2, l1, l3, policy)
    v5 = power(_meet(l1, l3), 5)
    gamma, H3, H1, tries = scan_pencil(h3, h1, v5, l3, l1, (3, 4), rng, policy, max_retries)
    report.add("gamma_tries", tries)
    dec = g2dec
    ranks = [len(g2dec)]
    for g, l in ((H1, l1), (H3, l3)):
        d = line_decompose(g, l, policy, rng) if not g.is_zero(policy, max(f.norm(), 1)) else Decomposition(3, 5, ())
        ranks.append(len(d))
        dec = dec + d
    report.add("piece_ranks", " ".join(map(str, ranks)))
    return dec


# ---------------------------------------------------------------------------
# entry points


def verify(f, dec):
    """Relative max-norm residual of a decomposition."""
    return dec.residual(f)


def decompose_ternary_quintic(f, policy=DEFAULT_POLICY, seed=0, max_retries=64, report=None):
    """At most ten fifth powers summing to ``f``; returns (decomposition, report)."""
    report = report if report is not None else RunReport()
    if f.nvars != 3 or f.degree != 5:
        raise ValueError("ternary quintic expected")
    rng = random.Random(seed)
    with working_precision(policy):
        if f.is_zero(policy):
            raise ZeroForm("zero form", seed=seed)
        last = None
        for outer in range(1, 9):
            try:
                config = refine_configuration(f, rng, policy, max_retries)
                report.add("kind", config.kind)
                report.add("config_attempts", config.attempts)
                report.add("config_route", config.route)
                if config.kind == 2:
                    dec = decompose_two(f, config, rng, policy, report)
                elif config.kind == 3:
                    dec = decompose_three(f, config, rng, policy, report, max_retries)
                else:
                    dec, _ = decompose_four(f, config, rng, policy, report, max_retries)
            except (RetriesExhausted, CertificationViolated, SingularChange) as exc:
                report.add("restart", f"{type(exc).__name__}: {exc}")
                last = exc
                continue
            res = dec.residual(f)
            report.add("terms", len(dec))
            report.add("residual", format_real(res))
            if len(dec) > 10:
                last = CertificationViolated(f"{len(dec)} terms", stage="decompose", seed=seed)
                report.add("restart", "too many terms")
                continue
            if res > policy.zero_threshold:
                raise CertificationViolated(f"residual {float(res):.3e} above threshold", stage="decompose", seed=seed)
            report.add("outer_attempts", outer)
            return dec, report
        if last is not None:
            last.seed = seed
            raise last
        raise RetriesExhausted("decomposition failed", stage="decompose", seed=seed)


def decompose(f, policy=DEFAULT_POLICY, seed=0, max_retries=64):
    """Decompose a binary form (minimal) or a ternary quintic (<= 10 terms)."""
    with working_precision(policy):
        if f.nvars == 2:
            report = RunReport()
            dec = binary_decompose(f, policy, random.Random(seed), max_retries)
            report.add("kind", "binary")
            report.add("terms", len(dec))
            report.add("residual", format_real(dec.residual(f)))
            return dec, report
        return decompose_ternary_quintic(f, policy, seed, max_retries)


def decomposition_to_text(dec, precision_bits=None, residual=None):
    """``vars=<n> deg=<d> terms=<k>`` then one ``c : a0 a1 [a2]`` line per term."""
    lines = [f"vars={dec.nvars} deg={dec.degree} terms={len(dec)}"]
    for c, a in dec.terms:
        coords = " ".join(format_scalar(x, precision_bits) for x in a)
        lines.append(f"{format_scalar(c, precision_bits)} : {coords}")
    if residual is not None:
        lines.append(f"residual = {format_real(residual)}")
    return "\n".join(lines) + "\n"


@at_policy_precision
def parse_decomposition(text, policy=DEFAULT_POLICY):
    """Inverse of `decomposition_to_text`; ``key = value`` lines are skipped.

    Decimal entries are read at the policy precision.
    """
    rows = [(n, ln.strip()) for n, ln in enumerate(text.splitlines(), start=1)]
    rows = [(n, ln) for n, ln in rows if ln and not ln.startswith("#")]
    if not rows:
        raise ParseError("empty decomposition", line=1)
    n0, head = rows[0]
    try:
        fields = dict(tok.split("=", 1) for tok in head.split())
        nvars, degree = int(fields["vars"]), int(fields["deg"])
    except (KeyError, ValueError) as exc:
        raise ParseError("header must read 'vars=<n> deg=<d> terms=<k>'", line=n0) from exc
    terms = []
    for n, ln in rows[1:]:
        if ":" not in ln:
            if "=" in ln:
                continue
            raise ParseError("expected '<c> : <a0> <a1> ...'", line=n)
        lhs, rhs = ln.split(":", 1)
        coords = rhs.split()
        if len(coords) != nvars:
            raise ParseError(f"expected {nvars} coordinates", line=n, column=len(lhs) + 2)
        try:
            terms.append((parse_scalar(lhs), tuple(parse_scalar(x) for x in coords)))
        except ParseError as exc:
            raise ParseError(str(exc), line=n) from exc
    if "terms" in fields and int(fields["terms"]) != len(terms):
        raise ParseError("term count does not match header", line=n0)
    return Decomposition(nvars, degree, tuple(terms))
