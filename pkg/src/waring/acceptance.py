"""Acceptance checks, shared by the test-suite and ``waring selftest``.

Each check returns a `CheckResult`; `run_all` prints one line per check.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from itertools import combinations

import gmpy2

from .apolarity import binary_rank, is_power
from .decompose import (
    DecompState,
    assemble,
    build_f3_matched,
    build_f4,
    decompose,
    decomposition_to_text,
)
from .lineconfig import LineConfiguration, certify, refine_configuration
from .poly import Form, ParamForm, binary, contract, monomials, power, product
from .ranklocus import build_r, defining_rhs, r_quotient, sample_rank_two, squared_lhs
from .scalar import TolerancePolicy, working_precision
from .synthetic import random_quintic, rational_four_line_instance

T0 = binary([1, 0])


@dataclass(frozen=True)
class AcceptanceConfig:
    precision_bits: int = 256
    residual_bound_log2: int = -128
    time_limit_s: float = 10.0
    n_random_quintics: int = 100
    n_binary: int = 100
    binary_rank3_min: int = 95
    n_identity_configs: int = 25
    n_pencils: int = 10
    n_pencil_params: int = 20
    n_refine: int = 50
    refine_retry_cap: int = 16
    refine_min_ok: int = 48
    n_determinism: int = 5
    seed: int = 0


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _policy(cfg):
    return TolerancePolicy(cfg.precision_bits)


def _bound(cfg):
    return gmpy2.mpfr(2) ** cfg.residual_bound_log2


def _decompose_batch(forms, cfg, seed0):
    policy = _policy(cfg)
    bound = _bound(cfg)
    worst_terms, worst_res, worst_time, failures = 0, 0, 0.0, []
    for i, f in enumerate(forms):
        t = time.perf_counter()
        try:
            dec, _ = decompose(f, policy, seed=seed0 + i)
        except Exception as exc:  # reported, not raised
            failures.append(f"{i}: {type(exc).__name__}")
            continue
        dt = time.perf_counter() - t
        res = dec.residual(f)
        worst_terms = max(worst_terms, len(dec))
        worst_res = max(worst_res, res)
        worst_time = max(worst_time, dt)
        if len(dec) > 10 or res > bound or dt > cfg.time_limit_s:
            failures.append(f"{i}: terms={len(dec)} residual={float(res):.2e} time={dt:.2f}s")
    detail = (f"max terms {worst_terms}, max residual {float(worst_res):.2e}, "
              f"max time {worst_time:.2f}s, failures {len(failures)}")
    if failures:
        detail += " [" + "; ".join(failures[:5]) + "]"
    return not failures, detail


def check_random_quintics(cfg=AcceptanceConfig()):
    rng = random.Random(cfg.seed)
    forms = [random_quintic(rng) for _ in range(cfg.n_random_quintics)]
    ok, detail = _decompose_batch(forms, cfg, cfg.seed)
    return CheckResult("random ternary quintics", ok, f"{len(forms)} forms; {detail}")


def check_monomials(cfg=AcceptanceConfig()):
    forms = [Form.monomial(e) for e in monomials(3, 5)]
    ok, detail = _decompose_batch(forms, cfg, cfg.seed)
    policy = _policy(cfg)
    dec, _ = decompose(Form.monomial((1, 2, 2)), policy, seed=cfg.seed)
    ok = ok and len(dec) <= 10
    return CheckResult("quintic monomials", ok, f"{detail}; x0*x1^2*x2^2 -> {len(dec)} terms")


def check_binary(cfg=AcceptanceConfig()):
    policy = _policy(cfg)
    expected = {(5, 0): 1, (4, 1): 5, (3, 2): 4, (2, 3): 4, (1, 4): 5}
    got = {e: binary_rank(Form.monomial(e), policy) for e in expected}
    rng = random.Random(cfg.seed)
    n3 = sum(binary_rank(random_quintic(rng, 2), policy) == 3 for _ in range(cfg.n_binary))
    ok = got == expected and n3 >= cfg.binary_rank3_min
    ranks = ", ".join(f"{e}:{r}" for e, r in got.items())
    return CheckResult("binary ranks", ok, f"monomials {ranks}; rank 3 in {n3}/{cfg.n_binary}")


def _exact_zero(F):
    return F.is_exact() and F.is_zero()


def identity_checks(seed):
    """Exact identities of the four-line construction on one planted instance."""
    inst = rational_four_line_instance(seed)
    f = inst.f
    l1, l2, l3, l4 = inst.lines
    cert = certify(f, inst.lines)
    state = DecompState(f, LineConfiguration(inst.lines, 4, cert))
    build_f4(state)
    build_f3_matched(state)
    assemble(state)
    out = {}
    P = state.P4
    out["defining identity"] = all(_exact_zero(a - b) for a, b in [(squared_lhs(Q), defining_rhs(Q)) for Q in (P, state.P3)])
    divides = True
    for k in range(4):
        for I in combinations(range(3), k):
            quot = r_quotient(P, I)
            lhs = P.r
            for i in I:
                lhs = lhs.contract(P.factors[i])
            back = quot
            for i in I:
                back = back.mul_t(P.a[i])
            divides = divides and _exact_zero(lhs - back)
    out["divisibility"] = divides
    full = r_quotient(P, (0, 1, 2))
    out["full quotient"] = full.tdegree == 0 and _exact_zero(full.rows[0] - P.q.scale(240))
    A = state.a13 * state.a23 * state.a14 * state.a24
    q4 = contract(product([l1, l2, l3], 3), f)
    out["f4"] = _exact_zero(state.f4.contract(product([l1, l2, l3], 3))
                            - ParamForm.constant(q4).mul_t(state.a14 * state.a24 * T0).scale(240))
    f4p = state.f4.contract(l1 * l2).exact_divide(state.a14).exact_divide(state.a24)
    target = ParamForm((contract(l1 * l2, f).scale(240) - f4p.rows[0], -f4p.rows[1]))
    q3 = contract(product([l1, l2, l4], 3), f)
    out["fp3"] = _exact_zero(target.contract(l4) - ParamForm.constant(q3).mul_t(T0).scale(240))
    out["g12"] = _exact_zero(state.g.contract(l1 * l2)
                             - ParamForm.constant(contract(l1 * l2, f)).mul_t(A * T0).scale(240))
    out["erase"] = state.g.rows[-1].is_exact() and state.g.rows[-1].is_zero()
    out["f12"] = _exact_zero(state.f12.contract(l1 * l2))
    lhs = ParamForm.constant(f).mul_t(A * T0).scale(240)
    rhs = state.f12.mul_t(T0) + state.f3.mul_t(state.a14 * state.a24) + state.f4.mul_t(state.a13 * state.a23)
    out["F1234"] = _exact_zero(lhs - rhs)
    return out


def check_identities(cfg=AcceptanceConfig()):
    failed = {}
    with working_precision(_policy(cfg)):
        for s in range(cfg.n_identity_configs):
            for name, ok in identity_checks(cfg.seed + s).items():
                if not ok:
                    failed.setdefault(name, []).append(s)
    detail = f"{cfg.n_identity_configs} rational configurations, 9 identities each"
    if failed:
        detail += "; failing " + ", ".join(f"{k} (seeds {v[:3]})" for k, v in failed.items())
    return CheckResult("exact pencil identities", not failed, detail)


def check_pencils(cfg=AcceptanceConfig()):
    policy = _policy(cfg)
    rng = random.Random(cfg.seed)
    bad_rank, bad_root, total = 0, 0, 0
    with working_precision(policy):
        for _ in range(cfg.n_pencils):
            while True:
                lines = [binary([rng.randint(-6, 6), rng.randint(-6, 6)]) for _ in range(3)]
                x0 = binary([rng.randint(-6, 6), rng.randint(-6, 6)])
                x1 = binary([rng.randint(-6, 6), rng.randint(-6, 6)])
                if all(l.norm() for l in lines) and x0.coeffs[0] * x1.coeffs[1] != x0.coeffs[1] * x1.coeffs[0]:
                    break
            P = build_r(lines, x0, x1, policy)
            n = 0
            while n < cfg.n_pencil_params:
                lam, mu = rng.randint(-30, 30), rng.randint(-30, 30)
                if P.is_exceptional(lam, mu, policy) or (lam == 0 and mu == 0):
                    continue
                n += 1
                total += 1
                if binary_rank(sample_rank_two(P, lam, mu, policy), policy) != 2:
                    bad_rank += 1
            for (lam, mu), v in zip(P.roots, P.v):
                r = P.r.evaluate(lam, mu)
                v5 = power(v, 5)
                if not r.is_zero():
                    if not is_power(r, policy):
                        bad_root += 1
                        continue
                    j = max(range(6), key=lambda i: abs(v5.coeffs[i]))
                    if not (r - v5.scale(r.coeffs[j] / v5.coeffs[j])).is_zero():
                        bad_root += 1
    ok = bad_rank == 0 and bad_root == 0
    return CheckResult("rank-two pencils", ok,
                       f"{total} parameters off the exceptional set, {bad_rank} not rank 2; "
                       f"{bad_root} root evaluations outside <v^5>")


def check_refine(cfg=AcceptanceConfig()):
    policy = _policy(cfg)
    rng = random.Random(cfg.seed + 1)
    forms = [random_quintic(rng) for _ in range(cfg.n_refine)]
    recheck_fail, within, kinds = 0, 0, {}
    for i, f in enumerate(forms):
        conf = refine_configuration(f, random.Random(cfg.seed + i), policy)
        again = certify(f, conf.lines, policy)
        if not all(ok for _, ok in again):
            recheck_fail += 1
        within += conf.attempts <= cfg.refine_retry_cap
        kinds[conf.kind] = kinds.get(conf.kind, 0) + 1
    ok = recheck_fail == 0 and within >= cfg.refine_min_ok
    return CheckResult("certified configurations", ok,
                       f"{len(forms)} quintics, {recheck_fail} re-check failures, "
                       f"{within} within {cfg.refine_retry_cap} retries, kinds {dict(sorted(kinds.items()))}")


def check_determinism(cfg=AcceptanceConfig()):
    policy = _policy(cfg)
    rng = random.Random(cfg.seed + 2)
    forms = [random_quintic(rng) for _ in range(cfg.n_determinism)] + [Form.monomial((1, 2, 2))]
    same = 0
    for i, f in enumerate(forms):
        outs = []
        for _ in range(2):
            dec, report = decompose(f, policy, seed=cfg.seed + i)
            outs.append((decomposition_to_text(dec, policy.precision_bits) + report.to_text()).encode())
        same += outs[0] == outs[1]
    return CheckResult("determinism", same == len(forms), f"{same}/{len(forms)} byte-identical reruns")


CHECKS = (
    check_random_quintics,
    check_monomials,
    check_binary,
    check_identities,
    check_pencils,
    check_refine,
    check_determinism,
)


def run_all(cfg=AcceptanceConfig(), echo=print):
    results = []
    for k, check in enumerate(CHECKS, start=1):
        r = check(cfg)
        echo(f"criterion {k} " + r.line())
        results.append(r)
    return results
