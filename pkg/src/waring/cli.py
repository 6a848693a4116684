"""Command-line interface.

Exit status: 0 success, 2 certification failure, 3 parse or usage error.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .acceptance import AcceptanceConfig, run_all
from .apolarity import binary_rank
from .decompose import decompose, decomposition_to_text, parse_decomposition
from .errors import ParseError, WaringError
from .lineconfig import refine_configuration
from .poly import contract, parse_form, product
from .ranklocus import build_r, split_quadric
from .scalar import TolerancePolicy, format_real, format_scalar, working_precision

EXIT_OK = 0
EXIT_CERT = 2
EXIT_USAGE = 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    precision_bits: int = 256
    seed: int = 0
    max_retries: int = 64
    source: str | None = None
    output: str | None = None
    jobs: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_source(source):
    """File path, ``-`` for stdin, or an inline form with ``;`` as line break."""
    if source == "-":
        return sys.stdin.read()
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    return source.replace(";", "\n")


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("WARING_SEED")
    return int(env) if env else 0


def _policy(cfg):
    return TolerancePolicy(cfg.precision_bits)


def cmd_rank(cfg):
    f = parse_form(_read_source(cfg.source))
    if f.nvars != 2:
        raise ParseError("rank is defined here for binary forms only")
    return f"{binary_rank(f, _policy(cfg))}\n"


def cmd_decompose(cfg):
    f = parse_form(_read_source(cfg.source))
    policy = _policy(cfg)
    dec, report = decompose(f, policy, cfg.seed, cfg.max_retries)
    return decomposition_to_text(dec, policy.precision_bits) + report.to_text()


def cmd_verify(cfg, decomposition_source):
    f = parse_form(_read_source(cfg.source))
    dec = parse_decomposition(_read_source(decomposition_source))
    policy = _policy(cfg)
    with working_precision(policy):
        res = dec.residual(f)
    text = f"terms = {len(dec)}\nresidual = {format_real(res)}\n"
    return text, res <= policy.zero_threshold


def cmd_lines(cfg):
    f = parse_form(_read_source(cfg.source))
    policy = _policy(cfg)
    conf = refine_configuration(f, random.Random(cfg.seed), policy, cfg.max_retries)
    out = [f"kind = {conf.kind}", f"attempts = {conf.attempts}", f"route = {conf.route}"]
    for i, l in enumerate(conf.lines, start=1):
        out.append(f"l{i} = " + " ".join(format_scalar(c, policy.precision_bits) for c in l.coeffs))
    out.append(conf.certificate_table())
    return "\n".join(out) + "\n", conf.certified


def cmd_pencil(cfg):
    f = parse_form(_read_source(cfg.source))
    policy = _policy(cfg)
    bits = policy.precision_bits
    with working_precision(policy):
        conf = refine_configuration(f, random.Random(cfg.seed), policy, cfg.max_retries)
        if conf.kind != 4:
            raise WaringError(f"configuration has {conf.kind} lines; the pencil needs four", stage="pencil")
        l1, l2, l3, l4 = conf.lines
        q = contract(product([l1, l2, l3], 3), f)
        x0, x1 = split_quadric(q, l4, policy)
        P = build_r([l1, l2, l3], x0, x1, policy)
        out = []
        for j, row in enumerate(P.r.rows):
            out.append(f"# r: coefficient of t0^{P.r.tdegree - j} t1^{j}")
            out.append(row.to_text(bits).rstrip("\n"))
        for i, a in enumerate(P.a, start=1):
            out.append(f"a{i} = " + " ".join(format_scalar(c, bits) for c in a.coeffs))
        for lam, mu in P.exceptional:
            out.append(f"X = {format_scalar(lam, bits)} {format_scalar(mu, bits)}")
        return "\n".join(out) + "\n"


def _batch_item(args):
    text, precision, seed, max_retries = args
    policy = TolerancePolicy(precision)
    try:
        f = parse_form(text)
        dec, report = decompose(f, policy, seed, max_retries)
        return (f"status = ok terms = {len(dec)} kind = {report.get('kind')} "
                f"residual = {report.get('residual')}")
    except ParseError as exc:
        return f"status = parse-error message = {exc}"
    except WaringError as exc:
        return f"status = failed error = {type(exc).__name__} message = {exc}"


def split_batch(text):
    """Forms separated by blank lines or ``---``."""
    blocks, cur = [], []
    for ln in text.splitlines():
        if not ln.strip() or ln.strip() == "---":
            if cur:
                blocks.append("\n".join(cur))
                cur = []
        else:
            cur.append(ln)
    if cur:
        blocks.append("\n".join(cur))
    return blocks


def cmd_batch(cfg):
    blocks = split_batch(_read_source(cfg.source))
    work = [(b, cfg.precision_bits, cfg.seed, cfg.max_retries) for b in blocks]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            lines = list(ex.map(_batch_item, work))
    else:
        lines = [_batch_item(w) for w in work]
    ok = all(ln.startswith("status = ok") for ln in lines)
    return "".join(f"index = {i} {ln}\n" for i, ln in enumerate(lines)), ok


def cmd_selftest(cfg, quick):
    acc = AcceptanceConfig(precision_bits=cfg.precision_bits, seed=cfg.seed)
    if quick:
        acc = AcceptanceConfig(precision_bits=cfg.precision_bits, seed=cfg.seed, n_random_quintics=10,
                               n_binary=100, n_identity_configs=5, n_pencils=3, n_refine=10,
                               refine_min_ok=10, n_determinism=2)
    lines = []
    results = run_all(acc, echo=lines.append)
    return "\n".join(lines) + "\n", all(r.passed for r in results)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=256, help="working precision in bits (>= 64)")
    common.add_argument("--seed", type=int, default=None, help="random seed (default: $WARING_SEED or 0)")
    common.add_argument("--max-retries", type=int, default=64)
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    p = _Parser(prog="waring", description="Waring decompositions of binary forms and ternary quintics")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in [
        ("rank", "Waring rank of a binary form"),
        ("decompose", "decompose a binary form or a ternary quintic"),
        ("lines", "certified apolar line configuration of a ternary quintic"),
        ("pencil", "rank-two pencil of a ternary quintic's four-line configuration"),
        ("batch", "decompose every form in a file"),
    ]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("form", help="file path, '-' for stdin, or inline text with ';' line breaks")
        if name == "batch":
            sp.add_argument("--jobs", type=int, default=1)
    sp = sub.add_parser("verify", parents=[common], help="residual of a decomposition")
    sp.add_argument("form")
    sp.add_argument("decomposition")
    sp = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    sp.add_argument("--quick", action="store_true", help="smaller sample sizes")
    return p


def run(cfg, decomposition=None, quick=False):
    """Execute one command; writes the output and returns the exit status."""
    try:
        with working_precision(_policy(cfg)):
            text, ok = _dispatch(cfg, decomposition, quick)
    except ParseError as exc:
        print(f"waring: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"waring: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WaringError as exc:
        print(f"waring: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CERT
    _emit(text, cfg.output)
    return EXIT_OK if ok else EXIT_CERT


def _dispatch(cfg, decomposition, quick):
    if cfg.command == "rank":
        return cmd_rank(cfg), True
    if cfg.command == "decompose":
        return cmd_decompose(cfg), True
    if cfg.command == "verify":
        return cmd_verify(cfg, decomposition)
    if cfg.command == "lines":
        return cmd_lines(cfg)
    if cfg.command == "pencil":
        return cmd_pencil(cfg), True
    if cfg.command == "batch":
        return cmd_batch(cfg)
    return cmd_selftest(cfg, quick)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.precision < 64:
        parser.error("--precision must be at least 64")
    cfg = RunConfig(
        command=args.command,
        precision_bits=args.precision,
        seed=_seed(args),
        max_retries=args.max_retries,
        source=getattr(args, "form", None),
        output=args.output,
        jobs=getattr(args, "jobs", 1),
    )
    return run(cfg, getattr(args, "decomposition", None), getattr(args, "quick", False))


if __name__ == "__main__":
    sys.exit(main())
