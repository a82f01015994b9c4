"""Command-line front end: predict, verify, sweep, catalog.

Exit codes: 0 success, 1 mismatch or violation, 2 inconclusive, 3 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from math import comb

import numpy as np

from . import numset
from .ffla import DEFAULT_PRIME, PrimeField
from .numset import LemmaViolation, ParseError, parse

EXIT_OK, EXIT_MISMATCH, EXIT_INCONCLUSIVE, EXIT_BAD_INPUT = 0, 1, 2, 3
DEFAULT_SEED = 20240601


class BadInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_BAD_INPUT)


@dataclass(frozen=True)
class CliConfig:
    prime: int = DEFAULT_PRIME
    trials: int = 3
    seed: int = DEFAULT_SEED
    json: bool = False
    ceiling: int = 4096
    prec4_variant: str = "literal"
    jobs: int = 1

    def __post_init__(self):
        try:
            PrimeField(self.prime)
        except ValueError as exc:
            raise BadInput(str(exc)) from None
        if self.trials < 1:
            raise BadInput("--trials must be >= 1")
        if self.ceiling < 64:
            raise BadInput("--ceiling must be >= 64")
        if self.prec4_variant not in numset.PREC4_VARIANTS:
            raise BadInput(f"--prec4-variant must be one of {numset.PREC4_VARIANTS}")
        if self.jobs < 1:
            raise BadInput("--jobs must be >= 1")


def resolve_seed(text):
    if text is None:
        text = os.environ.get("MAXRANK_SEED")
    if text is None:
        return DEFAULT_SEED
    if text == "random":
        return int(np.random.SeedSequence().entropy % 2**63)
    try:
        return int(text)
    except ValueError:
        raise BadInput(f"seed must be an integer or 'random', got {text!r}") from None


def parse_range(text):
    """``a..b`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise BadInput(f"bad range {text!r}") from None
    if lo > hi:
        raise BadInput(f"empty range {text!r}")
    return range(lo, hi + 1)


def _config(args):
    return CliConfig(
        prime=args.prime,
        trials=args.trials,
        seed=resolve_seed(args.seed),
        json=args.json,
        ceiling=args.ceiling,
        prec4_variant=args.prec4_variant,
        jobs=args.jobs,
    )


def _emit(cfg, payload, lines):
    if cfg.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for ln in lines:
            print(ln)


def _parse_eps(text):
    try:
        eps = parse(text)
    except ParseError as exc:
        raise BadInput(str(exc)) from None
    if not eps.is_admissible():
        raise BadInput(f"{eps.long_form()} is not admissible")
    return eps


def cmd_predict(args, cfg):
    from .oracle import exceptional_lookup, expected_hilbert

    eps = _parse_eps(args.eps)
    if args.t < 1:
        raise BadInput("--t must be >= 1")
    exp = expected_hilbert(eps, args.t)
    cv = numset.critical_value(eps)
    ov = exceptional_lookup(eps, args.t)
    payload = {
        "eps": str(eps),
        "t": args.t,
        "expected": exp.to_dict(),
        "critical_value": cv._asdict(),
        "override": None if ov is None else ov.to_dict(),
    }
    lines = [
        f"eps {eps.long_form()}  t={args.t}",
        f"expected h0={exp.h0} h1={exp.h1}  (w={exp.w}, capacity={exp.capacity})",
        f"critical value k={cv.k} (w_k={cv.w_at_k}, capacity={cv.capacity}, slack={cv.slack})",
    ]
    if ov is None:
        lines.append("override: none")
    else:
        kind = "exception" if ov.deviates else "listed, maximal rank"
        lines.append(f"override: h0={ov.h0} h1={ov.h1} [{kind}] cited {ov.source}")
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_verify(args, cfg):
    from .oracle import CERTIFIED_EXCEPTION, CERTIFIED_MAX_RANK, verdict

    eps = _parse_eps(args.eps)
    if args.t < 1:
        raise BadInput("--t must be >= 1")
    if comb(eps.n + args.t, eps.n) > cfg.ceiling:
        raise BadInput(f"C({eps.n + args.t},{eps.n}) columns exceed --ceiling {cfg.ceiling}")
    v = verdict(eps, args.t, cfg.prime, cfg.trials, cfg.seed)
    best = v.best
    lines = [
        f"eps {eps.long_form()}  t={args.t}  p={v.p}  seed={cfg.seed}",
        f"expected h0={v.expected.h0} h1={v.expected.h1}",
        f"computed h0={best.h0} h1={best.h1} (best of {len(v.samples)} trials)",
        f"status {v.status}" + ("  MISMATCH" if v.mismatch else ""),
    ]
    if v.override is not None:
        lines.insert(2, f"catalog h0={v.override.h0} h1={v.override.h1} cited {v.override.source}")
    _emit(cfg, v.to_dict(), lines)
    if v.mismatch:
        return EXIT_MISMATCH
    if v.status in (CERTIFIED_MAX_RANK, CERTIFIED_EXCEPTION):
        return EXIT_OK
    return EXIT_INCONCLUSIVE


def _sweep_extremal(args, cfg, n_values, k_values, which):
    counts = {"checked": 0, "pass": 0, "violations": 0, "skipped": 0}
    failures = []
    for n in n_values:
        for k in k_values:
            for eps in numset.enumerate_admissible(n, k, args.s_max, args.d_max):
                if eps.s < 2 and which != "rma1":
                    continue
                counts["checked"] += 1
                try:
                    if which == "rma1":
                        _, value = numset.minimal_eta(eps, k - 1)
                        ok = True
                    else:
                        eta, value = numset.maximal_eta(eps, cfg.prec4_variant)
                        ok = numset.hor2_check(eta, k) if which == "hor2" else True
                except LemmaViolation as exc:
                    ok, value = False, getattr(exc, "value", None)
                    failures.append({"eps": str(eps), "k": k, "reason": str(exc)})
                except ValueError:
                    counts["checked"] -= 1
                    counts["skipped"] += 1
                    continue
                if ok:
                    counts["pass"] += 1
                else:
                    counts["violations"] += 1
                    if which == "hor2":
                        failures.append({"eps": str(eps), "k": k, "reason": "sum of degrees below bound"})
    return counts, failures


def cmd_sweep(args, cfg):
    kind = args.kind
    failures = []
    if kind == "rq":
        if args.m_max < 1:
            raise BadInput("--m-max must be >= 1")
        counts = {"checked": 0, "pass": 0, "violations": 0}
        for m in range(1, args.m_max + 1):
            pair = numset.rq(m)
            r, q, _ = numset.rq_closed_form(m)
            ok = m * pair.r + 1 + pair.q == comb(m + 3, 3) and 0 <= pair.q <= m and (r, q) == (pair.r, pair.q)
            counts["checked"] += 1
            counts["pass" if ok else "violations"] += 1
            if not ok:
                failures.append({"m": m})
    elif kind == "nn1":
        if args.samples < 1:
            raise BadInput("--samples must be >= 1")
        n_values = list(parse_range(args.n or "3..8"))
        if n_values[0] < 3:
            raise BadInput("--n must be >= 3")
        rng = np.random.default_rng(cfg.seed)
        counts = {"checked": 0, "pass": 0, "violations": 0}
        for _ in range(args.samples):
            n = int(rng.choice(n_values))
            s = int(rng.integers(1, 6))
            pairs = []
            for _ in range(s):
                d = int(rng.integers(1, 3 * n + 10))
                pairs.append((d, int(rng.integers(0, d))))
            eps = numset.NumericalSet(n, tuple(pairs))
            k = int(rng.integers(2, 12))
            counts["checked"] += 1
            if numset.check_nn1(eps, k):
                counts["pass"] += 1
            else:
                counts["violations"] += 1
                failures.append({"eps": str(eps), "k": k})
    elif kind in ("ma2", "qma2", "rma1", "hor2"):
        default_n = "4" if kind == "qma2" else "5"
        n_values = list(parse_range(args.n or default_n))
        if kind == "qma2" and n_values != [4]:
            raise BadInput("qma2 sweeps n = 4")
        if kind != "qma2" and n_values[0] < 5:
            raise BadInput(f"{kind} sweeps need n >= 5")
        k_values = list(parse_range(args.k or ("5..7" if kind == "qma2" else "3..5")))
        counts, failures = _sweep_extremal(args, cfg, n_values, k_values, kind)
    elif kind == "theorem":
        from .oracle import theorem_sweep

        n = int(args.n or "4")
        k_values = list(parse_range(args.k or "2..3"))
        try:
            report = theorem_sweep(n, k_values, args.s_max, args.d_max, cfg.prime, cfg.trials, cfg.seed, cfg.ceiling, cfg.jobs)
        except ValueError as exc:
            raise BadInput(str(exc)) from None
        c = report.counts()
        payload = report.to_dict()
        payload["seed"] = cfg.seed
        lines = [f"theorem sweep n={n} k={k_values}: " + ", ".join(f"{k}={v}" for k, v in sorted(c.items()))]
        lines += [f"  {e['outcome']:>12} {e['eps']} k={e['k']}" for e in report.entries if e["outcome"] != "pass"]
        _emit(cfg, payload, lines)
        if c["fail"]:
            return EXIT_MISMATCH
        return EXIT_INCONCLUSIVE if c["inconclusive"] else EXIT_OK
    else:  # pragma: no cover - argparse restricts choices
        raise BadInput(f"unknown sweep {kind}")
    payload = {"kind": kind, "seed": cfg.seed, "counts": counts, "failures": failures}
    lines = [f"sweep {kind}: " + ", ".join(f"{k}={v}" for k, v in counts.items())]
    lines += [f"  violation: {json.dumps(f, sort_keys=True)}" for f in failures[:20]]
    _emit(cfg, payload, lines)
    return EXIT_MISMATCH if counts["violations"] else EXIT_OK


def cmd_catalog(args, cfg):
    from .oracle import catalog

    entries = [e.to_dict() for e in catalog()]
    lines = []
    for e in entries:
        kind = "exception" if e["deviates"] else "max rank"
        lines.append(f"{e['eps']:<24} t={e['t']}  h0={e['h0']} h1={e['h1']}  [{kind}]  {e['source']}")
    _emit(cfg, {"entries": entries}, lines)
    return EXIT_OK


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    common.add_argument("--trials", type=int, default=3)
    common.add_argument("--seed", default=None, help="integer or 'random' (falls back to $MAXRANK_SEED)")
    common.add_argument("--json", action="store_true")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--ceiling", type=int, default=4096, help="largest number of monomial columns allowed")
    common.add_argument("--prec4-variant", choices=numset.PREC4_VARIANTS, default="literal")

    parser = _Parser(prog="maxrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", parents=[common], help="expected Hilbert data and catalog overrides")
    p.add_argument("eps")
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="certify h0/h1 by rank computations")
    p.add_argument("eps")
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("sweep", parents=[common], help="run a verifier over a range")
    p.add_argument("kind", choices=["nn1", "ma2", "qma2", "rma1", "hor2", "rq", "theorem"])
    p.add_argument("--m-max", type=int, default=10000)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--n", default=None, help="value or range a..b")
    p.add_argument("--k", default=None, help="value or range a..b")
    p.add_argument("--s-max", type=int, default=3)
    p.add_argument("--d-max", type=int, default=15)

    sub.add_parser("catalog", parents=[common], help="print the exceptional table")
    return parser


COMMANDS = {"predict": cmd_predict, "verify": cmd_verify, "sweep": cmd_sweep, "catalog": cmd_catalog}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except BadInput as exc:
        print(f"maxrank: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
