"""Predicted Hilbert data, the exceptional catalog and Monte Carlo verdicts."""
from __future__ import annotations

import json
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from math import comb

import numpy as np

from ..ffla import DEFAULT_PRIME, SECOND_PRIME
from ..geom import CurveModel, h0_h1, union_recipe
from ..numset import NumericalSet, critical_value, enumerate_admissible, parse, w_raw
from .schema import SCHEMA_VERSION, VERDICT_SCHEMA, SWEEP_SCHEMA

CERTIFIED_MAX_RANK = "CertifiedMaxRank"
CERTIFIED_EXCEPTION = "CertifiedException"
INCONCLUSIVE = "Inconclusive"


class CatalogError(ValueError):
    pass


class UnsupportedModel(ValueError):
    """No model recipe exists for this numerical set."""


@dataclass(frozen=True)
class Expected:
    t: int
    h0: int
    h1: int
    w: int
    capacity: int

    def to_dict(self):
        return {"t": self.t, "h0": self.h0, "h1": self.h1, "w": self.w, "capacity": self.capacity}


def expected_hilbert(eps, t):
    if t < 1:
        raise ValueError("t must be >= 1")
    if not eps.is_admissible():
        raise UnsupportedModel(f"{eps.long_form()} is not admissible")
    w = w_raw(eps.pairs, t)
    cap = comb(eps.n + t, eps.n)
    return Expected(t, max(0, cap - w), max(0, w - cap), w, cap)


def _key(eps):
    return (eps.n, tuple(sorted(eps.pairs)))


@dataclass(frozen=True)
class ExceptionalEntry:
    eps: NumericalSet
    t: int
    h0: int
    h1: int
    source: str
    deviates: bool = True
    note: str = ""

    def to_dict(self):
        return {
            "eps": str(self.eps),
            "t": self.t,
            "h0": self.h0,
            "h1": self.h1,
            "source": self.source,
            "deviates": self.deviates,
            "note": self.note,
        }


def _check_entry(entry):
    exp = expected_hilbert(entry.eps, entry.t)
    if entry.h0 - entry.h1 != exp.capacity - exp.w:
        raise CatalogError(f"{entry.eps} at t={entry.t}: h0 - h1 = {entry.h0 - entry.h1}, chi says {exp.capacity - exp.w}")
    if entry.deviates == ((entry.h0, entry.h1) == (exp.h0, exp.h1)):
        raise CatalogError(f"{entry.eps} at t={entry.t}: deviation flag disagrees with the prediction")


def load_catalog(data=None):
    """Parse and validate catalog records; the packaged table is used by default."""
    if data is None:
        data = json.loads(resources.files(__package__).joinpath("catalog.json").read_text())
    entries = []
    for rec in data["entries"]:
        entry = ExceptionalEntry(
            parse(rec["eps"]).canonical(),
            int(rec["t"]),
            int(rec["h0"]),
            int(rec["h1"]),
            "; ".join(rec["sources"]),
            bool(rec.get("deviates", True)),
            rec.get("note", ""),
        )
        _check_entry(entry)
        entries.append(entry)
    keys = [(_key(e.eps), e.t) for e in entries]
    if len(set(keys)) != len(keys):
        raise CatalogError("duplicate catalog entries")
    return tuple(entries)


@lru_cache(maxsize=1)
def catalog():
    return load_catalog()


@lru_cache(maxsize=1)
def _index():
    return {(_key(e.eps), e.t): e for e in catalog()}


def exceptional_lookup(eps, t):
    return _index().get((_key(eps), t))


# --- verdicts ---------------------------------------------------------------


def master_seed(seed, eps, t, p):
    tag = zlib.crc32(str(eps.canonical()).encode())
    return int(np.random.SeedSequence([int(seed), tag, int(t), int(p)]).generate_state(1, np.uint64)[0])


@dataclass
class Verdict:
    eps: NumericalSet
    t: int
    expected: Expected
    override: ExceptionalEntry | None
    samples: list
    status: str
    p: int
    seed: int
    mismatch: bool = False
    attempts: list = field(default_factory=list)

    @property
    def best(self):
        return min(self.samples, key=lambda s: (s.h0, s.seed))

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "eps": str(self.eps),
            "t": self.t,
            "p": self.p,
            "seed": self.seed,
            "expected": self.expected.to_dict(),
            "override": None if self.override is None else self.override.to_dict(),
            "samples": [s.to_dict() for s in self.samples],
            "status": self.status,
            "mismatch": self.mismatch,
            "attempts": list(self.attempts),
        }


def _status(samples, expected, override):
    low = min(s.h0 for s in samples)
    if any(s.h0 == expected.h0 for s in samples):
        return CERTIFIED_MAX_RANK
    if override is not None and low == override.h0:
        return CERTIFIED_EXCEPTION
    return INCONCLUSIVE


def _mismatch(status, override, samples):
    if override is None:
        return status == CERTIFIED_EXCEPTION
    low = min(s.h0 for s in samples)
    if status == CERTIFIED_MAX_RANK and override.deviates:
        return True
    return low < override.h0


def model_recipe(eps):
    if not eps.is_admissible():
        raise UnsupportedModel(f"{eps.long_form()} is not admissible")
    return union_recipe(eps.n, eps.pairs)


def verdict(eps, t, p=DEFAULT_PRIME, trials=3, seed=0, retry=True):
    """Certify the Hilbert function value of a general union at degree t."""
    if trials < 1:
        raise ValueError("need at least one trial")
    expected = expected_hilbert(eps, t)
    override = exceptional_lookup(eps, t)
    recipe = model_recipe(eps)
    primes = [p]
    if retry:
        primes.append(SECOND_PRIME if p != SECOND_PRIME else DEFAULT_PRIME)
    attempts = []
    for q in primes:
        ms = master_seed(seed, eps, t, q)
        samples = h0_h1(CurveModel(eps.n, p=q, recipe=recipe), t, q, trials, ms)
        status = _status(samples, expected, override)
        attempts.append({"p": q, "status": status})
        if status != INCONCLUSIVE:
            break
    return Verdict(eps, t, expected, override, samples, status, q, int(seed), _mismatch(status, override, samples), attempts)


# --- theorem sweep -------------------------------------------------------------


@dataclass
class SweepReport:
    n: int
    k_values: list
    entries: list = field(default_factory=list)

    def counts(self):
        out = {"pass": 0, "fail": 0, "inconclusive": 0, "exceptions": 0}
        for e in self.entries:
            out[e["outcome"]] += 1
            out["exceptions"] += sum(1 for c in e["checks"] if c["status"] == CERTIFIED_EXCEPTION)
        return out

    @property
    def ok(self):
        c = self.counts()
        return c["fail"] == 0 and c["inconclusive"] == 0

    def to_dict(self):
        return {"schema": SCHEMA_VERSION, "n": self.n, "k": self.k_values, "counts": self.counts(), "entries": self.entries}


def _check_one(args):
    eps_text, k, p, trials, seed = args
    eps = parse(eps_text)
    checks = []
    degrees = [k - 1, k] if k >= 2 else [k]
    for t in degrees:
        v = verdict(eps, t, p, trials, seed)
        want = "h1=0" if t == k else ("h0=0" if k >= 3 else "max rank")
        best = v.best
        checks.append({"t": t, "want": want, "status": v.status, "mismatch": v.mismatch, "h0": best.h0, "h1": best.h1, "p": v.p})
    if any(c["status"] == INCONCLUSIVE for c in checks):
        outcome = "inconclusive"
    elif any(c["mismatch"] for c in checks) or any(
        c["status"] == CERTIFIED_EXCEPTION and eps.n >= 4 for c in checks
    ):
        outcome = "fail"
    else:
        outcome = "pass"
    return {"eps": str(eps), "k": k, "checks": checks, "outcome": outcome}


def theorem_sweep(n, k_range, s_max, d_max, p=DEFAULT_PRIME, trials=3, seed=0, ceiling=4096, jobs=1):
    ks = list(k_range)
    for k in ks:
        if comb(n + k, n) > ceiling:
            raise ValueError(f"C({n + k}, {n}) = {comb(n + k, n)} exceeds the ceiling {ceiling}")
    tasks = []
    for k in ks:
        for eps in enumerate_admissible(n, k, s_max, d_max):
            tasks.append((str(eps), k, p, trials, seed))
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_one, tasks, chunksize=4))
    else:
        results = [_check_one(t) for t in tasks]
    results.sort(key=lambda e: (e["k"], len(parse(e["eps"]).pairs), parse(e["eps"]).pairs))
    return SweepReport(n, ks, results)


__all__ = [
    "CERTIFIED_EXCEPTION",
    "CERTIFIED_MAX_RANK",
    "INCONCLUSIVE",
    "CatalogError",
    "ExceptionalEntry",
    "Expected",
    "SCHEMA_VERSION",
    "SWEEP_SCHEMA",
    "SweepReport",
    "UnsupportedModel",
    "VERDICT_SCHEMA",
    "Verdict",
    "catalog",
    "critical_value",
    "exceptional_lookup",
    "expected_hilbert",
    "load_catalog",
    "master_seed",
    "model_recipe",
    "theorem_sweep",
    "verdict",
]
