"""End-to-end acceptance checks, one group per numbered criterion.

Each test records its outcome in RESULTS; the conftest hook prints one
"criterion N: PASS/FAIL" line per criterion after the run.  Run alone with

    pytest tests/test_acceptance.py -v
"""
import json
import time
from functools import lru_cache
from math import comb

import numpy as np
import pytest
from builders import random_chi_model

from maxrank.ffla import DEFAULT_PRIME, SECOND_PRIME
from maxrank.geom import (
    PLANAR,
    CurveModel,
    general_decoration_extra,
    general_secant,
    h0_h1,
    independence_check,
    representative,
    residual_chi_check,
    union_recipe,
)
from maxrank.numset import (
    LemmaViolation,
    NumericalSet,
    admissible_pairs,
    check_nn1,
    enumerate_admissible,
    hor2_check,
    maximal_bound,
    maximal_eta,
    minimal_eta,
    parse,
    rq,
    rq_closed_form,
)
from maxrank.oracle import CERTIFIED_EXCEPTION, CERTIFIED_MAX_RANK, catalog, theorem_sweep, verdict

PRIMES = (DEFAULT_PRIME, SECOND_PRIME)
TRIALS = 3
SEED = 0

# criterion -> list of (part, ok, detail)
RESULTS = {}


def record(criterion, part, ok, detail):
    RESULTS.setdefault(criterion, []).append((part, bool(ok), detail))
    print(f"criterion {criterion} [{part}]: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def summary_lines():
    lines = []
    for c in sorted(RESULTS):
        parts = RESULTS[c]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'ok' if good else 'FAILED'} ({info})" for name, good, info in parts)
        lines.append(f"criterion {c}: {'PASS' if ok else 'FAIL'}  {detail}")
    return lines


def _outcome(v):
    return (v.status, v.best.h0, v.best.h1)


# --- shared computations, cached so the two-prime check can reuse them -----------------------

# two general conics, conic pairs and triples with a rational quartic, and so on;
# values are the (h0, h1) reported for general unions of smooth rational curves
RATIONAL_EXCEPTIONS = [
    ("3; 2,0; 2,0", 2, (1, 1)),
    ("3; 4,0; 2,0", 3, (1, 1)),
    ("3; 2,0; 2,0; 2,0", 3, (1, 2)),
    ("3; 4,0; 2,0; 2,0", 4, (1, 1)),
    ("3; 2,0; 2,0; 2,0; 2,0", 4, (1, 2)),
]

ELLIPTIC_EXCEPTIONS = [
    ("3; 4,1; 2,0", 3, (2, 1)),
    ("3; 5,2; 4,1", 4, (2, 2)),
    ("3; 4,1; 4,1", 4, (4, 1)),
    ("3; 4,1; 2,0; 2,0", 4, (2, 1)),
]


@lru_cache(maxsize=None)
def exception_runs(p, which):
    cases = RATIONAL_EXCEPTIONS if which == "rational" else ELLIPTIC_EXCEPTIONS
    out = []
    for text, t, want in cases:
        start = time.perf_counter()
        v = verdict(parse(text), t, p, TRIALS, SEED, retry=False)
        out.append((text, t, want, v, time.perf_counter() - start))
    return out


def spot_population(t, centre, d_max=12, width=6):
    """Admissible unions in P^3 with w_t within width of centre, minus catalogued sets."""
    listed = {str(e.eps) for e in catalog()}
    pairs = admissible_pairs(3, d_max)
    weights = [t * d + 1 - g for d, g in pairs]
    found = []

    def walk(start, chosen, total):
        if chosen and abs(total - centre) <= width:
            eps = NumericalSet(3, tuple(pairs[i] for i in chosen))
            if eps.is_admissible() and str(eps) not in listed:
                found.append(eps)
        for i in range(start, len(pairs)):
            if total + weights[i] <= centre + width:
                chosen.append(i)
                walk(i, chosen, total + weights[i])
                chosen.pop()

    walk(0, [], 0)
    return sorted(found, key=str)


@lru_cache(maxsize=None)
def spot_sample(t, centre, size=50):
    pop = spot_population(t, centre)
    idx = np.random.default_rng(SEED).choice(len(pop), size=min(size, len(pop)), replace=False)
    return tuple(pop[i] for i in sorted(idx))


@lru_cache(maxsize=None)
def spot_runs(p):
    out = []
    for t, centre in ((3, 20), (4, 35)):
        for eps in spot_sample(t, centre):
            out.append((str(eps), t, verdict(eps, t, p, TRIALS, SEED, retry=False)))
    return out


# every union with critical value <= 3 in P^4 has at most C(7,4) // 4 = 8 components,
# since a line already contributes 4 conditions to cubics
SWEEP_S_MAX = comb(7, 4) // 4


@lru_cache(maxsize=None)
def sweep_run(p):
    start = time.perf_counter()
    rep = theorem_sweep(4, [2, 3], SWEEP_S_MAX, 8, p, TRIALS, SEED)
    return rep, time.perf_counter() - start


@lru_cache(maxsize=None)
def maximal_table(n, variant):
    ks = range(5, 8) if n == 4 else range(3, 6)
    rows = []
    for k in ks:
        for eps in enumerate_admissible(n, k, 3, 15):
            if eps.s < 2:
                continue  # a single component has no proper downset to search
            try:
                eta, slack = maximal_eta(eps, variant)
                rows.append((eps, k, eta, slack, None))
            except LemmaViolation as exc:
                rows.append((eps, k, getattr(exc, "eta", None), getattr(exc, "value", None), str(exc)))
    return rows


# --- criterion 1 ---------------------------------------------------------------------------


def test_criterion_1_rational_exception_values():
    runs = exception_runs(DEFAULT_PRIME, "rational")
    bad = [(text, t, (v.best.h0, v.best.h1)) for text, t, want, v, _ in runs if (v.best.h0, v.best.h1) != want]
    wrong_status = [text for text, _, _, v, _ in runs if v.status != CERTIFIED_EXCEPTION]
    slow = [text for text, _, _, _, dt in runs if dt >= 10]
    worst = max(dt for *_, dt in runs)
    ok = not bad and not wrong_status and not slow
    record(1, "five cases", ok, f"mismatches={bad} status={wrong_status} slowest={worst:.2f}s")
    assert ok


# --- criterion 2 ---------------------------------------------------------------------------


def test_criterion_2_elliptic_example_values():
    start = time.perf_counter()
    runs = exception_runs(DEFAULT_PRIME, "elliptic")
    total = time.perf_counter() - start
    bad = [(text, t, (v.best.h0, v.best.h1)) for text, t, want, v, _ in runs if (v.best.h0, v.best.h1) != want]
    ok = not bad and all(v.status == CERTIFIED_EXCEPTION for *_, v, _ in runs) and total <= 30
    record(2, "four examples", ok, f"mismatches={bad} total={total:.2f}s")
    assert ok


# --- criterion 3 ---------------------------------------------------------------------------


def test_criterion_3_space_spot_checks():
    start = time.perf_counter()
    runs = spot_runs(DEFAULT_PRIME)
    elapsed = time.perf_counter() - start
    not_max = [(text, t, v.status, v.best.h0, v.best.h1) for text, t, v in runs if v.status != CERTIFIED_MAX_RANK]
    ok = not not_max and elapsed <= 300 and len(runs) == 100
    record(3, "50 at t=3, 50 at t=4", ok, f"checked={len(runs)} not certified={not_max} time={elapsed:.1f}s")
    assert ok


# --- criterion 4 ---------------------------------------------------------------------------


def test_criterion_4_desk_scale_sweep():
    rep, elapsed = sweep_run(DEFAULT_PRIME)
    counts = rep.counts()
    problems = []
    for e in rep.entries:
        k = e["k"]
        for c in e["checks"]:
            if c["status"] != CERTIFIED_MAX_RANK:
                problems.append((e["eps"], c["t"], c["status"]))
            elif c["t"] == k and c["h1"] != 0:
                problems.append((e["eps"], c["t"], "h1 != 0"))
            elif c["t"] == k - 1 and c["h0"] != 0:
                problems.append((e["eps"], c["t"], "h0 != 0"))
    ok = rep.entries and not problems and counts["exceptions"] == 0 and elapsed <= 600
    record(4, "n=4, k in {2,3}, d <= 8", ok, f"sets={len(rep.entries)} counts={counts} problems={problems[:5]} time={elapsed:.1f}s")
    assert ok


# --- criterion 5 ---------------------------------------------------------------------------


def test_criterion_5_rq_closed_forms():
    start = time.perf_counter()
    bad_relation, bad_closed, flagged = [], [], set()
    for m in range(1, 10_001):
        r, q = rq(m)[1:]
        if m * r + 1 + q != comb(m + 3, 3) or not 0 <= q <= m:
            bad_relation.append(m)
        cr, cq, reconciled = rq_closed_form(m)
        if (cr, cq) != (r, q):
            bad_closed.append(m)
        if reconciled:
            flagged.add(m % 6)
    elapsed = time.perf_counter() - start
    ok = not bad_relation and not bad_closed and flagged == {4} and elapsed < 1
    record(5, "m <= 10^4", ok, f"relation={bad_relation[:5]} closed={bad_closed[:5]} reconciled residues={sorted(flagged)} time={elapsed:.2f}s")
    assert ok


# --- criterion 6 ---------------------------------------------------------------------------


def test_criterion_6_nn1_random_inputs():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    violations = []
    for _ in range(10_000):
        n = int(rng.integers(3, 9))
        pairs = []
        for _ in range(int(rng.integers(1, 6))):
            d = int(rng.integers(1, 3 * n + 10))
            pairs.append((d, int(rng.integers(0, d))))
        eps = NumericalSet(n, tuple(pairs))
        k = int(rng.integers(2, 12))
        if not check_nn1(eps, k):
            violations.append((str(eps), k))
    elapsed = time.perf_counter() - start
    ok = not violations and elapsed < 10
    record(6, "10^4 samples", ok, f"violations={violations[:5]} time={elapsed:.2f}s")
    assert ok


# --- criterion 7 ---------------------------------------------------------------------------


def _slack_failures(rows, n):
    return [(str(eps), k, slack, err) for eps, k, _, slack, err in rows if err or not 0 <= slack <= maximal_bound(n, k)]


def test_criterion_7_maximal_slack_in_p4():
    start = time.perf_counter()
    rows = maximal_table(4, "interpolation")
    fails = _slack_failures(rows, 4)
    literal_fails = _slack_failures(maximal_table(4, "literal"), 4)
    elapsed = time.perf_counter() - start
    ok = not fails
    record(
        7,
        "n=4 maximal slack <= 2k-4",
        ok,
        f"checked={len(rows)} failures={fails[:3]} (literal rule: {len(literal_fails)} failures) time={elapsed:.1f}s",
    )
    assert ok


def test_criterion_7_maximal_slack_in_p5():
    rows = maximal_table(5, "literal")
    fails = _slack_failures(rows, 5)
    ok = not fails
    record(7, "n=5 maximal slack <= 2k", ok, f"checked={len(rows)} failures={len(fails)} e.g. {fails[:2]}")
    assert ok


def test_criterion_7_minimal_excess_in_p5():
    checked, fails = 0, []
    for k in range(3, 6):
        for eps in enumerate_admissible(5, k, 3, 15):
            checked += 1
            try:
                _, excess = minimal_eta(eps, k - 1)
                if not 0 <= excess <= 2 * (k - 1):
                    fails.append((str(eps), k, excess))
            except LemmaViolation as exc:
                fails.append((str(eps), k, str(exc)))
    ok = not fails
    record(7, "n=5 minimal excess <= 2k", ok, f"checked={checked} failures={fails[:3]}")
    assert ok


def test_criterion_7_degree_sum_bound():
    rows = maximal_table(5, "literal")
    fails = [(str(eps), k, str(eta)) for eps, k, eta, _, _ in rows if eta is None or not hor2_check(eta, k)]
    ok = not fails
    record(7, "n=5 degree sum of maximal element", ok, f"checked={len(rows)} failures={len(fails)} e.g. {fails[:2]}")
    assert ok


# --- criterion 8 ---------------------------------------------------------------------------


def test_criterion_8_residual_bookkeeping():
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    good = 0
    for _ in range(100):
        model, H = random_chi_model(rng)
        good += bool(residual_chi_check(model, H, t=int(rng.integers(1, 5))))
    elapsed = time.perf_counter() - start
    ok = good == 100 and elapsed < 5
    record(8, "100 random models", ok, f"exact={good}/100 time={elapsed:.2f}s")
    assert ok


# --- criterion 9 ---------------------------------------------------------------------------


def test_criterion_9_independence_drops():
    start = time.perf_counter()
    cubic = CurveModel(3, recipe=union_recipe(3, [(3, 0)]))
    secant = independence_check(cubic, general_secant(0), 2, DEFAULT_PRIME, TRIALS, SEED)
    planar = independence_check(CurveModel(3), general_decoration_extra(PLANAR), 2, DEFAULT_PRIME, TRIALS, SEED)
    h1s = {}
    for m in (3, 4):
        z = (comb(m + 3, 3) - 2) // 3
        model = CurveModel(m, recipe=union_recipe(m, [], planar=z))
        h1s[m] = representative(h0_h1(model, 3, DEFAULT_PRIME, TRIALS, SEED)).h1
    elapsed = time.perf_counter() - start
    ok = secant == (3, 2) and planar == (10, 7) and h1s == {3: 0, 4: 0} and elapsed < 30
    record(9, "secant, planar point, planar sets", ok, f"secant={secant} planar={planar} h1={h1s} time={elapsed:.2f}s")
    assert ok


# --- criterion 10 --------------------------------------------------------------------------


def _dump(v):
    return json.dumps(v.to_dict(), sort_keys=True)


def test_criterion_10_rerun_is_byte_identical():
    cases = [(parse(text), t) for text, t, _ in RATIONAL_EXCEPTIONS + ELLIPTIC_EXCEPTIONS]
    cases += [(parse(text), t) for text, t, _ in spot_runs(DEFAULT_PRIME)[:10]]
    differing = [str(eps) for eps, t in cases if _dump(verdict(eps, t, DEFAULT_PRIME, TRIALS, SEED)) != _dump(verdict(eps, t, DEFAULT_PRIME, TRIALS, SEED))]
    ok = not differing
    record(10, "byte-identical reruns", ok, f"checked={len(cases)} differing={differing}")
    assert ok


def test_criterion_10_two_prime_agreement():
    disagree = []
    for which in ("rational", "elliptic"):
        a, b = (exception_runs(p, which) for p in PRIMES)
        disagree += [(x[0], x[1]) for x, y in zip(a, b) if _outcome(x[3]) != _outcome(y[3])]
    a, b = (spot_runs(p) for p in PRIMES)
    disagree += [(x[0], x[1]) for x, y in zip(a, b) if _outcome(x[2]) != _outcome(y[2])]
    ra, rb = (sweep_run(p)[0] for p in PRIMES)

    def summary(rep):
        return [(e["eps"], e["k"], e["outcome"], [(c["t"], c["status"], c["h0"], c["h1"]) for c in e["checks"]]) for e in rep.entries]

    disagree += [(x[0], x[1]) for x, y in zip(summary(ra), summary(rb)) if x != y]
    ok = not disagree and len(ra.entries) == len(rb.entries)
    record(10, "two-prime agreement on criteria 1-4", ok, f"disagreements={disagree[:5]}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
