"""Acceptance criteria, one PASS/FAIL line each.

Runs under pytest or directly: ``python tests/test_acceptance.py``.
All comparisons are exact rational equality; the only tolerances are the
wall-clock budgets below.
"""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from functools import lru_cache

import pytest

from lcmodel import hassett, lc, oracle, picard
from lcmodel.combinat import WeightDatum

SEED = oracle.DEFAULT_SEED

# wall-clock budgets in seconds
BUDGET = {1: 10, 2: 60, 3: 300, 4: 300, 5: 300, 6: 30, 7: 900, 8: 300, 9: 300, 10: 300}

WORKED = [
    WeightDatum([1] * 5),
    WeightDatum([1, 1, 1, F(1, 4), F(1, 4)]),
    WeightDatum([1, 1, F(1, 4), F(1, 4), F(1, 4)]),
    WeightDatum([1] * 6),
]


@lru_cache(maxsize=None)
def samples(n: int, count: int) -> tuple[WeightDatum, ...]:
    return tuple(oracle.weight_samples(n, count, SEED))


def _failed(checks):
    return [{"check": c.name, "detail": c.detail, "failures": c.failures} for c in checks if not c.passed]


# ---------------------------------------------------------------------------


def criterion_1():
    dims = {n: oracle.verify_rank(n) for n in range(4, 9)}
    got = [c.detail["dimension"] for c in dims.values()]
    ok = all(c.passed for c in dims.values()) and got == [1, 5, 16, 42, 99]
    return ok, f"dimensions {got}"


def criterion_2():
    checks = [oracle.verify_relations_perp_fcurves(n) for n in range(4, 8)]
    pairs = sum(c.detail["fcurves"] * (c.detail["basis_rows"] + c.detail["raw_relations"]) for c in checks)
    bad = _failed(checks)
    return not bad, f"{pairs} relation x F-curve pairings, {len(bad)} failures"


def criterion_3():
    names = {"push-two-route", "pullpush-two-route", "difference-identity", "push-pull-round-trip"}
    insts = list(WORKED) + [A for n in (5, 6, 7) for A in samples(n, 50)]
    checks = [c for A in insts for c in oracle.verify_delta_routes(A) if c.name in names]
    bad = _failed(checks)
    return not bad and len(checks) == 4 * len(insts), f"{len(insts)} weight data, {len(checks)} checks, {len(bad)} failures"


def criterion_4():
    insts = [A for n in (5, 6) for A in samples(n, 20)] + [WORKED[0], WORKED[1], WORKED[3]]
    checks = [c for A in insts for c in oracle.verify_restrictions(A) if c.name == "boundary-splitting"]
    labels = sum(c.detail["labels"] for c in checks)
    bad = _failed(checks)
    return not bad and labels > 0, f"{len(insts)} weight data, {labels} nodal labels, {len(bad)} failures"


def criterion_5():
    insts = [A for n in (5, 6, 7) for A in samples(n, 20)] + WORKED[:3]
    checks = [c for A in insts for c in oracle.verify_collapses(A)]
    collapses = sum(c.detail["collapses"] for c in checks)
    bad = _failed(checks)
    return not bad and collapses > 0, f"{len(insts)} weight data, {collapses} maximal J, {len(bad)} failures"


def criterion_6():
    rng = random.Random(f"surface:{SEED}")
    insts = [oracle.random_weights(rng.randint(4, 10), rng) for _ in range(100)]
    checks = [oracle.verify_surface_identity(A) for A in insts]
    bad = _failed(checks)
    return not bad, f"100 weight data, n in {min(A.n for A in insts)}..{max(A.n for A in insts)}, {len(bad)} failures"


def criterion_7():
    n = 10
    A = WeightDatum([1, 1] + [F(1, 100)] * 8)
    rem = lc.is_log_canonical(hassett.pullpush_delta(A))
    controls = {}
    for beta in (F(0), F(1, 2), F(1)):
        v = lc.is_log_canonical(picard.canonical_K(n) + beta * picard.total_boundary(n))
        controls[str(beta)] = v.is_log_canonical and v.witness_checked
    # the coarser epsilon is reported, not judged
    coarse = lc.is_log_canonical(hassett.pullpush_delta(WeightDatum([1, 1] + [F(1, 10)] * 8)))
    ok = rem.is_log_canonical is False and rem.lp_status == "infeasible" and all(controls.values())
    return ok, (f"eps=1/100: {'yes' if rem.is_log_canonical else 'no'} ({rem.lp_status}); "
                f"eps=1/10: {'yes' if coarse.is_log_canonical else 'no'} ({coarse.lp_status}, informational); "
                f"K + beta D controls {controls}")


def criterion_8():
    insts = list(WORKED) + [A for n in (5, 6, 7) for A in samples(n, 50)]
    checks = [oracle.verify_fnef_suite(A) for A in insts]
    bad = _failed(checks)
    disagree = sum(not c.detail["zero_set_agrees"] for c in checks)
    minimum = min(F(c.detail["min"]) for c in checks)
    return not bad, (f"{len(insts)} weight data, min pairing {minimum}, "
                     f"zero-set disagreements {disagree} (informational)")


def criterion_9():
    insts = [A for n in (5, 6) for A in samples(n, 20)] + [WORKED[0], WORKED[1], WORKED[3]]
    adopted = flipped = labels = 0
    for A in insts:
        for I in hassett.nodal_labels(A):
            labels += 1
            adopted += hassett.check_self_restriction_sign(A, I, -1)
            flipped += hassett.check_self_restriction_sign(A, I, +1)
    ok = labels > 0 and adopted == labels and flipped == 0
    return ok, f"{labels} nodal labels: negative sign passes {adopted}, positive sign passes {flipped}"


def criterion_10():
    def suite():
        return json.dumps(oracle.run_suite([5, 6, 7], 10, SEED), indent=2)

    def cli():
        res = subprocess.run([sys.executable, "-m", "lcmodel", "verify", "--n", "5", "6", "--samples", "10",
                              "--seed", str(SEED)], capture_output=True)
        return res.returncode, res.stdout

    a, b = suite(), suite()
    (ca, oa), (cb, ob) = cli(), cli()
    ok = a == b and oa == ob and ca == cb == 0
    return ok, f"in-process reports {len(a)} bytes identical={a == b}; CLI reports identical={oa == ob}"


CRITERIA = {
    1: ("Neron-Severi dimension, n = 4..8", criterion_1),
    2: ("relation / F-curve orthogonality, n = 4..7", criterion_2),
    3: ("push/pull two-route identities and round trip", criterion_3),
    4: ("boundary splitting over nodal labels", criterion_4),
    5: ("collapse identity over maximal coincident sets", criterion_5),
    6: ("formal surface factorization", criterion_6),
    7: ("log canonical LP: light points at n = 10 and controls", criterion_7),
    8: ("F-nefness of the pulled-back class", criterion_8),
    9: ("self-restriction sign consistency", criterion_9),
    10: ("determinism", criterion_10),
}


def run_criterion(num: int) -> tuple[bool, str]:
    title, fn = CRITERIA[num]
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    in_time = dt <= BUDGET[num]
    status = "PASS" if ok and in_time else "FAIL"
    line = f"[{status}] criterion {num}: {title}: {detail}; {dt:.1f}s (budget {BUDGET[num]}s)"
    return ok and in_time, line


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    ok, line = run_criterion(num)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line, flush=True)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
