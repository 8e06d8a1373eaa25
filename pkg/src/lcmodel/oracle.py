"""Brute-force cross-checks, written against frozensets rather than the bitmask code paths.

Each ``verify_*`` returns a :class:`Check`; suites aggregate them and keep the
first offending instances for replay.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable

from . import hassett, lc, picard
from .combinat import WeightDatum, enumerate_boundary, enumerate_fcurves, from_mask, to_mask
from .picard import MznClass

DEFAULT_SEED = 20110101


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)


def _fr(x: Fraction) -> str:
    return str(x)


# ---------------------------------------------------------------------------
# counting oracles


def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def brute_labels(n: int) -> list[frozenset[int]]:
    """Unordered splittings ``{I, I^c}``, each represented by the side without ``n``."""
    out = set()
    ground = frozenset(range(1, n + 1))
    for size in range(2, n - 1):
        for I in itertools.combinations(range(1, n + 1), size):
            I = frozenset(I)
            out.add(I if n not in I else ground - I)
    return sorted(out, key=lambda s: sorted(s))


def verify_rank(n: int) -> Check:
    rel = picard.keel_relations(n)
    nbd = len(enumerate_boundary(n))
    got = nbd - rel.rank
    want = 2 ** (n - 1) - comb(n, 2) - 1
    return Check("neron-severi-dimension", got == want and nbd == len(brute_labels(n)),
                 {"n": n, "boundary": nbd, "relation_rank": rel.rank, "dimension": got, "expected": want})


# ---------------------------------------------------------------------------
# F-curve pairing, independent version


def brute_pairing(label: frozenset[int], blocks: Iterable[frozenset[int]], n: int) -> int:
    ground = frozenset(range(1, n + 1))
    sides = {label, ground - label}
    blocks = list(blocks)
    if any(b in sides for b in blocks):
        return -1
    if any(a | b in sides for a, b in itertools.combinations(blocks, 2)):
        return 1
    return 0


def _labels_by_position(n: int) -> list[frozenset[int]]:
    return [frozenset(I.members) for I in enumerate_boundary(n)]


def brute_pair_class(X: MznClass, blocks) -> Fraction:
    labels = _labels_by_position(X.n)
    return sum((c * brute_pairing(L, blocks, X.n) for c, L in zip(X.coeffs, labels) if c), Fraction(0))


def keel_relations_bruteforce(n: int) -> list[dict[frozenset[int], int]]:
    """Every relation ``D(ij|kl) - D(ik|jl)`` keyed by n-excluded frozensets."""
    labels = brute_labels(n)
    ground = frozenset(range(1, n + 1))
    out = []
    for quad in itertools.permutations(range(1, n + 1), 4):
        i, j, k, l = quad
        if not (i < j and k < l and i < k):
            continue

        def side(a, b, c, d):
            return {L for L in labels
                    if any({a, b} <= S and not ({c, d} & S) for S in (L, ground - L))}

        lhs, rhs = side(i, j, k, l), side(i, k, j, l)
        rel: dict[frozenset[int], int] = {}
        for L in lhs:
            rel[L] = rel.get(L, 0) + 1
        for L in rhs:
            rel[L] = rel.get(L, 0) - 1
        out.append({L: c for L, c in rel.items() if c})
    return out


def verify_relations_perp_fcurves(n: int) -> Check:
    curves = enumerate_fcurves(n)
    blocks = [[frozenset(b) for b in F.blocks] for F in curves]
    labels = _labels_by_position(n)
    failures = []
    rows = picard.keel_relations(n).rows
    for r, row in enumerate(rows):
        X = MznClass(n, row)
        for F, bl in zip(curves, blocks):
            a = picard.pair_fcurve(X, F)
            b = sum((c * brute_pairing(L, bl, n) for c, L in zip(row, labels) if c), Fraction(0))
            if a or b:
                failures.append({"row": r, "curve": str(F), "pairing": _fr(a), "brute": _fr(b)})
    raw = keel_relations_bruteforce(n)
    for r, rel in enumerate(raw):
        for F, bl in zip(curves, blocks):
            v = sum(c * brute_pairing(L, bl, n) for L, c in rel.items())
            if v:
                failures.append({"raw_relation": r, "curve": str(F), "pairing": v})
        # each raw relation must also reduce to zero through the row-reduced basis
        X = MznClass.from_terms(n, {to_mask(L): c for L, c in rel.items()})
        if not picard.canonical_form(X).is_zero_vector():
            failures.append({"raw_relation": r, "canonical_form": "nonzero"})
    return Check("relations-perp-fcurves", not failures,
                 {"n": n, "basis_rows": len(rows), "raw_relations": len(raw), "fcurves": len(curves)},
                 failures[:10])


def verify_fcurve_pairing(n: int) -> Check:
    """``pair_fcurve`` on each generator against the frozenset rule."""
    failures = []
    labels = _labels_by_position(n)
    for F in enumerate_fcurves(n):
        bl = [frozenset(b) for b in F.blocks]
        for k, L in enumerate(labels):
            e = [Fraction(0)] * len(labels)
            e[k] = Fraction(1)
            a = picard.pair_fcurve(MznClass(n, tuple(e)), F)
            b = brute_pairing(L, bl, n)
            if a != b:
                failures.append({"curve": str(F), "label": sorted(L), "pairing": _fr(a), "brute": b})
    return Check("fcurve-pairing-generators", not failures, {"n": n}, failures[:10])


# ---------------------------------------------------------------------------
# surface ring with omega and the sections


class SurfaceCycle:
    """Quadratic monomials in ``omega`` (index 0) and ``sigma_1..sigma_n``.

    Normal form: ``omega.sigma_i = -sigma_i^2`` and ``sigma_i.sigma_j = 0`` for
    ``a_i + a_j > 1``.
    """

    def __init__(self, A: WeightDatum, terms: dict[tuple[int, int], Fraction] | None = None):
        self.A = A
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def product(A: WeightDatum, f: dict[int, Fraction], g: dict[int, Fraction]) -> "SurfaceCycle":
        out: dict[tuple[int, int], Fraction] = {}
        for i, a in f.items():
            for j, b in g.items():
                key = (min(i, j), max(i, j))
                out[key] = out.get(key, Fraction(0)) + a * b
        return SurfaceCycle(A, out)

    def normal_form(self) -> dict[tuple[int, int], Fraction]:
        out: dict[tuple[int, int], Fraction] = {}
        for (i, j), c in self.terms.items():
            if i == 0 and j > 0:
                key, c = (j, j), -c
            elif i > 0 and i != j and self.A[i] + self.A[j] > 1:
                continue
            else:
                key = (i, j)
            out[key] = out.get(key, Fraction(0)) + c
        return {k: v for k, v in sorted(out.items()) if v}


def verify_surface_identity(A: WeightDatum) -> Check:
    n = A.n
    lhs: dict[tuple[int, int], Fraction] = {(0, 0): Fraction(2)}
    for i in range(1, n + 1):
        lhs[(0, i)] = 1 + A[i]
    for i, j in itertools.combinations(range(1, n + 1), 2):
        if A[i] + A[j] <= 1:
            lhs[(i, j)] = A[i] + A[j]
    left = SurfaceCycle(A, lhs).normal_form()
    f = {0: Fraction(1), **{i: A[i] for i in range(1, n + 1)}}
    g = {0: Fraction(2), **{i: Fraction(1) for i in range(1, n + 1)}}
    right = SurfaceCycle.product(A, f, g).normal_form()
    ok = left == right
    fail = [] if ok else [{"weights": [_fr(a) for a in A.weights]}]
    return Check("surface-factorization", ok, {"n": n}, fail)


# ---------------------------------------------------------------------------
# the divisor pipeline


def _w(A: WeightDatum) -> list[str]:
    return [_fr(a) for a in A.weights]


def verify_pipeline(A: WeightDatum, restrictions: bool = True) -> list[Check]:
    """Every identity at ``A``; boundary restriction is the slow part and can be skipped."""
    checks = verify_delta_routes(A)
    if restrictions:
        checks += verify_restrictions(A)
    checks += verify_collapses(A)
    return checks


def verify_delta_routes(A: WeightDatum) -> list[Check]:
    n = A.n
    checks = []
    c = hassett.hassett_eq(A, hassett.pushforward(A, picard.delta(A)), hassett.pushed_delta(A))
    checks.append(Check("push-two-route", c, {"weights": _w(A)}))
    c = picard.eq(hassett.pullback(A, hassett.pushed_delta(A)), hassett.pullpush_delta(A))
    checks.append(Check("pullpush-two-route", c, {"weights": _w(A)}))
    c = picard.eq(picard.delta(A) - hassett.pullpush_delta(A), hassett.difference_delta(A))
    diff = hassett.difference_delta(A)
    c = c and all(x >= 0 for x in diff.coeffs)
    checks.append(Check("difference-identity", c, {"weights": _w(A)}))

    bad = []
    for gen in _generators(A):
        back = hassett.pushforward(A, hassett.pullback(A, gen))
        # hassett_eq compares pullbacks, so this is a genuine round trip
        if not hassett.hassett_eq(A, back, gen):
            bad.append(str(gen))
    checks.append(Check("push-pull-round-trip", not bad, {"weights": _w(A)}, bad[:5]))

    bad = [i for i in range(1, n + 1)
           if not hassett.hassett_eq(A, hassett.pushforward(A, picard.psi(i, n)), hassett.push_psi(A, i))]
    checks.append(Check("psi-push-consistency", not bad, {"weights": _w(A)}, bad))

    k1 = hassett.canonical_K_hassett(A)
    ok = (hassett.hassett_eq(A, k1, hassett.push_K_from_hassett_formula(A))
          and hassett.hassett_eq(A, k1, hassett.pushforward(A, picard.canonical_K(n)))
          and hassett.hassett_eq(A, k1, hassett.canonical_K_hassett_kappa_form(A)))
    checks.append(Check("canonical-class-routes", ok, {"weights": _w(A)}))
    return checks


def verify_restrictions(A: WeightDatum) -> list[Check]:
    labels = hassett.nodal_labels(A)
    bad = [list(I) for I in labels if not hassett.check_self_restriction_sign(A, I)]
    flipped = [list(I) for I in labels if hassett.check_self_restriction_sign(A, I, -hassett.SELF_RESTRICTION_SIGN)]
    checks = [Check("self-restriction-sign", not bad, {
        "weights": _w(A), "labels": len(labels), "opposite_sign_passes": len(flipped),
    }, bad[:5])]
    bad = []
    for I in labels:
        rep = hassett.verify_boundary_splitting(A, I)
        if not rep.passed:
            bad.append(rep.instance)
    checks.append(Check("boundary-splitting", not bad, {"weights": _w(A), "labels": len(labels)}, bad[:5]))
    return checks


def verify_collapses(A: WeightDatum) -> list[Check]:
    checks = []
    Js = hassett.maximal_collapses(A)
    bad = []
    for J in Js:
        rep = hassett.verify_collapse_identity(A, J)
        if not rep.passed:
            bad.append({**rep.instance, "lhs": rep.lhs, "rhs": rep.rhs})
    checks.append(Check("collapse-identity", not bad, {"weights": _w(A), "collapses": len(Js)}, bad[:5]))
    return checks


def _generators(A: WeightDatum) -> list[hassett.HassettClass]:
    gens = [hassett.HassettClass.psi(A, i) for i in range(1, A.n + 1)]
    cen = hassett.census(A)
    gens += [hassett.HassettClass.boundary(A, from_mask(m)) for m in cen.nodal + cen.sectional]
    return gens


# ---------------------------------------------------------------------------
# random weight data


def random_weights(n: int, rng: random.Random, max_den: int = 12) -> WeightDatum:
    """Weights with denominators <= ``max_den``; about half are small so C is rarely empty."""
    while True:
        ws = []
        for _ in range(n):
            d = rng.randint(1, max_den)
            if rng.random() < 0.5:
                ws.append(Fraction(rng.randint(1, d), d))
            else:
                ws.append(Fraction(1, d))
        if sum(ws) > 2:
            return WeightDatum(ws)


def weight_samples(n: int, count: int, seed: int = DEFAULT_SEED) -> list[WeightDatum]:
    rng = random.Random(f"{seed}:{n}")
    return [random_weights(n, rng) for _ in range(count)]


def verify_fnef_suite(A: WeightDatum) -> Check:
    an = lc.analyze(A, check_log_canonical=False)
    predicted = {str(F) for F in an.predicted_zero}
    observed = {str(F) for F in an.fnef.zero_set}
    return Check("pullpush-fnef", an.fnef.is_fnef, {
        "weights": _w(A),
        "min": _fr(an.fnef.min_value),
        "zero_set_size": len(observed),
        "predicted_size": len(predicted),
        "zero_set_agrees": predicted == observed,
        "only_observed": sorted(observed - predicted)[:5],
        "only_predicted": sorted(predicted - observed)[:5],
    })


def verify_equality_routes(n: int, pairs: int, seed: int = DEFAULT_SEED) -> Check:
    """Canonical-form equality against pairing-vector equality on random pairs."""
    rng = random.Random(f"eq:{seed}:{n}")
    ctx = picard.context(n)
    rows = ctx.relations.rows
    failures = []
    equal_count = 0
    for t in range(pairs):
        X = MznClass(n, tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(ctx.dim)))
        if t % 2 == 0:
            Y = X
            for row in rows:
                Y = Y + Fraction(rng.randint(-2, 2)) * MznClass(n, row)
        else:
            Y = MznClass(n, tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for _ in range(ctx.dim)))
        a = picard.eq(X, Y)
        b = picard.pairing_vector(X) == picard.pairing_vector(Y)
        equal_count += a
        if a != b:
            failures.append({"pair": t, "canonical": a, "pairing": b})
    return Check("equality-two-routes", not failures, {"n": n, "pairs": pairs, "equal": equal_count}, failures[:5])


def instance_checks(A: WeightDatum, restrictions: bool = True) -> list[Check]:
    out = verify_pipeline(A, restrictions=restrictions)
    out.append(verify_surface_identity(A))
    if A.n <= 7:
        out.append(verify_fnef_suite(A))
    return out


def _instance_job(args) -> list[Check]:
    weights, restrictions = args
    return instance_checks(WeightDatum(weights), restrictions)


def run_suite(ns: Iterable[int], samples: int, seed: int = DEFAULT_SEED,
              restrictions_max_n: int = 7, jobs: int = 1) -> dict:
    """Randomized identity suite; returns a JSON-ready summary.

    ``jobs > 1`` farms instances out to worker processes; result order, and so
    the report, does not depend on it.
    """
    ns = list(ns)
    tasks = [(A.weights, n <= restrictions_max_n) for n in ns for A in weight_samples(n, samples, seed)]
    if jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_instance_job, tasks))
    else:
        batches = [_instance_job(t) for t in tasks]
    results = [c for b in batches for c in b]
    summary: dict[str, dict] = {}
    failures = []
    for chk in results:
        s = summary.setdefault(chk.name, {"run": 0, "passed": 0})
        s["run"] += 1
        s["passed"] += chk.passed
        if not chk.passed and len(failures) < 20:
            failures.append({"check": chk.name, "detail": chk.detail, "failures": chk.failures})
    disagreements = sum(1 for c in results if c.name == "pullpush-fnef" and not c.detail["zero_set_agrees"])
    return {
        "seed": seed,
        "samples_per_n": samples,
        "n": ns,
        "checks": summary,
        "zero_set_disagreements": disagreements,
        "all_passed": all(c.passed for c in results),
        "failures": failures,
    }
