"""Log-canonicality by exact LP, chamber data, and the full analysis of ``K + sum a_i psi_i``."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import hassett, picard
from .combinat import (
    FCurve,
    SubsetIndex,
    WeightDatum,
    _fcurves,
    as_fraction,
    coincidence_masks,
    from_mask,
    light_mask,
    boundary_masks,
)
from .lp import LPProblem, LPResult, lp_max
from .picard import ZERO, MznClass

CONJECTURE_CAVEAT = (
    "F-curve pairings decide nefness only under the F-conjecture, known for n <= 7; "
    "verdicts here are F-nef / F-positive"
)


# ---------------------------------------------------------------------------
# log canonical divisors


def log_canonical_problem(X: MznClass) -> LPProblem:
    """``X = r K + sum e_I D_I`` in canonical coordinates, ``0 <= e_I <= r``, maximize ``r``.

    Variable 0 is ``r``; variable ``k + 1`` is ``e_I`` for the ``k``-th boundary label.
    """
    n = X.n
    ctx = picard.context(n)
    Xc = picard.canonical_form(X).coeffs
    Kc = picard.canonical_form(picard.canonical_K(n)).coeffs
    # column of e_k in canonical coordinates
    cols: dict[int, dict[int, Fraction]] = {k: {k: Fraction(1)} for k in ctx.free}
    for p, row in zip(ctx.relations.pivots, ctx.relations.rows):
        cols[p] = {b: -row[b] for b in ctx.free if row[b]}
    eq_rows: dict[int, dict[int, Fraction]] = {b: {} for b in ctx.free}
    for b in ctx.free:
        if Kc[b]:
            eq_rows[b][0] = Kc[b]
    for k, col in cols.items():
        for b, c in col.items():
            eq_rows[b][k + 1] = c
    names = ("r",) + tuple("e" + "".join(map(str, from_mask(m))) for m in ctx.masks)
    ub = tuple(({k + 1: Fraction(1), 0: Fraction(-1)}, ZERO) for k in range(ctx.dim))
    eqs = tuple((eq_rows[b], Xc[b]) for b in ctx.free)
    return LPProblem(names, {0: Fraction(1)}, ub, eqs)


@dataclass(frozen=True)
class LogCanonicalVerdict:
    is_log_canonical: bool
    r: Fraction | None = None
    coefficients: tuple[Fraction, ...] = ()
    lp_status: str = ""
    lp_value: Fraction | None = None
    pivots: int = 0
    witness_checked: bool = False


def is_log_canonical(X: MznClass) -> LogCanonicalVerdict:
    """Decide whether ``X == r (K + sum c_I D_I)`` for some ``r > 0`` and ``0 <= c_I <= 1``."""
    problem = log_canonical_problem(X)
    res: LPResult = lp_max(problem)
    names = problem.names
    if res.status == "infeasible":
        return LogCanonicalVerdict(False, lp_status=res.status, pivots=res.pivots)
    if res.status == "bounded":
        point = res.assignment
        if res.value <= 0:
            return LogCanonicalVerdict(False, lp_status=res.status, lp_value=res.value, pivots=res.pivots)
    else:
        point = {k: res.assignment[k] + res.ray[k] for k in names}
    r = point["r"]
    coeffs = tuple(point[name] / r for name in names[1:])
    n = X.n
    rebuilt = r * (picard.canonical_K(n) + MznClass(n, coeffs))
    ok = picard.eq(rebuilt, X) and all(0 <= c <= 1 for c in coeffs)
    return LogCanonicalVerdict(True, r, coeffs, res.status, res.value, res.pivots, ok)


# ---------------------------------------------------------------------------
# chambers


def contracted_fcurves(A: WeightDatum) -> list[FCurve]:
    """F-curves whose spine destabilizes: ``sum_i min(1, w_{N_i}) <= 2``."""
    out = []
    for F in _fcurves(A.n):
        s = sum((min(Fraction(1), A.weight(b)) for b in F.masks), ZERO)
        if s <= 2:
            out.append(F)
    return out


def chamber_walls(A: WeightDatum) -> list[SubsetIndex]:
    walls = set()
    for m in boundary_masks(A.n):
        light = light_mask(m, A)
        if A.weight(light) == 1:
            walls.add(light)
    return sorted((SubsetIndex.from_mask(m, A.n) for m in walls), key=lambda s: (len(s.members), s.members))


def alpha_to_beta(alpha) -> Fraction:
    a = as_fraction(alpha)
    return 2 * a / (1 + a)


@dataclass(frozen=True)
class SimpsonChamber:
    n: int
    beta: Fraction
    kind: str  # "epsilon" | "git" | "above-listed-chambers"
    k: int | None = None
    epsilon_interval: tuple[Fraction, Fraction] | None = None
    beta_interval: tuple[Fraction, Fraction] | None = None

    @property
    def label(self) -> str:
        if self.kind == "epsilon":
            lo, hi = self.epsilon_interval
            return f"M_0,n.eps_{self.k}, eps_{self.k} in ({lo}, {hi}]"
        if self.kind == "git":
            return "GIT quotient (P^1)^n//SL(2), symmetric linearization"
        return "above-listed-chambers"


def simpson_chamber(n: int, value, kind: str = "beta") -> SimpsonChamber:
    """Log canonical model of ``K + beta D`` in the symmetric case.

    ``kind="alpha"`` converts a symmetric weight to ``beta = 2 alpha / (1 + alpha)``.
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    v = as_fraction(value)
    if kind == "alpha":
        if not 0 < v <= 1:
            raise ValueError(f"alpha = {v} not in (0, 1]")
        beta = alpha_to_beta(v)
    elif kind == "beta":
        beta = v
    else:
        raise ValueError(f"unknown kind {kind!r}")
    if not Fraction(2, n - 1) < beta <= 1:
        raise ValueError(f"beta = {beta} not in (2/{n - 1}, 1]")
    m = n // 2
    for k in range(1, m - 1):
        lo, hi = Fraction(2, m - k + 2), Fraction(2, m - k + 1)
        if lo < beta <= hi:
            return SimpsonChamber(n, beta, "epsilon", k,
                                  (Fraction(1, m + 1 - k), Fraction(1, m - k)), (lo, hi))
    lo, hi = Fraction(2, n - 1), Fraction(2, m + 1)
    if lo < beta <= hi:
        return SimpsonChamber(n, beta, "git", None, None, (lo, hi))
    return SimpsonChamber(n, beta, "above-listed-chambers")


@dataclass(frozen=True)
class ChamberReport:
    A: WeightDatum
    coincidence: tuple[SubsetIndex, ...]
    census: dict[str, int]
    walls: tuple[SubsetIndex, ...]
    symmetric: SimpsonChamber | None = None


def chamber_report(A: WeightDatum) -> ChamberReport:
    cen = hassett.census(A)
    counts = {
        "nodal": len(cen.nodal), "sectional": len(cen.sectional), "contracted": len(cen.contracted),
    }
    sym = None
    if len(set(A.weights)) == 1 and A.n >= 4:
        try:
            sym = simpson_chamber(A.n, A.weights[0], "alpha")
        except ValueError:
            sym = None
    C = tuple(SubsetIndex.from_mask(m, A.n) for m in coincidence_masks(A))
    return ChamberReport(A, C, counts, tuple(chamber_walls(A)), sym)


# ---------------------------------------------------------------------------
# full analysis


@dataclass
class Analysis:
    A: WeightDatum
    chamber: ChamberReport
    pushed: hassett.HassettClass
    pullpush: MznClass
    difference: MznClass
    difference_nonnegative: bool
    difference_on_contracted: bool
    fnef: picard.FNefVerdict
    predicted_zero: tuple[FCurve, ...]
    zero_set_agrees: bool
    log_canonical: LogCanonicalVerdict | None = None
    caveat: str | None = None
    extra: dict = field(default_factory=dict)


def analyze(A: WeightDatum, check_log_canonical: bool = True) -> Analysis:
    n = A.n
    if n < 4:
        raise ValueError("analysis needs n >= 4")
    chamber = chamber_report(A)
    pushed = hassett.pushed_delta(A)
    pullpush = hassett.pullpush_delta(A)
    diff = hassett.difference_delta(A)
    contracted = set(hassett.census(A).contracted)
    ctx = picard.context(n)
    support_ok = all(
        (not c) or light_mask(m, A) in contracted for m, c in zip(ctx.masks, diff.coeffs)
    )
    verdict = picard.fnef(pullpush)
    predicted = tuple(contracted_fcurves(A))
    lc_verdict = is_log_canonical(pullpush) if check_log_canonical else None
    return Analysis(
        A=A,
        chamber=chamber,
        pushed=pushed,
        pullpush=pullpush,
        difference=diff,
        difference_nonnegative=all(c >= 0 for c in diff.coeffs),
        difference_on_contracted=support_ok,
        fnef=verdict,
        predicted_zero=predicted,
        zero_set_agrees=set(predicted) == set(verdict.zero_set),
        log_canonical=lc_verdict,
        caveat=CONJECTURE_CAVEAT if n >= 8 else None,
    )
