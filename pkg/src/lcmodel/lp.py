"""Exact rational linear programming.

``maximize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0``

Equality rows are eliminated first by sparse Gauss-Jordan substitution
(pivoting on the variable that occurs in the fewest remaining equality rows),
which turns the eliminated variables' sign conditions into inequalities.  The
reduced problem is solved by a two-phase dictionary simplex with Bland's rule,
so the result is deterministic and the method terminates.  Pivoting runs on
``gmpy2.mpq`` when available; inputs and results are ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

ZERO = Fraction(0)

Row = Mapping[int, Fraction]


class LPError(ValueError):
    pass


@dataclass(frozen=True)
class LPProblem:
    """Sparse rows are ``{variable index: coefficient}`` paired with a right-hand side."""

    names: tuple[str, ...]
    objective: Row
    ub_rows: tuple[tuple[Row, Fraction], ...] = ()
    eq_rows: tuple[tuple[Row, Fraction], ...] = ()

    @property
    def nvars(self) -> int:
        return len(self.names)

    def validate(self) -> None:
        k = self.nvars
        for row in [self.objective] + [r for r, _ in self.ub_rows] + [r for r, _ in self.eq_rows]:
            for j in row:
                if not 0 <= j < k:
                    raise LPError(f"variable index {j} outside 0..{k - 1}")

    @classmethod
    def dense(cls, names, objective, ub=(), eq=()) -> "LPProblem":
        """Build from dense coefficient lists, e.g. ``ub=[([1, -1], 0)]``."""
        def sparse(v):
            if len(v) != len(names):
                raise LPError(f"row of length {len(v)} for {len(names)} variables")
            return {j: Fraction(c) for j, c in enumerate(v) if c}
        return cls(
            tuple(names),
            sparse(objective),
            tuple((sparse(a), Fraction(b)) for a, b in ub),
            tuple((sparse(a), Fraction(b)) for a, b in eq),
        )


@dataclass(frozen=True)
class LPResult:
    status: str  # "infeasible" | "bounded" | "unbounded"
    value: Fraction | None = None
    assignment: dict[str, Fraction] = field(default_factory=dict)
    ray: dict[str, Fraction] = field(default_factory=dict)
    pivots: int = 0


# ---------------------------------------------------------------------------
# presolve


def _eliminate(problem: LPProblem):
    """Return ``(subst, defs)`` or ``None`` if the equalities are inconsistent.

    ``defs[k] = (row, rhs)`` means ``x_k = rhs - row . x`` with ``row`` over
    surviving variables only.
    """
    rows = [(dict(a), b) for a, b in problem.eq_rows]
    defs: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    occurs: dict[int, set[int]] = {}
    for r, (a, _) in enumerate(rows):
        for j in a:
            occurs.setdefault(j, set()).add(r)
    alive = set(range(len(rows)))
    while alive:
        r = min(alive, key=lambda r: (len(rows[r][0]), r))
        a, b = rows[r]
        alive.discard(r)
        for j in a:
            occurs[j].discard(r)
        if not a:
            if b:
                return None
            continue
        k = min(a, key=lambda j: (len(occurs[j]), j))
        piv = a[k]
        expr = {j: c / piv for j, c in a.items() if j != k}
        rhs = b / piv
        for r2 in sorted(occurs[k]):
            a2, b2 = rows[r2]
            f = a2.pop(k)
            for j, c in expr.items():
                x = a2.get(j, ZERO) - f * c
                if x:
                    if j not in a2:
                        occurs.setdefault(j, set()).add(r2)
                    a2[j] = x
                elif j in a2:
                    del a2[j]
                    occurs[j].discard(r2)
            rows[r2] = (a2, b2 - f * rhs)
        occurs[k] = set()
        for k2, (row2, rhs2) in defs.items():
            f = row2.pop(k, None)
            if f:
                for j, c in expr.items():
                    x = row2.get(j, ZERO) - f * c
                    if x:
                        row2[j] = x
                    else:
                        row2.pop(j, None)
                defs[k2] = (row2, rhs2 - f * rhs)
        defs[k] = (expr, rhs)
    return defs


def _substitute(row: Row, defs) -> tuple[dict[int, Fraction], Fraction]:
    """Rewrite ``row . x`` as ``out . x_free + const``."""
    out: dict[int, Fraction] = {}
    const = ZERO
    for j, c in row.items():
        if j in defs:
            expr, rhs = defs[j]
            const += c * rhs
            for t, e in expr.items():
                out[t] = out.get(t, ZERO) - c * e
        else:
            out[j] = out.get(j, ZERO) + c
    return {j: c for j, c in out.items() if c}, const


# ---------------------------------------------------------------------------
# dictionary simplex


class _Dictionary:
    """Rows ``x_B[r] + sum_j T[r][j] x_N[j] = b[r]`` and ``z = z0 + sum_j c[j] x_N[j]``."""

    def __init__(self, T, b, basis, nonbasis, c):
        self.T, self.b, self.basis, self.nonbasis, self.c = T, b, basis, nonbasis, c
        self.z0 = Q(0)
        self.pivots = 0

    def pivot(self, r: int, s: int) -> None:
        T, b = self.T, self.b
        row = T[r]
        piv = row[s]
        inv = 1 / piv
        new = [x * inv for x in row]
        new[s] = inv
        br = b[r] * inv
        T[r], b[r] = new, br
        nz = [j for j, x in enumerate(new) if x and j != s]
        for i in range(len(T)):
            if i == r:
                continue
            f = T[i][s]
            if not f:
                continue
            Ti = T[i]
            for j in nz:
                Ti[j] -= f * new[j]
            Ti[s] = -f * inv
            b[i] -= f * br
        cs = self.c[s]
        if cs:
            for j in nz:
                self.c[j] -= cs * new[j]
            self.c[s] = -cs * inv
            self.z0 += cs * br
        self.basis[r], self.nonbasis[s] = self.nonbasis[s], self.basis[r]
        self.pivots += 1

    def bland(self):
        """Run to optimality; return ``None`` or the entering column of an unbounded ray."""
        while True:
            cands = [(self.nonbasis[j], j) for j, cj in enumerate(self.c) if cj > 0]
            if not cands:
                return None
            _, s = min(cands)
            best = None
            for r, row in enumerate(self.T):
                a = row[s]
                if a > 0:
                    key = (self.b[r] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return s
            self.pivot(best[1], s)


def _frac(xs) -> list[Fraction]:
    return [Fraction(int(x.numerator), int(x.denominator)) for x in xs]


def _simplex(nvars: int, A: list[dict[int, Fraction]], bvec: list[Fraction], c: dict[int, Fraction]):
    """``max c.x, A x <= b, x >= 0`` over variables ``0..nvars-1``.

    Returns ``(status, value, x, ray, pivots)``.
    """
    m = len(A)
    aux = nvars  # phase-one variable, column index nvars
    zero = Q(0)
    T = [[Q(row.get(j, 0)) for j in range(nvars)] + [Q(-1)] for row in A]
    bvec = [Q(x) for x in bvec]
    c = {j: Q(v) for j, v in c.items()}
    # slack of row r has variable id nvars + 1 + r
    basis = [nvars + 1 + r for r in range(m)]
    nonbasis = list(range(nvars)) + [aux]
    D = _Dictionary(T, list(bvec), basis, nonbasis, [zero] * (nvars + 1))
    if m and min(bvec) < 0:
        D.c = [zero] * nvars + [Q(-1)]
        r = min(range(m), key=lambda r: (bvec[r], r))
        D.pivot(r, nvars)
        D.bland()
        if D.z0 < 0:
            return "infeasible", None, None, None, D.pivots
        if aux in D.basis:
            r = D.basis.index(aux)
            s = next((j for j, x in enumerate(D.T[r]) if x and D.nonbasis[j] != aux), None)
            if s is None:
                # the row reads x0 = 0; it carries no constraint
                del D.T[r], D.b[r], D.basis[r]
            else:
                D.pivot(r, s)
    if aux in D.nonbasis:
        s_aux = D.nonbasis.index(aux)
        for row in D.T:
            del row[s_aux]
        del D.nonbasis[s_aux]
    # phase-two objective in terms of the current nonbasis
    obj = [zero] * len(D.nonbasis)
    z0 = zero
    pos = {v: j for j, v in enumerate(D.nonbasis)}
    for v, cv in c.items():
        if v in pos:
            obj[pos[v]] += cv
        else:
            r = D.basis.index(v)
            z0 += cv * D.b[r]
            for j, t in enumerate(D.T[r]):
                if t:
                    obj[j] -= cv * t
    D.c, D.z0 = obj, z0
    s = D.bland()

    def primal():
        x = [zero] * nvars
        for r, v in enumerate(D.basis):
            if v < nvars:
                x[v] = D.b[r]
        return x

    if s is not None:
        ray = [zero] * nvars
        v = D.nonbasis[s]
        if v < nvars:
            ray[v] = Q(1)
        for r, bv in enumerate(D.basis):
            if bv < nvars:
                ray[bv] = -D.T[r][s]
        return "unbounded", None, _frac(primal()), _frac(ray), D.pivots
    return "bounded", _frac([D.z0])[0], _frac(primal()), None, D.pivots


def lp_max(problem: LPProblem) -> LPResult:
    problem.validate()
    defs = _eliminate(problem)
    if defs is None:
        return LPResult("infeasible")
    free = [j for j in range(problem.nvars) if j not in defs]
    local = {j: t for t, j in enumerate(free)}

    A: list[dict[int, Fraction]] = []
    bvec: list[Fraction] = []

    def add(row: dict[int, Fraction], rhs: Fraction) -> None:
        if not row:
            # constant row, kept so infeasibility shows up in phase one
            A.append({})
            bvec.append(rhs)
            return
        A.append({local[j]: c for j, c in row.items()})
        bvec.append(rhs)

    for row, rhs in problem.ub_rows:
        sub, const = _substitute(row, defs)
        add(sub, rhs - const)
    # x_k = rhs - expr.x >= 0  <=>  expr.x <= rhs
    for k in sorted(defs):
        expr, rhs = defs[k]
        add(dict(expr), rhs)
    if any(not row and rhs < 0 for row, rhs in zip(A, bvec)):
        return LPResult("infeasible")
    keep = [t for t, row in enumerate(A) if row or bvec[t] < 0]
    A = [A[t] for t in keep]
    bvec = [bvec[t] for t in keep]

    obj, const = _substitute(problem.objective, defs)
    c = {local[j]: v for j, v in obj.items()}
    status, value, x, ray, pivots = _simplex(len(free), A, bvec, c)
    if status == "infeasible":
        return LPResult("infeasible", pivots=pivots)

    def expand(xf: Sequence[Fraction], homogeneous: bool) -> dict[str, Fraction]:
        full = [ZERO] * problem.nvars
        for j, t in local.items():
            full[j] = xf[t]
        for k, (expr, rhs) in defs.items():
            full[k] = (ZERO if homogeneous else rhs) - sum((e * full[j] for j, e in expr.items()), ZERO)
        return {name: full[j] for j, name in enumerate(problem.names)}

    point = expand(x, False)
    if status == "unbounded":
        return LPResult("unbounded", None, point, expand(ray, True), pivots)
    return LPResult("bounded", value + const, point, {}, pivots)
