"""Exact arithmetic in N^1 of the moduli space of n-pointed stable rational curves.

Classes are dense vectors over the boundary generators ``D_I`` in the order of
:func:`~lcmodel.combinat.enumerate_boundary`.  Keel relations are kept in
reduced row echelon form with pivots taken from the *last* nonzero column, so
a canonical form is supported on the earliest labels (``D_{12}`` spans at
``n = 4``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .combinat import (
    MAX_N,
    CombinatError,
    FCurve,
    SubsetIndex,
    WeightDatum,
    _fcurves,
    as_fraction,
    boundary_masks,
    canonical_mask,
    full_mask,
    popcount,
    to_mask,
)

ZERO = Fraction(0)
ONE = Fraction(1)

#: the lambda class vanishes in genus zero
LAMBDA = ZERO


def picard_rank(n: int) -> int:
    """``2^(n-1) - C(n, 2) - 1``."""
    return 2 ** (n - 1) - comb(n, 2) - 1


@dataclass(frozen=True)
class RelationBasis:
    n: int
    pivots: tuple[int, ...]
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.rows)


class Context:
    """Per-n data shared by every class on the same space.  Built once, then read-only."""

    def __init__(self, n: int):
        if n < 3 or n > MAX_N:
            raise CombinatError(f"n = {n} outside 3..{MAX_N}")
        self.n = n
        self.masks: tuple[int, ...] = boundary_masks(n)
        self.index: dict[int, int] = {m: k for k, m in enumerate(self.masks)}
        self.dim = len(self.masks)
        self.relations = _row_reduce(n, self.masks, self.index)
        self.free = tuple(k for k in range(self.dim) if k not in set(self.relations.pivots))

    def position(self, mask: int) -> int:
        return self.index[canonical_mask(mask, self.n)]

    def fcurves(self) -> tuple[FCurve, ...]:
        return _fcurves(self.n)


@lru_cache(maxsize=None)
def context(n: int) -> Context:
    return Context(n)


def _keel_vectors(n: int, index: Mapping[int, int]) -> Iterable[dict[int, int]]:
    """Sparse integer relation vectors from every 4-element subset."""
    masks = list(index)

    def side(a: int, b: int, c: int, d: int) -> set[int]:
        # labels with a, b on one side and c, d on the other
        ab = (1 << a) | (1 << b)
        cd = (1 << c) | (1 << d)
        out = set()
        for m in masks:
            inside = m if m & ab == ab else (full_mask(n) & ~m)
            if inside & ab == ab and not inside & cd:
                out.add(index[m])
        return out

    for i, j, k, l in itertools.combinations(range(n), 4):
        s1, s2, s3 = side(i, j, k, l), side(i, k, j, l), side(i, l, j, k)
        for other in (s2, s3):
            vec: dict[int, int] = {}
            for t in s1:
                vec[t] = vec.get(t, 0) + 1
            for t in other:
                vec[t] = vec.get(t, 0) - 1
            yield {t: c for t, c in vec.items() if c}


def _row_reduce(n: int, masks, index) -> RelationBasis:
    rows: dict[int, dict[int, Fraction]] = {}
    for raw in _keel_vectors(n, index):
        v = {t: Fraction(c) for t, c in raw.items()}
        for p, row in rows.items():
            c = v.get(p)
            if c:
                for t, r in row.items():
                    x = v.get(t, ZERO) - c * r
                    if x:
                        v[t] = x
                    else:
                        v.pop(t, None)
        if not v:
            continue
        p = max(v)
        lead = v[p]
        v = {t: x / lead for t, x in v.items()}
        for q, row in rows.items():
            c = row.get(p)
            if c:
                for t, r in v.items():
                    x = row.get(t, ZERO) - c * r
                    if x:
                        row[t] = x
                    else:
                        row.pop(t, None)
        rows[p] = v
    dim = len(masks)
    pivots = tuple(sorted(rows))
    dense = tuple(tuple(rows[p].get(t, ZERO) for t in range(dim)) for p in pivots)
    return RelationBasis(n, pivots, dense)


def keel_relations(n: int) -> RelationBasis:
    if not 4 <= n <= MAX_N:
        raise CombinatError(f"n = {n} outside 4..{MAX_N}")
    return context(n).relations


# ---------------------------------------------------------------------------
# classes


@dataclass(frozen=True)
class MznClass:
    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != context(self.n).dim:
            raise ValueError(f"vector length {len(self.coeffs)} != {context(self.n).dim}")

    @classmethod
    def zero(cls, n: int) -> "MznClass":
        return cls(n, (ZERO,) * context(n).dim)

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]]) -> "MznClass":
        """Build from ``{mask: coefficient}``; masks may be either side of a label."""
        ctx = context(n)
        v = [ZERO] * ctx.dim
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mask, c in items:
            v[ctx.position(mask)] += as_fraction(c)
        return cls(n, tuple(v))

    @classmethod
    def boundary(cls, members: Iterable[int], n: int, coef=ONE) -> "MznClass":
        members = set(members)
        if not 2 <= len(members) <= n - 2 or not members <= set(range(1, n + 1)):
            raise CombinatError(f"invalid boundary label {sorted(members)} for n = {n}")
        return cls.from_terms(n, {to_mask(members): coef})

    def _check(self, other: "MznClass") -> None:
        if not isinstance(other, MznClass):
            raise TypeError(f"expected MznClass, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"classes on n = {self.n} and n = {other.n}")

    def __add__(self, other: "MznClass") -> "MznClass":
        self._check(other)
        return MznClass(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "MznClass") -> "MznClass":
        self._check(other)
        return MznClass(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "MznClass":
        return MznClass(self.n, tuple(-a for a in self.coeffs))

    def __mul__(self, scalar) -> "MznClass":
        s = as_fraction(scalar)
        return MznClass(self.n, tuple(s * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero_vector(self) -> bool:
        return not any(self.coeffs)

    def terms(self) -> list[tuple[SubsetIndex, Fraction]]:
        ctx = context(self.n)
        return [
            (SubsetIndex.from_mask(ctx.masks[k], self.n), c)
            for k, c in enumerate(self.coeffs) if c
        ]

    def __str__(self) -> str:
        parts = [f"{c}*D{I}" for I, c in self.terms()]
        return " + ".join(parts) if parts else "0"


def class_sum(classes: Iterable[MznClass], n: int) -> MznClass:
    total = MznClass.zero(n)
    for c in classes:
        total = total + c
    return total


def canonical_form(X: MznClass) -> MznClass:
    ctx = context(X.n)
    v = list(X.coeffs)
    for p, row in zip(ctx.relations.pivots, ctx.relations.rows):
        c = v[p]
        if c:
            for t, r in enumerate(row):
                if r:
                    v[t] -= c * r
    return MznClass(X.n, tuple(v))


def eq(X: MznClass, Y: MznClass) -> bool:
    X._check(Y)
    return canonical_form(X - Y).is_zero_vector()


# ---------------------------------------------------------------------------
# standard classes


def total_boundary(n: int) -> MznClass:
    return MznClass(n, (ONE,) * context(n).dim)


def boundary_by_size(n: int, j: int) -> MznClass:
    """``D_j``: sum of labels whose smaller side has ``j`` elements."""
    ctx = context(n)
    return MznClass(n, tuple(
        ONE if min(popcount(m), n - popcount(m)) == j else ZERO for m in ctx.masks
    ))


def psi(i: int, n: int, aux: tuple[int, int] | None = None) -> MznClass:
    """``psi_i = sum of D_I over i in I, j, k not in I``.

    ``aux`` picks ``(j, k)``; by default the two smallest indices other than ``i``.
    """
    if not 1 <= i <= n:
        raise CombinatError(f"psi index {i} out of range 1..{n}")
    if aux is None:
        aux = tuple(x for x in range(1, n + 1) if x != i)[:2]  # type: ignore[assignment]
    j, k = aux
    if len({i, j, k}) != 3 or not all(1 <= x <= n for x in (j, k)):
        raise CombinatError(f"invalid auxiliary indices {aux} for psi_{i}")
    bi, bjk = 1 << (i - 1), (1 << (j - 1)) | (1 << (k - 1))
    ctx = context(n)
    full = full_mask(n)
    out = []
    for m in ctx.masks:
        hit = any(side & bi and not side & bjk for side in (m, full & ~m))
        out.append(ONE if hit else ZERO)
    return MznClass(n, tuple(out))


def psi_total(n: int) -> MznClass:
    return class_sum((psi(i, n) for i in range(1, n + 1)), n)


def canonical_K(n: int) -> MznClass:
    return psi_total(n) - 2 * total_boundary(n)


def kappa(n: int) -> MznClass:
    return -total_boundary(n)


def delta(A: WeightDatum) -> MznClass:
    """``K + sum a_i psi_i``."""
    n = A.n
    out = canonical_K(n)
    for i, a in enumerate(A.weights, 1):
        out = out + a * psi(i, n)
    return out


# ---------------------------------------------------------------------------
# F-curve pairing


@lru_cache(maxsize=None)
def _fcurve_pairing(F: FCurve) -> tuple[tuple[int, int], ...]:
    """Nonzero generator pairings of ``F`` as ``(position, +-1)``."""
    ctx = context(F.n)
    b = F.masks
    out: dict[int, int] = {}
    for blk in b:
        if popcount(blk) >= 2:
            out[ctx.position(blk)] = -1
    for other in b[1:]:
        out[ctx.position(b[0] | other)] = 1
    return tuple(sorted(out.items()))


def pair_fcurve(X: MznClass, F: FCurve) -> Fraction:
    if F.n != X.n:
        raise ValueError(f"F-curve on n = {F.n} paired with class on n = {X.n}")
    v = X.coeffs
    return sum((v[k] * s for k, s in _fcurve_pairing(F)), ZERO)


def pairing_vector(X: MznClass) -> tuple[Fraction, ...]:
    return tuple(pair_fcurve(X, F) for F in _fcurves(X.n))


@dataclass(frozen=True)
class FNefVerdict:
    is_fnef: bool
    min_value: Fraction
    witness: FCurve | None
    zero_set: tuple[FCurve, ...] = field(default_factory=tuple)


def fnef(X: MznClass) -> FNefVerdict:
    """Pair ``X`` with every F-curve.  This decides F-nefness, not nefness."""
    if X.n < 4:
        raise CombinatError("F-curves need n >= 4")
    best = None
    witness = None
    zeros = []
    for F in _fcurves(X.n):
        v = pair_fcurve(X, F)
        if best is None or v < best:
            best, witness = v, F
        if v == 0:
            zeros.append(F)
    assert best is not None
    return FNefVerdict(best >= 0, best, witness, tuple(zeros))


def relation_class(row: Sequence[Fraction], n: int) -> MznClass:
    return MznClass(n, tuple(row))
