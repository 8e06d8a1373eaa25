"""Divisor classes on Hassett's weighted spaces and the reduction-morphism calculus.

A :class:`HassettClass` stores coefficients of ``psi_i``, of nodal boundary
divisors (keyed by the bitmask of their lighter side) and of sectional
divisors ``D_{ij}`` (keyed by the two-element bitmask).  ``kappa`` and the
canonical class are never stored; they are expanded through
``kappa = -D_nod``.  Equality is decided upstairs: pull-back along the
birational reduction morphism is injective on N^1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from . import picard
from .combinat import (
    BoundarySplit,
    Collapse,
    CombinatError,
    WeightDatum,
    as_fraction,
    boundary_masks,
    coincidence_masks,
    from_mask,
    full_mask,
    induced_weights_boundary,
    induced_weights_collapse,
    light_mask,
    maximal_coincident_masks,
    popcount,
    to_mask,
)
from .picard import ONE, ZERO, MznClass

SELF_RESTRICTION_SIGN = -1


class HassettError(ValueError):
    pass


class BoundaryKind(str, enum.Enum):
    NODAL = "nodal"
    SECTIONAL = "sectional"
    CONTRACTED = "contracted"


def _kind(A: WeightDatum, light: int) -> BoundaryKind:
    if A.weight(light) > 1:
        return BoundaryKind.NODAL
    return BoundaryKind.SECTIONAL if popcount(light) == 2 else BoundaryKind.CONTRACTED


def classify_boundary(A: WeightDatum, members: Iterable[int]) -> BoundaryKind:
    mask = to_mask(members)
    if not 2 <= popcount(mask) <= A.n - 2 or mask >> A.n:
        raise CombinatError(f"invalid label {from_mask(mask)} for n = {A.n}")
    return _kind(A, light_mask(mask, A))


@dataclass(frozen=True)
class _Census:
    nodal: tuple[int, ...]
    sectional: tuple[int, ...]
    contracted: tuple[int, ...]


@lru_cache(maxsize=4096)
def census(A: WeightDatum) -> _Census:
    """Light-side masks of every label, split by kind (increasing mask order)."""
    groups: dict[BoundaryKind, list[int]] = {k: [] for k in BoundaryKind}
    for m in boundary_masks(A.n):
        light = light_mask(m, A)
        groups[_kind(A, light)].append(light)
    return _Census(*(tuple(sorted(groups[k])) for k in BoundaryKind))


def _clean(d: Mapping[int, Fraction]) -> dict[int, Fraction]:
    return {k: v for k, v in sorted(d.items()) if v}


@dataclass(frozen=True)
class HassettClass:
    A: WeightDatum
    psi_coeffs: tuple[Fraction, ...]
    nodal_coeffs: dict[int, Fraction] = field(default_factory=dict)
    sec_coeffs: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.psi_coeffs) != self.A.n:
            raise HassettError("psi coefficient count differs from n")
        object.__setattr__(self, "nodal_coeffs", _clean(self.nodal_coeffs))
        object.__setattr__(self, "sec_coeffs", _clean(self.sec_coeffs))
        cen = census(self.A)
        bad = set(self.nodal_coeffs) - set(cen.nodal)
        if bad:
            raise HassettError(f"not nodal labels for {self.A}: {[from_mask(m) for m in bad]}")
        bad = set(self.sec_coeffs) - set(cen.sectional)
        if bad:
            raise HassettError(f"not sectional labels for {self.A}: {[from_mask(m) for m in bad]}")

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, A: WeightDatum) -> "HassettClass":
        return cls(A, (ZERO,) * A.n)

    @classmethod
    def psi(cls, A: WeightDatum, i: int, coef=ONE) -> "HassettClass":
        if not 1 <= i <= A.n:
            raise HassettError(f"psi index {i} out of range 1..{A.n}")
        v = [ZERO] * A.n
        v[i - 1] = as_fraction(coef)
        return cls(A, tuple(v))

    @classmethod
    def boundary(cls, A: WeightDatum, members: Iterable[int], coef=ONE) -> "HassettClass":
        """``D_I`` for a nodal or sectional label; contracted labels have no divisor."""
        mask = to_mask(members)
        kind = classify_boundary(A, from_mask(mask))
        light = light_mask(mask, A)
        c = as_fraction(coef)
        if kind is BoundaryKind.NODAL:
            return cls(A, (ZERO,) * A.n, {light: c})
        if kind is BoundaryKind.SECTIONAL:
            return cls(A, (ZERO,) * A.n, {}, {light: c})
        raise HassettError(f"D{set(from_mask(light))} is contracted on M_0,{A}")

    @classmethod
    def coincident(cls, A: WeightDatum, i: int, j: int, coef=ONE) -> "HassettClass":
        """Push-forward of ``sigma_i . sigma_j``: ``D_{ij}`` if ``a_i + a_j <= 1``, else 0."""
        if i == j:
            raise HassettError("coincidence of a section with itself")
        if A.n < 4 or A[i] + A[j] > 1:
            return cls.zero(A)
        return cls(A, (ZERO,) * A.n, {}, {to_mask((i, j)): as_fraction(coef)})

    # arithmetic ---------------------------------------------------------

    def _check(self, other: "HassettClass") -> None:
        if not isinstance(other, HassettClass):
            raise TypeError(f"expected HassettClass, got {type(other).__name__}")
        if other.A != self.A:
            raise HassettError(f"classes on M_0,{self.A} and M_0,{other.A}")

    def __add__(self, other: "HassettClass") -> "HassettClass":
        self._check(other)
        nod = dict(self.nodal_coeffs)
        for k, v in other.nodal_coeffs.items():
            nod[k] = nod.get(k, ZERO) + v
        sec = dict(self.sec_coeffs)
        for k, v in other.sec_coeffs.items():
            sec[k] = sec.get(k, ZERO) + v
        psi = tuple(a + b for a, b in zip(self.psi_coeffs, other.psi_coeffs))
        return HassettClass(self.A, psi, nod, sec)

    def __mul__(self, scalar) -> "HassettClass":
        s = as_fraction(scalar)
        return HassettClass(
            self.A,
            tuple(s * a for a in self.psi_coeffs),
            {k: s * v for k, v in self.nodal_coeffs.items()},
            {k: s * v for k, v in self.sec_coeffs.items()},
        )

    __rmul__ = __mul__

    def __neg__(self) -> "HassettClass":
        return self * -1

    def __sub__(self, other: "HassettClass") -> "HassettClass":
        return self + (-other)

    def is_zero(self) -> bool:
        return not (any(self.psi_coeffs) or self.nodal_coeffs or self.sec_coeffs)

    def __str__(self) -> str:
        parts = [f"{c}*psi{i}" for i, c in enumerate(self.psi_coeffs, 1) if c]
        parts += [f"{c}*D{set(from_mask(m))}" for m, c in self.nodal_coeffs.items()]
        parts += [f"{c}*Dsec{set(from_mask(m))}" for m, c in self.sec_coeffs.items()]
        return " + ".join(parts) if parts else "0"


def hsum(A: WeightDatum, classes: Iterable[HassettClass]) -> HassettClass:
    out = HassettClass.zero(A)
    for c in classes:
        out = out + c
    return out


def d_nod(A: WeightDatum, coef=ONE) -> HassettClass:
    c = as_fraction(coef)
    return HassettClass(A, (ZERO,) * A.n, {m: c for m in census(A).nodal})


def d_sec(A: WeightDatum) -> HassettClass:
    return HassettClass(A, (ZERO,) * A.n, {}, {m: ONE for m in census(A).sectional})


def kappa_hassett(A: WeightDatum) -> HassettClass:
    """``kappa = -D_nod`` (weighted Mumford relation)."""
    return d_nod(A, -1)


def psi_total_hassett(A: WeightDatum) -> HassettClass:
    return HassettClass(A, (ONE,) * A.n)


def canonical_K_hassett(A: WeightDatum) -> HassettClass:
    """``-2 D_nod + sum psi_i``."""
    return d_nod(A, -2) + psi_total_hassett(A)


def canonical_K_hassett_kappa_form(A: WeightDatum) -> HassettClass:
    """``2 kappa + sum psi_i``."""
    return 2 * kappa_hassett(A) + psi_total_hassett(A)


# ---------------------------------------------------------------------------
# push-forward and pull-back along the reduction morphism


def pushforward(A: WeightDatum, X: MznClass) -> HassettClass:
    """Generator-wise push-forward of a boundary-basis class."""
    if X.n != A.n:
        raise HassettError(f"class on n = {X.n} pushed to weights of length {A.n}")
    ctx = picard.context(A.n)
    nod: dict[int, Fraction] = {}
    sec: dict[int, Fraction] = {}
    for m, c in zip(ctx.masks, X.coeffs):
        if not c:
            continue
        light = light_mask(m, A)
        kind = _kind(A, light)
        if kind is BoundaryKind.NODAL:
            nod[light] = nod.get(light, ZERO) + c
        elif kind is BoundaryKind.SECTIONAL:
            sec[light] = sec.get(light, ZERO) + c
    return HassettClass(A, (ZERO,) * A.n, nod, sec)


def push_psi(A: WeightDatum, i: int) -> HassettClass:
    out = HassettClass.psi(A, i)
    for j in range(1, A.n + 1):
        if j != i and A[i] + A[j] <= 1:
            out = out + HassettClass.coincident(A, i, j)
    return out


def push_K_from_hassett_formula(A: WeightDatum) -> HassettClass:
    """Push ``13/12 kappa - 11/12 D + psi`` from the unweighted space.

    Upstairs ``kappa = -D``; the boundary part is pushed generator-wise and each
    ``psi_i`` through :func:`push_psi`.
    """
    n = A.n
    boundary_part = (Fraction(-13, 12) - Fraction(11, 12)) * picard.total_boundary(n)
    return pushforward(A, boundary_part) + hsum(A, (push_psi(A, i) for i in range(1, n + 1)))


def pullback(A: WeightDatum, Y: HassettClass) -> MznClass:
    """Pull-back to the unweighted space, in canonical form."""
    if Y.A != A:
        raise HassettError("class lives on a different weighted space")
    n = A.n
    C = coincidence_masks(A)
    terms: dict[int, Fraction] = {}

    def add(mask: int, c: Fraction) -> None:
        terms[mask] = terms.get(mask, ZERO) + c

    for m, c in Y.nodal_coeffs.items():
        add(m, c)
    for m, c in Y.sec_coeffs.items():
        add(m, c)
        for J in C:
            if J != m and J & m == m:
                add(J, c)
    out = MznClass.from_terms(n, terms)
    for i, c in enumerate(Y.psi_coeffs, 1):
        if not c:
            continue
        bit = 1 << (i - 1)
        corr = MznClass.from_terms(n, {J: ONE for J in C if J & bit})
        out = out + c * (picard.psi(i, n) - corr)
    return picard.canonical_form(out)


def hassett_eq(A: WeightDatum, Y1: HassettClass, Y2: HassettClass) -> bool:
    if Y1.A != A or Y2.A != A:
        raise HassettError("classes on different weighted spaces")
    return pullback(A, Y1 - Y2).is_zero_vector()


# ---------------------------------------------------------------------------
# the three-step computation for K + sum a_i psi_i


def pushed_delta(A: WeightDatum) -> HassettClass:
    """``-2 D_nod + sum (1 + a_i) psi_i + sum_{a_i + a_j <= 1} (a_i + a_j) D_{ij}``."""
    psi = tuple(1 + a for a in A.weights)
    sec = {m: A.weight(m) for m in census(A).sectional}
    return HassettClass(A, psi, {m: Fraction(-2) for m in census(A).nodal}, sec)


def pullpush_delta(A: WeightDatum) -> MznClass:
    """``-2 D + sum (1 + a_i) psi_i + sum_{I in C} (|I| - 2)(w_I - 1) D_I``, canonical."""
    n = A.n
    out = -2 * picard.total_boundary(n)
    for i, a in enumerate(A.weights, 1):
        out = out + (1 + a) * picard.psi(i, n)
    corr = {I: (popcount(I) - 2) * (A.weight(I) - 1) for I in coincidence_masks(A)}
    out = out + MznClass.from_terms(n, corr)
    return picard.canonical_form(out)


def difference_delta(A: WeightDatum) -> MznClass:
    """``sum_{I in C} (|I| - 2)(1 - w_I) D_I`` as a raw (unreduced) boundary vector."""
    return MznClass.from_terms(
        A.n, {I: (popcount(I) - 2) * (1 - A.weight(I)) for I in coincidence_masks(A)}
    )


# ---------------------------------------------------------------------------
# restriction to a nodal boundary divisor


def _submask(mask: int, members: tuple[int, ...]) -> int:
    """Re-index ``mask`` (contained in ``members``) into 1..len(members)."""
    out = 0
    for pos, i in enumerate(members):
        if mask >> (i - 1) & 1:
            out |= 1 << pos
    return out


def _child_boundary(B: WeightDatum, mask: int) -> HassettClass:
    if B.n < 4:
        return HassettClass.zero(B)
    return HassettClass.boundary(B, from_mask(mask))


def restrict_boundary(
    A: WeightDatum,
    members: Iterable[int],
    Y: HassettClass,
    sign: int = SELF_RESTRICTION_SIGN,
) -> tuple[HassettClass, HassettClass]:
    """Pull ``Y`` back to ``D_I = M_{0,A_I} x M_{0,A_I^c}``.

    Returns the two factor classes whose pull-backs along the projections sum
    to the restriction.  ``sign`` is the coefficient of ``psi_p`` and ``psi_q``
    in the restriction of ``D_I`` itself; the normal bundle gives ``-1``.
    """
    if Y.A != A:
        raise HassettError("class lives on a different weighted space")
    try:
        split = induced_weights_boundary(A, members)
    except CombinatError as exc:
        raise HassettError(str(exc)) from exc
    return _restrict(split, Y, sign)


def _restrict(split: BoundarySplit, Y: HassettClass, sign: int) -> tuple[HassettClass, HassettClass]:
    A = split.parent
    B1, B2 = split.first, split.second
    I = split.mask
    Ic = full_mask(A.n) & ~I
    m1, m2 = split.first_members, split.second_members

    def psi_on(B: WeightDatum, i: int, c: Fraction) -> HassettClass:
        return HassettClass.zero(B) if B.n < 4 else HassettClass.psi(B, i, c)

    y1, y2 = HassettClass.zero(B1), HassettClass.zero(B2)
    for i, c in enumerate(Y.psi_coeffs, 1):
        if not c:
            continue
        if I >> (i - 1) & 1:
            y1 = y1 + psi_on(B1, m1.index(i) + 1, c)
        else:
            y2 = y2 + psi_on(B2, m2.index(i) + 1, c)

    full = full_mask(A.n)
    for m, c in Y.nodal_coeffs.items():
        sides = (m, full & ~m)
        if I in sides:
            y1 = y1 + psi_on(B1, split.p, sign * c)
            y2 = y2 + psi_on(B2, split.q, sign * c)
            continue
        for s in sides:
            if s & I == s:
                y1 = y1 + c * _child_boundary(B1, _submask(s, m1))
                break
            if s & Ic == s:
                y2 = y2 + c * _child_boundary(B2, _submask(s, m2))
                break
    for m, c in Y.sec_coeffs.items():
        if m & I == m:
            y1 = y1 + c * _child_boundary(B1, _submask(m, m1))
        elif m & Ic == m:
            y2 = y2 + c * _child_boundary(B2, _submask(m, m2))
    return y1, y2


def restrict_kappa(split: BoundarySplit) -> tuple[HassettClass, HassettClass]:
    """Restriction of ``kappa``: ``(kappa + psi_p, kappa + psi_q)`` on the factors."""
    out = []
    for B, idx in ((split.first, split.p), (split.second, split.q)):
        if B.n < 4:
            out.append(HassettClass.zero(B))
        else:
            out.append(kappa_hassett(B) + HassettClass.psi(B, idx))
    return out[0], out[1]


def check_self_restriction_sign(A: WeightDatum, members: Iterable[int], sign: int = SELF_RESTRICTION_SIGN) -> bool:
    """Compare the restriction of ``-D_nod`` with that of ``kappa``."""
    split = induced_weights_boundary(A, members)
    via_nodal = _restrict(split, d_nod(A, -1), sign)
    via_kappa = restrict_kappa(split)
    return all(_factor_eq(a, b) for a, b in zip(via_nodal, via_kappa))


def _factor_eq(Y1: HassettClass, Y2: HassettClass) -> bool:
    if Y1.A.n < 4:
        return True  # point factor: N^1 = 0
    return hassett_eq(Y1.A, Y1, Y2)


# ---------------------------------------------------------------------------
# pull-back to the locus where the sections of J coincide


def collapse_pullback(A: WeightDatum, members: Iterable[int], Y: HassettClass) -> HassettClass:
    if Y.A != A:
        raise HassettError("class lives on a different weighted space")
    try:
        col = induced_weights_collapse(A, members)
    except CombinatError as exc:
        raise HassettError(str(exc)) from exc
    return _collapse(col, Y)


def _collapse(col: Collapse, Y: HassettClass) -> HassettClass:
    A, B, J = col.parent, col.child, col.mask
    nodal = census(A).nodal
    coefs = {Y.nodal_coeffs.get(m, ZERO) for m in nodal}
    if len(coefs) > 1:
        raise HassettError("unsupported-nodal-part: nodal coefficients are not uniform")
    if B.n < 4:
        return HassettClass.zero(B)
    out = d_nod(B, coefs.pop()) if coefs else HassettClass.zero(B)
    for i, c in enumerate(Y.psi_coeffs, 1):
        if c:
            out = out + HassettClass.psi(B, col.image(i), c)
    for m, c in Y.sec_coeffs.items():
        i, j = from_mask(m)
        inside = (J >> (i - 1) & 1) + (J >> (j - 1) & 1)
        if inside == 2:
            out = out + HassettClass.psi(B, col.p, -c)
        else:
            out = out + HassettClass.coincident(B, col.image(i), col.image(j), c)
    return out


# ---------------------------------------------------------------------------
# identity reports


@dataclass(frozen=True)
class IdentityReport:
    name: str
    passed: bool
    instance: dict
    lhs: str = ""
    rhs: str = ""
    note: str = ""


def verify_boundary_splitting(A: WeightDatum, members: Iterable[int]) -> IdentityReport:
    """Restriction of the pushed class to ``D_I`` splits as the two pushed classes."""
    members = tuple(sorted(set(members)))
    inst = {"weights": [str(a) for a in A.weights], "I": list(members)}
    try:
        split = induced_weights_boundary(A, members)
    except CombinatError as exc:
        raise HassettError(str(exc)) from exc
    got = _restrict(split, pushed_delta(A), SELF_RESTRICTION_SIGN)
    want = tuple(
        HassettClass.zero(B) if B.n < 4 else pushed_delta(B) for B in (split.first, split.second)
    )
    ok = all(_factor_eq(g, w) for g, w in zip(got, want))
    return IdentityReport(
        "boundary-splitting", ok, inst,
        lhs=" | ".join(str(g) for g in got), rhs=" | ".join(str(w) for w in want),
        note="point factors compare trivially",
    )


def verify_collapse_identity(A: WeightDatum, members: Iterable[int] | None) -> IdentityReport:
    """Collapse pull-back of the pushed class against the induced pushed class plus ``(|J|-1) C_p``."""
    if members is None:
        return IdentityReport("collapse-identity", True, {"weights": [str(a) for a in A.weights], "J": None},
                              note="vacuous: no maximal J")
    members = tuple(sorted(set(members)))
    inst = {"weights": [str(a) for a in A.weights], "J": list(members)}
    try:
        col = induced_weights_collapse(A, members)
    except CombinatError as exc:
        raise HassettError(str(exc)) from exc
    B = col.child
    if B.n < 4:
        return IdentityReport("collapse-identity", True, inst, note="point target")
    lhs = _collapse(col, pushed_delta(A))
    wJ = A.weight(col.mask)
    k = len(members) - 1
    extra = HassettClass.psi(B, col.p, 1 - wJ)
    for j in col.kept:
        extra = extra + HassettClass.coincident(B, col.p, col.image(j), A[j])
    rhs = pushed_delta(B) + k * extra
    ok = hassett_eq(B, lhs, rhs)
    return IdentityReport(
        "collapse-identity", ok, inst,
        lhs=str(picard.canonical_form(pullback(B, lhs))),
        rhs=str(picard.canonical_form(pullback(B, rhs))),
    )


def nodal_labels(A: WeightDatum) -> list[tuple[int, ...]]:
    return [from_mask(m) for m in census(A).nodal]


def maximal_collapses(A: WeightDatum) -> list[tuple[int, ...]]:
    return [from_mask(m) for m in maximal_coincident_masks(A)]


# short aliases kept for the public interface
verify_eq37 = verify_boundary_splitting
verify_eq39 = verify_collapse_identity
