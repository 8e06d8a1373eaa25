"""Subsets, weight data, F-curve partitions and induced weight data.

Subsets of ``[n] = {1, ..., n}`` are stored as bitmasks: element ``i`` is
bit ``i - 1``.  Every public function accepts and returns 1-based members.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

MAX_N = 16


class CombinatError(ValueError):
    """Invalid subset label, weight datum or partition."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise CombinatError(f"floating point value {value!r} not accepted; use 'p/q'")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise CombinatError(f"not a rational number: {value!r}") from exc


def to_mask(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        mask |= 1 << (i - 1)
    return mask


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _check_n(n: int, low: int = 4) -> None:
    if not isinstance(n, int) or n < low:
        raise CombinatError(f"n must be an integer >= {low}, got {n!r}")
    if n > MAX_N:
        raise CombinatError(f"n = {n} exceeds the hard cap n <= {MAX_N}")


# ---------------------------------------------------------------------------
# weight data


@dataclass(frozen=True)
class WeightDatum:
    """Exact rational weights ``a_1, ..., a_n`` with ``0 < a_i <= 1`` and sum > 2.

    ``n = 3`` is accepted: it describes the one-point space that appears as a
    factor of boundary restrictions and as the target of full collapses.
    """

    weights: tuple[Fraction, ...]

    def __init__(self, weights: Iterable):
        ws = tuple(as_fraction(w) for w in weights)
        object.__setattr__(self, "weights", ws)
        _check_n(len(ws), low=3)
        for i, a in enumerate(ws, 1):
            if not 0 < a <= 1:
                raise CombinatError(f"weight a_{i} = {a} not in (0, 1]")
        if sum(ws) <= 2:
            raise CombinatError(f"weights sum to {sum(ws)}, must exceed 2")

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def __getitem__(self, i: int) -> Fraction:
        """1-based weight lookup."""
        return self.weights[i - 1]

    def weight(self, mask: int) -> Fraction:
        """``w_I`` for a bitmask ``I``."""
        return _mask_weight(self.weights, mask)

    def __str__(self) -> str:
        return "(" + ", ".join(str(a) for a in self.weights) + ")"

    @classmethod
    def symmetric(cls, n: int, value) -> "WeightDatum":
        return cls([as_fraction(value)] * n)


def _mask_weight(weights: Sequence[Fraction], mask: int) -> Fraction:
    total = Fraction(0)
    i = 0
    while mask:
        if mask & 1:
            total += weights[i]
        mask >>= 1
        i += 1
    return total


# ---------------------------------------------------------------------------
# subset labels


@dataclass(frozen=True, order=True)
class SubsetIndex:
    """A boundary label ``I`` of ``[n]``; ``members`` is strictly increasing."""

    n: int
    members: tuple[int, ...]

    @property
    def mask(self) -> int:
        return to_mask(self.members)

    @property
    def complement(self) -> tuple[int, ...]:
        return from_mask(full_mask(self.n) & ~self.mask)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "SubsetIndex":
        return cls(n, from_mask(mask))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def _validate_label(members: Iterable[int], n: int) -> int:
    _check_n(n, low=3)
    members = set(members)
    for i in members:
        if not isinstance(i, int) or not 1 <= i <= n:
            raise CombinatError(f"element {i!r} out of range 1..{n}")
    if not 2 <= len(members) <= n - 2:
        raise CombinatError(f"label size {len(members)} not in [2, {n - 2}]")
    return to_mask(members)


def canonical_mask(mask: int, n: int) -> int:
    """Representative of ``{I, I^c}`` that does not contain ``n``."""
    if mask >> (n - 1) & 1:
        return full_mask(n) & ~mask
    return mask


def canonical_subset(members: Iterable[int], n: int) -> SubsetIndex:
    """Complement-identified label excluding ``n``.

    >>> canonical_subset({3, 4, 5}, 5)
    SubsetIndex(n=5, members=(1, 2))
    >>> canonical_subset({1, 5}, 5).members
    (2, 3, 4)
    """
    mask = _validate_label(members, n)
    return SubsetIndex.from_mask(canonical_mask(mask, n), n)


def light_mask(mask: int, A: WeightDatum) -> int:
    """Lighter side of ``{I, I^c}``; ties go to the lexicographically smaller list.

    Under a tie the side holding element 1 is lexicographically smaller.
    """
    comp = full_mask(A.n) & ~mask
    w, wc = A.weight(mask), A.weight(comp)
    if w < wc:
        return mask
    if wc < w:
        return comp
    return mask if mask & 1 else comp


def weight_canonical_subset(I: SubsetIndex, A: WeightDatum) -> SubsetIndex:
    if I.n != A.n:
        raise CombinatError(f"label on [{I.n}] used with weights of length {A.n}")
    mask = _validate_label(I.members, I.n)
    return SubsetIndex.from_mask(light_mask(mask, A), A.n)


@lru_cache(maxsize=None)
def boundary_masks(n: int) -> tuple[int, ...]:
    """Canonical (n-excluded) label masks in increasing bitmask order."""
    return tuple(m for m in range(1 << (n - 1)) if 2 <= popcount(m) <= n - 2)


def enumerate_boundary(n: int) -> list[SubsetIndex]:
    _check_n(n)
    return [SubsetIndex.from_mask(m, n) for m in boundary_masks(n)]


# ---------------------------------------------------------------------------
# F-curves


@dataclass(frozen=True)
class FCurve:
    """Partition of ``[n]`` into four nonempty blocks sorted by minimum element."""

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.blocks) != 4 or any(not b for b in self.blocks):
            raise CombinatError("an F-curve needs exactly four nonempty blocks")
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(1, self.n + 1)):
            raise CombinatError(f"blocks {self.blocks} do not partition [1..{self.n}]")

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int) -> "FCurve":
        bs = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else 0)
        return cls(n, tuple(bs))

    @property
    def masks(self) -> tuple[int, int, int, int]:
        return tuple(to_mask(b) for b in self.blocks)  # type: ignore[return-value]

    def __str__(self) -> str:
        return "(" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + ")"


def _partitions4(n: int) -> Iterator[list[list[int]]]:
    # restricted growth strings with exactly 4 blocks
    def rec(i: int, blocks: list[list[int]]):
        remaining = n - i + 1
        if len(blocks) + remaining < 4:
            return
        if i > n:
            if len(blocks) == 4:
                yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from rec(i + 1, blocks)
            b.pop()
        if len(blocks) < 4:
            blocks.append([i])
            yield from rec(i + 1, blocks)
            blocks.pop()

    yield from rec(1, [])


@lru_cache(maxsize=None)
def _fcurves(n: int) -> tuple[FCurve, ...]:
    return tuple(FCurve(n, tuple(tuple(b) for b in p)) for p in _partitions4(n))


def enumerate_fcurves(n: int) -> list[FCurve]:
    _check_n(n)
    return list(_fcurves(n))


# ---------------------------------------------------------------------------
# coincidence data and induced weights


def coincidence_masks(A: WeightDatum) -> tuple[int, ...]:
    """Masks of ``C = {I : w_I <= 1, 2 <= |I| <= n - 2}`` in increasing order."""
    n = A.n
    return tuple(
        m for m in range(1, 1 << n) if 2 <= popcount(m) <= n - 2 and A.weight(m) <= 1
    )


def coincidence_sets(A: WeightDatum) -> list[SubsetIndex]:
    return [SubsetIndex.from_mask(m, A.n) for m in coincidence_masks(A)]


@dataclass(frozen=True)
class BoundarySplit:
    """Weight data of the two factors of a nodal boundary divisor ``D_I``.

    ``first`` lists the weights of ``I`` followed by the node (index ``p``),
    ``second`` those of ``I^c`` followed by the node (index ``q``).
    """

    parent: WeightDatum
    mask: int
    first: WeightDatum
    second: WeightDatum
    first_members: tuple[int, ...]
    second_members: tuple[int, ...]

    @property
    def p(self) -> int:
        return self.first.n

    @property
    def q(self) -> int:
        return self.second.n


@dataclass(frozen=True)
class Collapse:
    """Weight datum obtained by merging the indices of ``J`` into one index ``p``.

    The surviving indices keep their relative order and ``p`` comes last.
    """

    parent: WeightDatum
    mask: int
    child: WeightDatum
    kept: tuple[int, ...]

    @property
    def p(self) -> int:
        return self.child.n

    def image(self, i: int) -> int:
        """Index in the child of parent index ``i``."""
        if self.mask >> (i - 1) & 1:
            return self.p
        return self.kept.index(i) + 1


def induced_weights_boundary(A: WeightDatum, members: Iterable[int]) -> BoundarySplit:
    mask = _validate_label(members, A.n)
    light = light_mask(mask, A)
    if A.weight(light) <= 1:
        raise CombinatError(f"{SubsetIndex.from_mask(mask, A.n)} is not a nodal boundary for {A}")
    comp = full_mask(A.n) & ~mask
    first_members, second_members = from_mask(mask), from_mask(comp)
    first = WeightDatum([A[i] for i in first_members] + [Fraction(1)])
    second = WeightDatum([A[i] for i in second_members] + [Fraction(1)])
    return BoundarySplit(A, mask, first, second, first_members, second_members)


def is_maximal_coincident(A: WeightDatum, mask: int) -> bool:
    w = A.weight(mask)
    if w > 1:
        return False
    return all(w + A[i] > 1 for i in range(1, A.n + 1) if not mask >> (i - 1) & 1)


def induced_weights_collapse(A: WeightDatum, members: Iterable[int]) -> Collapse:
    members = sorted(set(members))
    for i in members:
        if not 1 <= i <= A.n:
            raise CombinatError(f"element {i} out of range 1..{A.n}")
    if len(members) < 2:
        raise CombinatError("a collapse needs |J| >= 2")
    mask = to_mask(members)
    w = A.weight(mask)
    if w > 1:
        raise CombinatError(f"w_J = {w} > 1")
    if not is_maximal_coincident(A, mask):
        raise CombinatError(f"J = {set(members)} is not maximal with w_J <= 1")
    kept = tuple(i for i in range(1, A.n + 1) if i not in members)
    child = WeightDatum([A[i] for i in kept] + [w])
    return Collapse(A, mask, child, kept)


def maximal_coincident_masks(A: WeightDatum) -> list[int]:
    return [
        m for m in range(1, 1 << A.n)
        if popcount(m) >= 2 and is_maximal_coincident(A, m)
    ]
