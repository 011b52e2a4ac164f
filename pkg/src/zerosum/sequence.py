"""Sequences (finite multisets) over a finite abelian group and their subsums."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence as _Seq

import numpy as np

from .errors import NotCyclic, RemoveAbsent, ZeroElementInSequence
from .group import FiniteAbelianGroup, parse_group_spec


class Sequence:
    """A multiset ``prod g^{v_g(S)}`` stored as a sparse ``element -> multiplicity`` map.

    Iteration is over occurrences in ascending element order.
    """

    __slots__ = ("group", "_counts", "_length")

    def __init__(self, group: FiniteAbelianGroup, counts: Mapping[int, int] | None = None) -> None:
        self.group = group
        self._counts: dict[int, int] = {}
        self._length = 0
        for g, k in (counts or {}).items():
            self.push(int(g), int(k))

    @classmethod
    def from_elements(cls, group: FiniteAbelianGroup, elements: Iterable[int]) -> Sequence:
        seq = cls(group)
        for g in elements:
            seq.push(int(g))
        return seq

    @classmethod
    def from_coords(cls, group: FiniteAbelianGroup, items: Iterable[_Seq[int] | tuple[_Seq[int], int]]) -> Sequence:
        """Build from coordinate tuples, or ``(coords, multiplicity)`` pairs."""
        seq = cls(group)
        for item in items:
            if len(item) == 2 and isinstance(item[0], (tuple, list)):
                coords, k = item
            else:
                coords, k = item, 1
            seq.push(group.encode(coords), k)
        return seq

    # multiset semantics ---------------------------------------------------

    def __len__(self) -> int:
        return self._length

    @property
    def length(self) -> int:
        return self._length

    def multiplicity(self, g: int) -> int:
        return self._counts.get(g, 0)

    def support(self) -> list[int]:
        return sorted(self._counts)

    def counts(self) -> dict[int, int]:
        return {g: self._counts[g] for g in self.support()}

    def push(self, g: int, k: int = 1) -> None:
        if k < 0:
            raise ValueError("multiplicity must be non-negative")
        if k == 0:
            return
        self.group._check(g)
        self._counts[g] = self._counts.get(g, 0) + k
        self._length += k

    def remove_one(self, g: int) -> None:
        k = self._counts.get(g, 0)
        if k == 0:
            raise RemoveAbsent(f"element {g} does not occur in the sequence")
        if k == 1:
            del self._counts[g]
        else:
            self._counts[g] = k - 1
        self._length -= 1

    def copy(self) -> Sequence:
        out = Sequence(self.group)
        out._counts = dict(self._counts)
        out._length = self._length
        return out

    def extended(self, elements: Iterable[int]) -> Sequence:
        out = self.copy()
        for g in elements:
            out.push(int(g))
        return out

    def without(self, g: int) -> Sequence:
        """``S * g^{-1}``: a copy with one occurrence of ``g`` removed."""
        out = self.copy()
        out.remove_one(g)
        return out

    def __iter__(self) -> Iterator[int]:
        for g in self.support():
            for _ in range(self._counts[g]):
                yield g

    def elements(self) -> list[int]:
        return list(self)

    def __contains__(self, g: object) -> bool:
        return g in self._counts

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return self.group == other.group and self._counts == other._counts

    def __hash__(self) -> int:
        return hash((self.group, tuple(sorted(self._counts.items()))))

    def __repr__(self) -> str:
        parts = []
        for g in self.support():
            k = self._counts[g]
            s = self.group.format_element(g)
            parts.append(s if k == 1 else f"{s}^{k}")
        return f"Sequence[{self.group.spec}](" + " ".join(parts) + ")"

    # text format ----------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"group: {self.group.spec}"]
        for g in self.support():
            line = " ".join(str(c) for c in self.group.decode(g))
            k = self._counts[g]
            if k != 1:
                line = f"{line} x{k}" if line else f"x{k}"
            lines.append(line)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, group: FiniteAbelianGroup | None = None) -> Sequence:
        """Parse the ``group: <orders>`` + one-line-per-element format.

        If ``group`` is given, the header must describe the same group.
        """
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or not lines[0].startswith("group:"):
            raise ValueError("sequence file must start with a 'group: <orders>' line")
        header = FiniteAbelianGroup.from_spec(parse_group_spec(lines[0][len("group:"):]))
        if group is None:
            group = header
        elif group != header:
            raise ValueError(f"file is over {header.spec!r}, expected {group.spec!r}")
        seq = cls(group)
        rank = len(group.orders)
        for lineno, line in enumerate(lines[1:], start=2):
            toks = line.split()
            k = 1
            if toks and toks[-1].startswith("x"):
                try:
                    k = int(toks[-1][1:])
                except ValueError:
                    raise ValueError(f"line {lineno}: bad multiplicity {toks[-1]!r}") from None
                if k < 1:
                    raise ValueError(f"line {lineno}: multiplicity must be >= 1")
                toks = toks[:-1]
            if len(toks) != rank:
                raise ValueError(f"line {lineno}: expected {rank} coordinates, got {len(toks)}")
            try:
                coords = [int(t) for t in toks]
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer coordinate") from None
            for c, q in zip(coords, group.orders):
                if not 0 <= c < q:
                    raise ValueError(f"line {lineno}: coordinate {c} out of range for C{q}")
            seq.push(group.encode(coords), k)
        return seq


class SubsumSet:
    """Bitset over the elements of a group."""

    __slots__ = ("group", "bits")

    def __init__(self, group: FiniteAbelianGroup, bits: np.ndarray | None = None) -> None:
        self.group = group
        self.bits = np.zeros(group.size, dtype=bool) if bits is None else bits

    @classmethod
    def from_elements(cls, group: FiniteAbelianGroup, elements: Iterable[int]) -> SubsumSet:
        out = cls(group)
        out.bits[list(elements)] = True
        return out

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.bits))

    def __len__(self) -> int:
        return self.count

    def __contains__(self, g: int) -> bool:
        return bool(self.bits[g])

    def elements(self) -> list[int]:
        return np.flatnonzero(self.bits).tolist()

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements())

    def as_set(self) -> set[int]:
        return set(self.elements())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SubsumSet):
            return self.group == other.group and bool(np.array_equal(self.bits, other.bits))
        if isinstance(other, (set, frozenset)):
            return self.as_set() == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"SubsumSet({self.elements()})"


def sigma(seq: Sequence) -> int:
    """The sum of all occurrences; 0 for the empty sequence."""
    group = seq.group
    if not seq.length:
        return group.zero
    coords = sum(k * group.coords[g] for g, k in seq.counts().items())
    return group.encode(coords)


def subsum_bits(seq: Sequence, stop_at_zero: bool = False) -> np.ndarray:
    """Indicator array of the subsum set, built one occurrence at a time.

    With ``stop_at_zero`` the build stops as soon as 0 becomes a subsum, so the
    result is only meaningful for deciding zero-sum freeness.
    """
    group = seq.group
    bits = np.zeros(group.size, dtype=bool)
    for g in seq:
        bits |= group.translate(bits, g)
        bits[g] = True
        if stop_at_zero and bits[0]:
            break
    return bits


def subsums(seq: Sequence) -> SubsumSet:
    return SubsumSet(seq.group, subsum_bits(seq))


def forbidden_bits(seq: Sequence) -> np.ndarray:
    group = seq.group
    bits = group.negate_bits(subsum_bits(seq))
    bits[0] = True
    return bits


def forbidden_set(seq: Sequence) -> SubsumSet:
    """``-Sigma(S) + {0}``: the elements ``h`` for which ``S*h`` has a zero-sum subsequence."""
    return SubsumSet(seq.group, forbidden_bits(seq))


def is_zero_sum_free(seq: Sequence) -> bool:
    return not subsum_bits(seq, stop_at_zero=True)[0]


def is_minimal_zero_sum(seq: Sequence) -> bool:
    """Nonempty, sums to zero, and removing any single occurrence leaves it zero-sum free."""
    if not seq.length or sigma(seq) != 0:
        return False
    return all(is_zero_sum_free(seq.without(g)) for g in seq.support())


def cross_number(seq: Sequence) -> Fraction:
    """``sum 1/ord(g_i)`` over all occurrences, as an exact fraction."""
    if 0 in seq:
        raise ZeroElementInSequence("cross number is undefined for sequences containing 0")
    group = seq.group
    return sum((Fraction(k, group.element_order(g)) for g, k in seq.counts().items()), Fraction(0))


def savchev_chen_decompose(seq: Sequence) -> tuple[int, list[int]] | None:
    """Find ``g`` with ``S = (n_1 g)...(n_l g)``, ``1 = n_1 <= ... <= n_l``,
    ``m = sum n_i < ord(g)`` and ``Sigma(S) = {g, 2g, ..., mg}``.

    Candidates ``g`` are tried in ascending index order; returns ``(g, [n_1, ..., n_l])``
    for the first that works, else ``None``.
    """
    group = seq.group
    if not group.is_cyclic:
        raise NotCyclic(f"{group} is not cyclic")
    if not seq.length:
        return None
    support = seq.support()
    sub = subsum_bits(seq)
    for g in range(1, group.size):
        if g not in seq:
            continue  # n_1 = 1 forces g into the support
        order = group.element_order(g)
        multiple_of: dict[int, int] = {}
        x = 0
        for k in range(1, order):
            x = group.add(x, g)
            multiple_of[x] = k
        if any(h not in multiple_of for h in support):
            continue
        multipliers = sorted(multiple_of[h] for h in seq)
        m = sum(multipliers)
        if m >= order:
            continue
        expected = np.zeros(group.size, dtype=bool)
        x = 0
        for _ in range(m):
            x = group.add(x, g)
            expected[x] = True
        if np.array_equal(expected, sub):
            return g, multipliers
    return None


def reconstruct(group: FiniteAbelianGroup, g: int, multipliers: Iterable[int]) -> Sequence:
    """The sequence ``(n_1 g) ... (n_l g)``."""
    return Sequence.from_elements(group, (group.mul(k, g) for k in multipliers))
