"""Finite abelian groups as products of cyclic groups.

Elements are plain integers in ``range(|G|)``: the mixed-radix encoding of a
coordinate vector with respect to the construction basis, first coordinate
most significant.  Index order is the total order used by the search code.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

#: Auto table policy builds the |G|^2 subtraction table only up to this size.
DEFAULT_TABLE_THRESHOLD = 4096

#: Largest group we are willing to index with int64 element ids.
MAX_GROUP_SIZE = 2**62


class TablePolicy(enum.Enum):
    AUTO = "auto"
    ALWAYS = "always"
    NEVER = "never"


class GroupSizeError(OverflowError):
    pass


def parse_group_spec(text: str) -> list[int]:
    """Parse ``"2,6,6,6,6"`` into a list of orders.  Empty text is the trivial group."""
    text = text.strip()
    if not text:
        return []
    try:
        orders = [int(tok) for tok in text.replace(" ", "").split(",") if tok]
    except ValueError:
        raise ValueError(f"invalid group spec {text!r}") from None
    if any(q < 1 for q in orders):
        raise ValueError(f"cyclic orders must be >= 1, got {text!r}")
    return orders


def factorize(n: int) -> list[tuple[int, int]]:
    """Return ``[(p, e), ...]`` with ``n = prod p**e``, primes ascending."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def primary_decomposition(orders: Iterable[int]) -> list[tuple[int, int]]:
    """Prime-power cyclic factors ``(p, p**e)`` of ``C_{n_1} + ... + C_{n_k}``, sorted."""
    out = []
    for q in orders:
        for p, e in factorize(int(q)):
            out.append((p, p**e))
    return sorted(out)


def invariant_factors(orders: Iterable[int]) -> list[int]:
    """Divisor chain ``n_1 | n_2 | ... | n_r`` (all > 1) isomorphic to the given product.

    Prime powers are grouped by prime; the largest factor of the chain takes the
    largest power of every prime, the next one the second largest, and so on.
    """
    by_prime: dict[int, list[int]] = {}
    for p, q in primary_decomposition(orders):
        by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return []
    for powers in by_prime.values():
        powers.sort(reverse=True)
    rank = max(len(v) for v in by_prime.values())
    chain = []
    for i in range(rank):
        chain.append(math.prod(v[i] for v in by_prime.values() if i < len(v)))
    return chain[::-1]


class FiniteAbelianGroup:
    """``C_{q_1} + ... + C_{q_k}`` with integer-encoded elements.

    The instance is immutable after construction and safe to share between
    worker processes (it pickles by spec and rebuilds its tables).
    """

    def __init__(
        self,
        orders: Sequence[int] = (),
        table_policy: TablePolicy | str = TablePolicy.AUTO,
        table_threshold: int = DEFAULT_TABLE_THRESHOLD,
    ) -> None:
        if any(int(q) < 1 for q in orders):
            raise ValueError(f"cyclic orders must be >= 1, got {list(orders)}")
        self.orders: tuple[int, ...] = tuple(int(q) for q in orders if int(q) != 1)
        size = math.prod(self.orders)
        if size > MAX_GROUP_SIZE:
            raise GroupSizeError(f"|G| = {size} does not fit the element index type")
        self.size = size
        self.table_policy = TablePolicy(table_policy)
        self.table_threshold = table_threshold

        strides = []
        acc = 1
        for q in reversed(self.orders):
            strides.append(acc)
            acc *= q
        self.radix_strides: tuple[int, ...] = tuple(reversed(strides))
        self.invariant_factors: tuple[int, ...] = tuple(invariant_factors(self.orders))
        self.primary_factors: tuple[tuple[int, int], ...] = tuple(primary_decomposition(self.orders))

        self._shape = self.orders if self.orders else (1,)
        self._coords = self._build_coords()
        self.neg_table = self.encode_many((-self._coords) % self._orders_arr)
        self.sub_table: np.ndarray | None = None
        if self.table_policy is TablePolicy.ALWAYS or (
            self.table_policy is TablePolicy.AUTO and size <= table_threshold
        ):
            self.sub_table = self._build_sub_table()

    @classmethod
    def from_spec(cls, spec: str | Sequence[int], table_policy: TablePolicy | str = TablePolicy.AUTO, **kw) -> FiniteAbelianGroup:
        if isinstance(spec, str):
            spec = parse_group_spec(spec)
        return cls(spec, table_policy=table_policy, **kw)

    def __reduce__(self):
        return (
            FiniteAbelianGroup,
            (self.orders, self.table_policy, self.table_threshold),
        )

    def _build_coords(self) -> np.ndarray:
        self._orders_arr = np.array(self.orders, dtype=np.int64).reshape(1, -1)
        if not self.orders:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.indices(self.orders, dtype=np.int64).reshape(len(self.orders), -1)
        return np.ascontiguousarray(grids.T)

    def _build_sub_table(self) -> np.ndarray:
        dtype = np.int32 if self.size < 2**31 else np.int64
        table = np.empty((self.size, self.size), dtype=dtype)
        for a in range(self.size):
            table[a] = self.encode_many((self._coords[a] - self._coords) % self._orders_arr)
        return table

    # encoding ------------------------------------------------------------

    @property
    def rank(self) -> int:
        """Number of invariant factors ``r(G)``."""
        return len(self.invariant_factors)

    @property
    def total_rank(self) -> int:
        """Number of prime-power factors ``r*(G)``."""
        return len(self.primary_factors)

    def p_rank(self, p: int) -> int:
        return sum(1 for q, _ in self.primary_factors if q == p)

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape for bitsets viewed as a grid of coordinates."""
        return self._shape

    @property
    def coords(self) -> np.ndarray:
        """``(|G|, k)`` array: row ``i`` is the coordinate vector of element ``i``."""
        return self._coords

    @property
    def zero(self) -> int:
        return 0

    def elements(self) -> range:
        return range(self.size)

    def encode(self, coords: Sequence[int]) -> int:
        if len(coords) != len(self.orders):
            raise ValueError(f"expected {len(self.orders)} coordinates, got {len(coords)}")
        return sum((int(c) % q) * s for c, q, s in zip(coords, self.orders, self.radix_strides))

    def decode(self, index: int) -> tuple[int, ...]:
        self._check(index)
        return tuple(int(c) for c in self._coords[index])

    def encode_many(self, coords: np.ndarray) -> np.ndarray:
        if not self.orders:
            return np.zeros(len(coords), dtype=np.int64)
        strides = np.array(self.radix_strides, dtype=np.int64)
        return (np.asarray(coords, dtype=np.int64) % self._orders_arr) @ strides

    def _check(self, a: int) -> None:
        if not 0 <= a < self.size:
            raise IndexError(f"element index {a} out of range for |G| = {self.size}")

    # arithmetic ----------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.sub_table is not None:
            return int(self.sub_table[a, self.neg_table[b]])
        return self.encode(self._coords[a] + self._coords[b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        if self.sub_table is not None:
            return int(self.sub_table[a, b])
        return self.encode(self._coords[a] - self._coords[b])

    def mul(self, k: int, a: int) -> int:
        """``k * a`` for an integer ``k``."""
        return self.encode(k * self._coords[a])

    def add_many(self, a: int, bs: np.ndarray) -> np.ndarray:
        """``a + b`` for every ``b`` in ``bs``."""
        bs = np.asarray(bs, dtype=np.int64)
        if self.sub_table is not None:
            return self.sub_table[a][self.neg_table[bs]]
        return self.encode_many(self._coords[a] + self._coords[bs])

    def sub_many(self, a: int, bs: np.ndarray) -> np.ndarray:
        """``a - b`` for every ``b`` in ``bs``; a table row scan when tables exist."""
        bs = np.asarray(bs, dtype=np.int64)
        if self.sub_table is not None:
            return self.sub_table[a][bs]
        return self.encode_many(self._coords[a] - self._coords[bs])

    def element_order(self, a: int) -> int:
        self._check(a)
        return reduce(
            math.lcm,
            (q // math.gcd(q, int(c)) for q, c in zip(self.orders, self._coords[a])),
            1,
        )

    def element_orders(self) -> np.ndarray:
        """Order of every element, indexed by element."""
        out = np.ones(self.size, dtype=np.int64)
        for j, q in enumerate(self.orders):
            out = np.lcm(out, q // np.gcd(q, self._coords[:, j]))
        return out

    def order_statistics(self) -> Counter:
        """Multiset of element orders; equal for isomorphic groups."""
        return Counter(self.element_orders().tolist())

    # bitsets over G ------------------------------------------------------

    def translate(self, bits: np.ndarray, g: int) -> np.ndarray:
        """Return the indicator of ``A + g`` given the indicator of ``A``."""
        if not self.orders:
            return bits.copy()
        grid = bits.reshape(self._shape)
        shifted = np.roll(grid, tuple(int(c) for c in self._coords[g]), axis=tuple(range(len(self.orders))))
        return shifted.reshape(-1)

    def negate_bits(self, bits: np.ndarray) -> np.ndarray:
        """Indicator of ``-A``."""
        return bits[self.neg_table]

    def format_element(self, a: int) -> str:
        return "(" + ",".join(str(c) for c in self.decode(a)) + ")"

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.orders)})"

    def __str__(self) -> str:
        if not self.orders:
            return "C1"
        return " + ".join(f"C{q}" for q in self.orders)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteAbelianGroup) and self.orders == other.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    @property
    def spec(self) -> str:
        return ",".join(str(q) for q in self.orders)


def from_spec(spec: str | Sequence[int], table_policy: TablePolicy | str = TablePolicy.AUTO, **kw) -> FiniteAbelianGroup:
    return FiniteAbelianGroup.from_spec(spec, table_policy, **kw)
