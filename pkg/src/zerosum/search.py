"""Pruned backtracking over zero-sum free sequences.

The search state for a zero-sum free sequence ``S`` is a :class:`SearchFrontier`:
the forbidden set ``-Sigma(S) + {0}`` as a bitset and its complement, the
candidates ``h`` that keep ``S*h`` zero-sum free, as an ascending index array.
Appending ``g`` updates both in ``O(#candidates)`` (:func:`sca`), since
``forbidden(S*g) = forbidden(S) + (forbidden(S) - g)``.

Extensions are enumerated in non-increasing index order only, so every
multiset is visited once.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import BudgetExhausted, CandidateNotAllowed, NotZeroSumFree, SeedNotZeroSumFree
from .group import FiniteAbelianGroup
from .invariants import d_star, girard_bound
from .sequence import Sequence, forbidden_bits, is_zero_sum_free


@dataclass
class SearchFrontier:
    allowed: np.ndarray  # ascending element indices
    forbidden: np.ndarray  # bool indicator over G

    @classmethod
    def from_sequence(cls, seq: Sequence) -> SearchFrontier:
        forbidden = forbidden_bits(seq)
        return cls(np.flatnonzero(~forbidden), forbidden)

    @classmethod
    def empty(cls, group: FiniteAbelianGroup) -> SearchFrontier:
        forbidden = np.zeros(group.size, dtype=bool)
        forbidden[0] = True
        return cls(np.arange(1, group.size, dtype=np.int64), forbidden)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SearchFrontier):
            return NotImplemented
        return np.array_equal(self.allowed, other.allowed) and np.array_equal(self.forbidden, other.forbidden)


def sca(group: FiniteAbelianGroup, frontier: SearchFrontier, g: int) -> SearchFrontier:
    """Frontier of ``S*g`` from the frontier of ``S``.

    Every candidate ``h`` with ``g + h`` forbidden becomes forbidden; the rest
    stay candidates.
    """
    if frontier.forbidden[g]:
        raise CandidateNotAllowed(f"element {g} is forbidden in this frontier")
    return _sca(group, frontier.allowed, frontier.forbidden, g)


def _sca(group: FiniteAbelianGroup, allowed: np.ndarray, forbidden: np.ndarray, g: int) -> SearchFrontier:
    hit = forbidden[group.add_many(g, allowed)]
    new_forbidden = forbidden.copy()
    new_forbidden[allowed[hit]] = True
    return SearchFrontier(allowed[~hit], new_forbidden)


class Mode(enum.Enum):
    FIRST_HIT = "first"
    ENUMERATE_ALL = "enumerate"


@dataclass(frozen=True)
class Budget:
    """Per-work-item limits; ``None`` means unlimited."""

    seconds: float | None = None
    nodes: int | None = None


class _Stop(Exception):
    pass


class _Counter:
    __slots__ = ("nodes", "limit", "deadline")

    def __init__(self, budget: Budget | None) -> None:
        budget = budget or Budget()
        self.nodes = 0
        self.limit = budget.nodes
        self.deadline = None if budget.seconds is None else time.monotonic() + budget.seconds

    def tick(self) -> None:
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise _Stop
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise _Stop


@dataclass
class ItemReport:
    """Outcome of one work item: a seed and a first extension element ``g1``."""

    seed_index: int
    g1: int
    complete: bool
    extensions: list[tuple[int, ...]]
    nodes: int
    elapsed: float
    error: str | None = None


@dataclass
class SearchReport:
    """Aggregate statistics over one or more seeds.

    ``completed`` counts seeds whose every work item finished within budget,
    ``hits`` counts seeds with at least one extension and ``extensions_found``
    is the total number of extensions.
    """

    seeds_processed: int = 0
    completed: int = 0
    hits: int = 0
    extensions_found: int = 0
    wall_seconds: float = 0.0
    items: list[ItemReport] = field(default_factory=list)

    @property
    def failed(self) -> list[ItemReport]:
        return [it for it in self.items if it.error is not None]

    def extensions(self) -> list[tuple[int, tuple[int, ...]]]:
        """``(seed_index, extension)`` pairs in deterministic order."""
        out = []
        for it in self.items:
            out.extend((it.seed_index, ext) for ext in it.extensions)
        return out

    def to_json(self) -> dict:
        return {
            "seeds": self.seeds_processed,
            "complete": self.completed,
            "hits": self.hits,
            "extensions": self.extensions_found,
            "wall_seconds": round(self.wall_seconds, 6),
            "items": len(self.items),
            "failed_items": len(self.failed),
        }

    def hit_lines(self, group: FiniteAbelianGroup) -> list[str]:
        return [
            f"{seed}\t" + " ".join(group.format_element(g) for g in ext)
            for seed, ext in self.extensions()
        ]


def summarize(items: list[ItemReport], n_seeds: int, wall: float) -> SearchReport:
    items = sorted(items, key=lambda it: (it.seed_index, it.g1))
    report = SearchReport(seeds_processed=n_seeds, wall_seconds=wall, items=items)
    for s in range(n_seeds):
        mine = [it for it in items if it.seed_index == s]
        if all(it.complete and it.error is None for it in mine):
            report.completed += 1
        found = sum(len(it.extensions) for it in mine)
        report.hits += found > 0
        report.extensions_found += found
    return report


def _extend(
    group: FiniteAbelianGroup,
    allowed: np.ndarray,
    forbidden: np.ndarray,
    prefix: list[int],
    remaining: int,
    out: list[tuple[int, ...]],
    first_only: bool,
    counter: _Counter,
) -> bool:
    """Depth-first extension of ``prefix`` by ``remaining`` more elements, each <= the last.

    Returns True when the search should stop (first hit found).
    """
    last = prefix[-1]
    cands = allowed[: np.searchsorted(allowed, last, side="right")]
    if remaining == 1:
        if first_only:
            if len(cands):
                out.append((*prefix, int(cands[-1])))
                return True
            return False
        out.extend((*prefix, int(h)) for h in cands[::-1])
        return False
    for h in cands[::-1].tolist():
        counter.tick()
        nxt = _sca(group, allowed, forbidden, h)
        prefix.append(h)
        stop = _extend(group, nxt.allowed, nxt.forbidden, prefix, remaining - 1, out, first_only, counter)
        prefix.pop()
        if stop:
            return True
    return False


def sea_item(
    group: FiniteAbelianGroup,
    frontier: SearchFrontier,
    g1: int,
    depth: int,
    mode: Mode = Mode.FIRST_HIT,
    budget: Budget | None = None,
    seed_index: int = 0,
) -> ItemReport:
    """All (or the first) extensions of the seed that start with ``g1``."""
    start = time.monotonic()
    counter = _Counter(budget)
    out: list[tuple[int, ...]] = []
    complete = True
    try:
        if depth == 1:
            out.append((g1,))
        else:
            counter.tick()
            nxt = sca(group, frontier, g1)
            _extend(group, nxt.allowed, nxt.forbidden, [g1], depth - 1, out, mode is Mode.FIRST_HIT, counter)
    except _Stop:
        complete = False
    return ItemReport(seed_index, g1, complete, out, counter.nodes, time.monotonic() - start)


def _seed_frontier(seed: Sequence) -> SearchFrontier:
    if not is_zero_sum_free(seed):
        raise SeedNotZeroSumFree("the seed has a nonempty zero-sum subsequence")
    return SearchFrontier.from_sequence(seed)


def sea(
    seed: Sequence,
    depth: int,
    mode: Mode | str = Mode.FIRST_HIT,
    budget: Budget | None = None,
) -> tuple[list[tuple[int, ...]], SearchReport]:
    """Extend a zero-sum free seed by ``depth`` elements ``g1 >= g2 >= ...`` (index order).

    In FIRST_HIT mode at most one extension is reported per first element
    ``g1``; ENUMERATE_ALL lists every canonical extension.  The budget applies
    to each ``g1`` separately; items that exhaust it are reported incomplete.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    mode = Mode(mode)
    start = time.monotonic()
    group = seed.group
    frontier = _seed_frontier(seed)
    items = [sea_item(group, frontier, int(g1), depth, mode, budget) for g1 in frontier.allowed]
    report = summarize(items, 1, time.monotonic() - start)
    return [ext for _, ext in report.extensions()], report


def iter_zero_sum_free(
    group: FiniteAbelianGroup,
    min_length: int = 0,
    max_length: int | None = None,
    budget: Budget | None = None,
) -> Iterator[tuple[int, ...]]:
    """Every zero-sum free sequence (as a non-increasing element tuple) once.

    Raises :class:`BudgetExhausted` if the budget runs out.
    """
    counter = _Counter(budget)
    root = SearchFrontier.empty(group)
    stack: list[tuple[tuple[int, ...], np.ndarray, np.ndarray]] = [((), root.allowed, root.forbidden)]
    try:
        while stack:
            seq, allowed, forbidden = stack.pop()
            if len(seq) >= min_length:
                yield seq
            if max_length is not None and len(seq) >= max_length:
                continue
            cands = allowed if not seq else allowed[: np.searchsorted(allowed, seq[-1], side="right")]
            for h in cands.tolist():
                counter.tick()
                nxt = _sca(group, allowed, forbidden, h)
                stack.append(((*seq, h), nxt.allowed, nxt.forbidden))
    except _Stop:
        raise BudgetExhausted(f"enumeration stopped after {counter.nodes} nodes") from None


# Davenport constant ------------------------------------------------------------


@dataclass
class DavenportResult:
    value: int
    witness: Sequence
    states: int  # distinct subsum sets (levels) or nodes (dfs) visited


def _add_matrix(group: FiniteAbelianGroup) -> np.ndarray | None:
    if group.sub_table is None:
        return None
    return group.sub_table[:, group.neg_table]


def davenport_exact(
    group: FiniteAbelianGroup,
    cap: int | None = None,
    budget: Budget | None = None,
    method: str = "levels",
) -> DavenportResult:
    """Exact ``d(G)``, the maximal length of a zero-sum free sequence.

    ``levels`` grows all zero-sum free sequences one element per round but
    keeps only one representative per distinct forbidden set, since the
    possible continuations of ``S`` depend on nothing else.  ``dfs`` is the
    plain canonical depth-first search.  ``cap`` bounds the number of search
    states (or nodes); exceeding it raises :class:`BudgetExhausted` whose
    ``partial`` is the best lower bound found.
    """
    if method == "dfs":
        return _davenport_dfs(group, cap, budget)
    if method != "levels":
        raise ValueError(f"unknown method {method!r}")
    counter = _Counter(Budget(budget.seconds if budget else None, cap))
    add = _add_matrix(group)
    root = SearchFrontier.empty(group).forbidden
    states = root[None, :]
    # per level: (parent row in previous level, element appended) for each state
    history: list[tuple[np.ndarray, np.ndarray]] = []
    visited = 1
    try:
        while True:
            rows, elems, packed, children = [], [], [], []
            chunk = max(1, _CHUNK_CELLS // max(1, group.size * group.size))
            for lo in range(0, len(states), chunk):
                block = states[lo:lo + chunk]
                for _ in range(len(block)):
                    counter.tick()
                ii, gg = np.nonzero(~block)
                if add is not None:
                    kids = block[ii] | block[ii[:, None], add[gg]]
                else:
                    kids = np.stack([block[i] | group.translate(block[i], group.neg(int(g))) for i, g in zip(ii, gg)]) if len(ii) else np.zeros((0, group.size), bool)
                pk = np.packbits(kids, axis=1)
                _, first = np.unique(_as_void(pk), return_index=True)
                rows.append(ii[first] + lo)
                elems.append(gg[first])
                packed.append(pk[first])
                children.append(kids[first])
            if not rows or not sum(len(r) for r in rows):
                break
            pk = np.concatenate(packed)
            _, first = np.unique(_as_void(pk), return_index=True)
            first.sort()
            history.append((np.concatenate(rows)[first], np.concatenate(elems)[first]))
            states = np.concatenate(children)[first]
            visited += len(states)
    except _Stop:
        raise BudgetExhausted(f"stopped after {counter.nodes} states", partial=len(history)) from None
    elements = []
    row = 0
    for parents, appended in reversed(history):
        elements.append(int(appended[row]))
        row = int(parents[row])
    return DavenportResult(len(history), Sequence.from_elements(group, elements), visited)


_CHUNK_CELLS = 1 << 24


def _as_void(packed: np.ndarray) -> np.ndarray:
    packed = np.ascontiguousarray(packed)
    return packed.view(np.dtype((np.void, packed.shape[1]))).ravel()


def _davenport_dfs(group: FiniteAbelianGroup, cap: int | None, budget: Budget | None) -> DavenportResult:
    best: tuple[int, ...] = ()
    count = 0
    try:
        for seq in iter_zero_sum_free(group, budget=Budget(budget.seconds if budget else None, cap)):
            count += 1
            if len(seq) > len(best):
                best = seq
    except BudgetExhausted as exc:
        exc.partial = len(best)
        raise
    return DavenportResult(len(best), Sequence.from_elements(group, best), count)


def find_zero_sum_free(
    group: FiniteAbelianGroup,
    length: int,
    budget: Budget | None = None,
) -> Sequence | None:
    """Some zero-sum free sequence of the given length, or None if none exists.

    Runs the canonical search from the empty seed and stops at the first hit.
    """
    if length == 0:
        return Sequence(group)
    empty = Sequence(group)
    frontier = SearchFrontier.empty(group)
    for g1 in frontier.allowed[::-1].tolist():
        item = sea_item(group, frontier, g1, length, Mode.FIRST_HIT, budget)
        if item.extensions:
            return empty.extended(item.extensions[0])
        if not item.complete:
            raise BudgetExhausted(f"search for length {length} ran out of budget")
    return None


# Split check ----------------------------------------------------------------------


def exists_split(seq: Sequence) -> tuple[int, int, int] | None:
    """Look for ``g`` in ``T`` and ``g1 + g2 = g`` with ``(T g^{-1}) g1 g2`` zero-sum free.

    Returns the first witness ``(g, g1, g2)`` with ``g1 <= g2`` (support and
    ``g1`` in ascending order) or None.
    """
    if not is_zero_sum_free(seq):
        raise NotZeroSumFree("the sequence has a nonempty zero-sum subsequence")
    group = seq.group
    everything = np.arange(group.size, dtype=np.int64)
    for g in seq.support():
        forb = forbidden_bits(seq.without(g))
        partner = group.sub_many(g, everything)
        # T' g1 g2 is zero-sum free iff g1, g2 and g1 + g2 = g all avoid forb(T');
        # g itself avoids it because T = T' g is zero-sum free
        ok = ~forb & ~forb[partner] & (everything <= partner)
        hits = np.flatnonzero(ok)
        if len(hits):
            g1 = int(hits[0])
            return g, g1, int(partner[g1])
    return None


# Girard's conjecture -----------------------------------------------------------


class GirardStatus(enum.Enum):
    ALL_WITHIN_BOUND = "AllWithinBound"
    COUNTEREXAMPLE = "CounterexampleSequence"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass
class GirardVerdict:
    status: GirardStatus
    bound: Fraction
    checked: int
    max_cross_number: Fraction | None = None
    counterexample: Sequence | None = None


def girard_check(group: FiniteAbelianGroup, budget: Budget | None = None) -> GirardVerdict:
    """Compare ``k(S)`` with the bound for every zero-sum free ``S`` with ``|S| >= d*(G)``."""
    bound = girard_bound(group)
    exponent = group.invariant_factors[-1] if group.invariant_factors else 1
    weight = exponent // group.element_orders()  # k(S) * exponent, per element
    limit = bound * exponent
    checked = 0
    best: Fraction | None = None
    try:
        for seq in iter_zero_sum_free(group, min_length=d_star(group), budget=budget):
            checked += 1
            k = Fraction(int(weight[list(seq)].sum()) if seq else 0, exponent)
            if best is None or k > best:
                best = k
            if k * exponent > limit:
                ce = Sequence.from_elements(group, seq)
                return GirardVerdict(GirardStatus.COUNTEREXAMPLE, bound, checked, best, ce)
    except BudgetExhausted:
        return GirardVerdict(GirardStatus.BUDGET_EXHAUSTED, bound, checked, best)
    return GirardVerdict(GirardStatus.ALL_WITHIN_BOUND, bound, checked, best)


# Seeds ------------------------------------------------------------------------------


def random_zero_sum_free(group: FiniteAbelianGroup, length: int, rng, attempts: int = 1000) -> Sequence:
    """A zero-sum free sequence of the given length built by random greedy extension.

    These are synthetic test seeds, not drawn from any published seed set.
    """
    for _ in range(attempts):
        frontier = SearchFrontier.empty(group)
        elements = []
        while len(elements) < length and len(frontier.allowed):
            g = int(frontier.allowed[rng.randrange(len(frontier.allowed))])
            elements.append(g)
            frontier = _sca(group, frontier.allowed, frontier.forbidden, g)
        if len(elements) == length:
            return Sequence.from_elements(group, elements)
    raise ValueError(f"no zero-sum free sequence of length {length} found in {attempts} attempts")


def random_automorphism(group: FiniteAbelianGroup, rng, steps: int | None = None) -> np.ndarray:
    """Element permutation ``phi`` (``phi[a]`` is the image of ``a``) of a random automorphism.

    Composes random unit rescalings of one coordinate, swaps of coordinates
    with equal orders and transvections ``x_i += c * (n_i / gcd(n_i, n_j)) * x_j``.
    Each step is invertible and additive, so the result is an automorphism.
    """
    orders = group.orders
    k = len(orders)
    coords = group.coords.copy()
    if steps is None:
        steps = 4 * k * k
    for _ in range(steps if k else 0):
        i = rng.randrange(k)
        j = rng.randrange(k)
        n_i = orders[i]
        kind = rng.randrange(3)
        if kind == 0:
            units = [u for u in range(1, n_i) if math.gcd(u, n_i) == 1] or [1]
            coords[:, i] = coords[:, i] * rng.choice(units) % n_i
        elif kind == 1 and i != j and orders[j] == n_i:
            coords[:, [i, j]] = coords[:, [j, i]]
        elif i != j:
            c = rng.randrange(n_i) * (n_i // math.gcd(n_i, orders[j]))
            coords[:, i] = (coords[:, i] + c * coords[:, j]) % n_i
    return group.encode_many(coords)


def automorphic_images(seq: Sequence, count: int, rng) -> list[Sequence]:
    """``count`` images of ``seq`` under independent random automorphisms.

    Images keep the length, the cross number and zero-sum freeness, which makes
    them structured test seeds when random greedy sequences are too short.
    """
    out = []
    for _ in range(count):
        phi = random_automorphism(seq.group, rng)
        out.append(Sequence(seq.group, {int(phi[g]): m for g, m in seq.counts().items()}))
    return out
