from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zerosum.errors import NotCyclic, RemoveAbsent, ZeroElementInSequence
from zerosum.group import FiniteAbelianGroup
from zerosum.invariants import build_corollary32, build_theorem31, k_star
from zerosum.sequence import (
    Sequence,
    SubsumSet,
    cross_number,
    forbidden_set,
    is_minimal_zero_sum,
    is_zero_sum_free,
    reconstruct,
    savchev_chen_decompose,
    sigma,
    subsums,
)

from . import oracles


def seq(group, *elements):
    return Sequence.from_elements(group, elements)


def coords_of(s):
    return [s.group.decode(g) for g in s]


# accessors -------------------------------------------------------------------


def test_length_and_multiplicity(c4):
    s = seq(c4, 1, 1, 2)
    assert len(s) == s.length == 3
    assert s.multiplicity(1) == 2 and s.multiplicity(3) == 0
    assert s.support() == [1, 2]
    assert list(s) == [1, 1, 2]


def test_push_remove(c4):
    s = Sequence(c4)
    s.push(3, 2)
    s.remove_one(3)
    assert s.counts() == {3: 1}
    s.remove_one(3)
    assert s.length == 0 and s.counts() == {}
    with pytest.raises(RemoveAbsent):
        s.remove_one(3)


@pytest.mark.parametrize("n", [3, 5, 7])
def test_minimal_construction_length(n):
    assert build_theorem31(n).sequence.length == 8 * n - 1


# sums ----------------------------------------------------------------------------


def test_sigma(c4):
    assert sigma(seq(c4, 1, 1, 2)) == 0
    assert sigma(Sequence(c4)) == 0
    assert sigma(build_theorem31(3).sequence) == 0


def test_subsums_examples(c4, c3sq):
    assert subsums(seq(c4, 1, 1)) == {1, 2}
    assert subsums(seq(c4, 1, 1, 1, 1)) == {0, 1, 2, 3}
    e1, e2 = c3sq.encode((1, 0)), c3sq.encode((0, 1))
    assert subsums(seq(c3sq, e1, e2)) == {e1, e2, c3sq.add(e1, e2)}
    assert subsums(Sequence(c4)).count == 0


def test_forbidden_examples(c4, c3sq):
    assert forbidden_set(seq(c4, 1)) == {0, 3}
    assert forbidden_set(Sequence(c4)) == {0}
    e1 = c3sq.encode((1, 0))
    assert forbidden_set(seq(c3sq, e1)) == {0, c3sq.encode((2, 0))}


def test_zero_sum_free_examples(c4):
    assert is_zero_sum_free(seq(c4, 1, 1, 1))
    assert not is_zero_sum_free(seq(c4, 1, 1, 1, 1))
    assert is_zero_sum_free(Sequence(c4))
    assert not is_zero_sum_free(seq(c4, 0))
    star = build_theorem31(3).related["S*"].sequence
    assert star.length == 22 and is_zero_sum_free(star)


def test_minimal_examples(c4):
    assert is_minimal_zero_sum(seq(c4, 1, 1, 1, 1))
    assert not is_minimal_zero_sum(seq(c4, 1, 1, 2, 2, 2))
    assert not is_minimal_zero_sum(Sequence(c4))
    assert is_minimal_zero_sum(seq(c4, 0))
    assert is_minimal_zero_sum(build_theorem31(3).sequence)


def test_cross_number_examples():
    c6 = FiniteAbelianGroup([6])
    assert cross_number(seq(c6, 1, 1, 1, 1, 1)) == Fraction(5, 6)
    assert cross_number(build_corollary32(3, 5).sequence) == Fraction(13, 3)
    g = FiniteAbelianGroup([2, 3])
    basis = Sequence(g, {g.encode((1, 0)): 1, g.encode((0, 1)): 2})
    assert cross_number(basis) == Fraction(7, 6) == k_star(g)
    with pytest.raises(ZeroElementInSequence):
        cross_number(seq(c6, 0, 1))


def prime_power_basis(group):
    """Elements of prime-power orders q_i forming a basis, with multiplicities q_i - 1."""
    out = Sequence(group)
    for j, n in enumerate(group.orders):
        m = n
        p = 2
        while m > 1:
            if m % p == 0:
                q = 1
                while m % p == 0:
                    m //= p
                    q *= p
                coords = [0] * len(group.orders)
                coords[j] = n // q
                out.push(group.encode(coords), q - 1)
            p += 1
    return out


@pytest.mark.parametrize("spec", [[6], [2, 6], [12, 18], [4, 4, 10], [30], [2, 6, 6, 6, 6]])
def test_basis_cross_number_is_k_star(spec):
    g = FiniteAbelianGroup(spec)
    basis = prime_power_basis(g)
    assert is_zero_sum_free(basis)
    assert cross_number(basis) == k_star(g)


# properties against brute force ------------------------------------------------------

spec_strategy = st.lists(st.integers(2, 8), min_size=1, max_size=3).filter(lambda s: np.prod(s) <= 64)


@st.composite
def group_and_sequence(draw, max_len=12):
    spec = draw(spec_strategy)
    g = FiniteAbelianGroup(spec)
    elems = draw(st.lists(st.integers(0, g.size - 1), max_size=max_len))
    return g, Sequence.from_elements(g, elems)


@settings(max_examples=120, deadline=None)
@given(group_and_sequence())
def test_subsums_match_brute_force(gs):
    g, s = gs
    orders = list(g.orders)
    brute = oracles.subsums(orders, coords_of(s))
    assert {g.decode(x) for x in subsums(s)} == brute
    assert is_zero_sum_free(s) == (oracles.zero(orders) not in brute)
    assert is_zero_sum_free(s) == (0 not in subsums(s))


@settings(max_examples=120, deadline=None)
@given(group_and_sequence(max_len=9))
def test_minimal_matches_definition(gs):
    g, s = gs
    assert is_minimal_zero_sum(s) == oracles.is_minimal(list(g.orders), coords_of(s))


@settings(max_examples=60, deadline=None)
@given(group_and_sequence(max_len=9))
def test_minimal_on_zero_sum_sequences(gs):
    # force sigma = 0 so the interesting branch is exercised
    g, s = gs
    s = s.extended([g.neg(sigma(s))])
    assert is_minimal_zero_sum(s) == oracles.is_minimal(list(g.orders), coords_of(s))


@settings(max_examples=80, deadline=None)
@given(group_and_sequence())
def test_forbidden_is_negated_subsums(gs):
    g, s = gs
    expected = {g.neg(x) for x in subsums(s)} | {0}
    assert forbidden_set(s).as_set() == expected


@settings(max_examples=80, deadline=None)
@given(group_and_sequence(max_len=10), st.integers(0, 10**6))
def test_incremental_subsum_update(gs, pick):
    g, s = gs
    x = pick % g.size
    before = subsums(s).as_set()
    after = subsums(s.extended([x])).as_set()
    assert after == before | {g.add(a, x) for a in before} | {x}


# Savchev-Chen ---------------------------------------------------------------------


def savchev_chen_oracle(n, elems):
    """Scan all g and all multiplier choices by direct arithmetic in Z/n."""
    for g in range(1, n):
        order = n // np.gcd(n, g)
        mults = []
        for a in elems:
            ks = [k for k in range(1, order) if k * g % n == a]
            if not ks:
                break
            mults.append(ks[0])
        else:
            mults.sort()
            m = sum(mults)
            if mults[0] == 1 and m < order:
                sums = set()
                for mask in range(1, 1 << len(elems)):
                    sums.add(sum(e for i, e in enumerate(elems) if mask >> i & 1) % n)
                if sums == {j * g % n for j in range(1, m + 1)}:
                    return g, mults
    return None


def test_savchev_chen_examples():
    c7 = FiniteAbelianGroup([7])
    assert savchev_chen_decompose(seq(c7, *[1] * 5)) == (1, [1, 1, 1, 1, 1])
    c5 = FiniteAbelianGroup([5])
    assert savchev_chen_decompose(seq(c5, *[1] * 4)) == (1, [1, 1, 1, 1])
    assert savchev_chen_oracle(7, [2, 3]) is None
    assert savchev_chen_decompose(seq(c7, 2, 3)) is None


def test_savchev_chen_not_cyclic():
    with pytest.raises(NotCyclic):
        savchev_chen_decompose(Sequence(FiniteAbelianGroup([2, 2])))


def test_savchev_chen_noncanonical_cyclic_basis():
    # C2 + C3 is cyclic; the order-6 generator (1,1) has index 4
    g = FiniteAbelianGroup([2, 3])
    gen = g.encode((1, 1))
    s = seq(g, gen, gen, gen, g.mul(2, gen))
    found = savchev_chen_decompose(s)
    assert found is not None
    assert reconstruct(g, *found) == s


@pytest.mark.parametrize("n", range(3, 9))
def test_savchev_chen_matches_oracle(n):
    from zerosum.search import iter_zero_sum_free

    g = FiniteAbelianGroup([n])
    for elems in iter_zero_sum_free(g, min_length=1):
        s = Sequence.from_elements(g, elems)
        assert savchev_chen_decompose(s) == savchev_chen_oracle(n, sorted(elems))


# text format -------------------------------------------------------------------------


def test_text_roundtrip():
    g = FiniteAbelianGroup([2, 6, 6, 6, 6])
    s = build_theorem31(3).sequence
    text = s.to_text()
    assert text.splitlines()[0] == "group: 2,6,6,6,6"
    assert Sequence.from_text(text) == s
    assert Sequence.from_text(text).to_text() == text
    sample = "group: 2,6,6,6,6\n0 0 0 0 0\n1 0 0 0 0 x4\n"
    parsed = Sequence.from_text(sample, g)
    assert parsed.counts() == {0: 1, g.encode((1, 0, 0, 0, 0)): 4}
    assert parsed.to_text() == sample


def test_text_duplicate_lines_accumulate():
    text = "group: 4\n1\n1 x2\n"
    assert Sequence.from_text(text).counts() == {1: 3}


@pytest.mark.parametrize(
    "bad",
    [
        "1 0\n",
        "group: 4\n1 2\n",
        "group: 4\n7\n",
        "group: 4\n1 x0\n",
        "group: 4\n1 xz\n",
        "group: 4\na\n",
    ],
)
def test_text_parse_errors(bad):
    with pytest.raises(ValueError):
        Sequence.from_text(bad)


def test_text_group_mismatch():
    with pytest.raises(ValueError):
        Sequence.from_text("group: 4\n1\n", FiniteAbelianGroup([2, 2]))


def test_trivial_group_sequence():
    g = FiniteAbelianGroup([])
    s = seq(g, 0, 0)
    assert s.to_text() == "group: \nx2\n"
    assert Sequence.from_text(s.to_text()) == s
    assert not is_zero_sum_free(s)
    assert is_zero_sum_free(Sequence(g))


def test_subsumset_equality(c4):
    a = SubsumSet.from_elements(c4, [1, 2])
    assert a == SubsumSet.from_elements(c4, [2, 1])
    assert a == {1, 2}
    assert 1 in a and 3 not in a and len(a) == 2
