"""Closed-form invariants (d*, k*, bounds) and explicit extremal constructions.

The builders only *state* properties of what they build; :func:`verify_claims`
recomputes each of them from scratch with the sequence primitives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any
from urllib.parse import parse_qs

from .errors import EvenOrSmallN, RankTooSmall, TrivialGroup
from .group import FiniteAbelianGroup
from .sequence import Sequence, cross_number, is_minimal_zero_sum, is_zero_sum_free


def d_star(group: FiniteAbelianGroup) -> int:
    """``sum (n_i - 1)`` over the invariant factors; 0 for the trivial group."""
    return sum(n - 1 for n in group.invariant_factors)


def k_star(group: FiniteAbelianGroup) -> Fraction:
    """``sum (q_i - 1)/q_i`` over the prime-power factors."""
    return sum((Fraction(q - 1, q) for _, q in group.primary_factors), Fraction(0))


def girard_bound(group: FiniteAbelianGroup) -> Fraction:
    """``sum (n_i - 1)/n_i`` over the invariant factors."""
    return sum((Fraction(n - 1, n) for n in group.invariant_factors), Fraction(0))


def davenport_upper_bound(group: FiniteAbelianGroup) -> float:
    """``(n_r - 1) + n_r * ln(|G| / n_r)``, the classical upper bound for ``d(G)``."""
    if group.size == 1:
        raise TrivialGroup("the upper bound is stated for nontrivial groups")
    exponent = group.invariant_factors[-1]
    if exponent == group.size:
        return float(exponent - 1)
    return (exponent - 1) + exponent * math.log(group.size / exponent)


# constructions ---------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    """A property a construction is asserted to have.

    ``kind`` is one of ``ZeroSumFree``, ``MinimalZeroSum``, ``Length``,
    ``CrossNumber`` or ``MultiplicityOfOrder``.  For the latter ``value`` is
    ``(element, order, multiplicity)``.
    """

    kind: str
    value: Any = None

    def __str__(self) -> str:
        if self.kind == "MultiplicityOfOrder":
            _, order, mult = self.value
            return f"MultiplicityOfOrder(order={order}, multiplicity={mult})"
        return self.kind if self.value is None else f"{self.kind}({self.value})"


@dataclass
class ConstructionResult:
    name: str
    sequence: Sequence
    claimed_length: int
    claimed_properties: list[Claim]
    generators: dict[str, int] = field(default_factory=dict)
    related: dict[str, ConstructionResult] = field(default_factory=dict)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.sequence.group


def _require_odd(n: int) -> None:
    if not isinstance(n, int) or n < 3 or n % 2 == 0:
        raise EvenOrSmallN(f"n must be an odd integer >= 3, got {n!r}")


def theorem31_generators(n: int) -> list[tuple[int, ...]]:
    """Coordinates of ``g_1, ..., g_12`` in ``C_2 + C_{2n}^4`` w.r.t. the standard basis."""
    _require_odd(n)
    a = (n - 1) // 2  # (n-1)/2
    b = (n + 1) // 2  # (n+1)/2
    c = (n + 3) // 2  # (n+3)/2
    p = (3 * n - 1) // 2
    q = (3 * n + 1) // 2
    s = (3 * n + 3) // 2
    return [
        (1, 1, 0, 0, 0),
        (1, 0, 1, 0, 0),
        (1, 0, 0, 1, 0),
        (1, 0, 0, 0, 1),
        (0, p, q, q, q),
        (0, p, q, p, b),
        (0, s, b, a, b),
        (0, a, b, q, a),
        (0, a, b, b, b),
        (0, q, q, b, q),
        (0, c, q, q, p),
        (1, b, a, b, q),
    ]


def theorem31_multiplicities(n: int) -> list[int]:
    return [2 * n - 2, 2 * n - 3, 2 * n - 2, 2 * n - 2] + [1] * 8


def build_theorem31(n: int, group: FiniteAbelianGroup | None = None) -> ConstructionResult:
    """The minimal zero-sum sequence ``U`` of length ``8n - 1`` over ``C_2 + C_{2n}^4``.

    ``related["S*"]`` is ``U`` with ``g_12`` removed, claimed zero-sum free.
    """
    _require_odd(n)
    if group is None:
        group = FiniteAbelianGroup([2] + [2 * n] * 4)
    gens = [group.encode(v) for v in theorem31_generators(n)]
    seq = Sequence(group)
    for g, k in zip(gens, theorem31_multiplicities(n)):
        seq.push(g, k)
    names = {f"g{i}": g for i, g in enumerate(gens, start=1)}
    length = 8 * n - 1
    star = seq.without(names["g12"])
    star_result = ConstructionResult(
        name=f"theorem31-star?n={n}",
        sequence=star,
        claimed_length=length - 1,
        claimed_properties=[Claim("Length", length - 1), Claim("ZeroSumFree")],
        generators=dict(names),
    )
    return ConstructionResult(
        name=f"theorem31?n={n}",
        sequence=seq,
        claimed_length=length,
        claimed_properties=[Claim("Length", d_star(group) + 2), Claim("MinimalZeroSum")],
        generators=names,
        related={"S*": star_result},
    )


def build_corollary32(n: int, r: int) -> ConstructionResult:
    """The zero-sum free sequence ``T = (2e_1')^{n-1} S* prod_{i>=6} e_i^{2n-1}`` over ``C_{2n}^r``.

    ``S*`` from :func:`build_theorem31` is embedded by sending the order-2 basis
    element to ``n e_1'``.
    """
    _require_odd(n)
    if not isinstance(r, int) or r < 5:
        raise RankTooSmall(f"r must be an integer >= 5, got {r!r}")
    m = 2 * n
    group = FiniteAbelianGroup([m] * r)
    pad = (0,) * (r - 5)

    def embed(v: tuple[int, ...]) -> int:
        return group.encode((n * v[0],) + tuple(v[1:]) + pad)

    seq = Sequence(group)
    names: dict[str, int] = {}
    for i, (v, k) in enumerate(zip(theorem31_generators(n), theorem31_multiplicities(n)), start=1):
        if i == 12:
            continue
        names[f"g{i}"] = g = embed(v)
        seq.push(g, k)
    two_e1 = group.encode((2,) + (0,) * (r - 1))
    names["2e1'"] = two_e1
    seq.push(two_e1, n - 1)
    for i in range(6, r + 1):
        e = group.encode(tuple(1 if j == i - 1 else 0 for j in range(r)))
        names[f"e{i}"] = e
        seq.push(e, m - 1)

    length = d_star(group) - (n - 2)
    kappa = r * Fraction(m - 1, m) + Fraction(1, m)
    return ConstructionResult(
        name=f"corollary32?n={n}&r={r}",
        sequence=seq,
        claimed_length=length,
        claimed_properties=[
            Claim("ZeroSumFree"),
            Claim("Length", length),
            Claim("MultiplicityOfOrder", (two_e1, n, n - 1)),
            Claim("CrossNumber", kappa),
        ],
        generators=names,
    )


def parse_construction(text: str) -> ConstructionResult:
    """Build a construction from ``construction:theorem31?n=5`` style names.

    ``theorem31-star`` names ``U`` with ``g_12`` removed.
    """
    if text.startswith("construction:"):
        text = text[len("construction:"):]
    name, _, query = text.partition("?")
    params = {k: v[-1] for k, v in parse_qs(query).items()}
    try:
        ints = {k: int(v) for k, v in params.items()}
    except ValueError:
        raise ValueError(f"non-integer parameter in {text!r}") from None
    try:
        if name == "theorem31":
            return build_theorem31(ints["n"])
        if name == "theorem31-star":
            return build_theorem31(ints["n"]).related["S*"]
        if name == "corollary32":
            return build_corollary32(ints["n"], ints["r"])
    except KeyError as exc:
        raise ValueError(f"missing parameter {exc.args[0]!r} for {name}") from None
    raise ValueError(f"unknown construction {name!r}")


def verify_claims(result: ConstructionResult) -> list[tuple[Claim, bool, str]]:
    """Recompute every claim of ``result``; returns ``(claim, ok, observed)`` triples."""
    seq = result.sequence
    group = seq.group
    out = []
    for claim in [Claim("ClaimedLength", result.claimed_length)] + list(result.claimed_properties):
        if claim.kind in ("Length", "ClaimedLength"):
            ok, observed = seq.length == claim.value, str(seq.length)
        elif claim.kind == "ZeroSumFree":
            z = is_zero_sum_free(seq)
            ok, observed = z, str(z)
        elif claim.kind == "MinimalZeroSum":
            z = is_minimal_zero_sum(seq)
            ok, observed = z, str(z)
        elif claim.kind == "CrossNumber":
            k = cross_number(seq)
            ok, observed = k == claim.value, str(k)
        elif claim.kind == "MultiplicityOfOrder":
            g, order, mult = claim.value
            got = (group.element_order(g), seq.multiplicity(g))
            ok, observed = got == (order, mult), f"order={got[0]}, multiplicity={got[1]}"
        else:
            raise ValueError(f"unknown claim kind {claim.kind!r}")
        out.append((claim, ok, observed))
    return out
