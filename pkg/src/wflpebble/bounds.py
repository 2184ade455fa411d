"""Closed-form bounds: the classical basic bounds and the ring-profile lower bound on the WFL ratio."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable

from .graph import Graph, diameter, ring_sizes


class InternalInconsistency(AssertionError):
    pass


def basic_bounds(g: Graph) -> tuple[int, int]:
    n, d = g.n, diameter(g)
    return max(n, 2**d), (n - d) * (2**d - 1) + 1


def surplus_index_set(g: Graph, r: int) -> set[int]:
    """Rings ``1 <= j < e(r)`` too small to carry the weight forced by the peripheral vertices."""
    sizes = ring_sizes(g, r)
    e = len(sizes) - 1
    return {j for j in range(1, e) if 2 ** (e - j) > sizes[j]}


def no_surplus_index_set(g: Graph, r: int) -> set[int]:
    sizes = ring_sizes(g, r)
    e = len(sizes) - 1
    return {j for j in range(1, e + 1) if sizes[j] > 2 ** (e - j)}


def _lower_from_surplus(g: Graph, sizes: list[int]) -> Fraction:
    e = len(sizes) - 1
    extra = sum(2 ** (e - j) - sizes[j] for j in range(1, e) if 2 ** (e - j) > sizes[j])
    return Fraction(g.n - 1 + extra)


def _lower_from_excess(sizes: list[int]) -> Fraction:
    e = len(sizes) - 1
    extra = sum(sizes[j] - 2 ** (e - j) for j in range(1, e + 1) if sizes[j] > 2 ** (e - j))
    return Fraction(2**e - 1 + extra)


def theorem1_lower_bound(g: Graph, r: int) -> Fraction:
    """Lower bound on the WFL ratio of any certificate at target ``r``.

    Evaluated both as ``n-1 + sum over surplus rings`` and as
    ``2^e - 1 + sum over crowded rings``; the two must coincide.
    """
    sizes = ring_sizes(g, r)
    a, b = _lower_from_surplus(g, sizes), _lower_from_excess(sizes)
    if a != b:
        raise InternalInconsistency(f"ring-profile bounds disagree at {g.label(r)}: {a} != {b}")
    return a


def theorem1_graph_bound(g: Graph, targets: Iterable[int] | None = None) -> Fraction:
    ts = range(g.n) if targets is None else targets
    return max(theorem1_lower_bound(g, r) for r in ts)


def cube_lower_bound(d: int) -> Fraction:
    if d < 1:
        raise ValueError("d must be >= 1")
    return Fraction(sum(max(comb(d, j), 2 ** (d - j)) for j in range(1, d + 1)))


@dataclass(frozen=True)
class BoundReport:
    target: int
    eccentricity: int
    ring_profile: tuple[int, ...]
    basic_pi_lower: int
    basic_pi_upper: int
    i_sur: frozenset[int]
    i_no: frozenset[int]
    lambda_lower_eq2: Fraction
    lambda_lower_eq3: Fraction

    def __post_init__(self):
        if self.lambda_lower_eq2 != self.lambda_lower_eq3:
            raise InternalInconsistency("the two lower-bound forms disagree")
        if self.basic_pi_lower > self.basic_pi_upper:
            raise InternalInconsistency("basic bounds are inverted")


def bound_report(g: Graph, r: int) -> BoundReport:
    sizes = ring_sizes(g, r)
    lo, hi = basic_bounds(g)
    return BoundReport(
        target=r,
        eccentricity=len(sizes) - 1,
        ring_profile=tuple(sizes[1:]),
        basic_pi_lower=lo,
        basic_pi_upper=hi,
        i_sur=frozenset(surplus_index_set(g, r)),
        i_no=frozenset(no_surplus_index_set(g, r)),
        lambda_lower_eq2=_lower_from_surplus(g, sizes),
        lambda_lower_eq3=_lower_from_excess(sizes),
    )
