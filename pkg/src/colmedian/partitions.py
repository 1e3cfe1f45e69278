"""Partition hints that steer the solver.

Two sources: a biased-coin sampler (each facility lands in the candidate
side A with probability eps/ell^3) and a deterministic covering family.
The family guarantees that for every disjoint (A0, B0) with |A0| <= ell and
|B0| <= r some emitted partition has A0 on the A side and B0 on the B side.

The deterministic construction hashes the universe with the classic
prime-multiplier family x -> ((a*x) mod p) mod (ell+r)^2 and composes each
hash with every two-coloring that marks at most ell buckets as A.  Only the
occupied buckets are colored: colorings that differ on empty buckets induce
the same partition, so nothing is lost and the emitted count stays within
the p * sum_i C((ell+r)^2, i) bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetError, ParameterError

DEFAULT_PAIR_BUDGET = 2_000_000


@dataclass(frozen=True)
class Partition:
    """A bipartition of the facility universe into candidate and support sides."""

    a_side: frozenset[int]
    b_side: frozenset[int]


@dataclass(frozen=True)
class FamilyParams:
    universe_size: int
    ell: int
    support_bound: int  # r: largest support the family must respect

    def __post_init__(self):
        if self.universe_size < 0:
            raise ParameterError("universe size must be non-negative")
        if self.ell < 0:
            raise ParameterError("ell must be non-negative")
        if self.support_bound < self.ell:
            raise ParameterError("support bound must be at least ell")


def support_bound_for(ell: int, eps: float) -> int:
    """r = ceil(6*ell^3/eps) + ell, the support-size cap the solver uses."""
    if eps <= 0:
        raise ParameterError("eps must be positive")
    if ell == 0:
        return 0
    return math.ceil(6 * ell**3 / eps) + ell


def sample_partition(
    params: FamilyParams, eps: float, rng: np.random.Generator
) -> Partition:
    """One biased-coin partition: A with probability min(1, eps/ell^3)."""
    n = params.universe_size
    if params.ell == 0:
        return Partition(frozenset(), frozenset(range(n)))
    p = min(1.0, eps / params.ell**3)
    coins = rng.random(n) < p
    a = frozenset(int(x) for x in np.nonzero(coins)[0])
    b = frozenset(range(n)) - a
    return Partition(a, b)


def _smallest_prime_above(n: int) -> int:
    """Smallest prime in (n, 2n] (Bertrand guarantees one exists)."""
    candidate = n + 1
    while True:
        if candidate >= 2 and all(
            candidate % q for q in range(2, int(math.isqrt(candidate)) + 1)
        ):
            return candidate
        candidate += 1


def deterministic_family(params: FamilyParams) -> Iterator[Partition]:
    """Lazily emit the covering family; duplicates across multipliers allowed."""
    n = params.universe_size
    ell = params.ell
    if n == 0:
        return
    universe = frozenset(range(n))
    if ell == 0:
        yield Partition(frozenset(), universe)
        return
    k = ell + params.support_bound
    buckets = k * k
    p = _smallest_prime_above(n)
    for a in range(1, p):
        bucket_of = [((a * x) % p) % buckets for x in range(n)]
        groups: dict[int, list[int]] = {}
        for x, b in enumerate(bucket_of):
            groups.setdefault(b, []).append(x)
        occupied = sorted(groups)
        for size in range(min(ell, len(occupied)) + 1):
            for chosen in combinations(occupied, size):
                a_side = frozenset(x for b in chosen for x in groups[b])
                yield Partition(a_side, universe - a_side)


def family_size_bound(params: FamilyParams) -> int:
    """Upper bound on the emitted family size: p * #colorings <= 2n * sum C."""
    n, ell = params.universe_size, params.ell
    if n == 0:
        return 0
    if ell == 0:
        return 1
    buckets = (ell + params.support_bound) ** 2
    colorings = sum(math.comb(buckets, i) for i in range(ell + 1))
    return (_smallest_prime_above(n) - 1) * colorings


def _coverage_pair_count(n: int, ell: int, r: int) -> int:
    total = 0
    for i in range(min(ell, n) + 1):
        for j in range(min(r, n - i) + 1):
            total += math.comb(n, i) * math.comb(n - i, j)
    return total


def verify_family_coverage(
    family: Iterable[Partition],
    params: FamilyParams,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
) -> bool:
    """Exhaustively check the covering contract of a partition family.

    True iff every disjoint pair (A0, B0) with |A0| <= ell, |B0| <= r is
    covered by some family member.  Refuses (BudgetError) when the number of
    pairs exceeds pair_budget.
    """
    n, ell, r = params.universe_size, params.ell, params.support_bound
    pairs = _coverage_pair_count(n, ell, r)
    if pairs > pair_budget:
        raise BudgetError(pairs, pair_budget)

    members = list(family)
    if n == 0:
        return True
    if not members:
        return False
    fam_a = np.zeros((len(members), n), dtype=bool)
    for q, part in enumerate(members):
        fam_a[q, list(part.a_side)] = True
    fam_b = ~fam_a

    for i in range(min(ell, n) + 1):
        a_sets = list(combinations(range(n), i))
        cov_a = (
            np.ones((len(members), 1), dtype=bool)
            if i == 0
            else fam_a[:, np.array(a_sets)].all(axis=2)
        )
        a_mask = np.zeros((len(a_sets), n), dtype=np.float32)
        for t, s in enumerate(a_sets):
            a_mask[t, list(s)] = 1.0
        for j in range(min(r, n - i) + 1):
            b_sets = list(combinations(range(n), j))
            if not b_sets:
                continue
            cov_b = (
                np.ones((len(members), 1), dtype=bool)
                if j == 0
                else fam_b[:, np.array(b_sets)].all(axis=2)
            )
            covered = cov_a.T.astype(np.float32) @ cov_b.astype(np.float32)
            b_mask = np.zeros((len(b_sets), n), dtype=np.float32)
            for t, s in enumerate(b_sets):
                b_mask[t, list(s)] = 1.0
            overlap = a_mask @ b_mask.T  # >0 where A0 and B0 intersect
            if not np.all((covered > 0) | (overlap > 0)):
                return False
    return True
