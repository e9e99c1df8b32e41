"""Subsets of Z/nZ viewed as vertices of a regular n-gon.

Provides the rotate-apart decision procedures (can translated copies of
given subsets be made pairwise disjoint?), the counting guarantees that make
many instances trivially solvable, and the exact algebraic certificates:
integer polynomial representations, cyclotomic polynomials and d-balance.

Everything is exact integer arithmetic; no floating-point roots of unity
appear anywhere.  A "none" answer from a search is a proof of impossibility,
not a failed search: bounded searches that give up raise
SearchBudgetExceeded instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

DEFAULT_FAMILY_BUDGET = 2_000_000  # backtracking node budget


class SearchBudgetExceeded(RuntimeError):
    """A bounded search gave up; absence of a witness was not proven."""


@dataclass(frozen=True)
class NGonSet:
    """A subset of Z/nZ, all residues reduced."""

    n: int
    members: frozenset[int]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "members", frozenset(x % self.n for x in self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def shift(self, v: int) -> "NGonSet":
        return NGonSet(self.n, frozenset((x + v) % self.n for x in self.members))

    def negate(self) -> "NGonSet":
        return NGonSet(self.n, frozenset(-x % self.n for x in self.members))

    def mask(self) -> int:
        m = 0
        for x in self.members:
            m |= 1 << x
        return m


def ngon_set(n: int, members: Iterable[int]) -> NGonSet:
    return NGonSet(n, frozenset(members))


def _rotate_mask(mask: int, v: int, n: int, full: int) -> int:
    v %= n
    return ((mask << v) | (mask >> (n - v))) & full if v else mask


# ---------------------------------------------------------------------------
# rotating two sets apart


def rotate_apart_pair(s: NGonSet, t: NGonSet) -> Optional[int]:
    """Smallest v with (s+v) disjoint from t, or None if no rotation works.

    All n rotations are tried, so None is a proof of impossibility.
    """
    if s.n != t.n:
        raise ValueError(f"modulus mismatch: {s.n} vs {t.n}")
    n = s.n
    full = (1 << n) - 1
    sm, tm = s.mask(), t.mask()
    for v in range(n):
        if _rotate_mask(sm, v, n, full) & tm == 0:
            return v
    return None


def lemma38_guarantee(s1: int, s2: int, c: int, n: int) -> bool:
    """Sufficient size condition for two sets to be rotatable apart.

    s1, s2 are the set sizes and c the size of their intersection; the
    event/cause count shows a separating rotation exists when
    s1*s2 < n + c - 1.
    """
    return s1 * s2 < n + c - 1


def lemma311_guarantee(sizes: Sequence[int], n: int) -> bool:
    """Sufficient condition for a family of b >= 2 sets to be rotatable apart.

    Requires every size >= 2.  True iff (b-1)*s^2 < n*b^2 (s = total size,
    evaluated in integers, so exactly) and additionally b <= 2, or all sizes
    equal, or s - b <= 21.
    """
    b = len(sizes)
    if b < 2:
        raise ValueError("need at least two sets")
    if any(sz < 2 for sz in sizes):
        raise ValueError("all sizes must be at least 2")
    s = sum(sizes)
    if not (b - 1) * s * s < n * b * b:
        return False
    return b <= 2 or len(set(sizes)) == 1 or s - b <= 21


def separate_masks(
    masks: Sequence[int], n: int, budget: int = DEFAULT_FAMILY_BUDGET
) -> Optional[list[int]]:
    """Core family search on bitmasks: rotations making all masks disjoint.

    The first mask is pinned at rotation 0 (rotating every set equally is a
    symmetry), the remaining sets are placed largest first, and a branch is
    cut as soon as a candidate rotation overlaps the accumulated union -- a
    placed overlap can never be repaired later, so the pruning is sound and
    a completed search that found nothing proves there is nothing.  Raises
    SearchBudgetExceeded after `budget` nodes.
    """
    b = len(masks)
    if b == 0:
        return []
    if sum(m.bit_count() for m in masks) > n:
        return None  # pairwise disjoint translates cannot exceed n points
    full = (1 << n) - 1
    all_rots = [
        [_rotate_mask(m, v, n, full) for v in range(n)] for m in masks
    ]
    anchor = max(range(b), key=lambda i: masks[i].bit_count())
    rotations = [0] * b
    nodes = 0

    def place(acc: int, remaining: tuple[int, ...]) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(
                f"family search exceeded {budget} nodes (n={n}, b={b})"
            )
        if not remaining:
            return True
        # most-constrained set first: fewest non-overlapping rotations
        best_i = -1
        best_opts: list[int] = []
        for i in remaining:
            opts = [v for v, rot in enumerate(all_rots[i]) if rot & acc == 0]
            if best_i < 0 or len(opts) < len(best_opts):
                best_i, best_opts = i, opts
                if not opts:
                    return False
        rest = tuple(i for i in remaining if i != best_i)
        for v in best_opts:
            rotations[best_i] = v
            if place(acc | all_rots[best_i][v], rest):
                return True
        return False

    remaining = tuple(i for i in range(b) if i != anchor)
    if place(masks[anchor], remaining):
        shift = rotations[0]
        return [(v - shift) % n for v in rotations]
    return None


def rotate_apart_family(
    sets: Sequence[NGonSet], budget: int = DEFAULT_FAMILY_BUDGET
) -> Optional[list[int]]:
    """Rotations r_0=0, r_1, ..., r_{b-1} making the sets pairwise disjoint.

    Returns None only when the backtracking ran to completion, which proves
    no such rotations exist; if the node budget interrupts the search a
    SearchBudgetExceeded is raised ("unknown").
    """
    if not sets:
        return []
    n = sets[0].n
    for s in sets:
        if s.n != n:
            raise ValueError(f"modulus mismatch: {s.n} vs {n}")
    result = separate_masks([s.mask() for s in sets], n, budget)
    if result is None:
        return None
    shift = result[0]
    return [(v - shift) % n for v in result]


# ---------------------------------------------------------------------------
# integer polynomials and cyclotomic certificates


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial; coeffs[i] is the coefficient of x^i."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "IntPoly") -> "IntPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return IntPoly(tuple(out))

    def __sub__(self, other: "IntPoly") -> "IntPoly":
        return self + IntPoly(tuple(-x for x in other.coeffs))

    def __mul__(self, other: "IntPoly") -> "IntPoly":
        if self.is_zero() or other.is_zero():
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return IntPoly(tuple(out))

    def divmod_exact_lead(self, den: "IntPoly") -> tuple["IntPoly", "IntPoly"]:
        """Long division; valid here because every divisor used is monic."""
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if abs(den.coeffs[-1]) != 1:
            raise ValueError("divisor must be monic (up to sign)")
        lead = den.coeffs[-1]
        rem = list(self.coeffs)
        dn = len(den.coeffs)
        if len(rem) < dn:
            return IntPoly(()), IntPoly(tuple(rem))
        quot = [0] * (len(rem) - dn + 1)
        for k in range(len(rem) - dn, -1, -1):
            q = rem[k + dn - 1] // lead
            if q:
                quot[k] = q
                for j, y in enumerate(den.coeffs):
                    rem[k + j] -= q * y
        return IntPoly(tuple(quot)), IntPoly(tuple(rem))

    def divides(self, other: "IntPoly") -> bool:
        _, rem = other.divmod_exact_lead(self)
        return rem.is_zero()


def poly_from_set(s: NGonSet) -> IntPoly:
    """Polynomial representation: sum of x^i over the members."""
    if not s.members:
        return IntPoly(())
    out = [0] * (max(s.members) + 1)
    for i in s.members:
        out[i] = 1
    return IntPoly(tuple(out))


def x_power_minus_one(n: int) -> IntPoly:
    return IntPoly(tuple([-1] + [0] * (n - 1) + [1]))


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> IntPoly:
    """n-th cyclotomic polynomial by repeated exact division.

    x^n - 1 is divided by C_d for every proper divisor d of n; the result is
    exact in Z[x] and has degree totient(n).
    """
    if n < 1:
        raise ValueError("n must be positive")
    poly = x_power_minus_one(n)
    for d in range(1, n):
        if n % d == 0:
            quot, rem = poly.divmod_exact_lead(cyclotomic(d))
            if not rem.is_zero():
                raise AssertionError(f"inexact cyclotomic division at n={n}, d={d}")
            poly = quot
    return poly


def is_d_balanced(s: NGonSet, d: int) -> bool:
    """Whether the set's polynomial vanishes at the d-th power of a
    primitive n-th root of unity.

    That power is a primitive m-th root of unity for m = n/gcd(n,d), so the
    test is exact divisibility of S(x) by the m-th cyclotomic polynomial.
    """
    n = s.n
    if not 1 <= d < n:
        raise ValueError(f"need 1 <= d < n, got d={d}")
    if not s.members:
        return True
    m = n // math.gcd(n, d)
    return cyclotomic(m).divides(poly_from_set(s))


def perfect_sum_cover(s: NGonSet, t: NGonSet) -> bool:
    """Whether every residue has exactly one representation i+j, i in s,
    j in t.  Requires len(s)*len(t) == n."""
    if s.n != t.n:
        raise ValueError(f"modulus mismatch: {s.n} vs {t.n}")
    n = s.n
    if len(s) * len(t) != n:
        raise ValueError(f"size product {len(s) * len(t)} must equal n={n}")
    counts = [0] * n
    for i in s.members:
        for j in t.members:
            counts[(i + j) % n] += 1
    return all(k == 1 for k in counts)


def is_regular_subpolygon(s: NGonSet) -> Optional[int]:
    """m if the set is a coset of the m-element subgroup of Z/nZ, else None."""
    m = len(s)
    if m == 0 or s.n % m != 0:
        return None
    step = s.n // m
    a = min(s.members)
    if s.members == frozenset((a + i * step) % s.n for i in range(m)):
        return m
    return None


def internal_distances(s: NGonSet) -> set[int]:
    """Set of positive internal distances of the set on the n-gon."""
    out = set()
    members = sorted(s.members)
    for i, x in enumerate(members):
        for y in members[i + 1 :]:
            d = (y - x) % s.n
            out.add(min(d, s.n - d))
    return out
