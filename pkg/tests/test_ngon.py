import random
from itertools import combinations

import pytest

from equisquares.ngon import (
    IntPoly,
    SearchBudgetExceeded,
    cyclotomic,
    internal_distances,
    is_d_balanced,
    is_regular_subpolygon,
    lemma311_guarantee,
    lemma38_guarantee,
    ngon_set,
    perfect_sum_cover,
    poly_from_set,
    rotate_apart_family,
    rotate_apart_pair,
    totient,
    x_power_minus_one,
)

# the inseparable pair living in the 36-gon, used in several checks below
S36 = ngon_set(36, [25, 24, 13, 12, 1, 0])
T36 = ngon_set(36, [10, 8, 6, 4, 2, 0])


def apart(s, t, v):
    return not (s.shift(v).members & t.members)


class TestPair:
    def test_singletons(self):
        s = ngon_set(2, [0])
        assert rotate_apart_pair(s, s) == 1

    def test_paper_pair_inseparable(self):
        assert rotate_apart_pair(S36, T36) is None

    def test_guaranteed_small_product(self):
        s, t = ngon_set(5, [0, 1]), ngon_set(5, [0, 2])
        v = rotate_apart_pair(s, t)
        assert v is not None and apart(s, t, v)
        assert lemma38_guarantee(2, 2, len(s.members & t.members), 5)

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            rotate_apart_pair(ngon_set(4, [0]), ngon_set(5, [0]))

    def test_none_matches_distance_oracle(self):
        # for size products equal to n, inseparable pairs are exactly the
        # pairs sharing no positive internal distance
        for n, sizes in ((6, (2, 3)), (8, (2, 4)), (9, (3, 3)), (12, (3, 4))):
            a, b = sizes
            universe = list(range(1, n))
            for s_rest in combinations(universe, a - 1):
                s = ngon_set(n, (0,) + s_rest)
                for t_rest in combinations(universe, b - 1):
                    t = ngon_set(n, (0,) + t_rest)
                    separable = rotate_apart_pair(s, t) is not None
                    shared = internal_distances(s) & internal_distances(t)
                    assert separable == bool(shared)


class TestGuarantees:
    def test_lemma38_boundary(self):
        assert not lemma38_guarantee(2, 2, 1, 4)  # 4 < 4 fails

    def test_lemma311_exact_rationals(self):
        assert not lemma311_guarantee((2, 2, 2), 8)  # 8 < 8 fails
        assert lemma311_guarantee((4, 4, 4), 33)  # 32 < 33
        assert lemma311_guarantee((2, 3), 7)
        with pytest.raises(ValueError):
            lemma311_guarantee((1, 2), 9)


class TestFamily:
    def test_three_2_sets_in_8_gon(self):
        rng = random.Random(0)
        for _ in range(200):
            sets = [ngon_set(8, rng.sample(range(8), 2)) for _ in range(3)]
            rot = rotate_apart_family(sets)
            assert rot is not None and rot[0] == 0
            shifted = [s.shift(v).members for s, v in zip(sets, rot)]
            for a, b in combinations(shifted, 2):
                assert not (a & b)

    def test_three_4_sets_in_32_gon(self):
        rng = random.Random(1)
        for _ in range(100):
            sets = [ngon_set(32, rng.sample(range(32), 4)) for _ in range(3)]
            rot = rotate_apart_family(sets)
            assert rot is not None
            shifted = [s.shift(v).members for s, v in zip(sets, rot)]
            for a, b in combinations(shifted, 2):
                assert not (a & b)

    def test_subpolygon_with_transversal_is_none(self):
        # a regular 3-gon inside the 15-gon against a complete transversal
        # of its cosets can never be shifted off it
        s = ngon_set(15, [0, 5, 10])
        t = ngon_set(15, [0, 1, 2, 3, 4])
        assert rotate_apart_family([s, t]) is None
        assert rotate_apart_pair(s, t) is None

    def test_budget_raises(self):
        # placing b sets takes at least b+1 search nodes, so budget 2 must trip
        rng = random.Random(2)
        sets = [ngon_set(30, rng.sample(range(30), 3)) for _ in range(6)]
        with pytest.raises(SearchBudgetExceeded):
            rotate_apart_family(sets, budget=2)

    def test_oversized_family_is_impossible(self):
        sets = [ngon_set(5, [0, 1, 2]) for _ in range(2)]
        assert rotate_apart_family(sets) is None


class TestCyclotomic:
    def test_first_few(self):
        assert cyclotomic(1) == IntPoly((-1, 1))
        assert cyclotomic(2) == IntPoly((1, 1))
        assert cyclotomic(3) == IntPoly((1, 1, 1))
        assert cyclotomic(6) == IntPoly((1, -1, 1))

    def test_c36(self):
        expect = [0] * 13
        expect[0], expect[6], expect[12] = 1, -1, 1
        assert cyclotomic(36) == IntPoly(tuple(expect))

    def test_degree_is_totient(self):
        for n in range(1, 201):
            assert cyclotomic(n).degree == totient(n)

    def test_product_over_divisors(self):
        for n in range(1, 101):
            prod = IntPoly((1,))
            for d in range(1, n + 1):
                if n % d == 0:
                    prod = prod * cyclotomic(d)
            assert prod == x_power_minus_one(n)


class TestBalance:
    def test_paper_six_set_is_1_balanced(self):
        assert is_d_balanced(S36, 1)

    def test_singleton_never_balanced(self):
        for n in (4, 9, 12):
            s = ngon_set(n, [3 % n])
            assert all(not is_d_balanced(s, d) for d in range(1, n))

    def test_regular_p_gon_in_p_squared(self):
        for p in (2, 3, 5):
            s = ngon_set(p * p, [i * p for i in range(p)])
            assert is_d_balanced(s, 1)

    def test_balance_agrees_with_root_evaluation(self):
        # numeric cross-check on a complex primitive root
        import cmath

        rng = random.Random(3)
        for _ in range(100):
            n = rng.randrange(3, 16)
            k = rng.randrange(2, n)
            s = ngon_set(n, rng.sample(range(n), k))
            d = rng.randrange(1, n)
            value = sum(cmath.exp(2j * cmath.pi * d * i / n) for i in s.members)
            assert is_d_balanced(s, d) == (abs(value) < 1e-9)


class TestSumCoverAndSubpolygon:
    def test_sum_cover_examples(self):
        assert perfect_sum_cover(ngon_set(4, [0, 1]), ngon_set(4, [0, 2]))
        assert not perfect_sum_cover(ngon_set(4, [0, 1]), ngon_set(4, [0, 1]))
        s = ngon_set(15, [0, 3, 6, 9, 12])
        t = ngon_set(15, [0, 1, 2])
        assert perfect_sum_cover(s, t)

    def test_sum_cover_requires_product_n(self):
        with pytest.raises(ValueError):
            perfect_sum_cover(ngon_set(5, [0, 1]), ngon_set(5, [0, 2]))

    def test_sum_cover_matches_mirror_inseparability(self):
        for n, a in ((6, 2), (8, 2), (9, 3)):
            b = n // a
            for s_rest in combinations(range(1, n), a - 1):
                s = ngon_set(n, (0,) + s_rest)
                for t_rest in combinations(range(1, n), b - 1):
                    t = ngon_set(n, (0,) + t_rest)
                    cover = perfect_sum_cover(s, t)
                    mirror = rotate_apart_pair(s.negate(), t) is None
                    assert cover == mirror

    def test_regular_subpolygon(self):
        assert is_regular_subpolygon(ngon_set(36, [0, 12, 24])) == 3
        assert is_regular_subpolygon(ngon_set(36, [1, 13, 25])) == 3
        assert is_regular_subpolygon(S36) is None
