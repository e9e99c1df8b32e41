import math
import random
from fractions import Fraction

import pytest

from equisquares.core import (
    ElementaryMove,
    MoveSequence,
    Position,
    PositionArray,
    SquareState,
    apply_move,
    avg_shuffles,
    avg_shuffles_exact,
    col_profile,
    concat,
    format_square,
    from_rank,
    h_move,
    log2_ryser_latin_bound,
    log2_state_count,
    normalize,
    parse_square,
    position_set,
    row_profile,
    sequence_from_records,
    sequence_to_records,
    shuffle_lower_bound,
    state_count,
    v_move,
)


def random_state(n, rng):
    digits = [d for d in range(n) for _ in range(n)]
    rng.shuffle(digits)
    return SquareState(n, digits)


def random_sequence(n, length, rng):
    moves = []
    axis = rng.choice("HV")
    for _ in range(length):
        moves.append(
            ElementaryMove(axis, tuple(rng.randrange(n) for _ in range(n)))
        )
        axis = "V" if axis == "H" else "H"
    return MoveSequence(tuple(moves))


class TestApplyMove:
    def test_zero_move_is_identity(self):
        m = h_move(5, {})
        for c in range(5):
            for r in range(5):
                assert apply_move(m, Position(c, r)) == Position(c, r)

    def test_h_plus_one_convention(self):
        # offset +1 on row 0 sends (0,0) one column "left", i.e. to (1,0)
        m = h_move(2, {0: 1})
        assert apply_move(m, Position(0, 0)) == Position(1, 0)
        assert apply_move(m, Position(1, 0)) == Position(0, 0)
        assert apply_move(m, Position(0, 1)) == Position(0, 1)

    def test_v_plus_one_convention(self):
        m = v_move(3, {2: 1})
        assert apply_move(m, Position(2, 2)) == Position(2, 0)
        assert apply_move(m, Position(2, 0)) == Position(2, 1)
        assert apply_move(m, Position(0, 0)) == Position(0, 0)

    def test_move_is_bijection_and_inverse_cancels(self):
        rng = random.Random(7)
        for n in (2, 3, 5, 8):
            for _ in range(20):
                axis = rng.choice("HV")
                m = ElementaryMove(axis, tuple(rng.randrange(n) for _ in range(n)))
                cells = [Position(c, r) for c in range(n) for r in range(n)]
                images = [apply_move(m, p) for p in cells]
                assert len(set(images)) == n * n
                inv = m.inverse()
                assert all(apply_move(inv, q) == p for p, q in zip(cells, images))

    def test_size_mismatch_rejected(self):
        m = h_move(3, {0: 1})
        with pytest.raises(ValueError):
            apply_move(m, Position(4, 0))
        state = SquareState(2, [0, 0, 1, 1])
        with pytest.raises(ValueError):
            state.apply(m)


class TestNormalize:
    def test_inverse_pair_cancels(self):
        n = 4
        seq = MoveSequence((h_move(n, [1] * n), h_move(n, [-1] * n)))
        assert normalize(seq).moves == ()

    def test_hvhvh_is_two_and_a_half_shuffles(self):
        n = 3
        moves = []
        for axis in "HVHVH":
            moves.append(ElementaryMove(axis, (1, 2, 0)))
        seq = MoveSequence(tuple(moves))
        assert normalize(seq).shuffle_halves == 5
        assert normalize(seq).shuffle_text() == "2½"

    def test_three_concatenated_blocks_collapse(self):
        # three 4 1/2-shuffle blocks, each starting and ending with H,
        # concatenate to 12 1/2 shuffles after merging the two junctions
        n = 4
        rng = random.Random(1)
        block = []
        for axis in "HVHVHVHVH":
            block.append(
                ElementaryMove(axis, tuple(rng.randrange(1, n) for _ in range(n)))
            )
        seq = MoveSequence(tuple(block * 3))
        norm = normalize(seq)
        assert norm.shuffle_halves == 25
        assert norm.shuffle_text() == "12½"

    def test_normalize_preserves_realized_permutation(self):
        rng = random.Random(13)
        for n in (2, 3, 4, 5, 6):
            seq = random_sequence(n, 7, rng)
            doubled = MoveSequence(seq.moves + seq.inverse().moves + seq.moves)
            norm = normalize(doubled)
            for c in range(n):
                for r in range(n):
                    p = Position(c, r)
                    assert doubled.apply_position(p) == norm.apply_position(p)
            for a, b in zip(norm.moves, norm.moves[1:]):
                assert a.axis != b.axis

    def test_random_cells_large_n(self):
        rng = random.Random(99)
        n = 17
        seq = random_sequence(n, 9, rng)
        withzero = MoveSequence(
            seq.moves[:3] + (h_move(n, {}), v_move(n, {})) + seq.moves[3:]
        )
        norm = normalize(withzero)
        for _ in range(50):
            p = Position(rng.randrange(n), rng.randrange(n))
            assert withzero.apply_position(p) == norm.apply_position(p)


class TestCounts:
    def test_state_count_small(self):
        # all equi-2-squares: choose 2 of 4 cells for digit 0
        assert state_count(2) == 12
        assert math.isclose(log2_state_count(2), math.log2(12), abs_tol=1e-9)

    def test_table_values(self):
        assert abs(log2_state_count(8) - 188.900) <= 0.001
        assert abs(log2_ryser_latin_bound(16) - 392.004) <= 0.001

    def test_rejects_n_below_2(self):
        for f in (state_count, log2_state_count, shuffle_lower_bound):
            with pytest.raises(ValueError):
                f(1)

    def test_shuffle_lower_bound(self):
        assert shuffle_lower_bound(2) == 1
        assert shuffle_lower_bound(30) == 16
        for n in range(3, 101, 2):
            assert shuffle_lower_bound(n) == (n + 1) // 2

    def test_avg_shuffles(self):
        assert avg_shuffles_exact(2) == Fraction(4, 3)
        assert avg_shuffles_exact(3) == Fraction(729, 504)
        assert math.isclose(avg_shuffles(3), 729 / 504, rel_tol=1e-12)
        sqrt_e = math.exp(0.5)
        last = 1.0
        for n in (2, 3, 5, 9, 17, 33, 65, 129):
            val = avg_shuffles(n)
            assert last < val < sqrt_e
            last = val


class TestProfiles:
    def test_v_graph_profile(self):
        n = 5
        s = position_set(n, [(c, r) for r, c in enumerate([2, 0, 4, 1, 3])])
        prof = row_profile(s)
        assert prof.occupied == n
        assert prof.body_row_count == 0
        assert prof.free == 0
        assert prof.unique_count == n

    def test_six_set(self):
        s = position_set(6, [(0, 0), (1, 0), (1, 1), (2, 1), (0, 2), (2, 2)])
        prof = row_profile(s)
        assert prof.occupied == 3
        assert prof.body_row_count == 3
        assert prof.free == 3
        assert prof.unique_count == 0
        assert prof.body_size == 6
        cols = col_profile(s)
        assert cols.occupied == 3

    def test_empty_set(self):
        s = position_set(4, [])
        prof = row_profile(s)
        assert prof.occupied == 0
        assert prof.free == 4


class TestStateAndText:
    def test_round_trip(self):
        rng = random.Random(5)
        for n in (2, 3, 7, 11):
            state = random_state(n, rng)
            assert parse_square(format_square(state)) == state

    def test_layout_orientation(self):
        # bottom line is row 0 and its rightmost token is column 0
        text = "3 2 1\n1 0 2\n0 1 3\n"
        with pytest.raises(ValueError):
            parse_square(text)  # not an equi-square (digit 3 used twice... shape ok)
        text = "2 2 1\n1 0 2\n0 1 0\n"
        state = parse_square(text)
        assert state.digit_at(0, 0) == 0
        assert state.digit_at(2, 0) == 0
        assert state.digit_at(0, 2) == 1
        assert state.digit_at(2, 2) == 2

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            parse_square("0 1\n0 1 1\n")
        with pytest.raises(ValueError):
            parse_square("0 1 1\n0 1 1\n")  # 2 lines of 3 tokens

    def test_multiplicity_error(self):
        with pytest.raises(ValueError):
            SquareState(2, [0, 0, 0, 1])
        with pytest.raises(ValueError):
            SquareState(2, [0, 0, 2, 1])

    def test_digit_multiset_invariant_under_moves(self):
        rng = random.Random(3)
        for n in (2, 4, 6):
            state = random_state(n, rng)
            seq = random_sequence(n, 6, rng)
            moved = state.apply(seq)
            assert sorted(moved.digits) == sorted(state.digits)
            back = moved.apply(seq.inverse())
            assert back == state

    def test_serialization_round_trip(self):
        rng = random.Random(11)
        seq = random_sequence(5, 4, rng)
        records = sequence_to_records(seq)
        assert sequence_from_records(records) == seq

    def test_concat_and_from_rank(self):
        n = 3
        a = MoveSequence((h_move(n, {0: 1}),))
        b = MoveSequence((v_move(n, {0: 1}),))
        assert concat(a, b).shuffle_halves == 2
        assert from_rank(5, 3) == Position(2, 1)
