"""Indirection, the standard operation mode, output forcing and bias.

Indirection treats a state as an array of n-digit base-n numbers indexed by
all n-digit numbers: input digit x_k addresses the cell (k, x_k) and the
output digit y_k is whatever that cell holds.  The standard operation mode
shuffles twice, indirects once, emits, and repeats.  Because two shuffles
suffice to carry any chosen n cells orderly onto any column transversal,
the shuffle schedule can force any output sequence: force_run builds that
schedule and standard_mode_run replays it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    ElementaryMove,
    MoveSequence,
    Position,
    PositionArray,
    SquareState,
    check_square_size,
    concat,
)
from .optimize import array_onto_graph
from .transit import key_result_range


@dataclass(frozen=True)
class BaseNNumber:
    """A base-n number of exactly n digits, least significant first;
    leading zeros are kept as digits."""

    n: int
    digits: tuple[int, ...]

    def __post_init__(self):
        check_square_size(self.n)
        if len(self.digits) != self.n:
            raise ValueError(f"need exactly {self.n} digits")
        if any(not 0 <= d < self.n for d in self.digits):
            raise ValueError("digits out of range")

    @classmethod
    def from_int(cls, n: int, value: int) -> "BaseNNumber":
        if not 0 <= value < n**n:
            raise ValueError(f"value must lie in [0, {n}^{n})")
        digits = []
        for _ in range(n):
            digits.append(value % n)
            value //= n
        return cls(n, tuple(digits))

    @property
    def value(self) -> int:
        out = 0
        for d in reversed(self.digits):
            out = out * self.n + d
        return out

    def digit_string(self) -> str:
        """Most significant digit first, space separated."""
        return " ".join(str(d) for d in reversed(self.digits))


def h_indirect(state: SquareState, x: BaseNNumber) -> BaseNNumber:
    """Read digit y_k at cell (k, x_k): the input addresses one cell per
    column and the addressed cells form an H-graph."""
    if state.n != x.n:
        raise ValueError("size mismatch")
    return BaseNNumber(
        state.n, tuple(state.digit_at(k, x.digits[k]) for k in range(state.n))
    )


def v_indirect(state: SquareState, x: BaseNNumber) -> BaseNNumber:
    """Row-wise dual of h_indirect: y_k is read at cell (x_k, k)."""
    if state.n != x.n:
        raise ValueError("size mismatch")
    return BaseNNumber(
        state.n, tuple(state.digit_at(x.digits[k], k) for k in range(state.n))
    )


def general_indirect(state: SquareState, cells: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    """Wasteful variant reading an arbitrary cell list (repeats allowed);
    kept for bias experiments, with no forcing path attached."""
    return tuple(state.digit(Position(c, r)) for (c, r) in cells)


def reading_graph(x: BaseNNumber) -> PositionArray:
    """The H-graph of cells addressed by the input, in column order."""
    return PositionArray(x.n, tuple(Position(k, x.digits[k]) for k in range(x.n)))


# ---------------------------------------------------------------------------
# shuffle sources


class ShuffleSource:
    """Supplies the two HV-shuffles (four elementary moves) of one standard
    mode step."""

    def next_step(self, n: int) -> MoveSequence:
        raise NotImplementedError


class SeededShuffleSource(ShuffleSource):
    """Deterministic pseudo-random source: offsets drawn from a seeded
    generator, H,V,H,V each step."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def next_step(self, n: int) -> MoveSequence:
        moves = []
        for axis in "HVHV":
            moves.append(
                ElementaryMove(axis, tuple(self.rng.randrange(n) for _ in range(n)))
            )
        return MoveSequence(tuple(moves))


class ScheduleShuffleSource(ShuffleSource):
    """Explicit schedule: consumes four moves per step and verifies the
    H,V,H,V pattern; raises when exhausted."""

    def __init__(self, schedule: MoveSequence):
        self.moves = list(schedule.moves)
        self.at = 0

    def next_step(self, n: int) -> MoveSequence:
        if self.at + 4 > len(self.moves):
            raise ValueError("shuffle schedule exhausted")
        step = self.moves[self.at : self.at + 4]
        self.at += 4
        if [m.axis for m in step] != ["H", "V", "H", "V"]:
            raise ValueError("schedule steps must be two HV-shuffles (H,V,H,V)")
        if any(m.n != n for m in step):
            raise ValueError("schedule size mismatch")
        return MoveSequence(tuple(step))


def standard_mode_run(
    state: SquareState, inputs: Sequence[BaseNNumber], source: ShuffleSource
) -> tuple[list[BaseNNumber], SquareState]:
    """Per input: two HV-shuffles from the source, one H-indirection, emit.
    Returns the outputs and the final state."""
    outputs = []
    for x in inputs:
        state = state.apply(source.next_step(state.n))
        outputs.append(h_indirect(state, x))
    return outputs, state


# ---------------------------------------------------------------------------
# output forcing


def force_shuffles(
    state: SquareState, x: BaseNNumber, y: BaseNNumber
) -> MoveSequence:
    """Two HV-shuffles after which indirecting x reads exactly y.

    The digits of y are collected from the square (digit d is needed as
    often as it appears in y, never more than its n cells), ordered into an
    array spelling y, and carried orderly onto the H-graph addressed by x.
    """
    n = state.n
    if not key_result_range(n):
        raise ValueError(f"forcing is guaranteed for 2..34 and 37, got {n}")
    if x.n != n or y.n != n:
        raise ValueError("size mismatch")
    by_digit: dict[int, list[Position]] = {}
    needed: dict[int, int] = {}
    for d in y.digits:
        needed[d] = needed.get(d, 0) + 1
    for d, count in needed.items():
        cells = state.cells_of_digit(d)
        by_digit[d] = cells[:count]
    taken = {d: 0 for d in needed}
    array_cells = []
    for k in range(n):
        d = y.digits[k]
        array_cells.append(by_digit[d][taken[d]])
        taken[d] += 1
    array = PositionArray(n, tuple(array_cells))
    seq = array_onto_graph(array, reading_graph(x))
    assert h_indirect(state.apply(seq), x) == y
    return seq


def force_run(
    state: SquareState,
    inputs: Sequence[BaseNNumber],
    targets: Sequence[BaseNNumber],
) -> MoveSequence:
    """Schedule of 2*l shuffles turning the input sequence into the target
    sequence under the standard operation mode."""
    if len(inputs) != len(targets):
        raise ValueError("inputs and targets must have equal length")
    steps = []
    for x, y in zip(inputs, targets):
        step = force_shuffles(state, x, y)
        steps.append(step)
        state = state.apply(step)
    return concat(*steps) if steps else MoveSequence(())


# ---------------------------------------------------------------------------
# intrinsic bias


@dataclass(frozen=True)
class Bias:
    """Expected color counts of a random n-cell set: e colors present,
    b = n - e missing, and b_n the missing-digit expectation of a uniform
    n-digit base-n string."""

    n: int
    e: Fraction
    b: Fraction
    b_n: Fraction


def bias(n: int) -> Bias:
    """Exact inclusion-exclusion evaluation of the expected number of
    colors in an n-set, its complement bias, and the plain digit bias
    n*((n-1)/n)^n."""
    check_square_size(n)
    total = Fraction(0)
    denom = math.comb(n * n, n)
    for r in range(1, n + 1):
        inner = sum(
            (-1) ** k * math.comb(r, k) * math.comb((r - k) * n, n) for k in range(r)
        )
        total += r * Fraction(math.comb(n, r) * inner, denom)
    b_n = n * Fraction(n - 1, n) ** n
    return Bias(n, total, n - total, b_n)


def stein_alignment_holds(state: SquareState) -> bool:
    """Assertion utility: some row or column shows at least sqrt(n)
    distinct colors."""
    n = state.n
    best = 0
    for i in range(n):
        row = len({state.digit_at(c, i) for c in range(n)})
        col = len({state.digit_at(i, r) for r in range(n)})
        best = max(best, row, col)
    return best * best >= n
