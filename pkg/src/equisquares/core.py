"""Formal n-squares: cells, moves, shuffle accounting, states and counting.

A formal n-square is the set of the n*n cells of an n-by-n matrix.  Columns
are numbered 0..n-1 right to left and rows 0..n-1 bottom to top, so a cell is
a pair (col, row) and carries the rank col + n*row.  An equi-n-square is a
total assignment of the digits 0..n-1 to the cells with every digit used
exactly n times ("state").

Move conventions, fixed once for the whole package:

* an H-move rotates every row independently; offset +1 on a row sends
  (c, r) to (c+1 mod n, r) (one step "left" in right-to-left numbering);
* a V-move rotates every column independently; offset +1 on a column sends
  (c, r) to (c, r+1 mod n) (one step "up");
* a composition of elementary moves is measured in half-shuffles: one
  elementary move is half a shuffle, so the pattern H,V,H,V,H counts as
  2 1/2 shuffles.

All values here are immutable and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple


class Position(NamedTuple):
    """A cell (column, row) of a formal n-square."""

    col: int
    row: int

    def rank(self, n: int) -> int:
        return self.col + n * self.row


def position(col: int, row: int, n: int) -> Position:
    """Build a cell with both coordinates reduced modulo n."""
    return Position(col % n, row % n)


def from_rank(rank: int, n: int) -> Position:
    return Position(rank % n, (rank // n) % n)


def check_square_size(n: int) -> None:
    if n < 2:
        raise ValueError(f"square size must be at least 2, got {n}")


# ---------------------------------------------------------------------------
# elementary moves and move sequences


@dataclass(frozen=True)
class ElementaryMove:
    """One H- or V-move: a per-line rotation offset for each of the n lines.

    axis 'H': offsets[r] rotates row r.  axis 'V': offsets[c] rotates
    column c.  All offsets are stored reduced modulo n.
    """

    axis: str
    offsets: tuple[int, ...]

    def __post_init__(self):
        if self.axis not in ("H", "V"):
            raise ValueError(f"axis must be 'H' or 'V', got {self.axis!r}")
        n = len(self.offsets)
        check_square_size(n)
        object.__setattr__(self, "offsets", tuple(a % n for a in self.offsets))

    @property
    def n(self) -> int:
        return len(self.offsets)

    def is_zero(self) -> bool:
        return not any(self.offsets)

    def inverse(self) -> "ElementaryMove":
        n = self.n
        return ElementaryMove(self.axis, tuple(-a % n for a in self.offsets))


def h_move(n: int, offsets: dict[int, int] | Iterable[int]) -> ElementaryMove:
    """H-move from a row->offset mapping (unlisted rows stay put)."""
    return _line_move("H", n, offsets)


def v_move(n: int, offsets: dict[int, int] | Iterable[int]) -> ElementaryMove:
    """V-move from a column->offset mapping (unlisted columns stay put)."""
    return _line_move("V", n, offsets)


def _line_move(axis, n, offsets):
    if isinstance(offsets, dict):
        vec = [0] * n
        for line, amount in offsets.items():
            vec[line % n] = amount
        return ElementaryMove(axis, tuple(vec))
    return ElementaryMove(axis, tuple(offsets))


def apply_move(move: ElementaryMove, p: Position) -> Position:
    """Image of one cell under one elementary move."""
    n = move.n
    c, r = p
    if not (0 <= c < n and 0 <= r < n):
        raise ValueError(f"cell {p} out of range for square size {n}")
    if move.axis == "H":
        return Position((c + move.offsets[r]) % n, r)
    return Position(c, (r + move.offsets[c]) % n)


def apply_moves(moves: Iterable[ElementaryMove], p: Position) -> Position:
    for m in moves:
        p = apply_move(m, p)
    return p


@dataclass(frozen=True)
class MoveSequence:
    """A composition of elementary moves, applied left to right."""

    moves: tuple[ElementaryMove, ...]

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))
        sizes = {m.n for m in self.moves}
        if len(sizes) > 1:
            raise ValueError(f"mixed square sizes in move sequence: {sorted(sizes)}")

    def __len__(self) -> int:
        return len(self.moves)

    def __iter__(self):
        return iter(self.moves)

    @property
    def shuffle_halves(self) -> int:
        """Length in half-shuffle units (= number of elementary moves)."""
        return len(self.moves)

    def shuffle_text(self) -> str:
        halves = len(self.moves)
        whole, rem = divmod(halves, 2)
        return f"{whole}½" if rem else str(whole)

    def inverse(self) -> "MoveSequence":
        return MoveSequence(tuple(m.inverse() for m in reversed(self.moves)))

    def apply_position(self, p: Position) -> Position:
        return apply_moves(self.moves, p)


def normalize(seq: MoveSequence) -> MoveSequence:
    """Collapse adjacent same-axis moves and drop zero moves.

    Adjacent moves on one axis merge by componentwise offset addition, and
    zero moves disappear; both rewrites preserve the realized permutation of
    cells, so the result acts identically to the input.
    """
    out: list[ElementaryMove] = []
    for m in seq.moves:
        out.append(m)
        while len(out) >= 2 and out[-1].axis == out[-2].axis:
            b, a = out.pop(), out.pop()
            n = a.n
            merged = ElementaryMove(
                a.axis, tuple((x + y) % n for x, y in zip(a.offsets, b.offsets))
            )
            if not merged.is_zero():
                out.append(merged)
        while out and out[-1].is_zero():
            out.pop()
    return MoveSequence(tuple(out))


def concat(*seqs: MoveSequence) -> MoveSequence:
    moves: list[ElementaryMove] = []
    for s in seqs:
        moves.extend(s.moves)
    return MoveSequence(tuple(moves))


def move_to_record(move: ElementaryMove) -> dict:
    return {"axis": move.axis, "offsets": list(move.offsets)}


def sequence_to_records(seq: MoveSequence) -> list[dict]:
    """Canonical serialization: a list of {"axis": "H"|"V", "offsets": [...]}."""
    return [move_to_record(m) for m in seq.moves]


def sequence_from_records(records: list[dict]) -> MoveSequence:
    moves = []
    for rec in records:
        moves.append(ElementaryMove(rec["axis"], tuple(int(a) for a in rec["offsets"])))
    return MoveSequence(tuple(moves))


# ---------------------------------------------------------------------------
# position collections


@dataclass(frozen=True)
class PositionSet:
    """An unordered set of distinct cells of a formal n-square."""

    n: int
    members: frozenset[Position]

    def __post_init__(self):
        check_square_size(self.n)
        members = frozenset(Position(c, r) for (c, r) in self.members)
        for c, r in members:
            if not (0 <= c < self.n and 0 <= r < self.n):
                raise ValueError(f"cell ({c},{r}) out of range for size {self.n}")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, p) -> bool:
        return p in self.members

    def apply(self, moves: MoveSequence | ElementaryMove) -> "PositionSet":
        if isinstance(moves, ElementaryMove):
            moves = MoveSequence((moves,))
        return PositionSet(
            self.n, frozenset(moves.apply_position(p) for p in self.members)
        )

    def transpose(self) -> "PositionSet":
        return PositionSet(self.n, frozenset(Position(r, c) for (c, r) in self.members))


def position_set(n: int, cells: Iterable[tuple[int, int]]) -> PositionSet:
    return PositionSet(n, frozenset(Position(c, r) for (c, r) in cells))


@dataclass(frozen=True)
class PositionArray:
    """An ordered tuple of distinct cells; order is meaningful."""

    n: int
    cells: tuple[Position, ...]

    def __post_init__(self):
        check_square_size(self.n)
        cells = tuple(Position(c, r) for (c, r) in self.cells)
        if len(set(cells)) != len(cells):
            raise ValueError("array cells must be distinct")
        for c, r in cells:
            if not (0 <= c < self.n and 0 <= r < self.n):
                raise ValueError(f"cell ({c},{r}) out of range for size {self.n}")
        object.__setattr__(self, "cells", cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __getitem__(self, i: int) -> Position:
        return self.cells[i]

    def __iter__(self):
        return iter(self.cells)

    def apply(self, moves: MoveSequence | ElementaryMove) -> "PositionArray":
        if isinstance(moves, ElementaryMove):
            moves = MoveSequence((moves,))
        return PositionArray(
            self.n, tuple(moves.apply_position(p) for p in self.cells)
        )

    def as_set(self) -> PositionSet:
        return PositionSet(self.n, frozenset(self.cells))


# ---------------------------------------------------------------------------
# row / column profiles


@dataclass(frozen=True)
class Profile:
    """Row statistics of a position set (use `transpose` first for columns).

    row_sets maps each occupied row to the set of columns used in it;
    unique_cells are the cells alone in their row.
    """

    n: int
    row_sets: dict[int, frozenset[int]]

    @property
    def occupied(self) -> int:
        return len(self.row_sets)

    @property
    def free(self) -> int:
        return self.n - len(self.row_sets)

    @property
    def body_rows(self) -> list[int]:
        return sorted(r for r, cols in self.row_sets.items() if len(cols) >= 2)

    @property
    def body_row_count(self) -> int:
        return len(self.body_rows)

    @property
    def body_size(self) -> int:
        return sum(len(cols) for cols in self.row_sets.values() if len(cols) >= 2)

    @property
    def unique_cells(self) -> list[Position]:
        out = []
        for r, cols in self.row_sets.items():
            if len(cols) == 1:
                (c,) = cols
                out.append(Position(c, r))
        return sorted(out)

    @property
    def unique_count(self) -> int:
        return sum(1 for cols in self.row_sets.values() if len(cols) == 1)


def row_profile(s: PositionSet) -> Profile:
    """Occupied rows, free rows, body rows and row-unique cells of a set."""
    rows: dict[int, set[int]] = {}
    for c, r in s.members:
        rows.setdefault(r, set()).add(c)
    return Profile(s.n, {r: frozenset(cols) for r, cols in rows.items()})


def col_profile(s: PositionSet) -> Profile:
    """Column-dual of row_profile: row_sets maps columns to row sets."""
    return row_profile(s.transpose())


# ---------------------------------------------------------------------------
# states


class SquareState:
    """An equi-n-square: every digit 0..n-1 colors exactly n cells.

    Cell digits are stored rank-major (rank = col + n*row).
    """

    __slots__ = ("n", "digits")

    def __init__(self, n: int, digits: Iterable[int]):
        check_square_size(n)
        digits = tuple(digits)
        if len(digits) != n * n:
            raise ValueError(f"need {n * n} digits, got {len(digits)}")
        counts = [0] * n
        for d in digits:
            if not (0 <= d < n):
                raise ValueError(f"digit {d} out of range 0..{n - 1}")
            counts[d] += 1
        bad = [d for d, k in enumerate(counts) if k != n]
        if bad:
            raise ValueError(f"digits {bad} do not occur exactly {n} times each")
        self.n = n
        self.digits = digits

    def digit(self, p: Position | tuple[int, int]) -> int:
        c, r = p
        return self.digits[c + self.n * r]

    def digit_at(self, col: int, row: int) -> int:
        return self.digits[col + self.n * row]

    def cells_of_digit(self, d: int) -> list[Position]:
        n = self.n
        return [from_rank(k, n) for k, dd in enumerate(self.digits) if dd == d]

    def apply(self, moves: MoveSequence | ElementaryMove) -> "SquareState":
        """New state with every cell's digit carried along the move."""
        if isinstance(moves, ElementaryMove):
            moves = MoveSequence((moves,))
        n = self.n
        digits = list(self.digits)
        for m in moves.moves:
            if m.n != n:
                raise ValueError(f"move size {m.n} does not match square size {n}")
            new = [0] * (n * n)
            if m.axis == "H":
                for r in range(n):
                    a = m.offsets[r]
                    base = n * r
                    for c in range(n):
                        new[(c + a) % n + base] = digits[c + base]
            else:
                for c in range(n):
                    a = m.offsets[c]
                    for r in range(n):
                        new[c + n * ((r + a) % n)] = digits[c + n * r]
            digits = new
        return SquareState(n, digits)

    def apply_cell_map(self, image: dict[Position, Position]) -> "SquareState":
        """New state moving each cell's digit to its image under a bijection."""
        n = self.n
        new = [-1] * (n * n)
        for p, q in image.items():
            new[q.col + n * q.row] = self.digit(p)
        if -1 in new:
            raise ValueError("cell map is not a bijection of the whole square")
        return SquareState(n, new)

    def transpose(self) -> "SquareState":
        n = self.n
        return SquareState(
            n, [self.digits[r + n * c] for r in range(n) for c in range(n)]
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SquareState)
            and self.n == other.n
            and self.digits == other.digits
        )

    def __hash__(self) -> int:
        return hash((self.n, self.digits))

    def __repr__(self) -> str:
        return f"SquareState(n={self.n})"


def parse_square(text: str) -> SquareState:
    """Parse the square text format.

    The format has n lines of n space-separated decimal digits; the top line
    is row n-1 and the leftmost token of a line is column n-1 (matching the
    right-to-left column numbering).
    """
    lines = [ln for ln in (ln.strip() for ln in text.splitlines()) if ln]
    n = len(lines)
    check_square_size(n)
    digits = [0] * (n * n)
    for i, ln in enumerate(lines):
        row = n - 1 - i
        tokens = ln.split()
        if len(tokens) != n:
            raise ValueError(f"line {i + 1} has {len(tokens)} tokens, expected {n}")
        for j, tok in enumerate(tokens):
            col = n - 1 - j
            try:
                d = int(tok)
            except ValueError:
                raise ValueError(f"bad digit token {tok!r} on line {i + 1}") from None
            digits[col + n * row] = d
    return SquareState(n, digits)


def format_square(state: SquareState) -> str:
    """Inverse of parse_square (same layout, one trailing newline)."""
    n = state.n
    lines = []
    for row in range(n - 1, -1, -1):
        lines.append(" ".join(str(state.digit_at(col, row)) for col in range(n - 1, -1, -1)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# counting quantities


def state_count(n: int) -> int:
    """Exact number of equi-n-squares: multinomial(n^2; n,...,n) * n!."""
    check_square_size(n)
    return math.factorial(n * n) // math.factorial(n) ** (n - 1)


def log2_state_count(n: int) -> float:
    """log2 of the exact state count, evaluated from big integers."""
    check_square_size(n)
    return math.log2(math.factorial(n * n)) - (n - 1) * math.log2(math.factorial(n))


def log2_ryser_latin_bound(n: int) -> float:
    """log2 of the classical latin-square lower bound (n!)^(2n) / n^(n^2)."""
    check_square_size(n)
    return 2 * n * math.log2(math.factorial(n)) - n * n * math.log2(n)


def shuffle_lower_bound(n: int) -> int:
    """Least d with n^(2*n*d) >= state_count(n): a floor on the shuffle
    distance between the farthest pair of states.

    Computed by exact integer comparison, so boundary cases cannot be lost
    to rounding.
    """
    check_square_size(n)
    s = state_count(n)
    step = n ** (2 * n)
    d = max(1, int(math.log2(s) // math.log2(step)))
    while step**d < s:
        d += 1
    while d > 1 and step ** (d - 1) >= s:
        d -= 1
    return d


def avg_shuffles_exact(n: int) -> Fraction:
    """Average number of shuffles linking a fixed graph to a fixed n-array:
    n^(2n) over the falling factorial n^2 * (n^2-1) * ... * (n^2-n+1)."""
    check_square_size(n)
    denom = 1
    for k in range(n):
        denom *= n * n - k
    return Fraction(n ** (2 * n), denom)


def avg_shuffles(n: int) -> float:
    """Float version of avg_shuffles_exact, safe for very large n.

    Evaluated as exp(-sum log1p(-k/n^2)) so no factorial ever overflows.
    """
    check_square_size(n)
    nn = float(n) * n
    acc = 0.0
    for k in range(1, n):
        acc += math.log1p(-k / nn)
    return math.exp(-acc)
