"""Transitions between equi-n-squares compiled into shuffle sequences.

A transition is the (unique) morphism between two states; any cell bijection
carrying each digit onto an equal digit represents it, and two sequences of
moves realize the same transition exactly when they turn the source state
into the same target state.  Two compilers are provided:

* naive_compile works for every n >= 2 by sorting the state with long-cycle
  rotations (one shuffle each, whatever the power) and transpositions of the
  two lowest-ranked cells (2 1/2 shuffles via a rank three-cycle whose third
  cell carries the right digit, which makes it state-equivalent to the bare
  swap); the cost is O(n^3) shuffles.

* bounded_compile reaches the target within 6n-3 shuffles (n even) or 6n+3
  (n odd) for 2 <= n <= 34 and n = 37.  It fixes a latin V-graph of the
  source, conjugates the target by a graph-to-graph shuffle so the
  transition fixes that graph pointwise, splits the remaining cells into
  self-mapped n-sets, and performs each part's permutation as padded cycles
  carried to the bottom row, rotated, and carried back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    ElementaryMove,
    MoveSequence,
    Position,
    PositionArray,
    SquareState,
    check_square_size,
    concat,
    h_move,
    normalize,
    shuffle_lower_bound,
    v_move,
)
from .flows import is_representation, latin_graph, part_respecting_representation
from .optimize import array_onto_graph, cols_apart, graph_to_graph_shuffle

NAIVE_BUDGET_HALVES_PER_N3 = 8  # naive_compile emits at most 8*n^3 half-shuffles


def key_result_range(n: int) -> bool:
    return 2 <= n <= 34 or n == 37


def bounded_shuffle_budget(n: int) -> int:
    """Shuffle budget of bounded_compile: 6n-3 for even n, 6n+3 for odd."""
    check_square_size(n)
    return 6 * n - 3 if n % 2 == 0 else 6 * n + 3


def shuffle_distance_floor(n: int) -> int:
    """Counting floor on the worst-case shuffle distance (re-exported for
    compiler reports)."""
    return shuffle_lower_bound(n)


# ---------------------------------------------------------------------------
# generator moves


def three_cycle_moves(k: int, r: int, n: int) -> MoveSequence:
    """Five elementary moves (2 1/2 shuffles) realizing exactly the 3-cycle
    of the cells ranked 0, 1 and k + n*r, fixing every other cell.

    Needs n >= 3 and r >= 1 (the third cell must sit above the bottom row).
    """
    if n < 3:
        raise ValueError("three-cycle gadget needs n >= 3")
    if not 1 <= r < n:
        raise ValueError(f"need 1 <= r < n, got r={r}")
    if not 0 <= k < n:
        raise ValueError(f"need 0 <= k < n, got k={k}")
    return MoveSequence(
        (
            h_move(n, {0: 1, r: 1 - k}),
            v_move(n, {1: -r}),
            h_move(n, {0: -1}),
            v_move(n, {1: r}),
            h_move(n, {r: k - 1}),
        )
    )


def long_cycle_move(n: int) -> MoveSequence:
    """One HV-shuffle moving every cell to the cell ranking one higher
    modulo n^2: every row one step, then the 0-th column one step up."""
    check_square_size(n)
    return MoveSequence((h_move(n, [1] * n), v_move(n, {0: 1})))


def long_cycle_power_move(n: int, power: int) -> MoveSequence:
    """Any power of the long cycle as a single HV-shuffle.

    Rank +k+n*q decomposes into an H-move by k on every row and a V-move by
    q, with the columns that wrapped (the k lowest) getting one extra step.
    """
    check_square_size(n)
    power %= n * n
    moves = []
    a, q = power % n, power // n
    if a:
        moves.append(h_move(n, [a] * n))
    v_offsets = tuple((q + 1) if c < a else q for c in range(n))
    if any(off % n for off in v_offsets):
        moves.append(ElementaryMove("V", v_offsets))
    return MoveSequence(tuple(moves))


# ---------------------------------------------------------------------------
# the generator-based compiler


def naive_compile(p_state: SquareState, q_state: SquareState) -> MoveSequence:
    """Move sequence turning the first state into the second, built from
    long-cycle rotations and bottom-corner transpositions.

    Targets are fixed rank by rank from the top; the needed digit is
    brought in either by one far three-cycle hop (source to target in a
    single gadget) or by bubbling it upward with adjacent transpositions,
    each a rotation plus a gadget.  Rotations move everything rigidly, so
    the logical picture never changes under them; a final rotation realigns
    the frame.  Works for every n >= 2 and emits O(n^3) half-shuffles.
    """
    n = p_state.n
    if q_state.n != n:
        raise ValueError("states have different sizes")
    if p_state == q_state:
        return MoveSequence(())
    m = n * n
    logical = list(p_state.digits)
    target = q_state.digits
    moves: list[ElementaryMove] = []
    off = 0  # logical cell i sits at physical rank (i + off) % m

    def rotate_logical_to_physical(logical_index: int, physical: int):
        nonlocal off
        delta = (physical - logical_index - off) % m
        if delta:
            moves.extend(long_cycle_power_move(n, delta).moves)
            off += delta

    def far_hop(s: int, t: int):
        # three-cycle on physical (0, 1, x): logical s-1 -> s -> t -> s-1
        rotate_logical_to_physical(s, 1)
        x = t - s + 1
        moves.extend(three_cycle_moves(x % n, x // n, n).moves)
        logical[s - 1], logical[s], logical[t] = (
            logical[t],
            logical[s - 1],
            logical[s],
        )

    def adjacent_swap(j: int):
        # swap the digits at logical j and j+1, up to state equivalence
        if logical[j] == logical[j + 1]:
            logical[j], logical[j + 1] = logical[j + 1], logical[j]
            return
        rotate_logical_to_physical(j, 0)
        if n == 2:
            moves.append(h_move(2, {0: 1}))  # exact swap of ranks 0 and 1
        else:
            want = logical[j + 1]
            for x in range(n, m):
                if logical[(x - off) % m] == want:
                    break
            else:
                raise AssertionError("matching third cell must exist")
            moves.extend(three_cycle_moves(x % n, x // n, n).moves)
        logical[j], logical[j + 1] = logical[j + 1], logical[j]

    for t in range(m - 1, 0, -1):
        want = target[t]
        if logical[t] == want:
            continue
        s = next(i for i in range(t - 1, -1, -1) if logical[i] == want)
        if n > 2 and s == 0 and t >= n:
            adjacent_swap(0)
            s = 1
        if n > 2 and s >= 1 and t - s + 1 >= n:
            far_hop(s, t)
        else:
            for j in range(s, t):
                adjacent_swap(j)
    rotate_logical_to_physical(0, 0)

    seq = normalize(MoveSequence(tuple(moves)))
    assert p_state.apply(seq) == q_state
    assert seq.shuffle_halves <= NAIVE_BUDGET_HALVES_PER_N3 * n**3
    return seq


# ---------------------------------------------------------------------------
# the bounded compiler


@dataclass(frozen=True)
class _Block:
    """One padded-cycle performance: carry `cells` in flow order onto the
    bottom row, rotate by `shift` and carry back."""

    cells: tuple[Position, ...]
    shift: int
    interleave_with: tuple[Position, ...] = ()


def _cycles_of(part: Sequence[Position], mapping) -> list[list[Position]]:
    """Cycles of length >= 2, each written ending at its least cell, listed
    in order of their least cells."""
    cells = sorted(part)
    seen: set[Position] = set()
    cycles = []
    for start in cells:
        if start in seen:
            continue
        cyc = [start]
        q = mapping[start]
        while q != start:
            cyc.append(q)
            q = mapping[q]
        seen.update(cyc)
        if len(cyc) >= 2:
            last = min(cyc)
            at = cyc.index(last)
            cyc = cyc[at + 1 :] + cyc[: at + 1]  # rotate so the least cell is last
            cycles.append(cyc)
    return cycles


def _pad_flow(state: SquareState, flows: Sequence[list[Position]],
              lengths: Sequence[int]) -> list[list[Position]]:
    """Pad each flow list to its target length with unused cells whose
    current digit equals the digit of the cell they follow, making the
    padded cycle act identically on the state."""
    n = state.n
    used = {p for flow in flows for p in flow}
    out = []
    for flow, want in zip(flows, lengths):
        flow = list(flow)
        while len(flow) < want:
            for j, cell in enumerate(flow):
                d = state.digit(cell)
                spare = _smallest_spare(state, d, used)
                if spare is not None:
                    flow.insert(j + 1, spare)
                    used.add(spare)
                    break
            else:
                raise AssertionError("padding cell must exist for some digit")
        out.append(flow)
    return out


def _smallest_spare(state: SquareState, digit: int, used: set) -> Optional[Position]:
    n = state.n
    for rank in range(n * n):
        cell = Position(rank % n, rank // n)
        if cell not in used and state.digits[rank] == digit:
            return cell
    return None


def _perform_block(state: SquareState, block: _Block, economize: bool) -> MoveSequence:
    """Realize the block on the current state: HVHV onto the bottom row, one
    row rotation by the shift, and the reverse HVHV."""
    n = state.n
    if block.interleave_with:
        half = n // 2
        a, b = _pad_flow(
            state, [list(block.cells), list(block.interleave_with)], [half, half]
        )
        cells = [a[i // 2] if i % 2 == 0 else b[i // 2] for i in range(n)]
    else:
        (cells,) = _pad_flow(state, [list(block.cells)], [n])
    array = PositionArray(n, tuple(cells))
    bottom = PositionArray(n, tuple(Position(i, 0) for i in range(n)))
    carry = _array_onto_bottom(array, bottom, economize)
    rot = h_move(n, {0: block.shift})
    return concat(carry, MoveSequence((rot,)), carry.inverse())


def _array_onto_bottom(array: PositionArray, bottom: PositionArray,
                       economize: bool) -> MoveSequence:
    if not economize:
        return array_onto_graph(array, bottom)
    # try to skip the opening H-move: if the columns already rotate apart,
    # a V-move alone reaches a V-graph and the zero H collapses away
    vmove = cols_apart(array.as_set())
    if vmove is None:
        return array_onto_graph(array, bottom)
    n = array.n
    placed = array.apply(vmove)
    h_offsets = {cell.row: (tgt.col - cell.col) % n for cell, tgt in zip(placed, bottom)}
    hmove = h_move(n, h_offsets)
    placed = placed.apply(hmove)
    v_offsets = {cell.col: (tgt.row - cell.row) % n for cell, tgt in zip(placed, bottom)}
    seq = MoveSequence((h_move(n, {}), vmove, hmove, v_move(n, v_offsets)))
    assert array.apply(seq).cells == bottom.cells
    return seq


def _plan_blocks(parts, mapping, n: int) -> list[_Block]:
    """Order of performance: for odd n the two joint last-point cycles, then
    one merged cycle per part pair; for even n one interleaved double cycle
    per pair and the leftover part's own cycle; then every carrier cycle."""
    per_part = []
    for part in parts:
        cycles = _cycles_of(sorted(part.members), mapping)
        lasts = [cyc[-1] for cyc in cycles]
        carrier = [cell for cyc in cycles for cell in cyc]
        per_part.append((lasts, carrier))

    blocks: list[_Block] = []
    pairs = [(i, i + 1) for i in range(0, len(per_part) - 1, 2)]
    leftover = len(per_part) - 1 if len(per_part) % 2 == 1 else None

    if n % 2 == 1:
        taus = []
        merged_blocks = []
        for i, j in pairs:
            la, ca = per_part[i][0], None
            lb = per_part[j][0]
            if len(la) >= 2 and len(lb) >= 2:
                a_last, b_last = la[-1], lb[-1]
                taus.append((a_last, b_last))
                merged_blocks.append(_Block(tuple(_merged_cycle(la, lb)), 1))
            elif len(la) >= 2:
                merged_blocks.append(_Block(tuple(reversed(la)), 1))
            elif len(lb) >= 2:
                merged_blocks.append(_Block(tuple(reversed(lb)), 1))
        if taus:
            b_cells = [b for _, b in taus]
            if len(b_cells) >= 2:
                blocks.append(_Block(tuple(reversed(b_cells)), 1))
            mixed = [cell for ab in taus for cell in ab]
            blocks.append(_Block(tuple(mixed), 1))
        blocks.extend(merged_blocks)
    else:
        for i, j in pairs:
            la, lb = per_part[i][0], per_part[j][0]
            if len(la) >= 2 and len(lb) >= 2:
                blocks.append(_Block(tuple(reversed(la)), 2, tuple(reversed(lb))))
            elif len(la) >= 2:
                blocks.append(_Block(tuple(reversed(la)), 1))
            elif len(lb) >= 2:
                blocks.append(_Block(tuple(reversed(lb)), 1))
        if leftover is not None and len(per_part[leftover][0]) >= 2:
            blocks.append(_Block(tuple(reversed(per_part[leftover][0])), 1))

    for lasts, carrier in per_part:
        if carrier:
            blocks.append(_Block(tuple(carrier), 1))
    return blocks


def _merged_cycle(la: list[Position], lb: list[Position]) -> list[Position]:
    """Single cycle equal to inverse(L_a) o inverse(L_b) o (a_last b_last),
    in flow order (the transposition is repaid by the joint step of the
    plan, performed before the merged cycles)."""
    a_last, b_last = la[-1], lb[-1]
    perm: dict[Position, Position] = {}
    # tau first
    tau = {a_last: b_last, b_last: a_last}
    inv_a = {la[i]: la[i - 1] for i in range(len(la))}
    inv_b = {lb[i]: lb[i - 1] for i in range(len(lb))}
    support = la + lb
    for x in support:
        y = tau.get(x, x)
        y = inv_b.get(y, y)
        y = inv_a.get(y, y)
        perm[x] = y
    start = min(support)
    flow = [start]
    q = perm[start]
    while q != start:
        flow.append(q)
        q = perm[q]
    assert len(flow) == len(support), "merged permutation must be one cycle"
    return flow


def bounded_compile(
    p_state: SquareState, q_state: SquareState, economize: bool = False
) -> MoveSequence:
    """Move sequence sending the first state to the second within the
    6n -/+ 3 shuffle budget (even/odd n), for 2 <= n <= 34 or n = 37.

    Pipeline: fix a latin V-graph G of the source and a latin H-graph H of
    the target; the VH-shuffle sigma matching H onto G by color turns the
    problem into a transition fixing G pointwise; the complement splits
    into self-mapped n-sets; each part's permutation is the inverse of its
    last-point cycle followed by its carrier cycle, and these cycles are
    performed on the bottom row in pairs (with a joint transposition step
    for odd n); the closing HV-shuffle undoes sigma.  The economize flag
    lets blocks drop their opening H-move when the columns of the block
    array already rotate apart (helpful for n <= 5).
    """
    n = p_state.n
    if q_state.n != n:
        raise ValueError("states have different sizes")
    if not key_result_range(n):
        raise ValueError(f"bounded compilation is guaranteed for 2..34 and 37, got {n}")
    if p_state == q_state:
        return MoveSequence(())

    g_graph = latin_graph(p_state, "V")
    h_graph = latin_graph(q_state, "H")
    g_by_digit = {p_state.digit(p): p for p in g_graph.members}
    h_by_digit = {q_state.digit(p): p for p in h_graph.members}
    h_array = PositionArray(n, tuple(h_by_digit[d] for d in range(n)))
    g_array = PositionArray(n, tuple(g_by_digit[d] for d in range(n)))
    sigma = graph_to_graph_shuffle(h_array, g_array)
    q_conj = q_state.apply(sigma)

    identity_on_g = {p: p for p in g_graph.members}
    mapping, parts = part_respecting_representation(
        p_state, q_conj, g_graph.members, identity_on_g
    )

    moves: list[ElementaryMove] = []
    state = p_state
    for block in _plan_blocks(parts, mapping, n):
        seq = _perform_block(state, block, economize)
        moves.extend(seq.moves)
        state = state.apply(seq)
    assert state == q_conj, "blocks must realize the conjugated transition"
    moves.extend(sigma.inverse().moves)

    seq = normalize(MoveSequence(tuple(moves)))
    assert p_state.apply(seq) == q_state
    assert seq.shuffle_halves <= 2 * bounded_shuffle_budget(n)
    return seq


def compile_report(p_state: SquareState, q_state: SquareState) -> dict:
    """Bounded compilation plus the counting floor, for the solver output."""
    seq = bounded_compile(p_state, q_state)
    n = p_state.n
    return {
        "n": n,
        "elementary_moves": len(seq),
        "shuffle_halves": seq.shuffle_halves,
        "shuffle_text": seq.shuffle_text(),
        "budget_shuffles": bounded_shuffle_budget(n),
        "distance_floor_shuffles": shuffle_distance_floor(n),
        "moves": seq,
    }
