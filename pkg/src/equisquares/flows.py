"""Flow-based transversals, latin partitions and wavy-latin networks.

Two partitions of a common ground set (typically: cells split by column and
cells split by digit) admit a common transversal whenever the part sizes and
the ground size satisfy the counting hypotheses; the witness is an integral
maximum flow through a four-layer unit-capacity network.  Iterating the
transversal extraction yields partitions of a state into latin column or row
transversals, partitions of a cell set into n-sets latin in two states at
once, and transition representations that fix a prescribed subsquare while
mapping every other part onto itself.

The wavy-latin search asks for a partition into latin H-graphs together
with a partition into latin V-graphs meeting pairwise in single cells; the
census tooling enumerates small squares up to color renaming, row/column
permutation and transposition.
"""

from __future__ import annotations

import random
from collections import deque
from typing import Hashable, Iterable, Optional, Sequence

from .core import Position, PositionSet, SquareState
from .ngon import SearchBudgetExceeded

DEFAULT_WAVY_BUDGET = 10_000_000


# ---------------------------------------------------------------------------
# unit-capacity max flow


class FlowNetwork:
    """Minimal residual-graph max flow with breadth-first augmenting paths.

    Deterministic: vertices are visited in insertion order, so repeated runs
    extract identical transversals.
    """

    def __init__(self, n_vertices: int):
        self.n = n_vertices
        self.adj: list[list[int]] = [[] for _ in range(n_vertices)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int = 1) -> int:
        edge_id = len(self.to)
        self.adj[u].append(edge_id)
        self.to.append(v)
        self.cap.append(capacity)
        self.adj[v].append(edge_id + 1)
        self.to.append(u)
        self.cap.append(0)
        return edge_id

    def max_flow(self, source: int, sink: int) -> int:
        flow = 0
        while True:
            parent_edge = [-1] * self.n
            parent_edge[source] = -2
            queue = deque([source])
            while queue and parent_edge[sink] == -1:
                u = queue.popleft()
                for eid in self.adj[u]:
                    v = self.to[eid]
                    if self.cap[eid] > 0 and parent_edge[v] == -1:
                        parent_edge[v] = eid
                        queue.append(v)
            if parent_edge[sink] == -1:
                return flow
            v = sink
            while v != source:
                eid = parent_edge[v]
                self.cap[eid] -= 1
                self.cap[eid ^ 1] += 1
                v = self.to[eid ^ 1]
            flow += 1


# ---------------------------------------------------------------------------
# common transversals (ground set: any hashable, sortable elements)


def common_transversal(
    u_parts: Sequence[Iterable[Hashable]],
    w_parts: Sequence[Iterable[Hashable]],
    avoid: Iterable[Hashable] = (),
) -> list:
    """One element per part of both partitions, avoiding the given elements.

    u_parts and w_parts must partition the same ground set of size
    parts*k - l with every part of size <= k, where k = ceil(size/parts)
    and 0 <= l < k; at most k - l - 1 elements may be avoided.  Under these
    hypotheses the four-layer network has a flow saturating every part, so
    a shortfall after validation indicates an internal defect.
    """
    u_parts = [sorted(p) for p in u_parts]
    w_parts = [sorted(p) for p in w_parts]
    if len(u_parts) != len(w_parts):
        raise ValueError("both partitions must have the same number of parts")
    nparts = len(u_parts)
    if nparts == 0:
        return []
    ground = [x for part in u_parts for x in part]
    if len(set(ground)) != len(ground):
        raise ValueError("first partition has overlapping parts")
    ground_set = set(ground)
    w_ground = [x for part in w_parts for x in part]
    if len(set(w_ground)) != len(w_ground) or set(w_ground) != ground_set:
        raise ValueError("partitions do not cover the same ground set")
    avoid = set(avoid)
    if not avoid <= ground_set:
        raise ValueError("avoided elements must belong to the ground set")

    size = len(ground)
    k = -(-size // nparts)
    l = nparts * k - size
    if any(len(p) > k for p in u_parts) or any(len(p) > k for p in w_parts):
        raise ValueError(f"a part exceeds the size bound k={k}")
    if len(avoid) > k - l - 1:
        raise ValueError(
            f"can avoid at most k-l-1 = {k - l - 1} elements, got {len(avoid)}"
        )

    elements = sorted(ground_set - avoid)
    elem_id = {x: i for i, x in enumerate(elements)}
    n_elem = len(elements)
    source = 0
    sink = 1
    u_base = 2
    e_base = u_base + nparts
    w_base = e_base + n_elem
    net = FlowNetwork(w_base + nparts)

    u_edge_of_elem: dict[int, int] = {}
    for i, part in enumerate(u_parts):
        net.add_edge(source, u_base + i)
        for x in part:
            if x in elem_id:
                eid = net.add_edge(u_base + i, e_base + elem_id[x])
                u_edge_of_elem[elem_id[x]] = eid
    w_of_elem = {}
    for j, part in enumerate(w_parts):
        net.add_edge(w_base + j, sink)
        for x in part:
            if x in elem_id:
                w_of_elem[elem_id[x]] = j
                net.add_edge(e_base + elem_id[x], w_base + j)

    value = net.max_flow(source, sink)
    assert value == nparts, f"flow {value} < parts {nparts}: hypotheses violated"
    chosen = [
        elements[i] for i, eid in sorted(u_edge_of_elem.items()) if net.cap[eid] == 0
    ]
    assert len(chosen) == nparts
    return chosen


# ---------------------------------------------------------------------------
# latin partitions of states


def _color_parts(state: SquareState, cells: Iterable[Position]) -> list[list[Position]]:
    parts: dict[int, list[Position]] = {}
    for p in cells:
        parts.setdefault(state.digit(p), []).append(p)
    return [parts[d] for d in sorted(parts)]


def is_latin(state: SquareState, cells: Iterable[Position]) -> bool:
    digits = [state.digit(p) for p in cells]
    return len(set(digits)) == len(digits)


def common_latin_partition(
    p_state: SquareState, q_state: SquareState, cells: Iterable[Position], k: int
) -> list[PositionSet]:
    """Split k*n cells holding every digit k times in both states into k
    n-sets, each latin in both states, by repeated transversal extraction."""
    n = p_state.n
    if q_state.n != n:
        raise ValueError("states have different sizes")
    remaining = sorted(Position(c, r) for (c, r) in cells)
    if len(remaining) != k * n or len(set(remaining)) != len(remaining):
        raise ValueError(f"need {k * n} distinct cells, got {len(remaining)}")
    for state in (p_state, q_state):
        counts: dict[int, int] = {}
        for cell in remaining:
            d = state.digit(cell)
            counts[d] = counts.get(d, 0) + 1
        if sorted(counts) != list(range(n)) or set(counts.values()) != {k}:
            raise ValueError(f"every digit must occur exactly {k} times in the cell set")

    parts: list[PositionSet] = []
    for _ in range(k):
        transversal = common_transversal(
            _color_parts(p_state, remaining), _color_parts(q_state, remaining)
        )
        parts.append(PositionSet(n, frozenset(transversal)))
        chosen = set(transversal)
        remaining = [cell for cell in remaining if cell not in chosen]
    return parts


def latin_graph_partition(state: SquareState, axis: str = "H") -> list[PositionSet]:
    """Partition of the whole square into n latin H-graphs (axis "H": one
    cell per column each) or V-graphs (axis "V"), by n transversal rounds
    pairing the line partition with the color partition."""
    if axis not in ("H", "V"):
        raise ValueError("axis must be 'H' or 'V'")
    n = state.n
    remaining = [Position(c, r) for c in range(n) for r in range(n)]
    graphs: list[PositionSet] = []
    for _ in range(n):
        if axis == "H":
            lines: dict[int, list[Position]] = {}
            for cell in remaining:
                lines.setdefault(cell.col, []).append(cell)
        else:
            lines = {}
            for cell in remaining:
                lines.setdefault(cell.row, []).append(cell)
        transversal = common_transversal(
            [lines[i] for i in sorted(lines)], _color_parts(state, remaining)
        )
        graphs.append(PositionSet(n, frozenset(transversal)))
        chosen = set(transversal)
        remaining = [cell for cell in remaining if cell not in chosen]
    return graphs


def latin_graph(state: SquareState, axis: str = "H") -> PositionSet:
    """One latin H-graph (or V-graph) of the state: the first round of the
    full partition, extracted without computing the rest."""
    if axis not in ("H", "V"):
        raise ValueError("axis must be 'H' or 'V'")
    n = state.n
    cells = [Position(c, r) for c in range(n) for r in range(n)]
    if axis == "H":
        lines = [[p for p in cells if p.col == c] for c in range(n)]
    else:
        lines = [[p for p in cells if p.row == r] for r in range(n)]
    transversal = common_transversal(lines, _color_parts(state, cells))
    return PositionSet(n, frozenset(transversal))


# ---------------------------------------------------------------------------
# transition representations


def is_representation(
    p_state: SquareState, q_state: SquareState, mapping: dict[Position, Position]
) -> bool:
    """Whether the cell bijection carries every P-digit onto the equal
    Q-digit (the defining property of a transition representation)."""
    n = p_state.n
    if q_state.n != n:
        return False
    if len(mapping) != n * n:
        return False
    if len(set(mapping.values())) != n * n:
        return False
    return all(p_state.digit(p) == q_state.digit(q) for p, q in mapping.items())


def part_respecting_representation(
    p_state: SquareState,
    q_state: SquareState,
    fixed: Iterable[Position],
    g: dict[Position, Position],
) -> tuple[dict[Position, Position], list[PositionSet]]:
    """Extend a partial representation g (a color-preserving bijection of
    the cell set `fixed` onto itself) to a full representation that maps
    each part of a partition of the complement onto itself.

    The complement splits into n-sets latin in both states; within a part
    the extension matches cells by color.  Returns (mapping, parts).
    """
    n = p_state.n
    fixed = {Position(c, r) for (c, r) in fixed}
    if set(g) != fixed or {Position(*q) for q in g.values()} != fixed:
        raise ValueError("g must be a bijection of the fixed set onto itself")
    for p, q in g.items():
        if p_state.digit(p) != q_state.digit(q):
            raise ValueError(f"g is not color-preserving at {p}")
    color_counts: dict[int, int] = {}
    for p in fixed:
        d = p_state.digit(p)
        color_counts[d] = color_counts.get(d, 0) + 1
    if fixed and len(set(color_counts.get(d, 0) for d in range(n))) != 1:
        raise ValueError("the fixed set must consume each color equally often")

    complement = [
        Position(c, r)
        for c in range(n)
        for r in range(n)
        if Position(c, r) not in fixed
    ]
    k = len(complement) // n
    mapping: dict[Position, Position] = dict(g)
    parts: list[PositionSet] = []
    if complement:
        parts = common_latin_partition(p_state, q_state, complement, k)
        for part in parts:
            by_q_digit = {q_state.digit(q): q for q in part}
            for p in part:
                mapping[p] = by_q_digit[p_state.digit(p)]
    assert is_representation(p_state, q_state, mapping)
    return mapping, parts


# ---------------------------------------------------------------------------
# wavy-latin search


def wavy_latin(
    state: SquareState, budget: int = DEFAULT_WAVY_BUDGET
) -> Optional[tuple[list[PositionSet], list[PositionSet]]]:
    """A partition into latin H-graphs plus one into latin V-graphs with
    every H-graph meeting every V-graph in exactly one cell, or None.

    Backtracks over H-partitions (cells labeled by graph, columnwise, the
    0-th column pinned to the identity labeling since graph names are
    interchangeable), then over compatible V-partitions (rowwise, 0-th row
    pinned).  Exceeding the node budget raises SearchBudgetExceeded.
    """
    n = state.n
    nodes = 0

    def bump():
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise SearchBudgetExceeded(f"wavy search exceeded {budget} nodes")

    digit = state.digit_at
    hlabel = [[0] * n for _ in range(n)]  # hlabel[c][r]
    graph_digits = [0] * n  # bitmask of digits used by each H-graph

    def try_v(hl) -> Optional[list[PositionSet]]:
        vdigits = [0] * n
        vhs = [0] * n
        ulabel = [[0] * n for _ in range(n)]  # ulabel[r][c]
        for c in range(n):
            d = digit(c, 0)
            if (vdigits[c] >> d) & 1 or (vhs[c] >> hl[c][0]) & 1:
                return None
            vdigits[c] |= 1 << d
            vhs[c] |= 1 << hl[c][0]
            ulabel[0][c] = c

        def fill(r: int, c: int, row_used: int) -> bool:
            bump()
            if r == n:
                return True
            if c == n:
                return fill(r + 1, 0, 0)
            d = digit(c, r)
            h = hl[c][r]
            for u in range(n):
                if (row_used >> u) & 1:
                    continue
                if (vdigits[u] >> d) & 1 or (vhs[u] >> h) & 1:
                    continue
                vdigits[u] |= 1 << d
                vhs[u] |= 1 << h
                ulabel[r][c] = u
                if fill(r, c + 1, row_used | (1 << u)):
                    return True
                vdigits[u] ^= 1 << d
                vhs[u] ^= 1 << h
            return False

        if fill(1, 0, 0):
            return [
                PositionSet(
                    n,
                    frozenset(
                        Position(c, r)
                        for r in range(n)
                        for c in range(n)
                        if ulabel[r][c] == u
                    ),
                )
                for u in range(n)
            ]
        return None

    result: list[Optional[tuple]] = [None]

    def assign(c: int, r: int, col_used: int) -> bool:
        bump()
        if c == n:
            vgraphs = try_v(hlabel)
            if vgraphs is not None:
                hgraphs = [
                    PositionSet(
                        n,
                        frozenset(
                            Position(cc, rr)
                            for cc in range(n)
                            for rr in range(n)
                            if hlabel[cc][rr] == g
                        ),
                    )
                    for g in range(n)
                ]
                result[0] = (hgraphs, vgraphs)
                return True
            return False
        if r == n:
            return assign(c + 1, 0, 0)
        d = digit(c, r)
        for g in range(n):
            if (col_used >> g) & 1:
                continue
            if (graph_digits[g] >> d) & 1:
                continue
            graph_digits[g] |= 1 << d
            hlabel[c][r] = g
            if assign(c, r + 1, col_used | (1 << g)):
                return True
            graph_digits[g] ^= 1 << d
        return False

    # pin column 0: H-graph g gets the column-0 cell in row g
    ok = True
    for r in range(n):
        d = digit(0, r)
        if (graph_digits[r] >> d) & 1:
            ok = False
            break
        graph_digits[r] |= 1 << d
        hlabel[0][r] = r
    if ok and assign(1, 0, 0):
        return result[0]
    return None


def verify_wavy_network(
    state: SquareState,
    hgraphs: Sequence[PositionSet],
    vgraphs: Sequence[PositionSet],
) -> bool:
    n = state.n
    all_cells = {Position(c, r) for c in range(n) for r in range(n)}
    if set().union(*(g.members for g in hgraphs)) != all_cells:
        return False
    if set().union(*(g.members for g in vgraphs)) != all_cells:
        return False
    for g in hgraphs:
        if len({p.col for p in g.members}) != n or not is_latin(state, g.members):
            return False
    for g in vgraphs:
        if len({p.row for p in g.members}) != n or not is_latin(state, g.members):
            return False
    for hg in hgraphs:
        for vg in vgraphs:
            if len(hg.members & vg.members) != 1:
                return False
    return True


# ---------------------------------------------------------------------------
# type canonicalization and the census


def canonical_type(state: SquareState) -> tuple[int, ...]:
    """Canonical representative of the state under color renaming, row and
    column permutation, and transposition: the lexicographically least
    rank-major digit tuple over the whole symmetry class."""
    from itertools import permutations

    n = state.n
    best: Optional[tuple[int, ...]] = None
    for grid in (state, state.transpose()):
        for rowperm in permutations(range(n)):
            for colperm in permutations(range(n)):
                relabel = [-1] * n
                nxt = 0
                out = []
                for r in range(n):
                    for c in range(n):
                        d = grid.digit_at(colperm[c], rowperm[r])
                        if relabel[d] < 0:
                            relabel[d] = nxt
                            nxt += 1
                        out.append(relabel[d])
                tup = tuple(out)
                if best is None or tup < best:
                    best = tup
    return best


def _cell_transforms(n: int) -> list[list[int]]:
    """Index arrays: new_digits[i] = old_digits[t[i]] for every combination
    of a row permutation, a column permutation and optional transposition.
    Cells are indexed rank-major (col + n*row)."""
    from itertools import permutations

    transforms = []
    perms = list(permutations(range(n)))
    for transpose in (False, True):
        for rowperm in perms:
            for colperm in perms:
                t = [0] * (n * n)
                for r in range(n):
                    for c in range(n):
                        src_c, src_r = colperm[c], rowperm[r]
                        if transpose:
                            src_c, src_r = src_r, src_c
                        t[c + n * r] = src_c + n * src_r
                transforms.append(t)
    return transforms


def _relabel(digits: Sequence[int], n: int) -> tuple[int, ...]:
    relabel = [-1] * n
    nxt = 0
    out = []
    for d in digits:
        if relabel[d] < 0:
            relabel[d] = nxt
            nxt += 1
        out.append(relabel[d])
    return tuple(out)


def _iter_canonical_colorings(n: int):
    """All digit tuples of length n*n with every digit exactly n times and
    digits first appearing in increasing order (one representative per
    color-renaming class), in lexicographic order."""
    total = n * n
    counts = [0] * n
    digits = [0] * total

    def rec(i: int, used: int):
        if i == total:
            yield tuple(digits)
            return
        limit = min(used + 1, n)
        for d in range(limit):
            if counts[d] == n:
                continue
            counts[d] += 1
            digits[i] = d
            yield from rec(i + 1, used + 1 if d == used else used)
            counts[d] -= 1

    yield from rec(0, 0)


def _encode(digits: Sequence[int], n: int) -> int:
    # cell 0 always holds digit 0 after relabeling; skip it
    code = 0
    for d in reversed(digits[1:]):
        code = code * n + d
    return code


def wavy_census(
    n: int,
    checkpoint_path: Optional[str] = None,
    checkpoint_every: int = 250_000,
    progress=None,
) -> dict[tuple[int, ...], bool]:
    """Census of all equi-n-squares up to isotopism and transposition:
    canonical form -> wavy-latin flag.

    Streams every coloring with a pinned digit-0 cell (one representative
    per color renaming), marks whole symmetry orbits in a bitset so each
    type is processed once, and runs the wavy search on one representative
    per type.  The optional checkpoint file makes the scan resumable; see
    write_census_checkpoint for the layout.
    """
    if n > 4:
        raise ValueError("the census is sized for n <= 4")
    transforms = _cell_transforms(n)
    seen = bytearray((n ** (n * n - 1) + 7) // 8)
    types: dict[tuple[int, ...], bool] = {}
    start_index = 0

    if checkpoint_path:
        loaded = read_census_checkpoint(checkpoint_path, n)
        if loaded is not None:
            start_index, types = loaded
            for canon in types:
                for t in transforms:
                    code = _encode(_relabel([canon[i] for i in t], n), n)
                    seen[code >> 3] |= 1 << (code & 7)

    index = 0
    for digits in _iter_canonical_colorings(n):
        index += 1
        if index <= start_index:
            continue
        code = _encode(digits, n)
        if (seen[code >> 3] >> (code & 7)) & 1:
            continue
        canon: Optional[tuple[int, ...]] = None
        for t in transforms:
            variant = _relabel([digits[i] for i in t], n)
            vcode = _encode(variant, n)
            seen[vcode >> 3] |= 1 << (vcode & 7)
            if canon is None or variant < canon:
                canon = variant
        wavy = wavy_latin(SquareState(n, digits)) is not None
        types[canon] = wavy
        if progress and len(types) % 250 == 0:
            progress(index, len(types))
        if checkpoint_path and index % checkpoint_every == 0:
            write_census_checkpoint(checkpoint_path, n, index, types)
    if checkpoint_path:
        write_census_checkpoint(checkpoint_path, n, index, types)
    return types


def write_census_checkpoint(path: str, n: int, scan_index: int, types: dict) -> None:
    """Checkpoint layout: a header line "n scan_index", then one line per
    type: the canonical form as a digit string and the wavy flag (0/1)."""
    with open(path, "w") as fh:
        fh.write(f"{n} {scan_index}\n")
        for canon in sorted(types):
            fh.write("".join(map(str, canon)) + f" {int(types[canon])}\n")


def read_census_checkpoint(path: str, n: int):
    try:
        fh = open(path)
    except FileNotFoundError:
        return None
    with fh:
        header = fh.readline().split()
        if len(header) != 2 or int(header[0]) != n:
            return None
        scan_index = int(header[1])
        types = {}
        for line in fh:
            form, flag = line.split()
            types[tuple(int(ch) for ch in form)] = bool(int(flag))
    return scan_index, types


def random_state(n: int, rng: random.Random) -> SquareState:
    digits = [d for d in range(n) for _ in range(n)]
    rng.shuffle(digits)
    return SquareState(n, digits)
