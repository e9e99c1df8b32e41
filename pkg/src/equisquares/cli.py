"""Command-line surface: table reproduction, verification campaigns,
transition solving, stream generation and output forcing.

Exit codes: 0 success, 1 verification failure, 2 usage error.  Every
randomized campaign takes a seed and is reproducible from (seed, flags);
samples are seeded individually, so --jobs changes wall time, never counts.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from itertools import combinations
from multiprocessing import Pool
from typing import Optional

from . import core, flows, ngon, optimize, stream, transit
from .core import (
    MoveSequence,
    PositionSet,
    SquareState,
    format_square,
    parse_square,
    sequence_from_records,
    sequence_to_records,
)

# ---------------------------------------------------------------------------
# campaigns (also driven directly by the acceptance suite)


def _sample_rng(seed: int, index: int) -> random.Random:
    return random.Random((seed << 24) ^ index)


def _key_result_chunk(args) -> int:
    n, seed, start, stop = args
    bad = 0
    for i in range(start, stop):
        cells = optimize.random_n_set(n, _sample_rng(seed, i))
        if not optimize.vh_shuffle_exists(cells, n):
            bad += 1
    return bad


def verify_key_result(
    n: int, samples: int = 0, seed: int = 0, exhaustive: bool = False, jobs: int = 1
) -> dict:
    """Every n-set must reach an H-graph with one VH-shuffle: count the
    sets where the search ladder fails (expected: zero in range)."""
    failures = 0
    total = 0
    if exhaustive:
        for combo in combinations(range(n * n), n):
            total += 1
            cells = [(k % n, k // n) for k in combo]
            if not optimize.vh_shuffle_exists(cells, n):
                failures += 1
    else:
        total = samples
        chunks = _chunk_ranges(samples, jobs)
        work = [(n, seed, a, b) for a, b in chunks]
        if jobs > 1:
            with Pool(jobs) as pool:
                failures = sum(pool.map(_key_result_chunk, work))
        else:
            failures = sum(_key_result_chunk(w) for w in work)
    return {"kind": "key-result", "n": n, "total": total, "failures": failures}


def _hmove_chunk(args) -> int:
    n, seed, start, stop = args
    bad = 0
    for i in range(start, stop):
        cells = optimize.random_n_set(n, _sample_rng(seed, i))
        if optimize.hmove_only_fails(cells, n):
            bad += 1
    return bad


def verify_hmove_only(n: int, samples: int, seed: int = 0, jobs: int = 1) -> dict:
    """Count sets that no H-move alone sends onto an H-graph."""
    chunks = _chunk_ranges(samples, jobs)
    work = [(n, seed, a, b) for a, b in chunks]
    if jobs > 1:
        with Pool(jobs) as pool:
            failures = sum(pool.map(_hmove_chunk, work))
    else:
        failures = sum(_hmove_chunk(w) for w in work)
    return {"kind": "hmove-only", "n": n, "total": samples, "failures": failures}


def _chunk_ranges(total: int, jobs: int) -> list[tuple[int, int]]:
    jobs = max(1, jobs)
    step = -(-total // jobs) if total else 1
    return [(a, min(a + step, total)) for a in range(0, total, step)] or [(0, 0)]


def verify_three_cycle(n: int) -> dict:
    """Check the 2 1/2-shuffle gadget realizes exactly its 3-cycle on every
    cell, for all valid (k, r)."""
    failures = 0
    total = 0
    for r in range(1, n):
        for k in range(n):
            total += 1
            seq = transit.three_cycle_moves(k, r, n)
            x = k + n * r
            for rank in range(n * n):
                p = core.from_rank(rank, n)
                image = seq.apply_position(p)
                got = image.col + n * image.row
                want = {0: 1, 1: x, x: 0}.get(rank, rank)
                if got != want:
                    failures += 1
                    break
    return {"kind": "three-cycle", "n": n, "total": total, "failures": failures}


def verify_flows(n_max: int, samples: int, seed: int = 0) -> dict:
    """Randomized transversal instances at every valid (k, l) with maximal
    avoided sets, flow value checked to saturate every part."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        n = rng.randrange(2, n_max + 1)
        k = rng.randrange(1, n + 1)
        l = rng.randrange(0, k)
        ground = list(range(n * k - l))
        u_parts = _random_partition(ground, n, k, rng)
        w_parts = _random_partition(ground, n, k, rng)
        avoid = rng.sample(ground, k - l - 1) if k - l - 1 > 0 else []
        try:
            chosen = flows.common_transversal(u_parts, w_parts, avoid)
        except AssertionError:
            failures += 1
            continue
        if not _valid_transversal(chosen, u_parts, w_parts, avoid):
            failures += 1
    return {"kind": "flows", "n": n_max, "total": samples, "failures": failures}


def _random_partition(ground, nparts, k, rng):
    items = list(ground)
    rng.shuffle(items)
    # drop (k*nparts - len) slots: sizes all <= k, none empty
    sizes = [k] * nparts
    deficit = k * nparts - len(items)
    assert deficit < k
    while deficit:
        i = rng.randrange(nparts)
        if sizes[i] > 1:
            sizes[i] -= 1
            deficit -= 1
    parts = []
    at = 0
    for s in sizes:
        parts.append(items[at : at + s])
        at += s
    return parts


def _valid_transversal(chosen, u_parts, w_parts, avoid):
    if set(chosen) & set(avoid):
        return False
    for parts in (u_parts, w_parts):
        hits = [sum(1 for x in chosen if x in set(p)) for p in parts]
        if hits != [1] * len(parts):
            return False
    return True


def verify_forcing(n: int, samples: int, length: int = 8, seed: int = 0) -> dict:
    """Random (input, target) sequence pairs forced and replayed."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        state = flows.random_state(n, rng)
        inputs = [stream.BaseNNumber.from_int(n, rng.randrange(n**n)) for _ in range(length)]
        targets = [stream.BaseNNumber.from_int(n, rng.randrange(n**n)) for _ in range(length)]
        schedule = stream.force_run(state, inputs, targets)
        outputs, _ = stream.standard_mode_run(
            state, inputs, stream.ScheduleShuffleSource(schedule)
        )
        if outputs != targets or len(schedule) != 4 * length:
            failures += 1
    return {"kind": "forcing", "n": n, "total": samples, "failures": failures}


def verify_compile(n: int, samples: int, seed: int = 0, naive: bool = False) -> dict:
    """Random state pairs compiled and applied; bounded length asserted."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        p_state = flows.random_state(n, rng)
        q_state = flows.random_state(n, rng)
        try:
            if naive:
                transit.naive_compile(p_state, q_state)
            else:
                transit.bounded_compile(p_state, q_state)
        except AssertionError:
            failures += 1
    return {"kind": "compile", "n": n, "total": samples, "failures": failures}


_VERIFY_KINDS = {
    "key-result",
    "hmove-only",
    "three-cycle",
    "flows",
    "forcing",
    "compile",
}


# ---------------------------------------------------------------------------
# tables


def _parse_range(text: str, default: tuple[int, int]) -> tuple[int, int]:
    if not text:
        return default
    if ".." in text:
        a, b = text.split("..", 1)
        return int(a), int(b)
    v = int(text)
    return v, v


def table_rows(which: str, lo: int, hi: int) -> tuple[list[str], list[list]]:
    ns = range(lo, hi + 1)
    if which == "counts":
        header = ["n", "log2_states", "log2_ryser_latin"]
        rows = [
            [n, f"{core.log2_state_count(n):.3f}", f"{core.log2_ryser_latin_bound(n):.3f}"]
            for n in ns
        ]
    elif which == "bias":
        header = ["n", "E", "B", "B_N"]
        rows = []
        for n in ns:
            b = stream.bias(n)
            rows.append([n, f"{float(b.e):.2f}", f"{float(b.b):.2f}", f"{float(b.b_n):.2f}"])
    elif which == "minrows":
        header = ["n", "start", "r", "critical_partitions"]
        rows = []
        for n in ns:
            res = optimize.minrows(n)
            crit = ";".join("+".join(map(str, p)) for p in res.critical)
            rows.append([n, res.start, res.rows, crit])
    elif which == "nbf":
        header = ["b", "f", "n_bf"]
        rows = [[b, f, optimize.n_bf(b, f)] for b in range(lo, hi + 1) for f in range(b, hi + 1)]
    elif which == "spaghetti":
        header = ["n", "minrows", "spaghetti"]
        rows = [[n, optimize.minrows(n).rows, optimize.spaghetti_boundary(n)] for n in ns]
    elif which == "sh":
        header = ["n", "avg_shuffles"]
        rows = [[n, f"{core.avg_shuffles(n):.6f}"] for n in ns]
    elif which == "dn":
        header = ["n", "shuffle_floor"]
        rows = [[n, core.shuffle_lower_bound(n)] for n in ns]
    else:
        raise ValueError(f"unknown table {which!r}")
    return header, rows


def _emit_table(header, rows, fmt: str, out) -> None:
    if fmt == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(str(x) for x in row) + "\n")
    else:
        widths = [
            max(len(str(h)), *(len(str(r[i])) for r in rows)) if rows else len(str(h))
            for i, h in enumerate(header)
        ]
        out.write("  ".join(str(h).rjust(w) for h, w in zip(header, widths)) + "\n")
        for row in rows:
            out.write("  ".join(str(x).rjust(w) for x, w in zip(row, widths)) + "\n")


_TABLE_DEFAULTS = {
    "counts": (8, 20),
    "bias": (2, 33),
    "minrows": (8, 50),
    "nbf": (2, 21),
    "spaghetti": (8, 50),
    "sh": (2, 64),
    "dn": (2, 50),
}


# ---------------------------------------------------------------------------
# file helpers


def _read_state(path: str) -> SquareState:
    with open(path) as fh:
        return parse_square(fh.read())


def _read_numbers(path: str, n: int, digit_mode: bool) -> list[stream.BaseNNumber]:
    numbers = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if digit_mode:
                digits = [int(tok) for tok in line.split()]
                numbers.append(stream.BaseNNumber(n, tuple(reversed(digits))))
            else:
                numbers.append(stream.BaseNNumber.from_int(n, int(line)))
    return numbers


def _write_numbers(path_or_out, numbers, digit_mode: bool) -> None:
    def _emit(out):
        for x in numbers:
            out.write(x.digit_string() if digit_mode else str(x.value))
            out.write("\n")

    if isinstance(path_or_out, str):
        with open(path_or_out, "w") as fh:
            _emit(fh)
    else:
        _emit(path_or_out)


def _write_moves(path: str, seq: MoveSequence) -> None:
    with open(path, "w") as fh:
        json.dump(sequence_to_records(seq), fh)
        fh.write("\n")


def _read_moves(path: str) -> MoveSequence:
    with open(path) as fh:
        return sequence_from_records(json.load(fh))


def _parse_ngon_set(text: str, n: int) -> ngon.NGonSet:
    return ngon.ngon_set(n, (int(tok) for tok in text.split(",")))


# ---------------------------------------------------------------------------
# subcommand mains


def _cmd_tables(args) -> int:
    lo, hi = _parse_range(args.range, _TABLE_DEFAULTS[args.which])
    header, rows = table_rows(args.which, lo, hi)
    _emit_table(header, rows, args.format, sys.stdout)
    return 0


def _cmd_verify(args) -> int:
    if args.kind == "key-result":
        report = verify_key_result(
            args.n, args.samples, args.seed, args.exhaustive, args.jobs
        )
    elif args.kind == "hmove-only":
        report = verify_hmove_only(args.n, args.samples, args.seed, args.jobs)
        print(f"{report['kind']} n={report['n']}: {report['failures']} failures "
              f"in {report['total']} samples")
        return 0  # a nonzero count is data here, not a breach
    elif args.kind == "three-cycle":
        report = verify_three_cycle(args.n)
    elif args.kind == "flows":
        report = verify_flows(args.n, args.samples, args.seed)
    elif args.kind == "forcing":
        report = verify_forcing(args.n, args.samples, seed=args.seed)
    elif args.kind == "compile":
        report = verify_compile(args.n, args.samples, args.seed)
    else:
        raise ValueError(args.kind)
    print(f"{report['kind']} n={report['n']}: {report['failures']} failures "
          f"in {report['total']} checks")
    return 1 if report["failures"] else 0


def _cmd_solve(args) -> int:
    p_state = _read_state(args.source)
    q_state = _read_state(args.target)
    if args.naive:
        seq = transit.naive_compile(p_state, q_state)
        report = {
            "n": p_state.n,
            "shuffle_halves": seq.shuffle_halves,
            "shuffle_text": seq.shuffle_text(),
            "distance_floor_shuffles": transit.shuffle_distance_floor(p_state.n),
        }
    else:
        report = transit.compile_report(p_state, q_state)
        seq = report.pop("moves")
    if p_state.apply(seq) != q_state:  # replay check before writing
        print("verification failed: compiled moves do not reach the target",
              file=sys.stderr)
        return 1
    _write_moves(args.output, seq)
    for key, value in report.items():
        print(f"{key}: {value}")
    return 0


def _cmd_stream(args) -> int:
    state = _read_state(args.state)
    inputs = _read_numbers(args.inputs, state.n, args.digits)
    if args.schedule:
        source = stream.ScheduleShuffleSource(_read_moves(args.schedule))
    else:
        if args.seed is None:
            print("--seed is required without --schedule", file=sys.stderr)
            return 2
        source = stream.SeededShuffleSource(args.seed)
    outputs, _ = stream.standard_mode_run(state, inputs, source)
    _write_numbers(args.output or sys.stdout, outputs, args.digits)
    return 0


def _cmd_force(args) -> int:
    state = _read_state(args.state)
    inputs = _read_numbers(args.inputs, state.n, args.digits)
    targets = _read_numbers(args.targets, state.n, args.digits)
    schedule = stream.force_run(state, inputs, targets)
    outputs, _ = stream.standard_mode_run(
        state, inputs, stream.ScheduleShuffleSource(schedule)
    )
    if outputs != targets:  # replay check before writing
        print("verification failed: schedule does not force the targets",
              file=sys.stderr)
        return 1
    _write_moves(args.output, schedule)
    print(f"schedule: {len(schedule)} elementary moves = "
          f"{schedule.shuffle_text()} shuffles for {len(inputs)} steps")
    return 0


def _cmd_ngon(args) -> int:
    if args.op == "cyclotomic":
        poly = ngon.cyclotomic(args.n)
        print(" ".join(str(c) for c in poly.coeffs))
        return 0
    sets = [_parse_ngon_set(text, args.n) for text in args.set]
    if args.op == "pair":
        if len(sets) != 2:
            print("pair needs exactly two --set", file=sys.stderr)
            return 2
        v = ngon.rotate_apart_pair(sets[0], sets[1])
        print("none" if v is None else f"rotation {v}")
        return 0
    if args.op == "family":
        try:
            rot = ngon.rotate_apart_family(sets, budget=args.budget)
        except ngon.SearchBudgetExceeded:
            print("unknown (budget exhausted)")
            return 1
        print("none" if rot is None else "rotations " + ",".join(map(str, rot)))
        return 0
    if args.op == "balanced":
        if len(sets) != 1:
            print("balanced needs exactly one --set", file=sys.stderr)
            return 2
        print(ngon.is_d_balanced(sets[0], args.d))
        return 0
    raise ValueError(args.op)


def _cmd_wavy(args) -> int:
    if args.census:
        types = flows.wavy_census(args.census, checkpoint_path=args.checkpoint)
        non_wavy = sum(1 for wavy in types.values() if not wavy)
        print(f"n={args.census}: {len(types)} types, {non_wavy} not wavy-latin")
        return 0
    state = _read_state(args.state)
    try:
        result = flows.wavy_latin(state, budget=args.budget)
    except ngon.SearchBudgetExceeded:
        print("unknown (budget exhausted)")
        return 1
    if result is None:
        print("not wavy-latin")
        return 0
    hgraphs, vgraphs = result
    print("wavy-latin")
    for label, graphs in (("H", hgraphs), ("V", vgraphs)):
        for i, g in enumerate(graphs):
            cells = " ".join(f"({p.col},{p.row})" for p in sorted(g.members))
            print(f"{label}{i}: {cells}")
    return 0


def _cmd_flows(args) -> int:
    state = _read_state(args.state)
    graphs = flows.latin_graph_partition(state, args.axis)
    for i, g in enumerate(graphs):
        cells = " ".join(f"({p.col},{p.row})" for p in sorted(g.members))
        print(f"{args.axis}{i}: {cells}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="equisquares",
        description="equi-n-squares: shuffles, transversals, compilation, streams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tables", help="reproduce the numeric tables")
    p.add_argument("which", choices=sorted(_TABLE_DEFAULTS))
    p.add_argument("range", nargs="?", default="", help="e.g. 8..50 or a single n")
    p.add_argument("--format", choices=("csv", "text"), default="csv")
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("kind", choices=sorted(_VERIFY_KINDS))
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--budget", type=int, default=ngon.DEFAULT_FAMILY_BUDGET)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("solve", help="compile a transition between two squares")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("-o", "--output", required=True, help="move sequence file (JSON)")
    p.add_argument("--naive", action="store_true")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("stream", help="standard operation mode")
    p.add_argument("--state", required=True)
    p.add_argument("--inputs", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--schedule", help="replay an explicit shuffle schedule")
    p.add_argument("--digits", action="store_true",
                   help="numbers as space-separated digits, most significant first")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_stream)

    p = sub.add_parser("force", help="build a schedule forcing given outputs")
    p.add_argument("--state", required=True)
    p.add_argument("--inputs", required=True)
    p.add_argument("--targets", required=True)
    p.add_argument("--digits", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_force)

    p = sub.add_parser("ngon", help="rotate-apart and balance questions")
    p.add_argument("op", choices=("pair", "family", "cyclotomic", "balanced"))
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--set", action="append", default=[],
                   help="comma-separated residues; repeatable")
    p.add_argument("-d", type=int, default=1)
    p.add_argument("--budget", type=int, default=ngon.DEFAULT_FAMILY_BUDGET)
    p.set_defaults(func=_cmd_ngon)

    p = sub.add_parser("wavy", help="wavy-latin check or census")
    p.add_argument("--state")
    p.add_argument("--census", type=int)
    p.add_argument("--checkpoint")
    p.add_argument("--budget", type=int, default=flows.DEFAULT_WAVY_BUDGET)
    p.set_defaults(func=_cmd_wavy)

    p = sub.add_parser("flows", help="latin graph partition of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--axis", choices=("H", "V"), default="H")
    p.set_defaults(func=_cmd_flows)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
