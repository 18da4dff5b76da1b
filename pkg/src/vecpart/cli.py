"""Command-line front end: decompose, partition, scan, compare.

Every command exits 0 on success; library errors map to the distinct codes
declared in vecpart.errors, argparse usage errors exit 2, and IO failures
exit 3. JSON reports are written atomically (temp file, then rename) and are
byte-identical across reruns with the same inputs and seeds, except for the
timing field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from pathlib import Path

from . import __version__
from .errors import MalformedLine, SizeMismatch, VecpartError
from .graph import Graph, GroundTruth, load_edge_list
from .harness import ScanRecord, best_of_restarts, time_scan
from .metrics import nmi, sankey_links, sankey_to_json, uncertainty_coefficient, variation_of_information
from .objective import Partition
from .spectral import build_embedding, decompose_modularity_matrix, decompose_transition, save_basis
from .vp import VPConfig


def _load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return load_edge_list(fh)


def _load_partition_file(path: str) -> Partition:
    """Read "node_id group_id" lines (0-based, one per node) into a Partition."""
    pairs: dict[int, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise MalformedLine(f"{path} line {lineno}: expected 'node group', got {line!r}")
            try:
                node = int(parts[0])
                grp = int(parts[1])
            except ValueError:
                raise MalformedLine(f"{path} line {lineno}: non-integer field in {line!r}") from None
            if node in pairs:
                raise MalformedLine(f"{path} line {lineno}: node {node} listed twice")
            pairs[node] = grp
    if not pairs:
        raise MalformedLine(f"{path}: no assignments found")
    n = len(pairs)
    if sorted(pairs) != list(range(n)):
        raise MalformedLine(f"{path}: node ids must be exactly 0..{n - 1}")
    return Partition.from_labels([pairs[i] for i in range(n)])


def _write_partition_file(path: str, partition: Partition) -> None:
    text = "".join(f"{i} {int(grp)}\n" for i, grp in enumerate(partition.assignment))
    _write_atomic(path, text)


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _graph_payload(g: Graph) -> dict:
    return {"n": g.n, "m": g.total_weight, "edges": g.num_edges, "sha256": g.sha256()}


def _record_payload(rec: ScanRecord) -> dict:
    payload = {
        "time": rec.time,
        "dim": rec.dim,
        "mode": rec.mode,
        "num_communities": rec.num_communities,
        "objective": rec.objective,
        "partition": [int(x) for x in rec.partition.assignment],
    }
    if rec.nmi is not None:
        payload["nmi"] = rec.nmi
    if rec.uncertainty is not None:
        payload["uncertainty"] = rec.uncertainty
    if rec.vi_to_previous is not None:
        payload["vi_prev"] = rec.vi_to_previous
    return payload


def _make_report(g: Graph, params: dict, records: list[dict], started: float) -> dict:
    return {
        "version": __version__,
        "graph": _graph_payload(g),
        "params": params,
        "records": records,
        "timing_ms": (time.perf_counter() - started) * 1000.0,
    }


def validate_report(report: dict) -> None:
    """Structural check of a run report against the committed schema."""

    def expect(cond: bool, msg: str) -> None:
        if not cond:
            raise ValueError(f"invalid report: {msg}")

    expect(isinstance(report, dict), "not an object")
    for key in ("version", "graph", "params", "records", "timing_ms"):
        expect(key in report, f"missing key {key!r}")
    expect(isinstance(report["version"], str), "version must be a string")
    graph = report["graph"]
    expect(isinstance(graph, dict), "graph must be an object")
    for key, types in (("n", int), ("m", (int, float)), ("edges", int), ("sha256", str)):
        expect(key in graph and isinstance(graph[key], types), f"bad graph.{key}")
    expect(isinstance(report["params"], dict), "params must be an object")
    expect(isinstance(report["records"], list), "records must be an array")
    expect(isinstance(report["timing_ms"], (int, float)), "timing_ms must be a number")
    for idx, rec in enumerate(report["records"]):
        expect(isinstance(rec, dict), f"records[{idx}] must be an object")
        for key in ("time", "dim", "mode", "num_communities", "objective", "partition"):
            expect(key in rec, f"records[{idx}] missing {key!r}")
        expect(
            rec["time"] is None or isinstance(rec["time"], (int, float)),
            f"records[{idx}].time must be a number or null",
        )
        expect(isinstance(rec["dim"], int), f"records[{idx}].dim must be an integer")
        expect(isinstance(rec["mode"], str), f"records[{idx}].mode must be a string")
        expect(
            isinstance(rec["num_communities"], int), f"records[{idx}].num_communities must be an integer"
        )
        expect(
            isinstance(rec["objective"], (int, float)), f"records[{idx}].objective must be a number"
        )
        expect(
            isinstance(rec["partition"], list)
            and all(isinstance(x, int) for x in rec["partition"]),
            f"records[{idx}].partition must be an integer array",
        )
        for key in ("nmi", "uncertainty", "vi_prev"):
            if key in rec:
                expect(isinstance(rec[key], (int, float)), f"records[{idx}].{key} must be a number")
    if "diagnostics" in report:
        expect(isinstance(report["diagnostics"], dict), "diagnostics must be an object")


def _emit_report(report: dict, output: str | None) -> None:
    validate_report(report)
    text = json.dumps(report, indent=2) + "\n"
    if output:
        _write_atomic(output, text)
    else:
        sys.stdout.write(text)


def cmd_decompose(args: argparse.Namespace) -> int:
    g = _load_graph(args.graph)
    if args.source == "transition":
        basis = decompose_transition(g)
    else:
        basis = decompose_modularity_matrix(g)
    save_basis(basis, args.output)
    for value in basis.eigenvalues:
        print(f"{value:.6f}")
    return 0


def _basis_for_mode(g: Graph, mode: str):
    if mode == "modularity":
        return decompose_modularity_matrix(g)
    return decompose_transition(g)


def cmd_partition(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    g = _load_graph(args.graph)
    basis = _basis_for_mode(g, args.mode)
    t = None if args.mode == "modularity" else args.time
    emb = build_embedding(basis, args.mode, t=t, dim=args.dim)
    cfg = VPConfig(seed=args.seed)
    partition, objective, diag = best_of_restarts(emb, cfg, args.restarts)
    record = ScanRecord(
        time=emb.time,
        mode=args.mode,
        dim=emb.dim,
        partition=partition,
        objective=objective,
        num_communities=partition.num_groups,
    )
    params = {
        "command": "partition",
        "mode": args.mode,
        "time": args.time,
        "dim": args.dim,
        "restarts": args.restarts,
        "seed": args.seed,
    }
    report = _make_report(g, params, [_record_payload(record)], started)
    report["diagnostics"] = diag.as_dict()
    _emit_report(report, args.output)
    if args.partition_out:
        _write_partition_file(args.partition_out, partition)
    return 0


def cmd_scan(args: argparse.Namespace) -> int:
    if not 0 < args.tmin <= args.tmax:
        print(f"error: usage: need 0 < tmin <= tmax, got {args.tmin}, {args.tmax}", file=sys.stderr)
        return 2
    started = time.perf_counter()
    g = _load_graph(args.graph)
    truth = None
    if args.truth:
        truth_partition = _load_partition_file(args.truth)
        if truth_partition.n != g.n:
            raise SizeMismatch(
                f"truth file covers {truth_partition.n} nodes, graph has {g.n}"
            )
        truth = GroundTruth.from_labels(truth_partition.assignment)
    records = time_scan(
        g,
        args.tmin,
        args.tmax,
        args.npoints,
        mode=args.mode,
        dim=args.dim,
        cfg=VPConfig(seed=args.seed),
        restarts=args.restarts,
        truth=truth,
    )
    params = {
        "command": "scan",
        "tmin": args.tmin,
        "tmax": args.tmax,
        "npoints": args.npoints,
        "mode": args.mode,
        "dim": args.dim,
        "restarts": args.restarts,
        "seed": args.seed,
        "truth": args.truth,
    }
    report = _make_report(g, params, [_record_payload(r) for r in records], started)
    _emit_report(report, args.output)
    return 0


def cmd_compare(args: argparse.Namespace) -> int:
    pa = _load_partition_file(args.partition_a)
    pb = _load_partition_file(args.partition_b)
    print(f"nmi {nmi(pa, pb):.6f}")
    print(f"uncertainty {uncertainty_coefficient(pa, pb):.6f}")
    print(f"vi {variation_of_information(pa, pb):.6f}")
    if args.sankey:
        links = sankey_to_json(sankey_links(pa, pb))
        _write_atomic(args.sankey, json.dumps(links, indent=2) + "\n")
    return 0


def _positive_int(value: str) -> int:
    out = int(value)
    if out < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return out


def _nonnegative_int(value: str) -> int:
    out = int(value)
    if out < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vecpart",
        description="Multiscale community detection via spectral max-sum vector partitioning.",
    )
    parser.add_argument("--version", action="version", version=f"vecpart {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="eigendecompose a graph and dump the basis")
    p.add_argument("graph", help="edge-list file, 'i j [w]' per line, zero-based")
    p.add_argument("--source", choices=("transition", "modularity"), default="transition")
    p.add_argument("--output", required=True, help="path for the JSON basis dump")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("partition", help="optimise a single partition")
    p.add_argument("graph")
    p.add_argument("--mode", choices=("exponential", "linearised", "modularity"), default="exponential")
    p.add_argument("--time", type=float, default=1.0, help="Markov time or resolution (ignored for modularity mode)")
    p.add_argument("--dim", type=_positive_int, default=None, help="embedding dimension (default n-1)")
    p.add_argument("--restarts", type=_positive_int, default=5)
    p.add_argument("--seed", type=_nonnegative_int, default=0)
    p.add_argument("--output", default=None, help="write the JSON report here instead of stdout")
    p.add_argument("--partition-out", default=None, help="also write 'node group' lines here")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("scan", help="scan a geometric grid of Markov times")
    p.add_argument("graph")
    p.add_argument("--tmin", type=float, required=True)
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--npoints", type=_positive_int, required=True)
    p.add_argument("--mode", choices=("exponential", "linearised"), default="exponential")
    p.add_argument("--dim", type=_positive_int, default=None)
    p.add_argument("--restarts", type=_positive_int, default=5)
    p.add_argument("--seed", type=_nonnegative_int, default=0)
    p.add_argument("--truth", default=None, help="partition file with ground-truth labels")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("compare", help="compare two partition files")
    p.add_argument("partition_a", help="treated as the ground truth for the uncertainty coefficient")
    p.add_argument("partition_b")
    p.add_argument("--sankey", default=None, help="write contingency links as JSON here")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except VecpartError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: IO: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
