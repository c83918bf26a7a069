"""Command-line surface: generate graphs, run the matching engine, route
demands, split expanders, verify outputs, benchmark, replay manifests.

Exit codes: 0 success, 1 verification failure, 2 algorithmic failure (the
engine hit its iteration bound), 3 input or usage error.  Every command is
deterministic given its inputs and seed; each run can record a manifest
(inputs, outputs, hashes, seed, wall time) that ``replay`` re-executes and
checks for byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import engine as eng
from . import graph as gr
from . import hypergraph as hg
from . import routing as rt
from . import splitting as sp
from .halflayer import HalfLayerOracleSpec

OK, VERIFY_FAIL, ALGO_FAIL, INPUT_ERROR = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # usage errors follow the input-error exit contract
    def exit(self, status=0, message=None):
        if message:
            self._print_message(message, sys.stderr)
        raise SystemExit(INPUT_ERROR if status else 0)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class Manifest:
    """Record of one CLI run, sufficient to replay it."""

    def __init__(self, command: str, argv: list[str],
                 seed: Optional[int] = None):
        self.data = {
            "command": command,
            "argv": list(argv),
            "seed": seed,
            "inputs": {},
            "outputs": {},
            "overrides": {},
            "wall_ms": None,
            "status": None,
        }
        self._t0 = time.perf_counter()

    def add_input(self, path) -> None:
        p = Path(path)
        self.data["inputs"][str(p)] = _sha256(p)

    def add_output(self, path) -> None:
        p = Path(path)
        self.data["outputs"][str(p)] = _sha256(p)

    def override(self, **kv) -> None:
        self.data["overrides"].update(
            {k: v for k, v in kv.items() if v is not None})

    def finish(self, status: int, path: Optional[str]) -> None:
        self.data["wall_ms"] = round(
            (time.perf_counter() - self._t0) * 1000, 3)
        self.data["status"] = status
        if path:
            Path(path).write_text(
                json.dumps(self.data, indent=2, sort_keys=True) + "\n")


def _write(path, text: str, manifest: Optional[Manifest]) -> None:
    Path(path).write_text(text)
    if manifest:
        manifest.add_output(path)


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def _build_parser() -> _Parser:
    p = _Parser(prog="expaths",
                description="edge-disjoint expander routing toolbox")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph file")
    g.add_argument("--family", required=True, choices=gr.FAMILIES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--c", type=int)
    g.add_argument("--s", type=int)
    g.add_argument("--out", required=True)
    g.add_argument("--manifest")

    m = sub.add_parser("match", help="perfect matching of a hypergraph file")
    m.add_argument("hypergraph")
    m.add_argument("--out", required=True)
    m.add_argument("--delta", type=int, default=4)
    m.add_argument("--mu", type=_fraction, default=Fraction(1, 10))
    m.add_argument("--iteration-cap", type=int)
    m.add_argument("--verify-haxell", type=_fraction, metavar="PHI")
    m.add_argument("--trace")
    m.add_argument("--manifest")

    r = sub.add_parser("route", help="edge-disjoint paths for demand pairs")
    r.add_argument("--graph", required=True)
    r.add_argument("--demands", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--oracle", choices=("bfs", "blocking-flow"),
                   default="bfs")
    r.add_argument("--relaxed", action="store_true",
                   help="accept user-chosen r and delta")
    r.add_argument("--r", type=int)
    r.add_argument("--delta", type=int)
    r.add_argument("--trace")
    r.add_argument("--manifest")

    s = sub.add_parser("split", help="partition an expander into k expanders")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--template-family", default="self",
                   choices=("self",) + gr.FAMILIES)
    s.add_argument("--template-d", type=int)
    s.add_argument("--template-seed", type=int, default=0)
    s.add_argument("--template-c", type=int)
    s.add_argument("--template-s", type=int)
    s.add_argument("--oracle", choices=("bfs", "blocking-flow"),
                   default="bfs")
    s.add_argument("--relaxed", action="store_true")
    s.add_argument("--r", type=int)
    s.add_argument("--delta", type=int)
    s.add_argument("--manifest")

    v = sub.add_parser("verify", help="verify a solution or split")
    vsub = v.add_subparsers(dest="kind", required=True)
    vs = vsub.add_parser("solution")
    vs.add_argument("--graph", required=True)
    vs.add_argument("--demands", required=True)
    vs.add_argument("--solution", required=True)
    vs.add_argument("--r", type=int)
    vp = vsub.add_parser("split")
    vp.add_argument("--graph", required=True)
    vp.add_argument("--parts", nargs="+", required=True)
    vp.add_argument("--c", type=_fraction, default=Fraction(1, 200))

    b = sub.add_parser("bench", help="grid benchmark over families and sizes")
    b.add_argument("--families", default="complete,hypercube")
    b.add_argument("--sizes", default="8,16")
    b.add_argument("--k", type=int, default=1)
    b.add_argument("--oracles", default="bfs,blocking-flow")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--r", type=int, default=3)
    b.add_argument("--delta", type=int, default=2)
    b.add_argument("--out", required=True)
    b.add_argument("--manifest")

    rp = sub.add_parser("replay", help="re-run a manifest and compare outputs")
    rp.add_argument("manifest")
    return p


def _relaxed_guard(args) -> Optional[str]:
    if (args.r is not None or args.delta is not None) and not args.relaxed:
        return "--r/--delta require --relaxed"
    return None


def cmd_gen(args, argv) -> int:
    manifest = Manifest("gen", argv, seed=args.seed)
    try:
        g = gr.generate(args.family, args.n, d=args.d, seed=args.seed,
                        c=args.c, s=args.s)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    manifest.override(family=args.family, n=args.n, d=args.d, c=args.c,
                      s=args.s)
    _write(args.out, gr.dumps_graph(g), manifest)
    manifest.finish(OK, args.manifest)
    return OK


def cmd_match(args, argv) -> int:
    manifest = Manifest("match", argv)
    try:
        h = hg.loads_hypergraph(Path(args.hypergraph).read_text())
        manifest.add_input(args.hypergraph)
        problem = hg.validate(h)
        if problem:
            raise ValueError(problem)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish(INPUT_ERROR, args.manifest)
        return INPUT_ERROR
    if args.verify_haxell is not None:
        try:
            ok = hg.verify_strong_haxell(h, args.verify_haxell)
            print(f"strong-haxell check (phi={args.verify_haxell}): "
                  f"{'PASS' if ok else 'FAIL'}")
        except hg.CapExceeded as exc:
            print(f"strong-haxell check skipped: {exc}")
    cfg = eng.EngineConfig(delta=args.delta, mu=args.mu,
                           iteration_cap=args.iteration_cap)
    manifest.override(delta=args.delta, mu=str(args.mu),
                      iteration_cap=args.iteration_cap)
    try:
        result = eng.run_engine(h, cfg)
    except eng.NoProgressError as exc:
        print(f"matching failed: {exc} (last signature "
              f"{exc.signature.canonical()})", file=sys.stderr)
        manifest.finish(ALGO_FAIL, args.manifest)
        return ALGO_FAIL
    _write(args.out, hg.dumps_matching(result.matching), manifest)
    if args.trace:
        _write(args.trace, "".join(ln + "\n" for ln in result.trace), manifest)
    manifest.finish(OK, args.manifest)
    return OK


def _oracle_kind(name: str) -> str:
    return {"bfs": "graph-bfs", "blocking-flow": "graph-blocking-flow"}[name]


def cmd_route(args, argv) -> int:
    manifest = Manifest("route", argv)
    guard = _relaxed_guard(args)
    if guard:
        print(f"error: {guard}", file=sys.stderr)
        return INPUT_ERROR
    try:
        g = gr.loads_graph(Path(args.graph).read_text())
        demands = rt.loads_demands(Path(args.demands).read_text())
        manifest.add_input(args.graph)
        manifest.add_input(args.demands)
        inst = rt.routing_instance(g, demands, r=args.r, delta=args.delta)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish(INPUT_ERROR, args.manifest)
        return INPUT_ERROR
    manifest.override(oracle=args.oracle, r=args.r, delta=args.delta,
                      relaxed=args.relaxed or None)
    cfg = eng.EngineConfig(
        delta=1, oracle=HalfLayerOracleSpec(kind=_oracle_kind(args.oracle)))
    try:
        routed = rt.route_full(inst, cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish(INPUT_ERROR, args.manifest)
        return INPUT_ERROR
    except rt.RoutingError as exc:
        print(f"routing failed: {exc}", file=sys.stderr)
        _print_hypothesis(exc.hypothesis)
        manifest.finish(ALGO_FAIL, args.manifest)
        return ALGO_FAIL
    _write(args.out, rt.dumps_solution(routed.solution), manifest)
    if args.trace:
        _write(args.trace, "".join(ln + "\n" for ln in routed.engine.trace),
               manifest)
    _print_hypothesis(routed.hypothesis)
    print(f"routed {len(demands)} demands with r={routed.r} "
          f"delta={routed.delta} in {routed.engine.iterations} iterations")
    manifest.finish(OK, args.manifest)
    return OK


def _print_hypothesis(rep: Optional[rt.HypothesisReport]) -> None:
    if rep is None:
        return
    print(f"hypothesis phi^3*delta >= (35 log2 n)^3 k: "
          f"{rep.lhs:.6g} vs {rep.rhs:.6g} "
          f"({'satisfied' if rep.satisfied else 'not satisfied; relaxed run'}); "
          f"haxell strength phi*delta/(32k) = {rep.haxell_phi}")


def cmd_split(args, argv) -> int:
    manifest = Manifest("split", argv, seed=args.template_seed)
    guard = _relaxed_guard(args)
    if guard:
        print(f"error: {guard}", file=sys.stderr)
        return INPUT_ERROR
    try:
        g = gr.loads_graph(Path(args.graph).read_text())
        manifest.add_input(args.graph)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish(INPUT_ERROR, args.manifest)
        return INPUT_ERROR
    tcfg = sp.TemplateConfig(family=args.template_family, d=args.template_d,
                             seed=args.template_seed, c=args.template_c,
                             s=args.template_s)
    ecfg = eng.EngineConfig(
        delta=1, oracle=HalfLayerOracleSpec(kind=_oracle_kind(args.oracle)))
    manifest.override(k=args.k, template=args.template_family,
                      r=args.r, delta=args.delta)
    try:
        result = sp.split(g, args.k, tcfg, ecfg, r=args.r, delta=args.delta)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        manifest.finish(INPUT_ERROR, args.manifest)
        return INPUT_ERROR
    except rt.RoutingError as exc:
        print(f"split routing failed: {exc}", file=sys.stderr)
        _print_hypothesis(exc.hypothesis)
        manifest.finish(ALGO_FAIL, args.manifest)
        return ALGO_FAIL
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for i, used in enumerate(result.edge_sets):
        part = gr.MultiGraph(g.num_vertices,
                             [g.endpoints(eid) for eid in sorted(used)])
        _write(outdir / f"part{i}.graph", gr.dumps_graph(part), manifest)
    _write(outdir / "summary.txt", sp.dumps_split_summary(result), manifest)
    print(sp.dumps_split_summary(result), end="")
    manifest.finish(OK, args.manifest)
    return OK


def cmd_verify(args) -> int:
    try:
        g = gr.loads_graph(Path(args.graph).read_text())
        if args.kind == "solution":
            demands = rt.loads_demands(Path(args.demands).read_text())
            sol = rt.loads_solution(Path(args.solution).read_text())
            inst = rt.routing_instance(g, demands, r=args.r)
            problem = rt.verify_solution(inst, sol, r=args.r)
        else:
            parts = []
            for pth in args.parts:
                part = gr.loads_graph(Path(pth).read_text())
                ids = _edges_to_ids(g, part)
                if ids is None:
                    print(f"verification failed: {pth} is not a subgraph")
                    return VERIFY_FAIL
                parts.append(ids)
            problem = _verify_split_ids(g, parts, args.c)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    if problem:
        print(f"verification failed: {problem}")
        return VERIFY_FAIL
    print("verification ok")
    return OK


def _edges_to_ids(g: gr.MultiGraph, part: gr.MultiGraph) -> Optional[list[int]]:
    """Map a part file's edges back to host edge ids (parallel edges are
    interchangeable, so assign lowest unused id per endpoint pair)."""
    if part.num_vertices != g.num_vertices:
        return None
    pool: dict[tuple[int, int], list[int]] = {}
    for eid, (u, v) in enumerate(g.edges):
        pool.setdefault((min(u, v), max(u, v)), []).append(eid)
    taken: dict[tuple[int, int], int] = {}
    out = []
    for u, v in part.edges:
        key = (min(u, v), max(u, v))
        idx = taken.get(key, 0)
        ids = pool.get(key, [])
        if idx >= len(ids):
            return None
        out.append(ids[idx])
        taken[key] = idx + 1
    return out


def _verify_split_ids(g: gr.MultiGraph, parts: list[list[int]],
                      c: Fraction) -> Optional[str]:
    seen: set[int] = set()
    for i, ids in enumerate(parts):
        for eid in ids:
            if eid in seen:
                return f"overlap: edge {eid} appears in more than one part"
            seen.add(eid)
    phi_host, _ = gr.conductance_exact(g)
    for i, ids in enumerate(parts):
        part = gr.MultiGraph(g.num_vertices,
                             [g.endpoints(eid) for eid in sorted(ids)])
        phi_i, _ = gr.conductance_exact(part)
        if not sp.conductance_meets_bound(phi_i, phi_host, c,
                                          g.num_vertices):
            return (f"part {i}: conductance {phi_i} below "
                    f"{c} * {phi_host} / log2({g.num_vertices})")
    return None


def cmd_bench(args, argv) -> int:
    import random

    manifest = Manifest("bench", argv, seed=args.seed)
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    oracles = [o.strip() for o in args.oracles.split(",") if o.strip()]
    rows = ["family,n,k,oracle,iters,wall_ms,status"]
    for family in families:
        for n in sizes:
            rng = random.Random((args.seed, family, n).__repr__())
            try:
                g = gr.generate(family, n,
                                d=4 if family == "random-regular" else None,
                                seed=args.seed)
            except ValueError:
                for oracle in oracles:
                    rows.append(f"{family},{n},{args.k},{oracle},0,0.0,fail")
                continue
            demand_count = max(1, n // 4)
            eids = rng.sample(range(g.num_edges),
                              min(demand_count, g.num_edges))
            demands = [g.endpoints(eid) for eid in sorted(eids)]
            for oracle in oracles:
                cfg = eng.EngineConfig(delta=1, oracle=HalfLayerOracleSpec(
                    kind=_oracle_kind(oracle)))
                t0 = time.perf_counter()
                try:
                    inst = rt.routing_instance(g, demands, r=args.r,
                                               delta=args.delta)
                    routed = rt.route_full(inst, cfg)
                    ms = (time.perf_counter() - t0) * 1000
                    rows.append(f"{family},{n},{inst.k},{oracle},"
                                f"{routed.engine.iterations},{ms:.3f},ok")
                    print(f"# siglen family={family} n={n} oracle={oracle} "
                          f"max_ell={routed.engine.max_ell} "
                          f"iters={routed.engine.iterations} "
                          f"sig_len={len(routed.engine.signatures[-1].psi)}")
                except (ValueError, rt.RoutingError):
                    ms = (time.perf_counter() - t0) * 1000
                    rows.append(f"{family},{n},{args.k},{oracle},0,"
                                f"{ms:.3f},fail")
    _write(args.out, "\n".join(rows) + "\n", manifest)
    manifest.finish(OK, args.manifest)
    return OK


def cmd_replay(args) -> int:
    try:
        data = json.loads(Path(args.manifest).read_text())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    for path, digest in data.get("inputs", {}).items():
        if not Path(path).exists() or _sha256(Path(path)) != digest:
            print(f"replay blocked: input {path} changed", file=sys.stderr)
            return INPUT_ERROR
    rc = main(data["argv"])
    if rc != data.get("status"):
        print(f"replay mismatch: exit {rc} vs recorded {data.get('status')}")
        return VERIFY_FAIL
    for path, digest in data.get("outputs", {}).items():
        if _sha256(Path(path)) != digest:
            print(f"replay mismatch: output {path} differs")
            return VERIFY_FAIL
    print("replay ok: outputs byte-identical")
    return OK


def main(argv: Optional[list[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "gen":
            return cmd_gen(args, argv)
        if args.command == "match":
            return cmd_match(args, argv)
        if args.command == "route":
            return cmd_route(args, argv)
        if args.command == "split":
            return cmd_split(args, argv)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "bench":
            return cmd_bench(args, argv)
        if args.command == "replay":
            return cmd_replay(args)
    except hg.CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
