"""Command-line front end: ``twinwidth <command> ...``.

Exit codes: 0 success, 2 usage or malformed input, 3 certificate mismatch,
4 timeout (a partial certificate is still written). ``dehn`` uses 0 for a
trivial word, 1 for a nontrivial one and 2 for errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import (
    BudgetExceeded, CertificateInvalid, ConstructionAbort, LayoutViolation, RefusalError, ScheduleError,
    SolverTimeout, StructuralError,
)
from .graph_core import OrderedGraph, read_graph, write_graph
from .matrix_core import OrderedMatrix, adjacency_matrix, read_matrix, write_matrix

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_MISMATCH, EXIT_TIMEOUT = 0, 1, 2, 3, 4
THREADS_ENV = "TWINWIDTH_THREADS"


class UsageError(Exception):
    pass


class Run:
    """Collects inputs, parameters and results for the run report."""

    def __init__(self, command: str, argv: list):
        self.command = command
        self.argv = argv
        self.inputs: list = []
        self.results: dict = {}
        self.lines: list = []
        self.code = EXIT_OK

    def read(self, path: str) -> str:
        p = Path(path)
        try:
            data = p.read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        self.inputs.append({"path": str(p), "sha256": hashlib.sha256(data).hexdigest()})
        return data.decode()

    def write(self, path, text: str) -> str:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
        self.results.setdefault("artifacts", {})[str(p)] = hashlib.sha256(text.encode()).hexdigest()
        return str(p)

    def say(self, line: str) -> None:
        self.lines.append(line)


# -- helpers ---------------------------------------------------------------------


def _instance(run: Run, args):
    if bool(args.graph) == bool(args.matrix):
        raise UsageError("give exactly one of --graph or --matrix")
    if args.graph:
        return read_graph(run.read(args.graph)), args.graph
    return read_matrix(run.read(args.matrix)), args.matrix


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer") from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _ints(text: str) -> list:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers: {text!r}") from None


# -- commands --------------------------------------------------------------------


def cmd_tww(run: Run, args):
    from .width import SearchBudget, stww_graph_exact, stww_matrix_exact, stww_upper_heuristic

    x, path = _instance(run, args)
    out = args.cert or f"{path}.cert.json"
    run.results["mode"] = "heuristic" if args.heuristic else "exact"
    if args.heuristic:
        w, cert = stww_upper_heuristic(x)
        run.results["upper_bound"] = w
    else:
        budget = SearchBudget(args.nodes, args.seconds)
        solve = stww_graph_exact if isinstance(x, OrderedGraph) else stww_matrix_exact
        try:
            w, cert = solve(x, budget, _threads(args))
        except SolverTimeout as exc:
            run.results.update(upper_bound=exc.best_width, lower_bound=exc.lower_bound, timeout=True,
                               certificate=run.write(out, exc.best_certificate.to_json()))
            run.say(f"timeout: {exc.lower_bound} <= stww <= {exc.best_width}")
            run.say(f"certificate {out}")
            run.code = EXIT_TIMEOUT
            return
        run.results["stww"] = w
    run.results["certificate"] = run.write(out, cert.to_json())
    run.say(f"stww {w}" if not args.heuristic else f"stww <= {w}")
    run.say(f"certificate {out}")


def cmd_gn(run: Run, args):
    from .grids import contains_k_grid, grid_number_graph, grid_number_matrix

    x, path = _instance(run, args)
    if isinstance(x, OrderedGraph):
        mode = "heuristic" if args.heuristic else "exact"
        try:
            k, order = grid_number_graph(x, mode, _threads(args))
        except RefusalError as exc:
            raise UsageError(str(exc)) from None
        M = adjacency_matrix(x, order) if x.n else OrderedMatrix(0, 0)
        run.results.update(mode=mode, gn=k, order=list(order))
    else:
        M = x
        k = grid_number_matrix(M)
        run.results.update(mode="exact", gn=k)
    w = contains_k_grid(M, k) if k else None
    if w is not None:
        data = json.loads(w.to_json())
        if "order" in run.results:
            data["order"] = run.results["order"]
        run.results["witness"] = run.write(args.cert or f"{path}.grid.json", json.dumps(data) + "\n")
    run.say(f"gn {k}" if run.results["mode"] == "exact" else f"gn <= {k}")
    if "order" in run.results:
        run.say("order " + " ".join(map(str, run.results["order"])))
    if w is not None:
        run.say(f"witness {run.results['witness']}")


def _queues(run: Run, args, strict: bool):
    from .queues import qn_exact, qn_fixed_order, sqn_exact, sqn_fixed_order, verify_layout

    if args.matrix:
        if not strict:
            raise UsageError("qn takes a graph; use sqn for matrices")
        from .queues import increasing_decomposition

        M = read_matrix(run.read(args.matrix))
        t, parts = increasing_decomposition(M)
        run.results["sqn"] = t
        run.results["parts"] = [sorted(P.ones) for P in parts]
        run.say(f"sqn {t}")
        return
    if not args.graph:
        raise UsageError("give --graph (or --matrix for sqn)")
    G = read_graph(run.read(args.graph))
    name = "sqn" if strict else "qn"
    if args.order:
        order = _ints(Path(args.order).read_text()) if os.path.exists(args.order) else _ints(args.order)
        if sorted(order) != list(range(G.n)):
            raise UsageError("--order must list every vertex once")
        t, L = (sqn_fixed_order if strict else qn_fixed_order)(G, order)
        run.results["fixed_order"] = True
    else:
        try:
            t, L = (sqn_exact if strict else qn_exact)(G, _threads(args))
        except RefusalError as exc:
            raise UsageError(str(exc)) from None
    verify_layout(G, L)
    run.results[name] = t
    run.results["order"] = list(L.order)
    run.results["layout"] = run.write(args.cert or f"{args.graph}.{name}.json", L.to_json())
    run.say(f"{name} {t}")
    run.say(f"layout {run.results['layout']}")


def cmd_qn(run, args):
    _queues(run, args, False)


def cmd_sqn(run, args):
    _queues(run, args, True)


def cmd_construct(run: Run, args):
    from .construction import certificate_dict, construct, generate_sequence

    outdir = Path(args.out)
    if args.schedule:
        try:
            res = generate_sequence(args.schedule, args.seed, raise_girth=args.raise_girth)
        except ScheduleError as exc:
            run.results["error"] = str(exc)
            run.say(f"schedule failed: {exc}")
            run.code = EXIT_NO
            return
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        items = [(f"seq_{i}_n{r.certificate.n}", r) for i, r in enumerate(res.graphs)]
        run.results["attempts"] = res.attempts
        run.results["ratio"] = str(Fraction(res.ratio).limit_denominator(10**6))
    else:
        if args.n is None:
            raise UsageError("construct needs --n or --schedule")
        items = []
        stats = []
        for i in range(args.count):
            try:
                r = construct(args.n, args.seed, i)
            except ConstructionAbort as exc:
                stats.append(dict(exc.stats, attempt=i))
                run.say(f"attempt {i}: aborted ({exc})")
                continue
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            items.append((f"c2_n{args.n}_s{args.seed}_{i}", r))
            stats.append(dict(r.stats(), attempt=i))
        run.results["runs"] = stats
    graphs = []
    for stem, r in items:
        gpath = run.write(outdir / f"{stem}.graph", write_graph(r.graph))
        cpath = run.write(outdir / f"{stem}.cert.txt", r.certificate.to_text())
        graphs.append({"graph": gpath, "certificate": cpath, "passed": r.certificate.passed})
        run.say(f"{gpath}: {'PASS' if r.certificate.passed else 'FAIL'} "
                f"(max degree {r.certificate.max_degree}, diameter {r.certificate.diameter}, "
                f"girth {r.certificate.girth})")
    run.results["graphs"] = graphs
    if args.stats:
        run.results["stats"] = [dict(r.stats(), certificate=certificate_dict(r.certificate)) for _, r in items]
        run.say(run.write(outdir / "stats.json", json.dumps(run.results["stats"], default=str, indent=1) + "\n"))
    if not items:
        run.code = EXIT_NO


def cmd_cayley(run: Run, args):
    from .groups import OrderedGroundSet, action_matrix, builtin_group, cayley_ball, right_product

    try:
        G = builtin_group(args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ball, elems = cayley_ball(G, None, args.radius)
    if args.order == "bfs":
        X = OrderedGroundSet(elems)
    elif args.order == "natural":
        X = OrderedGroundSet.from_group(G, elems)
    elif args.order == "lex":
        X = OrderedGroundSet.sorted_by(elems, G.encode)
    else:
        if not args.order_file:
            raise UsageError("--order file needs --order-file")
        want = [json.loads(line) for line in run.read(args.order_file).splitlines() if line.strip()]
        lookup = {G.encode(e): e for e in elems}
        try:
            chosen = [lookup[json.dumps(w, separators=(",", ":")).encode()] for w in want]
        except KeyError as exc:
            raise UsageError(f"order file lists an element outside the ball: {exc}") from None
        if len(chosen) != len(elems) or len(set(chosen)) != len(elems):
            raise UsageError("order file must list every ball element exactly once")
        X = OrderedGroundSet(chosen)
    pos = [X.rank(e) for e in elems]
    order = [0] * len(elems)
    for i, p in enumerate(pos):
        order[p] = i
    relabelled = OrderedGraph(ball.n, sorted(tuple(sorted((pos[u], pos[v]))) for u, v in ball.edges))
    outdir = Path(args.out)
    run.write(outdir / "ball.graph", write_graph(relabelled))
    run.write(outdir / "elements.txt", "".join(G.encode(e).decode() + "\n" for e in X.elements))
    A = adjacency_matrix(relabelled, range(relabelled.n))
    gens = G.symmetric_generators()
    sup = set()
    for i, s in enumerate(gens):
        M = action_matrix(X, right_product(G), s)
        sup |= M.ones
        run.write(outdir / f"gen{i}.matrix", write_matrix(M))
    run.results.update(group=args.group, radius=args.radius, order=args.order, vertices=ball.n,
                       edges=ball.m, generators=[G.encode(s).decode() for s in gens],
                       superposition_matches=(sup == set(A.ones)))
    run.say(f"ball of radius {args.radius}: {ball.n} elements, {ball.m} edges -> {outdir}")
    run.say(f"adjacency matrix equals superposition of generator actions: {sup == set(A.ones)}")


def cmd_dehn(run: Run, args):
    from .small_cancellation import RelatorOracle, check_small_cancellation, dehn_decide, parse_word, read_family

    try:
        w = parse_word(args.word)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    oracle = None
    if args.family:
        if not Path(args.family).is_dir():
            raise UsageError(f"family directory {args.family} not found")
        for f in sorted(Path(args.family).glob("*.graph")):
            run.read(str(f))
        F = read_family(args.family)
        lam = args.lam
        if not args.no_check:
            try:
                chk = check_small_cancellation(F, lam)
            except BudgetExceeded as exc:
                raise UsageError(str(exc)) from None
            if not chk.ok:
                run.results["violation"] = chk.violation.describe()
                raise UsageError(f"family fails the small cancellation check at lambda={lam}: "
                                 f"{chk.violation.describe()}")
        oracle = RelatorOracle(F, None if args.no_check else lam)
    res = dehn_decide(w, oracle)
    from .small_cancellation import format_word

    run.results.update(word=format_word(res.word), verdict=res.verdict, final=format_word(res.final),
                       steps=[[format_word(u), format_word(v)] for u, v in res.steps],
                       lam=None if res.lam_asserted is None else str(res.lam_asserted))
    run.say(res.verdict)
    run.code = EXIT_OK if res.trivial else EXIT_NO


def cmd_verify(run: Run, args):
    from .grids import GridWitness, check_witness
    from .queues import QueueLayout, verify_layout
    from .width import certificate_from_json, verify_certificate

    text = run.read(args.certificate)
    x, _ = _instance(run, args)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"certificate is not JSON: {exc}") from None
    try:
        if "kind" in data:
            cert = certificate_from_json(text)
            w = verify_certificate(x, cert)
            run.results.update(kind=cert.kind, width=w, claimed=cert.claimed_width)
            run.say(f"stww certificate width {w}")
            if w != cert.claimed_width:
                run.say(f"mismatch: certificate claims {cert.claimed_width}")
                run.code = EXIT_MISMATCH
        elif "points" in data:
            wit = GridWitness.from_json(text)
            M = x if isinstance(x, OrderedMatrix) else adjacency_matrix(x, data.get("order") or range(x.n))
            ok = check_witness(M, wit)
            run.results.update(kind="grid_witness", k=wit.k, valid=ok)
            run.say(f"{wit.k}-grid witness {'valid' if ok else 'INVALID'}")
            if not ok:
                run.code = EXIT_MISMATCH
        elif "classes" in data:
            L = QueueLayout.from_json(text)
            if not isinstance(x, OrderedGraph):
                raise CertificateInvalid("queue layout needs a graph")
            t = verify_layout(x, L)
            run.results.update(kind="queue_layout", strict=L.strict, queues=t)
            run.say(f"{'strict ' if L.strict else ''}queue layout with {t} classes")
        else:
            raise UsageError("unrecognised certificate file")
    except (CertificateInvalid, LayoutViolation, StructuralError) as exc:
        run.results.update(valid=False, error=str(exc))
        run.say(f"certificate rejected: {exc}")
        run.code = EXIT_MISMATCH


def cmd_report(run: Run, args):
    """Re-run a recorded command and compare its results with the record."""
    old = json.loads(run.read(args.report_file))
    for item in old.get("inputs", []):
        p = Path(item["path"])
        now = hashlib.sha256(p.read_bytes()).hexdigest() if p.exists() else None
        if now != item["sha256"]:
            run.say(f"input changed: {item['path']}")
            run.code = EXIT_MISMATCH
    again = execute(old["argv"])
    same = again.results == old["results"]
    run.results.update(command=old["command"], reproduced=same)
    run.say(f"{old['command']}: results {'reproduced' if same else 'DIFFER'}")
    if not same:
        run.code = EXIT_MISMATCH


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON run report")
    common.add_argument("--threads", type=int, default=None, help=f"worker processes (default ${THREADS_ENV} or 1)")
    common.add_argument("--report", metavar="PATH", help="also write the JSON run report to PATH")

    p = argparse.ArgumentParser(prog="twinwidth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def instance(sp):
        sp.add_argument("--graph", metavar="FILE")
        sp.add_argument("--matrix", metavar="FILE")
        sp.add_argument("--cert", metavar="PATH", help="where to write the certificate")

    sp = sub.add_parser("tww", parents=[common], help="strict twin-width with a certificate")
    instance(sp)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact search (default)")
    mode.add_argument("--heuristic", action="store_true", help="greedy certified upper bound")
    sp.add_argument("--nodes", type=int, default=2_000_000, help="node budget per threshold")
    sp.add_argument("--seconds", type=float, default=None, help="wall-clock budget")

    sp = sub.add_parser("gn", parents=[common], help="grid number")
    instance(sp)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")

    for name in ("qn", "sqn"):
        sp = sub.add_parser(name, parents=[common], help=f"{'strict ' if name == 'sqn' else ''}queue number")
        instance(sp)
        sp.add_argument("--order", help="fixed vertex order (file or comma list); default: optimise")

    sp = sub.add_parser("construct", parents=[common], help="certified random graphs")
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--schedule", type=_ints, help="increasing sizes, e.g. 16,4096")
    sp.add_argument("--raise-girth", action="store_true", help="lift the cycle-hitting length for schedules")
    sp.add_argument("--stats", action="store_true")
    sp.add_argument("--out", default="construct_out")

    sp = sub.add_parser("cayley", parents=[common], help="Cayley ball and generator action matrices")
    sp.add_argument("--group", required=True)
    sp.add_argument("--radius", type=int, required=True)
    sp.add_argument("--order", choices=["natural", "lex", "bfs", "file"], default="natural")
    sp.add_argument("--order-file")
    sp.add_argument("--out", default="cayley_out")

    sp = sub.add_parser("dehn", parents=[common], help="decide a word with Dehn's algorithm")
    sp.add_argument("--family", help="directory of labelled graphs (default: free group)")
    sp.add_argument("--word", required=True)
    sp.add_argument("--lam", type=_fraction, default=Fraction(1, 6))
    sp.add_argument("--no-check", action="store_true", help="skip the small cancellation check")

    sp = sub.add_parser("verify", parents=[common], help="re-check a certificate against its instance")
    sp.add_argument("certificate")
    sp.add_argument("--graph")
    sp.add_argument("--matrix")

    sp = sub.add_parser("report", parents=[common], help="re-run a recorded command and compare")
    sp.add_argument("report_file")
    return p


COMMANDS = {"tww": cmd_tww, "gn": cmd_gn, "qn": cmd_qn, "sqn": cmd_sqn, "construct": cmd_construct,
            "cayley": cmd_cayley, "dehn": cmd_dehn, "verify": cmd_verify, "report": cmd_report}


def _strip_report(argv: list) -> list:
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--report":
            skip = True
        elif not a.startswith("--report="):
            out.append(a)
    return out


def execute(argv: list) -> Run:
    """Run a command without printing; usage problems raise SystemExit(2)."""
    args = build_parser().parse_args(argv)
    run = Run(args.command, _strip_report(list(argv)))
    run.args = args
    try:
        COMMANDS[args.command](run, args)
    except (UsageError, StructuralError, RefusalError) as exc:
        run.results["error"] = str(exc)
        run.say(f"error: {exc}")
        run.code = EXIT_USAGE
    return run


def report_dict(run: Run, seconds: float) -> dict:
    params = {k: (str(v) if isinstance(v, Fraction) else v) for k, v in sorted(vars(run.args).items())
              if k not in ("json", "report", "command")}
    return {"command": run.command, "argv": run.argv, "inputs": run.inputs,
            "seed": getattr(run.args, "seed", None), "parameters": params,
            "results": run.results, "exit_code": run.code, "wall_time": round(seconds, 3)}


def main(argv: Optional[list] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    t0 = time.perf_counter()
    try:
        run = execute(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = report_dict(run, time.perf_counter() - t0)
    text = json.dumps(rep, indent=1, default=str) + "\n"
    if run.args.report:
        Path(run.args.report).write_text(text)
    if run.args.json:
        sys.stdout.write(text)
    else:
        for line in run.lines:
            print(line, file=sys.stderr if line.startswith("error:") else sys.stdout)
    return run.code


if __name__ == "__main__":
    raise SystemExit(main())
