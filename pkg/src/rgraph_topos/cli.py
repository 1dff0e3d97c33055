"""``rgt`` command-line front end.

Every command prints one JSON run report on stdout.  Exit codes:
0 property holds, 1 property violated, 2 usage error, 3 invalid input,
4 budget exceeded.  Graph arguments are JSON files or ``@<builtin>``
names (``@1``, ``@E``, ``@K2``, ``@Omega``, ...).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Any

from . import __version__, corpus, kernel
from .core import (
    BudgetExceeded,
    RGraph,
    RGraphError,
    count_hom,
    hom,
)
from .diagonal import (
    cantor_diagonal,
    cantor_exhaustive_check,
    cantor_step2_witness,
    chi,
    FinFunction,
    lawvere_sweep,
    no_point_surjection_theorem,
)
from .graphfile import (
    GraphFileError,
    export_dot,
    parse_graph_file,
    parse_morphism_file,
    write_graph_file,
    write_text_atomic,
)
from .lemmas import (
    NoMorphismError,
    check_ac_discrete,
    check_exponential_completeness,
    is_complete,
    is_discrete,
    is_tournament,
    tournament_assignment,
)
from .topos import (
    characteristic,
    edge_points,
    exponential,
    global_elements,
    make_subgraph,
    product,
    pullback_along_true,
    subobject_from_characteristic,
    verify_classifier,
    verify_exponential_ump,
    verify_product_ump,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class Run:
    """Collects inputs and details for the run report."""

    def __init__(self, command: str):
        self.command = command
        self.inputs: dict[str, str] = {}
        self.details: dict[str, Any] = {}

    def graph(self, ref: str) -> RGraph:
        if ref.startswith("@"):
            name = ref[1:]
            if name not in corpus.BUILTINS:
                raise UsageError(f"unknown builtin graph {ref!r}; choose from {sorted(corpus.BUILTINS)}")
            self.inputs[ref] = f"builtin:{name}"
            return corpus.builtin(name)
        self.inputs[ref] = self._digest(ref)
        return parse_graph_file(ref)

    def morphism(self, ref: str):
        self.inputs[ref] = self._digest(ref)
        return parse_morphism_file(ref)

    @staticmethod
    def _digest(path: str) -> str:
        try:
            data = Path(path).read_bytes()
        except OSError as exc:
            raise GraphFileError(f"cannot read file: {exc.strerror}", path) from exc
        return "sha256:" + hashlib.sha256(data).hexdigest()

    def report(self, verdict: str) -> dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "verdict": verdict,
            "details": self.details,
            "tool_version": __version__,
        }


def _graph_summary(g: RGraph) -> dict[str, Any]:
    return {
        "name": g.name,
        "vertices": list(g.vertices),
        "edges": [
            {"name": e.id, "src": e.src, "tgt": e.tgt, "distinguished": d}
            for e, d in zip(g.edges, g.distinguished)
        ],
        "vertex_count": g.n_vertices,
        "edge_count": g.n_edges,
        "complete": is_complete(g).holds,
        "tournament": is_tournament(g).holds,
        "discrete": is_discrete(g).holds,
    }


def _maps(m) -> dict[str, Any]:
    return {"vertices": m.vertex_map, "edges": m.edge_map}


# commands; each returns True (pass) or False (fail)


def cmd_show(run: Run, args) -> bool:
    run.details.update(_graph_summary(run.graph(args.graph)))
    return True


def cmd_hom(run: Run, args) -> bool:
    a, b = run.graph(args.a), run.graph(args.b)
    if args.count:
        run.details["count"] = count_hom(a, b)
    else:
        hs = hom(a, b)
        run.details["count"] = len(hs)
        run.details["morphisms"] = [_maps(m) for m in hs]
    return True


def cmd_product(run: Run, args) -> bool:
    bundle = product(run.graph(args.a), run.graph(args.b))
    write_graph_file(bundle.object, args.output)
    run.details.update({"output": args.output, "vertex_count": bundle.object.n_vertices, "edge_count": bundle.object.n_edges})
    return True


def cmd_exp(run: Run, args) -> bool:
    base, power = run.graph(args.base), run.graph(args.power)
    bundle = exponential(base, power)
    write_graph_file(bundle.object, args.output)
    run.details.update(
        {
            "output": args.output,
            "vertex_count": bundle.object.n_vertices,
            "edge_count": bundle.object.n_edges,
            "vertex_index": {bundle.object.vertices[i]: _maps(m) for i, m in enumerate(bundle.vertex_index)},
        }
    )
    return True


def cmd_global_elements(run: Run, args) -> bool:
    g = run.graph(args.graph)
    elems = global_elements(g)
    run.details.update({"count": len(elems), "elements": [{"vertex": v, "morphism": _maps(m)} for v, m in elems]})
    return len(elems) == g.n_vertices


def cmd_edge_points(run: Run, args) -> bool:
    g = run.graph(args.graph)
    points = edge_points(g)
    run.details.update({"count": len(points), "points": [{"edge": e, "morphism": _maps(m)} for e, m in points]})
    return len(points) == g.n_edges


def _parse_sub_spec(spec: str) -> tuple[list[str], list[str]]:
    vpart, _, epart = spec.partition(";")
    vs = [v.strip() for v in vpart.split(",") if v.strip()]
    es = [e.strip() for e in epart.split(",") if e.strip()]
    return vs, es


def cmd_classify(run: Run, args) -> bool:
    g = run.graph(args.graph)
    vs, es = _parse_sub_spec(args.sub)
    sub = make_subgraph(g, vs, es)
    chi_map = characteristic(sub)
    recovered = subobject_from_characteristic(chi_map) == sub
    pb = pullback_along_true(chi_map)
    run.details.update(
        {
            "subobject": {"vertices": [v for v in g.vertices if v in sub.vertices], "edges": [e.id for e in g.edges if e.id in sub.edges]},
            "characteristic": _maps(chi_map),
            "pullback_recovers_subobject": recovered,
            "pullback_size": [pb.n_vertices, pb.n_edges],
        }
    )
    return recovered


def cmd_check_topos(run: Run, args) -> bool:
    graphs = corpus.topos_corpus(args.max_vertices)
    triples = [(x, a, b) for x in graphs for a in graphs for b in graphs]
    reports = [
        verify_product_ump(graphs),
        verify_exponential_ump(triples, round_trip_limit=args.round_trip_limit),
        verify_classifier(graphs),
    ]
    run.details["corpus"] = [g.name for g in graphs]
    run.details["kernel"] = kernel.BACKEND
    run.details["laws"] = {r.name: _tally(r) for r in reports}
    run.details["counterexamples"] = {r.name: r.counterexamples for r in reports if r.counterexamples}
    return all(r.passed for r in reports)


def _tally(report) -> dict[str, Any]:
    out = {"passed": report.passed, "checked": report.checked, "skipped": len(report.skipped)}
    if "count_only" in report.details:
        out["count_only"] = len(report.details["count_only"])
        out["round_trips"] = report.details["round_trips"]
    return out


def cmd_check_exp_complete(run: Run, args) -> bool:
    report = check_exponential_completeness()
    run.details.update(report.to_dict())
    return report.passed


def cmd_check_tournament(run: Run, args) -> bool:
    ta = tournament_assignment(run.graph(args.graph))
    run.details.update(
        {
            "exponential": ta.ambient.name,
            "vertices": ta.needed,
            "tournaments_available": ta.available,
            "certificate": f"{ta.needed} <= {ta.available}",
            "injective": ta.injective,
            "assignment": {v: q.describe() for v, q in ta.assignment.items()},
            "all_tournaments": all(ta.certificates.values()),
        }
    )
    return ta.valid


def cmd_check_ac_discrete(run: Run, args) -> bool:
    f = run.morphism(args.morphism)
    verdict = check_ac_discrete(f)
    run.details.update({"f": _maps(f), "h": _maps(verdict.witness), "f_h_f_equals_f": verdict.holds})
    return verdict.holds


def cmd_cantor(run: Run, args) -> bool:
    report = cantor_exhaustive_check(args.size)
    run.details.update(
        {k: report.details[k] for k in ("size", "functions_checked", "surjections", "diagonal_misses")}
    )
    if args.witness:
        labels = [f"x{i}" for i in range(args.size)]
        run.details["step2"] = cantor_step2_witness(labels).to_dict()
        empty = chi(labels, [])
        fam = FinFunction(tuple(labels), (empty,), tuple((x, empty) for x in labels))
        diag = cantor_diagonal(fam)
        run.details["step1_example"] = {
            "f": "x -> chi_empty",
            "diagonal_set": diag.details["diagonal_set"],
            "missed": diag.verified,
        }
    return report.passed


def cmd_lawvere(run: Run, args) -> bool:
    if args.seed is not None and args.sample is None:
        raise UsageError("--seed is only accepted together with --sample")
    a = run.graph(args.graph)
    sample = None if args.exhaustive else args.sample
    bundle, results, sampled = lawvere_sweep(a, sample=sample, seed=args.seed)
    rows = []
    ok = True
    for f, rep in results:
        rows.append(
            {
                "F": f.vertex_map,
                "missed": rep.details.get("missed_vertex"),
                "q": rep.details.get("q_vertex_map"),
                "verified": rep.verified and rep.replay(),
            }
        )
        ok = ok and rep.verified and rep.replay()
    run.details.update({"exponential": bundle.object.name, "g": "swap", "sampled": sampled, "exhaustive": not sampled, "morphisms": rows})
    return ok


def cmd_no_surjection(run: Run, args) -> bool:
    if args.seed is not None and args.sample is None:
        raise UsageError("--seed is only accepted together with --sample")
    report = no_point_surjection_theorem(run.graph(args.graph), sample=args.sample, seed=args.seed)
    run.details.update(report.to_dict())
    return report.passed


def cmd_export_dot(run: Run, args) -> bool:
    text = export_dot(run.graph(args.graph))
    if args.output:
        write_text_atomic(args.output, text)
        run.details["output"] = args.output
    else:
        run.details["dot"] = text
    return True


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rgt", description="Finite reflexive-graph topos checks.")
    p.add_argument("--version", action="version", version=f"rgt {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("show", help="summarize a graph")
    s.add_argument("graph")
    s.set_defaults(func=cmd_show)

    s = sub.add_parser("hom", help="enumerate or count hom(A, B)")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--count", action="store_true")
    s.set_defaults(func=cmd_hom)

    s = sub.add_parser("product", help="write A x B")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("exp", help="write base^power")
    s.add_argument("--base", required=True)
    s.add_argument("--power", required=True)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(func=cmd_exp)

    for name, func in (("global-elements", cmd_global_elements), ("edge-points", cmd_edge_points)):
        s = sub.add_parser(name)
        s.add_argument("graph")
        s.set_defaults(func=func)

    s = sub.add_parser("classify", help="characteristic map of a sub-rgraph")
    s.add_argument("graph")
    s.add_argument("--sub", required=True, help='vertices[;edges], e.g. "s,t;1_E"')
    s.set_defaults(func=cmd_classify)

    check = sub.add_parser("check", help="exhaustive lemma checks")
    csub = check.add_subparsers(dest="check", required=True)
    s = csub.add_parser("topos")
    s.add_argument("--max-vertices", type=int, default=2)
    s.add_argument("--round-trip-limit", type=int, default=20_000)
    s.set_defaults(func=cmd_check_topos)
    s = csub.add_parser("exp-complete")
    s.set_defaults(func=cmd_check_exp_complete)
    s = csub.add_parser("tournament")
    s.add_argument("graph")
    s.set_defaults(func=cmd_check_tournament)
    s = csub.add_parser("ac-discrete")
    s.add_argument("morphism")
    s.set_defaults(func=cmd_check_ac_discrete)

    s = sub.add_parser("cantor", help="finite Cantor diagonal check")
    s.add_argument("--size", type=int, required=True)
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_cantor)

    s = sub.add_parser("lawvere", help="missed points of F: A -> K2^A")
    s.add_argument("graph")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sample", type=int)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_lawvere)

    s = sub.add_parser("no-surjection", help="no point-surjection A -> K2^A")
    s.add_argument("graph")
    s.add_argument("--sample", type=int)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_no_surjection)

    s = sub.add_parser("export-dot")
    s.add_argument("graph")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_dot)
    return p


def _emit(report: dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(report, indent=2) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    name = args.command if args.command != "check" else f"check {args.check}"
    run = Run(name)
    try:
        ok = args.func(run, args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rgt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        run.details["error"] = str(exc)
        _emit(run.report("error"))
        return EXIT_BUDGET
    except (RGraphError, NoMorphismError, OSError, ValueError) as exc:
        run.details["error"] = str(exc)
        if getattr(exc, "problems", None):
            run.details["problems"] = exc.problems
        _emit(run.report("error"))
        return EXIT_INVALID
    _emit(run.report("pass" if ok else "fail"))
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
