"""Special graphs and finite checks of the completeness, tournament and
choice lemmas."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from math import comb

from .core import (
    BudgetExceeded,
    RGraph,
    RGraphMorphism,
    RGraphError,
    ShapeError,
    compose,
    complete,
    get_budget,
    k2_graph,
)
from .corpus import completeness_powers
from .reports import CheckReport, Verdict
from .topos import SubRGraph, exponential


def _edge_count(g: RGraph, u: int, v: int) -> int:
    return len(g.between.get((u, v), ()))


def is_complete(g: RGraph) -> Verdict:
    """Exactly one edge u -> v for every ordered pair, u = v included.
    Witness: (u, v, count) of the first failing pair."""
    for u in range(g.n_vertices):
        for v in range(g.n_vertices):
            n = _edge_count(g, u, v)
            if n != 1:
                return Verdict(False, (g.vertices[u], g.vertices[v], n))
    return Verdict(True)


def is_tournament(g: RGraph) -> Verdict:
    """One loop per vertex and, for u != v, exactly one edge between them
    in exactly one direction."""
    for u in range(g.n_vertices):
        n = _edge_count(g, u, u)
        if n != 1:
            return Verdict(False, (g.vertices[u], g.vertices[u], n))
        for v in range(u + 1, g.n_vertices):
            n = _edge_count(g, u, v) + _edge_count(g, v, u)
            if n != 1:
                return Verdict(False, (g.vertices[u], g.vertices[v], n))
    return Verdict(True)


def is_discrete(g: RGraph) -> Verdict:
    """Only distinguished loops; witness is the first other edge."""
    for e, d in zip(g.edges, g.distinguished):
        if not d:
            return Verdict(False, e.id)
    return Verdict(True)


class NoMorphismError(RGraphError):
    """No morphism exists between the requested graphs."""


def ac_discrete_witness(f: RGraphMorphism) -> RGraphMorphism:
    """A morphism h: D -> G with f o h o f = f, for f: G -> D and D discrete.

    Each d in the image of f goes to the first vertex of its fiber; any
    other d goes to the first vertex of G.
    """
    g, d = f.domain, f.codomain
    if not is_discrete(d):
        raise ShapeError(f"codomain {d.name} is not discrete")
    if g.n_vertices == 0 and d.n_vertices > 0:
        raise NoMorphismError(f"no morphism {d.name} -> {g.name} exists: {g.name} is empty")
    first: dict[int, int] = {}
    for v, image in enumerate(f.vmap):
        first.setdefault(image, v)
    vmap = tuple(first.get(x, 0) for x in range(d.n_vertices))
    # D has only distinguished loops, so the edge map is forced
    emap = [0] * d.n_edges
    for x, loop in enumerate(d.loops):
        emap[loop] = g.loops[vmap[x]]
    return RGraphMorphism(d, g, vmap, tuple(emap))


def check_ac_discrete(f: RGraphMorphism) -> Verdict:
    h = ac_discrete_witness(f)
    return Verdict(compose(f, compose(h, f)) == f, h)


def unique_edge(g: RGraph, u: str, v: str) -> str:
    """The single edge u -> v of a complete graph."""
    verdict = is_complete(g)
    if not verdict:
        raise ShapeError(f"{g.name} is not complete: {verdict.witness}")
    return g.edges[g.between[(g.vindex[u], g.vindex[v])][0]].id


def tournament_count(n: int) -> int:
    return 2 ** comb(n, 2)


def spanning_tournaments(x: RGraph, count: int) -> list[SubRGraph]:
    """The first ``count`` spanning tournaments of a complete graph.

    Cross pairs (i < j) are listed in canonical order; tournament k orients
    pair p as i -> j when bit p of k is 0 and j -> i otherwise.
    """
    if not is_complete(x):
        raise ShapeError(f"{x.name} is not complete")
    n = x.n_vertices
    total = tournament_count(n)
    if count > total:
        raise ValueError(f"{x.name} has only {total} spanning tournaments, {count} requested")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    vs = frozenset(x.vertices)
    loops = [x.edges[i].id for i in x.loops]
    out = []
    for k in range(count):
        chosen = []
        for p, (i, j) in enumerate(pairs):
            u, v = (i, j) if not k >> p & 1 else (j, i)
            chosen.append(x.edges[x.between[(u, v)][0]].id)
        out.append(SubRGraph(x, vs, frozenset(loops + chosen)))
    return out


@dataclass
class TournamentAssignment:
    ambient: RGraph
    assignment: dict[str, SubRGraph]
    certificates: dict[str, bool]
    needed: int
    available: int

    @property
    def injective(self) -> bool:
        subs = list(self.assignment.values())
        return all(subs[i] != subs[j] for i in range(len(subs)) for j in range(i + 1, len(subs)))

    @property
    def valid(self) -> bool:
        return self.injective and all(self.certificates.values()) and self.needed <= self.available


def tournament_assignment(g: RGraph, budget: int | None = None) -> TournamentAssignment:
    """Injective x -> Q_x from the vertices of X = K2^g to spanning
    tournaments of X: the i-th vertex gets the i-th tournament."""
    x = exponential(k2_graph(), g, get_budget(budget)).object
    n = x.n_vertices
    tours = spanning_tournaments(x, n)
    assignment = dict(zip(x.vertices, tours))
    certs = {v: bool(is_tournament(q.as_graph())) for v, q in assignment.items()}
    return TournamentAssignment(x, assignment, certs, needed=n, available=tournament_count(n))


def check_exponential_completeness(
    bases: Sequence[RGraph] | None = None,
    powers: Iterable[RGraph] | None = None,
    budget: int | None = None,
) -> CheckReport:
    """is_complete(G^H) for complete G and every H in the corpus."""
    bases = list(bases) if bases is not None else [k2_graph(), complete(3)]
    powers = list(powers) if powers is not None else completeness_powers()
    report = CheckReport("exponential_completeness")
    rows = []
    limit = get_budget(budget)
    for g in bases:
        if not is_complete(g):
            raise ShapeError(f"base {g.name} is not complete")
        for h in powers:
            try:
                obj = exponential(g, h, limit).object
            except BudgetExceeded as exc:
                report.skipped.append({"G": g.name, "H": h.name, "reason": str(exc)})
                continue
            report.checked += 1
            verdict = is_complete(obj)
            rows.append({"G": g.name, "H": h.name, "vertices": obj.n_vertices, "edges": obj.n_edges, "complete": verdict.holds})
            if not verdict:
                report.fail(G=g.name, H=h.name, witness=list(verdict.witness))
    report.details["pairs"] = rows
    return report
