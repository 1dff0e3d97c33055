"""Topos structure of finite rgraphs.

Terminal maps, products, exponentials with evaluation and currying, and
the truth-value graph as subobject classifier.  Each universal property
comes with an exhaustive verifier over a corpus of small graphs.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .core import (
    BudgetExceeded,
    Edge,
    HomSet,
    RGraph,
    RGraphMorphism,
    ShapeError,
    ValidationError,
    compose,
    count_hom,
    edge_graph,
    get_budget,
    hom,
    identity,
    loop_id,
    morphism_problems,
    omega_graph,
    terminal_graph,
)
from .reports import CheckReport

# fixed positions inside omega_graph()
TRUE, FALSE = 0, 1
L_TRUE, L_FALSE, EXTRA_TRUE, TRUE_TO_FALSE, FALSE_TO_TRUE = range(5)


def bang(g: RGraph) -> RGraphMorphism:
    """The unique morphism g -> 1."""
    return RGraphMorphism(g, terminal_graph(), (0,) * g.n_vertices, (0,) * g.n_edges)


def global_element(g: RGraph, vertex: str) -> RGraphMorphism:
    i = g.vindex[vertex]
    return RGraphMorphism(terminal_graph(), g, (i,), (g.loops[i],))


def global_elements(g: RGraph) -> list[tuple[str, RGraphMorphism]]:
    """Pairs (vertex, 1 -> g) from enumerating hom(1, g)."""
    return [(g.vertices[m.vmap[0]], m) for m in hom(terminal_graph(), g)]


def edge_points(g: RGraph) -> list[tuple[str, RGraphMorphism]]:
    """Pairs (edge, E -> g) from enumerating hom(E, g), in edge order."""
    arrow = edge_graph().eindex["1_E"]
    points = [(m.emap[arrow], m) for m in hom(edge_graph(), g)]
    points.sort(key=lambda p: p[0])
    return [(g.edges[i].id, m) for i, m in points]


# products


@dataclass(frozen=True)
class ProductBundle:
    left: RGraph
    right: RGraph
    object: RGraph
    proj_left: RGraphMorphism
    proj_right: RGraphMorphism

    def vertex(self, i: int, j: int) -> int:
        return i * self.right.n_vertices + j

    def edge(self, i: int, j: int) -> int:
        return i * self.right.n_edges + j


def _pair_id(x: str, y: str) -> str:
    return f"({x},{y})"


@functools.lru_cache(maxsize=512)
def product(a: RGraph, b: RGraph) -> ProductBundle:
    """Componentwise product; vertex (u, v) and edge (e, f) ids are "(u,v)"/"(e,f)"."""
    vertices = tuple(_pair_id(u, v) for u in a.vertices for v in b.vertices)
    edges = tuple(
        Edge(_pair_id(e.id, f.id), _pair_id(e.src, f.src), _pair_id(e.tgt, f.tgt))
        for e in a.edges
        for f in b.edges
    )
    if len(set(vertices)) != len(vertices) or len(set(e.id for e in edges)) != len(edges):
        raise ShapeError(f"pair ids collide in {a.name} x {b.name}")
    loop_of = {
        _pair_id(u, v): _pair_id(a.loop_of[u], b.loop_of[v]) for u in a.vertices for v in b.vertices
    }
    obj = RGraph(f"({a.name}x{b.name})", vertices, edges, loop_of)
    nb, neb = b.n_vertices, b.n_edges
    pl = RGraphMorphism(
        obj, a,
        tuple(i // nb for i in range(len(vertices))) if nb else (),
        tuple(i // neb for i in range(len(edges))) if neb else (),
    )
    pr = RGraphMorphism(
        obj, b,
        tuple(i % nb for i in range(len(vertices))) if nb else (),
        tuple(i % neb for i in range(len(edges))) if neb else (),
    )
    return ProductBundle(a, b, obj, pl, pr)


def pair(f: RGraphMorphism, g: RGraphMorphism, bundle: ProductBundle | None = None) -> RGraphMorphism:
    """The mediating morphism <f, g>: X -> A x B."""
    if f.domain != g.domain:
        raise ShapeError(f"pair: domains differ ({f.domain.name} vs {g.domain.name})")
    if bundle is None:
        bundle = product(f.codomain, g.codomain)
    elif bundle.left != f.codomain or bundle.right != g.codomain:
        raise ShapeError("pair: product bundle does not match the codomains")
    return RGraphMorphism(
        f.domain,
        bundle.object,
        tuple(bundle.vertex(i, j) for i, j in zip(f.vmap, g.vmap)),
        tuple(bundle.edge(i, j) for i, j in zip(f.emap, g.emap)),
    )


def product_map(
    f: RGraphMorphism,
    g: RGraphMorphism,
    source: ProductBundle | None = None,
    target: ProductBundle | None = None,
) -> RGraphMorphism:
    """f x g : A x B -> C x D."""
    source = source or product(f.domain, g.domain)
    target = target or product(f.codomain, g.codomain)
    if (source.left, source.right) != (f.domain, g.domain) or (target.left, target.right) != (
        f.codomain,
        g.codomain,
    ):
        raise ShapeError("product_map: bundles do not match the factors")
    vmap = tuple(target.vertex(f.vmap[i], g.vmap[j]) for i in range(f.domain.n_vertices) for j in range(g.domain.n_vertices))
    emap = tuple(target.edge(f.emap[i], g.emap[j]) for i in range(f.domain.n_edges) for j in range(g.domain.n_edges))
    return RGraphMorphism(source.object, target.object, vmap, emap)


# exponentials


@dataclass(frozen=True)
class ExponentialBundle:
    """B^A with its evaluation map.

    Vertex ``m<i>`` is the i-th morphism of ``vertex_index`` = hom(A, B).
    An edge from ``m<i>`` to ``m<j>`` is an edge reassignment ``t`` with
    ``t(a): phi_i(src a) -> phi_j(tgt a)``; ``edge_data[k] = (i, j, t)``.
    """

    base: RGraph
    power: RGraph
    object: RGraph
    vertex_index: HomSet
    edge_data: tuple[tuple[int, int, tuple[int, ...]], ...]
    product: ProductBundle
    eval: RGraphMorphism
    _edge_lookup: dict = field(repr=False, compare=False)
    _vertex_lookup: dict = field(repr=False, compare=False)

    def name_of(self, m: RGraphMorphism) -> int:
        """Vertex index of B^A naming a morphism A -> B."""
        if m.domain != self.power or m.codomain != self.base:
            raise ShapeError("name_of: morphism is not A -> B")
        return self._vertex_lookup[(m.vmap, m.emap)]

    def point(self, m: RGraphMorphism) -> RGraphMorphism:
        """The global element 1 -> B^A naming ``m``."""
        return global_element(self.object, self.object.vertices[self.name_of(m)])

    def morphism_at(self, vertex: int) -> RGraphMorphism:
        return self.vertex_index[vertex]

    def edge_index(self, i: int, j: int, t: tuple[int, ...]) -> int:
        return self._edge_lookup[(i, j, t)]


@functools.lru_cache(maxsize=128)
def exponential(base: RGraph, power: RGraph, budget: int | None = None) -> ExponentialBundle:
    """Construct base^power.  Raises :class:`BudgetExceeded` when either the
    vertex count |hom(power, base)| or the edge count is over budget."""
    limit = get_budget(budget)
    homs = hom(power, base, limit)
    A, B = power, base

    def choices(phi: RGraphMorphism, psi: RGraphMorphism) -> list[tuple[int, ...]]:
        return [B.between.get((phi.vmap[s], psi.vmap[t]), ()) for s, t in zip(A.src, A.tgt)]

    total = 0
    for phi in homs:
        for psi in homs:
            n = 1
            for c in choices(phi, psi):
                n *= len(c)
                if n == 0:
                    break
            total += n
            if total > limit:
                raise BudgetExceeded(f"edges of {B.name}^{A.name}", total, limit)

    names = [f"m{i}" for i in range(len(homs))]
    edges: list[Edge] = []
    edge_data: list[tuple[int, int, tuple[int, ...]]] = []
    loop_of: dict[str, str] = {}
    for i, phi in enumerate(homs):
        for j, psi in enumerate(homs):
            for k, t in enumerate(itertools.product(*choices(phi, psi))):
                if i == j and t == phi.emap:
                    eid = loop_id(names[i])
                    loop_of[names[i]] = eid
                else:
                    eid = f"{names[i]}>{names[j]}#{k}"
                edges.append(Edge(eid, names[i], names[j]))
                edge_data.append((i, j, t))
    obj = RGraph(f"{B.name}^{A.name}", tuple(names), tuple(edges), loop_of)

    prod = product(obj, A)
    nea = A.n_edges
    ev_v = tuple(homs[i].vmap[u] for i in range(len(homs)) for u in range(A.n_vertices))
    ev_e = tuple(edge_data[k][2][a] for k in range(len(edge_data)) for a in range(nea))
    ev = RGraphMorphism(prod.object, B, ev_v, ev_e)
    return ExponentialBundle(
        base=B,
        power=A,
        object=obj,
        vertex_index=homs,
        edge_data=tuple(edge_data),
        product=prod,
        eval=ev,
        _edge_lookup={d: k for k, d in enumerate(edge_data)},
        _vertex_lookup={(m.vmap, m.emap): i for i, m in enumerate(homs)},
    )


def transpose(f: RGraphMorphism, bundle: ExponentialBundle, left: RGraph) -> RGraphMorphism:
    """Curry f: X x A -> B into X -> B^A (X = ``left``)."""
    A = bundle.power
    if f.codomain != bundle.base:
        raise ShapeError("transpose: codomain is not the exponential base")
    if f.domain != product(left, A).object:
        raise ShapeError("transpose: domain is not the canonical product X x A")
    na, nea = A.n_vertices, A.n_edges
    vmap = []
    for x in range(left.n_vertices):
        lx = left.loops[x]
        key = (
            tuple(f.vmap[x * na + u] for u in range(na)),
            tuple(f.emap[lx * nea + a] for a in range(nea)),
        )
        vmap.append(bundle._vertex_lookup[key])
    emap = []
    for e in range(left.n_edges):
        t = tuple(f.emap[e * nea + a] for a in range(nea))
        emap.append(bundle.edge_index(vmap[left.src[e]], vmap[left.tgt[e]], t))
    return RGraphMorphism(left, bundle.object, tuple(vmap), tuple(emap))


def untranspose(h: RGraphMorphism, bundle: ExponentialBundle) -> RGraphMorphism:
    """Uncurry h: X -> B^A into eval o (h x id_A): X x A -> B."""
    if h.codomain != bundle.object:
        raise ShapeError("untranspose: codomain is not the exponential object")
    A = bundle.power
    hx = product_map(h, identity(A), product(h.domain, A), bundle.product)
    return compose(bundle.eval, hx)


# subobjects and the classifier


@dataclass(frozen=True)
class SubRGraph:
    ambient: RGraph
    vertices: frozenset[str]
    edges: frozenset[str]

    def as_graph(self, name: str | None = None) -> RGraph:
        g = self.ambient
        vs = tuple(v for v in g.vertices if v in self.vertices)
        es = tuple(e for e in g.edges if e.id in self.edges)
        return RGraph(name or f"{g.name}|sub", vs, es, {v: g.loop_of[v] for v in vs})

    def inclusion(self) -> RGraphMorphism:
        sub = self.as_graph()
        g = self.ambient
        return RGraphMorphism(
            sub, g,
            tuple(g.vindex[v] for v in sub.vertices),
            tuple(g.eindex[e.id] for e in sub.edges),
        )

    def sort_key(self) -> tuple:
        g = self.ambient
        return (sorted(g.vindex[v] for v in self.vertices), sorted(g.eindex[e] for e in self.edges))

    def describe(self) -> str:
        g = self.ambient
        vs = ",".join(v for v in g.vertices if v in self.vertices)
        es = ",".join(e.id for e in g.edges if e.id in self.edges and not g.distinguished[g.eindex[e.id]])
        return f"{vs};{es}" if es else vs


def subobject_problems(ambient: RGraph, vertices: Iterable[str], edges: Iterable[str]) -> list[str]:
    vs, es = set(vertices), set(edges)
    problems = []
    for v in sorted(vs - set(ambient.vindex)):
        problems.append(f"unknown vertex {v!r}")
    for e in sorted(es - set(ambient.eindex)):
        problems.append(f"unknown edge {e!r}")
    for e in ambient.edges:
        if e.id in es and (e.src not in vs or e.tgt not in vs):
            problems.append(f"edge {e.id!r} included without both endpoints")
    for v in ambient.vertices:
        if v in vs and ambient.loop_of[v] not in es:
            problems.append(f"vertex {v!r} included without its distinguished loop")
    return problems


def make_subgraph(
    ambient: RGraph,
    vertices: Iterable[str],
    edges: Iterable[str] = (),
    include_loops: bool = True,
) -> SubRGraph:
    vs = frozenset(vertices)
    es = set(edges)
    if include_loops:
        es.update(ambient.loop_of[v] for v in vs if v in ambient.loop_of)
    problems = subobject_problems(ambient, vs, es)
    if problems:
        raise ValidationError(problems)
    return SubRGraph(ambient, vs, frozenset(es))


def count_subobjects(g: RGraph) -> int:
    total = 0
    free = [(s, t) for s, t, d in zip(g.src, g.tgt, g.distinguished) if not d]
    for mask in range(1 << g.n_vertices):
        k = sum(1 for s, t in free if mask >> s & 1 and mask >> t & 1)
        total += 1 << k
    return total


def subobjects(g: RGraph, budget: int | None = None) -> list[SubRGraph]:
    """All sub-rgraphs, ordered by vertex bitmask (vertex 0 = low bit), then
    by bitmask over the eligible non-distinguished edges."""
    limit = get_budget(budget)
    if 1 << g.n_vertices > limit:
        raise BudgetExceeded(f"vertex subsets of {g.name}", 1 << g.n_vertices, limit)
    n = count_subobjects(g)
    if n > limit:
        raise BudgetExceeded(f"subobjects of {g.name}", n, limit)
    out = []
    for mask in range(1 << g.n_vertices):
        vs = [i for i in range(g.n_vertices) if mask >> i & 1]
        loops = [g.edges[g.loops[i]].id for i in vs]
        eligible = [
            e.id
            for e, s, t, d in zip(g.edges, g.src, g.tgt, g.distinguished)
            if not d and mask >> s & 1 and mask >> t & 1
        ]
        vset = frozenset(g.vertices[i] for i in vs)
        for emask in range(1 << len(eligible)):
            chosen = [eligible[k] for k in range(len(eligible)) if emask >> k & 1]
            out.append(SubRGraph(g, vset, frozenset(loops + chosen)))
    return out


def is_mono(m: RGraphMorphism) -> bool:
    return len(set(m.vmap)) == len(m.vmap) and len(set(m.emap)) == len(m.emap)


def image_subobject(m: RGraphMorphism) -> SubRGraph:
    g = m.codomain
    return SubRGraph(
        g,
        frozenset(g.vertices[i] for i in m.vmap),
        frozenset(g.edges[i].id for i in m.emap),
    )


def characteristic(s: SubRGraph) -> RGraphMorphism:
    """The classifying map G -> Omega of a sub-rgraph."""
    g = s.ambient
    problems = subobject_problems(g, s.vertices, s.edges)
    if problems:
        raise ValidationError(problems)
    inside = [v in s.vertices for v in g.vertices]
    vmap = tuple(TRUE if x else FALSE for x in inside)
    emap = []
    for e, a, b in zip(g.edges, g.src, g.tgt):
        if e.id in s.edges:
            emap.append(L_TRUE)
        elif inside[a] and inside[b]:
            emap.append(EXTRA_TRUE)
        elif inside[a]:
            emap.append(TRUE_TO_FALSE)
        elif inside[b]:
            emap.append(FALSE_TO_TRUE)
        else:
            emap.append(L_FALSE)
    return RGraphMorphism(g, omega_graph(), vmap, tuple(emap))


def subobject_from_characteristic(chi: RGraphMorphism) -> SubRGraph:
    """Pullback of true: 1 -> Omega along chi."""
    if chi.codomain != omega_graph():
        raise ShapeError("characteristic map must land in Omega")
    g = chi.domain
    return SubRGraph(
        g,
        frozenset(v for v, i in zip(g.vertices, chi.vmap) if i == TRUE),
        frozenset(e.id for e, i in zip(g.edges, chi.emap) if i == L_TRUE),
    )


def pullback_along_true(chi: RGraphMorphism) -> RGraph:
    """The pullback object of true: 1 -> Omega along chi, computed as the
    sub-rgraph of G x 1 on pairs that agree in Omega."""
    g = chi.domain
    one = terminal_graph()
    true_v, true_e = TRUE, L_TRUE
    prod = product(g, one)
    vs = [i for i in range(g.n_vertices) if chi.vmap[i] == true_v]
    es = [i for i in range(g.n_edges) if chi.emap[i] == true_e]
    obj = prod.object
    keep_v = tuple(obj.vertices[prod.vertex(i, 0)] for i in vs)
    keep_e = tuple(obj.edges[prod.edge(i, 0)] for i in es)
    return RGraph(f"{g.name}|true", keep_v, keep_e, {v: obj.loop_of[v] for v in keep_v})


# verifiers


def _pairs(graphs: Sequence[RGraph]) -> list[tuple[RGraph, RGraph]]:
    return [(a, b) for a in graphs for b in graphs]


def verify_product_ump(graphs: Sequence[RGraph], budget: int | None = None) -> CheckReport:
    """For every X, A, B: h -> (p o h, q o h) is a bijection
    hom(X, AxB) -> hom(X, A) x hom(X, B) inverted by ``pair``."""
    report = CheckReport("product_ump")
    limit = get_budget(budget)
    for a, b in _pairs(graphs):
        bundle = product(a, b)
        for x in graphs:
            label = {"X": x.name, "A": a.name, "B": b.name}
            try:
                hx_ab = hom(x, bundle.object, limit)
                hx_a = hom(x, a, limit)
                hx_b = hom(x, b, limit)
            except BudgetExceeded as exc:
                report.skipped.append({**label, "reason": str(exc)})
                continue
            report.checked += 1
            factored: dict[tuple, RGraphMorphism] = {}
            for h in hx_ab:
                key = (compose(bundle.proj_left, h), compose(bundle.proj_right, h))
                if key in factored:
                    report.fail(**label, problem="two mediating morphisms for one pair")
                    break
                factored[key] = h
            if len(hx_ab) != len(hx_a) * len(hx_b):
                report.fail(**label, problem=f"|hom(X,AxB)|={len(hx_ab)} != {len(hx_a)}*{len(hx_b)}")
                continue
            for f in hx_a:
                for g in hx_b:
                    h = pair(f, g, bundle)
                    if morphism_problems(h) or factored.get((f, g)) != h:
                        report.fail(**label, problem="pair(f, g) is not the mediating morphism")
    return report


DEFAULT_ROUND_TRIP_LIMIT = 20_000


def verify_exponential_ump(
    triples: Iterable[tuple[RGraph, RGraph, RGraph]],
    budget: int | None = None,
    round_trip_limit: int = DEFAULT_ROUND_TRIP_LIMIT,
) -> CheckReport:
    """Currying bijection |hom(XxA, B)| = |hom(X, B^A)|, with transpose and
    untranspose mutually inverse and eval o (transpose f x id) = f.

    The counts are compared for every triple whose exponential fits the
    budget.  The element-wise round trip runs over the whole hom-set when
    it has at most ``round_trip_limit`` morphisms; larger triples are listed
    under ``details["count_only"]``.
    """
    report = CheckReport("exponential_ump")
    limit = get_budget(budget)
    count_only = report.details.setdefault("count_only", [])
    round_trips = 0
    for x, a, b in triples:
        label = {"X": x.name, "A": a.name, "B": b.name}
        try:
            bundle = exponential(b, a, limit)
            xa = product(x, a).object
            left_n = count_hom(xa, b, limit)
            right_n = count_hom(x, bundle.object, limit)
        except BudgetExceeded as exc:
            report.skipped.append({**label, "reason": str(exc)})
            continue
        report.checked += 1
        if left_n != right_n:
            report.fail(**label, problem=f"|hom(XxA,B)|={left_n} != |hom(X,B^A)|={right_n}")
            continue
        if left_n > min(limit, round_trip_limit):
            count_only.append({**label, "count": left_n})
            continue
        round_trips += 1
        curried = set()
        for f in hom(xa, b, limit):
            h = transpose(f, bundle, x)
            if morphism_problems(h):
                report.fail(**label, problem="transpose produced an invalid morphism")
                break
            if untranspose(h, bundle) != f:
                report.fail(**label, problem="eval o (transpose f x id) != f")
                break
            curried.add(h)
        if len(curried) != left_n:
            report.fail(**label, problem="transpose is not injective")
        for h in hom(x, bundle.object, limit):
            if transpose(untranspose(h, bundle), bundle, x) != h:
                report.fail(**label, problem="transpose o untranspose != id")
                break
    report.details["round_trips"] = round_trips
    return report


def verify_classifier(graphs: Iterable[RGraph], budget: int | None = None) -> CheckReport:
    """|hom(G, Omega)| = |subobjects(G)| with characteristic and pullback
    mutually inverse."""
    report = CheckReport("subobject_classifier")
    omega = omega_graph()
    limit = get_budget(budget)
    for g in graphs:
        try:
            subs = subobjects(g, limit)
            chis = hom(g, omega, limit)
        except BudgetExceeded as exc:
            report.skipped.append({"G": g.name, "reason": str(exc)})
            continue
        report.checked += 1
        if len(subs) != len(chis):
            report.fail(G=g.name, problem=f"|hom(G,Omega)|={len(chis)} != |subobjects|={len(subs)}")
            continue
        for s in subs:
            chi = characteristic(s)
            if morphism_problems(chi):
                report.fail(G=g.name, sub=s.describe(), problem="characteristic map is not a morphism")
            elif subobject_from_characteristic(chi) != s:
                report.fail(G=g.name, sub=s.describe(), problem="pullback does not recover the subobject")
            elif pullback_along_true(chi).n_vertices != len(s.vertices) or pullback_along_true(chi).n_edges != len(s.edges):
                report.fail(G=g.name, sub=s.describe(), problem="pullback object has the wrong size")
        for chi in chis:
            if characteristic(subobject_from_characteristic(chi)) != chi:
                report.fail(G=g.name, problem="characteristic o pullback != id")
    return report
