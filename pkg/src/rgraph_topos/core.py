"""Finite reflexive directed graphs and their morphisms.

An rgraph is a directed multigraph in which every vertex carries a
distinguished self-loop.  Vertices and edges keep their declaration order;
every enumeration in this package is lexicographic in that order.
"""

from __future__ import annotations

import functools
import itertools
import os
import random
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from . import kernel

LOOP_PREFIX = "loop@"
DEFAULT_BUDGET = 10**6


class RGraphError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(RGraphError, ValueError):
    """Raised with the full list of invariant violations found."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class BudgetExceeded(RGraphError):
    """An enumeration would exceed the configured budget."""

    def __init__(self, what: str, size: int, budget: int):
        self.what = what
        self.size = size
        self.budget = budget
        super().__init__(f"{what}: {size} exceeds budget {budget}")


class ShapeError(RGraphError, ValueError):
    """Morphisms or graphs do not fit together (domain/codomain mismatch)."""


def get_budget(budget: int | None = None) -> int:
    """Resolve an enumeration budget; ``RGT_BUDGET`` overrides the default."""
    if budget is not None:
        return budget
    env = os.environ.get("RGT_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


def loop_id(vertex: str) -> str:
    return LOOP_PREFIX + vertex


class Edge(NamedTuple):
    id: str
    src: str
    tgt: str


@dataclass(frozen=True, eq=False)
class RGraph:
    """A validated finite rgraph.  Build through :func:`validate_rgraph`
    or :func:`make_graph`; the constructor assumes valid input."""

    name: str
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    loop_of: Mapping[str, str]

    vindex: dict[str, int] = field(init=False, repr=False)
    eindex: dict[str, int] = field(init=False, repr=False)
    src: tuple[int, ...] = field(init=False, repr=False)
    tgt: tuple[int, ...] = field(init=False, repr=False)
    loops: tuple[int, ...] = field(init=False, repr=False)
    distinguished: tuple[bool, ...] = field(init=False, repr=False)
    between: dict[tuple[int, int], tuple[int, ...]] = field(init=False, repr=False)
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        put = object.__setattr__
        vindex = {v: i for i, v in enumerate(self.vertices)}
        eindex = {e.id: i for i, e in enumerate(self.edges)}
        put(self, "loop_of", dict(self.loop_of))
        put(self, "vindex", vindex)
        put(self, "eindex", eindex)
        put(self, "src", tuple(vindex[e.src] for e in self.edges))
        put(self, "tgt", tuple(vindex[e.tgt] for e in self.edges))
        loops = tuple(eindex[self.loop_of[v]] for v in self.vertices)
        put(self, "loops", loops)
        flags = [False] * len(self.edges)
        for i in loops:
            flags[i] = True
        put(self, "distinguished", tuple(flags))
        between: dict[tuple[int, int], list[int]] = {}
        for i, (s, t) in enumerate(zip(self.src, self.tgt)):
            between.setdefault((s, t), []).append(i)
        put(self, "between", {k: tuple(v) for k, v in between.items()})
        put(self, "_key", (self.name, self.vertices, self.edges, loops))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RGraph):
            return NotImplemented
        return self is other or self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"RGraph({self.name!r}, {len(self.vertices)} vertices, {len(self.edges)} edges)"

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edges_between(self, u: str, v: str) -> list[str]:
        idx = self.between.get((self.vindex[u], self.vindex[v]), ())
        return [self.edges[i].id for i in idx]

    def edge(self, edge_id: str) -> Edge:
        return self.edges[self.eindex[edge_id]]

    def renamed(self, name: str) -> RGraph:
        return RGraph(name, self.vertices, self.edges, self.loop_of)

    def count_table(self) -> list[int]:
        n = len(self.vertices)
        table = [0] * (n * n)
        for (s, t), idx in self.between.items():
            table[s * n + t] = len(idx)
        return table

    def constraints(self) -> list[tuple[int, int]]:
        return [
            (s, t)
            for s, t, d in zip(self.src, self.tgt, self.distinguished)
            if not d
        ]


def _raw_edge(item: Any) -> tuple[Any, Any, Any, bool]:
    if isinstance(item, Mapping):
        return item.get("name", item.get("id")), item.get("src"), item.get("tgt"), bool(item.get("distinguished", False))
    name, s, t = item[:3]
    return name, s, t, False


def validate_rgraph(raw: Mapping[str, Any] | RGraph) -> RGraph:
    """Validate a raw graph description and return an :class:`RGraph`.

    ``raw`` holds ``name``, ``vertices`` and ``edges`` (mappings with
    ``name``/``src``/``tgt`` or ``(name, src, tgt)`` triples).  With
    ``loops: "implicit"`` (the default) a loop ``loop@<v>`` is created for
    every vertex, ahead of the declared edges.  With ``loops: "explicit"``
    the distinguished loops are the edges flagged ``distinguished: true``
    or those named by an optional ``loop_of`` mapping.

    Raises :class:`ValidationError` listing every violation.
    """
    if isinstance(raw, RGraph):
        raw = to_dict(raw)
    problems: list[str] = []
    name = str(raw.get("name", "G"))
    mode = raw.get("loops", "implicit")
    if mode not in ("implicit", "explicit"):
        problems.append(f"loops must be 'implicit' or 'explicit', got {mode!r}")
        raise ValidationError(problems)

    vertices = [str(v) for v in raw.get("vertices", [])]
    seen: set[str] = set()
    for v in vertices:
        if v in seen:
            problems.append(f"duplicate id: vertex {v!r}")
        seen.add(v)
    vset = set(vertices)

    declared = [_raw_edge(item) for item in raw.get("edges", [])]
    mapped_loops = {str(e) for e in dict(raw.get("loop_of") or {}).values()} if mode == "explicit" else set()
    edges: list[Edge] = []
    flagged: list[str] = []
    if mode == "implicit":
        for v in dict.fromkeys(vertices):
            edges.append(Edge(loop_id(v), v, v))
    for name_, s, t, dist in declared:
        name_ = str(name_)
        if mode == "implicit" and dist:
            problems.append(f"edge {name_!r} flagged distinguished in implicit-loop mode")
        if not dist and name_.startswith(LOOP_PREFIX) and name_ not in mapped_loops:
            problems.append(f"reserved id: ordinary edge {name_!r} uses the {LOOP_PREFIX!r} prefix")
        edges.append(Edge(name_, str(s), str(t)))
        if dist:
            flagged.append(name_)

    eseen: set[str] = set()
    for e in edges:
        if e.id in eseen:
            problems.append(f"duplicate id: edge {e.id!r}")
        eseen.add(e.id)
        for end, label in ((e.src, "source"), (e.tgt, "target")):
            if end not in vset:
                problems.append(f"dangling endpoint: edge {e.id!r} {label} {end!r} is not a vertex")

    by_id = {e.id: e for e in edges}
    if mode == "implicit":
        loop_of = {v: loop_id(v) for v in vertices}
    else:
        loop_of = {}
        explicit_map = raw.get("loop_of")
        if explicit_map is not None:
            loop_of = {str(k): str(v) for k, v in dict(explicit_map).items()}
            for v in loop_of:
                if v not in vset:
                    problems.append(f"dangling endpoint: loop_of names unknown vertex {v!r}")
        for eid in flagged:
            e = by_id[eid]
            if e.src != e.tgt:
                problems.append(f"invalid distinguished loop: edge {eid!r} has source {e.src!r} != target {e.tgt!r}")
                continue
            if e.src in loop_of and loop_of[e.src] != eid:
                problems.append(f"invalid distinguished loop: vertex {e.src!r} has two distinguished loops")
                continue
            loop_of[e.src] = eid

    owners: dict[str, str] = {}
    for v in vertices:
        eid = loop_of.get(v)
        if eid is None:
            problems.append(f"missing distinguished loop at vertex {v!r}")
            continue
        e = by_id.get(eid)
        if e is None:
            problems.append(f"invalid distinguished loop: vertex {v!r} names unknown edge {eid!r}")
        elif e.src != v or e.tgt != v:
            problems.append(f"invalid distinguished loop: edge {eid!r} is not a loop at {v!r}")
        if eid in owners:
            problems.append(f"shared distinguished loop: edge {eid!r} serves {owners[eid]!r} and {v!r}")
        owners[eid] = v

    if problems:
        raise ValidationError(problems)
    return RGraph(name, tuple(vertices), tuple(edges), loop_of)


def make_graph(
    name: str,
    vertices: Iterable[str],
    edges: Iterable[tuple[str, str, str]] = (),
) -> RGraph:
    """Shorthand for an implicit-loop graph."""
    return validate_rgraph({"name": name, "vertices": list(vertices), "edges": list(edges)})


def to_dict(g: RGraph) -> dict[str, Any]:
    """Canonical serialization; ``validate_rgraph(to_dict(g)) == g``."""
    n = len(g.vertices)
    implicit = all(g.loop_of[v] == loop_id(v) for v in g.vertices) and all(
        g.edges[i].id == loop_id(v) for i, v in enumerate(g.vertices)
    ) and not any(e.id.startswith(LOOP_PREFIX) for e in g.edges[n:])
    if implicit:
        return {
            "name": g.name,
            "loops": "implicit",
            "vertices": list(g.vertices),
            "edges": [{"name": e.id, "src": e.src, "tgt": e.tgt} for e in g.edges[n:]],
        }
    edges = []
    for e, dist in zip(g.edges, g.distinguished):
        item: dict[str, Any] = {"name": e.id, "src": e.src, "tgt": e.tgt}
        if dist:
            item["distinguished"] = True
        edges.append(item)
    return {"name": g.name, "loops": "explicit", "vertices": list(g.vertices), "edges": edges}


@dataclass(frozen=True)
class RGraphMorphism:
    """A morphism stored as index tuples into the declared orders."""

    domain: RGraph
    codomain: RGraph
    vmap: tuple[int, ...]
    emap: tuple[int, ...]

    @property
    def vertex_map(self) -> dict[str, str]:
        cod = self.codomain.vertices
        return {v: cod[i] for v, i in zip(self.domain.vertices, self.vmap)}

    @property
    def edge_map(self) -> dict[str, str]:
        cod = self.codomain.edges
        return {e.id: cod[i].id for e, i in zip(self.domain.edges, self.emap)}

    def vertex(self, v: str) -> str:
        return self.codomain.vertices[self.vmap[self.domain.vindex[v]]]

    def edge(self, e: str) -> str:
        return self.codomain.edges[self.emap[self.domain.eindex[e]]].id

    def __matmul__(self, other: RGraphMorphism) -> RGraphMorphism:
        return compose(self, other)

    def __repr__(self) -> str:
        return f"RGraphMorphism({self.domain.name} -> {self.codomain.name}, {self.vertex_map})"

    def to_dict(self) -> dict[str, Any]:
        return {
            "domain": self.domain.name,
            "codomain": self.codomain.name,
            "vertices": self.vertex_map,
            "edges": self.edge_map,
        }


def morphism_problems(m: RGraphMorphism) -> list[str]:
    """Every way in which the index maps fail to form a morphism."""
    a, b = m.domain, m.codomain
    problems = []
    for i, (s, t) in enumerate(zip(a.src, a.tgt)):
        j = m.emap[i]
        eid = a.edges[i].id
        if b.src[j] != m.vmap[s] or b.tgt[j] != m.vmap[t]:
            problems.append(f"source/target not preserved at edge {eid!r}")
    for v, li in enumerate(a.loops):
        if m.emap[li] != b.loops[m.vmap[v]]:
            problems.append(
                f"distinguished loop not preserved at vertex {a.vertices[v]!r}: "
                f"{a.edges[li].id!r} -> {b.edges[m.emap[li]].id!r}"
            )
    return problems


def validate_morphism(raw: Mapping[str, Any], domain: RGraph, codomain: RGraph) -> RGraphMorphism:
    """Build a morphism from ``{"vertices": {...}, "edges": {...}}`` maps of ids.

    Raises :class:`ValidationError` listing every violation.
    """
    problems: list[str] = []
    vraw = dict(raw.get("vertices", raw.get("vertex_map", {})))
    eraw = dict(raw.get("edges", raw.get("edge_map", {})))
    vmap: list[int] = []
    for v in domain.vertices:
        if v not in vraw:
            problems.append(f"non-total map: vertex {v!r} has no image")
            vmap.append(-1)
        elif vraw[v] not in codomain.vindex:
            problems.append(f"vertex {v!r} maps to unknown vertex {vraw[v]!r}")
            vmap.append(-1)
        else:
            vmap.append(codomain.vindex[vraw[v]])
    emap: list[int] = []
    for e in domain.edges:
        if e.id not in eraw:
            problems.append(f"non-total map: edge {e.id!r} has no image")
            emap.append(-1)
        elif eraw[e.id] not in codomain.eindex:
            problems.append(f"edge {e.id!r} maps to unknown edge {eraw[e.id]!r}")
            emap.append(-1)
        else:
            emap.append(codomain.eindex[eraw[e.id]])
    extra = (set(vraw) - set(domain.vindex)) | (set(eraw) - set(domain.eindex))
    for key in sorted(extra):
        problems.append(f"map mentions {key!r}, which is not in the domain")
    if problems:
        raise ValidationError(problems)
    m = RGraphMorphism(domain, codomain, tuple(vmap), tuple(emap))
    problems = morphism_problems(m)
    if problems:
        raise ValidationError(problems)
    return m


def identity(g: RGraph) -> RGraphMorphism:
    return RGraphMorphism(g, g, tuple(range(g.n_vertices)), tuple(range(g.n_edges)))


def compose(g_then: RGraphMorphism, f_first: RGraphMorphism) -> RGraphMorphism:
    """``g_then ∘ f_first``."""
    if f_first.codomain != g_then.domain:
        raise ShapeError(
            f"cannot compose: codomain {f_first.codomain.name!r} != domain {g_then.domain.name!r}"
        )
    gv, ge = g_then.vmap, g_then.emap
    return RGraphMorphism(
        f_first.domain,
        g_then.codomain,
        tuple(gv[i] for i in f_first.vmap),
        tuple(ge[i] for i in f_first.emap),
    )


@dataclass(frozen=True)
class HomSet:
    domain: RGraph
    codomain: RGraph
    morphisms: tuple[RGraphMorphism, ...]

    def __len__(self) -> int:
        return len(self.morphisms)

    def __iter__(self) -> Iterator[RGraphMorphism]:
        return iter(self.morphisms)

    def __getitem__(self, i: int) -> RGraphMorphism:
        return self.morphisms[i]

    def index(self, m: RGraphMorphism) -> int:
        try:
            lookup = self.__dict__["_lookup"]
        except KeyError:
            lookup = {(x.vmap, x.emap): i for i, x in enumerate(self.morphisms)}
            object.__setattr__(self, "_lookup", lookup)
        if m.domain != self.domain or m.codomain != self.codomain:
            raise ShapeError("morphism does not belong to this hom-set")
        return lookup[(m.vmap, m.emap)]


def _check_vertex_budget(a: RGraph, b: RGraph, budget: int) -> None:
    bound = b.n_vertices ** a.n_vertices
    if bound > budget:
        raise BudgetExceeded(f"hom({a.name}, {b.name}) candidate vertex maps", bound, budget)


def _edge_choices(a: RGraph, b: RGraph, vmap: Sequence[int]) -> list[tuple[int, ...]]:
    choices = []
    for i, (s, t) in enumerate(zip(a.src, a.tgt)):
        if a.distinguished[i]:
            choices.append((b.loops[vmap[s]],))
        else:
            choices.append(b.between.get((vmap[s], vmap[t]), ()))
    return choices


def count_hom(a: RGraph, b: RGraph, budget: int | None = None) -> int:
    """|hom(a, b)| without materializing the morphisms."""
    _check_vertex_budget(a, b, get_budget(budget))
    return kernel.count_homs(a.n_vertices, b.n_vertices, a.constraints(), b.count_table())


def iter_hom(a: RGraph, b: RGraph, budget: int | None = None) -> Iterator[RGraphMorphism]:
    """Lazily yield hom(a, b) in canonical order."""
    _check_vertex_budget(a, b, get_budget(budget))
    for vmap in kernel.vertex_maps(a.n_vertices, b.n_vertices, a.constraints(), b.count_table()):
        for emap in itertools.product(*_edge_choices(a, b, vmap)):
            yield RGraphMorphism(a, b, vmap, emap)


def hom(a: RGraph, b: RGraph, budget: int | None = None) -> HomSet:
    """Every morphism a -> b, lexicographic by vertex map then edge map.

    Refuses with :class:`BudgetExceeded` when either the candidate vertex
    maps or the actual number of morphisms exceed the budget.
    """
    limit = get_budget(budget)
    n = count_hom(a, b, limit)
    if n > limit:
        raise BudgetExceeded(f"|hom({a.name}, {b.name})|", n, limit)
    return HomSet(a, b, tuple(iter_hom(a, b, limit)))


def sample_hom(a: RGraph, b: RGraph, k: int, rng: random.Random) -> list[RGraphMorphism]:
    """``k`` morphisms drawn by randomized backtracking (not uniform)."""
    out = []
    for _ in range(k):
        m = _random_morphism(a, b, rng)
        if m is None:
            break
        out.append(m)
    return out


def _random_morphism(a: RGraph, b: RGraph, rng: random.Random) -> RGraphMorphism | None:
    na, nb = a.n_vertices, b.n_vertices
    table = b.count_table()
    checks: list[list[tuple[int, int]]] = [[] for _ in range(na)]
    for s, t in a.constraints():
        checks[max(s, t)].append((s, t))
    assign = [0] * na

    def place(depth: int) -> bool:
        if depth == na:
            return True
        order = list(range(nb))
        rng.shuffle(order)
        for c in order:
            assign[depth] = c
            if all(table[assign[s] * nb + assign[t]] for s, t in checks[depth]) and place(depth + 1):
                return True
        return False

    if not place(0):
        return None
    vmap = tuple(assign)
    emap = tuple(rng.choice(c) for c in _edge_choices(a, b, vmap))
    return RGraphMorphism(a, b, vmap, emap)


def is_isomorphism(m: RGraphMorphism) -> bool:
    return (
        m.domain.n_vertices == m.codomain.n_vertices
        and m.domain.n_edges == m.codomain.n_edges
        and len(set(m.vmap)) == len(m.vmap)
        and len(set(m.emap)) == len(m.emap)
    )


def is_isomorphic(a: RGraph, b: RGraph, budget: int | None = None) -> tuple[bool, RGraphMorphism | None]:
    """Decide a ≅ b; on success also return an invertible witness a -> b."""
    if a.n_vertices != b.n_vertices or a.n_edges != b.n_edges:
        return False, None
    limit = get_budget(budget)
    _check_vertex_budget(a, b, limit)
    for vmap in kernel.vertex_maps(a.n_vertices, b.n_vertices, a.constraints(), b.count_table()):
        if len(set(vmap)) != len(vmap):
            continue
        emap = _bijective_edges(a, b, vmap)
        if emap is not None:
            return True, RGraphMorphism(a, b, vmap, emap)
    return False, None


def _bijective_edges(a: RGraph, b: RGraph, vmap: Sequence[int]) -> tuple[int, ...] | None:
    # matching parallel classes pairwise, distinguished loop onto distinguished loop
    emap = [0] * a.n_edges
    for (s, t), idx in a.between.items():
        target = b.between.get((vmap[s], vmap[t]), ())
        if len(target) != len(idx):
            return None
        if s == t:
            emap[a.loops[s]] = b.loops[vmap[s]]
            rest_a = [i for i in idx if not a.distinguished[i]]
            rest_b = [j for j in target if not b.distinguished[j]]
        else:
            rest_a, rest_b = list(idx), list(target)
        for i, j in zip(rest_a, rest_b):
            emap[i] = j
    return tuple(emap)


def inverse(m: RGraphMorphism) -> RGraphMorphism:
    if not is_isomorphism(m):
        raise ShapeError("morphism is not invertible")
    vinv = [0] * len(m.vmap)
    for i, j in enumerate(m.vmap):
        vinv[j] = i
    einv = [0] * len(m.emap)
    for i, j in enumerate(m.emap):
        einv[j] = i
    return RGraphMorphism(m.codomain, m.domain, tuple(vinv), tuple(einv))


# canonical graphs


@functools.lru_cache(maxsize=None)
def empty_graph() -> RGraph:
    return make_graph("0", [])


@functools.lru_cache(maxsize=None)
def terminal_graph() -> RGraph:
    return make_graph("1", ["!1"])


@functools.lru_cache(maxsize=None)
def edge_graph() -> RGraph:
    return make_graph("E", ["s", "t"], [("1_E", "s", "t")])


@functools.lru_cache(maxsize=None)
def k2_graph() -> RGraph:
    return make_graph("K2", ["1", "2"], [("1>2", "1", "2"), ("2>1", "2", "1")])


@functools.lru_cache(maxsize=None)
def omega_graph() -> RGraph:
    """Truth-value graph; ``loop@true`` is distinguished, ``extra@true`` is not."""
    return make_graph(
        "Omega",
        ["true", "false"],
        [
            ("extra@true", "true", "true"),
            ("true>false", "true", "false"),
            ("false>true", "false", "true"),
        ],
    )


@functools.lru_cache(maxsize=None)
def discrete(n: int) -> RGraph:
    if n < 0:
        raise ValueError("n must be >= 0")
    return make_graph(f"D{n}", [f"v{i}" for i in range(n)])


@functools.lru_cache(maxsize=None)
def complete(n: int) -> RGraph:
    if n < 0:
        raise ValueError("n must be >= 0")
    vs = [f"v{i}" for i in range(n)]
    edges = [(f"{u}>{v}", u, v) for u in vs for v in vs if u != v]
    return make_graph(f"K{n}", vs, edges)


def swap_k2() -> RGraphMorphism:
    k2 = k2_graph()
    return validate_morphism(
        {
            "vertices": {"1": "2", "2": "1"},
            "edges": {"loop@1": "loop@2", "loop@2": "loop@1", "1>2": "2>1", "2>1": "1>2"},
        },
        k2,
        k2,
    )
