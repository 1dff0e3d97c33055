"""Small named graphs used by the sweeps and the CLI."""

from __future__ import annotations

from .core import (
    RGraph,
    complete,
    discrete,
    edge_graph,
    empty_graph,
    k2_graph,
    make_graph,
    omega_graph,
    terminal_graph,
)


def path(n: int) -> RGraph:
    vs = [f"p{i}" for i in range(n)]
    return make_graph(f"P{n}", vs, [(f"p{i}>p{i + 1}", vs[i], vs[i + 1]) for i in range(n - 1)])


def cycle(n: int) -> RGraph:
    vs = [f"c{i}" for i in range(n)]
    return make_graph(f"C{n}", vs, [(f"c{i}>c{(i + 1) % n}", vs[i], vs[(i + 1) % n]) for i in range(n)])


def extra_loop() -> RGraph:
    """One vertex with a second, non-distinguished loop."""
    return make_graph("L1", ["x"], [("x*", "x", "x")])


def parallel_pair() -> RGraph:
    """E with a doubled arrow."""
    return make_graph("E2", ["s", "t"], [("a", "s", "t"), ("b", "s", "t")])


def star_out(n: int) -> RGraph:
    leaves = [f"l{i}" for i in range(n)]
    return make_graph(f"S{n}", ["hub", *leaves], [(f"hub>{v}", "hub", v) for v in leaves])


def tournament3() -> RGraph:
    return make_graph("T3", ["a", "b", "c"], [("a>b", "a", "b"), ("b>c", "b", "c"), ("a>c", "a", "c")])


BUILTINS = {
    "0": empty_graph,
    "1": terminal_graph,
    "E": edge_graph,
    "K2": k2_graph,
    "Omega": omega_graph,
    "D2": lambda: discrete(2),
    "D3": lambda: discrete(3),
    "K3": lambda: complete(3),
    "P3": lambda: path(3),
    "L1": extra_loop,
    "E2": parallel_pair,
}


def builtin(name: str) -> RGraph:
    return BUILTINS[name]()


def identification_corpus() -> list[RGraph]:
    """More than twenty graphs with at most four vertices."""
    graphs = [empty_graph(), terminal_graph(), edge_graph(), k2_graph(), omega_graph(), extra_loop(), parallel_pair(), tournament3()]
    graphs += [discrete(n) for n in range(5)]
    graphs += [complete(n) for n in range(1, 5)]
    graphs += [path(n) for n in (2, 3, 4)]
    graphs += [cycle(n) for n in (2, 3, 4)]
    graphs += [star_out(n) for n in (2, 3)]
    return graphs


def topos_corpus(max_vertices: int = 2) -> list[RGraph]:
    """Graphs for the universal-property sweeps, at most ``max_vertices`` each."""
    graphs = [
        empty_graph(), terminal_graph(), extra_loop(), edge_graph(), k2_graph(),
        omega_graph(), discrete(2), parallel_pair(), discrete(3), path(3), tournament3(),
    ]
    return [g for g in graphs if g.n_vertices <= max_vertices]


def completeness_powers() -> list[RGraph]:
    """Every H with at most 3 vertices and at most 2 non-loop extra edges,
    drawn from the named families."""
    return [
        empty_graph(), terminal_graph(), extra_loop(), discrete(2), edge_graph(), k2_graph(),
        parallel_pair(), omega_graph(), discrete(3), path(3), cycle(2), star_out(2),
        make_graph("V3", ["a", "b", "c"], [("a>c", "a", "c"), ("b>c", "b", "c")]),
        make_graph("EL", ["s", "t"], [("st", "s", "t"), ("s*", "s", "s")]),
    ]
