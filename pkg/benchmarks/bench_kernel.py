"""Compare the compiled hom kernel with the pure-Python fallback.

    python benchmarks/bench_kernel.py [--repeat N]
"""
import argparse
import timeit

from rgraph_topos import _pykernel, corpus
from rgraph_topos.core import complete, discrete, edge_graph, k2_graph, omega_graph
from rgraph_topos.topos import exponential, product

try:
    from rgraph_topos import _ckernel
except ImportError:
    _ckernel = None

CASES = [
    ("E -> Omega", edge_graph(), omega_graph()),
    ("T3 -> K3", corpus.tournament3(), complete(3)),
    ("K2xK2 -> Omega", product(k2_graph(), k2_graph()).object, omega_graph()),
    ("D3 -> K2^D3", discrete(3), exponential(k2_graph(), discrete(3)).object),
    ("P3 -> K2^K2", corpus.path(3), exponential(k2_graph(), k2_graph()).object),
    ("K3 -> K3^K2", complete(3), exponential(complete(3), k2_graph()).object),
]


def bench(fn, args, repeat):
    t = timeit.Timer(lambda: fn(*args))
    loops, _ = t.autorange()
    return min(t.repeat(repeat, loops)) / loops


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    print(f"{'case':<16} {'maps':>8} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, a, b in CASES:
        args = (a.n_vertices, b.n_vertices, a.constraints(), b.count_table())
        n = len(_pykernel.vertex_maps(*args))
        py = bench(_pykernel.vertex_maps, args, opts.repeat)
        if _ckernel is None:
            print(f"{name:<16} {n:>8} {py * 1e3:>10.3f} {'n/a':>10} {'':>8}")
            continue
        assert _ckernel.vertex_maps(*args) == _pykernel.vertex_maps(*args)
        cy = bench(_ckernel.vertex_maps, args, opts.repeat)
        print(f"{name:<16} {n:>8} {py * 1e3:>10.3f} {cy * 1e3:>10.3f} {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
