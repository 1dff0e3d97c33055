from hypothesis import strategies as st

from rgraph_topos.core import make_graph


@st.composite
def rgraphs(draw, max_vertices=3, max_edges=3):
    n = draw(st.integers(0, max_vertices))
    vs = [f"v{i}" for i in range(n)]
    if not n:
        return make_graph("G", [])
    pairs = draw(
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=max_edges)
    )
    return make_graph("G", vs, [(f"e{k}", vs[s], vs[t]) for k, (s, t) in enumerate(pairs)])
