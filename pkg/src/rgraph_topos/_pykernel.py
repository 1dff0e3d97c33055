"""Pure-Python hom-enumeration kernel.

Both kernels share one calling convention.  A domain graph is reduced to
its vertex count plus the endpoint pairs of its non-distinguished edges
(distinguished loops are always satisfiable and are handled by the
caller).  A codomain is reduced to its vertex count and a flat row-major
table ``counts[u * nb + v]`` = number of edges from ``u`` to ``v``.

Vertex maps are produced in lexicographic order: vertex 0 varies slowest.
"""

from __future__ import annotations

from collections.abc import Sequence

BACKEND = "python"


def _checks_by_depth(na: int, constraints: Sequence[tuple[int, int]]) -> list[list[tuple[int, int]]]:
    # each edge constraint is tested once, as soon as both endpoints are placed
    checks: list[list[tuple[int, int]]] = [[] for _ in range(na)]
    for s, t in constraints:
        checks[max(s, t)].append((s, t))
    return checks


def vertex_maps(
    na: int,
    nb: int,
    constraints: Sequence[tuple[int, int]],
    counts: Sequence[int],
) -> list[tuple[int, ...]]:
    """All vertex assignments that admit at least one edge image per edge."""
    if na == 0:
        return [()]
    if nb == 0:
        return []
    checks = _checks_by_depth(na, constraints)
    assign = [0] * na
    cursor = [0] * na
    out: list[tuple[int, ...]] = []
    depth = 0
    while depth >= 0:
        c = cursor[depth]
        if c == nb:
            cursor[depth] = 0
            depth -= 1
            if depth >= 0:
                cursor[depth] += 1
            continue
        assign[depth] = c
        ok = True
        for s, t in checks[depth]:
            if counts[assign[s] * nb + assign[t]] == 0:
                ok = False
                break
        if not ok:
            cursor[depth] += 1
            continue
        if depth == na - 1:
            out.append(tuple(assign))
            cursor[depth] += 1
        else:
            depth += 1
    return out


def count_homs(
    na: int,
    nb: int,
    constraints: Sequence[tuple[int, int]],
    counts: Sequence[int],
) -> int:
    """Number of morphisms: sum over vertex maps of the per-edge choice products."""
    if na == 0:
        return 1
    if nb == 0:
        return 0
    checks = _checks_by_depth(na, constraints)
    assign = [0] * na
    cursor = [0] * na
    weight = [1] * (na + 1)
    total = 0
    depth = 0
    while depth >= 0:
        c = cursor[depth]
        if c == nb:
            cursor[depth] = 0
            depth -= 1
            if depth >= 0:
                cursor[depth] += 1
            continue
        assign[depth] = c
        w = weight[depth]
        for s, t in checks[depth]:
            w *= counts[assign[s] * nb + assign[t]]
            if w == 0:
                break
        if w == 0:
            cursor[depth] += 1
            continue
        if depth == na - 1:
            total += w
            cursor[depth] += 1
        else:
            weight[depth + 1] = w
            depth += 1
    return total
