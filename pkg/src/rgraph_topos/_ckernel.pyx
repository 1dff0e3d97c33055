# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hom-enumeration kernel; mirrors ``_pykernel`` exactly."""

from libc.stdlib cimport malloc, free
from libc.limits cimport ULLONG_MAX

BACKEND = "cython"


cdef int _plan(int na, object constraints, int **start_out, int **pairs_out) except -1:
    # CSR layout: checks for depth d are pairs[2*start[d] : 2*start[d+1]]
    cdef int m = len(constraints)
    cdef int *start = <int *> malloc((na + 1) * sizeof(int))
    cdef int *pairs = <int *> malloc((2 * m + 1) * sizeof(int))
    cdef int *fill = <int *> malloc((na + 1) * sizeof(int))
    cdef int i, s, t, d
    if start == NULL or pairs == NULL or fill == NULL:
        free(start); free(pairs); free(fill)
        raise MemoryError()
    for i in range(na + 1):
        start[i] = 0
    for s, t in constraints:
        d = s if s > t else t
        start[d + 1] += 1
    for i in range(na):
        start[i + 1] += start[i]
    for i in range(na + 1):
        fill[i] = start[i]
    for s, t in constraints:
        d = s if s > t else t
        pairs[2 * fill[d]] = s
        pairs[2 * fill[d] + 1] = t
        fill[d] += 1
    free(fill)
    start_out[0] = start
    pairs_out[0] = pairs
    return 0


cdef int *_table(int nb, object counts) except NULL:
    cdef int n = nb * nb
    cdef int *tab = <int *> malloc((n + 1) * sizeof(int))
    cdef int i
    if tab == NULL:
        raise MemoryError()
    for i in range(n):
        tab[i] = counts[i]
    return tab


def vertex_maps(int na, int nb, constraints, counts):
    if na == 0:
        return [()]
    if nb == 0:
        return []
    cdef int *start = NULL
    cdef int *pairs = NULL
    cdef int *tab = NULL
    cdef int *assign = NULL
    cdef int *cursor = NULL
    cdef int depth, c, k, ok
    out = []
    _plan(na, constraints, &start, &pairs)
    try:
        tab = _table(nb, counts)
        assign = <int *> malloc(na * sizeof(int))
        cursor = <int *> malloc(na * sizeof(int))
        if assign == NULL or cursor == NULL:
            raise MemoryError()
        for k in range(na):
            cursor[k] = 0
            assign[k] = 0
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
            ok = 1
            for k in range(start[depth], start[depth + 1]):
                if tab[assign[pairs[2 * k]] * nb + assign[pairs[2 * k + 1]]] == 0:
                    ok = 0
                    break
            if not ok:
                cursor[depth] += 1
                continue
            if depth == na - 1:
                out.append(tuple([assign[k] for k in range(na)]))
                cursor[depth] += 1
            else:
                depth += 1
    finally:
        free(start); free(pairs); free(tab); free(assign); free(cursor)
    return out


def count_homs(int na, int nb, constraints, counts):
    if na == 0:
        return 1
    if nb == 0:
        return 0
    cdef int *start = NULL
    cdef int *pairs = NULL
    cdef int *tab = NULL
    cdef int *assign = NULL
    cdef int *cursor = NULL
    cdef unsigned long long *weight = NULL
    cdef unsigned long long w, acc = 0
    cdef int depth, c, k, x
    total = 0
    _plan(na, constraints, &start, &pairs)
    try:
        tab = _table(nb, counts)
        assign = <int *> malloc(na * sizeof(int))
        cursor = <int *> malloc(na * sizeof(int))
        weight = <unsigned long long *> malloc((na + 1) * sizeof(unsigned long long))
        if assign == NULL or cursor == NULL or weight == NULL:
            raise MemoryError()
        for k in range(na):
            cursor[k] = 0
            assign[k] = 0
        weight[0] = 1
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
            for k in range(start[depth], start[depth + 1]):
                x = tab[assign[pairs[2 * k]] * nb + assign[pairs[2 * k + 1]]]
                if x == 0:
                    w = 0
                    break
                if w > ULLONG_MAX // <unsigned long long> x:
                    raise OverflowError("hom count exceeds 64 bits")
                w *= x
            if w == 0:
                cursor[depth] += 1
                continue
            if depth == na - 1:
                if acc > ULLONG_MAX - w:
                    total += acc
                    acc = 0
                acc += w
                cursor[depth] += 1
            else:
                weight[depth + 1] = w
                depth += 1
    finally:
        free(start); free(pairs); free(tab); free(assign); free(cursor); free(weight)
    return total + acc
