"""Normalized bar complex of a finite group in degrees <= 3.

Chains in degree k are free on tuples [g1|...|gk] of non-identity elements;
any face that produces an identity entry is dropped. With trivial integer
coefficients the boundaries are

    d2[g|h]   = [h] - [gh] + [g]
    d3[g|h|k] = [h|k] - [gh|k] + [g|hk] - [g|h]

Second homology is ker(d2)/im(d3). Assembly is vectorized with numpy since
degree 3 has (n-1)^3 columns; the exactness check d2 . d3 = 0 is run in full
on every build (chunked bincount, exact for these small summands).
"""

from __future__ import annotations

import numpy as np

from .abelian import AbelianInvariants
from .errors import ComplexNotExact
from .groups import Group
from .intlinalg import (
    HomologyResult,
    SparseIntMatrix,
    smith_normal_form,
    snf_factors_of_columns,
)

_CHUNK = 1 << 16


def _nonid_positions(g: Group) -> np.ndarray:
    """pos[x] = index of x among non-identity elements, -1 at the identity."""
    pos = np.full(g.order, -1, dtype=np.int64)
    nonid = [x for x in range(g.order) if x != g.identity]
    pos[nonid] = np.arange(len(nonid), dtype=np.int64)
    return pos


def bar_d2(g: Group) -> SparseIntMatrix:
    """(n-1) x (n-1)^2 boundary; the [g] and [h] faces merge to +2 when g = h."""
    n = g.order
    if n == 1:
        return SparseIntMatrix.from_entries(0, 0, [])
    pos = _nonid_positions(g)
    table = g.table
    acc: dict[tuple[int, int], int] = {}
    m = n - 1
    nonid = [x for x in range(n) if x != g.identity]
    for a in nonid:
        for b in nonid:
            col = pos[a] * m + pos[b]
            for row_elt, sign in ((b, 1), (table[a][b], -1), (a, 1)):
                if row_elt != g.identity:
                    key = (int(pos[row_elt]), int(col))
                    acc[key] = acc.get(key, 0) + sign
    return SparseIntMatrix.from_entries(
        m, m * m, [(r, c, v) for (r, c), v in acc.items() if v]
    )


def _d3_terms(g: Group):
    """Vectorized face data of d3: list of (first, second, sign, present_mask).

    Arrays run over all (n-1)^3 columns in lexicographic (g, h, k) order. The
    only coinciding faces are [h|k] and [g|h] at g = h = k, which cancel; both
    masks drop that diagonal so no accumulation is ever needed.
    """
    n = g.order
    arr = g.table_array().astype(np.int64)
    nonid = np.array([x for x in range(n) if x != g.identity], dtype=np.int64)
    m = n - 1
    G = np.repeat(nonid, m * m)
    H = np.tile(np.repeat(nonid, m), m)
    K = np.tile(nonid, m * m)
    GH = arr[G, H]
    HK = arr[H, K]
    e = g.identity
    diag = (G == H) & (H == K)
    return [
        (H, K, 1, ~diag),
        (GH, K, -1, GH != e),
        (G, HK, 1, HK != e),
        (G, H, -1, ~diag),
    ]


def bar_d3_columns(g: Group):
    """Yield the d3 columns as (row, value) pair lists, in (g, h, k) order.

    The whole matrix is never materialized; each column carries at most four
    entries, assembled from vectorized face data.
    """
    n = g.order
    m = n - 1
    if n == 1:
        return
    pos = _nonid_positions(g)
    term_rows = []
    for first, second, sign, present in _d3_terms(g):
        rows = np.where(present, pos[first] * m + pos[second], -1)
        term_rows.append((rows.tolist(), sign))
    ncols = m * m * m
    t1, s1 = term_rows[0]
    t2, s2 = term_rows[1]
    t3, s3 = term_rows[2]
    t4, s4 = term_rows[3]
    for j in range(ncols):
        col = []
        r = t1[j]
        if r >= 0:
            col.append((r, s1))
        r = t2[j]
        if r >= 0:
            col.append((r, s2))
        r = t3[j]
        if r >= 0:
            col.append((r, s3))
        r = t4[j]
        if r >= 0:
            col.append((r, s4))
        if col:
            yield col


def verify_bar_exactness(g: Group) -> None:
    """Check d2 . d3 = 0 over every degree-3 column, exactly and in full.

    Each d3 face (a, b) expands under d2 into +-1 hits at rows a, b, and ab
    (the last dropped at the identity); the twelve signed hits per column are
    accumulated per chunk with bincount and must all cancel.
    """
    n = g.order
    if n <= 2:
        return
    arr = g.table_array().astype(np.int64)
    pos = _nonid_positions(g)
    e = g.identity
    m = n - 1
    terms = _d3_terms(g)
    ncols = m * m * m
    hits = []  # (col, row, weight) triples, lazily chunked below
    for first, second, sign, present in terms:
        ab = arr[first, second]
        for elt, s in ((first, sign), (second, sign), (ab, -sign)):
            mask = present & (elt != e)
            hits.append((mask, elt, s))
    colidx = np.arange(ncols, dtype=np.int64)
    for lo in range(0, ncols, _CHUNK):
        hi = min(lo + _CHUNK, ncols)
        width = hi - lo
        acc = np.zeros(width * m, dtype=np.float64)
        for mask, elt, s in hits:
            mk = mask[lo:hi]
            if not mk.any():
                continue
            lin = (colidx[lo:hi][mk] - lo) * m + pos[elt[lo:hi][mk]]
            acc += np.bincount(lin, weights=np.full(lin.size, float(s)), minlength=width * m)
        if acc.any():
            raise ComplexNotExact("bar complex fails d2 . d3 = 0")


def bar_h2(g: Group) -> HomologyResult:
    """Second integral homology of g via the normalized bar complex."""
    n = g.order
    if n == 1:
        return HomologyResult(AbelianInvariants(()), 0)
    verify_bar_exactness(g)
    d2 = bar_d2(g)
    snf2 = smith_normal_form(d2)
    m = n - 1
    snf3 = snf_factors_of_columns(m * m, bar_d3_columns(g))
    free = m * m - snf2.rank - snf3.rank
    if free < 0:
        raise ComplexNotExact("negative free rank in bar homology")
    return HomologyResult(AbelianInvariants(snf3.nontrivial()), free)
