"""Hot inner loops, in two interchangeable backends.

Each kernel exists as ``<name>_numpy`` (vectorised numpy, always available)
and ``<name>_numba`` (``@njit`` loops, only when numba imports). The public
name ``<name>`` is bound to one of them at import time: numba by default,
numpy when ``LEVITONE_NO_NUMBA`` is set to a non-empty value other than "0".

Both backends must return identical results; tests/test_kernels.py holds
them to that.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

_flag = os.environ.get("LEVITONE_NO_NUMBA", "").strip()
USE_NUMBA = HAVE_NUMBA and _flag in ("", "0")
BACKEND = "numba" if USE_NUMBA else "numpy"

NO_MATCH, PRESERVING_MATCH, REVERSING_MATCH = 0, 1, 2


# --------------------------------------------------------------------------
# colour refinement


def refine_numpy(adj: np.ndarray, colors: np.ndarray) -> np.ndarray:
    """Coarsest equitable refinement of ``colors`` on a multigraph.

    Cells are re-ranked by (old colour, weighted neighbour-colour counts) in
    lexicographic order, so the output depends only on the isomorphism type
    of the coloured graph. Returns dense ranks 0..k-1.
    """
    m = adj.shape[0]
    _, colors = np.unique(colors, return_inverse=True)
    colors = colors.ravel().astype(np.int64)
    if m == 0:
        return colors
    rows = np.arange(m)
    while True:
        k = int(colors.max()) + 1
        onehot = np.zeros((m, k), dtype=np.int64)
        onehot[rows, colors] = 1
        keys = np.column_stack([colors, adj @ onehot])
        _, new = np.unique(keys, axis=0, return_inverse=True)
        new = new.ravel().astype(np.int64)
        if new.max() == colors.max():
            return new
        colors = new


def _family_masks(triples: np.ndarray, mults: np.ndarray, n: int) -> np.ndarray:
    """Bitmask of every chord image under every map a*x + b, shape (A, n, chords)."""
    b = np.arange(n)
    img = (mults[:, None, None, None] * triples[None, None, :, :] + b[None, :, None, None]) % n
    return np.bitwise_or.reduce(np.left_shift(np.int64(1), img), axis=-1)


def _sorted_masks(triples: np.ndarray) -> np.ndarray:
    return np.sort(np.bitwise_or.reduce(np.left_shift(np.int64(1), triples), axis=-1))


def family_match_numpy(src_major, src_minor, dst_major, dst_minor, mults, n) -> np.ndarray:
    """Classify every affine map by what it does to two chord families.

    Families are (chords, 3) integer arrays of pitch classes. Entry [i, b] is
    PRESERVING_MATCH when x -> mults[i]*x + b carries the source Major and
    Minor multisets of pitch sets onto the target Major and Minor ones,
    REVERSING_MATCH when it swaps them, NO_MATCH otherwise. Preserving wins
    when both hold.
    """
    mults = np.asarray(mults, dtype=np.int64)
    img_maj = np.sort(_family_masks(np.asarray(src_major, np.int64), mults, n), axis=-1)
    img_min = np.sort(_family_masks(np.asarray(src_minor, np.int64), mults, n), axis=-1)
    tgt_maj = _sorted_masks(np.asarray(dst_major, np.int64))
    tgt_min = _sorted_masks(np.asarray(dst_minor, np.int64))
    pres = (img_maj == tgt_maj).all(axis=-1) & (img_min == tgt_min).all(axis=-1)
    rev = (img_maj == tgt_min).all(axis=-1) & (img_min == tgt_maj).all(axis=-1)
    out = np.zeros(pres.shape, dtype=np.int8)
    out[rev] = REVERSING_MATCH
    out[pres] = PRESERVING_MATCH
    return out


def _assign_numpy(dom, v, c, a1, a2, d1, d2):
    new = dom & (a1[v][:, None] == a2[c][None, :]) & (d1[v][:, None] == d2[c][None, :])
    new[:, c] = False
    new[v, :] = False
    new[v, c] = True
    if not new.any(axis=1).all():
        return None
    return new


def iso_search_numpy(a1, a2, d1, d2, dom0) -> np.ndarray:
    """Lexicographically first adjacency- and distance-preserving bijection.

    Vertices of the first graph are assigned in index order, candidates tried
    ascending, with forward checking on the boolean domain matrix. Returns the
    image array, or an array of -1 when no bijection exists.
    """
    m = a1.shape[0]
    fail = np.full(m, -1, dtype=np.int64)
    if m == 0:
        return np.zeros(0, dtype=np.int64)
    if not dom0.any(axis=1).all():
        return fail

    def descend(dom, v):
        if v == m:
            return dom
        for c in np.flatnonzero(dom[v]):
            nxt = _assign_numpy(dom, v, int(c), a1, a2, d1, d2)
            if nxt is not None:
                found = descend(nxt, v + 1)
                if found is not None:
                    return found
        return None

    final = descend(dom0.copy(), 0)
    if final is None:
        return fail
    return np.argmax(final, axis=1).astype(np.int64)


# --------------------------------------------------------------------------
# numba backend

if HAVE_NUMBA:

    @njit(cache=True)
    def _row_less(keys, i, j):
        for c in range(keys.shape[1]):
            if keys[i, c] != keys[j, c]:
                return keys[i, c] < keys[j, c]
        return False

    @njit(cache=True)
    def _rank_rows(keys):
        m = keys.shape[0]
        order = np.arange(m)
        for i in range(1, m):
            x = order[i]
            j = i - 1
            while j >= 0 and _row_less(keys, x, order[j]):
                order[j + 1] = order[j]
                j -= 1
            order[j + 1] = x
        ranks = np.empty(m, dtype=np.int64)
        r = 0
        for i in range(m):
            if i > 0 and _row_less(keys, order[i - 1], order[i]):
                r += 1
            ranks[order[i]] = r
        return ranks

    @njit(cache=True)
    def refine_numba(adj, colors):
        m = adj.shape[0]
        if m == 0:
            return colors.astype(np.int64)
        col = _rank_rows(colors.reshape(m, 1).astype(np.int64))
        while True:
            k = col.max() + 1
            keys = np.zeros((m, k + 1), dtype=np.int64)
            for v in range(m):
                keys[v, 0] = col[v]
                for w in range(m):
                    if adj[v, w]:
                        keys[v, 1 + col[w]] += adj[v, w]
            new = _rank_rows(keys)
            if new.max() == col.max():
                return new
            col = new

    @njit(cache=True)
    def _mask_sorted(triples, a, b, n):
        k = triples.shape[0]
        out = np.empty(k, dtype=np.int64)
        for i in range(k):
            msk = np.int64(0)
            for j in range(triples.shape[1]):
                msk |= np.int64(1) << ((a * triples[i, j] + b) % n)
            out[i] = msk
        out.sort()
        return out

    @njit(cache=True)
    def _same(x, y):
        for i in range(x.shape[0]):
            if x[i] != y[i]:
                return False
        return True

    @njit(cache=True)
    def family_match_numba(src_major, src_minor, dst_major, dst_minor, mults, n):
        out = np.zeros((mults.shape[0], n), dtype=np.int8)
        tgt_maj = _mask_sorted(dst_major, 1, 0, n)
        tgt_min = _mask_sorted(dst_minor, 1, 0, n)
        for i in range(mults.shape[0]):
            a = mults[i]
            for b in range(n):
                im = _mask_sorted(src_major, a, b, n)
                jm = _mask_sorted(src_minor, a, b, n)
                if _same(im, tgt_maj) and _same(jm, tgt_min):
                    out[i, b] = 1
                elif _same(im, tgt_min) and _same(jm, tgt_maj):
                    out[i, b] = 2
        return out

    @njit(cache=True)
    def _assign_numba(src, dst, v, c, a1, a2, d1, d2):
        m = src.shape[0]
        for w in range(m):
            nonempty = False
            for x in range(m):
                ok = src[w, x]
                if ok:
                    if w == v:
                        ok = x == c
                    elif x == c:
                        ok = False
                    else:
                        ok = a1[v, w] == a2[c, x] and d1[v, w] == d2[c, x]
                dst[w, x] = ok
                nonempty = nonempty or ok
            if not nonempty:
                return False
        return True

    @njit(cache=True)
    def iso_search_numba(a1, a2, d1, d2, dom0):
        m = a1.shape[0]
        perm = np.full(m, -1, dtype=np.int64)
        if m == 0:
            return np.zeros(0, dtype=np.int64)
        for w in range(m):
            if not dom0[w].any():
                return perm
        doms = np.zeros((m + 1, m, m), dtype=np.bool_)
        doms[0] = dom0
        ptr = np.zeros(m + 1, dtype=np.int64)
        level = 0
        while level >= 0:
            if level == m:
                for w in range(m):
                    for x in range(m):
                        if doms[m, w, x]:
                            perm[w] = x
                return perm
            advanced = False
            c = ptr[level]
            while c < m:
                if doms[level, level, c] and _assign_numba(
                    doms[level], doms[level + 1], level, c, a1, a2, d1, d2
                ):
                    ptr[level] = c + 1
                    level += 1
                    ptr[level] = 0
                    advanced = True
                    break
                c += 1
            if not advanced:
                level -= 1
        return perm

    refine = refine_numba if USE_NUMBA else refine_numpy
    family_match = family_match_numba if USE_NUMBA else family_match_numpy
    iso_search = iso_search_numba if USE_NUMBA else iso_search_numpy
else:  # pragma: no cover
    refine_numba = family_match_numba = iso_search_numba = None
    refine = refine_numpy
    family_match = family_match_numpy
    iso_search = iso_search_numpy


def as_kernel_arrays(*arrays):
    """Contiguous int64 copies, the layout both backends expect."""
    return tuple(np.ascontiguousarray(a, dtype=np.int64) for a in arrays)
