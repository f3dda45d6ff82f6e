"""numba kernels: injection counting and the edge-by-edge branch-and-bound searches.

Hosts are arrays of uint64 adjacency rows (at most 64 vertices). A pattern is
described by a vertex order plus, for each position, a bitmask of earlier
positions adjacent to it, so candidates for position i are the common
neighbours of the images of those earlier positions.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ONE = np.uint64(1)
ZERO = np.uint64(0)


@njit(cache=True, inline="always")
def popcount(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return int((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True, inline="always")
def lowbit_index(b):
    return popcount(b - ONE)


@njit(cache=True)
def _candidates(rows, allmask, used, img, prevmask, i, pin0, pin1):
    m = allmask & ~used
    pm = prevmask[i]
    for j in range(i):
        if (pm >> j) & 1:
            m &= rows[img[j]]
    if i == 0 and pin0 >= 0:
        m &= ONE << np.uint64(pin0)
    elif i == 1 and pin1 >= 0:
        m &= ONE << np.uint64(pin1)
    return m


@njit(cache=True)
def count_injections(rows, nh, order_prev, pin0, pin1):
    """Edge-preserving injections of the pattern into the host.

    ``order_prev[i]`` is the earlier-neighbour mask of pattern position i.
    ``pin0``/``pin1`` force the images of positions 0 and 1 (-1 = free).
    """
    f = order_prev.shape[0]
    if f == 0:
        return 1
    if nh == 64:
        allmask = ~ZERO
    else:
        allmask = (ONE << np.uint64(nh)) - ONE
    cand = np.zeros(f, np.uint64)
    img = np.zeros(f, np.int64)
    used = ZERO
    total = 0
    i = 0
    cand[0] = _candidates(rows, allmask, used, img, order_prev, 0, pin0, pin1)
    while i >= 0:
        if i == f - 1:
            total += popcount(cand[i])
            cand[i] = ZERO
        if cand[i] == ZERO:
            i -= 1
            if i >= 0:
                used &= ~(ONE << np.uint64(img[i]))
            continue
        c = cand[i]
        b = c & (~c + ONE)
        cand[i] = c ^ b
        img[i] = lowbit_index(b)
        used |= b
        i += 1
        cand[i] = _candidates(rows, allmask, used, img, order_prev, i, pin0, pin1)
    return total


@njit(cache=True)
def rooted_weighted(rows, nh, prevs, weights, u, v):
    """Sum over ordered-edge orbits of weight * injections with the orbit edge pinned onto (u, v)."""
    total = 0
    for k in range(prevs.shape[0]):
        total += weights[k] * count_injections(rows, nh, prevs[k], u, v)
    return total


@njit(cache=True)
def _edge_copies(rows, nh, prevs, weights, aut, u, v):
    return rooted_weighted(rows, nh, prevs, weights, u, v) // aut


@njit(cache=True)
def _record_leaf(copies, best, nwit, kwit, wit, chosen):
    if copies < best:
        best = copies
        nwit = 0
    if copies == best and nwit < kwit:
        wit[nwit, :] = chosen
        nwit += 1
    return best, nwit


@njit(cache=True)
def min_copies_search(nh, eu, ev, m_target, prefix, prevs, weights, aut, best_init, kwit):
    """Minimum copies over graphs with exactly ``m_target`` edges, fixed decisions ``prefix``.

    Edges are decided in array order, "present" before "absent". The copy
    count of the decided-present edges is a lower bound that never decreases,
    so a branch dies once it exceeds the incumbent (or ties it with ``kwit``
    witnesses already held). Returns (best, witnesses, nwit, nodes).
    """
    E = eu.shape[0]
    rows = np.zeros(nh, np.uint64)
    state = np.zeros(E, np.int8)  # 0 untried, 1 present tried, 2 absent tried
    copies_at = np.zeros(E + 1, np.int64)
    wit = np.zeros((kwit, E), np.int8)
    chosen = np.zeros(E, np.int8)
    best = best_init
    nwit = 0
    nodes = 0
    present = 0
    copies = 0
    for i in range(prefix.shape[0]):
        if prefix[i]:
            a, b = eu[i], ev[i]
            copies += _edge_copies(rows, nh, prevs, weights, aut, a, b)
            rows[a] |= ONE << np.uint64(b)
            rows[b] |= ONE << np.uint64(a)
            present += 1
            chosen[i] = 1
    start = prefix.shape[0]
    if present > m_target or present + (E - start) < m_target or copies > best:
        return best, wit, 0, 0
    nodes += 1
    if start == E or present == m_target:
        best, nwit = _record_leaf(copies, best, nwit, kwit, wit, chosen)
        return best, wit, nwit, nodes
    i = start
    copies_at[i] = copies
    while i >= start:
        st = state[i]
        if st == 0:
            state[i] = 1
            a, b = eu[i], ev[i]
            nc = copies + _edge_copies(rows, nh, prevs, weights, aut, a, b)
            if nc < best or (nc == best and nwit < kwit):
                nodes += 1
                rows[a] |= ONE << np.uint64(b)
                rows[b] |= ONE << np.uint64(a)
                chosen[i] = 1
                present += 1
                copies = nc
                i += 1
                copies_at[i] = copies
                if i == E or present == m_target:
                    best, nwit = _record_leaf(copies, best, nwit, kwit, wit, chosen)
                    i -= 1
        elif st == 1:
            state[i] = 2
            if chosen[i]:
                a, b = eu[i], ev[i]
                rows[a] &= ~(ONE << np.uint64(b))
                rows[b] &= ~(ONE << np.uint64(a))
                chosen[i] = 0
                present -= 1
            copies = copies_at[i]
            if present + (E - i - 1) >= m_target:
                nodes += 1
                i += 1
                copies_at[i] = copies
                if i == E:
                    best, nwit = _record_leaf(copies, best, nwit, kwit, wit, chosen)
                    i -= 1
            else:
                state[i] = 0
                i -= 1
        else:
            state[i] = 0
            i -= 1
    return best, wit, nwit, nodes


@njit(cache=True)
def max_free_search(nh, eu, ev, prefix, prevs, weights, aut, best_init):
    """Largest edge count of a pattern-free graph, deciding edges in array order.

    Returns (best, witness edge mask, nodes); best stays ``best_init`` if nothing beats it.
    """
    E = eu.shape[0]
    rows = np.zeros(nh, np.uint64)
    state = np.zeros(E, np.int8)
    chosen = np.zeros(E, np.int8)
    wit = np.zeros(E, np.int8)
    best = best_init
    nodes = 0
    present = 0
    for i in range(prefix.shape[0]):
        if prefix[i]:
            a, b = eu[i], ev[i]
            if _edge_copies(rows, nh, prevs, weights, aut, a, b) > 0:
                return best, wit, 0
            rows[a] |= ONE << np.uint64(b)
            rows[b] |= ONE << np.uint64(a)
            present += 1
            chosen[i] = 1
    start = prefix.shape[0]
    i = start
    while i >= start:
        if i == E:
            nodes += 1
            if present > best:
                best = present
                for j in range(E):
                    wit[j] = chosen[j]
            i -= 1
            continue
        st = state[i]
        if st == 0:
            state[i] = 1
            if present + (E - i) <= best:
                state[i] = 0
                i -= 1
                continue
            nodes += 1
            a, b = eu[i], ev[i]
            if _edge_copies(rows, nh, prevs, weights, aut, a, b) == 0:
                rows[a] |= ONE << np.uint64(b)
                rows[b] |= ONE << np.uint64(a)
                chosen[i] = 1
                present += 1
                i += 1
            continue
        elif st == 1:
            state[i] = 2
            if chosen[i]:
                a, b = eu[i], ev[i]
                rows[a] &= ~(ONE << np.uint64(b))
                rows[b] &= ~(ONE << np.uint64(a))
                chosen[i] = 0
                present -= 1
            if present + (E - i - 1) > best:
                nodes += 1
                i += 1
                continue
            state[i] = 0
            i -= 1
            continue
        else:
            state[i] = 0
            i -= 1
    return best, wit, nodes
