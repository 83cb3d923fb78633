"""Compiled inner loops: slope-diagram chains, tangent queries, sweeps.

All slope comparisons go through the same binary64 expression
``(a - b) / d`` that :mod:`impreciseflow.flowsim` uses, so an elevation
accepted here is a steepest-descent configuration there as well.  Analytic
tangent values are only starting points; the returned elevation is the
extreme float at which the predicate still holds (found by bisection).
"""

import numpy as np
from numba import njit

_BISECT_MAX = 2200


@njit(cache=True)
def build_chains(indptr, indices, dist, high):
    """Lower-left convex chain of every node's slope diagram.

    Returns ``(cptr, cnode, cdelta, chigh, cz)``: node ``p`` owns entries
    ``cptr[p]:cptr[p+1]``, ordered from the leftmost (closest) point down to
    the lowest one.  ``cz[i]`` is the vertical-axis intercept of the line
    through chain points ``i`` and ``i+1``; the last entry is ``-inf``.
    """
    n = indptr.shape[0] - 1
    nnz = indices.shape[0]
    cptr = np.zeros(n + 1, dtype=np.int64)
    cnode = np.empty(nnz, dtype=np.int64)
    cd = np.empty(nnz, dtype=np.float64)
    ch = np.empty(nnz, dtype=np.float64)
    cz = np.empty(nnz, dtype=np.float64)
    maxdeg = 0
    for p in range(n):
        d = indptr[p + 1] - indptr[p]
        if d > maxdeg:
            maxdeg = d
    bd = np.empty(maxdeg, dtype=np.float64)
    bh = np.empty(maxdeg, dtype=np.float64)
    bn = np.empty(maxdeg, dtype=np.int64)
    k = 0
    for p in range(n):
        a = indptr[p]
        deg = indptr[p + 1] - a
        cptr[p] = k
        if deg == 0:
            continue
        if deg <= 32:
            m = 0
            for t in range(deg):
                x = dist[a + t]
                q = indices[a + t]
                y = high[q]
                j = m
                while j > 0 and (bd[j - 1] > x or (bd[j - 1] == x and bh[j - 1] > y)):
                    bd[j] = bd[j - 1]
                    bh[j] = bh[j - 1]
                    bn[j] = bn[j - 1]
                    j -= 1
                bd[j] = x
                bh[j] = y
                bn[j] = q
                m += 1
        else:
            hs = np.empty(deg, dtype=np.float64)
            ds = np.empty(deg, dtype=np.float64)
            for t in range(deg):
                hs[t] = high[indices[a + t]]
                ds[t] = dist[a + t]
            o1 = np.argsort(hs, kind="mergesort")
            o2 = o1[np.argsort(ds[o1], kind="mergesort")]
            for t in range(deg):
                bd[t] = ds[o2[t]]
                bh[t] = hs[o2[t]]
                bn[t] = indices[a + o2[t]]
        start = k
        for t in range(deg):
            x = bd[t]
            y = bh[t]
            if k > start and y >= ch[k - 1]:
                continue
            while k - start >= 2:
                x0 = cd[k - 2]
                y0 = ch[k - 2]
                x1 = cd[k - 1]
                y1 = ch[k - 1]
                if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) <= 0.0:
                    k -= 1
                else:
                    break
            cd[k] = x
            ch[k] = y
            cnode[k] = bn[t]
            k += 1
        for i in range(start, k - 1):
            cz[i] = ch[i] - cd[i] * ((ch[i + 1] - ch[i]) / (cd[i + 1] - cd[i]))
        cz[k - 1] = -np.inf
    cptr[n] = k
    return cptr, cnode[:k].copy(), cd[:k].copy(), ch[:k].copy(), cz[:k].copy()


@njit(cache=True)
def flows_to_target(z, zt, dt, nd, nh, a, b):
    """Target at (dt, zt) is a steepest-descent neighbor of a node at
    elevation ``z`` whose neighbors ``a:b`` (distances ``nd``) sit at
    elevations ``nh``.  The target's own entry is harmless: it is never
    steeper than the target itself."""
    s = (z - zt) / dt
    if s < 0.0:
        return False
    for i in range(a, b):
        if (z - nh[i]) / nd[i] > s:
            return False
    return True


@njit(cache=True)
def first_right(cd, a, b, dt):
    """First chain index with distance strictly greater than ``dt``."""
    lo = a
    hi = b
    while lo < hi:
        mid = (lo + hi) // 2
        if cd[mid] > dt:
            hi = mid
        else:
            lo = mid + 1
    return lo


@njit(cache=True)
def _intercept(dt, zt, x, y):
    return (zt * x - y * dt) / (x - dt)


@njit(cache=True)
def tangent_index(cd, ch, a, b, dt, zt):
    """Chain point touched by the lower tangent from (dt, zt), searched
    among points right of ``dt`` by binary search on the unimodal intercept
    sequence.  Returns ``-1`` when no chain point lies right of ``dt``."""
    j = first_right(cd, a, b, dt)
    if j == b:
        return -1
    lo = j
    hi = b - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _intercept(dt, zt, cd[mid], ch[mid]) < _intercept(dt, zt, cd[mid + 1], ch[mid + 1]):
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def min_elev(cd, ch, cz, a, b, nd, nh, na, nb, dt, zt, lo, hi):
    """Lowest elevation in ``[lo, hi]`` of a node (chain ``a:b``) at which
    the neighbor at distance ``dt`` and elevation ``zt`` is a steepest-descent
    target, all other neighbors (row ``na:nb`` of ``nd``/``nh``) at their
    upper bounds.  NaN if none."""
    zlo = max(lo, zt)
    if zlo > hi:
        return np.nan
    if flows_to_target(zlo, zt, dt, nd, nh, na, nb):
        return zlo
    j = first_right(cd, a, b, dt)
    if j == b:
        # every competitor is at least as close: the gap only shrinks upward
        return np.nan
    # The slope gap to the steepest competitor is concave in z and peaks
    # where the competitor switches to one farther than the target.  A
    # competitor at exactly the target's distance keeps the gap flat above
    # that point, so probe across that stretch as well; rounding can make
    # any single probe miss a thin feasible range.
    zpk = hi if j == a else cz[j - 1]
    ztop = zpk
    if j > a and cd[j - 1] == dt:
        ztop = hi if j - 1 == a else cz[j - 2]
    i = tangent_index(cd, ch, a, b, dt, zt)
    zc = _intercept(dt, zt, cd[i], ch[i])
    probes = np.empty(4)
    probes[0] = zc
    probes[1] = zpk
    probes[2] = zpk + (ztop - zpk) * 0.5
    probes[3] = ztop
    for k in range(4):
        probes[k] = min(max(probes[k], zlo), hi)
    probes.sort()
    top = np.nan
    bottom = zlo
    for k in range(4):
        if flows_to_target(probes[k], zt, dt, nd, nh, na, nb):
            top = probes[k]
            break
        bottom = probes[k]
    if np.isnan(top):
        return np.nan
    for _ in range(_BISECT_MAX):
        mid = bottom + (top - bottom) * 0.5
        if mid <= bottom or mid >= top:
            break
        if flows_to_target(mid, zt, dt, nd, nh, na, nb):
            top = mid
        else:
            bottom = mid
    return top


@njit(cache=True)
def _max_recv_at(cd, ch, a, b, nd, nh, na, nb, dp, zq, plo, phi):
    """Highest elevation in ``[plo, min(phi, zq)]`` of the neighbor at
    distance ``dp`` that the owner at ``zq`` sends water to.  NaN if none."""
    cap = min(phi, zq)
    if cap < plo:
        return np.nan
    f = 0.0
    for i in range(a, b):
        s = (zq - ch[i]) / cd[i]
        if s > f:
            f = s
    zc = min(max(zq - dp * f, plo), cap)
    if flows_to_target(zq, cap, dp, nd, nh, na, nb):
        return cap
    if flows_to_target(zq, zc, dp, nd, nh, na, nb):
        good = zc
        bad = cap
    elif zc > plo and flows_to_target(zq, plo, dp, nd, nh, na, nb):
        good = plo
        bad = zc
    else:
        return np.nan
    # the predicate is monotone in the receiver's elevation
    for _ in range(_BISECT_MAX):
        mid = good + (bad - good) * 0.5
        if mid <= good or mid >= bad:
            break
        if flows_to_target(zq, mid, dp, nd, nh, na, nb):
            good = mid
        else:
            bad = mid
    return good


@njit(cache=True)
def max_recv(cd, ch, cz, a, b, nd, nh, na, nb, dp, zq_lo, zq_hi, plo, phi):
    """Highest elevation in ``[plo, phi]`` of the neighbor at distance ``dp``
    such that the owner of chain ``a:b``, at some elevation in
    ``[zq_lo, zq_hi]``, has it as a steepest-descent target (other neighbors
    at their upper bounds).  NaN if none."""
    if zq_lo > zq_hi:
        return np.nan
    # The receivable elevation is concave in the owner's elevation and
    # peaks where the steepest competitor switches to one farther than
    # the receiver (or at the lowest chain point); a competitor at the
    # receiver's own distance leaves a flat stretch above the peak.
    j = first_right(cd, a, b, dp)
    if j == a:
        zpk = zq_hi
    elif j == b:
        zpk = ch[b - 1]
    else:
        zpk = cz[j - 1]
    ztop = zpk
    if j > a and cd[j - 1] == dp:
        ztop = zq_hi if j - 1 == a else cz[j - 2]
    best = np.nan
    for k in range(3):
        zq = zpk + (ztop - zpk) * 0.5 * k
        zq = min(max(zq, zq_lo), zq_hi)
        zp = _max_recv_at(cd, ch, a, b, nd, nh, na, nb, dp, zq, plo, phi)
        if not np.isnan(zp) and (np.isnan(best) or zp > best):
            best = zp
    return best


# --- binary heap keyed lexicographically by (key, node, rank) -------------

@njit(cache=True)
def _less(hk, hn, hr, i, j):
    if hk[i] != hk[j]:
        return hk[i] < hk[j]
    if hn[i] != hn[j]:
        return hn[i] < hn[j]
    return hr[i] < hr[j]


@njit(cache=True)
def _swap(hk, hn, hr, i, j):
    t = hk[i]
    hk[i] = hk[j]
    hk[j] = t
    u = hn[i]
    hn[i] = hn[j]
    hn[j] = u
    u = hr[i]
    hr[i] = hr[j]
    hr[j] = u


@njit(cache=True)
def _push(hk, hn, hr, size, key, node, rank):
    i = size
    hk[i] = key
    hn[i] = node
    hr[i] = rank
    while i > 0:
        parent = (i - 1) >> 1
        if _less(hk, hn, hr, i, parent):
            _swap(hk, hn, hr, i, parent)
            i = parent
        else:
            break
    return size + 1


@njit(cache=True)
def _pop(hk, hn, hr, size):
    size -= 1
    _swap(hk, hn, hr, 0, size)
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        c = left
        right = left + 1
        if right < size and _less(hk, hn, hr, right, left):
            c = right
        if _less(hk, hn, hr, c, i):
            _swap(hk, hn, hr, c, i)
            i = c
        else:
            break
    return size


@njit(cache=True)
def sweep(indptr, indices, dist, low, high, cptr, cd, ch, cz,
          seed_node, seed_z, seed_rank, avoid, downward):
    """Priority sweep shared by all variants.

    Upward (``downward=False``): min-queue, expansion by :func:`min_elev`
    on the neighbor's chain.  Downward: max-queue, expansion by
    :func:`max_recv` on the extracted node's chain.  Nodes flagged in
    ``avoid`` are discarded on extraction.  Returns per-node final
    elevation (NaN outside the result), final rank (-1 outside) and the
    numbers of pushes and pops.
    """
    n = low.shape[0]
    nh = high[indices]
    sign = -1.0 if downward else 1.0
    tent = np.full(n, np.inf)
    trank = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    done = np.zeros(n, dtype=np.uint8)
    out_z = np.full(n, np.nan)
    out_rank = np.full(n, -1, dtype=np.int64)
    cap = seed_node.shape[0] + indices.shape[0] + 1
    hk = np.empty(cap, dtype=np.float64)
    hn = np.empty(cap, dtype=np.int64)
    hr = np.empty(cap, dtype=np.int64)
    size = 0
    pushes = 0
    pops = 0
    for s in range(seed_node.shape[0]):
        v = seed_node[s]
        key = sign * seed_z[s]
        r = seed_rank[s]
        if key < tent[v] or (key == tent[v] and r < trank[v]):
            tent[v] = key
            trank[v] = r
            size = _push(hk, hn, hr, size, key, v, r)
            pushes += 1
    while size > 0:
        key = hk[0]
        v = hn[0]
        r = hr[0]
        size = _pop(hk, hn, hr, size)
        pops += 1
        if done[v] != 0:
            continue
        if avoid[v]:
            done[v] = 2
            continue
        done[v] = 1
        z = sign * key
        out_z[v] = z
        out_rank[v] = r
        for e in range(indptr[v], indptr[v + 1]):
            p = indices[e]
            if done[p] != 0:
                continue
            if downward:
                zp = max_recv(cd, ch, cz, cptr[v], cptr[v + 1],
                              dist, nh, indptr[v], indptr[v + 1], dist[e],
                              low[v], z, low[p], high[p])
            else:
                zp = min_elev(cd, ch, cz, cptr[p], cptr[p + 1],
                              dist, nh, indptr[p], indptr[p + 1], dist[e],
                              z, low[p], high[p])
            if np.isnan(zp):
                continue
            kp = sign * zp
            if kp < tent[p] or (kp == tent[p] and r < trank[p]):
                tent[p] = kp
                trank[p] = r
                size = _push(hk, hn, hr, size, kp, p, r)
                pushes += 1
    return out_z, out_rank, pushes, pops
