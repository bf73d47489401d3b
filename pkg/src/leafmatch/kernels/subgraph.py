"""Greedy reference-pair subgraph search (the inner loops of subgraph matching).

Inputs are plain arrays so both backends share one calling convention:

p1, p2      node coordinates of the two graphs, shape (k, 2)
fwd1        along-curve distance between G1 nodes i < j, stored at [i, j]
d2p, d2m    G2 distance to compare against when an earlier G1 node maps to
            ``a`` and a later one to ``b``, for orientation +1 / -1
refs        (R, 2) G1 reference pairs (i < j), tried in order
len1, len2  total lengths; the similarity scale ``s`` must keep
            ``s * len1 / len2`` inside [ext_lo, ext_hi]

A node whose nearest free G2 node would add more than ``lam`` to the cost
is left unmapped instead.

Both return the best mapping of every reference pair as arrays
``(cost, assign, orientation, scale)`` of length R; ``assign[q, i]`` is the G2
node of G1 node ``i`` or -1, and ``cost[q]`` is inf when no image pair was
admissible. Only the ``keep`` cheapest pairs are of interest, so a pair whose
best cost exceeds the ``keep``-th smallest cost of the pairs before it is
also reported as inf. Within a reference pair the winner is the first candidate, in
(a, b, orientation) order, that attains the minimum cost.
"""

import math

import numpy as np

from .._backend import njit


@njit
def subgraph_search_numba(p1, p2, fwd1, d2p, d2m, refs, len1, len2,
                          lam, nn_reject, ext_lo, ext_hi, keep):
    k1 = p1.shape[0]
    k2 = p2.shape[0]
    nref = refs.shape[0]
    kbest = np.full(keep, np.inf)
    out_cost = np.full(nref, np.inf)
    out_assign = np.full((nref, k1), -1, dtype=np.int64)
    out_r = np.ones(nref, dtype=np.int64)
    out_s = np.ones(nref)
    assign = np.full(k1, -1, dtype=np.int64)
    used = np.zeros(k2, dtype=np.bool_)
    order = np.empty(k1, dtype=np.int64)
    for q in range(nref):
        if q > 0 and out_cost[q - 1] < np.inf:
            # replace the largest of the kept costs
            m = 0
            for t in range(1, keep):
                if kbest[t] > kbest[m]:
                    m = t
            if out_cost[q - 1] < kbest[m]:
                kbest[m] = out_cost[q - 1]
        thr = kbest[0]
        for t in range(1, keep):
            if kbest[t] > thr:
                thr = kbest[t]
        best = thr
        gi = refs[q, 0]
        gj = refs[q, 1]
        zx = p1[gj, 0] - p1[gi, 0]
        zy = p1[gj, 1] - p1[gi, 1]
        n1 = math.sqrt(zx * zx + zy * zy)
        if n1 == 0.0:
            continue
        dref = fwd1[gi, gj]
        for a in range(k2):
            for b in range(k2):
                if a == b:
                    continue
                wx = p2[b, 0] - p2[a, 0]
                wy = p2[b, 1] - p2[a, 1]
                n2 = math.sqrt(wx * wx + wy * wy)
                if n2 == 0.0:
                    continue
                s = n2 / n1
                ext = s * len1 / len2
                if ext < ext_lo or ext > ext_hi:
                    continue
                for ridx in range(2):
                    r = 1 if ridx == 0 else -1
                    d2 = d2p if r == 1 else d2m
                    cost = abs(s * dref - d2[a, b])
                    if cost > best:
                        continue
                    # complex ratio (w / z) or (w / conj z)
                    den = zx * zx + zy * zy
                    if r == 1:
                        cr = (wx * zx + wy * zy) / den
                        ci = (wy * zx - wx * zy) / den
                    else:
                        cr = (wx * zx - wy * zy) / den
                        ci = (wy * zx + wx * zy) / den
                    for i in range(k1):
                        assign[i] = -1
                    for j in range(k2):
                        used[j] = False
                    assign[gi] = a
                    assign[gj] = b
                    used[a] = True
                    used[b] = True
                    order[0] = gi
                    order[1] = gj
                    nmapped = 2
                    abandoned = False
                    for i in range(k1):
                        if i == gi or i == gj:
                            continue
                        dx = p1[i, 0] - p1[gi, 0]
                        dy = p1[i, 1] - p1[gi, 1]
                        if r == -1:
                            dy = -dy
                        ex = p2[a, 0] + dx * cr - dy * ci
                        ey = p2[a, 1] + dx * ci + dy * cr
                        nb = -1
                        nd = np.inf
                        for j in range(k2):
                            if used[j]:
                                continue
                            ux = p2[j, 0] - ex
                            uy = p2[j, 1] - ey
                            dd = math.sqrt(ux * ux + uy * uy)
                            if dd < nd:
                                nd = dd
                                nb = j
                        inc = lam
                        if nb >= 0 and nd <= nn_reject:
                            inc = 0.0
                            for t in range(nmapped):
                                mm = order[t]
                                if mm < i:
                                    inc += abs(s * fwd1[mm, i] - d2[assign[mm], nb])
                                else:
                                    inc += abs(s * fwd1[i, mm] - d2[nb, assign[mm]])
                        if inc < lam:
                            assign[i] = nb
                            used[nb] = True
                            cost += inc
                            order[nmapped] = i
                            nmapped += 1
                        else:
                            # leaving the node unmapped is cheaper
                            cost += lam
                        if cost > best:
                            abandoned = True
                            break
                    if not abandoned and (cost < best or (cost == thr and out_cost[q] == np.inf)):
                        best = cost
                        out_cost[q] = cost
                        for i in range(k1):
                            out_assign[q, i] = assign[i]
                        out_r[q] = r
                        out_s[q] = s
    return out_cost, out_assign, out_r, out_s


def subgraph_search_numpy(p1, p2, fwd1, d2p, d2m, refs, len1, len2,
                          lam, nn_reject, ext_lo, ext_hi, keep):
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    k1, k2 = len(p1), len(p2)
    d2 = np.stack([d2p, d2m])
    # candidate enumeration within one reference pair: (a, b, orientation)
    aa, bb = np.meshgrid(np.arange(k2), np.arange(k2), indexing="ij")
    distinct = aa != bb
    aa = np.repeat(aa[distinct], 2)
    bb = np.repeat(bb[distinct], 2)
    ridx = np.tile([0, 1], len(aa) // 2)
    sign = np.where(ridx == 0, 1.0, -1.0)
    wx = p2[bb, 0] - p2[aa, 0]
    wy = p2[bb, 1] - p2[aa, 1]
    n2 = np.sqrt(wx * wx + wy * wy)

    refs = np.asarray(refs, dtype=np.int64)
    nref = len(refs)
    out_cost = np.full(nref, np.inf)
    out_assign = np.full((nref, k1), -1, dtype=np.int64)
    out_r = np.ones(nref, dtype=np.int64)
    out_s = np.ones(nref)
    kept = []
    for q, (gi, gj) in enumerate(refs):
        thr = kept[keep - 1] if len(kept) >= keep else np.inf
        zx = p1[gj, 0] - p1[gi, 0]
        zy = p1[gj, 1] - p1[gi, 1]
        n1 = math.sqrt(zx * zx + zy * zy)
        if n1 == 0.0:
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            s = n2 / n1
            ext = s * len1 / len2
        ok = (n2 > 0) & (ext >= ext_lo) & (ext <= ext_hi)
        cost = np.abs(s * fwd1[gi, gj] - d2[ridx, aa, bb])
        ok &= cost <= thr
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            continue
        a, b, ri, sg, sc, cost = aa[idx], bb[idx], ridx[idx], sign[idx], s[idx], cost[idx]
        den = zx * zx + zy * zy
        cr = np.where(sg > 0, wx[idx] * zx + wy[idx] * zy, wx[idx] * zx - wy[idx] * zy) / den
        ci = np.where(sg > 0, wy[idx] * zx - wx[idx] * zy, wy[idx] * zx + wx[idx] * zy) / den
        nc = len(idx)
        rows = np.arange(nc)
        assign = np.full((nc, k1), -1, dtype=np.int64)
        assign[:, gi] = a
        assign[:, gj] = b
        used = np.zeros((nc, k2), dtype=bool)
        used[rows, a] = True
        used[rows, b] = True
        for i in range(k1):
            if i == gi or i == gj:
                continue
            dx = p1[i, 0] - p1[gi, 0]
            dy = (p1[i, 1] - p1[gi, 1]) * sg
            ex = p2[a, 0] + dx * cr - dy * ci
            ey = p2[a, 1] + dx * ci + dy * cr
            dist = np.sqrt((p2[None, :, 0] - ex[:, None]) ** 2 + (p2[None, :, 1] - ey[:, None]) ** 2)
            dist[used] = np.inf
            nb = np.argmin(dist, axis=1)
            nd = dist[rows, nb]
            hit = np.isfinite(nd) & (nd <= nn_reject)
            # pairwise terms against every node mapped so far
            mapped = assign >= 0
            fa = np.where(mapped, assign, 0)
            lo_first = np.arange(k1) < i
            dvals = np.where(lo_first[None, :],
                             d2[ri[:, None], fa, nb[:, None]],
                             d2[ri[:, None], nb[:, None], fa])
            fvals = np.where(lo_first, fwd1[:, i], fwd1[i, :])
            terms = np.where(mapped, np.abs(sc[:, None] * fvals[None, :] - dvals), 0.0)
            inc = terms.sum(axis=1)
            hit &= inc < lam
            cost = cost + np.where(hit, inc, lam)
            assign[hit, i] = nb[hit]
            used[rows[hit], nb[hit]] = True
        j = int(np.argmin(cost))
        if cost[j] > thr:
            continue
        kept = sorted(kept + [float(cost[j])])[:keep]
        out_cost[q] = cost[j]
        out_assign[q] = assign[j]
        out_r[q] = 1 if ri[j] == 0 else -1
        out_s[q] = sc[j]
    return out_cost, out_assign, out_r, out_s
