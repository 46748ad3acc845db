"""Grid-backed numba kernels for the growth engines.

These are drop-in fast paths for the pure-Python reference engines: given the
same random stream they consume draws in exactly the same order and produce
bit-identical traces.  Clusters live on a preallocated flat grid (callers pick
the bounding box); growth that would leave the box aborts with ESCAPE and the
caller retries with a bigger box and a rewound stream.

Grid layout: cell = x + y * sx.  The boundary is a flat array of directed
edges encoded as 4*head_cell + incoming_direction, with an inverse position
table so removing a vertex's incoming edges is O(1) via swap-remove.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

# status codes shared with the wrappers
DONE = 0
ESCAPE = 1
STEP_CAP = 2

_DX = (1, 0, -1, 0)
_DY = (0, 1, 0, -1)


@njit(cache=True)
def _u01(gen):
    # uniform strictly inside (0,1); the zero corner has probability 2**-53
    u = gen.random()
    while u == 0.0:
        u = gen.random()
    return u


@njit(cache=True)
def kahan_cumsum(x):
    """Compensated (Kahan) running sum of a float64 vector."""
    out = np.empty(x.shape[0], np.float64)
    s = 0.0
    c = 0.0
    for i in range(x.shape[0]):
        y = x[i] - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i] = s
    return out


@njit(cache=True)
def eden_kernel(gen, sx, sy, ox, oy, use_mask, mask, member, inpos, edges,
                target_cell, step_target, max_steps, record, vx, vy, yc, tm):
    """Eden growth from (ox, oy): pick a uniform boundary edge, add its head,
    advance time by an exponential of mean 1/boundary_count.

    Consumes exactly two uniforms per step (slot, then increment).  Returns
    (status, steps, t, mu, sigma_sq, boundary_count_final).
    """
    oc = ox + oy * sx
    member[oc] = 1
    elen = 0
    ecap = edges.shape[0]
    for d in range(4):
        x = ox + _DX[d]
        y = oy + _DY[d]
        c = x + y * sx
        if use_mask and mask[c] == 0:
            continue
        code = 4 * c + d
        edges[elen] = code
        inpos[code] = elen
        elen += 1
    t = 0.0
    t_c = 0.0
    mu = 0.0
    mu_c = 0.0
    sg = 0.0
    sg_c = 0.0
    if record:
        vx[0] = ox
        vy[0] = oy
        tm[0] = 0.0
    step = 0
    while True:
        if step >= max_steps:
            return STEP_CAP, step, t, mu, sg, elen
        if elen == 0:
            # strip region fully consumed without reaching the target
            return STEP_CAP, step, t, mu, sg, elen
        u1 = _u01(gen)
        slot = int(u1 * elen)
        if slot >= elen:
            slot = elen - 1
        w = edges[slot] >> 2
        u2 = _u01(gen)
        inv = 1.0 / elen
        # divide rather than multiply by inv: division rounds once, so the
        # pure-Python engine reproduces the increment bit for bit
        dt = -math.log(u2) / elen
        # compensated accumulation of time and conditional moments
        yk = dt - t_c
        tt = t + yk
        t_c = (tt - t) - yk
        t = tt
        yk = inv - mu_c
        tt = mu + yk
        mu_c = (tt - mu) - yk
        mu = tt
        iv2 = inv * inv
        yk = iv2 - sg_c
        tt = sg + yk
        sg_c = (tt - sg) - yk
        sg = tt
        if record:
            yc[step] = elen
        # detach every boundary edge pointing at w, highest position first
        base = 4 * w
        while True:
            pmax = -1
            dmax = -1
            for d in range(4):
                p = inpos[base + d]
                if p > pmax:
                    pmax = p
                    dmax = d
            if pmax < 0:
                break
            last = elen - 1
            if pmax != last:
                moved = edges[last]
                edges[pmax] = moved
                inpos[moved] = pmax
            inpos[base + dmax] = -1
            elen -= 1
        member[w] = 1
        wx = w % sx
        wy = w // sx
        step += 1
        if record:
            vx[step] = wx
            vy[step] = wy
            tm[step] = t
        if elen + 4 > ecap:
            bigger = np.empty(2 * ecap, np.int32)
            bigger[:elen] = edges[:elen]
            edges = bigger
            ecap = 2 * ecap
        for d in range(4):
            x = wx + _DX[d]
            y = wy + _DY[d]
            if x < 1 or y < 1 or x >= sx - 1 or y >= sy - 1:
                return ESCAPE, step, t, mu, sg, elen
            c = x + y * sx
            if member[c] != 0:
                continue
            if use_mask and mask[c] == 0:
                continue
            code = 4 * c + d
            edges[elen] = code
            inpos[code] = elen
            elen += 1
        if w == target_cell:
            return DONE, step, t, mu, sg, elen
        if step == step_target:
            return DONE, step, t, mu, sg, elen


@njit(cache=True)
def _heap_less(ht, hc, i, j):
    if ht[i] < ht[j]:
        return True
    if ht[i] > ht[j]:
        return False
    return hc[i] < hc[j]


@njit(cache=True)
def dijkstra_kernel(gen, sx, sy, ox, oy, use_mask, mask, dist, settled, wr, wu,
                    target_cell, step_target, max_steps, record, vx, vy, yc, tm):
    """Shortest-time growth with lazily materialized unit-mean exponential
    edge weights and a lazy-deletion binary heap.

    Heap order is (tentative time, insertion counter), so pop order is a
    deterministic function of the drawn weights.  Settle order plays the role
    of the growth sequence; boundary counts are maintained incrementally.
    Returns (status, settles, t, mu, sigma_sq).
    """
    hcap = 1 << 12
    ht = np.empty(hcap, np.float64)
    hc = np.empty(hcap, np.int64)
    hv = np.empty(hcap, np.int32)
    hsize = 0
    counter = 0

    oc = ox + oy * sx
    dist[oc] = 0.0
    ht[0] = 0.0
    hc[0] = 0
    hv[0] = oc
    hsize = 1
    counter = 1

    t = 0.0
    mu = 0.0
    mu_c = 0.0
    sg = 0.0
    sg_c = 0.0
    ybound = 0
    settles = 0

    while hsize > 0:
        # pop the minimum, skipping entries already settled
        top_t = ht[0]
        top_cell = hv[0]
        hsize -= 1
        ht[0] = ht[hsize]
        hc[0] = hc[hsize]
        hv[0] = hv[hsize]
        i = 0
        while True:
            l = 2 * i + 1
            r = l + 1
            small = i
            if l < hsize and _heap_less(ht, hc, l, small):
                small = l
            if r < hsize and _heap_less(ht, hc, r, small):
                small = r
            if small == i:
                break
            ht[i], ht[small] = ht[small], ht[i]
            hc[i], hc[small] = hc[small], hc[i]
            hv[i], hv[small] = hv[small], hv[i]
            i = small
        if settled[top_cell] != 0:
            continue

        # settle
        cx = top_cell % sx
        cy = top_cell // sx
        if settles > 0:
            inv = 1.0 / ybound
            yk = inv - mu_c
            tt = mu + yk
            mu_c = (tt - mu) - yk
            mu = tt
            iv2 = inv * inv
            yk = iv2 - sg_c
            tt = sg + yk
            sg_c = (tt - sg) - yk
            sg = tt
            if record:
                yc[settles - 1] = ybound
        if record:
            vx[settles] = cx
            vy[settles] = cy
            tm[settles] = top_t
        t = top_t
        settled[top_cell] = 1

        k_in = 0
        k_out = 0
        for d in range(4):
            x = cx + _DX[d]
            y = cy + _DY[d]
            if x < 1 or y < 1 or x >= sx - 1 or y >= sy - 1:
                return ESCAPE, settles, t, mu, sg
            c = x + y * sx
            if use_mask and mask[c] == 0:
                continue
            if settled[c] != 0:
                k_in += 1
                continue
            k_out += 1
            # materialize the edge weight on first touch; the grid slot at the
            # lower endpoint is the canonical key for the undirected edge
            if d == 0:
                wgt = wr[top_cell]
                if math.isnan(wgt):
                    wgt = -math.log(_u01(gen))
                    wr[top_cell] = wgt
            elif d == 2:
                wgt = wr[c]
                if math.isnan(wgt):
                    wgt = -math.log(_u01(gen))
                    wr[c] = wgt
            elif d == 1:
                wgt = wu[top_cell]
                if math.isnan(wgt):
                    wgt = -math.log(_u01(gen))
                    wu[top_cell] = wgt
            else:
                wgt = wu[c]
                if math.isnan(wgt):
                    wgt = -math.log(_u01(gen))
                    wu[c] = wgt
            nd = top_t + wgt
            if nd < dist[c]:
                dist[c] = nd
                if hsize == hcap:
                    nt = np.empty(2 * hcap, np.float64)
                    nc = np.empty(2 * hcap, np.int64)
                    nv = np.empty(2 * hcap, np.int32)
                    nt[:hsize] = ht[:hsize]
                    nc[:hsize] = hc[:hsize]
                    nv[:hsize] = hv[:hsize]
                    ht = nt
                    hc = nc
                    hv = nv
                    hcap = 2 * hcap
                ht[hsize] = nd
                hc[hsize] = counter
                hv[hsize] = c
                counter += 1
                i = hsize
                hsize += 1
                while i > 0:
                    par = (i - 1) // 2
                    if _heap_less(ht, hc, i, par):
                        ht[i], ht[par] = ht[par], ht[i]
                        hc[i], hc[par] = hc[par], hc[i]
                        hv[i], hv[par] = hv[par], hv[i]
                        i = par
                    else:
                        break
        ybound += k_out - k_in

        if top_cell == target_cell:
            return DONE, settles, t, mu, sg
        if settles == step_target:
            return DONE, settles, t, mu, sg
        settles += 1
        if settles > max_steps:
            return STEP_CAP, settles, t, mu, sg
    return STEP_CAP, settles, t, mu, sg
