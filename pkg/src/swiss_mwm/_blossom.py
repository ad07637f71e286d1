"""Array-based blossom algorithm kernel for maximum weight matching.

The solver operates on positive integer edge weights only; callers are
responsible for scaling real weights to integers and shifting them positive
(see :mod:`swiss_mwm.matching`). Vertex dual variables are stored at twice
their value so that every dual update and slack stays integral, which keeps
all comparisons exact. The slack of an edge between two S-blossoms is always
even under this representation; the kernel checks that instead of assuming.

The implementation follows the classic primal-dual staged formulation
(O(V^3), with full edge scans for each dual adjustment, which is plenty for
tournament-sized graphs). It is compiled with numba; set
``NUMBA_DISABLE_JIT=1`` to run the same code as plain Python for debugging.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap

_FREE = 0
_S = 1
_T = 2


@njit(cache=True)
def _blossom_leaves(b, nvertex, childs, childs_n, out):
    """Collect the vertex leaves of blossom b into out; returns count."""
    cnt = 0
    stack = np.empty(2 * nvertex, np.int64)
    top = 0
    stack[top] = b
    top += 1
    while top > 0:
        top -= 1
        t = stack[top]
        if t < nvertex:
            out[cnt] = t
            cnt += 1
        else:
            row = t - nvertex
            for i in range(childs_n[row]):
                stack[top] = childs[row, i]
                top += 1
    return cnt


@njit(cache=True)
def _augment_blossom(b, v, nvertex, endpoint, mate, blossomparent,
                     blossombase, childs, childs_n, endps):
    """Swap matched/unmatched edges inside blossom b so that v is exposed."""
    t = v
    while blossomparent[t] != b:
        t = blossomparent[t]
    if t >= nvertex:
        _augment_blossom(t, v, nvertex, endpoint, mate, blossomparent,
                         blossombase, childs, childs_n, endps)
    row = b - nvertex
    nch = childs_n[row]
    i = 0
    for idx in range(nch):
        if childs[row, idx] == t:
            i = idx
            break
    j = i
    if i & 1:
        # start index odd: walk forward around the cycle
        j -= nch
        jstep = 1
        endptrick = 0
    else:
        jstep = -1
        endptrick = 1
    while j != 0:
        j += jstep
        t2 = childs[row, j % nch]
        p = endps[row, (j - endptrick) % nch] ^ endptrick
        if t2 >= nvertex:
            _augment_blossom(t2, endpoint[p], nvertex, endpoint, mate,
                             blossomparent, blossombase, childs, childs_n,
                             endps)
        j += jstep
        t2 = childs[row, j % nch]
        if t2 >= nvertex:
            _augment_blossom(t2, endpoint[p ^ 1], nvertex, endpoint, mate,
                             blossomparent, blossombase, childs, childs_n,
                             endps)
        mate[endpoint[p]] = p ^ 1
        mate[endpoint[p ^ 1]] = p
    # Rotate the child list so that sub-blossom t holds the base vertex.
    if i > 0:
        tmp_c = np.empty(nch, np.int64)
        tmp_e = np.empty(nch, np.int64)
        for idx in range(nch):
            tmp_c[idx] = childs[row, (i + idx) % nch]
            tmp_e[idx] = endps[row, (i + idx) % nch]
        for idx in range(nch):
            childs[row, idx] = tmp_c[idx]
            endps[row, idx] = tmp_e[idx]
    blossombase[b] = blossombase[childs[row, 0]]


@njit(cache=True)
def _assign_label(w, t, p, nvertex, endpoint, mate, label, labelend,
                  inblossom, blossombase, childs, childs_n, queue, qstate,
                  leafbuf):
    """Label vertex w (and its top blossom); chase a T label to S via mate."""
    while True:
        b = inblossom[w]
        label[w] = t
        label[b] = t
        labelend[w] = p
        labelend[b] = p
        if t == _S:
            cnt = _blossom_leaves(b, nvertex, childs, childs_n, leafbuf)
            for li in range(cnt):
                queue[qstate[1]] = leafbuf[li]
                qstate[1] += 1
            return
        base = blossombase[b]
        w = endpoint[mate[base]]
        t = _S
        p = mate[base] ^ 1


@njit(cache=True)
def _expand_blossom(b, endstage, nvertex, endpoint, mate, label, labelend,
                    inblossom, blossomparent, blossombase, childs, childs_n,
                    endps, dualvar, allowedge, queue, qstate, unused,
                    leafbuf):
    """Dissolve blossom b, relabeling its interior when done mid-stage."""
    row = b - nvertex
    nch = childs_n[row]
    for idx in range(nch):
        s = childs[row, idx]
        blossomparent[s] = -1
        if s < nvertex:
            inblossom[s] = s
        elif endstage and dualvar[s] == 0:
            _expand_blossom(s, endstage, nvertex, endpoint, mate, label,
                            labelend, inblossom, blossomparent, blossombase,
                            childs, childs_n, endps, dualvar, allowedge,
                            queue, qstate, unused, leafbuf)
        else:
            cnt = _blossom_leaves(s, nvertex, childs, childs_n, leafbuf)
            for li in range(cnt):
                inblossom[leafbuf[li]] = s
    if (not endstage) and label[b] == _T:
        # Relabel along the even path from the entry child to the base;
        # sub-blossoms on the odd side become free or get reached later.
        entrychild = inblossom[endpoint[labelend[b] ^ 1]]
        j = 0
        for idx in range(nch):
            if childs[row, idx] == entrychild:
                j = idx
                break
        if j & 1:
            j -= nch
            jstep = 1
            endptrick = 0
        else:
            jstep = -1
            endptrick = 1
        p = labelend[b]
        while j != 0:
            label[endpoint[p ^ 1]] = _FREE
            label[endpoint[endps[row, (j - endptrick) % nch]
                           ^ endptrick ^ 1]] = _FREE
            _assign_label(endpoint[p ^ 1], _T, p, nvertex, endpoint, mate,
                          label, labelend, inblossom, blossombase, childs,
                          childs_n, queue, qstate, leafbuf)
            allowedge[endps[row, (j - endptrick) % nch] // 2] = True
            j += jstep
            p = endps[row, (j - endptrick) % nch] ^ endptrick
            allowedge[p // 2] = True
            j += jstep
        # Relabel the base sub-blossom without stepping to its mate.
        bv = childs[row, j % nch]
        label[endpoint[p ^ 1]] = _T
        label[bv] = _T
        labelend[endpoint[p ^ 1]] = p
        labelend[bv] = p
        j += jstep
        while childs[row, j % nch] != entrychild:
            bv = childs[row, j % nch]
            if label[bv] == _S:
                j += jstep
                continue
            cnt = _blossom_leaves(bv, nvertex, childs, childs_n, leafbuf)
            v = -1
            for li in range(cnt):
                if label[leafbuf[li]] != _FREE:
                    v = leafbuf[li]
                    break
            if v >= 0:
                label[v] = _FREE
                label[endpoint[mate[blossombase[bv]]]] = _FREE
                _assign_label(v, _T, labelend[v], nvertex, endpoint, mate,
                              label, labelend, inblossom, blossombase,
                              childs, childs_n, queue, qstate, leafbuf)
            j += jstep
    label[b] = -1
    labelend[b] = -1
    blossombase[b] = -1
    childs_n[row] = 0
    unused[qstate[2]] = b
    qstate[2] += 1


@njit(cache=True)
def _scan_blossom(v, w, nvertex, endpoint, mate, label, labelend, inblossom,
                  blossombase):
    """Find the common ancestor base of v and w, or -1 for augmenting path."""
    path = np.empty(2 * nvertex, np.int64)
    npath = 0
    base = -1
    while v != -1 or w != -1:
        b = inblossom[v]
        if label[b] & 4:
            base = blossombase[b]
            break
        path[npath] = b
        npath += 1
        label[b] |= 4
        if labelend[b] == -1:
            v = -1
        else:
            v = endpoint[labelend[b]]
            b = inblossom[v]
            v = endpoint[labelend[b]]
        if w != -1:
            v, w = w, v
    for i in range(npath):
        label[path[i]] &= ~np.int64(4)
    return base


@njit(cache=True)
def _add_blossom(base, k, nvertex, eu, ev, endpoint, mate, label, labelend,
                 inblossom, blossomparent, blossombase, childs, childs_n,
                 endps, dualvar, queue, qstate, unused, leafbuf):
    """Form a new S-blossom with the given base from edge k's cycle."""
    v = eu[k]
    w = ev[k]
    bb = inblossom[base]
    bv = inblossom[v]
    bw = inblossom[w]
    qstate[2] -= 1
    b = unused[qstate[2]]
    row = b - nvertex
    blossombase[b] = base
    blossomparent[b] = -1
    blossomparent[bb] = b
    # Trace from v's side down to the base.
    n1 = 0
    while bv != bb:
        blossomparent[bv] = b
        childs[row, n1] = bv
        endps[row, n1] = labelend[bv]
        n1 += 1
        v = endpoint[labelend[bv]]
        bv = inblossom[v]
    # Reverse the trace and put the base blossom first.
    for i in range(n1 // 2):
        tc = childs[row, i]
        childs[row, i] = childs[row, n1 - 1 - i]
        childs[row, n1 - 1 - i] = tc
        te = endps[row, i]
        endps[row, i] = endps[row, n1 - 1 - i]
        endps[row, n1 - 1 - i] = te
    for i in range(n1, 0, -1):
        childs[row, i] = childs[row, i - 1]
    childs[row, 0] = bb
    endps[row, n1] = 2 * k
    n1 += 1
    # Trace from w's side down to the base.
    while bw != bb:
        blossomparent[bw] = b
        childs[row, n1] = bw
        endps[row, n1] = labelend[bw] ^ 1
        n1 += 1
        w = endpoint[labelend[bw]]
        bw = inblossom[w]
    childs_n[row] = n1
    label[b] = _S
    labelend[b] = labelend[bb]
    dualvar[b] = 0
    # Absorb leaves; former T-leaves become S and must be scanned.
    for idx in range(n1):
        c = childs[row, idx]
        clab = label[c]
        cnt = _blossom_leaves(c, nvertex, childs, childs_n, leafbuf)
        for li in range(cnt):
            if clab == _T:
                queue[qstate[1]] = leafbuf[li]
                qstate[1] += 1
            inblossom[leafbuf[li]] = b


@njit(cache=True)
def _augment_matching(k, nvertex, eu, ev, endpoint, mate, label, labelend,
                      inblossom, blossomparent, blossombase, childs,
                      childs_n, endps):
    """Flip matched edges along the augmenting path through tight edge k."""
    for side in range(2):
        if side == 0:
            s = eu[k]
            p = 2 * k + 1
        else:
            s = ev[k]
            p = 2 * k
        while True:
            bs = inblossom[s]
            if bs >= nvertex:
                _augment_blossom(bs, s, nvertex, endpoint, mate,
                                 blossomparent, blossombase, childs,
                                 childs_n, endps)
            mate[s] = p
            if labelend[bs] == -1:
                break
            t = endpoint[labelend[bs]]
            bt = inblossom[t]
            s = endpoint[labelend[bt]]
            j = endpoint[labelend[bt] ^ 1]
            if bt >= nvertex:
                _augment_blossom(bt, j, nvertex, endpoint, mate,
                                 blossomparent, blossombase, childs,
                                 childs_n, endps)
            mate[j] = labelend[bt]
            p = labelend[bt] ^ 1


@njit(cache=True)
def _solve_kernel(nvertex, eu, ev, weight):
    """Maximum weight matching over positive int64 weights.

    Returns the mate array mapping each vertex to its partner (-1 exposed).
    Vertex duals are kept at twice their value; blossom duals at face value.
    """
    nedge = eu.shape[0]
    nb2 = 2 * nvertex

    endpoint = np.empty(2 * nedge, np.int64)
    for k in range(nedge):
        endpoint[2 * k] = eu[k]
        endpoint[2 * k + 1] = ev[k]

    deg = np.zeros(nvertex + 1, np.int64)
    for k in range(nedge):
        deg[eu[k] + 1] += 1
        deg[ev[k] + 1] += 1
    nb_off = np.empty(nvertex + 1, np.int64)
    nb_off[0] = 0
    for i in range(nvertex):
        nb_off[i + 1] = nb_off[i] + deg[i + 1]
    fill = np.zeros(nvertex, np.int64)
    nb = np.empty(2 * nedge, np.int64)
    for k in range(nedge):
        u = eu[k]
        v = ev[k]
        nb[nb_off[u] + fill[u]] = 2 * k + 1
        fill[u] += 1
        nb[nb_off[v] + fill[v]] = 2 * k
        fill[v] += 1

    maxweight = 0
    for k in range(nedge):
        if weight[k] > maxweight:
            maxweight = weight[k]

    mate = np.full(nvertex, -1, np.int64)
    label = np.zeros(nb2, np.int64)
    labelend = np.full(nb2, -1, np.int64)
    inblossom = np.arange(nvertex)
    blossomparent = np.full(nb2, -1, np.int64)
    blossombase = np.empty(nb2, np.int64)
    for i in range(nvertex):
        blossombase[i] = i
    for i in range(nvertex, nb2):
        blossombase[i] = -1
    childs = np.zeros((nvertex, nvertex + 2), np.int64)
    childs_n = np.zeros(nvertex, np.int64)
    endps = np.zeros((nvertex, nvertex + 2), np.int64)
    # dualvar[v] is 2x the vertex dual; dualvar[b] is the blossom dual.
    dualvar = np.empty(nb2, np.int64)
    for i in range(nvertex):
        dualvar[i] = maxweight
    for i in range(nvertex, nb2):
        dualvar[i] = 0
    allowedge = np.zeros(nedge, np.bool_)
    qcap = 32 * nvertex + 64
    queue = np.empty(qcap, np.int64)
    # qstate: [0] queue head, [1] queue tail, [2] unused-blossom stack size
    qstate = np.zeros(3, np.int64)
    unused = np.empty(nvertex, np.int64)
    for i in range(nvertex):
        unused[i] = nvertex + i
    qstate[2] = nvertex
    leafbuf = np.empty(nvertex, np.int64)

    done = False
    for _stage in range(nvertex):
        for i in range(nb2):
            label[i] = _FREE
            labelend[i] = -1
        for k in range(nedge):
            allowedge[k] = False
        qstate[0] = 0
        qstate[1] = 0
        for v in range(nvertex):
            if mate[v] == -1 and label[inblossom[v]] == _FREE:
                _assign_label(v, _S, -1, nvertex, endpoint, mate, label,
                              labelend, inblossom, blossombase, childs,
                              childs_n, queue, qstate, leafbuf)
        if qstate[1] == 0:
            break  # no exposed vertices: matching is already maximum
        augmented = False
        while True:
            while qstate[0] < qstate[1] and not augmented:
                if qstate[1] > qcap - 8 * nvertex - 16:
                    # Compact the consumed queue prefix to avoid overflow.
                    shift = qstate[0]
                    for qi in range(qstate[1] - shift):
                        queue[qi] = queue[qi + shift]
                    qstate[0] -= shift
                    qstate[1] -= shift
                v = queue[qstate[0]]
                qstate[0] += 1
                for idx in range(nb_off[v], nb_off[v + 1]):
                    p = nb[idx]
                    k = p // 2
                    w = endpoint[p]
                    if inblossom[v] == inblossom[w]:
                        continue
                    if not allowedge[k]:
                        kslack = (dualvar[eu[k]] + dualvar[ev[k]]
                                  - 2 * weight[k])
                        if kslack <= 0:
                            allowedge[k] = True
                    if allowedge[k]:
                        bw = inblossom[w]
                        if label[bw] == _FREE:
                            _assign_label(w, _T, p ^ 1, nvertex, endpoint,
                                          mate, label, labelend, inblossom,
                                          blossombase, childs, childs_n,
                                          queue, qstate, leafbuf)
                        elif label[bw] == _S:
                            base = _scan_blossom(v, w, nvertex, endpoint,
                                                 mate, label, labelend,
                                                 inblossom, blossombase)
                            if base >= 0:
                                _add_blossom(base, k, nvertex, eu, ev,
                                             endpoint, mate, label, labelend,
                                             inblossom, blossomparent,
                                             blossombase, childs, childs_n,
                                             endps, dualvar, queue, qstate,
                                             unused, leafbuf)
                            else:
                                _augment_matching(k, nvertex, eu, ev,
                                                  endpoint, mate, label,
                                                  labelend, inblossom,
                                                  blossomparent, blossombase,
                                                  childs, childs_n, endps)
                                augmented = True
                                break
                        elif label[w] == _FREE:
                            # w sits inside a T-blossom: mark it reached.
                            label[w] = _T
                            labelend[w] = p ^ 1
            if augmented:
                break
            # Dual adjustment: find the binding delta (all values are 2x).
            deltatype = 1
            delta = np.int64(2) ** 62
            deltaedge = -1
            deltablossom = -1
            for v2 in range(nvertex):
                if label[inblossom[v2]] == _S and dualvar[v2] < delta:
                    delta = dualvar[v2]
            for k in range(nedge):
                if allowedge[k]:
                    continue
                bu = inblossom[eu[k]]
                bv2 = inblossom[ev[k]]
                if bu == bv2:
                    continue
                lu = label[bu]
                lv = label[bv2]
                if (lu == _S and lv == _FREE) or (lv == _S and lu == _FREE):
                    kslack = (dualvar[eu[k]] + dualvar[ev[k]]
                              - 2 * weight[k])
                    if kslack < delta:
                        delta = kslack
                        deltatype = 2
                        deltaedge = k
                elif lu == _S and lv == _S:
                    kslack = (dualvar[eu[k]] + dualvar[ev[k]]
                              - 2 * weight[k])
                    if kslack % 2 != 0:
                        raise ValueError("odd S-S slack; integer invariant broken")
                    half = kslack // 2
                    if half < delta:
                        delta = half
                        deltatype = 3
                        deltaedge = k
            for b in range(nvertex, nb2):
                if (blossombase[b] >= 0 and blossomparent[b] == -1
                        and label[b] == _T and dualvar[b] < delta):
                    delta = dualvar[b]
                    deltatype = 4
                    deltablossom = b
            for v2 in range(nvertex):
                t = label[inblossom[v2]]
                if t == _S:
                    dualvar[v2] -= delta
                elif t == _T:
                    dualvar[v2] += delta
            for b in range(nvertex, nb2):
                if blossombase[b] >= 0 and blossomparent[b] == -1:
                    if label[b] == _S:
                        dualvar[b] += delta
                    elif label[b] == _T:
                        dualvar[b] -= delta
            if deltatype == 1:
                done = True
                break
            elif deltatype == 2:
                allowedge[deltaedge] = True
                v2 = eu[deltaedge]
                if label[inblossom[v2]] == _FREE:
                    v2 = ev[deltaedge]
                queue[qstate[1]] = v2
                qstate[1] += 1
            elif deltatype == 3:
                allowedge[deltaedge] = True
                queue[qstate[1]] = eu[deltaedge]
                qstate[1] += 1
            else:
                _expand_blossom(deltablossom, False, nvertex, endpoint, mate,
                                label, labelend, inblossom, blossomparent,
                                blossombase, childs, childs_n, endps, dualvar,
                                allowedge, queue, qstate, unused, leafbuf)
        if not augmented or done:
            break
        # End of stage: dissolve S-blossoms whose dual dropped to zero.
        for b in range(nvertex, nb2):
            if (blossombase[b] >= 0 and blossomparent[b] == -1
                    and label[b] == _S and dualvar[b] == 0):
                _expand_blossom(b, True, nvertex, endpoint, mate, label,
                                labelend, inblossom, blossomparent,
                                blossombase, childs, childs_n, endps, dualvar,
                                allowedge, queue, qstate, unused, leafbuf)

    result = np.full(nvertex, -1, np.int64)
    for v in range(nvertex):
        if mate[v] >= 0:
            result[v] = endpoint[mate[v]]
    return result


def solve_max_weight_matching(n: int, edges_u: np.ndarray, edges_v: np.ndarray,
                              weights: np.ndarray) -> np.ndarray:
    """Maximum weight matching for positive int64 weights (not necessarily
    perfect). Weights must satisfy ``n * max(w) < 2**61``."""
    eu = np.ascontiguousarray(edges_u, dtype=np.int64)
    ev = np.ascontiguousarray(edges_v, dtype=np.int64)
    w = np.ascontiguousarray(weights, dtype=np.int64)
    if eu.shape[0] == 0 or n == 0:
        return np.full(n, -1, np.int64)
    return _solve_kernel(n, eu, ev, w)
