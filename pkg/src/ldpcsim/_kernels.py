"""Compiled decode loops.

Private module: every decoder's hot loop lives here as a numba kernel
over the flat adjacency arrays of :class:`~ldpcsim.codes.ParityCheckMatrix`.
The scalar reference semantics live in :mod:`ldpcsim.core`; tests pin
the two routes bit-identical, so any change here must keep its mirror
in sync.

Notes
-----
* Messages are sign-magnitude: ``*_sign`` arrays hold +1/-1 (int8) and
  magnitudes ride in int32. A negative sign on a zero magnitude is a
  legal message and its sign participates in check sign products.
* Kernels return ``(iterations_used, converged, status)`` with status
  0 for a clean run and 1 when a removal emptied a check vector (the
  wrapper raises). They are compiled ``nogil`` so the simulation
  harness can run frames on a thread pool.
* Layer processing is phased: all check outputs of a layer are read
  from pre-layer state, then all variables update, then all vector and
  message writes commit. Trace rows are appended per edge in (layer,
  variable, edge-slot) order, four parallel arrays: check-output sign
  and magnitude, then refreshed-message sign and magnitude.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BIG = np.int32(1 << 30)

# insert-position codes for the census: 0 discard, k>0 sorted slot k
# event classes: 0 removed+inserted, 1..3 kept slot, 4 discarded


@njit(cache=True, nogil=True, inline="always")
def _scale(value, alpha_num, use_shift):
    mag = value if value >= 0 else -value
    if use_shift:
        s = (mag >> 1) + (mag >> 2)
    else:
        s = (mag * alpha_num) >> 8
    return -s if value < 0 else s


@njit(cache=True, nogil=True, inline="always")
def _sat(value, limit):
    if value > limit:
        return limit
    if value < -limit:
        return -limit
    return value


@njit(cache=True, nogil=True)
def _syndrome_from_totals(check_ptr, check_vars, total, bits):
    n = bits.size
    for v in range(n):
        bits[v] = 1 if total[v] < 0 else 0
    m = check_ptr.size - 1
    ok = True
    for c in range(m):
        p = 0
        for e in range(check_ptr[c], check_ptr[c + 1]):
            p ^= bits[check_vars[e]]
        if p:
            ok = False
            break
    return ok


@njit(cache=True, nogil=True)
def flood_kernel(n, check_ptr, check_vars, var_ptr, var_edges,
                 intr_sign, intr_mag, max_iter, alpha_num, use_shift,
                 mag_max, acc_max, early_term, bits, synd_hist):
    m = check_ptr.size - 1
    E = check_vars.size
    l_sign = np.empty(E, np.int8)
    l_mag = np.empty(E, np.int32)
    r_val = np.empty(E, np.int64)
    total = np.empty(n, np.int32)
    for v in range(n):
        total[v] = intr_sign[v] * intr_mag[v]
    for e in range(E):
        v = check_vars[e]
        l_sign[e] = intr_sign[v]
        l_mag[e] = intr_mag[v]
    iters = 0
    for it in range(max_iter):
        for c in range(m):
            lo, hi = check_ptr[c], check_ptr[c + 1]
            prod = 1
            min1 = BIG
            min2 = BIG
            amin = -1
            for e in range(lo, hi):
                prod *= l_sign[e]
                mg = l_mag[e]
                if mg < min1:
                    min2 = min1
                    min1 = mg
                    amin = e
                elif mg < min2:
                    min2 = mg
            for e in range(lo, hi):
                mg = min2 if e == amin else min1
                r_val[e] = prod * l_sign[e] * mg
        for v in range(n):
            lo, hi = var_ptr[v], var_ptr[v + 1]
            s = np.int64(0)
            for k in range(lo, hi):
                s += r_val[var_edges[k]]
            iv = intr_sign[v] * intr_mag[v]
            for k in range(lo, hi):
                e = var_edges[k]
                wide = _sat(iv + _scale(s - r_val[e], alpha_num, use_shift), acc_max)
                if wide < 0:
                    l_sign[e] = -1
                    mg = -wide
                else:
                    l_sign[e] = 1
                    mg = wide
                l_mag[e] = mg if mg < mag_max else mag_max
            total[v] = _sat(iv + _scale(s, alpha_num, use_shift), acc_max)
        ok = _syndrome_from_totals(check_ptr, check_vars, total, bits)
        synd_hist[it] = 1 if ok else 0
        iters = it + 1
        if early_term and ok:
            break
    converged = 1 if synd_hist[iters - 1] else 0
    return iters, converged, 0


@njit(cache=True, nogil=True)
def row_layered_kernel(n, check_ptr, check_vars, var_ptr, var_edges,
                       row_layer_ptr, row_layer_checks, intr_sign, intr_mag,
                       max_cdeg, max_iter, alpha_num, use_shift, mag_max,
                       acc_max, early_term, bits, synd_hist):
    # per layer: every check of the layer rebuilds its incoming wires
    # from the variables' current raw check-output sums (pre-layer
    # state), runs min-sum, and the layer's outputs commit together;
    # with a single layer each iteration equals a flooding iteration
    E = check_vars.size
    r_sign = np.ones(E, np.int8)
    r_mag = np.zeros(E, np.int32)
    pend_sign = np.empty(E, np.int8)
    pend_mag = np.empty(E, np.int32)
    total = np.empty(n, np.int32)
    w_sign = np.empty(max_cdeg, np.int8)
    w_mag = np.empty(max_cdeg, np.int32)
    num_row_layers = row_layer_ptr.size - 1
    iters = 0
    for it in range(max_iter):
        for rl in range(num_row_layers):
            lo_l, hi_l = row_layer_ptr[rl], row_layer_ptr[rl + 1]
            for ci in range(lo_l, hi_l):
                c = row_layer_checks[ci]
                lo, hi = check_ptr[c], check_ptr[c + 1]
                d = hi - lo
                prod = 1
                min1 = BIG
                min2 = BIG
                amin = -1
                for k in range(d):
                    e = lo + k
                    v = check_vars[e]
                    s = np.int64(0)
                    own = np.int64(0)
                    for k2 in range(var_ptr[v], var_ptr[v + 1]):
                        e2 = var_edges[k2]
                        contrib = np.int64(r_sign[e2]) * r_mag[e2]
                        s += contrib
                        if e2 == e:
                            own = contrib
                    iv = np.int64(intr_sign[v]) * intr_mag[v]
                    wide = _sat(iv + _scale(s - own, alpha_num, use_shift), acc_max)
                    if wide < 0:
                        ws = -1
                        wm = -wide
                    else:
                        ws = 1
                        wm = wide
                    if wm > mag_max:
                        wm = mag_max
                    w_sign[k] = ws
                    w_mag[k] = wm
                    prod *= ws
                    if wm < min1:
                        min2 = min1
                        min1 = wm
                        amin = k
                    elif wm < min2:
                        min2 = wm
                for k in range(d):
                    e = lo + k
                    mg = min2 if k == amin else min1
                    pend_sign[e] = prod * w_sign[k]
                    pend_mag[e] = mg
            for ci in range(lo_l, hi_l):
                c = row_layer_checks[ci]
                for e in range(check_ptr[c], check_ptr[c + 1]):
                    r_sign[e] = pend_sign[e]
                    r_mag[e] = pend_mag[e]
        for v in range(n):
            s = np.int64(0)
            for k2 in range(var_ptr[v], var_ptr[v + 1]):
                e2 = var_edges[k2]
                s += np.int64(r_sign[e2]) * r_mag[e2]
            iv = np.int64(intr_sign[v]) * intr_mag[v]
            total[v] = _sat(iv + _scale(s, alpha_num, use_shift), acc_max)
        ok = _syndrome_from_totals(check_ptr, check_vars, total, bits)
        synd_hist[it] = 1 if ok else 0
        iters = it + 1
        if early_term and ok:
            break
    converged = 1 if synd_hist[iters - 1] else 0
    return iters, converged, 0


@njit(cache=True, nogil=True)
def col_original_kernel(n, check_ptr, check_vars, var_ptr, var_checks, var_edges,
                        layer_ptr, layer_vars, max_vdeg,
                        intr_sign, intr_mag, max_iter, alpha_num, use_shift,
                        mag_max, acc_max, early_term, bits, synd_hist,
                        trace_on, tr_r_sign, tr_r_mag, tr_l_sign, tr_l_mag):
    m = check_ptr.size - 1
    E = check_vars.size
    G = layer_ptr.size - 1
    l_sign = np.empty(E, np.int8)
    l_mag = np.empty(E, np.int32)
    pend_sign = np.empty(E, np.int8)
    pend_mag = np.empty(E, np.int32)
    total = np.empty(n, np.int32)
    rs_sign = np.empty(max_vdeg, np.int8)
    rs_mag = np.empty(max_vdeg, np.int32)
    for v in range(n):
        total[v] = intr_sign[v] * intr_mag[v]
    for e in range(E):
        v = check_vars[e]
        l_sign[e] = intr_sign[v]
        l_mag[e] = intr_mag[v]
    tr = 0
    iters = 0
    for it in range(max_iter):
        for g in range(G):
            for vi in range(layer_ptr[g], layer_ptr[g + 1]):
                v = layer_vars[vi]
                lo, hi = var_ptr[v], var_ptr[v + 1]
                s = np.int64(0)
                for k in range(lo, hi):
                    e = var_edges[k]
                    c = var_checks[k]
                    clo, chi = check_ptr[c], check_ptr[c + 1]
                    prod = 1
                    mn = BIG
                    for e2 in range(clo, chi):
                        if e2 == e:
                            continue
                        prod *= l_sign[e2]
                        if l_mag[e2] < mn:
                            mn = l_mag[e2]
                    rs_sign[k - lo] = prod
                    rs_mag[k - lo] = mn
                    s += prod * mn
                iv = intr_sign[v] * intr_mag[v]
                for k in range(lo, hi):
                    e = var_edges[k]
                    rv = rs_sign[k - lo] * rs_mag[k - lo]
                    wide = _sat(iv + _scale(s - rv, alpha_num, use_shift), acc_max)
                    if wide < 0:
                        ps = -1
                        pm = -wide
                    else:
                        ps = 1
                        pm = wide
                    if pm > mag_max:
                        pm = mag_max
                    pend_sign[e] = ps
                    pend_mag[e] = pm
                    if trace_on:
                        tr_r_sign[tr] = rs_sign[k - lo]
                        tr_r_mag[tr] = rs_mag[k - lo]
                        tr_l_sign[tr] = ps
                        tr_l_mag[tr] = pm
                        tr += 1
                total[v] = _sat(iv + _scale(s, alpha_num, use_shift), acc_max)
            for vi in range(layer_ptr[g], layer_ptr[g + 1]):
                v = layer_vars[vi]
                for k in range(var_ptr[v], var_ptr[v + 1]):
                    e = var_edges[k]
                    l_sign[e] = pend_sign[e]
                    l_mag[e] = pend_mag[e]
        ok = _syndrome_from_totals(check_ptr, check_vars, total, bits)
        synd_hist[it] = 1 if ok else 0
        iters = it + 1
        if early_term and ok:
            break
    converged = 1 if synd_hist[iters - 1] else 0
    return iters, converged, 0


@njit(cache=True, nogil=True)
def _init_vectors(check_ptr, check_vars, edge_key, intr_sign, intr_mag,
                  cap_per_check, vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign):
    m = check_ptr.size - 1
    for c in range(m):
        lo, hi = check_ptr[c], check_ptr[c + 1]
        cap = cap_per_check[c]
        sp = 1
        cnt = 0
        for e in range(lo, hi):
            v = check_vars[e]
            sg = intr_sign[v]
            mg = intr_mag[v]
            edge_sign[e] = sg
            sp *= sg
            if cnt == cap:
                if mg >= vec_mag[c, cnt - 1]:
                    continue
                cnt -= 1
            pos = cnt
            for j in range(cnt):
                if mg < vec_mag[c, j]:
                    pos = j
                    break
            for j in range(cnt, pos, -1):
                vec_mag[c, j] = vec_mag[c, j - 1]
                vec_idx[c, j] = vec_idx[c, j - 1]
            vec_mag[c, pos] = mg
            vec_idx[c, pos] = edge_key[e]
            cnt += 1
        vec_cnt[c] = cnt
        vec_sign[c] = sp


@njit(cache=True, nogil=True)
def _front_layer(g, var_ptr, var_checks, var_edges,
                 layer_ptr, layer_vars, edge_key,
                 vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign,
                 intr_sign, intr_mag, total, pend_sign, pend_mag,
                 rs_sign, rs_mag, alpha_num, use_shift, mag_max, acc_max,
                 skip_remove, trace_on, tr_r_sign, tr_r_mag, tr_l_sign,
                 tr_l_mag, tr):
    # check-output + variable phases of one layer: reads vectors and
    # committed signs only, writes pend_*/total/trace; returns (status, tr)
    for vi in range(layer_ptr[g], layer_ptr[g + 1]):
        v = layer_vars[vi]
        lo, hi = var_ptr[v], var_ptr[v + 1]
        s = np.int64(0)
        for k in range(lo, hi):
            e = var_edges[k]
            c = var_checks[k]
            key = edge_key[e]
            sprod = vec_sign[c] * edge_sign[e]
            cnt = vec_cnt[c]
            rm_pos = -1
            if not skip_remove:
                for j in range(cnt):
                    if vec_idx[c, j] == key:
                        rm_pos = j
                        break
            if rm_pos == 0:
                if cnt < 2:
                    return 1, tr
                mn = vec_mag[c, 1]
            else:
                if cnt < 1:
                    return 1, tr
                mn = vec_mag[c, 0]
            rs_sign[k - lo] = sprod
            rs_mag[k - lo] = mn
            s += sprod * mn
        iv = intr_sign[v] * intr_mag[v]
        for k in range(lo, hi):
            e = var_edges[k]
            rv = rs_sign[k - lo] * rs_mag[k - lo]
            wide = _sat(iv + _scale(s - rv, alpha_num, use_shift), acc_max)
            if wide < 0:
                ps = -1
                pm = -wide
            else:
                ps = 1
                pm = wide
            if pm > mag_max:
                pm = mag_max
            pend_sign[e] = ps
            pend_mag[e] = pm
            if trace_on:
                tr_r_sign[tr] = rs_sign[k - lo]
                tr_r_mag[tr] = rs_mag[k - lo]
                tr_l_sign[tr] = ps
                tr_l_mag[tr] = pm
                tr += 1
        total[v] = _sat(iv + _scale(s, alpha_num, use_shift), acc_max)
    return 0, tr


@njit(cache=True, nogil=True)
def _commit_layer(g, it, var_ptr, var_checks, var_edges, layer_ptr, layer_vars,
                  edge_key, cap_per_check, mode_code,
                  vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign,
                  pend_sign, pend_mag, counters):
    # removal + sorted reinsertion for every edge of the layer; commits
    # the refreshed signs and tallies the census
    for vi in range(layer_ptr[g], layer_ptr[g + 1]):
        v = layer_vars[vi]
        for k in range(var_ptr[v], var_ptr[v + 1]):
            e = var_edges[k]
            c = var_checks[k]
            key = edge_key[e]
            sprod = vec_sign[c] * edge_sign[e]
            cnt = vec_cnt[c]
            rm = 0
            for j in range(cnt):
                if vec_idx[c, j] == key:
                    for j2 in range(j, cnt - 1):
                        vec_mag[c, j2] = vec_mag[c, j2 + 1]
                        vec_idx[c, j2] = vec_idx[c, j2 + 1]
                    cnt -= 1
                    rm = 1
                    break
            mg = pend_mag[e]
            ns = pend_sign[e]
            cap = cap_per_check[c]
            pos_code = 0
            if cnt >= cap:
                if mode_code == 2 and rm == 0:
                    admit = cap >= 2 and mg < vec_mag[c, cap - 2]
                else:
                    admit = mg < vec_mag[c, cap - 1]
                if admit:
                    cnt -= 1
            else:
                admit = True
            if admit:
                pos = cnt
                for j in range(cnt):
                    if mg < vec_mag[c, j]:
                        pos = j
                        break
                for j2 in range(cnt, pos, -1):
                    vec_mag[c, j2] = vec_mag[c, j2 - 1]
                    vec_idx[c, j2] = vec_idx[c, j2 - 1]
                vec_mag[c, pos] = mg
                vec_idx[c, pos] = key
                cnt += 1
                pos_code = pos + 1
            vec_cnt[c] = cnt
            vec_sign[c] = sprod * ns
            edge_sign[e] = ns
            if rm:
                cls = 0
            elif pos_code == 0:
                cls = 4
            else:
                cls = pos_code if pos_code < 3 else 3
            counters[it, cls] += 1


@njit(cache=True, nogil=True)
def col_incremental_kernel(n, check_ptr, check_vars, var_ptr, var_checks,
                           var_edges, layer_ptr, layer_vars, edge_key,
                           cap_per_check, capmax, max_vdeg, intr_sign, intr_mag,
                           max_iter, alpha_num, use_shift, mag_max, acc_max,
                           early_term, mode_code, skip_remove_layer,
                           bits, synd_hist, counters, trace_on,
                           tr_r_sign, tr_r_mag, tr_l_sign, tr_l_mag):
    m = check_ptr.size - 1
    E = check_vars.size
    G = layer_ptr.size - 1
    vec_mag = np.empty((m, capmax), np.int32)
    vec_idx = np.empty((m, capmax), np.int32)
    vec_cnt = np.zeros(m, np.int32)
    vec_sign = np.ones(m, np.int8)
    edge_sign = np.empty(E, np.int8)
    pend_sign = np.empty(E, np.int8)
    pend_mag = np.empty(E, np.int32)
    total = np.empty(n, np.int32)
    rs_sign = np.empty(max_vdeg, np.int8)
    rs_mag = np.empty(max_vdeg, np.int32)
    for v in range(n):
        total[v] = intr_sign[v] * intr_mag[v]
    _init_vectors(check_ptr, check_vars, edge_key, intr_sign, intr_mag,
                  cap_per_check, vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign)
    tr = 0
    iters = 0
    for it in range(max_iter):
        for g in range(G):
            status, tr = _front_layer(
                g, var_ptr, var_checks, var_edges, layer_ptr, layer_vars,
                edge_key, vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign,
                intr_sign, intr_mag, total, pend_sign, pend_mag, rs_sign,
                rs_mag, alpha_num, use_shift, mag_max, acc_max,
                g == skip_remove_layer, trace_on,
                tr_r_sign, tr_r_mag, tr_l_sign, tr_l_mag, tr)
            if status != 0:
                return iters, 0, status
            _commit_layer(g, it, var_ptr, var_checks, var_edges, layer_ptr,
                          layer_vars, edge_key, cap_per_check, mode_code,
                          vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign,
                          pend_sign, pend_mag, counters)
        ok = _syndrome_from_totals(check_ptr, check_vars, total, bits)
        synd_hist[it] = 1 if ok else 0
        iters = it + 1
        if early_term and ok:
            break
    converged = 1 if synd_hist[iters - 1] else 0
    return iters, converged, 0


@njit(cache=True, nogil=True)
def col_pipelined_kernel(n, check_ptr, check_vars, var_ptr, var_checks,
                         var_edges, layer_ptr, layer_vars, edge_key,
                         cap_per_check, capmax, max_vdeg, intr_sign, intr_mag,
                         max_iter, alpha_num, use_shift, mag_max, acc_max,
                         early_term, mode_code, pipeline_p,
                         bits, synd_hist, counters, trace_on,
                         tr_r_sign, tr_r_mag, tr_l_sign, tr_l_mag):
    m = check_ptr.size - 1
    E = check_vars.size
    G = layer_ptr.size - 1
    vec_mag = np.empty((m, capmax), np.int32)
    vec_idx = np.empty((m, capmax), np.int32)
    vec_cnt = np.zeros(m, np.int32)
    vec_sign = np.ones(m, np.int8)
    edge_sign = np.empty(E, np.int8)
    pend_sign = np.empty(E, np.int8)
    pend_mag = np.empty(E, np.int32)
    total = np.empty(n, np.int32)
    rs_sign = np.empty(max_vdeg, np.int8)
    rs_mag = np.empty(max_vdeg, np.int32)
    for v in range(n):
        total[v] = intr_sign[v] * intr_mag[v]
    _init_vectors(check_ptr, check_vars, edge_key, intr_sign, intr_mag,
                  cap_per_check, vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign)
    max_steps = max_iter * G
    tr = 0
    # ramp-up: the first pipeline_p layers read the freshly initialized
    # vectors as their stale estimate
    for t in range(min(pipeline_p, max_steps)):
        status, tr = _front_layer(
            t % G, var_ptr, var_checks, var_edges, layer_ptr, layer_vars,
            edge_key, vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign,
            intr_sign, intr_mag, total, pend_sign, pend_mag, rs_sign, rs_mag,
            alpha_num, use_shift, mag_max, acc_max, False, trace_on,
            tr_r_sign, tr_r_mag, tr_l_sign, tr_l_mag, tr)
        if status != 0:
            return 0, 0, status
    iters = 0
    for s in range(max_steps):
        t = s + pipeline_p
        if t < max_steps:
            # check outputs for a layer pipeline_p steps ahead, computed
            # from the vector state left by the last committed layer
            status, tr = _front_layer(
                t % G, var_ptr, var_checks, var_edges, layer_ptr,
                layer_vars, edge_key, vec_mag, vec_idx, vec_cnt, vec_sign,
                edge_sign, intr_sign, intr_mag, total, pend_sign, pend_mag,
                rs_sign, rs_mag, alpha_num, use_shift, mag_max, acc_max,
                False, trace_on, tr_r_sign, tr_r_mag, tr_l_sign, tr_l_mag, tr)
            if status != 0:
                return iters, 0, status
        _commit_layer(s % G, s // G, var_ptr, var_checks, var_edges, layer_ptr,
                      layer_vars, edge_key, cap_per_check, mode_code,
                      vec_mag, vec_idx, vec_cnt, vec_sign, edge_sign,
                      pend_sign, pend_mag, counters)
        if (s + 1) % G == 0:
            it = s // G
            ok = _syndrome_from_totals(check_ptr, check_vars, total, bits)
            synd_hist[it] = 1 if ok else 0
            iters = it + 1
            if early_term and ok:
                break
    converged = 1 if synd_hist[iters - 1] else 0
    return iters, converged, 0
