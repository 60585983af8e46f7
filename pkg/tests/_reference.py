"""Plain-Python column-layered decoder assembled from the scalar
building blocks, used as an independent route against the compiled
kernels. Deliberately slow and literal: every check update goes through
the public remove / check-output / vertical / insert functions, traces
are plain lists, and nothing is vectorized."""

import numpy as np

from ldpcsim import (DecodeConfig, classify_event, compute_rcv, hard_decision,
                     init_state, step_a_remove, step_b_insert, syndrome_ok,
                     vertical_update)
from ldpcsim.instrumentation import EVENT_CLASSES


def reference_column_decode(matrix, llrs, config: DecodeConfig):
    """Returns (bits, converged, iterations, trace_rows, census).

    ``trace_rows`` is a list of (r_sign, r_mag, l_sign, l_mag) tuples in
    (iteration, layer, variable, edge-slot) order, matching the compiled
    decoders' trace layout row for row. ``census`` has one row per
    executed iteration in EVENT_CLASSES column order.
    """
    cap = None
    if config.mode != "exact" and config.vector_capacity is not None:
        cap = config.vector_capacity
    state = init_state(matrix, llrs, cap)
    census = np.zeros((config.max_iterations, len(EVENT_CLASSES)), np.int64)
    rows = []
    iters = 0
    converged = False
    for it in range(config.max_iterations):
        for g in range(matrix.num_layers):
            lo, hi = int(matrix.layer_ptr[g]), int(matrix.layer_ptr[g + 1])
            layer_vars = [int(v) for v in matrix.layer_vars[lo:hi]]
            pend = {}
            for v in layer_vars:
                edges = [int(e) for e in matrix.edges_of_var(v)]
                checks = [int(c) for c in matrix.checks_of_var(v)]
                outputs = []
                for e, c in zip(edges, checks):
                    temp = step_a_remove(state.vectors[c],
                                         int(matrix.edge_key[e]),
                                         int(state.edge_sign[e]))
                    outputs.append(compute_rcv(temp))
                iv = int(state.intrinsic_sign[v]) * int(state.intrinsic_mag[v])
                outs, total = vertical_update(iv, [r.value for r in outputs],
                                              config.fmt, alpha=config.alpha)
                state.total[v] = total
                for e, r, out in zip(edges, outputs, outs):
                    rows.append((r.sign, r.mag, out.sign, out.mag))
                    pend[e] = out
            for v in layer_vars:
                for e, c in zip(matrix.edges_of_var(v), matrix.checks_of_var(v)):
                    e, c = int(e), int(c)
                    key = int(matrix.edge_key[e])
                    out = pend[e]
                    temp = step_a_remove(state.vectors[c], key,
                                         int(state.edge_sign[e]))
                    vec, pos = step_b_insert(temp, key, out.mag, out.sign,
                                             config.mode)
                    state.vectors[c] = vec
                    state.edge_sign[e] = out.sign
                    name = classify_event(temp.removed_flag, pos)
                    census[it, EVENT_CLASSES.index(name)] += 1
        bits = hard_decision(state)
        converged = syndrome_ok(matrix, bits)
        iters = it + 1
        if config.early_termination and converged:
            break
    return hard_decision(state), converged, iters, rows, census[:iters]
