"""Compiled message-passing kernels.

All kernels share one edge numbering (see ``pcm.TannerGraph``) and one
variable-side rule: b_j = L_j + sum_i rho_i * c2v[i, j] and
v2c[j, i] = b_j - rho_i * c2v[i, j]. Hard decision is bit 1 iff b_j < 0.
"""

import math

import numba
import numpy as np

SPA = 0
MINSUM = 1

LLR_MAX = 50.0


@numba.njit(cache=True)
def check_update(kind, alpha, beta, src, lo, hi, dst, fwd, bwd):
    """Extrinsic outputs of one check: dst[e] from src[lo:hi] without src[e]."""
    d = hi - lo
    if d == 1:
        dst[lo] = LLR_MAX
        return
    neg = 0
    for e in range(lo, hi):
        if src[e] < 0.0:
            neg += 1
    if kind == MINSUM:
        min1 = np.inf
        min2 = np.inf
        arg = -1
        for e in range(lo, hi):
            a = abs(src[e])
            if a < min1:
                min2 = min1
                min1 = a
                arg = e
            elif a < min2:
                min2 = a
        for e in range(lo, hi):
            mag = min2 if e == arg else min1
            mag = mag / alpha - beta
            if mag < 0.0:
                mag = 0.0
            sgn_neg = (neg - (1 if src[e] < 0.0 else 0)) & 1
            dst[e] = -mag if sgn_neg and mag > 0.0 else mag
        return
    # SPA: 2 atanh of the exclusive product of tanh(|x| / 2), via prefix and
    # suffix products. The exact output never exceeds the smallest other
    # magnitude, so clamping to it only removes rounding error (and keeps
    # min-sum dominance exact).
    min1 = np.inf
    min2 = np.inf
    arg = -1
    for k in range(d):
        a = abs(src[lo + k])
        if a < min1:
            min2 = min1
            min1 = a
            arg = lo + k
        elif a < min2:
            min2 = a
    acc = 1.0
    for k in range(d):
        fwd[k] = acc
        acc *= math.tanh(0.5 * abs(src[lo + k]))
    acc = 1.0
    for k in range(d - 1, -1, -1):
        bwd[k] = acc
        acc *= math.tanh(0.5 * abs(src[lo + k]))
    for k in range(d):
        e = lo + k
        p = fwd[k] * bwd[k]
        mag = 2.0 * math.atanh(p) if p < 1.0 else LLR_MAX
        cap = min2 if e == arg else min1
        if mag > cap:
            mag = cap
        if mag > LLR_MAX:
            mag = LLR_MAX
        sgn_neg = (neg - (1 if src[e] < 0.0 else 0)) & 1
        dst[e] = -mag if sgn_neg and mag > 0.0 else mag


@numba.njit(cache=True)
def _belief(j, llr, rho, edge_check, var_ptr, var_edges, c2v):
    b = llr[j]
    for k in range(var_ptr[j], var_ptr[j + 1]):
        e = var_edges[k]
        b += rho[edge_check[e]] * c2v[e]
    return b


@numba.njit(cache=True)
def _decide(beliefs, bits):
    for j in range(beliefs.size):
        bits[j] = 1 if beliefs[j] < 0.0 else 0


@numba.njit(cache=True)
def _syndrome_weight(bits, check_ptr, edge_var):
    w = 0
    for i in range(check_ptr.size - 1):
        p = 0
        for e in range(check_ptr[i], check_ptr[i + 1]):
            p ^= bits[edge_var[e]]
        w += p
    return w


@numba.njit(cache=True)
def _record(t, bits, c2v, bit_trace, msg_trace):
    if bit_trace.shape[0] > t:
        bit_trace[t, :] = bits
    if msg_trace.shape[0] > t:
        msg_trace[t, :] = c2v


@numba.njit(cache=True)
def _fill_rest(t, bit_trace, msg_trace):
    for u in range(t + 1, bit_trace.shape[0]):
        bit_trace[u, :] = bit_trace[t, :]
    for u in range(t + 1, msg_trace.shape[0]):
        msg_trace[u, :] = msg_trace[t, :]


@numba.njit(cache=True, nogil=True)
def decode_flooding(check_ptr, edge_check, edge_var, var_ptr, var_edges,
                    llr, rho, kind, alpha, beta, max_iters, stop,
                    c2v, v2c, beliefs, bits, bit_trace, msg_trace, fwd, bwd):
    m = check_ptr.size - 1
    n = llr.size
    c2v[:] = 0.0
    beliefs[:] = llr
    _decide(beliefs, bits)
    _record(0, bits, c2v, bit_trace, msg_trace)
    sw = _syndrome_weight(bits, check_ptr, edge_var)
    it = 0
    if stop and sw == 0:
        _fill_rest(0, bit_trace, msg_trace)
        return 0, sw
    for it in range(1, max_iters + 1):
        for e in range(edge_var.size):
            v2c[e] = beliefs[edge_var[e]] - rho[edge_check[e]] * c2v[e]
        for i in range(m):
            check_update(kind, alpha, beta, v2c, check_ptr[i], check_ptr[i + 1], c2v, fwd, bwd)
        for j in range(n):
            beliefs[j] = _belief(j, llr, rho, edge_check, var_ptr, var_edges, c2v)
        _decide(beliefs, bits)
        _record(it, bits, c2v, bit_trace, msg_trace)
        sw = _syndrome_weight(bits, check_ptr, edge_var)
        if stop and sw == 0:
            _fill_rest(it, bit_trace, msg_trace)
            return it, sw
    return max_iters, sw


@numba.njit(cache=True, nogil=True)
def decode_layered(check_ptr, edge_check, edge_var, var_ptr, var_edges,
                   llr, rho, kind, alpha, beta, max_iters, stop,
                   c2v, v2c, beliefs, bits, bit_trace, msg_trace, fwd, bwd):
    m = check_ptr.size - 1
    c2v[:] = 0.0
    beliefs[:] = llr
    _decide(beliefs, bits)
    _record(0, bits, c2v, bit_trace, msg_trace)
    sw = _syndrome_weight(bits, check_ptr, edge_var)
    if stop and sw == 0:
        _fill_rest(0, bit_trace, msg_trace)
        return 0, sw
    for it in range(1, max_iters + 1):
        for i in range(m):
            lo = check_ptr[i]
            hi = check_ptr[i + 1]
            r = rho[i]
            for e in range(lo, hi):
                v2c[e] = beliefs[edge_var[e]] - r * c2v[e]
            check_update(kind, alpha, beta, v2c, lo, hi, c2v, fwd, bwd)
            for e in range(lo, hi):
                beliefs[edge_var[e]] = v2c[e] + r * c2v[e]
        _decide(beliefs, bits)
        _record(it, bits, c2v, bit_trace, msg_trace)
        sw = _syndrome_weight(bits, check_ptr, edge_var)
        if stop and sw == 0:
            _fill_rest(it, bit_trace, msg_trace)
            return it, sw
    return max_iters, sw


# -- max segment tree (ties resolve to the lowest index) -----------------------

@numba.njit(cache=True)
def _tree_build(vals, size, tv, ti):
    for k in range(size):
        tv[size + k] = vals[k] if k < vals.size else -1.0
        ti[size + k] = k
    for p in range(size - 1, 0, -1):
        _tree_pull(p, tv, ti)


@numba.njit(cache=True, inline="always")
def _tree_pull(p, tv, ti):
    a = 2 * p
    b = a + 1
    if tv[a] >= tv[b]:
        tv[p] = tv[a]
        ti[p] = ti[a]
    else:
        tv[p] = tv[b]
        ti[p] = ti[b]


@numba.njit(cache=True)
def _tree_set(k, v, size, tv, ti):
    p = size + k
    tv[p] = v
    p //= 2
    while p >= 1:
        _tree_pull(p, tv, ti)
        p //= 2


def tree_size(count):
    size = 1
    while size < max(count, 1):
        size *= 2
    return size


@numba.njit(cache=True)
def _refresh_check(i, kind, alpha, beta, check_ptr, v2c, c2v, cand, res, fwd, bwd):
    """Recompute candidate messages of check i and their residuals."""
    lo = check_ptr[i]
    hi = check_ptr[i + 1]
    check_update(kind, alpha, beta, v2c, lo, hi, cand, fwd, bwd)
    rmax = 0.0
    for e in range(lo, hi):
        res[e] = abs(cand[e] - c2v[e])
        if res[e] > rmax:
            rmax = res[e]
    return rmax


@numba.njit(cache=True, nogil=True)
def decode_residual(check_ptr, edge_check, edge_var, var_ptr, var_edges,
                    llr, rho, kind, alpha, beta, max_iters, stop,
                    c2v, v2c, beliefs, bits, bit_trace, msg_trace, fwd, bwd,
                    node_wise, cand, res, tv, ti, size):
    """Residual BP (one message at a time) or node-wise BP (one check at a time).

    One iteration-equivalent is |E| check-to-variable propagations.
    """
    m = check_ptr.size - 1
    E = edge_var.size
    c2v[:] = 0.0
    beliefs[:] = llr
    for e in range(E):
        v2c[e] = llr[edge_var[e]]
    _decide(beliefs, bits)
    _record(0, bits, c2v, bit_trace, msg_trace)
    sw = _syndrome_weight(bits, check_ptr, edge_var)
    if stop and sw == 0:
        _fill_rest(0, bit_trace, msg_trace)
        return 0, sw
    # virtual first update of every check from the channel LLRs
    keys = np.empty(m if node_wise else E)
    for i in range(m):
        rmax = _refresh_check(i, kind, alpha, beta, check_ptr, v2c, c2v, cand, res, fwd, bwd)
        if node_wise:
            keys[i] = rmax
    if not node_wise:
        keys[:] = res
    _tree_build(keys, size, tv, ti)

    it = 1
    done = 0
    budget = E
    stamp = np.zeros(m, np.int64)
    picks = 0
    while it <= max_iters:
        if tv[1] <= 0.0:
            # fixed point: nothing left to propagate
            _decide(beliefs, bits)
            sw = _syndrome_weight(bits, check_ptr, edge_var)
            for t in range(it, max_iters + 1):
                _record(t, bits, c2v, bit_trace, msg_trace)
            return it if done > 0 else it - 1, sw
        top = ti[1]
        if node_wise:
            i0 = top
            lo = check_ptr[i0]
            hi = check_ptr[i0 + 1]
            for e in range(lo, hi):
                c2v[e] = cand[e]
                res[e] = 0.0
            _tree_set(i0, 0.0, size, tv, ti)
            done += hi - lo
            for e in range(lo, hi):
                j = edge_var[e]
                beliefs[j] = _belief(j, llr, rho, edge_check, var_ptr, var_edges, c2v)
                for k in range(var_ptr[j], var_ptr[j + 1]):
                    e2 = var_edges[k]
                    if edge_check[e2] != i0:
                        v2c[e2] = beliefs[j] - rho[edge_check[e2]] * c2v[e2]
            # refresh each affected check once, however many variables it shares
            picks += 1
            stamp[i0] = picks
            for e in range(lo, hi):
                j = edge_var[e]
                for k in range(var_ptr[j], var_ptr[j + 1]):
                    i2 = edge_check[var_edges[k]]
                    if stamp[i2] != picks:
                        stamp[i2] = picks
                        rmax = _refresh_check(i2, kind, alpha, beta, check_ptr, v2c, c2v,
                                              cand, res, fwd, bwd)
                        _tree_set(i2, rmax, size, tv, ti)
        else:
            e0 = top
            i0 = edge_check[e0]
            j = edge_var[e0]
            c2v[e0] = cand[e0]
            res[e0] = 0.0
            _tree_set(e0, 0.0, size, tv, ti)
            done += 1
            beliefs[j] = _belief(j, llr, rho, edge_check, var_ptr, var_edges, c2v)
            for k in range(var_ptr[j], var_ptr[j + 1]):
                e2 = var_edges[k]
                i2 = edge_check[e2]
                if i2 == i0:
                    continue
                v2c[e2] = beliefs[j] - rho[i2] * c2v[e2]
                _refresh_check(i2, kind, alpha, beta, check_ptr, v2c, c2v, cand, res, fwd, bwd)
                for e3 in range(check_ptr[i2], check_ptr[i2 + 1]):
                    _tree_set(e3, res[e3], size, tv, ti)
        if done >= budget:
            done -= budget
            _decide(beliefs, bits)
            _record(it, bits, c2v, bit_trace, msg_trace)
            sw = _syndrome_weight(bits, check_ptr, edge_var)
            if stop and sw == 0:
                _fill_rest(it, bit_trace, msg_trace)
                return it, sw
            it += 1
    return max_iters, sw
