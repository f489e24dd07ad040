"""Compiled inner loops for the heat-bath dynamics and the greedy decoder.

Kernels consume pre-generated random arrays (one entry of each array per
attempted move) so the random stream is owned by numpy generators outside;
results are bit-reproducible for a fixed seed regardless of how the run is
segmented.  Field arithmetic comes in as dense element tables, which caps
compiled dynamics at q <= 256.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def glauber_segment(
    word,  # int16[n], mutated
    syn,  # int16[m], mutated
    energy,  # int64, current |syn|
    t,  # float64 clock
    t_target,  # float64
    col_ptr,  # int64[n+1] CSR over coordinates
    col_rows,  # int64[nnz]
    col_coeffs,  # int16[nnz]
    add_t,  # uint16[q,q]
    mul_t,  # uint16[q,q]
    neg_t,  # uint16[q]
    beta,  # float64
    q,  # int64
    coords,  # int64[B] random coordinate per attempt
    vals,  # int64[B] random value offset per attempt (q > 2; ignored otherwise)
    unifs,  # float64[B] acceptance uniforms
    exps,  # float64[B] exponential waiting times
    idx,  # int64 next random index
):
    """Run uniformized heat-bath moves until the clock reaches t_target or
    the random batch is exhausted.  Returns (t, energy, idx, reached)."""
    n = word.shape[0]
    total_rate = n * (q - 1)
    B = coords.shape[0]
    while True:
        if idx >= B:
            return t, energy, idx, False
        dt = exps[idx] / total_rate
        if t + dt > t_target:
            # discard the partial wait: exponential clocks are memoryless
            return t_target, energy, idx + 1, True
        t += dt
        i = coords[idx]
        cur = word[i]
        if q == 2:
            new = 1 - cur
        else:
            new = (cur + 1 + vals[idx]) % q
        delta = add_t[new, neg_t[cur]]
        de = 0
        for ptr in range(col_ptr[i], col_ptr[i + 1]):
            r = col_rows[ptr]
            contrib = mul_t[col_coeffs[ptr], delta]
            s_old = syn[r]
            s_new = add_t[s_old, contrib]
            if s_new != 0 and s_old == 0:
                de += 1
            elif s_new == 0 and s_old != 0:
                de -= 1
        if unifs[idx] < 1.0 / (1.0 + math.exp(beta * de)):
            for ptr in range(col_ptr[i], col_ptr[i + 1]):
                r = col_rows[ptr]
                syn[r] = add_t[syn[r], mul_t[col_coeffs[ptr], delta]]
            word[i] = new
            energy += de
        idx += 1


@njit(cache=True, nogil=True)
def glauber_occupancy_segment(
    word,
    syn,
    energy,
    state_code,  # int64 base-q encoding of word
    t,
    t_target,
    col_ptr,
    col_rows,
    col_coeffs,
    add_t,
    mul_t,
    neg_t,
    beta,
    q,
    qpow,  # int64[n] powers q^i
    occ,  # float64[q^n], holding time per state, mutated
    coords,
    vals,
    unifs,
    exps,
    idx,
):
    """Like glauber_segment but accumulates per-state holding times."""
    n = word.shape[0]
    total_rate = n * (q - 1)
    B = coords.shape[0]
    while True:
        if idx >= B:
            return t, energy, state_code, idx, False
        dt = exps[idx] / total_rate
        if t + dt > t_target:
            occ[state_code] += t_target - t
            return t_target, energy, state_code, idx + 1, True
        occ[state_code] += dt
        t += dt
        i = coords[idx]
        cur = word[i]
        if q == 2:
            new = 1 - cur
        else:
            new = (cur + 1 + vals[idx]) % q
        delta = add_t[new, neg_t[cur]]
        de = 0
        for ptr in range(col_ptr[i], col_ptr[i + 1]):
            r = col_rows[ptr]
            contrib = mul_t[col_coeffs[ptr], delta]
            s_old = syn[r]
            s_new = add_t[s_old, contrib]
            if s_new != 0 and s_old == 0:
                de += 1
            elif s_new == 0 and s_old != 0:
                de -= 1
        if unifs[idx] < 1.0 / (1.0 + math.exp(beta * de)):
            for ptr in range(col_ptr[i], col_ptr[i + 1]):
                r = col_rows[ptr]
                syn[r] = add_t[syn[r], mul_t[col_coeffs[ptr], delta]]
            word[i] = new
            energy += de
            state_code += (new - cur) * qpow[i]
        idx += 1


@njit(cache=True, nogil=True)
def greedy_decode(
    syn,  # int16[m] target syndrome (not mutated)
    col_ptr,
    col_rows,
    col_coeffs,
    add_t,
    mul_t,
    neg_t,
    q,
    n,
    max_rounds,
):
    """Greedy sweep: repeatedly apply the single-coordinate change that most
    reduces the syndrome weight (ties: lowest coordinate, lowest value).
    Returns (correction int16[n], ok) with ok=False at a local minimum."""
    e = np.zeros(n, dtype=np.int16)
    residual = syn.copy()
    weight = 0
    for r in range(residual.shape[0]):
        if residual[r] != 0:
            weight += 1
    rounds = 0
    while weight > 0 and rounds < max_rounds:
        best_de = 0
        best_i = -1
        best_v = 0
        for i in range(n):
            cur = e[i]
            for v in range(q):
                if v == cur:
                    continue
                # changing e[i] to v subtracts H_col_i * (v - cur) from the residual
                delta = add_t[v, neg_t[cur]]
                de = 0
                for ptr in range(col_ptr[i], col_ptr[i + 1]):
                    r = col_rows[ptr]
                    contrib = mul_t[col_coeffs[ptr], delta]
                    s_old = residual[r]
                    s_new = add_t[s_old, neg_t[contrib]]
                    if s_new != 0 and s_old == 0:
                        de += 1
                    elif s_new == 0 and s_old != 0:
                        de -= 1
                if de < best_de:
                    best_de = de
                    best_i = i
                    best_v = v
        if best_i < 0:
            return e, False
        cur = e[best_i]
        delta = add_t[best_v, neg_t[cur]]
        for ptr in range(col_ptr[best_i], col_ptr[best_i + 1]):
            r = col_rows[ptr]
            residual[r] = add_t[residual[r], neg_t[mul_t[col_coeffs[ptr], delta]]]
        e[best_i] = best_v
        weight += best_de
        rounds += 1
    return e, weight == 0
