"""Heat-bath dynamics: rates, kernel/reference equivalence, stationarity,
decoders, and the memory-time estimator."""

import math

import numpy as np
import pytest

from qmemlab.fields import field_make
from qmemlab.families import instantiate, make_classical_grid, make_ising, make_toric
from qmemlab.laurent import poly_parse
from qmemlab.linalg import SparseFqMatrix
from qmemlab.dynamics import (
    DecoderSpec,
    GlauberParams,
    RandomStream,
    advance_to,
    empirical_occupancy,
    estimate_memory_time,
    exact_gibbs,
    fresh_state,
    make_decoder,
    rate,
    sector_adjacency,
    step,
    total_variation,
    wilson_interval,
    _syndrome_dense,
)

F2 = field_make(2)


def test_rate_examples():
    assert rate(5, 5, 1.3) == 0.5
    assert rate(2, 7, 0.0) == 0.5
    assert abs(rate(0, 1, math.log(2)) - 1 / 3) < 1e-15


def test_detailed_balance_grid():
    for e_from in range(0, 9):
        for e_to in range(0, 9):
            for beta in (0.0, 0.25, 0.7, 1.0, 2.5):
                lhs = rate(e_from, e_to, beta) * math.exp(-beta * e_from)
                rhs = rate(e_to, e_from, beta) * math.exp(-beta * e_to)
                assert abs(lhs - rhs) < 1e-12


@pytest.mark.parametrize("code,L,q", [(make_ising(1), 5, None), (None, None, 3)])
def test_step_matches_kernel(code, L, q):
    from qmemlab._kernels import glauber_segment

    if code is not None:
        inst = instantiate(code, L)
    else:
        f = poly_parse("1+2*x+y", field_make(3), 2)
        inst = instantiate(make_classical_grid(1, {(1, 1): f}), 3)
    adj = sector_adjacency(inst)
    B = 700
    rng1 = np.random.default_rng(np.random.SeedSequence([1, 0]))
    s1 = RandomStream(rng1, adj.n, adj.field.q, batch=B)
    st1 = fresh_state(adj)
    for _ in range(B):
        step(st1, adj, 0.8, s1)
    rng2 = np.random.default_rng(np.random.SeedSequence([1, 0]))
    s2 = RandomStream(rng2, adj.n, adj.field.q, batch=B)
    st2 = fresh_state(adj)
    t, e, idx, reached = glauber_segment(
        st2.word, st2.syndrome, st2.energy, st2.t, 1e30,
        adj.col_ptr, adj.col_rows, adj.col_coeffs,
        adj.add_t, adj.mul_t, adj.neg_t, 0.8, adj.field.q,
        s2.coords, s2.vals, s2.unifs, s2.exps, 0,
    )
    assert not reached and idx == B
    assert np.array_equal(st1.word, st2.word)
    assert abs(st1.t - t) < 1e-9
    assert st1.verify(adj)


def test_syndrome_stays_consistent():
    inst = instantiate(make_ising(2), 4)
    adj = sector_adjacency(inst)
    rng = np.random.default_rng(np.random.SeedSequence([3, 0]))
    stream = RandomStream(rng, adj.n, 2)
    state = fresh_state(adj)
    for t_target in (5.0, 50.0, 500.0):
        advance_to(state, adj, 0.7, stream, t_target)
        assert state.verify(adj)
        assert state.t == t_target


def test_gibbs_stationarity_small():
    inst = instantiate(make_ising(1), 4)
    p = exact_gibbs(inst, 1.0)
    assert abs(p.sum() - 1.0) < 1e-12
    emp = empirical_occupancy(inst, 1.0, 1e5, seed=12, burn_in=500.0)
    assert total_variation(p, emp) < 0.02


def test_gibbs_beta_zero_is_uniform():
    inst = instantiate(make_ising(1), 3)
    p = exact_gibbs(inst, 0.0)
    assert np.allclose(p, 1 / len(p))


def random_toy_instance():
    rng = np.random.default_rng(77)
    while True:
        H = SparseFqMatrix.from_dense(rng.integers(0, 2, (3, 4)), F2)
        if all(H.col_adj[c] for c in range(4)) and all(H.row_adj[r] for r in range(3)):
            from qmemlab.families import CodeInstance

            return CodeInstance(kind="classical", fld=F2, n=4, boundary="explicit", H=H)


def test_gibbs_random_toy_code():
    inst = random_toy_instance()
    p = exact_gibbs(inst, 1.0)
    emp = empirical_occupancy(inst, 1.0, 1e5, seed=5, burn_in=500.0)
    assert total_variation(p, emp) < 0.02


def test_decoders_on_chain():
    inst = instantiate(make_ising(1), 5)
    H = inst.H
    zero = np.zeros(5, dtype=np.int16)
    for spec in (DecoderSpec("min_weight"), DecoderSpec("lookup", w_max=2),
                 DecoderSpec("greedy")):
        dec = make_decoder(H, spec)
        assert np.array_equal(dec.decode(np.zeros(H.rows, dtype=np.int16)), zero)
        e = np.zeros(5, dtype=np.int16)
        e[2] = 1
        adj = sector_adjacency(inst)
        syn = _syndrome_dense(e, adj)
        got = dec.decode(syn)
        assert got is not None and np.array_equal(got, e)


def test_min_weight_equals_lookup_on_small_errors():
    inst = instantiate(make_ising(2), 4)
    adj = sector_adjacency(inst)
    mw = make_decoder(inst.H, DecoderSpec("min_weight"))
    lk = make_decoder(inst.H, DecoderSpec("lookup", w_max=2))
    rng = np.random.default_rng(4)
    for _ in range(30):
        e = np.zeros(inst.n, dtype=np.int16)
        for i in rng.choice(inst.n, 2, replace=False):
            e[i] = 1
        syn = _syndrome_dense(e, adj)
        a = mw.decode(syn)
        b = lk.decode(syn)
        assert a is not None and b is not None
        assert int(np.count_nonzero(a)) == int(np.count_nonzero(b)) == 2
        assert np.array_equal(_syndrome_dense(a, adj), syn)


def test_lookup_decoder_fails_beyond_radius():
    inst = instantiate(make_ising(2), 4)
    adj = sector_adjacency(inst)
    lk = make_decoder(inst.H, DecoderSpec("lookup", w_max=1))
    e = np.zeros(inst.n, dtype=np.int16)
    e[0] = e[5] = 1
    assert lk.decode(_syndrome_dense(e, adj)) is None


def test_greedy_decoder_returns_failure_flag():
    # at a syndrome it cannot clear, greedy reports failure instead of looping
    inst = instantiate(make_ising(2), 4)
    gd = make_decoder(inst.H, DecoderSpec("greedy", max_rounds=1))
    e = np.zeros(inst.n, dtype=np.int16)
    e[0] = e[1] = e[4] = 1
    adj = sector_adjacency(inst)
    syn = _syndrome_dense(e, adj)
    assert gd.decode(syn) is None or np.array_equal(
        _syndrome_dense(gd.decode(syn), adj), syn
    )


def test_decoder_equivariance():
    inst = instantiate(make_ising(1), 8)
    adj = sector_adjacency(inst)
    ones = np.ones(inst.n, dtype=np.int16)
    rng = np.random.default_rng(10)
    decoders = [make_decoder(inst.H, DecoderSpec(k)) for k in ("min_weight", "greedy")]
    decoders.append(make_decoder(inst.H, DecoderSpec("lookup", w_max=2)))
    for _ in range(300):
        c = rng.integers(0, 2, inst.n).astype(np.int16)
        z = ones if rng.random() < 0.5 else np.zeros(inst.n, dtype=np.int16)
        s1 = _syndrome_dense(c, adj)
        s2 = _syndrome_dense((c + z) % 2, adj)
        assert np.array_equal(s1, s2)
        for dec in decoders:
            a, b = dec.decode(s1), dec.decode(s2)
            if a is None:
                assert b is None
            else:
                assert np.array_equal(a, b)


def test_glauber_params_validation():
    with pytest.raises(ValueError):
        GlauberParams(beta=-1, checkpoints=[1.0], n_traj=10, seed=0)
    with pytest.raises(ValueError):
        GlauberParams(beta=1, checkpoints=[2.0, 1.0], n_traj=10, seed=0)
    with pytest.raises(ValueError):
        GlauberParams(beta=1, checkpoints=[1.0], n_traj=0, seed=0)
    g = GlauberParams.geometric(1.0, 1.0, 2.0, 4, 10, 0)
    assert g.checkpoints == [1.0, 2.0, 4.0, 8.0] and g.t_max == 8.0


def test_memory_time_estimator_reproducible():
    inst = instantiate(make_ising(1), 4)
    params = GlauberParams.geometric(1.5, 1.0, 2.0, 6, 40, seed=21)
    a = estimate_memory_time(inst, params, DecoderSpec("min_weight"))
    b = estimate_memory_time(inst, params, DecoderSpec("min_weight"))
    assert a.to_dict() == b.to_dict()
    c = estimate_memory_time(inst, params, DecoderSpec("min_weight"), workers=3)
    assert a.to_dict() == c.to_dict()


def test_memory_time_infinite_temperature_small():
    inst = instantiate(make_ising(1), 4)
    params = GlauberParams.geometric(0.0, 1.0, 2.0, 9, 60, seed=2)
    est = estimate_memory_time(inst, params, DecoderSpec("min_weight"))
    assert not est.censored
    assert est.t_mem_point <= 8.0
    assert est.p_hat[-1] < 2 / 3  # decayed to the random-coset baseline


def test_memory_time_quantum_sector_smoke():
    t2 = instantiate(make_toric(), 2)
    params = GlauberParams.geometric(3.0, 0.5, 2.0, 3, 20, seed=8)
    est = estimate_memory_time(t2, params, DecoderSpec("min_weight"), sector="X")
    assert est.sector == "X"
    assert est.successes[0] >= 18  # cold start barely moves


def test_record_callback_order():
    inst = instantiate(make_ising(1), 3)
    params = GlauberParams(beta=1.0, checkpoints=[1.0, 2.0], n_traj=3, seed=5)
    rows = []
    estimate_memory_time(
        inst, params, DecoderSpec("min_weight"),
        record=lambda traj, t, e, ok: rows.append((traj, t, e, ok)),
    )
    assert [r[0] for r in rows] == [0, 0, 1, 1, 2, 2]
    assert all(r[1] in (1.0, 2.0) for r in rows)


def test_wilson_interval_sanity():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 100)[0] == 0.0
    assert wilson_interval(100, 100)[1] == pytest.approx(1.0)
    lo200, _ = wilson_interval(200, 200)
    assert lo200 > 2 / 3
