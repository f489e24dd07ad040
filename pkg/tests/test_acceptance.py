"""End-to-end verification suite.

Each test implements one acceptance check at its stated tolerance and
prints a single PASS line with the measured wall-clock time.  Run with
``pytest tests/test_acceptance.py -v -s`` to see the lines as they pass.
"""

import itertools
import json
import math
import time

import numpy as np
import pytest

from qmemlab.fields import field_make
from qmemlab.laurent import poly_parse, random_poly
from qmemlab.families import instantiate, make_bipartite_product, make_classical_grid, \
    make_haah_family, make_ising, make_toric, validate_css
from qmemlab.linalg import dense_fq_matmul, distance, quantum_dimension, rank
from qmemlab.barriers import barrier_exact, expansion_check, fractal_site_walk, \
    fractal_word, symbolic_walk_energy, torus_expansion_anchors
from qmemlab.dynamics import DecoderSpec, GlauberParams, empirical_occupancy, \
    estimate_memory_time, exact_gibbs, make_decoder, rate, sector_adjacency, \
    total_variation, _syndrome_dense
from qmemlab.fractal import carpet, hypergraph_product
from qmemlab.experiments import run_sweep

CUBIC_MONOS = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
QS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)]


def _stamp(name, t0):
    print(f"\nACCEPTANCE {name}: PASS ({time.time() - t0:.1f}s)")


def _instance_commutes(inst) -> bool:
    hx = inst.H_X.to_dense()
    hzt = inst.H_Z.to_dense().T
    return not dense_fq_matmul(hx, hzt, inst.field).any()


def test_css_validity_transfer():
    t0 = time.time()
    rng = np.random.default_rng(20240501)
    for trial in range(200):
        fld = field_make(*QS[trial % len(QS)])
        f = random_poly(fld, 3, CUBIC_MONOS, rng)
        g = random_poly(fld, 3, CUBIC_MONOS, rng)
        code = make_haah_family(f, g)
        assert validate_css(code).valid
        for L in (2, 3, 4):
            assert _instance_commutes(instantiate(code, L))
    for trial in range(50):
        fld = field_make(*QS[trial % len(QS)])
        fm = {(i, j): random_poly(fld, 3, CUBIC_MONOS, rng) for i in (1, 2) for j in (1, 2)}
        gm = {(i, j): random_poly(fld, 3, CUBIC_MONOS, rng) for i in (1, 2) for j in (1, 2)}
        code = make_bipartite_product(2, 2, fm, gm)
        assert validate_css(code).valid
        for L in (2, 3, 4):
            assert _instance_commutes(instantiate(code, L))
    assert time.time() - t0 < 120
    _stamp("css-validity-transfer", t0)


def test_self_similar_word_claims():
    t0 = time.time()
    F2 = field_make(2)
    gens = [poly_parse("1+x+y", F2, 2)]
    rng = np.random.default_rng(7)
    monos = [(0, 0), (1, 0), (0, 1), (1, 1)]
    while len(gens) < 21:
        fld = field_make(2) if len(gens) % 2 else field_make(3)
        f = random_poly(fld, 2, monos, rng)
        if f.weight >= 2:
            gens.append(f)
    for f in gens:
        code = make_classical_grid(1, {(1, 1): f})
        a0 = (f ** (f.field.p - 1)).weight
        for level in range(6):
            fw = fractal_word(f, level)  # verifies weight/syndrome/support
            assert fw.weight == a0**level
            assert fw.syndrome.weight <= 4
            flips = fractal_site_walk(f, level)
            _, peak = symbolic_walk_energy(code, flips)
            bound = 4 * level * a0 if level >= 1 else 4
            assert peak <= bound, (str(f), level, peak, bound)
    assert time.time() - t0 < 60
    _stamp("self-similar-word-claims", t0)


def test_heat_bath_correctness():
    t0 = time.time()
    for e_from in range(9):
        for e_to in range(9):
            for beta in (0.0, 0.3, 0.5, 1.0, 1.7, 2.5):
                lhs = rate(e_from, e_to, beta) * math.exp(-beta * e_from)
                rhs = rate(e_to, e_from, beta) * math.exp(-beta * e_to)
                assert abs(lhs - rhs) < 1e-12
    inst = instantiate(make_ising(1), 4)  # 4-bit toy code, 16 states
    for beta in (0.5, 1.0, 2.0):
        p_exact = exact_gibbs(inst, beta)
        p_emp = empirical_occupancy(inst, beta, 3e5, seed=5, burn_in=1e3)
        tv = total_variation(p_exact, p_emp)
        assert tv < 0.02, (beta, tv)
    assert time.time() - t0 < 300
    _stamp("heat-bath-correctness", t0)


def test_memory_time_semantics():
    t0 = time.time()
    # decoder equivariance: 10^4 random (word, codeword) pairs per decoder
    inst = instantiate(make_ising(1), 8)
    adj = sector_adjacency(inst)
    decoders = [
        make_decoder(inst.H, DecoderSpec("min_weight")),
        make_decoder(inst.H, DecoderSpec("lookup", w_max=2)),
        make_decoder(inst.H, DecoderSpec("greedy")),
    ]
    rng = np.random.default_rng(424242)
    ones = np.ones(inst.n, dtype=np.int16)
    for dec in decoders:
        for _ in range(10_000):
            c = rng.integers(0, 2, inst.n).astype(np.int16)
            z = ones if rng.random() < 0.5 else np.zeros(inst.n, dtype=np.int16)
            s1 = _syndrome_dense(c, adj)
            s2 = _syndrome_dense((c + z) % 2, adj)
            assert np.array_equal(s1, s2)
            a, b = dec.decode(s1), dec.decode(s2)
            assert (a is None and b is None) or np.array_equal(a, b)

    # 1D chain at beta = 2: memory time does not scale with L
    estimates = {}
    for L in (4, 16):
        chain = instantiate(make_ising(1), L)
        params = GlauberParams.geometric(2.0, 1.0, math.sqrt(2), 24, n_traj=300, seed=99)
        estimates[L] = estimate_memory_time(chain, params, DecoderSpec("min_weight"))
        assert not estimates[L].censored
    ratio = estimates[16].t_mem_point / estimates[4].t_mem_point
    assert 1 / 3 <= ratio <= 3, ratio

    # 2D at beta = 1: memory time grows with L, non-overlapping 95% bounds
    i4 = instantiate(make_ising(2), 4)
    p4 = GlauberParams.geometric(1.0, 1.0, 2.0, 17, n_traj=200, seed=7)
    est4 = estimate_memory_time(i4, p4, DecoderSpec("min_weight"))
    assert not est4.censored
    i8 = instantiate(make_ising(2), 8)
    p8 = GlauberParams.geometric(1.0, 1.0, 2.0, 13, n_traj=200, seed=7)
    est8 = estimate_memory_time(i8, p8, DecoderSpec("min_weight"))
    assert est8.t_mem_point > est4.t_mem_point
    assert est8.t_mem_conservative > est4.t_mem_optimistic, (
        est4.t_mem_optimistic, est8.t_mem_conservative,
    )
    assert time.time() - t0 < 1800
    _stamp("memory-time-semantics", t0)


def _naive_quantum_distance_dense(inst):
    """Full 2^n enumeration oracle over both sectors (vectorized)."""
    from qmemlab.linalg import _stabilizer_rref

    n = inst.n
    words = ((np.arange(1 << n, dtype=np.uint32)[:, None] >> np.arange(n)) & 1).astype(np.int8)
    best = {}
    for sector, H in (("X", inst.H_X), ("Z", inst.H_Z)):
        syn = words @ H.to_dense().T.astype(np.int8) % 2
        codewords = words[~syn.any(axis=1)]
        rref = _stabilizer_rref(inst, sector)
        dmin = None
        for w in codewords:
            wt = int(w.sum())
            if wt == 0 or (dmin is not None and wt >= dmin):
                continue
            if not rref.in_rowspace(w.astype(np.int16)):
                dmin = wt
        best[sector] = dmin
    return best


def _barrier_relaxation_oracle(inst):
    """Independent minimax oracle: fixed-point relaxation over all states."""
    H = inst.H
    n = H.cols
    energies = np.zeros(1 << n, dtype=np.int32)
    words = ((np.arange(1 << n, dtype=np.uint32)[:, None] >> np.arange(n)) & 1).astype(np.int8)
    syn = words @ H.to_dense().T.astype(np.int8) % 2
    energies = syn.astype(bool).sum(axis=1)
    best = np.full(1 << n, 1 << 30, dtype=np.int32)
    best[0] = 0
    changed = True
    while changed:
        changed = False
        for a in range(1 << n):
            if best[a] >= (1 << 30):
                continue
            for i in range(n):
                b = a ^ (1 << i)
                cand = max(best[a], energies[b])
                if cand < best[b]:
                    best[b] = cand
                    changed = True
    targets = [a for a in range(1, 1 << n) if energies[a] == 0]
    return int(min(best[a] for a in targets))


def test_parameter_oracles():
    t0 = time.time()
    t3 = instantiate(make_toric(), 3)
    assert quantum_dimension(t3) == 2
    res = distance(t3)
    assert res.d == 3 and res.exact
    oracle = _naive_quantum_distance_dense(t3)
    assert res.details["d_x"] == oracle["X"] and res.details["d_z"] == oracle["Z"]

    i23 = instantiate(make_ising(2), 3)
    assert i23.n - rank(i23.H) == 1
    r = distance(i23)
    assert r.d == 9 and r.exact
    # the only nontrivial codeword is all-ones
    assert sorted(r.witness.support) == list(range(9))

    for L in range(3, 9):
        chain = instantiate(make_ising(1), L)
        res = barrier_exact(chain)
        assert res.value == 2
        if L <= 6:
            assert _barrier_relaxation_oracle(chain) == 2
    assert time.time() - t0 < 300
    _stamp("parameter-oracles", t0)


def test_expansion_dichotomy():
    t0 = time.time()
    # squares are extremal: lambda_min over |c| <= 12 is exactly 4
    ising = instantiate(make_ising(2), 25)
    anchors = torus_expansion_anchors(ising, 12)
    rep = expansion_check(ising.H, 0.5, 12, anchors=anchors)
    assert rep.lambda_min == pytest.approx(4.0, abs=1e-12)

    # one-cell self-similar family: the expansion ratio collapses
    F2 = field_make(2)
    f = poly_parse("1+x+y", F2, 2)
    code = make_classical_grid(1, {(1, 1): f})
    ratios = []
    for level in range(1, 6):
        side = 2**level
        inst = instantiate(code, side)  # periodic: the 4 syndrome corners identify
        word = {inst.index_of(m, 0): v for m, v in fractal_word(f, level).word.terms.items()}
        ratios.append(len(inst.H.mul_word(word)) / (len(word) ** 0.5))
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[-1] < 0.1, ratios
    assert time.time() - t0 < 300
    _stamp("expansion-dichotomy", t0)


def test_carpet_and_product_structure():
    t0 = time.time()
    for A in range(3, 9):
        for level in range(5):
            assert carpet(A, level).count == (4 * A - 4) ** level

    # product of two length-3 cycle codes is the L=3 toric instance
    from qmemlab.linalg import SparseFqMatrix
    from .test_fractal import hgp_to_toric_maps

    F2 = field_make(2)
    cyc = instantiate(make_ising(1), 3).H
    cc = hypergraph_product(cyc, cyc)
    qi = cc.quantum_instance()
    toric = instantiate(make_toric(), 3)
    assert quantum_dimension(qi) == 2
    qmap, xmap, zmap = hgp_to_toric_maps(3, toric)
    HX = SparseFqMatrix(toric.H_X.rows, toric.n, F2)
    for r, row in enumerate(qi.H_X.row_adj):
        for c, v in row.items():
            HX.set_entry(zmap[r], qmap[c], v)
    HZ = SparseFqMatrix(toric.H_Z.rows, toric.n, F2)
    for r, row in enumerate(qi.H_Z.row_adj):
        for c, v in row.items():
            HZ.set_entry(xmap[r], qmap[c], v)
    assert HX == toric.H_X and HZ == toric.H_Z

    rng = np.random.default_rng(55)
    fields = [field_make(2), field_make(3), field_make(5), field_make(7), field_make(2, 2)]
    for trial in range(50):
        fld = fields[trial % len(fields)]
        m1, n1, m2, n2 = (int(x) for x in rng.integers(1, 6, 4))
        H1 = SparseFqMatrix.from_dense(rng.integers(0, fld.q, (m1, n1)), fld)
        H2 = SparseFqMatrix.from_dense(rng.integers(0, fld.q, (m2, n2)), fld)
        ccr = hypergraph_product(H1, H2)
        assert ccr.delta1.matmul(ccr.delta0).is_zero()
    assert time.time() - t0 < 120
    _stamp("carpet-and-product-structure", t0)


def test_sweep_harness_completes(tmp_path):
    t0 = time.time()
    cfg = {
        "code": {"family": "classical_grid", "field": {"p": 2, "e": 2},
                 "dim": 2, "m": 2, "draw_seed": 314159},
        "L": [3, 4, 5],
        "beta": [0.5, 0.8, 1.1, 1.4],
        "N": 100,
        "seed": 2718,
        "decoder": {"kind": "greedy"},
        "checkpoints": {"t0": 1.0, "ratio": 2.0, "count": 13},
        "budget_s": 14400.0,
    }
    out = tmp_path / "sweep"
    result = run_sweep(cfg, out)
    assert len(result["estimates"]) == 12
    for est in result["estimates"]:
        assert len(est["wilson_lo"]) == 13 and len(est["wilson_hi"]) == 13
    for beta in cfg["beta"]:
        assert str(beta) in result["fits"]
    fit_values = [
        v for v in result["fits"].values() if v.get("exponential") or v.get("polynomial")
    ]
    assert fit_values, "no beta produced enough uncensored points to fit"
    for name in ("records.jsonl", "estimates.json", "success_curves.csv",
                 "scaling_fit.json", "manifest.json"):
        assert (out / name).exists()
    records = [json.loads(line) for line in (out / "records.jsonl").read_text().splitlines()]
    assert len(records) == 12 * 100 * 13
    assert time.time() - t0 < 14400
    _stamp("sweep-harness-completes", t0)
