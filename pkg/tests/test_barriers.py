"""Walks, exact/heuristic barriers, self-similar words, irreducible
enumeration, and expansion checks."""

import itertools
import math

import numpy as np
import pytest

from qmemlab.fields import field_make
from qmemlab.laurent import LaurentPoly, poly_parse
from qmemlab.families import instantiate, make_classical_grid, make_ising, make_toric
from qmemlab.fractal import hypergraph_product
from qmemlab.linalg import BudgetExceeded, SparseWord
from qmemlab.barriers import (
    Walk,
    barrier_exact,
    barrier_heuristic,
    enumerate_irreducible,
    expansion_check,
    fractal_site_walk,
    fractal_word,
    is_irreducible,
    load_walk,
    quantum_expansion_check,
    save_walk,
    site_walk_to_walk,
    symbolic_walk_energy,
    torus_expansion_anchors,
    walk_energy,
)

F2 = field_make(2)
F3 = field_make(3)


def test_walk_energy_basics():
    inst = instantiate(make_ising(1), 5)
    profile, peak = walk_energy(inst.H, Walk([]))
    assert profile == [0] and peak == 0
    profile, peak = walk_energy(inst.H, Walk([(i, 1) for i in range(5)]))
    assert peak == 2 and profile[-1] == 0
    with pytest.raises(ValueError):
        walk_energy(inst.H, Walk([(99, 1)]))


def test_walk_energy_single_flip_2d():
    inst = instantiate(make_ising(2), 4)
    _, peak = walk_energy(inst.H, Walk([(0, 1)]))
    assert peak == 4


def test_walk_energy_with_start():
    inst = instantiate(make_ising(1), 4)
    start = SparseWord(4, {0: 1})
    profile, _ = walk_energy(inst.H, Walk([(1, 1)]), start=start)
    assert profile[0] == 2


def barrier_oracle(inst):
    """Independent full-state-space relaxation (Bellman-style) oracle."""
    fld = inst.field
    H = inst.H
    n, q = H.cols, fld.q
    energies = {}
    for assign in itertools.product(range(q), repeat=n):
        w = {i: v for i, v in enumerate(assign) if v}
        energies[assign] = len(H.mul_word(w))
    best = {a: math.inf for a in energies}
    zero = (0,) * n
    best[zero] = 0
    changed = True
    while changed:
        changed = False
        for a in energies:
            if best[a] is math.inf:
                continue
            for i in range(n):
                for v in range(q):
                    if v == a[i]:
                        continue
                    b = a[:i] + (v,) + a[i + 1 :]
                    cand = max(best[a], energies[b])
                    if cand < best[b]:
                        best[b] = cand
                        changed = True
    return min(best[a] for a in energies if any(a) and energies[a] == 0)


@pytest.mark.parametrize("L", [3, 4, 5, 6, 7, 8])
def test_barrier_ising_chain_is_two(L):
    res = barrier_exact(instantiate(make_ising(1), L))
    assert res.value == 2 and res.exact
    # witness walk replays to the stated value
    inst = instantiate(make_ising(1), L)
    profile, peak = walk_energy(inst.H, res.walk)
    assert peak == res.value and profile[-1] == 0


def test_barrier_matches_oracle_ising2():
    inst = instantiate(make_ising(2), 3)
    res = barrier_exact(inst)
    assert res.value == barrier_oracle(instantiate(make_ising(2), 3))


def test_barrier_budget():
    with pytest.raises(BudgetExceeded):
        barrier_exact(instantiate(make_ising(2), 4), budget=100)


def test_barrier_quantum_toric():
    t2 = instantiate(make_toric(), 2)
    rx = barrier_exact(t2, "X", budget=1 << 18)
    assert rx.exact and rx.value >= 1
    # the endpoint of the witness is a nontrivial logical
    from qmemlab.linalg import is_trivial_logical

    word = {}
    for c, v in rx.walk.flips:
        word[c] = v
    sw = SparseWord(t2.n, word)
    assert not t2.H_X.mul_word(sw)
    assert not is_trivial_logical(t2, "X", sw)


def test_heuristic_bounds_exact():
    inst = instantiate(make_ising(2), 3)
    exact = barrier_exact(inst).value
    heur = barrier_heuristic(inst)
    assert not heur.exact
    assert heur.value >= exact


def test_heuristic_strip_growth_bound():
    inst = instantiate(make_ising(2), 6)
    res = barrier_heuristic(inst)
    assert res.value <= 2 * 6 + 2
    profile, peak = walk_energy(inst.H, res.walk)
    assert peak == res.value


def test_fractal_word_examples():
    f = poly_parse("1+x+y", F2, 2)
    fw1 = fractal_word(f, 1)
    assert fw1.weight == 3 and fw1.base_weight == 3
    assert fw1.word == f
    fw2 = fractal_word(f, 2)
    assert fw2.word == f**3 and fw2.weight == 9
    assert fw2.syndrome == poly_parse("1+x^4+y^4", F2, 2)
    fw0 = fractal_word(f, 0)
    assert fw0.weight == 1 and fw0.word == LaurentPoly.one(F2, 2)


def test_fractal_word_rejects_degenerate():
    with pytest.raises(ValueError):
        fractal_word(poly_parse("x", F2, 2), 1)
    with pytest.raises(ValueError):
        fractal_word(poly_parse("1+x^2", F2, 2), 1)


def test_fractal_self_similarity():
    rng = np.random.default_rng(31)
    from qmemlab.laurent import random_poly

    monos = [(0, 0), (1, 0), (0, 1), (1, 1)]
    for fld in (F2, F3):
        f = random_poly(fld, 2, monos, rng)
        while f.weight < 2:
            f = random_poly(fld, 2, monos, rng)
        p = fld.p
        for level in (0, 1, 2):
            c_next = fractal_word(f, level + 1).word
            c = fractal_word(f, level).word
            scale = (f ** (p - 1)).frobenius_power(level)
            assert c_next == scale * c
            # the shifted copies do not overlap
            assert c_next.weight == scale.weight * c.weight


def test_fractal_walk_reaches_word_with_low_energy():
    f = poly_parse("1+x+y", F2, 2)
    code = make_classical_grid(1, {(1, 1): f})
    for level in (0, 1, 3):
        flips = fractal_site_walk(f, level)
        assert len(flips) == 3**level
        profile, peak = symbolic_walk_energy(code, flips)
        assert profile[-1] == fractal_word(f, level).syndrome.weight
        bound = 4 * max(level, 1) * 3
        assert peak <= bound
        built = {}
        for site, v in flips:
            assert site not in built
            built[site] = v
        assert LaurentPoly(F2, 2, built) == fractal_word(f, level).word


def test_site_walk_maps_onto_instance():
    f = poly_parse("1+x+y", F2, 2)
    code = make_classical_grid(1, {(1, 1): f})
    inst = instantiate(code, 16)  # no wraparound for level 2 supports
    flips = fractal_site_walk(f, 2)
    walk = site_walk_to_walk(flips, inst)
    profile, peak = walk_energy(inst.H, walk)
    sym_profile, sym_peak = symbolic_walk_energy(code, flips)
    assert profile == sym_profile and peak == sym_peak


def test_barrier_exact_below_user_walks():
    inst = instantiate(make_ising(1), 6)
    exact = barrier_exact(inst).value
    strip = Walk([(i, 1) for i in range(6)])
    _, peak = walk_energy(inst.H, strip)
    assert exact <= peak


def test_irreducible_individual_words():
    inst = instantiate(make_ising(2), 5)
    single = SparseWord(inst.n, {inst.index_of((2, 2), 0): 1})
    assert is_irreducible(inst.H, single)
    far_pair = SparseWord(
        inst.n, {inst.index_of((0, 0), 0): 1, inst.index_of((2, 2), 0): 1}
    )
    assert not is_irreducible(inst.H, far_pair)
    domino = SparseWord(
        inst.n, {inst.index_of((2, 2), 0): 1, inst.index_of((2, 3), 0): 1}
    )
    assert is_irreducible(inst.H, domino)


def test_irreducible_counts_ising():
    inst = instantiate(make_ising(2), 3)
    counts, words = enumerate_irreducible(inst, energy_cap=4, collect=True)
    assert counts == {4: 9}
    assert len(words) == 9 and all(w.weight in (1, 8) for _, w in words)
    counts6, _ = enumerate_irreducible(inst, energy_cap=6)
    assert counts6[4] == 9
    assert counts6.get(6, 0) > 0  # dominoes appear at energy 6


def test_irreducible_needs_weight_cap_for_big_instances():
    inst = instantiate(make_ising(2), 6)
    with pytest.raises(BudgetExceeded):
        enumerate_irreducible(inst, energy_cap=4)
    counts, _ = enumerate_irreducible(inst, energy_cap=4, weight_cap=1)
    assert counts == {4: 36}


def test_expansion_single_site_and_blocks():
    inst = instantiate(make_ising(2), 8)
    rep1 = expansion_check(inst.H, 0.5, 1)
    assert rep1.lambda_min == 4.0
    rep9 = expansion_check(inst.H, 0.5, 9, roots=[0])
    assert abs(rep9.lambda_min - 4.0) < 1e-12
    assert rep9.witness.weight in (1, 4, 9)


def test_expansion_exhaustive_matches_naive_oracle():
    inst = instantiate(make_ising(2), 4)  # 2^16 words, full oracle feasible
    fld = inst.field
    best = math.inf
    for bits in range(1, 2**inst.n):
        w = {i: 1 for i in range(inst.n) if (bits >> i) & 1}
        ratio = len(inst.H.mul_word(w)) / math.sqrt(len(w))
        best = min(best, ratio)
    rep = expansion_check(inst.H, 0.5, inst.n)
    assert abs(rep.lambda_min - best) < 1e-12


def test_expansion_quotient_requires_room():
    inst = instantiate(make_ising(2), 6)
    with pytest.raises(ValueError):
        torus_expansion_anchors(inst, 4)


def test_expansion_fractal_family_ratio_decays():
    f = poly_parse("1+x+y", F2, 2)
    code = make_classical_grid(1, {(1, 1): f})
    ratios = []
    for level in (1, 2, 3):
        inst = instantiate(code, 2**level)  # syndrome corners identify
        word = {}
        for (x, y), v in fractal_word(f, level).word.terms.items():
            word[inst.index_of((x, y), 0)] = v
        ratio = len(inst.H.mul_word(word)) / (len(word) ** 0.5)
        ratios.append(ratio)
    assert ratios == sorted(ratios, reverse=True)
    assert ratios[-1] < 0.5


def test_expansion_stochastic_is_upper_bound():
    inst = instantiate(make_ising(2), 6)
    rep = expansion_check(inst.H, 0.5, 9, mode="stochastic", seed=3, steps=20000)
    assert rep.mode == "stochastic"
    assert rep.lambda_min >= 4.0 - 1e-12  # true minimum is 4


def test_quantum_expansion_toric():
    cyc = instantiate(make_ising(1), 2).H
    cc = hypergraph_product(cyc, cyc)
    reports = quantum_expansion_check(cc.delta0, cc.delta1, 0.5, 2)
    by_dir = {r.direction: r for r in reports}
    assert set(by_dir) == {"coboundary", "boundary"}
    for r in reports:
        assert r.tested > 0 and r.lambda_min >= 0


def test_quantum_expansion_flags_string_logicals():
    cyc3 = instantiate(make_ising(1), 3).H
    cc = hypergraph_product(cyc3, cyc3)
    # a non-contractible loop has empty coboundary but nonzero reduced weight
    qi = cc.quantum_instance()
    loop = None
    from qmemlab.linalg import kernel_basis, coset_min_weight

    for w in kernel_basis(cc.delta1):
        red, _, _ = coset_min_weight(cc.delta0.transpose(), w)
        if red > 0:
            loop = w
            break
    assert loop is not None
    reports = quantum_expansion_check(cc.delta0, cc.delta1, 0.5, 3, words=[loop])
    cob = [r for r in reports if r.direction == "coboundary"][0]
    assert cob.lambda_min == 0.0


def test_walk_files_round_trip(tmp_path):
    w = Walk([(3, 1), (5, 2), (3, 0)])
    path = tmp_path / "walk.txt"
    save_walk(w, path)
    assert load_walk(path).flips == w.flips


def test_heuristic_seeded_with_self_similar_walk():
    # on an open box the level-3 word is a genuine codeword; its build
    # order certifies a low barrier upper bound
    from qmemlab.families import OPEN

    fld = field_make(3)
    f = poly_parse("1+x+y", fld, 2)
    code = make_classical_grid(1, {(1, 1): f})
    inst = instantiate(code, 27, OPEN)
    a0 = (f ** 2).weight
    walk = site_walk_to_walk(fractal_site_walk(f, 3), inst)
    res = barrier_heuristic(inst, seed_walks=[walk], targets=[])
    assert res.value <= 4 * 3 * a0
    assert not res.exact


def test_heuristic_rejects_trivial_seed_walk():
    t2 = instantiate(make_toric(), 2)
    stab_row = sorted(t2.H_Z.row_adj[0].items())
    walk = Walk([(c, v) for c, v in stab_row])
    with pytest.raises(ValueError):
        barrier_heuristic(t2, "X", seed_walks=[walk], targets=[])


def test_irreducible_box_restriction():
    inst = instantiate(make_ising(2), 6)
    counts, _ = enumerate_irreducible(inst, energy_cap=4, weight_cap=2, box=2)
    assert counts == {4: 4}  # the four single sites inside the 2x2 box
