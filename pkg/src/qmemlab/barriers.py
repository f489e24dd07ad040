"""Energy landscapes: walks, barriers, self-similar low-energy words,
irreducible-word enumeration, and isoperimetric-expansion checks.

Energies follow the syndrome-weight convention: the energy of a word c
under a check matrix H is the number of nonzero entries of H @ c, and for
quantum sectors the X-sector energy of c is |H_X c| (violated Z-checks).
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import Field
from .laurent import LaurentPoly
from .linalg import (
    BudgetExceeded,
    DenseRREF,
    SparseFqMatrix,
    SparseWord,
    coset_min_weight,
    kernel_basis,
)
from .families import CodeInstance, TransInvCode


@dataclass
class Walk:
    """Ordered single-coordinate changes: (coordinate index, new value)."""

    flips: list

    def __len__(self):
        return len(self.flips)


@dataclass
class BarrierResult:
    value: int
    walk: Walk
    exact: bool
    visited: int
    sector: str = "classical"


def walk_energy(H: SparseFqMatrix, walk: Walk, start: SparseWord | None = None):
    """Energy profile along a walk, maintained by incremental syndrome updates.

    Returns (profile, max); the profile has one entry per visited word,
    starting with the energy of the start word (zero by default).
    """
    fld = H.field
    word: dict = dict(start.support) if start is not None else {}
    syn: dict = {}
    for i, v in word.items():
        for r, m in H.col_adj[i].items():
            s = fld.add(syn.get(r, 0), fld.mul(m, v))
            if s:
                syn[r] = s
            else:
                del syn[r]
    profile = [len(syn)]
    for coord, new in walk.flips:
        if not 0 <= coord < H.cols:
            raise ValueError(f"walk coordinate {coord} out of range [0,{H.cols})")
        old = word.get(coord, 0)
        delta = fld.sub(new, old)
        if delta:
            for r, m in H.col_adj[coord].items():
                s = fld.add(syn.get(r, 0), fld.mul(m, delta))
                if s:
                    syn[r] = s
                else:
                    del syn[r]
        if new:
            word[coord] = new
        else:
            word.pop(coord, None)
        profile.append(len(syn))
    return profile, max(profile)


# -- exact barrier by minimax search -----------------------------------------------


def _sector_setup(inst: CodeInstance, sector: str):
    from .linalg import _sector_matrices, _stabilizer_rref

    if inst.kind == "classical":
        return inst.H, None
    H, _ = _sector_matrices(inst, sector)
    return H, _stabilizer_rref(inst, sector)


def barrier_exact(inst: CodeInstance, sector: str = "classical", budget: int = 1 << 20) -> BarrierResult:
    """Exact energy barrier by bottleneck (minimax) Dijkstra over the
    single-coordinate-move graph from the zero word to any nontrivial target.

    The frontier is ordered by (max energy so far, Hamming weight); the
    weight tie-break keeps witness walks short without affecting the value.
    States are encoded as base-q integers, so the state space q^n must fit
    the visit budget.
    """
    H, stab_rref = _sector_setup(inst, sector)
    fld = inst.field
    n, q = H.cols, fld.q
    if q**n > budget:
        raise BudgetExceeded(
            f"state space q^n = {q**n} exceeds budget {budget}; use barrier_heuristic"
        )
    qpow = [q**i for i in range(n + 1)]
    best: dict = {0: 0}
    parent: dict = {}
    heap = [(0, 0, 0)]  # (bottleneck, weight, state key)
    visited = 0
    while heap:
        bott, wt, key = heapq.heappop(heap)
        if best.get(key, None) is None or bott > best[key]:
            continue
        visited += 1
        if visited > budget:
            raise BudgetExceeded(f"visited more than {budget} states")
        # decode word and syndrome
        word = [0] * n
        k = key
        for i in range(n):
            if k == 0:
                break
            word[i] = k % q
            k //= q
        syn: dict = {}
        for i, v in enumerate(word):
            if v:
                for r, m in H.col_adj[i].items():
                    s = fld.add(syn.get(r, 0), fld.mul(m, v))
                    if s:
                        syn[r] = s
                    else:
                        del syn[r]
        energy = len(syn)
        if energy == 0 and key != 0:
            nontrivial = True
            if stab_rref is not None:
                dense = np.array(word, dtype=np.int16)
                nontrivial = not stab_rref.in_rowspace(dense)
            if nontrivial:
                flips = []
                cur = key
                while cur != 0:
                    prev, coord, val = parent[cur]
                    flips.append((coord, val))
                    cur = prev
                flips.reverse()
                return BarrierResult(bott, Walk(flips), True, visited, sector)
        for i in range(n):
            cur = word[i]
            row_incident = H.col_adj[i]
            for v in range(q):
                if v == cur:
                    continue
                delta = fld.sub(v, cur)
                de = 0
                for r, m in row_incident.items():
                    old = syn.get(r, 0)
                    new = fld.add(old, fld.mul(m, delta))
                    de += (1 if new else 0) - (1 if old else 0)
                e2 = energy + de
                key2 = key + (v - cur) * qpow[i]
                bott2 = max(bott, e2)
                prev_best = best.get(key2)
                if prev_best is None or bott2 < prev_best:
                    best[key2] = bott2
                    parent[key2] = (key, i, v)
                    heapq.heappush(heap, (bott2, wt + (1 if v else -1), key2))
    raise ValueError("no nontrivial target reachable (k = 0?)")


def barrier_heuristic(
    inst: CodeInstance,
    sector: str = "classical",
    targets: list | None = None,
    seed_walks: list | None = None,
    beam: int = 64,
    beam_support_cap: int = 64,
    window: tuple | None = None,
) -> BarrierResult:
    """Upper bound on the barrier: optimize the flip order of known
    nontrivial targets by beam search, seeded with the plain coordinate
    order (which realizes strip-growth walks on lattice instances).

    ``targets`` are SparseWords with zero syndrome and nontrivial class;
    by default the kernel basis (classical) or logical representatives from
    the distance estimator (quantum) are used.  ``seed_walks`` are complete
    walks (e.g. a self-similar build order) evaluated as-is; each must also
    end on a nontrivial target.  ``window`` restricts default targets to
    words supported on sites inside the given box.  Beam reordering is
    skipped above ``beam_support_cap`` flips, where only the seed and
    coordinate orders are rated.
    """
    H, stab_rref = _sector_setup(inst, sector)
    fld = inst.field
    if targets is None and seed_walks is None:
        targets = _default_targets(inst, sector, H, stab_rref)
    best = None

    def consider(value, walk):
        nonlocal best
        if best is None or value < best[0]:
            best = (value, walk)

    for w in seed_walks or ():
        endpoint: dict = {}
        for coord, val in w.flips:
            if val:
                endpoint[coord] = val
            else:
                endpoint.pop(coord, None)
        _check_nontrivial_target(H, stab_rref, SparseWord(H.cols, endpoint))
        _, peak = walk_energy(H, w)
        consider(peak, w)
    if window is not None and targets and inst.coord_sites is not None:
        targets = [
            t
            for t in targets
            if all(
                all(c < w for c, w in zip(inst.coord_sites[i][0], window))
                for i in t.support
            )
        ] or targets
    for t in targets or ():
        _check_nontrivial_target(H, stab_rref, t)
        coords = sorted(t.support)
        lex_walk = Walk([(i, t.support[i]) for i in coords])
        _, lex_max = walk_energy(H, lex_walk)
        consider(lex_max, lex_walk)
        if t.weight <= beam_support_cap:
            value, walk = _beam_order(H, t, beam)
            consider(value, walk)
    if best is None:
        raise ValueError("no targets available for heuristic barrier search")
    return BarrierResult(best[0], best[1], False, 0, sector)


def _check_nontrivial_target(H, stab_rref, word: SparseWord):
    if H.mul_word(word):
        raise ValueError("target word has nonzero syndrome")
    if not word.support:
        raise ValueError("target word is zero")
    if stab_rref is not None and stab_rref.in_rowspace(word.to_dense()):
        raise ValueError("target word is a trivial logical")


def _default_targets(inst, sector, H, stab_rref):
    targets = []
    if inst.kind == "classical":
        for w in kernel_basis(H):
            targets.append(w)
    else:
        from .linalg import distance

        try:
            res = distance(inst, mode="estimate", trials=50, seed=7)
            if res.sector == sector or res.sector == "quantum":
                targets.append(res.witness)
            for s, r in res.details.items():
                pass
        except ValueError:
            pass
        if not targets:
            for w in kernel_basis(H):
                if not stab_rref.in_rowspace(w.to_dense()):
                    targets.append(w)
                    break
    if not targets:
        raise ValueError("no nontrivial target found")
    return targets


def _beam_order(H: SparseFqMatrix, target: SparseWord, beam: int):
    """Beam search over flip orders of the target's support."""
    fld = H.field
    support = sorted(target.support)
    # state: (max_e, cur_e, flipped frozenset, syndrome dict, order list)
    states = [(0, 0, frozenset(), {}, [])]
    for _ in range(len(support)):
        nxt = {}
        for max_e, cur_e, done, syn, order in states:
            for i in support:
                if i in done:
                    continue
                v = target.support[i]
                syn2 = dict(syn)
                de = 0
                for r, m in H.col_adj[i].items():
                    old = syn2.get(r, 0)
                    new = fld.add(old, fld.mul(m, v))
                    de += (1 if new else 0) - (1 if old else 0)
                    if new:
                        syn2[r] = new
                    else:
                        syn2.pop(r, None)
                e2 = cur_e + de
                done2 = done | {i}
                cand = (max(max_e, e2), e2, done2, syn2, order + [(i, v)])
                old = nxt.get(done2)
                if old is None or cand[0] < old[0]:
                    nxt[done2] = cand
        states = sorted(nxt.values(), key=lambda s: (s[0], s[1]))[:beam]
    best = min(states, key=lambda s: s[0])
    return best[0], Walk(best[4])


# -- fractal words and walks -------------------------------------------------------


@dataclass
class FractalWord:
    """Self-similar low-syndrome word c = f^(p^level - 1) of a one-cell 2D code."""

    generator: LaurentPoly
    level: int
    word: LaurentPoly
    syndrome: LaurentPoly
    base_weight: int  # A0 = |f^(p-1)|

    @property
    def weight(self) -> int:
        return self.word.weight


def _check_fractal_generator(f: LaurentPoly):
    if f.dim != 2:
        raise ValueError("fractal generator must be a 2-variable polynomial")
    if any(m not in ((0, 0), (1, 0), (0, 1), (1, 1)) for m in f.support()):
        raise ValueError("fractal generator support must lie in {1, x, y, xy}")
    if f.weight < 2:
        raise ValueError("degenerate generator: needs at least two nonzero coefficients")


def fractal_word(f: LaurentPoly, level: int) -> FractalWord:
    """Word f^(p^level - 1), whose syndrome f^(p^level) has at most 4 terms.

    Weight, syndrome bound, and support box are verified at construction.
    """
    _check_fractal_generator(f)
    if level < 0:
        raise ValueError("level must be >= 0")
    p = f.field.p
    b = f ** (p - 1)
    a0 = b.weight
    word = f ** (p**level - 1)
    syndrome = word * f
    if word.weight != a0**level:
        raise AssertionError(f"weight {word.weight} != {a0}^{level}")
    if syndrome.weight > 4:
        raise AssertionError(f"syndrome weight {syndrome.weight} > 4")
    span = word.exponent_span()
    if any(lo < 0 or hi > p**level - 1 for lo, hi in span):
        raise AssertionError(f"support box {span} escapes [0, {p**level - 1}]^2")
    return FractalWord(f, level, word, syndrome, a0)


def fractal_site_walk(f: LaurentPoly, level: int) -> list:
    """Depth-first build order for the fractal word: a list of
    ((x, y), value) site flips whose sum is f^(p^level - 1).

    Each level splits the word into A0 shifted, scaled copies of the
    previous level (the copies have disjoint supports); the walk completes
    each copy before starting the next, keeping at most 4*level*A0 checks
    violated at any moment (for level >= 1).
    """
    _check_fractal_generator(f)
    fld = f.field
    p = fld.p
    b = f ** (p - 1)
    b_terms = b.sorted_terms()
    flips: list = []

    def emit(lv: int, sx: int, sy: int, scale: int):
        if lv == 0:
            flips.append(((sx, sy), scale))
            return
        step = p ** (lv - 1)
        for (i, j), coeff in b_terms:
            emit(lv - 1, sx + i * step, sy + j * step, fld.mul(scale, fld.frobenius(coeff, lv - 1)))

    emit(level, 0, 0, 1)
    return flips


def symbolic_walk_energy(code: TransInvCode, site_flips: list):
    """Energy profile of per-site flips of a classical code on the infinite
    lattice (no instantiation needed).  Flips are ((site...), value) for
    one-cell codes or ((site...), slot, value) in general."""
    if code.kind != "classical":
        raise ValueError("symbolic walks are defined for classical codes")
    fld = code.fld
    h = code.h  # bits x checks
    word: dict = {}
    syn: dict = {}
    profile = [0]
    for flip in site_flips:
        if len(flip) == 2:
            site, value = flip
            slot = 0
        else:
            site, slot, value = flip
        old = word.get((site, slot), 0)
        delta = fld.sub(value, old)
        if delta:
            for j in range(h.cols):
                for mono, coeff in h.entries[slot][j].terms.items():
                    key = (tuple(s + m for s, m in zip(site, mono)), j)
                    s = fld.add(syn.get(key, 0), fld.mul(coeff, delta))
                    if s:
                        syn[key] = s
                    else:
                        del syn[key]
        if value:
            word[(site, slot)] = value
        else:
            word.pop((site, slot), None)
        profile.append(len(syn))
    return profile, max(profile)


def site_walk_to_walk(site_flips: list, inst: CodeInstance, slot: int = 0) -> Walk:
    """Map per-site flips onto a lattice instance's coordinate indices."""
    flips = []
    for flip in site_flips:
        if len(flip) == 2:
            site, value = flip
            s = slot
        else:
            site, s, value = flip
        flips.append((inst.index_of(site, s), value))
    return Walk(flips)


# -- irreducible-word enumeration -----------------------------------------------------


def _coordinate_components(H: SparseFqMatrix, support: list) -> int:
    """Number of support clusters under shared-check adjacency (union-find)."""
    parent = {i: i for i in support}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    sset = set(support)
    for i in support:
        for r in H.col_adj[i]:
            for j in H.row_adj[r]:
                if j in sset and j != i:
                    ra, rb = find(i), find(j)
                    if ra != rb:
                        parent[ra] = rb
    return len({find(i) for i in support})


def is_irreducible(H: SparseFqMatrix, word: SparseWord, max_support: int = 20) -> bool:
    """Support-partition irreducibility: no split of the support into two
    nonempty parts whose syndromes have disjoint supports.

    Clusters with no shared checks are split immediately; otherwise all
    2-partitions of the support are tried (support size capped).
    """
    support = sorted(word.support)
    if len(support) <= 1:
        return bool(support)
    if _coordinate_components(H, support) > 1:
        return False
    if len(support) > max_support:
        raise BudgetExceeded(
            f"support {len(support)} exceeds the exhaustive split cap {max_support}"
        )
    first, rest = support[0], support[1:]
    for r in range(len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            part1 = {first, *combo}
            if len(part1) == len(support):
                continue
            s1 = H.mul_word({i: word.support[i] for i in part1})
            s2 = H.mul_word({i: word.support[i] for i in support if i not in part1})
            if not (set(s1) & set(s2)):
                return False
    return True


def enumerate_irreducible(
    inst: CodeInstance,
    energy_cap: int,
    weight_cap: int | None = None,
    box: list | None = None,
    collect: bool = False,
):
    """Count irreducible excitations with energy 1..energy_cap, by energy level.

    Words are counted modulo finite-support codewords: two words with the
    same syndrome are the same excitation (on the infinite lattice the
    syndrome determines the word, while a torus kernel would multiply every
    count by the number of codewords).  Zero-syndrome words are excluded
    for the same reason.  ``box`` restricts supports to a coordinate
    subset; ``weight_cap`` bounds the support size (mandatory unless the
    full word space q^n is enumerable).

    Returns (counts dict energy -> count, words list or None).
    """
    H = inst.H if inst.kind == "classical" else inst.H_X
    fld = inst.field
    if box is None:
        coords = list(range(H.cols))
    elif isinstance(box, int):
        if inst.coord_sites is None:
            raise ValueError("integer box needs a lattice instance")
        coords = [
            i for i, (site, _) in enumerate(inst.coord_sites) if all(s < box for s in site)
        ]
    else:
        coords = list(box)
    if weight_cap is None:
        if fld.q ** len(coords) > 1 << 20:
            raise BudgetExceeded("word space too large; pass weight_cap")
        weight_cap = len(coords)
    seen: dict = {}  # energy -> set of syndrome keys
    words = [] if collect else None
    vals = range(1, fld.q)
    for w in range(1, weight_cap + 1):
        for supp in itertools.combinations(coords, w):
            for assign in itertools.product(vals, repeat=w):
                sup = dict(zip(supp, assign))
                syndrome = H.mul_word(sup)
                energy = len(syndrome)
                if not 1 <= energy <= energy_cap:
                    continue
                key = frozenset(syndrome.items())
                bucket = seen.setdefault(energy, set())
                if key in bucket:
                    continue
                sw = SparseWord(H.cols, sup)
                if is_irreducible(H, sw):
                    bucket.add(key)
                    if collect:
                        words.append((energy, sw))
    counts = {e: len(b) for e, b in sorted(seen.items()) if b}
    return counts, words


# -- isoperimetric-expansion checks ---------------------------------------------------


@dataclass
class ExpansionReport:
    lambda_min: float
    witness: SparseWord
    nu: float
    w_max: int
    mode: str  # "exhaustive" | "stochastic"
    tested: int


def _cell_graph(H: SparseFqMatrix) -> list:
    nbrs = [set() for _ in range(H.cols)]
    for row in H.row_adj:
        cells = list(row)
        for a in cells:
            for b in cells:
                if a != b:
                    nbrs[a].add(b)
    return [sorted(s) for s in nbrs]


def expansion_check(
    H: SparseFqMatrix,
    nu: float,
    w_max: int,
    mode: str = "exhaustive",
    roots: list | None = None,
    anchors: list | None = None,
    seed: int = 0,
    steps: int = 200_000,
) -> ExpansionReport:
    """Minimum of |Hc| / |c|^nu over nonzero words with |c| <= w_max.

    Exhaustive mode enumerates connected supports only (cells adjacent when
    they share a check): for nu <= 1 the ratio of a check-disjoint union is
    at least the smaller component ratio, so the minimum over all words is
    attained on a connected one.  ``roots`` restricts the enumeration to
    sets containing one of the given cells - valid on translation-invariant
    instances where one site's cells reach every translation class.
    ``anchors`` gives full control as (root, forbidden cell set) pairs;
    see ``torus_expansion_anchors`` for the exact-quotient variant.

    Stochastic mode runs fixed-seed simulated annealing on the ratio and
    reports an upper-bound certificate only.
    """
    if mode == "exhaustive":
        if nu > 1:
            raise ValueError("exhaustive connected enumeration requires nu <= 1")
        if anchors is None:
            if roots is not None:
                anchors = [(r, frozenset()) for r in roots]
            else:
                anchors = [(r, frozenset(range(r))) for r in range(H.cols)]
        return _expansion_exhaustive(H, nu, w_max, anchors)
    if mode != "stochastic":
        raise ValueError(f"mode must be 'exhaustive' or 'stochastic', got {mode!r}")
    return _expansion_anneal(H, nu, w_max, seed, steps)


def torus_expansion_anchors(inst: CodeInstance, w_max: int) -> list:
    """Translation-quotient anchors for a torus instance: each connected-set
    class is enumerated exactly once, pinned so its lexicographically least
    cell (in centered relative coordinates) sits at the origin site.
    Requires every lattice length > 2 * w_max so sets cannot self-wrap."""
    if inst.L is None or inst.boundary != "torus":
        raise ValueError("quotient anchors need a torus lattice instance")
    if min(inst.L) <= 2 * w_max:
        raise ValueError(f"need min(L) > {2 * w_max} for an exact quotient at w_max={w_max}")
    n_site = inst.n_site
    anchors = []
    for slot in range(n_site):
        forbidden = set(range(slot))
        for idx, (site, _) in enumerate(inst.coord_sites):
            rel = tuple(((s + l // 2) % l) - l // 2 for s, l in zip(site, inst.L))
            if rel < (0,) * len(site):
                forbidden.add(idx)
        anchors.append((slot, frozenset(forbidden)))
    return anchors


def _expansion_exhaustive(H: SparseFqMatrix, nu: float, w_max: int, anchors) -> ExpansionReport:
    fld = H.field
    q = fld.q
    nbrs = _cell_graph(H)
    best = [math.inf, None]
    tested = [0]
    word: dict = {}
    syn: dict = {}
    inv_pows = [0.0] + [1.0 / (w**nu) for w in range(1, w_max + 1)]

    def set_cell(i: int, value: int) -> int:
        delta = fld.sub(value, word.get(i, 0)) if q > 2 else value ^ word.get(i, 0)
        de = 0
        for r, m in H.col_adj[i].items():
            old = syn.get(r, 0)
            new = fld.add(old, fld.mul(m, delta))
            de += (1 if new else 0) - (1 if old else 0)
            if new:
                syn[r] = new
            else:
                syn.pop(r, None)
        if value:
            word[i] = value
        else:
            word.pop(i, None)
        return de

    def visit():
        tested[0] += 1
        ratio = len(syn) * inv_pows[len(word)]
        if ratio < best[0]:
            best[0] = ratio
            best[1] = SparseWord(H.cols, dict(word))

    def grow(frontier: list, forbidden: set):
        for idx in range(len(frontier)):
            u = frontier[idx]
            new_forbidden = forbidden | set(frontier[:idx])
            fresh = [
                v
                for v in nbrs[u]
                if v not in word and v not in new_forbidden and v not in frontier[idx + 1 :]
            ]
            nxt = frontier[idx + 1 :] + fresh
            for val in range(1, q):
                set_cell(u, val)
                visit()
                if len(word) < w_max:
                    grow(nxt, new_forbidden | {u})
                set_cell(u, 0)

    for r, forbidden in anchors:
        grow([r], set(forbidden))
    if best[1] is None:
        raise ValueError("no nonzero word tested")
    return ExpansionReport(best[0], best[1], nu, w_max, "exhaustive", tested[0])


def _expansion_anneal(H: SparseFqMatrix, nu: float, w_max: int, seed: int, steps: int) -> ExpansionReport:
    fld = H.field
    rng = np.random.default_rng(seed)
    n, q = H.cols, fld.q
    word: dict = {int(rng.integers(n)): 1 if q == 2 else int(rng.integers(1, q))}

    def ratio_of(w):
        if not w:
            return math.inf
        return len(H.mul_word(w)) / (len(w) ** nu)

    cur = ratio_of(word)
    best, best_w = cur, dict(word)
    temp = 1.0
    cooling = (1e-3 / 1.0) ** (1.0 / steps)  # geometric schedule ending at 1e-3
    for _ in range(steps):
        cand = dict(word)
        move = rng.integers(3)
        i = int(rng.integers(n))
        if move == 0 and len(cand) < w_max:
            cand[i] = 1 if q == 2 else int(rng.integers(1, q))
        elif move == 1 and len(cand) > 1:
            keys = sorted(cand)
            del cand[keys[int(rng.integers(len(keys)))]]
        else:
            if q == 2:
                if i in cand and len(cand) > 1:
                    del cand[i]
                elif len(cand) < w_max:
                    cand[i] = 1
            else:
                cand[i] = int(rng.integers(1, q))
                if len(cand) > w_max:
                    continue
        r2 = ratio_of(cand)
        if r2 <= cur or rng.random() < math.exp(-(r2 - cur) / max(temp, 1e-9)):
            word, cur = cand, r2
            if cur < best:
                best, best_w = cur, dict(word)
        temp *= cooling
    return ExpansionReport(best, SparseWord(n, best_w), nu, w_max, "stochastic", steps)


@dataclass
class QuantumExpansionReport:
    direction: str  # "coboundary" | "boundary"
    lambda_min: float
    witness: SparseWord
    nu: float
    w_max: int
    exact_cosets: bool
    tested: int


def quantum_expansion_check(
    delta0: SparseFqMatrix,
    delta1: SparseFqMatrix,
    nu: float,
    w_max: int,
    words: list | None = None,
    coset_budget: int = 1 << 16,
) -> list:
    """Small-set expansion of a chain complex X(0) -> X(1) -> X(2).

    For each middle-space word c with nonzero reduced weight, the
    coboundary direction rates |delta1 c| against min_{b in im delta0}
    |c + b| and the boundary direction rates |delta0^T c| against the
    quotient by im delta1^T.  Words with string-like logicals drive the
    minimum to zero, which the report surfaces rather than hiding.

    Returns one QuantumExpansionReport per direction.
    """
    if delta1.matmul(delta0).is_zero() is False:
        raise ValueError("not a chain complex: delta1 @ delta0 != 0")
    reports = []
    for direction, op, quot in (
        ("coboundary", delta1, delta0.transpose()),
        ("boundary", delta0.transpose(), delta1),
    ):
        best = math.inf
        best_w = None
        exact_all = True
        tested = 0
        cand = words
        if cand is None:
            cand = _connected_words(op, w_max)
        for sw in cand:
            red, _, exact = coset_min_weight(quot, sw, coset_budget)
            exact_all = exact_all and exact
            if red == 0:
                continue
            tested += 1
            ratio = len(op.mul_word(sw)) / (red**nu)
            if ratio < best:
                best, best_w = ratio, sw
        if best_w is None:
            raise ValueError(f"no word with nonzero reduced weight tested ({direction})")
        reports.append(
            QuantumExpansionReport(direction, best, best_w, nu, w_max, exact_all, tested)
        )
    return reports


def _connected_words(H: SparseFqMatrix, w_max: int):
    """All nonzero words with connected support of size <= w_max."""
    q = H.field.q
    nbrs = _cell_graph(H)
    out = []
    word: dict = {}

    def grow(frontier, forbidden):
        for idx in range(len(frontier)):
            u = frontier[idx]
            new_forbidden = forbidden | set(frontier[:idx])
            fresh = [
                v
                for v in nbrs[u]
                if v not in word and v not in new_forbidden and v not in frontier[idx + 1 :]
            ]
            nxt = frontier[idx + 1 :] + fresh
            for val in range(1, q):
                word[u] = val
                out.append(SparseWord(H.cols, dict(word)))
                if len(word) < w_max:
                    grow(nxt, new_forbidden | {u})
                del word[u]

    for r in range(H.cols):
        grow([r], set(range(r)))
    return out


# -- walk files ------------------------------------------------------------------------


def save_walk(walk: Walk, path):
    with open(path, "w") as fh:
        for coord, val in walk.flips:
            fh.write(f"{coord} {val}\n")


def load_walk(path) -> Walk:
    flips = []
    with open(path) as fh:
        for line in fh:
            if line.strip():
                c, v = line.split()
                flips.append((int(c), int(v)))
    return Walk(flips)
