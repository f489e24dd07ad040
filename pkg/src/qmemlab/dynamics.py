"""Continuous-time heat-bath (Glauber) dynamics over code instances,
syndrome decoders, and the memory-time estimator.

The master-equation rates Gamma(c -> c') = e^{-beta E'} / (e^{-beta E} +
e^{-beta E'}) over single-coordinate moves are realized exactly by
uniformization: events arrive at rate n(q-1), each proposing a uniformly
random coordinate change accepted with probability 1/(1 + e^{beta dE}).
All randomness flows through per-trajectory numpy generators seeded as
(master seed, trajectory index), so runs are reproducible bit for bit and
independent of worker scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import Field
from .linalg import DenseRREF, SparseFqMatrix, span_iter, kernel_basis, _dense_vec_ops
from .families import CodeInstance


def rate(e_from: float, e_to: float, beta: float) -> float:
    """Heat-bath acceptance rate; satisfies detailed balance identically."""
    return 1.0 / (1.0 + math.exp(beta * (e_to - e_from)))


@dataclass
class GlauberParams:
    beta: float
    checkpoints: list  # strictly increasing times
    n_traj: int
    seed: int

    def __post_init__(self):
        if self.beta < 0:
            raise ValueError("beta must be >= 0")
        if self.n_traj < 1:
            raise ValueError("need at least one trajectory")
        cps = list(self.checkpoints)
        if not cps or any(b <= a for a, b in zip(cps, cps[1:])) or cps[0] <= 0:
            raise ValueError("checkpoints must be positive and strictly increasing")
        self.checkpoints = cps

    @classmethod
    def geometric(cls, beta: float, t0: float, ratio: float, count: int, n_traj: int, seed: int):
        cps = [t0 * ratio**i for i in range(count)]
        return cls(beta, cps, n_traj, seed)

    @property
    def t_max(self) -> float:
        return self.checkpoints[-1]


@dataclass
class DynState:
    word: np.ndarray  # int16[n]
    syndrome: np.ndarray  # int16[m]
    energy: int
    t: float

    def verify(self, adj) -> bool:
        """Recompute the syndrome from scratch and compare."""
        syn = _syndrome_dense(self.word, adj)
        return bool(
            np.array_equal(syn, self.syndrome)
            and self.energy == int(np.count_nonzero(syn))
        )


class _Adjacency:
    """CSR column adjacency plus field tables, ready for the kernels."""

    def __init__(self, H: SparseFqMatrix):
        fld = H.field
        if fld.q > 256:
            raise ValueError(f"compiled dynamics needs q <= 256, got q = {fld.q}")
        self.field = fld
        self.n = H.cols
        self.m = H.rows
        ptr = [0]
        rows: list = []
        coeffs: list = []
        for c in range(H.cols):
            for r in sorted(H.col_adj[c]):
                rows.append(r)
                coeffs.append(H.col_adj[c][r])
            ptr.append(len(rows))
        self.col_ptr = np.array(ptr, dtype=np.int64)
        self.col_rows = np.array(rows, dtype=np.int64)
        self.col_coeffs = np.array(coeffs, dtype=np.int16)
        add_t, mul_t, neg_t, _ = fld.tables()
        self.add_t, self.mul_t, self.neg_t = add_t, mul_t, neg_t


def _syndrome_dense(word, adj: _Adjacency) -> np.ndarray:
    syn = np.zeros(adj.m, dtype=np.int16)
    add_t, mul_t = adj.add_t, adj.mul_t
    for i in np.nonzero(word)[0]:
        v = word[i]
        for ptr in range(adj.col_ptr[i], adj.col_ptr[i + 1]):
            r = adj.col_rows[ptr]
            syn[r] = add_t[syn[r], mul_t[adj.col_coeffs[ptr], v]]
    return syn


def sector_adjacency(inst: CodeInstance, sector: str = "classical") -> _Adjacency:
    """Column adjacency of the sector's check matrix, cached on the instance."""
    cache = getattr(inst, "_adj_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(inst, "_adj_cache", cache)
    if sector not in cache:
        if inst.kind == "classical":
            H = inst.H
        elif sector == "X":
            H = inst.H_X
        elif sector == "Z":
            H = inst.H_Z
        else:
            raise ValueError(f"unknown sector {sector!r}")
        cache[sector] = _Adjacency(H)
    return cache[sector]


class RandomStream:
    """Batched per-attempt randomness: one (coordinate, value, uniform,
    exponential) tuple per proposed move, identical whether consumed by the
    compiled kernel or the pure-python step."""

    def __init__(self, rng, n: int, q: int, batch: int = 1 << 14):
        self.rng = rng
        self.n = n
        self.q = q
        self.batch = batch
        self.refill()

    def refill(self):
        rng = self.rng
        self.coords = rng.integers(0, self.n, self.batch, dtype=np.int64)
        if self.q > 2:
            self.vals = rng.integers(0, self.q - 1, self.batch, dtype=np.int64)
        else:
            self.vals = np.zeros(self.batch, dtype=np.int64)
        self.unifs = rng.random(self.batch)
        self.exps = rng.standard_exponential(self.batch)
        self.idx = 0

    def next_attempt(self):
        if self.idx >= self.batch:
            self.refill()
        i = self.idx
        self.idx += 1
        return self.coords[i], self.vals[i], self.unifs[i], self.exps[i]


def fresh_state(adj: _Adjacency) -> DynState:
    return DynState(
        word=np.zeros(adj.n, dtype=np.int16),
        syndrome=np.zeros(adj.m, dtype=np.int16),
        energy=0,
        t=0.0,
    )


def step(state: DynState, adj: _Adjacency, beta: float, stream: RandomStream) -> DynState:
    """One uniformization attempt (python reference for the compiled kernel):
    advance the exponential clock, propose a single-coordinate change, accept
    with the heat-bath probability, and update the syndrome locally."""
    q = adj.field.q
    coord, val, unif, ex = stream.next_attempt()
    state.t += ex / (adj.n * (q - 1))
    cur = int(state.word[coord])
    new = 1 - cur if q == 2 else (cur + 1 + int(val)) % q
    add_t, mul_t, neg_t = adj.add_t, adj.mul_t, adj.neg_t
    delta = add_t[new, neg_t[cur]]
    de = 0
    touched = []
    for ptr in range(adj.col_ptr[coord], adj.col_ptr[coord + 1]):
        r = adj.col_rows[ptr]
        s_old = state.syndrome[r]
        s_new = add_t[s_old, mul_t[adj.col_coeffs[ptr], delta]]
        touched.append((r, s_new))
        de += (1 if s_new else 0) - (1 if s_old else 0)
    if unif < rate(0.0, float(de), beta):
        for r, s_new in touched:
            state.syndrome[r] = s_new
        state.word[coord] = new
        state.energy += de
    return state


def advance_to(state: DynState, adj: _Adjacency, beta: float, stream: RandomStream, t_target: float):
    """Run the compiled kernel (refilling random batches) until t_target."""
    from ._kernels import glauber_segment

    while True:
        t, energy, idx, reached = glauber_segment(
            state.word, state.syndrome, state.energy, state.t, t_target,
            adj.col_ptr, adj.col_rows, adj.col_coeffs,
            adj.add_t, adj.mul_t, adj.neg_t,
            beta, adj.field.q,
            stream.coords, stream.vals, stream.unifs, stream.exps, stream.idx,
        )
        state.t, state.energy, stream.idx = t, int(energy), int(idx)
        if reached:
            return state
        stream.refill()


# -- decoders -----------------------------------------------------------------------


@dataclass
class DecoderSpec:
    """Syndrome decoder choice.  All decoders are functions of the syndrome
    only, which is what makes them translate over codewords."""

    kind: str  # "min_weight" | "lookup" | "greedy"
    w_max: int = 2  # lookup table radius
    max_rounds: int = 0  # greedy cap; 0 means 4n
    coset_budget: int = 1 << 16  # min_weight enumeration cap

    def describe(self) -> str:
        if self.kind == "lookup":
            return f"lookup(w_max={self.w_max})"
        if self.kind == "greedy":
            return f"greedy(max_rounds={self.max_rounds or '4n'})"
        return "min_weight"


class MinWeightDecoder:
    """Exact minimum-weight correction: solve H e = s once, then sweep the
    full solution coset e + ker H.  Feasible while q^dim(ker) is small."""

    def __init__(self, H: SparseFqMatrix, budget: int):
        self.field = H.field
        self.rref = DenseRREF(H.to_dense(), H.field)
        kb = kernel_basis(H)
        if kb and self.field.q ** len(kb) > budget:
            raise ValueError(
                f"kernel dimension {len(kb)} makes coset enumeration exceed {budget}"
            )
        self.kernel = np.stack([w.to_dense() for w in kb]) if kb else None
        _, self._addmul = _dense_vec_ops(H.field)

    def decode(self, syndrome: np.ndarray):
        e0 = self.rref.solve(syndrome)
        if e0 is None:
            return None
        best, best_wt = e0, int(np.count_nonzero(e0))
        if self.kernel is not None:
            for b in span_iter(self.kernel, self.field):
                cand = self._addmul(e0.copy(), 1, b)
                wt = int(np.count_nonzero(cand))
                if wt < best_wt:
                    best, best_wt = cand, wt
        return best.astype(np.int16)


class LookupDecoder:
    """Precomputed syndrome -> minimum-weight-correction table for all
    corrections of weight <= w_max; anything outside the table is a failure."""

    def __init__(self, H: SparseFqMatrix, w_max: int):
        import itertools

        self.n = H.cols
        self.m = H.rows
        fld = H.field
        adj = _Adjacency(H)
        table: dict = {}
        for w in range(1, w_max + 1):
            for supp in itertools.combinations(range(H.cols), w):
                for assign in itertools.product(range(1, fld.q), repeat=w):
                    e = np.zeros(H.cols, dtype=np.int16)
                    for i, v in zip(supp, assign):
                        e[i] = v
                    key = _syndrome_dense(e, adj).tobytes()
                    if key not in table:
                        table[key] = e
        self.table = table
        self._zero_key = np.zeros(H.rows, dtype=np.int16).tobytes()

    def decode(self, syndrome: np.ndarray):
        key = syndrome.astype(np.int16).tobytes()
        if key == self._zero_key:
            return np.zeros(self.n, dtype=np.int16)
        e = self.table.get(key)
        return None if e is None else e.copy()


class GreedyDecoder:
    """Steepest-descent syndrome sweep (compiled); stops at a local minimum."""

    def __init__(self, H: SparseFqMatrix, max_rounds: int = 0):
        self.adj = _Adjacency(H)
        self.max_rounds = max_rounds if max_rounds > 0 else 4 * H.cols

    def decode(self, syndrome: np.ndarray):
        from ._kernels import greedy_decode

        adj = self.adj
        e, ok = greedy_decode(
            syndrome.astype(np.int16), adj.col_ptr, adj.col_rows, adj.col_coeffs,
            adj.add_t, adj.mul_t, adj.neg_t, adj.field.q, adj.n, self.max_rounds,
        )
        return e if ok else None


def make_decoder(H: SparseFqMatrix, spec: DecoderSpec):
    if spec.kind == "min_weight":
        return MinWeightDecoder(H, spec.coset_budget)
    if spec.kind == "lookup":
        return LookupDecoder(H, spec.w_max)
    if spec.kind == "greedy":
        return GreedyDecoder(H, spec.max_rounds)
    raise ValueError(f"unknown decoder kind {spec.kind!r}")


# -- memory-time estimation ------------------------------------------------------------


def wilson_interval(k: int, n: int, z: float = 1.96):
    if n == 0:
        return 0.0, 1.0
    p = k / n
    z2 = z * z
    denom = 1 + z2 / n
    center = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass
class MemoryTimeEstimate:
    checkpoints: list
    successes: list
    n_traj: int
    beta: float
    seed: int
    sector: str
    decoder: str
    threshold: float
    t_mem_point: float
    t_mem_conservative: float
    t_mem_optimistic: float
    censored: bool
    provenance: dict = dc_field(default_factory=dict)

    @property
    def p_hat(self) -> list:
        return [k / self.n_traj for k in self.successes]

    def intervals(self, z: float = 1.96) -> list:
        return [wilson_interval(k, self.n_traj, z) for k in self.successes]

    def to_dict(self) -> dict:
        los, his = zip(*self.intervals()) if self.successes else ((), ())
        return {
            "checkpoints": list(self.checkpoints),
            "successes": list(self.successes),
            "p_hat": self.p_hat,
            "wilson_lo": list(los),
            "wilson_hi": list(his),
            "n_traj": self.n_traj,
            "beta": self.beta,
            "seed": self.seed,
            "sector": self.sector,
            "decoder": self.decoder,
            "threshold": self.threshold,
            "t_mem_point": self.t_mem_point,
            "t_mem_conservative": self.t_mem_conservative,
            "t_mem_optimistic": self.t_mem_optimistic,
            "censored": self.censored,
            "provenance": self.provenance,
        }


def _t_mem_rules(checkpoints, successes, n, threshold):
    points = [k / n for k in successes]
    intervals = [wilson_interval(k, n) for k in successes]
    crossed = [t for t, p in zip(checkpoints, points) if p >= threshold]
    lo_ok = [t for t, (lo, _) in zip(checkpoints, intervals) if lo >= threshold]
    hi_ok = [t for t, (_, hi) in zip(checkpoints, intervals) if hi >= threshold]
    t_point = max(crossed) if crossed else 0.0
    t_cons = max(lo_ok) if lo_ok else 0.0
    t_opt = max(hi_ok) if hi_ok else 0.0
    censored = bool(points and points[-1] >= threshold)
    return t_point, t_cons, t_opt, censored


def estimate_memory_time(
    inst: CodeInstance,
    params: GlauberParams,
    decoder_spec: DecoderSpec,
    sector: str = "classical",
    threshold: float = 2.0 / 3.0,
    workers: int = 1,
    record=None,
) -> MemoryTimeEstimate:
    """Monte Carlo estimate of the memory time.

    Each trajectory starts from the zero word; at every checkpoint a
    snapshot is decoded (the dynamics is never perturbed) and counts as a
    success when the corrected word is exactly zero (classical) or lies in
    the stabilizer image (quantum sectors, which evolve as independent
    classical dynamics under their own check matrix).  The reported time is
    the last checkpoint whose success estimate clears the threshold; the
    Wilson-bound variants and a censoring flag are attached because a
    finite horizon can only bound the supremum.  Decoder failure counts as
    an unsuccessful checkpoint, never an abort.

    ``record(traj, t, energy, success)`` is called for every (trajectory,
    checkpoint) pair, in trajectory order.
    """
    adj = sector_adjacency(inst, sector)
    decoder = make_decoder(
        inst.H if inst.kind == "classical" else (inst.H_X if sector == "X" else inst.H_Z),
        decoder_spec,
    )
    stab_rref = None
    if inst.kind == "quantum":
        from .linalg import _stabilizer_rref

        stab_rref = _stabilizer_rref(inst, sector)
    _, addmul = _dense_vec_ops(adj.field)
    neg_t = adj.neg_t
    cps = params.checkpoints

    def run_one(traj: int):
        rng = np.random.default_rng(np.random.SeedSequence([params.seed, traj]))
        stream = RandomStream(rng, adj.n, adj.field.q)
        state = fresh_state(adj)
        out = []
        for t_cp in cps:
            advance_to(state, adj, params.beta, stream, t_cp)
            e = decoder.decode(state.syndrome)
            if e is None:
                ok = False
            else:
                if adj.field.q == 2:
                    residual = state.word ^ e
                else:
                    residual = addmul(state.word.copy(), 1, neg_t[e].astype(np.int16))
                if stab_rref is None:
                    ok = not residual.any()
                else:
                    ok = bool(stab_rref.in_rowspace(residual))
            out.append((state.t, state.energy, ok))
        return out

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, range(params.n_traj)))
    else:
        results = [run_one(i) for i in range(params.n_traj)]

    successes = [0] * len(cps)
    for traj, rows in enumerate(results):
        for j, (t, energy, ok) in enumerate(rows):
            if ok:
                successes[j] += 1
            if record is not None:
                record(traj, t, energy, ok)
    t_point, t_cons, t_opt, censored = _t_mem_rules(cps, successes, params.n_traj, threshold)
    return MemoryTimeEstimate(
        checkpoints=list(cps),
        successes=successes,
        n_traj=params.n_traj,
        beta=params.beta,
        seed=params.seed,
        sector=sector,
        decoder=decoder_spec.describe(),
        threshold=threshold,
        t_mem_point=t_point,
        t_mem_conservative=t_cons,
        t_mem_optimistic=t_opt,
        censored=censored,
        provenance=dict(inst.provenance),
    )


# -- Gibbs-distribution checks -----------------------------------------------------------


def exact_gibbs(inst: CodeInstance, beta: float, sector: str = "classical") -> np.ndarray:
    """Exact Gibbs weights over all q^n words (enumeration oracle)."""
    import itertools

    adj = sector_adjacency(inst, sector)
    q, n = adj.field.q, adj.n
    if q**n > 1 << 14:
        raise ValueError("state space too large for exact enumeration")
    probs = np.empty(q**n)
    word = np.zeros(n, dtype=np.int16)
    for code, digits in enumerate(itertools.product(range(q), repeat=n)):
        # digits are little-endian in our encoding: digit i multiplies q^i
        for i, d in enumerate(digits):
            word[i] = d
        syn = _syndrome_dense(word, adj)
        e = int(np.count_nonzero(syn))
        idx = 0
        for i in reversed(range(n)):
            idx = idx * q + digits[i]
        probs[idx] = math.exp(-beta * e)
    probs /= probs.sum()
    return probs


def empirical_occupancy(
    inst: CodeInstance,
    beta: float,
    total_time: float,
    seed: int,
    burn_in: float = 0.0,
    sector: str = "classical",
) -> np.ndarray:
    """Holding-time occupancy of a single long run, normalized to a
    distribution over the q^n encoded states."""
    from ._kernels import glauber_occupancy_segment

    adj = sector_adjacency(inst, sector)
    q, n = adj.field.q, adj.n
    if q**n > 1 << 14:
        raise ValueError("state space too large for occupancy accounting")
    qpow = np.array([q**i for i in range(n)], dtype=np.int64)
    occ = np.zeros(q**n)
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    stream = RandomStream(rng, n, q)
    state = fresh_state(adj)
    code = 0

    def run_to(t_target):
        nonlocal code
        while True:
            t, energy, code2, idx, reached = glauber_occupancy_segment(
                state.word, state.syndrome, state.energy, code, state.t, t_target,
                adj.col_ptr, adj.col_rows, adj.col_coeffs,
                adj.add_t, adj.mul_t, adj.neg_t,
                beta, q, qpow, occ,
                stream.coords, stream.vals, stream.unifs, stream.exps, stream.idx,
            )
            state.t, state.energy, code, stream.idx = t, int(energy), int(code2), int(idx)
            if reached:
                return
            stream.refill()

    if burn_in > 0:
        run_to(burn_in)
        occ[:] = 0.0
    run_to(burn_in + total_time)
    return occ / occ.sum()


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(p - q).sum())
