"""Sparse linear algebra over GF(q): rank, kernels, cosets, code parameters.

Matrices keep both row and column adjacency (dicts of index -> coefficient)
so syndrome updates and elimination stay proportional to the number of
nonzeros.  A dense numpy path (element tables) backs the hot loops and the
independent oracles used in tests.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import Field, field_make


class BudgetExceeded(RuntimeError):
    """An enumeration or search would visit more states than the caller allowed."""


class SparseWord:
    """Length-n vector over F_q stored by its nonzero support."""

    __slots__ = ("n", "support")

    def __init__(self, n: int, support: dict | None = None):
        self.n = n
        self.support = {}
        if support:
            for i, c in support.items():
                if not 0 <= i < n:
                    raise ValueError(f"coordinate {i} out of range [0,{n})")
                if c:
                    self.support[i] = c

    @property
    def weight(self) -> int:
        return len(self.support)

    def is_zero(self) -> bool:
        return not self.support

    @classmethod
    def from_dense(cls, vec) -> "SparseWord":
        vec = np.asarray(vec)
        return cls(len(vec), {int(i): int(vec[i]) for i in np.nonzero(vec)[0]})

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int16)
        for i, c in self.support.items():
            out[i] = c
        return out

    def add(self, other: "SparseWord", fld: Field) -> "SparseWord":
        if self.n != other.n:
            raise ValueError("length mismatch")
        sup = dict(self.support)
        for i, c in other.support.items():
            s = fld.add(sup.get(i, 0), c)
            if s:
                sup[i] = s
            else:
                sup.pop(i, None)
        return SparseWord(self.n, sup)

    def scale(self, c: int, fld: Field) -> "SparseWord":
        if c == 0:
            return SparseWord(self.n)
        return SparseWord(self.n, {i: fld.mul(a, c) for i, a in self.support.items()})

    def __eq__(self, other):
        return (
            isinstance(other, SparseWord) and self.n == other.n and self.support == other.support
        )

    def __repr__(self):
        items = ",".join(f"{i}:{c}" for i, c in sorted(self.support.items()))
        return f"SparseWord(n={self.n}, {{{items}}})"


class SparseFqMatrix:
    """Sparse matrix over GF(q) with row and column adjacency."""

    def __init__(self, rows: int, cols: int, fld: Field):
        self.rows = rows
        self.cols = cols
        self.field = fld
        self.row_adj: list[dict] = [{} for _ in range(rows)]
        self.col_adj: list[dict] = [{} for _ in range(cols)]

    @classmethod
    def from_triples(cls, rows: int, cols: int, fld: Field, triples) -> "SparseFqMatrix":
        M = cls(rows, cols, fld)
        for r, c, v in triples:
            M.add_entry(r, c, v)
        return M

    @classmethod
    def from_dense(cls, arr, fld: Field) -> "SparseFqMatrix":
        arr = np.asarray(arr)
        M = cls(arr.shape[0], arr.shape[1], fld)
        for r, c in zip(*np.nonzero(arr)):
            M.set_entry(int(r), int(c), int(arr[r, c]))
        return M

    def add_entry(self, r: int, c: int, v: int):
        """Accumulate v onto entry (r, c) with field addition."""
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise ValueError(f"entry ({r},{c}) out of range {self.rows}x{self.cols}")
        s = self.field.add(self.row_adj[r].get(c, 0), v)
        if s:
            self.row_adj[r][c] = s
            self.col_adj[c][r] = s
        else:
            self.row_adj[r].pop(c, None)
            self.col_adj[c].pop(r, None)

    def set_entry(self, r: int, c: int, v: int):
        if v:
            self.row_adj[r][c] = v
            self.col_adj[c][r] = v
        else:
            self.row_adj[r].pop(c, None)
            self.col_adj[c].pop(r, None)

    def entry(self, r: int, c: int) -> int:
        return self.row_adj[r].get(c, 0)

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.row_adj)

    def row_weights(self) -> list[int]:
        return [len(r) for r in self.row_adj]

    def col_weights(self) -> list[int]:
        return [len(c) for c in self.col_adj]

    def transpose(self) -> "SparseFqMatrix":
        T = SparseFqMatrix(self.cols, self.rows, self.field)
        for r, row in enumerate(self.row_adj):
            for c, v in row.items():
                T.set_entry(c, r, v)
        return T

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int16)
        for r, row in enumerate(self.row_adj):
            for c, v in row.items():
                out[r, c] = v
        return out

    def mul_word(self, word: SparseWord | dict) -> dict:
        """Sparse product M @ word as a row-index -> value dict."""
        sup = word.support if isinstance(word, SparseWord) else word
        fld = self.field
        out: dict = {}
        for c, v in sup.items():
            for r, m in self.col_adj[c].items():
                s = fld.add(out.get(r, 0), fld.mul(m, v))
                if s:
                    out[r] = s
                else:
                    del out[r]
        return out

    def syndrome_weight(self, word: SparseWord | dict) -> int:
        return len(self.mul_word(word))

    def matmul(self, other: "SparseFqMatrix") -> "SparseFqMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in sparse matmul")
        if self.field != other.field:
            raise ValueError("field mismatch in sparse matmul")
        fld = self.field
        out = SparseFqMatrix(self.rows, other.cols, fld)
        for r, row in enumerate(self.row_adj):
            acc: dict = {}
            for k, a in row.items():
                for c, b in other.row_adj[k].items():
                    s = fld.add(acc.get(c, 0), fld.mul(a, b))
                    if s:
                        acc[c] = s
                    else:
                        del acc[c]
            for c, v in acc.items():
                out.set_entry(r, c, v)
        return out

    def is_zero(self) -> bool:
        return all(not r for r in self.row_adj)

    def scale(self, c: int) -> "SparseFqMatrix":
        fld = self.field
        out = SparseFqMatrix(self.rows, self.cols, fld)
        if c:
            for r, row in enumerate(self.row_adj):
                for cc, v in row.items():
                    out.set_entry(r, cc, fld.mul(v, c))
        return out

    def kron(self, other: "SparseFqMatrix") -> "SparseFqMatrix":
        """Kronecker product; row/col index = (this_index * other_dim + other_index)."""
        if self.field != other.field:
            raise ValueError("field mismatch in kron")
        fld = self.field
        out = SparseFqMatrix(self.rows * other.rows, self.cols * other.cols, fld)
        for r1, row1 in enumerate(self.row_adj):
            for c1, a in row1.items():
                for r2, row2 in enumerate(other.row_adj):
                    for c2, b in row2.items():
                        out.set_entry(
                            r1 * other.rows + r2, c1 * other.cols + c2, fld.mul(a, b)
                        )
        return out

    @classmethod
    def identity(cls, n: int, fld: Field) -> "SparseFqMatrix":
        M = cls(n, n, fld)
        for i in range(n):
            M.set_entry(i, i, 1)
        return M

    @classmethod
    def hstack(cls, blocks) -> "SparseFqMatrix":
        rows = blocks[0].rows
        fld = blocks[0].field
        if any(b.rows != rows or b.field != fld for b in blocks):
            raise ValueError("hstack blocks disagree")
        out = cls(rows, sum(b.cols for b in blocks), fld)
        off = 0
        for b in blocks:
            for r, row in enumerate(b.row_adj):
                for c, v in row.items():
                    out.set_entry(r, off + c, v)
            off += b.cols
        return out

    @classmethod
    def vstack(cls, blocks) -> "SparseFqMatrix":
        cols = blocks[0].cols
        fld = blocks[0].field
        if any(b.cols != cols or b.field != fld for b in blocks):
            raise ValueError("vstack blocks disagree")
        out = cls(sum(b.rows for b in blocks), cols, fld)
        off = 0
        for b in blocks:
            for r, row in enumerate(b.row_adj):
                for c, v in row.items():
                    out.set_entry(off + r, c, v)
            off += b.rows
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseFqMatrix)
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.field == other.field
            and self.row_adj == other.row_adj
        )

    def __repr__(self):
        return f"SparseFqMatrix({self.rows}x{self.cols}, q={self.field.q}, nnz={self.nnz})"


# -- text interchange format ----------------------------------------------------


def save_matrix(M: SparseFqMatrix, path):
    with open(path, "w") as fh:
        fh.write(f"{M.rows} {M.cols} {M.field.p} {M.field.e}\n")
        for r in range(M.rows):
            for c in sorted(M.row_adj[r]):
                fh.write(f"{r} {c} {M.row_adj[r][c]}\n")


def load_matrix(path) -> SparseFqMatrix:
    with open(path) as fh:
        header = fh.readline().split()
        rows, cols, p, e = (int(x) for x in header)
        M = SparseFqMatrix(rows, cols, field_make(p, e))
        for line in fh:
            if not line.strip():
                continue
            r, c, v = (int(x) for x in line.split())
            M.set_entry(r, c, v)
    return M


# -- sparse elimination ------------------------------------------------------------


def _sparse_rref(M: SparseFqMatrix):
    """Reduced row-echelon form by sparse elimination.

    Pivots are chosen Markowitz-style: the sparsest active row first, then
    within it the column touching the fewest active rows, with index order
    breaking ties so the reduction is deterministic.

    Returns (reduced_rows, pivots) where pivots is a list of (row, col).
    """
    fld = M.field
    rows = [dict(r) for r in M.row_adj]
    col_rows: dict[int, set] = {}
    for r, row in enumerate(rows):
        for c in row:
            col_rows.setdefault(c, set()).add(r)
    active = {r for r, row in enumerate(rows) if row}
    pivots: list[tuple[int, int]] = []

    while active:
        r_star = min(active, key=lambda r: (len(rows[r]), r))
        if not rows[r_star]:
            active.discard(r_star)
            continue
        c_star = min(rows[r_star], key=lambda c: (len(col_rows.get(c, ())), c))
        inv = fld.inv(rows[r_star][c_star])
        if inv != 1:
            row = rows[r_star]
            for c in list(row):
                nv = fld.mul(row[c], inv)
                row[c] = nv
        pivot_row = rows[r_star]
        for r in list(col_rows.get(c_star, ())):
            if r == r_star:
                continue
            factor = fld.neg(rows[r][c_star])
            target = rows[r]
            for c, v in pivot_row.items():
                s = fld.add(target.get(c, 0), fld.mul(factor, v))
                if s:
                    if c not in target:
                        col_rows.setdefault(c, set()).add(r)
                    target[c] = s
                else:
                    if c in target:
                        del target[c]
                        col_rows[c].discard(r)
            if not target:
                active.discard(r)
        pivots.append((r_star, c_star))
        active.discard(r_star)
    return rows, pivots


def rank(M: SparseFqMatrix) -> int:
    return len(_sparse_rref(M)[1])


def kernel_basis(M: SparseFqMatrix) -> list[SparseWord]:
    """Basis of the right kernel {v : Mv = 0}, one word per free column."""
    fld = M.field
    rows, pivots = _sparse_rref(M)
    pivot_cols = {c: r for r, c in pivots}
    basis = []
    for fc in range(M.cols):
        if fc in pivot_cols:
            continue
        sup = {fc: 1}
        for pc, pr in pivot_cols.items():
            v = rows[pr].get(fc, 0)
            if v:
                sup[pc] = fld.neg(v)
        basis.append(SparseWord(M.cols, sup))
    return basis


# -- dense oracle path ----------------------------------------------------------------


def rank_dense(arr, fld: Field) -> int:
    """Dense-elimination rank, the independent oracle for the sparse path."""
    A = np.array(arr, dtype=np.int64) % fld.q
    m, n = A.shape
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if A[i, c]:
                piv = i
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        inv = fld.inv(int(A[r, c]))
        A[r] = [fld.mul(int(x), inv) for x in A[r]]
        for i in range(m):
            if i != r and A[i, c]:
                f = fld.neg(int(A[i, c]))
                A[i] = [fld.add(int(x), fld.mul(f, int(y))) for x, y in zip(A[i], A[r])]
        r += 1
        if r == m:
            break
    return r


def dense_fq_matmul(A, B, fld: Field) -> np.ndarray:
    """Dense product of element-index matrices over GF(p^e).

    Elements are split into their e base-p digit components so the product
    reduces to e^2 integer matmuls mod p plus a basis-reduction recombine.
    """
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    p, e = fld.p, fld.e
    if e == 1:
        return (A @ B) % p
    # digit components
    Ad = [(A // p**i) % p for i in range(e)]
    Bd = [(B // p**i) % p for i in range(e)]
    # basis products t^i * t^j reduced mod the modulus, as digit vectors
    out_digits = [np.zeros((A.shape[0], B.shape[1]), dtype=np.int64) for _ in range(e)]
    t = {0: [1] + [0] * (e - 1)}
    from .fields import _poly_mulmod_fp

    for k in range(1, 2 * e - 1):
        prev = t[k - 1]
        t[k] = _poly_mulmod_fp(prev, [0, 1], list(fld.modulus), p)
    for i in range(e):
        for j in range(e):
            prod = (Ad[i] @ Bd[j]) % p
            for k, coeff in enumerate(t[i + j]):
                if coeff:
                    out_digits[k] = (out_digits[k] + coeff * prod) % p
    out = np.zeros_like(out_digits[0])
    for i in range(e):
        out += out_digits[i] * p**i
    return out


class DenseRREF:
    """Dense RREF over GF(q) with the transform recorded, for solving and
    row-space membership tests.  Built once, queried many times."""

    def __init__(self, arr, fld: Field):
        A = np.array(arr, dtype=np.int16)
        self.field = fld
        m, n = A.shape
        E = np.zeros((m, m), dtype=np.int16)
        np.fill_diagonal(E, 1)
        self._mul_vec, self._addmul_into = _dense_vec_ops(fld)
        r = 0
        pivots = []
        for c in range(n):
            piv = None
            for i in range(r, m):
                if A[i, c]:
                    piv = i
                    break
            if piv is None:
                continue
            if piv != r:
                A[[r, piv]] = A[[piv, r]]
                E[[r, piv]] = E[[piv, r]]
            inv = fld.inv(int(A[r, c]))
            if inv != 1:
                A[r] = self._mul_vec(inv, A[r])
                E[r] = self._mul_vec(inv, E[r])
            for i in range(m):
                if i != r and A[i, c]:
                    f = fld.neg(int(A[i, c]))
                    A[i] = self._addmul_into(A[i], f, A[r])
                    E[i] = self._addmul_into(E[i], f, E[r])
            pivots.append((r, c))
            r += 1
            if r == m:
                break
        self.R = A
        self.E = E
        self.pivots = pivots
        self.rank = len(pivots)
        self.nrows, self.ncols = m, n

    def reduce(self, vec) -> np.ndarray:
        """Residual of vec after eliminating all pivot coordinates."""
        v = np.array(vec, dtype=np.int16)
        fld = self.field
        for r, c in self.pivots:
            if v[c]:
                v = self._addmul_into(v, fld.neg(int(v[c])), self.R[r])
        return v

    def in_rowspace(self, vec) -> bool:
        return not self.reduce(vec).any()

    def solve(self, b):
        """Some x with (original matrix) @ x = b, or None if inconsistent."""
        b = np.asarray(b, dtype=np.int64)
        y = dense_fq_matmul(self.E, b.reshape(-1, 1), self.field).ravel()
        if not hasattr(self, "_nonpivot_rows"):
            pr = {r for r, _ in self.pivots}
            self._nonpivot_rows = np.array(
                [i for i in range(self.nrows) if i not in pr], dtype=np.int64
            )
        if y[self._nonpivot_rows].any():
            return None
        x = np.zeros(self.ncols, dtype=np.int16)
        for r, c in self.pivots:
            x[c] = y[r]
        return x


def _dense_vec_ops(fld: Field):
    """(mul_vec, addmul_into) elementwise field ops on int vectors."""
    if fld.q == 2:

        def mul_vec(c, v):
            return v if c == 1 else np.zeros_like(v)

        def addmul_into(target, c, v):
            if c:
                return target ^ v
            return target

        return mul_vec, addmul_into
    if fld._add_t is not None:
        add_t, mul_t = fld._add_t, fld._mul_t

        def mul_vec(c, v):
            return mul_t[c][v].astype(np.int16)

        def addmul_into(target, c, v):
            if c:
                return add_t[target, mul_t[c][v]].astype(np.int16)
            return target

        return mul_vec, addmul_into

    def mul_vec(c, v):
        return np.array([fld.mul(c, int(x)) for x in v], dtype=np.int16)

    def addmul_into(target, c, v):
        if not c:
            return target
        return np.array(
            [fld.add(int(t), fld.mul(c, int(x))) for t, x in zip(target, v)], dtype=np.int16
        )

    return mul_vec, addmul_into


def span_iter(basis_dense: np.ndarray, fld: Field, include_zero: bool = False):
    """Iterate the span of the given rows, one field-vector add per step.

    Walks the base-q odometer over coefficient space; with each digit
    increment the running word changes by one basis-row addition, so a full
    sweep of q^k vectors costs O(q^k) vector adds.
    """
    k, n = basis_dense.shape
    _, addmul = _dense_vec_ops(fld)
    w = np.zeros(n, dtype=np.int16)
    digits = [0] * k
    if include_zero:
        yield w
    total = fld.q**k
    for _ in range(total - 1):
        i = 0
        while True:
            w = addmul(w, 1, basis_dense[i])
            digits[i] += 1
            if digits[i] < fld.q:
                break
            digits[i] = 0
            i += 1
        yield w


# -- code-parameter operations -------------------------------------------------------


@dataclass
class DistanceResult:
    d: int
    witness: SparseWord
    exact: bool
    sector: str = "classical"
    details: dict = dc_field(default_factory=dict)


def quantum_dimension(inst) -> int:
    """Number of logical qudits, n - rank(H_X) - rank(H_Z)."""
    if inst.kind != "quantum":
        raise ValueError("quantum_dimension needs a quantum instance")
    k = inst.n - rank(inst.H_X) - rank(inst.H_Z)
    return k


def is_trivial_logical(inst, sector: str, word: SparseWord) -> bool:
    """True iff the zero-syndrome word lies in the stabilizer row space."""
    H, stab = _sector_matrices(inst, sector)
    if H.mul_word(word):
        raise ValueError("word has nonzero syndrome; triviality is undefined")
    rref = _stabilizer_rref(inst, sector)
    return rref.in_rowspace(word.to_dense())


def _sector_matrices(inst, sector: str):
    if inst.kind == "classical":
        if sector not in ("classical", None):
            raise ValueError(f"classical instance has no sector {sector!r}")
        return inst.H, None
    if sector == "X":
        return inst.H_X, inst.H_Z
    if sector == "Z":
        return inst.H_Z, inst.H_X
    raise ValueError(f"sector must be 'X' or 'Z' for quantum instances, got {sector!r}")


def _stabilizer_rref(inst, sector: str) -> DenseRREF:
    cache = getattr(inst, "_stab_rref_cache", None)
    if cache is None:
        cache = {}
        object.__setattr__(inst, "_stab_rref_cache", cache)
    if sector not in cache:
        _, stab = _sector_matrices(inst, sector)
        cache[sector] = DenseRREF(stab.to_dense(), inst.field)
    return cache[sector]


def _min_weight_in_span(H: SparseFqMatrix, exclude_rref: DenseRREF | None, budget: int, fld):
    kb = kernel_basis(H)
    k = len(kb)
    if k == 0:
        return None, 0
    if fld.q**k > budget:
        raise BudgetExceeded(
            f"codeword space q^{k} = {fld.q**k} exceeds budget {budget}; use estimate mode"
        )
    B = np.stack([w.to_dense() for w in kb])
    best_w, best = None, None
    visited = 0
    for w in span_iter(B, fld):
        visited += 1
        wt = int(np.count_nonzero(w))
        if best is not None and wt >= best:
            continue
        if wt == 0:
            continue
        if exclude_rref is not None and exclude_rref.in_rowspace(w):
            continue
        best, best_w = wt, w.copy()
    return best_w, visited


def distance(inst, mode: str = "exact", budget: int = 1 << 22, trials: int = 200, seed: int = 0):
    """Minimum nontrivial (logical) weight, exactly or as a flagged upper bound.

    Exact mode enumerates the kernel span (minus the stabilizer subspace for
    quantum sectors) and raises BudgetExceeded when that space is larger
    than ``budget``.  Estimate mode samples random information sets and
    returns the best upper bound seen, never presented as exact.
    """
    fld = inst.field
    if mode == "exact":
        if inst.kind == "classical":
            w, _ = _min_weight_in_span(inst.H, None, budget, fld)
            if w is None:
                raise ValueError("code has no nonzero codeword (k = 0)")
            return DistanceResult(int(np.count_nonzero(w)), SparseWord.from_dense(w), True)
        results = {}
        for sector in ("X", "Z"):
            H, stab = _sector_matrices(inst, sector)
            rref = _stabilizer_rref(inst, sector)
            w, _ = _min_weight_in_span(H, rref, budget, fld)
            if w is None:
                raise ValueError(f"no nontrivial {sector} logical (k = 0)")
            results[sector] = DistanceResult(
                int(np.count_nonzero(w)), SparseWord.from_dense(w), True, sector
            )
        dmin = min(results.values(), key=lambda r: r.d)
        return DistanceResult(
            dmin.d,
            dmin.witness,
            True,
            "quantum",
            details={"d_x": results["X"].d, "d_z": results["Z"].d, "witnesses": results},
        )
    if mode != "estimate":
        raise ValueError(f"mode must be 'exact' or 'estimate', got {mode!r}")
    return _distance_estimate(inst, trials, seed)


def _distance_estimate(inst, trials: int, seed: int):
    """Randomized information-set upper bound on the distance."""
    fld = inst.field
    rng = np.random.default_rng(seed)
    sectors = ["classical"] if inst.kind == "classical" else ["X", "Z"]
    per_sector = {}
    for sector in sectors:
        if sector == "classical":
            H, rref_excl = inst.H, None
        else:
            H, _ = _sector_matrices(inst, sector)
            rref_excl = _stabilizer_rref(inst, sector)
        kb = kernel_basis(H)
        if not kb:
            continue
        G = np.stack([w.to_dense() for w in kb])
        best, best_w = None, None
        for _ in range(trials):
            perm = rng.permutation(G.shape[1])
            rr = DenseRREF(G[:, perm], fld)
            for i in range(rr.rank):
                row = np.zeros(G.shape[1], dtype=np.int16)
                row[perm] = rr.R[i]
                wt = int(np.count_nonzero(row))
                if wt == 0 or (best is not None and wt >= best):
                    continue
                if rref_excl is not None and rref_excl.in_rowspace(row):
                    continue
                best, best_w = wt, row.copy()
        if best is not None:
            per_sector[sector] = DistanceResult(
                best, SparseWord.from_dense(best_w), False, sector,
                details={"trials": trials, "seed": seed},
            )
    if not per_sector:
        raise ValueError("estimate found no nontrivial codeword")
    top = min(per_sector.values(), key=lambda r: r.d)
    det = {"trials": trials, "seed": seed}
    if inst.kind == "quantum":
        det.update({s: r.d for s, r in per_sector.items()})
    return DistanceResult(top.d, top.witness, False, top.sector, det)


def coset_min_weight(M: SparseFqMatrix, c: SparseWord, budget: int = 1 << 16):
    """Minimum weight of c + (row space of M).

    Exact (full coset sweep) whenever q^rank fits the budget; otherwise a
    greedy descent over generator rows, flagged as a heuristic upper bound.

    Returns (weight, witness, exact_flag).
    """
    if c.n != M.cols:
        raise ValueError("word length must match matrix columns")
    fld = M.field
    rows, pivots = _sparse_rref(M)
    basis = [rows[r] for r, _ in pivots]
    r = len(basis)
    c_dense = c.to_dense()
    if r == 0:
        return c.weight, c, True
    if fld.q**r <= budget:
        B = np.zeros((r, M.cols), dtype=np.int16)
        for i, row in enumerate(basis):
            for cc, v in row.items():
                B[i, cc] = v
        _, addmul = _dense_vec_ops(fld)
        best = c.weight
        best_w = c_dense.copy()
        for b in span_iter(B, fld):
            w = addmul(c_dense.copy(), 1, b)
            wt = int(np.count_nonzero(w))
            if wt < best:
                best, best_w = wt, w.copy()
        return best, SparseWord.from_dense(best_w), True
    # greedy descent: repeatedly add the scaled generator row that helps most
    _, addmul = _dense_vec_ops(fld)
    B = np.zeros((r, M.cols), dtype=np.int16)
    for i, row in enumerate(basis):
        for cc, v in row.items():
            B[i, cc] = v
    cur = c_dense.copy()
    cur_wt = int(np.count_nonzero(cur))
    improved = True
    while improved:
        improved = False
        best_move = None
        for i in range(r):
            for s in range(1, fld.q):
                cand = addmul(cur.copy(), s, B[i])
                wt = int(np.count_nonzero(cand))
                if wt < cur_wt and (best_move is None or wt < best_move[0]):
                    best_move = (wt, cand)
        if best_move is not None:
            cur_wt, cur = best_move
            improved = True
    return cur_wt, SparseWord.from_dense(cur), False
