"""Prefractal carpet regions, random local classical codes on them, and
hypergraph (tensor) products yielding quantum chain complexes.

Carpet construction: cut each retained square into A x A subsquares and
remove the interior (A-2) x (A-2) block, keeping the boundary ring of
4A - 4 squares; after i iterations (rescaled to unit squares) the region
has (4A - 4)^i squares and box dimension log(4A-4) / log A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .fields import Field
from .linalg import SparseFqMatrix
from .families import CodeInstance


@dataclass
class PrefractalRegion:
    A: int
    level: int
    squares: list  # sorted integer (x, y) of retained unit squares

    @property
    def count(self) -> int:
        return len(self.squares)

    @property
    def dimension(self) -> float:
        return math.log(4 * self.A - 4) / math.log(self.A)

    @property
    def side(self) -> int:
        return self.A**self.level

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(f"{self.A} {self.level}\n")
            for x, y in self.squares:
                fh.write(f"{x} {y}\n")

    @classmethod
    def load(cls, path) -> "PrefractalRegion":
        with open(path) as fh:
            A, level = (int(v) for v in fh.readline().split())
            squares = [tuple(int(v) for v in line.split()) for line in fh if line.strip()]
        region = cls(A, level, sorted(squares))
        if region.count != (4 * A - 4) ** level:
            raise ValueError("square count does not match (4A-4)^level")
        return region


def carpet(A: int, level: int) -> PrefractalRegion:
    """Level-``level`` carpet prefractal with subdivision parameter A."""
    if A < 3:
        raise ValueError("carpet needs A >= 3")
    if level < 0:
        raise ValueError("level must be >= 0")
    ring = [
        (a, b)
        for a in range(A)
        for b in range(A)
        if a in (0, A - 1) or b in (0, A - 1)
    ]
    squares = [(0, 0)]
    for _ in range(level):
        squares = [(A * x + dx, A * y + dy) for (x, y) in squares for (dx, dy) in ring]
    squares.sort()
    region = PrefractalRegion(A, level, squares)
    assert region.count == (4 * A - 4) ** level
    return region


# -- random local codes on a region -------------------------------------------------


@dataclass
class LocalCodeOnRegion:
    """Classical code whose bits and checks live on carpet squares, with
    every interaction shorter than the stated radius."""

    instance: CodeInstance
    region: PrefractalRegion
    bit_pos: list  # (x, y) per bit
    check_pos: list  # (x, y) per check
    radius: float
    params: dict = dc_field(default_factory=dict)

    @property
    def H(self) -> SparseFqMatrix:
        return self.instance.H


def random_local_code(
    region: PrefractalRegion,
    fld: Field,
    bits_per_square: int = 1,
    checks_per_square: int = 1,
    radius: float = 2.0,
    check_degree: tuple = (2, 4),
    max_bit_degree: int = 8,
    seed: int = 0,
    max_retries: int = 200,
) -> LocalCodeOnRegion:
    """Random LDPC classical code on a prefractal region.

    Bits and checks are placed on the retained squares (equal numbers per
    square by default) and wired randomly within ``radius``.  Local
    degeneracies - empty checks, duplicate checks (equal up to a scalar),
    bits touching no check - are rejected and locally resampled; the retry
    cap turns infeasible parameters into an error instead of a loop.
    """
    if bits_per_square < 1 or checks_per_square < 1:
        raise ValueError("need at least one bit and one check per square")
    dmin, dmax = check_degree
    if dmin < 1 or dmax < dmin:
        raise ValueError(f"bad check degree bounds {check_degree}")
    rng = np.random.default_rng(seed)
    squares = region.squares
    bit_pos = [sq for sq in squares for _ in range(bits_per_square)]
    check_pos = [sq for sq in squares for _ in range(checks_per_square)]
    n, m = len(bit_pos), len(check_pos)

    # spatial index of bits for radius queries
    by_square: dict = {}
    for i, sq in enumerate(bit_pos):
        by_square.setdefault(sq, []).append(i)
    reach = int(math.floor(radius))
    candidates = []
    for c, (cx, cy) in enumerate(check_pos):
        cand = []
        for dx in range(-reach, reach + 1):
            for dy in range(-reach, reach + 1):
                if dx * dx + dy * dy > radius * radius:
                    continue
                cand.extend(by_square.get((cx + dx, cy + dy), ()))
        cand.sort()
        if len(cand) < dmin:
            raise ValueError(
                f"check at {(cx, cy)} reaches only {len(cand)} bits < dmin={dmin}; "
                "increase radius or density"
            )
        candidates.append(cand)

    def draw_row(c: int, degree_cnt):
        cand = [b for b in candidates[c] if degree_cnt[b] < max_bit_degree]
        if len(cand) < dmin:
            return None
        d = int(rng.integers(dmin, min(dmax, len(cand)) + 1))
        picks = rng.choice(len(cand), size=d, replace=False)
        row = {}
        for k in sorted(int(x) for x in picks):
            b = cand[k]
            row[b] = 1 if fld.q == 2 else int(rng.integers(1, fld.q))
        return row

    def row_key(row: dict):
        # scalar-normalized support signature to catch duplicate checks
        items = sorted(row.items())
        lead = items[0][1]
        inv = fld.inv(lead)
        return tuple((b, fld.mul(v, inv)) for b, v in items)

    rows: list = [None] * m
    degree_cnt = [0] * n
    keys: dict = {}
    order = list(range(m))
    for c in order:
        for attempt in range(max_retries):
            row = draw_row(c, degree_cnt)
            if row is None:
                raise ValueError("bit-degree cap leaves too few candidates; relax bounds")
            k = row_key(row)
            if k not in keys:
                keys[k] = c
                rows[c] = row
                for b in row:
                    degree_cnt[b] += 1
                break
        else:
            raise ValueError(f"could not draw a fresh check after {max_retries} tries")

    # every bit must touch a check: attach orphans to an in-radius check with room
    bit_candidates: dict = {}
    for c, cand in enumerate(candidates):
        for b in cand:
            bit_candidates.setdefault(b, []).append(c)
    for b in range(n):
        if degree_cnt[b] > 0:
            continue
        attached = False
        for _ in range(max_retries):
            housing = bit_candidates.get(b, [])
            if not housing:
                raise ValueError(f"bit {b} has no check within radius {radius}")
            c = housing[int(rng.integers(len(housing)))]
            row = dict(rows[c])
            row[b] = 1 if fld.q == 2 else int(rng.integers(1, fld.q))
            k = row_key(row)
            if k in keys:
                continue
            del keys[row_key(rows[c])]
            keys[k] = c
            rows[c] = row
            degree_cnt[b] += 1
            attached = True
            break
        if not attached:
            raise ValueError(f"could not attach orphan bit {b} after {max_retries} tries")

    H = SparseFqMatrix(m, n, fld)
    for c, row in enumerate(rows):
        for b, v in row.items():
            H.set_entry(c, b, v)
    inst = CodeInstance(
        kind="classical", fld=fld, n=n, boundary="explicit", H=H,
        provenance={
            "family": "random_local", "A": region.A, "level": region.level,
            "seed": seed, "radius": radius,
        },
    )
    return LocalCodeOnRegion(
        instance=inst, region=region, bit_pos=bit_pos, check_pos=check_pos,
        radius=radius,
        params={
            "bits_per_square": bits_per_square, "checks_per_square": checks_per_square,
            "check_degree": list(check_degree), "max_bit_degree": max_bit_degree,
            "seed": seed,
        },
    )


# -- locality reports -----------------------------------------------------------------


@dataclass
class LocalityReport:
    max_distance: float
    radius: float
    max_cell_population: int
    population_cap: int | None
    distance_ok: bool
    population_ok: bool
    worst_edge: tuple | None

    @property
    def ok(self) -> bool:
        return self.distance_ok and self.population_ok


def embedding_locality(
    H: SparseFqMatrix, check_pos, bit_pos, radius: float, population_cap: int | None = None
) -> LocalityReport:
    """Check every (check, bit) interaction distance and the cell population
    of an embedded code; positions may have any fixed dimension."""
    max_d, worst = -1.0, None
    for r, row in enumerate(H.row_adj):
        pr = check_pos[r]
        for c in row:
            pc = bit_pos[c]
            d = math.dist(pr, pc)
            if d > max_d:
                max_d, worst = d, (r, c, d)
    cells: dict = {}
    for p in list(bit_pos) + list(check_pos):
        key = tuple(math.floor(x) for x in p)
        cells[key] = cells.get(key, 0) + 1
    max_pop = max(cells.values()) if cells else 0
    return LocalityReport(
        max_distance=max_d,
        radius=radius,
        max_cell_population=max_pop,
        population_cap=population_cap,
        distance_ok=max_d <= radius,
        population_ok=population_cap is None or max_pop <= population_cap,
        worst_edge=worst,
    )


def locality_check(code: LocalCodeOnRegion, population_cap: int | None = None) -> LocalityReport:
    if population_cap is None:
        population_cap = code.params.get("bits_per_square", 1) + code.params.get(
            "checks_per_square", 1
        )
    return embedding_locality(code.H, code.check_pos, code.bit_pos, code.radius, population_cap)


# -- hypergraph (tensor) product --------------------------------------------------------


@dataclass
class ChainComplex3:
    """Three-term chain complex X(0) -> X(1) -> X(2) with delta1 @ delta0 = 0.

    From a pair of classical checks H1 (m1 x n1) and H2 (m2 x n2):

        delta0 = (I_n1 (x) H2 ; H1 (x) I_n2),  delta1 = (H1 (x) I_m2 | -I_m1 (x) H2)

    so X(1) splits into an (n1*m2)-block followed by an (m1*n2)-block.  The
    derived quantum instance uses H_X = delta1 and H_Z = delta0^T.
    """

    delta0: SparseFqMatrix
    delta1: SparseFqMatrix
    dims: tuple  # (|X(0)|, |X(1)|, |X(2)|)
    block_split: int  # size of the first X(1) block
    factors: tuple | None = None  # (n1, m1, n2, m2)

    def __post_init__(self):
        if not self.delta1.matmul(self.delta0).is_zero():
            raise ValueError("delta1 @ delta0 != 0: not a chain complex")

    @property
    def boundary1(self) -> SparseFqMatrix:
        return self.delta0.transpose()

    @property
    def boundary2(self) -> SparseFqMatrix:
        return self.delta1.transpose()

    def quantum_instance(self) -> CodeInstance:
        return CodeInstance(
            kind="quantum", fld=self.delta0.field, n=self.dims[1], boundary="explicit",
            H_X=self.delta1, H_Z=self.delta0.transpose(),
            provenance={"family": "chain_complex", "dims": list(self.dims)},
        )


def hypergraph_product(H1: SparseFqMatrix, H2: SparseFqMatrix) -> ChainComplex3:
    """Tensor product of two classical codes as a quantum chain complex.

    Signs use true field negation, so the complex property holds in every
    characteristic.  Index order within tensor blocks is row-major on
    (first factor, second factor).
    """
    if H1.field != H2.field:
        raise ValueError("field mismatch in hypergraph product")
    fld = H1.field
    n1, m1 = H1.cols, H1.rows
    n2, m2 = H2.cols, H2.rows
    I_n1 = SparseFqMatrix.identity(n1, fld)
    I_n2 = SparseFqMatrix.identity(n2, fld)
    I_m1 = SparseFqMatrix.identity(m1, fld)
    I_m2 = SparseFqMatrix.identity(m2, fld)
    delta0 = SparseFqMatrix.vstack([I_n1.kron(H2), H1.kron(I_n2)])
    delta1 = SparseFqMatrix.hstack([H1.kron(I_m2), I_m1.kron(H2).scale(fld.neg(1))])
    return ChainComplex3(
        delta0=delta0,
        delta1=delta1,
        dims=(n1 * n2, n1 * m2 + m1 * n2, m1 * m2),
        block_split=n1 * m2,
        factors=(n1, m1, n2, m2),
    )


def product_embedding(cc: ChainComplex3, bit_pos1, check_pos1, bit_pos2, check_pos2):
    """Coordinates for the product complex: every cell is a pair of factor
    cells, embedded in the product metric (concatenated coordinates)."""
    n1, m1, n2, m2 = cc.factors
    x0 = [tuple(bit_pos1[i]) + tuple(bit_pos2[j]) for i in range(n1) for j in range(n2)]
    x1 = [tuple(bit_pos1[i]) + tuple(check_pos2[c]) for i in range(n1) for c in range(m2)]
    x1 += [tuple(check_pos1[c]) + tuple(bit_pos2[j]) for c in range(m1) for j in range(n2)]
    x2 = [tuple(check_pos1[c]) + tuple(check_pos2[d]) for c in range(m1) for d in range(m2)]
    return x0, x1, x2
