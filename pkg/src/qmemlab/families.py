"""Symbolic translation-invariant code families and lattice instantiation.

A translation-invariant code is specified per lattice site by small
matrices of Laurent polynomials: ``h`` (bits x checks) for classical codes,
``h_X`` and ``h_Z`` (qubits x checks) for quantum CSS codes, which must
satisfy conj(h_X)^T  h_Z = 0.  Instantiating on a finite lattice produces
explicit sparse parity-check matrices.

Matrix conventions (fixed here because the literature varies):

* ``H_X`` detects X-type words; its rows are the Z-checks, so the X-sector
  energy of a word c is the number of nonzero entries of H_X @ c.
  Symbolically H_X realizes conj(h_Z)^T and H_Z realizes conj(h_X)^T.
* Classical codes use the plain transpose: H realizes h^T, so the syndrome
  of a one-site-per-cell code with h = (f) is multiplication by f itself.
* On a torus, exponents reduce modulo L (L may differ per axis).  With
  open-interior ("open") boundaries all cells inside the box are kept and a
  check survives only if every cell it touches lies inside the box.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import InitVar, dataclass, field as dc_field

from .fields import Field, field_make
from .laurent import LaurentPoly, PolyMatrix, poly_parse
from .linalg import SparseFqMatrix

TORUS = "torus"
OPEN = "open-interior"


@dataclass(frozen=True)
class TransInvCode:
    """Symbolic code: per-site polynomial matrices plus bookkeeping."""

    kind: str  # "classical" | "quantum"
    dim: int
    fld: Field
    h: PolyMatrix | None = None
    h_X: PolyMatrix | None = None
    h_Z: PolyMatrix | None = None
    family: str = "generic"
    params: dict = dc_field(default_factory=dict)
    check: InitVar[bool] = True  # skip only to inspect invalid specs via validate_css

    def __post_init__(self, check: bool):
        if self.kind == "classical":
            if self.h is None:
                raise ValueError("classical code needs h")
        elif self.kind == "quantum":
            if self.h_X is None or self.h_Z is None:
                raise ValueError("quantum code needs h_X and h_Z")
            if self.h_X.rows != self.h_Z.rows:
                raise ValueError("h_X and h_Z must agree on qubits per site")
            if check:
                prod = self.h_X.conj_transpose() @ self.h_Z
                if not prod.is_zero():
                    bad = [(i, j, str(p)) for i, j, p in prod.nonzero_entries()]
                    raise ValueError(
                        f"CSS condition violated: conj(h_X)^T h_Z has entries {bad}"
                    )
        else:
            raise ValueError(f"kind must be 'classical' or 'quantum', got {self.kind!r}")

    @property
    def n_site(self) -> int:
        return self.h.rows if self.kind == "classical" else self.h_X.rows

    @property
    def m_site(self) -> int:
        if self.kind != "classical":
            raise ValueError("m_site is a classical notion")
        return self.h.cols

    @property
    def mx_site(self) -> int:
        return self.h_X.cols

    @property
    def mz_site(self) -> int:
        return self.h_Z.cols

    def transpose(self) -> "TransInvCode":
        """Classical code induced by h^T (checks and bits exchanged)."""
        if self.kind != "classical":
            raise ValueError("transpose is defined for classical codes")
        return TransInvCode(
            "classical", self.dim, self.fld, h=self.h.transpose(),
            family=self.family + "-transpose", params=dict(self.params),
        )


@dataclass
class CssReport:
    valid: bool
    product: PolyMatrix
    offending: list


def validate_css(code: TransInvCode) -> CssReport:
    """Report-style check of conj(h_X)^T h_Z = 0 with offenders pinpointed."""
    if code.kind != "quantum":
        raise ValueError("validate_css needs a quantum code")
    prod = code.h_X.conj_transpose() @ code.h_Z
    offending = [(i, j, str(p)) for i, j, p in prod.nonzero_entries()]
    return CssReport(valid=not offending, product=prod, offending=offending)


# -- constructors --------------------------------------------------------------


def make_toric(fld: Field | None = None) -> TransInvCode:
    """2D toric code: one X-check, two qubits, one Z-check per site."""
    fld = fld or field_make(2)
    P = lambda s: poly_parse(s, fld, 2)
    h_X = PolyMatrix([[P("1+x^-1")], [P("1+y^-1")]])
    h_Z = PolyMatrix([[P("1+y")], [P("1+x")]])
    return TransInvCode("quantum", 2, fld, h_X=h_X, h_Z=h_Z, family="toric")


def make_haah_family(f: LaurentPoly, g: LaurentPoly) -> TransInvCode:
    """Two-polynomial square construction: conj(h_X)^T = (f g), h_Z = (g; -f)."""
    if f.dim != g.dim or f.field != g.field:
        raise ValueError("f and g must share dimension and field")
    if f.dim not in (2, 3):
        raise ValueError("family is defined for 2 or 3 lattice dimensions")
    h_X = PolyMatrix([[f.conj()], [g.conj()]])
    h_Z = PolyMatrix([[g], [-f]])
    return TransInvCode(
        "quantum", f.dim, f.field, h_X=h_X, h_Z=h_Z,
        family="haah", params={"f": str(f), "g": str(g)},
    )


def make_bipartite_product(m1: int, m2: int, f: dict, g: dict) -> TransInvCode:
    """Quantum family from a product of two complete bipartite graphs.

    ``f`` maps 1-based edge labels (i1, j1) of the first graph to Laurent
    polynomials, ``g`` likewise for (i2, j2) of the second.  Per site there
    are m1*m2 X-checks, 2*m1*m2 qubits and m1*m2 Z-checks; qubit rows come
    in two blocks, (j1, i2) then (i1, j2), each ordered row-major, and the
    same ordering is used for check columns.
    """
    if m1 < 1 or m2 < 1:
        raise ValueError("m1 and m2 must be >= 1")
    need_f = {(i, j) for i in range(1, m1 + 1) for j in range(1, m1 + 1)}
    need_g = {(i, j) for i in range(1, m2 + 1) for j in range(1, m2 + 1)}
    if set(f) != need_f:
        raise ValueError(f"f must provide exactly the edges {sorted(need_f)}")
    if set(g) != need_g:
        raise ValueError(f"g must provide exactly the edges {sorted(need_g)}")
    polys = list(f.values()) + list(g.values())
    fld, dim = polys[0].field, polys[0].dim
    if any(p.field != fld or p.dim != dim for p in polys):
        raise ValueError("all edge polynomials must share field and dimension")
    zero = LaurentPoly.zero(fld, dim)

    block1 = [(j1, i2) for j1 in range(1, m1 + 1) for i2 in range(1, m2 + 1)]
    block2 = [(i1, j2) for i1 in range(1, m1 + 1) for j2 in range(1, m2 + 1)]
    xchecks = [(i1, i2) for i1 in range(1, m1 + 1) for i2 in range(1, m2 + 1)]
    zchecks = [(j1, j2) for j1 in range(1, m1 + 1) for j2 in range(1, m2 + 1)]

    n_site = len(block1) + len(block2)
    hx = [[zero] * len(xchecks) for _ in range(n_site)]
    hz = [[zero] * len(zchecks) for _ in range(n_site)]
    for ci, (i1, i2) in enumerate(xchecks):
        for j1 in range(1, m1 + 1):
            hx[block1.index((j1, i2))][ci] = f[(i1, j1)].conj()
        for j2 in range(1, m2 + 1):
            hx[len(block1) + block2.index((i1, j2))][ci] = g[(i2, j2)].conj()
    for ci, (j1, j2) in enumerate(zchecks):
        for i2 in range(1, m2 + 1):
            hz[block1.index((j1, i2))][ci] = g[(i2, j2)]
        for i1 in range(1, m1 + 1):
            hz[len(block1) + block2.index((i1, j2))][ci] = -f[(i1, j1)]
    return TransInvCode(
        "quantum", dim, fld, h_X=PolyMatrix(hx), h_Z=PolyMatrix(hz),
        family="bipartite_product",
        params={
            "m1": m1, "m2": m2,
            "f": {f"{i},{j}": str(p) for (i, j), p in sorted(f.items())},
            "g": {f"{i},{j}": str(p) for (i, j), p in sorted(g.items())},
        },
    )


def make_classical_grid(m: int, f: dict) -> TransInvCode:
    """2D classical family with h[i][j] = f[(i,j)] (1-based), m bits and
    m checks per site."""
    if m < 1:
        raise ValueError("m must be >= 1")
    need = {(i, j) for i in range(1, m + 1) for j in range(1, m + 1)}
    if set(f) != need:
        raise ValueError(f"f must provide exactly the entries {sorted(need)}")
    polys = list(f.values())
    fld, dim = polys[0].field, polys[0].dim
    if dim != 2:
        raise ValueError("classical grid family lives in 2 dimensions")
    if any(p.field != fld or p.dim != dim for p in polys):
        raise ValueError("all entries must share field and dimension")
    h = PolyMatrix([[f[(i, j)] for j in range(1, m + 1)] for i in range(1, m + 1)])
    return TransInvCode(
        "classical", 2, fld, h=h, family="classical_grid",
        params={"m": m, "f": {f"{i},{j}": str(p) for (i, j), p in sorted(f.items())}},
    )


def make_ising(dim: int, fld: Field | None = None) -> TransInvCode:
    """Nearest-neighbour equality checks: the Ising baseline in 1 or 2 dimensions."""
    fld = fld or field_make(2)
    if dim == 1:
        h = PolyMatrix([[poly_parse("1+x", fld, 1)]])
    elif dim == 2:
        h = PolyMatrix([[poly_parse("1+x", fld, 2), poly_parse("1+y", fld, 2)]])
    else:
        raise ValueError(f"Ising baseline supports dim 1 or 2, got {dim}")
    return TransInvCode("classical", dim, fld, h=h, family="ising", params={"dim": dim})


# -- Tanner-graph classical codes --------------------------------------------------


@dataclass
class TannerSpec:
    """Explicit bipartite interaction list for hand-built classical codes."""

    n: int
    m: int
    entries: list  # (check, coordinate, coefficient)

    def __post_init__(self):
        seen: dict = {}
        for chk, coord, coeff in self.entries:
            if not (0 <= chk < self.m and 0 <= coord < self.n):
                raise ValueError(f"entry ({chk},{coord}) out of range")
            if coeff == 0:
                raise ValueError("TannerSpec coefficients must be nonzero")
            key = (chk, coord)
            if key in seen and seen[key] != coeff:
                raise ValueError(f"conflicting coefficients for {key}")
            seen[key] = coeff
        self._dedup = seen

    def to_dict(self) -> dict:
        return {
            "family": "tanner", "n": self.n, "m": self.m,
            "entries": [[c, i, v] for (c, i), v in sorted(self._dedup.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TannerSpec":
        return cls(d["n"], d["m"], [tuple(e) for e in d["entries"]])


def classical_from_tanner(spec: TannerSpec, fld: Field) -> "CodeInstance":
    H = SparseFqMatrix(spec.m, spec.n, fld)
    for (chk, coord), coeff in sorted(spec._dedup.items()):
        H.set_entry(chk, coord, fld.check(coeff))
    return CodeInstance(
        kind="classical", fld=fld, n=spec.n, boundary="explicit", H=H,
        provenance={"family": "tanner", "n": spec.n, "m": spec.m},
    )


# -- finite-lattice instantiation ----------------------------------------------------


@dataclass
class CodeInstance:
    """Explicit sparse parity checks on a finite coordinate set.

    For quantum instances ``H_X`` rows are Z-checks and ``H_Z`` rows are
    X-checks (see the module docstring).  Lattice-derived instances carry
    coordinate maps: coordinate index = flat_site * n_site + slot with sites
    flattened in row-major order.
    """

    kind: str
    fld: Field
    n: int
    boundary: str
    H: SparseFqMatrix | None = None
    H_X: SparseFqMatrix | None = None
    H_Z: SparseFqMatrix | None = None
    L: tuple | None = None
    n_site: int = 1
    coord_sites: list | None = None
    check_sites: dict = dc_field(default_factory=dict)  # label -> list of (site, slot)
    provenance: dict = dc_field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.fld

    def site_of(self, idx: int):
        if self.coord_sites is None:
            raise ValueError("instance has no lattice coordinates")
        return self.coord_sites[idx]

    def index_of(self, site, slot: int = 0) -> int:
        if self.L is None:
            raise ValueError("instance has no lattice coordinates")
        flat = 0
        for s, l in zip(site, self.L):
            flat = flat * l + (s % l)
        return flat * self.n_site + slot

    def matrices(self):
        if self.kind == "classical":
            return {"H": self.H}
        return {"H_X": self.H_X, "H_Z": self.H_Z}


def _as_L(L, dim) -> tuple:
    if isinstance(L, int):
        return (L,) * dim
    L = tuple(int(x) for x in L)
    if len(L) != dim:
        raise ValueError(f"need {dim} lattice lengths, got {len(L)}")
    return L


def _site_iter(L):
    return itertools.product(*(range(l) for l in L))


def _flat(site, L) -> int:
    f = 0
    for s, l in zip(site, L):
        f = f * l + s
    return f


def _build_sector(M: PolyMatrix, L, bc: str, n_site: int, fld: Field):
    """Instantiate the polynomial check matrix M (check slots x cell slots):
    check (u, j) touches cell (u - v, i) with the coefficient of x^v in M[j][i]."""
    dim = M.dim
    n_total = n_site * _prod(L)
    supports = []
    for j in range(M.rows):
        terms = []
        for i in range(M.cols):
            for mono, coeff in M.entries[j][i].sorted_terms():
                terms.append((mono, i, coeff))
        supports.append(terms)
    if bc == OPEN:
        ranges = []
        for j, terms in enumerate(supports):
            if not terms:
                ranges.append(None)
                continue
            lo = [min(t[0][d] for t in terms) for d in range(dim)]
            hi = [max(t[0][d] for t in terms) for d in range(dim)]
            for d in range(dim):
                if hi[d] - lo[d] > L[d] - 1:
                    raise ValueError(
                        f"L={L} too small for open-interior: check slot {j} spans "
                        f"{hi[d]-lo[d]} cells on axis {d}"
                    )
            ranges.append((lo, hi))
    rows = []
    check_sites = []
    for u in _site_iter(L):
        for j, terms in enumerate(supports):
            if not terms:
                continue
            if bc == OPEN:
                lo, hi = ranges[j]
                if any(not (hi[d] <= u[d] <= L[d] - 1 + lo[d]) for d in range(dim)):
                    continue
            entries = []
            for mono, i, coeff in terms:
                w = tuple((u[d] - mono[d]) % L[d] for d in range(dim))
                entries.append((_flat(w, L) * n_site + i, coeff))
            rows.append(entries)
            check_sites.append((u, j))
    H = SparseFqMatrix(len(rows), n_total, fld)
    for r, entries in enumerate(rows):
        for c, v in entries:
            H.add_entry(r, c, v)
    return H, check_sites


def _prod(xs) -> int:
    out = 1
    for x in xs:
        out *= x
    return out


def instantiate(code: TransInvCode, L, bc: str = TORUS) -> CodeInstance:
    """Explicit parity-check matrices for the code on a finite box of shape L."""
    if bc not in (TORUS, OPEN, "open"):
        raise ValueError(f"boundary must be '{TORUS}' or '{OPEN}', got {bc!r}")
    bc = OPEN if bc == "open" else bc
    L = _as_L(L, code.dim)
    if any(l < 2 for l in L):
        raise ValueError("lattice lengths must be >= 2")
    n_site = code.n_site
    fld = code.fld
    coord_sites = [
        (site, slot) for site in _site_iter(L) for slot in range(n_site)
    ]
    prov = {"family": code.family, "params": code.params, "L": list(L), "bc": bc}
    if code.kind == "classical":
        H, chk = _build_sector(code.h.transpose(), L, bc, n_site, fld)
        return CodeInstance(
            kind="classical", fld=fld, n=n_site * _prod(L), boundary=bc, H=H,
            L=L, n_site=n_site, coord_sites=coord_sites,
            check_sites={"classical": chk}, provenance=prov,
        )
    HX, zchk = _build_sector(code.h_Z.conj_transpose(), L, bc, n_site, fld)
    HZ, xchk = _build_sector(code.h_X.conj_transpose(), L, bc, n_site, fld)
    return CodeInstance(
        kind="quantum", fld=fld, n=n_site * _prod(L), boundary=bc,
        H_X=HX, H_Z=HZ, L=L, n_site=n_site, coord_sites=coord_sites,
        check_sites={"Z": zchk, "X": xchk}, provenance=prov,
    )


# -- code-spec files --------------------------------------------------------------------


def code_to_dict(code: TransInvCode) -> dict:
    d = {
        "family": code.family,
        "kind": code.kind,
        "dim": code.dim,
        "field": {"p": code.fld.p, "e": code.fld.e},
        "params": code.params,
    }
    if code.kind == "classical":
        d["h"] = [[str(p) for p in row] for row in code.h.entries]
    else:
        d["h_X"] = [[str(p) for p in row] for row in code.h_X.entries]
        d["h_Z"] = [[str(p) for p in row] for row in code.h_Z.entries]
    return d


def code_from_dict(d: dict) -> TransInvCode:
    fld = field_make(d["field"]["p"], d["field"]["e"])
    dim = d["dim"]
    family = d.get("family", "generic")
    params = d.get("params", {})
    if family == "toric":
        return make_toric(fld)
    if family == "ising":
        return make_ising(params["dim"], fld)
    if family == "haah":
        return make_haah_family(
            poly_parse(params["f"], fld, dim), poly_parse(params["g"], fld, dim)
        )
    if family == "bipartite_product":
        f = {_edge_key(k): poly_parse(v, fld, dim) for k, v in params["f"].items()}
        g = {_edge_key(k): poly_parse(v, fld, dim) for k, v in params["g"].items()}
        return make_bipartite_product(params["m1"], params["m2"], f, g)
    if family == "classical_grid":
        f = {_edge_key(k): poly_parse(v, fld, dim) for k, v in params["f"].items()}
        return make_classical_grid(params["m"], f)
    # generic: rebuild from explicit matrices
    def pm(key):
        return PolyMatrix([[poly_parse(s, fld, dim) for s in row] for row in d[key]])

    if d["kind"] == "classical":
        return TransInvCode("classical", dim, fld, h=pm("h"), family=family, params=params)
    return TransInvCode(
        "quantum", dim, fld, h_X=pm("h_X"), h_Z=pm("h_Z"), family=family, params=params
    )


def _edge_key(k: str) -> tuple:
    i, j = k.split(",")
    return int(i), int(j)


def save_code(code: TransInvCode, path):
    with open(path, "w") as fh:
        json.dump(code_to_dict(code), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_code(path) -> TransInvCode:
    with open(path) as fh:
        return code_from_dict(json.load(fh))
