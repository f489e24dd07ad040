"""Sparse multivariate Laurent polynomials over GF(q), and matrices of them.

Terms are stored as a map from integer exponent vectors (tuples, negative
exponents allowed) to nonzero field-element indices.  Polynomials carry
their field and ambient variable count; mixing dimensions or fields raises.

Text form: terms joined by "+", each term "c*x^a*y^b" with the coefficient
index omitted when it is 1 and exponent suffixes omitted when 1.  Variables
are named x, y, z for up to three dimensions and x1..xD beyond that.
Serialization orders terms lexicographically by exponent vector, so the
round trip parse(str(f)) == f is exact.
"""

from __future__ import annotations

from .fields import Field

Monomial = tuple  # exponent vector of length dim


def var_names(dim: int) -> tuple[str, ...]:
    if dim <= 3:
        return ("x", "y", "z")[:dim]
    return tuple(f"x{i+1}" for i in range(dim))


class LaurentPoly:
    """Finite F_q-linear combination of monomials x^v, v in Z^dim."""

    __slots__ = ("field", "dim", "terms")

    def __init__(self, field: Field, dim: int, terms: dict | None = None):
        self.field = field
        self.dim = dim
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                if len(mono) != dim:
                    raise ValueError(f"monomial {mono} has length != dim {dim}")
                c = coeff % field.q if coeff >= field.q or coeff < 0 else coeff
                if c:
                    clean[tuple(mono)] = c
        self.terms = clean

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, dim: int) -> "LaurentPoly":
        return cls(field, dim, {})

    @classmethod
    def one(cls, field: Field, dim: int) -> "LaurentPoly":
        return cls(field, dim, {(0,) * dim: 1})

    @classmethod
    def monomial(cls, field: Field, dim: int, exps, coeff: int = 1) -> "LaurentPoly":
        return cls(field, dim, {tuple(exps): coeff})

    # -- basic queries ----------------------------------------------------------

    @property
    def weight(self) -> int:
        """Number of nonzero terms, |f|."""
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, mono) -> int:
        return self.terms.get(tuple(mono), 0)

    def support(self):
        return self.terms.keys()

    def sorted_terms(self):
        return sorted(self.terms.items())

    def exponent_span(self) -> tuple[tuple[int, int], ...]:
        """(min, max) exponent per variable; ((0,0),...) for the zero poly."""
        if not self.terms:
            return tuple((0, 0) for _ in range(self.dim))
        monos = list(self.terms)
        return tuple(
            (min(m[i] for m in monos), max(m[i] for m in monos)) for i in range(self.dim)
        )

    def _check_compatible(self, other: "LaurentPoly"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.field != other.field:
            raise ValueError("field mismatch")

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_compatible(other)
        fld = self.field
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = fld.add(out.get(mono, 0), c)
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return LaurentPoly(fld, self.dim, out)

    def __neg__(self) -> "LaurentPoly":
        fld = self.field
        return LaurentPoly(fld, self.dim, {m: fld.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_compatible(other)
        fld = self.field
        # iterate over the sparser factor on the outside
        a, b = (self.terms, other.terms)
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                mono = tuple(i + j for i, j in zip(ma, mb))
                s = fld.add(out.get(mono, 0), fld.mul(ca, cb))
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return LaurentPoly(fld, self.dim, out)

    def scale(self, c: int) -> "LaurentPoly":
        fld = self.field
        if c == 0:
            return LaurentPoly.zero(fld, self.dim)
        return LaurentPoly(fld, self.dim, {m: fld.mul(a, c) for m, a in self.terms.items()})

    def shift(self, exps) -> "LaurentPoly":
        """Multiply by the monomial x^exps."""
        exps = tuple(exps)
        return LaurentPoly(
            self.field,
            self.dim,
            {tuple(i + j for i, j in zip(m, exps)): c for m, c in self.terms.items()},
        )

    def conj(self) -> "LaurentPoly":
        """Substitute every variable by its inverse (negate all exponents)."""
        return LaurentPoly(
            self.field, self.dim, {tuple(-i for i in m): c for m, c in self.terms.items()}
        )

    def frobenius_power(self, j: int) -> "LaurentPoly":
        """f^(p^j) via the characteristic-p identity: termwise exponent scaling."""
        fld = self.field
        s = fld.p**j
        return LaurentPoly(
            fld,
            self.dim,
            {tuple(i * s for i in m): fld.frobenius(c, j) for m, c in self.terms.items()},
        )

    def __pow__(self, k: int) -> "LaurentPoly":
        """f^k for k >= 0, splitting k in base p so huge characteristic-p powers
        cost only a few genuine multiplications."""
        if k < 0:
            raise ValueError("negative polynomial power")
        fld = self.field
        result = LaurentPoly.one(fld, self.dim)
        if k == 0:
            return result
        j = 0
        kk = k
        while kk:
            d = kk % fld.p
            if d:
                block = self.frobenius_power(j)
                for _ in range(d):
                    result = result * block
            kk //= fld.p
            j += 1
        return result

    # -- comparison / hashing ------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPoly)
            and self.dim == other.dim
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.dim, self.field, tuple(self.sorted_terms())))

    # -- text form -------------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = var_names(self.dim)
        parts = []
        for mono, c in self.sorted_terms():
            factors = []
            for name, exp in zip(names, mono):
                if exp == 0:
                    continue
                factors.append(name if exp == 1 else f"{name}^{exp}")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("*".join([str(c)] + factors))
        return "+".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"


def poly_parse(text: str, field: Field, dim: int) -> LaurentPoly:
    """Parse the textual polynomial form produced by str(LaurentPoly)."""
    names = {n: i for i, n in enumerate(var_names(dim))}
    text = text.replace(" ", "")
    if text in ("", "0"):
        return LaurentPoly.zero(field, dim)
    terms: dict = {}
    for chunk in text.split("+"):
        if not chunk:
            raise ValueError(f"empty term in polynomial string {text!r}")
        coeff = 1
        exps = [0] * dim
        for factor in chunk.split("*"):
            if factor.isdigit():
                coeff = field.mul(coeff, field.check(int(factor)))
                continue
            if "^" in factor:
                name, _, etxt = factor.partition("^")
                exp = int(etxt)
            else:
                name, exp = factor, 1
            if name not in names:
                raise ValueError(f"unknown variable {name!r} for dimension {dim}")
            exps[names[name]] += exp
        mono = tuple(exps)
        prev = terms.get(mono, 0)
        s = field.add(prev, coeff)
        if s:
            terms[mono] = s
        else:
            terms.pop(mono, None)
    return LaurentPoly(field, dim, terms)


class PolyMatrix:
    """Dense grid of Laurent polynomials sharing one field and dimension."""

    __slots__ = ("rows", "cols", "entries", "field", "dim")

    def __init__(self, entries: list[list[LaurentPoly]]):
        if not entries or not entries[0]:
            raise ValueError("PolyMatrix needs at least one entry")
        self.rows = len(entries)
        self.cols = len(entries[0])
        first = entries[0][0]
        self.field = first.field
        self.dim = first.dim
        for row in entries:
            if len(row) != self.cols:
                raise ValueError("ragged rows in PolyMatrix")
            for p in row:
                if p.dim != self.dim or p.field != self.field:
                    raise ValueError("mixed dimension or field in PolyMatrix")
        self.entries = entries

    @classmethod
    def from_rows(cls, rows) -> "PolyMatrix":
        return cls([list(r) for r in rows])

    @classmethod
    def identity(cls, field: Field, dim: int, n: int) -> "PolyMatrix":
        one = LaurentPoly.one(field, dim)
        zero = LaurentPoly.zero(field, dim)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    def __getitem__(self, rc) -> LaurentPoly:
        r, c = rc
        return self.entries[r][c]

    def matmul(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        zero = LaurentPoly.zero(self.field, self.dim)
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if a.terms and b.terms:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return self.matmul(other)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def conj(self) -> "PolyMatrix":
        return PolyMatrix([[p.conj() for p in row] for row in self.entries])

    def conj_transpose(self) -> "PolyMatrix":
        return self.conj().transpose()

    def is_zero(self) -> bool:
        return all(p.is_zero() for row in self.entries for p in row)

    def nonzero_entries(self):
        return [
            (i, j, self.entries[i][j])
            for i in range(self.rows)
            for j in range(self.cols)
            if not self.entries[i][j].is_zero()
        ]

    def max_term_count(self) -> int:
        return max((p.weight for row in self.entries for p in row), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and all(
                self.entries[i][j] == other.entries[i][j]
                for i in range(self.rows)
                for j in range(self.cols)
            )
        )

    def __repr__(self):
        body = "; ".join(", ".join(str(p) for p in row) for row in self.entries)
        return f"PolyMatrix[{body}]"


def random_poly(field: Field, dim: int, monomials, rng, nonzero: bool = True) -> LaurentPoly:
    """Random linear combination of the given monomials (exponent tuples)."""
    monos = [tuple(m) for m in monomials]
    while True:
        terms = {m: int(rng.integers(0, field.q)) for m in monos}
        p = LaurentPoly(field, dim, terms)
        if not nonzero or not p.is_zero():
            return p
