"""Arithmetic in GF(q), q = p^e, with elements encoded as integer indices.

An element is an integer in [0, q) whose base-p digits are the coefficients
of a polynomial in F_p[t] reduced modulo a fixed irreducible monic modulus
of degree e (little-endian: digit i is the coefficient of t^i).  The zero
element is 0 and the multiplicative identity is 1 in every field.

The modulus is chosen deterministically: the monic degree-e polynomial
whose non-leading coefficient vector, read as a little-endian base-p
integer, is smallest among all irreducible candidates.  This keeps element
indices reproducible across runs and machines.
"""

from __future__ import annotations

import numpy as np

MAX_Q = 1 << 16

# Full q x q add/mul tables are only built below this order; larger fields
# fall back to digit arithmetic and exp/log tables of size q.
_TABLE_Q = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_mulmod_fp(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """Product of coefficient lists in F_p[t], reduced mod a monic modulus."""
    e = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: t^e = -(modulus minus leading term)
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c == 0:
            continue
        prod[k] = 0
        for j in range(e):
            prod[k - e + j] = (prod[k - e + j] - c * modulus[j]) % p
    out = prod[:e]
    out += [0] * (e - len(out))
    return out


def _poly_divides(d: list[int], f: list[int], p: int) -> bool:
    """True if monic d divides monic f in F_p[t]."""
    r = list(f)
    while len(r) >= len(d) and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) < len(d):
            break
        c = r[-1]
        shift = len(r) - len(d)
        for i, di in enumerate(d):
            r[shift + i] = (r[shift + i] - c * di) % p
    return not any(r)


def _is_irreducible(coeffs: list[int], p: int) -> bool:
    """Exhaustive trial division of a monic polynomial over F_p."""
    e = len(coeffs) - 1
    if e == 1:
        return True
    if coeffs[0] == 0:  # root at t = 0
        return False
    for deg in range(1, e // 2 + 1):
        for k in range(p**deg):
            d = _digits(k, p, deg) + [1]
            if _poly_divides(d, coeffs, p):
                return False
    return True


def _digits(k: int, p: int, width: int) -> list[int]:
    out = []
    for _ in range(width):
        out.append(k % p)
        k //= p
    return out


def _undigits(ds, p: int) -> int:
    v = 0
    for d in reversed(list(ds)):
        v = v * p + d
    return v


class Field:
    """GF(p^e) with add/mul/inv/pow on integer-indexed elements.

    Instances are immutable after construction and safe to share across
    workers.  For q <= 256 full addition/multiplication tables are
    precomputed (and exposed as numpy arrays for compiled kernels); larger
    fields use digitwise addition plus exp/log multiplication.
    """

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if e < 1:
            raise ValueError(f"e must be >= 1, got {e}")
        q = p**e
        if q > MAX_Q:
            raise ValueError(f"q = {p}^{e} exceeds supported maximum {MAX_Q}")
        self.p = p
        self.e = e
        self.q = q
        self.modulus = self._find_modulus(p, e)
        self._init_tables()

    @staticmethod
    def _find_modulus(p: int, e: int) -> tuple[int, ...]:
        for k in range(p**e):
            coeffs = _digits(k, p, e) + [1]
            if _is_irreducible(coeffs, p):
                return tuple(coeffs)
        raise RuntimeError(f"no irreducible polynomial of degree {e} over F_{p}")

    # -- core digit-level ops ------------------------------------------------

    def _add_raw(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.e == 1:
            return (a + b) % self.p
        da, db = _digits(a, self.p, self.e), _digits(b, self.p, self.e)
        return _undigits(((x + y) % self.p for x, y in zip(da, db)), self.p)

    def _neg_raw(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.e == 1:
            return (-a) % self.p
        return _undigits(((-x) % self.p for x in _digits(a, self.p, self.e)), self.p)

    def _mul_raw(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a * b) % self.p
        da, db = _digits(a, self.p, self.e), _digits(b, self.p, self.e)
        return _undigits(_poly_mulmod_fp(da, db, list(self.modulus), self.p), self.p)

    def _init_tables(self):
        q = self.q
        if q <= _TABLE_Q:
            add = np.empty((q, q), dtype=np.uint16)
            mul = np.empty((q, q), dtype=np.uint16)
            for a in range(q):
                for b in range(a, q):
                    s = self._add_raw(a, b)
                    m = self._mul_raw(a, b)
                    add[a, b] = add[b, a] = s
                    mul[a, b] = mul[b, a] = m
            self._add_t, self._mul_t = add, mul
            self._neg_t = np.array([self._neg_raw(a) for a in range(q)], dtype=np.uint16)
        else:
            self._add_t = self._mul_t = self._neg_t = None
        # exp/log w.r.t. a fixed generator; also yields inverses for any q
        g = self._find_generator()
        exp = np.empty(2 * (q - 1), dtype=np.uint32)
        log = np.zeros(q, dtype=np.uint32)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            exp[i + q - 1] = x
            log[x] = i
            x = self._mul_raw(x, g)
        self.generator = g
        self._exp, self._log = exp, log
        inv = np.zeros(q, dtype=np.uint16 if q <= MAX_Q else np.uint32)
        for a in range(1, q):
            inv[a] = exp[(q - 1 - log[a]) % (q - 1)]
        self._inv_t = inv

    def _find_generator(self) -> int:
        n = self.q - 1
        if n == 1:
            return 1
        factors = []
        m = n
        d = 2
        while d * d <= m:
            if m % d == 0:
                factors.append(d)
                while m % d == 0:
                    m //= d
            d += 1
        if m > 1:
            factors.append(m)
        for g in range(2, self.q):
            if all(self._pow_raw(g, n // f) != 1 for f in factors):
                return g
        raise RuntimeError("no multiplicative generator found")

    def _pow_raw(self, a: int, k: int) -> int:
        r = 1
        while k:
            if k & 1:
                r = self._mul_raw(r, a)
            a = self._mul_raw(a, a)
            k >>= 1
        return r

    # -- public element operations --------------------------------------------

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ValueError(f"element index {a} out of range for GF({self.q})")
        return a

    def add(self, a: int, b: int) -> int:
        if self._add_t is not None:
            return int(self._add_t[a, b])
        return self._add_raw(a, b)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def neg(self, a: int) -> int:
        if self._neg_t is not None:
            return int(self._neg_t[a])
        return self._neg_raw(a)

    def mul(self, a: int, b: int) -> int:
        if self._mul_t is not None:
            return int(self._mul_t[a, b])
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        return int(self._inv_t[a])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k == 0:
                return 1
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        lg = int(self._log[a]) * k % (self.q - 1)
        return int(self._exp[lg])

    def frobenius(self, a: int, j: int = 1) -> int:
        """a^(p^j), the j-fold Frobenius image."""
        return self.pow(a, pow(self.p, j, self.q - 1) if self.q > 2 else 1)

    def elements(self):
        return range(self.q)

    def tables(self):
        """(add, mul, neg, inv) numpy tables for compiled kernels (q <= 256)."""
        if self._add_t is None:
            raise ValueError(f"element tables not available for q = {self.q} > {_TABLE_Q}")
        return self._add_t, self._mul_t, self._neg_t, self._inv_t.astype(np.uint16)

    # -- misc ------------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __repr__(self):
        if self.e == 1:
            return f"Field(p={self.p})"
        return f"Field(p={self.p}, e={self.e}, modulus={self.modulus_str()})"

    def modulus_str(self) -> str:
        parts = []
        for i, c in enumerate(self.modulus):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                v = "t" if i == 1 else f"t^{i}"
                parts.append(v if c == 1 else f"{c}*{v}")
        return "+".join(reversed(parts))


_field_cache: dict[tuple[int, int], Field] = {}


def field_make(p: int, e: int = 1) -> Field:
    """Shared, cached Field instance for GF(p^e)."""
    key = (p, e)
    if key not in _field_cache:
        _field_cache[key] = Field(p, e)
    return _field_cache[key]
