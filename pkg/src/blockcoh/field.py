"""Finite fields GF(p^m) with vectorised numpy arithmetic.

Elements are encoded as integers ``0 <= a < q``; the base-p digits of ``a``
are the coefficients (lowest degree first) of a polynomial modulo the
field's defining polynomial.  All arithmetic is exact.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_ORDER = 1 << 16
_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# -- polynomials over the prime field, coefficient lists lowest degree first --

def _trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mod(f, g, p):
    f = _trim(f)
    g = _trim(g)
    inv_lead = pow(g[-1], p - 2, p)
    while len(f) >= len(g):
        c = f[-1] * inv_lead % p
        shift = len(f) - len(g)
        for k, gk in enumerate(g):
            f[shift + k] = (f[shift + k] - c * gk) % p
        f = _trim(f)
    return f


def poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def poly_sub(f, g, p):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _trim([(a - b) % p for a, b in zip(f, g)])


def poly_gcd(f, g, p):
    f, g = _trim(f), _trim(g)
    while g:
        f, g = g, poly_mod(f, g, p)
    return f


def poly_powmod(f, e, mod, p):
    result = [1]
    base = poly_mod(f, mod, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), mod, p)
        base = poly_mod(poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(f, p) -> bool:
    """No irreducible factor of degree <= deg/2, tested via gcd with x^(p^d) - x."""
    f = _trim(f)
    m = len(f) - 1
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        xpd = poly_powmod([0, 1], p ** d, f, p)
        if len(poly_gcd(f, poly_sub(xpd, [0, 1], p), p)) > 1:
            return False
    return True


def least_irreducible(p: int, m: int):
    """Monic irreducible of degree m with the smallest integer code."""
    if m == 1:
        return [0, 1]
    for code in range(p ** m):
        coeffs = [(code // p ** k) % p for k in range(m)] + [1]
        if coeffs[0] == 0:
            continue
        if is_irreducible(coeffs, p):
            return coeffs
    raise ValueError(f"no irreducible polynomial of degree {m} over GF({p})")


class GF:
    """The field GF(p^m); instances are cached so equal fields are identical."""

    def __new__(cls, p: int, m: int = 1):
        return _make_field(p, m)

    def __reduce__(self):
        return (GF, (self.p, self.m))

    @classmethod
    def _build(cls, p, m):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if p ** m > MAX_ORDER:
            raise ValueError(f"GF({p}^{m}) exceeds the supported order {MAX_ORDER}")
        self = object.__new__(cls)
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = tuple(least_irreducible(p, m))
        self._init_tables()
        return self

    def _init_tables(self):
        p, m, q = self.p, self.m, self.q
        self.dtype = np.int64
        # powers of a primitive element, found by brute force
        self.exp = None
        self.log = None
        self.add_table = None
        self.mul_table = None
        if m == 1:
            self.inv_table = np.zeros(q, dtype=np.int64)
            for a in range(1, q):
                self.inv_table[a] = pow(a, p - 2, p)
            return
        digits = self.digits(np.arange(q))
        # multiplication of all pairs via polynomial products reduced mod modulus
        for g in range(2, q):
            seq = [1]
            x = 1
            for _ in range(q - 2):
                x = self._mul_scalar_poly(x, g)
                if x == 1:
                    break
                seq.append(x)
            if len(seq) == q - 1:
                break
        self.exp = np.array(seq + seq, dtype=np.int64)
        self.log = np.zeros(q, dtype=np.int64)
        self.log[np.array(seq)] = np.arange(q - 1)
        self.inv_table = np.zeros(q, dtype=np.int64)
        nz = np.arange(1, q)
        self.inv_table[nz] = self.exp[(q - 1 - self.log[nz]) % (q - 1)]
        if q <= _TABLE_LIMIT:
            a = np.arange(q)
            self.add_table = self.encode((digits[:, None, :] + digits[None, :, :]) % p)
            self.mul_table = self._mul_log(a[:, None], a[None, :])

    def _mul_scalar_poly(self, a, b):
        p, m = self.p, self.m
        fa = [(a // p ** k) % p for k in range(m)]
        fb = [(b // p ** k) % p for k in range(m)]
        prod = poly_mod(poly_mul(fa, fb, p), list(self.modulus), p)
        return sum(c * p ** k for k, c in enumerate(prod))

    def _mul_log(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = np.zeros(a.shape, dtype=np.int64)
        mask = (a != 0) & (b != 0)
        out[mask] = self.exp[self.log[a[mask]] + self.log[b[mask]]]
        return out

    # -- encoding --
    def digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        powers = self.p ** np.arange(self.m, dtype=np.int64)
        return (a[..., None] // powers) % self.p

    def encode(self, d):
        d = np.asarray(d, dtype=np.int64)
        powers = self.p ** np.arange(self.m, dtype=np.int64)
        return (d * powers).sum(axis=-1)

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    @property
    def name(self):
        return f"GF({self.q})"

    # -- elementwise arithmetic on int arrays --
    def asarray(self, a):
        return np.asarray(a, dtype=np.int64)

    def from_int(self, k):
        """Image of an integer (array) in the prime subfield."""
        return np.asarray(k, dtype=np.int64) % self.p

    def add(self, a, b):
        a, b = self.asarray(a), self.asarray(b)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self.add_table is not None:
            return self.add_table[a, b]
        return self.encode((self.digits(a) + self.digits(b)) % self.p)

    def neg(self, a):
        a = self.asarray(a)
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a.copy()
        return self.encode((-self.digits(a)) % self.p)

    def sub(self, a, b):
        if self.m == 1:
            return (self.asarray(a) - self.asarray(b)) % self.p
        if self.p == 2:
            return self.asarray(a) ^ self.asarray(b)
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a, b = self.asarray(a), self.asarray(b)
        if self.m == 1:
            return (a * b) % self.p
        if self.mul_table is not None:
            return self.mul_table[a, b]
        return self._mul_log(a, b)

    def inv(self, a):
        a = self.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.inv_table[a]

    def sum(self, a, axis=None):
        a = self.asarray(a)
        if self.m == 1:
            return a.sum(axis=axis) % self.p
        if self.p == 2:
            if axis is None:
                return np.bitwise_xor.reduce(a.ravel()) if a.size else np.int64(0)
            return np.bitwise_xor.reduce(a, axis=axis)
        d = self.digits(a)
        if axis is None:
            return self.encode(d.reshape(-1, self.m).sum(axis=0) % self.p)
        ax = axis if axis >= 0 else a.ndim + axis
        return self.encode(d.sum(axis=ax) % self.p)

    def matmul(self, A, B):
        A, B = self.asarray(A), self.asarray(B)
        if self.m == 1:
            return _intmatmul(A, B, self.p)
        p, m = self.p, self.m
        Ad = np.moveaxis(self.digits(A), -1, 0)
        Bd = np.moveaxis(self.digits(B), -1, 0)
        shape = (A @ B).shape if A.ndim and B.ndim else ()
        poly = [np.zeros(shape, dtype=np.int64) for _ in range(2 * m - 1)]
        for s in range(m):
            for t in range(m):
                poly[s + t] = (poly[s + t] + _intmatmul(Ad[s], Bd[t], p)) % p
        low = list(self.modulus[:m])
        for deg in range(2 * m - 2, m - 1, -1):
            c = poly[deg]
            for k in range(m):
                if low[k]:
                    poly[deg - m + k] = (poly[deg - m + k] - c * low[k]) % p
        return self.encode(np.stack(poly[:m], axis=-1))

    def scale(self, c, v):
        return self.mul(np.int64(c), v)

    def axpy(self, c, x, y):
        """y + c*x."""
        return self.add(y, self.mul(np.int64(c), x))

    def elements(self):
        return np.arange(self.q, dtype=np.int64)

    def power(self, a, e):
        result = np.ones_like(self.asarray(a))
        base = self.asarray(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result


def _intmatmul(A, B, p):
    """(A @ B) % p for entries in [0, p); float64 BLAS when exact."""
    inner = A.shape[-1] if A.ndim else 1
    if A.ndim and B.ndim and (p - 1) ** 2 * max(inner, 1) < 2 ** 52:
        return (A.astype(np.float64) @ B.astype(np.float64)).astype(np.int64) % p
    return (A @ B) % p


@lru_cache(maxsize=None)
def _make_field(p, m):
    return GF._build(p, m)
