"""Exact linear algebra over GF(p^m).

Three elimination engines are provided:

* ``dense``: Gauss-Jordan on a numpy array, used below ``DENSE_LIMIT`` entries.
* ``sparse``: row-by-row insertion into a pivot dictionary.  Over GF(2) rows
  are Python integers used as bitsets, so a bar-complex differential with a
  handful of nonzeros per row never materialises as a dense array.
* ``blocked``: rows are densified a chunk at a time and reduced against the
  echelon basis found so far with one matrix product per chunk.  This is the
  default for large matrices over fields other than GF(2).

All of them produce the unique reduced row echelon form, so outputs do not
depend on the engine.
"""

from __future__ import annotations

import numpy as np

from .field import GF

DENSE_LIMIT = 10 ** 6


class FieldMatrix:
    """Matrix over a finite field, stored dense or as (row, col, value) triplets."""

    def __init__(self, field: GF, shape, dense=None, triplets=None):
        self.field = field
        self.rows, self.cols = int(shape[0]), int(shape[1])
        self._dense = None
        self._triplets = None
        if dense is not None:
            a = np.asarray(dense, dtype=np.int64).reshape(self.rows, self.cols)
            if a.size and (a.min() < 0 or a.max() >= field.q):
                raise ValueError("entries out of field range")
            self._dense = a
        elif triplets is not None:
            self._triplets = _normalise_triplets(field, self.rows, self.cols, *triplets)
        else:
            self._dense = np.zeros((self.rows, self.cols), dtype=np.int64)

    @classmethod
    def from_dense(cls, field, array):
        a = np.asarray(array, dtype=np.int64)
        if a.ndim == 1:
            a = a.reshape(1, -1)
        return cls(field, a.shape, dense=a)

    @classmethod
    def from_triplets(cls, field, shape, rows, cols, vals):
        """Duplicate positions are summed in the field; zeros are dropped."""
        return cls(field, shape, triplets=(rows, cols, vals))

    @classmethod
    def identity(cls, field, n):
        return cls(field, (n, n), dense=np.eye(n, dtype=np.int64))

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def is_sparse(self):
        return self._triplets is not None

    def triplets(self):
        if self._triplets is None:
            r, c = np.nonzero(self._dense)
            return r, c, self._dense[r, c]
        return self._triplets

    @property
    def nnz(self):
        return len(self.triplets()[0])

    def to_dense(self):
        if self._dense is not None:
            return self._dense.copy()
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        r, c, v = self._triplets
        out[r, c] = v
        return out

    def to_sparse(self):
        return FieldMatrix(self.field, self.shape, triplets=self.triplets())

    def transpose(self):
        if self._dense is not None:
            return FieldMatrix(self.field, (self.cols, self.rows), dense=self._dense.T)
        r, c, v = self._triplets
        return FieldMatrix(self.field, (self.cols, self.rows), triplets=(c, r, v))

    T = property(transpose)

    def __matmul__(self, other):
        if isinstance(other, FieldMatrix):
            other = other.to_dense()
        return self.field.matmul(self.to_dense(), np.asarray(other, dtype=np.int64))

    def __eq__(self, other):
        return (isinstance(other, FieldMatrix) and self.field is other.field
                and self.shape == other.shape
                and np.array_equal(self.to_dense(), other.to_dense()))

    def __repr__(self):
        kind = "sparse" if self.is_sparse else "dense"
        return f"FieldMatrix({self.field!r}, {self.rows}x{self.cols}, {kind})"


def _normalise_triplets(field, nrows, ncols, r, c, v):
    r = np.asarray(r, dtype=np.int64).ravel()
    c = np.asarray(c, dtype=np.int64).ravel()
    v = np.asarray(v, dtype=np.int64).ravel() % field.q if field.m == 1 else np.asarray(v, dtype=np.int64).ravel()
    if len(r) == 0:
        return r, c, v
    if r.min() < 0 or r.max() >= nrows or c.min() < 0 or c.max() >= ncols:
        raise ValueError("triplet index out of range")
    key = r * ncols + c
    order = np.argsort(key, kind="stable")
    key, v = key[order], v[order]
    uniq, start = np.unique(key, return_index=True)
    if len(uniq) == len(key):
        summed = v
    elif field.m == 1:
        summed = np.add.reduceat(v, start) % field.p
    else:
        summed = np.array([field.sum(seg) for seg in np.split(v, start[1:])], dtype=np.int64)
    keep = summed != 0
    uniq, summed = uniq[keep], summed[keep]
    return uniq // ncols, uniq % ncols, summed


# ---------------------------------------------------------------------------
# engines

def _rref_dense(field, A):
    A = np.array(A, dtype=np.int64, copy=True)
    nrows, ncols = A.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(A[row:, col])[0]
        if len(nz) == 0:
            continue
        pr = row + nz[0]
        if pr != row:
            A[[row, pr]] = A[[pr, row]]
        lead = A[row, col]
        if lead != 1:
            A[row] = field.mul(field.inv(lead), A[row])
        others = np.nonzero(A[:, col])[0]
        others = others[others != row]
        if len(others):
            factors = A[others, col]
            A[others] = field.sub(A[others], field.mul(factors[:, None], A[row][None, :]))
        pivots.append(col)
        row += 1
    return A[:row], pivots


def _bits_from_dense(A):
    ncols = A.shape[1]
    if A.shape[0] == 0:
        return []
    packed = np.packbits(A.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _bits_from_triplets(nrows, r, c):
    rows = [0] * nrows
    for i, j in zip(r.tolist(), c.tolist()):
        rows[i] ^= 1 << j
    return rows


def _bits_to_dense(bitrows, ncols):
    out = np.zeros((len(bitrows), ncols), dtype=np.int64)
    nbytes = (ncols + 7) // 8
    for k, x in enumerate(bitrows):
        b = np.frombuffer(x.to_bytes(nbytes, "little"), dtype=np.uint8)
        out[k] = np.unpackbits(b, bitorder="little")[:ncols]
    return out


def _gf2_pivots(bitrows):
    piv = {}
    for x in bitrows:
        while x:
            low = (x & -x).bit_length() - 1
            other = piv.get(low)
            if other is None:
                piv[low] = x
                break
            x ^= other
    return piv


def _gf2_reduce_pivots(piv):
    """Turn an echelon pivot dictionary into reduced echelon form in place."""
    mask = 0
    for c in piv:
        mask |= 1 << c
    for c in sorted(piv, reverse=True):
        x = piv[c]
        rest = x & mask & ~(1 << c)
        while rest:
            b = (rest & -rest).bit_length() - 1
            x ^= piv[b]
            rest = x & mask & ~(1 << c)
        piv[c] = x
    return piv


class _Scalars:
    """Python-level scalar arithmetic for the dict-row elimination."""

    def __init__(self, field):
        p, q = field.p, field.q
        if field.m == 1:
            self.inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
            self.mul = lambda a, b: a * b % p
            self.sub = lambda a, b: (a - b) % p
        else:
            self.inv = [0] + field.inv(np.arange(1, q)).tolist()
            if field.mul_table is not None:
                mt = field.mul_table.tolist()
                st = field.sub(np.arange(q)[:, None], np.arange(q)[None, :]).tolist()
                self.mul = lambda a, b: mt[a][b]
                self.sub = lambda a, b: st[a][b]
            else:
                self.mul = lambda a, b: int(field.mul(a, b))
                self.sub = lambda a, b: int(field.sub(a, b))


def _axpy_row(S, row, c, other):
    """row -= c * other, in place on dict rows."""
    mul, sub = S.mul, S.sub
    for k, v in other.items():
        nv = sub(row.get(k, 0), mul(c, v))
        if nv:
            row[k] = nv
        else:
            row.pop(k, None)


def _generic_pivots(field, rows):
    """rows: list of dict col->val.  Returns pivot dict col->normalised row dict."""
    S = _Scalars(field)
    piv = {}
    for row in rows:
        row = dict(row)
        while row:
            low = min(row)
            other = piv.get(low)
            if other is None:
                inv = S.inv[row[low]]
                piv[low] = {k: S.mul(inv, v) for k, v in row.items()}
                break
            _axpy_row(S, row, row[low], other)
    return piv


def _generic_reduce_pivots(field, piv):
    S = _Scalars(field)
    for c in sorted(piv, reverse=True):
        row = piv[c]
        for b in sorted(k for k in row if k != c and k in piv):
            coef = row.get(b, 0)
            if coef:
                _axpy_row(S, row, coef, piv[b])
    return piv


def _rref_sparse(field, M: FieldMatrix):
    r, c, v = M.triplets()
    if field.q == 2:
        piv = _gf2_reduce_pivots(_gf2_pivots(_bits_from_triplets(M.rows, r, c)))
        cols = sorted(piv)
        return _bits_to_dense([piv[k] for k in cols], M.cols), cols
    rows = [dict() for _ in range(M.rows)]
    for i, j, x in zip(r.tolist(), c.tolist(), v.tolist()):
        rows[i][j] = x
    piv = _generic_reduce_pivots(field, _generic_pivots(field, rows))
    cols = sorted(piv)
    out = np.zeros((len(cols), M.cols), dtype=np.int64)
    for k, col in enumerate(cols):
        for j, x in piv[col].items():
            out[k, j] = x
    return out, cols


def _row_chunks(M: FieldMatrix, chunk):
    if not M.is_sparse:
        D = M.to_dense()
        for start in range(0, M.rows, chunk):
            yield D[start:start + chunk]
        return
    r, c, v = M.triplets()
    order = np.argsort(r, kind="stable")
    r, c, v = r[order], c[order], v[order]
    bounds = np.searchsorted(r, np.arange(0, M.rows + chunk, chunk))
    for k, start in enumerate(range(0, M.rows, chunk)):
        lo, hi = bounds[k], bounds[k + 1]
        X = np.zeros((min(chunk, M.rows - start), M.cols), dtype=np.int64)
        X[r[lo:hi] - start, c[lo:hi]] = v[lo:hi]
        yield X


def _rref_blocked(field, M: FieldMatrix, chunk=512):
    B = np.zeros((0, M.cols), dtype=np.int64)
    piv = []
    for X in _row_chunks(M, chunk):
        if piv:
            X = field.sub(X, field.matmul(X[:, piv], B))
        X = X[X.any(axis=1)]
        if not len(X):
            continue
        R2, p2 = _rref_dense(field, X)
        if not p2:
            continue
        if piv:
            B = field.sub(B, field.matmul(B[:, p2], R2))
        B = np.concatenate([B, R2])
        piv = piv + p2
        order = np.argsort(piv)
        B, piv = B[order], [piv[k] for k in order]
        if len(piv) == M.cols:
            break
    return B, piv


def _rank_sparse(field, M: FieldMatrix):
    r, c, v = M.triplets()
    if field.q == 2:
        return len(_gf2_pivots(_bits_from_triplets(M.rows, r, c)))
    rows = [dict() for _ in range(M.rows)]
    for i, j, x in zip(r.tolist(), c.tolist(), v.tolist()):
        rows[i][j] = x
    return len(_generic_pivots(field, rows))


def _choose(M, method):
    if method == "auto":
        if M.rows * M.cols <= DENSE_LIMIT:
            return "dense"
        return "sparse" if M.field.q == 2 else "blocked"
    if method not in ("dense", "sparse", "blocked"):
        raise ValueError(f"unknown elimination method {method!r}")
    return method


def _as_matrix(field, M):
    if isinstance(M, FieldMatrix):
        return M
    return FieldMatrix.from_dense(field, M)


# ---------------------------------------------------------------------------
# public operations

def rref(M: FieldMatrix, method="auto"):
    """Reduced row echelon form: (nonzero rows as array, pivot columns)."""
    if M.rows == 0 or M.cols == 0:
        return np.zeros((0, M.cols), dtype=np.int64), []
    engine = _choose(M, method)
    if engine == "dense":
        return _rref_dense(M.field, M.to_dense())
    if engine == "blocked":
        return _rref_blocked(M.field, M)
    return _rref_sparse(M.field, M)


def rank(M: FieldMatrix, method="auto") -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    engine = _choose(M, method)
    if engine == "dense":
        return len(_rref_dense(M.field, M.to_dense())[1])
    if engine == "blocked":
        return len(_rref_blocked(M.field, M)[1])
    return _rank_sparse(M.field, M)


def nullspace(M: FieldMatrix, method="auto"):
    """Basis of {v : M v = 0} as rows of an array, in reduced echelon form."""
    field = M.field
    R, pivots = rref(M, method)
    free = [j for j in range(M.cols) if j not in set(pivots)]
    if not free:
        return np.zeros((0, M.cols), dtype=np.int64)
    K = np.zeros((len(free), M.cols), dtype=np.int64)
    K[np.arange(len(free)), free] = 1
    if pivots:
        # v_piv = -R[:, free] * v_free
        K[:, pivots] = field.neg(R[:, free].T)
    # K already has a unique vector per free column; normalise to reduced echelon form
    return rref(FieldMatrix.from_dense(field, K), "dense" if K.size <= DENSE_LIMIT else "sparse")[0]


def in_span(v, B, field: GF) -> bool:
    v = np.asarray(v, dtype=np.int64).ravel()
    B = np.asarray(B, dtype=np.int64)
    if B.size == 0:
        B = B.reshape(0, len(v))
    if B.ndim != 2 or B.shape[1] != len(v):
        raise ValueError(f"dimension mismatch: vector of length {len(v)} against basis of shape {B.shape}")
    return Subspace(field, B).contains(v)


class Subspace:
    """Row space of a spanning set, kept in reduced echelon form.

    Coordinates of a member are read off at the pivot columns.
    """

    def __init__(self, field: GF, spanning, ambient=None, method="auto"):
        self.field = field
        if isinstance(spanning, FieldMatrix):
            M = spanning
        else:
            S = np.asarray(spanning, dtype=np.int64)
            if S.size == 0:
                S = S.reshape(0, ambient if ambient is not None else (S.shape[-1] if S.ndim == 2 else 0))
            M = FieldMatrix.from_dense(field, S) if S.shape[0] else None
            if M is None:
                self.ambient = S.shape[1]
                self.basis = S.reshape(0, self.ambient)
                self.pivots = []
                return
        self.ambient = M.cols
        self.basis, self.pivots = rref(M, method)

    @classmethod
    def from_rref(cls, field, basis, pivots):
        self = cls.__new__(cls)
        self.field = field
        self.basis = np.asarray(basis, dtype=np.int64)
        self.ambient = self.basis.shape[1]
        self.pivots = list(pivots)
        return self

    @property
    def dim(self):
        return len(self.pivots)

    def reduce(self, V):
        """Residue of V (vector or rows) after subtracting its projection."""
        V = np.asarray(V, dtype=np.int64)
        if not self.pivots:
            return V.copy()
        single = V.ndim == 1
        V2 = V.reshape(1, -1) if single else V
        out = self.field.sub(V2, self.field.matmul(V2[:, self.pivots], self.basis))
        return out[0] if single else out

    def coordinates(self, V):
        V = np.asarray(V, dtype=np.int64)
        return V[..., self.pivots]

    def contains(self, V):
        V = np.asarray(V, dtype=np.int64)
        if V.shape[-1] != self.ambient:
            raise ValueError(f"dimension mismatch: {V.shape[-1]} vs ambient {self.ambient}")
        R = self.reduce(V)
        if R.ndim == 1:
            return not R.any()
        return ~R.any(axis=1)

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.dim == 0:
            return True
        return bool(np.all(self.contains(other.basis)))

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.pivots == other.pivots
                and np.array_equal(self.basis, other.basis))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def span_dim(field, rows) -> int:
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return 0
    return rank(FieldMatrix.from_dense(field, rows))


def intersect(field, A: Subspace, B: Subspace) -> Subspace:
    """Intersection via the kernel of [A; -B]."""
    if A.dim == 0 or B.dim == 0:
        return Subspace(field, np.zeros((0, A.ambient), dtype=np.int64))
    stacked = np.concatenate([A.basis, field.neg(B.basis)], axis=0)
    K = nullspace(FieldMatrix.from_dense(field, stacked.T))
    vecs = field.matmul(K[:, :A.dim], A.basis) if len(K) else np.zeros((0, A.ambient), dtype=np.int64)
    return Subspace(field, vecs, ambient=A.ambient)
