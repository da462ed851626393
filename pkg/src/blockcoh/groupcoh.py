"""Mod-p group cohomology from the inhomogeneous bar complex.

An n-cochain on a group of order N is a vector of length N**n indexed by
tuples (g1, ..., gn) in mixed radix, g1 most significant.  Groups are
addressed through ``Subgroup`` objects of a common ambient group, and tuple
entries are local indices into ``Subgroup.elements``.

Cohomology spaces carry canonical class representatives: cocycles are reduced
modulo the coboundaries and the residues put in reduced echelon form, so a
class's coordinates are the residue's values at the pivot columns.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import budget
from .field import GF
from .groups import FiniteGroup, Subgroup, double_cosets
from .linalg import FieldMatrix, Subspace, nullspace


@lru_cache(maxsize=64)
def tuples(N: int, n: int) -> np.ndarray:
    """All n-tuples over range(N), shape (N**n, n), in index order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.unravel_index(np.arange(N ** n, dtype=np.int64), (N,) * n)
    out = np.stack(grids, axis=1).astype(np.int64)
    out.setflags(write=False)
    return out


def tuple_index(T: np.ndarray, N: int) -> np.ndarray:
    idx = np.zeros(T.shape[0], dtype=np.int64)
    for j in range(T.shape[1]):
        idx = idx * N + T[:, j]
    return idx


def _bar_terms(G: FiniteGroup, n: int, normalized: bool):
    """Row tuples of C^{n+1} and, per face, the column index, sign and validity.

    Normalized mode uses the non-identity elements 1..N-1 as digits 0..N-2 and
    marks faces landing on a tuple containing the identity as invalid.
    """
    N = G.order
    if normalized:
        R = tuples(N - 1, n + 1) + 1
        radix = N - 1
    else:
        R = tuples(N, n + 1)
        radix = N
    shift = 1 if normalized else 0
    faces = []
    # d_0: drop g1
    faces.append((R[:, 1:], 1))
    for i in range(1, n + 1):
        merged = G.mul[R[:, i - 1], R[:, i]]
        T = np.concatenate([R[:, :i - 1], merged[:, None], R[:, i + 1:]], axis=1)
        faces.append((T, (-1) ** i))
    faces.append((R[:, :n], (-1) ** (n + 1)))
    out = []
    for T, sign in faces:
        valid = np.ones(T.shape[0], dtype=bool) if not normalized else (T != 0).all(axis=1)
        cols = tuple_index(np.where(valid[:, None], T - shift, 0), radix) if n else np.zeros(T.shape[0], dtype=np.int64)
        out.append((cols, sign, valid))
    return R, out


def bar_differential(G: FiniteGroup, n: int, field: GF, normalized=False) -> FieldMatrix:
    """Matrix of d^n : C^n -> C^{n+1} acting on column vectors."""
    N = G.order
    base = N - 1 if normalized else N
    rows_n, cols_n = base ** (n + 1), base ** n
    budget.current().check_matrix(rows_n, cols_n, field,
                                  f"bar differential d^{n} for a group of order {N}")
    if rows_n == 0 or cols_n == 0:
        return FieldMatrix.from_dense(field, np.zeros((rows_n, cols_n), dtype=np.int64))
    _, faces = _bar_terms(G, n, normalized)
    rows_all, cols_all, vals_all = [], [], []
    ar = np.arange(rows_n, dtype=np.int64)
    for cols, sign, valid in faces:
        rows_all.append(ar[valid])
        cols_all.append(cols[valid])
        vals_all.append(np.full(int(valid.sum()), sign % field.p, dtype=np.int64))
    return FieldMatrix.from_triplets(field, (rows_n, cols_n), np.concatenate(rows_all),
                                     np.concatenate(cols_all), np.concatenate(vals_all))


@lru_cache(maxsize=16)
def _face_columns(table: bytes, N: int, n: int):
    G = FiniteGroup(np.frombuffer(table, dtype=np.int64).reshape(N, N), check=False)
    return [(cols, sign) for cols, sign, _ in _bar_terms(G, n, False)[1]]


def coboundary_values(G: FiniteGroup, f, n: int, field: GF):
    """d f for a full n-cochain f, evaluated directly (trivial coefficients)."""
    f = np.asarray(f, dtype=np.int64)
    faces = _face_columns(np.ascontiguousarray(G.mul, dtype=np.int64).tobytes(), G.order, n)
    if field.m == 1:
        return sum(sign * f[cols] for cols, sign in faces) % field.p
    out = np.zeros(G.order ** (n + 1), dtype=np.int64)
    for cols, sign in faces:
        out = field.add(out, f[cols]) if sign > 0 else field.sub(out, f[cols])
    return out


class Cochain:
    """An n-cochain on a subgroup, with values indexed by local tuples."""

    def __init__(self, sub: Subgroup, n: int, field: GF, values):
        self.sub, self.n, self.field = sub, n, field
        self.values = np.asarray(values, dtype=np.int64)
        if self.values.shape != (sub.order ** n,):
            raise ValueError(f"cochain of degree {n} on a group of order {sub.order} needs "
                             f"{sub.order ** n} values, got {self.values.shape}")

    def coboundary(self) -> "Cochain":
        return Cochain(self.sub, self.n + 1, self.field,
                       coboundary_values(self.sub.local_group, self.values, self.n, self.field))

    def __add__(self, other):
        return Cochain(self.sub, self.n, self.field, self.field.add(self.values, other.values))

    def __sub__(self, other):
        return Cochain(self.sub, self.n, self.field, self.field.sub(self.values, other.values))

    def scale(self, c):
        return Cochain(self.sub, self.n, self.field, self.field.mul(np.int64(c), self.values))


def coboundary(f: Cochain) -> Cochain:
    return f.coboundary()


# ---------------------------------------------------------------------------
# cohomology spaces

class CohomologySpace:
    """H^n(G, k) with canonical representatives.

    ``reps`` holds one full-length cocycle per basis class; ``boundaries`` is
    the coboundary space B^n in the full complex.
    """

    def __init__(self, G: FiniteGroup, n: int, field: GF, mode="normalized"):
        self.group, self.n, self.field, self.mode = G, n, field, mode
        N = G.order
        self.length = N ** n
        if n == 0:
            self.boundaries = Subspace(field, np.zeros((0, 1), dtype=np.int64))
            Z = np.ones((1, 1), dtype=np.int64)
        else:
            D_prev = bar_differential(G, n - 1, field)
            self.boundaries = Subspace(field, D_prev.T)
            if mode == "normalized":
                Zn = nullspace(bar_differential(G, n, field, normalized=True))
                # embed: normalized tuple indices -> full indices
                embed = tuple_index(tuples(N - 1, n) + 1, N)
                Z = np.zeros((len(Zn), self.length), dtype=np.int64)
                if len(Zn):
                    Z[:, embed] = Zn
            elif mode == "full":
                Z = nullspace(bar_differential(G, n, field))
            else:
                raise ValueError(f"unknown mode {mode!r}")
        Z = np.asarray(Z, dtype=np.int64).reshape(-1, self.length)
        residues = self.boundaries.reduce(Z) if len(Z) else Z
        self.classes = Subspace(field, residues, ambient=self.length)
        self.reps = self.classes.basis

    @classmethod
    def extend_scalars(cls, base: "CohomologySpace", field: GF) -> "CohomologySpace":
        """The same space over an extension of the prime field.

        The differentials are defined over GF(p) and reduced echelon forms are
        unique, so every basis computed over GF(p) is already the one over GF(p^m).
        """
        self = cls.__new__(cls)
        self.group, self.n, self.field, self.mode = base.group, base.n, field, base.mode
        self.length = base.length
        self.boundaries = Subspace.from_rref(field, base.boundaries.basis, base.boundaries.pivots)
        self.classes = Subspace.from_rref(field, base.classes.basis, base.classes.pivots)
        self.reps = self.classes.basis
        return self

    @property
    def dim(self):
        return self.classes.dim

    def residue(self, values):
        return self.boundaries.reduce(values)

    def coords(self, values):
        """Coordinates of cocycle(s) in the class basis."""
        return self.classes.coordinates(self.residue(values))

    def is_coboundary(self, values):
        return self.boundaries.contains(values)

    def combine(self, coords):
        """Representative with the given class coordinates."""
        coords = np.asarray(coords, dtype=np.int64)
        if self.dim == 0:
            return np.zeros(coords.shape[:-1] + (self.length,), dtype=np.int64)
        return self.field.matmul(coords, self.reps)


_SPACES: dict = {}


def cohomology_space(G: FiniteGroup, n: int, field: GF, mode="normalized") -> CohomologySpace:
    key = (G.mul.tobytes(), G.order, n, field.p, field.m, mode)
    space = _SPACES.get(key)
    if space is None:
        if field.m > 1:
            space = CohomologySpace.extend_scalars(cohomology_space(G, n, GF(field.p), mode), field)
        else:
            space = CohomologySpace(G, n, field, mode)
        _SPACES[key] = space
    return space


def clear_cache():
    _SPACES.clear()


def cohomology_dim(G, field: GF, n: int, mode="normalized") -> int:
    if isinstance(G, Subgroup):
        G = G.local_group
    return cohomology_space(G, n, field, mode).dim


# ---------------------------------------------------------------------------
# classes

class CohClass:
    """Class in H^n(S, k) for a subgroup S, carried by a cocycle representative."""

    def __init__(self, sub: Subgroup, n: int, field: GF, values, check=True):
        self.sub, self.n, self.field = sub, n, field
        self.values = np.asarray(values, dtype=np.int64)
        if check and self.values.shape != (sub.order ** n,):
            raise ValueError("representative has the wrong length")
        if check and coboundary_values(sub.local_group, self.values, n, field).any():
            raise ValueError("representative is not a cocycle")

    @property
    def space(self) -> CohomologySpace:
        return cohomology_space(self.sub.local_group, self.n, self.field)

    @property
    def coords(self):
        return self.space.coords(self.values)

    def is_zero(self):
        return self.space.is_coboundary(self.values)

    def __add__(self, other):
        _same(self, other)
        return CohClass(self.sub, self.n, self.field, self.field.add(self.values, other.values), check=False)

    def __sub__(self, other):
        _same(self, other)
        return CohClass(self.sub, self.n, self.field, self.field.sub(self.values, other.values), check=False)

    def scale(self, c):
        return CohClass(self.sub, self.n, self.field, self.field.mul(np.int64(c), self.values), check=False)

    def __repr__(self):
        return f"CohClass(deg={self.n}, |S|={self.sub.order}, coords={self.coords.tolist()})"


def _same(a: CohClass, b: CohClass):
    if a.sub != b.sub or a.field is not b.field:
        raise ValueError("classes live on different groups or fields")
    if a.n != b.n:
        raise ValueError(f"degree mismatch: {a.n} vs {b.n}")


def basis_classes(sub: Subgroup, n: int, field: GF):
    space = cohomology_space(sub.local_group, n, field)
    return [CohClass(sub, n, field, r, check=False) for r in space.reps]


def unit_class(sub: Subgroup, field: GF) -> CohClass:
    return CohClass(sub, 0, field, np.ones(1, dtype=np.int64), check=False)


def zero_class(sub: Subgroup, n: int, field: GF) -> CohClass:
    return CohClass(sub, n, field, np.zeros(sub.order ** n, dtype=np.int64), check=False)


def classes_equal(a: CohClass, b: CohClass) -> bool:
    _same(a, b)
    return bool(a.space.is_coboundary(a.field.sub(a.values, b.values)))


def from_coords(sub: Subgroup, n: int, field: GF, coords) -> CohClass:
    space = cohomology_space(sub.local_group, n, field)
    return CohClass(sub, n, field, space.combine(coords), check=False)


# -- maps --

def _local(sub: Subgroup, ambient_elements):
    loc = sub.local_index[ambient_elements]
    if (loc < 0).any():
        raise ValueError("element outside the subgroup")
    return loc


def restrict_values(values, sub: Subgroup, H: Subgroup, n: int):
    """Values of a cochain on ``sub`` restricted to H-tuples."""
    T = H.array[tuples(H.order, n)]
    return np.asarray(values)[tuple_index(_local(sub, T), sub.order)] if n else np.asarray(values).copy()


def restrict_class(z: CohClass, H: Subgroup) -> CohClass:
    if not H <= z.sub:
        raise ValueError("restriction target is not a subgroup")
    return CohClass(H, z.n, z.field, restrict_values(z.values, z.sub, H, z.n), check=False)


def conjugate_values(values, sub: Subgroup, g: int, n: int):
    """^g f on ^g S: (^g f)(g h1 g^-1, ...) = f(h1, ...)."""
    G = sub.group
    target = sub.conjugate(g)
    T = target.array[tuples(target.order, n)]
    back = G.conj(G.inv[g], T)
    return target, (np.asarray(values)[tuple_index(_local(sub, back), sub.order)] if n else np.asarray(values).copy())


def conjugate_class(z: CohClass, g: int) -> CohClass:
    target, vals = conjugate_values(z.values, z.sub, g, z.n)
    return CohClass(target, z.n, z.field, vals, check=False)


def transfer_values(values, H: Subgroup, K: Subgroup, n: int, field: GF):
    """Coset-shuttle transfer of a cochain on H to K >= H.

    With right-coset representatives s(.) of H in K:
    tr f(g1..gn) = sum_u f(h1..hn), s_0 = u, s_j = s(s_{j-1} g_j),
    h_j = s_{j-1} g_j s_j^-1.
    """
    G = K.group
    values = np.asarray(values, dtype=np.int64)
    # representative of Hx for each x in K
    rep_of = np.full(G.order, -1, dtype=np.int64)
    for x in K.elements:
        if rep_of[x] < 0:
            coset = G.mul[H.array, x]
            r = int(coset.min())
            rep_of[coset] = r
    reps = sorted(set(int(rep_of[x]) for x in K.elements))
    T = K.array[tuples(K.order, n)]
    total = np.zeros(T.shape[0], dtype=np.int64)
    for u in reps:
        s_prev = np.full(T.shape[0], u, dtype=np.int64)
        hs = []
        for j in range(n):
            x = G.mul[s_prev, T[:, j]]
            s = rep_of[x]
            hs.append(G.mul[x, G.inv[s]])
            s_prev = s
        Hloc = np.stack([_local(H, h) for h in hs], axis=1) if n else np.zeros((T.shape[0], 0), dtype=np.int64)
        total = field.add(total, values[tuple_index(Hloc, H.order)] if n else np.repeat(values, T.shape[0]))
    return total


def transfer_class(z: CohClass, K: Subgroup) -> CohClass:
    if not z.sub <= K:
        raise ValueError("transfer source is not a subgroup of the target")
    return CohClass(K, z.n, z.field, transfer_values(z.values, z.sub, K, z.n, z.field), check=False)


def cup(a: CohClass, b: CohClass) -> CohClass:
    if a.sub != b.sub or a.field is not b.field:
        raise ValueError("cup product needs classes on the same group and field")
    F = a.field
    vals = F.mul(a.values[:, None], b.values[None, :]).ravel()
    return CohClass(a.sub, a.n + b.n, F, vals, check=False)


def map_matrix(src: Subgroup, dst: Subgroup, n: int, field: GF, fn):
    """Matrix (rows = source basis classes) of a linear map on H^n given on cochain values."""
    S = cohomology_space(src.local_group, n, field)
    D = cohomology_space(dst.local_group, n, field)
    if S.dim == 0:
        return np.zeros((0, D.dim), dtype=np.int64)
    images = np.array([fn(r) for r in S.reps]).reshape(S.dim, D.length)
    return D.coords(images).reshape(S.dim, D.dim)


def mackey_rhs(z: CohClass, K: Subgroup, G_sub: Subgroup):
    """sum over x in [K\\G/H] of tr^K_{K cap xH} res^{xH}_{K cap xH} c_x (z), H = z.sub."""
    G = G_sub.group
    H = z.sub
    total = zero_class(K, z.n, z.field)
    for x, _ in double_cosets(G, K, H):
        if x not in G_sub:
            continue
        c = conjugate_class(z, x)
        inter = K.intersection(c.sub)
        total = total + transfer_class(restrict_class(c, inter), K)
    return total
