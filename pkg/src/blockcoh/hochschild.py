"""Hochschild cohomology of group algebras and its Mackey structure.

A Hochschild n-cochain f: (kG)^{(x)n} -> kG is stored as an array of shape
(|G|**n, |G|): row = tuple (g1..gn) in mixed radix, column = coefficient of a
group element in f(g1 (x) ... (x) gn).

The differential preserves the conjugacy class of w = (g1...gn)^-1 y for the
entry (g1..gn; y), so HH^n is computed one class block at a time.
"""

from __future__ import annotations

import numpy as np

from . import budget
from .field import GF
from .groupcoh import (CohClass, basis_classes, cohomology_dim, conjugate_class,
                       restrict_class, transfer_class, tuple_index, tuples)
from .groups import FiniteGroup, Subgroup, centralizer, double_cosets
from .linalg import FieldMatrix, Subspace, nullspace


def tuple_products(G: FiniteGroup, n: int):
    T = tuples(G.order, n)
    prod = np.zeros(T.shape[0], dtype=np.int64)
    for j in range(n):
        prod = G.mul[prod, T[:, j]]
    return prod


def hh_coboundary_values(G: FiniteGroup, f, n: int, field: GF):
    """(df)(g1..g_{n+1}) = g1 f(g2..) + sum (-1)^i f(..g_i g_{i+1}..) + (-1)^{n+1} f(g1..gn) g_{n+1}."""
    N = G.order
    f = np.asarray(f, dtype=np.int64).reshape(N ** n, N)
    R = tuples(N, n + 1)
    F = field
    # g1 * f(g2..): coefficient at y is f(..)[g1^-1 y]
    tail = tuple_index(R[:, 1:], N) if n else np.zeros(len(R), dtype=np.int64)
    out = f[tail[:, None], G.mul[G.inv[R[:, 0]]][:, :]]
    for i in range(1, n + 1):
        merged = G.mul[R[:, i - 1], R[:, i]]
        T = np.concatenate([R[:, :i - 1], merged[:, None], R[:, i + 1:]], axis=1)
        term = f[tuple_index(T, N)]
        out = F.add(out, term) if i % 2 == 0 else F.sub(out, term)
    head = tuple_index(R[:, :n], N) if n else np.zeros(len(R), dtype=np.int64)
    # f(..) * g_{n+1}: coefficient at y is f(..)[y g_{n+1}^-1]
    last = f[head[:, None], G.mul[:, G.inv[R[:, n]]].T]
    out = F.add(out, last) if (n + 1) % 2 == 0 else F.sub(out, last)
    return out


class HHSpace:
    """HH^n(kG) as a direct sum over conjugacy classes of the grading element w."""

    def __init__(self, G: FiniteGroup, n: int, field: GF):
        budget.current().check_hh(G.order, n)
        self.group, self.n, self.field = G, n, field
        N = G.order
        self.shape = (N ** n, N)
        self.blocks = []
        for cls in G.conjugacy_classes:
            pos_n = _block_positions(G, n, cls)
            Z = nullspace(_block_differential(G, n, cls, field))
            if n > 0:
                D_prev = _block_differential(G, n - 1, cls, field)
                B = Subspace(field, D_prev.T)
            else:
                B = Subspace(field, np.zeros((0, len(pos_n)), dtype=np.int64))
            Z = np.asarray(Z, dtype=np.int64).reshape(-1, len(pos_n))
            H = Subspace(field, B.reduce(Z) if len(Z) else Z, ambient=len(pos_n))
            self.blocks.append((pos_n, B, H))

    @classmethod
    def extend_scalars(cls, base: "HHSpace", field: GF) -> "HHSpace":
        """The same space over an extension of the prime field (echelon bases are unchanged)."""
        self = cls.__new__(cls)
        self.group, self.n, self.field, self.shape = base.group, base.n, field, base.shape
        self.blocks = [(pos, Subspace.from_rref(field, B.basis, B.pivots),
                        Subspace.from_rref(field, H.basis, H.pivots)) for pos, B, H in base.blocks]
        return self

    @property
    def dim(self):
        return sum(H.dim for _, _, H in self.blocks)

    def coords(self, values):
        flat = np.asarray(values, dtype=np.int64).reshape(-1)
        parts = [H.coordinates(B.reduce(flat[pos])) for pos, B, H in self.blocks]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def is_coboundary(self, values):
        flat = np.asarray(values, dtype=np.int64).reshape(-1)
        return all(B.contains(flat[pos]) for pos, B, _ in self.blocks)

    def basis_values(self):
        out = []
        for pos, _, H in self.blocks:
            for row in H.basis:
                flat = np.zeros(self.shape[0] * self.shape[1], dtype=np.int64)
                flat[pos] = row
                out.append(flat.reshape(self.shape))
        return out

    def class_dims(self):
        return [H.dim for _, _, H in self.blocks]


def _block_positions(G: FiniteGroup, n: int, cls):
    """Flat positions t*N + (prod t) w for t in tuples, w in the class (row-major in t, w)."""
    N = G.order
    prod = tuple_products(G, n)
    w = np.asarray(cls, dtype=np.int64)
    y = G.mul[prod[:, None], w[None, :]]
    return (np.arange(N ** n, dtype=np.int64)[:, None] * N + y).ravel()


def _block_differential(G: FiniteGroup, n: int, cls, field: GF) -> FieldMatrix:
    """d^n restricted to the class block (acting on column vectors)."""
    N = G.order
    cols_pos = _block_positions(G, n, cls)
    rows_pos = _block_positions(G, n + 1, cls)
    local = np.full(N ** (n + 1), -1, dtype=np.int64)
    local[cols_pos] = np.arange(len(cols_pos))
    nrows, ncols = len(rows_pos), len(cols_pos)
    budget.current().check_matrix(nrows, ncols, field, f"Hochschild differential d^{n}, |G| = {N}")
    t_rows, y_rows = np.divmod(rows_pos, N)
    R = tuples(N, n + 1)[t_rows]
    entries = []
    tail = tuple_index(R[:, 1:], N) if n else np.zeros(nrows, dtype=np.int64)
    entries.append((tail * N + G.mul[G.inv[R[:, 0]], y_rows], 1))
    for i in range(1, n + 1):
        merged = G.mul[R[:, i - 1], R[:, i]]
        T = np.concatenate([R[:, :i - 1], merged[:, None], R[:, i + 1:]], axis=1)
        entries.append((tuple_index(T, N) * N + y_rows, (-1) ** i))
    head = tuple_index(R[:, :n], N) if n else np.zeros(nrows, dtype=np.int64)
    entries.append((head * N + G.mul[y_rows, G.inv[R[:, n]]], (-1) ** (n + 1)))
    rr, cc, vv = [], [], []
    ar = np.arange(nrows, dtype=np.int64)
    for flat, sign in entries:
        c = local[flat]
        if (c < 0).any():
            raise AssertionError("differential left its class block")
        rr.append(ar)
        cc.append(c)
        vv.append(np.full(nrows, sign % field.p, dtype=np.int64))
    return FieldMatrix.from_triplets(field, (nrows, ncols), np.concatenate(rr),
                                     np.concatenate(cc), np.concatenate(vv))


_SPACES: dict = {}


def hh_space(G: FiniteGroup, n: int, field: GF) -> HHSpace:
    key = (G.mul.tobytes(), G.order, n, field.p, field.m)
    if key not in _SPACES:
        if field.m > 1:
            _SPACES[key] = HHSpace.extend_scalars(hh_space(G, n, GF(field.p)), field)
        else:
            _SPACES[key] = HHSpace(G, n, field)
    return _SPACES[key]


def clear_cache():
    _SPACES.clear()


def hh_dim(G, field: GF, n: int) -> int:
    if isinstance(G, Subgroup):
        G = G.local_group
    return hh_space(G, n, field).dim


def hh_dim_oracle(G: FiniteGroup, field: GF, n: int) -> int:
    """Sum over conjugacy classes of dim H^n(C_G(x), k)."""
    total = 0
    for cls in G.conjugacy_classes:
        C = centralizer(G, G.generate([cls[0]]))
        total += cohomology_dim(C, field, n)
    return total


# ---------------------------------------------------------------------------
# classes and maps

class HHClass:
    def __init__(self, sub: Subgroup, n: int, field: GF, values, check=False):
        self.sub, self.n, self.field = sub, n, field
        N = sub.order
        self.values = np.asarray(values, dtype=np.int64).reshape(N ** n, N)
        if check and hh_coboundary_values(sub.local_group, self.values, n, field).any():
            raise ValueError("representative is not a Hochschild cocycle")

    @property
    def space(self) -> HHSpace:
        return hh_space(self.sub.local_group, self.n, self.field)

    @property
    def coords(self):
        return self.space.coords(self.values)

    def is_zero(self):
        return self.space.is_coboundary(self.values)

    def __add__(self, other):
        _same(self, other)
        return HHClass(self.sub, self.n, self.field, self.field.add(self.values, other.values))

    def __sub__(self, other):
        _same(self, other)
        return HHClass(self.sub, self.n, self.field, self.field.sub(self.values, other.values))

    def scale(self, c):
        return HHClass(self.sub, self.n, self.field, self.field.mul(np.int64(c), self.values))


def _same(a, b):
    if a.sub != b.sub or a.n != b.n or a.field is not b.field:
        raise ValueError("HH classes on different groups, degrees or fields")


def hh_classes_equal(a: HHClass, b: HHClass) -> bool:
    _same(a, b)
    return a.space.is_coboundary(a.field.sub(a.values, b.values))


def hh_basis(sub: Subgroup, n: int, field: GF):
    return [HHClass(sub, n, field, v) for v in hh_space(sub.local_group, n, field).basis_values()]


def hh_zero(sub: Subgroup, n: int, field: GF):
    N = sub.order
    return HHClass(sub, n, field, np.zeros((N ** n, N), dtype=np.int64))


def _local(sub: Subgroup, elems):
    loc = sub.local_index[elems]
    if (loc < 0).any():
        raise ValueError("element outside the subgroup")
    return loc


def hh_restrict(f: HHClass, H: Subgroup) -> HHClass:
    """r(f)(h1..hn) = sum_h s(h^-1 f(h1..hn)) h: truncation to kH."""
    if not H <= f.sub:
        raise ValueError("restriction target is not a subgroup")
    S = f.sub
    T = H.array[tuples(H.order, f.n)]
    rows = tuple_index(_local(S, T), S.order) if f.n else np.zeros(1, dtype=np.int64)
    cols = _local(S, H.array)
    return HHClass(H, f.n, f.field, f.values[rows[:, None], cols[None, :]])


def hh_conjugate(f: HHClass, g: int) -> HHClass:
    """c_g(f)(^g h1..^g hn) = g f(h1..hn) g^-1."""
    S = f.sub
    G = S.group
    target = S.conjugate(g)
    T = target.array[tuples(target.order, f.n)]
    src = tuple_index(_local(S, G.conj(G.inv[g], T)), S.order) if f.n else np.zeros(1, dtype=np.int64)
    out = np.zeros((target.order ** f.n, target.order), dtype=np.int64)
    out[:, _local(target, G.conj(g, S.array))] = f.values[src]
    return HHClass(target, f.n, f.field, out)


def _left_rep_table(G: FiniteGroup, H: Subgroup, K: Subgroup):
    """rep[z] = least element of zH for z in K, and the list of representatives."""
    rep_of = np.full(G.order, -1, dtype=np.int64)
    for z in K.elements:
        if rep_of[z] < 0:
            coset = G.mul[z, H.array]
            rep_of[coset] = int(coset.min())
    reps = sorted(set(int(rep_of[z]) for z in K.elements))
    return rep_of, reps


def hh_transfer_values(values, H: Subgroup, K: Subgroup, n: int, field: GF, mode="chained"):
    """Transfer of a Hochschild cochain on kH to kK, K >= H, with left cosets x_i H.

    ``literal`` evaluates every phi_{i_j} at g_j x_{i0}.  ``chained`` threads
    the cosets right to left: g_n x_{i0} = x_{i_n} h_n,
    g_{j} x_{i_{j+1}} = x_{i_j} h_j.  Both return x_{i1} f(h1..hn) x_{i0}^-1
    and coincide for n <= 1.
    """
    G = K.group
    values = np.asarray(values, dtype=np.int64).reshape(H.order ** n, H.order)
    rep_of, reps = _left_rep_table(G, H, K)
    T = K.array[tuples(K.order, n)]
    M = T.shape[0]
    out = np.zeros((M, K.order), dtype=np.int64)
    for x0 in reps:
        hs = [None] * n
        first = np.full(M, x0, dtype=np.int64)
        if mode == "chained":
            s = np.full(M, x0, dtype=np.int64)
            for j in range(n - 1, -1, -1):
                z = G.mul[T[:, j], s]
                r = rep_of[z]
                hs[j] = G.mul[G.inv[r], z]
                s = r
            first = s
        elif mode == "literal":
            for j in range(n):
                z = G.mul[T[:, j], x0]
                r = rep_of[z]
                hs[j] = G.mul[G.inv[r], z]
                if j == 0:
                    first = r
        else:
            raise ValueError(f"unknown transfer mode {mode!r}")
        rows = tuple_index(np.stack([_local(H, h) for h in hs], axis=1), H.order) if n else np.zeros(M, dtype=np.int64)
        vals = values[rows]                                   # (M, |H|)
        # target element x_{i1} y x_{i0}^-1 for y in H
        tgt = G.mul[G.mul[first[:, None], H.array[None, :]], G.inv[x0]]
        tgt_loc = _local(K, tgt)
        contrib = np.zeros_like(out)
        np.put_along_axis(contrib, tgt_loc, vals, axis=1)
        out = field.add(out, contrib)
    return out


def hh_transfer(f: HHClass, K: Subgroup, mode="chained") -> HHClass:
    if not f.sub <= K:
        raise ValueError("transfer source is not a subgroup of the target")
    return HHClass(K, f.n, f.field, hh_transfer_values(f.values, f.sub, K, f.n, f.field, mode))


def diagonal_induction(z: CohClass) -> HHClass:
    """delta(f)(g1..gn) = f(g1..gn) g1...gn."""
    S = z.sub
    N = S.order
    out = np.zeros((N ** z.n, N), dtype=np.int64)
    out[np.arange(N ** z.n), tuple_products(S.local_group, z.n)] = z.values
    return HHClass(S, z.n, z.field, out)


# ---------------------------------------------------------------------------
# verifiers

def _all_equal(lhs_fn, rhs_fn, basis):
    return all(hh_classes_equal(lhs_fn(f), rhs_fn(f)) for f in basis)


def verify_mackey_axioms(G: Subgroup, K: Subgroup, H: Subgroup, g: int, n: int, field: GF,
                         h: int = None):
    """Items i)-vi) of the Mackey structure on HH^n, evaluated on class bases.

    Chains for i) and v) are K cap H <= H <= G (and K cap H <= K); vi) uses K
    and H as given; iii) uses g and h (default: a generator of K); iv) uses
    the generators of H.
    """
    amb = G.group
    L = K.intersection(H)
    h = K.generators[0] if h is None and K.generators else (0 if h is None else h)
    report = []

    def add(item, desc, ok):
        report.append({"item": item, "check": desc, "n": n, "pass": bool(ok)})

    basis = {S.elements: hh_basis(S, n, field) for S in (G, H, K, L)}
    bG, bH, bK, bL = basis[G.elements], basis[H.elements], basis[K.elements], basis[L.elements]

    for M in (H, K):
        add("i", f"r^{M.order}_{L.order} r^{G.order}_{M.order} = r^{G.order}_{L.order}",
            _all_equal(lambda f, M=M: hh_restrict(hh_restrict(f, M), L), lambda f: hh_restrict(f, L), bG))
        add("i", f"t^{G.order}_{M.order} t^{M.order}_{L.order} = t^{G.order}_{L.order}",
            _all_equal(lambda f, M=M: hh_transfer(hh_transfer(f, M), G), lambda f: hh_transfer(f, G), bL))
    add("ii", "r^H_H = id", _all_equal(lambda f: hh_restrict(f, H), lambda f: f, bH))
    add("ii", "t^H_H = id", _all_equal(lambda f: hh_transfer(f, H), lambda f: f, bH))
    gh = amb.m(g, h)
    add("iii", "c_{gh,H} = c_{g,hH} c_{h,H}",
        _all_equal(lambda f: hh_conjugate(f, gh), lambda f: hh_conjugate(hh_conjugate(f, h), g), bH))
    for u in H.generators:
        add("iv", f"c_{{{amb.names[u]},H}} = id", _all_equal(lambda f, u=u: hh_conjugate(f, u), lambda f: f, bH))
    for M in (H, K):
        if not L <= M:
            continue
        bM = basis[M.elements]
        add("v", "c_{g,K} r^H_K = r^{gH}_{gK} c_{g,H}",
            _all_equal(lambda f, M=M: hh_conjugate(hh_restrict(f, L), g),
                       lambda f, M=M: hh_restrict(hh_conjugate(f, g), L.conjugate(g)), bM))
        add("v", "c_{g,H} t^H_K = t^{gH}_{gK} c_{g,K}",
            _all_equal(lambda f, M=M: hh_conjugate(hh_transfer(f, M), g),
                       lambda f, M=M: hh_transfer(hh_conjugate(f, g), M.conjugate(g)), bL))

    def mackey_rhs(f):
        total = hh_zero(K, n, field)
        for x, _ in double_cosets(amb, K, H):
            if x not in G:
                continue
            c = hh_conjugate(f, x)
            inter = K.intersection(c.sub)
            total = total + hh_transfer(hh_restrict(c, inter), K)
        return total
    add("vi", "r^G_K t^G_H = sum t r c", _all_equal(lambda f: hh_restrict(hh_transfer(f, G), K), mackey_rhs, bH))
    return report


def verify_delta_conj_square(H: Subgroup, g: int, n: int, field: GF) -> bool:
    """c_{g,H} delta_H = delta_{gH} conj_g on a basis of H^n(H, k)."""
    return all(hh_classes_equal(hh_conjugate(diagonal_induction(z), g),
                                diagonal_induction(conjugate_class(z, g)))
               for z in basis_classes(H, n, field))


def verify_delta_transfer(H: Subgroup, G: Subgroup, n: int, field: GF) -> bool:
    """delta_G tr^G_H = t^G_H delta_H on a basis of H^n(H, k)."""
    return all(hh_classes_equal(diagonal_induction(transfer_class(z, G)),
                                hh_transfer(diagonal_induction(z), G))
               for z in basis_classes(H, n, field))


def verify_delta_restriction(H: Subgroup, G: Subgroup, n: int, field: GF) -> bool:
    """delta_H res^G_H = r^G_H delta_G on a basis of H^n(G, k)."""
    return all(hh_classes_equal(diagonal_induction(restrict_class(z, H)),
                                hh_restrict(diagonal_induction(z), H))
               for z in basis_classes(G, n, field))


def delta_kernel_dim(G: Subgroup, n: int, field: GF) -> int:
    """Dimension of the kernel of delta on H^n(G, k)."""
    basis = basis_classes(G, n, field)
    if not basis:
        return 0
    images = np.array([diagonal_induction(z).coords for z in basis])
    rank = Subspace(field, images).dim if images.size else 0
    return len(basis) - rank
