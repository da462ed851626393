"""Blocks of group algebras kG over a finite splitting field.

Everything here works on a standalone ``FiniteGroup``; callers that need a
subgroup's blocks pass ``Subgroup.local_group`` and translate indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field, replace
from functools import cached_property
from math import gcd

import numpy as np

from .field import GF
from .groups import (FiniteGroup, Subgroup, canonical_conjugate, centralizer,
                     double_cosets, left_coset_reps, normalizer, p_part, subgroups,
                     subgroups_up_to_conjugacy, sylow)
from .linalg import FieldMatrix, Subspace, nullspace
from .modularalg import AlgebraError, StructureAlgebra, primitive_decomposition


class BlockError(RuntimeError):
    """Internal-consistency failure in block computations."""


def splitting_field(G: FiniteGroup, p: int) -> GF:
    """GF(p^m) with m the order of p modulo the p'-part of the exponent of G."""
    e = G.exponent
    e //= p_part(e, p)
    m = 1
    if e > 1:
        x = p % e
        while x != 1:
            x = x * p % e
            m += 1
    return GF(p, m)


class GroupAlgebra:
    """kG with elements as coefficient vectors indexed by group elements."""

    def __init__(self, G: FiniteGroup, field: GF):
        self.group, self.field = G, field
        self.dim = G.order
        self._shift = G.mul[G.inv]        # row g: k -> g^-1 k

    def unit(self):
        v = np.zeros(self.dim, dtype=np.int64)
        v[0] = 1
        return v

    def basis(self, g):
        v = np.zeros(self.dim, dtype=np.int64)
        v[g] = 1
        return v

    def mul(self, x, y):
        y = np.asarray(y, dtype=np.int64)
        return self.field.matmul(np.asarray(x, dtype=np.int64)[None, :], y[self._shift])[0]

    def s(self, x):
        """Symmetrizing form: coefficient of the identity."""
        return int(np.asarray(x)[0])

    def conj(self, g, x):
        """g x g^-1."""
        out = np.zeros(self.dim, dtype=np.int64)
        out[self.group.conj(g, np.arange(self.dim))] = np.asarray(x)
        return out

    def is_central(self, x):
        G = self.group
        return all(np.array_equal(self.conj(g, x), x) for g in G.whole().generators)

    def is_fixed(self, x, S: Subgroup):
        x = np.asarray(x)
        return all(np.array_equal(self.conj(s, x), x) for s in S.generators)

    def augmentation(self, x):
        return int(self.field.sum(np.asarray(x)))

    def class_sums(self):
        rows = []
        for cls in self.group.conjugacy_classes:
            v = np.zeros(self.dim, dtype=np.int64)
            v[list(cls)] = 1
            rows.append(v)
        return np.array(rows)

    def orbit_sums(self, S: Subgroup):
        """Sums over S-conjugation orbits, in order of least orbit element."""
        G = self.group
        seen = np.zeros(self.dim, dtype=bool)
        rows = []
        for x in range(self.dim):
            if seen[x]:
                continue
            orbit = np.unique(G.conj(S.array, x))
            seen[orbit] = True
            v = np.zeros(self.dim, dtype=np.int64)
            v[orbit] = 1
            rows.append(v)
        return np.array(rows)

    def center(self) -> StructureAlgebra:
        return StructureAlgebra.from_basis(self.field, self.class_sums(), self.mul, self.unit(),
                                           name=f"Z(k[{self.group.label}])", check=False)


# ---------------------------------------------------------------------------
# Brauer homomorphism

def brauer_truncate(A: GroupAlgebra, a, Q: Subgroup):
    """Br_Q(a) as an element of kG supported on C_G(Q)."""
    if not A.is_fixed(a, Q):
        raise ValueError("Brauer homomorphism needs a Q-fixed element")
    C = centralizer(A.group, Q)
    out = np.zeros(A.dim, dtype=np.int64)
    out[C.array] = np.asarray(a)[C.array]
    return out


def brauer_hom(A: GroupAlgebra, a, Q: Subgroup):
    """Br_Q(a) in kC_G(Q): returns (C_G(Q), coefficients in local indices)."""
    C = centralizer(A.group, Q)
    return C, brauer_truncate(A, a, Q)[C.array]


# ---------------------------------------------------------------------------
# blocks

@dataclass
class Block:
    group: FiniteGroup
    field: GF
    index: int
    idempotent: np.ndarray
    defect: Subgroup
    principal: bool

    @property
    def algebra(self):
        return GroupAlgebra(self.group, self.field)

    def __repr__(self):
        return (f"Block({self.group.label}, {self.field.name}, #{self.index}, "
                f"defect order {self.defect.order}{', principal' if self.principal else ''})")


def defect_group(A: GroupAlgebra, b) -> Subgroup:
    """Largest p-subgroup Q (canonical up to conjugacy) with Br_Q(b) != 0."""
    G, p = A.group, A.field.p
    S = sylow(G, p)
    best = G.trivial()
    for Q in subgroups_up_to_conjugacy(G, S):
        if Q.order > best.order and brauer_truncate(A, b, Q).any():
            best = Q
    return canonical_conjugate(G, best)


_BLOCKS: dict = {}


def block_idempotents(G: FiniteGroup, field: GF = None):
    """Blocks of kG, principal first, then in the peeling order of the center."""
    field = splitting_field(G, _char_for(G, field)) if not isinstance(field, GF) else field
    key = (G.mul.tobytes(), field.p, field.m)
    if key in _BLOCKS:
        cached = _BLOCKS[key]
        if cached[0].group is G:
            return cached
        # same table, different group object: rebind so subgroups compare equal
        return [replace(b, group=G, defect=Subgroup(G, b.defect.elements)) for b in cached]
    A = GroupAlgebra(G, field)
    Z = A.center()
    prims = primitive_decomposition(Z)
    elems = [field.matmul(c[None, :], Z.ambient_basis)[0] for c in prims]
    principal = [k for k, e in enumerate(elems) if A.augmentation(e) != 0]
    if len(principal) != 1:
        raise BlockError("augmentation does not single out one principal block")
    order = principal + [k for k in range(len(elems)) if k != principal[0]]
    blocks = []
    for idx, k in enumerate(order):
        b = elems[k]
        blocks.append(Block(G, field, idx, b, defect_group(A, b), idx == 0))
    _check_partition(A, [blk.idempotent for blk in blocks])
    _BLOCKS[key] = blocks
    return blocks


def _char_for(G, field):
    if field is None:
        raise ValueError("a field or a prime is required")
    return int(field)


def _check_partition(A, idems):
    F = A.field
    total = np.zeros(A.dim, dtype=np.int64)
    for i, x in enumerate(idems):
        if not np.array_equal(A.mul(x, x), x) or not A.is_central(x):
            raise BlockError("block idempotent is not a central idempotent")
        for j, y in enumerate(idems):
            if i != j and A.mul(x, y).any():
                raise BlockError("block idempotents are not orthogonal")
        total = F.add(total, x)
    if not np.array_equal(total, A.unit()):
        raise BlockError("block idempotents do not sum to 1")


def clear_cache():
    _BLOCKS.clear()


def blocks_of(G: FiniteGroup, p: int):
    return block_idempotents(G, splitting_field(G, p))


# ---------------------------------------------------------------------------
# source algebra data

@dataclass
class YEntry:
    rep: int
    multiplicity: int
    coset_size: int
    intersection: Subgroup          # P cap gPg^-1
    merged: list = dc_field(default_factory=list)   # other reps with conjugate vertex


@dataclass(frozen=True)
class BrauerPair:
    R: Subgroup
    C: Subgroup                     # C_G(R)
    e: np.ndarray = dc_field(compare=False)   # block of kC_G(R), local coefficients

    def ambient(self):
        out = np.zeros(self.R.group.order, dtype=np.int64)
        out[self.C.array] = self.e
        return out


class SourceData:
    """Source idempotent i of a block with defect group P, and derived data."""

    def __init__(self, block: Block, P: Subgroup = None):
        self.block = block
        self.group = G = block.group
        self.field = F = block.field
        self.kG = A = GroupAlgebra(G, F)
        self.P = P = block.defect if P is None else P
        if P.order != block.defect.order:
            raise ValueError("given subgroup is not a defect group of the block")
        b = block.idempotent
        if not brauer_truncate(A, b, P).any():
            raise ValueError("Br_P(b) = 0 for the given subgroup")
        spanning = np.array([A.mul(b, o) for o in A.orbit_sums(P)])
        self.fixed = StructureAlgebra.from_basis(F, spanning, A.mul, b,
                                                 name="(kGb)^P", check=False)
        prims = primitive_decomposition(self.fixed)
        candidates = []
        for c in prims:
            x = F.matmul(c[None, :], self.fixed.ambient_basis)[0]
            if brauer_truncate(A, x, P).any():
                candidates.append(x)
        if not candidates:
            raise BlockError("no primitive idempotent of (kGb)^P has nonzero Brauer image")
        self.candidates = len(candidates)
        self.i = candidates[0]
        rows = np.array([A.mul(A.mul(self.i, A.basis(g)), self.i) for g in range(G.order)])
        self.source_algebra = Subspace(F, rows)
        self._pairs = {}

    @property
    def dim_source(self):
        return self.source_algebra.dim

    # -- Y multiset --
    def _vertex(self, Q: Subgroup, g: int):
        G = self.group
        return frozenset((int(u), int(G.m(G.inv[g], u, g))) for u in Q.elements)

    def _fixed_in(self, rows_basis, Q: Subgroup, g: int):
        """Basis of the (u, g^-1 u g)-fixed points (u in Q) inside the span of rows."""
        G, F = self.group, self.field
        if len(rows_basis) == 0 or Q.order == 1:
            return rows_basis
        blocks = []
        for u in Q.generators:
            v = G.m(G.inv[g], u, g)
            perm = G.mul[G.mul[u, np.arange(G.order)], G.inv[v]]
            moved = np.zeros_like(rows_basis)
            moved[:, perm] = rows_basis
            blocks.append(F.sub(moved, rows_basis))
        K = nullspace(FieldMatrix.from_dense(F, np.concatenate(blocks, axis=1).T))
        if len(K) == 0:
            return np.zeros((0, G.order), dtype=np.int64)
        return F.matmul(K, rows_basis)

    def _act_sum(self, vecs, Q: Subgroup, Qsub: Subgroup, g: int):
        """Relative trace from the twisted diagonal of Qsub to that of Q."""
        G, F = self.group, self.field
        out = np.zeros_like(vecs)
        for u in left_coset_reps(G, Qsub):
            if u not in Q:
                continue
            v = G.m(G.inv[g], u, g)
            perm = G.mul[G.mul[u, np.arange(G.order)], G.inv[v]]
            moved = np.zeros_like(vecs)
            moved[:, perm] = vecs
            out = F.add(out, moved)
        return out

    def brauer_quotient_dim(self, Q: Subgroup, g: int) -> int:
        F = self.field
        M = self.source_algebra.basis
        top = self._fixed_in(M, Q, g)
        dim_top = Subspace(F, top, ambient=self.group.order).dim
        if Q.order == 1:
            return dim_top
        images = []
        for Qs in subgroups(Q):
            if Qs.order * F.p != Q.order:
                continue
            low = self._fixed_in(M, Qs, g)
            if len(low):
                images.append(self._act_sum(low, Q, Qs, g))
        if not images:
            return dim_top
        return dim_top - Subspace(F, np.concatenate(images), ambient=self.group.order).dim

    @cached_property
    def y(self):
        G, P = self.group, self.P
        cosets = double_cosets(G, P, P)
        info = []
        for g, elems in cosets:
            Q = P.intersection(P.conjugate(g))
            info.append((g, elems, Q))
        # merge double cosets whose vertices are P x P-conjugate
        classes = []
        for g, elems, Q in info:
            V = self._vertex(Q, g)
            for cls in classes:
                if cls["Q"].order == Q.order and self._pp_conjugate(V, cls["V"]):
                    cls["members"].append(g)
                    break
            else:
                classes.append(dict(rep=g, elems=elems, Q=Q, V=V, members=[g]))
        classes.sort(key=lambda c: (-c["Q"].order, c["rep"]))
        mult = {}
        for cls in classes:
            Q, g = cls["Q"], cls["rep"]
            C = centralizer(G, Q)
            rhs = self.brauer_quotient_dim(Q, g)
            for other in classes:
                if other["rep"] in mult:
                    rhs -= mult[other["rep"]] * self._fixed_count(other["elems"], C, g)
            diag = self._fixed_count(cls["elems"], C, g)
            if diag == 0 or rhs % diag or rhs < 0:
                raise BlockError(f"mark system has no non-negative integral solution at rep {G.names[g]}")
            mult[g] = rhs // diag
        entries = [YEntry(c["rep"], mult[c["rep"]], len(c["elems"]), c["Q"], c["members"][1:])
                   for c in sorted(classes, key=lambda c: c["rep"]) if mult[c["rep"]]]
        total = sum(e.multiplicity * e.coset_size for e in entries)
        if total != self.dim_source:
            raise BlockError(f"Y accounts for dimension {total}, source algebra has {self.dim_source}")
        return entries

    def _fixed_count(self, elems, C: Subgroup, g: int):
        G = self.group
        xs = np.array(elems)
        return int(C.mask[G.mul[xs, G.inv[g]]].sum())

    def _pp_conjugate(self, V, W):
        G, P = self.group, self.P
        for a in P.elements:
            for b in P.elements:
                img = frozenset((int(G.conj(a, u)), int(G.conj(b, v))) for u, v in V)
                if img == W:
                    return True
        return False

    # -- Brauer pairs and fusion --
    def brauer_pair(self, R: Subgroup) -> BrauerPair:
        key = R.elements
        if key in self._pairs:
            return self._pairs[key]
        if not R <= self.P:
            raise ValueError("R must be a subgroup of the defect group")
        G, F = self.group, self.field
        C = centralizer(G, R)
        br = brauer_truncate(self.kG, self.i, R)[C.array]
        kC = GroupAlgebra(C.local_group, F)
        passing = [blk.idempotent for blk in block_idempotents(C.local_group, F)
                   if kC.mul(br, blk.idempotent).any()]
        if len(passing) != 1:
            raise BlockError(f"{len(passing)} blocks of kC_G(R) meet Br_R(i) for R of order {R.order}")
        pair = BrauerPair(R, C, passing[0])
        self._pairs[key] = pair
        return pair

    def conjugate_pair_block(self, x, pair: BrauerPair):
        """^x e_R as local coefficients on C_G(^x R)."""
        G = self.group
        R2 = pair.R.conjugate(x)
        C2 = centralizer(G, R2)
        amb = np.zeros(G.order, dtype=np.int64)
        amb[G.conj(x, pair.C.array)] = pair.e
        return R2, amb[C2.array]

    def fusion_morphisms(self, Q: Subgroup, R: Subgroup):
        """{x: graph} for the maps c_x: Q -> R allowed by the Brauer pairs (one x per map)."""
        G = self.group
        eQ = self.brauer_pair(Q)
        out = {}
        for x in range(G.order):
            img = G.conj(x, Q.array)
            if not R.mask[img].all():
                continue
            graph = tuple(zip(Q.elements, (int(v) for v in img)))
            if graph in out:
                continue
            R2, e2 = self.conjugate_pair_block(x, eQ)
            if np.array_equal(e2, self.brauer_pair(R2).e):
                out[graph] = x
        return {x: graph for graph, x in sorted(out.items(), key=lambda kv: kv[1])}

    @cached_property
    def fusion(self) -> "FusionSystem":
        return FusionSystem(self)

    @cached_property
    def inertial(self) -> Subgroup:
        """N_G(P, e_P) = {x in N_G(P) : ^x e_P = e_P}."""
        G = self.group
        pair = self.brauer_pair(self.P)
        keep = []
        for x in normalizer(G, self.P).elements:
            _, e2 = self.conjugate_pair_block(x, pair)
            if np.array_equal(e2, pair.e):
                keep.append(x)
        return Subgroup(G, keep)

    @cached_property
    def inertial_reps(self):
        """Least representatives of N_G(P, e_P) modulo P C_G(P)."""
        G = self.group
        C = centralizer(G, self.P)
        PC = np.unique(G.mul[self.P.array[:, None], C.array[None, :]])
        PCs = Subgroup(G, PC)
        return [x for x in left_coset_reps(G, PCs) if x in self.inertial]

    def y_contains_inertial(self):
        """Each coset of N_G(P,e_P)/PC_G(P) meets a double coset stored (or merged) in Y."""
        G = self.group
        stored = {}
        for e in self.y:
            for r in [e.rep] + e.merged:
                stored[r] = e.multiplicity
        for x in self.inertial_reps:
            rep = min(np.unique(G.mul[G.mul[self.P.array[:, None], x], self.P.array[None, :]]).tolist())
            if stored.get(rep, 0) < 1:
                return False
        return True


class FusionSystem:
    """Morphism sets Hom(Q, R) for all subgroups Q, R of P, as graphs of maps."""

    def __init__(self, sd: SourceData):
        self.sd = sd
        self.P = sd.P
        self.subgroups = subgroups(sd.P)
        self._hom = {}

    def hom(self, Q: Subgroup, R: Subgroup):
        key = (Q.elements, R.elements)
        if key not in self._hom:
            self._hom[key] = self.sd.fusion_morphisms(Q, R)
        return self._hom[key]

    def graphs(self, Q, R):
        return set(self.hom(Q, R).values())

    def contains_inner(self):
        G = self.sd.group
        for Q in self.subgroups:
            for R in self.subgroups:
                for u in self.P.elements:
                    img = G.conj(u, Q.array)
                    if R.mask[img].all():
                        graph = tuple(zip(Q.elements, (int(v) for v in img)))
                        if graph not in self.graphs(Q, R):
                            return False
        return True

    def composition_closed(self):
        for Q in self.subgroups:
            for R in self.subgroups:
                for g1 in self.graphs(Q, R):
                    f1 = dict(g1)
                    for S in self.subgroups:
                        for g2 in self.graphs(R, S):
                            f2 = dict(g2)
                            comp = tuple((q, f2[f1[q]]) for q in Q.elements)
                            if comp not in self.graphs(Q, S):
                                return False
        return True


# ---------------------------------------------------------------------------
# Brauer correspondence

def brauer_correspondent(block: Block, H: Subgroup = None) -> tuple[Subgroup, Block]:
    """(N_G(P), the block Br_P(b) of kN_G(P)) for defect group P."""
    G, P = block.group, block.defect
    N = normalizer(G, P)
    if H is not None and H != N:
        raise ValueError("Brauer correspondents are only computed at H = N_G(P)")
    A = GroupAlgebra(G, block.field)
    c_local = brauer_truncate(A, block.idempotent, P)[N.array]
    for blk in block_idempotents(N.local_group, block.field):
        if np.array_equal(blk.idempotent, c_local):
            if blk.defect.order != P.order:
                raise BlockError("Brauer correspondent has the wrong defect order")
            return N, blk
    raise BlockError("Br_P(b) is not a block idempotent of kN_G(P)")
