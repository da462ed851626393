"""The transfer t_Y on H*(P, k), fusion-stable elements, and block transfer maps.

Block data are computed on a standalone group and moved into an ambient group
by ``BlockContext`` so that cohomology classes of a block of G and of a block
of a subgroup H <= G live on subgroups of one common group.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .blocks import Block, SourceData, block_idempotents, blocks_of, brauer_correspondent
from .field import GF
from .groupcoh import (CohClass, basis_classes, classes_equal, cohomology_space, conjugate_class,
                       cup, from_coords, restrict_class, transfer_class, zero_class)
from .groups import FiniteGroup, Subgroup, subgroups
from .hochschild import (diagonal_induction, hh_classes_equal, hh_conjugate, hh_restrict,
                         hh_transfer, hh_zero)
from .linalg import FieldMatrix, Subspace, nullspace


class PreconditionError(ValueError):
    pass


@dataclass
class YRep:
    rep: int
    multiplicity: int
    coset_size: int
    merged: list


class BlockContext:
    """A block of kH for H <= G, with its source data expressed in G's indices."""

    def __init__(self, G: FiniteGroup, H: Subgroup, block: Block, P_local: Subgroup = None):
        self.G, self.H, self.block = G, H, block
        self.field = block.field
        # res, conj, tr and t_Y are defined over the prime field and the class
        # bases are rational over it, so cohomology is computed over GF(p).
        self.coh_field = GF(block.field.p)
        self.sd = SourceData(block, P_local)
        self.embed = H.array
        self.P = self._up(self.sd.P)
        self._stable = {}
        self._equal = {}

    # -- index translation --
    def _up(self, S: Subgroup) -> Subgroup:
        return Subgroup(self.G, self.embed[S.array])

    def _down(self, S: Subgroup) -> Subgroup:
        return Subgroup(self.block.group, self.H.local_index[S.array])

    @property
    def label(self):
        return f"{self.G.label}|H={self.H.order}|block {self.block.index}"

    @cached_property
    def y(self):
        return [YRep(int(self.embed[e.rep]), e.multiplicity, e.coset_size,
                     [int(self.embed[m]) for m in e.merged]) for e in self.sd.y]

    @property
    def dim_source(self):
        return self.sd.dim_source

    @cached_property
    def inertial_reps(self):
        return [int(self.embed[x]) for x in self.sd.inertial_reps]

    @cached_property
    def inertial(self) -> Subgroup:
        return self._up(self.sd.inertial)

    @cached_property
    def subgroups(self):
        return subgroups(self.P)

    def hom(self, Q: Subgroup, R: Subgroup):
        """{x: graph} in ambient indices for the fusion morphisms Q -> R."""
        local = self.sd.fusion.hom(self._down(Q), self._down(R))
        e = self.embed
        return {int(e[x]): tuple((int(e[a]), int(e[b])) for a, b in graph) for x, graph in local.items()}

    def graphs(self, Q, R):
        return set(self.hom(Q, R).values())

    # -- the scalar dim(ikGi)/|P| --
    @property
    def scalar(self):
        return self.dim_source // self.P.order

    def scalar_in_field(self):
        return self.scalar % self.field.p


def block_context(G: FiniteGroup, p: int, index: int = 0) -> BlockContext:
    return BlockContext(G, G.whole(), blocks_of(G, p)[index])


def sub_context(b: BlockContext, H: Subgroup, block: Block = None) -> BlockContext:
    """Context for a block of kH (default: principal) with defect group chosen inside P."""
    G = b.G
    if block is None:
        block = block_idempotents(H.local_group, b.field)[0]
    elif block.field != b.field:
        raise PreconditionError("the block of H must be taken over the field of b")
    Qamb = Subgroup(G, H.array[block.defect.array])
    best = None
    for h in H.elements:
        C = Qamb.conjugate(h)
        if C <= b.P and (best is None or C.elements < best.elements):
            best = C
    if best is None:
        raise PreconditionError("no H-conjugate of the defect group of c lies in P")
    return BlockContext(G, H, block, Subgroup(H.local_group, H.local_index[best.array]))


def correspondent_context(b: BlockContext) -> BlockContext:
    """Context for the Brauer correspondent of b in N_G(P)."""
    if b.H != b.G.whole():
        raise PreconditionError("Brauer correspondents are taken for blocks of the whole group")
    N, c = brauer_correspondent(b.block)
    local = Subgroup(N.local_group, N.local_index[b.P.array])
    return BlockContext(b.G, N, c, local)


# ---------------------------------------------------------------------------
# t_g and t_Y

def t_single(z: CohClass, g: int, P: Subgroup) -> CohClass:
    """tr^P_{P cap gP} res^{gP}_{P cap gP} (^g z)."""
    c = conjugate_class(z, g)
    inter = P.intersection(c.sub)
    return transfer_class(restrict_class(c, inter), P)


def sasaki_transfer(z: CohClass, ctx: BlockContext) -> CohClass:
    total = zero_class(ctx.P, z.n, z.field)
    for e in ctx.y:
        term = t_single(z, e.rep, ctx.P)
        total = total + (term if e.multiplicity == 1 else term.scale(e.multiplicity % z.field.p))
    return total


def _matrix(P: Subgroup, n: int, field: GF, fn):
    """Matrix of a linear endomorphism of H^n(P,k) in class coordinates (row convention)."""
    basis = basis_classes(P, n, field)
    if not basis:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([fn(z).coords for z in basis], dtype=np.int64).reshape(len(basis), len(basis))


def t_matrix(ctx: BlockContext, n: int):
    return _matrix(ctx.P, n, ctx.coh_field, lambda z: sasaki_transfer(z, ctx))


def _rowspace(field, M, dim):
    M = np.asarray(M, dtype=np.int64)
    M = M.reshape(0, dim) if M.size == 0 else M.reshape(-1, dim)
    return Subspace(field, M, ambient=dim)


def _left_kernel(field, M, dim):
    """{c : c M = 0} for M with ``dim`` rows."""
    if dim == 0:
        return Subspace(field, np.zeros((0, 0), dtype=np.int64), ambient=0)
    M = np.asarray(M, dtype=np.int64).reshape(dim, -1)
    if M.shape[1] == 0:
        return Subspace(field, np.eye(dim, dtype=np.int64))
    K = nullspace(FieldMatrix.from_dense(field, M.T))
    return Subspace(field, K, ambient=dim)


def image_of_t(ctx: BlockContext, n: int) -> Subspace:
    d = cohomology_space(ctx.P.local_group, n, ctx.coh_field).dim
    return _rowspace(ctx.coh_field, t_matrix(ctx, n), d)


def kernel_of_t(ctx: BlockContext, n: int) -> Subspace:
    d = cohomology_space(ctx.P.local_group, n, ctx.coh_field).dim
    return _left_kernel(ctx.coh_field, t_matrix(ctx, n), d)


def merged_reps_consistent(ctx: BlockContext, n: int) -> bool:
    """t_g = t_g' whenever g' was merged onto the stored representative g."""
    for e in ctx.y:
        for g2 in e.merged:
            A = _matrix(ctx.P, n, ctx.coh_field, lambda z: t_single(z, e.rep, ctx.P))
            B = _matrix(ctx.P, n, ctx.coh_field, lambda z: t_single(z, g2, ctx.P))
            if not np.array_equal(A, B):
                return False
    return True


# ---------------------------------------------------------------------------
# stable elements and invariants

def stable_elements(ctx: BlockContext, n: int) -> Subspace:
    """{z : res^P_Q z = ^{x^-1} res^P_{xQ} z for every Q <= P and fusion map c_x: Q -> P}."""
    if n in ctx._stable:
        return ctx._stable[n]
    F, P = ctx.coh_field, ctx.P
    basis = basis_classes(P, n, F)
    d = len(basis)
    cols = []
    G = ctx.G
    for Q in ctx.subgroups:
        for x in ctx.hom(Q, P):
            xQ = Q.conjugate(x)
            if xQ == Q and all(G.conj(x, q) == q for q in Q.elements):
                continue
            rows = []
            for z in basis:
                lhs = restrict_class(z, Q)
                rhs = conjugate_class(restrict_class(z, xQ), G.inv[x])
                rows.append((lhs - rhs).coords)
            block = np.array(rows, dtype=np.int64).reshape(d, -1)
            if block.shape[1]:
                cols.append(block)
    M = np.concatenate(cols, axis=1) if cols else np.zeros((d, 0), dtype=np.int64)
    S = _left_kernel(F, M, d)
    ctx._stable[n] = S
    return S


def invariant_subspace(ctx: BlockContext, n: int) -> Subspace:
    """Joint fixed points of conj_x on H^n(P,k), x over N_G(P,e_P)/PC_G(P)."""
    F, P = ctx.coh_field, ctx.P
    d = cohomology_space(P.local_group, n, F).dim
    cols = []
    for x in ctx.inertial_reps:
        C = _matrix(P, n, F, lambda z: conjugate_class(z, x))
        cols.append(F.sub(C, np.eye(d, dtype=np.int64)))
    M = np.concatenate(cols, axis=1) if cols else np.zeros((d, 0), dtype=np.int64)
    return _left_kernel(F, M, d)


def classify(ctx: BlockContext):
    """Which of the sufficient conditions for the conjecture the block meets."""
    P, G = ctx.P, ctx.G
    labels = []
    if P.is_normal_in(ctx.H):
        labels.append("normal")
    if P.is_abelian():
        labels.append("abelian")
    N = ctx.inertial
    controlled = True
    for Q in ctx.subgroups:
        induced = set()
        for x in N.elements:
            img = G.conj(x, Q.array)
            if P.mask[img].all():
                induced.add(tuple(zip(Q.elements, (int(v) for v in img))))
        if not ctx.graphs(Q, P) <= induced:
            controlled = False
            break
    if controlled:
        labels.append("normalizer-controlled")
    return labels or ["other"]


@dataclass
class SasakiReport:
    block_index: int
    defect_order: int
    field: str
    classification: list
    y: list
    source_dim: int
    candidates: int
    degrees: list = dc_field(default_factory=list)
    merged_consistent: bool = True
    degree0_scalar_ok: bool = True
    hard_failures: list = dc_field(default_factory=list)

    def equal_at(self, n):
        return any(d["n"] == n and d["equal"] for d in self.degrees)


def conjecture_check(ctx: BlockContext, n_max: int) -> SasakiReport:
    F, P, G = ctx.coh_field, ctx.P, ctx.G
    labels = classify(ctx)
    rep = SasakiReport(
        block_index=ctx.block.index, defect_order=P.order, field=ctx.field.name, classification=labels,
        y=[{"rep": G.names[e.rep], "multiplicity": e.multiplicity, "coset_size": e.coset_size}
           for e in ctx.y],
        source_dim=ctx.dim_source, candidates=ctx.sd.candidates)
    must_equal = labels != ["other"]
    must_invariant = "normal" in labels or "abelian" in labels
    for n in range(n_max + 1):
        d = cohomology_space(P.local_group, n, F).dim
        img = image_of_t(ctx, n)
        stab = stable_elements(ctx, n)
        inv = invariant_subspace(ctx, n)
        in_stable = stab.contains_subspace(img)
        in_inv = inv.contains_subspace(img)
        equal = in_stable and img.dim == stab.dim
        ctx._equal[n] = equal
        ker = kernel_of_t(ctx, n)
        rep.degrees.append({
            "n": n, "dim_cohomology": d, "dim_image": img.dim, "dim_stable": stab.dim,
            "dim_invariant": inv.dim, "equal": bool(equal), "image_in_stable": bool(in_stable),
            "image_in_invariant": bool(in_inv), "dim_kernel": ker.dim,
            "split_dims": ker.dim + img.dim == d})
        if not in_stable:
            rep.hard_failures.append(f"block {ctx.block.index}, degree {n}: Im t_Y not inside the stable elements")
        if must_equal and not equal:
            rep.hard_failures.append(f"block {ctx.block.index}, degree {n}: Im t_Y != stable elements "
                                     f"({img.dim} vs {stab.dim}) for a {'/'.join(labels)} block")
        if must_invariant and not in_inv:
            rep.hard_failures.append(f"block {ctx.block.index}, degree {n}: Im t_Y not N-invariant")
        if n == 0 and d == 1:
            t0 = int(t_matrix(ctx, 0)[0, 0])
            rep.degree0_scalar_ok = t0 == ctx.scalar_in_field()
            if not rep.degree0_scalar_ok:
                rep.hard_failures.append(f"block {ctx.block.index}: t_Y on degree 0 is {t0}, "
                                         f"expected dim ikGi/|P| = {ctx.scalar_in_field()}")
    for n in range(min(n_max, 2) + 1):
        if not merged_reps_consistent(ctx, n):
            rep.merged_consistent = False
    return rep


# ---------------------------------------------------------------------------
# block restriction and transfer

class BlockCohClass:
    """A class on P certified stable for a block context."""

    def __init__(self, ctx: BlockContext, z: CohClass):
        if z.sub != ctx.P:
            raise ValueError("class must live on the defect group of the context")
        S = stable_elements(ctx, z.n)
        if z.field != S.field:
            S = Subspace.from_rref(z.field, S.basis, S.pivots)
        if not S.contains(z.coords):
            raise ValueError("class is not stable for the block's fusion system")
        self.ctx, self.cls = ctx, z


def stable_basis(ctx: BlockContext, n: int):
    S = stable_elements(ctx, n)
    return [BlockCohClass(ctx, from_coords(ctx.P, n, ctx.coh_field, row)) for row in S.basis]


def fusion_included(c: BlockContext, b: BlockContext) -> bool:
    """F_(Q,f_Q)(H,c) inside F_(P,e_P)(G,b), compared morphism set by morphism set."""
    if not c.P <= b.P:
        return False
    for Q1 in c.subgroups:
        for Q2 in c.subgroups:
            if not c.graphs(Q1, Q2) <= b.graphs(Q1, Q2):
                return False
    return True


def block_restriction(z: BlockCohClass, c: BlockContext) -> BlockCohClass:
    if not fusion_included(c, z.ctx):
        raise PreconditionError("fusion system of c is not contained in that of b")
    return BlockCohClass(c, restrict_class(z.cls, c.P))


def _conjecture_holds(b: BlockContext, n: int) -> bool:
    if n not in b._equal:
        img, stab = image_of_t(b, n), stable_elements(b, n)
        b._equal[n] = stab.contains_subspace(img) and img.dim == stab.dim
    return b._equal[n]


def block_transfer(t: BlockCohClass, b: BlockContext) -> BlockCohClass:
    """tr^b_c = t_Y(b) o tr^P_Q, defined where the conjecture holds for b."""
    if not _conjecture_holds(b, t.cls.n):
        raise PreconditionError(f"the conjecture is not verified for {b.label} in degree {t.cls.n}")
    out = sasaki_transfer(transfer_class(t.cls, b.P), b)
    return BlockCohClass(b, out)


# ---------------------------------------------------------------------------
# verifiers

def verify_reciprocity(b: BlockContext, c: BlockContext, n_max: int):
    """tr(res(z) t) = z tr(t) and tr(t res(z)) = tr(t) z on stable bases, total degree <= n_max."""
    results = []
    for a in range(n_max + 1):
        for d in range(n_max + 1 - a):
            if not _conjecture_holds(b, a + d) or not _conjecture_holds(b, d):
                results.append({"deg_zeta": a, "deg_tau": d, "pass": None, "skipped": "conjecture not verified"})
                continue
            ok = True
            for z in stable_basis(b, a):
                rz = block_restriction(z, c).cls
                for t in stable_basis(c, d):
                    tr_t = block_transfer(t, b).cls
                    lhs1 = block_transfer(BlockCohClass(c, cup(rz, t.cls)), b).cls
                    lhs2 = block_transfer(BlockCohClass(c, cup(t.cls, rz)), b).cls
                    if not classes_equal(lhs1, cup(z.cls, tr_t)) or not classes_equal(lhs2, cup(tr_t, z.cls)):
                        ok = False
            results.append({"deg_zeta": a, "deg_tau": d, "pass": ok})
    return results


def verify_transitivity(b: BlockContext, c: BlockContext, n_max: int):
    F = b.coh_field
    out = {"Q_order": c.P.order, "P_order": b.P.order, "scalar": b.scalar,
           "scalar_in_field": b.scalar_in_field(), "degrees": []}
    proper = c.P.order < b.P.order
    for n in range(n_max + 1):
        rec = {"n": n}
        if not _conjecture_holds(b, n):
            rec["skipped"] = "conjecture not verified for b"
            out["degrees"].append(rec)
            continue
        comp_ok = True
        for z in stable_basis(b, n):
            image = block_transfer(block_restriction(z, c), b).cls
            expected = zero_class(b.P, n, F) if proper else z.cls.scale(b.scalar_in_field())
            if not classes_equal(image, expected):
                comp_ok = False
        rec["zero_composite" if proper else "scalar_identity"] = comp_ok
        d = cohomology_space(b.P.local_group, n, F).dim
        for tag, ctx in (("b", b), ("c", c)):
            if ctx.P == b.P:
                rec[f"split_dims_{tag}"] = kernel_of_t(ctx, n).dim + image_of_t(ctx, n).dim == d
        if not proper:
            res_inclusion = all(stable_elements(c, n).contains(z.cls.coords) for z in stable_basis(b, n))
            rec["restriction_is_inclusion"] = res_inclusion
            c_ok = _conjecture_holds(c, n)
            kb, kc = kernel_of_t(b, n), kernel_of_t(c, n)
            rec["kernel_inclusion"] = kb.contains_subspace(kc)
            rec["conjecture_for_c"] = c_ok
            if c_ok and rec["kernel_inclusion"]:
                tri = True
                for z in basis_classes(b.P, n, F):
                    via_c = block_transfer(BlockCohClass(c, sasaki_transfer(z, c)), b).cls
                    if not classes_equal(via_c, sasaki_transfer(z, b)):
                        tri = False
                rec["triangle"] = tri
            else:
                rec["triangle"] = None
        out["degrees"].append(rec)
    return out


def verify_hh_square(b: BlockContext, c: BlockContext, n_max: int):
    """delta_P(tr^b_c z) against sum_g m_g t^P_{P cap gP} r^{gP}_{P cap gP} c_g (delta_P z)."""
    if c.P != b.P:
        raise PreconditionError("the square needs Q = P")
    P, F = b.P, b.coh_field
    results = []
    for n in range(n_max + 1):
        if not _conjecture_holds(b, n):
            raise PreconditionError(f"the conjecture is not verified for b in degree {n}")
        ok = True
        for z in stable_basis(c, n):
            lhs = diagonal_induction(block_transfer(z, b).cls)
            dz = diagonal_induction(z.cls)
            rhs = hh_zero(P, n, F)
            for e in b.y:
                cg = hh_conjugate(dz, e.rep)
                inter = P.intersection(cg.sub)
                term = hh_transfer(hh_restrict(cg, inter), P)
                rhs = rhs + (term if e.multiplicity == 1 else term.scale(e.multiplicity % F.p))
            if not hh_classes_equal(lhs, rhs):
                ok = False
        results.append({"n": n, "pass": ok})
    return results
