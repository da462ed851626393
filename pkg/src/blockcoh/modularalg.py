"""Finite-dimensional algebras over GF(q): radicals, idempotents, decompositions.

An algebra is given by structure constants on a basis.  Primitive idempotents
are found by splitting: pick an element whose minimal polynomial has a root
``lam`` and a coprime cofactor, and evaluate the CRT idempotent of the
generalised ``lam``-eigenspace.  A corner ``eAe`` is primitive when it is
local, i.e. ``eAe = k e + N`` with ``N`` a nilpotent ideal.
"""

from __future__ import annotations

import numpy as np

from .field import GF
from .linalg import FieldMatrix, Subspace, nullspace, rank


class AlgebraError(ValueError):
    pass


class NotSplittingError(AlgebraError):
    pass


# -- polynomials over GF(q): lists of ints, lowest degree first --

def _ptrim(f):
    f = [int(c) for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _pdivmod(F, f, g):
    f, g = _ptrim(f), _ptrim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [0] * max(len(f) - len(g) + 1, 1)
    inv_lead = int(F.inv(g[-1]))
    while len(f) >= len(g) and f:
        c = int(F.mul(f[-1], inv_lead))
        shift = len(f) - len(g)
        quot[shift] = c
        for k, gk in enumerate(g):
            f[shift + k] = int(F.sub(f[shift + k], F.mul(c, gk)))
        f = _ptrim(f)
    return _ptrim(quot), f


def _pmul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = int(F.add(out[i + j], F.mul(a, b)))
    return _ptrim(out)


def _psub(F, f, g):
    n = max(len(f), len(g))
    f = list(f) + [0] * (n - len(f))
    g = list(g) + [0] * (n - len(g))
    return _ptrim([int(F.sub(a, b)) for a, b in zip(f, g)])


def _pxgcd(F, a, b):
    """(g, u, v) with u a + v b = g."""
    r0, r1 = _ptrim(a), _ptrim(b)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(F, s0, _pmul(F, q, s1))
        t0, t1 = t1, _psub(F, t0, _pmul(F, q, t1))
    return r0, s0, t0


def _peval_all(F, f):
    """Values of f at every field element."""
    xs = F.elements()
    acc = np.zeros_like(xs)
    for c in reversed(f):
        acc = F.add(F.mul(acc, xs), np.int64(c))
    return acc


class StructureAlgebra:
    """Associative unital algebra with ``consts[i, j] = e_i * e_j`` in coordinates."""

    def __init__(self, field: GF, consts, unit, name="algebra", check=True):
        self.field = field
        self.consts = np.asarray(consts, dtype=np.int64)
        self.dim = self.consts.shape[0]
        self.unit = np.asarray(unit, dtype=np.int64)
        self.name = name
        self._flat = self.consts.reshape(self.dim, self.dim * self.dim)
        self._flat_t = self.consts.transpose(1, 0, 2).reshape(self.dim, self.dim * self.dim)
        if check:
            self.check()

    # -- constructors --
    @classmethod
    def from_basis(cls, field, basis, multiply, unit, name="subalgebra", check=True):
        """Subalgebra spanned by the rows of ``basis`` (reduced echelon form) of an
        ambient algebra with product ``multiply``; ``unit`` is in ambient coordinates."""
        S = Subspace(field, basis)
        d = S.dim
        consts = np.zeros((d, d, d), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                prod = multiply(S.basis[i], S.basis[j])
                if S.reduce(prod).any():
                    raise AlgebraError("basis does not span a subalgebra")
                consts[i, j] = S.coordinates(prod)
        if S.reduce(unit).any():
            raise AlgebraError("unit not in the span")
        alg = cls(field, consts, S.coordinates(unit), name=name, check=check)
        alg.ambient_basis = S.basis
        return alg

    @classmethod
    def group_algebra(cls, G, field):
        n = G.order
        consts = np.zeros((n, n, n), dtype=np.int64)
        ar = np.arange(n)
        consts[ar[:, None], ar[None, :], G.mul] = 1
        unit = np.zeros(n, dtype=np.int64)
        unit[0] = 1
        return cls(field, consts, unit, name=f"k[{G.label}]", check=False)

    @classmethod
    def truncated_polynomial(cls, field, k):
        """k[eps]/(eps^k) on the basis 1, eps, ..., eps^(k-1)."""
        consts = np.zeros((k, k, k), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                if i + j < k:
                    consts[i, j, i + j] = 1
        unit = np.zeros(k, dtype=np.int64)
        unit[0] = 1
        return cls(field, consts, unit, name=f"k[eps]/(eps^{k})", check=False)

    # -- arithmetic --
    def left_matrix(self, x):
        """L with (x*y) = y @ L."""
        return self.field.matmul(np.asarray(x)[None, :], self._flat).reshape(self.dim, self.dim)

    def right_matrix(self, y):
        """R with (x*y) = x @ R."""
        return self.field.matmul(np.asarray(y)[None, :], self._flat_t).reshape(self.dim, self.dim)

    def mul(self, x, y):
        return self.field.matmul(np.asarray(y)[None, :], self.left_matrix(x))[0]

    def add(self, x, y):
        return self.field.add(x, y)

    def sub(self, x, y):
        return self.field.sub(x, y)

    def scale(self, c, x):
        return self.field.mul(np.int64(c), x)

    def power(self, x, e):
        result = self.unit.copy()
        base = np.asarray(x, dtype=np.int64)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def basis_vector(self, i):
        v = np.zeros(self.dim, dtype=np.int64)
        v[i] = 1
        return v

    def is_idempotent(self, x):
        return np.array_equal(self.mul(x, x), np.asarray(x))

    def is_central(self, x):
        return all(np.array_equal(self.mul(x, self.basis_vector(i)), self.mul(self.basis_vector(i), x))
                   for i in range(self.dim))

    def check(self, samples=2000):
        F, d = self.field, self.dim
        for i in range(d):
            e = self.basis_vector(i)
            if not (np.array_equal(self.mul(self.unit, e), e) and np.array_equal(self.mul(e, self.unit), e)):
                raise AlgebraError("unit law fails")
        if d <= 64:
            triples = [(i, j, k) for i in range(d) for j in range(d) for k in range(d)] if d <= 16 else None
        else:
            triples = None
        if triples is None:
            rng = np.random.default_rng(7)
            triples = rng.integers(0, d, size=(samples, 3)).tolist()
        for i, j, k in triples:
            lhs = self.mul(self.consts[i, j], self.basis_vector(k))
            rhs = self.mul(self.basis_vector(i), self.consts[j, k])
            if not np.array_equal(lhs, rhs):
                raise AlgebraError(f"associativity fails on basis triple {(i, j, k)}")

    # -- subspaces --
    def corner(self, e):
        """Basis (reduced echelon) of e A e."""
        rows = [self.mul(self.mul(e, self.basis_vector(i)), e) for i in range(self.dim)]
        return Subspace(self.field, np.array(rows))

    def right_ideal_dim(self, e):
        """dim e A."""
        return rank(FieldMatrix.from_dense(self.field, self.right_matrix_of_left(e)))

    def right_matrix_of_left(self, e):
        rows = [self.mul(e, self.basis_vector(i)) for i in range(self.dim)]
        return np.array(rows)

    def product_space(self, U: Subspace, V: Subspace):
        if U.dim == 0 or V.dim == 0:
            return Subspace(self.field, np.zeros((0, self.dim), dtype=np.int64))
        rows = [self.mul(u, v) for u in U.basis for v in V.basis]
        return Subspace(self.field, np.array(rows))

    def is_nilpotent_space(self, N: Subspace):
        power = N
        for _ in range(self.dim + 1):
            if power.dim == 0:
                return True
            nxt = self.product_space(power, N)
            if nxt.dim >= power.dim:
                return False
            power = nxt
        return power.dim == 0

    def minimal_polynomial(self, x, unit=None):
        """Monic minimal polynomial of x in the unital subalgebra with identity ``unit``."""
        F = self.field
        unit = self.unit if unit is None else unit
        powers = [np.asarray(unit, dtype=np.int64)]
        while True:
            powers.append(self.mul(powers[-1], x))
            M = np.array(powers)
            K = nullspace(FieldMatrix.from_dense(F, M.T))
            if len(K):
                rel = K[-1]
                # the relation of least degree has its last nonzero entry at the top power
                nzs = [np.nonzero(row)[0].max() for row in K]
                rel = K[int(np.argmin(nzs))]
                top = int(np.nonzero(rel)[0].max())
                rel = F.mul(F.inv(rel[top]), rel[:top + 1])
                return [int(c) for c in rel]
            if len(powers) > self.dim + 2:
                raise AlgebraError("minimal polynomial search did not terminate")

    def eval_poly(self, f, x, unit=None):
        unit = self.unit if unit is None else unit
        acc = np.zeros(self.dim, dtype=np.int64)
        for c in reversed(f):
            acc = self.field.add(self.mul(acc, x), self.field.mul(np.int64(c), unit))
        return acc


# ---------------------------------------------------------------------------
# locality, splitting, primitive decomposition

def local_radical(A: StructureAlgebra, e):
    """If e A e is split local, return its radical (a Subspace); otherwise None."""
    F = A.field
    B = A.corner(e)
    if B.dim == 1:
        return Subspace(F, np.zeros((0, A.dim), dtype=np.int64))
    gens = []
    for b in B.basis:
        mu = A.minimal_polynomial(b, unit=e)
        roots = np.nonzero(_peval_all(F, mu) == 0)[0]
        if len(roots) != 1:
            return None
        lam = int(roots[0])
        # mu must be a power of (t - lam)
        rest = mu
        lin = [int(F.neg(lam)), 1]
        while len(rest) > 1:
            q, r = _pdivmod(F, rest, lin)
            if r:
                return None
            rest = q
        gens.append(F.sub(b, F.mul(np.int64(lam), e)))
    N = Subspace(F, np.array(gens))
    if N.dim != B.dim - 1 or N.contains(e):
        return None
    if not A.is_nilpotent_space(N):
        return None
    return N


def _split_with(A, e, x):
    """Idempotent f in k[x] with f != 0, e, or None."""
    F = A.field
    mu = A.minimal_polynomial(x, unit=e)
    if len(mu) <= 2:
        return None
    roots = np.nonzero(_peval_all(F, mu) == 0)[0]
    for lam in roots.tolist():
        lin = [int(F.neg(lam)), 1]
        part = [1]
        rest = mu
        while True:
            q, r = _pdivmod(F, rest, lin)
            if r:
                break
            part = _pmul(F, part, lin)
            rest = q
        if len(rest) <= 1:
            continue
        g, u, v = _pxgcd(F, part, rest)
        if len(g) != 1:
            continue
        ginv = int(F.inv(g[0]))
        v = [int(F.mul(ginv, c)) for c in v]
        # v*rest = 1 modulo part: idempotent for the lam-primary component
        f = A.eval_poly(_pmul(F, v, rest), x, unit=e)
        if f.any() and not np.array_equal(f, e):
            return f
    return None


def _candidates(A, e, B, limit):
    F = A.field
    for b in B.basis:
        yield b
    rng = np.random.default_rng(20240601)
    for _ in range(limit):
        coeffs = rng.integers(0, F.q, size=B.dim)
        yield F.matmul(coeffs[None, :], B.basis)[0]


def split_idempotent(A: StructureAlgebra, e, tries=200):
    B = A.corner(e)
    for x in _candidates(A, e, B, tries):
        f = _split_with(A, e, x)
        if f is not None:
            return f
    return None


def _order_key(A, e):
    return (A.right_ideal_dim(e), tuple(int(c) for c in e))


def primitive_decomposition(A: StructureAlgebra, e=None, tries=200):
    """Pairwise orthogonal primitive idempotents summing to e.

    Ordered by dimension of e_i A, then lexicographically by coefficients.
    """
    e = A.unit if e is None else np.asarray(e, dtype=np.int64)
    if not A.is_idempotent(e):
        raise AlgebraError("element is not an idempotent")
    if not e.any():
        return []
    out = []
    stack = [e]
    while stack:
        f = stack.pop()
        if local_radical(A, f) is not None:
            out.append(f)
            continue
        g = split_idempotent(A, f, tries)
        if g is None:
            raise NotSplittingError(
                f"could not split the non-local summand {f.tolist()} of {A.name}; "
                "the field may not be a splitting field")
        stack.append(A.field.sub(f, g))
        stack.append(g)
    out.sort(key=lambda x: _order_key(A, x))
    _certify_idempotents(A, out, e)
    return out


def _certify_idempotents(A, idems, total):
    F = A.field
    acc = np.zeros(A.dim, dtype=np.int64)
    for i, x in enumerate(idems):
        if not A.is_idempotent(x):
            raise AlgebraError("non-idempotent in decomposition")
        for j, y in enumerate(idems):
            if i != j and A.mul(x, y).any():
                raise AlgebraError("idempotents are not orthogonal")
        acc = F.add(acc, x)
    if not np.array_equal(acc, total):
        raise AlgebraError("idempotents do not sum to the decomposed element")


def radical(A: StructureAlgebra) -> Subspace:
    """Jacobson radical, assembled from Peirce components of a primitive decomposition.

    For primitive e_i, e_j: e_i J e_j = {x in e_i A e_j : x (e_j A e_i) in J(e_i A e_i)}.
    """
    F = A.field
    idems = primitive_decomposition(A)
    locals_ = [local_radical(A, e) for e in idems]
    pieces = []
    for i, ei in enumerate(idems):
        for j, ej in enumerate(idems):
            Pij = Subspace(F, np.array([A.mul(A.mul(ei, A.basis_vector(k)), ej) for k in range(A.dim)]))
            if Pij.dim == 0:
                continue
            if i == j:
                pieces.extend(locals_[i].basis)
                continue
            Pji = Subspace(F, np.array([A.mul(A.mul(ej, A.basis_vector(k)), ei) for k in range(A.dim)]))
            if Pji.dim == 0:
                pieces.extend(Pij.basis)
                continue
            Ni = locals_[i]
            # linear conditions: for each y in P_ji basis, x*y reduces to 0 modulo N_i
            blocks = []
            for y in Pji.basis:
                R = A.right_matrix(y)
                img = F.matmul(Pij.basis, R)
                blocks.append(Ni.reduce(img))
            cond = np.concatenate(blocks, axis=1)
            K = nullspace(FieldMatrix.from_dense(F, cond.T))
            if len(K):
                pieces.extend(F.matmul(K, Pij.basis))
    J = Subspace(F, np.array(pieces) if pieces else np.zeros((0, A.dim), dtype=np.int64), ambient=A.dim)
    certify_radical(A, J)
    return J


def certify_radical(A: StructureAlgebra, J: Subspace):
    """J must be a two-sided nilpotent ideal with semisimple quotient."""
    if J.dim == 0:
        return
    for v in J.basis:
        for i in range(A.dim):
            b = A.basis_vector(i)
            if not (J.contains(A.mul(v, b)) and J.contains(A.mul(b, v))):
                raise AlgebraError("radical candidate is not an ideal")
    if not A.is_nilpotent_space(J):
        raise AlgebraError("radical candidate is not nilpotent")


def quotient_algebra(A: StructureAlgebra, J: Subspace):
    """A/J on the non-pivot coordinates of J's echelon basis."""
    F = A.field
    keep = [k for k in range(A.dim) if k not in set(J.pivots)]
    d = len(keep)
    consts = np.zeros((d, d, d), dtype=np.int64)
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            consts[a, b] = J.reduce(A.consts[i, j])[keep]
    unit = J.reduce(A.unit)[keep]
    return StructureAlgebra(F, consts, unit, name=f"{A.name}/J", check=False)


def nilpotency_index(A: StructureAlgebra, J: Subspace):
    power, k = J, 1
    while power.dim:
        power = A.product_space(power, J)
        k += 1
        if k > A.dim + 1:
            raise AlgebraError("not nilpotent")
    return k


def lift_idempotent(A: StructureAlgebra, x, J: Subspace = None):
    """Idempotent e with e = x modulo J(A), via repeated p-th powers in k[x]."""
    F = A.field
    x = np.asarray(x, dtype=np.int64)
    J = radical(A) if J is None else J
    if not J.contains(F.sub(A.mul(x, x), x)):
        raise AlgebraError("x^2 - x does not lie in the radical")
    y = x
    for _ in range(A.dim + 1):
        if A.is_idempotent(y):
            return y
        y = A.power(y, F.q)
    raise AlgebraError("idempotent lifting did not converge")


# ---------------------------------------------------------------------------
# modules

def endomorphism_algebra(field: GF, actions):
    """Commutant of the action matrices (acting on column vectors)."""
    actions = [np.asarray(M, dtype=np.int64) for M in actions]
    n = actions[0].shape[0]
    F = field
    # unknown phi (n x n) flattened row-major; phi M - M phi = 0
    eqs = []
    I = np.eye(n, dtype=np.int64)
    for M in actions:
        # vec(phi M) = (I kron M^T) vec(phi); vec(M phi) = (M kron I) vec(phi)
        left = np.kron(I, M.T)
        right = np.kron(M, I)
        eqs.append(F.sub(left, right))
    K = nullspace(FieldMatrix.from_dense(F, np.concatenate(eqs, axis=0)))

    def multiply(a, b):
        return F.matmul(a.reshape(n, n), b.reshape(n, n)).ravel()
    return StructureAlgebra.from_basis(F, K, multiply, I.ravel(), name="End(M)", check=False)


def decompose_module(field: GF, actions):
    """Projections onto indecomposable summands, as n x n matrices."""
    n = np.asarray(actions[0]).shape[0]
    E = endomorphism_algebra(field, actions)
    idems = primitive_decomposition(E)
    return [field.matmul(c[None, :], E.ambient_basis)[0].reshape(n, n) for c in idems]


def regular_actions(A: StructureAlgebra):
    """Left regular module: matrices of x -> e_i x on column vectors."""
    return [A.left_matrix(A.basis_vector(i)).T for i in range(A.dim)]
