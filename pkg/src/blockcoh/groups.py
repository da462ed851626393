"""Finite groups as Cayley tables, with subgroup, coset and conjugation services.

Elements are dense indices ``0..n-1`` with 0 the identity.  Groups built from
permutations list their elements in shortlex order of generator words, so the
first generator of a builtin group gets a small index.
"""

from __future__ import annotations

import re
from collections import deque
from functools import cached_property
from math import gcd

import numpy as np

MAX_ORDER = 512


class GroupError(ValueError):
    pass


# -- permutations (tuples of images of 0..d-1); (a*b)(x) = a(b(x)) --

def perm_mul(a, b):
    return tuple(a[x] for x in b)


def perm_from_cycles(cycles, degree):
    img = list(range(degree))
    for cyc in cycles:
        for k, x in enumerate(cyc):
            img[x] = cyc[(k + 1) % len(cyc)]
    return tuple(img)


def perm_cycles_str(perm):
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        out.append("(" + ",".join(str(x + 1) for x in cyc) + ")")
    return "".join(out) if out else "e"


class FiniteGroup:
    """A finite group given by its multiplication table.

    ``mul[a, b]`` is the index of the product ``a*b``; index 0 is the identity.
    """

    def __init__(self, table, names=None, perms=None, label=None, check=True):
        mul = np.asarray(table, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be square and non-empty")
        if n > MAX_ORDER:
            raise GroupError(f"group order {n} exceeds {MAX_ORDER}")
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("multiplication table is not closed")
        self.mul = mul
        self.order = n
        self.identity = 0
        if check:
            self._check_axioms()
        inv = np.argmax(mul == 0, axis=1)
        self.inv = inv.astype(np.int64)
        self.names = list(names) if names is not None else [str(i) for i in range(n)]
        self.perms = perms
        self.label = label or f"group of order {n}"

    def _check_axioms(self):
        mul, n = self.mul, self.order
        ar = np.arange(n)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            raise GroupError("index 0 is not a two-sided identity")
        for row in mul:
            if len(np.unique(row)) != n:
                raise GroupError("multiplication table is not a Latin square")
        if not np.all((mul == 0).any(axis=1)):
            raise GroupError("missing inverses")
        if n <= 64:
            lhs = mul[mul[:, :, None], ar[None, None, :]]
            rhs = mul[ar[:, None, None], mul[None, :, :]]
            if not np.array_equal(lhs, rhs):
                raise GroupError("multiplication is not associative")
        else:
            rng = np.random.default_rng(12345)
            a, b, c = rng.integers(0, n, size=(3, 10 ** 5))
            if not np.array_equal(mul[mul[a, b], c], mul[a, mul[b, c]]):
                raise GroupError("multiplication is not associative")

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<FiniteGroup {self.label} order={self.order}>"

    def name(self, g):
        return self.names[g]

    def index(self, name):
        return self.names.index(name)

    def m(self, *elts):
        x = 0
        for g in elts:
            x = int(self.mul[x, g])
        return x

    def conj(self, g, x):
        """g x g^-1 (vectorised in x)."""
        return self.mul[self.mul[g, x], self.inv[g]]

    @cached_property
    def conj_table(self):
        ar = np.arange(self.order)
        return self.mul[self.mul[ar[:, None], ar[None, :]], self.inv[ar][:, None]]

    def elem_order(self, g):
        k, x = 1, g
        while x != 0:
            x = int(self.mul[x, g])
            k += 1
        return k

    @cached_property
    def exponent(self):
        e = 1
        for g in range(self.order):
            o = self.elem_order(g)
            e = e * o // gcd(e, o)
        return e

    @cached_property
    def conjugacy_classes(self):
        """Classes as sorted index lists, ordered by least element."""
        seen = np.zeros(self.order, dtype=bool)
        classes = []
        for x in range(self.order):
            if seen[x]:
                continue
            cls = np.unique(self.conj_table[:, x])
            seen[cls] = True
            classes.append([int(c) for c in cls])
        return classes

    @cached_property
    def class_of(self):
        out = np.zeros(self.order, dtype=np.int64)
        for k, cls in enumerate(self.conjugacy_classes):
            out[cls] = k
        return out

    def whole(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, [0])

    def generate(self, gens) -> "Subgroup":
        return Subgroup(self, closure(self, [0], gens))

    def is_abelian(self):
        return np.array_equal(self.mul, self.mul.T)


def closure(G: FiniteGroup, base, gens):
    """Elements of the subgroup generated by ``base`` (a subgroup) and ``gens``."""
    elems = set(int(x) for x in base)
    elems.add(0)
    gens = [int(g) for g in gens]
    queue = deque(elems)
    gens_all = gens + list(elems)
    while queue:
        x = queue.popleft()
        for g in gens_all:
            y = int(G.mul[x, g])
            if y not in elems:
                elems.add(y)
                queue.append(y)
                if len(elems) > G.order:
                    raise GroupError("closure exceeded the group")
    return sorted(elems)


class Subgroup:
    """Subgroup of a parent FiniteGroup, as a sorted element index list."""

    def __init__(self, group: FiniteGroup, elements, check=False):
        self.group = group
        self.elements = tuple(sorted(int(e) for e in set(elements)))
        self.mask = np.zeros(group.order, dtype=bool)
        self.mask[list(self.elements)] = True
        if check:
            self._check()

    def _check(self):
        el = np.array(self.elements)
        if not self.mask[0]:
            raise GroupError("subgroup lacks the identity")
        if not self.mask[self.group.mul[el[:, None], el[None, :]]].all():
            raise GroupError("subset is not closed under multiplication")
        if not self.mask[self.group.inv[el]].all():
            raise GroupError("subset is not closed under inverses")

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, g):
        return bool(self.mask[g])

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.group is self.group and other.elements == self.elements

    def __hash__(self):
        return hash((id(self.group), self.elements))

    def __le__(self, other):
        return bool(other.mask[list(self.elements)].all())

    def __lt__(self, other):
        return self <= other and self.order < other.order

    def __repr__(self):
        names = [self.group.names[e] for e in self.elements[:6]]
        more = ", ..." if self.order > 6 else ""
        return f"<Subgroup order={self.order} [{', '.join(names)}{more}]>"

    @cached_property
    def array(self):
        return np.array(self.elements, dtype=np.int64)

    @cached_property
    def local_index(self):
        """Parent index -> position in ``elements`` (-1 outside)."""
        pos = np.full(self.group.order, -1, dtype=np.int64)
        pos[self.array] = np.arange(self.order)
        return pos

    @cached_property
    def local_group(self) -> FiniteGroup:
        """The subgroup as a standalone FiniteGroup (local indices)."""
        el = self.array
        table = self.local_index[self.group.mul[el[:, None], el[None, :]]]
        return FiniteGroup(table, names=[self.group.names[e] for e in el],
                           label=f"subgroup of order {self.order}", check=False)

    def conjugate(self, g) -> "Subgroup":
        """g S g^-1."""
        return Subgroup(self.group, self.group.conj(g, self.array))

    def intersection(self, other) -> "Subgroup":
        return Subgroup(self.group, [e for e in self.elements if other.mask[e]])

    def is_normal_in(self, other=None):
        other = other if other is not None else self.group.whole()
        return all(self.conjugate(g) == self for g in other.elements)

    def is_abelian(self):
        el = self.array
        M = self.group.mul[el[:, None], el[None, :]]
        return np.array_equal(M, M.T)

    def is_p_group(self, p):
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    @cached_property
    def generators(self):
        """A small generating set chosen greedily by element index."""
        gens = []
        current = [0]
        for e in self.elements:
            if e not in set(current):
                gens.append(e)
                current = closure(self.group, current, [e])
            if len(current) == self.order:
                break
        return tuple(gens)

    def key(self):
        return self.elements


def canonical_conjugate(G: FiniteGroup, S: Subgroup, within=None) -> Subgroup:
    """Least element-index set among the conjugates of S by ``within`` (default G)."""
    conjugators = within.elements if within is not None else range(G.order)
    best = None
    for g in conjugators:
        c = tuple(sorted(G.conj(g, S.array).tolist()))
        if best is None or c < best:
            best = c
    return Subgroup(G, best)


def p_part(n, p):
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def normalizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    return Subgroup(G, [g for g in range(G.order) if S.mask[G.conj(g, S.array)].all()])


def centralizer(G: FiniteGroup, S: Subgroup) -> Subgroup:
    el = S.array
    return Subgroup(G, [g for g in range(G.order)
                        if np.array_equal(G.mul[g, el], G.mul[el, g])])


def sylow(G: FiniteGroup, p: int) -> Subgroup:
    """Sylow p-subgroup with the least element-index set."""
    target = p_part(G.order, p)
    P = G.trivial()
    while P.order < target:
        N = normalizer(G, P)
        grown = None
        for x in N.elements:
            if P.mask[x]:
                continue
            if P.mask[G.m(*([x] * p))]:
                grown = Subgroup(G, closure(G, P.elements, [x]))
                break
        if grown is None or not grown.is_p_group(p):
            raise GroupError("Sylow construction failed")
        P = grown
    return canonical_conjugate(G, P)


def left_coset_reps(G: FiniteGroup, H: Subgroup):
    """Least representative of each left coset xH, in increasing order."""
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    for x in range(G.order):
        if not seen[x]:
            reps.append(x)
            seen[G.mul[x, H.array]] = True
    return reps


def right_coset_reps(G: FiniteGroup, H: Subgroup):
    """Least representative of each right coset Hx, in increasing order."""
    seen = np.zeros(G.order, dtype=bool)
    reps = []
    for x in range(G.order):
        if not seen[x]:
            reps.append(x)
            seen[G.mul[H.array, x]] = True
    return reps


def double_cosets(G: FiniteGroup, K: Subgroup, H: Subgroup):
    """[(rep, sorted elements of K rep H)], rep least in its coset."""
    seen = np.zeros(G.order, dtype=bool)
    out = []
    for g in range(G.order):
        if seen[g]:
            continue
        coset = np.unique(G.mul[G.mul[K.array[:, None], g], H.array[None, :]])
        seen[coset] = True
        out.append((g, [int(c) for c in coset]))
    return out


def subgroups(S: Subgroup, max_order=64):
    """All subgroups of S, ordered by (order, element list)."""
    if S.order > max_order:
        raise GroupError(f"subgroup enumeration capped at order {max_order}")
    G = S.group
    found = {(0,)}
    cyclic = {tuple(closure(G, [0], [x])) for x in S.elements}
    found |= cyclic
    frontier = list(found)
    while frontier:
        new = []
        for A in frontier:
            for C in cyclic:
                if set(C) <= set(A):
                    continue
                J = tuple(closure(G, A, C))
                if J not in found:
                    found.add(J)
                    new.append(J)
        frontier = new
    return [Subgroup(G, e) for e in sorted(found, key=lambda t: (len(t), t))]


def subgroups_up_to_conjugacy(G: FiniteGroup, S: Subgroup):
    """Subgroups of S, one canonical representative per G-conjugacy class."""
    reps = {}
    for T in subgroups(S):
        c = canonical_conjugate(G, T)
        reps.setdefault(c.elements, c)
    return sorted(reps.values(), key=lambda T: (T.order, T.elements))


def conjugator(G: FiniteGroup, A: Subgroup, B: Subgroup, within=None):
    """Least g (in ``within`` if given) with gAg^-1 = B, or None."""
    if A.order != B.order:
        return None
    conjugators = within.elements if within is not None else range(G.order)
    for g in conjugators:
        if B.mask[G.conj(g, A.array)].all():
            return g
    return None


def are_conjugate(G: FiniteGroup, A: Subgroup, B: Subgroup, within=None) -> bool:
    return conjugator(G, A, B, within) is not None


def direct_product_table(A: FiniteGroup, B: FiniteGroup):
    """Table of A x B with (a, b) at index a*|B| + b."""
    na, nb = A.order, B.order
    ia, ib = np.divmod(np.arange(na * nb), nb)
    return A.mul[ia[:, None], ia[None, :]] * nb + B.mul[ib[:, None], ib[None, :]]


# ---------------------------------------------------------------------------
# construction from descriptions

def group_from_perms(gens, degree, label=None) -> FiniteGroup:
    """Group generated by permutations, elements in shortlex generator-word order."""
    ident = tuple(range(degree))
    gens = [tuple(g) for g in gens if tuple(g) != ident]
    elems = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = perm_mul(x, g)
            if y not in index:
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
                if len(elems) > MAX_ORDER:
                    raise GroupError(f"generated group exceeds order {MAX_ORDER}")
    n = len(elems)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[perm_mul(a, b)]
    names = [perm_cycles_str(e) for e in elems]
    return FiniteGroup(table, names=names, perms=elems, label=label)


def _cycle(points, degree):
    return perm_from_cycles([points], degree)


def _builtin_perms(kind, n):
    if kind == "C":
        if n < 1:
            raise GroupError("cyclic group needs n >= 1")
        return [_cycle(list(range(n)), max(n, 1))], max(n, 1)
    if kind == "S":
        if n < 1:
            raise GroupError("symmetric group needs n >= 1")
        gens = []
        if n >= 2:
            gens.append(_cycle([0, 1], n))
        if n >= 3:
            gens.append(_cycle(list(range(n)), n))
        return gens, n
    if kind == "A":
        if n < 1:
            raise GroupError("alternating group needs n >= 1")
        if n == 4:
            return [perm_from_cycles([[0, 1], [2, 3]], 4), _cycle([0, 1, 2], 4)], 4
        return [_cycle([0, 1, k], n) for k in range(2, n)], n
    if kind == "D":
        if n < 2 or n % 2:
            raise GroupError("dihedral group D n needs even order n >= 2")
        m = n // 2
        if m == 1:
            return [_cycle([0, 1], 2)], 2
        if m == 2:
            return [perm_from_cycles([[0, 1]], 4), perm_from_cycles([[2, 3]], 4)], 4
        rot = _cycle(list(range(m)), m)
        refl = tuple((-x) % m for x in range(m))
        return [rot, refl], m
    raise GroupError(f"unknown group family {kind!r}")


def _q8_perms():
    # quaternion units as (sign, unit) with unit in 1,i,j,k; regular action on 8 points
    table = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
             ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
             ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elems = [(s, u) for s in (1, -1) for u in "1ijk"]
    idx = {e: k for k, e in enumerate(elems)}

    def left(a):
        out = []
        for b in elems:
            s, u = table[(a[1], b[1])]
            out.append(idx[(a[0] * b[0] * s, u)])
        return tuple(out)
    return [left((1, "i")), left((1, "j"))], 8


def _split_top(text, sep=","):
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def _parse_perm_list(body):
    gens_cycles = []
    maxpt = 0
    for tok in _split_top(body):
        if not tok:
            continue
        if not re.fullmatch(r"(\(\s*\d+(?:[\s,]+\d+)*\s*\))+|\(\s*\)", tok):
            raise GroupError(f"cannot parse permutation {tok!r}")
        cycles = []
        for c in re.findall(r"\(([^)]*)\)", tok):
            pts = [int(x) - 1 for x in re.split(r"[\s,]+", c.strip()) if x]
            if any(x < 0 for x in pts) or len(set(pts)) != len(pts):
                raise GroupError(f"bad cycle {c!r}")
            if pts:
                maxpt = max(maxpt, max(pts) + 1)
            cycles.append(pts)
        gens_cycles.append(cycles)
    degree = max(maxpt, 1)
    return [perm_from_cycles(c, degree) for c in gens_cycles], degree


def _perms_of(spec):
    spec = spec.strip()
    m = re.fullmatch(r"prod\((.*)\)", spec)
    if m:
        parts = _split_top(m.group(1))
        if len(parts) < 2:
            raise GroupError(f"prod needs at least two factors: {spec!r}")
        gens, degree = [], 0
        for part in parts:
            g2, d2 = _perms_of(part)
            gens = [g + tuple(range(degree, degree + d2)) for g in gens]
            gens += [tuple(range(degree)) + tuple(x + degree for x in g) for g in g2]
            degree += d2
        return gens, degree
    if spec.startswith("perm:"):
        return _parse_perm_list(spec[len("perm:"):])
    if re.fullmatch(r"Q\s*8", spec):
        return _q8_perms()
    m = re.fullmatch(r"([CDSA])\s*(\d+)", spec)
    if m:
        return _builtin_perms(m.group(1), int(m.group(2)))
    tok = spec.split()[0] if spec.split() else spec
    raise GroupError(f"cannot parse group description near {tok!r}")


def make_group(spec: str) -> FiniteGroup:
    """Build a group from ``C n | D n | S n | A n | Q8 | prod(a,b) | perm: ...``."""
    gens, degree = _perms_of(spec)
    G = group_from_perms(gens, degree, label=spec.strip())
    return G


def direct_product(A: FiniteGroup, B: FiniteGroup) -> FiniteGroup:
    table = direct_product_table(A, B)
    nb = B.order
    names = [f"({A.names[i // nb]},{B.names[i % nb]})" for i in range(A.order * nb)]
    return FiniteGroup(table, names=names, label=f"{A.label} x {B.label}", check=False)


DEFAULT_CATALOG = ["C 2", "C 3", "C 4", "prod(C 2,C 2)", "S 3", "D 8", "Q8", "A 4", "D 12", "S 4"]
