import numpy as np
import pytest

from blockcoh.blocks import (GroupAlgebra, SourceData, block_idempotents, blocks_of, brauer_correspondent,
                             brauer_truncate, splitting_field)
from blockcoh.field import GF
from blockcoh.groups import DEFAULT_CATALOG, make_group, normalizer

# (group, p): field, [(defect order, dim ikGi, {rep: multiplicity})] per block
FACTS = {
    ("S 3", 3): ("GF(3)", [(3, 6, {"e": 1, "(1,2)": 1})]),
    ("S 3", 2): ("GF(4)", [(2, 2, {"e": 1}), (1, 1, {"e": 1})]),
    ("A 4", 2): ("GF(4)", [(4, 12, {"e": 1, "(1,2,3)": 1, "(1,3,2)": 1})]),
    ("A 4", 3): ("GF(3)", [(3, 3, {"e": 1}), (1, 1, {"e": 1})]),
    ("S 4", 2): ("GF(4)", [(8, 24, {"e": 1, "(1,2,3,4)": 1})]),
    ("S 4", 3): ("GF(9)", [(3, 6, {"e": 1, "(2,4)": 1}), (1, 1, {"e": 1}), (1, 1, {"e": 1})]),
    ("C 4", 2): ("GF(2)", [(4, 4, {"e": 1})]),
    ("Q8", 2): ("GF(2)", [(8, 8, {"e": 1})]),
}


@pytest.mark.parametrize("key", sorted(FACTS))
def test_block_facts(key):
    spec, p = key
    G = make_group(spec)
    field, expected = FACTS[key]
    blocks = blocks_of(G, p)
    assert blocks[0].principal and blocks[0].field.name == field
    got = []
    for b in blocks:
        sd = SourceData(b)
        got.append((b.defect.order, sd.dim_source, {G.names[e.rep]: e.multiplicity for e in sd.y}))
    assert got == expected


def test_s4_y_coset_sizes():
    G = make_group("S 4")
    sd = SourceData(blocks_of(G, 2)[0])
    assert [(G.names[e.rep], e.coset_size) for e in sd.y] == [("e", 8), ("(1,2,3,4)", 16)]


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
@pytest.mark.parametrize("p", [2, 3])
def test_block_idempotents_partition_unity(spec, p):
    G = make_group(spec)
    A = GroupAlgebra(G, splitting_field(G, p))
    blocks = blocks_of(G, p)
    total = np.zeros(G.order, dtype=np.int64)
    for b in blocks:
        e = b.idempotent
        assert np.array_equal(A.mul(e, e), e) and A.is_central(e)
        total = A.field.add(total, e)
    assert np.array_equal(total, A.unit())
    assert sum(b.principal for b in blocks) == 1
    assert A.augmentation(blocks[0].idempotent) == 1


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
@pytest.mark.parametrize("p", [2, 3])
def test_source_data_invariants(spec, p):
    G = make_group(spec)
    for b in blocks_of(G, p):
        sd = SourceData(b)
        A = sd.kG
        assert np.array_equal(A.mul(sd.i, sd.i), sd.i)
        assert brauer_truncate(A, sd.i, sd.P).any()
        assert sum(e.multiplicity * e.coset_size for e in sd.y) == sd.dim_source
        assert sd.dim_source % sd.P.order == 0
        assert sd.y_contains_inertial()
        assert sd.fusion.contains_inner()


@pytest.mark.parametrize("spec,p", [("S 3", 3), ("A 4", 2), ("S 4", 3), ("D 8", 2)])
def test_fusion_system_closed_under_composition(spec, p):
    sd = SourceData(blocks_of(make_group(spec), p)[0])
    assert sd.fusion.composition_closed()


def test_nilpotent_type_block_has_trivial_fusion():
    G = make_group("S 3")
    sd = SourceData(blocks_of(G, 2)[0])
    P = sd.P
    assert len(sd.fusion.hom(P, P)) == 1


def test_splitting_field_degrees():
    assert splitting_field(make_group("C 3"), 2) == GF(2, 2)
    assert splitting_field(make_group("S 3"), 3) == GF(3)
    assert splitting_field(make_group("S 4"), 3) == GF(3, 2)
    assert splitting_field(make_group("D 8"), 2) == GF(2)


def test_brauer_correspondent_matches_defect():
    G = make_group("S 4")
    b = blocks_of(G, 3)[0]
    N, c = brauer_correspondent(b)
    assert N == normalizer(G, b.defect)
    assert c.defect.order == b.defect.order and c.principal
    with pytest.raises(ValueError):
        brauer_correspondent(b, G.whole())


def test_brauer_truncation_needs_fixed_element():
    G = make_group("S 3")
    A = GroupAlgebra(G, GF(3))
    x = A.basis(G.index("(1,2)"))
    with pytest.raises(ValueError):
        brauer_truncate(A, x, G.generate([G.index("(1,2,3)")]))


def test_cached_blocks_rebind_to_the_callers_group():
    G = make_group("A 4")
    a = block_idempotents(G, GF(2, 2))
    H = make_group("A 4")
    b = block_idempotents(H, GF(2, 2))
    assert b[0].group is H and b[0].defect.group is H
    assert all(np.array_equal(x.idempotent, y.idempotent) for x, y in zip(a, b))
