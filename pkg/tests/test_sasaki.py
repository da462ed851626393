import pytest

from blockcoh.groupcoh import basis_classes, classes_equal, conjugate_class, unit_class
from blockcoh.groups import DEFAULT_CATALOG, make_group
from blockcoh.blocks import blocks_of
from blockcoh.sasaki import (BlockCohClass, PreconditionError, block_context, block_restriction, block_transfer,
                             conjecture_check, correspondent_context, fusion_included, image_of_t,
                             invariant_subspace, kernel_of_t, merged_reps_consistent, sasaki_transfer,
                             stable_basis, stable_elements, sub_context, t_single, verify_hh_square,
                             verify_reciprocity, verify_transitivity)


def ctx_of(spec, p, index=0):
    return block_context(make_group(spec), p, index)


def dims(fn, ctx, n_max):
    return tuple(fn(ctx, n).dim for n in range(n_max + 1))


def test_t_single_identity_on_p():
    ctx = ctx_of("D 8", 2)
    for n in range(3):
        for z in basis_classes(ctx.P, n, ctx.coh_field):
            for u in ctx.P.elements:
                assert classes_equal(t_single(z, u, ctx.P), z)


def test_t_single_vanishes_through_trivial_intersection():
    G = make_group("S 3")
    ctx = ctx_of("S 3", 2)
    g = G.index("(1,2,3)")
    assert ctx.P.intersection(ctx.P.conjugate(g)).order == 1
    for n in (1, 2, 3):
        for z in basis_classes(ctx.P, n, ctx.coh_field):
            assert t_single(z, g, ctx.P).is_zero()


def test_t_single_is_conjugation_for_normal_p():
    ctx = ctx_of("S 3", 3)
    g = ctx.G.index("(1,2)")
    for n in range(5):
        for z in basis_classes(ctx.P, n, ctx.coh_field):
            assert classes_equal(t_single(z, g, ctx.P), conjugate_class(z, g))


def test_trivial_y_gives_identity():
    ctx = ctx_of("Q8", 2)
    assert [(e.rep, e.multiplicity) for e in ctx.y] == [(0, 1)]
    for n in range(3):
        for z in basis_classes(ctx.P, n, ctx.coh_field):
            assert classes_equal(sasaki_transfer(z, ctx), z)


@pytest.mark.parametrize("spec,p,n_max,expected", [
    ("S 3", 3, 4, (1, 0, 0, 1, 1)), ("A 4", 2, 2, (1, 0, 1)), ("S 3", 2, 4, (1, 1, 1, 1, 1)),
])
def test_image_stable_invariant_dims(spec, p, n_max, expected):
    ctx = ctx_of(spec, p)
    assert dims(image_of_t, ctx, n_max) == expected
    assert dims(stable_elements, ctx, n_max) == expected
    assert dims(invariant_subspace, ctx, n_max) == expected


@pytest.mark.parametrize("spec", DEFAULT_CATALOG)
@pytest.mark.parametrize("p", [2, 3])
def test_degree_zero_and_report_consistency(spec, p):
    G = make_group(spec)
    for blk in blocks_of(G, p):
        ctx = block_context(G, p, blk.index)
        rep = conjecture_check(ctx, 2)
        assert stable_elements(ctx, 0).dim == 1
        assert rep.degree0_scalar_ok and rep.merged_consistent and not rep.hard_failures
        for d in rep.degrees:
            assert d["image_in_stable"] and d["dim_image"] <= d["dim_stable"]
            assert d["equal"] == (d["dim_image"] == d["dim_stable"])
            assert d["dim_kernel"] + d["dim_image"] == d["dim_cohomology"]


def test_classification_labels():
    assert "normal" in conjecture_check(ctx_of("S 3", 3), 1).classification
    assert "abelian" in conjecture_check(ctx_of("A 4", 2), 1).classification
    report = conjecture_check(ctx_of("S 4", 2), 3)
    assert report.classification == ["other"]
    assert [d["dim_stable"] for d in report.degrees] == [1, 1, 2, 3]
    assert all(d["equal"] for d in report.degrees)


def test_merged_representatives_agree():
    ctx = ctx_of("D 12", 3)
    assert any(e.merged for e in ctx.y)
    assert all(merged_reps_consistent(ctx, n) for n in range(3))


def test_restriction_identity_and_unit():
    b = ctx_of("S 3", 3)
    c = sub_context(b, b.G.whole())
    assert fusion_included(c, b)
    one = BlockCohClass(b, unit_class(b.P, b.coh_field))
    assert classes_equal(block_restriction(one, c).cls, one.cls)
    for n in range(4):
        for z in stable_basis(b, n):
            assert classes_equal(block_restriction(z, c).cls, z.cls)


def test_restriction_to_normalizer_lands_in_stable_classes():
    b = ctx_of("S 4", 3)
    c = correspondent_context(b)
    for n in range(5):
        for z in stable_basis(b, n):
            r = block_restriction(z, c)
            assert stable_elements(c, n).contains(r.cls.coords)


def test_block_cohomology_class_must_be_stable():
    ctx = ctx_of("A 4", 2)
    unstable = [z for z in basis_classes(ctx.P, 1, ctx.coh_field)]
    with pytest.raises(ValueError):
        BlockCohClass(ctx, unstable[0])


def test_sub_context_needs_defect_inside_p():
    G = make_group("S 4")
    b = block_context(G, 3, 1)
    with pytest.raises(PreconditionError):
        sub_context(b, G.generate([G.index("(1,2)"), G.index("(1,2,3)")]))


def test_transfer_scalar_and_zero_composite():
    b = ctx_of("S 4", 3)
    c = correspondent_context(b)
    assert b.scalar == 2
    for n in range(5):
        for z in stable_basis(b, n):
            back = block_transfer(block_restriction(z, c), b).cls
            assert classes_equal(back, z.cls.scale(2))
    G = make_group("S 4")
    b2 = block_context(G, 2, 0)
    c2 = sub_context(b2, G.generate([G.index("(1,2)"), G.index("(1,2,3)")]))
    one = BlockCohClass(c2, unit_class(c2.P, c2.coh_field))
    assert block_transfer(one, b2).cls.is_zero()


def test_block_transfer_requires_the_conjecture():
    b = ctx_of("S 3", 3)
    z = stable_basis(b, 3)[0]
    b._equal[3] = False
    with pytest.raises(PreconditionError):
        block_transfer(z, b)


def test_transfer_composite_on_degree_zero():
    b = ctx_of("S 4", 3)
    c = correspondent_context(b)
    one = unit_class(b.P, b.coh_field)
    assert int(sasaki_transfer(one, b).coords[0]) == 2
    assert int(sasaki_transfer(one, c).coords[0]) == 2
    composite = block_transfer(BlockCohClass(c, sasaki_transfer(one, c)), b).cls
    assert int(composite.coords[0]) == 4 % 3


def test_reciprocity_pairs():
    b = ctx_of("S 4", 3)
    c = correspondent_context(b)
    assert all(r["pass"] for r in verify_reciprocity(b, c, 4))
    s3 = ctx_of("S 3", 3)
    assert all(r["pass"] for r in verify_reciprocity(s3, sub_context(s3, s3.G.whole()), 3))


def test_transitivity_report_fields():
    G = make_group("S 4")
    b2 = block_context(G, 2, 0)
    c2 = sub_context(b2, G.generate([G.index("(1,2)"), G.index("(1,2,3)")]))
    rep = verify_transitivity(b2, c2, 3)
    assert rep["scalar"] == 3 and all(d["zero_composite"] for d in rep["degrees"])
    b3 = block_context(G, 3, 0)
    rep = verify_transitivity(b3, correspondent_context(b3), 4)
    for d in rep["degrees"]:
        assert d["scalar_identity"] and d["kernel_inclusion"] and d["restriction_is_inclusion"]
        assert d["split_dims_b"] and d["split_dims_c"]
        assert d["triangle"] in (True, False)


@pytest.mark.parametrize("spec", ["A 4", "S 4"])
def test_hh_square(spec):
    b = ctx_of(spec, 3)
    c = correspondent_context(b)
    assert all(r["pass"] for r in verify_hh_square(b, c, 2))


def test_hh_square_needs_equal_defect_groups():
    G = make_group("S 4")
    b2 = block_context(G, 2, 0)
    c2 = sub_context(b2, G.generate([G.index("(1,2)"), G.index("(1,2,3)")]))
    with pytest.raises(PreconditionError):
        verify_hh_square(b2, c2, 1)


def test_kernel_and_image_split_dimensions():
    ctx = ctx_of("A 4", 2)
    for n in range(3):
        d = len(basis_classes(ctx.P, n, ctx.coh_field))
        assert kernel_of_t(ctx, n).dim + image_of_t(ctx, n).dim == d
