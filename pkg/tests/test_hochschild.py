import numpy as np
import pytest

from blockcoh import budget
from blockcoh.budget import Budget, BudgetExceeded
from blockcoh.field import GF
from blockcoh.groups import make_group, subgroups_up_to_conjugacy
from blockcoh.hochschild import (delta_kernel_dim, hh_basis, hh_classes_equal, hh_coboundary_values, hh_dim,
                                 hh_dim_oracle, hh_space, hh_transfer, hh_transfer_values, verify_delta_conj_square,
                                 verify_delta_restriction, verify_delta_transfer, verify_mackey_axioms)


@pytest.mark.parametrize("spec", ["C 2", "C 3", "S 3", "prod(C 2,C 2)", "C 4", "D 8", "A 4"])
@pytest.mark.parametrize("p", [2, 3])
def test_dims_match_centralizer_oracle(spec, p):
    G = make_group(spec)
    for n in range(3 if G.order <= 8 else 2):
        assert hh_dim(G, GF(p), n) == hh_dim_oracle(G, GF(p), n)


@pytest.mark.parametrize("spec", ["S 3", "D 8", "Q8", "A 4", "S 4"])
def test_degree_zero_is_the_center(spec):
    G = make_group(spec)
    assert hh_dim(G, GF(2), 0) == len(G.conjugacy_classes)


@pytest.mark.parametrize("spec", ["S 3", "C 4"])
def test_differential_squares_to_zero(spec):
    G = make_group(spec)
    F = GF(3)
    rng = np.random.default_rng(0)
    for n in range(3):
        f = rng.integers(0, 3, (G.order ** n, G.order))
        assert not hh_coboundary_values(G, hh_coboundary_values(G, f, n, F), n + 1, F).any()


def _proper_pairs():
    S3, A4 = make_group("S 3"), make_group("A 4")
    out = []
    for G in (S3, A4):
        for H in subgroups_up_to_conjugacy(G, G.whole()):
            if 1 < H.order < G.order:
                out.append((G, H))
    return out


@pytest.mark.parametrize("G,H", _proper_pairs(), ids=lambda x: f"order{x.order}")
def test_transfer_is_a_cochain_map(G, H):
    W = G.whole()
    HG = H.local_group
    rng = np.random.default_rng(H.order)
    for F in (GF(2), GF(3)):
        for n in range(3):
            f = rng.integers(0, F.q, (H.order ** n, H.order))
            df = hh_coboundary_values(HG, f, n, F)
            lhs = hh_transfer_values(df, H, W, n + 1, F)
            rhs = hh_coboundary_values(G, hh_transfer_values(f, H, W, n, F), n, F)
            assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("G,H", _proper_pairs(), ids=lambda x: f"order{x.order}")
def test_literal_and_chained_transfer_agree_in_low_degree(G, H):
    F = GF(3)
    rng = np.random.default_rng(1)
    for n in range(2):
        f = rng.integers(0, 3, (H.order ** n, H.order))
        assert np.array_equal(hh_transfer_values(f, H, G.whole(), n, F, mode="literal"),
                              hh_transfer_values(f, H, G.whole(), n, F, mode="chained"))


def test_literal_transfer_is_not_a_cochain_map_in_degree_two():
    G = make_group("S 3")
    H = G.generate([G.index("(1,2)")])
    F = GF(3)
    HG = H.local_group
    rng = np.random.default_rng(2)
    broken = False
    for _ in range(5):
        f = rng.integers(0, 3, (H.order ** 2, H.order))
        lhs = hh_transfer_values(hh_coboundary_values(HG, f, 2, F), H, G.whole(), 3, F, mode="literal")
        rhs = hh_coboundary_values(G, hh_transfer_values(f, H, G.whole(), 2, F, mode="literal"), 2, F)
        broken |= not np.array_equal(lhs, rhs)
    assert broken


def test_transfer_along_whole_group_is_identity():
    G = make_group("A 4")
    W = G.whole()
    for f in hh_basis(W, 1, GF(2)):
        assert hh_classes_equal(hh_transfer(f, W), f)


@pytest.mark.parametrize("spec,K,H", [("S 3", "(1,2)", "(1,2,3)"), ("S 3", "(1,2)", "(1,2)")])
@pytest.mark.parametrize("p", [2, 3])
def test_mackey_axioms(spec, K, H, p):
    G = make_group(spec)
    Ks, Hs = G.generate([G.index(K)]), G.generate([G.index(H)])
    for n in range(3):
        for g in range(G.order):
            rows = verify_mackey_axioms(G.whole(), Ks, Hs, g, n, GF(p))
            assert {r["item"] for r in rows} == {"i", "ii", "iii", "iv", "v", "vi"}
            assert all(r["pass"] for r in rows), [r for r in rows if not r["pass"]]


@pytest.mark.parametrize("spec", ["S 3", "A 4", "D 8"])
def test_delta_compatibility(spec):
    G = make_group(spec)
    W = G.whole()
    for p in (2, 3):
        F = GF(p)
        for H in subgroups_up_to_conjugacy(G, W):
            for n in range(3):
                assert verify_delta_transfer(H, W, n, F)
                assert verify_delta_restriction(H, W, n, F)
                for g in W.generators:
                    assert verify_delta_conj_square(H, g, n, F)


@pytest.mark.parametrize("spec,p", [("S 3", 3), ("D 8", 2), ("A 4", 2)])
def test_delta_is_injective(spec, p):
    G = make_group(spec)
    for n in range(3):
        assert delta_kernel_dim(G.whole(), n, GF(p)) == 0


def test_hh_budget_cap():
    G = make_group("S 4")
    try:
        budget.set_budget(Budget(hh_n2=12))
        with pytest.raises(BudgetExceeded, match="order 24"):
            hh_space(G, 2, GF(7))
    finally:
        budget.set_budget(None)


def test_extension_field_space_matches_prime_field_dims():
    G = make_group("S 3")
    for n in range(3):
        assert hh_dim(G, GF(3, 2), n) == hh_dim(G, GF(3), n)
