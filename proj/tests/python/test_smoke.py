from fractions import Fraction

import pytest

import hcm


def test_free_lie_dims_match_oracle():
    for degrees in ([1, 1], [2, 2], [1, 1, 1], [2, 2, 2]):
        for k in range(1, 7):
            assert hcm.free_lie_dim(degrees, k) == hcm.free_lie_dim_oracle(degrees, k)
    assert [hcm.free_lie_dim([2, 2], k) for k in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    with pytest.raises(hcm.ValidationError):
        hcm.free_lie_dim_oracle([1, 2], 3)


def test_derivation_dims_match_schur_dims():
    assert hcm.omega_derivation_dim(1, 3, 3) == 0
    assert hcm.omega_derivation_dim(2, 3, 3) == 4
    assert hcm.omega_derivation_dim(1, 3, 4) == 1
    for d in (3, 4):
        for g in (1, 2):
            for k in (3, 4, 5):
                assert hcm.omega_derivation_dim(g, d, k) == hcm.schur_dim(k, d, 2 * g)


def test_lie_character():
    assert hcm.lie_character(3) == {(1, 1, 1): 2, (2, 1): 0, (3,): -1}


def test_invariants():
    assert [hcm.tensor_invariants(g, 3, 4) for g in (1, 2, 3)] == [2, 3, 3]
    assert [hcm.matchings_count(k) for k in (0, 2, 4, 6)] == [1, 1, 3, 15]
    assert hcm.gram_rank(4, 2, 3) == hcm.tensor_invariants(2, 3, 4)
    dims = hcm.invariant_ce(3, 2, 4)
    assert dims["homology_dims"] == [1, 0, 0, 0, 0]
    with pytest.raises(hcm.UnstableRangeError):
        hcm.invariant_ce(3, 1, 5)


def test_characteristic_classes():
    assert hcm.newton_class(2) == "c1^2 - 2*c2"
    assert hcm.bernoulli(1) == Fraction(1, 6)
    assert hcm.ltilde_lambda(2) == Fraction(-1, 720)
    assert hcm.ltilde_coeffs(2, 3) == {(2,): Fraction(-1, 90), (1, 1): Fraction(1, 18)}
    relation = hcm.kappa_borel_relation(1, 3)
    assert relation["single_part_nonzero"] is True
    assert sum(1 for _, k in hcm.kappa_generators(3, 2) if k == 2) == 2
    with pytest.raises(ValueError):
        hcm.kappa_borel_relation(1, 4)


def test_run_matches_cli_tables():
    table = hcm.run("dims", {"d": 3, "g": 2, "maxlen": 4})
    assert table["rows"][0] == {"g": 2, "k": 3, "degree": 2, "dim": 4, "schur_dim": 4, "agree": "true"}
    assert table["metadata"]["window"].startswith("word length 3..4")
    assert hcm.stability_bound(3) == 10
    with pytest.raises(ValueError):
        hcm.run("dims", {"d": 2})
