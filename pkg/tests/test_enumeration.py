import itertools

import pytest

from kbraid.biquandle import (
    FiniteKBiquandle,
    Involution,
    canonical_images,
    check_axioms,
    conditional_involution,
    gaussian,
    is_isomorphic,
)
from kbraid.enumeration import (
    BudgetExceeded,
    classify,
    conditional_classes,
    enumerate_kbiquandles,
    match_conditional,
)

T01 = Involution(3, ((0, 1),))


@pytest.fixture(scope="module")
def z3_k3():
    return enumerate_kbiquandles(3, 3, nontrivial_only=True)


def test_z2_k3_unique_gaussian():
    res = enumerate_kbiquandles(2, 3, nontrivial_only=True)
    assert len(res) == 1
    assert is_isomorphic(res.entries[0], gaussian(3))


def test_z3_k3_seven_conditional(z3_k3):
    assert len(z3_k3) == 7
    assert all("conditional-involution" in c.families for c in z3_k3.tags)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_singleton_carrier_has_only_identity(k):
    assert len(enumerate_kbiquandles(1, k, nontrivial_only=True)) == 0
    assert len(enumerate_kbiquandles(1, k)) == 1


def test_entries_pass_axioms_and_are_pairwise_non_isomorphic(z3_k3):
    for B in z3_k3.entries:
        assert check_axioms(B).ok
    for B1, B2 in itertools.combinations(z3_k3.entries, 2):
        assert not is_isomorphic(B1, B2)


def test_search_statistics(z3_k3):
    stats = z3_k3.stats
    assert stats["classes_total"] == 8      # the identity plus seven
    assert stats["candidates"] >= stats["classes_total"]
    assert set(stats["axiom_failures"]) == {"tetrahedron", "far_commutativity"}


def test_enumeration_independent_of_jobs(z3_k3):
    par = enumerate_kbiquandles(3, 3, nontrivial_only=True, jobs=2)
    assert [canonical_images(B) for B in par.entries] == [canonical_images(B) for B in z3_k3.entries]
    assert par.stats == z3_k3.stats


def test_brute_force_oracle_small():
    # every map X^k -> X^k for m=2, k=2 (4^4 maps), axioms checked directly
    found = set()
    for images in itertools.product(range(4), repeat=4):
        B = FiniteKBiquandle.from_images(2, 2, images)
        if check_axioms(B).ok:
            found.add(canonical_images(B))
    res = enumerate_kbiquandles(2, 2)
    assert {canonical_images(B) for B in res.entries} == found


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        enumerate_kbiquandles(3, 3, budget=10)


def test_conditional_cross_check(z3_k3):
    assert conditional_classes(3, 3) == sorted(canonical_images(B) for B in z3_k3.entries)


def test_single_transposition_gives_seven_distinct():
    classes = [canonical_images(conditional_involution(T01, mu, 3))
               for r in (1, 2, 3) for mu in itertools.combinations([(1,), (2,), (3,)], r)]
    assert len(classes) == len(set(classes)) == 7


def test_classify_examples():
    c = classify(gaussian(3))
    assert c.tag == "componentwise-involution"
    assert "conditional-involution" in c.families
    # on Z_2 every 3-tuple has multiplicity (3), so mu = {(3)} already reproduces the table
    assert c.params["mu"] == [[3]]
    assert classify(FiniteKBiquandle.identity(3, 3)).tag == "trivial"
    c = classify(conditional_involution(T01, [(1,), (3,)], 3))
    assert c.tag == "conditional-involution" and c.params["mu"] == [[1], [3]]


def test_classify_swap_is_flat_derived():
    # x o y = x * y = y resolves a double crossing into a plain swap
    swap = FiniteKBiquandle.from_function(2, 2, lambda x: (x[1], x[0]))
    c = classify(swap)
    assert c.families == ["flat-derived"]
    assert c.params["flat_table"] == [[0, 1], [0, 1]]


def test_match_conditional_rejects():
    swap = FiniteKBiquandle.from_function(2, 3, lambda x: (x[1], x[0]))
    assert match_conditional(swap, T01) is None


def test_result_json_shape(z3_k3):
    data = z3_k3.to_dict()
    assert data["count"] == 7
    assert all(e["classification"]["tag"] in ("conditional-involution", "componentwise-involution")
               for e in data["entries"])
    assert all(len(e["table"]) == 10 for e in data["entries"])
