import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kbraid.biquandle import gaussian
from kbraid.perm import Permutation
from kbraid.vssb import (
    ActionState,
    VSSBGen,
    VSSBSyntaxError,
    VSSBWord,
    act,
    act_word,
    check_phi_well_defined,
    check_pure_multiplicative,
    check_rho_respects,
    compare_on_state,
    is_pure,
    parse_vssb,
    phi,
    pure_closure,
    random_g,
    random_permutation,
    random_vssb,
    relations,
    rho,
    vssb_invariant,
    vword,
)
from kbraid.words import FreeKBraidWord, equal_bounded, format_word, free_reduce, word

BETA = "c1 a2 v3 C2 b1 C2"


def perm(n, *cycles):
    return Permutation.from_cycles(n, cycles)


@st.composite
def vssb_words(draw, n=4, max_length=7):
    gens = st.builds(VSSBGen, st.sampled_from("abcCv"), st.integers(1, n - 1))
    return VSSBWord(n, tuple(draw(st.lists(gens, max_size=max_length))))


@st.composite
def states(draw, n=4):
    rng = random.Random(draw(st.integers(0, 10**6)))
    return ActionState(random_g(n, rng.randrange(4), rng), random_permutation(n, rng))


def test_permutation_basics():
    p = perm(4, (1, 2))
    q = perm(4, (2, 3))
    assert (p * q)(2) == p(q(2)) == 3
    assert str(perm(4, (1, 2), (3, 4))) == "(1 2)(3 4)"
    assert str(Permutation.identity(3)) == "()"
    assert (p * p).is_identity()
    with pytest.raises(ValueError):
        Permutation((1, 1, 2))


def test_parse_vssb():
    w = parse_vssb(BETA, 4)
    assert w == vword(4, ("c", 1), ("a", 2), ("v", 3), ("C", 2), ("b", 1), ("C", 2))
    assert str(w) == BETA
    assert parse_vssb(str(w), 4) == w
    assert parse_vssb("", 4).letters == ()
    with pytest.raises(VSSBSyntaxError) as info:
        parse_vssb("c1 v9", 4)
    assert info.value.position == 3
    with pytest.raises(VSSBSyntaxError):
        parse_vssb("c1 x2", 4)


def test_rho_examples():
    assert rho(vword(4, ("c", 2))) == perm(4, (2, 3))
    assert rho(vword(4, ("v", 2), ("v", 2))).is_identity()
    # oracle: compose (12)(34)(23)(23) by hand
    assert rho(parse_vssb(BETA, 4)) == perm(4, (1, 2), (3, 4))


def test_act_examples():
    unit = ActionState.unit(4)
    s = act(VSSBGen("c", 1), unit)
    assert s.g.letters == ((1, 2),) and s.sigma == perm(4, (1, 2))
    g = word(4, 2, (1, 3))
    s0 = ActionState(g, perm(4, (2, 4)))
    assert act(VSSBGen("a", 2), s0) == s0 and act(VSSBGen("b", 3), s0) == s0
    s = act(VSSBGen("v", 3), ActionState(word(4, 2, (1, 2)), Permutation.identity(4)))
    assert s.g.letters == ((1, 2),) and s.sigma == perm(4, (3, 4))


def test_act_uses_sigma_images():
    s = ActionState(FreeKBraidWord(4, 2), perm(4, (1, 3)))
    t = act(VSSBGen("C", 1), s)
    assert t.g.letters == ((2, 3),)           # a_{sigma(1), sigma(2)} = a_{3,2}
    assert t.sigma == perm(4, (1, 3)) * perm(4, (1, 2))


def test_phi_of_mixed_word():
    b = parse_vssb(BETA, 4)
    assert format_word(phi(b)) == "a{1,2} a{2,3} a{2,3}"
    assert format_word(phi(b, reduce=True)) == "a{1,2}"


@given(vssb_words())
def test_phi_trivial_without_crossings(w):
    w = VSSBWord(w.n, tuple(g for g in w.letters if g.kind in "abv"))
    assert phi(w).letters == ()


def test_phi_c_then_c_inverse_cancels():
    for n in (2, 4):
        for i in range(1, n):
            g = phi(vword(n, ("c", i), ("C", i)))
            assert len(g) == 2 and free_reduce(g).letters == ()


@settings(max_examples=60, deadline=None)
@given(vssb_words(), vssb_words(), states())
def test_action_respects_concatenation(u, w, s):
    assert act_word(u + w, s) == act_word(u, act_word(w, s))


@given(vssb_words())
def test_unit_state_orbit_is_phi_and_rho(w):
    s = act_word(w, ActionState.unit(w.n))
    assert s.g == phi(w) and s.sigma == rho(w)


@given(vssb_words(), vssb_words())
def test_rho_multiplicative(u, w):
    # letters act left to right on strands: rho(u w) = rho(w) o rho(u)
    assert rho(u + w) == rho(w) * rho(u)


def test_is_pure():
    assert is_pure(vword(3, ("v", 1), ("v", 1)))
    assert not is_pure(vword(3, ("c", 1)))
    assert not is_pure(parse_vssb(BETA, 4))


def test_pure_closure():
    rng = random.Random(3)
    for _ in range(50):
        w = random_vssb(5, 6, rng)
        p = pure_closure(w)
        assert is_pure(p) and p.letters[:len(w)] == w.letters


def test_relations_examples():
    A2 = relations(2, "A")
    pairs = {(r.label, str(r.left), str(r.right)) for r in A2}
    assert ("A8", "a1 a1", "a1") in pairs and ("A1", "c1 C1", "") in pairs
    assert not any(r.label == "A2" for r in A2)
    V4 = relations(4, "V")
    v3 = [r for r in V4 if r.label == "V3"]
    # (i, i+-1) pairs: (1,2), (2,1), (2,3), (3,2); five x-kinds each
    assert len(v3) == 4 * 5
    assert ("V2", "v1 v1", "") in {(r.label, str(r.left), str(r.right)) for r in V4}
    A3 = [r for r in relations(3, "A") if r.label == "A3"]
    assert len(A3) == 8
    assert {(r.left.letters[1].i, r.left.letters[0].i) for r in A3} == {(2, 1), (1, 2)}


def test_v4_excludes_crossings():
    for r in relations(5, "V"):
        if r.label == "V4":
            assert r.left.letters[0].kind in ("a", "b")


def test_relation_labels_complete():
    assert {r.label for r in relations(5, "A")} == {f"A{i}" for i in range(1, 12)}
    assert {r.label for r in relations(5, "R")} == {f"R{i}" for i in range(1, 17)}
    assert {r.label for r in relations(4, "V")} == {"V1", "V2", "V3", "V4"}
    with pytest.raises(ValueError):
        relations(4, "Q")


@pytest.mark.parametrize("family", ["A", "R", "V"])
@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_rho_respects(family, n):
    assert check_rho_respects(n, family)["failures"] == []


def test_compare_on_state_examples():
    unit = ActionState.unit(4)
    a1 = [r for r in relations(4, "A") if r.label == "A1"][0]
    assert compare_on_state(a1, unit, 8, 1000)["verdict"] == "equal"
    rng = random.Random(5)
    for r in relations(4, "V"):
        if r.label == "V4":
            s = ActionState(random_g(4, 3, rng), random_permutation(4, rng))
            assert act_word(r.left, s) == act_word(r.right, s)
    a6 = [r for r in relations(5, "A") if r.label == "A6"]
    assert [r.left.letters[0].i for r in a6] == [3, 4]
    row = compare_on_state(a6[0], ActionState.unit(5), 8, 200_000)
    assert row["verdict"] == "equal"


@pytest.mark.parametrize("family", ["A", "V", "R"])
def test_phi_well_defined_n4(family):
    rep = check_phi_well_defined(4, family)
    assert rep["failures"] == [] and rep["counts"]["fail"] == 0
    assert rep["multiplicative"]["failures"] == []


def test_phi_not_multiplicative_off_pure():
    # phi(u w) = phi_{rho(w)}(u) phi(w): with u = c1 and w = v2 the letters differ from phi(u) phi(w)
    u, w = vword(3, ("c", 1)), vword(3, ("v", 1))
    assert phi(u + w).letters == ((1, 2),)
    u, w = vword(3, ("c", 2)), vword(3, ("v", 1))
    assert phi(u + w) != phi(u) + phi(w)


def test_pure_multiplicative():
    assert check_pure_multiplicative(5, samples=100, seed=7)["failures"] == []


def test_crossing_maps_to_nontrivial_letter():
    # c_i goes to a single letter, which the Gaussian coloring detects
    for i in (1, 2, 3):
        v = equal_bounded(phi(vword(4, ("c", i))), FreeKBraidWord(4, 2))
        assert v.kind == "distinct"


def test_vssb_invariant_examples():
    G = gaussian(2)
    assert vssb_invariant(VSSBWord(4), G, (0, 1, 0, 1), (0, 1, 0, 1)) == 1
    b = parse_vssb(BETA, 4)
    # oracle: phi = a{1,2} a{2,3} a{2,3}; shifting strands 1,2 once and 2,3 twice gives (1,0,0,1)
    assert vssb_invariant(b, G, (0, 1, 0, 1), (1, 0, 0, 1)) == 1
    assert vssb_invariant(b, G, (0, 1, 0, 1), (0, 0, 1, 1)) == 0
    rng = random.Random(2)
    for _ in range(10):
        w = random_vssb(4, 5, rng, kinds="abv")
        chi = tuple(rng.randrange(2) for _ in range(4))
        assert vssb_invariant(w, G, chi, chi) == 1


def test_vssb_invariant_rejects_arity():
    with pytest.raises(ValueError):
        vssb_invariant(VSSBWord(4), gaussian(3), (0,) * 4, (0,) * 4)
