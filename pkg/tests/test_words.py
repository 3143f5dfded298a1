from collections import Counter

import pytest
from hypothesis import given, settings

from conftest import kbraid_words
from kbraid.words import (
    FreeKBraidWord,
    WordSyntaxError,
    check_path,
    equal_bounded,
    format_word,
    free_reduce,
    is_tetrahedron_block,
    neighbors,
    parity_vector,
    parse_word,
    parse_word_file,
    realize,
    tetrahedron_sides,
    word,
)

A12, A13, A23, A34 = (1, 2), (1, 3), (2, 3), (3, 4)


def test_parse_and_format_round_trip():
    w = parse_word("a{1,2}  a{2,3}", 3, 2)
    assert w.letters == (A12, A23)
    assert format_word(w) == "a{1,2} a{2,3}"
    assert parse_word(format_word(w), 3, 2) == w
    assert parse_word("e", 3, 2).letters == ()
    assert format_word(FreeKBraidWord(3, 2)) == "e"


@pytest.mark.parametrize("text, pos", [
    ("a{1,2} a{2,1}", 7),        # unsorted is rejected, not sorted
    ("a{1,2} b{2,3}", 7),
    ("a{1,4}", 0),
    ("a{1,2,3}", 0),
    ("a{1,x}", 0),
])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(WordSyntaxError) as info:
        parse_word(text, 3, 2)
    assert info.value.position == pos


def test_word_file_header():
    w = parse_word_file("n=4 k=3\na{1,2,3} a{2,3,4}\n")
    assert (w.n, w.k, len(w)) == (4, 3, 2)
    with pytest.raises(WordSyntaxError):
        parse_word_file("a{1,2}")


def test_free_reduce_examples():
    assert free_reduce(word(2, 2, A12, A12)).letters == ()
    assert free_reduce(word(3, 2, A12, A13, A13, A23)).letters == (A12, A23)
    assert free_reduce(FreeKBraidWord(3, 2)).letters == ()


@given(kbraid_words())
def test_free_reduce_idempotent_and_reduced(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert all(a != b for a, b in zip(r.letters, r.letters[1:]))
    assert parity_vector(r) == parity_vector(w)


def test_neighbors_examples():
    assert word(4, 2, A34, A12) in neighbors(word(4, 2, A12, A34))
    assert word(3, 2, A23, A13, A12) in neighbors(word(3, 2, A12, A13, A23))
    assert word(3, 2, A12, A12) in neighbors(FreeKBraidWord(3, 2))


def test_no_far_commutation_when_sharing_k_minus_1():
    assert word(3, 2, A13, A12) not in neighbors(word(3, 2, A12, A13))


def test_tetrahedron_orderings():
    left, right = tetrahedron_sides((1, 2, 3, 4))
    assert left == [(2, 3, 4), (1, 3, 4), (1, 2, 4), (1, 2, 3)]
    assert right == left[::-1]
    assert is_tetrahedron_block(left, 3, "ascending")
    other, _ = tetrahedron_sides((1, 2, 3, 4), labelling=(1, 3, 4, 2))
    assert is_tetrahedron_block(other, 3, "all")
    assert not is_tetrahedron_block(other, 3, "ascending")
    assert not is_tetrahedron_block([(1, 2, 3)] * 4, 3)


@settings(max_examples=150, deadline=None)
@given(kbraid_words(max_length=6))
def test_moves_preserve_parity_and_are_symmetric(w):
    p = parity_vector(w)
    for x in neighbors(w):
        assert parity_vector(x) == p
        assert w in neighbors(x)


def test_parity_vector_examples():
    assert parity_vector(word(3, 2, A12, A12)) == (0, 0, 0)
    # oracle: count letters mod 2 by hand-rolled Counter over the subsets in lex order
    w = word(3, 2, A12, A23, A23)
    counts = Counter(w.letters)
    assert parity_vector(w) == tuple(counts[m] % 2 for m in [A12, A13, A23])
    assert parity_vector(w) == (1, 0, 0)
    left, right = tetrahedron_sides((1, 2, 3))
    assert parity_vector(word(3, 2, *left)) == parity_vector(word(3, 2, *right))


def test_equal_bounded_examples():
    v = equal_bounded(word(3, 2, A12, A13, A23), word(3, 2, A23, A13, A12))
    assert v.kind == "equal" and check_path(v.path)
    v = equal_bounded(word(3, 2, A12), word(3, 2, A13))
    assert v.kind == "distinct" and v.witness["invariant"] == "parity"
    w = word(3, 2, A12, A23)
    v = equal_bounded(w, w)
    assert v.kind == "equal" and v.path == [w]


def test_equal_bounded_rejects_mixed_groups():
    with pytest.raises(ValueError):
        equal_bounded(FreeKBraidWord(3, 2), FreeKBraidWord(4, 2))


def test_equal_bounded_unknown_within_tiny_budget():
    a, b, c = A12, A13, A23
    v = equal_bounded(word(3, 2, a, b, c, a, b, c), FreeKBraidWord(3, 2), depth=1)
    assert v.kind == "unknown"


@settings(max_examples=40, deadline=None)
@given(kbraid_words(max_length=5))
def test_equal_and_distinct_never_both(w):
    # a word and a neighbor: an Equal verdict must come with a valid path, never a witness
    x = sorted(neighbors(w, max_length=len(w) + 2), key=lambda u: (len(u), u.letters))[0] if len(w) else w
    small = equal_bounded(w, x, depth=2, nodes=2000)
    big = equal_bounded(w, x, depth=6, nodes=20000)
    assert {small.kind, big.kind} <= {"equal", "unknown"}
    for v in (small, big):
        if v.kind == "equal":
            assert check_path(v.path) and v.path[0] == w and v.path[-1] == x


def test_equal_bounded_path_is_certificate():
    w1 = word(4, 2, A12, A34, A13)
    w2 = word(4, 2, A34, A12, A13)
    v = equal_bounded(w1, w2)
    assert v.kind == "equal"
    assert v.path[0] == w1 and v.path[-1] == w2 and check_path(v.path)


def test_realize_examples():
    g = realize(FreeKBraidWord(3, 2))
    assert g.strands == ((0,), (1,), (2,)) and g.vertices == ()
    g = realize(word(3, 3, (1, 2, 3)))
    assert g.num_edges == 6 and len(g.vertices) == 1
    assert all(len(s) == 2 for s in g.strands)
    g = realize(word(2, 2, A12, A12))
    assert [len(s) for s in g.strands] == [3, 3] and len(g.vertices) == 2


@given(kbraid_words())
def test_realize_structure(w):
    g = realize(w)
    # strand i carries one more edge than the number of letters containing i
    for i, s in enumerate(g.strands, 1):
        assert len(s) == 1 + sum(i in m for m in w.letters)
    for v in g.vertices:
        assert len(v.incoming) == len(v.outgoing) == w.k
        for e_in, e_out, i in zip(v.incoming, v.outgoing, v.letter):
            s = g.strands[i - 1]
            assert s.index(e_out) == s.index(e_in) + 1


def test_ascending_only_tetrahedron_cannot_prove_acdb_squared():
    letters = ["a{1,2,3}", "a{1,3,4}", "a{2,3,4}", "a{1,2,4}"]
    w = parse_word(" ".join(letters * 2), 4, 3)
    e = FreeKBraidWord(4, 3)
    assert equal_bounded(w, e, orderings="ascending").kind == "unknown"
    assert equal_bounded(w, e).kind == "equal"
