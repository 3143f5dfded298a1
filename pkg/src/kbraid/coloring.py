"""Good colorings of free k-braid diagrams by a finite k-biquandle."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .biquandle import FiniteKBiquandle, gaussian
from .words import BraidGraph, FreeKBraidWord, realize


@dataclass(frozen=True)
class Coloring:
    word: FreeKBraidWord
    graph: BraidGraph
    colors: tuple[int, ...]     # indexed by edge id

    def is_good(self, B: FiniteKBiquandle) -> bool:
        return all(
            B.apply([self.colors[e] for e in v.incoming]) == tuple(self.colors[e] for e in v.outgoing)
            for v in self.graph.vertices
        )

    def sources(self) -> tuple[int, ...]:
        return tuple(self.colors[e] for e in self.graph.sources())

    def sinks(self) -> tuple[int, ...]:
        return tuple(self.colors[e] for e in self.graph.sinks())


def _check(w: FreeKBraidWord, B: FiniteKBiquandle, chi: Sequence[int], name: str = "chi"):
    if B.k != w.k:
        raise ValueError(f"biquandle arity {B.k} does not match word arity {w.k}")
    if len(chi) != w.n:
        raise ValueError(f"{name} has length {len(chi)}, expected {w.n}")
    if any(not 0 <= c < B.m for c in chi):
        raise ValueError(f"{name} has a color outside 0..{B.m - 1}")


def sink_colors(w: FreeKBraidWord, B: FiniteKBiquandle, chi_in: Sequence[int]) -> tuple[int, ...]:
    """Output colors only; letters act in word order on the selected strands."""
    state = list(chi_in)
    for m in w.letters:
        for i, c in zip(m, B.apply([state[i - 1] for i in m])):
            state[i - 1] = c
    return tuple(state)


def propagate(w: FreeKBraidWord, B: FiniteKBiquandle, chi_in: Sequence[int]) -> tuple[Coloring, tuple[int, ...]]:
    """The unique good coloring with source colors ``chi_in``, and its sink colors."""
    _check(w, B, chi_in, "chi_in")
    g = realize(w)
    colors = [None] * g.num_edges
    for e, c in zip(g.sources(), chi_in):
        colors[e] = c
    for v in g.vertices:
        for e, c in zip(v.outgoing, B.apply([colors[e] for e in v.incoming])):
            colors[e] = c
    col = Coloring(w, g, tuple(colors))
    return col, col.sinks()


def binding_number(w: FreeKBraidWord, B: FiniteKBiquandle, chi1: Sequence[int], chi2: Sequence[int]) -> int:
    _check(w, B, chi1, "chi1")
    _check(w, B, chi2, "chi2")
    return int(propagate(w, B, chi1)[1] == tuple(chi2))


def count_colorings(w: FreeKBraidWord, B: FiniteKBiquandle) -> int:
    """Number of good colorings, by extending every source assignment."""
    total = 0
    for chi in itertools.product(range(B.m), repeat=w.n):
        col, _ = propagate(w, B, chi)
        assert col.is_good(B)
        total += 1
    assert total == B.m**w.n
    return total


def brute_force_colorings(w: FreeKBraidWord, B: FiniteKBiquandle) -> list[Coloring]:
    """All good colorings by trying every edge coloring. Tiny inputs only."""
    g = realize(w)
    out = []
    for colors in itertools.product(range(B.m), repeat=g.num_edges):
        col = Coloring(w, g, colors)
        if col.is_good(B):
            out.append(col)
    return out


# ---------------------------------------------------------------------------
# fundamental k-biquandle, as a presentation

@dataclass(frozen=True)
class Relation:
    vertex: int
    component: int            # j in y_j = b_j(x_1, ..., x_k), 1-based
    output: int               # generator id
    inputs: tuple[int, ...]   # generator ids

    def __str__(self):
        return f"e{self.output} = b{self.component}(" + ", ".join(f"e{g}" for g in self.inputs) + ")"


@dataclass(frozen=True)
class FundamentalPresentation:
    n: int
    k: int
    generators: tuple[int, ...]
    relations: tuple[Relation, ...]

    def to_dict(self) -> dict:
        return {
            "generators": [f"e{g}" for g in self.generators],
            "relations": [str(r) for r in self.relations],
        }


def fundamental_presentation(w: FreeKBraidWord) -> FundamentalPresentation:
    g = realize(w)
    rels = []
    for vi, v in enumerate(g.vertices):
        for j, out in enumerate(v.outgoing):
            rels.append(Relation(vi, j + 1, out, v.incoming))
    return FundamentalPresentation(w.n, w.k, tuple(range(g.num_edges)), tuple(rels))


def hom_count(P: FundamentalPresentation, B: FiniteKBiquandle) -> int:
    """Count assignments of carrier elements to generators satisfying every relation.

    Plain backtracking; each relation is tested as soon as its generators are
    all assigned.
    """
    if B.k != P.k:
        raise ValueError(f"biquandle arity {B.k} does not match presentation arity {P.k}")
    # order generators so relations close early: those never produced first
    produced = {r.output for r in P.relations}
    order = [gen for gen in P.generators if gen not in produced]
    for r in P.relations:
        for gen in r.inputs + (r.output,):
            if gen not in order:
                order.append(gen)
    pos = {gen: i for i, gen in enumerate(order)}
    ready: list[list[Relation]] = [[] for _ in order]
    for r in P.relations:
        ready[max(pos[gen] for gen in r.inputs + (r.output,))].append(r)
    value: dict[int, int] = {}

    def rec(i: int) -> int:
        if i == len(order):
            return 1
        total = 0
        for x in range(B.m):
            value[order[i]] = x
            if all(B.apply([value[gen] for gen in r.inputs])[r.component - 1] == value[r.output] for r in ready[i]):
                total += rec(i + 1)
        del value[order[i]]
        return total

    return rec(0)


# ---------------------------------------------------------------------------
# separating free k-braids by colorings

@lru_cache(maxsize=None)
def separator_library(k: int) -> tuple[FiniteKBiquandle, ...]:
    """Small nontrivial k-biquandles used as distinctness witnesses."""
    from .enumeration import enumerate_kbiquandles

    sizes = (2, 3) if k <= 3 else (2,)
    out = [gaussian(k)]
    for m in sizes:
        for B in enumerate_kbiquandles(m, k, nontrivial_only=True, classify_entries=False).entries:
            if B not in out:
                out.append(B)
    return tuple(out)


def separating_coloring(w1: FreeKBraidWord, w2: FreeKBraidWord, max_inputs: int = 4096, seed: int = 0):
    """A biquandle and input colors on which w1 and w2 have different sink colors, or None."""
    for idx, B in enumerate(separator_library(w1.k)):
        if B.m**w1.n <= max_inputs:
            inputs = itertools.product(range(B.m), repeat=w1.n)
        else:
            rng = random.Random(seed)
            inputs = (tuple(rng.randrange(B.m) for _ in range(w1.n)) for _ in range(max_inputs))
        for chi in inputs:
            o1, o2 = sink_colors(w1, B, chi), sink_colors(w2, B, chi)
            if o1 != o2:
                return {
                    "invariant": "coloring",
                    "biquandle": B.to_json(),
                    "chi_in": list(chi),
                    "chi_out_1": list(o1),
                    "chi_out_2": list(o2),
                }
    return None
