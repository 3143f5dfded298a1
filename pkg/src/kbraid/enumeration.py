"""Exhaustive search for k-biquandles on a small carrier, up to isomorphism.

Images are assigned to sorted-tuple representatives only, so equivariance
holds by construction. Each assignment ``r -> y`` also fixes the image of the
representative of y (``B(y) = r``), which enforces ``B^2 = id`` during the
search. Complete assignments are then filtered by the tetrahedron and far
commutativity checks and reduced to canonical forms.
"""
from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .biquandle import (
    FiniteKBiquandle,
    Involution,
    all_tuples,
    canonical_images,
    check_axioms,
    encode_tuple,
    first_failing_axiom,
    flat_derived,
    flat_tables,
    involution_kbiquandle,
    involutions,
    multiplicity_vector,
    sorted_reps,
)

DEFAULT_BUDGET = 10**8
FILTER_ORDER = ("tetrahedron", "far_commutativity")
TAG_ORDER = ("trivial", "componentwise-involution", "conditional-involution", "flat-derived", "other")


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class Classification:
    tag: str
    families: list[str]
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"tag": self.tag, "families": self.families, "params": self.params}


@dataclass
class EnumerationResult:
    m: int
    k: int
    nontrivial_only: bool
    entries: list[FiniteKBiquandle]
    tags: list[Classification]
    stats: dict

    def __len__(self):
        return len(self.entries)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "nontrivial_only": self.nontrivial_only,
            "count": len(self.entries),
            "entries": [
                {**B.to_json(), "classification": c.to_dict()} for B, c in zip(self.entries, self.tags)
            ],
            "stats": self.stats,
        }


def _compatible(r, y) -> bool:
    return all(y[i] == y[i + 1] for i in range(len(r) - 1) if r[i] == r[i + 1])


class _Search:
    def __init__(self, m: int, k: int, budget: int):
        self.m, self.k, self.budget = m, k, budget
        self.reps = sorted_reps(m, k)
        self.targets = [tuple(int(v) for v in y) for y in all_tuples(m, k)]
        # per dense code: (representative, stable sorting order)
        self.lookup = []
        for x in self.targets:
            order = sorted(range(k), key=lambda i: x[i])
            self.lookup.append((tuple(x[i] for i in order), order))
        self.visited = 0
        self.candidates = 0
        self.failures: Counter = Counter()
        self.found: set[tuple[int, ...]] = set()

    def choices(self, r, assign):
        """Consistent images y of representative r, paired with the forced image of y's representative."""
        for y in self.targets:
            if not _compatible(r, y):
                continue
            s, order = self.lookup[encode_tuple(y, self.m)]
            t = tuple(r[order[p]] for p in range(self.k))   # required B(s)
            if s == r:
                if t == y:
                    yield y, None, None
            elif s not in assign and _compatible(s, t):
                yield y, s, t

    def build(self, assign) -> FiniteKBiquandle:
        images = np.empty(len(self.targets), dtype=np.int64)
        for code, (r, order) in enumerate(self.lookup):
            y = assign[r]
            out = [0] * self.k
            for p, src in enumerate(order):
                out[src] = y[p]
            images[code] = encode_tuple(out, self.m)
        return FiniteKBiquandle.from_images(self.k, self.m, images)

    def run(self, assign, start: int = 0):
        self.visited += 1
        if self.visited > self.budget:
            raise BudgetExceeded(f"more than {self.budget} partial assignments")
        while start < len(self.reps) and self.reps[start] in assign:
            start += 1
        if start == len(self.reps):
            self.leaf(assign)
            return
        r = self.reps[start]
        for y, s, t in self.choices(r, assign):
            assign[r] = y
            if s is not None:
                assign[s] = t
            self.run(assign, start + 1)
            del assign[r]
            if s is not None:
                del assign[s]

    def leaf(self, assign):
        self.candidates += 1
        B = self.build(assign)
        bad = first_failing_axiom(B, FILTER_ORDER)
        if bad is not None:
            self.failures[bad] += 1
            return
        self.found.add(canonical_images(B))


def _subtree(args):
    m, k, budget, first_choice = args
    search = _Search(m, k, budget)
    r = search.reps[0]
    y, s, t = first_choice
    assign = {r: y}
    if s is not None:
        assign[s] = t
    search.visited += 1
    search.run(assign, 1)
    return search.found, search.visited, search.candidates, search.failures


def enumerate_kbiquandles(
    m: int,
    k: int,
    nontrivial_only: bool = False,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
    classify_entries: bool = True,
) -> EnumerationResult:
    """All k-biquandles on ``{0, ..., m-1}`` up to isomorphism.

    Entries are canonical forms sorted by their dense tables; the result does
    not depend on ``jobs``.
    """
    if m < 1 or k < 1:
        raise ValueError(f"need m >= 1 and k >= 1, got m={m}, k={k}")
    root = _Search(m, k, budget)
    first = list(root.choices(root.reps[0], {}))
    tasks = [(m, k, budget, c) for c in first]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_subtree, tasks))
    else:
        parts = [_subtree(t) for t in tasks]
    found: set = set()
    visited, candidates, failures = 1, 0, Counter()
    for f, v, c, fail in parts:
        found |= f
        visited += v
        candidates += c
        failures += fail
    if visited > budget:
        raise BudgetExceeded(f"more than {budget} partial assignments")
    entries = [FiniteKBiquandle.from_images(k, m, imgs) for imgs in sorted(found)]
    total = len(entries)
    if nontrivial_only:
        entries = [B for B in entries if not B.is_identity()]
    for B in entries:
        report = check_axioms(B)
        assert report.ok, report.first_failure()
    tags = [classify(B) if classify_entries else Classification("unclassified", []) for B in entries]
    stats = {
        "partial_assignments": visited,
        "candidates": candidates,
        "axiom_failures": {name: failures.get(name, 0) for name in FILTER_ORDER},
        "classes_total": total,
    }
    return EnumerationResult(m, k, nontrivial_only, entries, tags, stats)


# ---------------------------------------------------------------------------
# classification

def match_conditional(B: FiniteKBiquandle, tau: Involution):
    """The set mu with ``B == B_{tau, mu}``, or None if no such mu exists."""
    fire, keep = set(), set()
    for x in all_tuples(B.m, B.k):
        x = tuple(int(v) for v in x)
        y = B.apply(x)
        mv = multiplicity_vector(tau, x)
        if sum(mv) == 0:
            if y != x:
                return None
            continue
        if y == tuple(tau(v) for v in x):
            fire.add(mv)
        elif y == x:
            keep.add(mv)
        else:
            return None
    if fire & keep:
        return None
    return sorted(fire)


def classify(B: FiniteKBiquandle, flat_limit: int = 3) -> Classification:
    """Match B against the trivial, involution, conditional involution and flat-derived families.

    Every family is closed under relabeling the carrier and all involutions
    are searched, so matching is up to isomorphism. ``families`` lists every
    match; ``tag`` is the most specific one.
    """
    if B.is_identity():
        return Classification("trivial", ["trivial"])
    families, params = [], {}
    for tau in involutions(B.m):
        if not tau.transpositions:
            continue
        if "componentwise-involution" not in families and B == involution_kbiquandle(tau, B.k):
            families.append("componentwise-involution")
            params["tau"] = str(tau)
        if "conditional-involution" not in families:
            mu = match_conditional(B, tau)
            if mu is not None:
                families.append("conditional-involution")
                params["conditional_tau"] = str(tau)
                params["mu"] = [list(v) for v in mu]
    if B.k >= 2 and B.m <= flat_limit:
        for F in flat_tables(B.m, B.k):
            if flat_derived(F, B.k) == B:
                families.append("flat-derived")
                params["flat_table"] = [list(row) for row in F.star]
                break
    if not families:
        families = ["other"]
    families.sort(key=TAG_ORDER.index)
    return Classification(families[0], families, params)


def conditional_classes(m: int, k: int) -> list[tuple[int, ...]]:
    """Canonical forms of all nontrivial conditional involutions on 0..m-1.

    Built constructively (single transposition tau is enough up to isomorphism
    when m <= 3; all tau are used here), independent of the search above.
    """
    from .biquandle import conditional_involution, multiplicity_space

    found = set()
    for tau in involutions(m):
        if not tau.transpositions:
            continue
        space = multiplicity_space(tau, k)
        for r in range(1, len(space) + 1):
            for mu in itertools.combinations(space, r):
                B = conditional_involution(tau, mu, k)
                if not B.is_identity():
                    found.add(canonical_images(B))
    return sorted(found)
