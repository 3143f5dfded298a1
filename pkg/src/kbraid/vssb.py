"""The virtual surface singular braid monoid VSSB_n and its map to G_n^2.

Generators are ``a_i, b_i, c_i, c_i^{-1}, v_i`` for ``1 <= i < n``; in text,
``c_i^{-1}`` is written ``C<i>``. Words act on pairs ``(g, sigma)`` in
``G_n^2 x Sigma_n`` with the rightmost letter acting first, so
``(u w) . s = u . (w . s)``; ``sigma . (i i+1)`` means apply the
transposition first, then sigma.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .perm import Permutation
from .words import DEFAULT_DEPTH, DEFAULT_NODES, FreeKBraidWord, equal_bounded, format_word, free_reduce

KINDS = ("a", "b", "c", "C", "v")
SINGULAR = ("a", "b", "c", "C")
FAMILIES = ("A", "R", "V", "A+V")


class VSSBSyntaxError(ValueError):
    def __init__(self, message: str, position: int, token: str = ""):
        super().__init__(f"{message} at position {position}" + (f": {token!r}" if token else ""))
        self.position = position
        self.token = token


@dataclass(frozen=True)
class VSSBGen:
    kind: str
    i: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.i < 1:
            raise ValueError(f"generator index must be positive, got {self.i}")

    def __str__(self):
        return f"{self.kind}{self.i}"


@dataclass(frozen=True)
class VSSBWord:
    n: int
    letters: tuple[VSSBGen, ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"VSSB_n needs n >= 2, got {self.n}")
        for g in self.letters:
            if g.i >= self.n:
                raise ValueError(f"generator {g} out of range for n={self.n}")

    def __add__(self, other: VSSBWord) -> VSSBWord:
        if self.n != other.n:
            raise ValueError("words on different strand counts")
        return VSSBWord(self.n, self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return " ".join(map(str, self.letters))


def vword(n: int, *gens: tuple[str, int]) -> VSSBWord:
    return VSSBWord(n, tuple(VSSBGen(kind, i) for kind, i in gens))


def parse_vssb(text: str, n: int) -> VSSBWord:
    """Parse whitespace-separated letters ``a1 b2 c3 C1 v2``; empty text is the identity."""
    letters = []
    for match in re.finditer(r"\S+", text):
        tok, pos = match.group(), match.start()
        m = re.fullmatch(r"([abcCv])(\d+)", tok)
        if m is None:
            raise VSSBSyntaxError("expected a letter like a1, b2, c3, C3 or v1", pos, tok)
        i = int(m.group(2))
        if not 1 <= i < n:
            raise VSSBSyntaxError(f"index {i} out of range 1..{n - 1}", pos, tok)
        letters.append(VSSBGen(m.group(1), i))
    return VSSBWord(n, tuple(letters))


def transposition(n: int, i: int) -> Permutation:
    return Permutation.transposition(n, i, i + 1)


def rho(w: VSSBWord) -> Permutation:
    """Permutation of the strands: c, C and v letters swap i and i+1, in letter order."""
    p = Permutation.identity(w.n)
    for g in w.letters:
        if g.kind in ("c", "C", "v"):
            p = transposition(w.n, g.i) * p
    return p


def is_pure(w: VSSBWord) -> bool:
    return rho(w).is_identity()


# ---------------------------------------------------------------------------
# the action on G_n^2 x Sigma_n

@dataclass(frozen=True)
class ActionState:
    g: FreeKBraidWord
    sigma: Permutation

    def __post_init__(self):
        if self.g.k != 2 or self.g.n != self.sigma.n:
            raise ValueError("state must pair a word of G_n^2 with a permutation of 1..n")

    @classmethod
    def unit(cls, n: int) -> ActionState:
        return cls(FreeKBraidWord(n, 2), Permutation.identity(n))

    def to_dict(self) -> dict:
        return {"g": format_word(self.g), "sigma": str(self.sigma)}


def act(gen: VSSBGen, s: ActionState) -> ActionState:
    n = s.sigma.n
    if gen.i >= n:
        raise ValueError(f"generator {gen} out of range for n={n}")
    if gen.kind in ("a", "b"):
        return s
    t = s.sigma * transposition(n, gen.i)
    if gen.kind == "v":
        return ActionState(s.g, t)
    letter = tuple(sorted((s.sigma(gen.i), s.sigma(gen.i + 1))))
    return ActionState(FreeKBraidWord(n, 2, (letter,) + s.g.letters), t)


def act_word(w: VSSBWord, s: ActionState) -> ActionState:
    for gen in reversed(w.letters):
        s = act(gen, s)
    return s


def phi(w: VSSBWord, reduce: bool = False) -> FreeKBraidWord:
    g = act_word(w, ActionState.unit(w.n)).g
    return free_reduce(g) if reduce else g


# ---------------------------------------------------------------------------
# relations

@dataclass(frozen=True)
class RelationPair:
    label: str
    left: VSSBWord
    right: VSSBWord

    def to_dict(self) -> dict:
        return {"label": self.label, "left": str(self.left) or "e", "right": str(self.right) or "e"}


def _rel(label, n, left, right) -> RelationPair:
    return RelationPair(label, vword(n, *left), vword(n, *right))


def _adjacent(n):
    return [(i, k) for i in range(1, n) for k in (i - 1, i + 1) if 1 <= k < n]


def _far(n):
    return [(i, j) for i in range(1, n) for j in range(i + 2, n)]


def _relations_A(n: int) -> list[RelationPair]:
    out = []
    for i in range(1, n):
        out.append(_rel("A1", n, [("c", i), ("C", i)], []))
        out.append(_rel("A1", n, [("C", i), ("c", i)], []))
    for i, j in _far(n):
        for x in SINGULAR:
            for y in SINGULAR:
                out.append(_rel("A2", n, [(x, i), (y, j)], [(y, j), (x, i)]))
    for i, k in _adjacent(n):
        for x in SINGULAR:
            out.append(_rel("A3", n, [(x, i), ("c", k), ("c", i)], [("c", k), ("c", i), (x, k)]))
    for i, k in _adjacent(n):
        for x in SINGULAR:
            out.append(_rel("A4", n, [(x, i), ("C", k), ("C", i)], [("C", k), ("C", i), (x, k)]))
    for i, k in _adjacent(n):
        out.append(_rel("A5", n, [("a", i), ("b", k)], [("b", k), ("a", i)]))
    for i in range(3, n):
        block = [("c", i - 1), ("c", i - 2), ("c", i), ("c", i - 1)] * 2
        out.append(_rel("A6", n, [("a", i), ("b", i - 2)] + block, [("a", i), ("b", i - 2)]))
    for i in range(3, n):
        block = [("c", i - 1), ("c", i - 2), ("c", i), ("c", i - 1)] * 2
        out.append(_rel("A7", n, [("b", i), ("a", i - 2)] + block, [("b", i), ("a", i - 2)]))
    for i in range(1, n):
        out.append(_rel("A8", n, [("a", i), ("a", i)], [("a", i)]))
    for i in range(1, n):
        out.append(_rel("A9", n, [("b", i), ("b", i)], [("b", i)]))
    for i in range(1, n):
        out.append(_rel("A10", n, [("a", i), ("b", i), ("c", i), ("c", i)], [("a", i), ("b", i)]))
    for i, k in _adjacent(n):
        block = [("c", i), ("c", k), ("c", i)] * 2
        out.append(_rel("A11", n, [("a", i), ("b", k)] + block, [("a", i), ("b", k)]))
    return out


def _relations_R(n: int) -> list[RelationPair]:
    out = []
    for i in range(1, n):
        out.append(_rel("R1", n, [("c", i), ("C", i)], []))
        out.append(_rel("R1", n, [("C", i), ("c", i)], []))
    for i, j in _far(n):
        for x in SINGULAR:
            for y in SINGULAR:
                out.append(_rel("R2", n, [(x, i), (y, j)], [(y, j), (x, i)]))
    for i in range(1, n):
        out.append(_rel("R3", n, [("a", i), ("c", i)], [("c", i), ("a", i)]))
        out.append(_rel("R4", n, [("b", i), ("c", i)], [("c", i), ("b", i)]))
    for i in range(1, n - 1):
        out.append(_rel("R5", n, [("c", i + 1), ("c", i), ("c", i + 1)], [("c", i), ("c", i + 1), ("c", i)]))
        out.append(_rel("R6", n, [("a", i + 1), ("c", i), ("c", i + 1)], [("c", i), ("c", i + 1), ("a", i)]))
        out.append(_rel("R7", n, [("b", i + 1), ("c", i), ("c", i + 1)], [("c", i), ("c", i + 1), ("b", i)]))
        out.append(_rel("R8", n, [("a", i), ("c", i + 1), ("c", i)], [("c", i + 1), ("c", i), ("a", i + 1)]))
        out.append(_rel("R9", n, [("b", i), ("c", i + 1), ("c", i)], [("c", i + 1), ("c", i), ("b", i + 1)]))
        out.append(_rel("R10", n, [("a", i), ("b", i + 1)], [("b", i + 1), ("a", i)]))
    for i in range(1, n):
        out.append(_rel("R11", n, [("a", i), ("b", i)], [("b", i), ("a", i)]))
        out.append(_rel("R12", n, [("a", i), ("a", i)], [("a", i)]))
        out.append(_rel("R13", n, [("b", i), ("b", i)], [("b", i)]))
        out.append(_rel("R14", n, [("a", i), ("b", i), ("c", i), ("c", i)], [("a", i), ("b", i)]))
    for i in range(1, n - 1):
        block = [("c", i), ("c", i + 1), ("c", i)] * 2
        out.append(_rel("R15", n, [("a", i), ("b", i + 1)] + block, [("a", i), ("b", i + 1)]))
    for i in range(1, n - 2):
        block = [("c", i + 1), ("c", i), ("c", i + 2), ("c", i + 1)] * 2
        out.append(_rel("R16", n, [("a", i), ("b", i + 2)] + block, [("a", i), ("b", i + 2)]))
    return out


def _relations_V(n: int) -> list[RelationPair]:
    out = []
    for i in range(1, n):
        for j in range(1, n):
            if abs(i - j) <= 1:
                continue
            for x in KINDS:
                if x == "v" and j < i:
                    continue    # v_i v_j = v_j v_i already listed with i < j
                out.append(_rel("V1", n, [("v", i), (x, j)], [(x, j), ("v", i)]))
    for i in range(1, n):
        out.append(_rel("V2", n, [("v", i), ("v", i)], []))
    for i, k in _adjacent(n):
        for x in KINDS:
            out.append(_rel("V3", n, [(x, i), ("v", k), ("v", i)], [("v", k), ("v", i), (x, k)]))
    for i in range(1, n):
        for x in ("a", "b"):
            out.append(_rel("V4", n, [(x, i), ("v", i)], [("v", i), (x, i)]))
    return out


def relations(n: int, family: str) -> list[RelationPair]:
    """Every instance of a relation family for strand count n, in label order."""
    if n < 2:
        raise ValueError("relations need n >= 2")
    if family == "A":
        return _relations_A(n)
    if family == "R":
        return _relations_R(n)
    if family == "V":
        return _relations_V(n)
    if family in ("A+V", "AV", "A|V"):
        return _relations_A(n) + _relations_V(n)
    raise ValueError(f"unknown relation family {family!r}; expected one of {FAMILIES}")


# ---------------------------------------------------------------------------
# verification sweeps

def check_rho_respects(n: int, family: str) -> dict:
    rows = []
    for rel in relations(n, family):
        l, r = rho(rel.left), rho(rel.right)
        rows.append({**rel.to_dict(), "rho_left": str(l), "rho_right": str(r), "pass": l == r})
    return {"n": n, "family": family, "relations": len(rows),
            "failures": [row for row in rows if not row["pass"]], "rows": rows}


def random_permutation(n: int, rng: random.Random) -> Permutation:
    images = list(range(1, n + 1))
    rng.shuffle(images)
    return Permutation(tuple(images))


def random_g(n: int, length: int, rng: random.Random) -> FreeKBraidWord:
    letters = []
    for _ in range(length):
        i, j = sorted(rng.sample(range(1, n + 1), 2))
        letters.append((i, j))
    return FreeKBraidWord(n, 2, tuple(letters))


def sample_states(n: int, count: int, seed: int = 0) -> list[ActionState]:
    """The unit state followed by ``count - 1`` random ones."""
    rng = random.Random(seed)
    states = [ActionState.unit(n)]
    while len(states) < count:
        states.append(ActionState(random_g(n, rng.randrange(0, 4), rng), random_permutation(n, rng)))
    return states


def _strip_suffix(g: FreeKBraidWord, suffix: FreeKBraidWord) -> FreeKBraidWord:
    tail = len(suffix.letters)
    assert g.letters[len(g.letters) - tail:] == suffix.letters
    return FreeKBraidWord(g.n, 2, g.letters[:len(g.letters) - tail])


def compare_on_state(rel: RelationPair, s: ActionState, depth: int, nodes: int) -> dict:
    """Act with both sides of a relation on s and compare the results.

    Both g-components end in s.g; the prefixes are compared, which is
    equivalent in the group.
    """
    ls, rs = act_word(rel.left, s), act_word(rel.right, s)
    gl, gr = _strip_suffix(ls.g, s.g), _strip_suffix(rs.g, s.g)
    row = {**rel.to_dict(), "state": s.to_dict(), "g_left": format_word(gl), "g_right": format_word(gr),
           "g_length": max(len(gl), len(gr))}
    if ls.sigma != rs.sigma:
        row.update(verdict="fail", reason="permutations differ",
                   sigma_left=str(ls.sigma), sigma_right=str(rs.sigma))
        return row
    if free_reduce(gl) == free_reduce(gr):
        row.update(verdict="equal", certificate="free reduction")
        return row
    v = equal_bounded(gl, gr, depth=depth, nodes=nodes)
    if v.kind == "equal":
        row.update(verdict="equal", certificate="move path", path=[format_word(p) for p in v.path])
    elif v.kind == "distinct":
        row.update(verdict="fail", reason="g-components distinct", witness=v.witness)
    else:
        row.update(verdict="unknown", nodes=v.nodes, depth=v.depth)
    return row


def pure_closure(w: VSSBWord) -> VSSBWord:
    """Append virtual crossings undoing rho(w), giving a pure word."""
    q = rho(w).inverse()
    extra = []
    while not q.is_identity():
        i = next(i for i in range(1, w.n) if q(i) > q(i + 1))
        q = q * transposition(w.n, i)
        extra.append(VSSBGen("v", i))
    return w + VSSBWord(w.n, tuple(extra))


def random_vssb(n: int, length: int, rng: random.Random, kinds: Sequence[str] = KINDS) -> VSSBWord:
    return VSSBWord(n, tuple(VSSBGen(rng.choice(kinds), rng.randrange(1, n)) for _ in range(length)))


def check_pure_multiplicative(n: int, samples: int = 50, max_length: int = 6, seed: int = 0) -> dict:
    """phi(u w) == phi(u) phi(w) letter for letter, for pure u and w."""
    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        u = pure_closure(random_vssb(n, rng.randrange(0, max_length + 1), rng))
        w = pure_closure(random_vssb(n, rng.randrange(0, max_length + 1), rng))
        if phi(u + w) != phi(u) + phi(w):
            failures.append({"u": str(u), "w": str(w)})
    return {"samples": samples, "failures": failures}


def check_phi_well_defined(
    n: int,
    family: str,
    states: Iterable[ActionState] | None = None,
    depth: int = DEFAULT_DEPTH,
    nodes: int = DEFAULT_NODES,
    num_states: int = 3,
    seed: int = 0,
    jobs: int = 1,
) -> dict:
    """Check that both sides of every relation act identically on sampled states."""
    states = list(states) if states is not None else sample_states(n, num_states, seed)
    tasks = [(rel, s) for rel in relations(n, family) for s in states]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_compare_task, [(rel, s, depth, nodes) for rel, s in tasks]))
    else:
        rows = [compare_on_state(rel, s, depth, nodes) for rel, s in tasks]
    counts = {k: sum(1 for r in rows if r["verdict"] == k) for k in ("equal", "unknown", "fail")}
    return {
        "n": n,
        "family": family,
        "depth": depth,
        "nodes": nodes,
        "states": [s.to_dict() for s in states],
        "counts": counts,
        "failures": [r for r in rows if r["verdict"] == "fail"],
        "unknown": [r for r in rows if r["verdict"] == "unknown"],
        "multiplicative": check_pure_multiplicative(n, seed=seed),
        "rows": rows,
    }


def _compare_task(args):
    rel, s, depth, nodes = args
    return compare_on_state(rel, s, depth, nodes)


def vssb_invariant(w: VSSBWord, B, chi1: Sequence[int], chi2: Sequence[int]) -> int:
    """Coloring binding number of phi(w) for a 2-biquandle B."""
    from .coloring import binding_number

    if B.k != 2:
        raise ValueError(f"need a 2-biquandle, got arity {B.k}")
    return binding_number(phi(w), B, chi1, chi2)
