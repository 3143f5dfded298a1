"""Command line front end.

Every subcommand prints a JSON report (or writes it with ``--out``). Exit
status is 0 on success, 1 on a negative verdict (failed axioms, or a verdict
contradicting ``--expect``) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .biquandle import (
    BiquandleError,
    FiniteKBiquandle,
    FlatBiquandle,
    Involution,
    check_axioms,
    conditional_involution,
    flat_check,
    flat_derived3,
    gaussian,
    involution_kbiquandle,
    is_isomorphic,
    load_biquandle,
)
from .coloring import binding_number, count_colorings, fundamental_presentation, hom_count, propagate
from .enumeration import BudgetExceeded, classify, enumerate_kbiquandles
from .vssb import (
    VSSBSyntaxError,
    check_phi_well_defined,
    check_rho_respects,
    is_pure,
    parse_vssb,
    phi,
    rho,
    vssb_invariant,
)
from .words import (
    DEFAULT_DEPTH,
    DEFAULT_NODES,
    WordSyntaxError,
    equal_bounded,
    format_letter,
    format_word,
    free_reduce,
    ksubsets,
    parity_vector,
    parse_word,
)

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class Negative(Exception):
    """Carries a report whose mathematical verdict is negative."""

    def __init__(self, result):
        super().__init__("negative verdict")
        self.result = result


def make_report(argv, command: str, parameters: dict, result: dict, seconds: float) -> dict:
    return {
        "tool": "kbraid",
        "version": __version__,
        "schema": SCHEMA_VERSION,
        "command": command,
        "argv": list(argv),
        "parameters": parameters,
        "result": result,
        "timing": {"seconds": round(seconds, 6)},
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# argument helpers

def _ints(text: str, name: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.replace(" ", "").split(",") if v != "")
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated integers, got {text!r}") from None


def _tau(text: str, m: int) -> Involution:
    pairs = [_ints(p, "--tau") for p in text.split(";") if p.strip()]
    if any(len(p) != 2 for p in pairs):
        raise UsageError(f"--tau: expected pairs like '0,1;2,3', got {text!r}")
    return Involution(m, tuple(pairs))


def _table(text: str, m: int, name: str):
    rows = [_ints(r, name) for r in text.split(";")]
    if len(rows) != m or any(len(r) != m for r in rows):
        raise UsageError(f"{name}: expected {m} rows of {m} entries separated by ';'")
    return rows


def _load(args) -> FiniteKBiquandle:
    return load_biquandle(args.biquandle, check=not args.skip_axioms)


def _expect(args, verdict: str, result: dict):
    if getattr(args, "expect", None) and args.expect != verdict:
        raise Negative(result)


# ---------------------------------------------------------------------------
# gnk

def cmd_gnk_reduce(args):
    w = parse_word(args.word, args.n, args.k)
    r = free_reduce(w)
    return {"input": format_word(w), "reduced": format_word(r), "length": len(r)}


def cmd_gnk_parity(args):
    w = parse_word(args.word, args.n, args.k)
    vec = parity_vector(w)
    return {"word": format_word(w), "parity": list(vec),
            "support": [format_letter(m) for m, v in zip(ksubsets(args.n, args.k), vec) if v]}


def cmd_gnk_eq(args):
    w1 = parse_word(args.word1, args.n, args.k)
    w2 = parse_word(args.word2, args.n, args.k)
    v = equal_bounded(w1, w2, depth=args.depth, nodes=args.nodes)
    result = {"word1": format_word(w1), "word2": format_word(w2), **v.to_dict()}
    _expect(args, v.kind, result)
    return result


# ---------------------------------------------------------------------------
# biq

def cmd_biq_check(args):
    B = load_biquandle(args.biquandle, check=False)
    report = check_axioms(B)
    result = {"biquandle": B.to_json(), "ok": report.ok, "axioms": report.to_dict()}
    if not report.ok:
        raise Negative(result)
    return result


def cmd_biq_make(args):
    fam = args.family
    if fam == "gaussian":
        B = gaussian(args.k)
    elif fam == "trivial":
        B = FiniteKBiquandle.identity(args.k, args.m)
    elif fam == "involution":
        B = involution_kbiquandle(_tau(args.tau or "", args.m), args.k)
    elif fam == "conditional":
        mu = [_ints(v, "--mu") for v in (args.mu or "").split(";") if v.strip()]
        B = conditional_involution(_tau(args.tau or "", args.m), mu, args.k)
    elif fam == "flat":
        if args.k != 3:
            raise UsageError("--family flat builds the k=3 biquandle; pass --k 3")
        star = _table(args.star, args.m, "--star")
        circ = _table(args.circ or args.star, args.m, "--circ")
        F = FlatBiquandle(args.m, star, circ)
        problems = {name: w for name, w in flat_check(F, 3).items() if w is not None}
        if problems:
            raise Negative({"flat_check": problems})
        B = flat_derived3(F)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown family {fam}")
    report = check_axioms(B)
    data = B.to_json()
    if args.save:
        with open(args.save, "w") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
    result = {"biquandle": data, "ok": report.ok, "axioms": report.to_dict(),
              "classification": classify(B).to_dict()}
    if not report.ok:
        raise Negative(result)
    return result


def cmd_biq_iso(args):
    B1 = load_biquandle(args.first, check=not args.skip_axioms)
    B2 = load_biquandle(args.second, check=not args.skip_axioms)
    iso = B1.k == B2.k and is_isomorphic(B1, B2)
    result = {"isomorphic": iso}
    _expect(args, "isomorphic" if iso else "non-isomorphic", result)
    return result


def cmd_biq_enum(args):
    try:
        res = enumerate_kbiquandles(args.m, args.k, nontrivial_only=args.nontrivial,
                                    budget=args.budget, jobs=args.jobs)
    except BudgetExceeded as exc:
        raise Negative({"error": str(exc)}) from None
    return res.to_dict()


# ---------------------------------------------------------------------------
# color

def _word_and_biquandle(args):
    B = _load(args)
    w = parse_word(args.word, args.n, B.k if args.k is None else args.k)
    if w.k != B.k:
        raise UsageError(f"word arity {w.k} does not match biquandle arity {B.k}")
    return w, B


def _chi(text, n, m, name):
    chi = _ints(text, name)
    if len(chi) != n or any(not 0 <= c < m for c in chi):
        raise UsageError(f"{name}: expected {n} colors in 0..{m - 1}, got {text!r}")
    return chi


def cmd_color_bind(args):
    w, B = _word_and_biquandle(args)
    chi1 = _chi(args.chi1, w.n, B.m, "--chi1")
    chi2 = _chi(args.chi2, w.n, B.m, "--chi2")
    col, out = propagate(w, B, chi1)
    result = {"word": format_word(w), "chi1": list(chi1), "chi2": list(chi2),
              "chi_out": list(out), "binding_number": binding_number(w, B, chi1, chi2)}
    if args.full:
        result["coloring"] = {f"e{e}": c for e, c in enumerate(col.colors)}
    return result


def cmd_color_count(args):
    w, B = _word_and_biquandle(args)
    return {"word": format_word(w), "count": count_colorings(w, B), "expected": B.m**w.n}


def cmd_color_homs(args):
    w, B = _word_and_biquandle(args)
    P = fundamental_presentation(w)
    return {"word": format_word(w), "presentation": P.to_dict(), "hom_count": hom_count(P, B),
            "count_colorings": count_colorings(w, B)}


# ---------------------------------------------------------------------------
# vssb

def cmd_vssb_phi(args):
    w = parse_vssb(args.word, args.n)
    return {"word": str(w), "phi": format_word(phi(w)), "phi_reduced": format_word(phi(w, reduce=True)),
            "rho": str(rho(w))}


def cmd_vssb_rho(args):
    w = parse_vssb(args.word, args.n)
    return {"word": str(w), "rho": str(rho(w)), "pure": is_pure(w)}


def cmd_vssb_invariant(args):
    B = _load(args)
    w = parse_vssb(args.word, args.n)
    chi1 = _chi(args.chi1, args.n, B.m, "--chi1")
    chi2 = _chi(args.chi2, args.n, B.m, "--chi2")
    if B.k != 2:
        raise UsageError(f"vssb invariant needs a 2-biquandle, got k={B.k}")
    return {"word": str(w), "phi": format_word(phi(w)), "chi1": list(chi1), "chi2": list(chi2),
            "binding_number": vssb_invariant(w, B, chi1, chi2)}


def cmd_vssb_verify(args):
    fams = ["A", "V"] if args.family == "A+V" else [args.family]
    out = {"rho": {}, "phi": {}}
    failed = False
    for fam in fams:
        r = check_rho_respects(args.n, fam)
        out["rho"][fam] = {"relations": r["relations"], "failures": r["failures"]}
        p = check_phi_well_defined(args.n, fam, depth=args.depth, nodes=args.nodes,
                                   num_states=args.states, seed=args.seed, jobs=args.jobs)
        if not args.rows:
            p = {key: val for key, val in p.items() if key != "rows"}
        out["phi"][fam] = p
        failed |= bool(r["failures"] or p["failures"] or p["multiplicative"]["failures"])
    if failed:
        raise Negative(out)
    return out


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    parser = argparse.ArgumentParser(prog="kbraid", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kbraid {__version__}")
    top = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func, command=name)
        return p

    gnk = top.add_parser("gnk", help="words in G_n^k").add_subparsers(dest="cmd", required=True)
    for name, func, h in [("reduce", cmd_gnk_reduce, "free reduction"),
                          ("parity", cmd_gnk_parity, "letter counts mod 2")]:
        p = sub(gnk, name, func, h)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("word")
    p = sub(gnk, "eq", cmd_gnk_eq, "bounded equality search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    p.add_argument("--expect", choices=["equal", "distinct", "unknown"])
    p.add_argument("word1")
    p.add_argument("word2")

    biq = top.add_parser("biq", help="finite k-biquandles").add_subparsers(dest="cmd", required=True)
    p = sub(biq, "check", cmd_biq_check, "check the axioms of a biquandle file")
    p.add_argument("biquandle")
    p = sub(biq, "make", cmd_biq_make, "build a biquandle from a named family")
    p.add_argument("--family", required=True, choices=["gaussian", "trivial", "involution", "conditional", "flat"])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--tau", help="transpositions, e.g. '0,1;2,3'")
    p.add_argument("--mu", help="multiplicity vectors, e.g. '1;2' or '1,0;0,2'")
    p.add_argument("--star", help="table of x*y, rows separated by ';'")
    p.add_argument("--circ", help="table of x o y (defaults to --star)")
    p.add_argument("--save", help="also write the biquandle file here")
    p = sub(biq, "iso", cmd_biq_iso, "isomorphism test")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--skip-axioms", action="store_true")
    p.add_argument("--expect", choices=["isomorphic", "non-isomorphic"])
    p = sub(biq, "enum", cmd_biq_enum, "enumerate up to isomorphism")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--nontrivial", action="store_true")
    p.add_argument("--budget", type=int, default=10**8)

    color = top.add_parser("color", help="colorings of free k-braids").add_subparsers(dest="cmd", required=True)
    for name, func, h in [("bind", cmd_color_bind, "coloring binding number"),
                          ("count", cmd_color_count, "number of good colorings"),
                          ("homs", cmd_color_homs, "homomorphisms from the fundamental biquandle")]:
        p = sub(color, name, func, h)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, help="defaults to the biquandle arity")
        p.add_argument("--biquandle", required=True)
        p.add_argument("--skip-axioms", action="store_true")
        p.add_argument("word")
        if name == "bind":
            p.add_argument("--chi1", required=True)
            p.add_argument("--chi2", required=True)
            p.add_argument("--full", action="store_true", help="include the whole edge coloring")

    vs = top.add_parser("vssb", help="virtual surface singular braids").add_subparsers(dest="cmd", required=True)
    for name, func, h in [("phi", cmd_vssb_phi, "image in G_n^2"), ("rho", cmd_vssb_rho, "strand permutation")]:
        p = sub(vs, name, func, h)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("word")
    p = sub(vs, "invariant", cmd_vssb_invariant, "binding number of phi(word)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--biquandle", required=True)
    p.add_argument("--skip-axioms", action="store_true")
    p.add_argument("--chi1", required=True)
    p.add_argument("--chi2", required=True)
    p.add_argument("word")
    p = sub(vs, "verify", cmd_vssb_verify, "check rho and phi on every relation instance")
    p.add_argument("--family", required=True, choices=["A", "R", "V", "A+V"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    p.add_argument("--states", type=int, default=3, help="sampled states, the unit state included")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", action="store_true", help="include every per-instance row")
    return parser


def _parameters(args) -> dict:
    skip = {"func", "command", "out", "group", "cmd"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _emit(report: dict, out):
    text = dumps(report)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command = f"{args.group} {args.cmd}"
    start = time.perf_counter()
    status = 0
    try:
        result = args.func(args)
    except Negative as neg:
        result, status = neg.result, 1
    except (UsageError, WordSyntaxError, VSSBSyntaxError, BiquandleError, OSError, ValueError) as exc:
        print(f"kbraid {command}: error: {exc}", file=sys.stderr)
        return 2
    report = make_report(argv, command, _parameters(args), result, time.perf_counter() - start)
    _emit(report, args.out)
    return status


if __name__ == "__main__":
    sys.exit(main())
