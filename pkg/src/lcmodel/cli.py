"""``lcmodel`` command line: JSON in, JSON out, exact rationals as ``"p/q"`` strings.

Exit codes: 0 ok, 2 input error, 3 resource cap, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import hassett, lc, oracle, picard
from .combinat import MAX_N, CombinatError, FCurve, WeightDatum, from_mask
from .hassett import HassettClass, HassettError
from .picard import MznClass

SCHEMA = "lcmodel.report/1"
FCURVE_CAP = 12
EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_VERIFY = 0, 2, 3, 4

_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*")


class InputError(ValueError):
    pass


class CapError(ValueError):
    pass


# ---------------------------------------------------------------------------
# parsing


def parse_rational(text: Any) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise InputError(f"expected a rational string 'p/q', got {text!r}")
    m = _RATIONAL.fullmatch(str(text))
    if not m:
        raise InputError(f"malformed rational {text!r}")
    den = int(m.group(2) or 1)
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def _load_json(path: str) -> dict:
    try:
        raw = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
        doc = json.loads(raw)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    return doc


def _check_n(n: Any, cap: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int):
        raise InputError(f"n must be an integer, got {n!r}")
    if n > cap:
        raise CapError(f"n = {n} exceeds the cap n <= {cap} for this command")
    if n < 4:
        raise InputError(f"n must be >= 4, got {n}")
    return n


def weights_from_doc(doc: dict, cap: int) -> WeightDatum:
    if "weights" not in doc:
        raise InputError("missing 'weights'")
    ws = doc["weights"]
    if not isinstance(ws, list):
        raise InputError("'weights' must be a list")
    n = _check_n(doc.get("n", len(ws)), cap)
    if len(ws) != n:
        raise InputError(f"n = {n} but {len(ws)} weights given")
    return WeightDatum([parse_rational(w) for w in ws])


def _label(term: dict, n: int) -> tuple[int, ...]:
    members = term.get("set")
    if not isinstance(members, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in members):
        raise InputError(f"'D' term needs an integer list 'set', got {members!r}")
    s = set(members)
    if len(s) != len(members) or not s <= set(range(1, n + 1)) or not 2 <= len(s) <= n - 2:
        raise InputError(f"invalid boundary label {members} for n = {n}")
    return tuple(sorted(s))


def _index(term: dict, n: int) -> int:
    i = term.get("index")
    if isinstance(i, bool) or not isinstance(i, int) or not 1 <= i <= n:
        raise InputError(f"'psi' term needs an index in 1..{n}, got {i!r}")
    return i


def mzn_from_doc(doc: dict, cap: int = MAX_N) -> MznClass:
    n = _check_n(doc.get("n"), cap)
    out = MznClass.zero(n)
    for term in _terms(doc):
        c = parse_rational(term.get("coef", "1"))
        gen = term.get("gen")
        if gen == "D":
            x = MznClass.boundary(_label(term, n), n)
        elif gen == "psi":
            x = picard.psi(_index(term, n), n)
        elif gen == "K":
            x = picard.canonical_K(n)
        elif gen == "kappa":
            x = picard.kappa(n)
        elif gen == "Dnod":
            x = picard.total_boundary(n)
        else:
            raise InputError(f"unknown generator {gen!r}")
        out = out + c * x
    return out


def hassett_from_doc(doc: dict, cap: int = MAX_N) -> HassettClass:
    A = weights_from_doc(doc, cap)
    n = A.n
    out = HassettClass.zero(A)
    for term in _terms(doc):
        c = parse_rational(term.get("coef", "1"))
        gen = term.get("gen")
        if gen == "D":
            x = HassettClass.boundary(A, _label(term, n))
        elif gen == "psi":
            x = HassettClass.psi(A, _index(term, n))
        elif gen == "K":
            x = hassett.canonical_K_hassett(A)
        elif gen == "kappa":
            x = hassett.kappa_hassett(A)
        elif gen == "Dnod":
            x = hassett.d_nod(A)
        else:
            raise InputError(f"unknown generator {gen!r}")
        out = out + c * x
    return out


def _terms(doc: dict) -> list[dict]:
    terms = doc.get("terms", [])
    if not isinstance(terms, list) or not all(isinstance(t, dict) for t in terms):
        raise InputError("'terms' must be a list of objects")
    return terms


def _space(doc: dict) -> str:
    space = doc.get("space", "mzn")
    if space not in ("mzn", "hassett"):
        raise InputError(f"unknown space {space!r}")
    return space


def parse_fcurve(text: str, n: int) -> FCurve:
    """``"1|2|3|4,5"``: four blocks separated by ``|``."""
    try:
        blocks = [[int(x) for x in b.split(",")] for b in text.split("|")]
        return FCurve.from_blocks(blocks, n)
    except (ValueError, CombinatError) as exc:
        raise InputError(f"bad F-curve {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# serialization


def q(x: Fraction | None) -> str | None:
    return None if x is None else str(x)


def mzn_json(X: MznClass) -> list[dict]:
    return [{"set": list(I.members), "coef": q(c)} for I, c in X.terms()]


def hassett_json(Y: HassettClass) -> dict:
    return {
        "psi": [{"index": i, "coef": q(c)} for i, c in enumerate(Y.psi_coeffs, 1) if c],
        "nodal": [{"set": list(from_mask(m)), "coef": q(c)} for m, c in Y.nodal_coeffs.items()],
        "sectional": [{"set": list(from_mask(m)), "coef": q(c)} for m, c in Y.sec_coeffs.items()],
    }


def fcurve_json(F: FCurve | None) -> list[list[int]] | None:
    return None if F is None else [list(b) for b in F.blocks]


def _weights_json(A: WeightDatum) -> list[str]:
    return [q(a) for a in A.weights]


def fnef_json(v: picard.FNefVerdict) -> dict:
    return {
        "is_fnef": v.is_fnef,
        "min_value": q(v.min_value),
        "witness": fcurve_json(v.witness),
        "zero_set": [fcurve_json(F) for F in v.zero_set],
    }


def chamber_json(ch: lc.SimpsonChamber | None) -> dict | None:
    if ch is None:
        return None
    return {
        "n": ch.n,
        "beta": q(ch.beta),
        "kind": ch.kind,
        "k": ch.k,
        "label": ch.label,
        "epsilon_interval": None if ch.epsilon_interval is None else [q(x) for x in ch.epsilon_interval],
        "beta_interval": None if ch.beta_interval is None else [q(x) for x in ch.beta_interval],
    }


def lc_json(v: lc.LogCanonicalVerdict | None) -> dict | None:
    if v is None:
        return None
    return {
        "log_canonical": v.is_log_canonical,
        "lp_status": v.lp_status,
        "lp_value": q(v.lp_value),
        "r": q(v.r),
        "witness_checked": v.witness_checked,
        "pivots": v.pivots,
    }


def analysis_json(an: lc.Analysis) -> dict:
    ch = an.chamber
    out = {
        "weights": _weights_json(an.A),
        "n": an.A.n,
        "coincidence_sets": [list(I.members) for I in ch.coincidence],
        "boundary_census": ch.census,
        "chamber_walls": [list(I.members) for I in ch.walls],
        "symmetric_chamber": chamber_json(ch.symmetric),
        "pushed_delta": hassett_json(an.pushed),
        "pullpush_delta": mzn_json(picard.canonical_form(an.pullpush)),
        "difference": mzn_json(an.difference),
        "difference_nonnegative": an.difference_nonnegative,
        "difference_on_contracted": an.difference_on_contracted,
        "fnef": fnef_json(an.fnef),
        "predicted_zero_set": [fcurve_json(F) for F in an.predicted_zero],
        "zero_set_agrees": an.zero_set_agrees,
        "log_canonical": None,
        "caveat": an.caveat,
    }
    if an.log_canonical is not None:
        out["log_canonical"] = an.log_canonical.is_log_canonical
        out["log_canonical_detail"] = lc_json(an.log_canonical)
    return out


def check_json(c: oracle.Check) -> dict:
    return {"name": c.name, "passed": c.passed, "detail": c.detail, "failures": c.failures}


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> tuple[dict, int]:
    A = weights_from_doc(_load_json(args.weights), FCURVE_CAP)
    an = lc.analyze(A, check_log_canonical=args.check_log_canonical)
    return analysis_json(an), EXIT_OK


def cmd_push(args) -> tuple[dict, int]:
    doc = _load_json(args.divisor)
    if _space(doc) != "mzn":
        raise InputError("push takes an mzn divisor")
    X = mzn_from_doc(doc)
    wdoc = _load_json(args.weights) if args.weights else doc
    A = weights_from_doc(wdoc, MAX_N)
    if A.n != X.n:
        raise InputError(f"weights for n = {A.n}, divisor on n = {X.n}")
    return {"weights": _weights_json(A), "class": hassett_json(hassett.pushforward(A, X))}, EXIT_OK


def cmd_pull(args) -> tuple[dict, int]:
    doc = _load_json(args.divisor)
    if _space(doc) != "hassett":
        raise InputError("pull takes a hassett divisor")
    Y = hassett_from_doc(doc)
    X = hassett.pullback(Y.A, Y)
    return {"weights": _weights_json(Y.A), "n": X.n, "class": mzn_json(picard.canonical_form(X))}, EXIT_OK


def _mzn_arg(args, cap: int) -> MznClass:
    doc = _load_json(args.divisor)
    if _space(doc) == "hassett":
        Y = hassett_from_doc(doc, cap)
        return hassett.pullback(Y.A, Y)
    return mzn_from_doc(doc, cap)


def cmd_canon(args) -> tuple[dict, int]:
    X = _mzn_arg(args, MAX_N)
    return {"n": X.n, "input": mzn_json(X), "canonical": mzn_json(picard.canonical_form(X))}, EXIT_OK


def cmd_pair(args) -> tuple[dict, int]:
    X = _mzn_arg(args, FCURVE_CAP)
    if args.curve:
        F = parse_fcurve(args.curve, X.n)
        return {"n": X.n, "curve": fcurve_json(F), "value": q(picard.pair_fcurve(X, F))}, EXIT_OK
    rows = [{"curve": fcurve_json(F), "value": q(picard.pair_fcurve(X, F))} for F in picard.context(X.n).fcurves()]
    return {"n": X.n, "pairings": rows}, EXIT_OK


def cmd_fnef(args) -> tuple[dict, int]:
    X = _mzn_arg(args, FCURVE_CAP)
    out = {"n": X.n, **fnef_json(picard.fnef(X))}
    if X.n >= 8:
        out["caveat"] = lc.CONJECTURE_CAVEAT
    return out, EXIT_OK


def cmd_chamber(args) -> tuple[dict, int]:
    if args.weights:
        A = weights_from_doc(_load_json(args.weights), MAX_N)
        rep = lc.chamber_report(A)
        return {
            "weights": _weights_json(A),
            "coincidence_sets": [list(I.members) for I in rep.coincidence],
            "boundary_census": rep.census,
            "chamber_walls": [list(I.members) for I in rep.walls],
            "symmetric_chamber": chamber_json(rep.symmetric),
            "contracted_fcurves": ([fcurve_json(F) for F in lc.contracted_fcurves(A)]
                                   if A.n <= FCURVE_CAP else None),
        }, EXIT_OK
    if args.n is None or (args.beta is None) == (args.alpha is None):
        raise InputError("chamber needs a weight file, or --n with exactly one of --beta/--alpha")
    n = _check_n(args.n, MAX_N)
    kind, value = ("beta", args.beta) if args.beta is not None else ("alpha", args.alpha)
    try:
        ch = lc.simpson_chamber(n, parse_rational(value), kind)
    except (ValueError, CombinatError) as exc:
        raise InputError(str(exc)) from exc
    return {"chamber": chamber_json(ch)}, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    ns = args.n or [5, 6, 7]
    for n in ns:
        if n > 10:
            raise CapError(f"verify suites are capped at n <= 10, got {n}")
        if n < 4:
            raise InputError(f"n must be >= 4, got {n}")
    structural = []
    for n in sorted(set(ns)):
        structural.append(check_json(oracle.verify_rank(n)) if n <= 8 else None)
        if n <= 7:
            structural.append(check_json(oracle.verify_relations_perp_fcurves(n)))
    structural = [s for s in structural if s is not None]
    suite = oracle.run_suite(ns, args.samples, args.seed, jobs=args.jobs)
    ok = suite["all_passed"] and all(s["passed"] for s in structural)
    rep = {
        "structural": structural,
        "suite": suite,
        "self_restriction_sign": {
            "adopted": hassett.SELF_RESTRICTION_SIGN,
            "note": "restriction of D_I to itself taken as -psi_p - psi_q; the positive sign fails the kappa check",
        },
        "all_passed": ok,
    }
    if args.check_log_canonical:
        rep["log_canonical"] = [
            {"weights": _weights_json(A), **lc_json(lc.is_log_canonical(hassett.pullpush_delta(A)))}
            for n in ns for A in oracle.weight_samples(n, args.samples, args.seed)
        ]
    return rep, EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "analyze": cmd_analyze,
    "push": cmd_push,
    "pull": cmd_pull,
    "canon": cmd_canon,
    "pair": cmd_pair,
    "fnef": cmd_fnef,
    "chamber": cmd_chamber,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# output


def render_table(obj: Any, prefix: str = "") -> list[tuple[str, str]]:
    rows: list[tuple[str, str]] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            rows += render_table(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and obj and any(isinstance(v, (dict, list)) for v in obj):
        for i, v in enumerate(obj):
            rows += render_table(v, f"{prefix}[{i}]")
    else:
        rows.append((prefix, json.dumps(obj)))
    return rows


def emit(report: dict, table: bool, out) -> None:
    if table:
        rows = render_table(report)
        width = max((len(k) for k, _ in rows), default=0)
        for k, v in rows:
            out.write(f"{k.ljust(width)}  {v}\n")
    else:
        out.write(json.dumps(report, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lcmodel", description="Divisor classes on moduli of weighted pointed rational curves.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--table", action="store_true", help="human-readable table instead of JSON")
    common.add_argument("-o", "--out", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="full report for K + sum a_i psi_i")
    s.add_argument("weights", help="weight file (JSON)")
    s.add_argument("--check-log-canonical", action="store_true", help="also run the exact LP")

    s = sub.add_parser("push", parents=[common], help="push an mzn divisor to the weighted space")
    s.add_argument("divisor")
    s.add_argument("--weights", help="weight file; defaults to weights inside the divisor file")

    s = sub.add_parser("pull", parents=[common], help="pull a hassett divisor back to M_0,n")
    s.add_argument("divisor")

    for name, text in (("canon", "canonical boundary form"), ("fnef", "F-nef test")):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("divisor")

    s = sub.add_parser("pair", parents=[common], help="F-curve pairings")
    s.add_argument("divisor")
    s.add_argument("--curve", help="blocks like '1|2|3|4,5'; all F-curves if omitted")

    s = sub.add_parser("chamber", parents=[common], help="chamber data")
    s.add_argument("weights", nargs="?")
    s.add_argument("--n", type=int)
    s.add_argument("--beta")
    s.add_argument("--alpha")

    s = sub.add_parser("verify", parents=[common], help="run the oracle suites")
    s.add_argument("--n", type=int, nargs="+")
    s.add_argument("--samples", type=int, default=20)
    s.add_argument("--seed", type=int, default=oracle.DEFAULT_SEED)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--check-log-canonical", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        body, code = COMMANDS[args.command](args)
    except CapError as exc:
        print(f"lcmodel: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, CombinatError, HassettError, ValueError) as exc:
        print(f"lcmodel: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = {"schema": SCHEMA, "command": args.command, **body}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            emit(report, args.table, fh)
    else:
        emit(report, args.table, sys.stdout)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
