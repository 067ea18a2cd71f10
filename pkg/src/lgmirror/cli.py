"""Command line front end.

JSON goes to stdout, diagnostics (including timing) to stderr; identical
inputs produce byte-identical JSON.  Exit codes: 0 all requested checks
pass, 1 a check failed, 2 input error.

JSON conventions
----------------
* rationals are exact strings, "p/q" reduced (plain "p" when integral);
* group elements are lists of rationals (phases theta in [0,1));
* correlator keys are lists of insertion exponent vectors, the insertion
  [e_1,..,e_n] denoting theta_1^{e_1} * .. * theta_n^{e_n};
* `reconstruct` tables carry plain correlator values <...>; the prepotential
  is sum_k sum_{multisets M, |M| = k} value(M) * prod_m t_m^{mult} / mult!,
  i.e. the 1/r! of the exponential generating function is absorbed into the
  per-multiset multinomial factors.
"""

import argparse
import json
import sys
import time

from .exactnum import QQ, qstr
from .poly import PolynomialError, validate_and_decompose, _Parser
from .mirror import StateSpace
from .correlators import CorrelatorEngine, ClassificationError
from .reconstruction import Reconstruction, ReconstructionError
from .catalog import CATALOG
from . import verify as verify_mod


def _emit(payload, pretty_lines=None, pretty=False):
    if pretty and pretty_lines is not None:
        print("\n".join(pretty_lines))
    else:
        print(json.dumps(payload, indent=2, sort_keys=False))


def _qlist(values):
    return [qstr(v) for v in values]


def _load_poly(args):
    if args.file:
        with open(args.file) as fh:
            text = fh.read().strip()
    else:
        text = args.polynomial
    if text is None:
        raise PolynomialError("no polynomial given (argument or --file)")
    return text, validate_and_decompose(text)


def _blocks_json(w):
    return [{"kind": b.kind, "exponents": list(b.exponents),
             "variables": [v + 1 for v in b.variables]} for b in w.blocks]


def cmd_info(args):
    text, w = _load_poly(args)
    st = StateSpace(w)
    sym = st.sym
    payload = {
        "command": "info",
        "input": text,
        "result": {
            "n": w.n,
            "matrix": [list(r) for r in w.matrix],
            "blocks": _blocks_json(w),
            "weights": _qlist(sym.weights),
            "dual_weights": _qlist(sym.dual_weights),
            "milnor_number": sym.milnor_number,
            "milnor_number_dual": sym.milnor_dual,
            "central_charge": qstr(sym.central_charge),
            "group_order": sym.group_order,
            "J": _qlist(sym.J),
            "zeta": _qlist(sym.zeta),
            "dual": w.dual().text(),
        },
    }
    lines = [
        "polynomial      %s" % text,
        "blocks          %s" % ", ".join(
            "%s(%s)" % (b.kind, ",".join(map(str, b.exponents)))
            for b in w.blocks),
        "weights q       (%s)" % ", ".join(_qlist(sym.weights)),
        "milnor number   %d (dual %d)" % (sym.milnor_number, sym.milnor_dual),
        "central charge  %s" % qstr(sym.central_charge),
        "group order     %d" % sym.group_order,
        "J               (%s)" % ", ".join(_qlist(sym.J)),
        "dual            %s" % w.dual().text(),
    ]
    _emit(payload, lines, args.pretty)
    return 0


def cmd_dual(args):
    text, w = _load_poly(args)
    d = w.dual()
    payload = {"command": "dual", "input": text,
               "result": {"dual": d.text(),
                          "matrix": [list(r) for r in d.matrix],
                          "blocks": _blocks_json(d)}}
    _emit(payload, [d.text()], args.pretty)
    return 0


def cmd_basis(args):
    text, w = _load_poly(args)
    st = StateSpace(w)
    entries = []
    lines = ["%-14s %-20s %-7s %-8s %s" % ("m", "gamma", "sector",
                                           "degree", "form")]
    for el in st.basis:
        entries.append({
            "m": list(el.m),
            "gamma": _qlist(el.gamma),
            "sector": "broad" if el.broad else "narrow",
            "degree": qstr(el.degree),
            "fixed_variables": [v + 1 for v in el.fixed],
            "form": el.form_text(),
        })
        lines.append("%-14s %-20s %-7s %-8s %s" % (
            el.m, "(" + ",".join(_qlist(el.gamma)) + ")",
            "broad" if el.broad else "narrow", qstr(el.degree),
            el.form_text()))
    payload = {"command": "basis", "input": text,
               "result": {"dimension": len(st.basis), "elements": entries}}
    _emit(payload, lines, args.pretty)
    return 0


def cmd_frobenius(args):
    text, w = _load_poly(args)
    st = StateSpace(w)
    table = []
    lines = []
    for e1 in st.basis:
        for e2 in st.basis:
            prod = st.product({e1.m: QQ(1)}, {e2.m: QQ(1)})
            entry = {"m1": list(e1.m), "m2": list(e2.m),
                     "product": {str(list(m)): qstr(c)
                                 for m, c in sorted(prod.items())}}
            table.append(entry)
            if prod:
                lines.append("theta%s * theta%s = %s" % (
                    e1.m, e2.m,
                    " + ".join("%s theta%s" % (qstr(c), m)
                               for m, c in sorted(prod.items()))))
    payload = {"command": "frobenius", "input": text,
               "result": {"products": table}}
    _emit(payload, lines, args.pretty)
    return 0


def cmd_pairing(args):
    text, w = _load_poly(args)
    st = StateSpace(w)
    gram = st.gram()
    direct = st.gram_direct()
    payload = {"command": "pairing", "input": text,
               "result": {
                   "basis": [list(el.m) for el in st.basis],
                   "gram": [[qstr(v) for v in row] for row in gram],
                   "gram_direct": [[qstr(v) for v in row] for row in direct],
                   "match": gram == direct,
               }}
    lines = ["basis: %s" % [el.m for el in st.basis]]
    for row in gram:
        lines.append("  ".join("%6s" % qstr(v) for v in row))
    lines.append("direct formulas match: %s" % (gram == direct))
    _emit(payload, lines, args.pretty)
    return 0 if gram == direct else 1


def _parse_insertion(text, n):
    parser = _Parser(text.strip())
    coeff, exps = parser._term()
    parser._skip_ws()
    if parser.pos != len(parser.text):
        raise PolynomialError("unexpected trailing input in insertion",
                              parser.pos)
    if coeff != 1:
        raise PolynomialError("insertions must have coefficient 1")
    if exps and max(exps) > n:
        raise PolynomialError("insertion uses x%d beyond the %d variables"
                              % (max(exps), n))
    return tuple(exps.get(i, 0) for i in range(1, n + 1))


def cmd_threept(args):
    text, w = _load_poly(args)
    st = StateSpace(w)
    key = [_parse_insertion(t, w.n) for t in args.insertions]
    if len(key) != 3:
        raise PolynomialError("threept takes exactly three insertions")
    eng = CorrelatorEngine(st)
    value = st.three_point(*key)
    payload = {"command": "threept", "input": text,
               "result": {"insertions": [list(e) for e in key],
                          "nonvanishing_rule": eng.nonvanishing(key),
                          "value": qstr(value)}}
    _emit(payload, ["<...> = %s" % qstr(value)], args.pretty)
    return 0


def cmd_fourpoint(args):
    text, w = _load_poly(args)
    eng = CorrelatorEngine(StateSpace(w))
    n = w.n
    special = [None] * n
    chiodo = [None] * n
    note = []
    for i in eng.fourpoint_indices():
        try:
            special[i - 1] = qstr(eng.four_point_special(i))
        except ClassificationError as exc:
            note.append("F_%d: %s" % (i, exc))
            continue
        chiodo[i - 1] = qstr(eng.four_point_via_chiodo(i))
    match = special == chiodo
    payload = {"command": "fourpoint", "input": text,
               "result": {"F": special, "chiodo": chiodo, "match": match}}
    if note:
        payload["result"]["note"] = note
    lines = ["F       %s" % special, "chiodo  %s" % chiodo,
             "match   %s" % match]
    _emit(payload, lines, args.pretty)
    return 0 if match else 1


def cmd_reconstruct(args):
    text, w = _load_poly(args)
    if args.max_k > 6:
        raise PolynomialError("--max-k is capped at 6")
    rec = Reconstruction(CorrelatorEngine(StateSpace(w)), max_k=args.max_k)
    tables = rec.prepotential(args.max_k)
    result = {}
    lines = []
    for k in sorted(tables):
        level = {}
        for key, value in sorted(tables[k].items()):
            name = "; ".join(",".join(map(str, e)) for e in key)
            level[name] = qstr(value)
            lines.append("k=%d  <%s> = %s" % (k, name, qstr(value)))
        result["k=%d" % k] = level
    result["fallback_keys"] = [
        [list(e) for e in key] for key in sorted(rec.fallback_keys)]
    payload = {"command": "reconstruct", "input": text,
               "result": result}
    _emit(payload, lines, args.pretty)
    return 0


def _checks_json(res):
    return {
        "criterion": res.criterion,
        "passed": res.passed,
        "checks": [{"name": c.name, "passed": c.passed,
                    "expected": c.expected, "got": c.got}
                   for c in res.checks],
    }


def cmd_verify(args):
    text, w = _load_poly(args)
    res = verify_mod.verify_polynomial(text, max_k=args.max_k)
    payload = {"command": "verify", "input": text,
               "result": _checks_json(res)}
    lines = []
    for c in res.checks:
        lines.append("%s %s (expected %s, got %s)" % (
            "PASS" if c.passed else "FAIL", c.name, c.expected, c.got))
    lines.append("verify: %s" % ("PASS" if res.passed else "FAIL"))
    _emit(payload, lines, args.pretty)
    print("verify took %.2fs" % res.seconds, file=sys.stderr)
    return 0 if res.passed else 1


def cmd_selftest(args):
    if args.catalog:
        with open(args.catalog) as fh:
            entries = [("entry_%d" % i, line.strip())
                       for i, line in enumerate(fh)
                       if line.strip() and not line.startswith("#")]
        results = [verify_mod.verify_polynomial(text) for _, text in entries]
        payload = {"command": "selftest",
                   "input": [text for _, text in entries],
                   "result": [_checks_json(r) for r in results]}
        ok = all(r.passed for r in results)
        lines = ["%s %s" % ("PASS" if r.passed else "FAIL", r.criterion)
                 for r in results]
    else:
        results = verify_mod.run_all()
        payload = {"command": "selftest",
                   "input": [text for _, text in CATALOG],
                   "result": [_checks_json(r) for r in results]}
        ok = all(r.passed for r in results)
        lines = []
        for r in results:
            npass = sum(1 for c in r.checks if c.passed)
            lines.append("%s  %s (%d/%d)" % (
                "PASS" if r.passed else "FAIL", r.criterion, npass,
                len(r.checks)))
    _emit(payload, lines, args.pretty)
    for r in results:
        print("%-55s %.2fs" % (r.criterion, r.seconds), file=sys.stderr)
    return 0 if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lgmirror",
        description="Exact Landau-Ginzburg mirror symmetry calculator "
                    "for invertible polynomials")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, poly=True, insertions=False):
        p = sub.add_parser(name)
        if poly:
            p.add_argument("polynomial", nargs="?",
                           help="polynomial text, e.g. 'x1^2*x2+x2^2'")
        if insertions:
            p.add_argument("insertions", nargs=3,
                           help="three insertions as monomials in theta, "
                                "e.g. x1 x2 'x1*x2^2' (1 for the unit)")
        p.add_argument("--file", help="read the polynomial from a file")
        p.add_argument("--pretty", action="store_true",
                       help="human-readable output instead of JSON")
        p.add_argument("--max-k", type=int, default=4,
                       help="point cap for reconstruction (default 4, max 6)")
        p.add_argument("--catalog",
                       help="newline-separated polynomials (selftest only)")
        p.set_defaults(fn=fn)
        return p

    add("info", cmd_info)
    add("dual", cmd_dual)
    add("basis", cmd_basis)
    add("frobenius", cmd_frobenius)
    add("pairing", cmd_pairing)
    p = sub.add_parser("threept")
    p.add_argument("polynomial")
    p.add_argument("insertions", nargs=3)
    p.add_argument("--file")
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--max-k", type=int, default=4)
    p.add_argument("--catalog")
    p.set_defaults(fn=cmd_threept)
    add("fourpoint", cmd_fourpoint)
    add("reconstruct", cmd_reconstruct)
    add("verify", cmd_verify)
    add("selftest", cmd_selftest, poly=False)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        code = args.fn(args)
    except (PolynomialError, ReconstructionError, ClassificationError,
            ValueError) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__,
                                    "message": str(exc)}}, indent=2))
        return 2
    print("elapsed %.2fs" % (time.perf_counter() - t0), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
