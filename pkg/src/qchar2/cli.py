"""Command-line interface: parse expressions, dispatch, emit reports.

Exit codes: 0 success/verified; 1 undecided or search-exhausted
outcomes; 2 usage or parse errors; 3 refutation candidates (a theorem
check failing with a verified counter-instance).  Reports are plain text
by default and versioned JSON with --format json; identical argv and
seed produce byte-identical JSON when --no-meta strips the timestamp.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .errors import ParseError, QChar2Error, SearchExhausted, UndecidableInstance
from .forms import QuadraticPfister
from .invariants import arf, clifford, clifford_trivial, e_map, in_iqn
from .parsing import (
    format_form,
    format_symbol_sum,
    parse_field,
    parse_form,
    parse_form_expr,
    parse_symbol_sum,
)
from .suites import SUITES, run_suite
from .symlen import splitting_slots, symbol_length_bound, two_rank_bound
from .witt import is_hyperbolic, isotropy, witt_decompose, witt_equivalent

EXIT_OK = 0
EXIT_UNDECIDED = 1
EXIT_USAGE = 2
EXIT_REFUTATION = 3

DEFAULT_BUDGET = int(os.environ.get("QCHAR2_BUDGET", "20000"))


def build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", choices=("text", "json"), default="text")
    output.add_argument("--no-meta", action="store_true",
                        help="omit timestamps/versions for byte-stable output")
    top = argparse.ArgumentParser(
        prog="qchar2",
        description="Exact quadratic form theory and symbol calculus in characteristic 2.",
        parents=[output],
    )
    sub = top.add_subparsers(dest="verb", required=True)

    def mk(name, **kw):
        return sub.add_parser(name, parents=[output], conflict_handler="resolve", **kw)

    def common(p, field=True):
        if field:
            p.add_argument("--field", required=True, help='e.g. "F2((t))" or "F2^2"')
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
        p.add_argument("--precision", type=int, default=16)

    p = mk("isotropy", help="decide isotropy of a form")
    common(p)
    p.add_argument("form")

    p = mk("witt", help="Witt-group operations")
    p.add_argument("op", choices=("isotropy", "decompose", "index", "hyperbolic", "equivalent"))
    common(p)
    p.add_argument("form")
    p.add_argument("other", nargs="?")

    p = mk("pfister", help="Pfister form operations")
    p.add_argument("op", choices=("expand", "hyperbolic", "invariant"))
    common(p)
    p.add_argument("form")

    p = mk("invariants", help="Arf, Clifford, filtration membership")
    common(p)
    p.add_argument("form")
    p.add_argument("--n", type=int, default=None, help="membership degree to test")

    p = mk("symbol", help="symbol-sum operations")
    p.add_argument("op", choices=("simplify", "trivial", "length", "rewrite"))
    common(p)
    p.add_argument("sum")

    p = mk("symlen", help="symbol-length machinery")
    symsub = p.add_subparsers(dest="op", required=True)
    pb = symsub.add_parser("bound", parents=[output], conflict_handler="resolve")
    pb.add_argument("--u", required=True, help="comma-separated u^2,...,u^n")
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--rank", type=int, default=None,
                    help="also report the 2-rank bound for this rank")
    ps = symsub.add_parser("split", parents=[output], conflict_handler="resolve")
    common(ps)
    ps.add_argument("form")
    ps.add_argument("--n", type=int, required=True)
    pd = symsub.add_parser("decompose", parents=[output], conflict_handler="resolve")
    common(pd)
    pd.add_argument("form")
    pd.add_argument("--n", type=int, default=2)

    p = mk("linkage", help="linkage of Pfister forms")
    p.add_argument("op", choices=("max", "check"))
    common(p)
    p.add_argument("--p", required=True, dest="p_form")
    p.add_argument("--q", required=True, dest="q_form")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--inseparable", action="store_true")

    p = mk("u-invariant", help="u-invariant estimate with evidence")
    common(p)
    p.add_argument("--n", type=int, default=1)

    p = mk("oracle-check", help="decider vs brute-search consistency")
    common(p)

    p = mk("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    common(p, field=False)
    p.add_argument("--field", default=None)
    return top


def _tower(args):
    return parse_field(args.field)


def _report(args, payload: dict, code: int) -> int:
    payload = {"schema": 1, **payload}
    if not args.no_meta:
        payload["meta"] = {
            "version": __version__,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        }
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, default=str))
    else:
        _print_text(payload)
    return code


def _print_text(payload, indent=0):
    pad = "  " * indent
    for key, value in payload.items():
        if key in ("schema", "meta"):
            continue
        if isinstance(value, dict):
            print(f"{pad}{key}:")
            _print_text(value, indent + 1)
        elif isinstance(value, list):
            print(f"{pad}{key}: [{len(value)} entries]")
            for item in value[:5]:
                if isinstance(item, dict):
                    _print_text(item, indent + 1)
                else:
                    print(f"{pad}  {item}")
        else:
            print(f"{pad}{key}: {value}")


def _verdict_payload(verdict) -> dict:
    out = {"verdict": verdict.kind}
    if verdict.witness is not None:
        out["witness"] = [str(x) for x in verdict.witness]
    if verdict.certificate is not None:
        out["certificate"] = verdict.certificate
    if verdict.budget_report is not None:
        out["budget_report"] = verdict.budget_report
    return out


def _verdict_code(verdict) -> int:
    return EXIT_OK if verdict.decided else EXIT_UNDECIDED


# -- handlers -------------------------------------------------------------------------


def _run_isotropy(args):
    tw = _tower(args)
    f = parse_form(tw, args.form)
    verdict = isotropy(f, args.budget)
    payload = {"command": "isotropy", "field": tw.descriptor(), "form": format_form(f)}
    payload.update(_verdict_payload(verdict))
    return _report(args, payload, _verdict_code(verdict))


def _run_witt(args):
    tw = _tower(args)
    f = parse_form(tw, args.form)
    payload = {"command": f"witt {args.op}", "field": tw.descriptor(),
               "form": format_form(f)}
    code = EXIT_OK
    if args.op == "isotropy":
        verdict = isotropy(f, args.budget)
        payload.update(_verdict_payload(verdict))
        code = _verdict_code(verdict)
    elif args.op == "equivalent":
        if not args.other:
            raise ParseError("witt equivalent needs a second form")
        g = parse_form(tw, args.other)
        payload["other"] = format_form(g)
        payload["equivalent"] = witt_equivalent(f, g)
    else:
        dec = witt_decompose(f)
        if args.op == "index":
            payload["witt_index"] = dec.index
        elif args.op == "hyperbolic":
            payload["hyperbolic"] = dec.kernel_dim == 0 and not f.quasilinear
        else:
            payload["witt_index"] = dec.index
            payload["kernel"] = format_form(dec.kernel)
            payload["proof"] = list(dec.proof)
    return _report(args, payload, code)


def _run_pfister(args):
    tw = _tower(args)
    val = parse_form_expr(tw, args.form)
    if not isinstance(val, QuadraticPfister):
        raise ParseError(f"{args.form!r} is not a Pfister expression")
    payload = {"command": f"pfister {args.op}", "field": tw.descriptor(),
               "pfister": format_form(val)}
    code = EXIT_OK
    if args.op == "expand":
        payload["expansion"] = format_form(val.expand())
    elif args.op == "hyperbolic":
        payload["hyperbolic"] = is_hyperbolic(val.expand())
    else:
        from .cohomology import SymbolSum

        sym = e_map(val)
        payload["invariant"] = format_symbol_sum(SymbolSum(sym.degree, (sym,)))
    return _report(args, payload, code)


def _run_invariants(args):
    tw = _tower(args)
    f = parse_form(tw, args.form)
    r = arf(f)
    c = clifford(f)
    triv = clifford_trivial(c, args.budget)
    payload = {
        "command": "invariants",
        "field": tw.descriptor(),
        "form": format_form(f),
        "arf": {"reduced": str(r.reduced), "trivial": r.is_in_wp},
        "clifford": {"symbols": str(c), "trivial": triv},
    }
    code = EXIT_OK if triv is not None else EXIT_UNDECIDED
    if args.n is not None:
        member = in_iqn(f, args.n, args.budget)
        payload["membership"] = {"degree": args.n, "member": member}
        if member is None:
            code = EXIT_UNDECIDED
    return _report(args, payload, code)


def _run_symbol(args):
    from .cohomology import basis_rewrite, class_trivial, simplify, symbol_length, to_differential

    tw = _tower(args)
    s = parse_symbol_sum(tw, args.sum)
    payload = {"command": f"symbol {args.op}", "field": tw.descriptor(),
               "input": format_symbol_sum(s)}
    code = EXIT_OK
    if args.op == "simplify":
        payload["result"] = format_symbol_sum(simplify(s))
    elif args.op == "trivial":
        got = class_trivial(s, args.budget)
        payload["trivial"] = got
        code = EXIT_OK if got is not None else EXIT_UNDECIDED
    elif args.op == "rewrite":
        out = basis_rewrite(to_differential(s), tw)
        payload["result"] = format_symbol_sum(out)
        payload["symbols"] = len(out.symbols)
    else:
        try:
            res = symbol_length(s, args.budget)
            payload["length"] = res.value
            payload["exact"] = res.exact
            if res.expression is not None:
                payload["expression"] = format_symbol_sum(res.expression)
        except QChar2Error as exc:
            payload["error"] = str(exc)
            code = EXIT_UNDECIDED
    return _report(args, payload, code)


def _run_symlen(args):
    if args.op == "bound":
        values = tuple(int(x) for x in args.u.split(","))
        payload = {
            "command": "symlen bound",
            "u_values": list(values),
            "degree": args.n,
            "bound": symbol_length_bound(values, args.n),
        }
        if args.rank is not None:
            payload["two_rank_bound"] = two_rank_bound(args.rank, args.n)
        return _report(args, payload, EXIT_OK)
    tw = _tower(args)
    f = parse_form(tw, args.form)
    if args.op == "split":
        from .forms import normalize_presentation

        nf = normalize_presentation(f).form
        slots, proof = splitting_slots(nf, args.n)
        payload = {
            "command": "symlen split",
            "field": tw.descriptor(),
            "normalized": format_form(nf),
            "slots": [str(b) for b in slots],
            "proof": {"witt_chain": list(proof.witt_chain),
                      "hauptsatz": proof.hauptsatz_step},
        }
        return _report(args, payload, EXIT_OK)
    from .symlen import class_decompose

    try:
        out = class_decompose(f, args.n, args.budget)
    except SearchExhausted as exc:
        payload = {"command": "symlen decompose", "field": tw.descriptor(),
                   "form": format_form(f), "outcome": "search-exhausted",
                   "report": exc.report}
        return _report(args, payload, EXIT_UNDECIDED)
    payload = {
        "command": "symlen decompose",
        "field": tw.descriptor(),
        "form": format_form(f),
        "degree": args.n,
        "symbols": len(out.symbols),
        "expression": format_symbol_sum(out),
    }
    return _report(args, payload, EXIT_OK)


def _run_linkage(args):
    from .linkage import inseparably_linked, max_separable_linkage

    tw = _tower(args)
    p = parse_form_expr(tw, args.p_form)
    q = parse_form_expr(tw, args.q_form)
    if not isinstance(p, QuadraticPfister) or not isinstance(q, QuadraticPfister):
        raise ParseError("linkage operands must be Pfister expressions")
    payload = {"command": f"linkage {args.op}", "field": tw.descriptor(),
               "p": format_form(p), "q": format_form(q)}
    code = EXIT_OK
    if args.op == "max":
        res = max_separable_linkage(p, q, witness_budget=args.budget)
        payload["max_separable_linkage"] = res.r
        payload["witt_index"] = res.witt_index
        if res.witness is not None:
            payload["witness"] = res.witness.describe()
    else:
        k = args.k if args.k is not None else p.fold - 1
        rep = inseparably_linked(p, q, k, args.budget)
        payload["k"] = k
        payload["linked"] = rep.verdict
        payload["rationale"] = rep.rationale
        if rep.witness is not None:
            payload["witness"] = rep.witness.describe()
        if rep.verdict is None:
            code = EXIT_UNDECIDED
    return _report(args, payload, code)


def _run_u_invariant(args):
    from .linkage import u_invariant_estimate

    tw = _tower(args)
    samples = args.samples if args.samples is not None else 200
    est = u_invariant_estimate(tw, args.n, samples=samples, seed=args.seed,
                               budget=args.budget)
    payload = {
        "command": "u-invariant",
        "field": tw.descriptor(),
        "degree": args.n,
        "value": est.value,
        "witness": str(est.witness) if est.witness else None,
        "provenance": est.provenance,
        "evidence": est.evidence,
    }
    return _report(args, payload, EXIT_OK)


def _run_oracle_check(args):
    tw = _tower(args)
    samples = args.samples if args.samples is not None else 100
    rep = run_suite("oracle", tw, samples=samples, seed=args.seed, budget=args.budget)
    payload = {"command": "oracle-check", **rep.to_json()}
    code = EXIT_OK if rep.passed else (
        EXIT_REFUTATION if rep.has_refutation else EXIT_UNDECIDED)
    return _report(args, payload, code)


def _run_verify(args):
    if args.suite == "all":
        seen = set()
        names = []
        for name in sorted(SUITES):
            fn = SUITES[name]
            if fn not in seen:
                seen.add(fn)
                names.append(name)
    else:
        names = [args.suite]
    tw = parse_field(args.field) if args.field else None
    reports = []
    worst = EXIT_OK
    for name in names:
        rep = run_suite(name, tw, samples=args.samples, seed=args.seed,
                        budget=args.budget if args.budget != DEFAULT_BUDGET else None)
        reports.append(rep)
        if rep.has_refutation:
            worst = max(worst, EXIT_REFUTATION)
        elif not rep.passed:
            worst = max(worst, EXIT_UNDECIDED)
    payload = {
        "command": f"verify {args.suite}",
        "passed": all(r.passed for r in reports),
        "suites": [r.to_json() for r in reports],
    }
    return _report(args, payload, worst)


HANDLERS = {
    "isotropy": _run_isotropy,
    "witt": _run_witt,
    "pfister": _run_pfister,
    "invariants": _run_invariants,
    "symbol": _run_symbol,
    "symlen": _run_symlen,
    "linkage": _run_linkage,
    "u-invariant": _run_u_invariant,
    "oracle-check": _run_oracle_check,
    "verify": _run_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return HANDLERS[args.verb](args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SearchExhausted, UndecidableInstance) as exc:
        print(f"undecided: {exc}", file=sys.stderr)
        return EXIT_UNDECIDED
    except QChar2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
