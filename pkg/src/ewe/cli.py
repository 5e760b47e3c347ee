"""Command-line front end.

Exit codes: 0 ok / coherent / terminating, 1 invalid input, 2 incoherent
(or input not meeting a command's preconditions), 3 non-terminating,
4 unknown.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import __version__
from .analysis import (Budget, ConstructionFailed, PreconditionFailed, Status, analyze,
                       nonterminating_run)
from .core import InvalidEquation, canonical, is_nontrivial, is_staggered
from .cutgraph import cut_graph, cut_graph_dot, is_cyclic
from .feasibility import coherence_witness, find_incoherent_core
from .oracle import (EnumerationSpec, brute_coherence, enumerate_boundary_orders, enumerate_ewes,
                     oracle_successors)
from .syntax import EweSyntaxError, format_ewe, read_ewe
from .transform import IncoherentInput, TrivialEquation, nielsen_case, successors

EXIT_OK, EXIT_INVALID, EXIT_INCOHERENT, EXIT_NONTERMINATING, EXIT_UNKNOWN = 0, 1, 2, 3, 4


class _Out:
    def __init__(self, stream=None):
        self.stream = stream or sys.stdout
        flag = os.environ.get("EWE_COLOR")
        if flag is None:
            self.color = hasattr(self.stream, "isatty") and self.stream.isatty()
        else:
            self.color = flag == "1"

    def paint(self, text, code):
        return f"\033[{code}m{text}\033[0m" if self.color else text

    def good(self, text):
        return self.paint(text, "32")

    def bad(self, text):
        return self.paint(text, "31")

    def print(self, *parts):
        print(*parts, file=self.stream)


def input_digest(e) -> str:
    return hashlib.sha256(format_ewe(canonical(e)[0]).encode("utf-8")).hexdigest()


def envelope(command, e, result, digest=None) -> str:
    return json.dumps({
        "tool_version": __version__,
        "command": command,
        "input_digest": digest if digest is not None else input_digest(e),
        "result": result,
    }, indent=2, sort_keys=True)


def _load(path, out):
    try:
        return read_ewe(path)
    except EweSyntaxError as exc:
        print(f"{path}:{exc.line}:{exc.column}: syntax error: {exc.message}", file=sys.stderr)
    except InvalidEquation as exc:
        for v in exc.violations:
            print(f"{path}: {v.code}: {v.detail}", file=sys.stderr)
    except OSError as exc:
        print(f"{path}: {exc.strerror or exc}", file=sys.stderr)
    return None


def _lengths_json(w):
    return {k: w[k] for k in sorted(w)}


# -- commands ----------------------------------------------------------------------

def cmd_check(args, out) -> int:
    e = _load(args.path, out)
    if e is None:
        return EXIT_INVALID
    w = coherence_witness(e)
    result = {
        "ewe": format_ewe(e),
        "nontrivial": is_nontrivial(e),
        "staggered": is_staggered(e),
        "coherent": w is not None,
        "witness": _lengths_json(w) if w is not None else None,
    }
    if w is None:
        core = find_incoherent_core(e)
        if core is not None:
            covers, ys = core
            result["core"] = [{"a": [c.a_side, c.a_lo, c.a_hi], "b": [c.b_side, c.b_lo, c.b_hi],
                               "strict": c.strict, "multiplier": y} for c, y in zip(covers, ys)]
    if args.json:
        out.print(envelope("check", e, result))
    else:
        out.print(f"equation:   {e.equation}")
        out.print(f"order:      {e.order}")
        out.print(f"nontrivial: {'yes' if result['nontrivial'] else 'no'}")
        out.print(f"staggered:  {'yes' if result['staggered'] else 'no'}")
        if w is not None:
            shown = ", ".join(f"{k}={v}" for k, v in _lengths_json(w).items())
            out.print(f"coherent:   {out.good('yes')} ({shown})")
        else:
            out.print(f"coherent:   {out.bad('no')} (incoherent)")
            for c in result.get("core", []):
                a, b = c["a"], c["b"]
                out.print(f"  cover <{a[0]},[{a[1]},{a[2]}]> by <{b[0]},[{b[1]},{b[2]}]>"
                          f"{' strict' if c['strict'] else ''} x{c['multiplier']}")
    return EXIT_OK if w is not None else EXIT_INCOHERENT


def cmd_successors(args, out) -> int:
    e = _load(args.path, out)
    if e is None:
        return EXIT_INVALID
    if not is_nontrivial(e):
        if args.json:
            out.print(envelope("successors", e, {"case": None, "successors": [],
                                                 "note": "no ENT applicable"}))
        else:
            out.print("no ENT applicable (trivial equation)")
        return EXIT_OK
    try:
        listing = successors(e)
    except IncoherentInput:
        print(f"{args.path}: input is incoherent", file=sys.stderr)
        return EXIT_INCOHERENT
    case = str(nielsen_case(e))
    rows = [(k, s, ok) for k, (s, ok) in enumerate(listing) if ok or not args.coherent_only]
    if args.json:
        out.print(envelope("successors", e, {
            "case": case,
            "successors": [{"index": k, "ewe": format_ewe(s), "coherent": ok} for k, s, ok in rows],
        }))
    else:
        out.print(f"{case}: {len(rows)} successor(s)")
        for k, s, ok in rows:
            flag = out.good("coherent") if ok else out.bad("incoherent")
            out.print(f"[{k}] {flag}  {s.equation}  |  {s.order}")
    return EXIT_OK


def cmd_cutgraph(args, out) -> int:
    e = _load(args.path, out)
    if e is None:
        return EXIT_INVALID
    g = cut_graph(e)
    if args.format == "json":
        out.print(envelope("cutgraph", e, {
            "vertices": [str(v) for v in g.vertices],
            "edges": [[str(a), str(c)] for a, c in g.sorted_edges()],
            "cyclic": is_cyclic(g),
        }))
    else:
        out.stream.write(cut_graph_dot(g))
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    e = _load(args.path, out)
    if e is None:
        return EXIT_INVALID
    budget = Budget(max_states=args.max_states, max_side_length=args.max_len)
    try:
        verdict = analyze(e, budget)
    except IncoherentInput:
        print(f"{args.path}: input is incoherent", file=sys.stderr)
        return EXIT_INCOHERENT
    if args.json:
        out.print(envelope("analyze", e, verdict.to_json()))
    else:
        color = {Status.TERMINATING: out.good, Status.NONTERMINATING: out.bad}.get(verdict.status, str)
        out.print(f"verdict: {color(verdict.status.value)}")
        cert = verdict.certificate.to_json()
        out.print(f"certificate: {cert.pop('kind')}")
        for k, v in cert.items():
            if k in ("states", "steps") and isinstance(v, list):
                out.print(f"  {k}:")
                for item in v:
                    text = item if isinstance(item, str) else item["ewe"]
                    out.print("    " + text.strip().replace("\n", "  "))
            else:
                out.print(f"  {k}: {v}")
    return {Status.TERMINATING: EXIT_OK, Status.NONTERMINATING: EXIT_NONTERMINATING,
            Status.UNKNOWN: EXIT_UNKNOWN}[verdict.status]


def cmd_run(args, out) -> int:
    e = _load(args.path, out)
    if e is None:
        return EXIT_INVALID
    failure = None
    try:
        steps = nonterminating_run(e, args.steps)
    except PreconditionFailed as exc:
        print(f"{args.path}: precondition failed: {exc}", file=sys.stderr)
        return EXIT_INCOHERENT
    except ConstructionFailed as exc:
        steps, failure = [], exc
    if args.json:
        result = {"steps": [{"ewe": format_ewe(s), **r.to_json()} for s, r in steps]}
        if failure:
            result["failure"] = {"step": failure.step, "reason": failure.reason}
        out.print(envelope("run", e, result))
    else:
        for k, (s, r) in enumerate(steps, start=1):
            checks = " ".join(f"{n}={'ok' if getattr(r, n) else 'FAIL'}"
                              for n in ("staggered", "coherent", "cyclic"))
            out.print(f"{k:>4} {r.rule:<26} {checks}  {s.equation} | {s.order}")
        if failure:
            out.print(out.bad(f"construction failed at step {failure.step}: {failure.reason}"))
    return EXIT_UNKNOWN if failure else EXIT_OK


def cmd_oracle(args, out) -> int:
    if args.oracle_cmd == "enumerate":
        spec = EnumerationSpec(args.max_total_length, args.max_variables)
        rows = [{"ewe": format_ewe(s), "coherent": ok} for s, ok in enumerate_ewes(spec)]
        digest = hashlib.sha256(f"{spec}".encode()).hexdigest()
        if args.json:
            out.print(envelope("oracle enumerate", None, {"count": len(rows), "ewes": rows}, digest))
        else:
            for r in rows:
                out.print(("+ " if r["coherent"] else "- ") + r["ewe"].strip().replace("\n", "  "))
            out.print(f"{len(rows)} equation(s)")
        return EXIT_OK
    e = _load(args.path, out)
    if e is None:
        return EXIT_INVALID
    if args.oracle_cmd == "orders":
        orders = enumerate_boundary_orders(e.u1, e.u2)
        if args.json:
            out.print(envelope("oracle orders", e, {"orders": [str(o) for o in orders]}))
        else:
            for o in orders:
                out.print(str(o))
        return EXIT_OK
    if args.oracle_cmd == "coherence":
        w = brute_coherence(e, args.max_len)
        if args.json:
            out.print(envelope("oracle coherence", e, {"max_len": args.max_len,
                                                       "witness": _lengths_json(w) if w else w}))
        else:
            out.print("no witness within bound" if w is None else
                      ", ".join(f"{k}={v}" for k, v in _lengths_json(w).items()))
        return EXIT_OK if w is not None else EXIT_INCOHERENT
    try:
        nielsen_case(e)
    except TrivialEquation:
        out.print("no ENT applicable (trivial equation)")
        return EXIT_OK
    found = oracle_successors(e)
    if args.json:
        out.print(envelope("oracle successors", e, {"successors": [format_ewe(s) for s in found]}))
    else:
        for s in found:
            out.print(f"{s.equation}  |  {s.order}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ewe", description="Extended word equations and termination of "
                                                        "extended Nielsen transformations.")
    p.add_argument("--version", action="version", version=f"ewe {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate a .ewe file and decide coherence")
    c.add_argument("path")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("successors", help="list extended Nielsen transformations")
    c.add_argument("path")
    c.add_argument("--coherent-only", action="store_true")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_successors)

    c = sub.add_parser("cutgraph", help="emit the cut graph")
    c.add_argument("path")
    c.add_argument("--format", choices=("dot", "json"), default="dot")
    c.set_defaults(func=cmd_cutgraph)

    c = sub.add_parser("analyze", help="termination verdict with certificate")
    c.add_argument("path")
    c.add_argument("--max-states", type=int, default=Budget.max_states)
    c.add_argument("--max-len", type=int, default=None,
                   help="max side length during exploration (default: 4x input length)")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_analyze)

    c = sub.add_parser("run", help="cycle-preserving run on a staggered cyclic input")
    c.add_argument("path")
    c.add_argument("--steps", type=int, default=10)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_run)

    c = sub.add_parser("oracle", help="brute-force reference computations")
    osub = c.add_subparsers(dest="oracle_cmd", required=True)
    o = osub.add_parser("orders", help="all boundary orders of the file's equation")
    o.add_argument("path")
    o.add_argument("--json", action="store_true")
    o = osub.add_parser("coherence", help="bounded brute-force coherence search")
    o.add_argument("path")
    o.add_argument("--max-len", type=int, default=8)
    o.add_argument("--json", action="store_true")
    o = osub.add_parser("successors", help="successors by filtering all interleavings")
    o.add_argument("path")
    o.add_argument("--json", action="store_true")
    o = osub.add_parser("enumerate", help="all equations within the bounds")
    o.add_argument("max_total_length", type=int)
    o.add_argument("max_variables", type=int)
    o.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_oracle)
    return p


def main(argv=None, stdout=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args, _Out(stdout))


if __name__ == "__main__":
    sys.exit(main())
