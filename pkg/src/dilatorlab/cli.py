"""Command-line front end.

Usage: ``dilatorlab VERB [flags]`` with verbs apply, cmp, descend, check,
diagrams, climax, grow and theory.  Output is JSON unless ``--table`` is
given.  Exit status: 0 ok, 1 user error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .cnf import CnfError, Ordinal
from .diagram import diag_enumerate
from .dilator import dil_check_axioms, dil_check_monotone, dil_trace_roundtrip
from .errors import BadSpec, BoundsMissing, DilatorLabError, InvariantError, UnknownVerb
from .linorder import Applied, Cnf, Finite, Omega, OmegaStar, Order, describe, lo_cmp, lo_descend_probe
from .pseudo import climax_probe, default_grid, grow_check
from .spec import Registry, load_spec, parse_json
from .theorylab import norm_pi11, s12_probe, s12_strictness

VERBS = ("apply", "cmp", "descend", "check", "diagrams", "climax", "grow", "theory")
DEFAULT_DEPTH = 12
DEFAULT_WIDTH = 200


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadSpec(message, "argv")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dilatorlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", parser_class=_Parser)

    def common(sp, bounds=False):
        sp.add_argument("--spec", help="JSON spec file with named orders, dilators and theories")
        sp.add_argument("--table", action="store_true", help="human-readable output")
        if bounds:
            sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help=f"descent length (default {DEFAULT_DEPTH})")
            sp.add_argument("--width", type=int, default=DEFAULT_WIDTH, help=f"search window (default {DEFAULT_WIDTH})")

    sp = sub.add_parser("apply", help="list the first elements of D(X) in order")
    common(sp)
    sp.add_argument("--dilator", "--expr", dest="dilator", required=True)
    sp.add_argument("--order", required=True)
    sp.add_argument("--list", type=int, default=10)

    sp = sub.add_parser("cmp", help="compare two instances in D(X)")
    common(sp)
    sp.add_argument("--dilator", "--expr", dest="dilator", required=True)
    sp.add_argument("--order", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)

    sp = sub.add_parser("descend", help="search for a descending sequence in D(X)")
    common(sp, bounds=True)
    sp.add_argument("--dilator", "--expr", dest="dilator", required=True)
    sp.add_argument("--order", required=True)

    sp = sub.add_parser("check", help="axiom and monotonicity checks")
    common(sp)
    sp.add_argument("--dilator", "--expr", dest="dilator", required=True)
    sp.add_argument("--window", type=int, default=50)
    sp.add_argument("--cap", type=int, default=3)
    sp.add_argument("--trace", action="store_true", help="also run the trace round trip (finite D)")

    sp = sub.add_parser("diagrams", help="enumerate arity diagrams")
    common(sp)
    sp.add_argument("--left", type=int, required=True)
    sp.add_argument("--right", type=int, required=True)

    sp = sub.add_parser("climax", help="climax probe over a grid")
    common(sp, bounds=True)
    sp.add_argument("--dilator", "--expr", dest="dilator", required=True)
    sp.add_argument("--grid", action="append", help="grid items, e.g. finite:0..5, omega, cnf:[[2,1]]")

    sp = sub.add_parser("grow", help="check the Grow relation pointwise")
    common(sp, bounds=True)
    sp.add_argument("--d0", required=True)
    sp.add_argument("--d1", required=True)
    sp.add_argument("--grid", action="append")

    sp = sub.add_parser("theory", help="probe a toy theory")
    common(sp, bounds=True)
    sp.add_argument("--theory", required=True, help="theory name from --spec, or theory JSON")
    sp.add_argument("--grid", action="append")
    sp.add_argument("--strict", action="store_true", help="also add integral certificates and compare")
    return p


# ---------------------------------------------------------------------------
# Argument decoding


def _json_or_name(text: str):
    t = text.strip()
    if t[:1] in "{[\"" or t[:1].isdigit():
        return parse_json(t, "argument")
    return t


def _order(reg: Registry, text: str) -> Order:
    t = text.strip()
    low = t.lower()
    if low == "omega":
        return Omega()
    if low in ("omegastar", "omega*"):
        return OmegaStar()
    if low.startswith("finite:"):
        try:
            return Finite(int(t[7:]))
        except ValueError:
            raise BadSpec(f"bad finite order {t!r}", "argv") from None
    if low.startswith("cnf:"):
        try:
            return Cnf(Ordinal.from_json(parse_json(t[4:], "cnf term")))
        except CnfError as exc:
            raise BadSpec(str(exc), "argv") from None
    return reg.order(_json_or_name(t), "argv")


def _grid(reg: Registry, items: Optional[Sequence[str]]) -> list[Order]:
    if not items:
        return default_grid()
    out: list[Order] = []
    for item in items:
        t = item.strip()
        if t == "default":
            out.extend(default_grid())
        elif t.lower().startswith("finite:") and ".." in t:
            lo, hi = t[7:].split("..", 1)
            try:
                out.extend(Finite(i) for i in range(int(lo), int(hi) + 1))
            except ValueError:
                raise BadSpec(f"bad grid range {t!r}", "argv") from None
        else:
            out.append(_order(reg, t))
    return out


def _bounds(args):
    for name in ("depth", "width"):
        v = getattr(args, name, None)
        if v is None or v < 1:
            raise BoundsMissing(f"--{name} must be a positive integer")
    return {"depth": args.depth, "width": args.width}


def _emit(obj, table_lines: Optional[list[str]], as_table: bool, out):
    if as_table and table_lines is not None:
        out.write("\n".join(table_lines) + "\n")
    else:
        out.write(json.dumps(obj, indent=2, default=str) + "\n")


def _point(p: Order) -> str:
    return describe(p)


# ---------------------------------------------------------------------------
# Verbs


def _run(args, out) -> None:
    reg = load_spec(args.spec) if getattr(args, "spec", None) else Registry()
    verb = args.verb
    if verb == "diagrams":
        ds = diag_enumerate(args.left, args.right)
        obj = {"left": args.left, "right": args.right, "count": len(ds), "diagrams": [d.to_json() for d in ds]}
        lines = [f"{len(ds)} diagrams ({args.left}, {args.right})"] + [str(d) for d in ds]
        _emit(obj, lines, args.table, out)
        return

    if verb == "apply":
        D = reg.dilator(_json_or_name(args.dilator), "argv.dilator")
        X = Applied(D, _order(reg, args.order))
        xs = X.sort(X.prefix(args.list))
        obj = {"order": X.to_json(), "elements": [X.elem_to_json(x) for x in xs]}
        _emit(obj, [f"{i}: {x.term!r}{list(x.args)}" for i, x in enumerate(xs)], args.table, out)
        return

    if verb == "cmp":
        D = reg.dilator(_json_or_name(args.dilator), "argv.dilator")
        X = Applied(D, _order(reg, args.order))
        x = X.elem_from_json(_json_or_name(args.x))
        y = X.elem_from_json(_json_or_name(args.y))
        c = lo_cmp(X, x, y)
        _emit({"cmp": c.name}, [c.name], args.table, out)
        return

    if verb == "descend":
        b = _bounds(args)
        D = reg.dilator(_json_or_name(args.dilator), "argv.dilator")
        X = Applied(D, _order(reg, args.order))
        w, basis = lo_descend_probe(X, b["depth"], b["width"])
        obj = {
            "order": X.to_json(),
            "bounds": b,
            "verdict": "witness" if w else "none",
            "basis": basis,
            "witness": w.to_json() if w else [],
        }
        lines = [f"{describe(X)}: {obj['verdict']} ({basis}; depth {b['depth']}, width {b['width']})"]
        if w:
            lines += [f"  {x.term!r}{list(x.args)}" for x in w.elements]
        _emit(obj, lines, args.table, out)
        return

    if verb == "check":
        D = reg.dilator(_json_or_name(args.dilator), "argv.dilator")
        reports = [dil_check_axioms(D, args.window, args.cap)]
        if reports[0].ok:
            reports.append(dil_check_monotone(D, args.window, args.cap))
        if args.trace:
            reports.append(dil_trace_roundtrip(D, args.cap))
        obj = {"dilator": D.name, "bounds": {"window": args.window, "cap": args.cap}, "reports": [r.to_json() for r in reports]}
        lines = [f"{r.check}: {r.verdict}" + (f"  {r.counterexample}" if r.counterexample else "") for r in reports]
        _emit(obj, lines, args.table, out)
        return

    if verb == "climax":
        b = _bounds(args)
        D = reg.dilator(_json_or_name(args.dilator), "argv.dilator")
        rep = climax_probe(D, _grid(reg, args.grid), b["depth"], b["width"])
        lines = [f"{_point(v.point)}: {'witness' if v.descends else 'none'} ({v.basis})" for v in rep.verdicts]
        lines.append(f"inferred climax: {_point(rep.inferred_climax) if rep.inferred_climax else 'none'}"
                     f"{' (exact)' if rep.exact else ''}; depth {b['depth']}, width {b['width']}")
        _emit(rep.to_json(), lines, args.table, out)
        return

    if verb == "grow":
        b = _bounds(args)
        D0 = reg.dilator(_json_or_name(args.d0), "argv.d0")
        D1 = reg.dilator(_json_or_name(args.d1), "argv.d1")
        rep = grow_check(D0, D1, _grid(reg, args.grid), b["depth"], b["width"])
        lines = [f"{_point(p)}: d0 {'witness' if a else 'none'}, d1 {'witness' if c else 'none'}" for p, a, c in rep.points]
        lines.append("consistent" if rep.consistent else f"counterexample at {_point(rep.counterexample)}")
        _emit(rep.to_json(), lines, args.table, out)
        return

    if verb == "theory":
        b = _bounds(args)
        T = reg.theory(_json_or_name(args.theory), "argv.theory")
        grid = _grid(reg, args.grid)
        norm = norm_pi11(T)
        if args.strict:
            st = s12_strictness(T, grid, b["depth"], b["width"])
            rep, obj = st.before, st.to_json()
        else:
            rep = s12_probe(T, grid, b["depth"], b["width"])
            obj = rep.to_json()
        t = norm.order_type()
        obj["pi11_norm"] = {"order": norm.to_json(), "type": None if t is None else t.to_json()}
        obj["bounds"] = b
        lines = [
            f"theory {T.name}",
            f"s12 marker: {_point(rep.marker) if rep.marker else 'none'}",
            f"largest certificate climax: {rep.certificate_max}",
            f"pi11 norm type: {t}",
        ]
        if args.strict:
            lines.append(f"with integrals: {_point(st.after.marker) if st.after.marker else 'none'}"
                         f" (strictly larger: {st.strictly_larger})")
        _emit(obj, lines, args.table, out)
        return
    raise UnknownVerb(verb)


def cli_run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(argv)
    try:
        if not argv or argv[0] in ("-h", "--help"):
            _build_parser().print_help(out)
            return 0 if argv else 1
        if argv[0] not in VERBS:
            raise UnknownVerb(f"unknown verb {argv[0]!r}; expected one of {', '.join(VERBS)}")
        args = _build_parser().parse_args(argv)
        _run(args, out)
        return 0
    except DilatorLabError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except InvariantError as exc:
        err.write(f"internal error: {exc}\n")
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    return cli_run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
