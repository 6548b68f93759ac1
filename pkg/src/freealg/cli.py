"""Command-line driver.

    freealg [--field q|fp:P] [--rank N] [--seed S] [--cap D] [--json] VERB ...

Every verb prints one result document (JSON with --json, text otherwise) and
exits 0, or reports a structured error and exits 1.  Polynomial arguments
are expressions such as "2*x1*x2^2 + 3"; an argument "@file" reads the
expression from a file, or a JSON term map when the file ends in .json.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import acceptance
from .arithmetization import decode_tuple, tuple_code
from .basis import is_basis, rank_witness_check, recheck_verdict
from .bigpowers import choose_marker, decode_partial_sums, decode_seq, decode_word_trace, encode_seq, marker
from .centralizers import centralizer_window, expand_in_generator, map_centralizer
from .errors import FreeAlgError
from .folog import NAMES, PolyRing, catalog, evaluate, format_formula, parse_formula, ring_mod
from .interp import compose, induced_structure, load_scheme, translate, verify_translation
from .ncpoly import NcPoly, aug_power_decompose, factor_divides, parse_poly
from .scalars import FieldSpec
from .superstructure import TuplePair, decode_pair, encode_poly, pair_equiv, red

log = logging.getLogger("freealg")

SCHEMA_VERSION = 1


class UsageError(FreeAlgError):
    pass


def parse_expression(text: str, rank: int, field: FieldSpec) -> NcPoly:
    return parse_poly(text, field, rank)


def _read_arg(text: str) -> str:
    if text.startswith("@"):
        return Path(text[1:]).read_text()
    return text


def _poly(args, text) -> NcPoly:
    if text.startswith("@") and text.endswith(".json"):
        return NcPoly.from_json(json.loads(_read_arg(text)), args.spec, args.rank)
    return parse_expression(_read_arg(text), args.rank, args.spec)


def _poly_list(args, text, sep=",") -> list[NcPoly]:
    return [_poly(args, part) for part in _read_arg(text).split(sep) if part.strip()]


# -- verbs --------------------------------------------------------------------------

def cmd_poly(args):
    f = _poly(args, args.a)
    if args.op == "norm":
        return {"result": str(f), "degree": f.degree, "terms": f.to_json()}
    if args.op == "pow":
        if args.b is None or not args.b.isdigit():
            raise UsageError("pow takes a natural exponent")
        return {"result": str(f ** int(args.b))}
    if args.b is None:
        raise UsageError(f"{args.op} takes two operands")
    g = _poly(args, args.b)
    if args.op == "add":
        return {"result": str(f + g)}
    if args.op == "sub":
        return {"result": str(f - g)}
    if args.op == "mul":
        return {"result": str(f * g)}
    if args.op == "divides":
        found = factor_divides(f, g)
        out = {"result": found is not None}
        if found is not None:
            out["left"], out["right"] = str(found[0]), str(found[1])
        return out
    if args.op == "width":
        n = int(args.b)
        return {"result": [[str(x) for x in fac] for fac in aug_power_decompose(f, n)]}
    raise UsageError(f"unknown poly operation {args.op!r}")


def cmd_encode(args):
    if args.tuple is not None:
        s = [int(x) for x in args.tuple.split(",") if x.strip()]
        return {"code": tuple_code(s).code}
    f = _poly(args, args.expr)
    q = encode_poly(f)
    return {"pair": q.to_json(), "text": str(q)}


def cmd_decode(args):
    if args.code is not None:
        return {"tuple": list(decode_tuple(int(args.code)))}
    doc = json.loads(_read_arg(args.pair))
    q = TuplePair.from_json(doc, args.spec)
    out = {"result": str(decode_pair(q, args.rank)), "reduced": red(q).to_json()}
    if args.other is not None:
        q2 = TuplePair.from_json(json.loads(_read_arg(args.other)), args.spec)
        out["equivalent"] = pair_equiv(q, q2)
    return out


def cmd_bigpowers(args):
    if args.op == "marker":
        mk = marker(int(args.arg))
        return {"m": mk.m, "word": list(mk.word), "poly": str(mk.poly(args.spec, max(2, args.rank)))}
    if args.op == "encode":
        fs = _poly_list(args, args.arg, sep=";")
        mk = marker(args.marker) if args.marker else choose_marker(fs)
        return {"result": str(encode_seq(fs, args.e, mk)), "marker": mk.m, "e": args.e}
    if args.op == "decode":
        if not args.marker:
            raise UsageError("decode needs --marker")
        f = _poly(args, args.arg)
        return {"factors": [str(g) for g in decode_seq(f, marker(args.marker), args.e)]}
    if args.op == "trace":
        t, block = decode_word_trace(_poly(args, args.arg), args.e)
        return {"t": list(t), "block": str(block)}
    if args.op == "sums":
        s, f = decode_partial_sums(_poly(args, args.arg), args.e)
        return {"s": [list(w) for w in s], "f": str(f)}
    raise UsageError(f"unknown bigpowers operation {args.op!r}")


def cmd_centralizer(args):
    P = _poly(args, args.P)
    d = args.cap if args.cap is not None else P.degree
    if args.map is not None:
        Qp, f = (_poly(args, x) for x in args.map)
        return {"result": str(map_centralizer(P, Qp, f, d))}
    W = centralizer_window(P, d)
    out = W.to_json()
    if args.expand is not None:
        out["coefficients"] = [str(c) for c in expand_in_generator(_poly(args, args.expand), W)]
    return out


def cmd_basis(args):
    V = _poly_list(args, args.V)
    if args.op == "witness":
        d = args.cap if args.cap is not None else 4
        return {k: r.to_json() for k, r in rank_witness_check(V, d).items()}
    v = is_basis(V, cap=args.cap if args.cap is not None else 8)
    out = v.to_json()
    out["rechecked"] = recheck_verdict(V, v)
    return out


def _values(args, ring):
    vals = {}
    for item in args.set or []:
        if "=" not in item:
            raise UsageError(f"--set expects name=expr, got {item!r}")
        k, expr = item.split("=", 1)
        vals[k.strip()] = ring.literal(_read_arg(expr.strip()))
    return vals


def cmd_formula(args):
    if args.op == "list":
        return {"names": list(NAMES)}
    ring = PolyRing(args.spec, args.rank, slice_degree=args.slice)
    shape = {}
    for item in args.shape or []:
        k, val = item.split("=", 1)
        shape[k] = val if not val.lstrip("-").isdigit() else int(val)
    if args.target in NAMES:
        entry = catalog(args.target, **shape)
        if args.op == "show":
            return {"name": entry.name, "free": list(entry.free), "formula": format_formula(entry.formula)}
        return {"value": str(entry.evaluate(ring, **_values(args, ring)))}
    phi = parse_formula(_read_arg(args.target), constants=ring.signature.consts)
    if args.op == "show":
        return {"formula": format_formula(phi)}
    return {"value": str(evaluate(ring, phi, _values(args, ring)))}


def _target(args):
    return ring_mod(args.mod)


def cmd_interp(args):
    scheme = load_scheme(args.scheme)
    if args.inner is not None:
        scheme = compose(scheme, load_scheme(args.inner))
    if args.op == "show":
        return scheme.to_json()
    if args.op == "quotient":
        S = induced_structure(scheme, _target(args))
        sort = S.default_sort
        return {"size": S.size(), "classes": [[list(t) for t in c] for c in S.meta["classes"]],
                "ops": {k: [[list(a), r] for a, r in sorted(tab.items())] for k, (_, _, tab) in S.ops.items()},
                "consts": {k: v for k, (_, v) in S.consts.items()}, "sort": sort}
    if args.formula is None:
        raise UsageError(f"interp {args.op} needs a formula")
    phi = parse_formula(_read_arg(args.formula), constants=scheme.source_consts)
    if args.op == "translate":
        return {"formula": format_formula(translate(scheme, phi))}
    if args.op == "verify":
        return verify_translation(scheme, _target(args), phi).to_json()
    raise UsageError(f"unknown interp operation {args.op!r}")


def cmd_selftest(args):
    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = []
    for r in acceptance.run_all(seed=args.seed, quick=args.quick, only=only):
        print(r.line(), file=sys.stderr)
        results.append(r.to_json())
    failed = sum(not r["passed"] for r in results)
    return {"criteria": results, "passed": len(results) - failed, "failed": failed}


VERBS = {
    "poly": cmd_poly, "encode": cmd_encode, "decode": cmd_decode, "bigpowers": cmd_bigpowers,
    "centralizer": cmd_centralizer, "basis": cmd_basis, "formula": cmd_formula,
    "interp": cmd_interp, "selftest": cmd_selftest,
}


def _global_flags(ap, suppress=False):
    def dflt(x):
        return argparse.SUPPRESS if suppress else x

    ap.add_argument("--field", default=dflt("q"), help="q or fp:<p> (default q)")
    ap.add_argument("--rank", type=int, default=dflt(2), help="number of generators (default 2)")
    ap.add_argument("--seed", type=int, default=dflt(0))
    ap.add_argument("--cap", type=int, default=dflt(None), help="degree cap or window degree")
    ap.add_argument("--json", action="store_true", default=dflt(False), help="emit a JSON document")
    ap.add_argument("-v", "--verbose", action="store_true", default=dflt(False))


def build_parser() -> argparse.ArgumentParser:
    """Global flags are accepted before or after the verb."""
    ap = argparse.ArgumentParser(prog="freealg", description="Exact free-algebra workbench.")
    _global_flags(ap)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("poly", parents=[common], help="polynomial arithmetic")
    p.add_argument("op", choices=["norm", "add", "sub", "mul", "pow", "divides", "width"])
    p.add_argument("a")
    p.add_argument("b", nargs="?")

    p = sub.add_parser("encode", parents=[common], help="tuple-pair code of a polynomial, or a tuple code")
    p.add_argument("expr", nargs="?")
    p.add_argument("--tuple", help="comma-separated naturals to code as one natural")

    p = sub.add_parser("decode", parents=[common], help="polynomial of a tuple pair, or the tuple of a code")
    p.add_argument("pair", nargs="?", help='JSON {"coeffs": [...], "mons": [[...], ...]}')
    p.add_argument("--other", help="second pair: also report equivalence")
    p.add_argument("--code", help="natural number to decode as a tuple")

    p = sub.add_parser("bigpowers", parents=[common], help="marker codecs")
    p.add_argument("op", choices=["marker", "encode", "decode", "trace", "sums"])
    p.add_argument("arg")
    p.add_argument("--marker", type=int, default=0, help="marker index m")
    p.add_argument("-e", type=int, default=3, help="base exponent (default 3)")

    p = sub.add_parser("centralizer", parents=[common], help="centralizer window of P")
    p.add_argument("P")
    p.add_argument("--expand", help="express this element in powers of the generator")
    p.add_argument("--map", nargs=2, metavar=("Q", "F"), help="transport F from C(P) to C(Q)")

    p = sub.add_parser("basis", parents=[common], help="free-basis decision")
    p.add_argument("op", choices=["check", "witness"])
    p.add_argument("V", help='comma-separated elements, e.g. "x1+x2^2, x2"')

    p = sub.add_parser("formula", parents=[common], help="catalog and formula evaluation")
    p.add_argument("op", choices=["eval", "show", "list"])
    p.add_argument("target", nargs="?", default="", help="catalog name or S-expression")
    p.add_argument("--set", action="append", help="name=expr for a free variable")
    p.add_argument("--shape", action="append", help="catalog parameter, e.g. m=2")
    p.add_argument("--slice", type=int, default=None, help="quantify over degree <= this (prime fields)")

    p = sub.add_parser("interp", parents=[common], help="interpretation schemes")
    p.add_argument("op", choices=["show", "translate", "quotient", "verify"])
    p.add_argument("scheme", help="shipped fixture name or path to a scheme JSON")
    p.add_argument("formula", nargs="?")
    p.add_argument("--inner", help="compose with this scheme (interpreting the target)")
    p.add_argument("--mod", type=int, default=4, help="target ring Z/mod (default 4)")

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance battery")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return ap


def _text(doc, indent=0) -> str:
    """Indented rendering of a result document; nested lists print as JSON."""
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        for k, val in doc.items():
            if isinstance(val, dict) and val or isinstance(val, list) and val and not _flat(val):
                lines.append(f"{pad}{k}:")
                lines.append(_text(val, indent + 1))
            elif isinstance(val, list):
                lines.append(f"{pad}{k}: {json.dumps(val)}")
            else:
                lines.append(f"{pad}{k}: {val}")
    else:
        for x in doc:
            if isinstance(x, dict):
                lines.append(f"{pad}-")
                lines.append(_text(x, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(x) if isinstance(x, list) else x}")
    return "\n".join(lines)


def _flat(xs) -> bool:
    return all(not isinstance(x, dict) for x in xs) and len(json.dumps(xs)) <= 100


def run(argv=None) -> tuple[dict, int, bool]:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    doc = {"v": SCHEMA_VERSION, "verb": args.verb}
    try:
        args.spec = FieldSpec.from_string(args.field)
        if args.rank < 1:
            raise UsageError("rank must be positive")
        random.seed(args.seed)
        doc["ok"] = True
        doc.update(VERBS[args.verb](args))
        if doc.get("failed"):
            doc["ok"] = False
            doc["error"] = {"code": "SelftestFailed", "message": f"{doc['failed']} criteria failed"}
        code = 0 if doc["ok"] else 1
    except FreeAlgError as exc:
        doc.update(ok=False, error={"code": exc.code, "message": str(exc)})
        code = 1
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        doc.update(ok=False, error={"code": type(exc).__name__, "message": str(exc)})
        code = 1
    return doc, code, args.json


def main(argv=None) -> int:
    doc, code, as_json = run(argv)
    if as_json:
        print(json.dumps(doc, sort_keys=False))
    else:
        body = {k: val for k, val in doc.items() if k not in ("v", "verb", "ok", "error")}
        if body:
            print(_text(body))
    if not doc.get("ok"):
        print(f"error [{doc['error']['code']}]: {doc['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
