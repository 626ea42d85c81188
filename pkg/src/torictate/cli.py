"""Command-line surface: a JSON input document describing the stack and its
modules, one subcommand per pipeline, deterministic table or JSON output.

Exit codes: 0 success, 2 schema error, 3 precondition failure, 4 window too
small (including Cech stabilization failures), 5 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cohomology import (check_betti_bounds_weighted, cohomology_table_fast,
                         is_0_regular, is_deg_I_0_regular, oracle_table)
from .bgg import betti_table
from .diagonal import (build_F_prime_weighted, check_acyclicity,
                       check_H0_diagonal, hirzebruch1_report)
from .errors import (PreconditionError, SchemaError, VerificationError,
                     WindowTooSmall)
from .linalg import GF, QQ
from .smodule import Poly, Presentation, realize
from .tate import fm_transform, tate_weighted
from .toric import ToricStack, Window

EXIT_CODES = [
    (SchemaError, 2),
    (PreconditionError, 3),
    (WindowTooSmall, 4),
    (VerificationError, 5),
]


def parse_input(document):
    """Validate and load a job document: returns (stack, field, modules)."""
    if not isinstance(document, dict):
        raise SchemaError("input document must be a JSON object")

    def need(key, typ):
        if key not in document:
            raise SchemaError("missing required key %r" % key)
        v = document[key]
        if not isinstance(v, typ):
            raise SchemaError("key %r must be of type %s" % (key, typ.__name__))
        return v

    fielddoc = need("field", dict)
    if "prime" in fielddoc:
        field = GF(int(fielddoc["prime"]))
    elif fielddoc.get("rationals"):
        field = QQ()
    else:
        raise SchemaError("field must give a prime or rationals")
    r = need("cl_rank", int)
    variables = need("variables", list)
    degrees = []
    for k, v in enumerate(variables):
        if not isinstance(v, dict) or "degree" not in v:
            raise SchemaError("variables[%d] must be an object with a degree" % k)
        d = v["degree"]
        if not isinstance(d, list) or len(d) != r:
            raise SchemaError("variables[%d].degree must be a length-%d list" % (k, r))
        degrees.append(tuple(int(x) for x in d))
    irr = need("irrelevant", list)
    supports = []
    for k, s in enumerate(irr):
        if not isinstance(s, list) or not s:
            raise SchemaError("irrelevant[%d] must be a nonempty index list" % k)
        supports.append(set(int(i) for i in s))
    theta = need("theta", list)
    cover = document.get("cover")
    eff = document.get("effective_cone")
    pcs = []
    for k, pc in enumerate(document.get("primitive_collections", []) or []):
        if not isinstance(pc, dict) or "vars" not in pc or "deg_I" not in pc:
            raise SchemaError("primitive_collections[%d] needs vars and deg_I" % k)
        pcs.append((set(int(i) for i in pc["vars"]), [int(x) for x in pc["deg_I"]]))
    try:
        stack = ToricStack(r=r, var_degrees=degrees, irrelevant_supports=supports,
                           theta=[int(x) for x in theta],
                           cover=[set(int(i) for i in c) for c in cover] if cover else None,
                           eff_generators=[tuple(int(x) for x in g) for g in eff] if eff else None,
                           primitive_collections=pcs)
    except (ValueError, KeyError) as exc:
        raise SchemaError(str(exc))
    modules = {}
    for name, body in (document.get("modules", {}) or {}).items():
        if not isinstance(body, dict):
            raise SchemaError("modules[%r] must be an object" % name)
        gens = body.get("generators", [{"degree": [0] * r}])
        gen_degrees = []
        for k, g in enumerate(gens):
            d = g.get("degree")
            if not isinstance(d, list) or len(d) != r:
                raise SchemaError("modules[%r].generators[%d].degree malformed" % (name, k))
            gen_degrees.append(tuple(int(x) for x in d))
        rel_degrees = []
        entries = {}
        for j, rel in enumerate(body.get("relations", [])):
            d = rel.get("degree")
            if not isinstance(d, list) or len(d) != r:
                raise SchemaError("modules[%r].relations[%d].degree malformed" % (name, j))
            rel_degrees.append(tuple(int(x) for x in d))
            ent = rel.get("entries")
            if not isinstance(ent, list) or len(ent) != len(gen_degrees):
                raise SchemaError("modules[%r].relations[%d].entries needs one entry per generator" % (name, j))
            for i, terms in enumerate(ent):
                if not terms:
                    continue
                poly = Poly([(int(c), tuple(int(x) for x in e)) for c, e in terms])
                entries[(i, j)] = poly
        pres = Presentation(gen_degrees, rel_degrees, entries)
        try:
            pres.validate(stack)
        except ValueError as exc:
            raise SchemaError("modules[%r]: %s" % (name, exc))
        modules[name] = pres
    return stack, field, modules


def _module(stack, modules, name):
    if name == "S":
        return Presentation.free([(0,) * stack.r])
    if name not in modules:
        raise SchemaError("no module named %r in the document" % name)
    return modules[name]


def parse_window(text, r):
    parts = text.split(",")
    if len(parts) != r:
        raise SchemaError("window needs %d ranges, got %r" % (r, text))
    lo, hi = [], []
    for p in parts:
        try:
            a, b = p.split(":")
            lo.append(int(a))
            hi.append(int(b))
        except ValueError:
            raise SchemaError("bad window range %r (expected lo:hi)" % p)
    try:
        return Window(tuple(lo), tuple(hi))
    except ValueError as exc:
        raise SchemaError(str(exc))


def default_window(stack, pres):
    w = max(abs(stack.theta(stack.total_degree)), 1)
    reach = w
    for d in pres.gen_degrees + pres.rel_degrees:
        reach = max(reach, abs(stack.theta(d)))
    sums = stack.subset_sums()
    lo = []
    hi = []
    for k in range(stack.r):
        smax = max(s[k] for s in sums)
        smin = min(s[k] for s in sums)
        lo.append(smin - reach - 2)
        hi.append(smax + reach + 2)
    return Window(tuple(lo), tuple(hi))


def format_table(table, stack, window, fmt, kind="cohomology"):
    entries = sorted(((i, tuple(a), v) for (i, a), v in table.items() if v),
                     key=lambda t: (t[0], stack.theta(t[1]), t[1]))
    if fmt == "json":
        return json.dumps({"kind": kind,
                           "entries": [[i, list(a), int(v)] for i, a, v in entries]},
                          sort_keys=True)
    lines = []
    if stack.r == 1 and window is not None:
        degs = [a for a in range(window.lo[0], window.hi[0] + 1)]
        imax = max((i for i, _, _ in entries), default=0)
        header = "i\\a " + " ".join("%5d" % a for a in degs)
        lines.append(header)
        for i in range(imax + 1):
            row = ["%5s" % (table.get((i, (a,)), 0) or ".") for a in degs]
            lines.append(("%-3d " % i) + " ".join(row))
    else:
        for i, a, v in entries:
            lines.append("%d %s %d" % (i, ",".join(str(x) for x in a), v))
    return "\n".join(lines)


def read_table(text):
    """Parse the machine format back into a table dict (round trip)."""
    doc = json.loads(text)
    return {(i, tuple(a)): v for i, a, v in doc["entries"]}


def _looks_like_hirzebruch1(stack):
    return (stack.r == 2 and sorted(stack.var_degrees) ==
            sorted([(1, 0), (-1, 1), (1, 0), (0, 1)]))


def run(command, args, stack, field, modules):
    """Execute one subcommand; returns printable output."""
    pres = _module(stack, modules, args.module)
    window = parse_window(args.window, stack.r) if args.window else default_window(stack, pres)
    fmt = args.format
    if command == "cohomology":
        if stack.r == 1:
            table = cohomology_table_fast(pres, stack, window, field, d=args.truncate)
        else:
            table = fm_transform(pres, stack, window, field).table
        return format_table(table, stack, window, fmt)
    if command == "oracle":
        module = realize(pres, stack, window, field)
        table = oracle_table(module, stack, window.points())
        return format_table(table, stack, window, fmt)
    if command == "tate":
        if stack.r == 1:
            res = tate_weighted(pres, stack, window, field, d=args.truncate)
        else:
            res = fm_transform(pres, stack, window, field)
        counts = {}
        for tw in res.T.gens:
            counts[(tw.aux, tw.cl)] = counts.get((tw.aux, tw.cl), 0) + 1
        entries = sorted(counts.items(), key=lambda kv: (kv[0][0], stack.theta(kv[0][1]), kv[0][1]))
        if fmt == "json":
            return json.dumps({"kind": "tate-generators",
                               "entries": [[u, list(c), int(n)] for (u, c), n in entries]},
                              sort_keys=True)
        return "\n".join("omega_E(%s; %d)^%d" % (",".join(str(x) for x in c), u, n)
                         for (u, c), n in entries)
    if command == "betti":
        module = realize(pres, stack, window, field)
        table = betti_table(module)
        entries = sorted(((j, a, v) for (j, a), v in table.items() if v),
                         key=lambda t: (t[0], stack.theta(t[1]), t[1]))
        if fmt == "json":
            return json.dumps({"kind": "betti",
                               "entries": [[j, list(a), int(v)] for j, a, v in entries]},
                              sort_keys=True)
        return "\n".join("beta_%d at %s = %d" % (j, ",".join(str(x) for x in a), v)
                         for j, a, v in entries)
    if command == "diagonal":
        if stack.r == 1:
            cx = build_F_prime_weighted(stack, field, None, None)
            top = max(2, window.hi[0])
            bids = [((d,), (e,)) for d in range(0, top + 1) for e in range(0, top + 1)]
            lines = ["finite diagonal subcomplex on a weighted projective stack"]
            if args.verify:
                ok1 = cx.check_square_zero(bids)
                ok2 = check_acyclicity(cx, bids)
                ok3 = check_H0_diagonal(cx, bids)
                lines += ["square-zero: %s" % ok1, "acyclic in positive degrees: %s" % ok2,
                          "H0 matches the diagonal Hilbert function: %s" % ok3]
                if not (ok1 and ok2 and ok3):
                    raise VerificationError("diagonal checks failed")
            return "\n".join(lines)
        if _looks_like_hirzebruch1(stack):
            rep = hirzebruch1_report(field, 0, 3 if not args.verify else 4)
            lines = ["hard-coded finite diagonal resolution (Hirzebruch type 1)",
                     "square-zero: %s" % rep["square_zero"],
                     "acyclic in positive degrees: %s" % rep["acyclic_positive"],
                     "H0 matches the diagonal Hilbert function: %s" % rep["h0_hilbert"]]
            if args.verify and not all(rep[k] for k in ("square_zero", "acyclic_positive", "h0_hilbert")):
                raise VerificationError("diagonal checks failed")
            return "\n".join(lines)
        raise PreconditionError("finite diagonal subcomplexes are available for r = 1 and the Hirzebruch-1 model only")
    if command == "regularity":
        module = realize(pres, stack, window, field)
        lines = []
        if stack.r == 1:
            reg = is_0_regular(module, stack)
            lines.append("0-regular: %s" % reg)
            if reg:
                report = check_betti_bounds_weighted(module, stack)
                lines.append("betti bound violations: %d" % len(report.violations))
                for v in report.violations:
                    lines.append("  %s" % (v,))
        else:
            if not stack.primitive_collections:
                raise PreconditionError("no primitive collections in the document")
            degs = window.points()
            for pc in stack.primitive_collections:
                reg = is_deg_I_0_regular(module, stack, pc.vars, degs)
                lines.append("deg_I 0-regular for %s: %s" % (sorted(pc.vars), reg))
        return "\n".join(lines)
    if command == "verify":
        module = realize(pres, stack, window, field)
        if stack.r == 1:
            fast = cohomology_table_fast(pres, stack, window, field, d=args.truncate)
        else:
            fast = fm_transform(pres, stack, window, field).table
        from .toric import deg_sub

        sums = set(stack.subset_sums())
        safe = [a for a in window.points() if all(deg_sub(a, s) in window for s in sums)]
        if not safe:
            raise WindowTooSmall("the window has no safe degrees; enlarge it beyond the subset-sum reach")
        otab = oracle_table(module, stack, safe)
        bad = []
        imax = stack.nvars - stack.r
        for a in safe:
            for i in range(imax + 1):
                if fast.get((i, tuple(a)), 0) != otab.get((i, tuple(a)), 0):
                    bad.append((i, a))
        if bad:
            raise VerificationError("oracle mismatch at %s" % (bad[:5],))
        return "verified: exterior path agrees with the Cech oracle at %d safe degrees" % len(safe)
    raise SchemaError("unknown command %r" % command)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="torictate",
        description="Tate resolutions, sheaf cohomology, Betti tables and diagonal "
                    "resolutions on projective toric stacks, by exact linear algebra.")
    parser.add_argument("command",
                        choices=["cohomology", "tate", "betti", "diagonal", "regularity",
                                 "oracle", "verify"])
    parser.add_argument("input", help="JSON job document")
    parser.add_argument("--module", default="S", help="module name (default: the Cox ring S)")
    parser.add_argument("--window", default=None, help="degree window lo:hi[,lo:hi...]")
    parser.add_argument("--truncate", type=int, default=None, help="truncation degree override")
    parser.add_argument("--format", choices=["table", "json"], default="table")
    parser.add_argument("--prime", type=int, default=None, help="override the document's prime")
    parser.add_argument("--verify", action="store_true", help="run the verification checks")
    parser.add_argument("--threads", type=int, default=None,
                        help="accepted for compatibility; computations are pure and callers may parallelize")
    argv = list(sys.argv[1:] if argv is None else argv)
    # let "--window -8:8" through even though the value starts with a dash
    merged = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--window" and i + 1 < len(argv):
            merged.append("--window=" + argv[i + 1])
            i += 2
            continue
        merged.append(tok)
        i += 1
    args = parser.parse_args(merged)
    try:
        try:
            with open(args.input) as fh:
                document = json.load(fh)
        except OSError as exc:
            raise SchemaError("cannot read input: %s" % exc)
        except json.JSONDecodeError as exc:
            raise SchemaError("input is not valid JSON: %s" % exc)
        stack, field, modules = parse_input(document)
        if args.prime is not None:
            field = GF(args.prime)
        out = run(args.command, args, stack, field, modules)
        print(out)
        return 0
    except Exception as exc:
        for klass, code in EXIT_CODES:
            if isinstance(exc, klass):
                print("error: %s" % exc, file=sys.stderr)
                return code
        raise


if __name__ == "__main__":
    sys.exit(main())
