"""Command-line front end: ``ringconv analyze|verify|simulate|parse <file>``.

Exit codes: 0 success, 1 parse error, 2 analysis error or failed claim.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

from . import __version__
from .errors import CertificateMismatch, ParseError, RingConvError
from .laurent import RationalFn, Weight, classify_weight, encode_stream, window_weight
from .matrix import PolyMatrix, delta_p
from .pstructure import spans_equal, validate_p_encoder
from .ring_encoder import CodeSpec, analyze, is_catastrophic_ring
from .textio import format_document, parse_input, parse_poly_expr, parse_rational

SCHEMA = 1


def _mat(G):
    return [[str(e) for e in r] for r in G.rows] if G is not None else None


def _rat(f):
    return str(f)


def _codes(doc):
    """(name, CodeSpec) pairs: every decomposition, then every matrix that no
    decomposition uses, sorted by name."""
    used = set()
    out = []
    for dec in doc.decompositions:
        comps = [doc.matrices[n] if n is not None else None for n in dec.components]
        used.update(n for n in dec.components if n is not None)
        out.append((dec.name, CodeSpec.from_components(comps, doc.ctx)))
    for name, G in doc.matrices.items():
        if name not in used:
            out.append((name, CodeSpec.from_matrix(G)))
    return sorted(out, key=lambda t: t[0])


def _torsion_json(w):
    if w is None:
        return None
    return {
        "divisor": str(w.Q),
        "codeword": [str(e) for e in w.codeword],
        "digit_inputs": [_rat(f) for f in w.input_rationals()],
    }


def report_entry(name, code, synthesize, witness):
    rep = analyze(code, synthesize=synthesize, witness=witness)
    ent = {
        "name": name,
        "ring": f"Z({rep.ring[0]}^{rep.ring[1]})",
        "presentation": "free" if not code.is_decomposed else "decomposed",
        "free": rep.is_free,
        "delta_p": str(rep.delta_p) if rep.delta_p is not None else None,
        "delta_p_code": str(rep.delta_p_code) if rep.delta_p_code is not None else None,
        "catastrophic": rep.is_catastrophic,
        "code_catastrophic": rep.code_catastrophic,
        "ridm_intdeg": rep.ridm_intdeg,
    }
    if "ridm" in rep.logs:
        ent["ridm_log"] = rep.logs["ridm"].describe()
    if witness:
        if rep.witness is not None:
            u, y = rep.witness
            ent["witness"] = {"input": [_rat(f) for f in u], "output": [str(e) for e in y]}
        else:
            ent["witness"] = None
    if synthesize:
        ent["minimal_p_encoder"] = _mat(rep.minimal_p_encoder)
        ent["construction"] = _mat(rep.construction)
        ent["construction_catastrophe"] = _torsion_json(rep.construction_catastrophe)
        ent["repairs"] = [_torsion_json(w) for w in rep.repairs]
        ent["validation"] = rep.validation.to_json() if rep.validation else None
        log = rep.logs.get("reduction")
        ent["reduction_log"] = log.describe() if log is not None else []
    return ent


def _provenance(text, args):
    opts = {k: v for k, v in sorted(vars(args).items()) if k not in ("file", "func", "out")}
    return {
        "input_sha256": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "version": __version__,
        "options": opts,
    }


def _emit(obj, args, text_lines=None):
    if args.format == "text" and text_lines is not None:
        out = "\n".join(text_lines) + "\n"
    else:
        out = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _text_report(results):
    lines = []
    for e in results:
        lines.append(f"== {e['name']} over {e['ring']} ({e['presentation']})")
        lines.append(f"Delta_p: {e['delta_p']}")
        lines.append(f"Delta_p of the code: {e['delta_p_code']}")
        lines.append(f"catastrophic: {str(e['catastrophic']).lower()}")
        if e.get("witness"):
            lines.append("witness input: (" + ", ".join(e["witness"]["input"]) + ")")
            lines.append("witness output: (" + ", ".join(e["witness"]["output"]) + ")")
        if e.get("minimal_p_encoder"):
            lines.append("minimal p-encoder:")
            lines.extend("  [" + ", ".join(r) + "]" for r in e["minimal_p_encoder"])
            lines.append("validation: " + json.dumps(e["validation"]))
    return lines


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_parse(args):
    text = _read(args.file)
    doc = parse_input(text)
    obj = {
        "schema": SCHEMA,
        "provenance": _provenance(text, args),
        "ring": f"Z({doc.ctx.p}^{doc.ctx.r})",
        "matrices": {k: _mat(v) for k, v in doc.matrices.items()},
        "decompositions": {d.name: d.components for d in doc.decompositions},
        "directives": doc.directives,
    }
    _emit(obj, args, format_document(doc).splitlines())
    return 0


def cmd_analyze(args):
    text = _read(args.file)
    doc = parse_input(text)
    results = [report_entry(n, c, args.synthesize, args.witness) for n, c in _codes(doc)]
    obj = {"schema": SCHEMA, "provenance": _provenance(text, args), "results": results}
    _emit(obj, args, _text_report(results))
    return 0


# ----------------------------------------------------------------------------
# simulate


def _stream_summary(G, inputs, horizon):
    rows = {}
    for h in (horizon // 2, horizon):
        ins, outs = encode_stream(inputs, G, h)
        rows[h] = ([window_weight(w) for w in ins], [window_weight(w) for w in outs])
    h1, h2 = horizon // 2, horizon
    verdict = lambda a, b: "stabilized" if sum(a) == sum(b) else "growing"  # noqa: E731
    return {
        "horizons": [h1, h2],
        "input_weights": {str(h1): rows[h1][0], str(h2): rows[h2][0]},
        "output_weights": {str(h1): rows[h1][1], str(h2): rows[h2][1]},
        "input_verdict": verdict(rows[h1][0], rows[h2][0]),
        "output_verdict": verdict(rows[h1][1], rows[h2][1]),
    }


def _pick_matrix(doc, name):
    if name is None:
        return next(iter(doc.matrices.items()))
    if name not in doc.matrices:
        raise RingConvError(f"no matrix named {name!r}")
    return name, doc.matrices[name]


def cmd_simulate(args):
    text = _read(args.file)
    doc = parse_input(text)
    name, G = _pick_matrix(doc, args.matrix)
    horizon = args.horizon or doc.directives.get("horizon", 64)
    inputs = [parse_rational(s.strip(), doc.ctx) for s in _split_top(args.input)]
    if len(inputs) != G.nrows:
        raise RingConvError(f"{len(inputs)} inputs for a matrix with {G.nrows} rows")
    if args.p_input:
        ins, _ = encode_stream(inputs, G, horizon)
        if any(c >= doc.ctx.p for w in ins for c in w.coeffs):
            raise RingConvError("input coefficients leave the digit set {0..p-1}")
    summary = _stream_summary(G, inputs, horizon)
    obj = {"schema": SCHEMA, "provenance": _provenance(text, args), "matrix": name,
           "inputs": [_rat(f) for f in inputs], **summary}
    lines = [
        f"matrix {name}, horizons {summary['horizons']}",
        f"input weights {summary['input_weights']} ({summary['input_verdict']})",
        f"output weights {summary['output_weights']} ({summary['output_verdict']})",
    ]
    _emit(obj, args, lines)
    return 0


def _split_top(s):
    """Split on commas outside parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p for p in parts if p.strip()]


# ----------------------------------------------------------------------------
# verify


def _scaled(doc, name, scale):
    if name not in doc.matrices:
        raise CertificateMismatch(f"unknown matrix {name!r}")
    G = doc.matrices[name]
    return G.scale(scale) if scale != 1 else G


def _check_combination(v, coeffs, rows, ctx):
    if len(coeffs) != len(rows):
        return False
    cs = [parse_rational(c, ctx) for c in coeffs]
    for j in range(len(v)):
        acc = RationalFn.zero(ctx)
        for c, r in zip(cs, rows):
            acc = acc + c * r[j]
        if acc != RationalFn.from_poly(v[j]):
            return False
    return True


def check_claim(doc, claim, degree_bound=None):
    """Returns None when the claim holds, else a message."""
    ctx = doc.ctx
    kind = claim.get("kind")
    if kind == "span_equal":
        s = int(claim.get("scale", 1))
        A = _scaled(doc, claim["left"], s)
        B = _scaled(doc, claim["right"], s)
        cert = claim.get("certificate")
        if cert is not None:
            for v, cs in zip(A.rows, cert.get("forward", [])):
                if not _check_combination(v, cs, B.rows, ctx):
                    return "forward certificate does not reproduce a row"
            for v, cs in zip(B.rows, cert.get("backward", [])):
                if not _check_combination(v, cs, A.rows, ctx):
                    return "backward certificate does not reproduce a row"
            if len(cert.get("forward", [])) != A.nrows or len(cert.get("backward", [])) != B.nrows:
                return "certificate does not cover every row"
            return None
        return None if spans_equal(A, B, degree_bound) is not None else "no membership found"
    if kind == "witness":
        G = _scaled(doc, claim["matrix"], 1)
        u = [parse_rational(s, ctx) for s in claim["input"]]
        want = [parse_poly_expr(s, ctx) for s in claim["output"]]
        if len(u) != G.nrows or len(want) != G.ncols:
            return "dimension mismatch"
        for j in range(G.ncols):
            acc = RationalFn.zero(ctx)
            for i in range(G.nrows):
                acc = acc + u[i] * G[i, j]
            if acc != RationalFn.from_poly(want[j]):
                return f"output coordinate {j + 1} differs"
        if all(classify_weight(f) is Weight.FINITE for f in u):
            return "input has finite weight"
        sim = _stream_summary(G, u, int(claim.get("horizon", 128)))
        if sim["output_verdict"] != "stabilized" or sim["input_verdict"] != "growing":
            return "stream simulation disagrees"
        return None
    if kind == "delta_p":
        G = _scaled(doc, claim["matrix"], 1)
        got = delta_p(G)
        return None if got == parse_poly_expr(claim["value"], ctx.residue_field()) else f"Delta_p is {got}"
    if kind == "catastrophic":
        got = is_catastrophic_ring(_scaled(doc, claim["matrix"], 1))
        return None if got == bool(claim["value"]) else f"catastrophic is {got}"
    if kind == "minimal_p_encoder":
        G = _scaled(doc, claim["matrix"], 1)
        code = _scaled(doc, claim["code"], 1) if "code" in claim else None
        v = validate_p_encoder(G, code)
        return None if v.minimal else f"validation failed: {v.to_json()}"
    return f"unknown claim kind {kind!r}"


def cmd_verify(args):
    text = _read(args.file)
    doc = parse_input(text)
    claims = json.loads(_read(args.claims)).get("claims", [])
    results = []
    for i, c in enumerate(claims):
        msg = check_claim(doc, c, args.degree_bound)
        results.append({"index": i, "kind": c.get("kind"), "ok": msg is None, "message": msg})
    obj = {"schema": SCHEMA, "provenance": _provenance(text, args), "claims": results}
    lines = [f"claim {r['index']} ({r['kind']}): " + ("ok" if r["ok"] else f"FAILED {r['message']}") for r in results]
    _emit(obj, args, lines)
    failed = [r for r in results if not r["ok"]]
    if failed:
        raise CertificateMismatch("; ".join(f"claim {r['index']}: {r['message']}" for r in failed))
    return 0


# ----------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="ringconv", description="Convolutional encoders over Z_{p^r}.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file")
        p.add_argument("--out", default=None)
        g = p.add_mutually_exclusive_group()
        g.add_argument("--json", dest="format", action="store_const", const="json")
        g.add_argument("--text", dest="format", action="store_const", const="text")
        p.set_defaults(format="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--degree-bound", type=int, default=None)

    p = sub.add_parser("analyze", help="Delta_p, catastrophicity, witnesses, minimal p-encoder")
    common(p)
    p.add_argument("--synthesize", action="store_true")
    p.add_argument("--witness", action="store_true")
    p.add_argument("--horizon", type=int, default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="re-check claims from a JSON file")
    common(p)
    p.add_argument("--claims", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="push rational inputs through an encoder")
    common(p)
    p.add_argument("--input", required=True, help="comma separated rational functions")
    p.add_argument("--matrix", default=None)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--p-input", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("parse", help="parse and echo an input file")
    common(p)
    p.set_defaults(func=cmd_parse)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (RingConvError, ValueError, ArithmeticError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
