"""Text formats: polynomial expressions and the input document grammar.

Document grammar (one statement per line, ``#`` starts a comment)::

    ring: Z(p^r)
    set horizon=64
    matrix G:
    [1+D, 9+D, 1+5D]
    [D, 5D^2, 2+D^2]
    rows:                      # anonymous matrix, named "G"
    [1, D]
    decompose: C = G0 + p*G1 + p^2*G2
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, SemanticError
from .ring import RingCtx, is_prime

_TOKEN = re.compile(r"\s*(?:(\d+)|(D)|(\^)|(\+)|(-)|(\*)|(\()|(\))|(/))")


def _tokenize(text, line=None, col0=1):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r}", line, col0 + pos)
        kind = m.lastindex
        val = m.group(kind)
        out.append((kind, val, col0 + m.start(kind)))
        pos = m.end()
    return out


class _ExprParser:
    # token kinds
    NUM, D, CARET, PLUS, MINUS, STAR, LP, RP, SLASH = range(1, 10)

    def __init__(self, text, ctx, line=None, col0=1):
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.ctx = ctx
        self.line = line
        self.col_end = col0 + len(text)

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self, kind=None):
        if self.i >= len(self.toks):
            raise ParseError("unexpected end of expression", self.line, self.col_end)
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"unexpected {tok[1]!r}", self.line, tok[2])
        self.i += 1
        return tok

    def expr(self):
        from .poly import Poly

        sign = 1
        if self.peek() == self.MINUS:
            self.take()
            sign = -1
        acc = self.term().scale(sign)
        while self.peek() in (self.PLUS, self.MINUS):
            op = self.take()[0]
            t = self.term()
            acc = acc + t if op == self.PLUS else acc - t
        return acc if isinstance(acc, Poly) else acc

    def term(self):
        acc = self.factor()
        while True:
            k = self.peek()
            if k == self.STAR:
                self.take()
                acc = acc * self.factor()
            elif k in (self.NUM, self.D, self.LP):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self):
        base = self.atom()
        if self.peek() == self.CARET:
            self.take()
            e = int(self.take(self.NUM)[1])
            base = base ** e
        return base

    def atom(self):
        from .poly import Poly

        kind, val, col = self.take()
        if kind == self.NUM:
            return Poly.const(int(val), self.ctx)
        if kind == self.D:
            return Poly.D(self.ctx)
        if kind == self.LP:
            e = self.expr()
            self.take(self.RP)
            return e
        raise ParseError(f"unexpected {val!r}", self.line, col)

    def done(self):
        if self.i < len(self.toks):
            tok = self.toks[self.i]
            raise ParseError(f"unexpected {tok[1]!r}", self.line, tok[2])


def parse_poly_expr(text, ctx, line=None, col0=1):
    if not text.strip():
        raise ParseError("empty polynomial", line, col0)
    ps = _ExprParser(text, ctx, line, col0)
    f = ps.expr()
    ps.done()
    return f


def parse_rational(text, ctx, line=None, col0=1):
    """``num`` or ``num/den`` where den has a unit lowest coefficient."""
    from .laurent import RationalFn

    depth = 0
    split = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            if split is not None:
                raise ParseError("more than one '/' in rational function", line, col0 + i)
            split = i
    if split is None:
        return RationalFn.from_poly(parse_poly_expr(text, ctx, line, col0))
    num = parse_poly_expr(text[:split], ctx, line, col0)
    den = parse_poly_expr(text[split + 1:], ctx, line, col0 + split + 1)
    return RationalFn(num, den)


def split_row(text, line=None, col0=1):
    """Split ``[a, b, c]`` into entry strings with their columns."""
    s = text.strip()
    off = col0 + (len(text) - len(text.lstrip()))
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("row must be enclosed in [ ]", line, off)
    body = s[1:-1]
    entries = []
    depth = 0
    start = 0
    for i, ch in enumerate(body + ","):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            entries.append((body[start:i], off + 1 + start))
            start = i + 1
    if len(entries) == 1 and not entries[0][0].strip():
        raise ParseError("empty row", line, off)
    return entries


# ----------------------------------------------------------------------------
# documents


@dataclass
class Decomposition:
    name: str
    components: list  # index i -> matrix name or None


@dataclass
class InputDocument:
    ctx: RingCtx
    matrices: dict = field(default_factory=dict)  # name -> PolyMatrix (insertion-ordered)
    decompositions: list = field(default_factory=list)
    directives: dict = field(default_factory=dict)


_RING = re.compile(r"^ring\s*:\s*Z\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\)\s*$")
_MATRIX = re.compile(r"^matrix\s+([A-Za-z_][\w']*)\s*:\s*$")
_ROWS = re.compile(r"^rows\s*:\s*$")
_SET = re.compile(r"^set\s+([A-Za-z_]\w*)\s*=\s*(-?\d+)\s*$")
_DECOMP = re.compile(r"^decompose\s*:\s*([A-Za-z_][\w']*)\s*=\s*(.+)$")
_DTERM = re.compile(r"^(?:p(?:\^(\d+))?\s*\*\s*)?([A-Za-z_][\w']*)$")


def parse_input(text: str) -> InputDocument:
    from .matrix import PolyMatrix

    ctx = None
    doc = None
    current = None  # (name, rows, line)

    def close():
        nonlocal current
        if current is None:
            return
        name, rows, ln = current
        if not rows:
            raise ParseError(f"matrix {name!r} has no rows", ln, 1)
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise SemanticError(f"matrix {name!r} has ragged rows", ln, 1)
        doc.matrices[name] = PolyMatrix(rows, ctx)
        current = None

    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        if stripped.startswith("["):
            if current is None:
                raise ParseError("row outside of a matrix block", ln, 1)
            entries = split_row(line, ln)
            current[1].append([parse_poly_expr(e, ctx, ln, c) for e, c in entries])
            continue
        close()
        m = _RING.match(stripped)
        if m:
            if ctx is not None:
                raise SemanticError("ring declared twice", ln, 1)
            p, r = int(m.group(1)), int(m.group(2) or 1)
            if not is_prime(p):
                raise SemanticError(f"p = {p} is not prime", ln, 1)
            if r < 1:
                raise SemanticError("exponent must be >= 1", ln, 1)
            ctx = RingCtx(p, r)
            doc = InputDocument(ctx)
            continue
        if ctx is None:
            raise ParseError("expected 'ring: Z(p^r)' before anything else", ln, 1)
        m = _MATRIX.match(stripped)
        if m:
            if m.group(1) in doc.matrices:
                raise SemanticError(f"matrix {m.group(1)!r} defined twice", ln, 1)
            current = (m.group(1), [], ln)
            continue
        if _ROWS.match(stripped):
            current = ("G", [], ln)
            continue
        m = _SET.match(stripped)
        if m:
            doc.directives[m.group(1)] = int(m.group(2))
            continue
        m = _DECOMP.match(stripped)
        if m:
            comps = [None] * ctx.r
            for part in m.group(2).split("+"):
                t = _DTERM.match(part.strip())
                if not t:
                    raise ParseError(f"bad decomposition term {part.strip()!r}", ln, 1)
                if "*" in part:
                    level = int(t.group(1)) if t.group(1) else 1
                else:
                    level = 0
                if level >= ctx.r:
                    raise SemanticError(f"level p^{level} exceeds ring exponent", ln, 1)
                if comps[level] is not None:
                    raise SemanticError(f"level p^{level} given twice", ln, 1)
                comps[level] = t.group(2)
            doc.decompositions.append(Decomposition(m.group(1), comps))
            continue
        raise ParseError(f"unrecognised statement {stripped!r}", ln, 1)
    close()
    if doc is None:
        raise ParseError("missing 'ring: Z(p^r)' declaration", 1, 1)
    for dec in doc.decompositions:
        for name in dec.components:
            if name is not None and name not in doc.matrices:
                raise SemanticError(f"decomposition {dec.name!r} refers to unknown matrix {name!r}")
    if not doc.matrices:
        raise ParseError("document defines no matrix")
    return doc


def format_document(doc: InputDocument) -> str:
    ctx = doc.ctx
    lines = [f"ring: Z({ctx.p}^{ctx.r})"]
    for k, v in doc.directives.items():
        lines.append(f"set {k}={v}")
    for name, G in doc.matrices.items():
        lines.append(f"matrix {name}:")
        for row in G.rows:
            lines.append("[" + ", ".join(str(e) for e in row) + "]")
    for dec in doc.decompositions:
        terms = []
        for i, name in enumerate(dec.components):
            if name is None:
                continue
            terms.append(name if i == 0 else (f"p*{name}" if i == 1 else f"p^{i}*{name}"))
        lines.append(f"decompose: {dec.name} = " + " + ".join(terms))
    return "\n".join(lines) + "\n"
