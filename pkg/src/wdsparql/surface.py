"""Text front end: the pattern language, a round-tripping printer, N-Triples.

Pattern grammar (SPARQL 1.0 WHERE-clause flavoured)::

    query      := [ SELECT var* WHERE ] group
    group      := '{' ( SELECT var* WHERE group | element* ) '}'
    element    := triple [ '.' ]
                | group ( UNION group )* [ '.' ]
                | OPTIONAL group [ '.' ]
                | FILTER '(' expr ')' [ '.' ]
    expr       := and ( '||' and )*
    and        := unary ( '&&' unary )*
    unary      := '!' unary | '(' expr ')' | BOUND '(' var ')'
                | term ( '=' | '!=' ) term

Elements of a group combine left to right: triples and nested groups by AND,
``OPTIONAL`` by OPT against everything before it. FILTERs scope over the
whole group and are applied last, in order of appearance.

Terms are ``?var``, ``<iri>``, ``"literal"`` or a bare name such as
``professor`` or ``rdf:type``, which denotes the IRI with exactly that text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import (
    And,
    Blank,
    Bound,
    Conj,
    Constraint,
    Disj,
    EqConst,
    EqVar,
    Filter,
    Iri,
    Literal,
    Not,
    Opt,
    Pattern,
    Select,
    Term,
    Triple,
    Union,
    Var,
    number_opts,
)
from .errors import ParseError

KEYWORDS = frozenset({"SELECT", "WHERE", "OPTIONAL", "FILTER", "UNION", "BOUND"})

_BARE_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*(?::[A-Za-z0-9_\-]+)?")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<lit>"(?:[^"\\\n]|\\.)*")
  | (?P<var>[?$][A-Za-z0-9_]+)
  | (?P<blank>_:[A-Za-z0-9_\-]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_\-]*(?::[A-Za-z0-9_\-]+)?)
  | (?P<op>&&|\|\||!=|=|!|[{}().])
    """,
    re.VERBOSE,
)

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\", "'": "'",
            "b": "\b", "f": "\f"}


def _unescape(body: str) -> str:
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        nxt = body[i + 1]
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in "uU":
            width = 4 if nxt == "u" else 8
            out.append(chr(int(body[i + 2:i + 2 + width], 16)))
            i += 2 + width
        else:
            raise ValueError(f"bad escape \\{nxt}")
    return "".join(out)


def _escape(text: str) -> str:
    return (text.replace("\\", "\\\\").replace('"', '\\"')
            .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t"))


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", (pos, pos + 1))
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "name" and val.upper() in KEYWORDS:
                kind = "kw"
                val = val.upper()
            toks.append(_Tok(kind, val, m.start(), m.end()))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text), len(text)))
    return toks


class _PatternParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    # -- token plumbing -----------------------------------------------------
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def expect(self, kind: str, text: str | None = None) -> _Tok:
        if not self.at(kind, text):
            tok = self.peek()
            want = text or kind
            got = tok.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok.span)
        return self.advance()

    def skip_dot(self):
        if self.at("op", "."):
            self.advance()

    # -- grammar ------------------------------------------------------------
    def parse_query(self) -> Pattern:
        if self.at("kw", "SELECT"):
            p = self.parse_select()
        else:
            p = self.parse_group()
        self.expect("eof")
        return p

    def parse_select(self) -> Select:
        self.expect("kw", "SELECT")
        vs = []
        while self.at("var"):
            vs.append(Var(self.advance().text[1:]))
        self.expect("kw", "WHERE")
        return Select(frozenset(vs), self.parse_group())

    def parse_group(self) -> Pattern:
        open_tok = self.expect("op", "{")
        if self.at("kw", "SELECT"):
            p = self.parse_select()
            self.expect("op", "}")
            return p
        acc: Pattern | None = None
        filters: list[Constraint] = []
        while not self.at("op", "}"):
            tok = self.peek()
            if tok.kind == "eof":
                raise ParseError("unterminated group", (open_tok.start, tok.end))
            if self.at("op", "{"):
                g = self.parse_group()
                while self.at("kw", "UNION"):
                    self.advance()
                    g = Union(g, self.parse_group())
                acc = g if acc is None else And(acc, g)
                self.skip_dot()
            elif self.at("kw", "OPTIONAL"):
                self.advance()
                if acc is None:
                    raise ParseError("OPTIONAL needs a preceding pattern in its group",
                                     tok.span)
                acc = Opt(acc, self.parse_group())
                self.skip_dot()
            elif self.at("kw", "FILTER"):
                self.advance()
                self.expect("op", "(")
                filters.append(self.parse_or())
                self.expect("op", ")")
                self.skip_dot()
            elif tok.kind in ("var", "iri", "lit", "name", "blank"):
                t = self.parse_triple()
                acc = t if acc is None else And(acc, t)
                if self.at("op", "."):
                    self.advance()
                elif self.peek().kind in ("var", "iri", "lit", "name", "blank"):
                    nxt = self.peek()
                    raise ParseError("expected '.' between triple patterns", nxt.span)
            else:
                raise ParseError(f"unexpected {tok.text!r} in group", tok.span)
        close_tok = self.advance()
        if acc is None:
            raise ParseError("empty group", (open_tok.start, close_tok.end))
        for c in filters:
            acc = Filter(acc, c)
        return acc

    def parse_term(self) -> Term:
        tok = self.advance()
        if tok.kind == "var":
            return Var(tok.text[1:])
        if tok.kind == "iri":
            return Iri(tok.text[1:-1])
        if tok.kind == "name":
            return Iri(tok.text)
        if tok.kind == "lit":
            try:
                return Literal(_unescape(tok.text[1:-1]))
            except (ValueError, IndexError) as exc:
                raise ParseError(str(exc), tok.span) from None
        if tok.kind == "blank":
            raise ParseError("blank nodes are not allowed in patterns", tok.span)
        raise ParseError(f"expected a term, found {tok.text or 'end of input'!r}",
                         tok.span)

    def parse_triple(self) -> Triple:
        start = self.peek().start
        s, p, o = self.parse_term(), self.parse_term(), self.parse_term()
        try:
            return Triple(s, p, o)
        except ValueError as exc:
            raise ParseError(str(exc), (start, self.toks[self.i - 1].end)) from None

    def parse_or(self) -> Constraint:
        c = self.parse_and()
        while self.at("op", "||"):
            self.advance()
            c = Disj(c, self.parse_and())
        return c

    def parse_and(self) -> Constraint:
        c = self.parse_unary()
        while self.at("op", "&&"):
            self.advance()
            c = Conj(c, self.parse_unary())
        return c

    def parse_unary(self) -> Constraint:
        tok = self.peek()
        if self.at("op", "!"):
            self.advance()
            return Not(self.parse_unary())
        if self.at("op", "("):
            self.advance()
            c = self.parse_or()
            self.expect("op", ")")
            return c
        if self.at("kw", "BOUND"):
            self.advance()
            self.expect("op", "(")
            v = self.expect("var")
            self.expect("op", ")")
            return Bound(Var(v.text[1:]))
        left = self.parse_term()
        if self.at("op", "="):
            negate = False
        elif self.at("op", "!="):
            negate = True
        else:
            nxt = self.peek()
            raise ParseError("expected '=' or '!=' in constraint", nxt.span)
        self.advance()
        right = self.parse_term()
        end = self.toks[self.i - 1].end
        if isinstance(left, Var) and isinstance(right, Var):
            c = EqVar(left, right)
        elif isinstance(left, Var):
            c = EqConst(left, right)
        elif isinstance(right, Var):
            c = EqConst(right, left)
        else:
            raise ParseError("comparison needs at least one variable", (tok.start, end))
        return Not(c) if negate else c


def parse_pattern(text: str) -> Pattern:
    """Parse pattern text; OPT nodes are numbered 1, 2, ... in preorder."""
    return number_opts(_PatternParser(text).parse_query())


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"?{t.name}"
    if isinstance(t, Iri):
        if _BARE_RE.fullmatch(t.value) and t.value.upper() not in KEYWORDS:
            return t.value
        return f"<{t.value}>"
    if isinstance(t, Literal):
        return f'"{_escape(t.value)}"'
    if isinstance(t, Blank):
        return f"_:{t.label}"
    raise TypeError(f"not a term: {t!r}")


def format_triple(t: Triple) -> str:
    return " ".join(format_term(x) for x in t.terms())


def format_constraint(c: Constraint, top: bool = True) -> str:
    if isinstance(c, Bound):
        return f"BOUND({format_term(c.var)})"
    if isinstance(c, EqConst):
        return f"{format_term(c.var)} = {format_term(c.term)}"
    if isinstance(c, EqVar):
        return f"{format_term(c.left)} = {format_term(c.right)}"
    if isinstance(c, Not):
        inner = c.arg
        if isinstance(inner, EqConst):
            return f"{format_term(inner.var)} != {format_term(inner.term)}"
        if isinstance(inner, EqVar):
            return f"{format_term(inner.left)} != {format_term(inner.right)}"
        if isinstance(inner, (Conj, Disj)):
            return "!" + format_constraint(inner, top=False)
        return "!" + format_constraint(inner)
    op = "&&" if isinstance(c, Conj) else "||"
    s = f"{format_constraint(c.left, False)} {op} {format_constraint(c.right, False)}"
    return s if top else f"({s})"


def _elements(p: Pattern) -> tuple[list[tuple[str, bool]], bool]:
    """Group elements for ``p`` as ``(text, is_triple)`` plus a trailing-FILTER flag.

    A body that ends in FILTERs cannot be followed by further elements,
    since those FILTERs would then scope over them too.
    """
    if isinstance(p, Triple):
        return [(format_triple(p), True)], False
    if isinstance(p, Filter):
        elems, _ = _elements(p.pattern)
        return elems + [(f"FILTER({format_constraint(p.constraint)})", False)], True
    if isinstance(p, And):
        return _prefix(p.left) + [_element(p.right)], False
    if isinstance(p, Opt):
        return _prefix(p.left) + [("OPTIONAL " + _group(p.right), False)], False
    if isinstance(p, (Union, Select)):
        return [_element(p)], False
    raise TypeError(f"not a pattern: {p!r}")


def _prefix(p: Pattern) -> list[tuple[str, bool]]:
    elems, trailing_filter = _elements(p)
    if trailing_filter:
        return [(_group(p), False)]
    return elems


def _element(p: Pattern) -> tuple[str, bool]:
    if isinstance(p, Triple):
        return format_triple(p), True
    if isinstance(p, Union):
        return f"{_group(p.left)} UNION {_group(p.right)}", False
    return _group(p), False


def _group(p: Pattern) -> str:
    if isinstance(p, Select):
        return "{" + _select(p) + "}"
    elems, _ = _elements(p)
    out = []
    for i, (text, is_triple) in enumerate(elems):
        if i:
            out.append(" . " if is_triple and elems[i - 1][1] else " ")
        out.append(text)
    return "{" + "".join(out) + "}"


def _select(p: Select) -> str:
    vs = " ".join(format_term(v) for v in sorted(p.variables, key=lambda v: v.name))
    head = f"SELECT {vs} WHERE " if vs else "SELECT WHERE "
    return head + _group(p.pattern)


def print_pattern(p: Pattern) -> str:
    """Render ``p`` so that ``parse_pattern`` gives back an equal pattern."""
    if isinstance(p, Select):
        return _select(p)
    return _group(p)


# ---------------------------------------------------------------------------
# N-Triples
# ---------------------------------------------------------------------------

_NT_TERM_RE = re.compile(
    r"""\s*(?:
        (?P<iri><[^<>"{}|^`\\\s]*>)
      | (?P<blank>_:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])
      | (?P<lit>"(?:[^"\\\n]|\\.)*")(?P<suffix>@[A-Za-z0-9\-]+|\^\^<[^>]*>)?
    )""",
    re.VERBOSE,
)


def _nt_term(line: str, pos: int, lineno: int) -> tuple[Term, int]:
    m = _NT_TERM_RE.match(line, pos)
    if m is None:
        raise ParseError(f"malformed term near {line[pos:pos + 20]!r}", line=lineno)
    if m.group("iri"):
        return Iri(m.group("iri")[1:-1]), m.end()
    if m.group("blank"):
        return Blank(m.group("blank")[2:]), m.end()
    if m.group("suffix"):
        raise ParseError("only plain literals are supported", line=lineno)
    try:
        return Literal(_unescape(m.group("lit")[1:-1])), m.end()
    except (ValueError, IndexError) as exc:
        raise ParseError(str(exc), line=lineno) from None


def parse_ntriples(text: str) -> list[tuple[Term, Term, Term]]:
    """Parse N-Triples (IRIs, blank nodes, plain literals) one line at a time."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        s, pos = _nt_term(line, 0, lineno)
        p, pos = _nt_term(line, pos, lineno)
        o, pos = _nt_term(line, pos, lineno)
        rest = line[pos:].strip()
        if not rest.startswith("."):
            raise ParseError("triple must end with '.'", line=lineno)
        rest = rest[1:].strip()
        if rest and not rest.startswith("#"):
            raise ParseError(f"trailing text {rest!r}", line=lineno)
        if isinstance(s, Literal):
            raise ParseError("literal in subject position", line=lineno)
        if not isinstance(p, Iri):
            raise ParseError("predicate must be an IRI", line=lineno)
        out.append((s, p, o))
    return out


def serialize_ntriples(triples) -> str:
    lines = []
    for s, p, o in triples:
        parts = []
        for t in (s, p, o):
            if isinstance(t, Iri):
                parts.append(f"<{t.value}>")
            elif isinstance(t, Blank):
                parts.append(f"_:{t.label}")
            else:
                parts.append(f'"{_escape(t.value)}"')
        lines.append(" ".join(parts) + " .")
    return "\n".join(lines) + ("\n" if lines else "")
