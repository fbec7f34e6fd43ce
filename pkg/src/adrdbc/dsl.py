"""The ``.adr`` text format: parser, canonical printer and JSON export.

A document is a sequence of declarations::

    type A/1 abstract;
    type B/2;
    graph g { node n1; edge e1: A(n1); }
    production p { lhs A; interface u1; rhs { node u; node u1; edge b: B(u1, u); } }
    formula phi = forall B(x,y). forall C(z). y = z;
    asserted ap { production p; pre true; post phi; hbar z1 -> 1; }
    style s { invariant phi; production ap; }

``hbar`` positions are 1-based in the text and 0-based in memory. A bare
identifier in formula position refers to a formula declared earlier.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterator

from .contracts import AssertedProduction
from .graph import Edge, EdgeType, Graph, GraphError, Production, node_key
from .logic import (
    FALSE, TRUE, And, Bot, Eq, Exists, Forall, Formula, Neq, NoEdge, NoEdge2, Not, Or, Top,
    free_vars,
)
from .recovery import Style


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass
class Document:
    types: dict[str, EdgeType] = field(default_factory=dict)
    graphs: dict[str, Graph] = field(default_factory=dict)
    productions: dict[str, Production] = field(default_factory=dict)
    formulas: dict[str, Formula] = field(default_factory=dict)
    asserted: dict[str, AssertedProduction] = field(default_factory=dict)
    styles: dict[str, Style] = field(default_factory=dict)


# -- lexer ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<int>[0-9]+)
  | (?P<sym>!=|->|[{}();:,./=&|])
""", re.VERBOSE)

FORMULA_KEYWORDS = {"forall", "exists", "true", "false", "no", "not"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def _tokens(text: str) -> Iterator[Token]:
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError([Diagnostic(line, pos - line_start + 1,
                                         f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        if kind != "ws":
            yield Token(kind, m.group(), line, pos - line_start + 1)
        for i, ch in enumerate(m.group()):
            if ch == "\n":
                line, line_start = line + 1, pos + i + 1
        pos = m.end()
    yield Token("eof", "", line, pos - line_start + 1)


# -- parser ---------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0
        self.doc = Document()
        self.errors: list[Diagnostic] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(self.errors + [Diagnostic(tok.line, tok.col, msg)])

    def report(self, msg: str, tok: Token) -> None:
        self.errors.append(Diagnostic(tok.line, tok.col, msg))

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("ident", "sym")

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            where = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            self.fail(f"expected {text!r}, found {where}")
        return self.take()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            where = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            self.fail(f"expected {what}, found {where}")
        return self.take()

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.fail(f"expected integer, found {self.tok.text!r}")
        return int(self.take().text)

    def ident_list(self, close: str) -> list[Token]:
        out = []
        if self.at(close):
            return out
        out.append(self.ident())
        while self.at(","):
            self.take()
            out.append(self.ident())
        return out

    def etype(self, tok: Token) -> EdgeType | None:
        t = self.doc.types.get(tok.text)
        if t is None:
            self.report(f"unknown edge type {tok.text}", tok)
        return t

    def declare(self, table: dict, kind: str, tok: Token, value) -> None:
        if tok.text in table:
            self.report(f"duplicate {kind} {tok.text}", tok)
        table[tok.text] = value

    # declarations
    def document(self) -> Document:
        while self.tok.kind != "eof":
            kw = self.ident("declaration keyword")
            handler = getattr(self, f"decl_{kw.text}", None)
            if handler is None:
                self.fail(f"unknown declaration {kw.text!r}", kw)
            handler()
        if self.errors:
            raise ParseError(self.errors)
        return self.doc

    def decl_type(self) -> None:
        name = self.ident("type name")
        self.expect("/")
        arity = self.integer()
        abstract = False
        if self.at("abstract") or self.at("concrete"):
            abstract = self.take().text == "abstract"
        self.expect(";")
        self.declare(self.doc.types, "type", name, EdgeType(name.text, arity, abstract))

    def graph_body(self, close_tok: Token) -> Graph:
        nodes: list[str] = []
        edges: list[Edge] = []
        self.expect("{")
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unclosed block", close_tok)
            kw = self.ident("'node' or 'edge'")
            if kw.text == "node":
                for t in self.ident_list(";"):
                    if t.text in nodes:
                        self.report(f"duplicate node {t.text}", t)
                    nodes.append(t.text)
                self.expect(";")
            elif kw.text == "edge":
                eid = self.ident("edge id")
                self.expect(":")
                tname = self.ident("edge type")
                self.expect("(")
                att = self.ident_list(")")
                self.expect(")")
                self.expect(";")
                t = self.etype(tname)
                if any(e.id == eid.text for e in edges):
                    self.report(f"duplicate edge {eid.text}", eid)
                if t is None:
                    continue
                if len(att) != t.arity:
                    self.report(f"arity mismatch: {t.name} expects {t.arity} nodes, "
                                f"got {len(att)}", tname)
                    continue
                for a in att:
                    if a.text not in nodes:
                        self.report(f"undeclared node {a.text}", a)
                edges.append(Edge(eid.text, t, tuple(a.text for a in att)))
            else:
                self.fail(f"expected 'node' or 'edge', found {kw.text!r}", kw)
        self.expect("}")
        return Graph(frozenset(nodes), tuple(edges))

    def decl_graph(self) -> None:
        name = self.ident("graph name")
        self.declare(self.doc.graphs, "graph", name, self.graph_body(name))

    def decl_production(self) -> None:
        name = self.ident("production name")
        self.expect("{")
        lhs = interface = rhs = None
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unclosed block", name)
            kw = self.ident("'lhs', 'interface' or 'rhs'")
            if kw.text == "lhs":
                lhs = (self.ident("edge type"),)
                self.expect(";")
            elif kw.text == "interface":
                interface = self.ident_list(";")
                self.expect(";")
            elif kw.text == "rhs":
                rhs = self.graph_body(kw)
            else:
                self.fail(f"unexpected {kw.text!r} in production", kw)
        self.expect("}")
        if lhs is None or rhs is None:
            self.report(f"production {name.text} needs 'lhs' and 'rhs'", name)
            return
        t = self.etype(lhs[0])
        if t is None:
            return
        try:
            p = Production(t, rhs, tuple(n.text for n in interface or []), name=name.text)
        except GraphError as e:
            self.report(str(e), name)
            return
        self.declare(self.doc.productions, "production", name, p)

    def decl_formula(self) -> None:
        name = self.ident("formula name")
        self.expect("=")
        f = self.formula()
        self.expect(";")
        if f is not None:
            self.declare(self.doc.formulas, "formula", name, f)

    def mapping(self, value_int: bool) -> dict:
        out = {}
        while True:
            k = self.ident()
            self.expect("->")
            out[k.text] = self.integer() - 1 if value_int else self.ident().text
            if not self.at(","):
                break
            self.take()
        self.expect(";")
        return out

    def decl_asserted(self) -> None:
        name = self.ident("asserted production name")
        self.expect("{")
        fields: dict[str, Any] = {}
        prod_tok = None
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unclosed block", name)
            kw = self.ident()
            if kw.text == "production":
                prod_tok = self.ident("production name")
                self.expect(";")
            elif kw.text in ("pre", "post"):
                fields[kw.text] = self.formula()
                self.expect(";")
            elif kw.text == "h":
                fields["h"] = self.mapping(False)
            elif kw.text == "hprime":
                fields["h_prime"] = self.mapping(False)
            elif kw.text == "hbar":
                fields["hbar"] = self.mapping(True)
            else:
                self.fail(f"unexpected {kw.text!r} in asserted production", kw)
        self.expect("}")
        if prod_tok is None:
            self.report(f"asserted production {name.text} needs 'production'", name)
            return
        p = self.doc.productions.get(prod_tok.text)
        if p is None:
            self.report(f"unknown production {prod_tok.text}", prod_tok)
            return
        if any(fields.get(k, TRUE) is None for k in ("pre", "post")):
            return
        ap = AssertedProduction(fields.get("pre", TRUE), p, fields.get("post", TRUE),
                                fields.get("h", {}), fields.get("hbar"),
                                fields.get("h_prime", {}), name=name.text)
        for msg in ap.problems():
            if "closed" not in msg:
                self.report(f"asserted production {name.text}: {msg}", name)
        self.declare(self.doc.asserted, "asserted production", name, ap)

    def decl_style(self) -> None:
        name = self.ident("style name")
        self.expect("{")
        invariant, prods = TRUE, []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.fail("unclosed block", name)
            kw = self.ident()
            if kw.text == "invariant":
                start = self.tok
                invariant = self.formula()
                if invariant is not None and free_vars(invariant):
                    self.report("style invariant must be closed", start)
                    invariant = None
                self.expect(";")
            elif kw.text == "production":
                t = self.ident("asserted production name")
                self.expect(";")
                ap = self.doc.asserted.get(t.text)
                if ap is None:
                    self.report(f"unknown asserted production {t.text}", t)
                else:
                    prods.append(ap)
            else:
                self.fail(f"unexpected {kw.text!r} in style", kw)
        self.expect("}")
        if invariant is None:
            return
        style = Style(frozenset(self.doc.types.values()), tuple(prods), invariant, name.text)
        self.declare(self.doc.styles, "style", name, style)

    # formulas
    def formula(self, bound: frozenset[str] = frozenset()) -> Formula | None:
        """Parse a formula; returns None if a semantic error was reported."""
        self.ok = True
        f = self._or(bound)
        return f if self.ok else None

    def _or(self, bound):
        args = [self._and(bound)]
        while self.at("|"):
            self.take()
            args.append(self._and(bound))
        return args[0] if len(args) == 1 else Or(tuple(args))

    def _and(self, bound):
        args = [self._unary(bound)]
        while self.at("&"):
            self.take()
            args.append(self._unary(bound))
        return args[0] if len(args) == 1 else And(tuple(args))

    def _unary(self, bound):
        if self.at("not"):
            self.take()
            return Not(self._unary(bound))
        if self.at("forall") or self.at("exists"):
            return self._quant(bound)
        return self._atom(bound)

    def _quant(self, bound):
        q = self.take()
        tname = self.ident("edge type")
        self.expect("(")
        vars = self.ident_list(")")
        self.expect(")")
        self.expect(".")
        t = self.etype(tname)
        names = tuple(v.text for v in vars)
        if t is None:
            self.ok = False
        elif len(names) != t.arity:
            self.report(f"arity mismatch: {t.name} expects {t.arity} variables, "
                        f"got {len(names)}", tname)
            self.ok = False
        seen = set()
        for v in vars:
            if v.text in FORMULA_KEYWORDS:
                self.fail(f"{v.text!r} is a reserved word", v)
            if v.text in bound or v.text in seen:
                self.report(f"variable {v.text} is already bound", v)
                self.ok = False
            seen.add(v.text)
        body = self._or(bound | seen)
        if t is None:
            return TRUE
        return (Forall if q.text == "forall" else Exists)(t, names, body)

    def _atom(self, bound):
        tok = self.tok
        if self.at("("):
            self.take()
            f = self._or(bound)
            self.expect(")")
            return f
        if self.at("true"):
            self.take()
            return TRUE
        if self.at("false"):
            self.take()
            return FALSE
        if self.at("no"):
            self.take()
            first = self.ident("edge type")
            second = None
            if self.at(","):
                self.take()
                second = self.ident("edge type")
            t1 = self.etype(first)
            t2 = self.etype(second) if second is not None else None
            if t1 is None or (second is not None and t2 is None):
                self.ok = False
                return TRUE
            return NoEdge(t1) if t2 is None else NoEdge2(t1, t2)
        if tok.kind != "ident":
            where = "end of input" if tok.kind == "eof" else repr(tok.text)
            self.fail(f"expected formula, found {where}")
        if tok.text in FORMULA_KEYWORDS:
            self.fail(f"unexpected {tok.text!r}")
        self.take()
        if self.at("=") or self.at("!="):
            op = self.take().text
            right = self.ident("variable")
            if right.text in FORMULA_KEYWORDS:
                self.fail(f"{right.text!r} is a reserved word", right)
            return Eq(tok.text, right.text) if op == "=" else Neq(tok.text, right.text)
        ref = self.doc.formulas.get(tok.text)
        if ref is None:
            self.report(f"unknown formula {tok.text}", tok)
            self.ok = False
            return TRUE
        clash = set(_bound_vars(ref)) & bound
        if clash:
            self.report(f"formula {tok.text} rebinds {', '.join(sorted(clash))}", tok)
            self.ok = False
        return ref


def _bound_vars(f: Formula) -> set[str]:
    if isinstance(f, Not):
        return _bound_vars(f.arg)
    if isinstance(f, (And, Or)):
        return set().union(*(_bound_vars(a) for a in f.args))
    if isinstance(f, (Forall, Exists)):
        return set(f.vars) | _bound_vars(f.body)
    return set()


def parse(text: str | bytes) -> Document:
    """Parse a document; raises :class:`ParseError` carrying diagnostics."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError([Diagnostic(1, e.start + 1, "input is not valid UTF-8")]) from None
    try:
        return _Parser(text).document()
    except RecursionError:
        raise ParseError([Diagnostic(1, 1, "formula nesting too deep")]) from None


def parse_formula(text: str, types: dict[str, EdgeType]) -> Formula:
    p = _Parser(text)
    p.doc.types = dict(types)
    f = p.formula()
    if p.tok.kind != "eof":
        p.fail(f"unexpected {p.tok.text!r} after formula")
    if f is None or p.errors:
        raise ParseError(p.errors)
    return f


# -- printer --------------------------------------------------------------

def _plain(f: Formula) -> bool:
    return isinstance(f, (Top, Bot, Eq, Neq, NoEdge, NoEdge2, Not))


def format_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Eq):
        return f"{f.left} = {f.right}"
    if isinstance(f, Neq):
        return f"{f.left} != {f.right}"
    if isinstance(f, NoEdge):
        return f"no {f.etype.name}"
    if isinstance(f, NoEdge2):
        return f"no {f.etype.name},{f.other.name}"
    if isinstance(f, Not):
        inner = format_formula(f.arg)
        return f"not {inner}" if _plain(f.arg) else f"not ({inner})"
    if isinstance(f, (And, Or)):
        if not f.args:
            return "true" if isinstance(f, And) else "false"
        if len(f.args) == 1:
            return format_formula(f.args[0])
        sep = " & " if isinstance(f, And) else " | "
        return sep.join(
            format_formula(a) if _plain(a) else f"({format_formula(a)})" for a in f.args
        )
    q = "forall" if isinstance(f, Forall) else "exists"
    body = format_formula(f.body)
    if isinstance(f.body, (And, Or)) and len(f.body.args) > 1:
        body = f"({body})"
    return f"{q} {f.etype.name}({','.join(f.vars)}). {body}"


def _graph_lines(g: Graph, indent: str) -> list[str]:
    lines = [f"{indent}node {n};" for n in g.sorted_nodes()]
    lines += [f"{indent}edge {e.id}: {e.etype.name}({', '.join(e.attachment)});" for e in g.edges]
    return lines


def format_graph(g: Graph, name: str) -> str:
    return "\n".join([f"graph {name} {{", *_graph_lines(g, "  "), "}"])


def _sorted(table: dict) -> list:
    return sorted(table.items(), key=lambda kv: node_key(kv[0]))


def serialize(doc: Document) -> str:
    blocks: list[str] = []
    if doc.types:
        blocks.append("\n".join(
            f"type {t.name}/{t.arity}{' abstract' if t.abstract else ''};"
            for _, t in _sorted(doc.types)
        ))
    for name, g in _sorted(doc.graphs):
        blocks.append(format_graph(g, name))
    for name, p in _sorted(doc.productions):
        blocks.append("\n".join([
            f"production {name} {{",
            f"  lhs {p.lhs_type.name};",
            f"  interface {', '.join(p.interface)};".replace("interface ;", "interface;"),
            "  rhs {", *_graph_lines(p.rhs, "    "), "  }",
            "}",
        ]))
    for name, f in _sorted(doc.formulas):
        blocks.append(f"formula {name} = {format_formula(f)};")
    for name, ap in _sorted(doc.asserted):
        lines = [f"asserted {name} {{", f"  production {ap.production.name};",
                 f"  pre {format_formula(ap.pre)};", f"  post {format_formula(ap.post)};"]
        if ap.hbar:
            lines.append("  hbar " + ", ".join(f"{z} -> {q + 1}" for z, q in
                                                sorted(ap.hbar.items(), key=lambda kv: kv[1])) + ";")
        if ap.h:
            lines.append("  h " + ", ".join(f"{x} -> {n}" for x, n in sorted(ap.h.items())) + ";")
        if ap.h_prime:
            lines.append("  hprime " + ", ".join(f"{x} -> {n}" for x, n in
                                                  sorted(ap.h_prime.items())) + ";")
        blocks.append("\n".join(lines + ["}"]))
    for name, s in _sorted(doc.styles):
        blocks.append("\n".join(
            [f"style {name} {{", f"  invariant {format_formula(s.invariant)};"]
            + [f"  production {ap.name};" for ap in s.productions] + ["}"]
        ))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# -- JSON -----------------------------------------------------------------

def formula_to_json(f: Formula) -> dict:
    if isinstance(f, Top):
        return {"op": "true"}
    if isinstance(f, Bot):
        return {"op": "false"}
    if isinstance(f, (Eq, Neq)):
        return {"op": "eq" if isinstance(f, Eq) else "neq", "left": f.left, "right": f.right}
    if isinstance(f, NoEdge):
        return {"op": "no", "types": [f.etype.name]}
    if isinstance(f, NoEdge2):
        return {"op": "no", "types": [f.etype.name, f.other.name]}
    if isinstance(f, Not):
        return {"op": "not", "arg": formula_to_json(f.arg)}
    if isinstance(f, (And, Or)):
        return {"op": "and" if isinstance(f, And) else "or",
                "args": [formula_to_json(a) for a in f.args]}
    return {"op": "forall" if isinstance(f, Forall) else "exists", "type": f.etype.name,
            "vars": list(f.vars), "body": formula_to_json(f.body)}


def graph_to_json(g: Graph) -> dict:
    return {"nodes": g.sorted_nodes(),
            "edges": [{"id": e.id, "type": e.etype.name, "attachment": list(e.attachment)}
                      for e in g.edges]}


def to_json(doc: Document) -> dict:
    return {
        "types": [{"name": t.name, "arity": t.arity, "abstract": t.abstract}
                  for _, t in _sorted(doc.types)],
        "graphs": {n: graph_to_json(g) for n, g in _sorted(doc.graphs)},
        "productions": {n: {"lhs": p.lhs_type.name, "interface": list(p.interface),
                            "rhs": graph_to_json(p.rhs)} for n, p in _sorted(doc.productions)},
        "formulas": {n: formula_to_json(f) for n, f in _sorted(doc.formulas)},
        "asserted": {n: {"production": ap.production.name, "pre": formula_to_json(ap.pre),
                         "post": formula_to_json(ap.post), "h": dict(ap.h),
                         "hbar": {z: q + 1 for z, q in ap.hbar.items()},
                         "hprime": dict(ap.h_prime)}
                     for n, ap in _sorted(doc.asserted)},
        "styles": {n: {"invariant": formula_to_json(s.invariant),
                       "productions": [ap.name for ap in s.productions]}
                   for n, s in _sorted(doc.styles)},
    }


def json_schema() -> dict:
    """The JSON schema covering :func:`to_json` documents and ``wp --json`` output."""
    import json
    from importlib.resources import files

    return json.loads(files("adrdbc").joinpath("schema/adr.schema.json").read_text())
