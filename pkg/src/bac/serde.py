"""Canonical text serialization and DOT export for BAC nodes.

The grammar is deliberately tiny::

    node := "[" [edge ("," edge)*] "]"
    edge := dict " " node
    dict := "{" pair ("," pair)* "}"
    pair := NAT "->" NAT

Dictionaries list their pairs by ascending key and edges are ordered by
their pair lists, so :func:`dumps` emits the same bytes for equal nodes
on every platform.  Naturals are plain decimals with no leading zeros.
Sharing is not encoded: a shared subtree is printed once per occurrence
and re-established semantically by the law checker on load.

Files: ``.bac`` holds one node in this grammar (UTF-8, the canonical
form itself contains no newline); ``.dot`` holds the exported diagram.
"""

from __future__ import annotations

from . import core
from .core import BacError, Node, ValidationReport


class BacSyntaxError(BacError):
    """A parse failure, with 1-based line and column of the offender."""

    code = "SyntaxError"

    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class LawViolationError(BacError):
    """Parsed text is grammatical but does not satisfy the BAC laws."""

    code = "LawViolation"

    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


def dumps(node: Node) -> str:
    """The canonical text of a node (see the module grammar)."""
    return repr(node)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message, pos=None):
        line, col = self._where(pos)
        raise BacSyntaxError(message, line, col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, token):
        if not self.text.startswith(token, self.pos):
            self.error(f"expected {token!r}")
        self.pos += len(token)

    def nat(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        lit = self.text[start : self.pos]
        if not lit:
            self.error("expected a natural number")
        if len(lit) > 1 and lit[0] == "0":
            self.error("leading zeros are not allowed", start)
        return int(lit)

    def symbol_map(self) -> core.SymbolMap:
        start = self.pos
        self.expect("{")
        entries = {}
        while True:
            self.skip_ws()
            at = self.pos
            k = self.nat()
            self.skip_ws()
            self.expect("->")
            self.skip_ws()
            v = self.nat()
            if k in entries:
                self.error(f"duplicate key {k}", at)
            entries[k] = v
            self.skip_ws()
            if self.peek() == ",":
                self.pos += 1
                continue
            break
        self.expect("}")
        if core.BASE not in entries:
            self.error("a dictionary needs the base key 0", start)
        return core.SymbolMap(entries)

    def node(self) -> Node:
        self.expect("[")
        self.skip_ws()
        edges = []
        if self.peek() != "]":
            while True:
                d = self.symbol_map()
                self.skip_ws()
                t = self.node()
                edges.append(core.Arrow(d, t))
                self.skip_ws()
                if self.peek() == ",":
                    self.pos += 1
                    self.skip_ws()
                    continue
                break
        self.expect("]")
        return Node(edges)


def loads(text: str) -> Node:
    """Parse canonical text (whitespace-tolerant) and check the laws.

    Raises :class:`BacSyntaxError` with position diagnostics on bad
    syntax, :class:`LawViolationError` when the tree is not a valid BAC.
    """
    p = _Parser(text)
    p.skip_ws()
    node = p.node()
    p.skip_ws()
    if p.pos != len(p.text):
        p.error("trailing input after the node")
    report = core.validate(node)
    if not report.ok:
        raise LawViolationError(report)
    return node


def to_dot(node: Node) -> str:
    """Render the utility-pole view of a node as a DOT digraph.

    One graph node per structurally distinct BAC node (named ``n0``,
    ``n1``, ... in fold order), one labelled graph edge per BAC edge,
    laid out left to right.
    """
    index: dict[Node, int] = {}
    for n in core._postorder(node):
        index[n] = len(index)
    lines = ["digraph bac {", "  rankdir=LR;"]
    for n, i in index.items():
        label = ",".join(str(s) for s in core.symbols(n))
        lines.append(f'  n{i} [shape=box,label="{label}"];')
    for n, i in index.items():
        for e in n.edges:
            label = "\\n".join(f"{k}->{v}" for k, v in e.dict.pairs)
            lines.append(f'  n{i} -> n{index[e.target]} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
