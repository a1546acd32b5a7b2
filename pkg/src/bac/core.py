"""Core data model for finite bounded acyclic categories.

A bounded acyclic category (BAC) is stored as a weighted tree.  A
:class:`Node` owns a canonically ordered tuple of edges; every edge
carries a dictionary (:class:`SymbolMap`) that maps each symbol of the
child node to a symbol of the parent node.  Symbol ``0`` is reserved on
every node for the base object, and the proper symbols of a node are
exactly the values covered by its outgoing edges, so symbol sets are
never stored.

Three laws make a tree a valid BAC (see :func:`validate`):

* totality      - an edge dictionary is keyed by all symbols of its child;
* surjectivity  - every proper symbol is a value of some edge dictionary;
* supportivity  - two paths that send the base symbol to the same symbol
  carry equal dictionaries and land on structurally equal nodes, null
  paths included.

Everything here is immutable; edits build new nodes and share untouched
subtrees by value.
"""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

#: The reserved base symbol present on every node.
BASE = 0

Symbol = int
#: A morphism named by two symbols: the second lives on the node the
#: first one refers to.
Chain2 = tuple[int, int]


class BacError(Exception):
    """Base class for every error raised by this package."""

    code = "Error"

    def __init__(self, message=""):
        super().__init__(message)
        self.message = message

    def __str__(self):
        return f"{self.code}: {self.message}" if self.message else self.code


class MissingKeyError(BacError):
    """Dictionary composition hit a value with no matching key."""

    code = "MissingKey"


class InvalidSymbolError(BacError):
    """A symbol is absent from the node it was supposed to live on."""

    code = "InvalidSymbol"


class SymbolMap(Mapping):
    """An immutable symbol-to-symbol map, the weight of an edge.

    Iteration is in ascending key order, so two equal maps always render
    identically.
    """

    __slots__ = ("_map", "_pairs", "_vset", "_hash")

    def __init__(self, entries=()):
        m = dict(entries)
        for k, v in m.items():
            if not isinstance(k, int) or not isinstance(v, int) or k < 0 or v < 0:
                raise TypeError(f"symbols are natural numbers, got {k!r}->{v!r}")
        self._pairs = tuple(sorted(m.items()))
        self._map = dict(self._pairs)
        self._vset = frozenset(m.values())
        self._hash = hash(self._pairs)

    @classmethod
    def _trusted(cls, mapping):
        # Internal fast path: `mapping` holds already-checked naturals.
        self = cls.__new__(cls)
        self._pairs = tuple(sorted(mapping.items()))
        self._map = dict(self._pairs)
        self._vset = frozenset(self._map.values())
        self._hash = hash(self._pairs)
        return self

    @property
    def pairs(self) -> tuple[tuple[int, int], ...]:
        """The entries as a sorted tuple of ``(key, value)`` pairs."""
        return self._pairs

    @property
    def value_set(self) -> frozenset[int]:
        return self._vset

    def __getitem__(self, key):
        return self._map[key]

    def __iter__(self):
        return iter(self._map)

    def __len__(self):
        return len(self._map)

    def __contains__(self, key):
        return key in self._map

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, SymbolMap):
            return self._pairs == other._pairs
        if isinstance(other, Mapping):
            return self._map == dict(other)
        return NotImplemented

    def __repr__(self):
        return "{" + ",".join(f"{k}->{v}" for k, v in self._pairs) + "}"


def cat(outer, inner) -> SymbolMap:
    """Compose two dictionaries along a path, ``outer`` nearer the root.

    ``result[k] = outer[inner[k]]`` for every key of ``inner``.  Raises
    :class:`MissingKeyError` when a value of ``inner`` is not a key of
    ``outer``, which signals a totality violation upstream.
    """
    try:
        return SymbolMap._trusted({k: outer[v] for k, v in inner.items()})
    except KeyError as exc:
        raise MissingKeyError(
            f"value {exc.args[0]} of the inner dictionary is not a key of the outer one"
        ) from None


class Arrow:
    """A composite dictionary plus the node it lands on.

    Arrows stand for paths: an edge of a node is an arrow, the null path
    is the identity arrow of :func:`root`, and longer paths arise from
    :func:`join`.  ``arrow.dict[0]`` names the arrow's target object on
    the source node (see :func:`symbol`).
    """

    __slots__ = ("dict", "target")

    def __init__(self, dict, target):
        if not isinstance(dict, SymbolMap):
            dict = SymbolMap(dict)
        self.dict = dict
        self.target = target

    def __eq__(self, other):
        if not isinstance(other, Arrow):
            return NotImplemented
        return self.dict == other.dict and self.target == other.target

    def __hash__(self):
        return hash((self.dict, self.target))

    def __repr__(self):
        return f"Arrow({self.dict!r}, {self.target!r})"


#: Edges are arrows whose dictionary is stored directly on a node.
Edge = Arrow


class Node:
    """A bounded acyclic category: a canonical ordered set of edges.

    Edges are sorted by their dictionary's pair list (ties broken by the
    target's structural key) and exact duplicates collapse, so two nodes
    built from the same edge multiset compare equal.  Structural
    equality is the only node identity; sharing of subtrees is invisible.
    """

    __slots__ = ("edges", "_skey", "_hash", "_symbols", "_arrows", "_canon")

    def __init__(self, edges: Iterable[Edge] = ()):
        es = []
        for e in edges:
            if not isinstance(e, Arrow):
                e = Arrow(*e)
            if not isinstance(e.target, Node):
                raise TypeError("edge targets must be nodes")
            es.append(e)
        es.sort(key=lambda e: (e.dict.pairs, e.target._skey))
        dedup: list[Edge] = []
        for e in es:
            if dedup and e.dict == dedup[-1].dict and e.target == dedup[-1].target:
                continue
            dedup.append(e)
        self.edges = tuple(dedup)
        self._skey = tuple((e.dict.pairs, e.target._skey) for e in self.edges)
        self._hash = hash(self._skey)
        self._symbols = None
        self._arrows = None
        self._canon = None

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Node):
            return NotImplemented
        return self._hash == other._hash and self._skey == other._skey

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self._canon is None:
            parts = ",".join(f"{e.dict!r} {e.target!r}" for e in self.edges)
            self._canon = f"[{parts}]"
        return self._canon


class Location(enum.Enum):
    """Where a symbol sits relative to an arrow's target."""

    OUTER = "outer"
    BOUNDARY = "boundary"
    INNER = "inner"


def symbols(node: Node) -> tuple[Symbol, ...]:
    """All symbols of a node, ascending: the base plus every edge value."""
    if node._symbols is None:
        acc = {BASE}
        for e in node.edges:
            acc.update(e.dict.value_set)
        node._symbols = tuple(sorted(acc))
    return node._symbols


def fresh_symbol(node: Node) -> Symbol:
    """A symbol not yet used on the node (the maximum plus one)."""
    return symbols(node)[-1] + 1


def _identity(node: Node) -> SymbolMap:
    return SymbolMap._trusted({s: s for s in symbols(node)})


def root(node: Node) -> Arrow:
    """The identity arrow of the null path on a node."""
    return Arrow(_identity(node), node)


def join(a1: Arrow, a2: Arrow) -> Arrow:
    """Compose two connected arrows, ``a2`` starting on ``a1.target``."""
    return Arrow(cat(a1.dict, a2.dict), a2.target)


def symbol(a: Arrow) -> Symbol:
    """The symbol an arrow maps the base to; it names the arrow's object."""
    return a.dict[BASE]


def locate(a: Arrow, s: Symbol) -> Location:
    """Classify a symbol of the source node relative to an arrow.

    ``BOUNDARY`` when the symbol names the arrow's own object, ``INNER``
    when it names a proper descendant, ``OUTER`` otherwise.
    """
    if s == a.dict[BASE]:
        return Location.BOUNDARY
    if s in a.dict.value_set:
        return Location.INNER
    return Location.OUTER


def _postorder(node: Node) -> list[Node]:
    """Structurally distinct nodes, children before parents."""
    seen = set()
    order = []
    stack: list[tuple[Node, bool]] = [(node, False)]
    while stack:
        n, expanded = stack.pop()
        if expanded:
            order.append(n)
            continue
        if n in seen:
            continue
        seen.add(n)
        stack.append((n, True))
        for e in n.edges:
            if e.target not in seen:
                stack.append((e.target, False))
    return order


def _arrow_map(node: Node) -> dict[Symbol, Arrow]:
    """Every symbol's arrow from the node's root, cached per node."""
    if node._arrows is not None:
        return node._arrows
    # The postorder holds one representative per structural class, so
    # children are resolved through a structural map, not per instance.
    maps: dict[Node, dict[Symbol, Arrow]] = {}
    for n in _postorder(node):
        if n._arrows is not None:
            maps[n] = n._arrows
            continue
        amap = {BASE: Arrow(_identity(n), n)}
        for e in n.edges:
            for s2, a2 in maps[e.target].items():
                s = e.dict[s2]
                if s not in amap:
                    if s2 == BASE:
                        amap[s] = Arrow(e.dict, e.target)
                    else:
                        amap[s] = Arrow(cat(e.dict, a2.dict), a2.target)
        n._arrows = amap
        maps[n] = amap
    return maps[node]


def arrow(node: Node, s: Symbol) -> Optional[Arrow]:
    """The unique arrow from the root of ``node`` with symbol ``s``.

    Supportivity makes the ``(dict, target)`` pair unique.  Returns
    ``None`` when ``s`` is not a symbol of the node.
    """
    return _arrow_map(node).get(s)


def divide(divisor: Arrow, dividend: Arrow) -> list[Arrow]:
    """All arrows ``a`` of ``divisor.target`` with ``join(divisor, a) == dividend``.

    Both inputs must start on the same node.  The result is ordered by
    :func:`symbol`; supportivity collapses same-symbol candidates to one
    representative.
    """
    want = dividend.dict[BASE]
    out = []
    for s in symbols(divisor.target):
        if divisor.dict[s] == want:
            out.append(arrow(divisor.target, s))
    return out


def arrow2(node: Node, chain: Chain2) -> Optional[tuple[Arrow, Arrow]]:
    """The pair of connected arrows a 2-chain names, or ``None``."""
    a1 = arrow(node, chain[0])
    if a1 is None:
        return None
    a2 = arrow(a1.target, chain[1])
    if a2 is None:
        return None
    return (a1, a2)


def symbol2(pair: tuple[Arrow, Arrow]) -> Chain2:
    """The 2-chain naming a pair of connected arrows; inverse of :func:`arrow2`."""
    return (symbol(pair[0]), symbol(pair[1]))


def nondecomposable(node: Node, s: Symbol) -> bool:
    """Whether ``s`` appears only as the image of the base symbol.

    Nondecomposable symbols name generator morphisms: no edge wires a
    proper child symbol onto them.
    """
    if s == BASE or s not in set(symbols(node)):
        raise InvalidSymbolError(f"{s} is not a proper symbol of the node")
    for e in node.edges:
        for k, v in e.dict.items():
            if v == s and k != BASE:
                return False
    return True


def suffix_nd(node: Node, tgt: Symbol) -> list[Chain2]:
    """All nondecomposable incoming 2-chains of the object ``tgt``.

    Chains ``(s1, s2)`` such that ``s2`` composes to ``tgt`` and is
    nondecomposable on the node of ``s1``; ascending order.
    """
    if tgt not in set(symbols(node)):
        raise InvalidSymbolError(f"{tgt} is not a symbol of the node")
    out = []
    for s1 in symbols(node):
        a1 = arrow(node, s1)
        for s2 in symbols(a1.target):
            if s2 != BASE and a1.dict[s2] == tgt and nondecomposable(a1.target, s2):
                out.append((s1, s2))
    return out


def fold(node: Node, visit: Callable) -> object:
    """Bottom-up accumulation over the tree.

    ``visit(node, child_results)`` runs exactly once per structurally
    distinct node; ``child_results`` aligns with ``node.edges`` and
    reuses the memoized result for shared subtrees.
    """
    memo: dict[Node, object] = {}
    for n in _postorder(node):
        memo[n] = visit(n, [memo[e.target] for e in n.edges])
    return memo[node]


def fold_under(node: Node, sym: Symbol, visit: Callable) -> object:
    """Fold only over the proper ancestors of the object ``sym``.

    ``visit(curr, parts)`` receives the arrow from the root to the node
    being visited and ``parts``, a list of ``(edge, location, result)``
    triples aligned with its edges; ``result`` is the child's value for
    INNER edges and ``None`` otherwise.  Each ancestor object is visited
    once, bottom up; returns the root's value, or ``None`` when ``sym``
    is the base (the root itself is the boundary then).
    """
    if sym not in set(symbols(node)):
        raise InvalidSymbolError(f"{sym} is not a symbol of the node")
    if sym == BASE:
        return None
    memo: dict[Symbol, object] = {}

    def go(curr: Arrow):
        key = curr.dict[BASE]
        if key in memo:
            return memo[key]
        parts = []
        for e in curr.target.edges:
            j = join(curr, e)
            loc = locate(j, sym)
            res = go(j) if loc is Location.INNER else None
            parts.append((e, loc, res))
        memo[key] = visit(curr, parts)
        return memo[key]

    return go(root(node))


def modify(node: Node, edit: Callable) -> Node:
    """Rebuild every node bottom-up through an edge editor.

    ``edit(edge, new_target)`` returns the replacement edges (any
    iterable) for one edge whose target was already rebuilt.
    """
    memo: dict[Node, Node] = {}
    for n in _postorder(node):
        new_edges: list[Edge] = []
        for e in n.edges:
            new_edges.extend(edit(e, memo[e.target]))
        memo[n] = Node(new_edges)
    return memo[node]


def modify_under(node: Node, sym: Symbol, edit: Callable) -> Node:
    """Rebuild the proper ancestors of the object ``sym`` bottom-up.

    ``edit(curr, parts)`` returns the full replacement edge list for the
    visited node; ``parts`` is as in :func:`fold_under` with INNER
    results being the rebuilt child nodes.  Nodes that cannot reach
    ``sym`` are shared untouched.
    """
    if sym not in set(symbols(node)):
        raise InvalidSymbolError(f"{sym} is not a symbol of the node")
    if sym == BASE:
        return node
    memo: dict[Symbol, Node] = {}

    def go(curr: Arrow) -> Node:
        key = curr.dict[BASE]
        if key in memo:
            return memo[key]
        parts = []
        for e in curr.target.edges:
            j = join(curr, e)
            loc = locate(j, sym)
            res = go(j) if loc is Location.INNER else None
            parts.append((e, loc, res))
        memo[key] = Node(edit(curr, parts))
        return memo[key]

    return go(root(node))


@dataclass(frozen=True)
class Violation:
    """One law violation: which law, a root path witness, and details.

    ``path`` is a sequence of edge indices leading from the root to the
    node where the violation was observed.
    """

    law: str
    path: tuple[int, ...]
    detail: str

    def __str__(self):
        where = "/".join(str(i) for i in self.path) or "root"
        return f"{self.law} at {where}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    """The findings of :func:`validate`; empty means the node is a valid BAC."""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


def _path_bundles(node: Node) -> dict[Node, dict[Symbol, tuple[SymbolMap, Node]]]:
    """Per node: the composite (dict, target) reached per base image.

    Conflicting paths are kept out of the bundle; they are re-detected
    with a witness path by :func:`validate`.
    """
    bundles: dict[Node, dict[Symbol, tuple[SymbolMap, Node]]] = {}
    for n in _postorder(node):
        bundle = {BASE: (_identity(n), n)}
        for e in n.edges:
            for d2, t2 in bundles[e.target].values():
                try:
                    d = cat(e.dict, d2)
                except MissingKeyError:
                    continue
                bundle.setdefault(d[BASE], (d, t2))
        bundles[n] = bundle
    return bundles


def validate(node: Node) -> ValidationReport:
    """Check the three BAC laws everywhere, with path witnesses.

    Totality compares each edge's key set with its child's symbols.
    Supportivity folds composite arrows bottom-up and compares the
    ``(dict, target)`` pair reached per base image, null paths included;
    the two derived laws (no proper dictionary maps to the base, and the
    base image of a proper dictionary is unique among its values) are
    reported as supportivity corollaries.  Surjectivity cannot break
    separately here because symbol sets are computed from edge values;
    its violations surface as totality findings on the referencing edge.
    """
    found: list[Violation] = []
    bundles = _path_bundles(node)
    seen: set[Node] = set()
    stack: list[tuple[Node, tuple[int, ...]]] = [(node, ())]
    while stack:
        n, path = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        reached: dict[Symbol, tuple[SymbolMap, Node]] = {BASE: (_identity(n), n)}
        for i, e in enumerate(n.edges):
            keys = set(e.dict)
            want = set(symbols(e.target))
            if keys != want:
                missing = sorted(want - keys)
                extra = sorted(keys - want)
                found.append(
                    Violation(
                        "Totality",
                        path + (i,),
                        f"edge keys {sorted(keys)} do not match child symbols "
                        f"{sorted(want)} (missing {missing}, extra {extra})",
                    )
                )
            if BASE in e.dict.value_set:
                found.append(
                    Violation(
                        "Supportivity",
                        path + (i,),
                        "a proper dictionary maps a symbol to the base symbol",
                    )
                )
            base_img = e.dict[BASE]
            if any(v == base_img for k, v in e.dict.items() if k != BASE):
                found.append(
                    Violation(
                        "Supportivity",
                        path + (i,),
                        f"base image {base_img} recurs among the edge values",
                    )
                )
            for d2, t2 in bundles[e.target].values():
                try:
                    d = cat(e.dict, d2)
                except MissingKeyError:
                    continue
                prev = reached.get(d[BASE])
                if prev is None:
                    reached[d[BASE]] = (d, t2)
                elif prev[0] != d or prev[1] != t2:
                    found.append(
                        Violation(
                            "Supportivity",
                            path + (i,),
                            f"two paths map the base to {d[BASE]} with different "
                            "dictionaries or targets",
                        )
                    )
            stack.append((e.target, path + (i,)))
    found.sort(key=lambda v: (v.path, v.law, v.detail))
    return ValidationReport(tuple(found))
