"""Brute-force materialization of the finite category a node encodes.

The oracle spells a node out as explicit objects, hom-sets and a
composition table, so tests can verify the edit operations against the
categorical contracts on small instances.  Objects are the node's
symbols; the morphism from object ``s`` named by symbol ``x`` on the
node of ``s`` is identified by the 2-chain ``(s, x)``, which
supportivity makes canonical.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from . import ops
from .core import BASE, BacError, Node, arrow, fresh_symbol, suffix_nd, symbols

#: Hard ceiling on the symbol count accepted by :func:`materialize`.
MATERIALIZE_LIMIT = 64
#: Hard ceiling on the object count accepted by :func:`equivalent`.
EQUIVALENT_LIMIT = 8

Morphism = tuple[int, int]


class TooLargeError(BacError):
    code = "TooLarge"


@dataclass(frozen=True)
class MatCategory:
    """A finite category spelled out in full.

    ``homs[(s, t)]`` lists the morphisms from ``s`` to ``t``;
    ``compose[(g, f)]`` is ``g`` after ``f`` for every composable pair;
    ``initial_witness[t]`` is the unique morphism from the base object.
    """

    objects: tuple[int, ...]
    homs: Mapping[tuple[int, int], tuple[Morphism, ...]]
    compose: Mapping[tuple[Morphism, Morphism], Morphism]
    initial_witness: Mapping[int, Morphism]

    def identity(self, obj: int) -> Morphism:
        return (obj, BASE)

    def source(self, f: Morphism) -> int:
        return f[0]

    def target(self, f: Morphism) -> int:
        for (s, t), fs in self.homs.items():
            if s == f[0] and f in fs:
                return t
        raise KeyError(f)

    def morphisms(self):
        return [f for fs in self.homs.values() for f in fs]


def materialize(node: Node) -> MatCategory:
    """Spell out the category of a valid node (guarded by symbol count)."""
    objs = symbols(node)
    if len(objs) > MATERIALIZE_LIMIT:
        raise TooLargeError(f"{len(objs)} symbols exceed the limit of {MATERIALIZE_LIMIT}")
    homs: dict[tuple[int, int], list[Morphism]] = {}
    target_of: dict[Morphism, int] = {}
    for s in objs:
        a = arrow(node, s)
        for x in symbols(a.target):
            t = a.dict[x]
            homs.setdefault((s, t), []).append((s, x))
            target_of[(s, x)] = t
    compose: dict[tuple[Morphism, Morphism], Morphism] = {}
    for f, t in target_of.items():
        s, x = f
        ax = arrow(arrow(node, s).target, x)
        for y in symbols(ax.target):
            g = (t, y)
            compose[(g, f)] = (s, ax.dict[y])
    return MatCategory(
        objects=objs,
        homs={k: tuple(sorted(v)) for k, v in sorted(homs.items())},
        compose=compose,
        initial_witness={t: (BASE, t) for t in objs},
    )


def equivalent(c1: MatCategory, c2: MatCategory) -> bool:
    """Whether a base-fixing object bijection extends to an isomorphism.

    Exhaustive search over object bijections and per-hom-set morphism
    bijections, pruned by hom-set sizes and composition checks.
    """
    for c in (c1, c2):
        if len(c.objects) > EQUIVALENT_LIMIT:
            raise TooLargeError(
                f"{len(c.objects)} objects exceed the limit of {EQUIVALENT_LIMIT}"
            )
    if len(c1.objects) != len(c2.objects):
        return False
    others1 = [o for o in c1.objects if o != BASE]
    others2 = [o for o in c2.objects if o != BASE]

    def hom(c, s, t):
        return c.homs.get((s, t), ())

    def try_object_map(pi):
        gets = {}
        for (s, t), fs in c1.homs.items():
            if len(fs) != len(hom(c2, pi[s], pi[t])):
                return False
        # Morphism bijection per hom-set, checked against composition.
        hom_keys = sorted(c1.homs)

        def assign(idx, mor_map):
            if idx == len(hom_keys):
                return True
            (s, t) = hom_keys[idx]
            fs = c1.homs[(s, t)]
            gs = hom(c2, pi[s], pi[t])

            def place(i, used, acc):
                if i == len(fs):
                    merged = dict(mor_map)
                    merged.update(acc)
                    for (g, f), h in c1.compose.items():
                        if g in merged and f in merged and h in merged:
                            if c2.compose.get((merged[g], merged[f])) != merged[h]:
                                return False
                    return assign(idx + 1, merged)
                f = fs[i]
                if f == c1.identity(s):
                    cand = [c2.identity(pi[s])]
                elif f == c1.initial_witness.get(t) and s == BASE:
                    cand = [c2.initial_witness[pi[t]]]
                else:
                    cand = gs
                for g in cand:
                    if g in used:
                        continue
                    acc[f] = g
                    if place(i + 1, used | {g}, acc):
                        return True
                    del acc[f]
                return False

            return place(0, frozenset(), {})

        return assign(0, {})

    import itertools

    for perm in itertools.permutations(others2):
        pi = {BASE: BASE}
        pi.update(dict(zip(others1, perm)))
        if try_object_map(pi):
            return True
    return False


def _mint_for_chains(node, chains):
    """Deterministic fresh symbols, one per chain, distinct per ancestor."""
    out = {}
    counters: dict[int, int] = {}
    for s1, s2 in chains:
        base = fresh_symbol(arrow(node, s1).target)
        n = counters.get(s1, 0)
        out[(s1, s2)] = base + n
        counters[s1] = n + 1
    return out


def _incoming_chains(node, tgt):
    chains = []
    for s1 in symbols(node):
        a1 = arrow(node, s1)
        for s2 in symbols(a1.target):
            if s2 != BASE and a1.dict[s2] == tgt:
                chains.append((s1, s2))
    return chains


def _random_chain(rng, node):
    s1 = rng.choice(symbols(node))
    sub = symbols(arrow(node, s1).target)
    s2 = rng.choice(sub)
    return s1, s2


def _op_introduce(rng, node):
    return ops.merge_root_nodes([node, ops.singleton(fresh_symbol(node))])


def _op_add_nd(rng, node):
    syms = [s for s in symbols(node) if s != BASE]
    src = rng.choice(syms + [BASE])
    tgt = rng.choice(syms)
    co_lists, an_lists = ops.find_valid_coangles_angles(src, tgt, node)
    if any(not p for p in co_lists) or any(not p for p in an_lists):
        raise ops.NotFoundError("no valid choice")
    picked_co = [rng.choice(p) for p in co_lists]
    picked_an = [rng.choice(p) for p in an_lists]
    sym = fresh_symbol(arrow(node, src).target)
    return ops.add_nd_symbol(node, src, tgt, sym, picked_co, picked_an)


def _op_add_leaf(rng, node):
    syms = [s for s in symbols(node) if s != BASE]
    src = rng.choice(syms)
    snode = arrow(node, src).target
    sym = fresh_symbol(snode)
    inserter = _mint_for_chains(node, _incoming_chains(node, src))
    return ops.add_leaf_node(node, src, sym, inserter)


def _op_add_parent_root(rng, node):
    syms = [s for s in symbols(node) if s != BASE]
    tgt = rng.choice(syms)
    tnode = arrow(node, tgt).target
    shift = rng.randint(1, 3)
    mapping = {s: s + shift for s in symbols(tnode)}
    return ops.add_parent_node_on_root(node, tgt, fresh_symbol(node), mapping)


def _op_add_parent(rng, node):
    s1, tgt = _random_chain(rng, node)
    if tgt == BASE:
        raise ops.NotFoundError("degenerate chain")
    snode = arrow(node, s1).target
    tnode = arrow(snode, tgt).target
    shift = rng.randint(1, 3)
    mapping = {s: s + shift for s in symbols(tnode)}
    inserter = _mint_for_chains(node, _incoming_chains(node, s1))
    return ops.add_parent_node(node, s1, tgt, fresh_symbol(snode), mapping, inserter)


def _op_remove_nd(rng, node):
    src, tgt = _random_chain(rng, node)
    if tgt == BASE:
        raise ops.NotFoundError("degenerate chain")
    return ops.remove_nd_symbol(node, src, tgt)


def _op_remove_leaf(rng, node):
    leaves = [s for s in symbols(node) if s != BASE and not arrow(node, s).target.edges]
    if not leaves:
        raise ops.NotFoundError("no leaves")
    return ops.remove_leaf_node(node, rng.choice(leaves))


def _op_remove_node(rng, node):
    syms = [s for s in symbols(node) if s != BASE]
    return ops.remove_node(node, rng.choice(syms))


def _op_split_symbol(rng, node):
    src, tgt = _random_chain(rng, node)
    if tgt == BASE:
        raise ops.NotFoundError("degenerate chain")
    snode = arrow(node, src).target
    classes = ops.partition_prefix(snode, tgt)
    base = fresh_symbol(snode)
    if not classes:
        parts = [(tgt, ()), (base, ())]
    elif len(classes) == 1:
        parts = [(tgt, tuple(classes[0]))]
    else:
        cut = rng.randint(1, len(classes) - 1)
        first = [c for cl in classes[:cut] for c in cl]
        second = [c for cl in classes[cut:] for c in cl]
        parts = [(tgt, tuple(first)), (base, tuple(second))]
    return ops.split_symbol(node, src, tgt, parts)


def _op_duplicate_nd(rng, node):
    src, tgt = _random_chain(rng, node)
    if tgt == BASE:
        raise ops.NotFoundError("degenerate chain")
    snode = arrow(node, src).target
    return ops.duplicate_nd_symbol(node, src, tgt, [tgt, fresh_symbol(snode)])


def _op_split_root_roundtrip(rng, node):
    classes = ops.partition_symbols(node)
    if len(classes) < 2:
        raise ops.NotFoundError("nothing to split")
    cut = rng.randint(1, len(classes) - 1)
    groups = [
        [s for cl in classes[:cut] for s in cl],
        [s for cl in classes[cut:] for s in cl],
    ]
    pieces = ops.split_root_node(node, groups)
    back = ops.merge_root_nodes(pieces)
    assert back == node
    return back


def _op_split_node_roundtrip(rng, node):
    syms = [s for s in symbols(node) if s != BASE]
    tgt = rng.choice(syms)
    nd_chains = suffix_nd(node, tgt)
    if len(nd_chains) != 2:
        raise ops.NotFoundError("need exactly two incoming chains")
    tnode = arrow(node, tgt).target
    if set(symbols(tnode)) != {BASE}:
        raise ops.NotFoundError("only leaf objects are split here")
    assigned = [[nd_chains[0]], [nd_chains[1]]]
    derived = [c for c in _incoming_chains(node, tgt) if c not in set(nd_chains)]
    splitters = []
    for i in (0, 1):
        mints = _mint_for_chains(node, assigned[i] + derived)
        if i == 1:
            mints = {c: v + 100 for c, v in mints.items()}
        splitters.append(mints)
    split = ops.split_node(node, tgt, [(splitters[0], ()), (splitters[1], ())])
    # fold the copies back together to exercise the inverse as well
    copy_syms = [splitters[0][(BASE, tgt)], splitters[1][(BASE, tgt)]]
    suffixes = [(cs, [c for c in suffix_nd(split, cs)]) for cs in copy_syms]
    merge_back = {
        (c[0], (splitters[0][c], splitters[1][c])): c[1] for c in derived
    }
    return ops.merge_nodes(split, suffixes, merge_back)


def _op_merge_symbols(rng, node):
    for src in symbols(node):
        snode = arrow(node, src).target
        groups: dict = {}
        for t in symbols(snode):
            if t == BASE:
                continue
            a = arrow(snode, t)
            key = (a.target, tuple(sorted((k, v) for k, v in a.dict.items() if k != BASE)))
            groups.setdefault(key, []).append(t)
        cands = [g for g in groups.values() if len(g) > 1]
        if not cands:
            continue
        tgts = rng.choice(cands)[:2]
        try:
            return ops.merge_symbols(node, src, tgts, tgts[0])
        except BacError:
            continue
    raise ops.NotFoundError("nothing mergeable")


def _op_relabel(rng, node):
    syms = list(symbols(node))
    tgt = rng.choice(syms)
    tnode = arrow(node, tgt).target
    own = [s for s in symbols(tnode) if s != BASE]
    if not own:
        raise ops.NotFoundError("nothing to relabel")
    shuffled = own[:]
    rng.shuffle(shuffled)
    mapping = {BASE: BASE}
    mapping.update(dict(zip(own, shuffled)))
    return ops.relabel(node, tgt, mapping)


def _op_rewire(rng, node):
    syms = list(symbols(node))
    tgt = rng.choice(syms)
    tnode = arrow(node, tgt).target
    own = [s for s in symbols(tnode) if s != BASE]
    if not own:
        raise ops.NotFoundError("nothing to rewire")
    picked = sorted(set([e.dict[BASE] for e in tnode.edges] + [rng.choice(own)]))
    return ops.rewire(node, tgt, picked)


_GROW = [_op_introduce, _op_add_nd, _op_add_leaf, _op_add_parent_root, _op_add_parent,
         _op_split_symbol, _op_duplicate_nd]
_SHRINK = [_op_remove_nd, _op_remove_leaf, _op_remove_node, _op_merge_symbols]
_NEUTRAL = [_op_relabel, _op_rewire, _op_split_root_roundtrip, _op_split_node_roundtrip]


def fuzz_bac(seed: int, size_budget: int) -> Node:
    """A valid node built by a seed-deterministic random edit sequence.

    Grows from the empty node by precondition-checked operations until
    the symbol budget is reached, mixing in removals, renames and split
    round-trips along the way.
    """
    rng = random.Random(seed)
    node = ops.empty()
    if size_budget <= 0:
        return node
    attempts = 4 * size_budget + 12
    for _ in range(attempts):
        n = len(symbols(node))
        if n >= size_budget:
            menu = _SHRINK + _NEUTRAL
        elif n <= 2:
            menu = _GROW
        else:
            menu = _GROW * 3 + _NEUTRAL + _SHRINK
        op = rng.choice(menu)
        try:
            node = op(rng, node)
        except (BacError, IndexError):
            continue
    return node
