import pytest
from hypothesis import given, settings, strategies as st

from bac import Arrow, Node, arrow, cat, empty, relabel, symbols, validate
from bac.oracle import (
    EQUIVALENT_LIMIT,
    TooLargeError,
    equivalent,
    fuzz_bac,
    materialize,
)

from _structures import CIRC, EMPTY, PP2, PT, SEG, TWO, VEE


def enumerate_path_arrows(node, start):
    """Independent oracle: distinct (dict, target) pairs over edge paths."""
    from bac.core import _identity

    base = arrow(node, start)
    found = set()

    def walk(d, t):
        found.add((d.pairs, t))
        for e in t.edges:
            walk(cat(d, e.dict), e.target)

    walk(_identity(base.target), base.target)
    return found


class TestMaterialize:
    def test_pt(self):
        c = materialize(PT)
        assert c.objects == (0, 1)
        assert c.homs[(0, 1)] == ((0, 1),)
        assert c.homs[(0, 0)] == ((0, 0),)
        assert c.homs[(1, 1)] == ((1, 0),)

    def test_circ_double_cover(self):
        c = materialize(CIRC)
        assert c.objects == (0, 1, 2)
        assert c.homs[(1, 2)] == ((1, 1), (1, 2))

    def test_empty(self):
        c = materialize(empty())
        assert c.objects == (0,)
        assert list(c.homs) == [(0, 0)]

    def test_initiality(self):
        for n in (PT, TWO, SEG, CIRC, VEE, PP2):
            c = materialize(n)
            for t in c.objects:
                assert c.homs[(0, t)] == ((0, t),)

    def test_too_large(self):
        wide = Node([Arrow({0: s}, EMPTY) for s in range(1, 70)])
        with pytest.raises(TooLargeError):
            materialize(wide)


def check_category_axioms(c):
    morphisms = set(c.morphisms())
    targets = {}
    for (s, t), fs in c.homs.items():
        for f in fs:
            targets[f] = t
    # identities compose as units
    for f in morphisms:
        s, t = f[0], targets[f]
        assert c.compose[(f, c.identity(s))] == f
        assert c.compose[(c.identity(t), f)] == f
    # closure and associativity
    for (g, f), h in c.compose.items():
        assert h in morphisms
        assert h[0] == f[0]
        assert targets[h] == targets[g]
    for f in morphisms:
        for g in morphisms:
            if g[0] != targets[f]:
                continue
            for h in morphisms:
                if h[0] != targets[g]:
                    continue
                assert c.compose[(h, c.compose[(g, f)])] == c.compose[(c.compose[(h, g)], f)]
    # acyclicity: only identities sit on the diagonal
    for (s, t), fs in c.homs.items():
        if s == t:
            assert fs == (c.identity(s),)
        else:
            assert not c.homs.get((t, s))
    # initiality of the base object
    for t in c.objects:
        assert len(c.homs.get((0, t), ())) == 1


class TestCategoryAxioms:
    def test_fixtures(self):
        for n in (EMPTY, PT, TWO, SEG, CIRC, VEE, PP2):
            check_category_axioms(materialize(n))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_fuzzed(self, seed):
        node = fuzz_bac(seed, 7)
        check_category_axioms(materialize(node))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_hom_counts_match_path_enumeration(self, seed):
        node = fuzz_bac(seed, 7)
        c = materialize(node)
        for s in symbols(node):
            host = arrow(node, s).dict
            got = {}
            for d, t in enumerate_path_arrows(node, s):
                obj = host[dict(d)[0]]
                got[obj] = got.get(obj, 0) + 1
            counted = {}
            for (a, b), fs in c.homs.items():
                if a == s:
                    counted[b] = len(fs)
            assert got == counted


class TestEquivalent:
    def test_reflexive(self):
        c = materialize(SEG)
        assert equivalent(c, c)

    def test_relabel_invariance(self):
        for n, perm in ((TWO, {0: 0, 1: 2, 2: 1}), (SEG, {0: 0, 1: 1, 2: 3, 3: 2})):
            assert equivalent(materialize(n), materialize(relabel(n, 0, perm)))

    def test_different_object_counts(self):
        assert not equivalent(materialize(PT), materialize(TWO))

    def test_same_counts_different_structure(self):
        assert not equivalent(materialize(SEG), materialize(CIRC.__class__([
            Arrow({0: 1}, EMPTY), Arrow({0: 2}, EMPTY), Arrow({0: 3}, EMPTY),
        ])))

    def test_circ_vs_seg_like(self):
        # same object count, different hom structure
        three = Node([Arrow({0: 1, 1: 2}, PT), Arrow({0: 2}, EMPTY)])
        assert not equivalent(materialize(CIRC), materialize(three))

    def test_too_large(self):
        wide = Node([Arrow({0: s}, EMPTY) for s in range(1, EQUIVALENT_LIMIT + 2)])
        with pytest.raises(TooLargeError):
            equivalent(materialize(wide), materialize(wide))


class TestFuzzBac:
    def test_zero_budget(self):
        assert fuzz_bac(1, 0) == empty()

    def test_deterministic(self):
        assert fuzz_bac(42, 12) == fuzz_bac(42, 12)

    def test_valid(self):
        for seed in range(50):
            assert validate(fuzz_bac(seed, 10)).ok
