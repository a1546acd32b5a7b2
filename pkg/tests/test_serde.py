import pytest
from hypothesis import given, settings, strategies as st

from bac import Arrow, Node, empty, singleton, validate
from bac.oracle import fuzz_bac
from bac.serde import BacSyntaxError, LawViolationError, dumps, loads, to_dot

from _structures import CIRC, CONE, EMPTY, PP2, SEG, TWO, VEE

fuzzed = st.integers(min_value=0, max_value=10_000).map(lambda s: fuzz_bac(s, 12))


class TestDumps:
    def test_empty(self):
        assert dumps(empty()) == "[]"

    def test_singleton(self):
        assert dumps(singleton(1)) == "[{0->1} []]"

    def test_seg(self):
        assert dumps(SEG) == "[{0->1,1->2,2->3} [{0->1} [],{0->2} []]]"

    def test_edge_order_is_canonical(self):
        a = Node([Arrow({0: 2}, EMPTY), Arrow({0: 1}, EMPTY)])
        b = Node([Arrow({0: 1}, EMPTY), Arrow({0: 2}, EMPTY)])
        assert dumps(a) == dumps(b) == "[{0->1} [],{0->2} []]"

    def test_injective_on_fixtures(self):
        texts = {dumps(n) for n in (EMPTY, TWO, SEG, CIRC, VEE, PP2, CONE)}
        assert len(texts) == 7


class TestLoads:
    def test_empty(self):
        assert loads("[]") == empty()

    def test_whitespace_tolerated(self):
        text = " [ {0->1, 1->2, 2->3}\n   [ {0->1} [] , {0->2} [] ] ] "
        assert loads(text) == SEG

    def test_syntax_error_position(self):
        with pytest.raises(BacSyntaxError) as err:
            loads("[{0->1} [],\n {0->} []]")
        assert err.value.line == 2
        assert err.value.column > 0

    def test_duplicate_key(self):
        with pytest.raises(BacSyntaxError):
            loads("[{0->1,0->2} []]")

    def test_leading_zero(self):
        with pytest.raises(BacSyntaxError):
            loads("[{0->01} []]")

    def test_missing_base_key(self):
        with pytest.raises(BacSyntaxError):
            loads("[{1->1} []]")

    def test_trailing_garbage(self):
        with pytest.raises(BacSyntaxError):
            loads("[] []")

    def test_law_violation(self):
        with pytest.raises(LawViolationError) as err:
            loads("[{0->1,1->2} [{0->1} [],{0->2} []]]")
        assert any(v.law == "Totality" for v in err.value.report.violations)

    def test_law_violation_supportivity(self):
        with pytest.raises(LawViolationError) as err:
            loads("[{0->1} [],{0->1,1->2} [{0->1} []]]")
        assert any(v.law == "Supportivity" for v in err.value.report.violations)

    @settings(max_examples=60, deadline=None)
    @given(fuzzed)
    def test_round_trip(self, node):
        assert loads(dumps(node)) == node

    @settings(max_examples=30, deadline=None)
    @given(fuzzed)
    def test_print_idempotent(self, node):
        assert dumps(loads(dumps(node))) == dumps(node)


class TestToDot:
    def _node_count(self, dot):
        return sum(1 for line in dot.splitlines() if "shape=box" in line)

    def _edge_count(self, dot):
        return sum(1 for line in dot.splitlines() if " -> " in line)

    def test_empty(self):
        dot = to_dot(empty())
        assert self._node_count(dot) == 1
        assert self._edge_count(dot) == 0

    def test_seg(self):
        dot = to_dot(SEG)
        assert self._node_count(dot) == 3
        assert self._edge_count(dot) == 3

    def test_cone_has_seven_poles(self):
        assert validate(CONE).ok
        assert self._node_count(to_dot(CONE)) == 7

    def test_left_to_right(self):
        assert "rankdir=LR" in to_dot(SEG)

    def test_deterministic(self):
        assert to_dot(CONE) == to_dot(CONE)

    def test_edge_labels_carry_the_dictionary(self):
        dot = to_dot(SEG)
        assert 'label="0->1\\n1->2\\n2->3"' in dot
