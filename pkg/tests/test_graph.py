from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    chain,
    cycle_means_nx,
    nx_reaches_t,
    selfloop,
    two_policy,
    walks_terminate,
    zero_cycle,
)
from robust_sp import DEST, RspGraph
from robust_sp.errors import PolicyCapExceeded
from robust_sp.graph import (
    Control,
    augment_termination,
    check_assumption,
    classify_policy,
    cycle_extremes,
    destination_connected,
    is_proper,
    iter_policies,
    policy_subgraph,
    proper_policy_exists,
    some_proper_policy,
    validate_graph,
)
from robust_sp.instances import GenSpec, gen_random
from robust_sp.oracle import brute_force

INF = float("inf")


def small_graphs(target=None):
    return st.builds(
        lambda seed, n: gen_random(GenSpec(seed=seed, n_nodes=n, assumption_target=target)),
        st.integers(0, 10**6),
        st.integers(1, 4),
    )


class TestValidate:
    def test_well_formed(self):
        assert validate_graph(chain()) == []

    def test_empty_successor_set(self):
        g = RspGraph(1, ((Control("u", ()),),))
        assert any("empty successor set" in p for p in validate_graph(g))

    def test_dangling_node(self):
        g = RspGraph.build(4, {x: [("u", [("t", 1)])] for x in range(1, 5)})
        bad = RspGraph(4, ((Control("u", ((7, Fraction(1)),)),),) + g.controls[1:])
        assert any("dangling node" in p for p in validate_graph(bad))

    def test_empty_controls_and_nonfinite(self):
        g = RspGraph(2, ((), (Control("u", ((DEST, float("nan")),)),)))
        probs = validate_graph(g)
        assert any("empty control set" in p for p in probs)
        assert any("non-finite" in p for p in probs)


class TestSubgraph:
    def test_selfloop_arcs(self):
        assert policy_subgraph(selfloop(1), (0,)).edges() == {(1, 1), (1, DEST)}

    def test_chain_arcs(self):
        assert policy_subgraph(chain(), (0, 0)).edges() == {(1, 2), (2, DEST)}

    def test_two_policy_proper_arcs(self):
        assert policy_subgraph(two_policy(0), (1,)).edges() == {(1, DEST)}

    def test_invalid_policy(self):
        with pytest.raises(ValueError):
            policy_subgraph(chain(), (0, 1))


class TestProper:
    def test_examples(self):
        assert is_proper(two_policy(0), (1,))
        assert not is_proper(selfloop(1), (0,))

    def test_two_cycles_improper(self):
        # arcs (1,1), (1,2), (2,1), (2,t)
        g = RspGraph.build(2, {1: [("u", [(1, 1), (2, 1)])], 2: [("u", [(1, 1), ("t", 0)])]})
        assert not is_proper(g, (0, 0))

    @settings(max_examples=60, deadline=None)
    @given(small_graphs())
    def test_matches_walk_enumeration(self, g):
        for mu in iter_policies(g):
            assert is_proper(g, mu) == walks_terminate(g, mu)


class TestCycles:
    @pytest.mark.parametrize("a", [1, 0, -1])
    def test_selfloop_means(self, a):
        ext = cycle_extremes(policy_subgraph(selfloop(a), (0,)))
        assert ext.min_mean == ext.max_mean == a

    def test_acyclic(self):
        ext = cycle_extremes(policy_subgraph(chain(), (0, 0)))
        assert not ext.has_cycles
        assert (ext.min_mean, ext.max_mean) == (INF, -INF)

    @settings(max_examples=60, deadline=None)
    @given(small_graphs())
    def test_against_simple_cycles(self, g):
        for mu in iter_policies(g):
            means = cycle_means_nx(g, mu)
            ext = cycle_extremes(policy_subgraph(g, mu))
            if not means:
                assert not ext.has_cycles
            else:
                assert ext.min_mean == min(means)
                assert ext.max_mean == max(means)


class TestConnected:
    def test_cases(self):
        assert destination_connected(policy_subgraph(selfloop(0), (0,)))
        g = RspGraph.build(1, {1: [("stay", [(1, 0)])]})
        assert not destination_connected(policy_subgraph(g, (0,)))
        assert destination_connected(policy_subgraph(chain(), (0, 0)))

    @settings(max_examples=40, deadline=None)
    @given(small_graphs())
    def test_against_networkx(self, g):
        for mu in iter_policies(g):
            assert destination_connected(policy_subgraph(g, mu)) == nx_reaches_t(g, mu)


class TestClassify:
    def test_examples(self):
        c = classify_policy(selfloop(1), (0,))
        assert not c.is_proper and not c.regular
        c = classify_policy(selfloop(-1), (0,))
        assert not c.is_proper and c.regular
        c = classify_policy(two_policy(0), (1,))
        assert c.is_proper and c.regular

    @settings(max_examples=40, deadline=None)
    @given(small_graphs())
    def test_regular_iff_finite_with_negative_cycles(self, g):
        from robust_sp.evaluation import eval_limsup
        for mu in iter_policies(g):
            c = classify_policy(g, mu)
            if c.is_proper:
                assert c.regular
                continue
            finite = all(abs(v) != INF for v in eval_limsup(g, mu).cost)
            assert c.regular == (c.max_cycle_mean < 0 and finite)


class TestProperExists:
    def test_two_policy(self):
        assert proper_policy_exists(two_policy(0)) == (True, frozenset({DEST, 1}))

    def test_trapped_node(self):
        g = RspGraph.build(2, {1: [("u", [("t", 1)])], 2: [("u", [(1, 1), (2, 1)])]})
        assert proper_policy_exists(g) == (False, frozenset({DEST, 1}))
        assert not any(is_proper(g, mu) for mu in iter_policies(g))

    def test_selfloop(self):
        assert proper_policy_exists(selfloop(1)) == (False, frozenset({DEST}))

    @settings(max_examples=60, deadline=None)
    @given(small_graphs())
    def test_against_enumeration(self, g):
        exists = any(is_proper(g, mu) for mu in iter_policies(g))
        assert proper_policy_exists(g)[0] == exists
        mu = some_proper_policy(g)
        assert (mu is not None) == exists
        if mu is not None:
            assert is_proper(g, mu)


class TestAugment:
    def test_selfloop(self):
        g = augment_termination(selfloop(1), 10)
        assert len(g.U(1)) == 2
        assert proper_policy_exists(g)[0]
        assert validate_graph(g) == []

    def test_default_cost_and_unique_name(self):
        g = RspGraph.build(1, {1: [("terminate", [(1, 2), ("t", 3)])]})
        aug = augment_termination(g)
        assert aug.U(1)[1].name != "terminate"
        assert aug.U(1)[1].arcs == ((DEST, Fraction(1 * 3 + 1)),)

    @settings(max_examples=30, deadline=None)
    @given(small_graphs("A1.1"))
    def test_keeps_optimum_below_bar(self, g):
        bar = Fraction(1000)
        before = brute_force(g).j_hat
        after = brute_force(augment_termination(g, bar)).j_hat
        for b, a in zip(before, after):
            if b < bar:
                assert a == b


class TestAssumptions:
    def test_zero_cycle(self):
        g = zero_cycle()
        assert not check_assumption(g, "A1.1").holds
        assert check_assumption(g, "A4.3").holds

    def test_positive_cycle(self):
        rep = check_assumption(two_policy(2), "A1.1")
        assert rep.holds and rep.witness is None

    def test_nonnegativity_part(self):
        assert check_assumption(chain(), "A5.1").parts["c"]
        rep = check_assumption(chain(-1), "A5.1")
        assert not rep.parts["c"] and not rep.holds

    def test_witness_reported(self):
        rep = check_assumption(two_policy(0), "A1.1")
        assert not rep.holds and rep.witness == (0,)

    def test_regular_family(self):
        assert check_assumption(two_policy(-1), "A2.2").holds
        assert not check_assumption(two_policy(0), "A2.2").holds
        assert not check_assumption(two_policy(0), "A2.3").holds
        assert check_assumption(two_policy(1), "A2.3").holds

    def test_unknown(self):
        with pytest.raises(ValueError):
            check_assumption(chain(), "A9")


def test_policy_cap():
    g = RspGraph.build(3, {x: [("a", [("t", 0)]), ("b", [("t", 1)])] for x in (1, 2, 3)})
    assert len(list(iter_policies(g))) == 8
    with pytest.raises(PolicyCapExceeded):
        iter_policies(g, cap=7)
