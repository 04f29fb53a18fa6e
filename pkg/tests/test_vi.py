from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import a11_instance, a11_oracle, layered4, selfloop, two_policy, zero_cycle
from robust_sp.bellman import apply_T, inf_vector, leq, zero_vector
from robust_sp.errors import AssumptionViolation, NoProperPolicyError, UnfairSchedule
from robust_sp.graph import augment_termination
from robust_sp.oracle import brute_force
from robust_sp.schedule import Schedule, partition_blocks, singleton_blocks
from robust_sp.vi import is_fixed_point, layer_sets, vi, vi_async, vi_from_infinity


class TestFromInfinity:
    def test_two_policy(self):
        J, mu, tr = vi_from_infinity(two_policy(2))
        assert J == (1,) and mu == (1,) and tr.iterations <= 1

    def test_augmented_selfloop(self):
        J, _, _ = vi_from_infinity(augment_termination(selfloop(1), 10))
        assert J == (10,)

    def test_layered_fixture(self):
        g = layered4()
        J, mu, tr = vi_from_infinity(g)
        assert J == brute_force(g).j_hat == (3, 6, 5, 4)
        assert tr.iterations == 4
        assert tr.layer_sets == [{0}, {1}, {4}, {3}, {2}]

    def test_violations(self):
        with pytest.raises(AssumptionViolation, match="finite termination bound"):
            vi_from_infinity(two_policy(-1))
        with pytest.raises(NoProperPolicyError):
            vi_from_infinity(selfloop(1))

    @pytest.mark.parametrize("seed", range(0, 500, 7))
    def test_suite(self, seed):
        g, o = a11_instance(seed), a11_oracle(seed)
        J, mu, tr = vi_from_infinity(g)
        assert J == o.j_hat and tr.iterations <= g.n
        for a, b in zip(tr.iterates, tr.iterates[1:]):
            assert leq(b, a)
        assert all(leq(o.j_hat, it) for it in tr.iterates)


class TestVi:
    def test_zero_cycle_from_above_and_below(self):
        J, tr = vi(zero_cycle(), (Fraction(3),))
        assert J == (1,) and tr.iterates[1] == (1,)
        J, tr = vi(zero_cycle(), (Fraction(1, 2),))
        assert J == (Fraction(1, 2),) and tr.iterates[1] == tr.iterates[0]

    @pytest.mark.parametrize("seed", range(1, 500, 11))
    def test_from_zero(self, seed):
        J, tr = vi(a11_instance(seed), zero_vector(a11_instance(seed).n))
        assert tr.converged and J == a11_oracle(seed).j_hat

    def test_floating_tolerance(self):
        g = two_policy(2)
        J, tr = vi(g, (0.0,), tol=1e-9)
        assert tr.converged and abs(J[0] - 1) < 1e-9
        assert is_fixed_point(g, J, tol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 499), st.data())
    def test_monotone_start_bracketing(self, seed, data):
        g, o = a11_instance(seed), a11_oracle(seed)
        J0 = tuple(data.draw(st.fractions(-15, 30, max_denominator=3)) for _ in range(g.n))
        TJ = apply_T(g, J0)
        if leq(J0, TJ):
            assert leq(J0, o.j_hat)
        if leq(TJ, J0):
            assert leq(o.j_hat, J0)


class TestAsync:
    def test_layer_order_single_pass(self):
        g = layered4()
        J, tr = vi_async(g, Schedule.in_order([1, 4, 3, 2]))
        assert J == (3, 6, 5, 4)
        assert tr.iterates[4] == J  # four single-node events, one per node

    def test_all_nodes_event_is_synchronous(self):
        g = layered4()
        J, tr = vi_async(g, Schedule.synchronous(4))
        sync_J, _, sync_tr = vi_from_infinity(g)
        assert J == sync_J
        assert tr.iterates == sync_tr.iterates

    def test_unfair(self):
        with pytest.raises(UnfairSchedule):
            vi_async(layered4(), Schedule.in_order([1, 2, 3]))

    @pytest.mark.parametrize("seed", range(0, 500, 5))
    def test_schedule_independence(self, seed):
        g, o = a11_instance(seed), a11_oracle(seed)
        results = set()
        for k in range(2):
            sched = Schedule.random_fair(partition_blocks(g.n, 1 + (seed + k) % g.n), seed=seed + k)
            J, tr = vi_async(g, sched)
            assert tr.converged
            results.add(J)
        J, _ = vi_async(g, Schedule.round_robin(g.n))
        results.add(J)
        assert results == {o.j_hat}


@pytest.mark.parametrize("seed", range(0, 500, 9))
def test_layer_correctness(seed):
    g, o = a11_instance(seed), a11_oracle(seed)
    layers = layer_sets(g, o.optimal_proper)
    _, _, tr = vi_from_infinity(g)
    for k, J in enumerate(tr.iterates):
        covered = set().union(*layers[1:k + 1]) if k else set()
        for x in covered:
            assert J[x - 1] == o.j_hat[x - 1]


def test_singleton_blocks():
    assert singleton_blocks(3) == [{1}, {2}, {3}]
    assert inf_vector(2) == (float("inf"),) * 2
