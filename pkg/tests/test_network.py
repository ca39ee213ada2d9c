import random
import warnings
from fractions import Fraction

import pytest

from netlocal.network import (
    Behavior,
    Network,
    affine_dimension,
    behavior_index,
    behavior_unindex,
    cardinality_bound_basic,
    cardinality_bound_refined,
    is_nonsignaling,
    relaxation_size,
)

from conftest import rand_small_network


def bilocal_swap_network() -> Network:
    """Bilocal wiring with the middle party's output written as two bits."""
    return Network((2, 2, 2), (2, 4, 2), ((1, 0), (1, 1), (0, 1)))


def pr_box() -> Behavior:
    net = Network.bell_scenario((2, 2), (2, 2))
    vals = [Fraction(0)] * 16
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    if (a ^ b) == (x & y):
                        vals[behavior_index(net, (x, y), (a, b))] = Fraction(1, 2)
    return Behavior(net, tuple(vals))


class TestIndexing:
    def test_triangle_first_and_last(self):
        net = Network.triangle()
        assert behavior_index(net, (0, 0, 0), (0, 0, 0)) == 0
        assert behavior_index(net, (0, 0, 0), (1, 1, 1)) == 7

    def test_bilocal_first(self):
        net = bilocal_swap_network()
        assert behavior_index(net, (0, 0, 0), (0, 0, 0)) == 0

    def test_round_trip_random_networks(self):
        rng = random.Random(0)
        for _ in range(30):
            net = rand_small_network(rng)
            for k in range(net.dimension):
                xs, outs = behavior_unindex(net, k)
                assert behavior_index(net, xs, outs) == k

    def test_out_of_range_names_party(self):
        net = Network.triangle()
        with pytest.raises(ValueError, match="party 1"):
            behavior_index(net, (0, 0, 0), (0, 5, 0))
        with pytest.raises(ValueError, match="party 2"):
            behavior_index(net, (0, 0, 3), (0, 0, 0))


class TestNonsignaling:
    def test_product_of_locals_is_nonsignaling(self):
        net = Network.bell_scenario((2, 2), (2, 2))
        uniform = Behavior(net, tuple(Fraction(1, 4) for _ in range(16)))
        ok, violations = is_nonsignaling(uniform)
        assert ok and not violations

    def test_signaling_behavior_detected(self):
        # Alice's output copies Bob's input, so Bob's input shifts her marginal
        net = Network.bell_scenario((2, 2), (2, 2))
        vals = [Fraction(0)] * 16
        for x in range(2):
            for y in range(2):
                vals[behavior_index(net, (x, y), (y, 0))] = Fraction(1)
        beh = Behavior(net, tuple(vals))
        ok, violations = is_nonsignaling(beh)
        assert not ok
        assert any(v.party == 1 for v in violations)

    def test_pr_box_is_nonsignaling(self):
        ok, violations = is_nonsignaling(pr_box())
        assert ok, violations


class TestAffineDimension:
    def test_known_values(self):
        assert affine_dimension((1, 1, 1), (2, 2, 2)) == 7
        assert affine_dimension((2, 2, 2), (2, 2, 2)) == 26
        assert affine_dimension((2, 2), (2, 2)) == 8
        assert affine_dimension((1,), (2,)) == 1

    def test_monotone_in_alphabets(self):
        base = affine_dimension((2, 2), (2, 3))
        assert affine_dimension((3, 2), (2, 3)) >= base
        assert affine_dimension((2, 2), (3, 3)) >= base
        assert affine_dimension((2, 3), (2, 3)) >= base


class TestCardinalityBounds:
    def test_basic(self):
        assert cardinality_bound_basic(Network.triangle()) == 9
        assert cardinality_bound_basic(bilocal_swap_network()) == 129
        one = Network((1,), (1,), ((1,),))
        assert cardinality_bound_basic(one) == 2

    def test_refined_triangle(self):
        net = Network.triangle()
        assert [cardinality_bound_refined(net, j) for j in range(3)] == [6, 6, 6]

    def test_refined_two_party_shared_source_warns(self):
        net = Network.bell_scenario((1, 1), (2, 2))
        with pytest.warns(UserWarning, match="every party"):
            assert cardinality_bound_refined(net, 0) == 3

    def test_refined_bilocal(self):
        # full affine dimension 26 minus the unconnected party's dimension 2
        net = Network.bilocal()
        assert cardinality_bound_refined(net, 0) == 24
        assert cardinality_bound_refined(net, 1) == 24

    def test_refined_never_exceeds_affine_dimension(self):
        rng = random.Random(3)
        for _ in range(40):
            net = rand_small_network(rng)
            top = affine_dimension(net.inputs, net.outputs)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                for j in range(net.n):
                    assert cardinality_bound_refined(net, j) <= top


class TestRelaxationSize:
    @pytest.mark.parametrize("rank,dof,side", [(6, 123, 7626), (5, 87, 3828), (4, 57, 1653)])
    def test_values(self, rank, dof, side):
        assert relaxation_size(rank) == (dof, side)

    def test_rejects_nonpositive_rank(self):
        with pytest.raises(ValueError):
            relaxation_size(0)


class TestValidation:
    def test_disconnected_network_warns(self):
        with pytest.warns(UserWarning, match="disconnected"):
            Network((1, 1), (2, 2), ((1, 0), (0, 1)))

    def test_dangling_source_rejected(self):
        with pytest.raises(ValueError):
            Network((1, 1), (2, 2), ((1, 0), (1, 0)))

    def test_behavior_normalization_checked(self):
        net = Network.triangle()
        with pytest.raises(ValueError, match="sums to"):
            Behavior(net, tuple(Fraction(1, 4) for _ in range(8)))
        with pytest.raises(ValueError, match="negative"):
            vals = [Fraction(1, 2)] * 8
            vals[0], vals[1] = Fraction(9, 8), Fraction(-1, 8)
            Behavior(net, (vals[0], vals[1]) + tuple(Fraction(0) for _ in range(6)))
