import random
from fractions import Fraction

import pytest

from netlocal.network import Behavior, ResourceCapError
from netlocal.models import evaluate, minimal_pneq_model, pneq_behavior
from netlocal.triangle import (
    INTERIOR,
    ONE,
    ZERO,
    FeasibilityProblem,
    behavior_support,
    canonical_pattern,
    enumerate_and_prune,
    model_from_parameters,
    numeric_feasibility,
    possibilistic_feasible,
    possible_outcomes,
    support_stabilizer,
    symmetry_group,
)

KNOWN_PATTERN = (
    (ONE, ONE, ONE, ZERO),        # a = beta * gamma
    (ZERO, ZERO, ZERO, ONE),      # b = 1 xor gamma * alpha
    (INTERIOR, ONE, ZERO, INTERIOR),  # c = coin on equal sources, else alpha
)

FULL_SUPPORT = frozenset((a, b, c) for a in range(2) for b in range(2) for c in range(2))


def delta_behavior() -> Behavior:
    net = pneq_behavior().network
    return Behavior(net, (Fraction(1),) + (Fraction(0),) * 7)


class TestPatterns:
    def test_known_pattern_possible_set_is_pneq_support(self):
        assert possible_outcomes(KNOWN_PATTERN) == behavior_support(pneq_behavior())

    def test_all_interior_reaches_everything(self):
        assert possible_outcomes(((INTERIOR,) * 4,) * 3) == FULL_SUPPORT

    def test_support_of_minimal_model_behavior(self):
        assert behavior_support(evaluate(minimal_pneq_model())) == behavior_support(pneq_behavior())


class TestSymmetries:
    def test_group_order(self):
        assert len(symmetry_group()) == 384

    def test_action_commutes_with_possible_outcomes(self):
        rng = random.Random(5)
        group = symmetry_group()
        for _ in range(150):
            pattern = tuple(
                tuple(rng.choice((ZERO, ONE, INTERIOR)) for _ in range(4)) for _ in range(3)
            )
            g = rng.choice(group)
            assert possible_outcomes(g.on_pattern(pattern)) == g.on_support(
                possible_outcomes(pattern)
            )

    def test_canonical_form_is_orbit_invariant(self):
        rng = random.Random(8)
        group = symmetry_group()
        for _ in range(25):
            pattern = tuple(
                tuple(rng.choice((ZERO, ONE, INTERIOR)) for _ in range(4)) for _ in range(3)
            )
            g = rng.choice(group)
            assert canonical_pattern(pattern, group) == canonical_pattern(
                g.on_pattern(pattern), group
            )

    def test_pneq_stabilizer_order(self):
        # 6 party permutations x 8 source flips x global output flip
        assert len(support_stabilizer(behavior_support(pneq_behavior()))) == 96


class TestEnumeration:
    def test_pneq_survivors_include_known_pattern(self):
        survivors = enumerate_and_prune(pneq_behavior())
        stab = support_stabilizer(behavior_support(pneq_behavior()))
        assert canonical_pattern(KNOWN_PATTERN, stab) in survivors
        assert 0 < len(survivors) < 50

    def test_threads_do_not_change_the_survivor_list(self):
        assert enumerate_and_prune(pneq_behavior(), threads=3) == enumerate_and_prune(
            pneq_behavior()
        )

    def test_delta_target_keeps_all_sure_zero_pattern(self):
        survivors = enumerate_and_prune(delta_behavior())
        stab = support_stabilizer(frozenset({(0, 0, 0)}))
        assert canonical_pattern(((ONE,) * 4,) * 3, stab) in survivors

    def test_full_support_keeps_all_interior_pattern(self):
        survivors = enumerate_and_prune(frozenset(FULL_SUPPORT))
        stab = support_stabilizer(FULL_SUPPORT)
        assert canonical_pattern(((INTERIOR,) * 4,) * 3, stab) in survivors


class TestPossibilistic:
    def test_perfect_correlation_is_infeasible(self):
        assert possibilistic_feasible(frozenset({(0, 0, 0), (1, 1, 1)})) is None

    def test_full_support_is_feasible(self):
        witness = possibilistic_feasible(FULL_SUPPORT)
        assert witness is not None
        assert possible_outcomes(witness) == FULL_SUPPORT

    def test_pneq_support_is_feasible(self):
        support = behavior_support(pneq_behavior())
        witness = possibilistic_feasible(support)
        assert witness is not None
        assert possible_outcomes(witness) == support

    def test_monotone_in_cards(self):
        support = frozenset({(0, 0, 0)})
        w222 = possibilistic_feasible(support, (2, 2, 2))
        assert w222 is not None
        w322 = possibilistic_feasible(support, (3, 2, 2), cell_cap=16)
        assert w322 is not None

    def test_perfect_correlation_infeasible_beyond_minimal_cards(self):
        assert (
            possibilistic_feasible(frozenset({(0, 0, 0), (1, 1, 1)}), (3, 2, 2), cell_cap=16)
            is None
        )

    def test_cell_cap(self):
        with pytest.raises(ResourceCapError):
            possibilistic_feasible(FULL_SUPPORT, (3, 3, 3))


class TestNumericFeasibility:
    def test_known_pattern_recovers_exact_model(self):
        model = numeric_feasibility(FeasibilityProblem(KNOWN_PATTERN), pneq_behavior(), seed=0)
        assert model is not None
        assert evaluate(model).values == pneq_behavior().values
        biases = sorted(d[0] for d in model.source_dists)
        assert biases == [Fraction(1, 4), Fraction(1, 3), Fraction(1, 3)]

    def test_all_sure_zero_pattern_hits_delta(self):
        model = numeric_feasibility(
            FeasibilityProblem(((ONE,) * 4,) * 3), delta_behavior(), starts=20, seed=1
        )
        assert model is not None
        assert evaluate(model).values == delta_behavior().values

    def test_all_interior_pattern_cannot_reach_pneq(self):
        result = numeric_feasibility(
            FeasibilityProblem(((INTERIOR,) * 4,) * 3), pneq_behavior(), starts=40, seed=2
        )
        assert result is None

    def test_model_from_parameters_realizes_the_pattern(self):
        model = model_from_parameters(
            FeasibilityProblem(KNOWN_PATTERN),
            (Fraction(1, 3), Fraction(1, 3), Fraction(1, 4)),
            (Fraction(1, 2), Fraction(1, 2)),
        )
        assert evaluate(model).values == pneq_behavior().values
