import math

import numpy as np
import pytest

from cqcap import (
    CqChannel,
    constrained_capacity,
    holevo_quantity,
    random_channel,
    unconstrained_capacity,
)
from cqcap.errors import InfeasibleCost
from helpers import (
    BUDGET_CAPACITY,
    NONORTH_PAIR_CAPACITY,
    binary_entropy_bits,
    nonorthogonal_pair_channel,
    orthogonal_channel,
)


class TestUnconstrainedCapacity:
    @pytest.mark.parametrize("n", [2, 4, 8])
    def test_orthogonal_states_give_log_n(self, n):
        result = unconstrained_capacity(orthogonal_channel(n))
        assert result.capacity_bits == pytest.approx(math.log2(n), abs=1e-6)
        assert not result.constraint_active
        assert result.multiplier == 0.0

    def test_identical_states_give_zero(self):
        rho = np.eye(2) / 2
        result = unconstrained_capacity(CqChannel([rho, rho, rho]))
        assert result.capacity_bits == pytest.approx(0.0, abs=1e-6)

    def test_nonorthogonal_pair(self):
        result = unconstrained_capacity(nonorthogonal_pair_channel())
        assert result.capacity_bits == pytest.approx(NONORTH_PAIR_CAPACITY, abs=1e-6)

    def test_capacity_inside_certificate(self):
        result = unconstrained_capacity(random_channel(3, 3, 17, "mixed"))
        lower, upper = result.gap_certificate_bits
        assert lower <= result.capacity_bits <= upper
        assert upper - lower <= 1e-6


class TestConstrainedCapacity:
    def test_budgeted_orthogonal_pair(self):
        ch = orthogonal_channel(2, costs=[0.0, 1.0])
        result = constrained_capacity(ch, 0.3)
        assert result.constraint_active
        assert result.capacity_bits == pytest.approx(BUDGET_CAPACITY, abs=1e-5)
        assert result.expected_cost == pytest.approx(0.3, abs=1e-6)
        assert result.probs.probs[1] == pytest.approx(0.3, abs=1e-5)
        assert result.multiplier > 0.0

    def test_vacuous_uniform_costs(self):
        ch = CqChannel(orthogonal_channel(2).states, costs=[1.0, 1.0])
        result = constrained_capacity(ch, 1.0)
        assert not result.constraint_active
        assert result.capacity_bits == pytest.approx(1.0, abs=1e-6)

    def test_budget_above_threshold_is_inactive(self):
        ch = orthogonal_channel(2, costs=[0.0, 1.0])
        for budget in (0.5, 0.6):
            result = constrained_capacity(ch, budget)
            assert not result.constraint_active
            assert result.capacity_bits == pytest.approx(1.0, abs=2e-6)
            assert result.expected_cost <= budget + 1e-6

    def test_infeasible_budget_rejected(self):
        ch = orthogonal_channel(2, costs=[0.5, 1.0])
        with pytest.raises(InfeasibleCost):
            constrained_capacity(ch, 0.2)

    def test_matches_scalar_oracle_on_other_budgets(self):
        # orthogonal pure states reduce to maximizing binary entropy at the budget
        ch = orthogonal_channel(2, costs=[0.0, 1.0])
        for budget in (0.1, 0.2, 0.45):
            result = constrained_capacity(ch, budget)
            assert result.capacity_bits == pytest.approx(
                binary_entropy_bits(budget), abs=1e-5
            )

    def test_expected_cost_monotone_in_multiplier(self):
        ch = CqChannel(random_channel(3, 2, 23, "mixed").states, costs=[0.1, 1.0, 0.4])
        result = constrained_capacity(ch, 0.3)
        ordered = sorted(result.evaluations)
        for (_, cost_a), (_, cost_b) in zip(ordered, ordered[1:]):
            assert cost_b <= cost_a + 2e-6

    def test_capacity_monotone_in_budget(self):
        rng = np.random.default_rng(5)
        for i in range(5):
            ch = random_channel(3, 2, 800 + i, "mixed")
            ch = CqChannel(ch.states, rng.random(3))
            budgets = np.sort(ch.costs.min() + rng.random(2) * (ch.costs.max() - ch.costs.min()))
            low = constrained_capacity(ch, float(budgets[0]))
            high = constrained_capacity(ch, float(budgets[1]))
            assert low.capacity_bits <= high.capacity_bits + 2e-6

    def test_consistent_with_unconstrained_when_loose(self):
        ch = CqChannel(random_channel(3, 2, 29, "mixed").states, costs=[0.2, 0.8, 0.5])
        loose = constrained_capacity(ch, 10.0)
        free = unconstrained_capacity(ch)
        assert loose.capacity_bits == pytest.approx(free.capacity_bits, abs=2e-6)
        assert not loose.constraint_active

    def test_strong_duality_value(self):
        ch = orthogonal_channel(2, costs=[0.0, 1.0])
        result = constrained_capacity(ch, 0.3)
        primal = holevo_quantity(ch, result.probs) - result.multiplier * (
            result.expected_cost - 0.3
        )
        assert result.capacity_bits == pytest.approx(primal, abs=2e-6)

    def test_capacity_inside_certificate(self):
        ch = CqChannel(random_channel(3, 2, 31, "mixed").states, costs=[0.0, 1.0, 0.3])
        result = constrained_capacity(ch, 0.25)
        lower, upper = result.gap_certificate_bits
        assert lower - 1e-12 <= result.capacity_bits <= upper + 1e-12

    def test_duplicated_states_with_jumping_cost(self):
        # set-valued optimizer: the cost jumps across the budget, so the
        # bisection interval collapses and the feasible endpoint is returned
        rho = np.eye(2) / 2
        ch = CqChannel([rho, rho], costs=[0.0, 1.0])
        result = constrained_capacity(ch, 0.3, epsilon=1e-3, max_iter=5000)
        lower, upper = result.gap_certificate_bits
        assert result.constraint_active
        assert result.expected_cost <= 0.3 + 1e-3
        assert abs(result.capacity_bits) < 1e-2
        assert lower - 1e-12 <= result.capacity_bits <= upper + 1e-12
