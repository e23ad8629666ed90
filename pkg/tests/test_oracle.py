import numpy as np
import pytest

from cqcap import (
    CqChannel,
    GridSpec,
    SolverConfig,
    classical_ba,
    diagonal_transition_matrix,
    grid_capacity,
    holevo_quantity,
    random_channel,
    solve_fixed_lambda,
)
from cqcap.errors import AlphabetTooLarge, NoFeasibleGridPoint, NotStochastic
from helpers import (
    BSC_CAPACITY,
    NONORTH_PAIR_CAPACITY,
    nonorthogonal_pair_channel,
    orthogonal_channel,
)


class TestGridCapacity:
    def test_orthogonal_pair(self):
        result = grid_capacity(orthogonal_channel(2), GridSpec(100))
        assert result.value_bits == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(result.argmax.probs, [0.5, 0.5])

    def test_nonorthogonal_pair(self):
        result = grid_capacity(nonorthogonal_pair_channel(), GridSpec(1000))
        assert result.value_bits == pytest.approx(NONORTH_PAIR_CAPACITY, abs=1e-4)

    def test_coarsest_grid_is_exhaustive(self):
        ch = nonorthogonal_pair_channel()
        result = grid_capacity(ch, GridSpec(2))
        candidates = [
            holevo_quantity(ch, p) for p in ([1.0, 0.0], [0.5, 0.5], [0.0, 1.0])
        ]
        assert result.value_bits == pytest.approx(max(candidates), abs=1e-12)

    def test_alphabet_too_large(self):
        with pytest.raises(AlphabetTooLarge):
            grid_capacity(random_channel(5, 2, 1, "pure"), GridSpec(10))

    def test_cost_limit_filters_points(self):
        ch = orthogonal_channel(2, costs=[0.0, 1.0])
        result = grid_capacity(ch, GridSpec(100), cost_limit=0.3)
        assert float(result.argmax.probs[1]) <= 0.3 + 1e-12
        with pytest.raises(NoFeasibleGridPoint):
            grid_capacity(CqChannel(ch.states, [2.0, 3.0]), GridSpec(100), cost_limit=1.0)

    def test_penalty_mode(self):
        ch = orthogonal_channel(2, costs=[0.0, 1.0])
        lam = 0.8
        result = grid_capacity(ch, GridSpec(500, penalty_multiplier=lam))
        grid = np.linspace(0.0, 1.0, 501)
        direct = max(
            holevo_quantity(ch, [1 - q, q]) - lam * q for q in grid
        )
        assert result.value_bits == pytest.approx(direct, abs=1e-12)


class TestClassicalBa:
    def test_identity_channel(self):
        assert classical_ba(np.eye(2)) == pytest.approx(1.0, abs=1e-8)

    def test_binary_symmetric_channel(self):
        w = np.array([[0.9, 0.1], [0.1, 0.9]])
        assert classical_ba(w) == pytest.approx(BSC_CAPACITY, abs=1e-8)

    def test_useless_channel(self):
        w = np.array([[0.3, 0.7], [0.3, 0.7], [0.3, 0.7]])
        assert classical_ba(w) == pytest.approx(0.0, abs=1e-8)

    def test_not_stochastic_rejected(self):
        with pytest.raises(NotStochastic):
            classical_ba(np.array([[0.9, 0.2], [0.1, 0.9]]))
        with pytest.raises(NotStochastic):
            classical_ba(np.array([[1.1, -0.1], [0.5, 0.5]]))


class TestCrossChecks:
    def test_diagonal_channels_match_classical_solver(self):
        for i in range(5):
            ch = random_channel(3 + i % 2, 2 + i % 3, 50 + i, "diagonal")
            res, _ = solve_fixed_lambda(ch, SolverConfig(epsilon=1e-8))
            classical = classical_ba(diagonal_transition_matrix(ch), epsilon=1e-8)
            assert res.value_bits == pytest.approx(classical, abs=1e-6)

    def test_transition_extraction_requires_diagonal(self):
        with pytest.raises(ValueError):
            diagonal_transition_matrix(nonorthogonal_pair_channel())

    def test_grid_sandwiched_by_solver_certificate(self):
        for i in range(10):
            ch = random_channel(2 + i % 2, 2, 70 + i, "mixed")
            res, _ = solve_fixed_lambda(ch, SolverConfig())
            oracle = grid_capacity(ch, GridSpec(500))
            assert oracle.value_bits <= res.upper_bits + 1e-10
            assert res.lower_bits <= oracle.value_bits + oracle.slack_bits
