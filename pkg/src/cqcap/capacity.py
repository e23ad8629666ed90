"""Capacity with an optional expected-cost budget, via bisection on the multiplier.

The expected cost of the fixed-multiplier optimizer is non-increasing in the
multiplier, so the budget-matching multiplier is found by doubling then
bisecting. The reported capacity composes the inner value with the budget
term; its certificate pairs an explicitly feasible achievable value with a
weak-duality upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import CqChannel, InputDistribution, holevo_quantity
from .errors import BracketFailure, InfeasibleCost
from .solver import (
    FixedLambdaResult,
    IterationTrace,
    SolverConfig,
    TerminationReason,
    solve_fixed_lambda,
)

LAMBDA_TOL_REL = 1e-12
LAMBDA_MAX = 2.0**64
WARM_START_MIX = 1e-6


@dataclass(frozen=True)
class CapacityResult:
    """Capacity value with its optimizer, multiplier, and certificate.

    ``evaluations`` lists every (multiplier, expected cost) pair the outer
    loop solved, in evaluation order; ``outer_iterations`` counts the solves
    beyond the initial unconstrained probe. ``trace`` is the final inner
    solve's iteration trace.
    """

    capacity_bits: float
    probs: InputDistribution
    multiplier: float
    expected_cost: float
    constraint_active: bool
    gap_certificate_bits: tuple
    outer_iterations: int
    termination: TerminationReason
    evaluations: tuple
    trace: IterationTrace


def _cost_tolerance(epsilon: float) -> float:
    return max(1e-8, epsilon)


def _warm_start(probs: np.ndarray) -> np.ndarray:
    # restore strict positivity lost to underflow in a previous solve
    n = probs.size
    return (1.0 - WARM_START_MIX) * probs + WARM_START_MIX / n


def _assert_cost_monotone(evaluations, epsilon: float) -> None:
    ordered = sorted(evaluations)
    slack = 2.0 * epsilon
    for (_, hi_cost), (_, lo_cost) in zip(ordered, ordered[1:]):
        assert lo_cost <= hi_cost + slack, (
            f"expected cost increased along the multiplier grid: {ordered}"
        )


def unconstrained_capacity(ch: CqChannel, epsilon: float = 1e-6,
                           max_iter: int = 1_000_000) -> CapacityResult:
    """Capacity without a cost budget (multiplier fixed at zero)."""
    config = SolverConfig(multiplier=0.0, epsilon=epsilon, max_iter=max_iter)
    res, trace = solve_fixed_lambda(ch, config)
    capacity = min(max(res.value_bits, res.lower_bits), res.upper_bits)
    return CapacityResult(
        capacity_bits=capacity,
        probs=res.probs,
        multiplier=0.0,
        expected_cost=res.expected_cost,
        constraint_active=False,
        gap_certificate_bits=(res.lower_bits, res.upper_bits),
        outer_iterations=0,
        termination=res.termination,
        evaluations=((0.0, res.expected_cost),),
        trace=trace,
    )


def _feasible_value(ch: CqChannel, res: FixedLambdaResult, cost_limit: float) -> float:
    """Holevo value of a distribution made exactly feasible; a true lower bound."""
    probs = res.probs.probs
    cost = float(ch.costs @ probs)
    if cost <= cost_limit:
        return holevo_quantity(ch, probs)
    cheapest = int(np.argmin(ch.costs))
    cheapest_cost = float(ch.costs[cheapest])
    share = (cost - cost_limit) / (cost - cheapest_cost)
    mixed = (1.0 - share) * probs
    mixed[cheapest] += share
    return holevo_quantity(ch, mixed / mixed.sum())


def _constrained_result(ch, res, trace, multiplier, cost_limit, evaluations,
                        extra_upper=None) -> CapacityResult:
    dual_value = res.value_bits + multiplier * cost_limit
    upper = res.upper_bits + multiplier * cost_limit
    if extra_upper is not None:
        upper = min(upper, extra_upper)
    lower = _feasible_value(ch, res, cost_limit)
    capacity = min(max(dual_value, lower), upper)
    return CapacityResult(
        capacity_bits=capacity,
        probs=res.probs,
        multiplier=multiplier,
        expected_cost=res.expected_cost,
        constraint_active=True,
        gap_certificate_bits=(lower, upper),
        outer_iterations=len(evaluations) - 1,
        termination=res.termination,
        evaluations=tuple(evaluations),
        trace=trace,
    )


def constrained_capacity(ch: CqChannel, cost_limit: float, epsilon: float = 1e-6,
                         max_iter: int = 1_000_000) -> CapacityResult:
    """Capacity subject to expected cost <= cost_limit.

    Solves at multiplier zero first; when that optimizer already fits the
    budget the constraint is inactive. Otherwise the multiplier is doubled
    until the cost drops below the budget, then bisected until the cost
    matches the budget within ``max(1e-8, epsilon)``. Inner solves run at
    ``epsilon / 2`` and warm-start from the previous multiplier's optimizer.
    If the multiplier interval collapses before the cost matches (the
    optimizer cost jumps across the budget), the feasible endpoint is
    returned with a certificate widened to cover both endpoints.
    """
    min_cost = float(ch.costs.min())
    if cost_limit < min_cost:
        raise InfeasibleCost(
            f"budget {cost_limit!r} below the cheapest letter cost {min_cost!r}"
        )
    cost_tol = _cost_tolerance(epsilon)
    inner_eps = epsilon / 2.0

    def solve(multiplier, start=None):
        config = SolverConfig(multiplier=multiplier, epsilon=inner_eps,
                              max_iter=max_iter)
        return solve_fixed_lambda(ch, config, initial=start)

    res0, trace0 = solve(0.0)
    evaluations = [(0.0, res0.expected_cost)]
    if res0.expected_cost <= cost_limit + cost_tol:
        capacity = min(max(res0.value_bits, res0.lower_bits), res0.upper_bits)
        return CapacityResult(
            capacity_bits=capacity,
            probs=res0.probs,
            multiplier=0.0,
            expected_cost=res0.expected_cost,
            constraint_active=False,
            gap_certificate_bits=(res0.lower_bits, res0.upper_bits),
            outer_iterations=0,
            termination=res0.termination,
            evaluations=tuple(evaluations),
            trace=trace0,
        )

    def finish(res, trace, multiplier, extra_upper=None):
        _assert_cost_monotone(evaluations, epsilon)
        return _constrained_result(ch, res, trace, multiplier, cost_limit,
                                   evaluations, extra_upper)

    # bracket: double the multiplier until the optimizer fits the budget
    lam_lo, res_lo = 0.0, res0
    lam_hi = 1.0
    warm = res0.probs.probs
    while True:
        res_hi, trace_hi = solve(lam_hi, _warm_start(warm))
        evaluations.append((lam_hi, res_hi.expected_cost))
        warm = res_hi.probs.probs
        if abs(res_hi.expected_cost - cost_limit) <= cost_tol:
            return finish(res_hi, trace_hi, lam_hi)
        if res_hi.expected_cost < cost_limit:
            break
        lam_lo, res_lo = lam_hi, res_hi
        lam_hi *= 2.0
        if lam_hi > LAMBDA_MAX:
            raise BracketFailure(
                f"expected cost stayed above {cost_limit!r} up to multiplier {LAMBDA_MAX}"
            )

    # bisect: cost(lam_lo) > budget > cost(lam_hi)
    while lam_hi - lam_lo > LAMBDA_TOL_REL * max(1.0, lam_hi):
        mid = 0.5 * (lam_lo + lam_hi)
        res_mid, trace_mid = solve(mid, _warm_start(warm))
        evaluations.append((mid, res_mid.expected_cost))
        warm = res_mid.probs.probs
        if abs(res_mid.expected_cost - cost_limit) <= cost_tol:
            return finish(res_mid, trace_mid, mid)
        if res_mid.expected_cost > cost_limit:
            lam_lo, res_lo = mid, res_mid
        else:
            lam_hi, res_hi, trace_hi = mid, res_mid, trace_mid

    # interval collapsed without matching the budget: the optimizer cost jumps
    # across it (non-unique inner maximizer); report the feasible endpoint with
    # a certificate covering both endpoint values
    widened_upper = max(
        res_lo.upper_bits + lam_lo * cost_limit,
        res_hi.upper_bits + lam_hi * cost_limit,
    )
    result = finish(res_hi, trace_hi, lam_hi, extra_upper=None)
    lower = min(
        result.gap_certificate_bits[0],
        res_lo.value_bits + lam_lo * cost_limit,
        res_hi.value_bits + lam_hi * cost_limit,
    )
    return CapacityResult(
        capacity_bits=min(max(result.capacity_bits, lower), widened_upper),
        probs=result.probs,
        multiplier=result.multiplier,
        expected_cost=result.expected_cost,
        constraint_active=True,
        gap_certificate_bits=(lower, widened_upper),
        outer_iterations=result.outer_iterations,
        termination=result.termination,
        evaluations=result.evaluations,
        trace=result.trace,
    )
