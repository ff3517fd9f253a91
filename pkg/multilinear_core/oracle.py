"""
Direct tensor quadrature over the simplex, independent of the recursion

Trapezoid weights in every variable; the ordering x_1 < ... < x_n is
enforced by index masks, each tie between consecutive variables halves the
weight. The error expansion of this rule is even in the step, so one
Richardson step (4 S_h - S_2h) / 3 on every other sample brings it to
fourth order.
"""

import numpy as np

from utilities_common import constants
from utilities_common.exception import BudgetError
from .simplex import _check_signals, phase_sign


def _trapezoid_weights(signal, stride):
    weights = []
    for values in signal.values:
        w = np.full(values[::stride].size, stride * signal.dx)
        w[0] *= 0.5
        w[-1] *= 0.5
        weights.append(w)
    return np.concatenate(weights)


def _order_weights(size):
    # 1 strictly above the diagonal, 1/2 on it
    return np.triu(np.ones((size, size)), 1) + 0.5 * np.eye(size)


def _tensor_sum(factors):
    order = len(factors)
    if order == 1:
        return complex(np.sum(factors[0]))
    tie = _order_weights(factors[0].size)
    if order == 2:
        return complex(factors[0] @ tie @ factors[1])
    return complex(np.einsum('a,ab,b,bc,c->', factors[0], tie, factors[1], tie, factors[2], optimize=True))


def _simplex_sum(signals, k, stride):
    weights = _trapezoid_weights(signals[0], stride)
    x = np.concatenate([positions[::stride] for _, positions, _ in signals[0].segments()])
    factors = []
    for m, signal in enumerate(signals, start=1):
        values = np.concatenate([v[::stride] for v in signal.values])
        factors.append(weights * np.exp(-2j * k * phase_sign(m) * x) * values)
    return _tensor_sum(factors)


def brute_force_simplex(signals, k, support_budget=constants.BRUTE_FORCE_SUPPORT_BUDGET,
                        point_budget=constants.BRUTE_FORCE_POINT_BUDGET):
    """
    T_n(signals)(k, +inf) for n <= 3 by tensor quadrature

    :raises BudgetError: support longer than support_budget or more than
        point_budget samples
    """
    signals = list(signals)
    if len(signals) > 3:
        raise BudgetError("Brute-force quadrature supports n <= 3, got {}".format(len(signals)))
    _check_signals(signals, k)
    base = signals[0]
    if base.support_length > support_budget:
        raise BudgetError("Support length {!r} exceeds the budget of {!r}".format(base.support_length, support_budget))
    if base.size > point_budget:
        raise BudgetError("{} samples exceed the budget of {}".format(base.size, point_budget))

    fine = _simplex_sum(signals, k, 1)
    coarse = _simplex_sum(signals, k, 2)
    return (4.0 * fine - coarse) / 3.0
