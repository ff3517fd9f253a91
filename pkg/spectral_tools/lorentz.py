"""
Grid estimator of the weak-L2 (Lorentz L^{2,inf}) quasinorm

    ||g||_{2,inf} = sup_lambda lambda * |{k : g(k) > lambda}|^{1/2}

Samples carry trapezoid cells: dk inside the window, dk / 2 at its two
ends, so the cells add up to the window length. Sweeping lambda over the
sorted sample values, the level set just below a value has the measure of
the cells of every sample at or above it.
"""

import numpy as np

from utilities_common.exception import FitError


def cell_measures(count, dk):
    cells = np.full(count, float(dk))
    cells[0] = cells[-1] = 0.5 * dk
    return cells


def weak_l2_quasinorm(samples):
    """
    :param samples: Spectrum with nonnegative real values on a uniform grid
    """
    values = np.real(np.asarray(samples.values))
    if values.size == 0:
        raise FitError("Weak-L2 estimator needs at least one sample")
    if np.any(values < 0) or np.any(np.abs(np.imag(samples.values)) > 0):
        raise FitError("Weak-L2 estimator needs nonnegative real samples")
    if not samples.is_uniform():
        raise FitError("Weak-L2 estimator needs a uniform k grid of at least two samples")

    order = np.argsort(-values, kind='stable')
    measure = np.cumsum(cell_measures(values.size, samples.step)[order])
    return float(np.max(values[order] * np.sqrt(measure)))
