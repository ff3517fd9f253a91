"""
Half-line transform of the autocorrelation

    T_2(F, F)(k, +inf) = integral_{w < 0} exp(2ikw) h(w) dw,
    h(w) = integral F(t) F(t - w) dt

This is H_-(|F_hat|^2)(k) computed without a double transform.
"""

try:
    import logging

    import numpy as np
    from scipy import integrate
    from scipy import signal as sp_signal

    from utilities_common import constants
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


def autocorrelation(signal):
    """(lags, h) for lags w <= 0, ascending, last entry at w = 0"""
    _, dense = signal.dense()
    full = signal.dx * sp_signal.correlate(dense, dense, mode='full', method='fft')
    # index len(dense) - 1 is zero lag; h is even
    h = full[:dense.size]
    if h.size % 2 == 0:
        h = np.concatenate([[0.0], h])
    lags = (np.arange(h.size) - (h.size - 1)) * signal.dx
    return lags, h


def correlation_transform(signal, k, lags=None):
    """
    T_2(F, F)(k, +inf) through the autocorrelation

    :param lags: optional precomputed (lags, h) from autocorrelation()
    """
    signal.require_resolved(k)
    w, h = autocorrelation(signal) if lags is None else lags
    if not np.any(h):
        return 0j
    integrand = np.exp(2j * k * w) * h
    return complex(integrate.simpson(integrand, dx=signal.dx))


def correlation_spectrum(signal, ks):
    """correlation_transform on a k grid, sharing one autocorrelation"""
    lags = autocorrelation(signal)
    return np.array([correlation_transform(signal, k, lags) for k in ks], dtype=complex)
