"""
Identities tying the exact scattering data to the multilinear expansion
"""

try:
    import logging
    import math

    import numpy as np
    from scipy import integrate

    from utilities_common import constants
    from utilities_common.exception import ConfigurationError, TailBudgetError, SeriesRegimeError
    from multilinear_core.simplex import t_infinity, t_profile
    from signal_model.fourier import fourier_at, fourier_transform
    from spectral_tools.fit import fit_ratio
    from spectral_tools.report import Report
    from .system import scattering_coefficients
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


def default_identity_grid(signal, k_window):
    """
    Odd k grid on the window, fine enough to resolve oscillations of
    log|a(k)| on the scale pi / (4 L), L the extent of the signal
    """
    lo, hi = k_window
    first = signal.offsets[0] * signal.dx
    last = (signal.offsets[-1] + signal.values[-1].size - 1) * signal.dx
    extent = max(last - first, signal.dx)
    count = int(math.ceil((hi - lo) / (math.pi / (4.0 * extent)))) + 1
    if count % 2 == 0:
        count += 1
    return np.linspace(lo, hi, max(count, 3))


def identity_ratio(signal, k_window=None, ks=None, tail_budget=constants.TAIL_BUDGET):
    """
    (ratio, tail fraction) for one signal

    ratio = 2 integral_window log|a(k)| dk / integral F^2. The tail fraction
    is the share of the Plancherel mass pi integral F^2 that the window
    misses, mirrored to k < 0.

    :raises TailBudgetError: when the tail fraction exceeds tail_budget
    """
    energy = signal.l2_norm_sq()
    if energy == 0.0:
        return math.nan, 0.0
    if k_window is None:
        k_window = (0.0, signal.k_max)
    if k_window[0] < 0:
        raise ConfigurationError("Identity window must lie in k >= 0, got {}".format(tuple(k_window)))
    ks = default_identity_grid(signal, k_window) if ks is None else np.asarray(ks, dtype=float)
    dk = ks[1] - ks[0]

    a, _ = scattering_coefficients(signal, ks)
    integral = 2.0 * integrate.simpson(np.log(np.abs(a)), dx=dk)
    spectrum = fourier_transform(signal, ks).values
    captured = 2.0 * integrate.simpson(np.abs(spectrum) ** 2, dx=dk)
    total = math.pi * energy
    tail = (total - captured) / total
    if tail > tail_budget:
        raise TailBudgetError("k window {} misses {:.2%} of the spectrum, budget {:.2%}".format(
            tuple(k_window), tail, tail_budget), tail_fraction=tail)

    ratio = integral / energy
    log.debug("Scattering identity: ratio={!r}, tail={:.3e}, {} k points".format(ratio, tail, ks.size))
    return ratio, tail


def scattering_identity_ratio(signals, k_window=None, quadrature=None, tail_budget=constants.TAIL_BUDGET):
    """
    integral log|a_k(+inf)| dk / integral F^2 per signal, averaged

    Zero signals are skipped. The FitResult constant is the mean ratio,
    residual the spread max - min.

    :param quadrature: optional explicit k grid shared by all signals
    """
    ratios = []
    window = (0.0, min(s.k_max for s in signals)) if k_window is None else tuple(k_window)
    for signal in signals:
        ratio, _ = identity_ratio(signal, window, quadrature, tail_budget)
        ratios.append(ratio)
    return fit_ratio(ratios, window)


def series_terms(signal, k, n_max):
    """T_1 .. T_n_max of (F, ..., F) at (k, +inf)"""
    profile = t_profile([signal] * n_max, k)
    return [complex(profile.w[m, -1]) for m in range(1, n_max + 1)]


def series_vs_ode(signal, k, n_max, l1_limit=constants.SERIES_L1_LIMIT):
    """
    Truncated expansions a = 1 + sum_even T_n, b = sum_odd T_n against the ODE

    Passes when the larger deviation is within 2 |F|_1^{n+1} / (n+1)! + 1e-8.

    :raises SeriesRegimeError: when |F|_1 exceeds l1_limit
    """
    if not 1 <= n_max <= constants.SERIES_MAX_ORDER:
        raise ConfigurationError("n_max must be in [1, {}], got {}".format(constants.SERIES_MAX_ORDER, n_max))
    l1 = signal.l1_norm()
    if l1 > l1_limit:
        raise SeriesRegimeError("|F|_1 = {!r} exceeds {!r}; termwise summation is not valid here".format(
            l1, l1_limit))

    a, b = scattering_coefficients(signal, [k])
    terms = series_terms(signal, k, n_max)
    a_series = 1.0 + sum(t for n, t in enumerate(terms, start=1) if n % 2 == 0)
    b_series = sum(t for n, t in enumerate(terms, start=1) if n % 2 == 1)
    error = max(abs(a[0] - a_series), abs(b[0] - b_series))
    bound = 2.0 * l1 ** (n_max + 1) / math.factorial(n_max + 1) + 1e-8
    return Report().check('series[{}]'.format(n_max), error, bound,
                          '|F|_1={:.6g} k={!r}'.format(l1, k))


def quadratic_modulus_identity(signal, k, tol=1e-8):
    """2 Re T_2(F, F)(k, +inf) = |F_hat(k)|^2, relative to 1 + |F_hat|^2"""
    t2 = t_infinity([signal, signal], k)
    modulus = abs(fourier_at(signal, k)) ** 2
    error = abs(2.0 * t2.real - modulus) / (1.0 + modulus)
    return Report().check('quadratic-modulus', error, tol, 'k={!r}'.format(k))
