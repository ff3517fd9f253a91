"""
Multilinear operators over the ordered simplex

    T_n(F_1, ..., F_n)(k, x) = integral_{x_1 < ... < x_n < x}
                               prod_m exp(-2ik(-1)^m x_m) F_m(x_m) dx

realized by the recursion

    W_0 = 1,  W_m(x) = integral_{-inf}^x exp(-2ik(-1)^m t) F_m(t) W_{m-1}(t) dt
"""

try:
    import csv
    import logging
    from dataclasses import dataclass

    import numpy as np
    from scipy import integrate

    from utilities_common import constants
    from utilities_common.exception import GridMismatchError
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


def phase_sign(m):
    """Sign s_m of the phase exp(-2ik s_m x) carried by the m-th variable"""
    return -1 if m % 2 else 1


@dataclass(frozen=True, eq=False)
class SimplexProfile:
    """
    Cumulative profiles W_0..W_n sampled on the signal grid

    x        grid positions, ascending
    w        array (n+1, len(x)); row m is W_m
    """
    k: float
    order: int
    x: np.ndarray
    w: np.ndarray

    @property
    def final(self):
        return complex(self.w[self.order, -1])

    def profile(self, m=None):
        return self.w[self.order if m is None else m]

    def value_at(self, position, m=None):
        """W_m at any position; constant across gaps and zero before the first sample"""
        m = self.order if m is None else m
        index = int(np.searchsorted(self.x, position, side='right')) - 1
        if index < 0:
            return 1.0 + 0j if m == 0 else 0j
        return complex(self.w[m, index])

    def maximum(self, m=None):
        magnitude = np.abs(self.profile(m))
        index = int(np.argmax(magnitude))
        return float(magnitude[index]), float(self.x[index])

    def to_csv(self, stream):
        writer = csv.writer(stream, lineterminator='\n')
        header = ['x']
        for m in range(1, self.order + 1):
            header += ['re_w{}'.format(m), 'im_w{}'.format(m)]
        writer.writerow(header)
        for index, position in enumerate(self.x):
            row = ['{:.17g}'.format(position)]
            for m in range(1, self.order + 1):
                value = self.w[m, index]
                row += ['{:.17g}'.format(value.real), '{:.17g}'.format(value.imag)]
            writer.writerow(row)


def _check_signals(signals, k):
    if not signals:
        raise ValueError("At least one signal is required")
    first = signals[0]
    for other in signals[1:]:
        if not first.same_grid(other):
            raise GridMismatchError("All signals of a simplex integral must share one grid")
    for signal in signals:
        signal.require_resolved(k)


def _cumulative(values, dx):
    real = integrate.cumulative_simpson(values.real, dx=dx, initial=0.0)
    imag = integrate.cumulative_simpson(values.imag, dx=dx, initial=0.0)
    return real + 1j * imag


def t_profile(signals, k):
    """
    All cumulative profiles of T_n(signals)(k, .)

    Each segment is integrated with cumulative Simpson starting from the
    value carried over the preceding gap; nothing is integrated in gaps.
    """
    signals = list(signals)
    _check_signals(signals, k)
    order = len(signals)
    base = signals[0]
    x = base.x
    w = np.zeros((order + 1, x.size), dtype=complex)
    w[0] = 1.0

    sizes = [v.size for v in base.values]
    bounds = np.concatenate([[0], np.cumsum(sizes)])
    phases = {}
    for m in range(1, order + 1):
        sign = phase_sign(m)
        carried = 0j
        for index in range(base.segment_count):
            lo, hi = bounds[index], bounds[index + 1]
            if sign not in phases:
                phases[sign] = np.exp(-2j * k * sign * x)
            integrand = phases[sign][lo:hi] * signals[m - 1].values[index] * w[m - 1, lo:hi]
            w[m, lo:hi] = carried + _cumulative(integrand, base.dx)
            carried = w[m, hi - 1]

    x = np.array(x)
    x.setflags(write=False)
    w.setflags(write=False)
    return SimplexProfile(k=float(k), order=order, x=x, w=w)


def t_infinity(signals, k):
    """T_n(signals)(k, +inf)"""
    return t_profile(signals, k).final


def t_max(signal, k, n):
    """
    Grid maximum of |T_n(F, ..., F)(k, x)| over x

    Returns (maximum, position); ties resolve to the smallest position.
    """
    if n not in (1, 2, 3):
        raise ValueError("t_max supports n in {{1, 2, 3}}, got {}".format(n))
    return t_profile([signal] * n, k).maximum()


def factorized_value(spectra):
    """
    Product of (value, sign) pairs, conjugating entries whose sign is negative

    [(z, -1), (w, +1)] gives conj(z) * w.
    """
    spectra = list(spectra)
    if not spectra:
        raise ValueError("factorized_value needs at least one factor")
    product = 1.0 + 0j
    for value, sign in spectra:
        product *= np.conj(value) if sign < 0 else value
    return complex(product)


def factor_signs(order):
    """Conjugation signs of the factorization of T_order over disjoint ordered blocks"""
    return [phase_sign(m) for m in range(1, order + 1)]
