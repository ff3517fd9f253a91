"""
Discrete Riesz projection H_- on a uniform k window

The window is zero padded, transformed, cleared of strictly positive
frequencies, and transformed back. The zero and Nyquist bins are halved,
so H_- + H_+ is the identity exactly; applying H_- twice leaves a spectrum
unchanged only when its zero bin already vanishes.
"""

try:
    import logging

    import numpy as np
    from scipy import fft

    from utilities_common import constants
    from utilities_common.exception import GridMismatchError
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


def edge_decay(values):
    peak = np.max(np.abs(values)) if values.size else 0.0
    if peak == 0:
        return 0.0
    return float(max(abs(values[0]), abs(values[-1])) / peak)


def riesz_minus_grid(g, pad=constants.RIESZ_MIN_PAD):
    """
    H_- g for a Spectrum g sampled on a uniform grid

    Truncation error is of the order of the tail mass outside the window
    plus 1 / pad; edges above 1e-6 of the peak are logged and noted on the
    returned Spectrum.
    """
    if not g.is_uniform():
        raise GridMismatchError("Riesz projection needs a uniform, increasing k grid")
    if pad < constants.RIESZ_MIN_PAD:
        raise GridMismatchError("Padding factor must be at least {}, got {}".format(constants.RIESZ_MIN_PAD, pad))

    notes = []
    decay = edge_decay(g.values)
    if decay > constants.RIESZ_EDGE_DECAY:
        log.warning("Spectrum edges at {:.3e} of peak, above {:.0e}; H_- is truncation limited".format(
            decay, constants.RIESZ_EDGE_DECAY))
        notes.append('edge-decay={:.3e}'.format(decay))

    n = g.values.size
    size = int(pad * n)
    transform = fft.fft(g.values, n=size)
    freq = fft.fftfreq(size)
    transform[freq > 0] = 0.0
    transform[0] *= 0.5
    if size % 2 == 0:
        transform[size // 2] *= 0.5
    projected = fft.ifft(transform)[:n]
    return g.with_values(projected, notes)


def riesz_plus_grid(g, pad=constants.RIESZ_MIN_PAD):
    """Complementary projection, g - H_- g"""
    minus = riesz_minus_grid(g, pad)
    return g.with_values(g.values - minus.values, minus.notes)
