"""
Fourier transforms of sampled signals, F_hat(k) = integral exp(-2ikx) F(x) dx
"""

try:
    import logging
    from dataclasses import dataclass, field

    import numpy as np
    from scipy import integrate

    from utilities_common import constants
    from utilities_common.exception import GridMismatchError
    from spectral_tools.report import Report
    from .chirp import block_fourier_closed_form
    from .sampling import sample_block
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

EVAL_CHUNK = 1 << 22

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


@dataclass(frozen=True, eq=False)
class Spectrum:
    k: np.ndarray
    values: np.ndarray
    convention: str = constants.FACTOR_2_CONVENTION
    notes: tuple = field(default=())

    def __post_init__(self):
        k = np.array(self.k, dtype=float)
        values = np.array(self.values, dtype=complex)
        if k.shape != values.shape or k.ndim != 1:
            raise GridMismatchError("Spectrum grid and values must be 1-d arrays of equal length")
        k.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, 'k', k)
        object.__setattr__(self, 'values', values)

    def __len__(self):
        return self.k.size

    @property
    def step(self):
        if self.k.size < 2:
            raise GridMismatchError("Spectrum needs at least two samples for a step")
        return float(self.k[1] - self.k[0])

    def is_uniform(self, rtol=1e-9):
        if self.k.size < 2:
            return False
        steps = np.diff(self.k)
        return bool(steps[0] > 0 and np.allclose(steps, steps[0], rtol=rtol, atol=0.0))

    def with_values(self, values, notes=()):
        return Spectrum(self.k, values, self.convention, tuple(self.notes) + tuple(notes))

    def symmetry_error(self):
        """max |value(-k) - conj(value(k))| over pairs present on the grid"""
        lookup = {float(kk): v for kk, v in zip(self.k, self.values)}
        errors = [abs(lookup[-kk] - np.conj(v)) for kk, v in lookup.items() if -kk in lookup]
        return max(errors) if errors else 0.0


def _warn_unresolved(signal, k):
    if not signal.resolves(k):
        log.warning("k={!r} is outside the phase-resolved window |k| <= {!r}; "
                    "quadrature accuracy is not guaranteed".format(k, signal.k_max))
        return True
    return False


def fourier_at(signal, k):
    """Composite Simpson value of the transform, segments summed in ascending order"""
    _warn_unresolved(signal, k)
    total = 0j
    for _, x, values in signal.segments():
        total += integrate.simpson(np.exp(-2j * k * x) * values, dx=signal.dx)
    return complex(total)


def fourier_transform(signal, ks):
    """Spectrum of the signal on an arbitrary k grid"""
    ks = np.asarray(ks, dtype=float)
    notes = []
    if ks.size and np.max(np.abs(ks)) > signal.k_max * (1.0 + 1e-12):
        _warn_unresolved(signal, float(ks[np.argmax(np.abs(ks))]))
        notes.append('unresolved-k')
    out = np.zeros(ks.size, dtype=complex)
    for _, x, values in signal.segments():
        chunk = max(1, EVAL_CHUNK // x.size)
        for start in range(0, ks.size, chunk):
            part = ks[start:start + chunk]
            integrand = np.exp(-2j * np.outer(part, x)) * values
            out[start:start + chunk] += integrate.simpson(integrand, dx=signal.dx, axis=1)
    return Spectrum(ks, out, notes=tuple(notes))


def verify_block_ft(spec, j, k_grid, tol=1e-8, oversample=1.0, far_branch=True):
    """
    Compare the quadrature transform of block j against the closed form

    The k grid must lie inside (A/2, 3A); a point outside is reported as a
    failed item rather than raised.
    """
    report = Report()
    k_grid = np.asarray(k_grid, dtype=float)
    outside = k_grid[(k_grid <= spec.a / 2.0) | (k_grid >= 3.0 * spec.a)]
    if outside.size:
        return report.fail('block-ft[{}]'.format(j), 'k={!r} outside (A/2, 3A)'.format(float(outside[0])))

    signal = sample_block(spec, j, 3.0 * spec.a, oversample)
    numeric = fourier_transform(signal, k_grid).values
    closed = block_fourier_closed_form(spec, j, k_grid, far_branch=far_branch)
    deviation = np.abs(numeric - closed)
    worst = int(np.argmax(deviation))
    return report.check('block-ft[{}]'.format(j), float(deviation[worst]), tol,
                        'worst k={!r}'.format(float(k_grid[worst])))
