"""
Exact integration of the first-order system

    a' = F exp(-2ikx) b,    b' = F exp(2ikx) a,    a(-inf) = 1, b(-inf) = 0

as the matrix ODE G' = M G with the classical fourth-order Runge-Kutta
scheme. One step spans two grid intervals and uses the middle sample as
the midpoint stage, so no value of F is ever interpolated. Steps are
turned into 2x2 panel propagators and multiplied together: prefix scans
give the profiles, pairwise tree reduction gives the final matrices.
Gaps between segments propagate exactly as the identity.
"""

try:
    import csv
    import logging
    from dataclasses import dataclass

    import numpy as np

    from utilities_common import constants
    from utilities_common.exception import ConfigurationError, IntegrationError
    from signal_model.sampling import sample_block
    from spectral_tools.fit import Envelope, FitResult, fit_inverse_law, inverse_law_window, quadratic_envelope
    from .transfer import TransferMatrix
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

PANEL_CHUNK = 1 << 18
FAR_XI_STEP = 0.25

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


# ===== Panel propagators =====

def _coefficients(ks, x, f):
    """M(x) = F(x) [[0, exp(-2ikx)], [exp(2ikx), 0]] for every (k, x)"""
    phase = np.exp(-2j * np.outer(ks, x))
    out = np.zeros((len(ks), x.size, 2, 2), dtype=complex)
    out[..., 0, 1] = phase * f
    out[..., 1, 0] = np.conj(phase) * f
    return out


def _panel_samples(signal, index, stride):
    values = signal.values[index]
    if (values.size - 1) % (2 * stride):
        raise ConfigurationError("Segment of {} samples cannot be split into panels of stride {}".format(
            values.size, stride))
    return signal.segment_positions(index)[::stride], values[::stride]


def _panels(ks, x, f, h):
    """RK4 one-step propagators R = I + h/6 (K1 + 2 K2 + 2 K3 + K4)"""
    m0 = _coefficients(ks, x[0:-1:2], f[0:-1:2])
    mm = _coefficients(ks, x[1::2], f[1::2])
    m1 = _coefficients(ks, x[2::2], f[2::2])
    k1 = m0
    k2 = mm + 0.5 * h * (mm @ k1)
    k3 = mm + 0.5 * h * (mm @ k2)
    k4 = m1 + h * (m1 @ k3)
    out = (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    out[..., 0, 0] += 1.0
    out[..., 1, 1] += 1.0
    return out


def _reduce(panels):
    """Ordered product, later panels on the left"""
    while panels.shape[-3] > 1:
        if panels.shape[-3] % 2:
            eye = np.broadcast_to(np.eye(2, dtype=complex), panels.shape[:-3] + (1, 2, 2))
            panels = np.concatenate([panels, eye], axis=-3)
        panels = panels[..., 1::2, :, :] @ panels[..., 0::2, :, :]
    return panels[..., 0, :, :]


def _prefix(panels):
    """Inclusive running products R_i ... R_1 along the panel axis"""
    out = panels.copy()
    shift = 1
    while shift < out.shape[-3]:
        out[..., shift:, :, :] = out[..., shift:, :, :] @ out[..., :-shift, :, :]
        shift *= 2
    return out


def propagator(signal, ks, stride=1):
    """Total propagators G(k) over the whole signal, shape (len(ks), 2, 2)"""
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    for k in ks:
        signal.require_resolved(float(k))
    total = np.broadcast_to(np.eye(2, dtype=complex), (ks.size, 2, 2)).copy()
    h = 2.0 * stride * signal.dx
    for index in range(signal.segment_count):
        x, f = _panel_samples(signal, index, stride)
        if not np.any(f):
            continue
        chunk = max(1, PANEL_CHUNK // x.size)
        for start in range(0, ks.size, chunk):
            part = slice(start, start + chunk)
            total[part] = _reduce(_panels(ks[part], x, f, h)) @ total[part]
    return total


# ===== Profiles =====

@dataclass(frozen=True, eq=False)
class ScatteringProfile:
    """a(x), b(x) at the step ends of the grid, with the final values"""
    k: float
    x: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @property
    def a_inf(self):
        return complex(self.a[-1])

    @property
    def b_inf(self):
        return complex(self.b[-1])

    @property
    def drift(self):
        return float(np.max(np.abs(np.abs(self.a) ** 2 - np.abs(self.b) ** 2 - 1.0)))

    def maximum(self):
        """(max |a|, position, max |b|, position); first position on ties"""
        ia = int(np.argmax(np.abs(self.a)))
        ib = int(np.argmax(np.abs(self.b)))
        return float(abs(self.a[ia])), float(self.x[ia]), float(abs(self.b[ib])), float(self.x[ib])

    def value_at(self, position):
        index = int(np.searchsorted(self.x, position, side='right')) - 1
        if index < 0:
            return 1.0 + 0j, 0j
        return complex(self.a[index]), complex(self.b[index])

    def to_csv(self, stream):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['x', 're_a', 'im_a', 're_b', 'im_b'])
        for position, a, b in zip(self.x, self.a, self.b):
            writer.writerow(['{:.17g}'.format(v) for v in (position, a.real, a.imag, b.real, b.imag)])


def integrate_system(signal, k, step_policy=1, drift_limit=constants.CONSERVATION_FAILURE):
    """
    a(x), b(x) for one k

    :param step_policy: stride s; each step spans 2 s grid intervals
    :raises IntegrationError: when | |a|^2 - |b|^2 - 1 | exceeds drift_limit
    """
    stride = int(step_policy)
    if stride < 1:
        raise ConfigurationError("Step stride must be a positive integer, got {!r}".format(step_policy))
    signal.require_resolved(k)
    h = 2.0 * stride * signal.dx
    current = np.eye(2, dtype=complex)
    xs, a_parts, b_parts = [], [], []
    for index in range(signal.segment_count):
        x, f = _panel_samples(signal, index, stride)
        xs.append(x[::2])
        if np.any(f):
            running = _prefix(_panels([k], x, f, h)[0]) @ current
            column = np.concatenate([current[None, :, 0], running[:, :, 0]])
            current = running[-1]
        else:
            column = np.broadcast_to(current[:, 0], (x[::2].size, 2))
        a_parts.append(column[:, 0])
        b_parts.append(column[:, 1])

    profile = ScatteringProfile(k=float(k), x=np.concatenate(xs),
                                a=np.concatenate(a_parts), b=np.concatenate(b_parts))
    drift = profile.drift
    if drift > drift_limit:
        raise IntegrationError("Conservation drift {:.3e} at k={!r} exceeds {:.0e}".format(drift, k, drift_limit),
                               drift=drift)
    log.debug("Integrated k={!r}: a(+inf)={!r}, b(+inf)={!r}, drift={:.3e}".format(
        k, profile.a_inf, profile.b_inf, drift))
    return profile


def scattering_coefficients(signal, ks, stride=1):
    """(a(+inf), b(+inf)) arrays over a k grid"""
    total = propagator(signal, ks, stride)
    return total[:, 0, 0].copy(), total[:, 1, 0].copy()


# ===== Per-block transfer matrices =====

def block_transfer(spec, j, k, oversample=1.0, signal=None):
    """
    G_j(+inf): the system integrated over block j from identity data

    :param signal: sampled chirp to take block j from; sampled afresh when
        omitted
    """
    if signal is None:
        signal = sample_block(spec, j, max(3.0 * spec.a, abs(k)), oversample)
    else:
        signal = signal.block(j)
    return TransferMatrix(propagator(signal, [k])[0])


def far_offset(spec, level, detuning=1.0):
    """
    Smallest |j - j0| >= sqrt(N) from which on 1/2 |phi_hat| stays below level

    Block j sits at least A |j - j0| - detuning away from k in N k, so its
    near-branch transform is bounded by the tail supremum of |phi_hat| from
    there. None when no offset up to N qualifies.
    """
    start = max(spec.a * spec.root - detuning, 0.0)
    stop = spec.a * (spec.n + 1)
    xi = np.arange(start, stop + FAR_XI_STEP, FAR_XI_STEP)
    tail = 0.5 * np.maximum.accumulate(np.abs(spec.bump.fourier(xi))[::-1])[::-1]
    for offset in range(spec.root, spec.n + 1):
        index = int(np.searchsorted(xi, spec.a * offset - detuning))
        if index < xi.size and tail[index] <= level:
            return offset
    return None


@dataclass(frozen=True)
class TransferSurvey:
    """
    fit            inverse-law fit of Im(G_11 - 1) carrying the lower R2 of both diagonals
    *_envelope     Envelope of the named quantity against K / (j - j0)^2
    far_offset     smallest |j - j0| counted as far, None when no block qualifies
    far_deviation  largest off-diagonal entry over the far blocks
    """
    j0: int
    fit: FitResult
    constant_11: float
    constant_22: float
    real_envelope: Envelope
    off_envelope: Envelope
    norm_envelope: Envelope
    far_offset: int
    far_deviation: float
    transfers: dict

    @property
    def far_blocks(self):
        if self.far_offset is None:
            return 0
        return sum(1 for j in self.transfers if abs(j - self.j0) >= self.far_offset)


def transfer_survey(spec, k, j0, window=None, oversample=1.0, signal=None, far_level=None):
    """
    Fit the diagonal law G_j(+inf) ~ diag(1 + iC/(j - j0), 1 - iC/(j - j0))

    Re(G_11 - 1), the off-diagonal entries and ||G_j|| - 1 are measured
    against K / (j - j0)^2 envelopes fitted on the inner half of the window.
    far_deviation is the largest off-diagonal entry over the blocks at or
    beyond far_offset(spec, far_level), at least sqrt(N) away from j0.
    """
    if abs(spec.n * k - spec.a * j0) > 1.0 + 1e-12:
        raise ConfigurationError("k={!r} is not within 1/N of the carrier of block {}".format(k, j0))
    window = inverse_law_window(spec.n) if window is None else window
    if window[0] < 1:
        raise ConfigurationError("Window {} must exclude j0".format(tuple(window)))

    transfers = {j: block_transfer(spec, j, k, oversample, signal) for j in spec.blocks}
    offsets = {j - j0: g for j, g in transfers.items()}

    diag_11 = {d: complex(g[0, 0] - 1.0).imag for d, g in offsets.items()}
    diag_22 = {d: complex(g[1, 1] - 1.0).imag for d, g in offsets.items()}
    fit_11 = fit_inverse_law(diag_11, window)
    fit_22 = fit_inverse_law(diag_22, window)

    lo, hi = window
    inside = {d: g for d, g in offsets.items() if d != 0 and lo <= abs(d) <= hi}
    real_envelope = quadratic_envelope({d: complex(g[0, 0]).real - 1.0 for d, g in inside.items()})
    off_envelope = quadratic_envelope({d: g.off_diagonal() for d, g in inside.items()})
    norm_envelope = quadratic_envelope({d: g.operator_norm() - 1.0 for d, g in inside.items()})

    far_from = None
    if far_level is not None:
        far_from = far_offset(spec, far_level, abs(spec.n * k - spec.a * j0))
    far = [g.off_diagonal() for d, g in offsets.items() if far_from is not None and abs(d) >= far_from]
    far_deviation = max(far) if far else 0.0

    envelope = excess = None
    if fit_11.excess is not None:
        envelope = max(fit_11.envelope, fit_22.envelope)
        excess = max(fit_11.excess, fit_22.excess)
    fit = FitResult(constant=fit_11.constant.real, residual=fit_11.residual, window=fit_11.window,
                    r2=min(fit_11.r2, fit_22.r2), envelope=envelope, points=fit_11.points, excess=excess)
    return TransferSurvey(j0=int(j0), fit=fit, constant_11=fit_11.constant.real, constant_22=-fit_22.constant.real,
                          real_envelope=real_envelope, off_envelope=off_envelope, norm_envelope=norm_envelope,
                          far_offset=far_from, far_deviation=far_deviation, transfers=transfers)


def transfer_asymptotics(spec, k, j0, window=None, oversample=1.0, signal=None):
    return transfer_survey(spec, k, j0, window, oversample, signal).fit

