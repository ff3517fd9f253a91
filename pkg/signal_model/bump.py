"""
Smooth compactly supported bump profiles and their Fourier transforms

The transform convention throughout the package is

    phi_hat(xi) = integral exp(-2 i xi x) phi(x) dx

All profiles are even, so phi_hat is real.
"""

try:
    import functools
    import logging
    from dataclasses import dataclass

    import numpy as np
    from scipy import integrate
    from scipy import signal as sp_signal

    from utilities_common import constants
    from utilities_common.exception import BumpError, SelectionError
    from spectral_tools.report import Report
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

# ===== Constants =====

# exp(-sigma / (1 - (4x)^2)) on |x| < 1/4
BUMP_SHAPES = {
    constants.BUMP_KIND_EXPONENTIAL: 1.0,
    constants.BUMP_KIND_SHARP: 4.0,
}

# phi_hat decays like exp(-sqrt(xi / 2)); beyond this frequency the shifted
# sums of the A-condition change by less than 1e-12
XI_LATTICE_MAX = 2048.0
CZT_BLOCK = 65536
EVAL_CHUNK = 1 << 22

log = logging.getLogger(constants.SYSLOG_IDENTIFIER)


# ===== Profiles =====

def _unnormalized(x, sigma):
    x = np.asarray(x, dtype=float)
    u = 4.0 * x
    out = np.zeros(np.shape(u))
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(-sigma / (1.0 - u[inside] ** 2))
    return out


@functools.lru_cache(maxsize=8)
def _fourier_table(sigma, norm, nodes):
    x = np.linspace(-constants.BUMP_RADIUS, constants.BUMP_RADIUS, nodes)
    h = x[1] - x[0]
    # end nodes carry phi = 0, so plain h weights are the trapezoid rule
    weighted = h * _unnormalized(x, sigma) / norm
    x.setflags(write=False)
    weighted.setflags(write=False)
    return x, weighted


@dataclass(frozen=True)
class BumpProfile:
    """Nonnegative even bump of mass one supported on [-1/4, 1/4]"""
    kind: str
    sigma: float
    norm: float
    tol: float
    radius: float = constants.BUMP_RADIUS

    def __call__(self, x):
        return _unnormalized(x, self.sigma) / self.norm

    @property
    def peak(self):
        return float(np.exp(-self.sigma) / self.norm)

    def table(self):
        return _fourier_table(self.sigma, self.norm, constants.BUMP_QUADRATURE_NODES)

    def mass(self):
        _, weighted = self.table()
        return float(np.sum(weighted))

    def l2_norm_sq(self):
        value, _ = integrate.quad(lambda x: self(x) ** 2, -self.radius, self.radius,
                                  epsabs=1e-14, epsrel=1e-12, limit=200)
        return value

    def fourier(self, xi):
        return bump_fourier(self, xi)


def make_bump(kind=constants.BUMP_KIND_EXPONENTIAL, tol=constants.DEFAULT_BUMP_TOL, sigma=None):
    """
    Build a bump profile of the given kind normalized to mass one

    :param kind: one of BUMP_SHAPES
    :param tol: absolute tolerance on the normalization quadrature
    :param sigma: shape parameter overriding the kind's default
    """
    if kind not in BUMP_SHAPES:
        raise BumpError("Unknown bump kind '{}', expected one of: {}".format(
            kind, ', '.join(sorted(BUMP_SHAPES))))
    if tol <= 0:
        raise BumpError("Bump tolerance must be positive, got {}".format(tol))

    sigma = BUMP_SHAPES[kind] if sigma is None else float(sigma)
    if sigma <= 0:
        raise BumpError("Bump shape parameter must be positive, got {}".format(sigma))

    half, abserr = integrate.quad(_unnormalized, 0.0, constants.BUMP_RADIUS, args=(sigma,),
                                  epsabs=tol * 1e-3, epsrel=1e-13, limit=200)
    norm = 2.0 * half
    if not np.isfinite(norm) or norm <= 0 or 2.0 * abserr > tol * norm:
        raise BumpError("Normalization of '{}' bump did not converge: estimate {}, error {}".format(
            kind, norm, 2.0 * abserr))

    profile = BumpProfile(kind=kind, sigma=sigma, norm=norm, tol=tol)
    mass_error = abs(profile.mass() - 1.0)
    if mass_error > tol:
        raise BumpError("Bump mass off by {} (tolerance {})".format(mass_error, tol))

    log.debug("Bump '{}' built: sigma={}, norm={!r}, peak={!r}".format(kind, sigma, norm, profile.peak))
    return profile


# ===== Fourier transforms =====

def bump_fourier(profile, xi):
    """
    phi_hat at one frequency or an array of frequencies

    Trapezoid sum over the precomputed node table. The integrand and all its
    derivatives vanish at the support ends, so the sum converges spectrally.
    """
    x, weighted = profile.table()
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    flat = xi_arr.ravel()
    out = np.empty(flat.shape)
    chunk = max(1, EVAL_CHUNK // x.size)
    for start in range(0, flat.size, chunk):
        part = flat[start:start + chunk]
        out[start:start + chunk] = np.cos(2.0 * np.outer(part, x)) @ weighted
    out = out.reshape(xi_arr.shape)
    if np.ndim(xi) == 0:
        return complex(out[0])
    return out.astype(complex)


@functools.lru_cache(maxsize=4)
def fourier_lattice(profile, step, count):
    """
    phi_hat(m * step) for m = 0 .. count-1

    Evaluated blockwise with the chirp-z transform, which is the same node
    sum as bump_fourier on a uniform frequency lattice.
    """
    x, weighted = profile.table()
    h = x[1] - x[0]
    out = np.empty(count)
    w = np.exp(-2j * step * h)
    for m0 in range(0, count, CZT_BLOCK):
        m = min(CZT_BLOCK, count - m0)
        a = np.exp(2j * m0 * step * h)
        block = sp_signal.czt(weighted, m=m, w=w, a=a)
        phase = np.exp(-2j * (m0 + np.arange(m)) * step * x[0])
        out[m0:m0 + m] = np.real(phase * block)
    out.setflags(write=False)
    return out


# ===== Frequency constant selection =====

@dataclass(frozen=True)
class ASelection:
    value: float
    multiple: int
    step: float
    grid_count: int
    j_max: int
    worst_xi: float
    worst_ratio: float


def _odd_grid(xi_grid_count):
    count = int(xi_grid_count)
    if count % 2 == 0:
        count += 1
    return count, 2.0 / (count - 1)


def _last_term_tail(last, prev):
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.where(prev > 0, last / prev, np.inf)
        tail = np.where(ratio < 1.0, last * ratio / (1.0 - ratio), np.inf)
    return np.where(last == 0.0, 0.0, tail)


def _condition_ratio(centre_values, neighbour_values, margin):
    """margin * (sum + tail) / |phi_hat(xi)| per xi, with the tail per xi"""
    total = neighbour_values.sum(axis=1)
    tail = (_last_term_tail(neighbour_values[:, 0], neighbour_values[:, 1]) +
            _last_term_tail(neighbour_values[:, -1], neighbour_values[:, -2]))
    return margin * (total + tail) / np.abs(centre_values), tail


def _neighbour_orders(j_max):
    return np.concatenate([np.arange(-j_max, 0), np.arange(1, j_max + 1)])


def _lattice_attempt(lattice, half, multiple, j_max, margin):
    centre = np.arange(-half, half + 1)
    idx = np.abs(centre[:, None] - multiple * _neighbour_orders(j_max)[None, :])
    values = np.zeros(idx.shape)
    inside = idx < lattice.size
    values[inside] = np.abs(lattice[idx[inside]])
    ratio, tail = _condition_ratio(lattice[np.abs(centre)], values, margin)
    worst = int(np.argmax(ratio))
    ok = bool(np.all(ratio <= 1.0) and np.all(tail < constants.A_TAIL_LIMIT))
    return ok, worst - half, float(ratio[worst])


def search_a(profile, xi_grid_count=constants.DEFAULT_XI_GRID_COUNT, j_max=constants.DEFAULT_J_MAX,
             ceiling=constants.A_CEILING, margin=constants.A_CONDITION_MARGIN):
    """
    Doubling-then-bisection search for the smallest admissible A

    A is restricted to multiples of the xi grid step, so every shifted
    frequency xi - A j lands on the same lattice and the check is pure
    indexing into one precomputed table.
    """
    if xi_grid_count < constants.DEFAULT_XI_GRID_COUNT:
        raise SelectionError("xi grid needs at least {} points, got {}".format(
            constants.DEFAULT_XI_GRID_COUNT, xi_grid_count))
    if j_max < 2:
        raise SelectionError("j_max must be at least 2, got {}".format(j_max))

    count, step = _odd_grid(xi_grid_count)
    half = (count - 1) // 2
    lattice = fourier_lattice(profile, step, int(XI_LATTICE_MAX / step) + 1)

    multiple = max(1, int(round(constants.A_SEARCH_START / step)))
    lo = 0
    ok, worst, ratio = _lattice_attempt(lattice, half, multiple, j_max, margin)
    while not ok:
        lo = multiple
        multiple *= 2
        if multiple * step > ceiling:
            raise SelectionError("A search exceeded ceiling {} (worst xi {!r}, ratio {!r})".format(
                ceiling, worst * step, ratio), worst_xi=worst * step, ceiling=ceiling)
        ok, worst, ratio = _lattice_attempt(lattice, half, multiple, j_max, margin)

    hi = multiple
    best = (worst, ratio)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        ok, worst, ratio = _lattice_attempt(lattice, half, mid, j_max, margin)
        if ok:
            hi = mid
            best = (worst, ratio)
        else:
            lo = mid

    selection = ASelection(value=hi * step, multiple=hi, step=step, grid_count=count,
                           j_max=j_max, worst_xi=best[0] * step, worst_ratio=best[1])
    log.info("Selected A={!r} (grid {}, j_max {}, worst ratio {!r} at xi={!r})".format(
        selection.value, count, j_max, selection.worst_ratio, selection.worst_xi))
    return selection


def select_A(profile, xi_grid_count=constants.DEFAULT_XI_GRID_COUNT, j_max=constants.DEFAULT_J_MAX,
             ceiling=constants.A_CEILING):
    return search_a(profile, xi_grid_count, j_max, ceiling).value


def check_a_condition(profile, a_value, xi_grid_count=constants.DEFAULT_XI_GRID_COUNT,
                      j_max=constants.DEFAULT_J_MAX, margin=constants.A_CONDITION_MARGIN):
    """
    Re-check margin * sum_{j != 0} |phi_hat(xi - A j)| <= |phi_hat(xi)| on a xi grid

    Lattice multiples of the grid step use the chirp-z table; any other A is
    checked by direct evaluation of the shifted frequencies.
    """
    count, step = _odd_grid(xi_grid_count)
    half = (count - 1) // 2
    multiple = a_value / step
    report = Report()

    if abs(multiple - round(multiple)) < 1e-9 * max(1.0, multiple):
        lattice = fourier_lattice(profile, step, int(XI_LATTICE_MAX / step) + 1)
        ok, worst, ratio = _lattice_attempt(lattice, half, int(round(multiple)), j_max, margin)
        if not ok and ratio <= 1.0:
            # tail above the certification limit
            ratio = float('inf')
        worst_xi = worst * step
        path = 'lattice'
    else:
        xi = np.linspace(-1.0, 1.0, count)
        shifted = xi[:, None] - a_value * _neighbour_orders(j_max)[None, :]
        values = np.zeros(shifted.shape)
        near = np.abs(shifted) <= XI_LATTICE_MAX
        values[near] = np.abs(bump_fourier(profile, shifted[near]))
        ratios, _ = _condition_ratio(np.real(bump_fourier(profile, xi)), values, margin)
        index = int(np.argmax(ratios))
        ratio = float(ratios[index])
        worst_xi = float(xi[index])
        path = 'direct'

    return report.check('a-condition', ratio, 1.0,
                        'A={!r} grid={} path={} worst_xi={!r}'.format(a_value, count, path, worst_xi))
