#!/usr/bin/env python
#
# lib.py
#
# Scenario drivers for the Dirac scattering command-line laboratory
#

try:
    import dataclasses
    import functools
    import math
    import time
    from dataclasses import dataclass

    import numpy as np
    from scipy import optimize

    from utilities_common import constants
    from utilities_common.exception import (
        ConfigurationError, DiracRuntimeException, FitError, ResolutionError, SamplingError
    )
    from utilities_common.parallel import default_workers, run_tasks
    from signal_model.bump import check_a_condition, make_bump, search_a
    from signal_model.chirp import build_chirp, is_perfect_square
    from signal_model.fourier import Spectrum, fourier_at, fourier_transform, verify_block_ft
    from signal_model.sampling import sample_function, sample_signal
    from multilinear_core.oracle import brute_force_simplex
    from multilinear_core.simplex import factor_signs, factorized_value, t_infinity, t_profile
    from multilinear_core.split import t2_split, t3_split
    from spectral_tools.correlation import autocorrelation, correlation_spectrum, correlation_transform
    from spectral_tools.fit import consistent_sign, fit_inverse_law, fit_log_growth, inverse_law_window
    from spectral_tools.lorentz import weak_l2_quasinorm
    from spectral_tools.report import Report
    from spectral_tools.riesz import riesz_minus_grid
    from scattering.identities import (
        identity_ratio, quadratic_modulus_identity, scattering_identity_ratio, series_vs_ode
    )
    from scattering.system import integrate_system, propagator, transfer_survey
    from scattering.transfer import TransferMatrix, compose_product

    from .emit import GrowthRecord, dump_json, dump_profile
    from .log import LogHelper, log
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))

# ========================= Constants ==========================================

SCENARIO_T2 = 't2max'
SCENARIO_T3 = 't3inf'
SCENARIO_BOUNDED = 'bounded'
SCENARIO_VERIFY = 'verify'

RIESZ_PAD = 64
RIESZ_POINTS = 1025
RIESZ_HALF_WIDTH = 100.0
BOUNDED_K_POINTS = 33
BOUNDED_REFINE_STEPS = 20
BOUNDED_K_TOLERANCE = 1e-3
ODE_REFINEMENT = 2
FAR_BLOCK_MARGIN = 0.5
BLOCK_FT_POINTS = 25
JJP_CHECK_MIN_N = 36
SERIES_ORDERS = (2, 4, 6)
TRANSFER_CONSTANT_MATCH = 1e-2
IDENTITY_CHIRP_N = 16

log_helper = LogHelper()

# ========================= Configuration ======================================

@dataclass(frozen=True)
class Tolerances:
    fourier: float = 1e-8
    t2_identity: float = 1e-6
    factorization: float = 1e-8
    brute_force: float = 1e-6
    inverse_law_r2: float = 0.99
    determinant: float = 1e-8
    product: float = 1e-7
    conservation: float = 1e-8
    scattering_ratio: float = 0.05
    tail_budget: float = 0.01
    growth_r2: float = 0.95
    ratio_spread: float = 0.30
    slope_fraction: float = 0.05
    riesz: float = 1e-4
    far_block: float = 1e-4
    jjp_share: float = 1e-4
    envelope: float = 2.0

    @classmethod
    def names(cls):
        return [f.name for f in dataclasses.fields(cls)]

    def override(self, pairs):
        """Copy with (name, value) pairs applied"""
        changes = {}
        for name, value in pairs:
            if name not in self.names():
                raise ConfigurationError("Unknown tolerance '{}', expected one of: {}".format(
                    name, ', '.join(self.names())))
            if not value > 0 or not math.isfinite(value):
                raise ConfigurationError("Tolerance '{}' must be positive, got {!r}".format(name, value))
            changes[name] = float(value)
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a scenario run depends on

    j0 is an absolute block index applied to every N of the list; None
    selects the scenario's default fraction of N.
    """
    scenario: str
    n_list: tuple = constants.DEFAULT_N_LIST
    j0: int = None
    oversample: float = 1.0
    tolerances: Tolerances = Tolerances()
    a_override: float = None
    out: str = constants.STDOUT_PATH
    fmt: str = constants.FORMAT_CSV
    workers: int = 1
    dump_profiles: str = None
    timing: bool = False
    bump_kind: str = constants.BUMP_KIND_EXPONENTIAL
    k_points: int = constants.DEFAULT_K_POINTS
    weak_points: int = constants.DEFAULT_WEAK_POINTS
    xi_grid_count: int = constants.DEFAULT_XI_GRID_COUNT
    j_max: int = constants.DEFAULT_J_MAX

    def __post_init__(self):
        if not self.n_list:
            raise ConfigurationError("N list is empty")
        for n in self.n_list:
            if not is_perfect_square(n):
                raise ConfigurationError("N={} is not a perfect square".format(n))
            if n < constants.MIN_N:
                raise ConfigurationError("N={} is below the minimum of {}".format(n, constants.MIN_N))
        if len(set(self.n_list)) != len(self.n_list):
            raise ConfigurationError("N list {} has duplicates".format(list(self.n_list)))
        if not self.oversample > 0:
            raise ConfigurationError("oversample must be positive, got {!r}".format(self.oversample))
        if self.workers < 1:
            raise ConfigurationError("workers must be positive, got {}".format(self.workers))
        if self.a_override is not None and not self.a_override > 0:
            raise ConfigurationError("A override must be positive, got {!r}".format(self.a_override))
        if self.k_points < 1:
            raise ConfigurationError("k point count must be positive, got {}".format(self.k_points))
        if self.weak_points < 2:
            raise ConfigurationError("weak-L2 grid needs at least 2 points, got {}".format(self.weak_points))
        if self.fmt not in (constants.FORMAT_CSV, constants.FORMAT_JSON):
            raise ConfigurationError("Unknown output format '{}'".format(self.fmt))


def make_config(scenario, n_list=None, tolerances=(), workers=None, **kwargs):
    """
    RunConfig from CLI values

    :param tolerances: (name, value) overrides
    :param workers: None falls back to the environment, then to 1
    """
    if n_list is None:
        n_list = (constants.DEFAULT_IDENTITY_N,) if scenario == SCENARIO_VERIFY else constants.DEFAULT_N_LIST
    workers = default_workers() if workers is None else workers
    return RunConfig(scenario=scenario, n_list=tuple(n_list), tolerances=Tolerances().override(tolerances),
                     workers=workers, **kwargs)


def default_j0(cfg, n, fraction):
    if cfg.j0 is None:
        return int(round(fraction * n))
    if not n <= cfg.j0 <= 2 * n:
        raise ConfigurationError("j0={} outside the blocks [{}, {}] of N={}".format(cfg.j0, n, 2 * n, n))
    return cfg.j0


# ========================= Shared state =======================================

@functools.lru_cache(maxsize=4)
def resolve_bump(kind):
    return make_bump(kind)


@functools.lru_cache(maxsize=8)
def _searched_a(kind, xi_grid_count, j_max):
    return search_a(resolve_bump(kind), xi_grid_count, j_max)


def resolve_a(cfg):
    """The configured A override, or the searched A for the configured bump"""
    if cfg.a_override is not None:
        return float(cfg.a_override)
    return _searched_a(cfg.bump_kind, cfg.xi_grid_count, cfg.j_max).value


def chirp_for(cfg, n):
    return build_chirp(n, resolve_a(cfg), resolve_bump(cfg.bump_kind))


def region_ks(spec, j0, count):
    """count points with |N k - A j0| <= 1, centred on the carrier of block j0"""
    centre = spec.a * j0 / spec.n
    if count == 1:
        return np.array([centre])
    return centre + np.linspace(-1.0, 1.0, count) / spec.n


class _Clock(object):
    def __init__(self, enabled):
        self.enabled = enabled
        self.start = time.perf_counter()

    def elapsed_ms(self):
        if not self.enabled:
            return 0.0
        return round((time.perf_counter() - self.start) * 1000.0, 3)


def _dump(cfg, name, profile):
    if cfg.dump_profiles is not None:
        path = dump_profile(cfg.dump_profiles, name, profile)
        log.debug("Profile written to {}".format(path))


def _run_sizes(cfg, scenario, task):
    def wrapped(n):
        log_helper.log_scenario_start(scenario, n)
        try:
            records = task(cfg, n)
        except Exception as e:
            log_helper.log_scenario_end(scenario, n, False, e)
            raise
        log_helper.log_scenario_end(scenario, n, True)
        return records

    # one A search per process, ahead of the fan-out
    resolve_a(cfg)
    results = run_tasks(wrapped, cfg.n_list, cfg.workers)
    return [record for records in results for record in records]


# ========================= T2 growth ==========================================

def _t2_task(cfg, n):
    clock = _Clock(cfg.timing)
    spec = chirp_for(cfg, n)
    j0 = default_j0(cfg, n, constants.T2_J0_FRACTION)
    signal = sample_signal(spec, 3.0 * spec.a, cfg.oversample)
    x_region = spec.gap_point(j0 - spec.root)

    region = None
    supremum = None
    for k in region_ks(spec, j0, cfg.k_points):
        profile = t_profile([signal, signal], k)
        value = profile.value_at(x_region)
        if region is None or abs(value) > abs(region[1]):
            region = (float(k), value, profile)
        peak, position = profile.maximum()
        if supremum is None or peak > supremum[1]:
            supremum = (float(k), peak, position)

    k_region, value, profile = region
    _dump(cfg, 't2_N{}_j{}.csv'.format(n, j0), profile)
    split = t2_split(signal, spec, k_region, j0)

    weak_ks = np.linspace(spec.a, 2.0 * spec.a, cfg.weak_points)
    sups = [t_profile([signal, signal], k).maximum()[0] for k in weak_ks]
    weak = weak_l2_quasinorm(Spectrum(weak_ks, sups))

    wall = clock.elapsed_ms()
    return [
        GrowthRecord('t2-region', n, j0, k_region, float(x_region), complex(value), wall),
        GrowthRecord('t2-sup', n, j0, supremum[0], supremum[2], complex(supremum[1]), wall),
        GrowthRecord('t2-weak-l2', n, j0, 1.5 * spec.a, constants.X_SUPREMUM, complex(weak), wall),
        GrowthRecord('t2-jj', n, j0, k_region, float(split.x), split.diagonal, wall),
        GrowthRecord('t2-jjp', n, j0, k_region, float(split.x), split.off_diagonal, wall),
    ]


def run_t2_growth(cfg):
    """
    |T_2(F, F)(k, x)| at x = N(j0 - sqrt(N) + 1/2), its supremum over x and
    the weak-L2 size of the supremum over k in [A, 2A], per N
    """
    return _run_sizes(cfg, SCENARIO_T2, _t2_task)


# ========================= T3 growth ==========================================

def _t3_task(cfg, n):
    clock = _Clock(cfg.timing)
    spec = chirp_for(cfg, n)
    j0 = default_j0(cfg, n, constants.T3_J0_FRACTION)
    signal = sample_signal(spec, 3.0 * spec.a, cfg.oversample)

    best = None
    for k in region_ks(spec, j0, cfg.k_points):
        profile = t_profile([signal, signal, signal], k)
        if best is None or abs(profile.final) > abs(best[1].final):
            best = (float(k), profile)
    k_best, profile = best
    _dump(cfg, 't3_N{}_j{}.csv'.format(n, j0), profile)
    split = t3_split(signal, spec, k_best, j0)

    wall = clock.elapsed_ms()
    inf = constants.X_INFINITY
    records = [GrowthRecord('t3-inf', n, j0, k_best, inf, profile.final, wall)]
    for name in ('kkk', 'kkp', 'kpp', 'klm', 'dominant', 'cross'):
        records.append(GrowthRecord('t3-' + name, n, j0, k_best, inf, getattr(split, name), wall))
    envelope = split.kkk_envelope
    records.append(GrowthRecord('t3-kkk-envelope', n, j0, k_best, inf, complex(envelope.excess), wall))
    return records


def run_t3_growth(cfg):
    """|T_3(F, F, F)(k, +inf)| per N with its block split"""
    return _run_sizes(cfg, SCENARIO_T3, _t3_task)


# ========================= Boundedness ========================================

def _bounded_task(cfg, n):
    clock = _Clock(cfg.timing)
    spec = chirp_for(cfg, n)
    j0 = default_j0(cfg, n, constants.T2_J0_FRACTION)
    signal = sample_signal(spec, 3.0 * spec.a, cfg.oversample)
    # one RK4 step spans two grid intervals; the refined grid makes it one interval of the T2 grid
    fine = sample_signal(spec, 3.0 * spec.a, ODE_REFINEMENT * cfg.oversample)
    x_region = spec.gap_point(j0 - spec.root)

    peaks = {}

    def peak_at(k):
        k = float(k)
        if k not in peaks:
            profile = integrate_system(fine, k)
            peaks[k] = profile.maximum() + (profile.drift,)
        return peaks[k]

    ks = region_ks(spec, j0, max(cfg.k_points, BOUNDED_K_POINTS))
    sweep = [peak_at(k)[2] for k in ks]
    best = int(np.argmax(sweep))
    lo, hi = ks[max(best - 1, 0)], ks[min(best + 1, ks.size - 1)]
    if hi > lo:
        optimize.minimize_scalar(lambda k: -peak_at(k)[2], bounds=(lo, hi), method='bounded',
                                 options={'xatol': BOUNDED_K_TOLERANCE / n, 'maxiter': BOUNDED_REFINE_STEPS})

    k_a = max(peaks, key=lambda k: peaks[k][0])
    k_b = max(peaks, key=lambda k: peaks[k][2])
    drift = max(summary[4] for summary in peaks.values())
    log.debug("Bounded N={}: {} k values, max|b| {:.6g} at k={!r}".format(n, len(peaks), peaks[k_b][2], k_b))
    if cfg.dump_profiles is not None:
        _dump(cfg, 'ab_N{}_j{}.csv'.format(n, j0), integrate_system(fine, k_b))

    reference = None
    for k in region_ks(spec, j0, cfg.k_points):
        value = t_profile([signal, signal], k).value_at(x_region)
        if reference is None or abs(value) > abs(reference[1]):
            reference = (float(k), value)

    control = integrate_system(fine.scaled(0.0), k_b)
    control_a, control_a_at, control_b, control_b_at = control.maximum()

    wall = clock.elapsed_ms()
    sup = constants.X_SUPREMUM
    a_max, a_at = peaks[k_a][0], peaks[k_a][1]
    b_max, b_at = peaks[k_b][2], peaks[k_b][3]
    return [
        GrowthRecord('bounded-a', n, j0, k_a, a_at, complex(a_max), wall),
        GrowthRecord('bounded-b', n, j0, k_b, b_at, complex(b_max), wall),
        GrowthRecord('bounded-drift', n, j0, k_b, sup, complex(drift), wall),
        GrowthRecord('bounded-t2-reference', n, j0, reference[0], float(x_region), complex(reference[1]), wall),
        GrowthRecord('bounded-control-a', n, j0, k_b, control_a_at, complex(control_a), wall),
        GrowthRecord('bounded-control-b', n, j0, k_b, control_b_at, complex(control_b), wall),
    ]


def run_boundedness(cfg):
    """max over x of |a_k(x)| and |b_k(x)| per N, with a zero-potential control"""
    return _run_sizes(cfg, SCENARIO_BOUNDED, _bounded_task)


# ========================= Assessment =========================================

def records_of(records, scenario):
    return sorted((r for r in records if r.scenario == scenario), key=lambda r: r.n)


def _growth_checks(report, name, rows, tol):
    sizes = [r.n for r in rows]
    magnitudes = [r.magnitude for r in rows]
    steps = sum(1 for lo, hi in zip(magnitudes, magnitudes[1:]) if not hi > lo)
    report.check('{}-increasing'.format(name), steps, 0, 'non-increasing steps along N={}'.format(sizes))
    fit = fit_log_growth(sizes, magnitudes)
    report.check('{}-slope'.format(name), 0.0 if fit.constant > 0 else 1.0, 0.0,
                  'slope={:.6g} vs log N'.format(fit.constant))
    report.check('{}-r2'.format(name), 1.0 - fit.r2, 1.0 - tol.growth_r2, 'R2={:.6f}'.format(fit.r2))
    report.check('{}-ratio-spread'.format(name), fit.spread, tol.ratio_spread,
                 'magnitude / log N within +-{:.0%}'.format(tol.ratio_spread))
    return fit


def assess_growth(records, scenario, tolerances=Tolerances()):
    """
    Slope, R2, monotonicity and ratio-spread criteria of a growth table

    Fewer than two sizes give an empty report.
    """
    report = Report()
    main = 't2-region' if scenario == SCENARIO_T2 else 't3-inf'
    rows = records_of(records, main)
    if len(rows) < 2:
        return report
    fit = _growth_checks(report, main, rows, tolerances)

    if scenario == SCENARIO_T2:
        weak = records_of(records, 't2-weak-l2')
        weak_fit = fit_log_growth([r.n for r in weak], [r.magnitude for r in weak])
        correlation = math.sqrt(weak_fit.r2) if weak_fit.constant > 0 else 0.0
        report.check('t2-weak-l2-correlation', 1.0 - correlation, 1.0 - tolerances.growth_r2,
                      'correlation with log N {:.6f}'.format(correlation))
        totals = {r.n: r.value for r in records_of(records, 't2-jj')}
        for row in records_of(records, 't2-jjp'):
            if row.n < JJP_CHECK_MIN_N:
                continue
            total = abs(totals.get(row.n, 0j) + row.value)
            share = row.magnitude / total if total else math.inf
            report.check('t2-jjp-share[{}]'.format(row.n), share, tolerances.jjp_share)
    else:
        for piece in ('t3-kkk', 't3-klm'):
            rows = records_of(records, piece)
            piece_fit = fit_log_growth([r.n for r in rows], [r.magnitude for r in rows])
            fraction = max(piece_fit.constant, 0.0) / fit.constant if fit.constant > 0 else math.inf
            report.check('{}-bounded'.format(piece), fraction, tolerances.slope_fraction,
                         'slope {:.6g} against total {:.6g}'.format(piece_fit.constant, fit.constant))
        dominant = records_of(records, 't3-dominant')
        if len(dominant) >= 2:
            dominant_fit = fit_log_growth([r.n for r in dominant], [r.magnitude for r in dominant])
            report.check('t3-dominant-slope', 0.0 if dominant_fit.constant > 0 else 1.0, 0.0,
                         'slope={:.6g} vs log N'.format(dominant_fit.constant))
            report.check('t3-dominant-r2', 1.0 - dominant_fit.r2, 1.0 - tolerances.growth_r2,
                         'R2={:.6f}'.format(dominant_fit.r2))
        for row in records_of(records, 't3-kkk-envelope'):
            report.check('t3-kkk-envelope[{}]'.format(row.n), row.magnitude, tolerances.envelope)
    return report


def assess_contrast(records, tolerances=Tolerances()):
    """max|b| must not follow the log N growth of the T_2 reference"""
    report = Report()
    for row in records_of(records, 'bounded-drift'):
        report.check('conservation[{}]'.format(row.n), row.magnitude, tolerances.conservation)
    for row in records_of(records, 'bounded-control-a'):
        report.check('control-a[{}]'.format(row.n), abs(row.magnitude - 1.0), tolerances.conservation)
    for row in records_of(records, 'bounded-control-b'):
        report.check('control-b[{}]'.format(row.n), row.magnitude, tolerances.conservation)

    bounded = records_of(records, 'bounded-b')
    reference = records_of(records, 'bounded-t2-reference')
    if len(bounded) >= 2:
        b_fit = fit_log_growth([r.n for r in bounded], [r.magnitude for r in bounded])
        t2_fit = fit_log_growth([r.n for r in reference], [r.magnitude for r in reference])
        if t2_fit.constant > 0:
            fraction = max(b_fit.constant, 0.0) / t2_fit.constant
        else:
            fraction = math.inf
        report.check('b-slope-contrast', fraction, tolerances.slope_fraction,
                     'max|b| slope {:.6g}, T2 slope {:.6g}'.format(b_fit.constant, t2_fit.constant))
    return report


# ========================= Identity battery ===================================

def toy_signal(bump, dx=1.0 / 256, k_max=8.0, scale=1.0):
    """Two separated bumps of unit width, the second modulated"""
    def func(x):
        first = bump((x - 0.0) / 2.0)
        second = 0.5 * bump((x - 2.0) / 2.0) * np.cos(3.0 * x)
        return scale * (first + second)
    return sample_function(func, [(-0.5, 0.5), (1.5, 2.5)], dx, k_max)


def single_bump_signal(bump, width=8.0, dx=1.0 / 128, k_max=16.0, scale=1.0):
    """scale * phi(x / width) / width on |x| < width / 4"""
    half = width * bump.radius
    return sample_function(lambda x: scale * bump(x / width) / width, [(-half, half)], dx, k_max)


def _relative(value, reference):
    return abs(value - reference) / (1.0 + abs(reference))


def _block_ft_checks(report, spec, j0, tol, oversample):
    k_grid = np.linspace(0.55 * spec.a, 2.95 * spec.a, BLOCK_FT_POINTS)
    for j in (spec.n, j0, 2 * spec.n):
        report.extend(verify_block_ft(spec, j, k_grid, tol.fourier, oversample))


def _t2_identity_check(report, signal, spec, ks, tol):
    worst = (0.0, None, None)
    for j in spec.blocks:
        block = signal.block(j)
        lags = autocorrelation(block)
        for k in ks:
            error = _relative(correlation_transform(block, k, lags), t_infinity([block, block], k))
            if error > worst[0]:
                worst = (error, j, float(k))
    report.check('t2-identity', worst[0], tol.t2_identity, 'worst block={} k={!r}'.format(worst[1], worst[2]))


def _factorization_checks(report, signal, j0, k, tol):
    lo, mid, hi = j0 - 2, j0, j0 + 3
    grid = [lo, mid, hi]
    f = {j: fourier_at(signal.block(j), k) for j in grid}
    tau = {j: t_infinity([signal.block(j), signal.block(j)], k) for j in grid}
    part = {j: signal.restrict([j], grid) for j in grid}

    pair = t_infinity([part[lo], part[mid]], k)
    expected = factorized_value(zip((f[lo], f[mid]), factor_signs(2)))
    report.check('factorization-jjp', _relative(pair, expected), tol.factorization)

    triple = t_infinity([part[lo], part[mid], part[hi]], k)
    expected = factorized_value(zip((f[lo], f[mid], f[hi]), factor_signs(3)))
    report.check('factorization-klm', _relative(triple, expected), tol.factorization)

    kkp = t_infinity([part[mid], part[mid], part[hi]], k)
    report.check('factorization-kkp', _relative(kkp, tau[mid] * np.conj(f[hi])), tol.factorization)

    kpp = t_infinity([part[lo], part[mid], part[mid]], k)
    expected = np.conj(f[lo]) * (abs(f[mid]) ** 2 - tau[mid])
    report.check('factorization-kpp', _relative(kpp, expected), tol.factorization)


def _brute_force_checks(report, bump, tol):
    toy = toy_signal(bump)
    worst = 0.0
    for n in (1, 2, 3):
        for k in (0.0, 1.3, 4.0):
            error = _relative(brute_force_simplex([toy] * n, k), t_infinity([toy] * n, k))
            worst = max(worst, error)
    report.check('brute-force', worst, tol.brute_force, 'n<=3 on {} samples'.format(toy.size))


def _envelope_text(constant):
    return 'K=n/a' if constant is None else 'K={:.3e}'.format(constant)


def _inverse_law_checks(report, signal, spec, j0, k, tol, fits):
    window = inverse_law_window(spec.n)
    values = {}
    for j in spec.blocks:
        d = j - j0
        if d and window[0] <= abs(d) <= window[1]:
            values[d] = correlation_transform(signal.block(j), k)
    fit = fit_inverse_law(values, window)
    fits['inverse-law'] = fit
    report.check('inverse-law-r2', 1.0 - fit.r2, 1.0 - tol.inverse_law_r2,
                 'c={!r} {}'.format(fit.constant, _envelope_text(fit.envelope)))
    magnitude = abs(fit.constant)
    report.check('inverse-law-nonzero', 1e-12 / magnitude if magnitude else math.inf, 1.0,
                 '|c|={:.6g}'.format(magnitude))
    report.check('inverse-law-sign', 0.0 if consistent_sign(values, fit.constant, window) else 1.0, 0.0)
    if fit.excess is not None:
        report.check('inverse-law-envelope', fit.excess, tol.envelope,
                     'outer |r| d^2 against {}'.format(_envelope_text(fit.envelope)))


def _riesz_check(report, signal, j0, k0, tol):
    """
    H_- of |F_j0_hat|^2 on a grid against the direct half-line transform

    |F_hat|^2 is even in k, so the grid is symmetric about zero and carries
    the bump near -k0 as well as the one near k0. Only the bands within
    half of +-k0 are evaluated; the rest of the grid sits below the decay
    of phi_hat and stays zero.
    """
    block = signal.block(j0)
    half = RIESZ_HALF_WIDTH / signal.n
    step = 2.0 * half / (RIESZ_POINTS - 1)
    count = int(math.ceil(min(k0 + half, block.k_max) / step))
    ks = step * np.arange(-count, count + 1)
    positive = np.flatnonzero((ks > 0) & (np.abs(ks - k0) <= half))
    modulus = np.zeros(ks.size)
    modulus[positive] = np.abs(fourier_transform(block, ks[positive]).values) ** 2
    modulus[2 * count - positive] = modulus[positive]
    projected = riesz_minus_grid(Spectrum(ks, modulus), pad=RIESZ_PAD).values
    centre = np.abs(ks - k0) <= half / 4.0
    direct = correlation_spectrum(block, ks[centre])
    error = float(np.max(np.abs(projected[centre] - direct)) / np.max(np.abs(direct)))
    report.check('riesz-cross-check', error, tol.riesz, 'pad={} points={}'.format(RIESZ_PAD, ks.size))


def _prefix_error(signal, spec, k, transfers):
    """Worst distance of G_j1 ... G_N from the integrated (a, b) at the gap after j1"""
    profile = integrate_system(signal, k)
    worst, where = 0.0, spec.n
    product = None
    for j1 in spec.blocks:
        product = transfers[j1] if product is None else transfers[j1] @ product
        a, b = profile.value_at(spec.gap_point(j1))
        direct = TransferMatrix([[a, np.conj(b)], [b, np.conj(a)]])
        error = product.distance(direct)
        if error > worst:
            worst, where = error, j1
    return worst, where


def _transfer_checks(report, signal, spec, j0, k, tol, fits):
    survey = transfer_survey(spec, k, j0, signal=signal, far_level=FAR_BLOCK_MARGIN * tol.far_block)
    fits['transfer'] = survey.fit
    determinant = max(g.determinant_error() for g in survey.transfers.values())
    symmetry = max(g.symmetry_error() for g in survey.transfers.values())
    report.check('transfer-determinant', determinant, tol.determinant)
    report.check('transfer-symmetry', symmetry, tol.determinant)

    product = compose_product([survey.transfers[j] for j in spec.blocks])
    direct = TransferMatrix(propagator(signal, [k])[0])
    report.check('transfer-product', product.distance(direct), tol.product)
    prefix, where = _prefix_error(signal, spec, k, survey.transfers)
    report.check('transfer-prefix', prefix, tol.product, 'worst after block {}'.format(where))

    report.check('transfer-asymptotics-r2', 1.0 - survey.fit.r2, 1.0 - tol.inverse_law_r2,
                 'C11={:.6g} C22={:.6g} {}'.format(survey.constant_11, survey.constant_22,
                                                    _envelope_text(survey.fit.envelope)))
    scale = max(abs(survey.constant_11), abs(survey.constant_22))
    mismatch = abs(survey.constant_11 - survey.constant_22) / scale if scale else math.inf
    report.check('transfer-constant-match', mismatch, TRANSFER_CONSTANT_MATCH)

    if survey.fit.excess is not None:
        report.check('transfer-diagonal-envelope', survey.fit.excess, tol.envelope,
                     _envelope_text(survey.fit.envelope))
    for name, envelope in (('real', survey.real_envelope), ('off', survey.off_envelope),
                           ('norm', survey.norm_envelope)):
        report.check('transfer-{}-envelope'.format(name), envelope.excess, tol.envelope,
                     '{} over {} inner offsets'.format(_envelope_text(envelope.constant), envelope.inner))

    # diagonal entries keep their C / d part at any distance; only the
    # off-diagonal ones fall to the far-block level
    report.check('transfer-far-blocks', survey.far_deviation, tol.far_block,
                 '{} blocks with |j - j0| >= {}'.format(survey.far_blocks, survey.far_offset))


def _series_checks(report, bump):
    # |F|_1 = 0.4 with unit bump mass
    weak = single_bump_signal(bump, scale=0.4)
    for order in SERIES_ORDERS:
        report.extend(series_vs_ode(weak, 1.1, order))


def _identity_checks(report, bump, a_value, tol, fits, oversample):
    # window edge where phi_hat(8 k) has decayed to ~1e-4
    bump_window = (0.0, 12.5)
    weak = single_bump_signal(bump, scale=constants.WEAK_COUPLING_EPS)
    ratio, tail = identity_ratio(weak, bump_window, tail_budget=tol.tail_budget)
    report.check('scattering-identity-weak', abs(ratio / (math.pi / 2.0) - 1.0), tol.scattering_ratio,
                 'ratio={:.6g} tail={:.2e}'.format(ratio, tail))

    # the smallest chirp keeps the k grid of the identity affordable
    spec = build_chirp(IDENTITY_CHIRP_N, a_value, bump)
    chirp = sample_signal(spec, 3.0 * spec.a, oversample)
    strong = single_bump_signal(bump, scale=1.0)
    chirp_ratio, _ = identity_ratio(chirp, (spec.a / 2.0, 2.5 * spec.a), tail_budget=tol.tail_budget)
    fit = scattering_identity_ratio([strong], bump_window, tail_budget=tol.tail_budget)
    fits['scattering-identity'] = fit
    report.check('scattering-identity-agreement', abs(chirp_ratio / fit.constant - 1.0), tol.scattering_ratio,
                 'chirp={:.6g} bump={:.6g}'.format(chirp_ratio, fit.constant))


def run_identities(cfg):
    """
    Every cross-module verification on one chirp

    :return: (Report, dict of FitResult by name)
    """
    tol = cfg.tolerances
    report = Report()
    fits = {}
    n = cfg.n_list[0]
    log_helper.log_scenario_start(SCENARIO_VERIFY, n)

    bump = resolve_bump(cfg.bump_kind)
    report.check('bump-mass', abs(bump.mass() - 1.0), bump.tol)
    try:
        spec = chirp_for(cfg, n)
        signal = sample_signal(spec, 3.0 * spec.a, cfg.oversample)
    except (ResolutionError, SamplingError) as e:
        report.fail('phase-resolution', str(e))
        log_helper.log_scenario_end(SCENARIO_VERIFY, n, False, e)
        return report, fits
    step = signal.dx * (2.0 * signal.k_max + 4.0 * spec.a)
    report.check('phase-resolution', step, constants.PHASE_STEP, 'dx={!r}'.format(signal.dx))

    j0 = default_j0(cfg, n, constants.T2_J0_FRACTION)
    k0 = spec.a * j0 / n
    checks = [
        ('a-condition', lambda: report.extend(check_a_condition(bump, spec.a, cfg.xi_grid_count, cfg.j_max))),
        ('block-ft', lambda: _block_ft_checks(report, spec, j0, tol, cfg.oversample)),
        ('t2-identity', lambda: _t2_identity_check(report, signal, spec, region_ks(spec, j0, cfg.k_points), tol)),
        ('factorization', lambda: _factorization_checks(report, signal, j0, k0, tol)),
        ('brute-force', lambda: _brute_force_checks(report, bump, tol)),
        ('quadratic-modulus', lambda: report.extend(quadratic_modulus_identity(signal, k0, tol.factorization))),
        ('inverse-law', lambda: _inverse_law_checks(report, signal, spec, j0, k0, tol, fits)),
        ('riesz-cross-check', lambda: _riesz_check(report, signal, j0, k0, tol)),
        ('transfer', lambda: _transfer_checks(report, signal, spec, j0, k0, tol, fits)),
        ('series', lambda: _series_checks(report, bump)),
        ('scattering-identity', lambda: _identity_checks(report, bump, spec.a, tol, fits, cfg.oversample)),
    ]
    for name, check in checks:
        try:
            check()
        except (DiracRuntimeException, FitError) as e:
            log.error("Check {} failed: {}".format(name, e))
            report.fail(name, str(e))

    if cfg.dump_profiles is not None:
        for name, fit in fits.items():
            dump_json(cfg.dump_profiles, 'fit_{}.json'.format(name), fit.to_json())

    log_helper.log_scenario_end(SCENARIO_VERIFY, n, report.passed)
    return report, fits


# ========================= Single-purpose commands ============================

def run_bump_check(cfg):
    """Normalization of the configured bump, with its transform at a few frequencies"""
    bump = resolve_bump(cfg.bump_kind)
    report = Report()
    report.check('bump-mass', abs(bump.mass() - 1.0), bump.tol, 'kind={} peak={:.6g}'.format(bump.kind, bump.peak))
    hat = np.real(bump.fourier(np.array([0.0, 1.0, -1.0])))
    report.check('bump-fourier-origin', abs(hat[0] - 1.0), bump.tol)
    report.check('bump-fourier-even', abs(hat[1] - hat[2]), bump.tol, 'phi_hat(1)={:.6g}'.format(hat[1]))
    return report


def run_select_a(cfg):
    """(A selection, its re-check) for the configured bump"""
    bump = resolve_bump(cfg.bump_kind)
    if cfg.a_override is not None:
        return None, check_a_condition(bump, cfg.a_override, cfg.xi_grid_count, cfg.j_max)
    selection = _searched_a(cfg.bump_kind, cfg.xi_grid_count, cfg.j_max)
    return selection, check_a_condition(bump, selection.value, cfg.xi_grid_count, cfg.j_max)
