"""
Least-squares fits for the decay and growth laws
"""

try:
    import json
    import math
    from dataclasses import dataclass

    import numpy as np
    from scipy import stats

    from utilities_common.exception import FitError
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))


@dataclass(frozen=True)
class FitResult:
    """
    constant  fitted constant (complex for the inverse law)
    residual  residual norm
    window    (lo, hi) of the fit
    r2        coefficient of determination in [0, 1], None for plain averages
    envelope  K of the K / d^2 residual envelope, when fitted
    excess    largest outer-window ratio |r| d^2 / K, when fitted
    points    number of samples used
    """
    constant: complex
    residual: float
    window: tuple
    r2: float = None
    envelope: float = None
    points: int = 0
    spread: float = None
    excess: float = None

    def to_json(self):
        constant = complex(self.constant)
        return json.dumps({
            'constant_re': constant.real,
            'constant_im': constant.imag,
            'residual': self.residual,
            'r2': self.r2,
            'window': list(self.window),
        })


def _r2(values, residuals):
    total = float(np.sum(np.abs(values - np.mean(values)) ** 2))
    unexplained = float(np.sum(np.abs(residuals) ** 2))
    if total == 0.0:
        return 1.0 if unexplained == 0.0 else 0.0
    return float(min(1.0, max(0.0, 1.0 - unexplained / total)))


def inverse_law_window(n):
    return (2, max(2, n // 4))


@dataclass(frozen=True)
class Envelope:
    """
    K / d^2 bound fitted where |d| is small and tested where it is large

    constant  K = max |m(d)| d^2 over the inner offsets
    excess    max |m(d)| d^2 / K over the outer offsets; at most about one
              for quadratic or faster decay, growing with |d| otherwise
    """
    constant: float
    excess: float
    inner: int
    outer: int

    def holds(self, slack):
        return self.excess <= slack


def quadratic_envelope(magnitudes):
    """
    Fit K on the inner half of the |d| range and measure the outer half against it

    :param magnitudes: mapping nonzero offset d -> magnitude
    :raises FitError: when either half is empty
    """
    offsets = np.array([d for d in magnitudes if d != 0], dtype=float)
    if offsets.size == 0:
        raise FitError("Envelope needs nonzero offsets")
    scaled = np.array([abs(magnitudes[d]) for d in magnitudes if d != 0], dtype=float) * offsets ** 2
    distance = np.abs(offsets)
    cut = 0.5 * (distance.min() + distance.max())
    inner = distance <= cut
    outer = ~inner
    if not np.any(inner) or not np.any(outer):
        raise FitError("Envelope needs offsets on both sides of |d| = {:.6g}".format(cut))

    constant = float(np.max(scaled[inner]))
    worst = float(np.max(scaled[outer]))
    if constant > 0:
        excess = worst / constant
    else:
        excess = 0.0 if worst == 0 else math.inf
    return Envelope(constant=constant, excess=excess, inner=int(np.sum(inner)), outer=int(np.sum(outer)))


def fit_inverse_law(values, window):
    """
    Fit values[d] ~ c / d over lo <= |d| <= hi, d != 0

    :param values: mapping offset d = j - j0 -> complex value
    :param window: (lo, hi) on |d|
    :return: FitResult with the constant c and the K / d^2 envelope of the
        residuals; a window of a single |d| gets no envelope
    """
    lo, hi = window
    offsets = np.array(sorted(d for d in values if d != 0 and lo <= abs(d) <= hi), dtype=float)
    if offsets.size == 0:
        raise FitError("Fit window {} holds no offsets".format(tuple(window)))

    samples = np.array([values[int(d)] for d in offsets], dtype=complex)
    inverse = 1.0 / offsets
    constant = complex(np.sum(samples * inverse) / np.sum(inverse * inverse))
    residuals = samples - constant * inverse
    envelope = None
    if np.unique(np.abs(offsets)).size > 1:
        envelope = quadratic_envelope({float(d): r for d, r in zip(offsets, np.abs(residuals))})
    return FitResult(constant=constant,
                     residual=float(np.sqrt(np.sum(np.abs(residuals) ** 2))),
                     window=(int(lo), int(hi)),
                     r2=_r2(samples, residuals),
                     envelope=envelope.constant if envelope else None,
                     points=int(offsets.size),
                     excess=envelope.excess if envelope else None)


def consistent_sign(values, constant, window):
    """
    True when conj(c) * value has a real part of sign(d) at every offset

    Checks the sign pattern of c / d on the fit window, offsets below and
    above j0 separately.
    """
    lo, hi = window
    for d, value in values.items():
        if d == 0 or not lo <= abs(d) <= hi:
            continue
        projection = (np.conj(constant) * value).real
        if projection * np.sign(d) <= 0:
            return False
    return True


def fit_log_growth(sizes, magnitudes):
    """
    magnitude ~ slope * log N + intercept

    The FitResult constant holds the slope; spread is the largest relative
    deviation of magnitude / log N from its mean.
    """
    sizes = np.asarray(sizes, dtype=float)
    magnitudes = np.asarray(magnitudes, dtype=float)
    if sizes.size < 2:
        raise FitError("Growth fit needs at least two sizes, got {}".format(sizes.size))
    logs = np.log(sizes)
    regression = stats.linregress(logs, magnitudes)
    predicted = regression.intercept + regression.slope * logs
    ratios = magnitudes / logs
    mean = float(np.mean(ratios))
    spread = float(np.max(np.abs(ratios / mean - 1.0))) if mean != 0 else math.inf
    r2 = regression.rvalue ** 2 if np.isfinite(regression.rvalue) else 0.0
    return FitResult(constant=float(regression.slope),
                     residual=float(np.sqrt(np.sum((magnitudes - predicted) ** 2))),
                     window=(int(sizes.min()), int(sizes.max())),
                     r2=float(min(1.0, max(0.0, r2))),
                     points=int(sizes.size),
                     spread=spread)


def fit_ratio(ratios, window):
    """Mean and spread of per-signal ratios; skipped entries are nan"""
    ratios = np.asarray(ratios, dtype=float)
    kept = ratios[np.isfinite(ratios)]
    if kept.size == 0:
        return FitResult(constant=math.nan, residual=math.nan, window=tuple(window), points=0)
    mean = float(np.mean(kept))
    spread = float(np.max(kept) - np.min(kept))
    return FitResult(constant=mean, residual=spread, window=tuple(window), points=int(kept.size),
                     spread=spread / abs(mean) if mean != 0 else math.inf)
