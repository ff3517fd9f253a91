"""
The chirp potential F = sum_{j=N}^{2N} F_j built from modulated bumps

    F_j(x) = N^-1 cos(2 (A j / N) x) phi(x / N - j)

Block j lives on [N(j - 1/4), N(j + 1/4)] with carrier frequency A j / N.
"""

try:
    import math
    from dataclasses import dataclass

    import numpy as np

    from utilities_common import constants
    from utilities_common.exception import ChirpError
    from .bump import BumpProfile, bump_fourier
except ImportError as e:
    raise ImportError("Required module not found: {}".format(str(e)))


def is_perfect_square(n):
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class ChirpSpec:
    n: int
    a: float
    bump: BumpProfile

    @property
    def root(self):
        return math.isqrt(self.n)

    @property
    def blocks(self):
        return range(self.n, 2 * self.n + 1)

    def _check_block(self, j):
        if j < self.n or j > 2 * self.n:
            raise ChirpError("Block {} outside [{}, {}]".format(j, self.n, 2 * self.n))

    def center(self, j):
        return float(self.n * j)

    def support(self, j):
        quarter = self.n * self.bump.radius
        return (self.n * j - quarter, self.n * j + quarter)

    def carrier(self, j):
        return self.a * j / self.n

    def phase_space_cell(self, j):
        """Frequency and position box in which block j is localized"""
        self._check_block(j)
        k = self.carrier(j)
        x = self.center(j)
        return ((k - 1.0 / self.n, k + 1.0 / self.n), (x - self.n / 2.0, x + self.n / 2.0))

    def block(self, j, x):
        self._check_block(j)
        x = np.asarray(x, dtype=float)
        return np.cos(2.0 * self.carrier(j) * x) * self.bump(x / self.n - j) / self.n

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        j = np.clip(np.rint(x / self.n), self.n, 2 * self.n)
        return np.cos(2.0 * self.a * j / self.n * x) * self.bump(x / self.n - j) / self.n

    def gap_point(self, j):
        """Position halfway between blocks j and j + 1"""
        return self.n * (j + 0.5)


def build_chirp(n, a, bump):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ChirpError("N must be an integer, got {!r}".format(n))
    n = int(n)
    if n < constants.MIN_N:
        raise ChirpError("N must be at least {}, got {}".format(constants.MIN_N, n))
    if not is_perfect_square(n):
        raise ChirpError("N must be a perfect square, got {}".format(n))
    if not a > 0:
        raise ChirpError("A must be positive, got {!r}".format(a))
    return ChirpSpec(n=n, a=float(a), bump=bump)


def block_fourier_closed_form(spec, j, k, far_branch=True):
    """
    F_j_hat(k) from phi_hat

        1/2 e^{-2i(Nk - Aj)j} phi_hat(Nk - Aj) + 1/2 e^{-2i(Nk + Aj)j} phi_hat(Nk + Aj)

    The second term is the far branch of the cosine and is negligible on
    the working window.
    """
    spec._check_block(j)
    k = np.asarray(k, dtype=float)
    near = spec.n * k - spec.a * j
    value = 0.5 * np.exp(-2j * near * j) * np.real(bump_fourier(spec.bump, near))
    if far_branch:
        far = spec.n * k + spec.a * j
        value = value + 0.5 * np.exp(-2j * far * j) * np.real(bump_fourier(spec.bump, far))
    if value.ndim == 0:
        return complex(value)
    return value
