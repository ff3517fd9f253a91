"""
Block decompositions of T_2 and T_3 for the chirp

With disjoint ordered block supports every simplex integral splits into
terms where consecutive variables sit in the same block or in later ones.
Terms spanning distinct blocks factor into block transforms f_j = F_j_hat(k):

    T_2(F, F)(k, x)    = sum_j tau_j + sum_{j < j'} conj(f_j) f_j'
    T_3(F, F, F)(k, +inf) = kkk + kkp + kpp + klm

    tau_j   = T_2(F_j, F_j)(k, +inf)
    kappa_j = T_3(F_j, F_j, F_j)(k, +inf)
    kkk = sum_j kappa_j
    kkp = sum_{j < j'} tau_j conj(f_j')
    kpp = sum_{j' < j} conj(f_j') (|f_j|^2 - tau_j)
    klm = sum_{j1 < j2 < j3} conj(f_j1) f_j2 conj(f_j3)
"""

from dataclasses import dataclass

import numpy as np

from signal_model.fourier import fourier_at
from spectral_tools.fit import Envelope, quadratic_envelope
from .simplex import t_infinity


@dataclass(frozen=True)
class BlockData:
    blocks: tuple
    f: np.ndarray
    tau: np.ndarray
    kappa: np.ndarray = None


def block_data(signal, k, blocks=None, cubic=False):
    blocks = tuple(signal.labels if blocks is None else blocks)
    f, tau, kappa = [], [], []
    for j in blocks:
        block = signal.block(j)
        f.append(fourier_at(block, k))
        tau.append(t_infinity([block, block], k))
        if cubic:
            kappa.append(t_infinity([block, block, block], k))
    return BlockData(blocks=blocks, f=np.array(f), tau=np.array(tau),
                     kappa=np.array(kappa) if cubic else None)


def _strict_prefix(values):
    return np.concatenate([[0j], np.cumsum(values)[:-1]])


def _strict_suffix(values):
    return _strict_prefix(values[::-1])[::-1]


@dataclass(frozen=True)
class T2Split:
    k: float
    x: float
    last_block: int
    diagonal: complex
    off_diagonal: complex

    @property
    def total(self):
        return self.diagonal + self.off_diagonal

    @property
    def off_share(self):
        total = abs(self.total)
        return abs(self.off_diagonal) / total if total else 0.0


def t2_split(signal, spec, k, j0, data=None):
    """
    (jj) and (jjp) parts of T_2(F, F)(k, x) at x = N(j0 - sqrt(N) + 1/2)

    Only blocks entirely left of x contribute.
    """
    last = j0 - spec.root
    x = spec.gap_point(last)
    data = block_data(signal, k, [j for j in signal.labels if j <= last]) if data is None else data
    keep = np.array([j <= last for j in data.blocks])
    f = data.f[keep]
    tau = data.tau[keep]
    diagonal = complex(np.sum(tau))
    off = complex(np.sum(_strict_prefix(np.conj(f)) * f))
    return T2Split(k=float(k), x=float(x), last_block=last, diagonal=diagonal, off_diagonal=off)


@dataclass(frozen=True)
class T3Split:
    k: float
    j0: int
    kkk: complex
    kkp: complex
    kpp: complex
    klm: complex
    dominant: complex
    cross: complex
    kkk_envelope: Envelope

    @property
    def total(self):
        return self.kkk + self.kkp + self.kpp + self.klm


def t3_split(signal, spec, k, j0, data=None):
    """
    Four-way split of T_3(F, F, F)(k, +inf), plus

    dominant      the j' = j0 terms of kkp and kpp,
                  conj(f_j0) (sum_{j<j0} tau_j + sum_{j>j0} (|f_j|^2 - tau_j))
    cross         sum_{j' < j} conj(f_j') |f_j|^2
    kkk_envelope  Envelope of |kappa_j| against K / (Nk - Aj)^2 over j != j0
    """
    data = block_data(signal, k, cubic=True) if data is None else data
    blocks = np.array(data.blocks)
    f, tau, kappa = data.f, data.tau, data.kappa
    cf = np.conj(f)
    modulus = np.abs(f) ** 2

    kkk = complex(np.sum(kappa))
    kkp = complex(np.sum(tau * _strict_suffix(cf)))
    kpp = complex(np.sum((modulus - tau) * _strict_prefix(cf)))
    klm = complex(np.sum(_strict_prefix(cf) * f * _strict_suffix(cf)))
    cross = complex(np.sum(modulus * _strict_prefix(cf)))

    at = blocks == j0
    below = blocks < j0
    above = blocks > j0
    dominant = complex(np.sum(cf[at]) * (np.sum(tau[below]) + np.sum(modulus[above] - tau[above])))

    detuning = spec.n * k - spec.a * blocks
    off = ~at
    envelope = quadratic_envelope({float(d): abs(v) for d, v in zip(detuning[off], kappa[off]) if d != 0})
    return T3Split(k=float(k), j0=int(j0), kkk=kkk, kkp=kkp, kpp=kpp, klm=klm,
                   dominant=dominant, cross=cross, kkk_envelope=envelope)
