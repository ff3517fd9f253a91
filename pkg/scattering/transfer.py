"""
2x2 transfer matrices of the a/b system
"""

import json
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Row-major 2x2 propagator carrying (a, b) across a region"""
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex).reshape(2, 2)
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def identity(cls):
        return cls(np.eye(2))

    def __matmul__(self, other):
        return TransferMatrix(self.entries @ other.entries)

    def __getitem__(self, index):
        return complex(self.entries[index])

    @property
    def determinant(self):
        e = self.entries
        return complex(e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0])

    def determinant_error(self):
        return abs(self.determinant - 1.0)

    def symmetry_error(self):
        """Distance from the real-potential form [[alpha, beta], [conj beta, conj alpha]]"""
        e = self.entries
        return float(max(abs(e[1, 1] - np.conj(e[0, 0])), abs(e[1, 0] - np.conj(e[0, 1]))))

    def distance(self, other):
        return float(np.max(np.abs(self.entries - other.entries)))

    def off_diagonal(self):
        return float(max(abs(self.entries[0, 1]), abs(self.entries[1, 0])))

    def operator_norm(self):
        return float(np.linalg.norm(self.entries, 2))

    def first_column(self):
        return complex(self.entries[0, 0]), complex(self.entries[1, 0])

    def to_json(self):
        return json.dumps([[[v.real, v.imag] for v in row] for row in self.entries.tolist()])


def compose_product(transfers):
    """
    Ordered product of per-block propagators given in ascending block order

    The highest block ends up leftmost: G_{j1} ... G_{N+1} G_N.
    """
    transfers = list(transfers)
    if not transfers:
        raise ValueError("compose_product needs at least one transfer matrix")
    product = transfers[0]
    for transfer in transfers[1:]:
        product = transfer @ product
    return product
