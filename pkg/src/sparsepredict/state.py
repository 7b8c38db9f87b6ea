"""Dense statevectors over a (main register) x (ancilla register) layout.

Amplitudes are stored flat, main-major: the joint index of main index ``m``
and ancilla index ``a`` is ``m * anc_dim + a``. States living on the main
register alone are plain 1-D numpy arrays of length ``N``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DegenerateProjectionError

STATE_TOL = 1e-10
BOUND_TOL = 1e-8
PROJECTION_FLOOR = 1e-14


@dataclass(frozen=True)
class RegisterLayout:
    n: int
    anc: int

    def __post_init__(self):
        if self.n < 1 or self.anc < 1:
            raise ArgumentError(f"layout needs n >= 1 and anc >= 1, got n={self.n}, anc={self.anc}")

    @property
    def N(self):
        return 1 << self.n

    @property
    def anc_dim(self):
        return 1 << self.anc

    @property
    def size(self):
        return self.N * self.anc_dim


@dataclass(frozen=True, eq=False)
class StateVector:
    layout: RegisterLayout
    amps: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size != self.layout.size:
            raise ArgumentError(
                f"expected {self.layout.size} amplitudes for {self.layout}, got {amps.size}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @classmethod
    def from_grid(cls, layout, grid):
        """Build from an ``(N, anc_dim)`` array; the array is copied."""
        return cls(layout, np.array(grid, dtype=np.complex128).reshape(-1))

    @classmethod
    def product(cls, layout, main, a=0):
        """``|main> (x) |a>`` for a main-register vector ``main``."""
        main = np.asarray(main, dtype=np.complex128)
        if main.shape != (layout.N,):
            raise ArgumentError(f"main state must have length {layout.N}")
        if not 0 <= a < layout.anc_dim:
            raise ArgumentError(f"ancilla index {a} out of range")
        grid = np.zeros((layout.N, layout.anc_dim), dtype=np.complex128)
        grid[:, a] = main
        return cls(layout, grid.reshape(-1))

    def grid(self):
        """Writable ``(N, anc_dim)`` copy of the amplitudes."""
        return self.amps.reshape(self.layout.N, self.layout.anc_dim).copy()

    def norm(self):
        return float(np.linalg.norm(self.amps))

    def ancilla_marginal(self):
        return (np.abs(self.grid()) ** 2).sum(axis=0)


@dataclass(frozen=True)
class Distances:
    vector_distance: float
    fidelity: float
    op_norm: float = float("nan")


def new_basis_state(layout, m, a):
    if not (0 <= m < layout.N and 0 <= a < layout.anc_dim):
        raise ArgumentError(f"basis index (m={m}, a={a}) out of range for {layout}")
    amps = np.zeros(layout.size, dtype=np.complex128)
    amps[m * layout.anc_dim + a] = 1.0
    return StateVector(layout, amps)


def vector_distances(a, b):
    """Distances between two equally shaped amplitude arrays."""
    a = np.asarray(a).reshape(-1)
    b = np.asarray(b).reshape(-1)
    if a.shape != b.shape:
        raise ArgumentError(f"shape mismatch {a.shape} vs {b.shape}")
    dist = float(np.linalg.norm(a - b))
    fid = float(min(1.0, abs(np.vdot(a, b)) ** 2))
    return Distances(vector_distance=dist, fidelity=fid)


def distance(a, b):
    if a.layout != b.layout:
        raise ArgumentError(f"layout mismatch {a.layout} vs {b.layout}")
    return vector_distances(a.amps, b.amps)


def project_ancilla_zero(s):
    """Exact probability of reading ancilla 0, and the renormalized main state."""
    grid = s.amps.reshape(s.layout.N, s.layout.anc_dim)
    slice0 = grid[:, 0]
    prob = float(np.vdot(slice0, slice0).real)
    if prob < PROJECTION_FLOOR:
        raise DegenerateProjectionError(f"ancilla-zero probability {prob:.3e} is below {PROJECTION_FLOOR}")
    return prob, slice0 / np.sqrt(prob)


def random_state(dim, rng):
    """Haar-random pure state of dimension ``dim``."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def operator_norm(matrix):
    """Largest singular value."""
    return float(np.linalg.norm(matrix, ord=2))
