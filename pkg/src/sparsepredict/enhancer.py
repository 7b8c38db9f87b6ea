"""The classical accuracy enhancer ``h``: q-bit rough frequency -> n-bit frequency.

In the prediction pipeline the enhancer writes ``h(l)`` into a third
register, the register drives two phase rotations, and ``h`` is applied a
second time to clear it. Because ``h`` is a deterministic function of the
ancilla value, that sequence is a diagonal phase on the ancilla;
``apply_enhancer_phases`` applies the phase directly and
``materialized_enhancer_roundtrip`` builds the register explicitly as a
cross-check.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .circuit import _rotate
from .errors import ArgumentError, InternalConsistencyError, SpectrumNotSparseError
from .spectral import SpectralUnitary, _distinct, truncate, wrap_distance
from .state import StateVector

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EnhancerTable:
    q: int
    n: int
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.int64).copy()
        if table.shape != (1 << self.q,):
            raise ArgumentError(f"enhancer table must have {1 << self.q} entries")
        if np.any(table < 0) or np.any(table >= (1 << self.n)):
            raise ArgumentError(f"enhancer outputs must fit in {self.n} bits")
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    def __call__(self, l):
        return int(self.table[l])

    @property
    def L(self):
        return 1 << self.q

    def delta_star(self):
        """``(0.h(l))_n - (0.l)_q`` for every l."""
        return self.table / (1 << self.n) - np.arange(self.L) / self.L

    def rows(self):
        return [(l, int(h)) for l, h in enumerate(self.table)]

    def is_consistent(self, frequencies):
        freqs = np.asarray(frequencies)
        return bool(np.all(self.table[truncate(freqs, self.q)] == truncate(freqs, self.n)))


def zero_extension(q, n):
    """``h(l) = l`` padded with ``n - q`` zero bits."""
    if q > n:
        raise ArgumentError("zero extension needs q <= n")
    return EnhancerTable(q, n, np.arange(1 << q, dtype=np.int64) << (n - q))


def build_enhancer(source, q, n):
    """Nearest-frequency enhancer for a spectrum.

    ``source`` is a ``SpectralUnitary`` or a plain sequence of frequencies
    (e.g. strip centres). Each q-bit cell that holds a frequency's
    truncation maps to that frequency's n-bit truncation; every other cell
    maps to the frequency nearest ``(0.l)_q`` on the circle, ties going to
    the lower frequency.
    """
    freqs = source.frequencies if isinstance(source, SpectralUnitary) else np.asarray(source, float)
    distinct = _distinct(freqs)
    L = 1 << q
    d = wrap_distance(np.arange(L)[:, None] / L, distinct[None, :])
    nearest = np.argmax(d <= d.min(axis=1, keepdims=True) + 1e-15, axis=1)
    table = truncate(distinct[nearest], n)

    cells = truncate(distinct, q)
    fine = truncate(distinct, n)
    owner = {}
    for cell, value, omega in zip(cells, fine, distinct):
        cell, value = int(cell), int(value)
        if cell in owner and owner[cell][0] != value:
            other = owner[cell][1]
            raise SpectrumNotSparseError(
                f"frequencies {other!r} and {omega!r} share the {q}-bit cell {cell} "
                f"but differ at {n} bits",
                pair=(other, float(omega)),
            )
        owner[cell] = (value, float(omega))
        table[cell] = value
    h = EnhancerTable(q, n, table)
    if not h.is_consistent(distinct):
        raise InternalConsistencyError("enhancer table failed its own consistency check")
    return h


def enhancer_turns(h, t):
    """Phase per ancilla value, in turns: ``(0.h(l))_n t - (L-1) delta*_l``, reduced mod 1.

    Computed in integer arithmetic so that large ``t`` loses no precision.
    """
    t = int(t)
    L, two_n = h.L, 1 << h.n
    out = np.empty(L)
    for l in range(L):
        hl = int(h.table[l])
        rot = (hl * t) % two_n * L
        # -(L-1) delta*_l = -(L-1)(hl L - l 2^n) / (2^n L)
        corr = (-(L - 1) * (hl * L - l * two_n)) % (two_n * L)
        out[l] = ((rot + corr) % (two_n * L)) / (two_n * L)
    return out


def apply_enhancer_phases(s, h, t):
    if s.layout.anc != h.q:
        raise ArgumentError(f"ancilla width {s.layout.anc} does not match enhancer q={h.q}")
    return StateVector(s.layout, _rotate(s.grid(), enhancer_turns(h, t)).reshape(-1))


def materialized_enhancer_roundtrip(s, h, t, max_size=1 << 22):
    """Reference path with the n-qubit third register held explicitly."""
    if s.layout.anc != h.q:
        raise ArgumentError(f"ancilla width {s.layout.anc} does not match enhancer q={h.q}")
    N, L, R = s.layout.N, h.L, 1 << h.n
    if N * L * R > max_size:
        raise ArgumentError(f"materialized register needs {N * L * R} amplitudes (limit {max_size})")
    reg = np.zeros((N, L, R), dtype=np.complex128)
    reg[:, :, 0] = s.grid()
    shifts = np.tile(h.table, N)

    reg = _kernels.xor_shift(reg.reshape(N * L, R), shifts).reshape(N, L, R)

    t = int(t)
    b = np.arange(R).astype(object)
    l = np.arange(L).astype(object)
    rot = (b * t) % R * L
    corr = (-(L - 1) * (b[None, :] * L - l[:, None] * R)) % (R * L)
    turns = np.asarray((rot[None, :] + corr) % (R * L), dtype=np.float64) / (R * L)
    reg = reg * np.exp(2j * np.pi * turns)[None, :, :]

    reg = _kernels.xor_shift(np.ascontiguousarray(reg.reshape(N * L, R)), shifts).reshape(N, L, R)
    residual = float(np.abs(reg[:, :, 1:]).max()) if R > 1 else 0.0
    if residual > RESIDUAL_TOL:
        raise InternalConsistencyError(f"third register not cleared (residual {residual:.2e})")
    return StateVector(s.layout, reg[:, :, 0].reshape(-1))
