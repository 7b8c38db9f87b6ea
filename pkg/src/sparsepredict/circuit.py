"""Primitive transforms on the ancilla register, and the geometric-sum kernel.

Each public operation takes and returns a ``StateVector``. The underscore
variants work in place on an ``(N, M)`` amplitude grid and are what the
wizard and predictor pipelines call; they do not renormalize anything.

QFT sign convention: the forward transform is
``|s> -> M**-1/2 sum_l exp(-2 pi i s l / M) |l>``, which puts the phase
estimation peak at ``l ~ omega * M`` after ``U_seq``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ArgumentError
from .spectral import FrequencyBits
from .state import StateVector

RESONANCE_TOL = 1e-12


@dataclass
class CostCounter:
    """Conditional applications of U issued through counted paths."""

    u_cond_applications: int = 0
    weighted_applications: float = 0.0

    def add(self, count, weighted=0.0):
        if count < 0:
            raise ArgumentError("cost increments are nonnegative")
        self.u_cond_applications += int(count)
        self.weighted_applications += float(weighted)


@dataclass(frozen=True)
class PhaseRule:
    """Rotation angle in radians for each ancilla value."""

    angles: np.ndarray

    @classmethod
    def from_function(cls, anc_dim, fn):
        return cls(np.array([fn(l) for l in range(anc_dim)], dtype=np.float64))

    def check(self, anc_dim):
        if np.shape(self.angles) != (anc_dim,):
            raise ArgumentError(f"phase rule must define {anc_dim} angles, got shape {np.shape(self.angles)}")


def _wh(grid):
    m = grid.shape[-1]
    flat = np.ascontiguousarray(grid.reshape(-1, m))
    _kernels.fwht_rows(flat)
    return flat.reshape(grid.shape)


def _qft(grid, inverse=False):
    m = grid.shape[-1]
    if inverse:
        return np.fft.ifft(grid, axis=-1) * np.sqrt(m)
    return np.fft.fft(grid, axis=-1) / np.sqrt(m)


def _useq(grid, u, inverse=False, counter=None):
    """Replace column ``a`` of the grid by ``U**(+-a)`` applied to it."""
    m = grid.shape[-1]
    coef = u.to_eigenbasis(grid)
    scale = -1.0 if inverse else 1.0
    if coef.ndim == 2:
        coef = np.ascontiguousarray(coef)
        _kernels.outer_phase(coef, u.frequencies, scale)
    else:
        coef = coef * _phase_table(u.frequencies, m, scale)
    out = u.from_eigenbasis(coef)
    if counter is not None:
        probs = (np.abs(grid) ** 2).reshape(-1, m).sum(axis=0)
        total = probs.sum()
        weighted = float(probs @ np.arange(m) / total) if total > 0 else 0.0
        counter.add(m - 1, weighted)
    return out


def _phase_table(omega, m, scale):
    turns = np.outer(omega * scale, np.arange(m, dtype=np.float64))
    turns -= np.floor(turns)
    return np.exp(2j * np.pi * turns)


def _rotate(grid, turns):
    """Multiply column ``l`` by ``exp(2 pi i turns[l])``."""
    m = grid.shape[-1]
    flat = np.ascontiguousarray(grid.reshape(-1, m))
    _kernels.column_phase(flat, np.ascontiguousarray(turns, dtype=np.float64))
    return flat.reshape(grid.shape)


def walsh_hadamard_ancilla(s):
    return StateVector(s.layout, _wh(s.grid()).reshape(-1))


def qft_ancilla(s, inverse=False):
    return StateVector(s.layout, _qft(s.grid(), inverse).reshape(-1))


def u_seq(s, u, inverse=False, counter=None):
    if u.n != s.layout.n:
        raise ArgumentError(f"operator acts on {u.n} qubits, main register has {s.layout.n}")
    return StateVector(s.layout, _useq(s.grid(), u, inverse, counter).reshape(-1))


def rotate_by_ancilla(s, rule):
    if not isinstance(rule, PhaseRule):
        rule = PhaseRule(np.asarray(rule, dtype=np.float64))
    rule.check(s.layout.anc_dim)
    turns = np.asarray(rule.angles, dtype=np.float64) / (2 * np.pi)
    return StateVector(s.layout, _rotate(s.grid(), turns).reshape(-1))


def kernel_H(omega, l, M):
    """Closed form of ``sum_{s<M} exp(2 pi i s (omega - l/M))``."""
    if not isinstance(l, FrequencyBits):
        raise ArgumentError("l must be FrequencyBits")
    if M != 1 << l.width:
        raise ArgumentError(f"M={M} does not match l.width={l.width}")
    delta = omega - l.real
    frac = delta - np.floor(delta)
    den = 1.0 - np.exp(2j * np.pi * frac)
    if abs(den) < RESONANCE_TOL:
        return complex(_kernels.geometric_sum(frac, M))
    num = 1.0 - np.exp(2j * np.pi * ((M * frac) % 1.0))
    return complex(num / den)


def kernel_table(omega, M):
    """``H[k, l]`` for every frequency ``omega[k]`` and ancilla value ``l``."""
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    delta = omega[:, None] - np.arange(M)[None, :] / M
    frac = delta - np.floor(delta)
    den = 1.0 - np.exp(2j * np.pi * frac)
    num = 1.0 - np.exp(2j * np.pi * np.mod(M * frac, 1.0))
    out = np.empty(den.shape, dtype=np.complex128)
    small = np.abs(den) < RESONANCE_TOL
    out[~small] = num[~small] / den[~small]
    for k, l in zip(*np.nonzero(small)):
        out[k, l] = _kernels.geometric_sum(frac[k, l], M)
    return out
