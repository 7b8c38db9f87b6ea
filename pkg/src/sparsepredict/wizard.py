"""Wizard transformations: the exact reference and its phase-estimation simulation.

The exact wizard XORs the p-bit truncation of each eigenfrequency into the
ancilla. The simulated wizard is ``QFT_M . U_seq . WH`` applied to
``|xi, 0>``; for frequencies that are not p-bit exact its output spreads
over neighbouring ancilla values with weights ``|H_{l,k}|^2 / M^2``.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .circuit import _qft, _useq, _wh
from .errors import ArgumentError
from .spectral import truncate, wrap_distance
from .state import RegisterLayout, StateVector

WINDOW_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class WizardOutput:
    state: StateVector
    eigen_distribution: np.ndarray  # [k, l] -> |lambda_{l,k}|^2

    def eigen_amplitudes(self, u):
        return eigen_amplitudes(self.state, u)


@dataclass(frozen=True)
class TailReport:
    epsilon: float
    in_window_mass: float
    tail_mass: float
    K: int


def eigen_amplitudes(state, u):
    """Coefficients of ``state`` on ``Phi_k (x) |l>``, shape (N, anc_dim)."""
    grid = state.amps.reshape(state.layout.N, state.layout.anc_dim)
    return u.to_eigenbasis(grid)


def _check(u, p, layout=None):
    if p < 1:
        raise ArgumentError("ancilla width p must be >= 1")
    if layout is not None and (layout.anc != p or layout.n != u.n):
        raise ArgumentError(f"state layout {layout} does not match n={u.n}, p={p}")


def _zero_ancilla_grid(xi, u, p):
    xi = np.asarray(xi, dtype=np.complex128)
    if xi.shape[-1] != u.N:
        raise ArgumentError(f"main state must have length {u.N}")
    grid = np.zeros(xi.shape[:-1] + (u.N, 1 << p), dtype=np.complex128)
    grid[..., 0] = xi
    return grid


def exact_wizard(s, u, p):
    """``|Phi_k, b> -> |Phi_k, b XOR trunc_p(omega_k)>`` using the known spectrum."""
    _check(u, p, s.layout)
    coef = np.ascontiguousarray(eigen_amplitudes(s, u))
    shifted = _kernels.xor_shift(coef, truncate(u.frequencies, p))
    return StateVector(s.layout, u.from_eigenbasis(shifted).reshape(-1))


def wizard_grid(grid, u, counter=None, reverse=False):
    """``QFT . U_seq . WH`` (or the fully inverted-direction variant) on a grid, in place."""
    grid = _wh(grid)
    grid = _useq(grid, u, inverse=reverse, counter=counter)
    return _qft(grid, inverse=reverse)


def _output(grid, u, p):
    state = StateVector(RegisterLayout(u.n, p), grid.reshape(-1))
    dist = np.abs(u.to_eigenbasis(grid)) ** 2
    return WizardOutput(state, dist)


def simulate_wizard(xi, u, p, counter=None):
    _check(u, p)
    return _output(wizard_grid(_zero_ancilla_grid(xi, u, p), u, counter), u, p)


def simulate_wizard_reversed(xi, u, p, counter=None):
    """``QFT^-1 . (U_seq)^-1 . WH`` on ``|xi, 0>``."""
    _check(u, p)
    return _output(wizard_grid(_zero_ancilla_grid(xi, u, p), u, counter, reverse=True), u, p)


def window_mask(frequencies, p, epsilon):
    """``mask[k, l]`` is True when ``(0.l)_p`` lies within ``epsilon`` of ``omega_k`` on the circle."""
    M = 1 << p
    d = wrap_distance(np.arange(M)[None, :] / M, np.asarray(frequencies)[:, None])
    return d <= epsilon + WINDOW_TOL


def tail_masses(u, p, K, inputs):
    """Exact mass outside the ``K/M`` window for each main-register input (rows of ``inputs``)."""
    M = 1 << p
    if not 1 <= K <= M:
        raise ArgumentError(f"K must lie in [1, {M}], got {K}")
    inputs = np.atleast_2d(np.asarray(inputs, dtype=np.complex128))
    grid = wizard_grid(_zero_ancilla_grid(inputs, u, p), u)
    dist = np.abs(u.to_eigenbasis(grid)) ** 2
    outside = ~window_mask(u.frequencies, p, K / M)
    total = dist.reshape(len(inputs), -1).sum(axis=1)
    return (dist * outside).reshape(len(inputs), -1).sum(axis=1), total


def classify_type(u, p, K, trials, seed=0, include_eigenvectors=True, chunk=64):
    """Worst tail mass outside ``L_{K/M}`` over random inputs and (optionally) every eigenvector.

    The tail mass is linear in ``|x_k|^2``, so eigenvector inputs are the
    extreme points of the set of all inputs.
    """
    rng = np.random.default_rng(seed)
    M = 1 << p
    v = rng.standard_normal((trials, u.N)) + 1j * rng.standard_normal((trials, u.N))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    batches = [v]
    if include_eigenvectors:
        batches.append(u.eigenvectors.T)
    worst_tail, worst_total = -1.0, 1.0
    for batch in batches:
        for start in range(0, len(batch), chunk):
            tails, totals = tail_masses(u, p, K, batch[start:start + chunk])
            i = int(np.argmax(tails))
            if tails[i] > worst_tail:
                worst_tail, worst_total = float(tails[i]), float(totals[i])
    return TailReport(epsilon=K / M, in_window_mass=worst_total - worst_tail, tail_mass=worst_tail, K=K)


def reversal_distance(xi, u, p):
    """``|| chi''_2 - chi_2 ||`` where ``chi''_2`` is the phase-corrected reversed output.

    The correction multiplies each reversed amplitude ``y'_{k,l}`` by
    ``exp(2 pi i (M-1) d_{k,l})`` with ``d_{k,l} = trunc_n(omega_k) - (0.l)_p``.
    """
    M = 1 << p
    N = u.N
    fwd = u.to_eigenbasis(wizard_grid(_zero_ancilla_grid(xi, u, p), u))
    rev = u.to_eigenbasis(wizard_grid(_zero_ancilla_grid(xi, u, p), u, reverse=True))
    hk = truncate(u.frequencies, u.n).astype(object)
    l = np.arange(M).astype(object)
    # (M-1) d_{k,l} = (M-1)(h_k M - l N) / (N M), reduced exactly before converting to float
    num = ((M - 1) * (hk[:, None] * M - l[None, :] * N)) % (N * M)
    turns = np.asarray(num, dtype=np.float64) / (N * M)
    corrected = rev * np.exp(2j * np.pi * turns)
    return float(np.linalg.norm(corrected - fwd))
