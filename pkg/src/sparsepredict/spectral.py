"""Unitaries specified by eigendecomposition, and the spectra used in experiments.

A ``SpectralUnitary`` holds orthonormal eigenvectors (columns of
``eigenvectors``) and eigenfrequencies ``omega_k`` in [0, 1), so that
``U Phi_k = exp(2 pi i omega_k) Phi_k``. Powers of ``U`` are applied by a
change of basis, which doubles as the exact evolution oracle.
"""

from dataclasses import dataclass, field
from math import gcd

import numpy as np
import scipy.linalg

from .errors import ArgumentError

GRAM_TOL = 1e-10
DISTINCT_TOL = 1e-9
KINDS = ("dyadic-sparse", "strip", "shor", "grover")


@dataclass(frozen=True)
class FrequencyBits:
    value: int
    width: int

    def __post_init__(self):
        if not 0 <= self.value < (1 << self.width):
            raise ArgumentError(f"{self.value} does not fit in {self.width} bits")

    @property
    def real(self):
        return self.value / (1 << self.width)


def truncate(omega, width):
    """``width``-bit truncation of a frequency, as an integer numerator."""
    scaled = np.floor(np.asarray(omega, dtype=np.float64) * (1 << width) + 1e-12)
    return np.mod(scaled.astype(np.int64), 1 << width)


def wrap_distance(a, b):
    d = np.abs(np.asarray(a) - np.asarray(b)) % 1.0
    return np.minimum(d, 1.0 - d)


@dataclass(frozen=True)
class SpectrumSpec:
    kind: str
    n: int
    count: int = 0
    gap: float = 0.0
    strips: int = 0
    width: float = 0.0
    a: int = 0
    modulus: int = 0
    marked: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ArgumentError(f"unknown spectrum kind {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ArgumentError("n must be positive")
        if self.kind == "dyadic-sparse":
            if self.count < 1 or not 0 <= self.gap <= 1:
                raise ArgumentError("dyadic-sparse needs count >= 1 and 0 <= gap <= 1")
        elif self.kind == "strip":
            if self.strips < 1 or self.width <= 0 or not self.width < self.gap:
                raise ArgumentError("strip spectrum needs strips >= 1 and 0 < width < gap")
        elif self.kind == "shor":
            if self.modulus < 2 or gcd(self.a, self.modulus) != 1:
                raise ArgumentError(f"shor needs gcd(a, modulus) = 1, got a={self.a}, modulus={self.modulus}")
            if (1 << self.n) < self.modulus:
                raise ArgumentError(f"2^n = {1 << self.n} cannot hold residues mod {self.modulus}")
        elif self.kind == "grover":
            if not 0 <= self.marked < (1 << self.n):
                raise ArgumentError(f"marked item {self.marked} out of range")


@dataclass(frozen=True, eq=False)
class SpectralUnitary:
    n: int
    eigenvectors: np.ndarray
    frequencies: np.ndarray
    label: str = ""
    _vh: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        N = 1 << self.n
        v = np.ascontiguousarray(self.eigenvectors, dtype=np.complex128)
        w = np.asarray(self.frequencies, dtype=np.float64).copy()
        if v.shape != (N, N) or w.shape != (N,):
            raise ArgumentError(f"expected {N}x{N} eigenvectors and {N} frequencies")
        if np.any(w < 0) or np.any(w >= 1):
            raise ArgumentError("frequencies must lie in [0, 1)")
        gram_err = np.abs(v.conj().T @ v - np.eye(N)).max()
        if gram_err > GRAM_TOL:
            raise ArgumentError(f"eigenvectors are not orthonormal (max Gram error {gram_err:.2e})")
        v.flags.writeable = False
        w.flags.writeable = False
        vh = np.ascontiguousarray(v.conj().T)
        vh.flags.writeable = False
        object.__setattr__(self, "eigenvectors", v)
        object.__setattr__(self, "frequencies", w)
        object.__setattr__(self, "_vh", vh)

    @property
    def N(self):
        return 1 << self.n

    def to_eigenbasis(self, psi):
        return self._vh @ psi

    def from_eigenbasis(self, coef):
        return self.eigenvectors @ coef

    def dense(self):
        v = self.eigenvectors
        return (v * np.exp(2j * np.pi * self.frequencies)) @ v.conj().T

    def is_exact(self, bits):
        """True when every frequency is a multiple of 2**-bits."""
        scaled = self.frequencies * (1 << bits)
        return bool(np.all(np.abs(scaled - np.round(scaled)) < 1e-9))

    def distinct_frequencies(self):
        return _distinct(self.frequencies)

    def diagonal_twin(self):
        """The same operator written in its own eigenbasis (identity eigenvectors).

        Circuits built from ``U`` commute with this change of basis, so
        running them on the twin with input ``e_k`` is running them on
        ``U`` with input ``Phi_k``.
        """
        eye = np.eye(self.N, dtype=np.complex128)
        return SpectralUnitary(self.n, eye, self.frequencies, label=f"{self.label}:eigenbasis")


def _random_unitary(N, rng):
    z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _dyadic_sparse(spec, rng):
    N = 1 << spec.n
    if spec.count > N:
        raise ArgumentError(f"cannot place {spec.count} distinct frequencies on a grid of {N}")
    step = int(np.ceil(spec.gap * N - 1e-12)) if spec.count > 1 else 0
    if spec.count * step > N:
        raise ArgumentError(
            f"{spec.count} frequencies with wraparound gap >= {spec.gap} do not fit on {N} grid points"
        )
    slack = N - spec.count * step
    extra = rng.multinomial(slack, np.full(spec.count, 1.0 / spec.count))
    positions = (int(rng.integers(N)) + np.concatenate(([0], np.cumsum(step + extra)[:-1]))) % N
    distinct = np.sort(positions) / N
    labels = rng.permutation(np.arange(N) % spec.count)
    return distinct[labels], _random_unitary(N, rng)


def _strip(spec, rng):
    N = 1 << spec.n
    pitch = spec.gap + spec.width
    if spec.strips * pitch > 1.0 + 1e-12:
        raise ArgumentError(f"{spec.strips} strips of pitch {pitch} do not fit on the unit circle")
    sizes = np.full(spec.strips, N // spec.strips)
    sizes[: N % spec.strips] += 1
    freqs = []
    for j, m in enumerate(sizes):
        center = 0.5 * pitch + j * pitch
        offsets = np.zeros(1) if m == 1 else np.linspace(-0.5, 0.5, m)
        freqs.append(center + spec.width * offsets)
    freqs = np.mod(np.concatenate(freqs), 1.0)
    return freqs[rng.permutation(N)], _random_unitary(N, rng)


def _shor(spec):
    N = 1 << spec.n
    v = np.zeros((N, N), dtype=np.complex128)
    w = np.zeros(N)
    seen = np.zeros(N, dtype=bool)
    col = 0
    for start in range(N):
        if seen[start]:
            continue
        orbit = [start]
        seen[start] = True
        if start < spec.modulus:
            x = (spec.a * start) % spec.modulus
            while x != start:
                orbit.append(x)
                seen[x] = True
                x = (spec.a * x) % spec.modulus
        r = len(orbit)
        j = np.arange(r)
        for k in range(r):
            v[orbit, col] = np.exp(-2j * np.pi * k * j / r) / np.sqrt(r)
            w[col] = k / r
            col += 1
    return w, v


def _grover(spec):
    N = 1 << spec.n
    s = np.full(N, 1.0 / np.sqrt(N))
    invert_s = np.eye(N) - 2.0 * np.outer(s, s)
    invert_a = np.eye(N)
    invert_a[spec.marked, spec.marked] = -1.0
    t, z = scipy.linalg.schur((invert_s @ invert_a).astype(np.complex128), output="complex")
    w = np.mod(np.angle(np.diagonal(t)) / (2 * np.pi), 1.0)
    w[(w < 1e-12) | (w > 1 - 1e-12)] = 0.0
    return w, z


def build(spec, seed=0):
    rng = np.random.default_rng(seed)
    if spec.kind == "dyadic-sparse":
        w, v = _dyadic_sparse(spec, rng)
    elif spec.kind == "strip":
        w, v = _strip(spec, rng)
    elif spec.kind == "shor":
        w, v = _shor(spec)
    else:
        w, v = _grover(spec)
    return SpectralUnitary(spec.n, v, w, label=spec.kind)


def power_phases(frequencies, s):
    turns = np.mod(frequencies * s, 1.0)
    return np.exp(2j * np.pi * turns)


def apply_power(u, s, psi):
    """``U**s psi`` for integer ``s`` (negative allowed).

    ``psi`` may be a vector of length N or an (N, R) block of columns.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    if psi.shape[0] != u.N:
        raise ArgumentError(f"state has leading dimension {psi.shape[0]}, operator acts on {u.N}")
    ph = power_phases(u.frequencies, int(s))
    coef = u.to_eigenbasis(psi)
    coef = coef * (ph if coef.ndim == 1 else ph[:, None])
    return u.from_eigenbasis(coef)


def exact_evolution_oracle(u, t, xi):
    """Ground truth ``U**t xi``."""
    return apply_power(u, t, xi)


def min_wraparound_gap(u):
    w = _distinct(u.frequencies if isinstance(u, SpectralUnitary) else u)
    if len(w) < 2:
        return 1.0
    gaps = np.diff(np.concatenate([w, [w[0] + 1.0]]))
    return float(gaps.min())


def _distinct(freqs):
    w = np.sort(np.mod(np.asarray(freqs, dtype=np.float64), 1.0))
    keep = [w[0]]
    for x in w[1:]:
        if x - keep[-1] > DISTINCT_TOL:
            keep.append(x)
    if len(keep) > 1 and keep[0] + 1.0 - keep[-1] <= DISTINCT_TOL:
        keep.pop()
    return np.array(keep)
