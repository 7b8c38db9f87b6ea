"""Independent reference implementations used only by the tests.

Everything here is built from dense matrices, exact rationals or brute
force, so it shares no code path with the package beyond the spectrum
generators it is fed.
"""

import cmath
from fractions import Fraction
from functools import reduce

import numpy as np


def hadamard_power(p):
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return reduce(np.kron, [h] * p, np.eye(1))


def dft_matrix(M):
    """Forward transform ``|s> -> M**-1/2 sum_l exp(-2 pi i s l / M) |l>``."""
    s = np.arange(M)
    return np.exp(-2j * np.pi * np.outer(s, s) / M) / np.sqrt(M)


def on_ancilla(op, N):
    """Lift an ancilla operator to main-major (N * M) space."""
    return np.kron(np.eye(N), op)


def controlled_powers(U, M, sign=1):
    """``sum_a U**(sign * a) (x) |a><a|`` in main-major ordering."""
    N = U.shape[0]
    out = np.zeros((N * M, N * M), dtype=np.complex128)
    base = U if sign > 0 else U.conj().T
    power = np.eye(N, dtype=np.complex128)
    for a in range(M):
        proj = np.zeros((M, M))
        proj[a, a] = 1.0
        out += np.kron(power, proj)
        power = base @ power
    return out


def dense_wizard(U, p):
    N, M = U.shape[0], 1 << p
    return on_ancilla(dft_matrix(M), N) @ controlled_powers(U, M) @ on_ancilla(hadamard_power(p), N)


def enhancer_phase_fraction(h_l, l, t, q, n):
    """Turns ``h t / 2^n - (L-1)(h / 2^n - l / L)`` reduced mod 1, as an exact fraction."""
    L = 1 << q
    x = Fraction(h_l * t, 1 << n) - (L - 1) * (Fraction(h_l, 1 << n) - Fraction(l, L))
    return x - (x.numerator // x.denominator)


def dense_pipeline(U, table, q, n, t):
    """Whole prediction circuit as one dense matrix."""
    N, L = U.shape[0], 1 << q
    turns = [float(enhancer_phase_fraction(int(table[l]), l, t, q, n)) for l in range(L)]
    rot = on_ancilla(np.diag(np.exp(2j * np.pi * np.array(turns))), N)
    wh = on_ancilla(hadamard_power(q), N)
    qft = on_ancilla(dft_matrix(L), N)
    cu = controlled_powers(U, L)
    return wh @ cu @ qft @ rot @ qft @ cu @ wh


def direct_kernel(omega, l, M):
    """``sum_{s<M} exp(2 pi i s (omega - l/M))`` term by term."""
    d = omega - l / M
    return sum(cmath.exp(2j * cmath.pi * s * d) for s in range(M))


def matrix_power_evolution(U, t, xi):
    if t >= 0:
        return np.linalg.matrix_power(U, t) @ xi
    return np.linalg.matrix_power(U.conj().T, -t) @ xi


def brute_period(a, modulus):
    x, r = a % modulus, 1
    while x != 1:
        x, r = (x * a) % modulus, r + 1
    return r


def prime_factors(m):
    out, d = set(), 2
    while d * d <= m:
        while m % d == 0:
            out.add(d)
            m //= d
        d += 1
    if m > 1:
        out.add(m)
    return out


def grover_matrix(n, marked):
    N = 1 << n
    s = np.full(N, 1.0 / np.sqrt(N))
    diffusion = 2.0 * np.outer(s, s) - np.eye(N)
    oracle = np.eye(N)
    oracle[marked, marked] = -1.0
    return diffusion @ oracle


def dense_min_gap(U):
    """Smallest wraparound gap between distinct eigenphases (in turns), from ``eigvals``."""
    w = np.sort(np.mod(np.angle(np.linalg.eigvals(U)) / (2 * np.pi), 1.0))
    w = np.where(w > 1 - 1e-10, 0.0, w)
    distinct = [w[0]]
    for x in np.sort(w)[1:]:
        if x - distinct[-1] > 1e-8:
            distinct.append(x)
    distinct = np.array(distinct)
    if len(distinct) < 2:
        return 1.0
    return float(np.diff(np.concatenate([distinct, [distinct[0] + 1.0]])).min())


def exact_marginal_period(r, p):
    """Ancilla distribution of the wizard on ``|1>`` when ``r`` divides ``2**p``: uniform on multiples of M/r."""
    M = 1 << p
    out = np.zeros(M)
    out[:: M // r] = 1.0 / r
    return out
