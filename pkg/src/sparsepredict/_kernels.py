"""Inner loops over the (main, ancilla) amplitude grid.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version with identical semantics. The module-level names (``fwht_rows``,
``outer_phase``, ...) point at the numba versions unless numba is missing
or ``SPARSEPREDICT_NUMBA=0`` is set in the environment when the package is
imported. ``benchmarks/bench_kernels.py`` times both paths.

All kernels operate in place on C-contiguous complex128 arrays of shape
``(rows, M)`` where ``M`` is the ancilla dimension.
"""

import os

import numpy as np

TWO_PI = 2.0 * np.pi

try:
    import numba
except ImportError:  # pragma: no cover - numba is a hard dependency in CI
    numba = None

USE_NUMBA = numba is not None and os.environ.get("SPARSEPREDICT_NUMBA", "1") != "0"


# --------------------------------------------------------------------------
# numpy reference path
# --------------------------------------------------------------------------

def np_fwht_rows(a):
    """Normalized Walsh-Hadamard transform along the last axis, in place."""
    rows, m = a.shape
    h = 1
    while h < m:
        v = a.reshape(rows, m // (2 * h), 2, h)
        x = v[:, :, 0, :].copy()
        y = v[:, :, 1, :]
        v[:, :, 0, :] += y
        v[:, :, 1, :] = x - y
        h *= 2
    a *= 1.0 / np.sqrt(m)
    return a


def np_outer_phase(a, omega, scale):
    """a[k, j] *= exp(2*pi*i * frac(scale * omega[k] * j))."""
    m = a.shape[1]
    turns = np.outer(omega * scale, np.arange(m, dtype=np.float64))
    turns -= np.floor(turns)
    a *= np.exp(1j * TWO_PI * turns)
    return a


def np_column_phase(a, turns):
    """a[k, j] *= exp(2*pi*i * turns[j])."""
    a *= np.exp(1j * TWO_PI * turns)[None, :]
    return a


def np_xor_shift(a, shifts):
    """Return b with b[k, j ^ shifts[k]] = a[k, j]."""
    rows, m = a.shape
    cols = np.arange(m)[None, :] ^ shifts[:, None]
    out = np.empty_like(a)
    np.put_along_axis(out, cols, a, axis=1)
    return out


def np_geometric_sum(delta, m):
    s = np.arange(m, dtype=np.float64)
    turns = s * delta
    turns -= np.floor(turns)
    return complex(np.exp(1j * TWO_PI * turns).sum())


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

if numba is not None:

    @numba.njit(cache=True)
    def nb_fwht_rows(a):
        rows, m = a.shape
        norm = 1.0 / np.sqrt(m)
        for r in range(rows):
            h = 1
            while h < m:
                for start in range(0, m, 2 * h):
                    for j in range(start, start + h):
                        x = a[r, j]
                        y = a[r, j + h]
                        a[r, j] = x + y
                        a[r, j + h] = x - y
                h *= 2
            for j in range(m):
                a[r, j] *= norm
        return a

    @numba.njit(cache=True)
    def nb_outer_phase(a, omega, scale):
        rows, m = a.shape
        for k in range(rows):
            w = omega[k] * scale
            for j in range(m):
                turns = w * j
                turns -= np.floor(turns)
                ang = 2.0 * np.pi * turns
                a[k, j] *= complex(np.cos(ang), np.sin(ang))
        return a

    @numba.njit(cache=True)
    def nb_column_phase(a, turns):
        rows, m = a.shape
        ph = np.empty(m, dtype=np.complex128)
        for j in range(m):
            ang = 2.0 * np.pi * turns[j]
            ph[j] = complex(np.cos(ang), np.sin(ang))
        for k in range(rows):
            for j in range(m):
                a[k, j] *= ph[j]
        return a

    @numba.njit(cache=True)
    def nb_xor_shift(a, shifts):
        rows, m = a.shape
        out = np.empty_like(a)
        for k in range(rows):
            sh = shifts[k]
            for j in range(m):
                out[k, j ^ sh] = a[k, j]
        return out

    @numba.njit(cache=True)
    def nb_geometric_sum(delta, m):
        acc = 0.0 + 0.0j
        for s in range(m):
            turns = s * delta
            turns -= np.floor(turns)
            ang = 2.0 * np.pi * turns
            acc += complex(np.cos(ang), np.sin(ang))
        return acc

else:  # pragma: no cover
    nb_fwht_rows = np_fwht_rows
    nb_outer_phase = np_outer_phase
    nb_column_phase = np_column_phase
    nb_xor_shift = np_xor_shift
    nb_geometric_sum = np_geometric_sum


if USE_NUMBA:
    fwht_rows = nb_fwht_rows
    outer_phase = nb_outer_phase
    column_phase = nb_column_phase
    xor_shift = nb_xor_shift
    geometric_sum = nb_geometric_sum
else:
    fwht_rows = np_fwht_rows
    outer_phase = np_outer_phase
    column_phase = np_column_phase
    xor_shift = np_xor_shift
    geometric_sum = np_geometric_sum


def backend():
    return "numba" if USE_NUMBA else "numpy"
