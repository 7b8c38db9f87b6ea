"""Experiment drivers shared by the CLI and the acceptance suite."""

import math
from dataclasses import dataclass, replace

import numpy as np

from .enhancer import build_enhancer
from .errors import ArgumentError, CapacityError, ConfigError, HorizonError
from .predictor import (
    PredictionParams,
    RunReport,
    derive_params,
    predict_batch,
    predict_eigenvectors,
    speedup_summary,
)
from .spectral import SpectrumSpec, build, min_wraparound_gap
from .state import random_state

DEFAULT_MAX_QUBITS = 14
EXTRA_PRECISION = 8


@dataclass(frozen=True, eq=False)
class Instance:
    """Everything ``predict_general`` needs, plus whether the error bound is claimed for it."""

    u: object
    params: PredictionParams
    h: object
    covered: bool
    label: str


def check_capacity(n, anc, max_qubits=DEFAULT_MAX_QUBITS):
    if n > max_qubits:
        raise CapacityError(f"main register n={n} exceeds the guard of {max_qubits} qubits")
    total = max_qubits + 8
    if n + anc > total:
        raise CapacityError(f"n + ancilla = {n + anc} exceeds the guard of {total} qubits")


def c_for(delta):
    return math.ceil(math.log2(4.0 / delta) - 1e-12)


def sparse_instance(n, p, delta, count=None, gap=None, seed=0):
    """n-bit exact spectrum in which every estimate within ``2**-p`` of a frequency is unambiguous.

    That premise needs a gap of at least ``2 * 2**-p`` (the default). With
    ``count=None`` the circle is packed as tightly as the gap allows.
    """
    gap = 2.0 ** (1 - p) if gap is None else gap
    if count is None:
        count = max(1, int(math.floor(1.0 / gap + 1e-9)))
    u = build(SpectrumSpec("dyadic-sparse", n, count=count, gap=gap), seed)
    params = derive_params(delta, p, n)
    h = build_enhancer(u, params.q, params.n)
    return Instance(u, params, h, covered=True, label="dyadic-sparse")


def grover_theory_gap(n):
    """Frequency gap ``2 theta / 2 pi`` with ``theta = 2 arcsin(N**-1/2)``."""
    return 2.0 * 2.0 * math.asin(1.0 / math.sqrt(1 << n)) / (2 * math.pi)


def grover_instance(n, marked=0, delta=0.5, p=None, precision=None):
    """Grover iterate with the ancilla sized so that ``2**-p`` is at most half the gap.

    The eigenphases are irrational, so the enhancer reports them with
    ``precision`` bits (default ``q + 8``) rather than with ``n`` bits.
    """
    u = build(SpectrumSpec("grover", n, marked=marked))
    gap = min_wraparound_gap(u)
    c = c_for(delta)
    if p is None:
        p = max(c, math.ceil(math.log2(2.0 / gap)))
    precision = p + c + EXTRA_PRECISION if precision is None else precision
    params = derive_params(delta, p, precision)
    h = build_enhancer(u, params.q, params.n)
    return Instance(u, params, h, covered=True, label="grover"), gap


def strip_centers(spec):
    pitch = spec.gap + spec.width
    return np.mod(0.5 * pitch + pitch * np.arange(spec.strips), 1.0)


def strip_instance(n, width, gap=0.125, strips=None, delta=0.5, q=None, precision=24, seed=0):
    """Strip spectrum; the enhancer only knows the strip centres (accuracy ~ width)."""
    strips = int(math.floor(1.0 / (gap + width))) if strips is None else strips
    spec = SpectrumSpec("strip", n, strips=strips, width=width, gap=gap)
    u = build(spec, seed)
    c = c_for(delta)
    p = max(c, math.ceil(math.log2(1.0 / gap))) if q is None else q - c
    params = derive_params(delta, p, precision)
    h = build_enhancer(strip_centers(spec), params.q, params.n)
    return Instance(u, params, h, covered=False, label="strip")


def shor_instance(n, a, modulus, delta=0.5, p=None, precision=None):
    u = build(SpectrumSpec("shor", n, a=a, modulus=modulus))
    c = c_for(delta)
    gap = min_wraparound_gap(u)
    if p is None:
        p = max(c, math.ceil(math.log2(1.0 / gap)))
    precision = max(n, p + c) if precision is None else precision
    params = derive_params(delta, p, precision)
    h = build_enhancer(u, params.q, params.n)
    return Instance(u, params, h, covered=u.is_exact(params.n), label="shor")


def random_states(dim, trials, seed):
    rng = np.random.default_rng(seed)
    return np.array([random_state(dim, rng) for _ in range(trials)])


def worst_case(reports):
    """One report carrying the worst distance, fidelity and ancilla-zero probability."""
    worst = max(reports, key=lambda r: r.vector_distance)
    return replace(
        worst,
        fidelity=min(r.fidelity for r in reports),
        ancilla_zero_probability=min(r.ancilla_zero_probability for r in reports),
        state_fidelity=min(r.state_fidelity for r in reports),
    )


def run_times(inst, states, times, restore=False, eigenvectors=False, chunk=25):
    """``[(t, RunReport or HorizonError)]``, one worst-case report per time.

    With ``eigenvectors`` the worst case also covers all N eigenvector inputs.
    """
    rows = []
    for t in times:
        signed = -int(t) if restore else int(t)
        try:
            reports = []
            for start in range(0, len(states), chunk):
                reports += predict_batch(states[start:start + chunk], inst.u, inst.params, inst.h, signed)
            if eigenvectors:
                reports += predict_eigenvectors(inst.u, inst.params, inst.h, signed)
            rows.append((signed, worst_case(reports)))
        except HorizonError as exc:
            rows.append((signed, exc))
    return rows


def log_times(t_hi, points):
    if t_hi < 1:
        raise ArgumentError("time range is empty")
    return sorted({int(round(x)) for x in np.geomspace(1, t_hi, points)})


@dataclass(frozen=True)
class GroverRun:
    n: int
    gap: float
    theory_gap: float
    params: PredictionParams
    rows: list

    @property
    def gap_relative_error(self):
        return abs(self.gap - self.theory_gap) / self.theory_gap


def run_grover(n, marked=0, delta=0.5, p=None, precision=None, times=None, trials=20, seed=0):
    inst, gap = grover_instance(n, marked, delta, p, precision)
    N = inst.u.N
    uniform = np.full(N, 1.0 / math.sqrt(N), dtype=np.complex128)
    states = np.vstack([uniform[None, :], random_states(N, trials, seed)])
    if times is None:
        times = [0] + log_times(inst.params.t_max, 6)
    return GroverRun(n, gap, grover_theory_gap(n), inst.params, run_times(inst, states, times))


@dataclass(frozen=True)
class StripPoint:
    width: float
    t: int
    fidelity: float
    distance: float

    @property
    def wt(self):
        return self.width * self.t


def run_strip_trend(n, width, gap=0.125, q=None, points=9, trials=20, seed=0, times=None):
    """Mean conditioned fidelity against ``t`` over log-spaced ``t`` in [1, 1/(4w)]."""
    inst = strip_instance(n, width, gap=gap, q=q, seed=seed)
    states = random_states(inst.u.N, trials, seed)
    if times is None:
        times = log_times(int(math.floor(1.0 / (4.0 * width))), points)
    out = []
    for t in times:
        reports = predict_batch(states, inst.u, inst.params, inst.h, t)
        out.append(StripPoint(
            width=width,
            t=int(t),
            fidelity=float(np.mean([r.fidelity for r in reports])),
            distance=float(max(r.vector_distance for r in reports)),
        ))
    return inst, out


def sweep_cells(ns, ps, deltas, times):
    cells = []
    for n in ns:
        for p in ps:
            for delta in deltas:
                for t in times:
                    cells.append((n, p, delta, t))
    if not cells:
        raise ConfigError("sweep range is empty")
    return cells


def run_sweep(ns, ps, deltas, times, count=None, trials=10, seed=0, max_qubits=DEFAULT_MAX_QUBITS,
              eigenvectors=False):
    """Cartesian sweep; returns ``(rows, summaries)`` ordered by parameter tuple.

    ``times`` entries are integers or the string ``"max"`` (the horizon of
    each cell).
    """
    cells = sweep_cells(ns, ps, deltas, times)
    instances = {}
    for n, p, delta, _ in cells:
        if (n, p, delta) not in instances:
            params = derive_params(delta, p, n)
            check_capacity(n, params.q, max_qubits)
            instances[(n, p, delta)] = None
    rows, by_family = [], {}
    for n, p, delta, t in cells:
        key = (n, p, delta)
        if instances[key] is None:
            instances[key] = sparse_instance(n, p, delta, count=count, seed=seed)
        inst = instances[key]
        t_val = inst.params.t_max if t == "max" else int(t)
        states = random_states(inst.u.N, trials, seed)
        (signed, rep), = run_times(inst, states, [t_val], eigenvectors=eigenvectors)
        rows.append((key, inst.params, signed, rep))
        if isinstance(rep, RunReport):
            by_family.setdefault(key, []).append(rep)
    summaries = {
        key: speedup_summary(reps, eps=2.0 ** -key[0], eps1=2.0 ** -key[1], rho=1.0 - key[2])
        for key, reps in by_family.items()
    }
    return rows, summaries
