"""Evolution prediction and history restoration through a simulated wizard.

Three predictors, in increasing generality:

* ``predict_naive_exact`` - exact wizard, rotate, exact wizard again.
* ``predict_exact_eigenvalue`` - simulated wizard with ``p`` ancilla
  qubits for spectra that are exactly p-bit.
* ``predict_general`` - ``q = p + c`` ancilla qubits, a sparse-spectrum
  enhancer and the ``-(L-1) delta*`` phase correction.

Only forward powers of ``U`` are used by any of them. The general pipeline
applies ``U_seq`` twice, so its cost is ``2 (L - 1)`` conditional
applications whatever ``t`` is.
"""

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .circuit import CostCounter, _qft, _rotate, _useq, _wh
from .enhancer import enhancer_turns
from .errors import ArgumentError, CapacityError, HorizonError, PreconditionError
from .spectral import exact_evolution_oracle
from .state import RegisterLayout, StateVector, operator_norm, project_ancilla_zero, vector_distances
from .wizard import exact_wizard

CSV_COLUMNS = (
    "t", "distance", "fidelity", "anc_zero_prob", "u_cond", "naive_cost", "speedup",
)


@dataclass(frozen=True)
class PredictionParams:
    delta: float
    rho: float
    p: int
    c: int
    q: int
    L: int
    C: float
    t_max: int
    n: int


def derive_params(delta, p, n):
    """Widths and horizon for target error ``delta``.

    ``n`` is the bit precision of the enhanced frequencies (the main
    register width when the spectrum is n-bit exact).
    """
    if not 0 < delta < 1:
        raise PreconditionError(f"delta must lie in (0, 1), got {delta}")
    c = math.ceil(math.log2(4.0 / delta) - 1e-12)
    if p < c:
        raise PreconditionError(f"p={p} is below c=ceil(log2(4/delta))={c}")
    q = p + c
    if q > n:
        raise CapacityError(f"q=p+c={q} exceeds the precision n={n}")
    C = delta / 14.0
    t_max = math.floor(C * (1 << n) + 1e-9)
    return PredictionParams(delta=delta, rho=1.0 - delta, p=p, c=c, q=q, L=1 << q, C=C, t_max=t_max, n=n)


@dataclass(frozen=True)
class RunReport:
    t: int
    vector_distance: float
    fidelity: float
    ancilla_zero_probability: float
    u_cond_count: int
    naive_cost: int
    speedup_ratio: float
    state_fidelity: float = float("nan")

    def csv_values(self):
        return (
            self.t, self.vector_distance, self.fidelity, self.ancilla_zero_probability,
            self.u_cond_count, self.naive_cost, self.speedup_ratio,
        )

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in names})


def _require_exact(u, bits):
    if not u.is_exact(bits):
        raise PreconditionError(f"spectrum is not exactly representable with {bits} bits")


def predict_naive_exact(xi, u, p, t, counter=None):
    """Exact-wizard prediction: needs every frequency to be p-bit exact."""
    _require_exact(u, p)
    layout = RegisterLayout(u.n, p)
    s = StateVector.product(layout, xi)
    s = exact_wizard(s, u, p)
    M = 1 << p
    turns = np.array([(l * int(t)) % M for l in range(M)], dtype=np.float64) / M
    s = StateVector(layout, _rotate(s.grid(), turns).reshape(-1))
    s = exact_wizard(s, u, p)
    _, main = project_ancilla_zero(s)
    return main


def _check_enhancer(h, q, n=None):
    if h.q != q or (n is not None and h.n != n):
        raise ArgumentError(f"enhancer is ({h.q} -> {h.n} bits), pipeline needs ({q} -> {n} bits)")


def _pipeline(grid, u, h, t, counter=None):
    """WH, U_seq, QFT; enhancer phases; QFT, U_seq, WH. Works in place on (..., N, L)."""
    grid = _wh(grid)
    grid = _useq(grid, u, counter=counter)
    grid = _qft(grid)
    grid = _rotate(grid, enhancer_turns(h, t))
    grid = _qft(grid)
    grid = _useq(grid, u, counter=counter)
    return _wh(grid)


def exact_eigenvalue_state(xi, u, p, t, h, counter=None):
    """Composite output of the p-bit exact pipeline (main (x) p-bit ancilla)."""
    _require_exact(u, p)
    _check_enhancer(h, p)
    layout = RegisterLayout(u.n, p)
    grid = StateVector.product(layout, xi).grid()
    return StateVector(layout, _pipeline(grid, u, h, t, counter).reshape(-1))


def predict_exact_eigenvalue(xi, u, p, t, h, counter=None):
    _, main = project_ancilla_zero(exact_eigenvalue_state(xi, u, p, t, h, counter))
    return main


def _report(out_grid, target, t, u_cond):
    layout_target = np.zeros_like(out_grid)
    layout_target[:, 0] = target
    d = vector_distances(out_grid, layout_target)
    slice0 = out_grid[:, 0]
    prob = float(np.vdot(slice0, slice0).real)
    cond_fid = float(abs(np.vdot(target, slice0)) ** 2 / prob) if prob > 0 else 0.0
    return RunReport(
        t=int(t),
        vector_distance=d.vector_distance,
        fidelity=min(1.0, cond_fid),
        ancilla_zero_probability=prob,
        u_cond_count=int(u_cond),
        naive_cost=abs(int(t)),
        speedup_ratio=abs(int(t)) / u_cond if u_cond else float("inf"),
        state_fidelity=d.fidelity,
    )


def predict_general(xi, u, params, h, t, counter=None, enforce_horizon=True):
    """Run steps 1-6 for time ``t`` and compare with ``U^t xi (x) |0^q>``."""
    if enforce_horizon and abs(int(t)) > params.t_max:
        raise HorizonError(f"|t|={abs(int(t))} exceeds the horizon t_max={params.t_max}")
    _check_enhancer(h, params.q, params.n)
    counter = CostCounter() if counter is None else counter
    before = counter.u_cond_applications
    layout = RegisterLayout(u.n, params.q)
    xi = np.asarray(xi, dtype=np.complex128)
    grid = StateVector.product(layout, xi).grid()
    out = _pipeline(grid, u, h, t, counter)
    report = _report(out, exact_evolution_oracle(u, t, xi), t, counter.u_cond_applications - before)
    return StateVector(layout, out.reshape(-1)), report


def restore_history(xi, u, params, h, t, counter=None):
    """State at time ``-t``; uses the same forward-only pipeline with ``t`` negated."""
    if int(t) < 0:
        raise ArgumentError("restore_history takes a nonnegative t")
    return predict_general(xi, u, params, h, -int(t), counter)


def predict_batch(states, u, params, h, t, enforce_horizon=True, return_grids=False):
    """``predict_general`` reports for each row of ``states``, sharing one batched pipeline.

    With ``return_grids`` the output amplitude grids, shape (R, N, L), come back too.
    """
    if enforce_horizon and abs(int(t)) > params.t_max:
        raise HorizonError(f"|t|={abs(int(t))} exceeds the horizon t_max={params.t_max}")
    _check_enhancer(h, params.q, params.n)
    states = np.atleast_2d(np.asarray(states, dtype=np.complex128))
    grid = np.zeros((len(states), u.N, params.L), dtype=np.complex128)
    grid[:, :, 0] = states
    out = _pipeline(grid, u, h, t)
    targets = exact_evolution_oracle(u, t, states.T).T
    u_cond = 2 * (params.L - 1)
    reports = [_report(out[i], targets[i], t, u_cond) for i in range(len(states))]
    return (reports, out) if return_grids else reports


def predict_eigenvectors(u, params, h, t, enforce_horizon=True):
    """Reports for every eigenvector input ``Phi_k``, from one pass on the diagonal twin.

    Distinct eigencomponents never mix, so row ``k`` of the twin's output
    grid is the whole output for input ``Phi_k``. The worst of these
    reports bounds every other input.
    """
    if enforce_horizon and abs(int(t)) > params.t_max:
        raise HorizonError(f"|t|={abs(int(t))} exceeds the horizon t_max={params.t_max}")
    _check_enhancer(h, params.q, params.n)
    twin = u.diagonal_twin()
    grid = np.zeros((u.N, params.L), dtype=np.complex128)
    grid[:, 0] = 1.0
    out = _pipeline(grid, twin, h, t)
    targets = exact_evolution_oracle(twin, t, np.ones(u.N, dtype=np.complex128))
    u_cond = 2 * (params.L - 1)
    return [_report(out[k:k + 1], targets[k:k + 1], t, u_cond) for k in range(u.N)]


def operator_norm_check(u, params, h, t, max_n=9, max_q=8, chunk=32):
    """Largest singular value of ``U_{q,t} - U^t (x) e_0`` on ancilla-zero inputs."""
    if u.n > max_n or params.q > max_q:
        raise CapacityError(f"operator norm check limited to n <= {max_n}, q <= {max_q}")
    _check_enhancer(h, params.q, params.n)
    N, L = u.N, params.L
    diff = np.empty((N * L, N), dtype=np.complex128)
    eye = np.eye(N, dtype=np.complex128)
    target = exact_evolution_oracle(u, t, eye)
    for start in range(0, N, chunk):
        cols = eye[start:start + chunk]
        grid = np.zeros((len(cols), N, L), dtype=np.complex128)
        grid[:, :, 0] = cols
        out = _pipeline(grid, u, h, t)
        out[:, :, 0] -= target[:, start:start + chunk].T
        diff[:, start:start + chunk] = out.reshape(len(cols), -1).T
    return operator_norm(diff)


@dataclass(frozen=True)
class SpeedupSummary:
    runs: int
    measured_horizon: int
    u_cond_count: int
    cost_2L: int
    measured_speedup: float
    theoretical_speedup: float
    bound_horizon: float
    bound_cost: float

    @property
    def agreement_factor(self):
        """How far apart measured and theoretical speedups are, as a ratio >= 1."""
        a, b = self.measured_speedup, self.theoretical_speedup
        if not (a > 0 and b > 0):
            return float("inf")
        return max(a / b, b / a)

    def __bool__(self):
        return self.runs > 0


def theoretical_speedup(eps, eps1, rho):
    return eps1 * (1.0 - rho) / (56.0 * eps)


def speedup_summary(reports, eps, eps1, rho):
    """Measured horizon/cost against the closed-form speedup, side by side.

    The measured speedup is the best ``|t| / u_cond`` among the reports,
    i.e. the run at the largest horizon reached.
    """
    reports = list(reports)
    if not reports:
        nan = float("nan")
        return SpeedupSummary(0, 0, 0, 0, nan, nan, nan, nan)
    u_cond = max(r.u_cond_count for r in reports)
    L = (u_cond // 2) + 1
    return SpeedupSummary(
        runs=len(reports),
        measured_horizon=max(abs(r.t) for r in reports),
        u_cond_count=u_cond,
        cost_2L=2 * L,
        measured_speedup=max(r.speedup_ratio for r in reports),
        theoretical_speedup=theoretical_speedup(eps, eps1, rho),
        bound_horizon=(1.0 - rho) / (14.0 * eps),
        bound_cost=4.0 / ((1.0 - rho) * eps1),
    )
