"""Period finding with the simulated wizard on ``U|x> = |a x mod modulus>``."""

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import CostCounter
from .errors import ArgumentError
from .spectral import SpectrumSpec, build
from .wizard import simulate_wizard


def convergents(num, den):
    """Continued-fraction convergents ``(p_i, q_i)`` of ``num/den``."""
    out = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    while den:
        a, (num, den) = num // den, (den, num % den)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append((p, q))
    return out


def denominator_candidate(l, M, bound):
    """Largest convergent denominator of ``l/M`` not exceeding ``bound``."""
    best = 1
    for _, q in convergents(l, M):
        if q > bound:
            break
        best = q
    return best


def multiplicative_order(a, modulus):
    r, x = 1, a % modulus
    while x != 1:
        x = (x * a) % modulus
        r += 1
    return r


def _minimal_period(a, modulus, r):
    """Smallest divisor d of r with a^d = 1 (mod modulus)."""
    for d in range(1, r + 1):
        if r % d == 0 and pow(a, d, modulus) == 1:
            return d
    return r


@dataclass
class ShorResult:
    modulus: int
    a: int
    p: int
    period: int | None
    trials_used: int
    measurements: list = field(default_factory=list)
    convergents: list = field(default_factory=list)
    success: bool = False
    factors: tuple = ()
    u_cond_count: int = 0

    def to_dict(self):
        return {
            "modulus": self.modulus,
            "a": self.a,
            "p": self.p,
            "period": self.period,
            "trials_used": self.trials_used,
            "measurements": list(self.measurements),
            "convergents": [[list(c) for c in cs] for cs in self.convergents],
            "success": self.success,
            "factors": list(self.factors),
            "u_cond_count": self.u_cond_count,
        }


def run_shor(modulus, a, p, trials, seed=0, n=None):
    if math.gcd(a, modulus) != 1:
        raise ArgumentError(f"gcd({a}, {modulus}) != 1")
    if trials < 1:
        raise ArgumentError("trials must be >= 1")
    n = max(1, (modulus - 1).bit_length()) if n is None else n
    u = build(SpectrumSpec("shor", n, a=a, modulus=modulus))
    start = np.zeros(u.N, dtype=np.complex128)
    start[1] = 1.0
    counter = CostCounter()
    out = simulate_wizard(start, u, p, counter)
    marginal = out.state.ancilla_marginal()
    marginal = marginal / marginal.sum()

    M = 1 << p
    rng = np.random.default_rng(seed)
    result = ShorResult(modulus=modulus, a=a, p=p, period=None, trials_used=0)
    acc = 1
    for trial in range(trials):
        l = int(rng.choice(M, p=marginal))
        result.measurements.append(l)
        result.convergents.append(convergents(l, M))
        result.trials_used = trial + 1
        acc = math.lcm(acc, denominator_candidate(l, M, modulus))
        if pow(a, acc, modulus) == 1:
            result.period = _minimal_period(a, modulus, acc)
            result.success = True
            break
    result.u_cond_count = counter.u_cond_applications * result.trials_used

    r = result.period
    if result.success and r % 2 == 0:
        y = pow(a, r // 2, modulus)
        if y != modulus - 1:
            found = {math.gcd(y - 1, modulus), math.gcd(y + 1, modulus)}
            result.factors = tuple(sorted(f for f in found if 1 < f < modulus))
    return result
