from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import brute_period, exact_marginal_period, prime_factors

from sparsepredict.errors import ArgumentError
from sparsepredict.shor import convergents, denominator_candidate, multiplicative_order, run_shor
from sparsepredict.spectral import SpectrumSpec, build
from sparsepredict.wizard import simulate_wizard


@given(st.integers(0, 10**6), st.integers(1, 10**6))
def test_last_convergent_is_the_fraction(num, den):
    p, q = convergents(num, den)[-1]
    assert Fraction(p, q) == Fraction(num, den)


def test_denominator_candidate():
    assert denominator_candidate(16, 64, 15) == 4
    assert denominator_candidate(0, 64, 15) == 1
    assert denominator_candidate(21, 64, 15) == 3  # 21/64 ~ 1/3


@pytest.mark.parametrize("a,m", [(7, 15), (2, 15), (2, 5), (3, 7), (2, 21)])
def test_order_matches_brute_force(a, m):
    assert multiplicative_order(a, m) == brute_period(a, m)


def test_wizard_marginal_on_one_is_exact():
    u = build(SpectrumSpec("shor", 4, a=7, modulus=15))
    start = np.eye(16)[1]
    marginal = simulate_wizard(start, u, 6).state.ancilla_marginal()
    np.testing.assert_allclose(marginal, exact_marginal_period(4, 6), atol=1e-12)


def test_fifteen():
    res = run_shor(15, 7, 6, 10, seed=0)
    assert res.success and res.period == 4
    assert set(res.factors) == prime_factors(15) == {3, 5}
    assert pow(7, res.period, 15) == 1
    assert res.u_cond_count == 63 * res.trials_used


def test_five():
    res = run_shor(5, 2, 4, 10, seed=1)
    assert res.success and res.period == brute_period(2, 5) == 4


def test_non_coprime_rejected():
    with pytest.raises(ArgumentError):
        run_shor(15, 5, 6, 10)
    with pytest.raises(ArgumentError):
        run_shor(15, 7, 6, 0)


def test_budget_exhaustion_reports_failure():
    # with one trial some seeds draw l = 0 or l = M/2 and cannot pin r = 4
    outcomes = [run_shor(15, 7, 6, 1, seed=s).success for s in range(20)]
    assert not all(outcomes) and any(outcomes)


def test_result_serialises():
    d = run_shor(15, 7, 6, 10, seed=3).to_dict()
    assert d["period"] == 4 and d["factors"] == [3, 5]
    assert len(d["measurements"]) == d["trials_used"] == len(d["convergents"])
