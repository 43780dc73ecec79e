import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rotforge.circuits import Q4, build_dpl_circuit, build_mekl_circuit
from rotforge.noise import (
    NoiseSpec,
    closed_form_delta_numerator,
    closed_forms,
    closed_form_p_expression,
    build_round_table,
    build_round_table_dft,
    coherent_plus_error,
    enumerate_branches,
    error_detection,
    generic_bound,
    leading_coefficients,
    leading_order,
    monte_carlo_generic,
    output_error,
    reduced_outputs,
    round_table,
    simulate_round,
)

from oracles import binomial_tail_even, magic, magic_bar

rates = st.floats(0.0, 0.2)


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(-1e-3, 0, 0)
    with pytest.raises(ValueError):
        NoiseSpec(0, 0.5, 0)
    with pytest.raises(ValueError):
        NoiseSpec(0, 0, float("nan"))


@pytest.mark.parametrize("level", [3, 5, 8])
def test_zero_noise_round(level):
    out = simulate_round(build_mekl_circuit(level), NoiseSpec())
    assert out.delta == pytest.approx(0.0, abs=1e-12)
    assert out.p_suc == pytest.approx(1.0, abs=1e-12)


def test_reference_point_matches_leading_order():
    noise = NoiseSpec(1e-3, 1e-3, 1e-6)
    out = simulate_round(build_mekl_circuit(5), noise)
    lo = leading_order(noise)
    assert lo.delta == pytest.approx(9.25e-6, rel=1e-12)
    assert lo.p_suc == pytest.approx(0.9899995, rel=1e-12)
    assert out.delta == pytest.approx(9.25e-6, rel=0.02)
    assert out.p_suc == pytest.approx(0.98999, rel=1e-3)
    # frozen from the exact simulation
    assert out.delta == pytest.approx(9.28447738401e-06, rel=1e-9)
    assert out.p_suc == pytest.approx(0.99005731437, rel=1e-10)


def test_leading_order_zero():
    lo = leading_order(NoiseSpec())
    assert (lo.delta, lo.p_suc) == (0.0, 1.0)


@pytest.mark.parametrize("level", [4, 6])
@pytest.mark.parametrize("scale", [1e-5, 1e-4, 1e-3])
def test_leading_order_within_two_percent(level, scale):
    circ = build_mekl_circuit(level)
    for noise in (NoiseSpec(scale, scale, scale**2), NoiseSpec(scale, 0, 0), NoiseSpec(0, scale, scale / 10)):
        out, lo = simulate_round(circ, noise), leading_order(noise)
        assert out.delta == pytest.approx(lo.delta, rel=0.02)
        assert out.p_fail == pytest.approx(lo.p_fail, rel=0.02)


@settings(max_examples=25, deadline=None)
@given(rates, rates, st.sampled_from([4, 5, 7]))
def test_dp_equals_mek_without_r3_noise(epsl, eta, level):
    noise = NoiseSpec(0.0, epsl, eta)
    a = simulate_round(build_dpl_circuit(level), noise)
    b = simulate_round(build_mekl_circuit(level), noise)
    assert abs(a.delta - b.delta) < 1e-12
    assert abs(a.p_suc - b.p_suc) < 1e-12


@settings(max_examples=15, deadline=None)
@given(rates, rates, rates)
def test_three_routes_agree(eps3, epsl, eta):
    noise = NoiseSpec(eps3, epsl, eta)
    circ = build_mekl_circuit(5)
    sim = simulate_round(circ, noise)
    acc = enumerate_branches(circ).accepted_operator(noise)
    p = float(np.trace(acc).real)
    red3, _ = reduced_outputs(acc)
    assert p == pytest.approx(sim.p_suc, abs=1e-13)
    assert output_error(red3, 5) == pytest.approx(sim.delta, abs=1e-13)
    tab = round_table(5).evaluate(noise)
    assert tab.p_suc == pytest.approx(sim.p_suc, abs=1e-13)
    assert tab.delta == pytest.approx(sim.delta, abs=1e-13)


@pytest.mark.parametrize("level", [4, 6])
def test_table_routes_agree(level):
    a = build_round_table(build_mekl_circuit(level))
    b = build_round_table_dft(build_mekl_circuit(level))
    assert np.allclose(a.accept, b.accept, atol=1e-13)
    assert np.allclose(a.error, b.error, atol=1e-13)
    assert a.is_diagonal and b.is_diagonal
    # coefficients do not depend on the level
    c = round_table(level + 1)
    assert np.allclose(a.accept, c.accept, atol=1e-13)


def test_dp_table_matches_simulation():
    noise = NoiseSpec(1e-3, 2e-3, 1e-5)
    tab = round_table(5, "dp").evaluate(noise)
    sim = simulate_round(build_dpl_circuit(5), noise)
    # DFT coefficients carry ~1e-16 rounding, which shows up relative to a small delta
    assert tab.delta == pytest.approx(sim.delta, rel=1e-6)
    assert tab.p_suc == pytest.approx(sim.p_suc, rel=1e-10)


def test_unknown_protocol():
    with pytest.raises(ValueError):
        round_table(5, "bogus")


@settings(max_examples=20, deadline=None)
@given(rates, rates, rates)
def test_both_outputs_have_equal_error(eps3, epsl, eta):
    circ = build_mekl_circuit(6)
    noise = NoiseSpec(eps3, epsl, eta)
    a = simulate_round(circ, noise)
    b = simulate_round(circ, noise, qubit=Q4)
    assert abs(a.delta - b.delta) < 1e-12


def test_monotone_in_each_rate():
    circ = build_mekl_circuit(5)
    grid = np.linspace(0, 1e-2, 6)
    for axis in range(3):
        prev = None
        for v in grid:
            r = [1e-3, 1e-3, 1e-4]
            r[axis] = v
            out = simulate_round(circ, NoiseSpec(*r))
            if prev is not None:
                assert out.delta >= prev.delta - 1e-15
                assert out.p_fail >= prev.p_fail - 1e-15
            prev = out


@pytest.mark.parametrize("level", [4, 5, 6, 7, 8])
def test_leading_coefficients(level):
    c = leading_coefficients(level, probe=1e-4)
    assert c.delta == pytest.approx((8.0, 1.0, 0.25), rel=0.01)
    assert c.p_fail == pytest.approx((8.0, 2.0, 0.5), rel=0.01)
    fine = leading_coefficients(level, probe=1e-5)
    assert fine.p_fail == pytest.approx((8.0, 2.0, 0.5), rel=0.01)


def test_dp_has_larger_r3_coefficients():
    c = leading_coefficients(5, protocol="dp")
    assert c.delta[0] > 8.0 * 1.5
    assert c.p_fail[0] == pytest.approx(16.0, rel=0.01)


def test_single_errors_are_detected():
    det = error_detection(5)
    assert len(det.single) == 8 and len(det.double) == 28
    assert det.max_single <= 1e-14


def test_pair_acceptance_accounts_for_r3_coefficient():
    # the eps3^2 coefficient of P_suc is 28 (no errors elsewhere) plus the summed pair acceptance
    det = error_detection(5)
    tab = round_table(5)
    total_pairs = float(np.sum(det.double))
    assert tab.accept[2, 0, 0] == pytest.approx(total_pairs, abs=1e-12)
    assert total_pairs == pytest.approx(12.0, abs=1e-12)
    assert det.passing_pairs() == 20


def test_pivot_failure_branch():
    circ = build_mekl_circuit(5)
    b = enumerate_branches(circ, max_weight=0, inputs=((0, 0),), pivots=(1,))
    assert b.acceptance[0] == pytest.approx(0.5, abs=1e-12)
    red, _ = reduced_outputs(np.outer(b.amps[0], b.amps[0].conj()))
    assert output_error(red, 5) == pytest.approx(0.5, abs=1e-12)
    # the surviving state is an equal mix of |M Mbar> and |Mbar M>
    v = b.amps[0] / np.linalg.norm(b.amps[0])
    mb = np.kron(magic(5), magic_bar(5)) ** 1
    bm = np.kron(magic_bar(5), magic(5))
    assert abs(np.vdot(mb, v)) ** 2 == pytest.approx(0.5, abs=1e-12)
    assert abs(np.vdot(bm, v)) ** 2 == pytest.approx(0.5, abs=1e-12)


def test_published_closed_forms_and_errata():
    zero = NoiseSpec()
    assert closed_form_p_expression(zero) == 0.0
    rep = closed_forms(NoiseSpec(1e-3, 1e-3, 1e-6), level=5)
    assert set(rep.errata_flags) == {"p_expression", "eps_l_squared"}
    for level in (4, 7):
        for noise in (NoiseSpec(1e-3, 1e-3, 1e-6), NoiseSpec(0.01, 0.02, 1e-3), NoiseSpec(0.1, 0.05, 0.2)):
            sim = simulate_round(build_mekl_circuit(level), noise)
            corr = closed_forms(noise, level=level)
            assert corr.p_corrected == pytest.approx(sim.p_suc, rel=1e-12)
            assert corr.delta_corrected == pytest.approx(sim.delta, rel=1e-9)
    # the printed delta numerator differs from the corrected one by exactly eps_l^2
    n = NoiseSpec(0.0, 0.01, 0.0)
    assert closed_form_delta_numerator(n) - closed_form_delta_numerator(n, duplicated_term=False) == pytest.approx(1e-4)


def test_generic_bound_examples():
    assert generic_bound(NoiseSpec()).bound == 0.0
    b = generic_bound(NoiseSpec(1e-3, 1e-3, 1e-6))
    assert b.bound == pytest.approx(3.13e-5, rel=0.01)
    assert b.bound == pytest.approx(3.1e-5 / (0.992 * (1 - 2e-3 + 2e-6) - 2e-6), rel=1e-12)
    small = generic_bound(NoiseSpec(1e-7, 1e-7, 1e-14)).bound
    assert small == pytest.approx(1e-14 + 28e-14 + 2e-14, rel=1e-5)
    assert b.p_g == pytest.approx((1 - 1e-3) ** 8)
    assert b.p_b == pytest.approx(binomial_tail_even(8, 1e-3))
    with pytest.raises(ValueError):
        generic_bound(NoiseSpec(0.02, 0, 0))


def test_monte_carlo_zero_noise():
    rep = monte_carlo_generic(3, 5, NoiseSpec(), 5)
    assert rep.max_observed_error == pytest.approx(0.0, abs=1e-12)
    assert rep.violations == 0


def test_monte_carlo_is_seeded():
    caps = NoiseSpec(1e-2, 1e-2, 1e-4)
    a = monte_carlo_generic(7, 20, caps, 5)
    b = monte_carlo_generic(7, 20, caps, 5)
    assert a == b
    assert a.violations == 0


@pytest.mark.parametrize("level", [5, 8, 10])
def test_plus_input_within_bound(level):
    err, bound = coherent_plus_error(level, 1e-3, 1e-6)
    assert err <= bound
