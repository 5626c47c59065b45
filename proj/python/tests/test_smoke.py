import math

import pytest

import ptqfi


def test_vacuum_thermal_fidelity():
    f = ptqfi.fidelity((0, 0), [1, 0, 0, 1], (0, 0), [3, 0, 0, 3])
    assert f == pytest.approx(0.5, abs=1e-12)


def test_purity_of_thermal_state():
    assert ptqfi.purity([3, 0, 0, 3]) == pytest.approx(1 / 3, rel=1e-14)


def test_effective_frequency_phases():
    omega, phase = ptqfi.effective_frequency(2.0, 0.3)
    assert omega == pytest.approx(1.6, rel=1e-14)
    assert phase == "unbroken"
    assert ptqfi.effective_frequency(2.0, 0.5) == (0.0, "exceptional_point")


def test_frequency_qfi_routes_agree():
    closed = ptqfi.qfi_closed_forms(2.0, 0.1, 0.2)["qfi_omega_closed"]
    fd = ptqfi.qfi_bures_fd(2.0, 0.1, 0.2, "omega")
    assert abs(closed - fd) / closed < 1e-5


def test_broken_phase_raises_value_error():
    with pytest.raises(ValueError):
        ptqfi.qfi_closed_forms(2.0, 0.5, 0.6)


def test_hermitian_baseline_gain_is_zero():
    assert ptqfi.gain_ratio(3.0, 0.1, 1 / 3, "omega") == pytest.approx(0.0, abs=1e-9)


def test_fock_lab_defaults_pass():
    out = ptqfi.fock_verify()
    assert out["passed"]
    assert out["report"]["lambda_source"] == "derived"
    assert out["report"]["pt_residual"] < 1e-12


def test_simulation_is_deterministic():
    a = ptqfi.simulate(samples=1000, replicas=50, seed=7)
    b = ptqfi.simulate(samples=1000, replicas=50, seed=7)
    assert a == b
    assert math.isfinite(a["empirical_variance"])
