import numpy as np
import pytest

from memrelax import (
    BiolekModel,
    PulseTrain,
    ThresholdCircuit,
    ValidationError,
    biolek_rate,
    biolek_window,
    drive_at,
    memristance,
    state_from_memristance,
    threshold_circuit_rate,
    validate_above_threshold,
)
from memrelax.models import divider_voltage


class TestPulseTrain:
    def test_valid(self, fig3_train):
        assert fig3_train.tau_zero == pytest.approx(0.35)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(period_T=0.0, tau_plus=0.1, tau_minus=0.1, amp_plus=1, amp_minus=-1),
            dict(period_T=1.0, tau_plus=-0.1, tau_minus=0.1, amp_plus=1, amp_minus=-1),
            dict(period_T=1.0, tau_plus=0.7, tau_minus=0.4, amp_plus=1, amp_minus=-1),
            dict(period_T=1.0, tau_plus=0.1, tau_minus=0.1, amp_plus=0, amp_minus=-1),
            dict(period_T=1.0, tau_plus=0.1, tau_minus=0.1, amp_plus=1, amp_minus=0.5),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            PulseTrain(**kwargs)


class TestDriveAt:
    def test_inside_positive_pulse(self, fig3_train):
        assert drive_at(fig3_train, 0.1) == 2.2

    def test_inside_negative_pulse(self, fig3_train):
        assert drive_at(fig3_train, 0.5) == -2.2

    def test_gap(self, fig3_train):
        assert drive_at(fig3_train, 0.9) == 0.0

    def test_negative_time_rejected(self, fig3_train):
        with pytest.raises(ValidationError):
            drive_at(fig3_train, -0.01)

    def test_periodicity(self, fig3_train):
        rng = np.random.default_rng(1)
        t = rng.uniform(0, 20, 500)
        np.testing.assert_array_equal(
            drive_at(fig3_train, t), drive_at(fig3_train, t + fig3_train.period_T)
        )

    def test_array_and_scalar_agree(self, fig3_train):
        ts = np.array([0.1, 0.5, 0.9])
        arr = drive_at(fig3_train, ts)
        assert list(arr) == [drive_at(fig3_train, float(t)) for t in ts]


class TestBiolekWindow:
    def test_midpoint_positive(self):
        assert biolek_window(0.5, drive=1.0, p=1) == pytest.approx(0.75)

    def test_closes_at_top_for_positive_drive(self):
        assert biolek_window(1.0, drive=1.0, p=1) == 0.0

    def test_open_at_top_for_negative_drive(self):
        assert biolek_window(1.0, drive=-1.0, p=1) == 1.0

    def test_zero_drive_uses_positive_window(self):
        # Heaviside convention H(0) = 0
        assert biolek_window(0.5, drive=0.0, p=1) == pytest.approx(0.75)

    def test_domain_error(self):
        with pytest.raises(ValidationError):
            biolek_window(1.2, drive=1.0, p=1)

    @pytest.mark.parametrize("p", [1, 2, 5])
    @pytest.mark.parametrize("drive", [1.0, -1.0, 0.0])
    def test_bounded(self, p, drive):
        x = np.linspace(0, 1, 101)
        w = biolek_window(x, drive, p)
        assert np.all(w >= 0.0) and np.all(w <= 1.0)


class TestBiolekRate:
    @pytest.fixture
    def model(self):
        return BiolekModel(h_plus=0.05, h_minus=-0.025)

    def test_positive_example(self, model):
        assert biolek_rate(model, 0.5, +1) == pytest.approx(0.0375)

    def test_zero_drive_is_zero(self, model):
        assert biolek_rate(model, 0.37, 0) == 0.0

    def test_negative_example(self, model):
        # hand substitution: -0.025 * (1 - (0.5 - 1)^2) = -0.025 * 0.75
        assert biolek_rate(model, 0.5, -1) == pytest.approx(-0.01875)

    def test_sign_matches_drive_in_interior(self, model):
        x = np.linspace(0.01, 0.99, 50)
        assert np.all(biolek_rate(model, x, +1) > 0)
        assert np.all(biolek_rate(model, x, -1) < 0)

    def test_window_confines_state(self, model):
        assert biolek_rate(model, 1.0, +1) == 0.0
        assert biolek_rate(model, 0.0, -1) == 0.0

    def test_model_invariants(self):
        with pytest.raises(ValidationError):
            BiolekModel(h_plus=-0.1, h_minus=-0.1)
        with pytest.raises(ValidationError):
            BiolekModel(h_plus=0.1, h_minus=0.1)
        with pytest.raises(ValidationError):
            BiolekModel(h_plus=0.1, h_minus=-0.1, p_exponent=0)


class TestMemristance:
    def test_endpoints_exact(self):
        assert memristance(0.0, 2000, 10000) == 10000.0
        assert memristance(1.0, 2000, 10000) == 2000.0

    def test_midpoint(self):
        assert memristance(0.5, 2000, 10000) == pytest.approx(6000.0)

    def test_strictly_decreasing(self):
        x = np.linspace(0, 1, 200)
        r = memristance(x, 2000, 10000)
        assert np.all(np.diff(r) < 0)

    def test_domain_error(self):
        with pytest.raises(ValidationError):
            memristance(-0.1, 2000, 10000)

    def test_inverse_roundtrip(self):
        x = np.linspace(0, 1, 50)
        r = memristance(x, 2000, 10000)
        np.testing.assert_allclose(state_from_memristance(r, 2000, 10000), x, atol=1e-14)
        with pytest.raises(ValidationError):
            state_from_memristance(1999.0, 2000, 10000)


class TestThresholdCircuitRate:
    def test_positive_pulse_at_r_on(self, fig3_circuit):
        # R_M = 2000 -> divider 0.5 -> V_M = 1.1, rate = beta * 0.1
        rate = threshold_circuit_rate(fig3_circuit, 1.0, 2.2)
        assert rate == pytest.approx(0.1 * fig3_circuit.beta)

    def test_dead_zone(self, fig3_circuit):
        assert threshold_circuit_rate(fig3_circuit, 1.0, 0.5) == 0.0

    def test_negative_pulse_at_r_off(self, fig3_circuit):
        # R_M = 10000 -> V_M = (10/12) * (-2.2), rate = beta * (V_M + 0.7)
        expected = fig3_circuit.beta * (10000 / 12000 * -2.2 + 0.7)
        rate = threshold_circuit_rate(fig3_circuit, 0.0, -2.2)
        assert rate == pytest.approx(expected)
        assert rate == pytest.approx(-1.13333333333 * fig3_circuit.beta, rel=1e-9)

    def test_continuous_at_thresholds(self, fig3_circuit):
        # pick v so V_M sits exactly at each threshold; both branches give 0
        for x, v_th in ((0.5, fig3_circuit.v_on), (0.5, fig3_circuit.v_off)):
            r_m = memristance(x, fig3_circuit.r_on, fig3_circuit.r_off)
            v = v_th * (fig3_circuit.r_series + r_m) / r_m
            assert threshold_circuit_rate(fig3_circuit, x, v) == pytest.approx(0.0, abs=1e-15)
            for eps in (1e-9, -1e-9):
                rate = threshold_circuit_rate(fig3_circuit, x, v * (1 + eps))
                assert abs(rate) < 1e-8

    def test_domain_error(self, fig3_circuit):
        with pytest.raises(ValidationError):
            threshold_circuit_rate(fig3_circuit, 1.5, 1.0)

    def test_circuit_invariants(self):
        with pytest.raises(ValidationError):
            ThresholdCircuit(beta=0.0, v_on=1, v_off=-1, r_series=1e3, r_on=1e3, r_off=1e4)
        with pytest.raises(ValidationError):
            ThresholdCircuit(beta=0.1, v_on=-1, v_off=-1, r_series=1e3, r_on=1e3, r_off=1e4)
        with pytest.raises(ValidationError):
            ThresholdCircuit(beta=0.1, v_on=1, v_off=-1, r_series=1e3, r_on=1e4, r_off=1e3)


class TestValidateAboveThreshold:
    def test_reference_drive_ok(self, fig3_circuit, fig3_train):
        check = validate_above_threshold(fig3_circuit, fig3_train)
        assert check.ok
        assert check.pos_margin == pytest.approx(0.1)
        assert check.neg_margin == pytest.approx(-0.4)

    def test_weak_drive_fails(self, fig3_circuit, fig3_train):
        weak = PulseTrain(
            period_T=1.0, tau_plus=0.4, tau_minus=0.25, amp_plus=1.0, amp_minus=-1.0
        )
        check = validate_above_threshold(fig3_circuit, weak)
        assert not check.ok
        assert check.pos_margin == pytest.approx(0.5 - 1.0)

    def test_vanishing_threshold_passes(self, fig3_train):
        circ = ThresholdCircuit(
            beta=0.05, v_on=1e-12, v_off=-0.7, r_series=2000.0, r_on=2000.0, r_off=10000.0
        )
        assert validate_above_threshold(circ, fig3_train).pos_margin > 0

    def test_worst_case_is_r_on(self, fig3_circuit, fig3_train):
        # margins at r_on must be the binding ones over the whole range
        for x in np.linspace(0, 1, 11):
            assert divider_voltage(fig3_circuit, x, fig3_train.amp_plus) >= (
                fig3_circuit.v_on + validate_above_threshold(fig3_circuit, fig3_train).pos_margin
            ) - 1e-12
