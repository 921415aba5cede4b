import numpy as np
import pytest

from memrelax import BiolekModel, IntegratorConfig, PulseTrain, ThresholdCircuit, simulate


@pytest.fixture
def fig3_circuit():
    return ThresholdCircuit(
        beta=0.05, v_on=1.0, v_off=-0.7, r_series=2000.0, r_on=2000.0, r_off=10000.0
    )


@pytest.fixture
def fig3_train():
    return PulseTrain(
        period_T=1.0, tau_plus=0.4, tau_minus=0.25, amp_plus=2.2, amp_minus=-2.2
    )


@pytest.fixture
def fig3_circuit_dict():
    return dict(beta=0.05, v_on=1.0, v_off=-0.7, r_series=2000.0, r_on=2000.0, r_off=10000.0)


@pytest.fixture
def fig3_train_dict():
    return dict(period=1.0, tau_plus=0.4, tau_minus=0.25, amp_plus=2.2, amp_minus=-2.2)


def make_biolek(alpha: float, hp_tau: float = 0.01, tau_frac: float = 0.2, T: float = 1.0):
    """Biolek model + train with h+ tau+ = hp_tau and the given asymmetry."""
    tau = tau_frac * T
    model = BiolekModel(h_plus=hp_tau / tau, h_minus=-alpha * hp_tau / tau)
    train = PulseTrain(period_T=T, tau_plus=tau, tau_minus=tau, amp_plus=1.0, amp_minus=-1.0)
    return model, train


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so per-test timings reflect steady state."""
    model, train = make_biolek(1.0)
    simulate(model, train, 0.5, 2.0, IntegratorConfig(substeps_per_segment=2, samples_per_period=2))
    circ = ThresholdCircuit(
        beta=0.05, v_on=1.0, v_off=-0.7, r_series=2000.0, r_on=2000.0, r_off=10000.0
    )
    ctrain = PulseTrain(period_T=1.0, tau_plus=0.4, tau_minus=0.25, amp_plus=2.2, amp_minus=-2.2)
    simulate(circ, ctrain, 0.5, 2.0, IntegratorConfig(substeps_per_segment=2, samples_per_period=2))
