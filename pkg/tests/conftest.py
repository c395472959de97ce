import pytest

import thermal_casimir as tc
from thermal_casimir.constants import ev_to_angular_frequency


@pytest.fixture(scope="session")
def au_omega_p():
    return ev_to_angular_frequency(9.0)


@pytest.fixture(scope="session")
def au_gamma():
    return ev_to_angular_frequency(0.035)


@pytest.fixture(scope="session")
def au_parameters(au_omega_p, au_gamma):
    return tc.DrudeParameters(au_omega_p, au_gamma)


@pytest.fixture(scope="session")
def drude_au(au_parameters):
    return tc.Drude(au_parameters)


@pytest.fixture(scope="session")
def plasma_au(au_omega_p):
    return tc.Plasma(au_omega_p)


@pytest.fixture(scope="session")
def ideal_metal():
    return tc.IdealMetal()


@pytest.fixture(scope="session")
def drude_synthetic_table(au_omega_p, au_gamma):
    """Dense table sampled from the closed-form Drude absorption."""
    return tc.synthesize_drude_table(au_omega_p, au_gamma, 0.01 * au_gamma,
                                     100.0 * au_omega_p, 240)
