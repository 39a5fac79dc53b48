import pytest

from magnon_cnot.chain import FieldProfile, HyperfineParameters, LadderParameters
from magnon_cnot.units import kilo_oersted_to_tesla, mhz_per_koe_to_hz_per_tesla


@pytest.fixture
def ladder():
    return LadderParameters.from_kelvin(50.0, j1=0.2, g=2.0, N_chain=100)


@pytest.fixture
def hyperfine():
    return HyperfineParameters(
        A_par=kilo_oersted_to_tesla(100.0),
        A_perp=kilo_oersted_to_tesla(1.0),
        gamma_n_over_2pi=mhz_per_koe_to_hz_per_tesla(4.3),
    )


@pytest.fixture
def field():
    return FieldProfile(H0=10.0, G=1e-3, extent=100)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[label])
