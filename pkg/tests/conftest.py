import pytest
from hypothesis import HealthCheck, settings

from readop import params_io
from readop.cli import packaged_params

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def strict_file():
    return params_io.loads(packaged_params("strict"))


@pytest.fixture(scope="session")
def strict(strict_file):
    return strict_file.model


@pytest.fixture(scope="session")
def toy():
    return params_io.loads(packaged_params("toy")).model


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)
