import pytest

from helpers import case_model, random_models
from netvuln.dsf import dsf_of, h_matrix, transfer_function
from netvuln.pipeline import PipelineConfig, destabilize


@pytest.fixture(scope="session")
def model():
    return case_model()


@pytest.fixture(scope="session")
def dsf(model):
    return dsf_of(model)


@pytest.fixture(scope="session")
def H(dsf):
    return h_matrix(dsf)


@pytest.fixture(scope="session")
def G(dsf, H):
    return transfer_function(dsf, H)


@pytest.fixture(scope="session")
def existing_run(model):
    return destabilize(model, PipelineConfig(mode="existing"))


@pytest.fixture(scope="session")
def created_run(model):
    return destabilize(model, PipelineConfig(mode="created"))


@pytest.fixture(scope="session")
def random_systems():
    out = []
    for m in random_models():
        d = dsf_of(m)
        out.append((m, d, h_matrix(d)))
    return out


ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
