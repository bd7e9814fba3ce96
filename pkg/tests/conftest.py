import pytest
from hypothesis import HealthCheck, settings

from bihom3.algebra import ThreeBihomLieAlgebra
from bihom3.io import load_corpus
from bihom3.linalg import identity, zeros

settings.register_profile(
    "exact", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def abelian(n: int) -> ThreeBihomLieAlgebra:
    return ThreeBihomLieAlgebra(zeros((n,) * 4), identity(n), identity(n))


@pytest.fixture
def nil4():
    return load_corpus("nilpotent4")


@pytest.fixture
def simple4():
    return load_corpus("simple4")
