import pytest

from stopstare.harness import SyntheticSpec, generate, tiny_graphs


@pytest.fixture(scope="session")
def tiny():
    return tiny_graphs()


@pytest.fixture(scope="session")
def g1(tiny):
    return tiny["G1"]


@pytest.fixture(scope="session")
def g2(tiny):
    return tiny["G2"]


@pytest.fixture(scope="session")
def g3(tiny):
    return tiny["G3"]


@pytest.fixture(scope="session")
def g4(tiny):
    return tiny["G4"]


@pytest.fixture(scope="session")
def er8():
    return generate(SyntheticSpec("erdos_renyi", 8, p=0.3, weight_rule="auto", seed=1))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance verdict line; the lines are echoed in the terminal summary."""

    def _report(number, ok, text):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
