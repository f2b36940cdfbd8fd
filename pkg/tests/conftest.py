import json

import pytest
from hypothesis import HealthCheck, settings

from hyperdyadic.certify import certify
from hyperdyadic.curvefile import fixture_path, load_curve_file

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def curve_file():
    return load_curve_file(fixture_path())


@pytest.fixture(scope="session")
def expected():
    with open(fixture_path("expected.json")) as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def certs(curve_file):
    return {rec.label: certify(rec.curve) for rec in curve_file.records}


@pytest.fixture(scope="session")
def global_cert(certs):
    return certs["global"]


@pytest.fixture(scope="session")
def ex111_cert(certs):
    return certs["ex111"]


_CRITERIA_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_CRITERIA_KEY] = []


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion, then assert it."""
    lines = request.config.stash[_CRITERIA_KEY]

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        lines.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
