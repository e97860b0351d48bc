import numpy as np
import pytest

from evfocus.epr import EprSequence, bin_events
from evfocus.events import EventStream, SensorGeometry
from evfocus.sim import OpticsConfig, SweepConfig, make_pattern, simulate_sweep

SMALL = SensorGeometry(16, 12)


def f14_optics():
    return OpticsConfig.from_f_number(35_000, 1.4, 1_000_000)


def edge_sweep():
    """+/-300 um at 10 mm/s, ten steps per millisecond."""
    return SweepConfig(-300, 300, 10_000, 601)


def window(sweep):
    return 0, int(sweep.step_times.max()) + 1


def gaussian_pair(n, centre, width, amp=1.0):
    """per/ner mirrored about bin ``centre``: per[c + m] == ner[c - m]."""
    i = np.arange(n, dtype=np.float64)
    per = amp * np.exp(-0.5 * ((i - centre - width / 2) / width) ** 2)
    ner = amp * np.exp(-0.5 * ((2 * centre - i - centre - width / 2) / width) ** 2)
    return per, ner


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_stream():
    return EventStream(
        SMALL,
        t=[0, 10, 10, 25, 40],
        x=[1, 2, 15, 5, 5],
        y=[0, 3, 11, 5, 6],
        p=[1, -1, 1, 1, -1],
    )


@pytest.fixture(scope="session")
def step_run():
    sweep = edge_sweep()
    stream, gt = simulate_sweep(make_pattern("step"), f14_optics(), sweep)
    return sweep, stream, gt


@pytest.fixture(scope="session")
def step_seq(step_run):
    sweep, stream, _ = step_run
    return bin_events(stream, None, 1000, *window(sweep))


@pytest.fixture
def symmetric_seq():
    per, ner = gaussian_pair(200, 99.0, 12.0, amp=50.0)
    return EprSequence(0, 1000, per, ner)


# one PASS/FAIL line per acceptance criterion, printed after the run

_CRITERIA: dict[int, list[tuple[str, bool]]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        number = int(name.split("_")[2])
        _CRITERIA.setdefault(number, []).append((name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        parts = _CRITERIA[number]
        verdict = "PASS" if all(ok for _, ok in parts) else "FAIL"
        detail = ", ".join(f"{n.split('_', 3)[3]}={'ok' if ok else 'failed'}" for n, ok in parts)
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  ({detail})")
