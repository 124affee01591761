import functools

import pytest

from mfcvkit.mfcv import EstimatorConfig, estimate_series
from mfcvkit.signal_core import DelayProfile, synthesize


@functools.lru_cache(maxsize=None)
def clean_run(delay, duration=34.0, seed=3):
    rec = synthesize(duration, profile=DelayProfile.constant(delay), seed=seed)
    return rec, *estimate_series(rec, EstimatorConfig())


@pytest.fixture
def run_for_delay():
    return clean_run


ACCEPTANCE_RESULTS = []


def record_criterion(number, title, ok, detail=""):
    ACCEPTANCE_RESULTS.append((number, title, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        mark = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{mark}] {number}. {title}: {detail}")
