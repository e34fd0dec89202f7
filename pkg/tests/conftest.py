"""Shared fixtures. The expensive Monte Carlo runs are session-scoped so the
acceptance suite and the harness tests reuse one set of results."""

from __future__ import annotations

import time
from dataclasses import dataclass

import pytest

from scauction import (
    RunResult,
    SweepResult,
    default_config,
    power_sweep,
    run_trials,
    sdr_analogue_config,
)


@dataclass
class TimedRun:
    result: RunResult
    seconds: float


@pytest.fixture(scope="session")
def default_run() -> TimedRun:
    t0 = time.perf_counter()
    result = run_trials(default_config())
    return TimedRun(result=result, seconds=time.perf_counter() - t0)


@pytest.fixture(scope="session")
def default_sweep() -> SweepResult:
    return power_sweep(default_config())


@pytest.fixture(scope="session")
def small_station_sweep() -> SweepResult:
    return power_sweep(sdr_analogue_config())
