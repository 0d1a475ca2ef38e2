"""Shared fixtures for the witness toolkit tests"""

import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parent.parent
for entry in (ROOT, ROOT / "src"):
    if str(entry) not in sys.path:
        sys.path.insert(0, str(entry))

from data_io import published_correlations  # noqa: E402
from state_engine import make_state, nonvanishing_correlations  # noqa: E402
from witness_builder import named_criteria  # noqa: E402

settings.register_profile("fast", max_examples=25, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "fast"))


@pytest.fixture(scope="session")
def ghz_corrs():
    return nonvanishing_correlations(make_state("ghz", 4))


@pytest.fixture(scope="session")
def cluster_corrs():
    return nonvanishing_correlations(make_state("cluster4", 4))


@pytest.fixture(scope="session")
def ghz_witness():
    return named_criteria("ghz4").combined


@pytest.fixture(scope="session")
def cluster_witness():
    return named_criteria("cluster4").combined


@pytest.fixture(scope="session")
def measured_ghz():
    return published_correlations("ghz4")


@pytest.fixture(scope="session")
def measured_cluster():
    return published_correlations("cluster4")
