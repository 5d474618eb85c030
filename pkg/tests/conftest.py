import time

import pytest

from spps.problems import fixture_path, load_problem
from spps.spectral import sweep_eigenvalues

FIXTURES = ["trivial", "example1", "example2_real", "example2_complex", "example3", "example4"]


@pytest.fixture(scope="session")
def bundled_problem():
    """Loader for bundled problem files by short name."""
    cache = {}

    def load(name):
        if name not in cache:
            cache[name] = load_problem(fixture_path(name + ".prob"))
        return cache[name]

    return load


@pytest.fixture(scope="session")
def sweep_cache(bundled_problem):
    """Run each bundled fixture's sweep at most once per session.

    The full-resolution sweeps cost seconds to a minute each; the
    acceptance criteria and the oracle cross-checks share these results.
    Returns (records, elapsed_seconds).
    """
    cache = {}

    def run(name):
        if name not in cache:
            start = time.perf_counter()
            records = sweep_eigenvalues(bundled_problem(name))
            cache[name] = (records, time.perf_counter() - start)
        return cache[name]

    return run
