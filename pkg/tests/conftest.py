import os

import pytest
from hypothesis import HealthCheck, settings

from depth3lab.cnfmin import CACHE_ENV, CostCache, set_default_cache

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def cost_cache(tmp_path_factory):
    """Shared subset-cost cache: the directory in DEPTH3LAB_CACHE if set, else a session temp dir."""
    d = os.environ.get(CACHE_ENV)
    path = os.path.join(d, "cnfmin.cache") if d else tmp_path_factory.mktemp("cache") / "cnfmin.cache"
    cache = CostCache(path)
    set_default_cache(cache)
    yield cache
    set_default_cache(None)


acceptance_lines = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[acceptance_lines] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(acceptance_lines, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[acceptance_lines]
