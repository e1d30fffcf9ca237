import pytest

from model.domain import LossSpec, Population, Scenario, ScenarioKind, SchemeConfig
from risk.engine import GridPoint


def make_point(kind, ns=(5, 5), sigmas=(1.0, 1.0), mus=(0.0, 0.0), p=1.0, target=1, scheme=None):
    pops = tuple(Population(mu=mu, sigma=s, n=n) for mu, s, n in zip(mus, sigmas, ns))
    return GridPoint(Scenario(kind, pops, target), scheme or SchemeConfig.iid(), LossSpec(p))


@pytest.fixture
def ordered_point():
    return make_point(ScenarioKind.ORDERED_SCALE)


@pytest.fixture
def known_point():
    return make_point(ScenarioKind.LOC_KNOWN_SCALE, sigmas=(1.0, 1.5), mus=(0.0, 0.1))
