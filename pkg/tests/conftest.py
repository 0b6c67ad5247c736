import pytest

from thermoform import kusuoka, registry


@pytest.fixture(scope="session")
def notmix2():
    return registry.get_builtin("notmix2")


@pytest.fixture(scope="session")
def nilpotent2():
    return registry.get_builtin("nilpotent2")


@pytest.fixture(scope="session")
def alpha_pair():
    return registry.get_builtin("alpha(3/5,4/5)")


@pytest.fixture(scope="session")
def rankone4():
    return registry.get_builtin("rankone4")


@pytest.fixture(scope="session")
def notmix2_kd(notmix2):
    return kusuoka.kusuoka_measure(notmix2)


@pytest.fixture(scope="session")
def nilpotent2_kd(nilpotent2):
    return kusuoka.kusuoka_measure(nilpotent2)


@pytest.fixture(scope="session")
def alpha_kd(alpha_pair):
    return kusuoka.kusuoka_measure(alpha_pair)
