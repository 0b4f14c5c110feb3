import pytest

from caminagroups.pcgroup import bundled_group


# session-scoped so the expensive verdicts and families are computed once and
# shared through the group's internal cache
@pytest.fixture(scope="session")
def group13():
    return bundled_group("camina_3_13")


@pytest.fixture(scope="session")
def group14():
    return bundled_group("camina_3_14")
