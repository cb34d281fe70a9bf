import pathlib

import pytest

from elltrace.curves import WeierstrassFamily

FAMILIES_DIR = pathlib.Path(__file__).resolve().parent.parent / "families"


@pytest.fixture(scope="session")
def legendre():
    return WeierstrassFamily(a2=(-1, -1), a4=(0, 1), label="legendre")


@pytest.fixture(scope="session")
def sextic():
    return WeierstrassFamily.from_short((), (0, 1), label="sextic")


@pytest.fixture(scope="session")
def quartic():
    return WeierstrassFamily.from_short((0, 1), (), label="quartic")


@pytest.fixture(scope="session")
def quad_twist():
    return WeierstrassFamily.from_short((0, 0, -1), (0, 0, 0, 1), label="quadratic")


@pytest.fixture(scope="session")
def rank1():
    return WeierstrassFamily(a2=(-1, -2, 1), a4=(0, 2, -1), label="rank1")


@pytest.fixture(scope="session")
def constant():
    return WeierstrassFamily.from_short((), (1,), label="constant")


def family_path(name: str) -> str:
    return str(FAMILIES_DIR / name)
