# tests/conftest.py - Shared residue fields and characters
import pytest

from app.field_tower import CharacterSpec, FqConfig


@pytest.fixture
def f3():
    return FqConfig(3)


@pytest.fixture
def f5():
    return FqConfig(5)


@pytest.fixture
def f7():
    return FqConfig(7)


@pytest.fixture
def f9():
    return FqConfig(3, 2, (1, 0, 1))


@pytest.fixture
def quadratic5(f5):
    return CharacterSpec.conductor_one(f5, 2, 1)


