import pytest

from beattysums.beatty import BeattySequence
from beattysums.primes import sieve
from beattysums.reals import make_const, make_rational, make_sqrt


@pytest.fixture(scope="session")
def seq_sqrt2():
    return BeattySequence(make_sqrt(2), make_rational(0))


@pytest.fixture(scope="session")
def seq_sqrt3():
    return BeattySequence(make_sqrt(3), make_rational(0))


@pytest.fixture(scope="session")
def seq_sqrt5():
    return BeattySequence(make_sqrt(5), make_rational(0))


@pytest.fixture(scope="session")
def seq_phi():
    return BeattySequence(make_const("phi"), make_rational(0))


@pytest.fixture(scope="session")
def table_1e5():
    return sieve(100_000)


@pytest.fixture(scope="session")
def table_1e4():
    return sieve(10_000)
