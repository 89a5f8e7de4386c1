import random

import pytest

from mcore import basic, eore

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return random.Random(0x5EED)


@pytest.fixture(scope="session")
def basic5():
    """Two clients, 5-bit plaintexts, keys and a comparison key."""
    r = random.Random(5)
    mk, pp = basic.setup(3, 5, rng=r)
    sk1, sk2 = basic.gen_key(1, mk, pp), basic.gen_key(2, mk, pp)
    ck = basic.gen_cmp_key(1, 2, mk, pp, rng=r)
    return dict(mk=mk, pp=pp, sk1=sk1, sk2=sk2, ck=ck)


@pytest.fixture(scope="session")
def basic32():
    r = random.Random(32)
    mk, pp = basic.setup(3, 32, rng=r)
    sk1, sk2 = basic.gen_key(1, mk, pp), basic.gen_key(2, mk, pp)
    ck = basic.gen_cmp_key(1, 2, mk, pp, rng=r)
    return dict(mk=mk, pp=pp, sk1=sk1, sk2=sk2, ck=ck)


@pytest.fixture(scope="session")
def eore4():
    r = random.Random(4)
    mk, pp = eore.eore_setup(3, 4, rng=r)
    sk1, sk2 = eore.eore_gen_key(1, mk, pp), eore.eore_gen_key(2, mk, pp)
    ck = eore.eore_gen_cmp_key(1, 2, mk, pp, rng=r)
    return dict(mk=mk, pp=pp, sk1=sk1, sk2=sk2, ck=ck, rng=r)
