import pytest
from hypothesis import settings

from slnchar.finquot import character_table, enumerate_group
from slnchar.subgroups import ball_enumerate

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def ball3_r2():
    return ball_enumerate(3, 2)


@pytest.fixture(scope="session")
def ball3_r3():
    return ball_enumerate(3, 3)


@pytest.fixture(scope="session")
def ball4_r2c():
    return ball_enumerate(4, 2, central=True)


@pytest.fixture(scope="session")
def table_sl3_2():
    t = character_table(enumerate_group(3, 2))
    t.attach()
    return t


@pytest.fixture(scope="session")
def table_sl2_3():
    t = character_table(enumerate_group(2, 3))
    t.attach()
    return t
