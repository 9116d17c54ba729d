import pytest

from kkdebate.agents import AgentSpec
from kkdebate.dsl import parse
from kkdebate.statements import Puzzle, Role

K, N, S = Role.KNIGHT, Role.KNAVE, Role.SPY


def make_puzzle(pid, statements, hints=(), solution=None):
    players = tuple(statements)
    return Puzzle(
        id=pid,
        players=players,
        statements={p: parse(t, players) for p, t in statements.items()},
        hints=tuple(parse(h, players) for h in hints),
        solution=solution,
    )


def four_player_example():
    return make_puzzle(
        "four-player-example",
        {
            "Rachel": "same_role(Rachel, Violet)",
            "Violet": "truth_claim(Rachel, truthful)",
            "Olivia": "liars({Violet, Rachel}, 1)",
            "Peter": "xor(count(all, knave, even), liars({Rachel, Violet, Olivia}, odd))",
        },
        hints=["count(all, spy, 1)"],
        solution={"Rachel": K, "Violet": K, "Olivia": N, "Peter": S},
    )


def three_player_sample():
    return make_puzzle(
        "three-player-sample",
        {
            "Violet": "count(all, spy, odd)",
            "Uma": "truth_claim(Violet, lying)",
            "Xavier": "count({Violet, Xavier}, knave, 1)",
        },
        hints=["count(all, spy, 1)"],
        solution={"Violet": K, "Uma": N, "Xavier": S},
    )


def team(*profiles, prefix="Agent"):
    return tuple(AgentSpec(f"{prefix}{i}", "scripted", m) for i, m in enumerate(profiles, start=1))


@pytest.fixture
def example4():
    return four_player_example()


@pytest.fixture
def sample3():
    return three_player_sample()


@pytest.fixture(scope="session")
def small_dataset():
    from kkdebate.generator import build_dataset

    return build_dataset([4, 5], 10, seed=11)


# One line per acceptance criterion, repeated in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
