import pytest
from hypothesis import given, settings, strategies as st

from kkdebate.dsl import DslSyntaxError, parse, render_assignment, render_game_text, render_natural, to_text
from kkdebate.statements import (
    CountLiars, CountRole, Exactly, ExactlyOneOf, MalformedStatement, Parity, Polarity, Role, RoleClaim, SameRole,
    TruthClaim,
)

from conftest import K, N, S

NAMES = ["Alice", "Bella", "Chris", "David", "Emma"]
names = st.sampled_from(NAMES)
roles = st.sampled_from(list(Role))
preds = st.one_of(st.sampled_from(list(Parity)), st.integers(0, 5).map(Exactly))
scopes = st.lists(names, min_size=1, max_size=4, unique=True).map(tuple)

atomic = st.one_of(
    st.builds(RoleClaim, names, roles),
    st.builds(TruthClaim, names, st.sampled_from(list(Polarity))),
    st.tuples(names, names).filter(lambda t: t[0] != t[1]).map(lambda t: SameRole(*t)),
    st.builds(CountRole, st.one_of(st.none(), scopes), roles, preds),
    st.builds(CountLiars, scopes, preds),
)
statements = st.one_of(atomic, st.tuples(atomic, atomic).map(ExactlyOneOf))


@settings(max_examples=300)
@given(statements)
def test_round_trip(stmt):
    assert parse(to_text(stmt)) == stmt


@settings(max_examples=300)
@given(statements, statements)
def test_canonical_text_is_injective(a, b):
    assert (to_text(a) == to_text(b)) == (a == b)


@settings(max_examples=200)
@given(statements)
def test_whitespace_is_insignificant(stmt):
    text = to_text(stmt)
    assert parse(text.replace(", ", " ,  ").replace("(", " ( ")) == stmt


@pytest.mark.parametrize("text,pos,expect", [
    ("role_claim(Alice knight)", 17, ","),
    ("count(all, wizard, 1)", 11, "knight"),
    ("xor(xor(role_claim(A, spy), role_claim(B, spy)), role_claim(A, spy))", 4, "role_claim"),
    ("liars(all, 1)", 6, "{"),
    ("role_claim(Alice, spy) extra", 23, "end of input"),
])
def test_syntax_errors_report_position_and_expectation(text, pos, expect):
    with pytest.raises(DslSyntaxError) as err:
        parse(text)
    assert err.value.position == pos
    assert any(expect in e for e in err.value.expected)


def test_roster_check():
    with pytest.raises(MalformedStatement):
        parse("role_claim(Zed, spy)", ["Alice"])


@pytest.mark.parametrize("stmt,speaker,text", [
    (SameRole("Rachel", "Violet"), "Rachel", "Violet and I have the same role."),
    (TruthClaim("Rachel", Polarity.TRUTHFUL), "Violet", "Rachel is telling the truth."),
    (TruthClaim("Violet", Polarity.LYING), "Uma", "Violet is lying."),
    (CountRole(None, S, Parity.ODD), "Violet", "Among all players, the number of spies is odd."),
    (CountRole(("Violet", "Xavier"), N, Exactly(1)), "Xavier", "Among Violet and I, there is exactly one knave."),
    (CountRole(None, S, Exactly(1)), None, "Among all players, there is exactly one spy."),
])
def test_natural_rendering(stmt, speaker, text):
    assert render_natural(stmt, speaker) == text


def test_game_text_of_three_player_sample(sample3):
    assert render_game_text(sample3) == (
        "---\nPlayer name: Violet\nPlayer statement: Among all players, the number of spies is odd.\n"
        "---\nPlayer name: Uma\nPlayer statement: Violet is lying.\n"
        "---\nPlayer name: Xavier\nPlayer statement: Among Violet and I, there is exactly one knave.\n"
        "---\nMessage from the game manager: I am the game manager and here is a hint for you: "
        "Among all players, there is exactly one spy."
    )


def test_render_assignment(example4):
    assert render_assignment(example4.solution, example4.players) == \
        "Rachel = knight; Violet = knight; Olivia = knave; Peter = spy"
