"""Render the phase prompts from the shipped templates.

Templates use ``{name}`` (and ``{{name}}`` in the judge template) placeholders.
Only known placeholder names are substituted, so the literal JSON braces in
the templates pass through untouched.  The nested context blocks (agent
positions, previous rounds, summaries) are built here and spliced into their
placeholders; each starts with a blank line so it reads as a new section.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from typing import Mapping, Sequence

from ..dsl import render_assignment, render_game_text
from ..protocol import DebateContext, DebateTranscript, DebateTurn, Proposal
from ..statements import Puzzle, Role

_PLACEHOLDER = re.compile(r"\{\{([\w.]+)\}\}|\{([\w.]+)\}")
TEMPLATE_NAMES = ("initial", "debate", "adjust", "final", "supervisor", "judge", "order")


@lru_cache(maxsize=None)
def load_template(name: str) -> str:
    text = resources.files(__package__).joinpath("templates", f"{name}.txt").read_text(encoding="utf-8")
    return text[:-1] if text.endswith("\n") else text


def fill(template: str, values: Mapping[str, object]) -> str:
    used = set()

    def sub(m: re.Match) -> str:
        key = m.group(1) or m.group(2)
        if key not in values:
            return m.group(0)
        used.add(key)
        return str(values[key])

    out = _PLACEHOLDER.sub(sub, template)
    missing = set(values) - used
    if missing:
        raise KeyError(f"template has no placeholder(s) {sorted(missing)}")
    return out


def _names(names: Sequence[str]) -> str:
    return ", ".join(names) if names else "none"


def _assignments(assignment: Mapping[str, Role], players: Sequence[str]) -> str:
    return ", ".join(f"{p}: {Role(assignment[p]).value}" for p in players)


def _confidences(proposal: Proposal, players: Sequence[str]) -> str:
    if not proposal.confidence:
        return "n/a"
    return ", ".join(f"{p}={proposal.confidence[p]}" for p in players if p in proposal.confidence)


def _focus_confidence(proposal: Proposal, player: str) -> str:
    if not proposal.confidence or player not in proposal.confidence:
        return "n/a"
    return str(proposal.confidence[player])


def _label(agent: str, me: str | None) -> str:
    return f"{agent} (YOU)" if agent == me else agent


def _consensus(role: Role | None) -> str:
    return role.value if role is not None else "none"


# -- initial proposal ---------------------------------------------------------

def initial_prompt(puzzle: Puzzle) -> str:
    return fill(load_template("initial"), {"num_player": puzzle.size})


def game_info_message(puzzle: Puzzle) -> str:
    return render_game_text(puzzle)


# -- debate phase -------------------------------------------------------------

def agents_context(ctx: DebateContext, me: str) -> str:
    labels = ctx.current_labels()
    lines = ["", "", "CURRENT AGENT POSITIONS:"]
    for a in ctx.agents:
        pos = ctx.positions[a]
        lines.append(f"- {_label(a, me)}: {labels[a].value}")
        lines.append(f"  Reasoning: {pos.explanation}")
        if ctx.confidence_visible:
            lines.append(f"  Confidence: {_focus_confidence(pos, ctx.focus_player)}")
    return "\n".join(lines)


def debate_previous_context(ctx: DebateContext, me: str) -> str:
    if not ctx.rounds:
        return ""
    lines = ["", "", "PREVIOUS DEBATE ROUNDS:"]
    for rnd in ctx.rounds:
        lines.append(f"Round {rnd.index} ({rnd.focus_player}):")
        for a in ctx.agents:
            adj = rnd.adjustments[a]
            lines.append(f"  - {_label(a, me)}: {adj.assignment[rnd.focus_player].value}")
            lines.append(f"    Reasoning: {adj.explanation}")
        lines.append(f"  - CONSENSUS: {_consensus(rnd.consensus)}")
    return "\n".join(lines)


def debate_prompt(ctx: DebateContext, me: str) -> str:
    others = [a for a in ctx.agents if a != me]
    return fill(load_template("debate"), {
        "agent_name": me,
        "player_name": ctx.focus_player,
        "game.text_game": render_game_text(ctx.puzzle),
        "agents_context": agents_context(ctx, me),
        "previous_context": debate_previous_context(ctx, me),
        "other_agents_list": ", ".join(others),
    })


# -- self-adjustment phase ----------------------------------------------------

def _turn_lines(turn: DebateTurn, indent: str) -> list[str]:
    return [
        f"{indent}Agrees with: {_names(turn.agree_with)}",
        f"{indent}Agree reasoning: {turn.agree_reasoning}",
        f"{indent}Disagrees with: {_names(turn.disagree_with)}",
        f"{indent}Disagree reasoning: {turn.disagree_reasoning}",
    ]


def debate_analysis(ctx: DebateContext, me: str) -> str:
    lines = ["", "", "CURRENT DEBATE ANALYSIS:"]
    for turn in ctx.turns:
        lines.append(f"- {_label(turn.agent, me)}: {turn.role.value}")
        if ctx.confidence_visible:
            lines.append(f"  Confidence: {_focus_confidence(ctx.positions[turn.agent], ctx.focus_player)}")
        lines += _turn_lines(turn, "  ")
    return "\n".join(lines)


def adjust_previous_context(ctx: DebateContext, me: str) -> str:
    if not ctx.rounds:
        return ""
    lines = ["", "", "PREVIOUS DEBATE ROUNDS:"]
    for rnd in ctx.rounds:
        lines.append(f"Round {rnd.index} ({rnd.focus_player}):")
        lines.append("  Debate phase:")
        for turn in rnd.turns:
            lines.append(f"    - {_label(turn.agent, me)}: {turn.role.value}")
            lines += _turn_lines(turn, "      ")
        lines.append("  Self-adjustment phase:")
        for a in ctx.agents:
            adj = rnd.adjustments[a]
            lines.append(f"    - {_label(a, me)}: {adj.assignment[rnd.focus_player].value}")
            lines.append(f"      Reasoning: {adj.explanation}")
        lines.append(f"  - CONSENSUS: {_consensus(rnd.consensus)}")
    return "\n".join(lines)


def latest_solutions_context(ctx: DebateContext, me: str) -> str:
    players = ctx.puzzle.players
    lines = ["", "", "LATEST COMPLETE SOLUTIONS FROM EACH AGENT:"]
    for a in ctx.agents:
        pos = ctx.positions[a]
        lines.append(f"- {_label(a, me)}:")
        lines += [f"    {p}: {pos.assignment[p].value}" for p in players]
        if ctx.confidence_visible:
            lines.append(f"    Confidence: {_confidences(pos, players)}")
        lines.append(f"    Reasoning: {pos.explanation}")
    return "\n".join(lines)


def adjust_prompt(ctx: DebateContext, me: str) -> str:
    return fill(load_template("adjust"), {
        "agent_name": me,
        "player_name": ctx.focus_player,
        "game.text_game": render_game_text(ctx.puzzle),
        "debate_analysis": debate_analysis(ctx, me),
        "previous_context": adjust_previous_context(ctx, me),
        "latest_solutions_context": latest_solutions_context(ctx, me),
    })


# -- final decision -----------------------------------------------------------

def initial_summary(puzzle: Puzzle, agents: Sequence[str], initial: Mapping[str, Proposal],
                    confidence_visible: bool) -> str:
    entries = []
    for a in agents:
        prop = initial[a]
        lines = [f"- {a}: {_assignments(prop.assignment, puzzle.players)}", f"  Reasoning: {prop.explanation}"]
        if confidence_visible:
            lines.append(f"  Confidence: {_confidences(prop, puzzle.players)}")
        entries.append("\n".join(lines))
    return "\n\nINITIAL PROPOSALS:\n" + "\n\n".join(entries)


def debate_summary(puzzle: Puzzle, agents: Sequence[str], rounds, confidence_visible: bool,
                   initial: Mapping[str, Proposal]) -> str:
    blocks = []
    previous = dict(initial)
    for rnd in rounds:
        lines = [f"Round {rnd.index} ({rnd.focus_player}):"]
        turns = {t.agent: t for t in rnd.turns}
        for a in agents:
            turn = turns[a]
            lines.append(f"  - {a}: {turn.role.value}")
            if confidence_visible:
                lines.append(f"    Confidence: {_focus_confidence(previous[a], rnd.focus_player)}")
            lines += _turn_lines(turn, "    ")
            adj = rnd.adjustments[a]
            lines.append(f"  - {a} (self-adjustment): {_assignments(adj.assignment, puzzle.players)}")
            lines.append(f"    Reasoning: {adj.explanation}")
            if confidence_visible:
                lines.append(f"    Confidence: {_confidences(adj, puzzle.players)}")
        lines.append(f"  - CONSENSUS: {_consensus(rnd.consensus)}")
        blocks.append("\n".join(lines))
        previous.update(rnd.adjustments)
    return "\n\nDEBATE ROUNDS AND SELF-ADJUSTMENT SUMMARY:\n" + "\n\n".join(blocks)


def final_prompt(puzzle: Puzzle, agents: Sequence[str], initial: Mapping[str, Proposal], rounds,
                 confidence_visible: bool) -> str:
    return fill(load_template("final"), {
        "game.text_game": render_game_text(puzzle),
        "initial_summary": initial_summary(puzzle, agents, initial, confidence_visible),
        "debate_summary": debate_summary(puzzle, agents, rounds, confidence_visible, initial),
    })


# -- supervisor -----------------------------------------------------------------

def _split_supervisor(template: str):
    lines = template.split("\n")
    prop = next(i for i, ln in enumerate(lines) if "{proposal.agent_name}" in ln)
    header = next(i for i, ln in enumerate(lines) if "{round_number}" in ln)
    resp = next(i for i, ln in enumerate(lines) if "{response.agent_name}" in ln)
    resp_end = next(i for i in range(resp, len(lines)) if lines[i].startswith("Reasoning: {explanation}")) + 1
    return (
        lines[:prop],
        lines[prop:header - 2],
        lines[header - 2:header],
        lines[header],
        lines[resp:resp_end],
        lines[resp_end:],
    )


def supervisor_prompt(puzzle: Puzzle, transcript: DebateTranscript) -> str:
    head, prop_block, mid, round_header, resp_block, tail = _split_supervisor(load_template("supervisor"))
    game = render_game_text(puzzle)
    out = [ln.replace("{game.text_game}", game) for ln in head]
    for a in transcript.agents:
        prop = transcript.initial[a]
        values = {
            "proposal.agent_name": a,
            "proposal.player_role_assignments": _assignments(prop.assignment, puzzle.players),
            "proposal.explanation": prop.explanation,
        }
        out += [_fill_some(ln, values) for ln in prop_block]
    out += mid
    for rnd in transcript.rounds:
        out.append(fill(round_header, {"round_number": rnd.index, "player_name": rnd.focus_player}))
        for turn in rnd.turns:
            agree, disagree, thought, reasoning = resp_block[1], resp_block[2], resp_block[0], resp_block[3]
            out.append(fill(thought, {"response.agent_name": turn.agent, "player_name": rnd.focus_player,
                                      "role": turn.role.value}))
            out.append(fill(agree, {"agent_names": _names(turn.agree_with), "reasoning": turn.agree_reasoning}))
            out.append(fill(disagree, {"agent_names": _names(turn.disagree_with),
                                       "reasoning": turn.disagree_reasoning}))
            out.append(fill(reasoning, {"explanation": rnd.adjustments[turn.agent].explanation}))
    out += tail
    return "\n".join(out)


def _fill_some(line: str, values: Mapping[str, object]) -> str:
    return _PLACEHOLDER.sub(lambda m: str(values.get(m.group(1) or m.group(2), m.group(0))), line)


# -- agreed debate order (not one of the published prompts) ---------------------

def order_prompt(puzzle: Puzzle, agent: str) -> str:
    return fill(load_template("order"), {"agent_name": agent, "game_text": render_game_text(puzzle)})


# -- rationality judge ----------------------------------------------------------

def judge_prompt(puzzle: Puzzle, num_agents: int, player: str, agent: str) -> str:
    return fill(load_template("judge"), {
        "num_agents": num_agents,
        "game_text": render_game_text(puzzle),
        "player_name": player,
        "agent_name": agent,
        "ground_truth": render_assignment(puzzle.solution, puzzle.players),
    })


def judge_input(agents: Sequence[str], initial: Mapping[str, Proposal], turn: DebateTurn) -> str:
    lines = ["INITIAL PROPOSALS:"]
    for a in agents:
        prop = initial[a]
        lines.append(f"- {a}: {turn.focus_player} is a {prop.assignment[turn.focus_player].value}")
        lines.append(f"  Reasoning: {prop.explanation}")
    lines += ["", f"AGREE AND DISAGREE INFO OF {turn.agent}:", f"- Role decided: {turn.role.value}"]
    lines += _turn_lines(turn, "- ")
    return "\n".join(lines)
