"""Knight/knave/spy puzzles with certified solutions and a multi-agent debate harness."""

from .dsl import parse, render_game_text, to_text
from .engine import DebateConfig, decide_order, run_debate
from .generator import GenConfig, build_dataset, generate_one
from .protocol import DebateTranscript, majority_vote
from .solver import BACKEND, has_unique_solution, solve
from .statements import Puzzle, Role, evaluate

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "DebateConfig", "DebateTranscript", "GenConfig", "Puzzle", "Role", "build_dataset",
    "decide_order", "evaluate", "generate_one", "has_unique_solution", "majority_vote", "parse",
    "render_game_text", "run_debate", "solve", "to_text",
]
