"""Exhaustive solution certification.

Every role assignment is paired with every completion of the spies' truth
bits (knights and knaves have theirs forced), which is 4**n worlds in total.
The compiled extension walks them depth-first and prunes a prefix as soon as
a fully-determined constraint fails; the numpy fallback scores every world.
Both return the same solution set.  ``worlds_checked`` counts complete
worlds reached, so it is smaller under pruning.  Set ``KKDEBATE_PURE_PYTHON=1`` to force
the fallback.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

from ..statements import ROLES, Puzzle, Role
from . import _fallback
from ._program import compile_puzzle

try:
    from . import _kernel
except ImportError:  # extension not built
    _kernel = None

DEFAULT_MAX_PLAYERS = 12

_BACKENDS = {"python": _fallback.enumerate_worlds}
if _kernel is not None:
    _BACKENDS["cython"] = _kernel.enumerate_worlds

if os.environ.get("KKDEBATE_PURE_PYTHON") or _kernel is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


class SolverLimitError(RuntimeError):
    """The puzzle has more players than the configured enumeration cap."""


@dataclass(frozen=True)
class SolveResult:
    solutions: tuple[dict[str, Role], ...]
    worlds_checked: int
    elapsed: float

    @property
    def unique(self) -> bool:
        return len(self.solutions) == 1


def _run(puzzle: Puzzle, max_solutions: int, max_players: int, backend: str | None) -> SolveResult:
    if puzzle.size > max_players:
        raise SolverLimitError(f"{puzzle.size} players exceeds the cap of {max_players}")
    kernel = _BACKENDS[backend or BACKEND]
    prog = compile_puzzle(puzzle)
    t0 = time.perf_counter()
    codes, checked = kernel(
        prog.n, prog.nodes, prog.masks, prog.roots, prog.expect, max_solutions, prog.ready
    )
    elapsed = time.perf_counter() - t0
    tuples = []
    for code in codes:
        roles = []
        for _ in range(prog.n):
            code, r = divmod(code, 3)
            roles.append(r)
        tuples.append(tuple(roles))
    tuples.sort()
    solutions = tuple({p: ROLES[r] for p, r in zip(puzzle.players, t)} for t in tuples)
    return SolveResult(solutions, int(checked), elapsed)


def solve(puzzle: Puzzle, *, max_players: int = DEFAULT_MAX_PLAYERS, backend: str | None = None) -> SolveResult:
    """All role assignments admitting a consistent truth-bit completion, sorted by role tuple."""
    return _run(puzzle, 0, max_players, backend)


def has_unique_solution(puzzle: Puzzle, *, max_players: int = DEFAULT_MAX_PLAYERS, backend: str | None = None) -> bool:
    return len(_run(puzzle, 2, max_players, backend).solutions) == 1
