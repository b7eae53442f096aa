"""Python bindings for the Onto-ling lexicon, puzzle generator and game engine."""

import json
from pathlib import Path

from ._ontoling import (
    LEVEL_COUNT,
    Lexicon,
    OntolingError,
    derive_seed,
    normalize_term,
    parse_lexicon,
    render_expression,
)
from . import _ontoling

__all__ = [
    "LEVEL_COUNT",
    "Game",
    "Lexicon",
    "OntolingError",
    "check_lexicon",
    "derive_seed",
    "generate_puzzle",
    "grade",
    "leaderboard",
    "load_lexicon",
    "normalize_term",
    "parse_lexicon",
    "render_expression",
]


def load_lexicon(path):
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


def check_lexicon(text):
    """Every graph-rule violation as (code, subject, detail); empty when valid."""
    return _ontoling.check_lexicon(text)


def generate_puzzle(lexicon, level, seed, with_answers=False):
    return json.loads(_ontoling.generate_puzzle_json(lexicon, level, seed, with_answers))


def grade(lexicon, puzzle, placements):
    """Score `placements` (slot id -> term) against a puzzle carrying answers."""
    text = puzzle if isinstance(puzzle, str) else json.dumps(puzzle)
    return json.loads(_ontoling.grade_json(lexicon, text, dict(placements)))


def leaderboard(log):
    """Rank (player, level, score, submitted_at_ms) records; returns (entries, winner)."""
    entries, winner = _ontoling.leaderboard([tuple(r) for r in log])
    return json.loads(entries), winner


class Game:
    """One player's session, advanced in place."""

    def __init__(self, lexicon, player, seed):
        self._game = _ontoling.Game(lexicon, player, seed)

    def view(self):
        return json.loads(self._game.view_json())

    def summary(self):
        return json.loads(self._game.summary_json())

    def state(self):
        return json.loads(self._game.state_json())

    def place(self, slot_id, term):
        self._game.place(slot_id, term)

    def unplace(self, slot_id):
        self._game.unplace(slot_id)

    def submit(self, at_ms=0):
        return json.loads(self._game.submit_json(at_ms))

    def advance(self):
        self._game.advance()

    def solution(self):
        """Accepted term per slot; meant for scripted play and tests."""
        return self._game.solution()
