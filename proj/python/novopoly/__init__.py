"""Monopoly simulator with rule novelties: Python access to the C++ core."""

import json

from . import _core

ConfigError = _core.ConfigError


def agent_ids():
    return list(_core.agent_ids())


def novelty_library():
    return json.loads(_core.novelty_library())


def default_board():
    return json.loads(_core.default_board())


def validate_board(board):
    text = board if isinstance(board, str) else json.dumps(board)
    return list(_core.validate_board(text))


def play_game(agents, seed=1, novelty=None, round_trip_cap=None):
    kwargs = {"seed": seed, "novelty": novelty or ""}
    if round_trip_cap is not None:
        kwargs["round_trip_cap"] = round_trip_cap
    return json.loads(_core.play_game(list(agents), **kwargs))


def frames(log, format="ndjson"):
    text = _core.frames(log, format)
    if format == "ndjson":
        return [json.loads(line) for line in text.splitlines() if line]
    return text


def run_tournament(config):
    return json.loads(_core.run_tournament(json.dumps(config)))
