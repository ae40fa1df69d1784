import pytest

import novopoly


def test_catalogs():
    assert {"simple", "h1", "h2", "hybrid"} <= set(novopoly.agent_ids())
    names = {s["name"] for s in novopoly.novelty_library()}
    assert "dice-count-4" in names
    board = novopoly.default_board()
    assert len(board["slots"]) == 40
    assert novopoly.validate_board(board) == []


def test_game_is_deterministic_and_replays():
    a = novopoly.play_game(["h1", "h2", "simple", "hybrid"], seed=5, novelty="dice-count-3to5")
    b = novopoly.play_game(["h1", "h2", "simple", "hybrid"], seed=5, novelty="dice-count-3to5")
    assert a == b
    assert a["novelty_instance"]["params"]["count"] in (3, 4, 5)
    frames = novopoly.frames(a["log"])
    assert frames[0]["index"] == 0
    assert frames[-1]["final"]


def test_unknown_inputs_raise():
    with pytest.raises(ValueError):
        novopoly.play_game(["h1", "h2", "h1", "h2"], novelty="no-such-novelty")
    with pytest.raises(ValueError):
        novopoly.run_tournament({"games": 4, "k": 9, "agents": ["simple"] * 4})


def test_tournament_phases():
    report = novopoly.run_tournament(
        {"games": 6, "k": 3, "agents": ["simple"] * 4, "seed": 2, "novelty": "dice-count-4"})
    phases = [g["phase"] for g in report["games"]]
    assert phases == ["pre", "pre", "post", "post", "post", "post"]
