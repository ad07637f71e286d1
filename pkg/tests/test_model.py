"""Tests for tournament-state bookkeeping and the tournament file format."""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import golden8
from swiss_mwm.errors import (
    DomainError,
    DuplicateBye,
    RepeatedPairing,
    UnknownPlayer,
)
from swiss_mwm.model import (
    ByeRecord,
    GameRecord,
    GameResult,
    PairingSystem,
    Player,
    apply_result,
    current_ranks,
    new_tournament,
    replay,
    score_groups,
    tournament_from_dict,
    tournament_to_dict,
)
from helpers import play_random_rounds


def make_players(elos, strengths=None):
    return [
        Player(id=f"p{i+1}", name=f"P{i+1}", elo=e, lot_order=i + 1,
               true_strength=None if strengths is None else strengths[i])
        for i, e in enumerate(elos)
    ]


class TestApplyResult:
    def test_white_win_scoring_and_colors(self):
        state = new_tournament(make_players([1500, 1400]),
                               PairingSystem.DUTCH, 2)
        state = apply_result(state, GameRecord(1, "p1", "p2",
                                               GameResult.WHITE_WIN))
        assert state.states["p1"].score_half_points == 2
        assert state.states["p1"].color_diff == 1
        assert state.states["p2"].score_half_points == 0
        assert state.states["p2"].color_diff == -1
        assert state.states["p1"].opponents == frozenset({"p2"})
        assert state.states["p2"].opponents == frozenset({"p1"})

    def test_draw_gives_one_half_point_each(self):
        state = new_tournament(make_players([1500, 1400]),
                               PairingSystem.DUTCH, 2)
        state = apply_result(state, GameRecord(1, "p1", "p2",
                                               GameResult.DRAW))
        assert state.states["p1"].score_half_points == 1
        assert state.states["p2"].score_half_points == 1

    def test_bye_awards_full_point_without_color_change(self):
        state = new_tournament(make_players([1500, 1400, 1300]),
                               PairingSystem.DUTCH, 2)
        state = apply_result(state, ByeRecord(1, "p3"))
        assert state.states["p3"].score_half_points == 2
        assert state.states["p3"].color_diff == 0
        assert state.states["p3"].bye_received

    def test_repeated_pairing_rejected(self):
        state = new_tournament(make_players([1500, 1400]),
                               PairingSystem.DUTCH, 2)
        state = apply_result(state, GameRecord(1, "p1", "p2",
                                               GameResult.DRAW))
        with pytest.raises(RepeatedPairing):
            apply_result(state, GameRecord(2, "p2", "p1", GameResult.DRAW))

    def test_second_bye_rejected(self):
        state = new_tournament(make_players([1500, 1400, 1300]),
                               PairingSystem.DUTCH, 2)
        state = apply_result(state, ByeRecord(1, "p3"))
        with pytest.raises(DuplicateBye):
            apply_result(state, ByeRecord(2, "p3"))

    def test_unknown_player_rejected(self):
        state = new_tournament(make_players([1500, 1400]),
                               PairingSystem.DUTCH, 2)
        with pytest.raises(UnknownPlayer):
            apply_result(state, GameRecord(1, "p1", "zz", GameResult.DRAW))

    def test_round_must_follow_current(self):
        state = new_tournament(make_players([1500, 1400]),
                               PairingSystem.DUTCH, 2)
        with pytest.raises(DomainError):
            apply_result(state, GameRecord(3, "p1", "p2", GameResult.DRAW))

    def test_self_game_rejected(self):
        with pytest.raises(DomainError):
            GameRecord(1, "p1", "p1", GameResult.DRAW)


class TestRanking:
    def test_score_dominates_elo(self):
        state = new_tournament(make_players([2200, 1700, 1500]),
                               PairingSystem.DUTCH, 2)
        # p2 and p3 win a game each against p1 across two rounds
        state = apply_result(state, GameRecord(1, "p2", "p1",
                                               GameResult.WHITE_WIN))
        state = apply_result(state, GameRecord(2, "p3", "p1",
                                               GameResult.WHITE_WIN))
        assert current_ranks(state) == ["p2", "p3", "p1"]

    def test_elo_breaks_equal_scores(self):
        state = new_tournament(make_players([1600, 1800]),
                               PairingSystem.DUTCH, 2)
        assert current_ranks(state) == ["p2", "p1"]

    def test_lot_breaks_equal_elo_identically_every_round(self):
        players = make_players([1500, 1500])
        state = new_tournament(players, PairingSystem.DUTCH, 2)
        first = current_ranks(state)
        state = apply_result(state, GameRecord(1, "p1", "p2",
                                               GameResult.DRAW))
        assert current_ranks(state) == first == ["p1", "p2"]

    def test_score_groups_partition_matches_ranks(self):
        state = golden8.state_before_round(2)
        groups = score_groups(state)
        assert [pid for g in groups for pid in g] == current_ranks(state)
        assert groups[0] == ["p1", "p3", "p4", "p6"]  # the round-1 winners

    def test_all_equal_scores_single_group(self):
        state = new_tournament(make_players([1500, 1400, 1300, 1200]),
                               PairingSystem.DUTCH, 2)
        assert [len(g) for g in score_groups(state)] == [4]

    def test_half_point_groups(self):
        state = new_tournament(make_players([1500, 1400, 1300, 1200]),
                               PairingSystem.DUTCH, 2)
        state = apply_result(state, GameRecord(1, "p1", "p2",
                                               GameResult.WHITE_WIN))
        state = apply_result(state, GameRecord(1, "p3", "p4",
                                               GameResult.DRAW))
        assert [len(g) for g in score_groups(state)] == [1, 2, 1]


class TestInvariants:
    def test_replay_reproduces_states(self):
        state = golden8.final_state()
        rebuilt = replay(list(state.players), list(state.history),
                         state.system, state.beta)
        assert rebuilt.states == state.states
        assert rebuilt.rounds_played == state.rounds_played

    def test_color_diff_sums_to_zero_without_byes(self):
        state = golden8.final_state()
        assert sum(ps.color_diff for ps in state.states.values()) == 0

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_simulated_replay_determinism(self, seed):
        players = make_players([1500 + 10 * i for i in range(8)])
        state = new_tournament(players, PairingSystem.BURSTEIN, 2)
        state, _ = play_random_rounds(state, 3, seed)
        rebuilt = replay(list(state.players), list(state.history),
                         state.system, state.beta)
        assert rebuilt.states == state.states

    def test_lot_order_must_be_permutation(self):
        bad = [Player("a", "A", 1500, 1), Player("b", "B", 1400, 3)]
        with pytest.raises(DomainError):
            new_tournament(bad, PairingSystem.DUTCH, 2)

    def test_duplicate_ids_rejected(self):
        bad = [Player("a", "A", 1500, 1), Player("a", "B", 1400, 2)]
        with pytest.raises(DomainError):
            new_tournament(bad, PairingSystem.DUTCH, 2)


class TestTournamentFile:
    def test_round_trip_preserves_everything(self):
        state = golden8.final_state()
        doc = tournament_to_dict(state, name="golden")
        text = json.dumps(doc)
        rebuilt, name = tournament_from_dict(json.loads(text))
        assert name == "golden"
        assert rebuilt.states == state.states
        assert rebuilt.history == state.history
        assert rebuilt.system == state.system
        assert rebuilt.beta == state.beta

    def test_canonical_field_names(self):
        doc = tournament_to_dict(golden8.final_state(), name="x")
        assert set(doc) == {"name", "system", "beta", "players", "history"}
        assert set(doc["players"][0]) == {"id", "name", "elo", "lotOrder"}
        game = doc["history"][0]
        assert set(game) == {"round", "kind", "white", "black", "result"}

    def test_malformed_document_raises(self):
        with pytest.raises(DomainError):
            tournament_from_dict({"players": []})

    def test_final_scores_of_golden_fixture(self):
        state = golden8.final_state()
        scores = {pid: ps.score for pid, ps in state.states.items()}
        assert scores == golden8.FINAL_SCORES
