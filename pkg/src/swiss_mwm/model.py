"""Domain types and tournament-state bookkeeping.

Scores are stored as integer half-points (a win adds 2) so that score-group
membership is exact integer equality; public reports convert to points.
All types are immutable value objects: applying a result returns a new state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from .errors import (
    DomainError,
    DuplicateBye,
    RepeatedPairing,
    UnknownPlayer,
)


class PairingSystem(str, Enum):
    DUTCH = "dutch"
    BURSTEIN = "burstein"
    MONRAD = "monrad"
    RANDOM = "random"
    RANDOM2 = "random2"


#: The five systems in their canonical reporting order.
ALL_SYSTEMS = (
    PairingSystem.DUTCH,
    PairingSystem.BURSTEIN,
    PairingSystem.MONRAD,
    PairingSystem.RANDOM,
    PairingSystem.RANDOM2,
)


class GameResult(str, Enum):
    WHITE_WIN = "white"
    DRAW = "draw"
    BLACK_WIN = "black"


@dataclass(frozen=True)
class Player:
    """Tournament participant. ``true_strength`` exists only in simulations;
    live-tournament loaders never populate it, so pairing code can never leak
    oracle data into a real event."""

    id: str
    name: str
    elo: int
    lot_order: int
    true_strength: float | None = None


@dataclass(frozen=True)
class PlayerState:
    score_half_points: int = 0
    color_diff: int = 0
    opponents: frozenset[str] = frozenset()
    bye_received: bool = False
    white_count: int = 0
    black_count: int = 0

    @property
    def score(self) -> float:
        return self.score_half_points / 2


@dataclass(frozen=True)
class GameRecord:
    round: int
    white: str
    black: str
    result: GameResult

    def __post_init__(self) -> None:
        if self.white == self.black:
            raise DomainError("a player cannot play against themselves")
        if self.round < 1:
            raise DomainError("round numbers start at 1")


@dataclass(frozen=True)
class ByeRecord:
    round: int
    player: str

    def __post_init__(self) -> None:
        if self.round < 1:
            raise DomainError("round numbers start at 1")


MatchRecord = GameRecord | ByeRecord


@dataclass(frozen=True)
class TournamentState:
    players: tuple[Player, ...]
    states: dict[str, PlayerState]
    history: tuple[MatchRecord, ...]
    rounds_played: int
    beta: float
    system: PairingSystem

    def player(self, pid: str) -> Player:
        for p in self.players:
            if p.id == pid:
                return p
        raise UnknownPlayer(f"unknown player id {pid!r}")


def new_tournament(players: list[Player], system: PairingSystem,
                   beta: float) -> TournamentState:
    """Fresh state with zeroed per-player bookkeeping."""
    if beta <= 0:
        raise DomainError("beta must be positive")
    ids = [p.id for p in players]
    if len(set(ids)) != len(ids):
        raise DomainError("player ids must be unique")
    lots = sorted(p.lot_order for p in players)
    if lots != list(range(1, len(players) + 1)):
        raise DomainError("lot_order must be a permutation of 1..n")
    return TournamentState(
        players=tuple(players),
        states={p.id: PlayerState() for p in players},
        history=(),
        rounds_played=0,
        beta=float(beta),
        system=system,
    )


def apply_result(state: TournamentState, record: MatchRecord) -> TournamentState:
    """Fold one match record into the state, enforcing (A1) and the bye rule."""
    if record.round not in (state.rounds_played, state.rounds_played + 1):
        raise DomainError(
            f"round {record.round} does not follow round {state.rounds_played}")
    states = dict(state.states)
    if isinstance(record, ByeRecord):
        if record.player not in states:
            raise UnknownPlayer(f"unknown player id {record.player!r}")
        ps = states[record.player]
        if ps.bye_received:
            raise DuplicateBye(f"{record.player} already received a bye")
        states[record.player] = replace(
            ps,
            score_half_points=ps.score_half_points + 2,
            bye_received=True,
        )
    else:
        for pid in (record.white, record.black):
            if pid not in states:
                raise UnknownPlayer(f"unknown player id {pid!r}")
        ws = states[record.white]
        bs = states[record.black]
        if record.black in ws.opponents:
            raise RepeatedPairing(
                f"{record.white} and {record.black} have already played")
        w_half = {GameResult.WHITE_WIN: 2, GameResult.DRAW: 1,
                  GameResult.BLACK_WIN: 0}[record.result]
        states[record.white] = replace(
            ws,
            score_half_points=ws.score_half_points + w_half,
            color_diff=ws.color_diff + 1,
            opponents=ws.opponents | {record.black},
            white_count=ws.white_count + 1,
        )
        states[record.black] = replace(
            bs,
            score_half_points=bs.score_half_points + (2 - w_half),
            color_diff=bs.color_diff - 1,
            opponents=bs.opponents | {record.white},
            black_count=bs.black_count + 1,
        )
    return replace(
        state,
        states=states,
        history=state.history + (record,),
        rounds_played=max(state.rounds_played, record.round),
    )


def replay(players: list[Player], history: list[MatchRecord],
           system: PairingSystem, beta: float) -> TournamentState:
    """Rebuild a state by folding the history in order."""
    state = new_tournament(players, system, beta)
    for record in history:
        state = apply_result(state, record)
    return state


def current_ranks(state: TournamentState) -> list[str]:
    """Player ids ordered best first: score desc, Elo desc, then the lot
    drawn at the start (which never changes between rounds)."""
    by_id = {p.id: p for p in state.players}
    return sorted(
        state.states,
        key=lambda pid: (-state.states[pid].score_half_points,
                         -by_id[pid].elo, by_id[pid].lot_order),
    )


def score_groups(state: TournamentState) -> list[list[str]]:
    """Partition of current_ranks by exact half-point score."""
    groups: list[list[str]] = []
    last_score: int | None = None
    for pid in current_ranks(state):
        score = state.states[pid].score_half_points
        if score != last_score:
            groups.append([])
            last_score = score
        groups[-1].append(pid)
    return groups


# -- Tournament file round trip ------------------------------------------

def record_to_dict(record: MatchRecord) -> dict:
    if isinstance(record, ByeRecord):
        return {"round": record.round, "kind": "bye", "player": record.player}
    return {
        "round": record.round,
        "kind": "game",
        "white": record.white,
        "black": record.black,
        "result": record.result.value,
    }


def record_from_dict(data: dict) -> MatchRecord:
    try:
        kind = data["kind"]
        if kind == "bye":
            return ByeRecord(round=int(data["round"]), player=data["player"])
        if kind == "game":
            return GameRecord(
                round=int(data["round"]),
                white=data["white"],
                black=data["black"],
                result=GameResult(data["result"]),
            )
    except (KeyError, ValueError) as exc:
        raise DomainError(f"malformed match record: {data!r}") from exc
    raise DomainError(f"unknown record kind {kind!r}")


def tournament_to_dict(state: TournamentState, name: str = "") -> dict:
    return {
        "name": name,
        "system": state.system.value,
        "beta": state.beta,
        "players": [
            {"id": p.id, "name": p.name, "elo": p.elo, "lotOrder": p.lot_order}
            for p in state.players
        ],
        "history": [record_to_dict(r) for r in state.history],
    }


def tournament_from_dict(data: dict) -> tuple[TournamentState, str]:
    """Parse the canonical tournament document; returns (state, name).

    The history order is authoritative: the state is rebuilt by replay.
    """
    try:
        players = [
            Player(id=p["id"], name=p["name"], elo=int(p["elo"]),
                   lot_order=int(p["lotOrder"]))
            for p in data["players"]
        ]
        system = PairingSystem(data["system"])
        beta = float(data["beta"])
        history = [record_from_dict(r) for r in data["history"]]
        name = data.get("name", "")
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed tournament document: {exc}") from exc
    return replay(players, history, system, beta), name


def load_tournament(path: str | Path) -> tuple[TournamentState, str]:
    with open(path, encoding="utf-8") as fh:
        return tournament_from_dict(json.load(fh))


def save_tournament(state: TournamentState, path: str | Path,
                    name: str = "") -> None:
    Path(path).write_text(
        json.dumps(tournament_to_dict(state, name), indent=2) + "\n",
        encoding="utf-8")
