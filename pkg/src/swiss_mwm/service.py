"""HTTP API for operating live tournaments.

One JSON document per tournament in the data directory; every mutation is
an atomic write-temp-then-rename, so a killed process never leaves a
corrupt record. Mutations on one tournament are serialized by a lock;
reads and previews work on immutable snapshots. Pairing previews never
persist anything.

Players never carry true strengths here: the engine sees only Elo.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
import zlib
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import SwissError
from .model import (
    ByeRecord,
    GameRecord,
    GameResult,
    PairingSystem,
    Player,
    TournamentState,
    current_ranks,
    record_from_dict,
    record_to_dict,
    replay,
)
from .metrics import final_ranking
from .pairing import Pairing, compute_pairing


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _not_found(tid: str) -> ApiError:
    return ApiError(404, "not_found", f"tournament {tid!r} does not exist")


def _conflict(message: str) -> ApiError:
    return ApiError(409, "conflict", message)


def _invalid(message: str) -> ApiError:
    return ApiError(422, "invalid", message)


class CreateTournamentBody(BaseModel):
    name: str = Field(min_length=1, max_length=200)
    system: str = "dutch"
    beta: float = 2.0


class PlayerBody(BaseModel):
    name: str = Field(min_length=1, max_length=200)
    elo: int = Field(ge=0, le=4000)


class PairRoundBody(BaseModel):
    seed: int | None = None


class ResultBody(BaseModel):
    board: int = Field(ge=1)
    result: str


@dataclass
class TournamentRecord:
    """Persistent record: core tournament document plus round lifecycle."""

    id: str
    name: str
    created_at: str
    system: PairingSystem
    beta: float
    players: list[dict]          # {id, name, elo, lotOrder|None}
    history: list[dict]          # canonical match records
    round_state: str             # not_started | paired | complete
    current_round: int
    pairing: dict | None         # pending pairing payload
    results: list[str | None]    # per-board results for the open round

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "createdAt": self.created_at,
            "system": self.system.value,
            "beta": self.beta,
            "players": self.players,
            "history": self.history,
            "roundState": self.round_state,
            "currentRound": self.current_round,
            "pairing": self.pairing,
            "results": self.results,
        }

    @classmethod
    def from_dict(cls, data: dict) -> TournamentRecord:
        return cls(
            id=data["id"],
            name=data["name"],
            created_at=data["createdAt"],
            system=PairingSystem(data["system"]),
            beta=float(data["beta"]),
            players=list(data["players"]),
            history=list(data["history"]),
            round_state=data["roundState"],
            current_round=int(data["currentRound"]),
            pairing=data["pairing"],
            results=list(data["results"]),
        )

    def provisional_lots(self) -> list[int]:
        """Lots drawn from the tournament id; persisted at first pairing."""
        if any(p.get("lotOrder") is None for p in self.players):
            seed = zlib.crc32(self.id.encode())
            order = np.random.default_rng((seed, len(self.players))
                                          ).permutation(len(self.players))
            return [int(x) + 1 for x in order]
        return [p["lotOrder"] for p in self.players]

    def to_state(self) -> TournamentState:
        lots = self.provisional_lots()
        players = [
            Player(id=p["id"], name=p["name"], elo=int(p["elo"]),
                   lot_order=lots[i])
            for i, p in enumerate(self.players)
        ]
        return replay(players, [record_from_dict(r) for r in self.history],
                      self.system, self.beta)


class TournamentStore:
    """File-backed store; one lock per tournament id."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock(self, tid: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(tid, threading.Lock())

    def _path(self, tid: str) -> Path:
        if not tid.isalnum():
            raise _not_found(tid)
        return self.data_dir / f"{tid}.json"

    def exists(self, tid: str) -> bool:
        return self._path(tid).is_file()

    def load(self, tid: str) -> TournamentRecord:
        path = self._path(tid)
        if not path.is_file():
            raise _not_found(tid)
        return TournamentRecord.from_dict(
            json.loads(path.read_text(encoding="utf-8")))

    def save(self, record: TournamentRecord) -> None:
        path = self._path(record.id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(record.to_dict(), indent=2) + "\n",
                       encoding="utf-8")
        os.replace(tmp, path)

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.data_dir.glob("*.json"))


def _pairing_payload(pairing: Pairing) -> dict:
    return {
        "round": pairing.round,
        "boards": [{"board": i + 1, "white": w, "black": b,
                    "float": i in pairing.floats}
                   for i, (w, b) in enumerate(pairing.boards)],
        "bye": pairing.bye,
        "fallbackUsed": pairing.fallback_used,
    }


def _standings_payload(record: TournamentRecord) -> dict:
    state = record.to_state()
    ranking = final_ranking(state)
    byes = {r.player for r in
            (record_from_dict(d) for d in record.history)
            if isinstance(r, ByeRecord)}
    by_id = {p.id: p for p in state.players}
    rows = []
    for pos, pid in enumerate(ranking.ordered_ids, start=1):
        ps = state.states[pid]
        buchholz = sum(state.states[o].score for o in ps.opponents)
        if pid in byes:
            buchholz += ps.score
        rows.append({
            "rank": pos,
            "id": pid,
            "name": by_id[pid].name,
            "elo": by_id[pid].elo,
            "score": ps.score,
            "colorDiff": ps.color_diff,
            "buchholz": buchholz,
            "gamesPlayed": len(ps.opponents),
            "byeReceived": ps.bye_received,
        })
    return {"roundsPlayed": state.rounds_played, "standings": rows}


def create_app(data_dir: str | Path,
               static_dir: str | Path | None = None) -> FastAPI:
    """Build the service; ``static_dir`` optionally serves the web console."""
    store = TournamentStore(data_dir)
    app = FastAPI(title="swiss-mwm tournament service")

    @app.exception_handler(ApiError)
    async def handle_api_error(_req: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code,
                                     "message": exc.message})

    @app.exception_handler(SwissError)
    async def handle_domain_error(_req: Request, exc: SwissError):
        return JSONResponse(status_code=422,
                            content={"code": "domain_error",
                                     "message": str(exc)})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/tournaments")
    def list_tournaments():
        out = []
        for tid in store.list_ids():
            record = store.load(tid)
            out.append({"id": record.id, "name": record.name,
                        "createdAt": record.created_at,
                        "system": record.system.value,
                        "players": len(record.players),
                        "roundState": record.round_state,
                        "currentRound": record.current_round})
        return out

    @app.post("/api/tournaments", status_code=201)
    def create_tournament(body: CreateTournamentBody):
        try:
            system = PairingSystem(body.system.lower())
        except ValueError:
            raise _invalid(f"unknown pairing system {body.system!r}")
        if body.beta <= 0:
            raise _invalid("beta must be positive")
        record = TournamentRecord(
            id=uuid.uuid4().hex[:12],
            name=body.name,
            created_at=datetime.now(timezone.utc).isoformat(),
            system=system,
            beta=body.beta,
            players=[],
            history=[],
            round_state="not_started",
            current_round=0,
            pairing=None,
            results=[],
        )
        store.save(record)
        return record.to_dict()

    @app.get("/api/tournaments/{tid}")
    def get_tournament(tid: str):
        return store.load(tid).to_dict()

    @app.post("/api/tournaments/{tid}/players")
    def add_players(tid: str, body: list[PlayerBody]):
        with store.lock(tid):
            record = store.load(tid)
            if record.current_round > 0 or record.round_state != "not_started":
                raise _conflict("roster is frozen once round 1 is paired")
            if not body:
                raise _invalid("player list is empty")
            for entry in body:
                pid = f"p{len(record.players) + 1}"
                record.players.append({"id": pid, "name": entry.name,
                                       "elo": entry.elo, "lotOrder": None})
            store.save(record)
            return {"players": record.players}

    @app.post("/api/tournaments/{tid}/rounds", status_code=201)
    def pair_next_round(tid: str, body: PairRoundBody | None = None):
        with store.lock(tid):
            record = store.load(tid)
            if record.round_state == "paired":
                raise _conflict(
                    f"round {record.current_round} is still open")
            if len(record.players) < 2:
                raise _invalid("need at least two players")
            lots = record.provisional_lots()
            for player, lot in zip(record.players, lots):
                player["lotOrder"] = lot
            state = record.to_state()
            seed = body.seed if body and body.seed is not None else 0
            rng = np.random.default_rng(
                (zlib.crc32(record.id.encode()),
                 state.rounds_played + 1, seed & 0xFFFFFFFFFFFFFFFF))
            pairing = compute_pairing(state, rng)
            payload = _pairing_payload(pairing)
            record.current_round = pairing.round
            record.round_state = "paired"
            record.pairing = payload
            record.results = [None] * len(pairing.boards)
            if pairing.bye is not None:
                record.history.append(record_to_dict(
                    ByeRecord(pairing.round, pairing.bye)))
            store.save(record)
            return payload

    @app.put("/api/tournaments/{tid}/rounds/{round_no}/results")
    def submit_result(tid: str, round_no: int, body: ResultBody):
        with store.lock(tid):
            record = store.load(tid)
            if record.round_state != "paired":
                raise _conflict("no round is open for results")
            if round_no != record.current_round:
                raise _conflict(
                    f"round {round_no} is not the open round "
                    f"({record.current_round})")
            boards = record.pairing["boards"]
            if not 1 <= body.board <= len(boards):
                raise _invalid(f"board {body.board} does not exist")
            try:
                result = GameResult(body.result)
            except ValueError:
                raise _invalid(f"unknown result {body.result!r}")
            idx = body.board - 1
            if record.results[idx] is not None:
                raise _conflict(f"board {body.board} already has a result")
            board = boards[idx]
            record.history.append(record_to_dict(GameRecord(
                round_no, board["white"], board["black"], result)))
            record.results[idx] = result.value
            if all(r is not None for r in record.results):
                record.round_state = "complete"
                record.pairing = None
                record.results = []
            store.save(record)
            return record.to_dict()

    @app.get("/api/tournaments/{tid}/standings")
    def standings(tid: str):
        return _standings_payload(store.load(tid))

    @app.get("/api/tournaments/{tid}/preview")
    def preview(tid: str, system: str | None = Query(default=None),
                beta: float | None = Query(default=None),
                seed: int = Query(default=0)):
        record = store.load(tid)
        if len(record.players) < 2:
            raise _invalid("need at least two players")
        override = None
        if system:
            try:
                override = PairingSystem(system.lower())
            except ValueError:
                raise _invalid(f"unknown pairing system {system!r}")
        if beta is not None and beta <= 0:
            raise _invalid("beta must be positive")
        state = record.to_state()
        rng = np.random.default_rng(
            (zlib.crc32(record.id.encode()), state.rounds_played + 1,
             seed & 0xFFFFFFFFFFFFFFFF))
        pairing = compute_pairing(state, rng, system=override, beta=beta)
        return _pairing_payload(pairing)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="console")

    return app
