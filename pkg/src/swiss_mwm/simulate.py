"""Monte-Carlo tournament campaigns with deterministic seeding.

Every replication derives its own random streams from
``(master_seed, canonical system index, sample index, purpose, round)``, so
tables are a pure function of the configuration: worker count, scheduling,
added systems, or resized sample counts never perturb existing rows.
"""

from __future__ import annotations

import csv
import math
import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, NoLegalPairing
from .metrics import (
    Ranking,
    absolute_color_difference,
    final_ranking,
    kendall_tau,
    mean_strength_difference,
    ndcg,
    normalized_strength_difference,
    paradoxical_proportion,
    pearson,
    spearman_rho,
    tournament_mean_strength_difference,
    true_strength_ranking,
)
from .model import (
    ALL_SYSTEMS,
    ByeRecord,
    GameRecord,
    PairingSystem,
    Player,
    TournamentState,
    apply_result,
    current_ranks,
    new_tournament,
)
from .outcomes import (
    DEFAULT_OUTCOME_PARAMS,
    OutcomeModelParams,
    StrengthDistributionSpec,
    outcome_distribution,
    sample_elo,
    sample_result,
    sample_strengths,
)
from .pairing import compute_pairing

# Stream purposes (part of the seed key; order is frozen forever).
_P_LOT = 0
_P_PAIR = 1
_P_RESULT = 2
_P_STRENGTH = 3
_P_ELO = 4
_P_INNER = 5

CSV_FIXED_COLUMNS = ("sample_id", "system", "n", "rounds", "beta", "seed",
                     "kendall_tau", "spearman_rho", "ndcg", "float_pairs",
                     "paradoxical", "mean_sd", "normalized_sd")


def _stream(*key: int) -> np.random.Generator:
    normalized = tuple(int(k) & 0xFFFFFFFFFFFFFFFF for k in key)
    return np.random.Generator(np.random.PCG64(
        np.random.SeedSequence(normalized)))


def _system_index(system: PairingSystem) -> int:
    return ALL_SYSTEMS.index(system)


@dataclass(frozen=True)
class ExperimentConfig:
    players: int
    rounds: int
    systems: tuple[PairingSystem, ...]
    beta: float
    strength_spec: StrengthDistributionSpec
    samples: int
    master_seed: int
    mode: str = "standard"  # standard | replay_first_round
    outer_tournaments: int = 0
    inner_replays: int = 0
    outcome_params: OutcomeModelParams = DEFAULT_OUTCOME_PARAMS

    def __post_init__(self) -> None:
        if self.players < 2 or self.players % 2 != 0:
            raise DomainError("players must be an even number >= 2")
        if self.rounds < 1:
            raise DomainError("rounds must be >= 1")
        if self.samples < 1:
            raise DomainError("samples must be >= 1")
        if not self.systems:
            raise DomainError("at least one pairing system required")
        if self.mode not in ("standard", "replay_first_round"):
            raise DomainError(f"unknown mode {self.mode!r}")
        lo = math.ceil(math.log2(self.players))
        hi = self.players // 2
        if not lo <= self.rounds <= hi:
            warnings.warn(
                f"rounds={self.rounds} outside the recommended "
                f"[{lo}, {hi}] band for {self.players} players",
                RuntimeWarning, stacklevel=2)

    def to_dict(self) -> dict:
        return {
            "players": self.players,
            "rounds": self.rounds,
            "systems": [s.value for s in self.systems],
            "beta": self.beta,
            "strengthSpec": self.strength_spec.to_dict(),
            "samples": self.samples,
            "masterSeed": self.master_seed,
            "mode": self.mode,
            "outerTournaments": self.outer_tournaments,
            "innerReplays": self.inner_replays,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        return cls(
            players=int(data["players"]),
            rounds=int(data["rounds"]),
            systems=tuple(PairingSystem(s) for s in data["systems"]),
            beta=float(data["beta"]),
            strength_spec=StrengthDistributionSpec.from_dict(
                data["strengthSpec"]),
            samples=int(data["samples"]),
            master_seed=int(data["masterSeed"]),
            mode=data.get("mode", "standard"),
            outer_tournaments=int(data.get("outerTournaments", 0)),
            inner_replays=int(data.get("innerReplays", 0)),
        )


@dataclass(frozen=True)
class MetricRow:
    system: PairingSystem
    sample_index: int
    seed: int
    kendall_tau: float
    spearman_rho: float
    ndcg: float
    float_pairs: int
    paradoxical: float
    mean_sd: float
    normalized_sd: float
    acd_by_round: tuple[int, ...]
    fallback_used: bool


@dataclass(frozen=True)
class SampleTable:
    config: ExperimentConfig
    rows: tuple[MetricRow, ...]


def _simulated_players(n: int, strengths: list[float], elos: list[int],
                       lot_rng: np.random.Generator) -> list[Player]:
    lots = [int(x) + 1 for x in lot_rng.permutation(n)]
    return [
        Player(id=f"q{i+1:03d}", name=f"Q{i+1:03d}", elo=elos[i],
               lot_order=lots[i], true_strength=strengths[i])
        for i in range(n)
    ]


def _play_round(state: TournamentState, pair_rng: np.random.Generator,
                result_rng: np.random.Generator,
                params: OutcomeModelParams,
                strengths: dict[str, float]) -> tuple[TournamentState, bool]:
    pairing = compute_pairing(state, pair_rng)
    if pairing.bye is not None:
        state = apply_result(state, ByeRecord(pairing.round, pairing.bye))
    for white, black in pairing.boards:
        dist = outcome_distribution(strengths[white], strengths[black],
                                    params)
        result = sample_result(dist, result_rng)
        state = apply_result(state, GameRecord(pairing.round, white, black,
                                               result))
    return state, pairing.fallback_used


def run_tournament(config: ExperimentConfig, system: PairingSystem,
                   sample_index: int,
                   strengths: list[float] | None = None,
                   elos: list[int] | None = None,
                   ) -> tuple[TournamentState, MetricRow]:
    """Play one full simulated tournament and measure it.

    Strengths and Elos are drawn from the replication's own streams unless
    supplied explicitly (the replay study reuses this hook).
    """
    n = config.players
    ms = config.master_seed
    si = _system_index(system)
    if strengths is None:
        strengths = sample_strengths(
            config.strength_spec, n, _stream(ms, si, sample_index,
                                             _P_STRENGTH))
    if elos is None:
        elo_rng = _stream(ms, si, sample_index, _P_ELO)
        elos = [sample_elo(s, elo_rng) for s in strengths]
    players = _simulated_players(
        n, strengths, elos, _stream(ms, si, sample_index, _P_LOT))
    state = new_tournament(players, system, config.beta)
    strength_map = {p.id: p.true_strength for p in players}

    fallback = False
    failed = False
    acds: list[int] = []
    for rnd in range(1, config.rounds + 1):
        try:
            state, used_fallback = _play_round(
                state,
                _stream(ms, si, sample_index, _P_PAIR, rnd),
                _stream(ms, si, sample_index, _P_RESULT, rnd),
                config.outcome_params, strength_map)
        except NoLegalPairing:
            failed = True
            break
        fallback = fallback or used_fallback
        acds.append(sum(abs(ps.color_diff) for ps in state.states.values()))

    if failed:
        row = MetricRow(
            system=system, sample_index=sample_index,
            seed=_row_seed(ms, si, sample_index),
            kendall_tau=float("nan"), spearman_rho=float("nan"),
            ndcg=float("nan"), float_pairs=-1, paradoxical=float("nan"),
            mean_sd=float("nan"), normalized_sd=float("nan"),
            acd_by_round=tuple(acds + [-1] * (config.rounds - len(acds))),
            fallback_used=True)
        return state, row

    from .metrics import float_pairs as float_pairs_metric

    produced = final_ranking(state)
    truth = true_strength_ranking(state)
    row = MetricRow(
        system=system,
        sample_index=sample_index,
        seed=_row_seed(ms, si, sample_index),
        kendall_tau=kendall_tau(produced, truth),
        spearman_rho=spearman_rho(produced, truth),
        ndcg=ndcg(produced, truth),
        float_pairs=float_pairs_metric(state),
        paradoxical=paradoxical_proportion(state, strength_map),
        mean_sd=tournament_mean_strength_difference(state, strength_map),
        normalized_sd=normalized_strength_difference(state, strength_map),
        acd_by_round=tuple(acds),
        fallback_used=fallback,
    )
    return state, row


def _row_seed(ms: int, si: int, sample_index: int) -> int:
    return int(np.random.SeedSequence(
        (int(ms) & 0xFFFFFFFFFFFFFFFF, si, sample_index)
    ).generate_state(1, np.uint64)[0])


def _worker_run(task: tuple) -> MetricRow:
    config, system, sample_index = task
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        _state, row = run_tournament(config, system, sample_index)
    return row


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get("SWISS_MWM_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    if requested is not None:
        limit = min(limit, requested)
    return max(1, limit)


def run_experiment(config: ExperimentConfig,
                   workers: int | None = None) -> SampleTable:
    """All replications for every configured system, in parallel.

    The result is sorted by (canonical system order, sample index) and is
    identical for any worker count.
    """
    tasks = [(config, system, i)
             for system in config.systems
             for i in range(config.samples)]
    nworkers = worker_count(workers)
    if nworkers > 1 and len(tasks) > 8:
        from multiprocessing import get_context

        ctx = get_context("fork")
        chunk = max(1, len(tasks) // (nworkers * 16))
        with ctx.Pool(nworkers) as pool:
            rows = pool.map(_worker_run, tasks, chunksize=chunk)
    else:
        rows = [_worker_run(t) for t in tasks]
    rows.sort(key=lambda r: (_system_index(r.system), r.sample_index))
    return SampleTable(config=config, rows=tuple(rows))


def summarize(table: SampleTable) -> dict[str, dict[str, dict[str, float]]]:
    """Per-system sample statistics for every metric column."""
    metrics = ("kendall_tau", "spearman_rho", "ndcg", "float_pairs",
               "paradoxical", "mean_sd", "normalized_sd")
    out: dict[str, dict[str, dict[str, float]]] = {}
    for system in table.config.systems:
        rows = [r for r in table.rows
                if r.system == system and not math.isnan(r.kendall_tau)]
        if not rows:
            continue
        stats: dict[str, dict[str, float]] = {}
        for name in metrics:
            values = np.array([getattr(r, name) for r in rows], dtype=float)
            mean = float(values.mean())
            sd = float(values.std(ddof=1)) if len(values) > 1 else 0.0
            half = 1.96 * sd / math.sqrt(len(values)) if len(values) else 0.0
            q25, q50, q75 = (float(q) for q in
                             np.percentile(values, (25, 50, 75)))
            stats[name] = {
                "mean": mean, "sd": sd, "n": float(len(values)),
                "q25": q25, "median": q50, "q75": q75,
                "ci_lo": mean - half, "ci_hi": mean + half,
            }
        out[system.value] = stats
    return out


def _format_value(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(table: SampleTable, path: str | Path) -> None:
    """Raw per-replication samples; byte-stable for a fixed configuration."""
    config = table.config
    header = list(CSV_FIXED_COLUMNS)
    header += [f"acd_r{i}" for i in range(1, config.rounds + 1)]
    header.append("fallback_used")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in table.rows:
            out = [row.sample_index, row.system.value, config.players,
                   config.rounds, _format_value(float(config.beta)), row.seed,
                   _format_value(row.kendall_tau),
                   _format_value(row.spearman_rho),
                   _format_value(row.ndcg), row.float_pairs,
                   _format_value(row.paradoxical),
                   _format_value(row.mean_sd),
                   _format_value(row.normalized_sd)]
            out.extend(row.acd_by_round)
            out.append(_format_value(row.fallback_used))
            writer.writerow(out)


@dataclass(frozen=True)
class StudyRow:
    outer_index: int
    seed: int
    pearson: float
    flagged: bool
    inner_used: int


def run_correlation_study(config: ExperimentConfig,
                          workers: int | None = None) -> tuple[StudyRow, ...]:
    """Replay-first-round study: fix a tournament and its round-1 pairing,
    replay round 1 many times, and correlate the ranking quality after
    round 1 with the strength gap of the round-2 pairing it causes."""
    if config.mode != "replay_first_round":
        raise DomainError("config.mode must be 'replay_first_round'")
    if config.outer_tournaments < 1 or config.inner_replays < 2:
        raise DomainError("need outer_tournaments >= 1 and inner_replays >= 2")
    tasks = [(config, t) for t in range(config.outer_tournaments)]
    nworkers = worker_count(workers)
    if nworkers > 1 and len(tasks) > 4:
        from multiprocessing import get_context

        ctx = get_context("fork")
        with ctx.Pool(nworkers) as pool:
            rows = pool.map(_study_worker, tasks,
                            chunksize=max(1, len(tasks) // (nworkers * 8)))
    else:
        rows = [_study_worker(t) for t in tasks]
    return tuple(sorted(rows, key=lambda r: r.outer_index))


def _study_worker(task: tuple[ExperimentConfig, int]) -> StudyRow:
    config, outer = task
    system = config.systems[0]
    n = config.players
    ms = config.master_seed
    si = _system_index(system)
    strengths = sample_strengths(config.strength_spec, n,
                                 _stream(ms, si, outer, _P_STRENGTH))
    elo_rng = _stream(ms, si, outer, _P_ELO)
    elos = [sample_elo(s, elo_rng) for s in strengths]
    players = _simulated_players(n, strengths, elos,
                                 _stream(ms, si, outer, _P_LOT))
    base_state = new_tournament(players, system, config.beta)
    strength_map = {p.id: p.true_strength for p in players}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        first_pairing = compute_pairing(base_state,
                                        _stream(ms, si, outer, _P_PAIR, 1))
        truth = true_strength_ranking(base_state)
        taus: list[float] = []
        gaps: list[float] = []
        for inner in range(config.inner_replays):
            result_rng = _stream(ms, si, outer, _P_INNER, inner)
            state = base_state
            if first_pairing.bye is not None:
                state = apply_result(state, ByeRecord(1, first_pairing.bye))
            for white, black in first_pairing.boards:
                dist = outcome_distribution(strength_map[white],
                                            strength_map[black],
                                            config.outcome_params)
                state = apply_result(state, GameRecord(
                    1, white, black, sample_result(dist, result_rng)))
            after_round1 = Ranking(tuple(current_ranks(state)))
            taus.append(kendall_tau(after_round1, truth))
            second = compute_pairing(state,
                                     _stream(ms, si, outer, _P_PAIR, 2, inner))
            gaps.append(mean_strength_difference(second, strength_map))
    seed = _row_seed(ms, si, outer)
    try:
        coefficient = pearson(taus, gaps)
    except DomainError:
        return StudyRow(outer, seed, float("nan"), True,
                        config.inner_replays)
    return StudyRow(outer, seed, coefficient, False, config.inner_replays)


def write_study_csv(rows: tuple[StudyRow, ...], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["outer_id", "seed", "pearson", "flagged",
                         "inner_replays"])
        for row in rows:
            writer.writerow([row.outer_index, row.seed,
                             _format_value(row.pearson),
                             "1" if row.flagged else "0", row.inner_used])
