"""Final ranking with tiebreakers, plus every evaluation metric.

Rank-similarity measures (Kendall tau, Spearman rho, NDCG) compare the
tournament's final ranking against the true strength order. Fairness is
measured by float pairs (boards crossing score groups) and the absolute
color difference per round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import (
    ByeRecord,
    GameRecord,
    GameResult,
    PairingSystem,
    TournamentState,
    apply_result,
    new_tournament,
)
from .pairing import Pairing

DEFAULT_TIEBREAKS = ("buchholz", "elo")


@dataclass(frozen=True)
class Ranking:
    ordered_ids: tuple[str, ...]

    def position(self) -> dict[str, int]:
        return {pid: i for i, pid in enumerate(self.ordered_ids)}


def final_ranking(state: TournamentState,
                  tiebreaks: tuple[str, ...] = DEFAULT_TIEBREAKS) -> Ranking:
    """Score descending, then the configured tiebreakers, then the lot drawn
    at the start. Buchholz sums the final scores of a player's opponents; a
    bye counts the player's own final score as a virtual opponent."""
    by_id = {p.id: p for p in state.players}
    buchholz: dict[str, float] = {}
    if "buchholz" in tiebreaks:
        byes = {r.player for r in state.history if isinstance(r, ByeRecord)}
        for pid, ps in state.states.items():
            total = sum(state.states[opp].score for opp in ps.opponents)
            if pid in byes:
                total += ps.score
            buchholz[pid] = total

    def key(pid: str):
        parts: list[float] = [-state.states[pid].score_half_points]
        for tb in tiebreaks:
            if tb == "buchholz":
                parts.append(-buchholz[pid])
            elif tb == "elo":
                parts.append(-by_id[pid].elo)
            else:
                raise DomainError(f"unknown tiebreaker {tb!r}")
        parts.append(by_id[pid].lot_order)
        return tuple(parts)

    return Ranking(tuple(sorted(state.states, key=key)))


def true_strength_ranking(state: TournamentState) -> Ranking:
    """Player ids ordered by true strength (ties: Elo, then lot)."""
    by_id = {p.id: p for p in state.players}
    for p in state.players:
        if p.true_strength is None:
            raise DomainError(f"player {p.id} has no true strength")
    return Ranking(tuple(sorted(
        state.states,
        key=lambda pid: (-by_id[pid].true_strength, -by_id[pid].elo,
                         by_id[pid].lot_order))))


def _check_same_players(a: Ranking, b: Ranking) -> None:
    if set(a.ordered_ids) != set(b.ordered_ids) or \
            len(a.ordered_ids) != len(b.ordered_ids):
        raise DomainError("rankings must cover the same players")


def kendall_tau(a: Ranking, b: Ranking) -> float:
    """Normalized Kendall tau: 1 - 4*discordant / (n*(n-1))."""
    _check_same_players(a, b)
    n = len(a.ordered_ids)
    if n < 2:
        return 1.0
    pos_b = b.position()
    seq = np.array([pos_b[pid] for pid in a.ordered_ids])
    discordant = 0
    for i in range(n - 1):
        discordant += int(np.sum(seq[i + 1:] < seq[i]))
    return 1.0 - 4.0 * discordant / (n * (n - 1))


def spearman_rho(a: Ranking, b: Ranking) -> float:
    """Normalized Spearman rho: 1 - 6*sum(d^2) / (n*(n^2-1))."""
    _check_same_players(a, b)
    n = len(a.ordered_ids)
    if n < 2:
        return 1.0
    pos_b = b.position()
    d2 = sum((i - pos_b[pid]) ** 2 for i, pid in enumerate(a.ordered_ids))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


def ndcg(output: Ranking, true_order: Ranking) -> float:
    """Discounted cumulative gain of the produced ranking, normalized by the
    ideal ordering; relevance of a player is n minus their true position."""
    _check_same_players(output, true_order)
    n = len(output.ordered_ids)
    true_pos = true_order.position()
    dcg = sum((n - 1 - true_pos[pid]) / math.log2(k + 2)
              for k, pid in enumerate(output.ordered_ids))
    ideal = sum((n - 1 - k) / math.log2(k + 2) for k in range(n))
    return dcg / ideal


def _states_before_each_round(state: TournamentState):
    """Yield (round_number, state_before_round) by replaying the history."""
    replayed = new_tournament(list(state.players), state.system, state.beta)
    current_round = 1
    yield current_round, replayed
    for record in state.history:
        if record.round > current_round:
            current_round = record.round
            yield current_round, replayed
        replayed = apply_result(replayed, record)
    # expose the final state for callers that need post-history bookkeeping
    yield current_round + 1, replayed


def float_pairs(state: TournamentState) -> int:
    """Games whose players had different scores when the round started."""
    count = 0
    scores_at_round: dict[int, dict[str, int]] = {}
    for rnd, snapshot in _states_before_each_round(state):
        scores_at_round[rnd] = {
            pid: ps.score_half_points for pid, ps in snapshot.states.items()}
    for record in state.history:
        if isinstance(record, GameRecord):
            scores = scores_at_round[record.round]
            if scores[record.white] != scores[record.black]:
                count += 1
    return count


def absolute_color_difference(state: TournamentState,
                              after_round: int) -> int:
    """Sum of |color difference| over all players after the given round."""
    if after_round > state.rounds_played:
        raise DomainError(
            f"round {after_round} beyond played {state.rounds_played}")
    replayed = new_tournament(list(state.players), state.system, state.beta)
    for record in state.history:
        if record.round <= after_round:
            replayed = apply_result(replayed, record)
    return sum(abs(ps.color_diff) for ps in replayed.states.values())


def paradoxical_proportion(state: TournamentState,
                           strengths: dict[str, float]) -> float:
    """Share of games won by the strictly weaker player (draws never count)."""
    games = [r for r in state.history if isinstance(r, GameRecord)]
    if not games:
        return 0.0
    paradoxical = 0
    for record in games:
        try:
            sw = strengths[record.white]
            sb = strengths[record.black]
        except KeyError as exc:
            raise DomainError(f"missing strength for {exc.args[0]!r}") from exc
        if record.result is GameResult.WHITE_WIN and sw < sb:
            paradoxical += 1
        elif record.result is GameResult.BLACK_WIN and sb < sw:
            paradoxical += 1
    return paradoxical / len(games)


def mean_strength_difference(pairing: Pairing,
                             strengths: dict[str, float]) -> float:
    """Average absolute strength gap over the pairing's boards (bye excluded)."""
    if not pairing.boards:
        return 0.0
    return sum(abs(strengths[w] - strengths[b])
               for w, b in pairing.boards) / len(pairing.boards)


def tournament_mean_strength_difference(state: TournamentState,
                                        strengths: dict[str, float]) -> float:
    """Average absolute strength gap over every game of the tournament."""
    games = [r for r in state.history if isinstance(r, GameRecord)]
    if not games:
        return 0.0
    return sum(abs(strengths[r.white] - strengths[r.black])
               for r in games) / len(games)


def normalized_strength_difference(state: TournamentState,
                                   strengths: dict[str, float]) -> float:
    """Total paired strength gap relative to the maximum achievable gap.

    The per-round maximum uses the same pairing machinery with the
    system preference replaced by the raw strength gap, evaluated against
    that round's actual state; totals are aggregated before dividing.
    Returns 1.0 when all strengths are equal (degenerate denominator).
    """
    from .pairing import strength_gap_pairing  # local import to avoid cycle

    actual_total = 0.0
    max_total = 0.0
    byes = {r.round: r.player for r in state.history
            if isinstance(r, ByeRecord)}
    for rnd, snapshot in _states_before_each_round(state):
        if rnd > state.rounds_played:
            break
        games = [r for r in state.history
                 if isinstance(r, GameRecord) and r.round == rnd]
        if not games:
            continue
        actual_total += sum(abs(strengths[r.white] - strengths[r.black])
                            for r in games)
        best = strength_gap_pairing(snapshot, strengths,
                                    exclude=byes.get(rnd))
        max_total += sum(abs(strengths[a] - strengths[b])
                         for a, b in best)
    if max_total == 0.0:
        return 1.0
    return actual_total / max_total


def pearson(xs: list[float], ys: list[float]) -> float:
    """Sample Pearson correlation; DomainError on zero variance."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise DomainError("need two equal-length samples of size >= 2")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(np.dot(xc, xc)) * float(np.dot(yc, yc)))
    if denom == 0.0:
        raise DomainError("zero variance in at least one sample")
    return float(np.dot(xc, yc)) / denom
