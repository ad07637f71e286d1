"""Round pairing: auxiliary graph construction, weights, colors, byes.

Edges exist between players who have not met and whose color-difference sum
stays inside the allowed band. Edge weights are lexicographic triples
(score closeness, color balance, pairing-system preference) encoded into a
single scalar so one maximum weight perfect matching decides the round.

All lexicographic arithmetic is done on an exact integer grid. Among
equal-weight optimal matchings the engine deterministically prefers pairing
top-ranked players with other high-ranked players (see ``_tie_bonus``),
which keeps repeated runs and golden tests stable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AllPlayersHadBye,
    DomainError,
    EncodingOverflow,
    NoLegalPairing,
    NoPerfectMatching,
)
from .matching import WeightedGraph, max_weight_perfect_matching
from .model import PairingSystem, TournamentState, current_ranks

DEFAULT_PI_EXPONENT = 1.01

#: Resolution (in bits) of the pairing-preference term on the integer grid.
_MAX_QBITS = 20
_MIN_QBITS = 4
_INT64_BUDGET = 2 ** 61


@dataclass(frozen=True)
class WeightTuple:
    """Lexicographic edge weight; score_term is in points, both penalty
    terms are <= 0."""

    score_term: float
    color_term: int
    pi_term: float

    def as_tuple(self) -> tuple[float, int, float]:
        return (self.score_term, self.color_term, self.pi_term)


@dataclass(frozen=True)
class EncodingParams:
    """Factors that turn a weight tuple into one scalar.

    The defaults (10000 per point, 100 per color unit) keep the three levels
    strictly separated for tournaments up to 64 players with beta <= 2.
    """

    score_factor: int = 10_000
    color_factor: int = 100

    def validate_for(self, n: int, beta: float,
                     max_abs_pi: float) -> None:
        if self.score_factor <= 0 or self.color_factor <= 0:
            raise EncodingOverflow("factors must be positive")
        if self.score_factor % 2 != 0:
            raise EncodingOverflow("score_factor must be even (half points)")
        max_color_sum = 2 * beta
        if not self.color_factor > max_abs_pi:
            raise EncodingOverflow(
                f"color_factor {self.color_factor} does not dominate "
                f"pairing term bound {max_abs_pi:.2f}")
        if not self.score_factor * 0.5 > (self.color_factor * max_color_sum
                                          + max_abs_pi):
            raise EncodingOverflow(
                f"score_factor {self.score_factor} does not dominate color "
                f"level for beta={beta}")


def max_abs_pi_bound(n: int, exponent: float = DEFAULT_PI_EXPONENT) -> float:
    """Upper bound of |pi| over all systems for an n-player round."""
    if n < 2:
        return 1.0
    return max(1.0, float(n - 1) ** exponent)


def default_encoding_params(n: int, beta: float,
                            exponent: float = DEFAULT_PI_EXPONENT,
                            pi_bound: float | None = None) -> EncodingParams:
    """Smallest powers of ten satisfying the separation invariants."""
    bound = max_abs_pi_bound(n, exponent) if pi_bound is None else pi_bound
    color_factor = 10
    while color_factor <= bound:
        color_factor *= 10
    score_factor = 10
    while score_factor * 0.5 <= color_factor * 2 * beta + bound:
        score_factor *= 10
    # Never go below the documented defaults.
    return EncodingParams(score_factor=max(score_factor, 10_000),
                          color_factor=max(color_factor, 100))


def encode_weight(t: WeightTuple, p: EncodingParams) -> float:
    """Scalar encoding; numeric order equals lexicographic order whenever the
    tuples differ in score or color term (given validated params)."""
    return (p.score_factor * t.score_term + p.color_factor * t.color_term
            + t.pi_term)


@dataclass(frozen=True)
class PairingGraph:
    """Auxiliary weighted graph for one round: vertices are the eligible
    players in rank order; each edge carries its tuple and scalar weight."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[int, int, WeightTuple, float], ...]
    params: EncodingParams
    pi_bound: float = 0.0

    def as_weighted_graph(self) -> WeightedGraph:
        return WeightedGraph(
            vertex_count=len(self.vertices),
            edges=tuple((u, v, scalar) for u, v, _t, scalar in self.edges),
        )


@dataclass(frozen=True)
class Pairing:
    """One round's output: boards ordered top-down, plus optional bye.

    ``floats`` holds indices of boards whose players came from different
    score groups; ``fallback_used`` marks rounds where the color condition
    had to be relaxed to keep the tournament pairable.
    """

    round: int
    boards: tuple[tuple[str, str], ...]
    bye: str | None
    floats: tuple[int, ...]
    fallback_used: bool = False


def select_bye(state: TournamentState) -> str | None:
    """Lowest-ranked player without a previous bye; None for even fields."""
    if len(state.players) % 2 == 0:
        return None
    for pid in reversed(current_ranks(state)):
        if not state.states[pid].bye_received:
            return pid
    raise AllPlayersHadBye("every player has already received a bye")


def _rank_maps(state: TournamentState, exclude: str | None,
               ) -> tuple[list[str], dict[str, dict]]:
    """Eligible ids in rank order plus rank / group / size / half maps.

    Ranks are 1-based positions among eligible players. The half split marks
    the first ceil(k/2) players of a k-player score group as the top half.
    """
    order = [pid for pid in current_ranks(state) if pid != exclude]
    rank = {pid: i + 1 for i, pid in enumerate(order)}
    group_of: dict[str, int] = {}
    group_size: dict[str, int] = {}
    half: dict[str, int] = {}
    start = 0
    while start < len(order):
        end = start
        score = state.states[order[start]].score_half_points
        while end < len(order) and \
                state.states[order[end]].score_half_points == score:
            end += 1
        size = end - start
        top = start + (size + 1) // 2
        for i in range(start, end):
            pid = order[i]
            group_of[pid] = start
            group_size[pid] = size
            half[pid] = 0 if i < top else 1
        start = end
    return order, {"rank": rank, "group": group_of, "size": group_size,
                   "half": half}


def pi_weight(system: PairingSystem, pi: str, pj: str,
              state: TournamentState,
              rng: np.random.Generator | None = None,
              exponent: float = DEFAULT_PI_EXPONENT,
              exclude: str | None = None) -> float:
    """Pairing-system preference term for one candidate pair.

    Random systems draw from ``rng`` (the round's seeded generator).
    """
    _order, maps = _rank_maps(state, exclude)
    return _pi_from_maps(system, pi, pj, maps, rng, exponent)


def _pi_from_maps(system: PairingSystem, pi: str, pj: str, maps: dict,
                  rng: np.random.Generator | None,
                  exponent: float) -> float:
    rank = maps["rank"]
    dr = abs(rank[pi] - rank[pj])
    same_group = maps["group"][pi] == maps["group"][pj]
    if system is PairingSystem.MONRAD:
        return -float(dr)
    if system is PairingSystem.BURSTEIN:
        return float(dr) ** exponent
    if system is PairingSystem.DUTCH:
        sg = maps["size"][pi] if same_group else 0
        return -abs(sg / 2 - dr) ** exponent
    if rng is None:
        raise DomainError(f"system {system.value} needs a random generator")
    if system is PairingSystem.RANDOM:
        return float(rng.uniform(0.0, 1.0))
    if system is PairingSystem.RANDOM2:
        if same_group and maps["half"][pi] != maps["half"][pj]:
            return float(rng.uniform(0.0, 1.0))
        return float(rng.uniform(-1.0, 0.0))
    raise DomainError(f"unhandled pairing system {system!r}")


def build_pairing_graph(state: TournamentState,
                        system: PairingSystem | None = None,
                        beta: float | None = None,
                        rng: np.random.Generator | None = None,
                        exclude: str | None = None,
                        params: EncodingParams | None = None,
                        exponent: float = DEFAULT_PI_EXPONENT,
                        pi_fn=None,
                        pi_bound: float | None = None) -> PairingGraph:
    """Auxiliary graph with an edge for each legal pair.

    A pair is legal iff the two players have not met and
    ``|cd_i + cd_j| < 2 * beta``. The bye recipient must already be excluded.
    ``pi_fn(pid_a, pid_b)`` replaces the system preference term when given
    (used by analysis pairings); its magnitude must stay below ``pi_bound``.
    """
    system = state.system if system is None else system
    beta = state.beta if beta is None else beta
    order, maps = _rank_maps(state, exclude)
    n = len(order)
    bound = max_abs_pi_bound(n, exponent) if pi_bound is None else pi_bound
    if math.isfinite(beta):
        validation_beta = beta
    else:
        # Relaxed rebuild: separation only needs the achievable color sums.
        max_cd = max((abs(state.states[pid].color_diff) for pid in order),
                     default=0)
        validation_beta = max(max_cd, 0.5)
    if params is None:
        params = default_encoding_params(n, validation_beta, exponent,
                                         pi_bound=bound)
    params.validate_for(n, validation_beta, bound)
    edges = []
    for i in range(n):
        si = state.states[order[i]]
        for j in range(i + 1, n):
            sj = state.states[order[j]]
            if order[j] in si.opponents:
                continue
            color_sum = si.color_diff + sj.color_diff
            if not abs(color_sum) < 2 * beta:
                continue
            if pi_fn is not None:
                pi_term = float(pi_fn(order[i], order[j]))
            else:
                pi_term = _pi_from_maps(system, order[i], order[j], maps,
                                        rng, exponent)
            t = WeightTuple(
                score_term=-abs(si.score_half_points
                                - sj.score_half_points) / 2,
                color_term=-abs(color_sum),
                pi_term=pi_term,
            )
            edges.append((i, j, t, encode_weight(t, params)))
    return PairingGraph(vertices=tuple(order), edges=tuple(edges),
                        params=params, pi_bound=bound)


def assign_colors(pair: tuple[str, str], state: TournamentState,
                  rng: np.random.Generator) -> tuple[str, str]:
    """White goes to the lower color difference; ties are decided by rng."""
    a, b = pair
    cda = state.states[a].color_diff
    cdb = state.states[b].color_diff
    if cda < cdb:
        return a, b
    if cdb < cda:
        return b, a
    return (a, b) if rng.integers(2) == 0 else (b, a)


def _tie_bonus(i: int, j: int, n: int) -> int:
    # Among equal-weight matchings prefer pairing good ranks together;
    # realizes the documented deterministic tie-break.
    return (n - i) * (n - j)


def _qbits_for(n: int, bound: float, fallback: bool) -> int:
    """Fractional bits for the pi term such that all integer stages
    (tie-break level, fallback penalty, solver shift) fit in int64."""
    m = n ** 3 + 2
    headroom = (n + 2) ** 2 if fallback else (n + 2)
    denom = max(bound, 1.0) * m * headroom
    q = int(math.floor(math.log2(_INT64_BUDGET / denom)))
    if q < _MIN_QBITS:
        raise EncodingOverflow(
            f"cannot encode {n}-player weights exactly; supply smaller factors")
    return min(_MAX_QBITS, q)


def _integer_edge_weights(graph: PairingGraph, state: TournamentState,
                          fallback: bool) -> list[int]:
    """Exact integer encoding: scalar on a 2**q grid, then a least
    significant tie-break level."""
    n = len(graph.vertices)
    p = graph.params
    max_half = max((state.states[v].score_half_points
                    for v in graph.vertices), default=0)
    min_half = min((state.states[v].score_half_points
                    for v in graph.vertices), default=0)
    max_cd = max((abs(state.states[v].color_diff)
                  for v in graph.vertices), default=0)
    bound = (p.score_factor * (max_half - min_half) / 2
             + p.color_factor * 2 * max_cd
             + max(graph.pi_bound, max_abs_pi_bound(n)) + 1)
    q = _qbits_for(n, bound, fallback)
    scale = 1 << q
    m = n ** 3 + 1
    weights = []
    for i, j, t, _scalar in graph.edges:
        int_part = (-p.score_factor
                    * abs(state.states[graph.vertices[i]].score_half_points
                          - state.states[graph.vertices[j]].score_half_points)
                    // 2
                    + p.color_factor * t.color_term)
        iw = int_part * scale + round(t.pi_term * scale)
        weights.append(iw * m + _tie_bonus(i, j, n))
    return weights


def _solve(graph: PairingGraph, state: TournamentState,
           fallback: bool) -> list[tuple[int, int]]:
    weights = _integer_edge_weights(graph, state, fallback)
    g = WeightedGraph(
        vertex_count=len(graph.vertices),
        edges=tuple((u, v, w) for (u, v, _t, _s), w
                    in zip(graph.edges, weights)),
    )
    return list(max_weight_perfect_matching(g).pairs)


def compute_pairing(state: TournamentState,
                    rng: np.random.Generator,
                    system: PairingSystem | None = None,
                    beta: float | None = None,
                    params: EncodingParams | None = None,
                    exponent: float = DEFAULT_PI_EXPONENT) -> Pairing:
    """Pair the next round: bye first, then one maximum weight matching.

    When the color condition leaves no perfect matching, the engine retries
    with color-violating pairs re-admitted under a most-significant penalty
    (fewest violating boards win); pairs who already met are never readmitted.
    """
    system = state.system if system is None else system
    beta = state.beta if beta is None else beta
    n_players = len(state.players)
    round_no = state.rounds_played + 1
    if round_no > n_players // 2:
        warnings.warn(
            f"round {round_no} exceeds n/2={n_players // 2}; a perfect "
            "matching is no longer guaranteed to exist", RuntimeWarning,
            stacklevel=2)
    bye = select_bye(state)
    graph = build_pairing_graph(state, system, beta, rng, exclude=bye,
                                params=params, exponent=exponent)
    fallback_used = False
    try:
        pairs = _solve(graph, state, fallback=False)
    except NoPerfectMatching:
        fallback_used = True
        warnings.warn(
            f"round {round_no}: no legal pairing under the color condition; "
            "relaxing it for the minimum number of boards", RuntimeWarning,
            stacklevel=2)
        relaxed = _relaxed_graph(state, system, beta, rng, bye, exponent)
        try:
            pairs = _solve_relaxed(relaxed, state, beta)
        except NoPerfectMatching as exc:
            raise NoLegalPairing(
                f"round {round_no}: no pairing exists even after relaxing "
                "the color condition") from exc
        graph = relaxed
    ids = graph.vertices
    boards_ids = sorted(pairs)  # vertex indices are rank-ordered
    boards = []
    floats = []
    for idx, (i, j) in enumerate(boards_ids):
        a, b = ids[i], ids[j]
        if (state.states[a].score_half_points
                != state.states[b].score_half_points):
            floats.append(idx)
        boards.append(assign_colors((a, b), state, rng))
    return Pairing(
        round=round_no,
        boards=tuple(boards),
        bye=bye,
        floats=tuple(floats),
        fallback_used=fallback_used,
    )


def _relaxed_graph(state: TournamentState, system: PairingSystem,
                   beta: float, rng: np.random.Generator | None,
                   exclude: str | None,
                   exponent: float) -> PairingGraph:
    """All not-yet-played pairs, including those failing the color condition
    (an effectively unbounded beta keeps every such edge)."""
    return build_pairing_graph(state, system, beta=float("inf"), rng=rng,
                               exclude=exclude, exponent=exponent)


def strength_gap_pairing(state: TournamentState,
                         strengths: dict[str, float],
                         exclude: str | None = None,
                         ) -> list[tuple[str, str]]:
    """Pairing that maximizes the total true-strength gap while keeping the
    usual score and color priorities; an analytical tool only (it needs the
    true strengths, so it can never run a real tournament)."""
    bound = max(
        (abs(strengths[a] - strengths[b])
         for a in strengths for b in strengths), default=1.0) + 1.0
    graph = build_pairing_graph(
        state, exclude=exclude,
        pi_fn=lambda a, b: abs(strengths[a] - strengths[b]),
        pi_bound=bound)
    try:
        pairs = _solve(graph, state, fallback=False)
    except NoPerfectMatching:
        # Mirrors the engine's fallback so rounds that needed the color
        # relaxation still get a well-defined maximum-gap counterpart.
        relaxed = build_pairing_graph(
            state, beta=float("inf"), exclude=exclude,
            pi_fn=lambda a, b: abs(strengths[a] - strengths[b]),
            pi_bound=bound)
        pairs = _solve_relaxed(relaxed, state, state.beta)
        graph = relaxed
    return [(graph.vertices[i], graph.vertices[j]) for i, j in pairs]


def _solve_relaxed(graph: PairingGraph, state: TournamentState,
                   beta: float) -> list[tuple[int, int]]:
    """Minimize the count of color-violating boards above all other terms."""
    weights = _integer_edge_weights(graph, state, fallback=True)
    if not weights:
        raise NoPerfectMatching("empty relaxed graph")
    penalty = (len(graph.vertices) // 2) * (max(weights) - min(weights)) + 1
    adjusted = []
    for (i, j, t, _s), w in zip(graph.edges, weights):
        violating = not abs(t.color_term) < 2 * beta
        adjusted.append(w - penalty if violating else w)
    g = WeightedGraph(
        vertex_count=len(graph.vertices),
        edges=tuple((u, v, w) for (u, v, _t, _s), w
                    in zip(graph.edges, adjusted)),
    )
    return list(max_weight_perfect_matching(g).pairs)
