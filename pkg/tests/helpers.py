"""Shared test utilities: independent oracles and mini-simulations.

The lexicographic oracle enumerates every legal perfect matching and
compares summed weight tuples directly, staying independent of the engine's
scalar encoding path.
"""

import numpy as np

from swiss_mwm.matching import WeightedGraph, enumerate_perfect_matchings
from swiss_mwm.model import (
    ByeRecord,
    GameRecord,
    GameResult,
    apply_result,
    current_ranks,
)
from swiss_mwm.pairing import build_pairing_graph, compute_pairing


def legal_matchings_with_tuples(state, system=None, beta=None, rng=None,
                                exclude=None):
    """All legal perfect matchings with their summed weight tuples.

    Yields (pairs_as_id_sets, (sum_score, sum_color, sum_pi), scalar_total).
    """
    graph = build_pairing_graph(state, system=system, beta=beta, rng=rng,
                                exclude=exclude)
    skeleton = WeightedGraph(
        vertex_count=len(graph.vertices),
        edges=tuple((u, v, 1.0) for u, v, _t, _s in graph.edges))
    by_pair = {(u, v): (t, s) for u, v, t, s in graph.edges}
    for matching in enumerate_perfect_matchings(skeleton):
        sums = [0.0, 0.0, 0.0]
        scalar = 0.0
        ids = set()
        for u, v in matching.pairs:
            t, s = by_pair[(u, v)]
            sums[0] += t.score_term
            sums[1] += t.color_term
            sums[2] += t.pi_term
            scalar += s
            ids.add(frozenset((graph.vertices[u], graph.vertices[v])))
        yield ids, tuple(sums), scalar


def lex_best_matchings(state, system=None, beta=None, rng=None, exclude=None):
    """Matchings whose summed tuple is lexicographically maximal."""
    entries = list(legal_matchings_with_tuples(state, system, beta, rng,
                                               exclude))
    if not entries:
        return [], None
    best = max(t for _ids, t, _s in entries)
    return [ids for ids, t, _s in entries if t == best], best


def play_random_rounds(state, rounds, seed, forbid_draws=False):
    """Drive the engine for a number of rounds with random results."""
    rng = np.random.default_rng(seed)
    pairings = []
    for _ in range(rounds):
        pairing = compute_pairing(state, rng)
        pairings.append(pairing)
        if pairing.bye is not None:
            state = apply_result(state, ByeRecord(pairing.round, pairing.bye))
        for white, black in pairing.boards:
            choices = [GameResult.WHITE_WIN, GameResult.BLACK_WIN]
            if not forbid_draws:
                choices.append(GameResult.DRAW)
            result = choices[rng.integers(len(choices))]
            state = apply_result(
                state, GameRecord(pairing.round, white, black, result))
    return state, pairings


def pairs_of(pairing):
    return {frozenset(b) for b in pairing.boards}
