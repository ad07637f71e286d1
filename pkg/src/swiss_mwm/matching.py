"""Exact maximum weight perfect matching on general graphs.

The solver accepts integer or real edge weights (negative allowed). Integer
weights are solved exactly; real weights are scaled onto a fine integer grid,
which preserves optimality up to a relative error far below 1e-9. A brute
force enumeration oracle for small instances backs every correctness test.
"""

from __future__ import annotations

import math
from collections.abc import Iterator
from dataclasses import dataclass, field

import numpy as np

from ._blossom import solve_max_weight_matching
from .errors import DomainError, NoPerfectMatching, TooLarge

ENUMERATION_LIMIT = 14  # (13)!! = 135135 matchings; keep the oracle instant

# Integer weights above this magnitude (and scaled reals) go through the
# float-scaling path; headroom keeps the kernel's int64 arithmetic safe.
_MAX_EXACT_WEIGHT = 2 ** 46


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with real edge weights on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        seen: set[tuple[int, int]] = set()
        for u, v, w in self.edges:
            if u == v:
                raise DomainError(f"self-loop on vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise DomainError(f"edge ({u},{v}) out of range")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DomainError(f"duplicate edge {key}")
            seen.add(key)
            if not math.isfinite(w):
                raise DomainError(f"non-finite weight on edge {key}")

    @classmethod
    def from_edges(cls, vertex_count: int,
                   edges: list[tuple[int, int, float]]) -> WeightedGraph:
        return cls(vertex_count, tuple(edges))


@dataclass(frozen=True)
class PerfectMatching:
    """A perfect matching: sorted vertex pairs plus their total weight."""

    pairs: tuple[tuple[int, int], ...]
    total_weight: float

    def partner(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for u, v in self.pairs:
            out[u] = v
            out[v] = u
        return out


def _canonical_pairs(pairs: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((u, v) if u < v else (v, u) for u, v in pairs))


def _total_weight(g: WeightedGraph, pairs: tuple[tuple[int, int], ...]):
    lookup = {}
    for u, v, w in g.edges:
        lookup[(u, v) if u < v else (v, u)] = w
    return sum(lookup[p] for p in pairs)


def _integer_weights(g: WeightedGraph) -> list[int]:
    """Map edge weights onto int64-safe integers preserving the optimum.

    Integer-valued weights below the exactness cap pass through unchanged.
    Anything else is scaled so the relative rounding error of any matching
    total stays below ~1e-12.
    """
    ws = [w for _, _, w in g.edges]
    if all(isinstance(w, int) or float(w).is_integer() for w in ws):
        ints = [int(w) for w in ws]
        if max((abs(w) for w in ints), default=0) <= _MAX_EXACT_WEIGHT:
            return ints
    top = max((abs(float(w)) for w in ws), default=0.0)
    if top == 0.0:
        return [0 for _ in ws]
    scale = 2.0 ** (46 - math.ceil(math.log2(top)))
    return [round(float(w) * scale) for w in ws]


def max_weight_perfect_matching(g: WeightedGraph) -> PerfectMatching:
    """Perfect matching of maximum total weight (weights may be negative).

    Raises NoPerfectMatching when the graph admits none, and DomainError for
    an odd vertex count.
    """
    n = g.vertex_count
    if n % 2 != 0:
        raise DomainError("perfect matching requires an even vertex count")
    if n == 0:
        return PerfectMatching((), 0.0)
    if not g.edges:
        raise NoPerfectMatching("graph has no edges")
    ints = _integer_weights(g)
    # Shift weights so that higher-cardinality matchings always dominate;
    # the maximum weight matching is then perfect whenever one exists.
    lo = min(ints)
    hi = max(ints)
    shift = (n // 2) * (hi - lo) - lo + 1
    eu = np.fromiter((e[0] for e in g.edges), np.int64, len(g.edges))
    ev = np.fromiter((e[1] for e in g.edges), np.int64, len(g.edges))
    w = np.fromiter((wi + shift for wi in ints), np.int64, len(g.edges))
    mate = solve_max_weight_matching(n, eu, ev, w)
    if int((mate >= 0).sum()) < n:
        raise NoPerfectMatching(f"no perfect matching on {n} vertices")
    pairs = _canonical_pairs([(v, int(mate[v])) for v in range(n) if v < mate[v]])
    return PerfectMatching(pairs, _total_weight(g, pairs))


def enumerate_perfect_matchings(g: WeightedGraph) -> Iterator[PerfectMatching]:
    """Yield every perfect matching exactly once (guard: <= 14 vertices)."""
    n = g.vertex_count
    if n > ENUMERATION_LIMIT:
        raise TooLarge(f"enumeration limited to {ENUMERATION_LIMIT} vertices")
    if n % 2 != 0:
        return
    adj: dict[int, dict[int, float]] = {v: {} for v in range(n)}
    for u, v, w in g.edges:
        adj[u][v] = w
        adj[v][u] = w

    def extend(unmatched: frozenset[int],
               picked: list[tuple[int, int]]) -> Iterator[list[tuple[int, int]]]:
        if not unmatched:
            yield list(picked)
            return
        u = min(unmatched)
        for v in sorted(adj[u]):
            if v in unmatched and v != u:
                picked.append((u, v))
                yield from extend(unmatched - {u, v}, picked)
                picked.pop()

    for pairs in extend(frozenset(range(n)), []):
        canon = _canonical_pairs(pairs)
        yield PerfectMatching(canon, _total_weight(g, canon))


def oracle_max_matching(g: WeightedGraph) -> PerfectMatching:
    """Reference optimum by enumeration; ties break on the smallest pair list."""
    if g.vertex_count % 2 != 0:
        raise DomainError("perfect matching requires an even vertex count")
    best: PerfectMatching | None = None
    for m in enumerate_perfect_matchings(g):
        if best is None or m.total_weight > best.total_weight or (
                m.total_weight == best.total_weight and m.pairs < best.pairs):
            best = m
    if best is None:
        raise NoPerfectMatching(
            f"no perfect matching on {g.vertex_count} vertices")
    return best
