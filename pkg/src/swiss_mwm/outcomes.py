"""Probabilistic match results and strength/Elo sampling for simulations.

The result model is a calibrated surrogate with three documented behaviors:
the white player has an advantage, draws become more frequent as the mean
strength of the pair rises, and outcome probabilities depend on absolute
strengths rather than only on the gap. Expected score follows an Elo-style
logistic curve with a white-advantage bonus that decays with mean strength;
the draw share is proportional to ``4*E*(1-E)``, which automatically fades
for lopsided pairs and keeps every probability nonnegative as long as the
draw coefficient stays below one half.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import CalibrationFailed, DomainError, EmptySupport
from .model import GameResult

STRENGTH_DOMAIN = (1000.0, 3000.0)

#: Published example probabilities the surrogate is calibrated against:
#: (white strength, black strength, P[white win], P[draw], P[black win]).
CALIBRATION_TARGETS = (
    (1200.0, 1400.0, 0.26, 0.17, 0.57),
    (2200.0, 2400.0, 0.14, 0.31, 0.55),
    (2400.0, 2200.0, 0.63, 0.26, 0.11),
)

_MAX_DRAW_COEFF = 0.49


@dataclass(frozen=True)
class OutcomeDistribution:
    p_white_win: float
    p_draw: float
    p_black_win: float

    def __post_init__(self) -> None:
        total = self.p_white_win + self.p_draw + self.p_black_win
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {total}, not 1")
        if min(self.p_white_win, self.p_draw, self.p_black_win) < 0:
            raise DomainError("probabilities must be nonnegative")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_white_win, self.p_draw, self.p_black_win)


@dataclass(frozen=True)
class OutcomeModelParams:
    """Shape parameters of the surrogate result model.

    white_advantage: Elo-point bonus for white at the bottom of the domain.
    adv_decay: exponential decay rate of that bonus over normalized strength.
    draw_base/draw_slope: draw coefficient versus normalized mean strength.
    gap_scale: Elo points per logistic unit; larger values soften how fast
        wins (and with them draws) react to the strength gap.
    """

    white_advantage: float
    adv_decay: float
    draw_base: float
    draw_slope: float
    gap_scale: float


# Fitted against CALIBRATION_TARGETS via ``calibrate``; regenerate with
# ``python -m swiss_mwm.outcomes``.
DEFAULT_OUTCOME_PARAMS = OutcomeModelParams(
    white_advantage=96.18472998981842,
    adv_decay=1.7832027596462197,
    draw_base=0.13500112190681166,
    draw_slope=0.35500186357728175,
    gap_scale=453.86383862010314,
)


def _normalized_mean(str_white: float, str_black: float) -> float:
    lo, hi = STRENGTH_DOMAIN
    return ((str_white + str_black) / 2 - lo) / (hi - lo)


def outcome_distribution(str_white: float, str_black: float,
                         params: OutcomeModelParams = DEFAULT_OUTCOME_PARAMS,
                         ) -> OutcomeDistribution:
    """Result distribution for a single game given true strengths."""
    lo, hi = STRENGTH_DOMAIN
    for s in (str_white, str_black):
        if not lo <= s <= hi:
            raise DomainError(f"strength {s} outside [{lo}, {hi}]")
    nm = _normalized_mean(str_white, str_black)
    adv = params.white_advantage * np.exp(-params.adv_decay * nm)
    expected = 1.0 / (1.0 + 10.0 ** (-(str_white - str_black + adv)
                                     / params.gap_scale))
    coeff = min(max(params.draw_base + params.draw_slope * nm, 0.0),
                _MAX_DRAW_COEFF)
    p_draw = coeff * 4.0 * expected * (1.0 - expected)
    p_white = expected - p_draw / 2
    p_black = 1.0 - expected - p_draw / 2
    # Exact by construction; the clamp only absorbs floating point dust.
    p_white = max(p_white, 0.0)
    p_black = max(p_black, 0.0)
    total = p_white + p_draw + p_black
    return OutcomeDistribution(p_white / total, p_draw / total,
                               p_black / total)


def calibrate(targets=CALIBRATION_TARGETS,
              residual_bound: float = 0.04) -> OutcomeModelParams:
    """Least-squares fit of the surrogate to the example probabilities.

    Deterministic for a fixed start point. Raises CalibrationFailed when any
    single probability misses its target by more than ``residual_bound``.
    """
    from scipy.optimize import least_squares

    def unpack(x) -> OutcomeModelParams:
        return OutcomeModelParams(
            white_advantage=x[0], adv_decay=x[1], draw_base=x[2],
            draw_slope=x[3], gap_scale=x[4])

    def residuals(x):
        p = unpack(x)
        res = []
        for sw, sb, tw, td, tb in targets:
            d = outcome_distribution(sw, sb, p)
            res.extend([d.p_white_win - tw, d.p_draw - td,
                        d.p_black_win - tb])
        # Keep the draw coefficient inside the provably-safe band.
        res.append(10.0 * max(0.0, x[2] + x[3] - _MAX_DRAW_COEFF))
        return res

    x0 = np.array([120.0, 2.5, 0.14, 0.34, 400.0])
    bounds = (np.array([0.0, 0.0, 0.01, 0.0, 200.0]),
              np.array([400.0, 6.0, 0.45, 0.45, 1200.0]))
    fit = least_squares(residuals, x0, bounds=bounds, method="trf")
    params = unpack(fit.x)
    worst = max(abs(r) for r in residuals(fit.x)[:-1])
    if worst > residual_bound:
        raise CalibrationFailed(
            f"worst residual {worst:.4f} exceeds {residual_bound}")
    return params


def sample_result(d: OutcomeDistribution,
                  rng: np.random.Generator) -> GameResult:
    u = rng.random()
    if u < d.p_white_win:
        return GameResult.WHITE_WIN
    if u < d.p_white_win + d.p_draw:
        return GameResult.DRAW
    return GameResult.BLACK_WIN


@dataclass(frozen=True)
class StrengthDistributionSpec:
    """How to draw true strengths: uniform, truncated exponential or normal,
    or uniform resampling from a user-supplied ratings file."""

    kind: str  # uniform | exponential | normal | empirical
    lo: float
    hi: float
    mean: float | None = None
    sd: float | None = None
    file: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in {"uniform", "exponential", "normal", "empirical"}:
            raise DomainError(f"unknown strength distribution {self.kind!r}")
        if not self.lo < self.hi:
            raise DomainError("lo must be below hi")
        if self.kind in {"exponential", "normal"}:
            if self.mean is None or not self.lo <= self.mean <= self.hi:
                raise DomainError("mean must lie within [lo, hi]")
        if self.kind == "normal" and (self.sd is None or self.sd <= 0):
            raise DomainError("normal distribution needs sd > 0")
        if self.kind == "empirical" and not self.file:
            raise DomainError("empirical distribution needs a file")

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "lo": self.lo, "hi": self.hi}
        if self.mean is not None:
            out["mean"] = self.mean
        if self.sd is not None:
            out["sd"] = self.sd
        if self.file is not None:
            out["file"] = self.file
        return out

    @classmethod
    def from_dict(cls, data: dict) -> StrengthDistributionSpec:
        return cls(kind=data["kind"], lo=float(data["lo"]),
                   hi=float(data["hi"]),
                   mean=float(data["mean"]) if "mean" in data else None,
                   sd=float(data["sd"]) if "sd" in data else None,
                   file=data.get("file"))


def load_strength_file(path: str | Path) -> list[float]:
    """One rating per line; '#' starts a comment."""
    values = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        text = line.split("#", 1)[0].strip()
        if text:
            values.append(float(text))
    return values


def sample_strengths(spec: StrengthDistributionSpec, n: int,
                     rng: np.random.Generator) -> list[float]:
    """n independent strength draws inside [lo, hi] (rejection sampling)."""
    if n < 2:
        raise DomainError("need at least two players")
    lo, hi = spec.lo, spec.hi
    if spec.kind == "uniform":
        return list(rng.uniform(lo, hi, size=n))
    if spec.kind == "empirical":
        values = [v for v in load_strength_file(spec.file) if lo <= v <= hi]
        if not values:
            raise EmptySupport(
                f"no ratings within [{lo}, {hi}] in {spec.file}")
        return [values[i] for i in rng.integers(0, len(values), size=n)]
    out: list[float] = []
    while len(out) < n:
        chunk = max(n - len(out), 16)
        if spec.kind == "normal":
            draws = rng.normal(spec.mean, spec.sd, size=chunk)
        elif spec.mean >= (lo + hi) / 2:
            # decay away from the top: many strong players
            draws = hi - rng.exponential(hi - spec.mean, size=chunk)
        else:
            # decay away from the bottom: many weak players
            draws = lo + rng.exponential(spec.mean - lo, size=chunk)
        out.extend(float(x) for x in draws if lo <= x <= hi)
    return out[:n]


def sample_elo(strength: float, rng: np.random.Generator) -> int:
    """Noisy Elo observation: Normal(strength, (3000 - strength) / 20)."""
    if strength > 3000:
        raise DomainError("strength must not exceed 3000")
    sd = (3000.0 - strength) / 20.0
    if sd <= 0:
        return round(strength)
    return round(rng.normal(strength, sd))


if __name__ == "__main__":
    fitted = calibrate()
    print("fitted parameters:")
    for name in ("white_advantage", "adv_decay", "draw_base", "draw_slope",
                 "gap_scale"):
        print(f"  {name}={getattr(fitted, name)!r}")
    for sw, sb, *target in CALIBRATION_TARGETS:
        d = outcome_distribution(sw, sb, fitted)
        print(f"  {sw:.0f} (w) vs {sb:.0f} (b): "
              f"got {d.p_white_win:.3f}/{d.p_draw:.3f}/{d.p_black_win:.3f}"
              f" target {target[0]:.2f}/{target[1]:.2f}/{target[2]:.2f}")
