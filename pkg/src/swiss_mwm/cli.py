"""Command-line entry point: simulations, one-shot pairing, the replay
study, and the live-tournament service.

Exit codes: 0 ok, 1 usage error, 2 domain error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SwissError
from .model import (
    ALL_SYSTEMS,
    PairingSystem,
    load_tournament,
    tournament_to_dict,
)
from .outcomes import StrengthDistributionSpec
from .pairing import Pairing, compute_pairing
from .simulate import (
    ExperimentConfig,
    run_correlation_study,
    run_experiment,
    summarize,
    write_csv,
    write_study_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2


def parse_dist(text: str) -> StrengthDistributionSpec:
    """uniform:LO:HI | exp:LO:HI:MEAN | normal:LO:HI:MEAN:SD | file:PATH:LO:HI"""
    parts = text.split(":")
    kind = parts[0].lower()
    try:
        if kind == "uniform" and len(parts) == 3:
            return StrengthDistributionSpec("uniform", float(parts[1]),
                                            float(parts[2]))
        if kind in ("exp", "exponential") and len(parts) == 4:
            return StrengthDistributionSpec("exponential", float(parts[1]),
                                            float(parts[2]),
                                            mean=float(parts[3]))
        if kind == "normal" and len(parts) == 5:
            return StrengthDistributionSpec("normal", float(parts[1]),
                                            float(parts[2]),
                                            mean=float(parts[3]),
                                            sd=float(parts[4]))
        if kind == "file" and len(parts) == 4:
            return StrengthDistributionSpec("empirical", float(parts[2]),
                                            float(parts[3]), file=parts[1])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad distribution {text!r}: {exc}")
    raise argparse.ArgumentTypeError(
        f"bad distribution {text!r}; expected uniform:LO:HI, exp:LO:HI:MEAN, "
        "normal:LO:HI:MEAN:SD or file:PATH:LO:HI")


def parse_systems(text: str) -> tuple[PairingSystem, ...]:
    if text.strip().lower() == "all":
        return ALL_SYSTEMS
    out = []
    for name in text.split(","):
        try:
            out.append(PairingSystem(name.strip().lower()))
        except ValueError:
            raise argparse.ArgumentTypeError(f"unknown system {name!r}")
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swiss-mwm",
        description="Swiss-system pairing via maximum weight matching: "
                    "simulation campaigns, one-shot pairings, and a live "
                    "tournament service.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte-Carlo campaign")
    sim.add_argument("--players", type=int, required=True)
    sim.add_argument("--rounds", type=int, required=True)
    sim.add_argument("--beta", type=float, default=2.0)
    sim.add_argument("--dist", type=parse_dist,
                     default=parse_dist("uniform:1400:2200"),
                     help="uniform:LO:HI | exp:LO:HI:MEAN | "
                          "normal:LO:HI:MEAN:SD | file:PATH:LO:HI")
    sim.add_argument("--systems", type=parse_systems, default=ALL_SYSTEMS,
                     help="comma list of dutch,burstein,monrad,random,"
                          "random2 or 'all'")
    sim.add_argument("--samples", type=int, default=2000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", type=Path, required=True,
                     help="CSV path for the raw sample table")
    sim.add_argument("--config", type=Path, default=None,
                     help="read the experiment configuration from a JSON "
                          "file instead of flags")
    sim.add_argument("--workers", type=int, default=None)

    pair = sub.add_parser("pair", help="compute the next round's pairing")
    pair.add_argument("--state", type=Path, required=True,
                      help="tournament JSON document")
    pair.add_argument("--system", type=str, default=None,
                      help="override the file's pairing system")
    pair.add_argument("--beta", type=float, default=None,
                      help="override the file's color bound")
    pair.add_argument("--seed", type=int, default=0)
    pair.add_argument("--commit", action="store_true",
                      help="write the pairing back into the file under "
                           "'pendingPairing'")

    study = sub.add_parser("study",
                           help="replay-first-round correlation study")
    study.add_argument("--players", type=int, default=32)
    study.add_argument("--rounds", type=int, default=7)
    study.add_argument("--beta", type=float, default=2.0)
    study.add_argument("--dist", type=parse_dist,
                       default=parse_dist("uniform:1400:2200"))
    study.add_argument("--system", type=str, default="dutch")
    study.add_argument("--outer", type=int, default=1000)
    study.add_argument("--inner", type=int, default=1000)
    study.add_argument("--seed", type=int, default=0)
    study.add_argument("--out", type=Path, required=True)
    study.add_argument("--workers", type=int, default=None)

    serve = sub.add_parser("serve", help="start the live-tournament service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", type=str, default="127.0.0.1")
    serve.add_argument("--data-dir", type=Path, default=Path("tournaments"))
    serve.add_argument("--static", type=Path, default=None,
                       help="directory with the built web console "
                            "(default: ./frontend/dist when present)")
    return parser


def cmd_simulate(args) -> int:
    if args.config is not None:
        config = ExperimentConfig.from_dict(
            json.loads(args.config.read_text(encoding="utf-8")))
    else:
        if args.players % 2 != 0:
            print(f"error: --players must be even, got {args.players}",
                  file=sys.stderr)
            return EXIT_USAGE
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", RuntimeWarning)
            config = ExperimentConfig(
                players=args.players, rounds=args.rounds,
                systems=args.systems, beta=args.beta,
                strength_spec=args.dist, samples=args.samples,
                master_seed=args.seed)
        for warning in caught:
            print(f"warning: {warning.message}", file=sys.stderr)
    table = run_experiment(config, workers=args.workers)
    write_csv(table, args.out)
    stats = summarize(table)
    print(f"wrote {len(table.rows)} rows to {args.out}")
    for system, metrics in stats.items():
        tau = metrics["kendall_tau"]
        floats = metrics["float_pairs"]
        print(f"{system:9s} tau={tau['mean']:.4f} "
              f"[{tau['ci_lo']:.4f},{tau['ci_hi']:.4f}]  "
              f"floats={floats['mean']:.2f} "
              f"[{floats['ci_lo']:.2f},{floats['ci_hi']:.2f}]")
    return EXIT_OK


def _pairing_json(pairing: Pairing) -> dict:
    return {
        "round": pairing.round,
        "boards": [{"white": w, "black": b,
                    "float": i in pairing.floats}
                   for i, (w, b) in enumerate(pairing.boards)],
        "bye": pairing.bye,
        "fallbackUsed": pairing.fallback_used,
    }


def cmd_pair(args) -> int:
    state, name = load_tournament(args.state)
    system = PairingSystem(args.system.lower()) if args.system else None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        pairing = compute_pairing(
            state, np.random.default_rng(
                (args.seed & 0xFFFFFFFFFFFFFFFF, state.rounds_played + 1)),
            system=system, beta=args.beta)
    for warning in caught:
        print(f"warning: {warning.message}", file=sys.stderr)
    title = name or args.state.stem
    print(f"{title}: round {pairing.round}")
    for i, (white, black) in enumerate(pairing.boards, start=1):
        mark = "  (float)" if (i - 1) in pairing.floats else ""
        print(f"  board {i}: {white} (white) vs {black} (black){mark}")
    if pairing.bye is not None:
        print(f"  bye: {pairing.bye}")
    if pairing.fallback_used:
        print("  note: color condition relaxed for this round")
    print(json.dumps(_pairing_json(pairing), indent=2))
    if args.commit:
        doc = tournament_to_dict(state, name)
        doc["pendingPairing"] = _pairing_json(pairing)
        args.state.write_text(json.dumps(doc, indent=2) + "\n",
                              encoding="utf-8")
        print(f"pending pairing written to {args.state}", file=sys.stderr)
    return EXIT_OK


def cmd_study(args) -> int:
    config = ExperimentConfig(
        players=args.players, rounds=args.rounds,
        systems=(PairingSystem(args.system.lower()),), beta=args.beta,
        strength_spec=args.dist, samples=1, master_seed=args.seed,
        mode="replay_first_round", outer_tournaments=args.outer,
        inner_replays=args.inner)
    rows = run_correlation_study(config, workers=args.workers)
    write_study_csv(rows, args.out)
    usable = [r.pearson for r in rows if not r.flagged]
    print(f"wrote {len(rows)} rows to {args.out} "
          f"({len(rows) - len(usable)} flagged)")
    if usable:
        negative = sum(1 for c in usable if c < 0)
        print(f"negative coefficients: {negative}/{len(usable)} "
              f"({100 * negative / len(usable):.1f}%)")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    static = args.static
    if static is None:
        candidate = Path("frontend") / "dist"
        static = candidate if candidate.is_dir() else None
    app = create_app(args.data_dir, static_dir=static)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn raises on bind failure
        return int(exc.code or 1)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "simulate": cmd_simulate,
        "pair": cmd_pair,
        "study": cmd_study,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except SwissError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
