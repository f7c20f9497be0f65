"""Command-line front end.

One subcommand per experiment artifact: ``classify`` (homotopy class of a
closed rotation path, three independent methods), ``phase`` (circuit-level
topological phase), ``interferogram`` (phase sweep CSV at circuit or pulse
level), ``nmr`` (full pulse pipeline, spectrum CSV plus readout JSON) and
``oracle`` (randomized cross-check of the classifiers).

Exit codes: 0 success, 1 physics or validation failure, 2 usage error,
3 I/O error.  Reports go to stdout as JSON with numbers rendered to 15
significant digits; CSV artifacts are byte-reproducible for identical
arguments and seed.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import interferometer, mes, nmr, so3, trajectories
from .errors import PhysicsError, SchemaError, TangentialTouchError


def _round_floats(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (float, np.floating)):
        return float(f"{float(obj):.15g}")
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(document: dict) -> None:
    print(json.dumps(_round_floats(document), indent=2))


def _load_trajectory(args) -> trajectories.Trajectory:
    if getattr(args, "trajectory", None) is not None:
        with open(args.trajectory, encoding="utf-8") as fh:
            return trajectories.load_trajectory(fh.read())
    return trajectories.catalog(args.class_label)


def _load_config(args) -> nmr.ExperimentConfig:
    if getattr(args, "config", None) is None:
        return nmr.ExperimentConfig()
    with open(args.config, encoding="utf-8") as fh:
        return nmr.config_from_json(fh.read())


def _manifest(command: str, parameters: dict, outputs: list, seed: int) -> dict:
    return {"command": command, "parameters": parameters,
            "outputs": list(outputs), "seed": int(seed)}


def cmd_classify(args) -> int:
    traj = _load_trajectory(args)
    path = trajectories.sample(traj, step=args.step)
    crossings = so3.count_surface_crossings(path)
    lift = so3.lift_sign(path)
    parity = 1 if crossings % 2 == 0 else -1
    gate = mes.trajectory_phase(traj)
    agreement = lift == parity == gate
    _emit({
        "name": traj.name,
        "class": "+" if lift > 0 else "-",
        "crossings": crossings,
        "lift_sign": lift,
        "crossing_parity": parity,
        "gate_sign": gate,
        "agreement": agreement,
        "step": args.step,
    })
    return 0 if agreement else 1


def cmd_phase(args) -> int:
    traj = _load_trajectory(args)
    phase = mes.trajectory_phase(traj)
    _emit({"name": traj.name, "phase": phase,
           "class": "+" if phase > 0 else "-"})
    return 0


def cmd_interferogram(args) -> int:
    traj = _load_trajectory(args)
    phis = interferometer.phi_grid(args.phi_steps)
    if args.level == "circuit":
        rows = interferometer.interferogram(traj, phis)
    else:
        rows = nmr.pulse_interferogram(traj, phis, config=_load_config(args))
    interferometer.write_interferogram_csv(rows, args.out)
    _emit(_manifest(
        "interferogram",
        {"trajectory": args.trajectory, "class": args.class_label,
         "phi_steps": args.phi_steps, "level": args.level,
         "step": None, "config": args.config},
        [args.out], args.seed))
    return 0


def cmd_nmr(args) -> int:
    traj = _load_trajectory(args)
    choice = args.class_label if args.trajectory is None else traj
    run = nmr.run_nmr_experiment(choice, args.phi, config=_load_config(args))
    nmr.write_spectrum_csv(run.spectrum, args.out)
    _emit({
        "integral_normalized": run.integral,
        "class_readout": run.class_readout,
        "splitting_hz": run.splitting_hz,
        "lines": [list(line) for line in run.lines],
        "raw_integral": run.raw_integral,
        "reference_magnitude": run.reference_magnitude,
        "phase0_rad": run.phase0,
        "band_hz": list(run.band),
        "phi": args.phi,
        "manifest": _manifest(
            "nmr",
            {"trajectory": args.trajectory, "class": args.class_label,
             "phi": args.phi, "config": args.config},
            [args.out], args.seed),
    })
    return 0


def cmd_oracle(args) -> int:
    if args.trials < 1:
        raise PhysicsError(f"trials {args.trials!r} must be at least 1")
    agree = disagree = resampled = 0
    for trial in range(args.trials):
        attempt = 0
        while True:
            key = [args.seed, trial, attempt]
            n_waypoints = int(np.random.default_rng(key).integers(1, 7))
            traj = trajectories.random_trajectory(key, n_waypoints=n_waypoints)
            try:
                path = trajectories.sample(traj, step=args.step)
                crossings = so3.count_surface_crossings(path)
            except TangentialTouchError:
                # a waypoint landed the path flat on the ball surface;
                # crossing counting is undefined there, so redraw
                attempt += 1
                resampled += 1
                continue
            break
        lift = so3.lift_sign(path)
        parity = 1 if crossings % 2 == 0 else -1
        gate = mes.trajectory_phase(traj)
        if lift == parity == gate:
            agree += 1
        else:
            disagree += 1
    _emit({"trials": args.trials, "agreement": agree,
           "disagreement": disagree, "resampled": resampled,
           "seed": args.seed, "step": args.step})
    return 0 if disagree == 0 else 1


def _add_trajectory_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--trajectory", metavar="PATH",
                       help="trajectory JSON file")
    group.add_argument("--class", dest="class_label", metavar="+|-",
                       help='builtin benchmark trajectory "+" or "-"')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topophase",
        description="Topological phase of an entangled spin pair: "
                    "classification, interferograms and the NMR pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify",
                       help="homotopy class by lift sign, surface crossings "
                            "and the gate product")
    _add_trajectory_options(p)
    p.add_argument("--step", type=float, default=0.005, metavar="RAD",
                   help="path sampling step (default 0.005)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("phase", help="circuit-level topological phase")
    _add_trajectory_options(p)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("interferogram",
                       help="phase-sweep CSV at circuit or pulse level")
    _add_trajectory_options(p)
    p.add_argument("--phi-steps", type=int, default=24, metavar="N",
                   help="number of phase points on [0, 2*pi) (default 24)")
    p.add_argument("--level", choices=("circuit", "pulse"), default="circuit",
                   help="simulation level (default circuit)")
    p.add_argument("--config", metavar="PATH",
                   help="experiment config JSON (pulse level)")
    p.add_argument("--out", required=True, metavar="PATH",
                   help="output CSV path")
    p.add_argument("--seed", type=int, default=0, metavar="N",
                   help="manifest seed (default 0)")
    p.set_defaults(func=cmd_interferogram)

    p = sub.add_parser("nmr",
                       help="pulse pipeline: spectrum CSV plus readout JSON")
    _add_trajectory_options(p)
    p.add_argument("--phi", type=float, default=0.0, metavar="RAD",
                   help="ancilla phase-gate angle (default 0)")
    p.add_argument("--config", metavar="PATH",
                   help="experiment config JSON")
    p.add_argument("--out", required=True, metavar="PATH",
                   help="output spectrum CSV path")
    p.add_argument("--seed", type=int, default=0, metavar="N",
                   help="manifest seed (default 0)")
    p.set_defaults(func=cmd_nmr)

    p = sub.add_parser("oracle",
                       help="randomized agreement check of the three "
                            "classification methods")
    p.add_argument("--trials", type=int, default=1000, metavar="N",
                   help="number of random closed paths (default 1000)")
    p.add_argument("--seed", type=int, default=0, metavar="N",
                   help="base RNG seed (default 0)")
    p.add_argument("--step", type=float, default=0.005, metavar="RAD",
                   help="path sampling step (default 0.005)")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PhysicsError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
