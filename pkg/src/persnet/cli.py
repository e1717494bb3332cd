"""Command-line front end.

    persnet run      --input prices.csv --kind prices --out outdir
    persnet diagram  --input dist.csv --kind distance-matrix --out d.json
    persnet distance a.json b.json --degree 2 --dim 0
    persnet synth    --out prices.csv --seed 0

Exit status is 0 on success, 1 on data errors and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .complex import build_flag_complex
from .graph import SubLevel, SuperLevel, apply_direction, from_distance_matrix, from_point_cloud
from .io import (
    diagram_to_json,
    emit_diagram,
    emit_series,
    fmt,
    ingest_prices,
    load_diagram,
    read_distance_matrix,
    read_point_cloud,
    write_prices,
)
from .market import PipelineConfig, run_pipeline, synthetic_regime_shift
from .metrics import MetricConfig, bottleneck, wasserstein
from .persistence import compute_persistence

log = logging.getLogger("persnet")

KINDS = ("prices", "distance-matrix", "point-cloud")


@dataclass(frozen=True)
class RunManifest:
    input: str
    kind: str
    out: str
    config: dict
    seed: int | None = None


def _degree(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"degree must be positive, got {text!r}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persnet", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def filtration_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--direction", choices=("sub", "super"), default="sub")
        p.add_argument("--theta-max", type=float, default=None,
                       help="top of the super-level range (default 2, or the largest weight for point clouds)")
        p.add_argument("--max-dim", type=_positive_int, default=2)

    run = sub.add_parser("run", help="full pipeline on a price panel")
    run.add_argument("--input", required=True)
    run.add_argument("--kind", choices=KINDS, default="prices")
    run.add_argument("--window", type=_positive_int, default=15)
    run.add_argument("--stride", type=_positive_int, default=10)
    filtration_flags(run)
    run.add_argument("--degree", type=_degree, default=2.0)
    run.add_argument("--inf-cap", type=float, default=2.0)
    run.add_argument("--reference", type=int, default=0)
    run.add_argument("--workers", type=_positive_int, default=1)
    run.add_argument("--out", required=True)
    run.add_argument("--seed", type=int, default=None)

    diagram = sub.add_parser("diagram", help="one diagram from a distance matrix or point cloud")
    diagram.add_argument("--input", required=True)
    diagram.add_argument("--kind", choices=KINDS, default="distance-matrix")
    filtration_flags(diagram)
    diagram.add_argument("--inf-cap", type=float, default=None, help="stored as inf_cap_hint")
    diagram.add_argument("--out", default=None, help="JSON path (default: stdout)")

    distance = sub.add_parser("distance", help="Wasserstein or bottleneck distance between two diagram files")
    distance.add_argument("diagrams", nargs=2)
    distance.add_argument("--degree", type=_degree, default=2.0, help="'inf' for bottleneck")
    distance.add_argument("--dim", type=int, default=0)
    distance.add_argument("--inf-cap", type=float, default=2.0)

    synth = sub.add_parser("synth", help="seeded regime-shift price panel")
    synth.add_argument("--out", required=True)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--assets", type=_positive_int, default=30)
    synth.add_argument("--days", type=_positive_int, default=600)
    return parser


def _direction(args, max_weight: float | None = None):
    if args.direction == "sub":
        return SubLevel()
    top = args.theta_max
    if top is None:
        top = 2.0 if max_weight is None else math.ceil(max_weight)
    return SuperLevel(top)


def _cmd_run(args, parser) -> int:
    if args.kind != "prices":
        parser.error("run needs --kind prices; use 'diagram' for distance matrices and point clouds")
    cfg = PipelineConfig(
        horizon=args.window,
        stride=args.stride,
        direction=_direction(args),
        max_dim=args.max_dim,
        p=args.degree,
        inf_cap=args.inf_cap,
        reference_index=args.reference,
    )
    panel = ingest_prices(args.input)
    series = run_pipeline(panel, cfg, workers=args.workers)
    out = Path(args.out)
    (out / "diagrams").mkdir(parents=True, exist_ok=True)
    emit_series(series, out / "series.csv")
    for day, d in zip(series.sample_dates, series.diagrams):
        emit_diagram(d, out / "diagrams" / f"{day.isoformat()}.json", cfg.inf_cap)
    config = asdict(cfg)
    config["direction"] = {"kind": args.direction, **config["direction"]}
    manifest = RunManifest(args.input, args.kind, args.out, config, args.seed)
    (out / "manifest.json").write_text(json.dumps(asdict(manifest), indent=2, sort_keys=True) + "\n")
    log.info("%d samples written to %s", len(series.sample_dates), out)
    return 0


def _cmd_diagram(args, parser) -> int:
    if args.kind == "distance-matrix":
        m, labels = read_distance_matrix(args.input)
        g = from_distance_matrix(m, labels)
    elif args.kind == "point-cloud":
        g = from_point_cloud(read_point_cloud(args.input))
    else:
        parser.error("diagram needs --kind distance-matrix or point-cloud; use 'run' for prices")
    g = apply_direction(g, _direction(args, g.max_weight if args.kind == "point-cloud" else None))
    d = compute_persistence(build_flag_complex(g, args.max_dim))
    if args.out:
        emit_diagram(d, args.out, args.inf_cap)
    else:
        print(json.dumps(diagram_to_json(d, args.inf_cap)))
    return 0


def _cmd_distance(args, parser) -> int:
    a, b = (load_diagram(p) for p in args.diagrams)
    cfg = MetricConfig(args.degree, args.inf_cap)
    fn = bottleneck if math.isinf(args.degree) else wasserstein
    print(fmt(fn(a, b, args.dim, cfg)))
    return 0


def _cmd_synth(args, parser) -> int:
    if args.days < 3:
        parser.error("--days must be at least 3")
    panel = synthetic_regime_shift(n_assets=args.assets, n_days=args.days, seed=args.seed)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_prices(panel, args.out)
    return 0


COMMANDS = {"run": _cmd_run, "diagram": _cmd_diagram, "distance": _cmd_distance, "synth": _cmd_synth}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args, parser)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"persnet: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
