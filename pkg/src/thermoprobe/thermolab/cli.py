"""``thermoprobe`` command line: ``sweep``, ``figure`` and ``selftest``.

Exit codes: 0 success, 1 invalid input (or a failed self-test), 2 numerical
failure such as a non-converging eigensolver.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from ..errors import NumericalError, ThermoprobeError, ValidationError
from ..metrology import SUPPORT_CUTOFF
from ..sensor import SensorParams
from ..teleport import InputState
from .export import FORMATS, export, format_from_path, to_csv, to_json, to_svg
from .scenario import PRESETS, SCENARIOS, VARY_FIELDS, ScenarioSpec, TGrid, Vary, figure_preset
from .sweep import run_sweep

CUTOFF_ENV = "THERMOPROBE_CUTOFF"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def env_cutoff() -> float:
    raw = os.environ.get(CUTOFF_ENV)
    if raw is None or raw == "":
        return SUPPORT_CUTOFF
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"{CUTOFF_ENV}={raw!r} is not a number") from None
    if not value > 0:
        raise ValidationError(f"{CUTOFF_ENV} must be positive")
    return value


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="thermoprobe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="run a temperature sweep from flags or a JSON spec")
    sw.add_argument("--spec", help="JSON file mirroring the ScenarioSpec fields")
    sw.add_argument("--scenario", choices=SCENARIOS, default="both")
    sw.add_argument("--ej1", type=float)
    sw.add_argument("--ej2", type=float)
    sw.add_argument("--em", type=float)
    sw.add_argument("--ec1", type=float, default=1.0)
    sw.add_argument("--ec2", type=float, default=1.0)
    sw.add_argument("--theta", type=float)
    sw.add_argument("--phi", type=float)
    sw.add_argument("--tmin", type=float, default=0.05)
    sw.add_argument("--tmax", type=float, default=5.0)
    sw.add_argument("--points", type=int, default=200)
    sw.add_argument("--log", action="store_true", help="logarithmic temperature spacing")
    sw.add_argument("--vary", choices=VARY_FIELDS)
    sw.add_argument("--values", type=_float_list)
    sw.add_argument("--reduced", action="store_true", help="direct scenario on qubit 1 only")
    sw.add_argument("--out", help="output path (stdout when omitted)")
    sw.add_argument("--format", choices=FORMATS)

    fig = sub.add_parser("figure", help="run a figure preset")
    fig.add_argument("name", choices=sorted(PRESETS))
    fig.add_argument("--out", help="output path (stdout when omitted)")
    fig.add_argument("--format", choices=FORMATS)

    sub.add_parser("selftest", help="run the acceptance checks")
    return parser


def _spec_from_flags(args) -> ScenarioSpec:
    missing = [name for name in ("ej1", "ej2", "em") if getattr(args, name) is None]
    if args.scenario != "direct":
        missing += [name for name in ("theta", "phi") if getattr(args, name) is None]
    if missing:
        raise ValidationError("missing required options: " + ", ".join("--" + m for m in missing))
    if (args.vary is None) != (args.values is None):
        raise ValidationError("--vary and --values must be given together")
    inp = None
    if args.theta is not None and args.phi is not None:
        inp = InputState(args.theta, args.phi)
    return ScenarioSpec(
        scenario=args.scenario,
        params=SensorParams(ej1=args.ej1, ej2=args.ej2, em=args.em, ec1=args.ec1, ec2=args.ec2),
        input=inp,
        t_grid=TGrid(args.tmin, args.tmax, args.points, "log" if args.log else "linear"),
        vary=None if args.vary is None else Vary(args.vary, tuple(args.values)),
        reduced=args.reduced,
    )


def _emit(result, out: Optional[str], fmt: Optional[str]) -> None:
    fmt = fmt or (format_from_path(out) if out else "csv")
    if out:
        export(result, fmt, out)
    else:
        sys.stdout.write({"csv": to_csv, "json": to_json, "svg": to_svg}[fmt](result))


def _selftest() -> int:
    from .checks import CHECKS, run_check

    failed = 0
    for number, *_ in CHECKS:
        res = run_check(number)
        print(res.line(), flush=True)
        failed += not res.ok
    print(f"{len(CHECKS) - failed}/{len(CHECKS)} checks passed")
    return 0 if failed == 0 else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "selftest":
            return _selftest()
        if args.command == "figure":
            spec = figure_preset(args.name)
        elif args.spec:
            spec = ScenarioSpec.from_json(args.spec)
            if args.reduced:
                spec = spec.replace(reduced=True)
        else:
            spec = _spec_from_flags(args)
        result = run_sweep(spec, cutoff=env_cutoff())
        _emit(result, args.out, args.format)
    except NumericalError as exc:
        print(f"thermoprobe: numerical error: {exc}", file=sys.stderr)
        return 2
    except (ThermoprobeError, OSError) as exc:
        print(f"thermoprobe: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
