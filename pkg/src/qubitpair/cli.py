"""Command-line front end.

Subcommands: ``single``, ``pair``, ``sweep``, ``verify``, ``compare``.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
Angles are radians unless ``--degrees`` is given.  ``QUBITPAIR_TOL`` in the
environment overrides the default ``--tol``.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .errors import DomainError, InvariantError
from .pair import (
    CorrelationSign,
    RatioParams,
    correlation_probs,
    local_probs,
    make_pair,
    visibilities_pair,
)
from .qubit import (
    ALGEBRAIC_TOL,
    SWEEP_TOL,
    TAU,
    BasisFrame,
    BlochDirection,
    components_in_frame,
    outcome_probs_single,
    visibility_single,
)
from .verify import run_verification

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
TOL_ENV = "QUBITPAIR_TOL"

PARAMS = ("p2", "chi", "alpha", "theta", "phi", "delta")
ANGLE_PARAMS = frozenset(PARAMS) - {"p2"}
DOMAINS = {
    "p2": (0.0, 1.0),
    "chi": (0.0, math.pi),
    "theta": (0.0, math.pi),
    "alpha": (0.0, TAU),
    "phi": (0.0, TAU),
    "delta": (0.0, TAU),
}
DEFAULTS = {"p2": 0.5, "chi": math.pi / 2, "alpha": 0.0, "theta": 0.0, "phi": 0.0, "delta": 0.0}
RESULT_COLUMNS = (
    "epsilon", "sigma", "p_ee", "p_eb", "p_be", "p_bb", "p_plus", "p_minus",
    "p_e_local", "p_ebar_local", "v_plus", "v_minus",
    "p_e_single", "p_ebar_single", "v_e_single", "v_ebar_single",
)
PLUS_SWEEP_POINTS = 64
_DOMAIN_SLACK = 1e-12


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    endpoint: bool = True

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count, endpoint=self.endpoint)


@dataclass
class SweepSpec:
    axes: list[Axis]
    fixed: dict[str, float] = field(default_factory=dict)
    sign: CorrelationSign = CorrelationSign.MINUS
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if not 1 <= len(self.axes) <= 3:
            raise UsageError("sweep needs between 1 and 3 axes")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise UsageError(f"duplicate sweep axis in {names}")
        for ax in self.axes:
            if ax.name not in DOMAINS:
                raise UsageError(f"unknown sweep parameter {ax.name!r}; choose from {', '.join(PARAMS)}")
            if ax.count < 2:
                raise UsageError(f"axis {ax.name} needs count >= 2")
            lo, hi = DOMAINS[ax.name]
            for v in (ax.start, ax.stop):
                if not (math.isfinite(v) and lo - _DOMAIN_SLACK <= v <= hi + _DOMAIN_SLACK):
                    raise UsageError(f"axis {ax.name}: {v!r} outside [{lo}, {hi}]")
        if self.fmt not in ("csv", "json"):
            raise UsageError(f"unknown format {self.fmt!r}")

    @property
    def row_count(self) -> int:
        return math.prod(a.count for a in self.axes)

    def grid(self):
        """Parameter dicts in lexicographic grid-index order (first axis slowest)."""
        values = [ax.values() for ax in self.axes]
        for combo in itertools.product(*values):
            point = dict(DEFAULTS)
            point.update(self.fixed)
            point.update({ax.name: float(v) for ax, v in zip(self.axes, combo)})
            yield point


def _clip(name: str, value: float) -> float:
    # absorb rounding at the domain edges only; real violations still raise downstream
    lo, hi = DOMAINS[name]
    if lo - _DOMAIN_SLACK <= value < lo:
        return lo
    if hi < value <= hi + _DOMAIN_SLACK:
        return hi
    return value


def pair_record(p2: float, chi: float, alpha: float, sign: CorrelationSign) -> dict[str, float]:
    """Every pair quantity at one parameter point, frames at delta = 0.

    The (+) pair's visibilities come from an oracle alpha sweep; the (-) pair
    uses the closed forms.
    """
    frame = BasisFrame(chi)
    params = RatioParams.of(make_pair(p2), frame)
    joint = correlation_probs(params, alpha, sign)
    p_e, p_ebar = local_probs(params)
    if sign is CorrelationSign.MINUS:
        v_plus, v_minus = visibilities_pair(params)
    else:
        rows = np.array([
            correlation_probs(params, float(a), sign).as_tuple() for a in oracle.alpha_grid(PLUS_SWEEP_POINTS)
        ])
        v_plus = oracle.fringe_contrast(rows[:, 0] + rows[:, 3])
        v_minus = oracle.fringe_contrast(rows[:, 1] + rows[:, 2])
    return {
        "epsilon": params.epsilon,
        "sigma": params.sigma,
        "p_ee": joint.p_ee,
        "p_eb": joint.p_eb,
        "p_be": joint.p_be,
        "p_bb": joint.p_bb,
        "p_plus": joint.p_plus,
        "p_minus": joint.p_minus,
        "p_e_local": p_e,
        "p_ebar_local": p_ebar,
        "v_plus": v_plus,
        "v_minus": v_minus,
    }


def single_record(theta: float, phi: float, chi: float, delta: float) -> dict[str, float]:
    direction = BlochDirection(theta, phi)
    frame = BasisFrame(chi, delta)
    p_e, p_ebar = outcome_probs_single(direction, frame)
    v_e, v_ebar = visibility_single(direction.theta, frame.chi)
    u, v = components_in_frame(direction, frame)
    return {
        "p_e": p_e, "p_ebar": p_ebar, "v_e": v_e, "v_ebar": v_ebar,
        "u_re": u.real, "u_im": u.imag, "v_re": v.real, "v_im": v.imag,
    }


def sweep_rows(spec: SweepSpec) -> list[dict[str, float]]:
    rows = []
    for point in spec.grid():
        point = {k: _clip(k, v) for k, v in point.items()}
        row = dict(point)
        row.update(pair_record(point["p2"], point["chi"], point["alpha"], spec.sign))
        single = single_record(point["theta"], point["phi"], point["chi"], point["delta"])
        row.update({
            "p_e_single": single["p_e"], "p_ebar_single": single["p_ebar"],
            "v_e_single": single["v_e"], "v_ebar_single": single["v_ebar"],
        })
        rows.append(row)
    return rows


def fmt_number(x: float) -> str:
    """12 significant digits; ``inf`` for the infinite-ratio sentinel."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x) + 0.0, ".12g")


def render_csv(rows: list[dict[str, float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    columns = list(PARAMS) + list(RESULT_COLUMNS)
    writer.writerow(columns)
    for row in rows:
        writer.writerow(fmt_number(row[c]) for c in columns)
    return buf.getvalue()


def _json_value(x: float):
    return fmt_number(x) if math.isinf(x) else float(fmt_number(x))


def render_json(rows: list[dict[str, float]]) -> str:
    columns = list(PARAMS) + list(RESULT_COLUMNS)
    data = [{c: _json_value(row[c]) for c in columns} for row in rows]
    return json.dumps(data, indent=1) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _print_record(record: dict, as_json: bool):
    if as_json:
        print(json.dumps({k: _json_value(v) if isinstance(v, float) else v for k, v in record.items()}, indent=1))
        return
    width = max(map(len, record))
    for key, value in record.items():
        shown = fmt_number(value) if isinstance(value, float) else value
        print(f"{key:<{width}}  {shown}")


# ---- subcommands ------------------------------------------------------------

def cmd_single(args) -> int:
    _print_record(single_record(args.theta, args.phi, args.chi, args.delta), args.json)
    return EXIT_OK


def cmd_pair(args) -> int:
    record = pair_record(args.p2, args.chi, args.alpha, CorrelationSign(args.sign))
    _print_record(record, args.json)
    return EXIT_OK


def cmd_sweep(args) -> int:
    fixed = {name: getattr(args, name) for name in PARAMS}
    axes = [_parse_axis(text, args.degrees) for text in args.axis]
    spec = SweepSpec(axes, fixed, CorrelationSign(args.sign), args.out, args.format)
    rows = sweep_rows(spec)
    _emit(render_csv(rows) if spec.fmt == "csv" else render_json(rows), spec.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = run_verification(args.samples, args.seed, args.tol)
    if args.json:
        text = json.dumps(report.to_dict(), indent=1) + "\n"
    else:
        text = report.to_text() + "\n"
    _emit(text, args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def compare_report(p2: float, chi: float, grid_points: int = 256) -> dict:
    """Minus-pair vs plus-pair visibilities and the deviation of the swap identities."""
    frame = BasisFrame(chi)
    params = RatioParams.of(make_pair(p2), frame)
    grid = oracle.alpha_grid(grid_points)
    minus = np.array([correlation_probs(params, float(a)).as_tuple() for a in grid])
    plus = np.array([correlation_probs(params, float(a), CorrelationSign.PLUS).as_tuple() for a in grid])
    shifted = np.array([correlation_probs(params, float(a) + math.pi).swapped().as_tuple() for a in grid])
    v_plus, v_minus = visibilities_pair(params)
    plus_v_plus = oracle.fringe_contrast(plus[:, 0] + plus[:, 3])
    plus_v_minus = oracle.fringe_contrast(plus[:, 1] + plus[:, 2])
    return {
        "p2": p2,
        "chi": frame.chi,
        "epsilon": params.epsilon,
        "sigma": params.sigma,
        "minus_v_plus": v_plus,
        "minus_v_minus": v_minus,
        "minus_v_plus_empirical": oracle.fringe_contrast(minus[:, 0] + minus[:, 3]),
        "minus_v_minus_empirical": oracle.fringe_contrast(minus[:, 1] + minus[:, 2]),
        "plus_v_plus": plus_v_plus,
        "plus_v_minus": plus_v_minus,
        "visibility_swap_deviation": max(abs(plus_v_plus - v_minus), abs(plus_v_minus - v_plus)),
        "probability_swap_deviation": float(np.max(np.abs(plus - shifted))),
    }


def cmd_compare(args) -> int:
    report = compare_report(args.p2, args.chi, args.grid_points)
    ok = (
        report["visibility_swap_deviation"] <= SWEEP_TOL
        and report["probability_swap_deviation"] <= args.tol
    )
    report["swap_holds"] = "yes" if ok else "no"
    _print_record(report, args.json)
    return EXIT_OK if ok else EXIT_FAIL


# ---- argument parsing -------------------------------------------------------

def _parse_axis(text: str, degrees: bool) -> Axis:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise UsageError(f"axis {text!r} must look like NAME:START:STOP:COUNT[:open|closed]")
    name = parts[0]
    try:
        start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise UsageError(f"axis {text!r}: START/STOP must be numbers and COUNT an integer") from None
    endpoint = True
    if len(parts) == 5:
        if parts[4] not in ("open", "closed"):
            raise UsageError(f"axis {text!r}: last field must be 'open' or 'closed'")
        endpoint = parts[4] == "closed"
    if degrees and name in ANGLE_PARAMS:
        start, stop = math.radians(start), math.radians(stop)
    return Axis(name, start, stop, count, endpoint)


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return ALGEBRAIC_TOL
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qubitpair", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    tol = _default_tol()

    def angles(p, names, defaults=DEFAULTS):
        for name in names:
            p.add_argument(f"--{name}", type=float, default=defaults[name])
        p.add_argument("--degrees", action="store_true", help="read angles in degrees")

    p = sub.add_parser("single", help="one qubit measured in an e-basis")
    angles(p, ("theta", "phi", "chi", "delta"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_single)

    p = sub.add_parser("pair", help="entangled pair measured in a common e-basis")
    p.add_argument("--p2", type=float, default=DEFAULTS["p2"])
    angles(p, ("chi", "alpha"))
    p.add_argument("--sign", choices=["minus", "plus"], default="minus")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("sweep", help="grid sweep to CSV or JSON")
    p.add_argument("--axis", action="append", required=True, metavar="NAME:START:STOP:COUNT[:open]",
                   help=f"swept parameter, one of {', '.join(PARAMS)}; repeat up to 3 times")
    p.add_argument("--p2", type=float, default=DEFAULTS["p2"])
    angles(p, ("chi", "alpha", "theta", "phi", "delta"))
    p.add_argument("--sign", choices=["minus", "plus"], default="minus")
    p.add_argument("--out", default=None, help="output path (stdout if omitted)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="seeded self-verification of every invariant")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=tol)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="(-) pair vs (+) pair visibilities and swap check")
    p.add_argument("--p2", type=float, default=DEFAULTS["p2"])
    angles(p, ("chi",))
    p.add_argument("--grid-points", type=int, default=256)
    p.add_argument("--tol", type=float, default=tol)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def _to_radians(args):
    if not getattr(args, "degrees", False):
        return
    for name in ANGLE_PARAMS:
        if hasattr(args, name):
            setattr(args, name, math.radians(getattr(args, name)))


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    except UsageError as exc:
        print(f"qubitpair: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "samples", 1) < 1:
        print("qubitpair: error: --samples must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    _to_radians(args)
    try:
        return args.func(args)
    except (UsageError, DomainError, InvariantError) as exc:
        print(f"qubitpair: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qubitpair: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
