"""Command-line sweeps: ideal curves, warm-mode Scheme A and Scheme B, Bell demo.

Usage::

    python -m dampfilter ideal --points 40 --tmax 1.2 --out ideal.csv
    python -m dampfilter scheme-a --nbar 0.05,0.09,0.125
    python -m dampfilter scheme-b --nbar 0,10,25,50 --mode scale_all --json
    python -m dampfilter bell-demo psi- --p 0.5

Settings come from defaults, then ``--config`` (``key = value`` lines, ``#``
comments), then command-line flags. Exit status: 0 success, 1 bad
configuration, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import pipeline, scheme_a, scheme_b
from .channels import damping_probability, two_qubit_damping
from .filtering import CIRCUIT_DERIVED, POVM_PAPER, apply_filter, four_outcome_measurement
from .gates import BELL_NAMES, bell_pair
from .metrics import analytic_filtered, analytic_success, analytic_unfiltered, psi_minus_references, state_fidelity

HEADER = (
    "t_over_t1", "p", "nbar", "scheme", "f_unfiltered", "f_filtered", "p_success",
    "f_analytic_unf", "f_analytic_f", "o_factor", "deviation",
)
POVM_ALIASES = {"circuit": CIRCUIT_DERIVED, "paper": POVM_PAPER,
                CIRCUIT_DERIVED: CIRCUIT_DERIVED, POVM_PAPER: POVM_PAPER}
DEFAULT_NBARS = {
    "ideal": (0.0,),
    "a": (0.0, 0.05, 0.09, 0.125),
    "b": tuple(float(n) for n in range(0, 55, 5)),
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    scheme: str = "ideal"
    t1: float = 0.8
    points: int = 40
    tmin: float = 0.01
    tmax: float = 1.2
    nbar_values: tuple[float, ...] | None = None
    n_max: int = scheme_a.DEFAULT_N_MAX
    scheme_b_mode: str = scheme_b.SCALE_ZZ_ONLY
    povm_mode: str = CIRCUIT_DERIVED
    discard_leakage: bool = False
    seed: int = 0
    output_path: str | None = None
    json: bool = False
    t_over_t1_grid: tuple[float, ...] = field(default=(), repr=False)

    def validate(self) -> "ExperimentConfig":
        if self.scheme not in DEFAULT_NBARS:
            raise ConfigError(f"unknown scheme {self.scheme!r}")
        if not self.t1 > 0:
            raise ConfigError("t1 must be positive")
        if self.points < 1:
            raise ConfigError("points must be at least 1")
        if not 0 <= self.tmin <= self.tmax:
            raise ConfigError("need 0 <= tmin <= tmax")
        if self.n_max < 1:
            raise ConfigError("nmax must be at least 1")
        if self.scheme_b_mode not in scheme_b.SCALE_MODES:
            raise ConfigError(f"mode must be one of {scheme_b.SCALE_MODES}")
        if self.povm_mode not in (CIRCUIT_DERIVED, POVM_PAPER):
            raise ConfigError("povm must be 'circuit' or 'paper'")
        if self.nbar_values is None:
            self.nbar_values = DEFAULT_NBARS[self.scheme]
        if not self.nbar_values or any(n < 0 for n in self.nbar_values):
            raise ConfigError("nbar list must be non-empty and non-negative")
        if not self.t_over_t1_grid:
            self.t_over_t1_grid = tuple(np.linspace(self.tmin, self.tmax, self.points))
        if any(x < 0 for x in self.t_over_t1_grid):
            raise ConfigError("t/T1 grid values must be non-negative")
        return self


@dataclass(frozen=True)
class SweepRecord:
    t_over_t1: float
    p: float
    nbar: float
    scheme: str
    f_unfiltered: float
    f_filtered: float
    p_success: float
    f_analytic_unf: float
    f_analytic_f: float
    o_factor: float | None
    deviation: float

    def row(self) -> list[str]:
        out = []
        for name in HEADER:
            v = getattr(self, name)
            if v is None:
                out.append("")
            elif isinstance(v, str):
                out.append(v)
            else:
                out.append(f"{v:.12g}")
        return out


def _record(t: float, p: float, nbar: float, scheme: str,
            fig: pipeline.GateFigures, o_factor: float | None) -> SweepRecord:
    fa_unf, fa_f, pa = analytic_unfiltered(p), analytic_filtered(p), analytic_success(p)
    dev = max(abs(fig.f_unfiltered - fa_unf), abs(fig.f_filtered - fa_f), abs(fig.p_success - pa))
    # clip last-ulp round-off so emitted values stay inside [0, 1]
    f_unf, f_f, ps = (float(np.clip(v, 0.0, 1.0)) for v in fig.values)
    return SweepRecord(t, p, nbar, scheme, f_unf, f_f, ps, fa_unf, fa_f, o_factor, dev)


def cmd_ideal(config: ExperimentConfig) -> list[SweepRecord]:
    """Both schemes at zero temperature against the closed-form curves."""
    rows = []
    for x in config.t_over_t1_grid:
        p = damping_probability(x * config.t1, config.t1)
        rows.append(_record(x, p, 0.0, "a", pipeline.scheme_a_figures(p, 0.0, config.n_max), None))
        rows.append(_record(x, p, 0.0, "b", pipeline.scheme_b_figures(p, 0.0, config.scheme_b_mode), 1.0))
    return rows


def cmd_scheme_a(config: ExperimentConfig) -> list[SweepRecord]:
    rows = []
    for nbar in config.nbar_values:
        for x in config.t_over_t1_grid:
            p = damping_probability(x * config.t1, config.t1)
            fig = pipeline.scheme_a_figures(p, nbar, config.n_max,
                                            discard_leakage=config.discard_leakage)
            rows.append(_record(x, p, nbar, "a", fig, None))
    return rows


def cmd_scheme_b(config: ExperimentConfig) -> list[SweepRecord]:
    rows = []
    for nbar in config.nbar_values:
        chain = scheme_b.ChainSpec.uniform(nbar)
        o = scheme_b.thermal_correction(chain)
        for x in config.t_over_t1_grid:
            p = damping_probability(x * config.t1, config.t1)
            fig = pipeline.scheme_b_figures(p, mode=config.scheme_b_mode, chain=chain)
            rows.append(_record(x, p, nbar, "b", fig, o))
    return rows


def cmd_bell_demo(state_label: str, p: float, povm_mode: str = CIRCUIT_DERIVED) -> dict:
    """Damp a Bell pair, filter it at ``p_r = p``, and report fidelities."""
    if not 0 <= p < 1:
        raise ConfigError("p must lie in [0, 1)")
    target = bell_pair(state_label)
    damped = two_qubit_damping(target, p, p)
    filtered, p_success = apply_filter(damped, p, p)
    outcomes = four_outcome_measurement(damped, p, povm_mode)
    return {
        "state": state_label,
        "p": p,
        "f_unfiltered": state_fidelity(damped, target),
        "f_filtered": state_fidelity(filtered, target),
        "p_success": p_success,
        "psi_minus_references": psi_minus_references(p),
        "povm_mode": povm_mode,
        "outcome_probabilities": {f"{a}{b}": o.probability
                                  for o in outcomes for a, b in [o.outcome_bits]},
    }


COMMANDS = {"ideal": cmd_ideal, "a": cmd_scheme_a, "b": cmd_scheme_b}


def run(config: ExperimentConfig) -> list[SweepRecord]:
    config.validate()
    return COMMANDS[config.scheme](config)


def to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(HEADER)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def to_json(records: Sequence[SweepRecord], config: ExperimentConfig) -> str:
    cfg = {k: v for k, v in asdict(config).items() if k != "t_over_t1_grid"}
    return json.dumps({"config": cfg, "rows": [asdict(r) for r in records]}, indent=2) + "\n"


def read_config_file(path: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(s) for s in text.replace(" ", "").split(",") if s)
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


# config-file key / CLI dest -> (ExperimentConfig field, parser)
_KEYS = {
    "t1": ("t1", float),
    "points": ("points", int),
    "tmin": ("tmin", float),
    "tmax": ("tmax", float),
    "nbar": ("nbar_values", _floats),
    "nmax": ("n_max", int),
    "mode": ("scheme_b_mode", str),
    "povm": ("povm_mode", lambda s: POVM_ALIASES.get(s, s)),
    "seed": ("seed", int),
    "out": ("output_path", str),
    "json": ("json", lambda s: str(s).lower() in ("1", "true", "yes", "on")),
    "discard_leakage": ("discard_leakage", lambda s: str(s).lower() in ("1", "true", "yes", "on")),
}


def _apply(config: ExperimentConfig, values: dict) -> ExperimentConfig:
    updates = {}
    for key, value in values.items():
        if key not in _KEYS:
            raise ConfigError(f"unknown setting {key!r}")
        name, parse = _KEYS[key]
        try:
            updates[name] = parse(value) if isinstance(value, str) else value
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return replace(config, **updates)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dampfilter", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("ideal", "scheme-a", "scheme-b"):
        sp = sub.add_parser(name)
        sp.add_argument("--config")
        sp.add_argument("--t1", type=float)
        sp.add_argument("--points", type=int)
        sp.add_argument("--tmin", type=float)
        sp.add_argument("--tmax", type=float)
        sp.add_argument("--nbar", type=str, help="comma-separated mean phonon numbers")
        sp.add_argument("--nmax", type=int)
        sp.add_argument("--mode", choices=scheme_b.SCALE_MODES)
        sp.add_argument("--povm", choices=sorted(POVM_ALIASES))
        sp.add_argument("--seed", type=int)
        sp.add_argument("--discard-leakage", action="store_const", const=True, default=None)
        sp.add_argument("--out")
        sp.add_argument("--json", action="store_const", const=True, default=None)
    demo = sub.add_parser("bell-demo")
    demo.add_argument("state", choices=BELL_NAMES)
    grp = demo.add_mutually_exclusive_group(required=True)
    grp.add_argument("--p", type=float)
    grp.add_argument("--t-over-t1", type=float)
    demo.add_argument("--povm", choices=sorted(POVM_ALIASES), default="circuit")
    demo.add_argument("--out")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    scheme = {"ideal": "ideal", "scheme-a": "a", "scheme-b": "b"}[args.command]
    config = ExperimentConfig(scheme=scheme)
    if args.config:
        try:
            file_values = read_config_file(args.config)
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        config = _apply(config, file_values)
    flags = {k: v for k, v in vars(args).items()
             if k in _KEYS and v is not None}
    return _apply(config, flags).validate()


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bell-demo":
            p = args.p if args.p is not None else damping_probability(args.t_over_t1, 1.0)
            report = cmd_bell_demo(args.state, p, POVM_ALIASES[args.povm])
            text = json.dumps(report, indent=2) + "\n"
            out = args.out
        else:
            config = config_from_args(args)
            records = run(config)
            text = to_json(records, config) if config.json else to_csv(records)
            out = config.output_path
    except ConfigError as exc:
        print(f"dampfilter: config error: {exc}", file=sys.stderr)
        return 1
    try:
        _write(text, out)
    except OSError as exc:
        print(f"dampfilter: I/O error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
