"""Command-line driver.

    vncut figure1 --r-lo 0 --r-hi 3 --step 0.05 --out fig1.csv
    vncut cut-check --j 1.5 --amps 1,1,1,1 --sigma-phi 0.05
    vncut phase-compare --r 2 --m 1 --chi 0.5235987755982988
    vncut distributions --r 1 --format csv --out dists.csv

Settings come from built-in defaults, then an optional JSON file given with
``--config``, then command-line flags.  Exit codes: 0 success, 1 invalid
configuration, 2 numerical check failed, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .hilbert import coherent_state, CoherentParams, expectation_C, s_factor
from .linear_chain import (
    PointerState,
    SpinState,
    classical_cut_chain,
    first_pointer_distribution,
    quantum_chain,
)
from .numerics import Grid1D, GridDensity1D
from .phase_chain import (
    PhaseChainConfig,
    cos_rotated_phase,
    elementary_classical_shift,
    mean_shift_quantum,
    mixture_q_distribution,
    q_distribution,
    readout_overlap,
)
from .semiclassical import (
    damping_curve,
    mean_shift_semiclassical_quadrature,
    semiclassical_factor,
    semiclassical_q_distribution,
)

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

CUT_TOL = 1e-9
# grid step at which CUT_TOL applies; coarser grids get CUT_TOL * (step / REF_STEP)^2
REF_STEP = 1.0 / 64

EXPERIMENTS = ("figure1", "cut-check", "phase-compare", "distributions")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str = "figure1"
    j: float = 0.5
    amps: list = field(default_factory=lambda: [1.0, 1.0])
    m: float = 1.0
    chi: float = math.pi / 6
    r: float = 2.0
    r_lo: float = 0.0
    r_hi: float = 3.0
    r_step: float = 0.05
    mu0: float = math.pi / 2
    sigma_phi: float = 0.1
    sigma_Phi: float = 0.1
    trunc: int | None = None
    grid_lo: float = -16.0
    grid_hi: float = 16.0
    grid_n: int = 2049
    theta_nodes: int | None = None
    phase_points: int = 512
    out: str | None = None
    format: str | None = None

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.format not in (None, "csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not 0 <= self.r_lo < self.r_hi:
            raise ConfigError("need 0 <= r_lo < r_hi")
        if not self.r_step > 0:
            raise ConfigError("r_step must be positive")
        if self.r < 0:
            raise ConfigError("r must be >= 0")
        if self.sigma_phi <= 0 or self.sigma_Phi <= 0:
            raise ConfigError("pointer widths must be positive")
        if self.grid_n < 2 or not self.grid_lo < self.grid_hi:
            raise ConfigError("invalid pointer grid")
        if self.phase_points < 2:
            raise ConfigError("phase_points must be >= 2")
        if self.trunc is not None and self.trunc < 1:
            raise ConfigError("trunc must be >= 1")
        if self.theta_nodes is not None and self.theta_nodes < 1:
            raise ConfigError("theta_nodes must be >= 1")
        try:
            spin = self.spin()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if spin.j > 0 and not 0 < self.chi < math.pi / (2 * spin.j):
            raise ConfigError(f"chi must lie in (0, pi/(2j)) for j={spin.j}")
        if self.experiment == "phase-compare":
            self.phase_config(self.m)
        return self

    def spin(self) -> SpinState:
        try:
            amps = np.array([_to_complex(a) for a in self.amps])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad spin amplitudes {self.amps!r}") from exc
        if not np.any(amps):
            raise ConfigError("spin amplitudes are all zero")
        return SpinState.normalized(self.j, amps)

    def grid(self) -> Grid1D:
        return Grid1D(self.grid_lo, self.grid_hi, self.grid_n)

    def phase_config(self, m, Phi=None) -> PhaseChainConfig:
        Phi = PointerState.gaussian(self.sigma_Phi, grid=self.grid()) if Phi is None else Phi
        j = self.j if self.experiment != "phase-compare" else None
        try:
            return PhaseChainConfig(m=float(m), chi=self.chi, r=self.r, mu0=self.mu0,
                                    truncation=self.trunc, theta_nodes=self.theta_nodes, Phi=Phi, j=j)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x) if math.isfinite(x) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, complex):
        return str(x)
    return x


def _header(cfg: ExperimentConfig):
    return [
        f"vncut {__version__}",
        f"experiment: {cfg.experiment}",
        "config: " + json.dumps(_jsonable(asdict(cfg))),
    ]


def render_csv(cfg: ExperimentConfig, columns: list[str], rows) -> str:
    buf = io.StringIO()
    for line in _header(cfg):
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def render_json(cfg: ExperimentConfig, results: dict) -> str:
    doc = {
        "version": __version__,
        "experiment": cfg.experiment,
        "config": asdict(cfg),
        "results": results,
    }
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def figure1_rows(r_lo, r_hi, step):
    n = int(math.floor((r_hi - r_lo) / step + 1e-9)) + 1
    rs = r_lo + step * np.arange(n)
    quantum = damping_curve("quantum", rs)
    semi = damping_curve("semiclassical", rs)
    return list(zip(rs, quantum.values, semi.values))


def cmd_figure1(cfg: ExperimentConfig):
    """``(r, S_quantum, factor_semiclassical)`` table over ``[r_lo, r_hi]``."""
    rows = figure1_rows(cfg.r_lo, cfg.r_hi, cfg.r_step)
    columns = ["r", "S_quantum", "factor_semiclassical"]
    if (cfg.format or "csv") == "csv":
        return render_csv(cfg, columns, rows), EXIT_OK
    return render_json(cfg, {c: [row[i] for row in rows] for i, c in enumerate(columns)}), EXIT_OK


def cut_tolerance(step: float) -> float:
    return CUT_TOL * max(1.0, (step / REF_STEP) ** 2)


def cut_check(cfg: ExperimentConfig) -> dict:
    spin = cfg.spin()
    grid = cfg.grid()
    phi = PointerState.gaussian(cfg.sigma_phi, grid=grid)
    Phi = PointerState.gaussian(cfg.sigma_Phi, grid=grid)
    tol = cut_tolerance(grid.step)
    quantum = quantum_chain(spin, phi, Phi, check_tol=tol)
    classical = classical_cut_chain(first_pointer_distribution(spin, phi), Phi.density())
    sup = float(np.max(np.abs(quantum.distribution.values - classical.distribution.values)))
    mean_dev = abs(quantum.mean - classical.mean)
    elementary = float(np.sum(spin.weights * spin.m_values)) + Phi.density().mean()
    return {
        "status": "PASS" if sup <= tol else "FAIL",
        "sup_norm_deviation": sup,
        "mean_deviation": mean_dev,
        "tolerance": tol,
        "grid_step": grid.step,
        "mean_quantum": quantum.mean,
        "mean_classical_cut": classical.mean,
        "mean_elementary": elementary,
        "mass_quantum": quantum.mass(),
        "mass_classical_cut": classical.mass(),
    }


def cmd_cut_check(cfg: ExperimentConfig):
    report = cut_check(cfg)
    code = EXIT_OK if report["status"] == "PASS" else EXIT_NUMERIC
    return _report_text(cfg, report), code


def _ratio(a, b):
    return a / b if b != 0 else None


def phase_compare(cfg: ExperimentConfig) -> dict:
    pc = cfg.phase_config(cfg.m)
    classical = elementary_classical_shift(cfg.m, cfg.chi, cfg.mu0)
    quantum = mean_shift_quantum(pc)
    operator = expectation_C(coherent_state(CoherentParams(pc.r, pc.mu), pc.truncation))
    dist = q_distribution(pc)
    quadrature_quantum = dist.mean - pc.Phi.density().mean()
    cos_mu = cos_rotated_phase(cfg.mu0, cfg.m, cfg.chi)
    semi_closed = cos_mu * semiclassical_factor(cfg.r)
    semi_quad = mean_shift_semiclassical_quadrature(cfg.r, pc.mu, cfg.phase_points)
    # neighbouring outcome, for how well the second pointer separates m from it
    neighbour = cfg.m - 1 if cfg.m - 1 >= -pc.j else (cfg.m + 1 if cfg.m + 1 <= pc.j else None)
    overlap = None if neighbour is None else readout_overlap(pc, neighbour)
    return {
        "m": cfg.m,
        "chi": cfg.chi,
        "r": cfg.r,
        "mu": pc.mu,
        "elementary_classical_shift": classical,
        "quantum_shift_closed": quantum,
        "quantum_shift_operator": operator,
        "quantum_shift_distribution": quadrature_quantum,
        "semiclassical_shift_closed": semi_closed,
        "semiclassical_shift_quadrature": semi_quad,
        "quantum_over_classical": _ratio(quantum, classical),
        "semiclassical_over_classical": _ratio(semi_closed, classical),
        "neighbour_m": neighbour,
        "readout_overlap": overlap,
        "S_quantum": s_factor(cfg.r),
        "factor_semiclassical": semiclassical_factor(cfg.r),
        "truncation": pc.truncation,
        "theta_nodes": pc.theta_nodes,
    }


def cmd_phase_compare(cfg: ExperimentConfig):
    return _report_text(cfg, phase_compare(cfg)), EXIT_OK


def distributions(cfg: ExperimentConfig):
    """All four Q-densities on the linear chain's output grid."""
    spin = cfg.spin()
    grid = cfg.grid()
    phi = PointerState.gaussian(cfg.sigma_phi, grid=grid)
    Phi = PointerState.gaussian(cfg.sigma_Phi, grid=grid)
    quantum = quantum_chain(spin, phi, Phi, check_tol=cut_tolerance(grid.step))
    classical = classical_cut_chain(first_pointer_distribution(spin, phi), Phi.density())
    out_grid = quantum.distribution.grid

    base = cfg.phase_config(spin.m_values[0], Phi)
    phase_q = mixture_q_distribution(spin, base)
    semi = np.zeros(grid.n)
    for m, w in zip(spin.m_values, spin.weights):
        if w:
            mu = cfg.phase_config(m, Phi).mu
            semi += w * semiclassical_q_distribution(cfg.r, mu, Phi.density(), cfg.phase_points).distribution.values
    offset = int(round((grid.lo - out_grid.lo) / grid.step))

    def widen(values):
        full = np.zeros(out_grid.n)
        full[offset:offset + grid.n] = values
        return full

    columns = {
        "Q": out_grid.points,
        "linear_quantum": quantum.distribution.values,
        "linear_classical_cut": classical.distribution.values,
        "phase_quantum": widen(phase_q.distribution.values),
        "phase_semiclassical": widen(semi),
    }
    summary = {}
    for name, values in list(columns.items())[1:]:
        d = GridDensity1D(out_grid, values)
        summary[name] = {"mass": d.mass(), "mean": d.mean()}
    return columns, summary


def cmd_distributions(cfg: ExperimentConfig):
    columns, summary = distributions(cfg)
    if (cfg.format or "csv") == "csv":
        names = list(columns)
        rows = zip(*(columns[n] for n in names))
        return render_csv(cfg, names, rows), EXIT_OK
    return render_json(cfg, {"summary": summary, "columns": columns}), EXIT_OK


def _report_text(cfg, report: dict) -> str:
    if (cfg.format or "json") == "json":
        return render_json(cfg, report)
    rows = [(k, v) for k, v in report.items()]
    buf = io.StringIO()
    for line in _header(cfg):
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in rows:
        w.writerow([k, _fmt(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v])
    return buf.getvalue()


COMMANDS = {
    "figure1": cmd_figure1,
    "cut-check": cmd_cut_check,
    "phase-compare": cmd_phase_compare,
    "distributions": cmd_distributions,
}

# flag name -> (config field, type)
_OVERRIDES = {
    "--j": ("j", float),
    "--amps": ("amps", None),
    "--m": ("m", float),
    "--chi": ("chi", float),
    "--r": ("r", float),
    "--r-lo": ("r_lo", float),
    "--r-hi": ("r_hi", float),
    "--step": ("r_step", float),
    "--mu0": ("mu0", float),
    "--trunc": ("trunc", int),
    "--grid-n": ("grid_n", int),
    "--grid-lo": ("grid_lo", float),
    "--grid-hi": ("grid_hi", float),
    "--theta-nodes": ("theta_nodes", int),
    "--phase-points": ("phase_points", int),
    "--sigma-phi": ("sigma_phi", float),
    "--sigma-Phi": ("sigma_Phi", float),
}


def _to_complex(x) -> complex:
    if isinstance(x, str):
        return complex(x.strip().replace(" ", "").replace("i", "j"))
    return complex(x)


def _parse_amps(text: str):
    try:
        amps = [_to_complex(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad amplitude list {text!r}") from exc
    return [a.real if a.imag == 0 else str(a) for a in amps]


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; here 2 means a failed numerical check
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vncut", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"vncut {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="JSON file with config fields")
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--format", choices=("csv", "json"))
        for flag, (dest, typ) in _OVERRIDES.items():
            p.add_argument(flag, dest=dest, type=typ or _parse_amps, default=None)
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: not valid JSON ({exc})") from exc
        if not isinstance(values, dict):
            raise ConfigError(f"{args.config}: expected a JSON object")
        known = {f.name for f in fields(ExperimentConfig)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"{args.config}: unknown keys {sorted(unknown)}")
    for dest in [d for d, _ in _OVERRIDES.values()] + ["out", "format"]:
        v = getattr(args, dest, None)
        if v is not None:
            values[dest] = v
    values["experiment"] = args.experiment
    try:
        cfg = ExperimentConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def run(cfg: ExperimentConfig):
    return COMMANDS[cfg.experiment](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args)
        text, code = run(cfg)
    except OSError as exc:
        print(f"vncut: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConfigError as exc:
        print(f"vncut: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except RuntimeError as exc:
        print(f"vncut: numerical check failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"vncut: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cfg.out:
        try:
            with open(cfg.out, "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"vncut: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code
