"""Command-line interface: ``oscillex kernel | propagate | verify``.

Exit codes: 0 success, 1 failed verification checks, 2 usage or library errors.
"""

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, OscillexError
from .grid import GridState
from .oscillator import hermite_psi
from .propagators import MODELS, ForcingSpec, KernelSpec, RelParams, apply_kernel
from .solver import crank_nicolson, evolve_1d
from .verification import SUITES, run_suite

__all__ = ["RunConfig", "main", "format_complex", "read_state_csv", "write_state_csv"]

PROPAGATE_MODELS = ("modified1d", "forced", "relativistic", "modrel")
METHODS = ("kernel", "eigen", "cn")


def format_complex(z):
    """JSON object with real and imaginary parts rounded to 15 significant digits."""
    z = complex(z)
    return json.dumps({"re": float(f"{z.real:.15g}"), "im": float(f"{z.imag:.15g}")})


def _parse_number(text):
    try:
        z = complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"not a number: {text!r}") from exc
    return z.real if z.imag == 0 else z


def _parse_point(text):
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        return float(parts[0])
    return np.array([float(p) for p in parts])


def _load_forcing(text):
    if text is None:
        return ForcingSpec()
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return ForcingSpec.from_dict(json.loads(text))
    except (json.JSONDecodeError, TypeError, AttributeError) as exc:
        raise ConfigError(f"bad forcing specification: {exc}") from exc


def _rel_params(nu, lam, omega):
    return RelParams.from_nu(nu, lam, omega)


# ------------------------------------------------------------ kernel ---

def cmd_kernel(args):
    forcing = _load_forcing(args.forcing)
    rel = None
    if args.model in ("relativistic", "modrel"):
        rel = _rel_params(args.nu, args.lam, args.omega)
    spec = KernelSpec(args.model, K=args.K, n=args.n, forcing=forcing, rel=rel)
    x, y = _parse_point(args.x), _parse_point(args.y)
    t = _parse_number(args.t)
    if args.model not in ("relativistic", "modrel") and isinstance(t, complex):
        raise ConfigError(f"model {args.model} needs a real time")
    print(format_complex(spec.evaluate(x, y, t)))
    return 0


# --------------------------------------------------------- propagate ---

def read_state_csv(path):
    """Read ``x,re,im`` rows written by :func:`write_state_csv`."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "re", "im"]:
        raise ConfigError(f"{path}: expected header x,re,im")
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 3:
        raise ConfigError(f"{path}: expected three columns")
    return data[:, 0], data[:, 1] + 1j * data[:, 2]


def write_state_csv(path, state):
    """Write ``x,re,im`` with the shortest round-trip representation of each double."""
    with open(path, "w", newline="") as fh:
        fh.write("x,re,im\n")
        for x, v in zip(state.x, state.values):
            fh.write(f"{float(x)!r},{float(v.real)!r},{float(v.imag)!r}\n")


@dataclass
class RunConfig:
    """A propagation run read from a JSON document."""

    model: str = "modified1d"
    t: float = 0.0
    x_min: float = -12.0
    x_max: float = 12.0
    points: int = 2048
    initial: dict = field(default_factory=lambda: {"kind": "gaussian"})
    forcing: ForcingSpec = field(default_factory=ForcingSpec)
    rel: dict = field(default_factory=lambda: {"nu": 1.618, "lam": 1.0, "omega": 1.0})
    method: str = "kernel"
    steps: int = 4000
    modes: int = 60
    csv_path: str = "psi.csv"
    metadata_path: str = "psi.json"
    base_dir: str = "."

    @classmethod
    def from_dict(cls, d, base_dir="."):
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        grid = d.get("grid", {})
        out = d.get("output", {})
        try:
            cfg = cls(
                model=d.get("model", "modified1d"),
                t=float(d.get("t", d.get("t_final", 0.0))),
                x_min=float(grid.get("x_min", -12.0)),
                x_max=float(grid.get("x_max", 12.0)),
                points=int(grid.get("points", 2048)),
                initial=dict(d.get("initial", {"kind": "gaussian"})),
                forcing=ForcingSpec.from_dict(d.get("forcing")),
                rel={"nu": 1.618, "lam": 1.0, "omega": 1.0, **d.get("rel", {})},
                method=d.get("method", "kernel"),
                steps=int(d.get("steps", 4000)),
                modes=int(d.get("modes", 60)),
                csv_path=os.path.join(base_dir, out.get("csv", "psi.csv")),
                metadata_path=os.path.join(base_dir, out.get("metadata", "psi.json")),
                base_dir=base_dir,
            )
        except (TypeError, ValueError, AttributeError) as exc:
            raise ConfigError(f"bad config: {exc}") from exc
        cfg.validate()
        return cfg

    def validate(self):
        if self.model not in PROPAGATE_MODELS:
            raise ConfigError(f"model must be one of {PROPAGATE_MODELS}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        if self.method == "eigen" and self.model != "modified1d":
            raise ConfigError("the eigen method supports only modified1d")
        if self.method == "cn" and self.model not in ("modified1d", "forced"):
            raise ConfigError("the cn method supports modified1d and forced")
        if not (math.isfinite(self.t) and self.points >= 16 and self.x_min < self.x_max):
            raise ConfigError("need finite t, points >= 16 and x_min < x_max")
        if self.steps < 1 or self.modes < 1:
            raise ConfigError("steps and modes must be positive")
        kind = self.initial.get("kind")
        if kind not in ("gaussian", "hermite", "file"):
            raise ConfigError("initial.kind must be gaussian, hermite or file")
        if kind == "file" and not os.path.isfile(self._resolve(self.initial.get("path", ""))):
            raise ConfigError(f"initial state file not found: {self.initial.get('path')}")
        if kind == "hermite" and int(self.initial.get("N", 0)) < 0:
            raise ConfigError("initial.N must be nonnegative")
        if kind == "gaussian" and not float(self.initial.get("sigma", 1.0)) > 0:
            raise ConfigError("initial.sigma must be positive")

    def _resolve(self, path):
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def initial_state(self):
        kind = self.initial["kind"]
        if kind == "file":
            x, v = read_state_csv(self._resolve(self.initial["path"]))
            grid = GridState(self.x_min, self.x_max, self.points, np.zeros(self.points))
            if x.size != self.points or not np.allclose(x, grid.x, rtol=0, atol=1e-12):
                raise ConfigError("initial state file does not match the grid")
            return grid.with_values(v)
        if kind == "hermite":
            N = int(self.initial.get("N", 0))
            return GridState.from_function(lambda x: hermite_psi(N, x), self.x_min, self.x_max, self.points)
        x0 = float(self.initial.get("x0", 0.0))
        p0 = float(self.initial.get("p0", 0.0))
        s = float(self.initial.get("sigma", 1.0))

        def gauss(x):
            return (math.pi * s * s) ** -0.25 * np.exp(-(x - x0) ** 2 / (2 * s * s) + 1j * p0 * x)
        return GridState.from_function(gauss, self.x_min, self.x_max, self.points)

    def kernel_spec(self):
        rel = None
        if self.model in ("relativistic", "modrel"):
            rel = _rel_params(float(self.rel["nu"]), float(self.rel["lam"]), float(self.rel["omega"]))
        return KernelSpec(self.model, forcing=self.forcing, rel=rel)

    def metadata(self, state):
        return {"model": self.model, "method": self.method, "t": self.t, "norm": state.norm(),
                "grid": {"x_min": self.x_min, "x_max": self.x_max, "points": self.points}}


def run_propagation(cfg):
    """Propagated GridState for a validated RunConfig."""
    psi0 = cfg.initial_state()
    if cfg.t == 0:
        return psi0
    if cfg.method == "eigen":
        return evolve_1d(psi0, cfg.t, cfg.modes)
    if cfg.method == "cn":
        model = cfg.forcing if cfg.model == "forced" else "modified"
        return crank_nicolson(psi0, cfg.t, cfg.steps, model)
    return apply_kernel(cfg.kernel_spec(), psi0, cfg.t)


def _write_outputs(cfg, state):
    """Write CSV and metadata atomically; leave no partial files behind on failure."""
    targets = [(cfg.csv_path, lambda p: write_state_csv(p, state)),
               (cfg.metadata_path, lambda p: _write_json(p, cfg.metadata(state)))]
    temps = []
    try:
        for path, writer in targets:
            tmp = f"{path}.partial"
            temps.append(tmp)
            writer(tmp)
        for (path, _), tmp in zip(targets, temps):
            os.replace(tmp, path)
    except BaseException:
        for tmp in temps:
            if os.path.exists(tmp):
                os.remove(tmp)
        raise


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def cmd_propagate(args):
    data, base = {}, "."
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        base = os.path.dirname(os.path.abspath(args.config))
    data = dict(data)
    for key in ("model", "method", "t", "steps", "modes"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    grid = dict(data.get("grid", {}))
    for key in ("x_min", "x_max", "points"):
        val = getattr(args, key)
        if val is not None:
            grid[key] = val
    data["grid"] = grid
    out = dict(data.get("output", {}))
    # command-line paths are relative to the working directory, config paths to the config file
    if args.output is not None:
        out["csv"] = os.path.abspath(args.output)
    if args.metadata is not None:
        out["metadata"] = os.path.abspath(args.metadata)
    data["output"] = out
    cfg = RunConfig.from_dict(data, base)
    state = run_propagation(cfg)
    _write_outputs(cfg, state)
    return 0


# ------------------------------------------------------------ verify ---

def cmd_verify(args):
    results = run_suite(args.suite, args.tolerance_scale)
    report = json.dumps([r.to_dict() for r in results], indent=2)
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(report + "\n")
    else:
        print(report)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        print(f"{status} {r.check_id} residual={r.residual:.3g} tol={r.tolerance:.3g}", file=sys.stderr)
    return 0 if all(r.passed for r in results) else 1


# -------------------------------------------------------------- main ---

def build_parser():
    p = argparse.ArgumentParser(prog="oscillex", description="Modified-oscillator propagators")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="evaluate a propagator at one point")
    k.add_argument("--model", required=True, choices=MODELS)
    k.add_argument("--x", required=True, help="coordinate; comma-separated for modifiednd")
    k.add_argument("--y", required=True)
    k.add_argument("--t", required=True, help="time; complex values such as -0.5j allowed for relativistic models")
    k.add_argument("--nu", type=float, default=1.618)
    k.add_argument("--lam", type=float, default=1.0)
    k.add_argument("--omega", type=float, default=1.0)
    k.add_argument("--K", type=int, default=0)
    k.add_argument("--n", type=int, default=1)
    k.add_argument("--forcing", help="JSON forcing specification or path to one")
    k.set_defaults(func=cmd_kernel)

    r = sub.add_parser("propagate", help="propagate an initial state from a JSON config")
    r.add_argument("--config")
    r.add_argument("--model", choices=PROPAGATE_MODELS)
    r.add_argument("--method", choices=METHODS)
    r.add_argument("--t", type=float)
    r.add_argument("--steps", type=int)
    r.add_argument("--modes", type=int)
    r.add_argument("--x-min", dest="x_min", type=float)
    r.add_argument("--x-max", dest="x_max", type=float)
    r.add_argument("--points", type=int)
    r.add_argument("--output", help="CSV path")
    r.add_argument("--metadata", help="JSON metadata path")
    r.set_defaults(func=cmd_propagate)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    v.add_argument("--report", help="write the JSON report here instead of standard output")
    v.add_argument("--tolerance-scale", type=float, default=1.0,
                   help="multiply every tolerance (0 forces failures)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OscillexError, ValueError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"oscillex: error: {msg}", file=sys.stderr)
        return 2
