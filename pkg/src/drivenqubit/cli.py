"""Scenario-driven command line front end.

    drivenqubit run SCENARIO [--out DIR] [--threads N] [--format csv|json]
    drivenqubit list-scenarios
    drivenqubit regime SCENARIO

Scenarios are TOML (or JSON) files; a run manifest written by ``run`` is itself
a valid scenario. Exit codes: 0 ok, 2 validation, 3 computation, 4 I/O.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from . import diagnostics, dynamics, fluorescence, generators, spectral
from .generators import Backend, DriveParams, QubitState

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION, EXIT_IO = 0, 2, 3, 4
TASKS = ("evolve", "steady", "spectrum", "scan", "regime")
RATE_KEYS = {"down", "up", "z0", "z_plus", "z_minus", "z_asym", "z_temperature",
             "eps", "eps_bath", "eps_e", "upsilon", "upsilon_bath"}
DRIVE_KEYS = {"rabi", "detuning", "omega_d"}
COMPUTATION_ERRORS = (generators.DegenerateDriveError, dynamics.SteadyStateError,
                      fluorescence.ConditioningError, fluorescence.PeakError,
                      diagnostics.ScanError, spectral.SpectralRangeError,
                      np.linalg.LinAlgError)


class ScenarioError(ValueError):
    """Scenario file does not parse or does not validate."""


@dataclass
class Scenario:
    name: str
    task: str
    backends: tuple
    drive: dict
    rates: dict | None = None
    bath: list | None = None
    coupling: dict | None = None
    order: int = 1
    params: dict = field(default_factory=dict)
    figure: str = ""
    note: str = ""
    raw: dict = field(default_factory=dict)

    # -- parameter resolution -------------------------------------------------
    def drive_params(self, overrides: dict | None = None) -> DriveParams:
        d = dict(self.drive)
        for k, v in (overrides or {}).items():
            if k.startswith("drive."):
                d[k[6:]] = v
        return DriveParams(float(d["rabi"]), float(d.get("detuning", 0.0)),
                           float(d.get("omega_d", 1000.0)))

    def model(self):
        return spectral.model_from_config(self.bath) if self.bath is not None else None

    def rate_set(self, drive: DriveParams, overrides: dict | None = None) -> spectral.RateSet:
        if self.bath is not None:
            return spectral.generalized_rates(self.model(), self._coupling(), drive, self.order)
        r = dict(self.rates)
        for k, v in (overrides or {}).items():
            if k.startswith("rates."):
                r[k[6:]] = v
        return direct_rates(r, drive)

    def lab_rates(self, drive: DriveParams, overrides: dict | None = None) -> spectral.LabRates:
        if self.bath is not None:
            return spectral.lab_rates(self.model(), self._coupling(), drive.omega0)
        r = dict(self.rates)
        for k, v in (overrides or {}).items():
            if k.startswith("rates."):
                r[k[6:]] = v
        return spectral.LabRates(float(r["down"]), float(r.get("up", 0.0)), float(r.get("z0", 0.0)))

    def _coupling(self) -> spectral.CouplingParams:
        c = self.coupling or {}
        return spectral.CouplingParams(float(c.get("ax", 0.0)), float(c.get("ay", 0.0)),
                                       float(c.get("az", 0.0)))

    def generator(self, backend: str, overrides: dict | None = None) -> generators.Generator:
        drive = self.drive_params(overrides)
        if Backend(backend) is Backend.LAB:
            return generators.lab_generator(self.lab_rates(drive, overrides), drive)
        return generators.build(backend, self.rate_set(drive, overrides), drive)


def direct_rates(r: dict, drive: DriveParams) -> spectral.RateSet:
    """RateSet from a direct rate table, expanding the shorthand keys.

    ``z_asym`` sets z_plus/z_minus = z0 (1 +- z_asym), ``z_temperature`` sets
    z0 (1 +- omega/T); ``eps_bath`` sets eps = omega/omega_bath and
    ``upsilon_bath`` sets upsilon = (omega/omega_bath)**2.
    """
    w = drive.omega
    z0 = float(r.get("z0", 0.0))
    if "z_asym" in r:
        zp, zm = z0 * (1 + r["z_asym"]), z0 * (1 - r["z_asym"])
    elif "z_temperature" in r:
        zp, zm = z0 * (1 + w / r["z_temperature"]), z0 * (1 - w / r["z_temperature"])
    else:
        zp, zm = float(r.get("z_plus", z0)), float(r.get("z_minus", z0))
    eps = w / r["eps_bath"] if "eps_bath" in r else float(r.get("eps", 0.0))
    ups = (w / r["upsilon_bath"]) ** 2 if "upsilon_bath" in r else float(r.get("upsilon", 0.0))
    return spectral.RateSet(float(r["down"]), float(r.get("up", 0.0)), z0, zp, zm,
                            eps, float(r.get("eps_e", 0.0)), ups)


# -- loading and validation ----------------------------------------------------

def load_file(path) -> dict:
    """Parse a scenario from a filesystem path or a package resource."""
    if isinstance(path, str):
        path = Path(path)
    text = path.read_text()
    try:
        if path.name.endswith(".json"):
            data = json.loads(text)
        else:
            data = tomllib.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: {exc}") from None
    if "scenario" in data and isinstance(data["scenario"], dict):
        data = data["scenario"]  # a run manifest
    return data


def _need(table: dict, key: str, where: str):
    if key not in table:
        raise ScenarioError(f"missing field '{where}.{key}'" if where else f"missing field '{key}'")
    return table[key]


def _axis(spec: dict, where: str) -> tuple[str, np.ndarray]:
    name = _need(spec, "name", where)
    if "values" in spec:
        vals = np.asarray(spec["values"], dtype=float)
    else:
        start, stop, num = (_need(spec, k, where) for k in ("start", "stop", "num"))
        if spec.get("spacing", "linear") == "log":
            vals = np.geomspace(start, stop, int(num))
        else:
            vals = np.linspace(start, stop, int(num))
    if vals.size == 0:
        raise ScenarioError(f"'{where}' has no values")
    prefix, _, key = name.partition(".")
    if not ((prefix == "drive" and key in DRIVE_KEYS) or (prefix == "rates" and key in RATE_KEYS)):
        raise ScenarioError(f"'{where}.name' must be drive.<{'|'.join(sorted(DRIVE_KEYS))}> "
                            f"or rates.<key>, got {name!r}")
    return name, vals


def validate(data: dict, name: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a table")
    task = _need(data, "task", "")
    if task not in TASKS:
        raise ScenarioError(f"field 'task' must be one of {TASKS}, got {task!r}")
    backends = data.get("backends", ["generalized"])
    for b in backends:
        try:
            Backend(b)
        except ValueError:
            raise ScenarioError(f"field 'backends': unknown backend {b!r}") from None
    drive = _need(data, "drive", "")
    _need(drive, "rabi", "drive")
    unknown = set(drive) - DRIVE_KEYS
    if unknown:
        raise ScenarioError(f"unknown field(s) in 'drive': {sorted(unknown)}")
    has_rates, has_bath = "rates" in data, "bath" in data
    if has_rates == has_bath:
        raise ScenarioError("give exactly one of 'rates' (direct) or 'bath' + 'coupling'")
    if has_rates:
        rates = data["rates"]
        _need(rates, "down", "rates")
        unknown = set(rates) - RATE_KEYS
        if unknown:
            raise ScenarioError(f"unknown field(s) in 'rates': {sorted(unknown)}")
        z_modes = sum(k in rates for k in ("z_asym", "z_temperature")) + \
            int(bool({"z_plus", "z_minus"} & set(rates)))
        if z_modes > 1:
            raise ScenarioError("'rates': give z_plus/z_minus, z_asym or z_temperature, not several")
        for a, b in (("eps", "eps_bath"), ("upsilon", "upsilon_bath")):
            if a in rates and b in rates:
                raise ScenarioError(f"'rates': use only one of {a!r}, {b!r}")
    else:
        _need(data, "coupling", "")
        if not isinstance(data["bath"], dict) or "components" not in data["bath"]:
            raise ScenarioError("missing field 'bath.components'")
    params = dict(data.get(task, {}))
    if task == "scan":
        _need(params, "axis1", "scan")
        _need(params, "axis2", "scan")
        obs = params.get("observable", "n_ss")
        if obs not in diagnostics.OBSERVABLES:
            raise ScenarioError(f"'scan.observable' must be one of {sorted(diagnostics.OBSERVABLES)}")
        params["axis1"] = _axis(params["axis1"], "scan.axis1")
        params["axis2"] = _axis(params["axis2"], "scan.axis2")
    if task == "evolve" and "times" not in params:
        _need(params, "t_max", "evolve")
    if task == "spectrum" and "sweep" in params:
        params["sweep"] = _axis(params["sweep"], "spectrum.sweep")
    scn = Scenario(
        name=str(data.get("name", name)), task=task, backends=tuple(backends),
        drive=dict(drive), rates=dict(data["rates"]) if has_rates else None,
        bath=list(data["bath"]["components"]) if has_bath else None,
        coupling=dict(data.get("coupling", {})) if has_bath else None,
        order=int(data.get("order", 1)), params=params,
        figure=str(data.get("figure", "")), note=str(data.get("note", "")), raw=data,
    )
    try:  # catches bad numbers early with a field-level message
        drv = scn.drive_params()
        if has_rates:
            direct_rates(scn.rates, drv)
        else:
            scn.model()
    except (ValueError, TypeError, KeyError) as exc:
        raise ScenarioError(f"invalid parameter: {exc}") from None
    return scn


# -- bundled catalog -----------------------------------------------------------

def _scenario_dir():
    return resources.files("drivenqubit") / "scenarios"


def bundled_scenarios() -> dict:
    out = {}
    for entry in sorted(_scenario_dir().iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".toml"):
            out[entry.name[:-5]] = entry
    return out


def resolve_path(arg: str):
    p = Path(arg)
    if p.exists():
        return p
    bundled = bundled_scenarios()
    if arg in bundled:
        return bundled[arg]
    return p


# -- output --------------------------------------------------------------------

def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_table(path: Path, columns: list, rows, fmt: str) -> Path:
    path = path.with_suffix("." + fmt)
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
        path.write_text("\n".join(lines) + "\n")
    else:
        cols = {c: [] for c in columns}
        for row in rows:
            for c, v in zip(columns, row):
                cols[c].append(v if isinstance(v, str) else (None if not np.isfinite(v) else float(v)))
        path.write_text(json.dumps(cols, indent=1) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


# -- tasks ---------------------------------------------------------------------

def _lab_state(G, state):
    return generators.state_to_lab(state, G)


def _task_evolve(scn, backend, G, pool, threads):
    p = scn.params
    times = np.asarray(p["times"], float) if "times" in p else \
        np.linspace(0.0, float(p["t_max"]), int(p.get("points", 501)))
    init = scn.raw.get("initial", {})
    rho0 = QubitState(float(init.get("n", 0.0)),
                      complex(init.get("alpha_re", 0.0), init.get("alpha_im", 0.0)))
    if G.frame is generators.Frame.DRESSED:
        G = generators.to_lab(G)
    traj = dynamics.evolve(G, rho0, times)
    rows = [(t, s.n, s.alpha.real, s.alpha.imag) for t, s in zip(traj.times, traj.states)]
    return ["t", "n", "re_alpha", "im_alpha"], rows, {}


def _task_steady(scn, backend, G, pool, threads):
    s = _lab_state(G, dynamics.steady_state(G))
    drive = scn.drive_params()
    row = (s.n, s.alpha.real, s.alpha.imag, diagnostics.determinant(s),
           diagnostics.power_flow(s, drive.rabi, drive.omega_d))
    return ["n", "re_alpha", "im_alpha", "det", "power"], [row], {}


def _spectrum_grid(scn, gens):
    p = scn.params
    if "nu" in p:
        return np.asarray(p["nu"], float)
    points = int(p.get("points", 2001))
    if "half_width" in p:
        return np.linspace(-p["half_width"], p["half_width"], points)
    rate = max(fluorescence.relaxation_scale(G) for G in gens)
    omega = max(scn.drive_params().omega, 0.0)
    return fluorescence.default_grid(omega, rate, points)


def _parallel_spectrum(G, nu, pool, threads):
    chunks = [c for c in np.array_split(nu, max(1, threads)) if c.size]
    parts = list(pool.map(lambda c: fluorescence.spectrum_numeric(G, c), chunks))
    return np.concatenate([s.values for s in parts]), parts[0].elastic_weight


def _task_spectrum(scn, backend, G, pool, threads, nu):
    G = generators.to_lab(G)
    p = scn.params
    extras = {}
    if "sweep" in p:
        name, vals = p["sweep"]
        rows, weights, widths = [], [], []
        for v in vals:
            Gv = generators.to_lab(scn.generator(backend, {name: v}))
            g, w = _parallel_spectrum(Gv, nu, pool, threads)
            rows += [(v, x, y) for x, y in zip(nu, g)]
            weights.append(w)
            if "linewidth" in p:
                widths.append(fluorescence.linewidth(
                    fluorescence.Spectrum(nu, g, w), p["linewidth"]))
        extras["elastic_weight"] = weights
        if widths:
            extras["linewidth_" + p["linewidth"]] = widths
        return [name.split(".")[-1], "nu", "g"], rows, extras
    g, w = _parallel_spectrum(G, nu, pool, threads)
    extras["elastic_weight"] = w
    if "linewidth" in p:
        extras["linewidth_" + p["linewidth"]] = fluorescence.linewidth(
            fluorescence.Spectrum(nu, g, w), p["linewidth"])
    return ["nu", "g"], list(zip(nu, g)), extras


def _task_scan(scn, backend, G, pool, threads):
    p = scn.params
    res = diagnostics.scan2d(lambda **kw: scn.generator(backend, kw), p["axis1"], p["axis2"],
                             p.get("observable", "n_ss"), map_fn=pool.map)
    rows = []
    for i, a in enumerate(res.axis1[1]):
        for j, b in enumerate(res.axis2[1]):
            rows.append((a, b, res.values[i, j], res.status.get((i, j), "ok")))
    extras = {"failed_points": len(res.status)}
    return ["axis1", "axis2", "value", "status"], rows, extras


def regime_for(scn: Scenario) -> diagnostics.RegimeReport:
    drive = scn.drive_params()
    if drive.omega == 0:
        lr = scn.lab_rates(drive)
        rates = spectral.RateSet(lr.gamma_down, lr.gamma_up, lr.gamma_0, lr.gamma_0, lr.gamma_0)
    else:
        rates = scn.rate_set(drive)
    th = scn.raw.get("regime", {}).get("thresholds", (0.1, 0.3))
    return diagnostics.regime_report(rates, drive, scn.model(), tuple(th))


def run_scenario(scn: Scenario, out: Path, threads: int, fmt: str) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    drive = scn.drive_params()
    manifest = {
        "scenario": {**scn.raw, "name": scn.name},
        "resolved": {"drive": {"rabi": drive.rabi, "detuning": drive.detuning,
                               "omega_d": drive.omega_d, "omega": drive.omega,
                               "beta": drive.beta if drive.omega > 0 else None,
                               "omega0": drive.omega0},
                     "backends": {}},
        "outputs": [],
    }
    if drive.omega > 0:
        manifest["resolved"]["rates"] = scn.rate_set(drive).as_dict()
    manifest["resolved"]["lab_rates"] = vars(scn.lab_rates(drive))
    manifest["regime"] = regime_for(scn).as_dict()
    if scn.task == "regime":
        _write_manifest(out, scn, manifest)
        return manifest
    with ThreadPoolExecutor(max_workers=threads) as pool:
        gens = {b: scn.generator(b) for b in scn.backends} if scn.task != "scan" else {}
        nu = _spectrum_grid(scn, list(gens.values())) if scn.task == "spectrum" else None
        for b in scn.backends:
            G = gens.get(b)
            if G is not None:
                manifest["resolved"]["backends"][b] = {"frame": G.frame.value,
                                                       "derived_rates": G.derived_rates}
            if scn.task == "spectrum":
                cols, rows, extras = _task_spectrum(scn, b, G, pool, threads, nu)
            else:
                task = {"evolve": _task_evolve, "steady": _task_steady, "scan": _task_scan}[scn.task]
                cols, rows, extras = task(scn, b, G, pool, threads)
            path = write_table(out / f"{scn.name}_{b}_{scn.task}", cols, rows, fmt)
            manifest["outputs"].append({"backend": b, "file": path.name, **extras})
    _write_manifest(out, scn, manifest)
    return manifest


def _write_manifest(out, scn, manifest):
    path = out / f"{scn.name}_manifest.json"
    path.write_text(json.dumps(_jsonable(manifest), indent=1, sort_keys=True) + "\n")


# -- entry point ---------------------------------------------------------------

def _cmd_list(args) -> int:
    rows = []
    for name, entry in bundled_scenarios().items():
        data = tomllib.loads(entry.read_text())
        rows.append((name, data.get("figure", ""), data.get("task", ""), data.get("note", "")))
    width = max(len(r[0]) for r in rows)
    for name, fig, task, note in rows:
        line = f"{name:<{width}}  {fig:<10} {task:<9}"
        print((line + "  " + note).rstrip())
    return EXIT_OK


def _load(arg) -> Scenario:
    path = resolve_path(arg)
    return validate(load_file(path), path.name.rsplit(".", 1)[0])


def _cmd_run(args) -> int:
    scn = _load(args.scenario)
    threads = args.threads or os.cpu_count() or 1
    manifest = run_scenario(scn, Path(args.out), threads, args.format)
    for o in manifest["outputs"]:
        print(Path(args.out) / o["file"])
    print(Path(args.out) / f"{scn.name}_manifest.json")
    return EXIT_OK


def _cmd_regime(args) -> int:
    scn = _load(args.scenario)
    print(json.dumps(_jsonable(regime_for(scn).as_dict()), indent=1, sort_keys=True))
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="drivenqubit", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario file (or bundled scenario name)")
    p_run.add_argument("scenario")
    p_run.add_argument("--out", default="out")
    p_run.add_argument("--threads", type=int, default=None)
    p_run.add_argument("--format", choices=("csv", "json"), default="csv")
    p_run.set_defaults(func=_cmd_run)
    sub.add_parser("list-scenarios", help="list bundled scenarios").set_defaults(func=_cmd_list)
    p_reg = sub.add_parser("regime", help="print the validity report of a scenario")
    p_reg.add_argument("scenario")
    p_reg.set_defaults(func=_cmd_regime)
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except COMPUTATION_ERRORS as exc:
        print(f"computation error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"computation error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
