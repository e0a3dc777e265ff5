"""Parameter sweeps: JSON run configurations, grid evaluation, CSV/JSON output."""
from concurrent.futures import ProcessPoolExecutor
import copy
import csv
from dataclasses import dataclass, field
import itertools
import json
import math

import numpy as np

from .errors import ConfigError, QcorrError
from .graphene import GrapheneParams, analytic_eigensystem, ground_state, thermal_state
from .measures import bures_entanglement, concurrence_mixed, concurrence_pure, full_report, tmin_closed, uin_closed
from .qmat import canonicalize_fano, pauli_decompose
from .teleport import (
    InputState,
    average_fidelity_channel,
    channel_probabilities,
    classical_threshold_check,
    fidelity_pure,
    output_closed_ab,
    teleport_output,
)

PARAM_NAMES = ("eta", "eta_x", "eta_y", "lambda", "alpha", "T", "theta", "beta_phase")
DEFAULTS = {
    "eta": 1.0,
    "eta_x": 1.0,
    "eta_y": 1.0,
    "lambda": 1.0,
    "alpha": 0.0,
    "T": 1.0,
    "theta": math.pi / 2,
    "beta_phase": 0.0,
}
MODES = ("ground", "thermal", "teleport", "verify")
STATES = ("ground", "phi1", "phi2", "phi3", "phi4")
CONFIG_KEYS = {"mode", "fixed", "axes", "outputs", "seed", "samples", "state"}

_CORR = ("concurrence", "bures", "bures_raw", "tmin", "tmin_closed", "tmin_oracle", "uin", "uin_closed", "uin_oracle")
OUTPUTS = {
    "ground": _CORR + ("energy", "state"),
    "thermal": _CORR + ("tmin_closed_l2", "uin_closed_bloch"),
    "teleport": ("P0", "P1", "P2", "P3", "a", "b", "b_numeric", "fidelity", "avg_fidelity", "avg_fidelity_closed", "quantum"),
    "verify": (),
}
DEFAULT_OUTPUTS = {
    "ground": ["concurrence", "bures", "tmin", "uin", "energy", "state"],
    "thermal": ["concurrence", "bures", "tmin", "uin"],
    "teleport": ["avg_fidelity", "avg_fidelity_closed", "fidelity", "a", "b", "quantum"],
    "verify": [],
}


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self):
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class SweepSpec:
    mode: str
    fixed: dict = field(default_factory=dict)
    axes: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    seed: int = 0
    samples: int = 100
    state: str = "ground"

    def grid(self):
        """Parameter dicts in row-major order, first axis outermost."""
        base = dict(DEFAULTS)
        base.update(self.fixed)
        names = [a.name for a in self.axes]
        for combo in itertools.product(*(a.values() for a in self.axes)):
            point = dict(base)
            point.update({n: float(v) for n, v in zip(names, combo)})
            yield point

    def columns(self):
        used = set(self.fixed) | {a.name for a in self.axes}
        return [n for n in PARAM_NAMES if n in used]


@dataclass
class SweepRow:
    params: dict
    values: dict
    flags: list = field(default_factory=list)
    error: str | None = None


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where} must be a finite number, got {value!r}", field=where)
    return float(value)


def _axis(raw, i):
    where = f"axes[{i}]"
    if isinstance(raw, dict):
        unknown = set(raw) - {"name", "start", "stop", "count", "spacing"}
        if unknown:
            raise ConfigError(f"{where}: unknown keys {sorted(unknown)}", field=where)
        try:
            raw = [raw["name"], raw["start"], raw["stop"], raw["count"], raw.get("spacing", "linear")]
        except KeyError as exc:
            raise ConfigError(f"{where}: missing {exc.args[0]!r}", field=where) from None
    if not isinstance(raw, list) or len(raw) not in (4, 5):
        raise ConfigError(f"{where} must be [name, start, stop, count, spacing]", field=where)
    name, start, stop, count = raw[:4]
    spacing = raw[4] if len(raw) == 5 else "linear"
    if name not in PARAM_NAMES:
        raise ConfigError(f"{where}: unknown parameter {name!r}", field=f"{where}.name")
    start = _number(start, f"{where}.start")
    stop = _number(stop, f"{where}.stop")
    if isinstance(count, bool) or not isinstance(count, int) or count < 2:
        raise ConfigError(f"{where}.count must be an integer >= 2", field=f"{where}.count")
    if not start < stop:
        raise ConfigError(f"{where}: start must be < stop", field=f"{where}.start")
    if spacing not in ("linear", "log"):
        raise ConfigError(f"{where}.spacing must be 'linear' or 'log'", field=f"{where}.spacing")
    if spacing == "log" and start <= 0:
        raise ConfigError(f"{where}: log spacing needs start > 0", field=f"{where}.start")
    return Axis(name, start, stop, count, spacing)


def spec_from_dict(cfg, mode=None):
    if not isinstance(cfg, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys {sorted(unknown)}", field=sorted(unknown)[0])
    cfg_mode = cfg.get("mode", mode)
    if cfg_mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {cfg_mode!r}", field="mode")
    if mode is not None and cfg_mode != mode:
        raise ConfigError(f"configuration mode {cfg_mode!r} does not match command {mode!r}", field="mode")
    fixed_raw = cfg.get("fixed", {})
    if not isinstance(fixed_raw, dict):
        raise ConfigError("fixed must be an object", field="fixed")
    fixed = {}
    for k, v in fixed_raw.items():
        if k not in PARAM_NAMES:
            raise ConfigError(f"unknown parameter {k!r} in fixed", field=f"fixed.{k}")
        fixed[k] = _number(v, f"fixed.{k}")
    axes_raw = cfg.get("axes", [])
    if not isinstance(axes_raw, list):
        raise ConfigError("axes must be a list", field="axes")
    axes = [_axis(a, i) for i, a in enumerate(axes_raw)]
    if cfg_mode != "verify":
        if not 1 <= len(axes) <= 2:
            raise ConfigError("a sweep needs one or two axes", field="axes")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise ConfigError("axis names must be distinct", field="axes")
        clash = set(names) & set(fixed)
        if clash:
            raise ConfigError(f"parameter {sorted(clash)[0]!r} is both fixed and swept", field="axes")
    outputs = cfg.get("outputs", DEFAULT_OUTPUTS[cfg_mode])
    if not isinstance(outputs, list) or not all(isinstance(o, str) for o in outputs):
        raise ConfigError("outputs must be a list of measure names", field="outputs")
    for o in outputs:
        if o not in OUTPUTS[cfg_mode]:
            raise ConfigError(f"unknown output {o!r} for mode {cfg_mode!r}", field="outputs")
    if cfg_mode != "verify" and not outputs:
        raise ConfigError("outputs must not be empty", field="outputs")
    seed = cfg.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ConfigError("seed must be an integer", field="seed")
    samples = cfg.get("samples", 100)
    if isinstance(samples, bool) or not isinstance(samples, int) or samples < 0:
        raise ConfigError("samples must be a non-negative integer", field="samples")
    state = cfg.get("state", "ground")
    if state not in STATES:
        raise ConfigError(f"state must be one of {STATES}", field="state")
    return SweepSpec(cfg_mode, fixed, axes, list(outputs), seed, samples, state)


def parse_config(text, mode=None):
    """Validate a JSON run configuration into a :class:`SweepSpec`."""
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return spec_from_dict(cfg, mode)


_PI = math.pi
PRESETS = {
    "fig2a": {
        "mode": "ground",
        "fixed": {"lambda": 1.0, "eta_x": 1.0, "eta_y": 1.0},
        "axes": [["eta", 0.0, 5.0, 200, "linear"]],
        "outputs": ["concurrence", "bures", "bures_raw", "state"],
    },
    "fig2b": {
        "mode": "ground",
        "fixed": {"eta": 1.0, "eta_x": 1.0, "eta_y": 1.0},
        "axes": [["lambda", 0.01, 5.0, 200, "linear"]],
        "outputs": ["concurrence", "bures", "bures_raw", "state"],
    },
    "fig3a": {
        "mode": "ground",
        "state": "phi3",
        "fixed": {"lambda": 1.0, "eta_x": 1.0, "eta_y": 1.0},
        "axes": [["eta", 0.0, 5.0, 200, "linear"]],
        "outputs": ["concurrence", "bures", "bures_raw"],
    },
    "fig3b": {
        "mode": "ground",
        "state": "phi3",
        "fixed": {"eta": 1.0, "eta_x": 5.0, "eta_y": 1.0},
        "axes": [["lambda", 0.01, 5.0, 200, "linear"]],
        "outputs": ["concurrence", "bures", "bures_raw"],
    },
    "fig4": {
        "mode": "thermal",
        "fixed": {"eta": 1.0, "lambda": 1.0, "alpha": _PI / 3, "eta_x": 1.0, "eta_y": 1.0},
        "axes": [["T", 0.01, 5.0, 200, "linear"]],
        "outputs": ["bures", "tmin", "uin"],
    },
    "fig5": {
        "mode": "thermal",
        "fixed": {"eta": 1.0, "alpha": _PI / 3, "eta_x": 3.0, "eta_y": 6.0},
        "axes": [["lambda", 0.5, 2.0, 3, "log"], ["T", 0.01, 5.0, 200, "linear"]],
        "outputs": ["bures", "tmin", "uin"],
    },
    "fig6a": {
        "mode": "teleport",
        "fixed": {"eta": 1.0, "alpha": _PI, "theta": _PI / 2, "lambda": 1.0, "eta_x": 1.0, "eta_y": 3.0},
        "axes": [["T", 0.01, 5.0, 200, "linear"]],
        "outputs": ["avg_fidelity", "avg_fidelity_closed", "fidelity", "quantum"],
    },
    "fig6b": {
        "mode": "teleport",
        "fixed": {"eta": 1.0, "alpha": _PI, "theta": _PI / 2, "eta_x": 1.0, "eta_y": 3.0},
        "axes": [["lambda", 0.5, 2.0, 3, "log"], ["T", 0.01, 5.0, 200, "linear"]],
        "outputs": ["avg_fidelity", "avg_fidelity_closed", "fidelity", "quantum"],
    },
}
for _name, (_ex, _ey) in {"fig7a": (1.0, 1.0), "fig7b": (3.0, 1.0), "fig7c": (1.0, 3.0)}.items():
    PRESETS[_name] = {
        "mode": "teleport",
        "fixed": {"eta": 1.0, "alpha": _PI, "theta": _PI / 2, "eta_x": _ex, "eta_y": _ey},
        "axes": [["T", 0.01, 5.0, 50, "linear"], ["lambda", 0.1, 5.0, 50, "linear"]],
        "outputs": ["avg_fidelity", "avg_fidelity_closed", "quantum"],
    }


def preset_config(name, overrides=None):
    """Preset configuration dict, optionally merged with user overrides.

    ``fixed`` entries merge key by key; any other key replaces the preset's.
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}", field="preset")
    cfg = copy.deepcopy(PRESETS[name])
    for k, v in (overrides or {}).items():
        if k == "fixed" and isinstance(v, dict):
            cfg["fixed"].update(v)
        else:
            cfg[k] = v
    swept = {a[0] if isinstance(a, list) else a.get("name") for a in cfg.get("axes", [])}
    cfg["fixed"] = {k: v for k, v in cfg["fixed"].items() if k not in swept}
    return cfg


def _params(point):
    return GrapheneParams(point["eta"], point["eta_x"], point["eta_y"], point["lambda"], point["alpha"])


def _correlations(rho, wanted, concurrence=None):
    out = {}
    c = concurrence_mixed(rho) if concurrence is None else concurrence
    raw, normalized = bures_entanglement(c)
    out.update(concurrence=c, bures=normalized, bures_raw=raw)
    flags = []
    if wanted & {"tmin", "tmin_oracle", "tmin_closed", "uin", "uin_oracle", "uin_closed"}:
        rep = full_report(rho, concurrence=c)
        out.update(
            tmin=rep.tmin,
            tmin_oracle=rep.tmin_oracle,
            tmin_closed=rep.tmin_closed,
            uin=rep.uin,
            uin_oracle=rep.uin_oracle,
            uin_closed=rep.uin_closed,
        )
        flags = [f"{name}:{mag:.3e}" for name, mag in rep.discrepancy_flags]
    if "tmin_closed_l2" in wanted:
        out["tmin_closed_l2"] = tmin_closed(canonicalize_fano(pauli_decompose(rho)), norm="l2")[0]
    if "uin_closed_bloch" in wanted:
        out["uin_closed_bloch"] = uin_closed(rho, s_prime="bloch")
    return out, flags


def evaluate_point(mode, point, outputs, state="ground"):
    """Compute the requested measures at one grid point."""
    wanted = set(outputs)
    p = _params(point)
    if mode == "ground":
        if state == "ground":
            g = ground_state(p, point["beta_phase"])
            psi, energy, label = g.state, g.energy, g.label
        else:
            k = int(state[-1]) - 1
            branches = analytic_eigensystem(p)
            psi, energy, label = branches.states[:, k], float(branches.energies[k]), state
        rho = np.outer(psi, psi.conj())
        vals, flags = _correlations(rho, wanted, concurrence=concurrence_pure(psi))
        vals.update(energy=energy, state=label)
    elif mode == "thermal":
        vals, flags = _correlations(thermal_state(p, point["T"]), wanted)
    elif mode == "teleport":
        rho_ch = thermal_state(p, point["T"])
        probs = channel_probabilities(rho_ch)
        a, b = output_closed_ab(p, point["T"])
        inp = InputState(point["theta"])
        rho_out = teleport_output(inp.rho, probs=probs)
        vals = {f"P{i}": float(probs[i]) for i in range(4)}
        fa = average_fidelity_channel(rho_ch) if wanted & {"avg_fidelity", "quantum"} else float("nan")
        vals.update(
            a=a,
            b=b,
            b_numeric=float(teleport_output(InputState(math.pi / 2).rho, probs=probs)[0, 3].real),
            fidelity=fidelity_pure(inp, rho_out),
            avg_fidelity=fa,
            avg_fidelity_closed=a + 2.0 * b / 3.0,
            quantum=classical_threshold_check(fa),
        )
        flags = []
    else:
        raise ConfigError(f"mode {mode!r} has no grid evaluation", field="mode")
    return {o: vals[o] for o in outputs}, flags


def _run_point(args):
    mode, point, outputs, state = args
    try:
        vals, flags = evaluate_point(mode, point, outputs, state)
        return vals, flags, None
    except (QcorrError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return {o: None for o in outputs}, [], f"{type(exc).__name__}: {exc}"


def run_sweep(spec, workers=1):
    """Evaluate every grid point; rows come back in grid order.

    Per-point failures are recorded in the row's ``error`` field.
    """
    cols = spec.columns()
    points = list(spec.grid())
    jobs = [(spec.mode, pt, spec.outputs, spec.state) for pt in points]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_point, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_point(j) for j in jobs]
    return [
        SweepRow({c: pt[c] for c in cols}, vals, flags, err) for pt, (vals, flags, err) in zip(points, results)
    ]


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    return format(float(v), ".17g")


def header(rows):
    first = rows[0]
    return list(first.params) + list(first.values) + ["flags", "error"]


def emit_csv(rows, path):
    """Write rows as CSV (CRLF line endings, 17 significant digits)."""
    if not rows:
        raise ValueError("no rows to write")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_csv(rows, fh)


def write_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\r\n")
    w.writerow(header(rows))
    for r in rows:
        w.writerow(
            [_fmt(v) for v in r.params.values()]
            + [_fmt(v) for v in r.values.values()]
            + [";".join(r.flags), r.error or ""]
        )


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    return v


def rows_to_json(rows):
    out = []
    for r in rows:
        obj = {k: _jsonable(v) for k, v in r.params.items()}
        obj.update({k: _jsonable(v) for k, v in r.values.items()})
        obj["flags"] = list(r.flags)
        obj["error"] = r.error
        out.append(obj)
    return json.dumps(out, indent=1)


def emit_json(rows, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(rows_to_json(rows))
        fh.write("\n")


def read_csv(path):
    """Parse a file written by :func:`emit_csv` back into dicts of floats/strings."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = []
        for raw in reader:
            row = {}
            for k, v in raw.items():
                if k in ("flags", "error", "state"):
                    row[k] = v
                elif v == "":
                    row[k] = None
                elif v in ("true", "false"):
                    row[k] = v == "true"
                else:
                    row[k] = float(v)
            rows.append(row)
    return rows
