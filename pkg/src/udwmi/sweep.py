"""Parameter sweeps, deterministic tables, and the oracle cross-check suite.

A sweep is one axis (separation, boundary distance, acceleration, or
energy gap) swept over a fixed background of the remaining parameters,
once per gap-detuning ratio. Points are independent and run
data-parallel; output order is fixed by (curve, axis index) so files are
byte-identical whatever the worker count. A failing point keeps its row
with a fail status instead of aborting the run.

Config files are JSON; the presets/ directory ships one per figure-style
sweep plus the oracle cross-check grids. The UDWMI_WORKERS environment
variable caps process count.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import warnings

from .correlation import PairConfig, correlation_equal, correlation_general_result
from .infomeasure import PerturbativeRegimeWarning, mutual_information_point
from .kinematics import DomainError, detector_from_accel_radius
from .response import transition_probability, transition_probability_oracle_result

__all__ = [
    "AXIS_NAMES",
    "COLUMNS",
    "SweepAxis",
    "SweepSpec",
    "SweepRow",
    "load_config",
    "load_grid",
    "run_sweep",
    "emit_table",
    "run_oracle_suite",
    "count_interior_maxima",
]

AXIS_NAMES = ("sep", "dz", "accel", "gap")
_SPACINGS = ("linear", "log")

COLUMNS = ("gap_a", "gap_b", "accel", "radius", "sep", "dz", "free_space",
           "P_A", "P_B", "ReC", "ImC", "absC", "ReC1", "ImC1", "ReC2", "ImC2",
           "Lplus", "Lminus", "I", "slack", "err", "status")

_OUTPUT_KEYS = COLUMNS[7:21]


def _require_finite(name: str, value: float) -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    return value


@dataclass(frozen=True)
class SweepAxis:
    """One swept parameter: name, closed range, point count, spacing."""

    name: str
    start: float
    stop: float
    points: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if self.name not in AXIS_NAMES:
            raise DomainError(f"axis name must be one of {AXIS_NAMES}, "
                              f"got {self.name!r}")
        if self.spacing not in _SPACINGS:
            raise DomainError(f"axis spacing must be one of {_SPACINGS}, "
                              f"got {self.spacing!r}")
        object.__setattr__(self, "start", _require_finite("axis start", self.start))
        object.__setattr__(self, "stop", _require_finite("axis stop", self.stop))
        if not self.start < self.stop:
            raise DomainError(f"axis needs start < stop, got "
                              f"[{self.start}, {self.stop}]")
        if not isinstance(self.points, int) or self.points < 2:
            raise DomainError(f"axis needs at least 2 points, got {self.points}")
        if self.spacing == "log" and self.start <= 0.0:
            raise DomainError("log spacing needs a positive start")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


@dataclass(frozen=True)
class SweepSpec:
    """Full sweep description: axis, fixed parameters, gap-ratio curves.

    gap_ratios lists (gap_b - gap_a)/gap_a detunings, one output curve
    each. free_space=True (or dz=None) drops the mirror. oracle_check
    re-verifies the first point of every curve against the
    definition-level oracles and marks a mismatch as a failed row."""

    axis: SweepAxis
    name: str = "sweep"
    gap_a: float = 0.1
    gap_ratios: tuple[float, ...] = (0.0,)
    accel: float = 1.0
    radius: float = 1.0
    sep: float = 1.0
    dz: float | None = None
    free_space: bool = False
    tol: float = 1e-8
    oracle_check: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "gap_a", _require_finite("gap_a", self.gap_a))
        object.__setattr__(self, "accel", _require_finite("accel", self.accel))
        object.__setattr__(self, "radius", _require_finite("radius", self.radius))
        object.__setattr__(self, "sep", _require_finite("sep", self.sep))
        object.__setattr__(self, "tol", _require_finite("tol", self.tol))
        if self.accel < 0.0:
            raise DomainError(f"accel must be >= 0, got {self.accel}")
        if self.radius <= 0.0:
            raise DomainError(f"radius must be > 0, got {self.radius}")
        if self.sep < 0.0:
            raise DomainError(f"sep must be >= 0, got {self.sep}")
        if self.tol <= 0.0:
            raise DomainError(f"tol must be > 0, got {self.tol}")
        ratios = tuple(_require_finite("gap_ratio", r) for r in self.gap_ratios)
        if not ratios:
            raise DomainError("gap_ratios must be nonempty")
        object.__setattr__(self, "gap_ratios", ratios)
        if self.dz is not None:
            dz = _require_finite("dz", self.dz)
            if dz <= 0.0:
                raise DomainError(f"dz must be > 0, got {dz}")
            object.__setattr__(self, "dz", dz)
        if not self.free_space and self.dz is None and self.axis.name != "dz":
            raise DomainError("dz is required unless free_space is set "
                              "or dz is the swept axis")
        if self.free_space and self.axis.name == "dz":
            raise DomainError("sweeping dz makes no sense in free space")

    @classmethod
    def from_mapping(cls, cfg: dict) -> "SweepSpec":
        if not isinstance(cfg, dict):
            raise DomainError("sweep config must be a JSON object")
        known = {"name", "axis", "gap_a", "gap_ratios", "accel", "radius",
                 "sep", "dz", "free_space", "tol", "oracle_check",
                 "description"}
        unknown = set(cfg) - known
        if unknown:
            raise DomainError(f"unknown sweep config keys: {sorted(unknown)}")
        axis_cfg = cfg.get("axis")
        if not isinstance(axis_cfg, dict):
            raise DomainError("sweep config needs an 'axis' object")
        axis_known = {"name", "start", "stop", "points", "spacing"}
        axis_unknown = set(axis_cfg) - axis_known
        if axis_unknown:
            raise DomainError(f"unknown axis keys: {sorted(axis_unknown)}")
        try:
            axis = SweepAxis(
                name=axis_cfg["name"],
                start=axis_cfg["start"],
                stop=axis_cfg["stop"],
                points=axis_cfg["points"],
                spacing=axis_cfg.get("spacing", "linear"),
            )
        except KeyError as exc:
            raise DomainError(f"axis config missing key {exc}") from None
        kwargs = {k: cfg[k] for k in known - {"axis", "description"} if k in cfg}
        if "gap_ratios" in kwargs:
            kwargs["gap_ratios"] = tuple(kwargs["gap_ratios"])
        return cls(axis=axis, **kwargs)

    def point_params(self) -> list[dict]:
        """Resolved per-point parameter records in output order
        (curve-major, axis-minor)."""
        values = self.axis.values()
        out = []
        for ratio in self.gap_ratios:
            for v in values:
                gap_a = self.gap_a
                sep = self.sep
                dz = None if self.free_space else self.dz
                accel = self.accel
                v = float(v)
                if self.axis.name == "sep":
                    sep = v
                elif self.axis.name == "dz":
                    dz = None if self.free_space else v
                elif self.axis.name == "accel":
                    accel = v
                else:
                    gap_a = v
                out.append({
                    "gap_a": gap_a,
                    "gap_b": gap_a * (1.0 + ratio),
                    "accel": accel,
                    "radius": self.radius,
                    "sep": sep,
                    "dz": dz,
                    "free_space": dz is None,
                })
        return out


@dataclass(frozen=True)
class SweepRow:
    """One evaluated sweep point; field order mirrors the table columns."""

    gap_a: float
    gap_b: float
    accel: float
    radius: float
    sep: float
    dz: float | None
    free_space: bool
    p_a: float
    p_b: float
    re_c: float
    im_c: float
    abs_c: float
    re_c1: float
    im_c1: float
    re_c2: float
    im_c2: float
    l_plus: float
    l_minus: float
    mutual_info: float
    slack: float
    err: float
    status: str

    def to_record(self) -> dict:
        return {
            "gap_a": self.gap_a, "gap_b": self.gap_b, "accel": self.accel,
            "radius": self.radius, "sep": self.sep, "dz": self.dz,
            "free_space": self.free_space,
            "P_A": self.p_a, "P_B": self.p_b,
            "ReC": self.re_c, "ImC": self.im_c, "absC": self.abs_c,
            "ReC1": self.re_c1, "ImC1": self.im_c1,
            "ReC2": self.re_c2, "ImC2": self.im_c2,
            "Lplus": self.l_plus, "Lminus": self.l_minus,
            "I": self.mutual_info, "slack": self.slack, "err": self.err,
            "status": self.status,
        }


def _one_line(text: str, limit: int = 200) -> str:
    flat = " ".join(str(text).split())
    return flat[:limit]


def _evaluate_point(task: tuple[dict, float]) -> dict:
    """Worker: one sweep point to a flat output record. Never raises;
    exceptions become a fail status so the sweep keeps going."""
    params, tol = task
    outputs = {k: math.nan for k in _OUTPUT_KEYS}
    try:
        with warnings.catch_warnings(record=True) as wlog:
            warnings.simplefilter("always")
            det_a = detector_from_accel_radius(params["gap_a"],
                                               params["accel"],
                                               params["radius"])
            det_b = detector_from_accel_radius(params["gap_b"],
                                               params["accel"],
                                               params["radius"])
            pair = PairConfig(det_a=det_a, det_b=det_b,
                              sep=params["sep"], dz=params["dz"])
            pt = mutual_information_point(pair, tol)
    except Exception as exc:  # per-point isolation is the contract
        status = f"fail:{type(exc).__name__}:{_one_line(exc)}"
        return {**params, **outputs, "status": status}

    c = pt.corr
    outputs.update({
        "P_A": pt.p_a, "P_B": pt.p_b,
        "ReC": c.c_total.real, "ImC": c.c_total.imag,
        "absC": abs(c.c_total),
        "ReC1": c.c_free.real, "ImC1": c.c_free.imag,
        "ReC2": c.c_boundary.real, "ImC2": c.c_boundary.imag,
        "Lplus": pt.l_plus, "Lminus": pt.l_minus,
        "I": pt.mutual_info, "slack": pt.positivity_slack,
        "err": pt.abs_error_estimate,
    })
    tags = set()
    for w in wlog:
        if issubclass(w.category, PerturbativeRegimeWarning):
            tags.add("perturbative")
        else:
            tags.add("quadrature")
    if not c.converged:
        tags.add("tolerance")
    status = "ok" if not tags else "warn:" + ";".join(sorted(tags))
    return {**params, **outputs, "status": status}


def _row_from_record(rec: dict) -> SweepRow:
    return SweepRow(
        gap_a=rec["gap_a"], gap_b=rec["gap_b"], accel=rec["accel"],
        radius=rec["radius"], sep=rec["sep"], dz=rec["dz"],
        free_space=rec["free_space"],
        p_a=rec["P_A"], p_b=rec["P_B"],
        re_c=rec["ReC"], im_c=rec["ImC"], abs_c=rec["absC"],
        re_c1=rec["ReC1"], im_c1=rec["ImC1"],
        re_c2=rec["ReC2"], im_c2=rec["ImC2"],
        l_plus=rec["Lplus"], l_minus=rec["Lminus"],
        mutual_info=rec["I"], slack=rec["slack"], err=rec["err"],
        status=rec["status"],
    )


def _resolve_workers(requested: int | None) -> int:
    if requested is not None and requested < 1:
        raise DomainError(f"workers must be >= 1, got {requested}")
    cap_text = os.environ.get("UDWMI_WORKERS")
    cap = None
    if cap_text:
        try:
            cap = int(cap_text)
        except ValueError:
            raise DomainError(f"UDWMI_WORKERS must be an integer, "
                              f"got {cap_text!r}") from None
        if cap < 1:
            raise DomainError(f"UDWMI_WORKERS must be >= 1, got {cap}")
    n = requested if requested is not None else min(os.cpu_count() or 1, 8)
    if cap is not None:
        n = min(n, cap)
    return max(1, n)


def _map_tasks(fn, tasks, workers: int | None):
    n = _resolve_workers(workers)
    if n == 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, tasks, chunksize=chunk))


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """Evaluate every sweep point; deterministic row order (curve-major,
    axis-minor) independent of worker count."""
    params = spec.point_params()
    tasks = [(p, spec.tol) for p in params]
    records = _map_tasks(_evaluate_point, tasks, workers)

    if spec.oracle_check:
        n_axis = spec.axis.points
        for idx in range(0, len(records), n_axis):
            rec = records[idx]
            if rec["status"].startswith("fail"):
                continue
            check = _oracle_check_record(rec, spec.tol)
            if check is not None:
                records[idx] = {**rec, "status": check}

    return [_row_from_record(r) for r in records]


def _oracle_check_record(rec: dict, tol: float) -> str | None:
    """Cross-check one evaluated record against the definition oracles;
    returns a replacement fail status on mismatch, None when clean."""
    det_a = detector_from_accel_radius(rec["gap_a"], rec["accel"], rec["radius"])
    pair = PairConfig(
        det_a=det_a,
        det_b=detector_from_accel_radius(rec["gap_b"], rec["accel"], rec["radius"]),
        sep=rec["sep"], dz=rec["dz"])
    est = correlation_general_result(pair)
    c_fast = complex(rec["ReC"], rec["ImC"])
    dev = abs(c_fast - est.value)
    budget = max(1e-3 * abs(est.value), rec["err"] + est.error_estimate)
    if dev > budget:
        return (f"fail:oracle-mismatch:correlation dev {dev:.3g} "
                f"exceeds {budget:.3g}")
    oa = transition_probability_oracle_result(det_a, rec["dz"])
    dev_p = abs(rec["P_A"] - oa.value)
    budget_p = max(1e-3 * abs(oa.value), rec["err"] + oa.error_estimate)
    if dev_p > budget_p:
        return (f"fail:oracle-mismatch:response dev {dev_p:.3g} "
                f"exceeds {budget_p:.3g}")
    return None


def _fmt(x) -> str:
    return f"{x:.12g}"


def _csv_cell(key: str, value) -> str:
    if key == "status":
        return value
    if key == "free_space":
        return "true" if value else "false"
    if key == "dz":
        return "" if value is None else _fmt(value)
    return _fmt(value)


def _json_value(key: str, value):
    if key in ("status", "free_space", "dz"):
        return value
    v = float(value)
    if math.isnan(v) or math.isinf(v):
        return None
    return float(_fmt(v))


def emit_table(rows: list[SweepRow], fmt: str, destination) -> None:
    """Write rows as CSV or JSON to a path or text stream.

    Numbers carry 12 significant digits in both formats; a NaN output of
    a failed point becomes null in JSON and 'nan' in CSV."""
    if not rows:
        raise DomainError("no rows to emit")
    if fmt not in ("csv", "json"):
        raise DomainError(f"format must be csv or json, got {fmt!r}")

    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COLUMNS)
        for row in rows:
            rec = row.to_record()
            writer.writerow([_csv_cell(k, rec[k]) for k in COLUMNS])
        text = buf.getvalue()
    else:
        payload = [{k: _json_value(k, row.to_record()[k]) for k in COLUMNS}
                   for row in rows]
        text = json.dumps(payload, indent=2) + "\n"

    if hasattr(destination, "write"):
        destination.write(text)
        return
    path = Path(destination)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"writing table to {path}: {exc}") from exc


def _preset_dir():
    return resources.files("udwmi") / "presets"


def _load_json_source(source, kind: str) -> dict:
    """Load a JSON config from a path or a packaged preset name."""
    if isinstance(source, dict):
        return source
    p = Path(source)
    if p.exists():
        try:
            return json.loads(p.read_text())
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON in {p}: {exc}") from None
    name = str(source)
    if not name.endswith(".json"):
        name += ".json"
    preset = _preset_dir() / name
    if preset.is_file():
        return json.loads(preset.read_text())
    available = sorted(f.name[:-5] for f in _preset_dir().iterdir()
                       if f.name.endswith(".json"))
    raise DomainError(f"no such {kind} file or preset: {source!r} "
                      f"(presets: {', '.join(available)})")


def load_config(source) -> SweepSpec:
    """Sweep config from a JSON path, preset name, or mapping."""
    return SweepSpec.from_mapping(_load_json_source(source, "sweep config"))


def load_grid(source) -> dict:
    """Oracle-suite grid from a JSON path, preset name, or mapping."""
    grid = _load_json_source(source, "oracle grid")
    if not isinstance(grid, dict):
        raise DomainError("oracle grid must be a JSON object")
    grid = dict(grid)
    grid.setdefault("rel_tol", 1e-3)
    grid.setdefault("response_points", [])
    grid.setdefault("correlation_points", [])
    if not (grid["response_points"] or grid["correlation_points"]):
        raise DomainError("oracle grid has no points")
    return grid


def _pair_from_params(p: dict) -> PairConfig:
    det_a = detector_from_accel_radius(p["gap_a"], p["accel"], p["radius"])
    det_b = detector_from_accel_radius(p["gap_b"], p["accel"], p["radius"])
    return PairConfig(det_a=det_a, det_b=det_b, sep=p["sep"], dz=p.get("dz"))


def _response_value(params: dict) -> tuple[float, float]:
    spec = detector_from_accel_radius(params["gap"], params["accel"],
                                      params["radius"])
    res = transition_probability(spec, params.get("dz"))
    return res.total, res.abs_error_estimate


def _response_oracle_value(params: dict) -> tuple[float, float]:
    spec = detector_from_accel_radius(params["gap"], params["accel"],
                                      params["radius"])
    est = transition_probability_oracle_result(spec, params.get("dz"))
    return float(est.value), est.error_estimate


def _correlation_value(params: dict) -> tuple[complex, float, complex]:
    res = correlation_equal(_pair_from_params(params))
    return res.c_total, res.abs_error_estimate, res.c_boundary


def _correlation_oracle_value(params: dict) -> tuple[complex, float]:
    est = correlation_general_result(_pair_from_params(params))
    return est.value, est.error_estimate


def _suite_response_point(params: dict) -> dict:
    value, err = _response_value(params)
    oracle, oerr = _response_oracle_value(params)
    return _deviation_record(params, value, err, oracle, oerr)


def _suite_correlation_point(params: dict) -> dict:
    value, err, c_boundary = _correlation_value(params)
    oracle, oerr = _correlation_oracle_value(params)
    rec = _deviation_record(params, value, err, oracle, oerr)
    rec["c_boundary"] = [c_boundary.real, c_boundary.imag]
    return rec


def _deviation_record(params, value, err, oracle, oerr) -> dict:
    abs_dev = abs(value - oracle)
    rel_dev = abs_dev / max(abs(oracle), 1e-300)
    if isinstance(value, complex):
        stored_value = [value.real, value.imag]
        stored_oracle = [oracle.real, oracle.imag]
    else:
        stored_value = value
        stored_oracle = float(oracle)
    return {
        "params": dict(params),
        "value": stored_value,
        "oracle": stored_oracle,
        "abs_dev": abs_dev,
        "rel_dev": rel_dev,
        "err": err,
        "oracle_err": oerr,
        "within_combined_err": bool(abs_dev <= err + oerr),
    }


def run_oracle_suite(grid: dict, *, workers: int | None = None,
                     response_fn=None, response_oracle_fn=None,
                     correlation_fn=None, correlation_oracle_fn=None) -> dict:
    """Cross-check the fast paths against the definition-level oracles
    on a grid of points; pass/fail against the grid's rel_tol (default
    1e-3 relative deviation).

    The *_fn hooks substitute either side of a check (used by the
    mutation-sanity test); any hook forces serial execution since
    closures do not cross process boundaries."""
    grid = load_grid(grid)
    rel_tol = float(grid["rel_tol"])
    if rel_tol <= 0.0:
        raise DomainError(f"rel_tol must be > 0, got {rel_tol}")
    injected = any(fn is not None for fn in (response_fn, response_oracle_fn,
                                             correlation_fn,
                                             correlation_oracle_fn))

    if injected:
        r_fn = response_fn or _response_value
        ro_fn = response_oracle_fn or _response_oracle_value
        c_fn = correlation_fn or (lambda p: _correlation_value(p)[:2])
        co_fn = correlation_oracle_fn or _correlation_oracle_value
        resp_records = []
        for p in grid["response_points"]:
            value, err = r_fn(p)
            oracle, oerr = ro_fn(p)
            resp_records.append(_deviation_record(p, value, err, oracle, oerr))
        corr_records = []
        for p in grid["correlation_points"]:
            value, err = c_fn(p)
            oracle, oerr = co_fn(p)
            corr_records.append(_deviation_record(p, value, err, oracle, oerr))
    else:
        resp_records = _map_tasks(_suite_response_point,
                                  list(grid["response_points"]), workers)
        corr_records = _map_tasks(_suite_correlation_point,
                                  list(grid["correlation_points"]), workers)

    def section(records):
        max_rel = max((r["rel_dev"] for r in records), default=0.0)
        return {
            "points": records,
            "max_rel_dev": max_rel,
            "ok": all(r["rel_dev"] <= rel_tol for r in records),
            "all_within_combined_err": all(r["within_combined_err"]
                                           for r in records),
        }

    report = {
        "name": grid.get("name", "oracle-grid"),
        "rel_tol": rel_tol,
        "response": section(resp_records),
        "correlation": section(corr_records),
    }
    report["ok"] = report["response"]["ok"] and report["correlation"]["ok"]
    return report


def count_interior_maxima(values, prominence_rel: float = 1e-4) -> int:
    """Number of interior local maxima with prominence above
    prominence_rel times the curve maximum. Endpoints never count."""
    from scipy.signal import find_peaks

    y = np.asarray(values, dtype=float)
    if y.ndim != 1 or y.size < 3:
        raise DomainError("need a 1-D curve with at least 3 samples")
    if not np.all(np.isfinite(y)):
        raise DomainError("curve contains non-finite values")
    scale = float(np.max(np.abs(y)))
    if scale == 0.0:
        return 0
    peaks, _ = find_peaks(y, prominence=prominence_rel * scale)
    return int(len(peaks))
