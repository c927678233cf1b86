"""Command-line front end: JSON experiment configs in, CSV tables out.

Subcommands::

    qeraser simulate --config exp.json [--out table.csv] [--seed N] [--shots N] [--no-timestamp]
    qeraser sweep    --config exp.json ...        (config must contain a sweep block)
    qeraser chsh     [--config exp.json] ...      (defaults to the optimal quadruple)
    qeraser validate --config exp.json
    qeraser selftest [--seed N]

Exit codes: 0 success, 2 configuration error, 3 self-check failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from typing import Any, Optional

import numpy as np

from . import epr, mwi, selftest, shots
from . import scully_druhl as sd
from .interferometer import InterferometerConfig, detect_probabilities, fringe_visibility, spinor_basis
from .qstate import UNPOLARIZED, ValidationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SELFCHECK = 3

EXPERIMENTS = ("single-mzi", "entanglement-eraser", "epr-bohm", "scully-druhl", "mwi-check", "chsh")
POLAR = ("theta1", "theta2", "vartheta")
AZIMUTHAL = ("phi1", "phi2", "varphi", "delta")
COMMON_KEYS = {"experiment", "shots", "seed", "sweep"}
KEYS = {
    "single-mzi": {"theta1", "phi1", "vartheta", "varphi", "unpolarized"},
    "entanglement-eraser": {"theta1", "phi1", "theta2", "phi2"},
    "epr-bohm": {"theta1", "phi1", "theta2", "phi2"},
    "scully-druhl": {"theta1", "phi1", "theta2", "phi2", "source"},
    "mwi-check": {"configs"},
    "chsh": {"directions"},
}
SWEEPABLE = {
    "single-mzi": ("theta1", "phi1", "vartheta", "varphi"),
    "entanglement-eraser": ("theta1", "phi1", "theta2", "phi2"),
    "epr-bohm": ("theta1", "phi1", "theta2", "phi2"),
    "scully-druhl": ("theta1", "phi1", "theta2", "phi2", "mu_s", "delta"),
    "mwi-check": (),
    "chsh": (),
}
SOURCE_KEYS = {"kind", "mu_s", "delta", "alpha1", "alpha2"}
DIRECTION_KEYS = ("a", "a_prime", "b", "b_prime")
SIGMA_BAND = 5.0
DEFAULTS = {
    "theta1": math.pi / 2,
    "phi1": 0.0,
    "theta2": math.pi / 2,
    "phi2": 0.0,
    "vartheta": math.pi / 2,
    "varphi": 0.0,
}


class ConfigError(ValueError):
    """Carries every violation found in a config, not just the first."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass(frozen=True)
class Sweep:
    parameter: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    theta1: float = DEFAULTS["theta1"]
    phi1: float = DEFAULTS["phi1"]
    theta2: float = DEFAULTS["theta2"]
    phi2: float = DEFAULTS["phi2"]
    vartheta: float = DEFAULTS["vartheta"]
    varphi: float = DEFAULTS["varphi"]
    unpolarized: bool = False
    source: Optional[sd.SourceModel] = None
    environment: sd.SourceOverlap = sd.SourceOverlap(1.0, 0.0)
    directions: Optional[tuple] = None
    configs: int = 100
    shots: int = 0
    seed: int = 0
    sweep: Optional[Sweep] = None


# ---------------------------------------------------------------------------
# parsing


def _degree_hint(key: str) -> str:
    return f"{key}: angles are accepted in radians only (e.g. {key}=1.5707963267948966 for 90 degrees)"


def _angle(key: str, value: Any, problems: list[str]) -> Optional[float]:
    if isinstance(value, str):
        if "deg" in value.lower() or "°" in value:
            problems.append(_degree_hint(key))
        else:
            problems.append(f"{key}: expected a number in radians, got {value!r}")
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        problems.append(f"{key}: expected a finite number, got {value!r}")
        return None
    value = float(value)
    if key in POLAR:
        lo, hi, legal = 0.0, math.pi, "[0, pi]"
    else:
        lo, hi, legal = -2 * math.pi, 2 * math.pi, "[-2*pi, 2*pi]"
    if not lo <= value <= hi:
        msg = f"{key}={value!r} is outside the legal range {legal}"
        if abs(value) > 2 * math.pi:
            msg += " (angles are in radians; degrees are not accepted)"
        problems.append(msg)
        return None
    return value


def _int(key: str, value: Any, lo: int, hi: Optional[int], problems: list[str]) -> Optional[int]:
    if isinstance(value, bool) or not isinstance(value, int):
        problems.append(f"{key}: expected an integer, got {value!r}")
        return None
    if value < lo or (hi is not None and value >= hi):
        bound = f"[{lo}, {hi})" if hi is not None else f">= {lo}"
        problems.append(f"{key}={value} is outside the legal range {bound}")
        return None
    return value


def _complex(key: str, value: Any, problems: list[str]) -> Optional[complex]:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    problems.append(f"source.{key}: expected a number or [re, im], got {value!r}")
    return None


def _parse_source(raw: Any, problems: list[str]):
    if not isinstance(raw, dict):
        problems.append("source: expected an object")
        return None, sd.SourceOverlap(1.0, 0.0)
    for k in raw:
        if k not in SOURCE_KEYS:
            problems.append(f"unknown key 'source.{k}'")
    kind = raw.get("kind")
    if kind not in sd.SOURCE_KINDS:
        problems.append(f"source.kind: expected one of {list(sd.SOURCE_KINDS)}, got {kind!r}")
        return None, sd.SourceOverlap(1.0, 0.0)
    mu, delta = raw.get("mu_s"), raw.get("delta", 0.0)
    overlap = None
    if mu is not None or kind == "custom":
        if mu is None:
            problems.append("source.mu_s is required for a custom source")
        elif isinstance(mu, bool) or not isinstance(mu, (int, float)) or not 0.0 <= mu <= 1.0:
            problems.append(f"source.mu_s={mu!r} is outside the legal range [0, 1]")
        else:
            d = _angle("delta", delta, problems)
            if d is not None:
                overlap = sd.SourceOverlap(float(mu), d)
    if kind in ("identical", "orthogonal") and ("mu_s" in raw or "delta" in raw):
        problems.append(f"source.mu_s/delta are not used by kind {kind!r}")
    if kind == "spacs":
        a1 = _complex("alpha1", raw.get("alpha1", 1.0), problems)
        a2 = _complex("alpha2", raw.get("alpha2", 1.0), problems)
        if a1 is None or a2 is None:
            return None, sd.SourceOverlap(1.0, 0.0)
        return sd.SourceModel.spacs(a1, a2), sd.SourceOverlap(1.0, 0.0)
    if kind == "custom":
        return (sd.SourceModel.custom(overlap) if overlap else None), sd.SourceOverlap(1.0, 0.0)
    if kind == "ideal-idler":
        # mu_s / delta here describe the extra environment footprint
        return sd.SourceModel.ideal_idler(), overlap or sd.SourceOverlap(1.0, 0.0)
    return sd.SourceModel(kind), sd.SourceOverlap(1.0, 0.0)


def _parse_directions(raw: Any, problems: list[str]):
    if not isinstance(raw, dict):
        problems.append("directions: expected an object with keys a, a_prime, b, b_prime")
        return None
    out = []
    for k in raw:
        if k not in DIRECTION_KEYS:
            problems.append(f"unknown key 'directions.{k}'")
    for k in DIRECTION_KEYS:
        v = raw.get(k)
        if not (isinstance(v, list) and len(v) == 3 and all(isinstance(x, (int, float)) for x in v)):
            problems.append(f"directions.{k}: expected a 3-vector, got {v!r}")
            continue
        vec = np.array(v, dtype=float)
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > 1e-6:
            problems.append(f"directions.{k}: |v| = {norm:.9g} deviates from 1 by more than 1e-6")
            continue
        out.append(vec / norm)
    return tuple(out) if len(out) == 4 else None


def _parse_sweep(raw: Any, experiment: str, source, problems: list[str]) -> Optional[Sweep]:
    if not isinstance(raw, dict):
        problems.append("sweep: expected an object")
        return None
    for k in raw:
        if k not in ("parameter", "from", "to", "steps"):
            problems.append(f"unknown key 'sweep.{k}'")
    param = raw.get("parameter")
    allowed = SWEEPABLE.get(experiment, ())
    if param not in allowed:
        problems.append(f"sweep.parameter {param!r} does not exist for {experiment}; choose from {list(allowed)}")
        param = None
    elif experiment == "scully-druhl" and source is not None:
        ensemble = source.kind != "ideal-idler"
        if ensemble and param in ("theta2", "phi2"):
            problems.append(f"sweep.parameter {param!r} is not used by source kind {source.kind!r}")
            param = None
        if param in ("mu_s", "delta") and source.kind not in ("ideal-idler", "custom"):
            problems.append(f"sweep.parameter {param!r} needs an ideal-idler or custom source")
            param = None
    steps = _int("sweep.steps", raw.get("steps"), 2, None, problems)
    bounds = []
    for k in ("from", "to"):
        v = raw.get(k)
        if param in POLAR + AZIMUTHAL:
            bounds.append(_angle(param, v, problems) if v is not None else None)
        elif isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v):
            if param == "mu_s" and not 0.0 <= v <= 1.0:
                problems.append(f"sweep.{k}={v!r} is outside the legal range [0, 1] for mu_s")
                v = None
            bounds.append(v)
        else:
            bounds.append(None)
        if v is None:
            problems.append(f"sweep.{k} is required")
    if param is None or steps is None or None in bounds:
        return None
    return Sweep(param, float(bounds[0]), float(bounds[1]), steps)


def parse_config(text: str) -> ExperimentConfig:
    """Validate a JSON experiment description; raises ConfigError listing all problems."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"invalid JSON: {exc}"]) from None
    if not isinstance(raw, dict):
        raise ConfigError(["config must be a JSON object"])
    problems: list[str] = []
    experiment = raw.get("experiment")
    if experiment not in EXPERIMENTS:
        raise ConfigError([f"experiment: expected one of {list(EXPERIMENTS)}, got {experiment!r}"])

    allowed = COMMON_KEYS | KEYS[experiment]
    for key in raw:
        if key in allowed:
            continue
        if key.lower().endswith(("_deg", "_degrees", "deg")):
            problems.append(f"unknown key '{key}'; " + _degree_hint(key.split("_")[0]))
        else:
            problems.append(f"unknown key '{key}' for experiment {experiment}")

    values: dict[str, Any] = {"experiment": experiment}
    for key in POLAR + AZIMUTHAL:
        if key in raw and key in allowed:
            v = _angle(key, raw[key], problems)
            if v is not None:
                values[key] = v
    if "unpolarized" in raw and "unpolarized" in allowed:
        if not isinstance(raw["unpolarized"], bool):
            problems.append("unpolarized: expected true or false")
        else:
            values["unpolarized"] = raw["unpolarized"]
    if "shots" in raw:
        v = _int("shots", raw["shots"], 0, None, problems)
        if v is not None:
            values["shots"] = v
    if "seed" in raw:
        v = _int("seed", raw["seed"], 0, 2**64, problems)
        if v is not None:
            values["seed"] = v
    if "configs" in raw and "configs" in allowed:
        v = _int("configs", raw["configs"], 1, None, problems)
        if v is not None:
            values["configs"] = v

    source = None
    if experiment == "scully-druhl":
        source, env = _parse_source(raw.get("source", {"kind": "identical"}), problems)
        values["source"], values["environment"] = source, env
    if experiment == "chsh" and "directions" in raw:
        values["directions"] = _parse_directions(raw["directions"], problems)
    if "sweep" in raw:
        if experiment in ("mwi-check", "chsh"):
            problems.append(f"sweep is not supported for {experiment}")
        else:
            values["sweep"] = _parse_sweep(raw["sweep"], experiment, source, problems)

    if problems:
        raise ConfigError(problems)
    return ExperimentConfig(**values)


# ---------------------------------------------------------------------------
# evaluation


@dataclass
class ResultRow:
    values: dict = field(default_factory=dict)
    exact_cells: tuple = ()
    selfcheck_ok: bool = True


def _with_param(cfg: ExperimentConfig, name: str, value: float) -> ExperimentConfig:
    if name in ("mu_s", "delta"):
        env = cfg.environment
        if cfg.source is not None and cfg.source.kind == "custom":
            env = cfg.source.overlap
        env = sd.SourceOverlap(value if name == "mu_s" else env.mu_s, value if name == "delta" else env.delta)
        if cfg.source is not None and cfg.source.kind == "custom":
            return replace(cfg, source=sd.SourceModel.custom(env))
        return replace(cfg, environment=env)
    return replace(cfg, **{name: float(value)})


def _sample_check(cells: np.ndarray, freqs: np.ndarray, n: int) -> bool:
    for p, f in zip(cells, freqs):
        sigma = shots.binomial_sigma(min(max(p, 0.0), 1.0), n)
        if abs(f - p) > SIGMA_BAND * sigma + 1e-12:
            return False
    return True


NAN = float("nan")


def _joint_row(dist: epr.JointDistribution, cfg: ExperimentConfig, start: int, head: dict, extra: dict) -> ResultRow:
    cells = dist.as_array()
    cond = dist.conditionals()
    values = dict(head)
    values.update(
        p_pp=cells[0],
        p_pm=cells[1],
        p_mp=cells[2],
        p_mm=cells[3],
        p_plus_given_plus=cond.given_plus[0],
        p_minus_given_plus=cond.given_plus[1],
        p_plus_given_minus=cond.given_minus[0],
        p_minus_given_minus=cond.given_minus[1],
    )
    values.update(extra)
    freq = dict.fromkeys(("f_pp", "f_pm", "f_mp", "f_mm", "f_plus_given_plus", "f_plus_given_minus"), NAN)
    ok = True
    if cfg.shots > 0:
        counts = shots.counts_from_cells(shots.sample_cells(dist, cfg.shots, cfg.seed, start))
        f = counts.frequencies()
        freq.update(f_pp=f[0], f_pm=f[1], f_mp=f[2], f_mm=f[3])
        for idler, name in (("+", "f_plus_given_plus"), ("-", "f_plus_given_minus")):
            if counts.subensemble_size(idler):
                freq[name] = counts.conditional_frequency("+", idler)
        ok = _sample_check(cells, f, cfg.shots)
    values.update(freq)
    return ResultRow(values, tuple(cells), ok)


def _single_row(p: tuple[float, float], cfg: ExperimentConfig, start: int, head: dict, extra: dict) -> ResultRow:
    values = dict(head)
    values.update(p_plus=p[0], p_minus=p[1])
    values.update(extra)
    values.update(f_plus=NAN, f_minus=NAN)
    ok = True
    if cfg.shots > 0:
        counts = shots.counts_from_cells(shots.sample_cells(p, cfg.shots, cfg.seed, start), joint=False)
        f = counts.signal_only / cfg.shots
        values.update(f_plus=f[0], f_minus=f[1])
        ok = _sample_check(np.array(p), f, cfg.shots)
    return ResultRow(values, tuple(p), ok)


def evaluate_point(cfg: ExperimentConfig, start: int = 0) -> ResultRow:
    """Exact (and optionally sampled) results for one parameter point."""
    exp = cfg.experiment
    if exp == "single-mzi":
        ic = InterferometerConfig(cfg.theta1, cfg.phi1)
        state = UNPOLARIZED if cfg.unpolarized else spinor_basis(cfg.vartheta, cfg.varphi)[0]
        head = {
            "theta1": cfg.theta1,
            "phi1": cfg.phi1,
            "vartheta": cfg.vartheta,
            "varphi": cfg.varphi,
            "unpolarized": cfg.unpolarized,
        }
        extra = {"visibility": fringe_visibility(cfg.theta1, state)}
        return _single_row(detect_probabilities(ic, state), cfg, start, head, extra)
    jc = epr.JointConfig.from_angles(cfg.theta1, cfg.phi1, cfg.theta2, cfg.phi2)
    head = {"theta1": cfg.theta1, "phi1": cfg.phi1, "theta2": cfg.theta2, "phi2": cfg.phi2}
    if exp in ("entanglement-eraser", "epr-bohm"):
        dist = epr.joint_distribution(jc)
        return _joint_row(dist, cfg, start, head, {"correlator": dist.correlator()})
    if exp == "scully-druhl":
        if cfg.source.kind == "ideal-idler":
            env = cfg.environment
            head.update(mu_s=env.mu_s, delta=env.delta)
            extra = {"subensemble_visibility": sd.subensemble_visibility(env, cfg.theta1, cfg.theta2, "+")}
            return _joint_row(sd.joint_distribution(env, jc), cfg, start, head, extra)
        ov = sd.purity(cfg.source)
        del head["theta2"], head["phi2"]
        head.update(mu_s=ov.mu_s, delta=ov.delta)
        extra = {
            "distinguishability": sd.distinguishability(ov),
            "visibility": sd.visibility(ov, cfg.theta1),
            "duality_sum": sd.duality_check(ov, cfg.theta1)[2],
        }
        return _single_row(sd.ensemble_probabilities(ov, cfg.theta1, cfg.phi1), cfg, start, head, extra)
    raise ValueError(f"evaluate_point does not handle {exp}")


def _run_mwi(cfg: ExperimentConfig) -> list[ResultRow]:
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    rows = []
    for k in range(cfg.configs):
        t1, t2 = rng.uniform(0, math.pi, 2)
        p1, p2 = rng.uniform(0, 2 * math.pi, 2)
        jc = epr.JointConfig.from_angles(t1, p1, t2, p2)
        branch = mwi.branch_frequencies(mwi.evolve_universal(jc)).as_array()
        joint = epr.joint_distribution(jc).as_array()
        diff = float(np.max(np.abs(branch - joint)))
        values = {"config": k, "theta1": t1, "phi1": p1, "theta2": t2, "phi2": p2}
        for tag, arr in (("branch", branch), ("joint", joint)):
            values.update({f"{tag}_{c}": v for c, v in zip(("pp", "pm", "mp", "mm"), arr)})
        values["max_abs_diff"] = diff
        rows.append(ResultRow(values, tuple(branch), diff < 1e-12))
    return rows


def _run_chsh(cfg: ExperimentConfig) -> list[ResultRow]:
    dirs = cfg.directions or tuple(epr.coplanar_direction(a) for a in epr.OPTIMAL_CHSH_ANGLES)
    a, a2, b, b2 = dirs
    pairs = ((a, b), (a, b2), (a2, b), (a2, b2))
    es = [epr.correlator(x, y) for x, y in pairs]
    values = {
        "S": epr.chsh_s(a, a2, b, b2),
        "E_ab": es[0],
        "E_ab_prime": es[1],
        "E_a_prime_b": es[2],
        "E_a_prime_b_prime": es[3],
    }
    values.update(S_sampled=NAN, S_stderr=NAN)
    ok = True
    if cfg.shots > 0:
        counts = []
        for j, (x, y) in enumerate(pairs):
            d = float(np.dot(x, y))
            dist = epr.JointDistribution.from_array([(1 - d) / 4, (1 + d) / 4, (1 + d) / 4, (1 - d) / 4])
            c = shots.counts_from_cells(shots.sample_cells(dist, cfg.shots, cfg.seed, j * cfg.shots))
            ok = ok and _sample_check(dist.as_array(), c.frequencies(), cfg.shots)
            counts.append(c)
        est = shots.estimate_chsh(*counts)
        values.update(S_sampled=est.value, S_stderr=est.stderr)
    return [ResultRow(values, (), ok)]


def run(cfg: ExperimentConfig, jobs: int = 1) -> tuple[list[ResultRow], int]:
    """Evaluate a config; returns rows (in sweep order) and the exit code."""
    if cfg.experiment == "mwi-check":
        rows = _run_mwi(cfg)
    elif cfg.experiment == "chsh":
        rows = _run_chsh(cfg)
    else:
        if cfg.sweep is None:
            rows = [evaluate_point(cfg)]
        else:
            name = cfg.sweep.parameter

            def one(item):
                k, value = item
                return evaluate_point(_with_param(cfg, name, value), start=k * cfg.shots)

            # row k owns shot indices [k*shots, (k+1)*shots), so threading cannot change results
            with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
                rows = list(pool.map(one, enumerate(cfg.sweep.values())))
    code = EXIT_OK if all(r.selfcheck_ok for r in rows) else EXIT_SELFCHECK
    return rows, code


# ---------------------------------------------------------------------------
# output


def format_value(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def to_csv(rows: list[ResultRow], header_comment: Optional[str] = None) -> str:
    buf = io.StringIO()
    if header_comment:
        buf.write(f"# {header_comment}\n")
    if rows:
        columns = list(rows[0].values)
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([format_value(r.values[c]) for c in columns])
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[str], list[list[float]]]:
    """Inverse of :func:`to_csv` (comment lines skipped)."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, [[float(x) for x in row] for row in reader]


def _load(path: str) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    problems = []
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            problems.append(f"--seed {args.seed} is outside the legal range [0, 2^64)")
        cfg = replace(cfg, seed=args.seed)
    if args.shots is not None:
        if args.shots < 0:
            problems.append(f"--shots {args.shots} must be >= 0")
        cfg = replace(cfg, shots=args.shots)
    if problems:
        raise ConfigError(problems)
    return cfg


def _emit(rows, cfg, args) -> None:
    comment = None
    if not args.no_timestamp:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        comment = f"qeraser {cfg.experiment} generated {stamp}"
    text = to_csv(rows, comment)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qeraser", description="Delayed-choice quantum eraser toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, help="experiment config (JSON)")
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--shots", type=int, help="override the config shot count")
        p.add_argument("--no-timestamp", action="store_true", help="omit the timestamp comment line")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker threads for sweeps")

    common(sub.add_parser("simulate", help="run a config (sweeping if it has a sweep block)"))
    common(sub.add_parser("sweep", help="run a config that contains a sweep block"))
    common(sub.add_parser("chsh", help="CHSH value for four directions"), config_required=False)
    p = sub.add_parser("validate", help="check a config without running it")
    p.add_argument("--config", required=True)
    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scale", type=float, default=1.0, help="multiply sample counts")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "selftest":
        results = selftest.run(seed=args.seed, scale=args.scale)
        for r in results:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
        return EXIT_OK if all(r.passed for r in results) else EXIT_SELFCHECK

    try:
        if args.command == "chsh" and args.config is None:
            cfg = ExperimentConfig("chsh")
        else:
            cfg = _load(args.config)
        if args.command == "validate":
            print(f"ok: {cfg.experiment}")
            return EXIT_OK
        cfg = _apply_overrides(cfg, args)
        if args.command == "sweep" and cfg.sweep is None:
            raise ConfigError(["sweep: the sweep command needs a 'sweep' block in the config"])
        if args.command == "chsh" and cfg.experiment != "chsh":
            raise ConfigError([f"experiment: the chsh command needs experiment 'chsh', got {cfg.experiment!r}"])
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    rows, code = run(cfg, jobs=args.jobs)
    _emit(rows, cfg, args)
    if code == EXIT_SELFCHECK:
        print("self-check failed: sampled frequencies or MWI agreement out of tolerance", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
