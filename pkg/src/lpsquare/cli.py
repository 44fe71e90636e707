"""
Command line driver: ``lpsquare run`` executes experiment suites and writes
CSV records plus a JSON manifest; ``lpsquare verify`` re-checks a manifest's
assertions from the stored CSV files.

Exit codes: 0 all assertions pass, 1 usage/config/IO error, 2 assertion
failure, 3 quadrature did not converge.
"""

import argparse
import csv
import dataclasses
import json
import math
import os
import platform
import sys
import time
from dataclasses import dataclass

import numpy as np
import scipy
import yaml

from . import __version__
from .experiments import (
    SUITES,
    ExperimentRecord,
    bourgain_lower_suite,
    check_records,
    counterexample_euclidean_suite,
    counterexample_periodic_suite,
    multiplier_growth_suite,
    weak_type_sharpness_suite,
)
from .quadrature import QuadratureError

__all__ = ["RunConfig", "ConfigError", "parse_config", "run_and_emit", "verify_manifest", "main"]

EXIT_OK, EXIT_USAGE, EXIT_ASSERT, EXIT_QUADRATURE = 0, 1, 2, 3
SUITE_ORDER = ("bourgain", "multiplier-growth", "weak-sharpness", "counter-periodic", "counter-euclidean")
FORMATS = ("csv", "json")
MANIFEST = "manifest.json"


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


@dataclass
class RunConfig:
    suite: str
    n_min: int | None = None
    n_max: int | None = None
    n_step: int = 1
    dim: int = 1
    oversample: int | None = None
    breadth: int | None = None
    trials: int = 20
    seed: int | None = None
    out: str = "results"
    formats: tuple = FORMATS

    def suites(self) -> tuple:
        return SUITE_ORDER if self.suite == "all" else (self.suite,)

    def n_list(self, suite: str) -> list:
        lo, hi = SUITES[suite].default_range
        lo = lo if self.n_min is None else self.n_min
        hi = hi if self.n_max is None else self.n_max
        return list(range(lo, hi + 1, self.n_step))


_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def _validate(cfg: RunConfig) -> RunConfig:
    if cfg.suite != "all" and cfg.suite not in SUITES:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITE_ORDER + ('all',))}")
    for name in ("n_min", "n_max", "oversample", "breadth", "seed"):
        v = getattr(cfg, name)
        if v is not None and not isinstance(v, int):
            raise ConfigError(f"{name} must be an integer")
    if cfg.n_step < 1:
        raise ConfigError("n_step must be >= 1")
    if cfg.dim not in (1, 2):
        raise ConfigError("dim must be 1 or 2")
    if cfg.dim != 1 and cfg.suite not in ("weak-sharpness", "all"):
        raise ConfigError("dim applies to the weak-sharpness suite only")
    if cfg.oversample is not None and cfg.oversample < 1:
        raise ConfigError("oversample must be >= 1")
    if cfg.breadth is not None and cfg.breadth < 1:
        raise ConfigError("breadth must be >= 1")
    if cfg.trials < 1:
        raise ConfigError("trials must be >= 1")
    cfg.formats = tuple(cfg.formats)
    bad = [f for f in cfg.formats if f not in FORMATS]
    if bad or not cfg.formats:
        raise ConfigError(f"formats must be a nonempty subset of {FORMATS}, got {cfg.formats}")
    for s in cfg.suites():
        if SUITES[s].randomized and cfg.seed is None:
            raise ConfigError(f"suite {s} is randomized; --seed is required")
        lo, hi = SUITES[s].n_range
        Ns = cfg.n_list(s)
        if Ns and (Ns[0] < lo or Ns[-1] > hi):
            raise ConfigError(f"{s}: N must lie in [{lo}, {hi}], got {Ns[0]}..{Ns[-1]}")
    return cfg


def _load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)  # JSON is valid YAML
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a mapping")
    data = {str(k).replace("-", "_"): v for k, v in data.items()}
    unknown = sorted(set(data) - _FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    if isinstance(data.get("formats"), str):
        data["formats"] = _split_formats(data["formats"])
    return data


def _split_formats(s: str) -> tuple:
    return tuple(p.strip() for p in s.split(",") if p.strip())


def parse_config(config_path=None, **flags) -> RunConfig:
    """Merge a YAML/JSON config file with flag values; flags win when not ``None``."""
    values = _load_file(config_path) if config_path else {}
    for k, v in flags.items():
        if k not in _FIELDS:
            raise ConfigError(f"unknown option {k}")
        if v is not None:
            values[k] = v
    if "suite" not in values:
        raise ConfigError("no suite given (use --suite or a config file)")
    return _validate(RunConfig(**values))


# ---------------------------------------------------------------- running


def _run_suite(name: str, cfg: RunConfig, Ns: list) -> list:
    if name == "bourgain":
        return bourgain_lower_suite(Ns, oversample=cfg.oversample or 2)
    if name == "multiplier-growth":
        return multiplier_growth_suite(Ns, cfg.trials, cfg.seed, cfg.breadth, oversample=cfg.oversample or 2)
    if name == "weak-sharpness":
        return weak_type_sharpness_suite(Ns, n=cfg.dim, oversample=cfg.oversample or 2)
    if name == "counter-periodic":
        return counterexample_periodic_suite(Ns, oversample=cfg.oversample or 1)
    if name == "counter-euclidean":
        return counterexample_euclidean_suite(Ns)
    raise ConfigError(f"unknown suite {name!r}")


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "True" if v else "False"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _parse_cell(s: str):
    if s in ("True", "False"):
        return s == "True"
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    return s


def _write_csv(path: str, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row[c]) for c in columns])


def _fit_series(records: list) -> dict:
    """Raw ``(x, y)`` series behind each log-log fit, keyed by fit name."""
    if not records:
        return {}
    suite = records[0].suite
    N = [r.params["N"] for r in records]
    inv = [1.0 / (r.params["p"] - 1.0) for r in records] if "p" in records[0].params else None
    m = lambda key: [r.measurements[key] for r in records]  # noqa: E731
    if suite == "bourgain":
        return {"fit_S_L1": (N, m("norm_S_L1")), "fit_ratio_Cp": (inv, m("ratio_Cp")), "fit_chain_L1": (N, m("chain_L1"))}
    if suite == "multiplier-growth":
        return {"fit_max_ratio": (inv, m("max_ratio"))}
    if suite == "weak-sharpness":
        return {
            "fit_strong": (N, m("strong_S_L1")),
            "fit_weak": (N, m("weak_S")),
            "fit_entropy_interp": (N, m("entropy_interp")),
        }
    if suite == "counter-periodic":
        return {"fit_weak_linear": (N, m("weak_surrogate"))}
    return {}


def _json_safe(x):
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_safe(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x) if math.isfinite(x) else None
    return x


def _assertion_dicts(assertions) -> list:
    return [{"name": a.name, "passed": bool(a.passed), "value": a.value, "bound": a.bound} for a in assertions]


def _report_failures(suite: str, records, assertions, stream) -> None:
    Ns = [r.params["N"] for r in records]
    for a in assertions:
        if not a.passed:
            print(f"FAIL {suite}/{a.name}: value {a.value!r}, required {a.bound} (records N = {Ns})", file=stream)


def run_and_emit(cfg: RunConfig, stream=None) -> int:
    """Run every suite of ``cfg``, write the outputs, return the exit code."""
    stream = stream or sys.stderr
    plan = [(s, cfg.n_list(s)) for s in cfg.suites()]
    if any(not Ns for _, Ns in plan):
        print("no work: the N range is empty", file=stream)
        return EXIT_USAGE
    try:
        os.makedirs(cfg.out, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory {cfg.out}: {exc}", file=stream)
        return EXIT_USAGE

    t0 = time.perf_counter()
    suites, all_ok = {}, True
    for name, Ns in plan:
        try:
            records = _run_suite(name, cfg, Ns)
        except QuadratureError as exc:
            print(f"{name}: quadrature did not converge: {exc}", file=stream)
            return EXIT_QUADRATURE
        except ValueError as exc:
            print(f"{name}: {exc}", file=stream)
            return EXIT_USAGE
        assertions = check_records(name, records)
        ok = all(a.passed for a in assertions)
        all_ok &= ok
        entry = {"n_list": Ns, "passed": ok, "assertions": _assertion_dicts(assertions)}
        try:
            if "csv" in cfg.formats:
                fname = f"{name}.csv"
                _write_csv(os.path.join(cfg.out, fname), SUITES[name].columns, [r.row() for r in records])
                entry["csv"] = fname
                entry["layout"] = {
                    "params": list(records[0].params),
                    "measurements": list(records[0].measurements),
                    "fits": list(records[0].fits),
                }
                entry["fit_data"] = {}
                for fit, (xs, ys) in _fit_series(records).items():
                    fit_name = f"{name}_{fit}.csv"
                    _write_csv(os.path.join(cfg.out, fit_name), ("x", "y"), [{"x": x, "y": y} for x, y in zip(xs, ys)])
                    entry["fit_data"][fit] = fit_name
        except OSError as exc:
            print(f"cannot write {name} output: {exc}", file=stream)
            return EXIT_USAGE
        suites[name] = entry
        _report_failures(name, records, assertions, stream)
        print(f"{name}: {'PASS' if ok else 'FAIL'} ({len(records)} records)", file=stream)

    if "json" in cfg.formats:
        manifest = {
            "tool": "lpsquare",
            "version": __version__,
            "config": dataclasses.asdict(cfg),
            "versions": {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__},
            "wall_time_s": time.perf_counter() - t0,
            "passed": all_ok,
            "suites": suites,
        }
        try:
            with open(os.path.join(cfg.out, MANIFEST), "w", encoding="utf-8") as fh:
                json.dump(_json_safe(manifest), fh, indent=2, allow_nan=False)
                fh.write("\n")
        except OSError as exc:
            print(f"cannot write manifest: {exc}", file=stream)
            return EXIT_USAGE
    return EXIT_OK if all_ok else EXIT_ASSERT


def load_records(path: str, layout: dict, suite: str) -> list:
    """Rebuild :class:`ExperimentRecord` objects from a suite CSV."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        parts = {k: {c: _parse_cell(row[c]) for c in layout[k]} for k in ("params", "measurements", "fits")}
        out.append(ExperimentRecord(suite, parts["params"], parts["measurements"], parts["fits"]))
    return out


def verify_manifest(path: str, stream=None) -> int:
    """Re-check assertions from the CSV files a manifest points to."""
    stream = stream or sys.stderr
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        base = os.path.dirname(os.path.abspath(path))
        all_ok = True
        for name, entry in manifest["suites"].items():
            if "csv" not in entry:
                print(f"{name}: manifest lists no CSV records", file=stream)
                return EXIT_USAGE
            records = load_records(os.path.join(base, entry["csv"]), entry["layout"], name)
            assertions = check_records(name, records)
            stored = {a["name"]: a["passed"] for a in entry["assertions"]}
            fresh = {a.name: bool(a.passed) for a in assertions}
            if stored != fresh:
                print(f"{name}: stored pass/fail {stored} differs from re-check {fresh}", file=stream)
                all_ok = False
            ok = all(fresh.values())
            all_ok &= ok
            _report_failures(name, records, assertions, stream)
            print(f"{name}: {'PASS' if ok else 'FAIL'} ({len(records)} records)", file=stream)
    except (OSError, KeyError, ValueError) as exc:
        print(f"cannot verify {path}: {exc}", file=stream)
        return EXIT_USAGE
    return EXIT_OK if all_ok else EXIT_ASSERT


# ---------------------------------------------------------------- argparse


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for assertion failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lpsquare", description="Littlewood-Paley square function experiments")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run experiment suites")
    run.add_argument("--suite", choices=SUITE_ORDER + ("all",))
    run.add_argument("--config", help="YAML or JSON file with RunConfig fields")
    run.add_argument("--n-min", type=int)
    run.add_argument("--n-max", type=int)
    run.add_argument("--n-step", type=int)
    run.add_argument("--dim", type=int, help="number of parameters n (weak-sharpness)")
    run.add_argument("--oversample", type=int)
    run.add_argument("--breadth", type=int, help="sign-pattern breadth K (multiplier-growth)")
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--out")
    run.add_argument("--formats", type=_split_formats, help="comma list from csv,json")

    ver = sub.add_parser("verify", help="re-check assertions of a stored run")
    ver.add_argument("--manifest", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return verify_manifest(args.manifest)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        cfg = parse_config(args.config, **flags)
    except ConfigError as exc:
        print(f"lpsquare: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run_and_emit(cfg)


if __name__ == "__main__":
    sys.exit(main())
