"""Batch front-end: run checks and sweeps on groups given as spec strings,
emit deterministic JSON/CSV reports suitable for diffing and plotting.

Wall-clock timings go to stderr so that reports are byte-identical across
reruns of the same manifest and seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .algebra import (AlgebraError, GroupAlgebraElement, element_from_csv, element_from_json,
                      element_to_json, l1_norm, restrict_subgroup)
from .analysis import (DEFAULT_GRID, check_abelian_selfduality, check_herz_monotone,
                       check_log_convexity, check_quotient_contraction,
                       check_sharp_duality, check_subgroup_isometry, norm_curve,
                       witness_search)
from .crossed import CrossedCoefficients, check_mnp_isometry, verify_matrix_units, verify_spatiality
from .gelfand import check_gelfand_sandwich
from .groups import FiniteGroup, GroupError, parse_group_spec, subgroup
from .pnorm import EstimatorConfig, bruteforce_pnorm, estimate_pnorm, interpolation_upper
from .reporting import CheckReport, canonical_json, merge_reports

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

COMMANDS = ("curve", "herz", "convexity", "duality", "selfdual", "witness", "subgroup",
            "quotient", "gelfand", "crossed-units", "crossed-norm", "oracle-suite", "all")

_DUALITY_PS = (1.2, 1.5, 3.0, 4.0)
_SELFDUAL_PS = (1.2, 1.5, 4.0)
_STRUCT_PS = (1.5, 3.0)
_ORACLE_PS = (1.2, 1.5, 2.5, 4.0)


class CliInputError(ValueError):
    pass


@dataclass
class RunManifest:
    command: str
    group: str = ""
    input_path: str | None = None
    p_list: tuple[float, ...] = ()
    seed: int = 0
    restarts: int = 32
    iters: int = 300
    random_count: int = 20
    members: tuple[int, ...] = ()
    min_gap: float = 1e-3
    count: int = 200
    resolution: int = 64
    out: str = "-"
    format: str = "json"

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise CliInputError(f"unknown command {self.command!r}")
        if any(not 1.0 <= p <= 64.0 for p in self.p_list):
            raise CliInputError("p values must lie in [1, 64]")
        if self.format not in ("json", "csv"):
            raise CliInputError(f"unknown format {self.format!r}")

    def to_json(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "group": self.group,
            "input_path": self.input_path,
            "p_list": [float(p) for p in self.p_list],
            "seed": self.seed,
            "restarts": self.restarts,
            "iters": self.iters,
            "random_count": self.random_count,
            "members": list(self.members),
            "min_gap": self.min_gap,
            "count": self.count,
            "resolution": self.resolution,
            "out": self.out,
            "format": self.format,
        }


def random_element(group: FiniteGroup, seed) -> GroupAlgebraElement:
    """Seeded element with re/im parts uniform in [-1, 1], scaled to unit l1."""
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1.0, 1.0, group.order) + 1j * rng.uniform(-1.0, 1.0, group.order)
    f = GroupAlgebraElement(group, coeffs)
    return GroupAlgebraElement(group, coeffs / l1_norm(f))


def _load_element(path: str, group: FiniteGroup) -> GroupAlgebraElement:
    p = Path(path)
    if not p.exists():
        raise CliInputError(f"element file not found: {path}")
    text = p.read_text(encoding="utf-8")
    if p.suffix.lower() == ".csv":
        return element_from_csv(text, group)
    try:
        return element_from_json(json.loads(text), group)
    except (KeyError, ValueError, TypeError) as exc:
        raise CliInputError(f"malformed element file {path}: {exc}") from exc


def _estimator_cfg(manifest: RunManifest) -> EstimatorConfig:
    return EstimatorConfig(restarts=manifest.restarts, seed=manifest.seed)


def _sample(group: FiniteGroup, manifest: RunManifest, i: int) -> GroupAlgebraElement:
    return random_element(group, (manifest.seed, i))


def _timed(name: str, fn):
    start = time.perf_counter()
    result = fn()
    print(f"[time] {name}: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return result


def _run_curve(manifest: RunManifest) -> tuple[dict, bool, str | None]:
    group = parse_group_spec(manifest.group)
    if manifest.input_path:
        f = _load_element(manifest.input_path, group)
    else:
        f = random_element(group, manifest.seed)
    grid = manifest.p_list or DEFAULT_GRID
    curve = _timed("curve", lambda: norm_curve(f, grid, _estimator_cfg(manifest)))
    payload = {"curve": curve.to_json(), "element": element_to_json(f, manifest.group)}
    return payload, True, curve.to_csv() if manifest.format == "csv" else None


def _sweep(manifest: RunManifest, check_name: str, one) -> tuple[dict, bool, None]:
    reports = []
    for i in range(manifest.random_count):
        reports.append(one(i))
    merged = merge_reports(check_name, reports, reports[0].tolerance if reports else 0.0)
    return {"report": merged.to_json()}, merged.passed, None


def _run_herz(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    grid = manifest.p_list or DEFAULT_GRID
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        curve = norm_curve(_sample(group, manifest, i), grid, cfg)
        return check_herz_monotone(curve)

    return _timed("herz", lambda: _sweep(manifest, "herz-monotone", one))


def _run_convexity(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    grid = manifest.p_list or DEFAULT_GRID
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        curve = norm_curve(_sample(group, manifest, i), grid, cfg)
        return check_log_convexity(curve)

    return _timed("convexity", lambda: _sweep(manifest, "log-convexity", one))


def _run_duality(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    ps = manifest.p_list or _DUALITY_PS
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        f = _sample(group, manifest, i)
        reports = [check_sharp_duality(f, p, cfg) for p in ps]
        return merge_reports("sharp-duality", reports, reports[0].tolerance)

    return _timed("duality", lambda: _sweep(manifest, "sharp-duality", one))


def _run_selfdual(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    ps = manifest.p_list or _SELFDUAL_PS
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        f = _sample(group, manifest, i)
        reports = [check_abelian_selfduality(f, p, cfg) for p in ps]
        return merge_reports("abelian-selfduality", reports, reports[0].tolerance)

    return _timed("selfdual", lambda: _sweep(manifest, "abelian-selfduality", one))


def _run_witness(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    if len(manifest.p_list) != 1:
        raise CliInputError("witness requires exactly one --p value")

    def go():
        f, gap = witness_search(group, manifest.p_list[0], restarts=manifest.restarts,
                                iters=manifest.iters, seed=manifest.seed)
        report = CheckReport(name="witness-gap", worst_violation=manifest.min_gap - gap,
                             tolerance=0.0,
                             details=[{"gap": gap, "p": manifest.p_list[0],
                                       "element": element_to_json(f, manifest.group)}])
        return {"report": report.to_json(), "gap": gap}, report.passed, None

    return _timed("witness", go)


def _subgroup_from_manifest(manifest: RunManifest, group: FiniteGroup):
    if not manifest.members:
        raise CliInputError("this command requires --members with subgroup element ids")
    return subgroup(group, manifest.members)


def _run_subgroup(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    handle = _subgroup_from_manifest(manifest, group)
    ps = manifest.p_list or _STRUCT_PS
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        f_h = random_element(handle.group, (manifest.seed, i))
        reports = [check_subgroup_isometry(handle, f_h, p, cfg) for p in ps]
        return merge_reports("subgroup-isometry", reports, reports[0].tolerance)

    return _timed("subgroup", lambda: _sweep(manifest, "subgroup-isometry", one))


def _run_quotient(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    handle = _subgroup_from_manifest(manifest, group)
    ps = manifest.p_list or _STRUCT_PS
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        f = _sample(group, manifest, i)
        reports = [check_quotient_contraction(handle, f, p, cfg) for p in ps]
        return merge_reports("quotient-contraction", reports, reports[0].tolerance)

    return _timed("quotient", lambda: _sweep(manifest, "quotient-contraction", one))


def _run_gelfand(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    ps = manifest.p_list or _STRUCT_PS
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        f = _sample(group, manifest, i)
        reports = [check_gelfand_sandwich(f, p, cfg) for p in ps]
        return merge_reports("gelfand-sandwich", reports, reports[0].tolerance)

    return _timed("gelfand", lambda: _sweep(manifest, "gelfand-sandwich", one))


def _run_crossed_units(manifest: RunManifest):
    group = parse_group_spec(manifest.group)

    def go():
        units = verify_matrix_units(group)
        spatial = verify_spatiality(group, _estimator_cfg(manifest))
        ok = units.passed and spatial.passed
        return {"report": {"units": units.to_json(), "spatiality": spatial.to_json()}}, ok, None

    return _timed("crossed-units", go)


def _run_crossed_norm(manifest: RunManifest):
    group = parse_group_spec(manifest.group)
    ps = manifest.p_list or _STRUCT_PS
    cfg = _estimator_cfg(manifest)

    def one(i: int) -> CheckReport:
        rng = np.random.default_rng((manifest.seed, i))
        c = rng.uniform(-1, 1, (group.order, group.order)) \
            + 1j * rng.uniform(-1, 1, (group.order, group.order))
        reports = [check_mnp_isometry(CrossedCoefficients(group, c), p, cfg) for p in ps]
        return merge_reports("crossed-norm-isometry", reports, reports[0].tolerance)

    return _timed("crossed-norm", lambda: _sweep(manifest, "crossed-norm-isometry", one))


def _run_oracle_suite(manifest: RunManifest):
    ps = manifest.p_list or _ORACLE_PS

    def go():
        worst = 0.0
        worst_interp = -math.inf
        details = []
        for i in range(manifest.count):
            rng = np.random.default_rng((manifest.seed, i))
            dim = 2 + i % 2
            radius = np.sqrt(rng.uniform(size=(dim, dim)))
            m = radius * np.exp(2j * math.pi * rng.uniform(size=(dim, dim)))
            p = ps[i % len(ps)]
            est = estimate_pnorm(m, p, EstimatorConfig(restarts=manifest.restarts,
                                                       seed=manifest.seed))
            oracle = bruteforce_pnorm(m, p, manifest.resolution)
            rel = abs(est.lower - oracle) / max(oracle, 1e-300)
            over = est.lower - interpolation_upper(m)(p)
            worst = max(worst, rel)
            worst_interp = max(worst_interp, over)
            if rel > 1e-5:
                details.append({"case": i, "dim": dim, "p": p,
                                "estimate": est.lower, "oracle": oracle})
        report = CheckReport(name="oracle-agreement",
                             worst_violation=1e-4 * max(worst / 1e-4, worst_interp / 1e-9),
                             tolerance=1e-4,
                             details=[{"cases": manifest.count, "worst_rel_diff": worst,
                                       "worst_interp_excess": worst_interp}] + details)
        return {"report": report.to_json()}, report.passed, None

    return _timed("oracle-suite", go)


_DEFAULT_BATTERY_GROUPS = ("Z6", "Z8", "S3", "D4", "Q8")


def _run_all(manifest: RunManifest):
    """Fixed battery over the default group set, one report file per check."""
    out_dir = Path(manifest.out if manifest.out != "-" else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs: list[RunManifest] = []
    for g in _DEFAULT_BATTERY_GROUPS:
        jobs.append(RunManifest(command="herz", group=g, seed=manifest.seed,
                                random_count=5, restarts=8))
        jobs.append(RunManifest(command="convexity", group=g, seed=manifest.seed,
                                random_count=5, restarts=8))
        jobs.append(RunManifest(command="duality", group=g, seed=manifest.seed,
                                random_count=5, restarts=8))
    for g in ("Z6", "Z8"):
        jobs.append(RunManifest(command="selfdual", group=g, seed=manifest.seed,
                                random_count=5, restarts=8))
        jobs.append(RunManifest(command="gelfand", group=g, seed=manifest.seed,
                                random_count=5, restarts=8))
    jobs.append(RunManifest(command="witness", group="S3", p_list=(4.0,),
                            seed=manifest.seed, restarts=8, iters=120))
    jobs.append(RunManifest(command="subgroup", group="S3", members=(0, 3, 4),
                            seed=manifest.seed, random_count=5, restarts=8))
    jobs.append(RunManifest(command="quotient", group="S3", members=(0, 3, 4),
                            seed=manifest.seed, random_count=5, restarts=8))
    jobs.append(RunManifest(command="subgroup", group="D4", members=(0, 1, 2, 3),
                            seed=manifest.seed, random_count=5, restarts=8))
    jobs.append(RunManifest(command="quotient", group="D4", members=(0, 2),
                            seed=manifest.seed, random_count=5, restarts=8))
    for g in ("Z3", "S3"):
        jobs.append(RunManifest(command="crossed-units", group=g, seed=manifest.seed,
                                restarts=8))
        jobs.append(RunManifest(command="crossed-norm", group=g, seed=manifest.seed,
                                random_count=3, restarts=8))
    jobs.append(RunManifest(command="oracle-suite", seed=manifest.seed, count=8,
                            restarts=8, resolution=32))

    all_ok = True
    for i, job in enumerate(jobs):
        payload, ok, _ = _DISPATCH[job.command](job)
        all_ok = all_ok and ok
        name = f"report_{i:02d}_{job.command}{'_' + job.group if job.group else ''}.json"
        _write_report(job, payload, ok, str(out_dir / name), None)
    summary = {"jobs": len(jobs), "pass": all_ok}
    return summary, all_ok, None


_DISPATCH = {
    "curve": _run_curve,
    "herz": _run_herz,
    "convexity": _run_convexity,
    "duality": _run_duality,
    "selfdual": _run_selfdual,
    "witness": _run_witness,
    "subgroup": _run_subgroup,
    "quotient": _run_quotient,
    "gelfand": _run_gelfand,
    "crossed-units": _run_crossed_units,
    "crossed-norm": _run_crossed_norm,
    "oracle-suite": _run_oracle_suite,
    "all": _run_all,
}


def _write_report(manifest: RunManifest, payload: dict, ok: bool,
                  out: str, csv_text: str | None) -> None:
    if csv_text is not None:
        text = csv_text
    else:
        document = {
            "tool": "lplab",
            "version": __version__,
            "manifest": manifest.to_json(),
            "seed": manifest.seed,
            "pass": ok,
        }
        document.update(payload)
        text = canonical_json(document) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")


def run(manifest: RunManifest) -> int:
    """Execute one manifest; returns the process exit code."""
    try:
        payload, ok, csv_text = _DISPATCH[manifest.command](manifest)
    except (CliInputError, GroupError, AlgebraError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if manifest.command != "all":
        _write_report(manifest, payload, ok,
                      manifest.out, csv_text if manifest.format == "csv" else None)
    else:
        _write_report(manifest, payload, ok,
                      str(Path(manifest.out if manifest.out != "-" else ".") / "report_summary.json"),
                      None)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _parse_p_list(raw: str | None) -> tuple[float, ...]:
    if not raw:
        return ()
    try:
        return tuple(float(tok) for tok in raw.split(","))
    except ValueError as exc:
        raise CliInputError(f"bad p list {raw!r}") from exc


def _parse_members(raw: str | None) -> tuple[int, ...]:
    if not raw:
        return ()
    try:
        return tuple(int(tok) for tok in raw.split(","))
    except ValueError as exc:
        raise CliInputError(f"bad member list {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lplab",
        description="convolution-operator p-norm laboratory for finite groups")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--group", default="", help="group spec, e.g. S3 or Z2xZ4")
        cmd.add_argument("--f", dest="input_path", default=None,
                         help="element file (JSON or CSV)")
        cmd.add_argument("--p", dest="p_list", default=None,
                         help="comma-separated exponents in [1,64]")
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--restarts", type=int, default=32)
        cmd.add_argument("--iters", type=int, default=300)
        cmd.add_argument("--random", dest="random_count", type=int, default=20,
                         help="number of seeded random samples for sweeps")
        cmd.add_argument("--members", default=None,
                         help="comma-separated subgroup element ids")
        cmd.add_argument("--min-gap", dest="min_gap", type=float, default=1e-3)
        cmd.add_argument("--count", type=int, default=200,
                         help="case count for oracle-suite")
        cmd.add_argument("--resolution", type=int, default=64)
        cmd.add_argument("--out", default="-")
        cmd.add_argument("--format", choices=["json", "csv"], default="json")
    return parser


def manifest_from_args(args: argparse.Namespace) -> RunManifest:
    return RunManifest(
        command=args.command,
        group=args.group,
        input_path=args.input_path,
        p_list=_parse_p_list(args.p_list),
        seed=args.seed,
        restarts=args.restarts,
        iters=args.iters,
        random_count=args.random_count,
        members=_parse_members(args.members),
        min_gap=args.min_gap,
        count=args.count,
        resolution=args.resolution,
        out=args.out,
        format=args.format,
    )


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        manifest = manifest_from_args(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return run(manifest)


if __name__ == "__main__":
    sys.exit(main())
