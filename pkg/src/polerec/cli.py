"""Command-line front end: scenario generation, recovery runs, noise sweeps.

Scenario documents are strict JSON: unknown fields are rejected, complex
numbers are two-element [re, im] arrays, matrices are row-major nested
arrays.  Exit codes: 0 success, 1 malformed input, 2 numerical failure during
recovery (partial diagnostics are still written).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .mobius import DiskPairConfig
from .models import MatrixPoleModel, NoiseSpec, PoleModel, generate_scenario
from .pipeline import MatchReport, RecoveryConfig, complex_to_pair, match_poles, recover
from .sampling import (
    MATSUBARA,
    RANDOM_ACCESS,
    STATISTICS,
    SampleSet,
    matsubara_grid,
    random_access_grid,
    sample,
    sample_set_from_json,
)

__all__ = ["main", "Scenario", "ScenarioError", "parse_scenario", "serialize_scenario"]

PAPER_A = 1.0
PAPER_B = 100.0
DEFAULT_N_S = 1024
DEFAULT_N_M = 1_000_000
DEFAULT_BETA = 10.0 * math.pi
DEFAULT_D_MAX = 12


class ScenarioError(ValueError):
    """Malformed scenario input; carries the offending field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class Scenario:
    cfg: DiskPairConfig
    model: Union[PoleModel, MatrixPoleModel]
    access: str
    n_s: Optional[int]
    n_m: Optional[int]
    beta: Optional[float]
    statistics: Optional[str]
    noise: NoiseSpec
    d_max: int
    l: Optional[int]
    eps: Optional[float]
    real_mode: bool

    @property
    def is_matrix(self) -> bool:
        return isinstance(self.model, MatrixPoleModel)

    def recovery_config(self) -> RecoveryConfig:
        return RecoveryConfig(
            cfg=self.cfg,
            access=self.access,
            n_s=self.n_s if self.n_s is not None else DEFAULT_N_S,
            n_m=self.n_m if self.n_m is not None else DEFAULT_N_M,
            beta=self.beta if self.beta is not None else DEFAULT_BETA,
            statistics=self.statistics if self.statistics is not None else "boson",
            d_max=self.d_max,
            l=self.l,
            eps=self.eps,
            sigma=self.noise.sigma,
            real_mode=self.real_mode,
            matrix=self.is_matrix,
            rank1=self.is_matrix,
        )


# ---------------------------------------------------------------------------
# strict parsing helpers


def _check_keys(obj, where: str, required: tuple, optional: tuple = ()) -> None:
    if not isinstance(obj, dict):
        raise ScenarioError(where, f"expected an object, got {type(obj).__name__}")
    for key in required:
        if key not in obj:
            raise ScenarioError(f"{where}.{key}", "missing required field")
    for key in obj:
        if key not in required and key not in optional:
            raise ScenarioError(f"{where}.{key}", "unknown field")


def _number(obj, where: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ScenarioError(where, f"expected a number, got {type(obj).__name__}")
    value = float(obj)
    if not math.isfinite(value):
        raise ScenarioError(where, "value must be finite")
    return value


def _integer(obj, where: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ScenarioError(where, f"expected an integer, got {type(obj).__name__}")
    return obj


def _boolean(obj, where: str) -> bool:
    if not isinstance(obj, bool):
        raise ScenarioError(where, f"expected a boolean, got {type(obj).__name__}")
    return obj


def _complex_pair(obj, where: str) -> complex:
    if not isinstance(obj, list) or len(obj) != 2:
        raise ScenarioError(where, "expected a [re, im] pair")
    return complex(_number(obj[0], f"{where}[0]"), _number(obj[1], f"{where}[1]"))


def _parse_model(obj, where: str) -> Union[PoleModel, MatrixPoleModel]:
    _check_keys(obj, where, required=("poles",), optional=("residues", "residue_matrices", "nb"))
    poles = [
        _complex_pair(p, f"{where}.poles[{i}]") for i, p in enumerate(_list(obj["poles"], f"{where}.poles"))
    ]
    if "residues" in obj:
        if "residue_matrices" in obj or "nb" in obj:
            raise ScenarioError(where, "scalar and matrix residues are mutually exclusive")
        residues = [
            _complex_pair(r, f"{where}.residues[{i}]")
            for i, r in enumerate(_list(obj["residues"], f"{where}.residues"))
        ]
        if len(residues) != len(poles):
            raise ScenarioError(f"{where}.residues", "length must match poles")
        try:
            return PoleModel(np.array(poles), np.array(residues))
        except ValueError as exc:
            raise ScenarioError(where, str(exc)) from exc
    if "residue_matrices" not in obj:
        raise ScenarioError(where, "need either residues or residue_matrices")
    nb = _integer(obj.get("nb", 0), f"{where}.nb") if "nb" in obj else None
    mats = []
    for i, mat in enumerate(_list(obj["residue_matrices"], f"{where}.residue_matrices")):
        rows = _list(mat, f"{where}.residue_matrices[{i}]")
        parsed = [
            [_complex_pair(v, f"{where}.residue_matrices[{i}][{r}][{c}]") for c, v in enumerate(_list(row, f"{where}.residue_matrices[{i}][{r}]"))]
            for r, row in enumerate(rows)
        ]
        mats.append(parsed)
    arr = np.array(mats, dtype=np.complex128)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise ScenarioError(f"{where}.residue_matrices", "matrices must be square and uniform")
    if nb is not None and arr.shape[1] != nb:
        raise ScenarioError(f"{where}.nb", f"declared nb={nb} but matrices are {arr.shape[1]}x{arr.shape[2]}")
    try:
        return MatrixPoleModel(np.array(poles), arr)
    except ValueError as exc:
        raise ScenarioError(where, str(exc)) from exc


def _list(obj, where: str) -> list:
    if not isinstance(obj, list):
        raise ScenarioError(where, f"expected an array, got {type(obj).__name__}")
    return obj


def parse_scenario(doc: dict) -> Scenario:
    """Validate and build a Scenario from a JSON document (strict schema)."""
    _check_keys(doc, "scenario", required=("a", "b", "model", "access", "noise", "recovery"))
    a = _number(doc["a"], "scenario.a")
    b = _number(doc["b"], "scenario.b")
    try:
        cfg = DiskPairConfig(a, b)
    except ValueError as exc:
        raise ScenarioError("scenario.a", str(exc)) from exc

    model = _parse_model(doc["model"], "scenario.model")

    access_obj = doc["access"]
    _check_keys(access_obj, "scenario.access", required=("type",), optional=("n_s", "n_m", "beta", "statistics"))
    access = access_obj["type"]
    n_s = n_m = None
    beta = None
    statistics = None
    if access == RANDOM_ACCESS:
        _check_keys(access_obj, "scenario.access", required=("type", "n_s"))
        n_s = _integer(access_obj["n_s"], "scenario.access.n_s")
    elif access == MATSUBARA:
        _check_keys(access_obj, "scenario.access", required=("type", "n_m", "beta", "statistics"))
        n_m = _integer(access_obj["n_m"], "scenario.access.n_m")
        beta = _number(access_obj["beta"], "scenario.access.beta")
        statistics = access_obj["statistics"]
        if statistics not in STATISTICS:
            raise ScenarioError("scenario.access.statistics", f"must be one of {STATISTICS}")
    else:
        raise ScenarioError("scenario.access.type", f"must be '{RANDOM_ACCESS}' or '{MATSUBARA}'")

    noise_obj = doc["noise"]
    _check_keys(noise_obj, "scenario.noise", required=("sigma", "seed"))
    sigma = _number(noise_obj["sigma"], "scenario.noise.sigma")
    if sigma < 0:
        raise ScenarioError("scenario.noise.sigma", "must be nonnegative")
    noise = NoiseSpec(sigma=sigma, seed=_integer(noise_obj["seed"], "scenario.noise.seed"))

    rec_obj = doc["recovery"]
    _check_keys(rec_obj, "scenario.recovery", required=("d_max", "real_mode"), optional=("l", "eps"))
    d_max = _integer(rec_obj["d_max"], "scenario.recovery.d_max")
    l = _integer(rec_obj["l"], "scenario.recovery.l") if rec_obj.get("l") is not None else None
    eps = None
    if rec_obj.get("eps") is not None:
        eps = _number(rec_obj["eps"], "scenario.recovery.eps")
        if eps <= 0:
            raise ScenarioError("scenario.recovery.eps", "must be positive")
    real_mode = _boolean(rec_obj["real_mode"], "scenario.recovery.real_mode")

    return Scenario(
        cfg=cfg,
        model=model,
        access=access,
        n_s=n_s,
        n_m=n_m,
        beta=beta,
        statistics=statistics,
        noise=noise,
        d_max=d_max,
        l=l,
        eps=eps,
        real_mode=real_mode,
    )


def serialize_scenario(sc: Scenario) -> dict:
    """Canonical JSON form; parse(serialize(parse(x))) is stable."""
    model: dict = {"poles": [complex_to_pair(p) for p in sc.model.poles]}
    if sc.is_matrix:
        model["residue_matrices"] = [
            [[complex_to_pair(v) for v in row] for row in mat] for mat in sc.model.residues
        ]
        model["nb"] = sc.model.nb
    else:
        model["residues"] = [complex_to_pair(r) for r in sc.model.residues]
    if sc.access == RANDOM_ACCESS:
        access = {"type": RANDOM_ACCESS, "n_s": sc.n_s}
    else:
        access = {"type": MATSUBARA, "n_m": sc.n_m, "beta": sc.beta, "statistics": sc.statistics}
    recovery: dict = {"d_max": sc.d_max}
    if sc.l is not None:
        recovery["l"] = sc.l
    if sc.eps is not None:
        recovery["eps"] = sc.eps
    recovery["real_mode"] = sc.real_mode
    return {
        "a": sc.cfg.a,
        "b": sc.cfg.b,
        "model": model,
        "access": access,
        "noise": {"sigma": sc.noise.sigma, "seed": sc.noise.seed},
        "recovery": recovery,
    }


def _load_scenario(path: str) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError("scenario", f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("scenario", f"invalid JSON: {exc}") from exc
    return parse_scenario(doc)


def _write_json(path: Optional[str], doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# ---------------------------------------------------------------------------
# commands


def _apply_overrides(sc: Scenario, args) -> Scenario:
    if args.sigma is not None:
        if args.sigma < 0:
            raise ScenarioError("--sigma", "must be nonnegative")
        sc.noise = NoiseSpec(sigma=args.sigma, seed=sc.noise.seed)
    if args.seed is not None:
        sc.noise = NoiseSpec(sigma=sc.noise.sigma, seed=args.seed)
    if args.n_s is not None:
        if sc.access != RANDOM_ACCESS:
            raise ScenarioError("--n-s", "scenario does not use the random access model")
        sc.n_s = args.n_s
    if args.n_m is not None:
        if sc.access != MATSUBARA:
            raise ScenarioError("--n-m", "scenario does not use the Matsubara model")
        sc.n_m = args.n_m
    if args.beta is not None:
        if sc.access != MATSUBARA:
            raise ScenarioError("--beta", "scenario does not use the Matsubara model")
        sc.beta = args.beta
    if args.statistics is not None:
        if sc.access != MATSUBARA:
            raise ScenarioError("--statistics", "scenario does not use the Matsubara model")
        sc.statistics = args.statistics
    if args.d_max is not None:
        sc.d_max = args.d_max
    if args.l is not None:
        sc.l = args.l
    if args.eps is not None:
        if args.eps <= 0:
            raise ScenarioError("--eps", "must be positive")
        sc.eps = args.eps
    if args.real_mode is not None:
        sc.real_mode = args.real_mode
    return sc


def _build_samples(sc: Scenario) -> SampleSet:
    if sc.access == RANDOM_ACCESS:
        grid = random_access_grid(sc.n_s if sc.n_s is not None else DEFAULT_N_S, sc.cfg)
    else:
        grid = matsubara_grid(
            sc.n_m if sc.n_m is not None else DEFAULT_N_M,
            sc.beta if sc.beta is not None else DEFAULT_BETA,
            sc.statistics if sc.statistics is not None else "boson",
        )
    return sample(sc.model, grid, sc.noise)


def _run_cell(sc: Scenario):
    """sample -> recover -> match for one (sigma, seed) configuration."""
    samples = _build_samples(sc)
    result = recover(samples, sc.recovery_config())
    report = match_poles(sc.model, result)
    return result, report


def cmd_generate(args) -> int:
    cfg = DiskPairConfig(PAPER_A, PAPER_B)
    model = generate_scenario(args.kind, cfg, args.seed)
    real_mode = args.real_mode
    if real_mode is None:
        real_mode = args.kind in ("real8", "matrix8")
    sc = Scenario(
        cfg=cfg,
        model=model,
        access=args.access,
        n_s=args.n_s if args.access == RANDOM_ACCESS else None,
        n_m=args.n_m if args.access == MATSUBARA else None,
        beta=args.beta if args.access == MATSUBARA else None,
        statistics=args.statistics if args.access == MATSUBARA else None,
        noise=NoiseSpec(sigma=args.sigma, seed=args.seed),
        d_max=args.d_max,
        l=args.l,
        eps=args.eps,
        real_mode=real_mode,
    )
    _write_json(args.out, serialize_scenario(sc))
    return 0


def cmd_run(args) -> int:
    sc = _apply_overrides(_load_scenario(args.scenario), args)
    if args.samples is not None:
        doc = json.loads(Path(args.samples).read_text())
        samples = sample_set_from_json(doc, sc.cfg)
        if samples.access != sc.access:
            raise ScenarioError("--samples", "sample access model does not match the scenario")
    else:
        samples = None

    inputs = {
        "access": sc.access,
        "n_s": sc.n_s,
        "n_m": sc.n_m,
        "beta": sc.beta,
        "statistics": sc.statistics,
        "sigma": sc.noise.sigma,
        "seed": sc.noise.seed,
        "d_max": sc.d_max,
        "l": sc.l,
        "eps": sc.eps,
        "real_mode": sc.real_mode,
    }
    try:
        if samples is None:
            samples = _build_samples(sc)
        result = recover(samples, sc.recovery_config())
        report = match_poles(sc.model, result)
    except Exception as exc:  # numerical failure: write what we know, exit 2
        _write_json(
            args.out,
            {"error": f"{type(exc).__name__}: {exc}", "inputs": inputs},
        )
        return 2
    doc = {"inputs": inputs}
    doc.update(result.to_json_dict(include_coefficients=args.dump_coeffs, include_timing=args.timing))
    doc["match_report"] = report.to_json_dict()
    _write_json(args.out, doc)
    return 0


def _parse_float_list(text: str, flag: str) -> list:
    stripped = text.strip()
    if not stripped:
        return []
    try:
        return [float(tok) for tok in stripped.split(",")]
    except ValueError as exc:
        raise ScenarioError(flag, f"expected a comma-separated list of numbers: {exc}") from exc


def _parse_int_list(text: str, flag: str) -> list:
    stripped = text.strip()
    if not stripped:
        return []
    try:
        return [int(tok) for tok in stripped.split(",")]
    except ValueError as exc:
        raise ScenarioError(flag, f"expected a comma-separated list of integers: {exc}") from exc


SWEEP_COLUMNS = (
    "sigma",
    "seed",
    "n_recovered",
    "max_matched_error",
    "mean_matched_error",
    "unmatched_true",
    "unmatched_recovered",
    "fit_residual",
    "status",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    return str(value)


def cmd_sweep(args) -> int:
    base = _load_scenario(args.scenario)
    sigmas = sorted(_parse_float_list(args.sigmas, "--sigmas"))
    seeds = sorted(_parse_int_list(args.seeds, "--seeds"))
    cells = [(sigma, seed) for sigma in sigmas for seed in seeds]

    def run_one(cell):
        sigma, seed = cell
        sc = _load_scenario(args.scenario)
        sc.noise = NoiseSpec(sigma=sigma, seed=seed)
        try:
            result, report = _run_cell(sc)
        except Exception as exc:
            return cell, None, None, f"error:{type(exc).__name__}"
        return cell, result, report, "ok"

    if args.jobs > 1 and cells:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(run_one, cells))
    else:
        outcomes = [run_one(cell) for cell in cells]
    outcomes.sort(key=lambda item: (item[0][0], item[0][1]))

    rows = []
    scatter_rows = []
    for (sigma, seed), result, report, status in outcomes:
        if status == "ok":
            rows.append(
                [
                    sigma,
                    seed,
                    result.n_poles,
                    report.max_matched_error,
                    report.mean_matched_error,
                    len(report.unmatched_true),
                    len(report.unmatched_recovered),
                    result.fit_residual,
                    status,
                ]
            )
            for pole in base.model.poles:
                scatter_rows.append([sigma, seed, "true", float(pole.real), float(pole.imag)])
            for pole in result.poles:
                scatter_rows.append([sigma, seed, "recovered", float(pole.real), float(pole.imag)])
        else:
            rows.append([sigma, seed, None, None, None, None, None, None, status])

    with open(args.out, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])

    scatter_path = args.scatter_out
    if scatter_path is None:
        out = Path(args.out)
        scatter_path = str(out.with_name(out.stem + "_scatter.csv"))
    with open(scatter_path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("sigma", "seed", "kind", "re", "im"))
        for row in scatter_rows:
            writer.writerow([_fmt(v) for v in row])
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polerec",
        description="Recover poles and residues of a meromorphic function from "
        "noisy samples on the imaginary axis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic scenario file")
    gen.add_argument("kind", choices=("complex8", "real8", "matrix8"))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default=None, help="output path (default: stdout)")
    gen.add_argument("--access", choices=(RANDOM_ACCESS, MATSUBARA), default=RANDOM_ACCESS)
    gen.add_argument("--n-s", type=int, default=DEFAULT_N_S)
    gen.add_argument("--n-m", type=int, default=DEFAULT_N_M)
    gen.add_argument("--beta", type=float, default=DEFAULT_BETA)
    gen.add_argument("--statistics", choices=STATISTICS, default="boson")
    gen.add_argument("--sigma", type=float, default=0.0)
    gen.add_argument("--d-max", type=int, default=DEFAULT_D_MAX)
    gen.add_argument("--l", type=int, default=None)
    gen.add_argument("--eps", type=float, default=None)
    gen.add_argument("--real-mode", action=argparse.BooleanOptionalAction, default=None)

    run = sub.add_parser("run", help="sample, recover, and compare to ground truth")
    run.add_argument("--scenario", required=True)
    run.add_argument("--out", default=None, help="result JSON path (default: stdout)")
    run.add_argument("--samples", default=None, help="replay a stored SampleSet JSON")
    run.add_argument("--sigma", type=float, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--n-s", type=int, default=None)
    run.add_argument("--n-m", type=int, default=None)
    run.add_argument("--beta", type=float, default=None)
    run.add_argument("--statistics", choices=STATISTICS, default=None)
    run.add_argument("--d-max", type=int, default=None)
    run.add_argument("--l", type=int, default=None)
    run.add_argument("--eps", type=float, default=None)
    run.add_argument("--real-mode", action=argparse.BooleanOptionalAction, default=None)
    run.add_argument("--dump-coeffs", action="store_true")
    run.add_argument("--timing", action="store_true", help="include wall time in the output")

    sweep = sub.add_parser("sweep", help="run a sigma x seed grid and write CSV summaries")
    sweep.add_argument("--scenario", required=True)
    sweep.add_argument("--sigmas", required=True, help="comma-separated noise levels")
    sweep.add_argument("--seeds", required=True, help="comma-separated noise seeds")
    sweep.add_argument("--out", required=True, help="summary CSV path")
    sweep.add_argument("--scatter-out", default=None, help="pole scatter CSV (default: <out>_scatter.csv)")
    sweep.add_argument("--jobs", type=int, default=1)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"generate": cmd_generate, "run": cmd_run, "sweep": cmd_sweep}
    try:
        return handlers[args.command](args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
