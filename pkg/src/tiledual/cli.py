"""Command-line front end.

    tiledual --command verdict --input omega.json --output report.json
    tiledual --command sweep --input omega.json --output sweep.csv --sweep comb --n-max 1

Exit status: 0 when the check holds (or the verdict is consistent), 1
when a check fails, 2 on unusable input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__, fourier, spectral, tiling
from .intervals import measure
from .tiling import PeriodicSet, PreconditionError

log = logging.getLogger("tiledual")

COMMANDS = ("check-tiling", "check-spectral", "complete", "verdict", "sweep")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: str
    output_path: Optional[str] = None
    tolerances: dict = field(default_factory=lambda: {"tol": 1e-6, "spectrum_tol": 1e-4})
    seed: int = 0
    n_max: int = 2
    K_max: int = fourier.K_MAX
    t_samples: int = 16
    sweep: str = "plancherel"
    points: int = 101

    def validate(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}")
        for name, value in self.tolerances.items():
            if not value > 0:
                raise InputError(f"tolerance {name} must be positive, got {value}")
        if self.n_max < 0:
            raise InputError(f"--n-max must be >= 0, got {self.n_max}")
        if self.t_samples < 1 or self.points < 1 or self.K_max < 1:
            raise InputError("--t-samples, --points and --k-max must be positive")
        if self.sweep not in ("plancherel", "comb"):
            raise InputError(f"unknown sweep kind {self.sweep!r}")


def load_problem(path: str) -> tuple[PeriodicSet, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read input: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    try:
        omega = PeriodicSet.from_json(data)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    return omega, data


def _test_functions(data: dict, path: str) -> list:
    raw = data.get("test_functions")
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise InputError(f"{path}: field 'test_functions' must be a list")
    out = []
    for idx, item in enumerate(raw):
        try:
            out.append(spectral.test_function_from_json(item))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: test_functions[{idx}]: {exc}") from None
    return out


def _check_tiling(omega: PeriodicSet, config: RunConfig, data: dict) -> tuple[dict, bool]:
    report = tiling.tiles_by_residues(omega)
    decomposition, congruent = tiling.congruence_mod_one(omega.base)
    overlaps = {str(j): str(tiling.translate_disjointness(omega, j)) for j in range(1, omega.p)}
    return {
        "tiling": report.to_json(),
        "measure": str(measure(omega.base)),
        "congruence": {"pieces": decomposition.to_json(), "congruent": congruent},
        "translate_overlaps": overlaps,
    }, report.verdict


def _check_spectral(omega: PeriodicSet, config: RunConfig, data: dict) -> tuple[dict, bool]:
    tol = config.tolerances.get("tol", 1e-6)
    spectrum_tol = config.tolerances.get("spectrum_tol", 1e-4)
    checks = []
    for n in range(config.n_max + 1):
        s = tiling.build_omega_n(omega.base, omega.p, n)
        try:
            rep = spectral.verify_finite_spectrum(
                s, spectral.spectrum_lambda_n(omega.p, n), config.t_samples, spectrum_tol, config.seed, config.K_max
            )
            checks.append(rep.to_json())
        except fourier.TruncationError as exc:
            checks.append({"name": "finite_spectrum", "passed": False, "parameters": {"n": n}, "error": str(exc)})

    functions = _test_functions(data, config.input_path) or spectral.canonical_family(omega)
    for f in functions:
        f_tol = tol
        if isinstance(f, fourier.StepFunction):
            f_tol = max(tol, fourier.achievable_step_tolerance(f, k_max=config.K_max))
        try:
            iso = spectral.isometry_check(omega, f, max(config.n_max, _n0(f, omega)), f_tol)
            entry = iso.to_json()
            entry["name"] = "isometry"
            entry["passed"] = iso.residual <= f_tol + iso.tail_bound + iso.quadrature_error + 1e-9
            checks.append(entry)
            if isinstance(f, fourier.StepFunction):
                rep = spectral.periodization_period_check(omega, f, None, config.t_samples, f_tol, config.seed)
                checks.append(rep.to_json())
        except PreconditionError as exc:
            raise InputError(f"{config.input_path}: test function: {exc}") from None

    for j in range(1, omega.p):
        m = spectral.orthogonality_check(omega, j)
        checks.append({"name": "orthogonality", "parameters": {"j": j}, "overlap": str(m), "passed": m == 0})

    g = spectral.BumpFunction(0, Fraction(1, 4 * omega.p))
    try:
        checks.append(spectral.surjectivity_witness(omega, g, 0, 65).to_json())
    except PreconditionError as exc:
        checks.append({"name": "surjectivity", "passed": False, "error": str(exc)})
    passed = all(c["passed"] for c in checks)
    return {"checks": checks, "all_passed": passed}, passed


def _n0(f, omega: PeriodicSet) -> int:
    support = f.support if isinstance(f, fourier.StepFunction) else spectral.IntervalSet([f.support])
    return spectral._periods_touched(support, omega.p)


def _complete(omega: PeriodicSet, config: RunConfig, data: dict) -> tuple[dict, bool]:
    try:
        residue, tilde = tiling.complete_to_tile(omega)
    except PreconditionError as exc:
        return {"error": str(exc), "translate_overlaps": {
            str(j): str(tiling.translate_disjointness(omega, j)) for j in range(1, omega.p)
        }}, False
    return {"R": residue.to_json(), "omega_tilde": tilde.to_json()}, True


def _verdict(omega: PeriodicSet, config: RunConfig, data: dict) -> tuple[dict, bool]:
    thresholds = spectral.Thresholds(
        numeric_tol=config.tolerances.get("tol", 1e-6),
        spectrum_tol=config.tolerances.get("spectrum_tol", 1e-4),
        n_max=config.n_max,
        t_samples=config.t_samples,
        seed=config.seed,
        k_max=config.K_max,
    )
    verdict = spectral.duality_verdict(omega, thresholds)
    return verdict.to_json(), verdict.consistent


def sweep(omega: PeriodicSet, config: RunConfig) -> str:
    """CSV ``t,value,tail_bound`` on the grid ``i / points`` of ``[0, 1)``."""
    grid = [Fraction(i, config.points) for i in range(config.points)]
    if config.sweep == "comb":
        sampled = fourier.sweep_comb(omega.p, config.n_max, grid)
    else:
        sampled = fourier.sweep_plancherel(omega.base, [0], grid, config.tolerances.get("tol", 1e-6))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "value", "tail_bound"])
    writer.writerows(sampled.to_csv_rows())
    return buf.getvalue()


HANDLERS = {
    "check-tiling": _check_tiling,
    "check-spectral": _check_spectral,
    "complete": _complete,
    "verdict": _verdict,
}


def run(config: RunConfig) -> int:
    try:
        config.validate()
        omega, data = load_problem(config.input_path)
        if config.command == "sweep":
            text = sweep(omega, config)
        else:
            result, ok = HANDLERS[config.command](omega, config, data)
            report = {
                "command": config.command,
                "config": asdict(config),
                "input": omega.to_json(),
                "result": result,
                "ok": ok,
                "consistent": ok if config.command == "verdict" else None,
                "metadata": {
                    "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                    "version": __version__,
                },
            }
            text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except fourier.TruncationError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL

    if config.output_path:
        try:
            Path(config.output_path).write_text(text)
        except OSError as exc:
            print(f"error: {config.output_path}: cannot write output: {exc.strerror or exc}", file=sys.stderr)
            return EXIT_INPUT
    else:
        sys.stdout.write(text)
    if config.command == "sweep":
        return EXIT_OK
    log.info("%s: %s", config.command, "ok" if ok else "failed")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tiledual", description=__doc__.splitlines()[0])
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--input", required=True, help="periodic set JSON: {\"p\": 2, \"base\": [[\"0\", \"1\"]]}")
    ap.add_argument("--output", help="report path (stdout if omitted)")
    ap.add_argument("--tol", type=float, default=1e-6, help="tail / residual tolerance")
    ap.add_argument("--spectrum-tol", type=float, default=1e-4, help="tail tolerance of the finite-spectrum sums")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-max", type=int, default=2)
    ap.add_argument("--k-max", type=int, default=fourier.K_MAX)
    ap.add_argument("--t-samples", type=int, default=16)
    ap.add_argument("--sweep", choices=("plancherel", "comb"), default="plancherel")
    ap.add_argument("--points", type=int, default=101)
    return ap


def main(argv=None) -> int:
    level = os.environ.get("TILEDUAL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    config = RunConfig(
        command=args.command,
        input_path=args.input,
        output_path=args.output,
        tolerances={"tol": args.tol, "spectrum_tol": args.spectrum_tol},
        seed=args.seed,
        n_max=args.n_max,
        K_max=args.k_max,
        t_samples=args.t_samples,
        sweep=args.sweep,
        points=args.points,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
