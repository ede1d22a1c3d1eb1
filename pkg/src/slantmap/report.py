"""Analysis orchestration and deterministic JSON report emission.

Checks run in dependency order (Hermitian target, parallel structure,
Riemannian property, slant classification, then the structural identities);
a check whose precondition fails is reported as skipped, never as failed.
Reports are byte-identical for a fixed input and seed: floats are written
with 17 significant digits and containers keep insertion order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .charts import ChartError, check_almost_hermitian, check_kahler
from .loader import AnalysisSettings, LoadedMap
from .maps import check_sff_range_perp, is_riemannian_map, map_point
from .result import CheckResult
from .slant import (NOT_RIEMANNIAN, SlantReport, check_adapted_frame,
                    check_harmonic, check_harmonic_minimal_equivalence,
                    check_lambda_mu_consistency, check_minimal_fibers,
                    check_omega_defect_identity, check_omega_parallel,
                    check_phi_parallel, check_phi_squared_scaling,
                    check_phwc, check_pseudo_homothetic,
                    check_q_squared_scaling, check_sff_q_scaling,
                    check_totally_geodesic, classify_slant)

REPORT_SCHEMA = "slantmap-report/1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


@dataclass
class Report:
    metadata: dict
    checks: List[CheckResult]
    slant: Optional[SlantReport] = None

    @property
    def exit_code(self) -> int:
        if any(c.status in ("fail", "error") for c in self.checks):
            return EXIT_CHECK_FAILED
        return EXIT_OK

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        counts = {"pass": 0, "fail": 0, "skipped": 0, "error": 0}
        for c in self.checks:
            counts[c.status] += 1
        out = {
            "schema": REPORT_SCHEMA,
            "metadata": self.metadata,
            "checks": [c.to_dict() for c in self.checks],
        }
        if self.slant is not None:
            out["slant"] = self.slant.to_dict()
        out["summary"] = counts
        return out


def sample_points(box, count: int, seed: int) -> list:
    """Uniform points in the box; the fixed draw order makes runs repeatable."""
    rng = np.random.default_rng(seed)
    lows = np.array([lo for lo, _ in box])
    highs = np.array([hi for _, hi in box])
    return [lows + rng.random(len(box)) * (highs - lows) for _ in range(count)]


def run_analysis(loaded: LoadedMap,
                 settings: Optional[AnalysisSettings] = None) -> Report:
    """Run every applicable check on the map and assemble the report."""
    spec = loaded.spec
    settings = settings or loaded.settings
    points = sample_points(spec.box, settings.points, settings.seed)
    tol = settings.check_tol
    rank_tol = settings.rank_tol

    metadata = {
        "map": loaded.origin,
        "name": spec.name,
        "source_dim": spec.source.dim,
        "target_dim": spec.target.dim,
        "samples": settings.points,
        "dirs": settings.dirs,
        "seed": settings.seed,
        "tolerances": {"rank": rank_tol, "check": tol,
                       "angle": settings.angle_tol},
    }
    if loaded.digest:
        metadata["sha256"] = loaded.digest

    checks: List[CheckResult] = []

    def run(factory, name):
        try:
            result = factory()
        except ChartError as exc:
            result = CheckResult.error(name, str(exc))
        except Exception as exc:  # keep the report total; surface the cause
            result = CheckResult.error(name, f"{type(exc).__name__}: {exc}")
        checks.append(result)
        return result

    has_j = spec.target.complex_structure is not None
    if has_j:
        try:
            image_points = [map_point(spec, p) for p in points]
        except Exception as exc:
            image_points = None
            for name in ("almost_hermitian", "kahler"):
                checks.append(CheckResult.error(
                    name, f"{type(exc).__name__}: {exc}"))
        if image_points is not None:
            hermitian = run(lambda: check_almost_hermitian(
                spec.target, image_points, tol), "almost_hermitian")
            if hermitian.passed:
                run(lambda: check_kahler(spec.target, image_points,
                                         dirs=4, tol=tol, seed=settings.seed),
                    "kahler")
            else:
                checks.append(CheckResult.skipped(
                    "kahler", "target is not almost Hermitian"))
    else:
        checks.append(CheckResult.skipped(
            "almost_hermitian", "target has no complex structure"))
        checks.append(CheckResult.skipped(
            "kahler", "target has no complex structure"))

    riemannian = run(lambda: is_riemannian_map(spec, points, tol, rank_tol),
                     "riemannian_map")

    if riemannian.passed:
        run(lambda: check_sff_range_perp(spec, points, tol, rank_tol),
            "sff_range_perp")
        run(lambda: check_harmonic(spec, points, tol, rank_tol), "harmonic")
        run(lambda: check_minimal_fibers(spec, points, tol, rank_tol),
            "minimal_fibers")
        run(lambda: check_totally_geodesic(spec, points, tol, rank_tol),
            "totally_geodesic")
    else:
        for name in ("sff_range_perp", "harmonic", "minimal_fibers",
                     "totally_geodesic"):
            checks.append(CheckResult.skipped(name, "map is not Riemannian"))

    slant_names = ("phi_squared_scaling", "q_squared_scaling",
                   "lambda_mu_consistency", "adapted_frame", "omega_parallel",
                   "phi_parallel", "omega_defect_identity", "sff_q_scaling",
                   "harmonic_minimal_equivalence", "phwc", "pseudo_homothetic")
    slant_report = None
    if has_j:
        try:
            slant_report = classify_slant(
                spec, points, settings.dirs, settings.angle_tol, tol,
                settings.seed, rank_tol)
        except Exception as exc:
            reason = f"{type(exc).__name__}: {exc}"
            checks.append(CheckResult.error("slant_classification", reason))
            for name in slant_names:
                checks.append(CheckResult.skipped(
                    name, "slant classification failed"))
    else:
        checks.append(CheckResult.skipped(
            "slant_classification", "target has no complex structure"))
        for name in slant_names:
            checks.append(CheckResult.skipped(
                name, "target has no complex structure"))

    if slant_report is not None:
        if slant_report.classification == NOT_RIEMANNIAN:
            for name in slant_names:
                checks.append(CheckResult.skipped(name, "map is not Riemannian"))
        else:
            report = slant_report
            run(lambda: check_phi_squared_scaling(report, tol),
                "phi_squared_scaling")
            run(lambda: check_q_squared_scaling(report, tol),
                "q_squared_scaling")
            run(lambda: check_lambda_mu_consistency(report),
                "lambda_mu_consistency")
            run(lambda: check_adapted_frame(spec, points, report,
                                            rank_tol=rank_tol),
                "adapted_frame")
            run(lambda: check_omega_parallel(report, tol), "omega_parallel")
            run(lambda: check_phi_parallel(report, tol), "phi_parallel")
            run(lambda: check_omega_defect_identity(spec, points,
                                                    rank_tol=rank_tol),
                "omega_defect_identity")
            run(lambda: check_sff_q_scaling(spec, points, report, tol,
                                            rank_tol),
                "sff_q_scaling")
            run(lambda: check_harmonic_minimal_equivalence(spec, points, report,
                                                           tol, rank_tol),
                "harmonic_minimal_equivalence")
            run(lambda: check_phwc(spec, points, report, tol, rank_tol), "phwc")
            run(lambda: check_pseudo_homothetic(spec, points, report, tol,
                                                rank_tol),
                "pseudo_homothetic")

    return Report(metadata, checks, slant_report)


# ---------------------------------------------------------------------------
# Deterministic JSON writer: floats carry 17 significant digits.

def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def _write_json(value, pieces: list, indent: Optional[int], level: int) -> None:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    closing = "" if indent is None else "\n" + " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            pieces.append("{}")
            return
        pieces.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                pieces.append(",")
            pieces.append(pad)
            pieces.append(f'"{key}": ' if indent is not None else f'"{key}":')
            _write_json(item, pieces, indent, level + 1)
        pieces.append(closing + "}")
    elif isinstance(value, (list, tuple)):
        items = list(value)
        if not items:
            pieces.append("[]")
            return
        pieces.append("[")
        for i, item in enumerate(items):
            if i:
                pieces.append(",")
            pieces.append(pad)
            _write_json(item, pieces, indent, level + 1)
        pieces.append(closing + "]")
    elif isinstance(value, bool) or isinstance(value, np.bool_):
        pieces.append("true" if value else "false")
    elif isinstance(value, (int, np.integer)):
        pieces.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        pieces.append(_format_float(float(value)))
    elif value is None:
        pieces.append("null")
    else:
        escaped = (str(value).replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n"))
        pieces.append(f'"{escaped}"')


def render_report(report: Report, pretty: bool = False) -> str:
    pieces: list = []
    _write_json(report.to_dict(), pieces, 2 if pretty else None, 0)
    pieces.append("\n")
    return "".join(pieces)
