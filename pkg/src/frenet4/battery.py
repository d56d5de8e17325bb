"""Seeded test batteries of slant and non-slant curvature profiles.

Each item is reconstructed into a curve and examined with all three slant
tests; a battery passes when every test returns the item's known class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CurvatureVanishes, SquareRootDomain
from .frenet_ode import (
    CurvatureProfile,
    ReconstructionResult,
    builtin_profile,
    reconstruct_curve,
    scalar_family,
)
from .quadrature import SampledFunction
from .slant_helix import (
    TOL_AXIS,
    TOL_CONST,
    TOL_RES,
    SlantDiagnostics,
    SynthesisRecord,
    Verdict,
    constancy_residual,
    detect_slant,
    f_function_check,
    integral_characterization_check,
    synthesize_slant_profile,
)

DEFAULT_H = 1e-3
DEFAULT_N = 6000
PERTURBATION = 0.2


@dataclass(frozen=True)
class BatteryItem:
    name: str
    slant: bool  # ground truth
    profile: CurvatureProfile
    record: SynthesisRecord | None = None


@dataclass(frozen=True)
class ItemResult:
    item: BatteryItem
    reconstruction: ReconstructionResult
    diagnostics: SlantDiagnostics
    detect: Verdict
    f_check: Verdict
    integral_check: Verdict
    residual_scaled: float  # max |(k1 k3/k2) J + F'| over the larger of its terms

    @property
    def verdicts(self):
        return self.detect, self.f_check, self.integral_check

    @property
    def expected(self) -> Verdict:
        return Verdict.SLANT if self.item.slant else Verdict.NOT_SLANT

    @property
    def agree(self) -> bool:
        return all(v == self.expected for v in self.verdicts)


def _sine_params(rng, mean, amp, freq):
    return [rng.uniform(*mean), rng.uniform(*amp), rng.uniform(*freq), rng.uniform(0, 2 * np.pi)]


def random_slant_item(rng, grid, name="slant", max_tries=1000) -> BatteryItem:
    """Draw smooth positive kappa2, kappa3 and constants A, B, D until synthesis is admissible.

    Admissible means kappa1 stays above 0.05 and the constant of int k1
    (sqrt D) lies well inside the search interval of the detector.
    """
    s0, h, n = grid
    s = s0 + h * np.arange(n)
    length = h * (n - 1)
    for _ in range(max_tries):
        p2 = _sine_params(rng, (0.5, 1.5), (0.0, 0.4), (0.5, 2.0))
        p3 = _sine_params(rng, (0.15, 0.4), (0.0, 0.3), (0.3, 1.5))
        A = rng.uniform(-1.0, 6.0)
        B = rng.uniform(-2.0, -0.1)
        D = rng.uniform(0.5, 6.0)
        k2 = SampledFunction(s0, h, scalar_family("sine", p2, s))
        k3 = SampledFunction(s0, h, scalar_family("sine", p3, s))
        try:
            profile, record = synthesize_slant_profile(k2, k3, A, B, D)
        except (SquareRootDomain, CurvatureVanishes):
            continue
        k1 = profile.kappa1
        if k1.min() < 0.05 or record.c_bar > 0.8 * length * k1.max():
            continue
        meta = ("sine", *p2, "sine", *p3, A, B, D)
        profile = CurvatureProfile(s0, h, k1, profile.kappa2, profile.kappa3, "slant", meta)
        return BatteryItem(name, True, profile, record)
    raise RuntimeError("could not draw an admissible slant profile")


def random_wcurve_params(rng):
    p, q = sorted(rng.uniform(0.5, 2.5, size=2))
    if q - p < 0.2:
        q = p + 0.2
    ratio = rng.uniform(0.5, 2.0)
    scale = 1.0 / np.sqrt(p * p + ratio * ratio * q * q)
    return [scale, p, ratio * scale, q]


def build_battery(n_slant: int = 20, n_nonslant: int = 20, seed: int = 0,
                  h: float = DEFAULT_H, n: int = DEFAULT_N, s0: float = 0.0) -> list[BatteryItem]:
    """Deterministic battery: synthesized slant helices, then constant,
    W-curve and kappa1-perturbed slant profiles in rotation."""
    rng = np.random.default_rng(seed)
    grid = (s0, h, n)
    items = [random_slant_item(rng, grid, f"slant-{i:02d}") for i in range(n_slant)]
    bases = [it.profile for it in items] or [random_slant_item(rng, grid).profile]
    for i in range(n_nonslant):
        kind = i % 3
        if kind == 0:
            params = rng.uniform(0.3, 1.5, size=3)
            profile = builtin_profile("constant", params, grid)
            items.append(BatteryItem(f"constant-{i:02d}", False, profile))
        elif kind == 1:
            profile = builtin_profile("wcurve", random_wcurve_params(rng), grid)
            items.append(BatteryItem(f"wcurve-{i:02d}", False, profile))
        else:
            base = bases[(i // 3) % len(bases)]
            profile = builtin_profile("perturbed", [PERTURBATION], grid, base=base)
            items.append(BatteryItem(f"perturbed-{i:02d}", False, profile))
    return items


def evaluate_apparatus(app, tol_const=TOL_CONST, tol_res=TOL_RES, tol_axis=TOL_AXIS,
                       kappa_min=None):
    """Run the three slant tests with a shared fitted constant of int k1."""
    diag = detect_slant(app, tol_const=tol_const, tol_axis=tol_axis, kappa_min=kappa_min)
    fc = f_function_check(app, diag.c0, tol_res=tol_res, kappa_min=kappa_min)
    ic = integral_characterization_check(app, diag.c0, tol_res=tol_res, kappa_min=kappa_min)
    return diag, fc, ic


def _as_verdict(passed: bool) -> Verdict:
    return Verdict.SLANT if passed else Verdict.NOT_SLANT


def evaluate_item(item: BatteryItem, tol_const=TOL_CONST, tol_res=TOL_RES, tol_axis=TOL_AXIS,
                  kappa_min=None) -> ItemResult:
    rec = reconstruct_curve(item.profile, kappa_min=kappa_min)
    diag, fc, ic = evaluate_apparatus(rec.apparatus, tol_const, tol_res, tol_axis, kappa_min)
    res, scale = constancy_residual(rec.apparatus, diag.c0, kappa_min)
    return ItemResult(item, rec, diag, diag.verdict, _as_verdict(fc.passed),
                      _as_verdict(ic.passed), float(np.max(np.abs(res.values)) / scale))


def run_battery(items, **tolerances) -> list[ItemResult]:
    return [evaluate_item(it, **tolerances) for it in items]


def format_report(results) -> str:
    lines = [f"{'item':<14} {'expected':<13} {'detect':<13} {'f-check':<13} "
             f"{'integral':<13} {'std(C)':>10} {'agree':>5}"]
    for r in results:
        lines.append(
            f"{r.item.name:<14} {str(r.expected):<13} {str(r.detect):<13} "
            f"{str(r.f_check):<13} {str(r.integral_check):<13} "
            f"{r.diagnostics.constancy.std:10.3e} {'yes' if r.agree else 'NO':>5}"
        )
    n_ok = sum(r.agree for r in results)
    lines.append(f"agreement: {n_ok}/{len(results)}")
    return "\n".join(lines)
