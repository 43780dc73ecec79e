"""The invariant suite behind ``rotforge verify``.

Each check reports a measured deviation and a tolerance; the suite passes
when every check does.  Known misprints in the published closed forms are
reported as flags next to the checks, not patched.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .circuits import build_dpl_circuit, build_encoder, build_mekl_circuit, verify_compression_identities
from .dilution import verify_dilution_identity
from .noise import (
    NoiseSpec,
    closed_forms,
    error_detection,
    leading_coefficients,
    monte_carlo_generic,
    simulate_round,
)

LEVELS = (4, 5, 6, 7, 8)


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.deviation <= self.tolerance)


@dataclass
class VerifyReport:
    checks: list[CheckResult] = field(default_factory=list)
    errata: dict[str, str] = field(default_factory=dict)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [dict(asdict(c), passed=c.passed) for c in self.checks],
            "errata": self.errata,
            "info": self.info,
        }


def encoder_deviation() -> float:
    """Worst entry of E P E^dag - image(P) over the eight generators."""
    spec, gate = build_encoder()
    e = gate.unitary
    dev = 0.0
    for key, image in spec.images.items():
        p = spec.generator(key).matrix()
        dev = max(dev, float(np.max(np.abs(e @ p @ e.conj().T - image.matrix()))))
    return dev


def dilution_grid_deviation(levels=range(3, 13), n_eps: int = 25) -> float:
    eps = np.linspace(0.0, 0.45, n_eps)
    return max(verify_dilution_identity(l, float(e)) for l in levels for e in eps)


def run_verify(pivot_sign: int = 1, seed: int = 0, trials: int = 200, levels=LEVELS) -> VerifyReport:
    rep = VerifyReport()
    add = rep.checks.append
    add(CheckResult("encoder_table", encoder_deviation(), 1e-10))
    for level in levels:
        for name, chk in verify_compression_identities(level, pivot_sign).items():
            add(CheckResult(f"{name}[l={level}]", chk.deviation, 1e-10))
        noise = NoiseSpec(0.0, 1e-3, 1e-4)
        a = simulate_round(build_dpl_circuit(level, pivot_sign), noise)
        b = simulate_round(build_mekl_circuit(level, pivot_sign), noise)
        add(CheckResult(f"dp_mek_outcome[l={level}]", max(abs(a.delta - b.delta), abs(a.p_suc - b.p_suc)), 1e-12))
        det = error_detection(level)
        add(CheckResult(f"single_error_detection[l={level}]", det.max_single, 1e-14,
                        f"{det.passing_pairs()} of {len(det.double)} error pairs accepted"))
        coef = leading_coefficients(level)
        for label, got, want in zip(
            ("delta_eps3^2", "delta_epsl^2", "delta_eta", "pfail_eps3", "pfail_epsl", "pfail_eta"),
            coef.delta + coef.p_fail,
            (8.0, 1.0, 0.25, 8.0, 2.0, 0.5),
        ):
            add(CheckResult(f"{label}[l={level}]", abs(got / want - 1.0), 0.01, f"measured {got:.6g}"))
    add(CheckResult("dilution_identity", dilution_grid_deviation(), 1e-12))
    caps = NoiseSpec(1e-2, 1e-2, 1e-4)
    mc = monte_carlo_generic(seed, trials, caps, 5)
    add(CheckResult("generic_bound_violations", float(mc.violations), 0.0,
                    f"{trials} trials, worst error/bound {mc.max_ratio:.3f}"))
    forms = closed_forms(NoiseSpec(1e-3, 1e-3, 1e-6), level=5)
    rep.errata = dict(forms.errata_flags)
    rep.info = {
        "pivot_sign": pivot_sign,
        "seed": seed,
        "monte_carlo": asdict(mc),
        "closed_form_probe": {"delta_corrected": forms.delta_corrected, "p_corrected": forms.p_corrected,
                              "p_verbatim": forms.p_verbatim},
    }
    return rep
