"""Built-in reproduction checks behind the ``verify`` command.

Four groups: the worked Bell-mixture example, the three-qubit W mixture,
the discordant-family thresholds, and the structure of the (theta, epsilon)
sweep.  Every row prints expected value, actual value, and tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .channels import marginal_product
from .mdms import find_thresholds, scan_mdms
from .quantifiers import closest_classical, full_report, total_correlations
from .search import OptimizerConfig
from .states import preset, relative_entropy, von_neumann_entropy

X_BASIS_THETA_TOL = 0.02


@dataclass(frozen=True)
class VerifyRow:
    group: str
    name: str
    expected: str
    actual: str
    tolerance: str
    passed: bool

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "name": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _row(group, name, expected, actual, tol) -> VerifyRow:
    passed = abs(actual - expected) <= tol
    return VerifyRow(
        group=group,
        name=name,
        expected=f"{expected:.6g}",
        actual=f"{actual:.6g}",
        tolerance=f"±{tol:.2g}",
        passed=passed,
    )


def _bound_row(group, name, value, bound, kind) -> VerifyRow:
    passed = value <= bound if kind == "max" else value >= bound
    rel = "<=" if kind == "max" else ">="
    return VerifyRow(
        group=group,
        name=name,
        expected=f"{rel} {bound:.3g}",
        actual=f"{value:.6g}",
        tolerance="bound",
        passed=passed,
    )


def check_worked_example(cfg: OptimizerConfig) -> list[VerifyRow]:
    """Bell-mixture state: hookup family in the computational basis, D and J."""
    started = time.perf_counter()
    report = full_report(preset("paper-example"), cfg=cfg)
    elapsed = time.perf_counter() - started
    g = "example"
    rows = [
        _row(g, "M", 0.5, report.hookup, 1e-6),
        _row(g, "C", 0.5, report.coherence, 1e-6),
        _row(g, "C_M", 0.5, report.multipartite_coherence, 1e-6),
        _row(g, "K", 0.0, report.irreducible_classical, 1e-9),
        _row(g, "D", 0.31, report.discord, 0.01),
        _row(g, "J", 0.19, report.classical_correlations, 0.01),
    ]
    for q, angles in enumerate(report.chi_basis.angles):
        rows.append(
            _row(g, f"chi basis theta_{q + 1}", math.pi / 4, angles.theta, X_BASIS_THETA_TOL)
        )
    rows.append(_bound_row(g, "runtime [s]", elapsed, 5.0, "max"))
    return rows


def check_w_mixture(cfg: OptimizerConfig) -> list[VerifyRow]:
    """Three-qubit W mixture: the excess term in both evaluation forms."""
    started = time.perf_counter()
    state = preset("w-mixture")
    cc = closest_classical(state, cfg)
    d = von_neumann_entropy(cc.chi) - von_neumann_entropy(state)
    j = total_correlations(cc.chi)
    t = total_correlations(state)
    excess = d + j - t
    cross = relative_entropy(marginal_product(state), marginal_product(cc.chi))
    elapsed = time.perf_counter() - started
    g = "w-mixture"
    return [
        _row(g, "L", 0.24, excess, 0.01),
        _bound_row(g, "cross-form residual", abs(excess - cross), 1e-6, "max"),
        _bound_row(g, "runtime [s]", elapsed, 30.0, "max"),
    ]


def check_thresholds(cfg: OptimizerConfig) -> list[VerifyRow]:
    g = "thresholds"
    switch = find_thresholds("basis-switch", cfg)
    deriv = find_thresholds("derivative", cfg)
    return [
        _row(g, "eps' (basis-switch)", 2 / 3, switch.eps_prime, 0.01),
        _row(g, "eps'' (basis-switch)", 0.76, switch.eps_double_prime, 0.01),
        _row(g, "eps' (derivative)", 2 / 3, deriv.eps_prime, 0.01),
        _row(g, "eps'' (derivative)", 0.76, deriv.eps_double_prime, 0.01),
        _bound_row(
            g, "methods agree eps'", abs(switch.eps_prime - deriv.eps_prime), 0.01, "max"
        ),
        _bound_row(
            g,
            "methods agree eps''",
            abs(switch.eps_double_prime - deriv.eps_double_prime),
            0.01,
            "max",
        ),
    ]


def check_scan_structure(cfg: OptimizerConfig) -> list[VerifyRow]:
    """Ordering claims across the default 65 x 101 sweep."""
    g = "scan"
    table = scan_mdms(65, 101, cfg)
    k = table.columns["K"]
    j = table.columns["J"]
    m = table.columns["M"]
    gaps = k - j
    eps = table.epsilons
    rows = []

    high = eps > 0.77
    rows.append(
        _bound_row(g, "max K-J for eps > 0.77", float(gaps[:, high].max()), 1e-6, "max")
    )
    for target in (0.3, 0.5):
        je = int(np.argmin(np.abs(eps - target)))
        col = gaps[:, je]
        rows.append(
            _bound_row(g, f"K-J reaches above 0 at eps={target}", float(col.max()), 1e-9, "min")
        )
        rows.append(
            _bound_row(g, f"K-J reaches below 0 at eps={target}", float(col.min()), -1e-9, "max")
        )

    tie = 1e-9
    rows.append(
        _bound_row(
            g,
            "K maximal at theta=pi/4 (worst row gap)",
            float((k.max(axis=0) - k[-1, :]).max()),
            tie,
            "max",
        )
    )
    rows.append(
        _bound_row(
            g,
            "M maximal at theta=pi/4 (worst row gap)",
            float((m.max(axis=0) - m[-1, :]).max()),
            tie,
            "max",
        )
    )
    rows.append(
        _bound_row(
            g,
            "M minimal at theta=0 (worst row gap)",
            float((m[0, :] - m.min(axis=0)).max()),
            tie,
            "max",
        )
    )
    return rows


def run_all(cfg: OptimizerConfig | None = None) -> list[VerifyRow]:
    cfg = cfg or OptimizerConfig()
    rows = []
    rows += check_worked_example(cfg)
    rows += check_w_mixture(cfg)
    rows += check_thresholds(cfg)
    rows += check_scan_structure(cfg)
    return rows


def format_table(rows: list[VerifyRow], elapsed: float | None = None) -> str:
    width_name = max(len(f"{r.group}: {r.name}") for r in rows)
    lines = []
    for r in rows:
        tag = "PASS" if r.passed else "FAIL"
        lines.append(
            f"[{tag}] {r.group + ': ' + r.name:<{width_name}}  "
            f"expected {r.expected:>12}  actual {r.actual:>12}  ({r.tolerance})"
        )
    n_fail = sum(not r.passed for r in rows)
    summary = f"{len(rows) - n_fail}/{len(rows)} checks passed"
    if elapsed is not None:
        summary += f" in {elapsed:.1f} s"
    lines.append(summary)
    return "\n".join(lines)
