"""Parameter sweeps and threshold analysis for the rotated discordant-mixture family.

The family is ``mdms(epsilon, theta, phi)``: the mixture
``eps |Phi+><Phi+| + (1-eps) |10><10|`` conjugated by the symmetric product
rotation.  Two epsilon thresholds structure its closest-classical basis: below
``eps'`` the optimal dephasing basis is computational, above ``eps''`` it is
the x basis, with a continuously rotating optimum in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from io import StringIO
from typing import Callable, Sequence

import numpy as np

from .channels import ProductBasis, dephase, dephased_probs
from .errors import BadParams, NoRootBracketed
from .linalg import qubit_unitary
from .quantifiers import (
    closest_classical,
    coherence,
    hookup,
    irreducible_classical,
    local_coherence,
    total_correlations,
)
from .search import OptimizerConfig
from .states import DensityMatrix, entropy_of_probs, mdms, von_neumann_entropy

SCAN_COLUMNS = ("T", "C", "C_L", "C_M", "K", "M", "D", "J", "L")
CSV_HEADER = ("theta", "epsilon") + SCAN_COLUMNS


@dataclass(frozen=True)
class MdmsParams:
    """Coordinates of one family member."""

    epsilon: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise BadParams(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if not 0.0 <= self.theta <= math.pi / 4 + 1e-12:
            raise BadParams(f"theta must lie in [0, pi/4], got {self.theta}")

    def state(self) -> DensityMatrix:
        return mdms(self.epsilon, self.theta, self.phi)


@dataclass(frozen=True)
class ScanTable:
    """Quantifier values over a (theta, epsilon) grid, one 2-D array per column."""

    thetas: np.ndarray
    epsilons: np.ndarray
    columns: dict[str, np.ndarray]
    provenance: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        nt, ne = len(self.thetas), len(self.epsilons)
        for name, values in self.columns.items():
            if values.shape != (nt, ne):
                raise BadParams(f"column {name} has shape {values.shape}, expected {(nt, ne)}")


def _switch_angle(basis: ProductBasis) -> float:
    """Largest canonical polar angle among the basis factors, in [0, pi/4]."""
    assert basis.angles is not None
    return max(a.theta for a in basis.angles)


def scan_mdms(
    theta_points: int = 65,
    epsilon_points: int = 101,
    cfg: OptimizerConfig | None = None,
    theta_max: float = math.pi / 4,
    progress: Callable[[int, int], None] | None = None,
) -> ScanTable:
    """Evaluate every quantifier over the (theta, epsilon) grid.

    Quantifiers are evaluated in the computational basis, so the coherence
    family and K vary along theta while the unitarily invariant T, D, J, L
    stay constant along each epsilon row.  The basis optimization runs once
    per epsilon (at theta = 0); its argmin basis co-rotates exactly with the
    family member, which is how the per-cell D, J, L values are evaluated.
    """
    if theta_points < 2 or epsilon_points < 2:
        raise BadParams("grid sizes must be at least 2")
    if not 0.0 < theta_max <= math.pi / 4 + 1e-12:
        raise BadParams(f"theta_max must lie in (0, pi/4], got {theta_max}")
    cfg = cfg or OptimizerConfig()
    thetas = np.linspace(0.0, theta_max, theta_points)
    epsilons = np.linspace(0.0, 1.0, epsilon_points)
    cols = {name: np.empty((theta_points, epsilon_points)) for name in SCAN_COLUMNS}

    for je, eps in enumerate(epsilons):
        base_cc = closest_classical(mdms(float(eps), 0.0, 0.0), cfg)
        for jt, theta in enumerate(thetas):
            state = mdms(float(eps), float(theta), 0.0)
            s_state = von_neumann_entropy(state)
            t = total_correlations(state)
            c = coherence(state)
            c_l = local_coherence(state)
            k = irreducible_classical(state)
            m = hookup(state)
            # Argmin basis of the rotated member: co-rotate the theta=0 argmin.
            u = qubit_unitary(float(theta), 0.0)
            rotated = ProductBasis(tuple(u @ f for f in base_cc.basis.factors))
            chi = dephase(state, rotated)
            d = von_neumann_entropy(chi) - s_state
            j = total_correlations(chi)
            cols["T"][jt, je] = t
            cols["C"][jt, je] = c
            cols["C_L"][jt, je] = c_l
            cols["C_M"][jt, je] = c - c_l
            cols["K"][jt, je] = k
            cols["M"][jt, je] = m
            cols["D"][jt, je] = d
            cols["J"][jt, je] = j
            cols["L"][jt, je] = d + j - t
        if progress is not None:
            progress(je + 1, epsilon_points)

    provenance = (
        f"hookup scan-mdms version={_package_version()}",
        f"theta_points={theta_points} epsilon_points={epsilon_points} theta_max={theta_max!r}",
        f"optimizer grid={cfg.grid_points} starts={cfg.multistarts} tol={cfg.tol!r} "
        f"max_iter={cfg.max_iter} seed={cfg.seed}",
        "columns: " + ",".join(CSV_HEADER),
    )
    return ScanTable(thetas=thetas, epsilons=epsilons, columns=cols, provenance=provenance)


def _package_version() -> str:
    from . import __version__

    return __version__


def scan_to_csv(table: ScanTable) -> str:
    """Render a scan as CSV, theta-major rows, 17-significant-digit numbers."""
    buf = StringIO()
    for line in table.provenance:
        buf.write(f"# {line}\n")
    buf.write(",".join(CSV_HEADER) + "\n")
    for jt, theta in enumerate(table.thetas):
        for je, eps in enumerate(table.epsilons):
            row = [f"{theta:.17g}", f"{eps:.17g}"]
            row += [f"{table.columns[name][jt, je]:.17g}" for name in SCAN_COLUMNS]
            buf.write(",".join(row) + "\n")
    return buf.getvalue()


def scan_from_csv(text: str) -> ScanTable:
    """Parse a CSV produced by ``scan_to_csv`` (bit-exact round trip)."""
    provenance = []
    rows = []
    header = None
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            provenance.append(line[1:].strip())
            continue
        if header is None:
            header = tuple(line.split(","))
            if header != CSV_HEADER:
                raise BadParams(f"unexpected CSV header {header}")
            continue
        rows.append([float(x) for x in line.split(",")])
    if header is None or not rows:
        raise BadParams("CSV carries no data rows")
    data = np.array(rows)
    thetas = np.unique(data[:, 0])
    epsilons = np.unique(data[:, 1])
    nt, ne = len(thetas), len(epsilons)
    if nt * ne != len(rows):
        raise BadParams("CSV grid is not rectangular")
    # Rows are theta-major; rely on emission order rather than re-sorting values.
    thetas = data[::ne, 0]
    epsilons = data[:ne, 1]
    cols = {}
    for idx, name in enumerate(SCAN_COLUMNS):
        cols[name] = data[:, 2 + idx].reshape(nt, ne)
    return ScanTable(thetas=thetas, epsilons=epsilons, columns=cols, provenance=tuple(provenance))


# ---------------------------------------------------------------------------
# Thresholds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdResult:
    """The two epsilon thresholds with their method and bisection diagnostics."""

    eps_prime: float
    eps_double_prime: float
    method: str
    brackets: dict
    residuals: dict

    def __post_init__(self):
        if not 0.0 < self.eps_prime < self.eps_double_prime < 1.0:
            raise NoRootBracketed(
                f"thresholds out of order: {self.eps_prime}, {self.eps_double_prime}"
            )


SWITCH_DELTA = 0.01  # rad; how far the argmin polar angle must move to count as switched


def _bisect_predicate(
    predicate: Callable[[float], bool], lo: float, hi: float, tol: float
) -> float:
    """First point where a monotone predicate flips False -> True."""
    if predicate(lo) or not predicate(hi):
        raise NoRootBracketed(f"predicate does not flip on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _bisect_root(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoRootBracketed(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


def _dephased_entropy(eps: float, theta: float) -> float:
    """Entropy of the computational-basis dephasing of the rotated member."""
    return entropy_of_probs(dephased_probs(mdms(eps, theta, 0.0)))


def _angle_curvature(eps: float, theta0: float, step: float = 1e-4) -> float:
    """Central second difference in theta of the dephased-state entropy."""
    s_minus = _dephased_entropy(eps, theta0 - step)
    s_mid = _dephased_entropy(eps, theta0)
    s_plus = _dephased_entropy(eps, theta0 + step)
    return (s_plus - 2 * s_mid + s_minus) / step**2


def find_thresholds(
    method: str = "basis-switch",
    cfg: OptimizerConfig | None = None,
    tol: float = 1e-6,
) -> ThresholdResult:
    """Locate both epsilon thresholds of the family.

    ``basis-switch`` bisects on the argmin basis of the unrotated member: the
    first epsilon where it departs from computational gives eps', the first
    where it reaches the x basis gives eps''.  ``derivative`` bisects the sign
    of the second angle-derivative of the dephased-state entropy evaluated at
    the two boundary angles (a stationary direction in each regime), which
    changes exactly where each basis stops being a local optimum.
    """
    cfg = cfg or OptimizerConfig()
    if method == "basis-switch":

        def switched(eps: float) -> bool:
            cc = closest_classical(mdms(eps, 0.0, 0.0), cfg)
            return _switch_angle(cc.basis) > SWITCH_DELTA

        def at_x_basis(eps: float) -> bool:
            cc = closest_classical(mdms(eps, 0.0, 0.0), cfg)
            return _switch_angle(cc.basis) > math.pi / 4 - SWITCH_DELTA

        lo1, hi1 = _bracket_predicate(switched)
        eps_prime = _bisect_predicate(switched, lo1, hi1, tol)
        lo2, hi2 = _bracket_predicate(at_x_basis)
        eps_dprime = _bisect_predicate(at_x_basis, lo2, hi2, tol)
        brackets = {"eps_prime": (lo1, hi1), "eps_double_prime": (lo2, hi2)}
        residuals = {"switch_delta": SWITCH_DELTA}
    elif method == "derivative":
        anchor = 1e-4

        def g_comp(eps: float) -> float:
            return _angle_curvature(eps, anchor)

        def g_x(eps: float) -> float:
            return _angle_curvature(eps, math.pi / 4 - anchor)

        lo1, hi1 = _bracket_sign(g_comp)
        eps_prime = _bisect_root(g_comp, lo1, hi1, tol)
        lo2, hi2 = _bracket_sign(g_x)
        eps_dprime = _bisect_root(g_x, lo2, hi2, tol)
        brackets = {"eps_prime": (lo1, hi1), "eps_double_prime": (lo2, hi2)}
        residuals = {
            "eps_prime": abs(g_comp(eps_prime)),
            "eps_double_prime": abs(g_x(eps_dprime)),
        }
    else:
        raise BadParams(f"unknown threshold method {method!r}")

    return ThresholdResult(
        eps_prime=eps_prime,
        eps_double_prime=eps_dprime,
        method=method,
        brackets=brackets,
        residuals=residuals,
    )


def _bracket_predicate(predicate: Callable[[float], bool]) -> tuple[float, float]:
    grid = np.linspace(0.05, 0.99, 20)
    prev = grid[0]
    if predicate(float(prev)):
        raise NoRootBracketed("predicate already true at the low end")
    for eps in grid[1:]:
        if predicate(float(eps)):
            return float(prev), float(eps)
        prev = eps
    raise NoRootBracketed("predicate never flips on (0, 1)")


def _bracket_sign(f: Callable[[float], float]) -> tuple[float, float]:
    grid = np.linspace(0.05, 0.99, 20)
    prev = grid[0]
    fprev = f(float(prev))
    for eps in grid[1:]:
        fcur = f(float(eps))
        if np.sign(fcur) != np.sign(fprev) and fprev != 0.0:
            return float(prev), float(eps)
        prev, fprev = eps, fcur
    raise NoRootBracketed("no sign change on (0, 1)")


# ---------------------------------------------------------------------------
# K versus J comparison
# ---------------------------------------------------------------------------


def compare_jk(
    epsilons: Sequence[float],
    theta_points: int = 65,
    cfg: OptimizerConfig | None = None,
) -> list[dict]:
    """Extremes of K - J along theta for each epsilon.

    K is the computational-basis irreducible classical information of the
    rotated member; J is the (rotation-invariant) classical correlations.
    """
    if theta_points < 65:
        raise BadParams("theta grid must have at least 65 points")
    cfg = cfg or OptimizerConfig()
    thetas = np.linspace(0.0, math.pi / 4, theta_points)
    rows = []
    for eps in epsilons:
        eps = float(eps)
        if not 0.0 < eps < 1.0:
            raise BadParams(f"epsilon values must lie in (0, 1), got {eps}")
        j = total_correlations(closest_classical(mdms(eps, 0.0, 0.0), cfg).chi)
        gaps = np.array(
            [irreducible_classical(mdms(eps, float(t), 0.0)) - j for t in thetas]
        )
        rows.append(
            {
                "epsilon": eps,
                "J": j,
                "max_K_minus_J": float(gaps.max()),
                "min_K_minus_J": float(gaps.min()),
                "theta_at_max": float(thetas[int(gaps.argmax())]),
                "theta_at_min": float(thetas[int(gaps.argmin())]),
            }
        )
    return rows
