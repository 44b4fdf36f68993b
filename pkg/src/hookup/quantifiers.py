"""Relative-entropy quantifiers of coherence and correlation.

Fixed-basis quantities (total correlations, coherence and its local and
multipartite parts, irreducible classical information, hookup) work for any
subsystem dimensions.  The optimized quantities (discord, classical
correlations, the excess term, global discord) search over qubit product
bases and are capped at four qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import (
    ProductBasis,
    basis_from_angles,
    computational_basis,
    dephase,
    dephased_probs,
    marginal_product,
)
from .errors import HookupError, NotAllQubits, TooManyQubits
from .search import (
    OptimizerConfig,
    OptimizerResult,
    joint_dephased_entropies,
    marginal_dephased_entropies,
    minimize_over_product_bases,
    qubit_basis_vectors,
)
from .states import (
    DensityMatrix,
    entropy_of_probs,
    relative_entropy,
    von_neumann_entropy,
)

MAX_OPT_QUBITS = 4
RESIDUAL_WARN = 1e-8
EXCESS_CROSS_TOL = 1e-7


# ---------------------------------------------------------------------------
# Fixed-basis quantifiers
# ---------------------------------------------------------------------------


def total_correlations(state: DensityMatrix) -> float:
    """Mutual information: entropy of the marginal product minus the state's."""
    return von_neumann_entropy(marginal_product(state)) - von_neumann_entropy(state)


def coherence(state: DensityMatrix, basis: ProductBasis | None = None) -> float:
    """Entropy gained by dephasing in the reference basis."""
    return entropy_of_probs(dephased_probs(state, basis)) - von_neumann_entropy(state)


def local_coherence(state: DensityMatrix, basis: ProductBasis | None = None) -> float:
    """Sum of the single-subsystem coherences in the reference basis."""
    total = 0.0
    for q in range(state.n_parts):
        marginal = state.marginal(q)
        part = None if basis is None else ProductBasis((basis.factors[q],))
        total += coherence(marginal, part)
    return total


def multipartite_coherence(state: DensityMatrix, basis: ProductBasis | None = None) -> float:
    """Coherence beyond what the marginals carry; never negative."""
    return coherence(state, basis) - local_coherence(state, basis)


def irreducible_classical(state: DensityMatrix, basis: ProductBasis | None = None) -> float:
    """Mutual information that survives full dephasing."""
    return total_correlations(dephase(state, basis))


def hookup(state: DensityMatrix, basis: ProductBasis | None = None) -> float:
    """Distance to the closest incoherent product state.

    Equals total correlations plus local coherence, and equally coherence plus
    irreducible classical information.
    """
    closest = dephase(marginal_product(state), basis)
    return von_neumann_entropy(closest) - von_neumann_entropy(state)


# ---------------------------------------------------------------------------
# Optimized quantifiers
# ---------------------------------------------------------------------------


def _require_optimizable(state: DensityMatrix) -> None:
    if any(d != 2 for d in state.dims):
        raise NotAllQubits(
            f"basis optimization needs qubit subsystems, got dims {state.dims}"
        )
    if state.n_parts > MAX_OPT_QUBITS:
        raise TooManyQubits(
            f"basis optimization is capped at {MAX_OPT_QUBITS} qubits, got {state.n_parts}"
        )


def _angles_to_pairs(vector: np.ndarray) -> list[tuple[float, float]]:
    return [(float(vector[2 * q]), float(vector[2 * q + 1])) for q in range(len(vector) // 2)]


@dataclass(frozen=True)
class ClosestClassical:
    """Argmin of the dephased-state entropy over product bases."""

    chi: DensityMatrix
    basis: ProductBasis
    optimizer: OptimizerResult


def closest_classical(state: DensityMatrix, cfg: OptimizerConfig | None = None) -> ClosestClassical:
    """Classically correlated state closest to ``state``.

    Returns the dephasing of the state in the entropy-minimizing product
    basis, found by grid seeding plus simplex refinement.
    """
    _require_optimizable(state)
    cfg = cfg or OptimizerConfig()

    def batch(thetas, phis):
        vecs = [qubit_basis_vectors(thetas, phis)] * state.n_parts
        return joint_dephased_entropies(state.matrix, state.dims, vecs)

    def objective(vector):
        basis = basis_from_angles(_angles_to_pairs(vector))
        return entropy_of_probs(dephased_probs(state, basis))

    result = minimize_over_product_bases(objective, state.n_parts, cfg, batch=batch)
    basis = basis_from_angles(result.angles, dims=state.dims)
    return ClosestClassical(chi=dephase(state, basis), basis=basis, optimizer=result)


def discord(state: DensityMatrix, cfg: OptimizerConfig | None = None) -> float:
    """Two-sided relative-entropy discord."""
    cc = closest_classical(state, cfg)
    return von_neumann_entropy(cc.chi) - von_neumann_entropy(state)


def classical_correlations(state: DensityMatrix, cfg: OptimizerConfig | None = None) -> float:
    """Mutual information of the closest classically correlated state."""
    return total_correlations(closest_classical(state, cfg).chi)


def excess_correlations(state: DensityMatrix, cfg: OptimizerConfig | None = None) -> float:
    """The excess D + J - T, cross-checked against its relative-entropy form."""
    cc = closest_classical(state, cfg)
    s_state = von_neumann_entropy(state)
    d = von_neumann_entropy(cc.chi) - s_state
    j = total_correlations(cc.chi)
    t = total_correlations(state)
    primary = d + j - t
    cross = relative_entropy(marginal_product(state), marginal_product(cc.chi))
    if abs(primary - cross) > EXCESS_CROSS_TOL:
        raise HookupError(
            f"excess-term evaluations disagree: {primary!r} vs {cross!r}"
        )
    return primary


def global_discord(state: DensityMatrix, cfg: OptimizerConfig | None = None) -> float:
    """Multipartite coherence minimized over all product bases."""
    return _global_discord_opt(state, cfg or OptimizerConfig())[0]


def _global_discord_opt(
    state: DensityMatrix, cfg: OptimizerConfig
) -> tuple[float, OptimizerResult]:
    _require_optimizable(state)
    marginals = [state.marginal(q).matrix for q in range(state.n_parts)]
    s_state = von_neumann_entropy(state)
    s_marginals = [entropy_of_probs(np.linalg.eigvalsh(m)) for m in marginals]
    # C_M(b) = [S(joint dephased) - S] - sum_q [S(marginal q dephased) - S_q]
    constant = -s_state + sum(s_marginals)

    def batch(thetas, phis):
        vecs = qubit_basis_vectors(thetas, phis)
        joint = joint_dephased_entropies(state.matrix, state.dims, [vecs] * state.n_parts)
        for q, m in enumerate(marginals):
            shape = [1] * state.n_parts
            shape[q] = -1
            joint = joint - marginal_dephased_entropies(m, vecs).reshape(shape)
        return joint

    def objective(vector):
        pairs = _angles_to_pairs(vector)
        basis = basis_from_angles(pairs)
        value = entropy_of_probs(dephased_probs(state, basis))
        for q, m in enumerate(marginals):
            part = ProductBasis((basis.factors[q],))
            p = dephased_probs(DensityMatrix((2,), m), part)
            value -= entropy_of_probs(p)
        return value

    result = minimize_over_product_bases(objective, state.n_parts, cfg, batch=batch)
    return result.value + constant, result


# ---------------------------------------------------------------------------
# One-call report
# ---------------------------------------------------------------------------

REPORT_LABELS = {
    "total_correlations": "T",
    "coherence": "C",
    "local_coherence": "C_L",
    "multipartite_coherence": "C_M",
    "irreducible_classical": "K",
    "hookup": "M",
    "discord": "D",
    "classical_correlations": "J",
    "excess": "L",
    "global_discord": "G",
}


@dataclass(frozen=True)
class QuantifierReport:
    """Every quantifier of one state in one reference basis."""

    dims: tuple[int, ...]
    reference_basis: ProductBasis
    total_correlations: float
    coherence: float
    local_coherence: float
    multipartite_coherence: float
    irreducible_classical: float
    hookup: float
    discord: float | None = None
    classical_correlations: float | None = None
    excess: float | None = None
    global_discord: float | None = None
    chi_basis: ProductBasis | None = None
    g_basis: ProductBasis | None = None
    optimizer_available: bool = False
    unavailable_reason: str | None = None
    optimizer_meta: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    numerical_warning: bool = False

    def values(self) -> dict:
        out = {}
        for name in REPORT_LABELS:
            out[name] = getattr(self, name)
        return out

    def to_dict(self) -> dict:
        def basis_angles(basis):
            if basis is None or basis.angles is None:
                return None
            return [{"theta": a.theta, "phi": a.phi} for a in basis.angles]

        def jsonable(x):
            if x is None:
                return None
            return "inf" if math.isinf(x) else x

        return {
            "dims": list(self.dims),
            "quantifiers": {k: jsonable(v) for k, v in self.values().items()},
            "labels": dict(REPORT_LABELS),
            "reference_basis": basis_angles(self.reference_basis),
            "chi_basis": basis_angles(self.chi_basis),
            "g_basis": basis_angles(self.g_basis),
            "optimizer_available": self.optimizer_available,
            "unavailable_reason": self.unavailable_reason,
            "optimizer": self.optimizer_meta,
            "residuals": self.residuals,
            "numerical_warning": self.numerical_warning,
        }

    def format_text(self) -> str:
        names = {
            "total_correlations": "total correlations",
            "coherence": "coherence",
            "local_coherence": "local coherence",
            "multipartite_coherence": "multipartite coherence",
            "irreducible_classical": "irreducible classical information",
            "hookup": "hookup",
            "discord": "discord",
            "classical_correlations": "classical correlations",
            "excess": "excess (D + J - T)",
            "global_discord": "global discord",
        }
        lines = [f"state dims: {self.dims}"]
        for key, label in REPORT_LABELS.items():
            value = getattr(self, key)
            shown = "unavailable" if value is None else f"{value:.9f}"
            lines.append(f"  {label:<4} {names[key]:<34} {shown}")
        if not self.optimizer_available and self.unavailable_reason:
            lines.append(f"  note: {self.unavailable_reason}")
        if self.chi_basis is not None and self.chi_basis.angles is not None:
            angles = ", ".join(
                f"(theta={a.theta:.4f}, phi={a.phi:.4f})" for a in self.chi_basis.angles
            )
            lines.append(f"  closest-classical basis: {angles}")
        if self.residuals:
            worst = max(self.residuals.values())
            lines.append(f"  identity residuals: max {worst:.2e}")
        if self.numerical_warning:
            lines.append("  numerical-warning: identity residual above 1e-8")
        return "\n".join(lines)


def full_report(
    state: DensityMatrix,
    basis: ProductBasis | None = None,
    cfg: OptimizerConfig | None = None,
) -> QuantifierReport:
    """Compute every available quantifier of ``state`` in ``basis``.

    Optimizer-based fields are filled only for systems of at most four qubits;
    otherwise they are ``None`` with the reason recorded.  Decomposition
    identities are evaluated and reported as residuals; a residual above 1e-8
    sets ``numerical_warning`` instead of failing.
    """
    cfg = cfg or OptimizerConfig()
    ref = basis if basis is not None else computational_basis(state.dims)

    s_state = von_neumann_entropy(state)
    t = total_correlations(state)
    c = coherence(state, ref)
    c_l = local_coherence(state, ref)
    c_m = c - c_l
    k = irreducible_classical(state, ref)
    m = hookup(state, ref)

    residuals = {
        "hookup_vs_T_plus_CL": abs(m - t - c_l),
        "hookup_vs_C_plus_K": abs(m - c - k),
    }

    d_val = j_val = l_val = g_val = None
    chi_basis = g_basis = None
    meta: dict = {}
    available = True
    reason = None
    try:
        _require_optimizable(state)
    except (NotAllQubits, TooManyQubits) as exc:
        available = False
        reason = str(exc)

    if available:
        cc = closest_classical(state, cfg)
        chi_basis = cc.basis
        d_val = von_neumann_entropy(cc.chi) - s_state
        j_val = total_correlations(cc.chi)
        l_val = d_val + j_val - t
        cross = relative_entropy(marginal_product(state), marginal_product(cc.chi))
        residuals["excess_cross_form"] = abs(l_val - cross)
        g_val, g_result = _global_discord_opt(state, cfg)
        g_basis = basis_from_angles(g_result.angles, dims=state.dims)
        meta = {"chi": cc.optimizer.meta(), "global": g_result.meta()}

    return QuantifierReport(
        dims=state.dims,
        reference_basis=ref,
        total_correlations=t,
        coherence=c,
        local_coherence=c_l,
        multipartite_coherence=c_m,
        irreducible_classical=k,
        hookup=m,
        discord=d_val,
        classical_correlations=j_val,
        excess=l_val,
        global_discord=g_val,
        chi_basis=chi_basis,
        g_basis=g_basis,
        optimizer_available=available,
        unavailable_reason=reason,
        optimizer_meta=meta,
        residuals=residuals,
        numerical_warning=any(r > RESIDUAL_WARN for r in residuals.values()),
    )
