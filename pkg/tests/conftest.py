"""Shared generators and the independent grid oracle used by the tests.

The oracle evaluates dephased-state entropies through a Pauli/Bloch
decomposition, a completely different computational path from the package's
basis-vector cascade, so optimizer results are checked against genuinely
independent numbers.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from hookup import DensityMatrix, ProductBasis, basis_from_angles

LN2 = math.log(2.0)

PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """Hilbert-Schmidt style random density matrix from a Ginibre factor."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_state(rng: np.random.Generator, dims, rank=None) -> DensityMatrix:
    dim = int(np.prod(dims))
    return DensityMatrix(tuple(dims), random_density(rng, dim, rank))


def random_pure_state(rng: np.random.Generator, dims) -> DensityMatrix:
    dim = int(np.prod(dims))
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return DensityMatrix(tuple(dims), np.outer(v, v.conj()))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-ish unitary via QR with the standard phase fix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_product_basis(rng: np.random.Generator, dims) -> ProductBasis:
    if all(int(d) == 2 for d in dims):
        pairs = [
            (rng.uniform(0, math.pi / 2), rng.uniform(0, 2 * math.pi)) for _ in dims
        ]
        return basis_from_angles(pairs, dims=dims)
    return ProductBasis(tuple(random_unitary(rng, int(d)) for d in dims))


def random_angle_pairs(rng: np.random.Generator, n: int):
    return [(rng.uniform(0, math.pi / 2), rng.uniform(0, 2 * math.pi)) for _ in range(n)]


# ---------------------------------------------------------------------------
# Independent two-qubit grid oracle (Pauli decomposition path)
# ---------------------------------------------------------------------------


def _axis_grid(points: int) -> np.ndarray:
    thetas = np.linspace(0, math.pi / 2, points)
    phis = np.linspace(0, 2 * math.pi, points, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    tt, pp = tt.ravel(), pp.ravel()
    return np.stack(
        [-np.sin(2 * tt) * np.cos(pp), np.sin(2 * tt) * np.sin(pp), np.cos(2 * tt)],
        axis=-1,
    )


def oracle_min_dephased_entropy(matrix: np.ndarray, points: int = 64, chunk: int = 512) -> float:
    """Exhaustive symmetry-free grid minimum of the dephased entropy.

    For a two-qubit state and product projectors P = (I + s n.sigma)/2 the
    outcome weights are (1 + s n.a + s' m.b + s s' n.T.m)/4 from the Bloch
    vectors a, b and the correlation matrix T, which this evaluates for every
    (theta, phi) pair on the 4-angle grid.
    """
    axes = _axis_grid(points)
    r = np.asarray(matrix, dtype=complex).reshape(2, 2, 2, 2)
    red_a = np.einsum("ajbj->ab", r)
    red_b = np.einsum("iaib->ab", r)
    bloch_a = np.array([np.trace(red_a @ p).real for p in PAULIS])
    bloch_b = np.array([np.trace(red_b @ p).real for p in PAULIS])
    corr = np.array(
        [[np.einsum("ij,ji->", matrix, np.kron(p, q)).real for q in PAULIS] for p in PAULIS]
    )
    proj_a = axes @ bloch_a
    proj_b = axes @ bloch_b
    best = np.inf
    for lo in range(0, len(axes), chunk):
        hi = min(len(axes), lo + chunk)
        cross = axes[lo:hi] @ corr @ axes.T
        entropy = np.zeros_like(cross)
        for sa in (1.0, -1.0):
            for sb in (1.0, -1.0):
                p = (1 + sa * proj_a[lo:hi, None] + sb * proj_b[None, :] + sa * sb * cross) / 4
                entropy -= xlogy(np.clip(p, 0.0, None), np.clip(p, 0.0, None)) / LN2
        best = min(best, float(entropy.min()))
    return best
