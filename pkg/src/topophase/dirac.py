"""Persistent boundary restrictions, Dirac operators, and Laplacian spectra.

All spectral objects use real coefficients.  The persistent Laplacian of a
scale pair (eps, eps') is L_k = d_k^T d_k + M M^T, where d_k is the boundary
operator at scale eps and M is the boundary of (k+1)-chains at eps' restricted
to those whose boundary lies in the scale-eps complex; its kernel dimension is
the persistent Betti number.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .simplicial import FilteredComplex, boundary_dense_at

NULLSPACE_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-9
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PersistentBoundary:
    """Boundary of restricted (k+1)-chains, mapped into scale-eps k-chains.

    ``domain_basis`` holds an orthonormal basis (columns) of the chains in
    C_{k+1}(K_eps') whose boundary is supported on K_eps; ``matrix`` is the
    boundary operator expressed on that basis.
    """

    k: int  # chain dimension of the domain (the k+1 of L_k)
    eps: float
    eps_prime: float
    matrix: np.ndarray
    domain_basis: np.ndarray

    @property
    def domain_dim(self) -> int:
        return self.domain_basis.shape[1]


@dataclass(frozen=True, eq=False)
class DiracOperator:
    """Symmetric block operator coupling (k-1)-, k-, and restricted (k+1)-chains."""

    k: int
    eps: float
    eps_prime: float
    xi: float
    matrix: np.ndarray
    block_dims: tuple

    def middle_block(self, power: np.ndarray | None = None) -> np.ndarray:
        """Middle diagonal block of ``power`` (default: the operator itself)."""
        m = self.matrix if power is None else power
        n1, n2, _ = self.block_dims
        return m[n1:n1 + n2, n1:n1 + n2]


def restricted_boundary(complex_: FilteredComplex, k_plus_1: int, eps: float,
                        eps_prime: float, null_tol: float = NULLSPACE_TOL) -> PersistentBoundary:
    """Restrict the (k+1)-boundary at eps' to chains with boundary inside K_eps.

    Rows of the scale-eps' boundary are split into those indexing k-simplices
    of K_eps (R1) and the rest (R2); the domain basis spans null(R2) and the
    returned matrix is R1 composed with that basis.
    """
    if eps > eps_prime:
        raise ValueError(f"eps ({eps}) must be <= eps_prime ({eps_prime})")
    k = k_plus_1 - 1
    if k < 0:
        raise ValueError("k_plus_1 must be >= 1")
    n_rows_eps = complex_.count_at(k, eps)
    if k_plus_1 > complex_.max_dim:
        full = np.zeros((complex_.count_at(k, eps_prime), 0))
    else:
        full = boundary_dense_at(complex_, k_plus_1, eps_prime)
    n_cols = full.shape[1]
    r1 = full[:n_rows_eps, :]
    r2 = full[n_rows_eps:, :]
    if n_cols == 0:
        basis = np.zeros((0, 0))
    elif r2.shape[0] == 0:
        basis = np.eye(n_cols)
    else:
        _, svals, vh = np.linalg.svd(r2)
        cutoff = null_tol * (svals[0] if svals.size else 0.0)
        rank = int(np.sum(svals > cutoff))
        basis = vh[rank:].conj().T
    return PersistentBoundary(
        k=k_plus_1,
        eps=float(eps),
        eps_prime=float(eps_prime),
        matrix=r1 @ basis,
        domain_basis=basis,
    )


def persistent_laplacian(complex_: FilteredComplex, k: int, eps: float, eps_prime: float,
                         null_tol: float = NULLSPACE_TOL) -> np.ndarray:
    """Positive-semidefinite persistent Laplacian on k-chains of K_eps."""
    if eps > eps_prime:
        raise ValueError(f"eps ({eps}) must be <= eps_prime ({eps_prime})")
    n_k = complex_.count_at(k, eps)
    if n_k == 0:
        return np.zeros((0, 0))
    if k == 0:
        down = np.zeros((n_k, n_k))
    else:
        bk = boundary_dense_at(complex_, k, eps)
        down = bk.T @ bk
    up_map = restricted_boundary(complex_, k + 1, eps, eps_prime, null_tol=null_tol).matrix
    lap = down + up_map @ up_map.T
    return 0.5 * (lap + lap.T)


def dirac_operator(complex_: FilteredComplex, k: int, eps: float, eps_prime: float,
                   xi: float = 0.0, null_tol: float = NULLSPACE_TOL) -> DiracOperator:
    """Assemble the three-block symmetric operator for the (eps, eps') pair.

    Off-diagonal blocks are the scale-eps k-boundary and the restricted
    (k+1)-boundary; the xi term subtracts xi * diag(P_{k-1}, -P_k, P_{k+1})
    acting as identities on the three strata.
    """
    if eps > eps_prime:
        raise ValueError(f"eps ({eps}) must be <= eps_prime ({eps_prime})")
    n2 = complex_.count_at(k, eps)
    if k == 0:
        n1 = 0
        down = np.zeros((0, n2))
    else:
        down = boundary_dense_at(complex_, k, eps)
        n1 = down.shape[0]
    up = restricted_boundary(complex_, k + 1, eps, eps_prime, null_tol=null_tol)
    d = up.domain_dim
    size = n1 + n2 + d
    mat = np.zeros((size, size))
    mat[:n1, n1:n1 + n2] = down
    mat[n1:n1 + n2, :n1] = down.T
    mat[n1:n1 + n2, n1 + n2:] = up.matrix
    mat[n1 + n2:, n1:n1 + n2] = up.matrix.T
    shift = np.concatenate([np.full(n1, -xi), np.full(n2, xi), np.full(d, -xi)])
    mat[np.diag_indices(size)] += shift
    return DiracOperator(
        k=k,
        eps=float(eps),
        eps_prime=float(eps_prime),
        xi=float(xi),
        matrix=mat,
        block_dims=(n1, n2, d),
    )


def spectrum(matrix, sym_tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Ascending eigenvalues (full multiplicity) of a real symmetric matrix."""
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("spectrum requires a square matrix")
    if m.size:
        scale = max(1.0, float(np.max(np.abs(m))))
        if float(np.max(np.abs(m - m.T))) > sym_tol * scale:
            raise ValueError("matrix is not symmetric within tolerance")
    return np.linalg.eigvalsh(m)


def betti_from_laplacian(laplacian, rank_tol: float = DEFAULT_RANK_TOL) -> int:
    """Kernel dimension of a PSD matrix: eigenvalues below a relative cutoff."""
    lap = np.asarray(laplacian, dtype=float)
    if lap.size == 0:
        return 0
    evals = np.linalg.eigvalsh(lap)
    top = max(1.0, float(evals[-1]))
    if float(evals[0]) < -1e-8 * top:
        raise ValueError(f"matrix is not PSD: min eigenvalue {evals[0]:.3e}")
    return int(np.sum(evals < rank_tol * top))


def qpe_distribution(eigenvalues, l: int, m_register: int, p: int) -> float:
    """Phase-estimation outcome probability for a list of eigenvalues.

    Evaluates P(p) = (1/N) sum over eigenvalues of
    sin^2(pi l lam) / (M^2 sin^2(pi (l lam - p) / M)), with the removable
    singularity at l lam = p (mod M) resolved to 1 by its limit.
    """
    if m_register < 1:
        raise ValueError("M must be >= 1")
    if not 0 <= p < m_register:
        raise ValueError(f"p must satisfy 0 <= p < M, got p={p}, M={m_register}")
    evals = np.asarray(eigenvalues, dtype=float)
    if evals.ndim != 1 or evals.size == 0:
        raise ValueError("eigenvalues must be a non-empty 1-d sequence")
    total = 0.0
    for lam in evals:
        # reduce (l*lam - p)/M modulo 1; the formula only depends on the residue
        x = (l * lam - p) / m_register
        r = x - round(x)
        if r == 0.0:
            total += 1.0
        else:
            num = np.sin(np.pi * m_register * r) ** 2
            den = (m_register * np.sin(np.pi * r)) ** 2
            total += num / den
    return float(total / evals.size)


def spectrum_to_json(k: int, eps: float, eps_prime: float, xi: float, eigenvalues) -> str:
    payload = {
        "k": int(k),
        "eps": float(eps),
        "eps_prime": float(eps_prime),
        "xi": float(xi),
        "eigenvalues": [float(v) for v in np.asarray(eigenvalues, dtype=float)],
    }
    return json.dumps(payload, indent=2) + "\n"
