"""Dense small-matrix spectral kernel shared by the rest of the package.

All matrices are real ndarrays. Eigenvalues of symmetric matrices are
returned ascending so downstream reports are deterministic.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import AsymmetricInput, ShapeMismatch, SingularOperator

SYM_TOL = 1e-10
PSD_FLOOR = 1e-12


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


@dataclass(frozen=True)
class MatrixFunctionals:
    hs_norm: float
    trace: float | None
    op_norm_sym: float | None


def _as_matrix(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise ShapeMismatch(f"expected a matrix, got ndim {a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ShapeMismatch("matrix entries must be finite")
    return a


def _require_square(a):
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {a.shape}")
    return a


def is_symmetric(a, tol=SYM_TOL):
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.linalg.norm(a)))
    return float(np.linalg.norm(a - a.T)) <= tol * scale


def sym_eig(a, tol=SYM_TOL):
    """Eigendecomposition of a symmetric matrix, eigenvalues ascending.

    The input may deviate from exact symmetry by tol (relative); it is
    symmetrized before factorization so the decomposition is exact for
    (A + A^T)/2.
    """
    a = _require_square(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    if float(np.linalg.norm(a - a.T)) > tol * scale:
        raise AsymmetricInput(
            f"asymmetry {np.linalg.norm(a - a.T):.3e} exceeds tol {tol:g}"
            f" (relative to {scale:.3g})")
    sym = 0.5 * (a + a.T)
    lam, q = scipy.linalg.eigh(sym)
    return SpectralDecomposition(eigenvalues=lam, eigenvectors=q)


def inv_sqrt_psd(a, floor=PSD_FLOOR, tol=SYM_TOL):
    """Inverse square root of a symmetric positive definite matrix.

    Raises SingularOperator when the smallest eigenvalue is at or below
    floor: the operator is numerically not invertible.
    """
    dec = sym_eig(a, tol=tol)
    lam = dec.eigenvalues
    if lam[0] <= floor:
        raise SingularOperator(
            f"smallest eigenvalue {lam[0]:.3e} is at or below floor {floor:g}")
    q = dec.eigenvectors
    return (q * lam ** -0.5) @ q.T


def general_spectrum(a):
    """Eigenvalues of a general (possibly nonsymmetric) real matrix."""
    a = _require_square(a)
    return np.linalg.eigvals(a)


def matrix_functionals(a):
    """Hilbert-Schmidt norm, trace, and (symmetric case) operator norm.

    trace is absent for nonsquare input; op_norm_sym is absent unless the
    matrix is symmetric within the default tolerance.
    """
    a = _as_matrix(a)
    hs = float(np.sqrt(np.sum(a * a)))
    trace = None
    op_norm = None
    if a.shape[0] == a.shape[1]:
        trace = float(np.trace(a))
        if is_symmetric(a):
            lam = sym_eig(a).eigenvalues
            op_norm = float(np.max(np.abs(lam)))
    return MatrixFunctionals(hs_norm=hs, trace=trace, op_norm_sym=op_norm)
