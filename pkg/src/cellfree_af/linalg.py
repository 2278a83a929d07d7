"""Small complex linear-algebra helpers shared across the package."""

import warnings

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.linalg import lapack

# Condition numbers above this trigger a warning in the Hermitian solves.
COND_WARN_THRESHOLD = 1e12


class NumericalError(RuntimeError):
    """Raised when a factorization or solve fails numerically."""


def herm(x):
    """Conjugate transpose of the last two axes."""
    return np.conj(np.swapaxes(x, -1, -2))


def hermitian_part(a):
    """Symmetrize a (batch of) square matrix(es) as (A + A^H)/2."""
    return 0.5 * (a + herm(a))


def complex_gaussian(rng, shape):
    """Circularly symmetric standard complex Gaussian draws, unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def psd_sqrt(a, rel_tol=1e-8):
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues below -rel_tol * trace are treated as a genuinely indefinite
    input and rejected; small negative values from roundoff are clipped to 0.
    Supports leading batch dimensions.
    """
    a = np.asarray(a)
    vals, vecs = np.linalg.eigh(hermitian_part(a))
    scale = np.maximum(np.abs(vals).max(axis=-1, keepdims=True), np.finfo(float).tiny)
    if np.any(vals < -rel_tol * scale):
        raise NumericalError(
            "matrix is not positive semidefinite "
            f"(min eigenvalue ratio {float((vals / scale).min()):.3e})"
        )
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)[..., None, :]) @ herm(vecs)


def solve_hermitian_pd(a, b):
    """Solve A x = b for Hermitian positive definite A without forming A^-1.

    Uses a Cholesky factorization; warns when the estimated condition number
    exceeds COND_WARN_THRESHOLD and raises NumericalError when the
    factorization fails outright.
    """
    a = np.asarray(a)
    try:
        c, lower = cho_factor(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as err:
        eigs = np.linalg.eigvalsh(hermitian_part(a))
        raise NumericalError(
            f"Cholesky factorization failed: {err} "
            f"(eigenvalue range [{eigs.min():.3e}, {eigs.max():.3e}])"
        ) from None
    anorm = float(np.abs(a).sum(axis=0).max())  # 1-norm
    rcond, info = lapack.zpocon(c, anorm, uplo="L")
    if info == 0 and rcond > 0 and 1.0 / rcond > COND_WARN_THRESHOLD:
        warnings.warn(
            f"ill-conditioned Hermitian solve (condition estimate {1.0 / rcond:.3e})",
            RuntimeWarning,
            stacklevel=2,
        )
    return cho_solve((c, lower), b, check_finite=False)
