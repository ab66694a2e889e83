"""Bergman kernels for non-radial homogeneous weights via moment matrices.

For Q0 positive definite homogeneous of degree 2k the monomial moments
A_ij = int z^i conj(z)^j |z|^{2c} e^{-Q0} dA factor into an exact radial
gamma integral times an angular average of q(theta)^{-(i+j+2c+2)/(2k)},
q(theta) = Q0(e^{i theta}).  The truncated reproducing kernel is the
inverse of the moment matrix in the scaled monomial basis; its weighted
diagonal is the Bergman density.  Raw moments grow factorially, so the
matrix is preconditioned to unit diagonal and factorization is refused
when the scaled condition number exceeds 1e12.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, solve_triangular
from scipy.special import gammaln

from .errors import ConfigError, DivergenceError, IllConditionedError, NotPositiveDefiniteError, NumericalError
from .potentials import MicroscopicPotential

__all__ = ["MomentMatrix", "TruncatedKernel", "moment_matrix", "truncated_kernel", "bergman_density"]

COND_LIMIT = 1e12
_TAIL_WARN = 1e-8


def _assemble(p: MicroscopicPotential, N: int, M: int) -> np.ndarray:
    theta = 2 * np.pi * np.arange(M) / M
    q = p.q0.angular_profile(theta)
    if np.any(q <= 0):
        raise NumericalError("angular profile not positive on the quadrature grid")
    k, c = p.k, p.c
    A = np.zeros((N, N), dtype=complex)
    for d in range(2 * N - 1):
        pw = (d + 2 * c + 2.0) / (2 * k)
        # mean over theta of e^{i(i-j)theta} q^{-pw}, all frequencies at once
        F = np.fft.fft(q ** (-pw)) / M
        radial = math.exp(gammaln(pw) - math.log(k))
        for i in range(max(0, d - N + 1), min(d, N - 1) + 1):
            j = d - i
            A[i, j] = radial * F[(j - i) % M]
    return A


def moment_matrix(p: MicroscopicPotential, N: int, angular_points: int = 512) -> "MomentMatrix":
    """Moment matrix A_ij, 0 <= i,j < N, for the weight |z|^{2c} e^{-Q0}.

    The angular factor uses periodic trapezoid quadrature (spectrally exact
    up to rounding for trigonometric-polynomial q) and is re-checked on a
    doubled grid to 1e-12.
    """
    if not (isinstance(N, int) and N >= 1):
        raise ConfigError(f"N must be an integer >= 1, got {N}")
    if angular_points < 4 * p.k + 4:
        raise ConfigError("angular_points too small for the polynomial degree")
    A = _assemble(p, N, angular_points)
    A2 = _assemble(p, N, 2 * angular_points)
    scale = np.abs(A2).max()
    if np.abs(A - A2).max() > 1e-12 * scale:
        raise NumericalError("angular quadrature did not converge under grid doubling")
    asym = np.abs(A - A.conj().T).max()
    if asym > 1e-12 * scale:
        raise NumericalError(f"moment matrix not Hermitian to tolerance (asymmetry {asym:.2e})")
    A = 0.5 * (A + A.conj().T)
    return MomentMatrix(k=p.k, c=p.c, N=N, entries=A, scale=np.sqrt(np.real(np.diag(A))))


@dataclass(frozen=True)
class MomentMatrix:
    """Hermitian monomial Gram matrix with its diagonal preconditioner."""

    k: int
    c: float
    N: int
    entries: np.ndarray
    scale: np.ndarray

    @property
    def scaled(self) -> np.ndarray:
        """Unit-diagonal preconditioned matrix A_ij / (s_i s_j)."""
        return self.entries / np.outer(self.scale, self.scale)


def truncated_kernel(A: MomentMatrix, cond_limit: float = COND_LIMIT) -> "TruncatedKernel":
    """Reproducing kernel of polynomials of degree < N from the moment matrix.

    Refuses truncation orders whose scaled condition number exceeds the
    guardrail: beyond it the Cholesky inverse carries no retrievable
    accuracy in double precision.
    """
    As = A.scaled
    cond = float(np.linalg.cond(As))
    if cond > cond_limit:
        raise IllConditionedError(
            f"scaled moment matrix condition {cond:.3e} exceeds {cond_limit:.1e} "
            f"at N={A.N}; reduce the truncation order"
        )
    try:
        chol, _ = cho_factor(As, lower=True)
    except LinAlgError as exc:
        raise NotPositiveDefiniteError(f"moment matrix not positive definite: {exc}") from exc
    return TruncatedKernel(k=A.k, c=A.c, N=A.N, scale=A.scale, chol=chol, condition=cond)


@dataclass(frozen=True)
class TruncatedKernel:
    """L^(N)(z,w) = sum G_ij z^i conj(w)^j with G the inverse moment matrix."""

    k: int
    c: float
    N: int
    scale: np.ndarray
    chol: np.ndarray
    condition: float

    @cached_property
    def coefficients(self) -> np.ndarray:
        """The coefficient matrix G (inverse Gram, mapped back from the scaled basis)."""
        y = solve_triangular(self.chol, np.eye(self.N, dtype=complex), lower=True)
        inv_scaled = y.conj().T @ y
        return np.conj(inv_scaled) / np.outer(self.scale, self.scale)

    def _scaled_vector(self, z: complex) -> np.ndarray:
        v = np.power(complex(z), np.arange(self.N))
        return v / self.scale

    def evaluate(self, z: complex, w: complex | None = None) -> complex:
        """Kernel value L^(N)(z, w); w defaults to z (then the value is >= 0)."""
        yz = solve_triangular(self.chol, self._scaled_vector(z), lower=True)
        if w is None or w == z:
            return complex(np.vdot(yz, yz).real)
        yw = solve_triangular(self.chol, self._scaled_vector(w), lower=True)
        return complex(np.vdot(yw, yz))

    def tail_indicator(self, p: MicroscopicPotential, z: complex) -> float:
        """Heuristic truncation-error scale |z|^{2N} ||G row N-1|| times the weight."""
        az = abs(complex(z))
        if az == 0.0:
            return 0.0
        row = float(np.linalg.norm(self.coefficients[self.N - 1]))
        logw = 2 * self.c * math.log(az) - p.evaluate(z)
        return float(az ** (2 * self.N) * row * math.exp(min(logw, 700.0)))


def bergman_density(tk: TruncatedKernel, p: MicroscopicPotential, z: complex) -> float:
    """Weighted diagonal L^(N)(z,z) |z|^{2c} e^{-Q0(z)}, damped at the vector level.

    The monomial vector is premultiplied by |z|^c e^{-Q0/2} so no
    intermediate reaches e^{+Q0}.  Warns when the tail indicator suggests
    the truncation order is too small for this z.
    """
    if p.k != tk.k or p.c != tk.c:
        raise ConfigError("kernel and potential disagree on (k, c)")
    z = complex(z)
    if z == 0:
        if tk.c < 0:
            raise DivergenceError("density diverges at z = 0 for c < 0")
        if tk.c > 0:
            return 0.0
        e0 = np.zeros(tk.N, dtype=complex)
        e0[0] = 1.0 / tk.scale[0]
        y = solve_triangular(tk.chol, e0, lower=True)
        return float(np.vdot(y, y).real)
    damp = math.exp(-0.5 * (p.evaluate(z) - 2 * tk.c * math.log(abs(z))))
    y = solve_triangular(tk.chol, tk._scaled_vector(z) * damp, lower=True)
    value = float(np.vdot(y, y).real)
    ind = tk.tail_indicator(p, z)
    if ind > _TAIL_WARN * max(1.0, value):
        warnings.warn(
            f"truncation order N={tk.N} may be too small at |z|={abs(z):.3g} "
            f"(tail indicator {ind:.2e})",
            RuntimeWarning,
            stacklevel=2,
        )
    return value
