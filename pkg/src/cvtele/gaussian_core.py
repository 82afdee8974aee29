"""Gaussian states in the quadrature representation.

Conventions used throughout the package:

* quadratures are ordered ``(q1, p1, ..., qm, pm)``;
* the vacuum covariance matrix is the identity (variance 1 per quadrature);
* a coherent state of amplitude ``alpha`` has displacement
  ``(sqrt(2) Re alpha, sqrt(2) Im alpha)``;
* logarithms are natural, so a two-mode squeezed vacuum with squeezing ``r``
  carries entanglement ``2 r``.

Covariance matrices and displacement vectors are plain ``numpy`` arrays;
``GaussianState`` bundles them with validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, PhysicalityError

#: Default tolerance for eigenvalue-based physicality tests.  The threshold is
#: scaled by the magnitude of the matrix, since Hermitian eigensolvers are
#: accurate to roughly ``eps * norm(V)``; highly squeezed states would
#: otherwise be rejected by pure round-off.
PHYSICALITY_TOL = 1e-9

#: Relative tolerance for symmetry checks on covariance/noise matrices.
SYMMETRY_TOL = 1e-12

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def symplectic_form(m: int) -> np.ndarray:
    """Block-diagonal symplectic form with `m` blocks of [[0,1],[-1,0]]."""
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise DomainError(f"mode count must be a positive integer, got {m!r}")
    return np.kron(np.eye(m), _OMEGA_1)


def _as_covariance(V, *, name: str = "V") -> np.ndarray:
    """Coerce to a float array and validate shape/symmetry."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[0] != V.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {V.shape}")
    if V.shape[0] % 2 != 0 or V.shape[0] == 0:
        raise DimensionError(f"{name} must have even positive dimension, got {V.shape[0]}")
    scale = max(1.0, np.abs(V).max())
    if np.abs(V - V.T).max() > SYMMETRY_TOL * scale:
        raise DimensionError(f"{name} is not symmetric")
    return V


def is_physical(V, tol: float = PHYSICALITY_TOL) -> bool:
    """True iff ``V + i*Omega`` is positive semidefinite within `tol`.

    This is the uncertainty-relation test for a bona fide covariance matrix.
    `tol` is interpreted relative to ``max(1, |V|_max)`` so the check stays
    meaningful for covariance entries far above the vacuum scale.
    """
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    V = _as_covariance(V)
    m = V.shape[0] // 2
    H = V + 1j * symplectic_form(m)
    eigs = np.linalg.eigvalsh(H)
    scale = max(1.0, np.abs(V).max())
    return bool(eigs.min() >= -tol * scale)


def symplectic_eigenvalues(V) -> np.ndarray:
    """Positive symplectic spectrum of a covariance matrix, ascending.

    The spectrum of ``i Omega V`` comes in pairs ``+/- nu``; the `m` positive
    values are returned.  They are evaluated through the Hermitian matrix
    ``sqrt(V) (i Omega) sqrt(V)`` (similar to ``i Omega V``), which keeps the
    eigensolver backward-stable even for degenerate pure-state spectra.
    All values are >= 1 for a physical state.
    """
    V = _as_covariance(V)
    m = V.shape[0] // 2
    w, U = np.linalg.eigh(V)
    scale = max(1.0, np.abs(V).max())
    if w.min() < -PHYSICALITY_TOL * scale:
        raise DomainError("covariance matrix is not positive definite")
    S = (U * np.sqrt(np.maximum(w, 0.0))) @ U.T
    M = S @ (1j * symplectic_form(m)) @ S
    return np.linalg.eigvalsh(M)[m:]


def partial_transpose_cm(V) -> np.ndarray:
    """Covariance matrix of the partially transposed two-mode state.

    Conjugation by ``1 (+) sigma_z``: the second mode's momentum row and
    column flip sign.  Exact (pure sign flips), hence an involution.
    """
    V = _as_covariance(V)
    if V.shape[0] != 4:
        raise DimensionError("partial transposition is defined here for two modes only")
    W = V.copy()
    W[3, :] *= -1.0
    W[:, 3] *= -1.0
    return W


def log_negativity(V) -> float:
    """Entanglement of a two-mode Gaussian state: max{0, -ln nu_min~}.

    ``nu_min~`` is the smallest symplectic eigenvalue of the partially
    transposed covariance matrix.  Natural logarithm, so a two-mode squeezed
    vacuum with squeezing ``r`` gives ``2 r``.
    """
    V = _as_covariance(V)
    if V.shape[0] != 4:
        raise DimensionError("log_negativity expects a two-mode covariance matrix")
    if not is_physical(V):
        raise DomainError("covariance matrix is unphysical")
    nu = symplectic_eigenvalues(partial_transpose_cm(V))[0]
    if nu <= 0.0:
        return math.inf
    return max(0.0, -math.log(nu))


def mean_energy(V) -> float:
    """Mean photon number per mode of a zero-mean Gaussian state.

    ``(tr(V)/m - 2)/4`` in units of the oscillator quantum; the vacuum gives 0.
    First moments are assumed zero; see :func:`mean_energy_with_displacement`.
    """
    V = _as_covariance(V)
    m = V.shape[0] // 2
    return (np.trace(V) / m - 2.0) / 4.0


def mean_energy_with_displacement(state: "GaussianState") -> float:
    """Mean photon number per mode including the displacement contribution.

    Adds ``|d|^2 / (2 m)`` to :func:`mean_energy`, which for a coherent state
    of amplitude ``alpha`` gives ``|alpha|^2``.
    """
    return mean_energy(state.V) + float(state.d @ state.d) / (2.0 * state.mode_count)


@dataclass(frozen=True)
class GaussianState:
    """Displacement vector and covariance matrix of an m-mode Gaussian state."""

    d: np.ndarray
    V: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float).reshape(-1)
        V = _as_covariance(self.V)
        if d.shape[0] != V.shape[0]:
            raise DimensionError(
                f"displacement length {d.shape[0]} does not match covariance side {V.shape[0]}"
            )
        if not is_physical(V):
            raise PhysicalityError("covariance matrix violates the uncertainty relation")
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "V", V)

    @property
    def mode_count(self) -> int:
        return self.d.shape[0] // 2


def coherent_state(alpha: complex) -> GaussianState:
    """Single-mode coherent state |alpha>: vacuum covariance, displaced."""
    alpha = complex(alpha)
    d = math.sqrt(2.0) * np.array([alpha.real, alpha.imag])
    return GaussianState(d, np.eye(2))


@dataclass(frozen=True)
class TwoModeStandardForm:
    """Two-mode covariance matrix in standard form.

    Diagonal blocks ``a*1`` and ``b*1``, off-diagonal block ``-c*sigma_z``
    with ``a, b >= 1`` and ``c >= 0``.  Construction validates physicality of
    the expanded 4x4 matrix.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        a, b, c = float(self.a), float(self.b), float(self.c)
        if a < 1.0 - PHYSICALITY_TOL or b < 1.0 - PHYSICALITY_TOL:
            raise PhysicalityError(f"diagonal blocks need a, b >= 1, got a={a}, b={b}")
        if c < -PHYSICALITY_TOL:
            raise DomainError(f"correlation amplitude must be nonnegative, got c={c}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if not is_physical(_expand_standard_form(a, b, c)):
            raise PhysicalityError(f"standard form (a={a}, b={b}, c={c}) is unphysical")


def _expand_standard_form(a: float, b: float, c: float) -> np.ndarray:
    V = np.zeros((4, 4))
    V[:2, :2] = a * np.eye(2)
    V[2:, 2:] = b * np.eye(2)
    V[:2, 2:] = -c * SIGMA_Z
    V[2:, :2] = -c * SIGMA_Z
    return V


def standard_form_to_cm(sf: TwoModeStandardForm) -> np.ndarray:
    """Expand a standard-form triple into its 4x4 covariance matrix."""
    return _expand_standard_form(sf.a, sf.b, sf.c)


def tmss(r: float) -> TwoModeStandardForm:
    """Two-mode squeezed vacuum with squeezing parameter ``r >= 0``.

    Standard form ``(cosh 2r, cosh 2r, sinh 2r)``; pure, with entanglement
    ``2 r`` and mean energy ``sinh^2 r`` per mode pair.
    """
    r = float(r)
    if r < 0.0:
        raise DomainError(f"squeezing parameter must be nonnegative, got {r}")
    return TwoModeStandardForm(math.cosh(2.0 * r), math.cosh(2.0 * r), math.sinh(2.0 * r))
