"""Gaussian channels: representation, region predicates and channel action.

A general Gaussian channel is a pair of matrices ``(X, Y)`` acting as
``d -> X d`` and ``V -> X V X^T + Y``.  The phase-insensitive single-mode
family is parametrized by a transmissivity/gain ``tau >= 0`` and an added
noise ``y``; complete positivity requires ``y >= |1 - tau|`` and the channel
is entanglement breaking when ``y >= 1 + tau``.

The region predicates below take raw ``(tau, y)`` scalars (they also classify
points that cannot be built as channel objects) and accept numpy arrays for
grid evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError, DomainError, PhysicalityError
from .gaussian_core import (
    PHYSICALITY_TOL,
    SYMMETRY_TOL,
    GaussianState,
    symplectic_form,
)

#: Slack allowed on the complete-positivity line when constructing channels,
#: so points computed to sit exactly on the boundary survive round-off.
CP_CONSTRUCTION_TOL = 1e-12


class ChannelClass(Enum):
    UNPHYSICAL = "unphysical"
    IDENTITY = "identity"
    QUANTUM_LIMITED_ATTENUATOR = "quantum_limited_attenuator"
    QUANTUM_LIMITED_AMPLIFIER = "quantum_limited_amplifier"
    ENTANGLEMENT_BREAKING = "entanglement_breaking"
    GENERIC = "generic"


def is_cp_general(X, Y, tol: float = PHYSICALITY_TOL) -> bool:
    """Complete-positivity test for a general Gaussian channel.

    True iff the Hermitian matrix ``Y + i X Omega X^T - i Omega`` has minimum
    eigenvalue >= ``-tol`` (scaled by the matrix magnitude, as in
    :func:`~cvtele.gaussian_core.is_physical`).
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape[0] % 2:
        raise DimensionError(f"X and Y must be matching even-dimension square matrices, got {X.shape} and {Y.shape}")
    scale = max(1.0, np.abs(Y).max(), np.abs(X).max() ** 2)
    if np.abs(Y - Y.T).max() > SYMMETRY_TOL * scale:
        raise DimensionError("noise matrix Y is not symmetric")
    omega = symplectic_form(X.shape[0] // 2)
    H = Y + 1j * (X @ omega @ X.T - omega)
    return bool(np.linalg.eigvalsh(H).min() >= -tol * scale)


def pi_is_cp(tau, y, tol: float = PHYSICALITY_TOL):
    """Scalar complete-positivity test ``y >= |1 - tau|`` (vectorizes)."""
    return np.greater_equal(y, np.abs(1.0 - np.asarray(tau)) - tol)


def pi_is_entanglement_breaking(tau, y, tol: float = PHYSICALITY_TOL):
    """Entanglement-breaking test ``y >= 1 + tau`` for ``tau >= 0`` (vectorizes)."""
    return np.greater_equal(y, 1.0 + np.asarray(tau) - tol)


def min_noise_for_entanglement(tau: float, r: float) -> float:
    """Lowest added noise reachable with shared entanglement ``2 r``.

    ``exp(-2 r) (1 + tau)``: the accessible-region boundary, which collapses
    onto the entanglement-breaking line at ``r = 0``.
    """
    if tau < 0.0:
        raise DomainError(f"transmissivity must be nonnegative, got {tau}")
    if r < 0.0:
        raise DomainError(f"entanglement parameter must be nonnegative, got {r}")
    return math.exp(-2.0 * r) * (1.0 + tau)


@dataclass(frozen=True)
class PhaseInsensitiveChannel:
    """Single-mode phase-insensitive channel ``X = sqrt(tau) 1, Y = y 1``."""

    tau: float
    y: float

    def __post_init__(self):
        tau, y = float(self.tau), float(self.y)
        if tau < 0.0:
            raise DomainError(f"transmissivity must be nonnegative, got {tau}")
        if y < abs(1.0 - tau) - CP_CONSTRUCTION_TOL:
            raise PhysicalityError(
                f"channel (tau={tau}, y={y}) is not completely positive: needs y >= |1 - tau|"
            )
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "y", y)

    def is_cp(self, tol: float = PHYSICALITY_TOL) -> bool:
        return bool(pi_is_cp(self.tau, self.y, tol))

    def is_entanglement_breaking(self, tol: float = PHYSICALITY_TOL) -> bool:
        return bool(pi_is_entanglement_breaking(self.tau, self.y, tol))

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return math.sqrt(self.tau) * np.eye(2), self.y * np.eye(2)


@dataclass(frozen=True)
class GaussianChannelGeneral:
    """General Gaussian channel ``(X, Y)``; complete positivity is enforced."""

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        Y = np.asarray(self.Y, dtype=float)
        if not is_cp_general(X, Y):
            raise PhysicalityError("channel (X, Y) violates complete positivity")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    def matrices(self) -> tuple[np.ndarray, np.ndarray]:
        return self.X, self.Y


def apply(channel, state: GaussianState, modes=None) -> GaussianState:
    """Act with a channel on the given modes of a Gaussian state.

    `modes` lists the target mode indices (identity on the rest); it defaults
    to all modes, which requires the channel dimension to match the state.
    The output is re-validated, so a CP channel on a physical input always
    returns a physical state.
    """
    X, Y = channel.matrices()
    n = X.shape[0] // 2
    m = state.mode_count
    if modes is None:
        modes = tuple(range(n))
    modes = tuple(int(k) for k in modes)
    if len(modes) != n or len(set(modes)) != n:
        raise DimensionError(f"channel acts on {n} mode(s), got mode indices {modes}")
    if any(k < 0 or k >= m for k in modes):
        raise DimensionError(f"mode indices {modes} out of range for a {m}-mode state")
    idx = np.concatenate([[2 * k, 2 * k + 1] for k in modes])
    Xf = np.eye(2 * m)
    Xf[np.ix_(idx, idx)] = X
    Yf = np.zeros((2 * m, 2 * m))
    Yf[np.ix_(idx, idx)] = Y
    return GaussianState(Xf @ state.d, Xf @ state.V @ Xf.T + Yf)


def choi_log_negativity(ch: PhaseInsensitiveChannel) -> float:
    """Entanglement of the channel's Choi state: max{0, -ln(y / (1 + tau))}.

    Diverges (returns ``inf``) only for the identity channel ``y = 0``.
    This lower-bounds the entanglement any teleportation simulation of the
    channel must consume.
    """
    if ch.y == 0.0:
        return math.inf
    return max(0.0, -math.log(ch.y / (1.0 + ch.tau)))


def classify(tau: float, y: float, tol: float = PHYSICALITY_TOL) -> ChannelClass:
    """Classify a point of the (tau, y) plane.

    Order of precedence: unphysical, identity, quantum-limited boundary
    (attenuator/amplifier), entanglement breaking, generic.
    """
    tau, y = float(tau), float(y)
    if y < abs(1.0 - tau) - tol:
        return ChannelClass.UNPHYSICAL
    if abs(tau - 1.0) <= tol and y <= tol:
        return ChannelClass.IDENTITY
    if abs(y - abs(1.0 - tau)) <= tol:
        if tau < 1.0:
            return ChannelClass.QUANTUM_LIMITED_ATTENUATOR
        if tau > 1.0:
            return ChannelClass.QUANTUM_LIMITED_AMPLIFIER
    if y >= 1.0 + tau - tol:
        return ChannelClass.ENTANGLEMENT_BREAKING
    return ChannelClass.GENERIC
