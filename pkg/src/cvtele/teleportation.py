"""Non-unit-gain Braunstein-Kimble teleportation as a channel simulator.

The protocol: the sender mixes the input mode with her half of a shared
two-mode resource on a balanced beam splitter, homodynes the two commuting
combinations ``(q_in + q_A)/sqrt(2)`` and ``(p_in - p_A)/sqrt(2)``, and the
receiver displaces his half by the outcomes scaled with a gain ``g > 0``.
For a resource in standard form ``(a, b, c)`` the induced channel is phase
insensitive with ``tau = g^2`` and ``y = g^2 a - 2 g c + b``.

Two independent implementations of the output map are provided:
:func:`bk_output` evaluates the closed-form output moments, while
:func:`heisenberg_oracle` rebuilds the output quadratures as an explicit
linear map on the joint (input + resource) system.  They must agree to
machine precision and are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundaryError, DimensionError, DomainError, PhysicalityError
from .channels import PhaseInsensitiveChannel
from .gaussian_core import (
    SIGMA_Z,
    GaussianState,
    TwoModeStandardForm,
    is_physical,
    standard_form_to_cm,
)


#: Slack on the entanglement-breaking line when rejecting channels that have
#: no squeezed-vacuum simulation.
CP_TOL = 1e-12


def _resource_cm(resource) -> np.ndarray:
    """Coerce a resource (standard form or raw 4x4 matrix) to a covariance matrix."""
    if isinstance(resource, TwoModeStandardForm):
        return standard_form_to_cm(resource)
    V = np.asarray(resource, dtype=float)
    if V.shape != (4, 4):
        raise DimensionError(f"resource covariance matrix must be 4x4, got {V.shape}")
    if not is_physical(V):
        raise PhysicalityError("resource covariance matrix is unphysical")
    return V


def _check_gain(g: float) -> float:
    g = float(g)
    if g <= 0.0:
        raise DomainError(f"gain must be strictly positive, got {g}")
    return g


def bk_output(resource, g: float, state: GaussianState) -> GaussianState:
    """Teleportation output from the closed-form moment map.

    ``d_out = g d_in`` and
    ``V_out = g^2 V_in + g^2 sz A sz + g (sz C + C^T sz) + B``
    with ``A, B, C`` the blocks of the resource covariance matrix and
    ``sz`` the Pauli-z matrix.
    """
    V_ab = _resource_cm(resource)
    g = _check_gain(g)
    if state.mode_count != 1:
        raise DimensionError("teleportation input must be a single-mode state")
    A, B, C = V_ab[:2, :2], V_ab[2:, 2:], V_ab[:2, 2:]
    d_out = g * state.d
    V_out = (
        g * g * state.V
        + g * g * (SIGMA_Z @ A @ SIGMA_Z)
        + g * (SIGMA_Z @ C + C.T @ SIGMA_Z)
        + B
    )
    return GaussianState(d_out, V_out)


def heisenberg_oracle(resource, g: float, state: GaussianState) -> GaussianState:
    """Teleportation output rebuilt from the protocol's quadrature relations.

    Forms the 6x6 covariance of (input + resource) and the linear map
    ``q_out = q_B + g (q_in + q_A)``, ``p_out = p_B + g (p_in - p_A)``,
    then returns its image.  Serves as an independent check of
    :func:`bk_output`.
    """
    V_ab = _resource_cm(resource)
    g = _check_gain(g)
    if state.mode_count != 1:
        raise DimensionError("teleportation input must be a single-mode state")
    V_joint = np.zeros((6, 6))
    V_joint[:2, :2] = state.V
    V_joint[2:, 2:] = V_ab
    d_joint = np.concatenate([state.d, np.zeros(4)])
    # columns: q_in, p_in, q_A, p_A, q_B, p_B
    L = np.array(
        [
            [g, 0.0, g, 0.0, 1.0, 0.0],
            [0.0, g, 0.0, -g, 0.0, 1.0],
        ]
    )
    return GaussianState(L @ d_joint, L @ V_joint @ L.T)


def induced_pi_channel(sf: TwoModeStandardForm, g: float) -> PhaseInsensitiveChannel:
    """Phase-insensitive channel simulated by teleporting over `sf` with gain `g`.

    ``tau = g^2`` and ``y = g^2 a - 2 g c + b``; physicality of the resource
    guarantees the result is completely positive.
    """
    g = _check_gain(g)
    tau = g * g
    y = g * g * sf.a - 2.0 * g * sf.c + sf.b
    return PhaseInsensitiveChannel(tau, y)


@dataclass(frozen=True)
class OptimalResource:
    """Minimal-entanglement resource simulating a boundary channel.

    `sf` induces the channel ``(tau_target, exp(-2r)(1 + tau_target))`` at
    gain ``sqrt(tau_target)``, carries entanglement ``2 r`` and finite mean
    energy ``(a + b - 2)/4``.
    """

    sf: TwoModeStandardForm
    entanglement: float
    energy: float
    tau_target: float


def _accessible_range(r: float) -> tuple[float, float]:
    lo = math.tanh(r)
    hi = math.inf if lo == 0.0 else 1.0 / lo
    return lo, hi


def _optimal_coefficients(tau: float, r: float) -> tuple[float, float, float]:
    e2 = math.exp(2.0 * r)
    em2 = math.exp(-2.0 * r)
    b = (e2 * tau + em2 - abs(tau - 1.0)) / (tau + 1.0 - e2 * abs(tau - 1.0))
    a = (b + em2 * (tau - 1.0)) / tau
    c = (b - em2) / math.sqrt(tau)
    return a, b, c


def _check_accessible(tau: float, r: float) -> tuple[float, float]:
    tau, r = float(tau), float(r)
    if r < 0.0:
        raise DomainError(f"entanglement parameter must be nonnegative, got r={r}")
    if tau <= 0.0:
        raise DomainError(f"transmissivity must be strictly positive, got tau={tau}")
    lo, hi = _accessible_range(r)
    if tau <= lo:
        raise BoundaryError(
            f"tau={tau} is at or below the quantum-limited-attenuator endpoint "
            f"tanh(r)={lo}: the required resource energy diverges there",
            endpoint="quantum_limited_attenuator",
            tau=tau,
            r=r,
        )
    if tau >= hi:
        raise BoundaryError(
            f"tau={tau} is at or above the quantum-limited-amplifier endpoint "
            f"coth(r)={hi}: the required resource energy diverges there",
            endpoint="quantum_limited_amplifier",
            tau=tau,
            r=r,
        )
    return tau, r


def optimal_resource(tau: float, r: float) -> OptimalResource:
    """Minimal-entanglement, minimal-energy resource for a boundary channel.

    For ``tanh r < tau < coth r`` returns the standard form with
    ``a = (b + exp(-2r)(tau - 1))/tau``, ``c = (b - exp(-2r))/sqrt(tau)`` and
    `b` at its physicality lower bound.  The state has entanglement exactly
    ``2 r``, a unit lower symplectic eigenvalue, and with gain ``sqrt(tau)``
    induces the noise ``exp(-2r)(1 + tau)``.  At the endpoints the energy
    diverges and a :class:`~cvtele.errors.BoundaryError` is raised; ``r = 0``
    returns the vacuum, valid for every ``tau > 0``.
    """
    tau, r = _check_accessible(tau, r)
    if r == 0.0:
        return OptimalResource(TwoModeStandardForm(1.0, 1.0, 0.0), 0.0, 0.0, tau)
    a, b, c = _optimal_coefficients(tau, r)
    return OptimalResource(TwoModeStandardForm(a, b, c), 2.0 * r, (a + b - 2.0) / 4.0, tau)


def optimal_resource_energy(tau: float, r: float):
    """Mean energy ``(a + b - 2)/4`` of the optimal resource; ``inf`` at the endpoints."""
    tau, r = float(tau), float(r)
    if r < 0.0:
        raise DomainError(f"entanglement parameter must be nonnegative, got r={r}")
    if tau <= 0.0:
        raise DomainError(f"transmissivity must be strictly positive, got tau={tau}")
    if r == 0.0:
        return 0.0
    lo, hi = _accessible_range(r)
    if tau <= lo or tau >= hi:
        return math.inf
    a, b, _ = _optimal_coefficients(tau, r)
    return (a + b - 2.0) / 4.0


#: Below this distance from ``tau = 1`` the closed-form squeezing solution is
#: evaluated through its analytic limit; the general expression divides by
#: ``(1 - tau)^2`` and loses all precision there.
_TAU_ONE_WINDOW = 1e-5


def tmss_squeezing_for_channel(ch: PhaseInsensitiveChannel, larger_root: bool = False) -> float:
    """Squeezing of the two-mode squeezed vacuum that simulates a channel.

    With gain fixed to ``sqrt(tau)``, a channel ``(tau, y)`` inside the
    completely positive, non-entanglement-breaking region is reproduced by a
    two-mode squeezed vacuum with

    ``r' = acosh((y (1+tau) -/+ 2 sqrt(tau (y^2 - (1-tau)^2))) / (1-tau)^2) / 2``.

    The smaller of the two roots (least entanglement and energy) is returned
    unless `larger_root` is set.  At ``tau = 1`` the expression degenerates
    and the analytic limit ``r' = -ln(y/2)/2`` applies; the identity channel
    ``(1, 0)`` needs unbounded squeezing and returns ``inf``.  Near ``tau = 1``
    (within ``1e-5``) the limit form is used as well, at a matching accuracy.
    """
    tau, y = ch.tau, ch.y
    if y > 1.0 + tau + CP_TOL:
        raise DomainError(
            f"channel (tau={tau}, y={y}) is entanglement breaking; "
            "it needs no entanglement and has no squeezed-vacuum solution"
        )
    if abs(tau - 1.0) <= _TAU_ONE_WINDOW:
        if larger_root:
            return math.inf
        if y == 0.0:
            return math.inf
        return -0.5 * math.log(y / 2.0)
    radicand = tau * (y * y - (1.0 - tau) ** 2)
    root = 2.0 * math.sqrt(max(radicand, 0.0))
    num = y * (1.0 + tau) + root if larger_root else y * (1.0 + tau) - root
    arg = num / (1.0 - tau) ** 2
    return 0.5 * math.acosh(max(arg, 1.0))
