"""Mathieu coefficients, secular frequencies, Floquet stability and charge budget.

Conventions: the drive potential is V(t) = V_dc + V_ac*cos(Omega*t) applied
over an electrode gap z0 with efficiency eta, giving a quadratic potential
proportional to z^2 - x^2/2 - y^2/2.  A mode with inertia J and curvature
coefficient C (torque or force per unit coordinate per volt) maps onto the
Mathieu normal form u'' + (a - 2 q cos 2 tau) u = 0, tau = Omega*t/2, with

    q = C V_ac / (J Omega^2),      a = -2 C V_dc / (J Omega^2),

which for the rotational modes (C = 3 eta Q S_mu / z0^2) reproduces the
axial-frequency relation omega_z = eta |Q| V_ac / (sqrt(2) m Omega z0^2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .geometry import BodyProperties


class Mode(enum.Enum):
    ROT_X = "rot_x"        # tilt about the lab x axis, leverage S_X, inertia I_X
    ROT_Y = "rot_y"        # tilt about the lab y axis, leverage S_Y, inertia I_Y
    COM_RADIAL = "com_radial"
    COM_AXIAL = "com_axial"


@dataclass(frozen=True)
class TrapConfig:
    V_ac: float            # V
    V_dc: float            # V
    drive_frequency: float  # Omega, rad/s
    z0: float              # electrode gap, m
    eta: float = 1.0       # geometric efficiency, (0, 1]

    def __post_init__(self):
        if self.drive_frequency <= 0.0:
            raise ValueError("drive frequency must be positive")
        if self.z0 <= 0.0:
            raise ValueError("electrode gap must be positive")
        if not (0.0 < self.eta <= 1.0):
            raise ValueError("efficiency must lie in (0, 1]")


@dataclass(frozen=True)
class MathieuCoefficients:
    mode: Mode
    a: float
    q: float


@dataclass(frozen=True)
class SecularMode:
    """One secular line: angular frequency plus a pseudopotential-validity flag."""

    mode: Mode
    omega: float           # rad/s
    pseudopotential_valid: bool


@dataclass(frozen=True)
class StabilityVerdict:
    mode: Mode
    stable: bool
    monodromy_trace: float
    quasi_frequency: float  # rad/s; 0 when unstable


@dataclass(frozen=True)
class ThermalState:
    temperature: float     # K
    rms_angle: float       # sqrt(<phi^2>), rad


@dataclass(frozen=True)
class ChargeBudget:
    required_charge: float      # |Q_tot|, C
    elementary_count: int
    omega_ratio: float          # assumed omega_phi / omega_com


class AntiTrappingError(ValueError):
    """a + q^2/2 < 0: the pseudopotential does not confine this mode."""


PSEUDOPOTENTIAL_Q_MAX = 0.4  # |q| beyond this, the secular formula is only indicative


def _mode_curvature_and_inertia(body: BodyProperties, trap: TrapConfig, mode: Mode):
    if mode in (Mode.ROT_X, Mode.ROT_Y):
        S = body.surface.S_X if mode is Mode.ROT_X else body.surface.S_Y
        J = body.I_X if mode is Mode.ROT_X else body.I_Y
        if J <= 0.0:
            raise ValueError(f"degenerate shape: zero inertia for {mode}")
        C = 3.0 * trap.eta * body.Q * S / trap.z0 ** 2
        return C, J
    # center-of-mass curvatures from z^2 - x^2/2 - y^2/2
    factor = -2.0 if mode is Mode.COM_AXIAL else 1.0
    C = factor * trap.eta * body.Q / trap.z0 ** 2
    return C, body.mass


def mathieu_coefficients(body: BodyProperties, trap: TrapConfig, mode: Mode) -> MathieuCoefficients:
    """Dimensionless (a, q) for one rotational or center-of-mass mode."""
    if body.Q == 0.0:
        raise ValueError("body carries no charge")
    C, J = _mode_curvature_and_inertia(body, trap, mode)
    denom = J * trap.drive_frequency ** 2
    q = C * trap.V_ac / denom
    a = -2.0 * C * trap.V_dc / denom
    return MathieuCoefficients(mode=mode, a=a, q=q)


def secular_frequency(coeffs: MathieuCoefficients, trap: TrapConfig) -> SecularMode:
    """omega = (Omega/2) sqrt(a + q^2/2) in the pseudopotential approximation."""
    s = coeffs.a + 0.5 * coeffs.q ** 2
    if s < 0.0:
        raise AntiTrappingError(
            f"mode {coeffs.mode}: a + q^2/2 = {s:.3e} < 0 (anti-trapping)")
    omega = 0.5 * trap.drive_frequency * math.sqrt(s)
    return SecularMode(mode=coeffs.mode, omega=omega,
                       pseudopotential_valid=abs(coeffs.q) <= PSEUDOPOTENTIAL_Q_MAX)


def secular_spectrum(body: BodyProperties, trap: TrapConfig,
                     modes=tuple(Mode)) -> dict[Mode, SecularMode]:
    return {m: secular_frequency(mathieu_coefficients(body, trap, m), trap)
            for m in modes}


# ---------------------------------------------------------------------------
# Floquet analysis of the Mathieu normal form
# ---------------------------------------------------------------------------

def _monodromy(a: float, q: float, rtol: float = 1e-10, atol: float = 1e-12) -> np.ndarray:
    """Monodromy matrix of u'' + (a - 2 q cos 2 tau) u = 0 over one period pi."""

    def rhs(tau, y):
        u1, v1, u2, v2 = y
        k = -(a - 2.0 * q * math.cos(2.0 * tau))
        return [v1, k * u1, v2, k * u2]

    sol = solve_ivp(rhs, (0.0, math.pi), [1.0, 0.0, 0.0, 1.0],
                    method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"Floquet integration failed: {sol.message} "
                           f"(a={a}, q={q}, {sol.t.size} steps)")
    y = sol.y[:, -1]
    return np.array([[y[0], y[2]], [y[1], y[3]]])


def floquet_stability(coeffs: MathieuCoefficients, trap: TrapConfig,
                      trace_tol: float = 1e-9) -> StabilityVerdict:
    """Rigorous stability verdict: stable iff |tr M| <= 2 (marginal included).

    For stable modes the quasi-frequency Omega*nu/2 is reported, with
    cos(pi*nu) = tr(M)/2; it converges to the secular formula for small |q|.
    """
    M = _monodromy(coeffs.a, coeffs.q)
    trace = float(np.trace(M))
    stable = abs(trace) <= 2.0 + trace_tol
    if stable:
        nu = math.acos(min(1.0, max(-1.0, trace / 2.0))) / math.pi
        quasi = 0.5 * trap.drive_frequency * nu
    else:
        quasi = 0.0
    return StabilityVerdict(mode=coeffs.mode, stable=stable,
                            monodromy_trace=trace, quasi_frequency=quasi)


def stability_boundary_q(a: float = 0.0, q_lo: float = 0.5, q_hi: float = 1.5,
                         tol: float = 1e-4) -> float:
    """Locate the q where |tr M| = 2 crosses, by bisection at fixed a."""

    def excess(q):
        return abs(float(np.trace(_monodromy(a, q)))) - 2.0

    lo, hi = excess(q_lo), excess(q_hi)
    if lo > 0.0 or hi < 0.0:
        raise ValueError("bisection bracket does not straddle the boundary")
    while q_hi - q_lo > tol:
        mid = 0.5 * (q_lo + q_hi)
        if excess(mid) <= 0.0:
            q_lo = mid
        else:
            q_hi = mid
    return 0.5 * (q_lo + q_hi)


# ---------------------------------------------------------------------------
# thermal spread and charge budget
# ---------------------------------------------------------------------------

def thermal_angle(body: BodyProperties, omega_phi: float, temperature: float,
                  k_B: float = 1.380649e-23) -> ThermalState:
    """Equipartition rms angle sqrt(k_B T / (I_Y omega_phi^2))."""
    if omega_phi <= 0.0:
        raise ValueError("rotational frequency must be positive")
    if temperature < 0.0:
        raise ValueError("temperature must be non-negative")
    rms = math.sqrt(k_B * temperature / (body.I_Y * omega_phi ** 2))
    return ThermalState(temperature=temperature, rms_angle=rms)


def charge_budget(body: BodyProperties, trap: TrapConfig, omega_phi: float,
                  ratio: float, elementary_charge: float = 1.602176634e-19) -> ChargeBudget:
    """Total surface charge needed so the axial secular mode sits at omega_phi/ratio.

    Inverts omega_z = eta |Q| V_ac / (sqrt(2) m Omega z0^2); the count is the
    ceiling in units of the elementary charge.
    """
    if omega_phi <= 0.0:
        raise ValueError("target rotational frequency must be positive")
    if ratio <= 0.0:
        raise ValueError("frequency ratio must be positive")
    omega_com = omega_phi / ratio
    Q = (math.sqrt(2.0) * body.mass * trap.drive_frequency * trap.z0 ** 2
         * omega_com / (trap.eta * trap.V_ac))
    count = math.ceil(Q / elementary_charge)
    return ChargeBudget(required_charge=Q, elementary_count=count, omega_ratio=ratio)
