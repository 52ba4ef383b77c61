"""Time-domain integration of the two tilt angles and secular-frequency extraction.

The linear simulator integrates the Mathieu dynamics implied by the trap
module's (a, q) pair for each angle; the nonlinear one keeps the full
trigonometric torque (cos(phi2) sin(2 phi1) and cos^2(phi1) sin(2 phi2))
whose linearization reproduces the linear model exactly.  Spin about the
symmetry axis is held at zero throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .geometry import BodyProperties
from .trap import TrapConfig, Mode, mathieu_coefficients

ANGLE_LIMIT = 0.5 * math.pi  # beyond this the small-angle model is meaningless
MIN_SPECTRAL_SAMPLES = 1 << 10


class PeakExtractionError(RuntimeError):
    """No secular spectral peak could be isolated above the noise floor."""


@dataclass(frozen=True)
class RotorState:
    phi1: float    # rotation about y, rad
    phi2: float    # rotation about x', rad
    dphi1: float   # rad/s
    dphi2: float   # rad/s
    time: float = 0.0


@dataclass(frozen=True)
class DampingModel:
    gamma: float = 0.0  # angular damping rate, 1/s (torque -gamma*I*dphi)

    def __post_init__(self):
        if self.gamma < 0.0:
            raise ValueError("damping rate must be non-negative")


@dataclass
class Trajectory:
    times: np.ndarray            # s, uniform
    phi1: np.ndarray
    phi2: np.ndarray
    dphi1: np.ndarray
    dphi2: np.ndarray
    sample_interval: float       # s
    unstable: bool = False
    metadata: dict = field(default_factory=dict)

    def state(self, i: int) -> RotorState:
        return RotorState(phi1=float(self.phi1[i]), phi2=float(self.phi2[i]),
                          dphi1=float(self.dphi1[i]), dphi2=float(self.dphi2[i]),
                          time=float(self.times[i]))

    def write_csv(self, path):
        header = "time_s,phi1_rad,phi2_rad,dphi1_radps,dphi2_radps"
        data = np.column_stack([self.times, self.phi1, self.phi2,
                                self.dphi1, self.dphi2])
        np.savetxt(path, data, delimiter=",", header=header, comments="")


def _angle_coefficients(body: BodyProperties, trap: TrapConfig):
    # phi1 tilts about y (leverage S_Y), phi2 about x' (leverage S_X)
    c1 = mathieu_coefficients(body, trap, Mode.ROT_Y)
    c2 = mathieu_coefficients(body, trap, Mode.ROT_X)
    return (c1.a, c1.q), (c2.a, c2.q)


def _integrate(rhs, init: RotorState, duration: float, samples: int,
               rtol: float, atol: float, metadata: dict) -> Trajectory:
    times = np.linspace(0.0, duration, samples)

    def blowup(t, y):
        return max(abs(y[0]), abs(y[1])) - ANGLE_LIMIT

    blowup.terminal = True
    blowup.direction = 1.0

    sol = solve_ivp(rhs, (0.0, duration), [init.phi1, init.phi2, init.dphi1, init.dphi2],
                    t_eval=times, method="DOP853", rtol=rtol, atol=atol,
                    events=blowup)
    if not sol.success and sol.status != 1:
        raise RuntimeError(f"integration failed: {sol.message}")
    unstable = sol.status == 1
    n = sol.t.size
    return Trajectory(times=sol.t, phi1=sol.y[0, :n], phi2=sol.y[1, :n],
                      dphi1=sol.y[2, :n], dphi2=sol.y[3, :n],
                      sample_interval=times[1] - times[0],
                      unstable=unstable, metadata=metadata)


def simulate_linear(body: BodyProperties, trap: TrapConfig, init: RotorState,
                    duration: float, damping: DampingModel = DampingModel(),
                    samples: int = 4096, rtol: float = 1e-9,
                    atol: float = 1e-14) -> Trajectory:
    """Small-angle (Mathieu) dynamics of both tilt angles."""
    (a1, q1), (a2, q2) = _angle_coefficients(body, trap)
    W = trap.drive_frequency
    k = 0.25 * W * W
    g = damping.gamma

    def rhs(t, y):
        drive = 2.0 * math.cos(W * t)
        acc1 = k * (-a1 + q1 * drive) * y[0] - g * y[2]
        acc2 = k * (-a2 + q2 * drive) * y[1] - g * y[3]
        return [y[2], y[3], acc1, acc2]

    meta = {"model": "linear", "drive_frequency_radps": W,
            "a": (a1, a2), "q": (q1, q2), "gamma": g}
    return _integrate(rhs, init, duration, samples, rtol, atol, meta)


def simulate_nonlinear(body: BodyProperties, trap: TrapConfig, init: RotorState,
                       duration: float, damping: DampingModel = DampingModel(),
                       samples: int = 4096, rtol: float = 1e-9,
                       atol: float = 1e-14) -> Trajectory:
    """Two-angle dynamics with the full trigonometric torque."""
    (a1, q1), (a2, q2) = _angle_coefficients(body, trap)
    W = trap.drive_frequency
    k = 0.125 * W * W  # sin(2*phi)/2 -> phi recovers the linear model
    g = damping.gamma

    def rhs(t, y):
        drive = 2.0 * math.cos(W * t)
        p1, p2 = y[0], y[1]
        acc1 = k * (-a1 + q1 * drive) * math.cos(p2) * math.sin(2.0 * p1) - g * y[2]
        acc2 = k * (-a2 + q2 * drive) * math.cos(p1) ** 2 * math.sin(2.0 * p2) - g * y[3]
        return [y[2], y[3], acc1, acc2]

    meta = {"model": "nonlinear", "drive_frequency_radps": W,
            "a": (a1, a2), "q": (q1, q2), "gamma": g}
    return _integrate(rhs, init, duration, samples, rtol, atol, meta)


def simulate_mathieu(a: float, q: float, drive_frequency: float, init: RotorState,
                     n_drive_periods: float, damping: DampingModel = DampingModel(),
                     samples: int = 4096, rtol: float = 1e-9) -> Trajectory:
    """Integrate the normal-form Mathieu dynamics directly from given (a, q).

    Convenience entry point for stability charts and cross-checks where no
    physical body is involved; phi2 evolves with the same coefficients.
    """
    W = drive_frequency
    k = 0.25 * W * W
    g = damping.gamma

    def rhs(t, y):
        drive = 2.0 * math.cos(W * t)
        acc1 = k * (-a + q * drive) * y[0] - g * y[2]
        acc2 = k * (-a + q * drive) * y[1] - g * y[3]
        return [y[2], y[3], acc1, acc2]

    duration = n_drive_periods * 2.0 * math.pi / W
    meta = {"model": "mathieu", "drive_frequency_radps": W, "a": (a, a), "q": (q, q),
            "gamma": g}
    return _integrate(rhs, init, duration, samples, rtol, 1e-14, meta)


# ---------------------------------------------------------------------------
# spectral extraction
# ---------------------------------------------------------------------------

def extract_secular_frequency(traj: Trajectory, component: str | None = None) -> float:
    """Dominant sub-drive spectral line of a stable trajectory, in rad/s.

    The search window sits below half the drive frequency, which excludes the
    drive line and its secular sidebands; the peak is refined by parabolic
    interpolation of the windowed spectrum.
    """
    if traj.unstable:
        raise PeakExtractionError("trajectory flagged unstable")
    if traj.times.size < MIN_SPECTRAL_SAMPLES:
        raise PeakExtractionError(
            f"need at least {MIN_SPECTRAL_SAMPLES} samples, got {traj.times.size}")

    if component is None:
        component = "phi1" if np.var(traj.phi1) >= np.var(traj.phi2) else "phi2"
    y = getattr(traj, component).astype(float)
    y = y - y.mean()
    n = y.size
    window = np.hanning(n)
    spec = np.abs(np.fft.rfft(y * window))
    freqs = np.fft.rfftfreq(n, d=traj.sample_interval)  # Hz

    drive = traj.metadata.get("drive_frequency_radps")
    f_max = drive / (4.0 * math.pi) if drive else freqs[-1]  # half the drive, in Hz
    band = (freqs > 0.0) & (freqs < f_max)
    if not band.any():
        raise PeakExtractionError("empty search band below the drive frequency")

    idx = np.flatnonzero(band)
    k = idx[np.argmax(spec[idx])]
    noise = np.median(spec[band])
    if spec[k] < 10.0 * max(noise, 1e-300):
        raise PeakExtractionError("no spectral peak above the noise floor")

    # parabolic refinement on log magnitude
    if 0 < k < spec.size - 1 and spec[k - 1] > 0.0 and spec[k + 1] > 0.0:
        lm, l0, lp = np.log(spec[k - 1]), np.log(spec[k]), np.log(spec[k + 1])
        denom = lm - 2.0 * l0 + lp
        delta = 0.5 * (lm - lp) / denom if denom != 0.0 else 0.0
        delta = min(0.5, max(-0.5, delta))
    else:
        delta = 0.0
    f_peak = (k + delta) * (freqs[1] - freqs[0])
    return 2.0 * math.pi * f_peak
