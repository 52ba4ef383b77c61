"""Particle shapes: mass, principal inertia and uniform-surface-charge moments.

All supported shapes are bodies of revolution about the body-fixed Z axis, so
surface integrals reduce to 1-D quadrature in u = cos(theta) after carrying
out the azimuthal average analytically.  Quadrature results are verified by
node doubling; closed forms are used for mass and inertia.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import PhysicalConstants, DEFAULT_CONSTANTS

_MAX_NODES = 1 << 14  # hard cap for node doubling


class QuadratureError(RuntimeError):
    """Surface quadrature failed to converge; carries the last two estimates."""

    def __init__(self, message, previous=None, latest=None):
        super().__init__(message)
        self.previous = previous
        self.latest = latest


# ---------------------------------------------------------------------------
# particle specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Sphere:
    b: float  # radius, m
    material: str = "diamond"

    def __post_init__(self):
        if self.b <= 0.0:
            raise ValueError("sphere radius must be positive")


@dataclass(frozen=True)
class ProlateEllipsoid:
    """Spheroid elongated along its symmetry (Z) axis: semi-axes (b, b, a), a >= b."""

    a: float  # long semi-axis along Z, m
    b: float  # transverse semi-axis, m
    material: str = "diamond"

    def __post_init__(self):
        if self.b <= 0.0 or self.a < self.b:
            raise ValueError("prolate ellipsoid requires a >= b > 0")
        if not math.isfinite(self.a / self.b):
            raise ValueError("aspect ratio must be finite")


@dataclass(frozen=True)
class OblateEllipsoid:
    """Spheroid flattened along its symmetry (Z) axis: semi-axes (a, a, b), a >= b."""

    a: float  # equatorial semi-axis, m
    b: float  # polar semi-axis along Z, m
    material: str = "diamond"

    def __post_init__(self):
        if self.b <= 0.0 or self.a < self.b:
            raise ValueError("oblate ellipsoid requires a >= b > 0")
        if not math.isfinite(self.a / self.b):
            raise ValueError("aspect ratio must be finite")


@dataclass(frozen=True)
class Composite:
    """Sphere of radius b concentric with a thin disk (oblate spheroid a, a, c).

    The disk models a pancake the sphere is deposited on; both centers
    coincide so the charge centroid stays on the center of mass.  With
    ``zero_mass_disk`` the disk keeps its surface charge but carries no mass
    or inertia (the thin-disk limiting case).
    """

    b: float  # sphere radius, m
    a: float  # disk radius, m
    c: float  # disk half-thickness, m
    disk_material: str = "silica"
    material: str = "diamond"
    zero_mass_disk: bool = False

    def __post_init__(self):
        if not (0.0 < self.c <= self.b <= self.a):
            raise ValueError("composite requires 0 < c <= b <= a")


ParticleSpec = Sphere | ProlateEllipsoid | OblateEllipsoid | Composite


# ---------------------------------------------------------------------------
# charge models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TotalCharge:
    Q_tot: float  # C, sign preserved

    def __post_init__(self):
        if self.Q_tot == 0.0:
            raise ValueError("total charge must be nonzero")


@dataclass(frozen=True)
class SurfaceDensity:
    sigma: float  # C/m^2, uniform over the whole exposed surface

    def __post_init__(self):
        if self.sigma == 0.0:
            raise ValueError("surface charge density must be nonzero")


ChargeModel = TotalCharge | SurfaceDensity


@dataclass(frozen=True)
class QuadratureSettings:
    nodes: int = 64        # Gauss-Legendre nodes per polar slice
    rel_tol: float = 1e-10

    def __post_init__(self):
        if self.nodes < 16:
            raise ValueError("need at least 16 quadrature nodes")
        if not (0.0 < self.rel_tol <= 1e-3):
            raise ValueError("relative tolerance must lie in (0, 1e-3]")


@dataclass(frozen=True)
class SurfaceMoments:
    """Area and charge-weighted second moments of a uniformly charged surface.

    R_mu2 = (integral of mu^2 dQ)/Q; S_X = R_Z2 - R_Y2 and S_Y = R_Z2 - R_X2
    are the torque leverage factors of the rotational confinement.
    """

    area: float  # m^2
    R_X2: float  # m^2
    R_Y2: float  # m^2
    R_Z2: float  # m^2

    @property
    def S_X(self) -> float:
        return self.R_Z2 - self.R_Y2

    @property
    def S_Y(self) -> float:
        return self.R_Z2 - self.R_X2


@dataclass(frozen=True)
class BodyProperties:
    """Mass, principal inertia (Z the symmetry axis), surface moments, charge."""

    mass: float      # kg
    I_X: float       # kg m^2
    I_Y: float       # kg m^2
    I_Z: float       # kg m^2
    surface: SurfaceMoments
    Q: float         # C
    spec: ParticleSpec = field(repr=False, default=None)


# ---------------------------------------------------------------------------
# quadrature over surfaces of revolution
# ---------------------------------------------------------------------------

def _spheroid_slices(p: float, s: float, u: np.ndarray):
    """Integrand factors for a spheroid with transverse semi-axis p and polar s.

    Returns (dA/du / (2*pi), <x^2>_phi, z^2) sampled at u = cos(theta).
    """
    line = p * np.sqrt(p * p * u * u + s * s * (1.0 - u * u))
    x2 = 0.5 * p * p * (1.0 - u * u)
    z2 = s * s * u * u
    return line, x2, z2


def _spheroid_moments(p: float, s: float, n: int):
    """(area, int x^2 dS, int z^2 dS) by n-node Gauss-Legendre in cos(theta)."""
    u, w = np.polynomial.legendre.leggauss(n)
    line, x2, z2 = _spheroid_slices(p, s, u)
    dA = 2.0 * np.pi * line * w
    area, ix2, iz2 = float(dA.sum()), float((x2 * dA).sum()), float((z2 * dA).sum())
    if p == s:
        # spherical piece: x^2+y^2+z^2 = p^2 on the surface, so the three
        # second moments are equal; enforcing it here keeps S_mu exactly zero
        ix2 = iz2 = (2.0 * ix2 + iz2) / 3.0
    return area, ix2, iz2


def _surface_pieces(spec: ParticleSpec):
    """(transverse, polar) semi-axis pairs of the spheroids making up the surface."""
    if isinstance(spec, Sphere):
        return [(spec.b, spec.b)]
    if isinstance(spec, ProlateEllipsoid):
        return [(spec.b, spec.a)]
    if isinstance(spec, OblateEllipsoid):
        return [(spec.a, spec.b)]
    if isinstance(spec, Composite):
        # union of the sphere surface and the disk surface; the small overlap
        # region is not subtracted (thin-disk model, centers coincident)
        return [(spec.b, spec.b), (spec.a, spec.c)]
    raise TypeError(f"unsupported particle spec {type(spec).__name__}")


def surface_moments(spec: ParticleSpec, quad: QuadratureSettings = QuadratureSettings()) -> SurfaceMoments:
    """Area and R_mu^2 of the uniformly charged surface, by converged quadrature.

    Node count is doubled until area and both second moments agree to the
    requested relative tolerance between successive levels.
    """
    pieces = _surface_pieces(spec)

    def totals(n):
        vals = np.zeros(3)
        for p, s in pieces:
            vals += _spheroid_moments(p, s, n)
        return vals

    n = quad.nodes
    prev = totals(n)
    while True:
        n *= 2
        cur = totals(n)
        scale = np.maximum(np.abs(cur), np.abs(prev))
        err = np.abs(cur - prev)
        if np.all(err <= quad.rel_tol * np.maximum(scale, 1e-300)):
            break
        if n > _MAX_NODES:
            raise QuadratureError(
                f"surface quadrature did not converge below rel_tol={quad.rel_tol:g} "
                f"within {_MAX_NODES} nodes", previous=prev, latest=cur)
        prev = cur

    area, ix2, iz2 = cur
    return SurfaceMoments(area=area, R_X2=ix2 / area, R_Y2=ix2 / area, R_Z2=iz2 / area)


# ---------------------------------------------------------------------------
# mass and inertia (closed forms)
# ---------------------------------------------------------------------------

def _solid_ellipsoid(rho: float, A: float, B: float, C: float):
    """Mass and principal inertia of a solid ellipsoid with semi-axes (A, B, C)."""
    m = rho * (4.0 / 3.0) * np.pi * A * B * C
    I_X = m * (B * B + C * C) / 5.0
    I_Y = m * (A * A + C * C) / 5.0
    I_Z = m * (A * A + B * B) / 5.0
    return m, I_X, I_Y, I_Z


def inertia_and_mass(spec: ParticleSpec, constants: PhysicalConstants = DEFAULT_CONSTANTS):
    """(mass, I_X, I_Y, I_Z) in SI for the given shape."""
    if isinstance(spec, Sphere):
        rho = constants.density(spec.material)
        return _solid_ellipsoid(rho, spec.b, spec.b, spec.b)
    if isinstance(spec, ProlateEllipsoid):
        rho = constants.density(spec.material)
        return _solid_ellipsoid(rho, spec.b, spec.b, spec.a)
    if isinstance(spec, OblateEllipsoid):
        rho = constants.density(spec.material)
        return _solid_ellipsoid(rho, spec.a, spec.a, spec.b)
    if isinstance(spec, Composite):
        m_s, sx, sy, sz = _solid_ellipsoid(constants.density(spec.material),
                                           spec.b, spec.b, spec.b)
        if spec.zero_mass_disk:
            return m_s, sx, sy, sz
        m_d, dx, dy, dz = _solid_ellipsoid(constants.density(spec.disk_material),
                                           spec.a, spec.a, spec.c)
        return m_s + m_d, sx + dx, sy + dy, sz + dz
    raise TypeError(f"unsupported particle spec {type(spec).__name__}")


def build_body(spec: ParticleSpec, charge: ChargeModel,
               quad: QuadratureSettings = QuadratureSettings(),
               constants: PhysicalConstants = DEFAULT_CONSTANTS) -> BodyProperties:
    """Assemble the full body record used by the trap and coupling layers."""
    moments = surface_moments(spec, quad)
    mass, I_X, I_Y, I_Z = inertia_and_mass(spec, constants)
    if isinstance(charge, TotalCharge):
        Q = charge.Q_tot
    else:
        Q = charge.sigma * moments.area
    return BodyProperties(mass=mass, I_X=I_X, I_Y=I_Y, I_Z=I_Z,
                          surface=moments, Q=Q, spec=spec)


# closed-form spheroid areas, used as quadrature cross-checks

def prolate_spheroid_area(a: float, b: float) -> float:
    if a == b:
        return 4.0 * np.pi * b * b
    e = math.sqrt(1.0 - (b / a) ** 2)
    return 2.0 * np.pi * b * b * (1.0 + (a / (b * e)) * math.asin(e))


def oblate_spheroid_area(a: float, b: float) -> float:
    if a == b:
        return 4.0 * np.pi * b * b
    e = math.sqrt(1.0 - (b / a) ** 2)
    return 2.0 * np.pi * a * a + np.pi * (b * b / e) * math.log((1.0 + e) / (1.0 - e))
