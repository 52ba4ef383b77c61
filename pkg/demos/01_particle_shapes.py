#!/usr/bin/env python3
"""Walk through the particle geometry layer: surface-charge moments, mass and
inertia for spheres, spheroids and sphere-on-disk composites.

The quantity that matters for rotational trapping is the leverage factor
S_Y = R_Z^2 - R_X^2 of the charged surface, together with the moment of
inertia I_y that resists the torque.
"""

import numpy as np

from levrot.constants import DEFAULT_CONSTANTS
from levrot.geometry import (Sphere, ProlateEllipsoid, OblateEllipsoid, Composite,
                             SurfaceDensity, build_body, surface_moments)

b = 20e-9           # minimum radius, m
aspect = 2.5
sigma = 1e-6        # C/m^2, uniform surface charge density

shapes = {
    "sphere": Sphere(b),
    "prolate": ProlateEllipsoid(a=aspect * b, b=b),
    "oblate": OblateEllipsoid(a=aspect * b, b=b),
    "composite c/b=1/8": Composite(b=b, a=aspect * b, c=b / 8),
    "zero-mass disk": Composite(b=b, a=aspect * b, c=b / 8, zero_mass_disk=True),
}

print(f"b = {b*1e9:.0f} nm, a/b = {aspect}, uniform sigma = {sigma} C/m^2")
print(f"{'shape':>18} {'area/b^2':>9} {'S_Y/b^2':>9} {'m (kg)':>11} "
      f"{'I_y (kg m^2)':>13} {'Q (e)':>7}")
for name, spec in shapes.items():
    body = build_body(spec, SurfaceDensity(sigma))
    print(f"{name:>18} {body.surface.area/b**2:9.3f} "
          f"{body.surface.S_Y/b**2:9.4f} {body.mass:11.3e} "
          f"{body.I_Y:13.3e} {body.Q/DEFAULT_CONSTANTS.elementary_charge:7.1f}")

# the sphere has no leverage at all: every surface moment is the same
m = surface_moments(Sphere(b))
print(f"\nsphere check: R_X^2 = R_Z^2 = b^2/3 -> {m.R_X2/b**2:.12f}")

# leverage grows with asymmetry, and vanishes continuously at aspect ratio 1
print("\nleverage |S_Y|/b^2 vs aspect ratio (prolate):")
for ab in (1.001, 1.1, 1.5, 2.0, 2.5, 4.0):
    s = surface_moments(ProlateEllipsoid(a=ab * b, b=b)).S_Y
    print(f"  a/b = {ab:5.3f}: {abs(s)/b**2:8.5f}")

# the composite keeps the sphere's inertia scale while the disk multiplies
# the charged area; the zero-mass-disk row is the ultimate limit
sphere = build_body(Sphere(b), SurfaceDensity(sigma))
limit = build_body(Composite(b=b, a=aspect * b, c=b / 8, zero_mass_disk=True),
                   SurfaceDensity(sigma))
print(f"\nzero-mass disk: I_y identical to bare sphere: "
      f"{limit.I_Y == sphere.I_Y}, |S_Y| = {abs(limit.surface.S_Y)/b**2:.4f} b^2")
