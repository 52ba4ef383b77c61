#!/usr/bin/env python3
"""The spin side of the coupling scheme: transverse-field mixing of the
ground-state triplet, microwave dressing, and the phonon resonance condition.

A transverse field B mixes |0> and (|-1>+|+1>)/sqrt(2) into |g> and |e> with
mixing angle theta, leaving |d> = (|-1>-|+1>)/sqrt(2) untouched.  A microwave
on the g-d line dresses those two states with angle psi.  Tuning makes the
|+,N+1> and |e,N> ladders degenerate, which is where phonons exchange with
the spin.
"""

import math

import numpy as np

from levrot.nv_spin import (SpinConfig, MicrowaveConfig, mixed_spectrum,
                            dressed_spectrum, resonance_solve, TWO_PI)

print("mixed triplet vs transverse field:")
print(f"{'B (mT)':>7} {'theta (rad)':>12} {'(w_d-w_g)/2pi (GHz)':>20} "
      f"{'(w_e-w_d)/2pi (MHz)':>20}")
for B in (0.0, 0.01, 0.03, 0.06, 0.1):
    m = mixed_spectrum(SpinConfig(B=B))
    print(f"{B*1e3:7.1f} {m.theta:12.4f} {m.omega_dg/TWO_PI/1e9:20.4f} "
          f"{m.omega_ed/TWO_PI/1e6:20.2f}")

# dressing the g-d transition at 30 mT
m = mixed_spectrum(SpinConfig(B=0.03))
for delta in (-100e6, 0.0, 100e6):
    d = dressed_spectrum(m, MicrowaveConfig(rabi_frequency=500e6, detuning=delta))
    print(f"Delta = {delta/1e6:6.1f} MHz: psi = {d.psi:.4f} rad, "
          f"splitting = {d.splitting/TWO_PI/1e6:.1f} MHz")

# the resonance condition: omega_e' - omega_+ = omega_phi
f_phi = 5e6
for rabi in (250e6, 500e6, 1000e6):
    sol = resonance_solve(SpinConfig(B=0.0), rabi, TWO_PI * f_phi,
                          solve_for="field")
    print(f"Omega_R = {rabi/1e6:6.0f} MHz: resonant field B = "
          f"{sol.B*1e3:6.2f} mT at psi = pi/4")

# away from the resonant field the microwave detuning takes up the slack,
# pushing psi below pi/4 (and the coupling projection down with it)
print("\npsi along the 500 MHz resonance curve:")
for B in (0.032, 0.04, 0.06, 0.09):
    sol = resonance_solve(SpinConfig(B=B), 500e6, TWO_PI * f_phi,
                          solve_for="detuning")
    print(f"  B = {B*1e3:5.1f} mT: Delta = {sol.detuning/TWO_PI/1e6:8.1f} MHz, "
          f"psi = {sol.psi:.4f} rad")
