"""levrot: rotational optomechanics of charged aspherical nanoparticles in a
Paul trap, with the embedded NV spin dressed into a Jaynes-Cummings coupling
to the librational phonon mode.

Submodules
----------
constants      physical constants and material densities
geometry       shapes, mass, inertia, uniform-surface-charge moments
trap           Mathieu coefficients, secular frequencies, Floquet stability
rotor_dynamics time-domain angle dynamics and spectral frequency extraction
nv_spin        mixed and microwave-dressed NV spin states, resonance solver
coupling       zero-point rotational mode, coupling rates, maps and curves
quantum_sim    truncated spin x Fock models, Lindblad evolution
studio         configuration, report generation and the command-line front end
"""

from . import constants, geometry, trap, rotor_dynamics, nv_spin, coupling, quantum_sim

__version__ = "0.1.0"

__all__ = [
    "constants", "geometry", "trap", "rotor_dynamics", "nv_spin",
    "coupling", "quantum_sim", "__version__",
]
