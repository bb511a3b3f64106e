"""Laser-dressed Coulomb potentials, D-scaled ground states and floating-Gaussian SCF."""

from ._kramers import (
    FINE_STRUCTURE,
    KramersError,
    Potential,
    __version__,
    box_effective,
    energy,
    gradient,
    mass_factor,
    minimize,
    scf,
    sweep,
    trajectory,
)


def binding_curve(points, N, hamiltonian="planar"):
    """(alpha0, B.E.) pairs for species N from the output of sweep()."""
    return [(p["alpha0"], p["binding_energy"]) for p in points
            if p["N"] == N and p["hamiltonian"] == hamiltonian]


__all__ = [
    "FINE_STRUCTURE", "KramersError", "Potential", "__version__", "binding_curve", "box_effective",
    "energy", "gradient", "mass_factor", "minimize", "scf", "sweep", "trajectory",
]
