"""Local distribution of rational points near a fixed point: the projective
line around rational and quadratic targets, lattice zooms, and the toric
surface Y4."""

__version__ = "0.1.0"
