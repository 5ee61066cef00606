"""Level-set surfaces of a desingularized quadric family in the 3-sphere, with topology tools.

Modules
-------
s3geom     points, charts and distances on S^3
family     the defining functions, cut-offs, zero profiles and model critical points
trigpoly   trigonometric polynomials, zero orders and zero sums
marching   marching tetrahedra on a global lattice of S^3
mesh       TriSurface, extraction, genus, boundary capping, flat and slit tori
homology   Z/2 homology, systoles, bypasses and independent short loops
surgery    neck pinches, shrinks, pinch-off logs and ball combinatorics
links      loops in S^3, linking numbers and Hopf loops
sweep      parameter sweeps and the width anchor
"""

from .errors import SweepoutError
from .family import CENTRAL, GREAT_SPHERE, CutoffConfig, DiskParam, ProjParam
from .mesh import GridSpec, TriSurface, area, extract, extract_phi5, genus, punctate_genus

__version__ = "0.1.0"

__all__ = ["SweepoutError", "CENTRAL", "GREAT_SPHERE", "CutoffConfig", "DiskParam", "ProjParam", "GridSpec",
           "TriSurface", "area", "extract", "extract_phi5", "genus", "punctate_genus", "__version__"]
