"""Binary Hamiltonian forms over maximal orders of definite quaternion algebras.

Exact order and lattice arithmetic, Dieudonne determinants and hyperbolic
5-space isometries, reduction theory over the Hurwitz order, and closed-form
covolume and counting constants.
"""
from .errors import HamformsError
from .quat_algebra import AlgebraDescriptor, Quaternion, make_algebra

__version__ = "0.1.0"

__all__ = ["AlgebraDescriptor", "HamformsError", "Quaternion", "make_algebra", "__version__"]
