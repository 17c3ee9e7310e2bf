"""helmop: learned boundary-to-interior solution operators for the 2D
interior Dirichlet Helmholtz problem with complex wavenumber.

The solver fits a Tikhonov-regularized linear map from Dirichlet boundary
samples to the field at arbitrary interior points over a hypothesis space of
exact Helmholtz solutions: a boundary-normalized Bessel basis (robust in
dissipative media), a fundamental-solution source ring (baseline), and
multi-center Bessel unions for non-star-shaped domains.
"""

from ._kernels import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
