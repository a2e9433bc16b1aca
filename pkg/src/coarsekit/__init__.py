"""coarsekit: exact glueings of finite spaces, coarse structures on graphs
and groups, Floyd boundaries, and hyperbolic ray accessibility checks."""

from .kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
