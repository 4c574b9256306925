"""Backend selection for the tensor-permutation kernels.

The Cython extension ``combforge._kernels`` is used when it was built;
otherwise, or when ``COMBFORGE_PURE_PYTHON=1`` is set, the numpy fallback in
``combforge._kernels_py`` is used.  ``BACKEND`` names the active choice.
"""
import os

import numpy as np

from . import _kernels_py

try:
    if os.environ.get("COMBFORGE_PURE_PYTHON", "") == "1":
        raise ImportError("pure python backend forced")
    from . import _kernels as _native
except ImportError:
    _native = None

BACKEND = "cython" if _native is not None else "python"
_impl = _native if _native is not None else _kernels_py


def perm_index_map(images, d):
    """Index map of the factor permutation ``slot j -> images[j]`` (0-based).

    Entry ``x`` of the result is the computational-basis index that basis
    vector ``x`` of ``(C^d)^{\\otimes m}`` is sent to.
    """
    return _impl.perm_index_map(np.ascontiguousarray(images, dtype=np.int64), int(d))


def perm_sum(maps, coeffs, dim):
    """Dense ``sum_p coeffs[p] * P_p`` for permutation matrices given by index maps."""
    maps = np.ascontiguousarray(maps, dtype=np.int64)
    coeffs = np.asarray(coeffs)
    if np.iscomplexobj(coeffs):
        coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    else:
        coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    return _impl.perm_sum(maps, coeffs, int(dim))
