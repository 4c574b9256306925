"""Pure numpy versions of the tensor-permutation kernels."""
import numpy as np


def perm_index_map(images, d):
    images = np.asarray(images, dtype=np.int64)
    m = images.shape[0]
    if m == 0:
        return np.zeros(1, dtype=np.int64)
    digits = np.indices((d,) * m).reshape(m, -1)
    place = d ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return place[images] @ digits


def perm_sum(maps, coeffs, dim):
    maps = np.asarray(maps, dtype=np.int64)
    coeffs = np.asarray(coeffs)
    dtype = np.complex128 if np.iscomplexobj(coeffs) else np.float64
    out = np.zeros((dim, dim), dtype=dtype)
    cols = np.arange(dim)
    for row_map, c in zip(maps, coeffs):
        if c != 0:
            out[row_map, cols] += c
    return out
