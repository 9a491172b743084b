"""Small shared helpers for array normalization in typed containers."""
import numpy as np

from .errors import InvalidDimensionError


def _as_complex(a, shape, name: str) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    if arr.shape != shape:
        raise InvalidDimensionError(f"{name} must have shape {shape}, got {arr.shape}")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr
