import numpy as np


def as_array(x):
    """Return ``(array, was_scalar)`` for a float-like or array-like input."""
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def finish(out, scalar):
    out = np.asarray(out, dtype=float)
    return float(out) if scalar else out


def log1mexp(a):
    """log(1 - exp(a)) for a <= 0, accurate across the whole range."""
    a = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > -np.log(2.0), np.log(-np.expm1(a)), np.log1p(-np.exp(a)))
