"""Pure-Python kernels used when the compiled extension is unavailable."""
import numpy as np


def _width(x, centers, floors, grading, cap):
    w = cap
    for c, fl in zip(centers, floors):
        v = max(fl, grading * abs(x - c))
        if v < w:
            w = v
    return w


def march_edges(a, b, centers, floors, grading, cap, max_panels):
    centers = [float(c) for c in centers]
    floors = [float(f) for f in floors]
    edges = [a]
    x = a
    while x < b:
        w = _width(x, centers, floors, grading, cap)
        x = b if b - x <= w else x + w
        edges.append(x)
        if len(edges) > max_panels + 1:
            raise OverflowError("panel budget exceeded")
    return np.asarray(edges, dtype=np.float64)


def cauchy_truncated(a, b, n_out):
    full = np.convolve(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))
    out = np.zeros(n_out, dtype=np.complex128)
    k = min(n_out, full.size)
    out[:k] = full[:k]
    return out


def min_plus(f, d, j):
    f = np.asarray(f, dtype=np.float64)
    return np.min(f[None, :] + j * np.asarray(d, dtype=np.float64), axis=1)


def lipschitz_worst(f, d, C, order):
    f = np.asarray(f, dtype=np.float64)
    n = f.size
    if n < 2:
        return -np.inf, 0, 0
    iu, ju = np.triu_indices(n, k=1)
    excess = np.abs(f[iu] - f[ju]) - C * np.asarray(d)[iu, ju] ** order
    k = int(np.argmax(excess))
    return float(excess[k]), int(iu[k]), int(ju[k])
