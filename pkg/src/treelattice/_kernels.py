"""Hot inner loops, compiled with numba when available.

Set ``TREELATTICE_NO_NUMBA=1`` to force the pure-numpy implementations (used by
the benchmark and by the test-suite to check that both paths agree).
"""

from __future__ import annotations

import os

import numpy as np

PAD = -1

_DISABLED = os.environ.get("TREELATTICE_NO_NUMBA", "").strip().lower() not in ("", "0", "false")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func
        if len(args) == 1 and callable(args[0]):
            return args[0]
        return decorator


def pack_paths(paths, width: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Pad dart paths into an ``int64`` matrix plus a length vector."""
    lengths = np.array([len(p) for p in paths], dtype=np.int64)
    if width is None:
        width = int(lengths.max()) if len(paths) else 0
    out = np.full((len(paths), max(width, 1)), PAD, dtype=np.int64)
    for i, p in enumerate(paths):
        k = min(len(p), width)
        out[i, :k] = p[:k]
    return out, lengths


# -- Busemann grid: delta = 2 * lcp(cycle, ray) - len(cycle) -----------------

def _busemann_grid_numpy(cycles, cycle_len, rays, chunk=256):
    n_c, n_r = cycles.shape[0], rays.shape[0]
    width = cycles.shape[1]
    out = np.empty((n_c, n_r), dtype=np.int64)
    ray_part = rays[:, :width]
    for start in range(0, n_c, chunk):
        block = cycles[start:start + chunk]
        eq = block[:, None, :] == ray_part[None, :, :]
        eq &= block[:, None, :] != PAD
        lcp = np.cumprod(eq, axis=2).sum(axis=2)
        out[start:start + chunk] = 2 * lcp - cycle_len[start:start + chunk, None]
    return out


@njit(cache=True)
def _busemann_grid_numba(cycles, cycle_len, rays):
    n_c, n_r = cycles.shape[0], rays.shape[0]
    out = np.empty((n_c, n_r), dtype=np.int64)
    for i in range(n_c):
        m = cycle_len[i]
        for j in range(n_r):
            k = 0
            while k < m and cycles[i, k] == rays[j, k]:
                k += 1
            out[i, j] = 2 * k - m
    return out


def busemann_grid(cycles: np.ndarray, cycle_len: np.ndarray, rays: np.ndarray,
                  use_numba: bool | None = None) -> np.ndarray:
    """Busemann values for every (cycle, ray) pair.

    ``cycles[i]`` is the projected geodesic ``[O, g_i O]`` and ``rays[j]`` the
    first darts of ``[O, omega_j)``; rays must be longer than every cycle.
    """
    if rays.shape[1] <= int(cycle_len.max(initial=0)):
        raise ValueError("ray truncation must exceed the longest cycle")
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba and HAVE_NUMBA:
        return _busemann_grid_numba(cycles, cycle_len, rays)
    return _busemann_grid_numpy(cycles, cycle_len, rays)


# -- non-backtracking walk counts ---------------------------------------------

def nonbacktracking_matrix(origin: np.ndarray) -> np.ndarray:
    """Boolean dart transition matrix: ``B[d, e]`` iff ``t(d) = o(e)`` and ``e != d^1``."""
    n = origin.shape[0]
    term = origin[np.arange(n) ^ 1]
    b = term[:, None] == origin[None, :]
    b[np.arange(n), np.arange(n) ^ 1] = False
    return b


def _layers_numpy(b, start, steps):
    out = np.zeros((steps + 1, b.shape[0]), dtype=np.bool_)
    out[0] = start
    bi = b.astype(np.int64)
    for k in range(steps):
        out[k + 1] = (out[k].astype(np.int64) @ bi) > 0
    return out


@njit(cache=True)
def _layers_numba(b, start, steps):
    n = b.shape[0]
    out = np.zeros((steps + 1, n), dtype=np.bool_)
    out[0] = start
    for k in range(steps):
        for d in range(n):
            if out[k, d]:
                for e in range(n):
                    if b[d, e]:
                        out[k + 1, e] = True
    return out


def reachable_layers(b: np.ndarray, start: np.ndarray, steps: int,
                     use_numba: bool | None = None) -> np.ndarray:
    """``out[k, e]`` iff some non-backtracking walk from a start dart reaches
    dart ``e`` after ``k`` further steps."""
    if use_numba is None:
        use_numba = HAVE_NUMBA
    start = np.ascontiguousarray(start, dtype=np.bool_)
    if use_numba and HAVE_NUMBA:
        return _layers_numba(np.ascontiguousarray(b), start, steps)
    return _layers_numpy(b, start, steps)
