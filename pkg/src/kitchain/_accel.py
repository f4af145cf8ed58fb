"""Hot kernels for the exact-diagonalization path.

The single performance-critical inner loop of the package is the matrix-free
application of the spin Hamiltonian inside the Lanczos solver: for every
basis state, gather the diagonal field term plus one bit-flipped neighbour
per bond.  x-bonds contribute with constant weight jx; y-bonds with +/- jy
depending on whether the two bond bits differ.

Two interchangeable implementations are provided:

* ``matvec_numba`` — a numba ``@njit`` loop over basis states (default when
  numba is importable);
* ``matvec_numpy`` — a vectorized gather over precomputed per-bond index and
  sign tables.

Set ``KITCHAIN_NO_NUMBA=1`` to force the numpy path; ``backend="numba"`` /
``"numpy"`` on the callers overrides per call (used by the benchmark in
``benchmarks/matvec_bench.py``).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba installed
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(fn):
            return fn

        return wrap


def numba_disabled_by_env() -> bool:
    return os.environ.get("KITCHAIN_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")


def default_backend() -> str:
    """'numba' when available and not switched off via KITCHAIN_NO_NUMBA."""
    return "numba" if (HAVE_NUMBA and not numba_disabled_by_env()) else "numpy"


@njit(cache=True)
def _matvec_loop(psi, diag, jx, xmasks, jy, ymasks, ybits1, ybits2, out):
    dim = psi.shape[0]
    for s in range(dim):
        acc = diag[s] * psi[s]
        for k in range(xmasks.shape[0]):
            acc += jx * psi[s ^ xmasks[k]]
        for k in range(ymasks.shape[0]):
            if ((s >> ybits1[k]) & 1) != ((s >> ybits2[k]) & 1):
                acc += jy * psi[s ^ ymasks[k]]
            else:
                acc -= jy * psi[s ^ ymasks[k]]
        out[s] = acc
    return out


def matvec_numba(psi, diag, jx, xmasks, jy, ymasks, ybits1, ybits2, out=None):
    if out is None:
        out = np.empty_like(psi)
    return _matvec_loop(psi, diag, jx, xmasks, jy, ymasks, ybits1, ybits2, out)


def matvec_numpy(psi, diag, jx, xflip_idx, jy, yflip_idx, ysigns, out=None):
    """Vectorized fallback.

    Parameters
    ----------
    xflip_idx : (n_xbonds, dim) int array, row k = arange(dim) ^ mask_k.
    yflip_idx : (n_ybonds, dim) int array of the y-bond flips.
    ysigns : (n_ybonds, dim) float array of +/-1 bond signs.
    """
    if out is None:
        out = np.empty_like(psi)
    np.multiply(diag, psi, out)
    for k in range(xflip_idx.shape[0]):
        out += jx * psi[xflip_idx[k]]
    for k in range(yflip_idx.shape[0]):
        out += jy * (ysigns[k] * psi[yflip_idx[k]])
    return out
