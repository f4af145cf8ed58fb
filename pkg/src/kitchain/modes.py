"""Momentum-space ground-state structure of the alternating-bond Kitaev chain.

The chain couples odd bonds through sigma^x sigma^x with strength ``jx`` and
even bonds through sigma^y sigma^y with strength ``jy``, in a uniform
transverse field ``h``, with periodic boundaries.  After fermionization the
ground-state problem decouples into independent four-state momentum blocks
labelled by

    q = pi (2m - 1) / N,    m = 1 .. N/4,

all lying in (0, pi/2).  This module provides the per-block data: the bond
dispersion ``eps_q`` and mixing angle ``theta_q``, the four quasimode
energies, the ground-state amplitudes of each block, and the total ground
energy.

Conventions
-----------
* ``eps_q * exp(-i theta_q) = (jx e^{-iq} + jy e^{iq}) / 2``, i.e.
  ``eps cos(theta) = (jx+jy) cos(q) / 2`` and
  ``eps sin(theta) = (jx-jy) sin(q) / 2``.  With jx > 0, jy >= 0 and
  q in (0, pi/2) this pins theta to (-pi/2, pi/2) and keeps eps > 0.
* All quantities are even in h; they are computed from |h|.
* The jx = 0 line is rejected: jx sets the energy unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "ModeEnergies",
    "ModeAmplitudes",
    "momentum_grid",
    "dispersion",
    "mode_energies",
    "amplitudes",
    "ground_energy",
]


@dataclass(frozen=True)
class ModelParams:
    """Chain parameters.  ``jx > 0`` sets the energy unit; ``r = jy/jx``."""

    jx: float = 1.0
    jy: float = 1.0
    h: float = 0.0
    n_sites: int = 100

    def __post_init__(self):
        if not (math.isfinite(self.jx) and self.jx > 0.0):
            raise ValueError(f"jx must be positive and finite, got {self.jx}")
        if not (math.isfinite(self.jy) and self.jy >= 0.0):
            raise ValueError(f"jy must be nonnegative and finite, got {self.jy}")
        if not math.isfinite(self.h):
            raise ValueError(f"h must be finite, got {self.h}")
        if int(self.n_sites) != self.n_sites or self.n_sites < 1:
            raise ValueError(f"n_sites must be a positive integer, got {self.n_sites}")

    @property
    def r(self) -> float:
        return self.jy / self.jx

    @classmethod
    def from_ratio(cls, r: float, h: float = 0.0, n_sites: int = 100,
                   jx: float = 1.0) -> "ModelParams":
        """Build parameters from the bond ratio r = jy/jx."""
        return cls(jx=jx, jy=r * jx, h=h, n_sites=n_sites)


@dataclass(frozen=True)
class ModeEnergies:
    """The four quasimode energies of one momentum block.

    ``lambda_{s1,s2} = s1*eps + s2*sqrt(h^2 + eps^2)``; for h >= 0 they are
    ordered ``lambda_mm <= lambda_pm <= lambda_mp <= lambda_pp`` and the
    block's ground state fills the two negative ones.
    """

    lambda_mm: float
    lambda_pm: float
    lambda_mp: float
    lambda_pp: float


@dataclass(frozen=True)
class ModeAmplitudes:
    """Ground-state amplitudes of one momentum block.

    The block ground state lives in the six-dimensional even-occupancy space
    and reads, in the ordered occupation basis
    ``{|1001>, |1111>, |1100>, |0000>, |0011>, |0110>}``,

        (alpha, beta, gamma, 1 - beta, -gamma, alpha).

    ``h1 = h / lambda_mm`` and ``h2 = h / lambda_pm``; h2 diverges as h -> 0
    and is stored as ``-inf`` exactly at h = 0 (its directional limit).  The
    amplitudes themselves are evaluated in cancellation-free form,

        alpha = -i eps sin(theta) / (2 s),   gamma = -eps cos(theta) / (2 s),
        beta  = (1 - h/s) / 2,               s = sqrt(h^2 + eps^2),

    which is algebraically identical for h != 0 and continuous at h = 0,
    where it reduces to ``(-i sin(theta)/2, 1/2, -cos(theta)/2)``.
    """

    q: float
    eps: float
    theta: float
    h1: float
    h2: float
    alpha: complex
    beta: float
    gamma: float
    one_minus_beta: float

    def basis_amplitudes(self) -> np.ndarray:
        """The six ordered amplitudes as a complex vector."""
        return np.array(
            [self.alpha, self.beta, self.gamma,
             self.one_minus_beta, -self.gamma, self.alpha],
            dtype=complex,
        )

    def probabilities(self) -> np.ndarray:
        """|amplitude|^2 over the six basis states; sums to 1."""
        a = self.basis_amplitudes()
        return (a * a.conj()).real

    def norm_sq(self) -> float:
        return float(self.probabilities().sum())


def momentum_grid(params: ModelParams) -> np.ndarray:
    """Allowed momenta q = pi(2m-1)/N, m = 1..N/4, strictly inside (0, pi/2).

    The analytic path needs N divisible by 4 so that the blocks tile the
    Brillouin zone exactly.
    """
    n = params.n_sites
    if n % 4 != 0:
        raise ValueError(f"analytic path requires n_sites divisible by 4, got {n}")
    m = np.arange(1, n // 4 + 1)
    return np.pi * (2 * m - 1) / n


def dispersion(params: ModelParams, q):
    """Bond dispersion (eps_q, theta_q); accepts scalar or array q.

    Returns
    -------
    eps : |(jx e^{-iq} + jy e^{iq})| / 2, strictly positive on the grid.
    theta : atan2((jx - jy) sin q, (jx + jy) cos q).
    """
    q = np.asarray(q, dtype=float)
    re = 0.5 * (params.jx + params.jy) * np.cos(q)
    im = 0.5 * (params.jx - params.jy) * np.sin(q)
    return np.hypot(re, im), np.arctan2(im, re)


def mode_energies(params: ModelParams, q: float) -> ModeEnergies:
    """Quasimode energies of the block at momentum q (even in h)."""
    eps, _ = dispersion(params, q)
    eps = float(eps)
    band = math.hypot(params.h, eps)
    return ModeEnergies(
        lambda_mm=-eps - band,
        lambda_pm=eps - band,
        lambda_mp=-eps + band,
        lambda_pp=eps + band,
    )


def _amplitude_arrays(params: ModelParams, q):
    """Vectorized (alpha, beta, gamma, 1-beta) over an array of momenta.

    Single source for the scalar `amplitudes` wrapper and the sweep-layer
    consumers; uses the cancellation-free closed forms.
    """
    eps, theta = dispersion(params, q)
    h = abs(params.h)
    band = np.hypot(h, eps)
    alpha = -1j * eps * np.sin(theta) / (2.0 * band)
    gamma = -eps * np.cos(theta) / (2.0 * band)
    beta = 0.5 * (1.0 - h / band)
    one_minus_beta = 0.5 * (1.0 + h / band)
    return alpha, beta, gamma, one_minus_beta


def amplitudes(params: ModelParams, q: float) -> ModeAmplitudes:
    """Ground-state amplitudes of the block at momentum q.

    Normalization 2|alpha|^2 + |beta|^2 + 2|gamma|^2 + |1-beta|^2 = 1 holds
    to machine precision for every parameter point; h enters through |h|.
    """
    eps, theta = dispersion(params, q)
    eps, theta = float(eps), float(theta)
    h = abs(params.h)
    band = math.hypot(h, eps)
    alpha, beta, gamma, one_minus_beta = _amplitude_arrays(params, q)
    h1 = -h / (eps + band)
    # h2 = h / lambda_pm; lambda_pm = eps - band = -h^2/(eps + band), so the
    # cancellation-free form is -(eps + band)/h, with limit -inf as h -> 0.
    h2 = -(eps + band) / h if h > 0.0 else -math.inf
    return ModeAmplitudes(
        q=float(q), eps=eps, theta=theta, h1=h1, h2=h2,
        alpha=complex(alpha), beta=float(beta), gamma=float(gamma),
        one_minus_beta=float(one_minus_beta),
    )


def ground_energy(params: ModelParams) -> float:
    """Total ground energy: 2 * sum_q (lambda_mm + lambda_pm) = -4 sum_q s_q."""
    q = momentum_grid(params)
    eps, _ = dispersion(params, q)
    band = np.hypot(abs(params.h), eps)
    return float(-4.0 * np.sum(band))
