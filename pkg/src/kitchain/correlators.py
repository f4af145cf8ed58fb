"""Two-site reduced density matrices of the chain ground state.

Translation by two sites leaves two inequivalent nearest-neighbour pairs: an
odd pair sitting on an x-x bond, e.g. (1,2), and an even pair on a y-y bond,
e.g. (2,3).  In the sigma^z product basis {|00>, |01>, |10>, |11>} both
reduced density matrices take an X shape,

        [ u    0    0    x ]
        [ 0    w1   y    0 ]
        [ 0    y*   w2   0 ]
        [ x*   0    0    v ]

with y = 0 and w1 = w2 for this model.  The diagonal follows from the site
occupation n1 and the pair occupation <n1 n2>; the latter factorizes exactly
as n1^2 + |x|^2 because the state is Gaussian in the fermion representation
and y vanishes (certified against the exact-diagonalization oracle rather
than assumed).

The off-diagonal element is kept complex with an asserted-real value; note
that the even-parity closed form used here is the *negative* of the raw
spin-basis matrix element <00|rho_23|11> (a fixed sign convention inherited
from the fermionic route; only |x| enters any measure).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .modes import ModelParams, dispersion, momentum_grid

__all__ = [
    "XState",
    "occupation",
    "offdiag",
    "pair_diag",
    "rho_single",
    "rho_pair",
]

_BOUNDARY_SLACK = 1e-12


def _clamp_unit(value: float, name: str, slack: float = _BOUNDARY_SLACK) -> float:
    """Clamp to [0, 1] only within `slack` of a boundary; larger violations raise."""
    if -slack <= value < 0.0:
        return 0.0
    if 1.0 < value <= 1.0 + slack:
        return 1.0
    if value < 0.0 or value > 1.0:
        raise ValueError(f"{name} = {value!r} lies outside [0, 1] beyond numerical slack")
    return value


@dataclass(frozen=True)
class XState:
    """X-shaped two-qubit density matrix data.

    Invariants (checked on construction): unit trace within 1e-12, diagonal
    entries in [0, 1], |x|^2 <= u v and |y|^2 <= w1 w2 within slack.
    """

    u: float
    v: float
    w1: float
    w2: float
    x: complex
    y: complex = 0j
    parity: str = "odd"

    def __post_init__(self):
        if self.parity not in ("odd", "even"):
            raise ValueError(f"parity must be 'odd' or 'even', got {self.parity!r}")
        for name in ("u", "v", "w1", "w2"):
            _clamp_unit(getattr(self, name), name)
        tr = self.u + self.v + self.w1 + self.w2
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"trace {tr!r} differs from 1 beyond 1e-12")
        if abs(self.x) ** 2 > self.u * self.v + _BOUNDARY_SLACK:
            raise ValueError("|x|^2 exceeds u*v: not positive semidefinite")
        if abs(self.y) ** 2 > self.w1 * self.w2 + _BOUNDARY_SLACK:
            raise ValueError("|y|^2 exceeds w1*w2: not positive semidefinite")

    @property
    def w(self) -> float:
        """Common inner diagonal entry; requires w1 = w2 within 1e-12."""
        if abs(self.w1 - self.w2) > 1e-12:
            raise ValueError(f"w1 = {self.w1!r} and w2 = {self.w2!r} differ; no common w")
        return self.w1

    def matrix(self) -> np.ndarray:
        """Dense 4x4 complex matrix in the {|00>, |01>, |10>, |11>} basis."""
        rho = np.zeros((4, 4), dtype=complex)
        rho[0, 0], rho[1, 1], rho[2, 2], rho[3, 3] = self.u, self.w1, self.w2, self.v
        rho[0, 3], rho[3, 0] = self.x, np.conj(self.x)
        rho[1, 2], rho[2, 1] = self.y, np.conj(self.y)
        return rho


def occupation(params: ModelParams) -> float:
    """Site occupation n1 = <(1 + sigma^z)/2>; equals 1/2 at h = 0 exactly."""
    q = momentum_grid(params)
    eps, _ = dispersion(params, q)
    h = abs(params.h)
    band = np.hypot(h, eps)
    n1 = 0.5 - (2.0 / params.n_sites) * float(np.sum(h / band))
    return _clamp_unit(n1, "n1")


def offdiag(params: ModelParams, parity: str) -> complex:
    """Outer off-diagonal element x of the pair density matrix.

    x = -(2/N) sum_q eps cos(q -/+ theta) / sqrt(eps^2 + h^2), with "-" for
    the odd (x-x bond) pair and "+" for the even (y-y bond) pair.  The result
    is real under the adopted conventions; it is stored as complex and the
    imaginary part asserted below 1e-12.
    """
    sign = {"odd": 1.0, "even": -1.0}.get(parity)
    if sign is None:
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    q = momentum_grid(params)
    eps, theta = dispersion(params, q)
    band = np.hypot(abs(params.h), eps)
    x = complex(-(2.0 / params.n_sites) * float(np.sum(eps * np.cos(q - sign * theta) / band)))
    assert abs(x.imag) < 1e-12
    return x


def pair_diag(params: ModelParams, parity: str) -> tuple[float, float, float]:
    """Diagonal (u, v, w) of the pair density matrix.

    <n1 n2> = n1^2 + |x|^2 (exact Wick factorization), v = <n1 n2>,
    w = n1 - <n1 n2>, u = 1 + <n1 n2> - 2 n1.  Values are clamped to [0, 1]
    only within 1e-12 of a boundary; larger violations raise.
    """
    n1 = occupation(params)
    x = offdiag(params, parity)
    nn = n1 * n1 + abs(x) ** 2
    u = _clamp_unit(1.0 + nn - 2.0 * n1, "u")
    v = _clamp_unit(nn, "v")
    w = _clamp_unit(n1 - nn, "w")
    return u, v, w


def rho_single(params: ModelParams) -> np.ndarray:
    """Single-site density matrix diag(1 - n1, n1) in the {|0>, |1>} basis."""
    n1 = occupation(params)
    return np.diag([1.0 - n1, n1])


def rho_pair(params: ModelParams, parity: str) -> XState:
    """X-state of the nearest-neighbour pair with the given parity."""
    u, v, w = pair_diag(params, parity)
    return XState(u=u, v=v, w1=w, w2=w, x=offdiag(params, parity), y=0j, parity=parity)
