"""Entanglement and correlation measures on the pair X states.

Everything here is closed-form: the pair concurrence from the X-state
entries, quantum discord from the projective-measurement conditional entropy
(whose minimum over product bases is attained at theta' = pi/2, phi' = 0 for
these states), the single-site-purity global entanglement, and the
multispecies entropy density built from the momentum-block amplitudes.

All entropies are base 2.  Measures that land within 1e-12 below 0 (or above
1) are clamped to the boundary; larger violations raise.

Two deliberately quarantined "paper variant" formulas live at the bottom of
the module (`concurrence_large_n_approx`, `elliptic_concurrence_h0`).  They
disagree with the exact route, are excluded from every validation gate, and
tag their results with an explicit marker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.special import xlogy

from .correlators import XState, occupation, rho_pair
from .modes import ModelParams, _amplitude_arrays, momentum_grid

__all__ = [
    "MeasurementBasis",
    "MeasureRecord",
    "binary_entropy",
    "concurrence_x",
    "wootters",
    "conditional_entropy",
    "conditional_entropy_min",
    "discord",
    "global_entanglement",
    "multispecies_density",
    "measure_point",
    "UNVALIDATED_MARKER",
    "VariantValue",
    "VariantPair",
    "concurrence_large_n_approx",
    "elliptic_concurrence_h0",
]

_LN2 = math.log(2.0)
_CLAMP_SLACK = 1e-12

UNVALIDATED_MARKER = "unvalidated paper formula"


def _clamp_measure(value: float, name: str, upper: float = 1.0) -> float:
    """Snap roundoff-sized boundary violations; raise on anything larger."""
    if -_CLAMP_SLACK <= value < 0.0:
        return 0.0
    if upper < value <= upper + _CLAMP_SLACK:
        return upper
    if value < 0.0 or value > upper:
        raise ValueError(f"{name} = {value!r} outside [0, {upper}] beyond numerical slack")
    return value


def _shannon_bits(probs: np.ndarray) -> float:
    """Shannon entropy (bits) of a nonnegative vector; zeros contribute nothing."""
    p = np.asarray(probs, dtype=float)
    return float(-xlogy(p, p).sum() / _LN2)


def binary_entropy(p: float) -> float:
    """H(p) = -p log2 p - (1-p) log2 (1-p), with H(0) = H(1) = 0."""
    p = _clamp_measure(float(p), "binary entropy argument")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p)))


@dataclass(frozen=True)
class MeasurementBasis:
    """Projective basis on the measured qubit, parameterized on the Bloch sphere.

    The kept projector is onto cos(theta_p/2)|0> + e^{i phi_p} sin(theta_p/2)|1>;
    its partner is the same point with theta_p -> theta_p + pi, phi_p -> -phi_p.
    """

    theta_p: float
    phi_p: float


def _require_model_x_state(state: XState) -> float:
    """Return the common w, rejecting states outside the y = 0, w1 = w2 family."""
    if abs(state.y) > 1e-12:
        raise ValueError("closed forms require y = 0")
    return state.w


def concurrence_x(state: XState) -> float:
    """Pair concurrence of the model X state: 2 max(0, |x| - w)."""
    w = _require_model_x_state(state)
    return _clamp_measure(2.0 * max(0.0, abs(state.x) - w), "concurrence")


def wootters(rho: np.ndarray) -> float:
    """Concurrence of an arbitrary two-qubit density matrix.

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of the
    eigenvalues of rho @ (sy x sy) rho* (sy x sy).  The input must be a valid
    density matrix: Hermitian and unit-trace within 1e-10, smallest eigenvalue
    above -1e-10.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
        raise ValueError("matrix is not Hermitian within 1e-10")
    if abs(np.trace(rho).real - 1.0) > 1e-10 or abs(np.trace(rho).imag) > 1e-10:
        raise ValueError("trace differs from 1 beyond 1e-10")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("matrix has an eigenvalue below -1e-10")
    sy = np.array([[0.0, -1j], [1j, 0.0]])
    yy = np.kron(sy, sy)
    prod = rho @ yy @ rho.conj() @ yy
    # abs() guards the sqrt against eigenvalues that are tiny and negative
    # through roundoff; the spectrum of the product is nonnegative in exact
    # arithmetic.
    lam = np.sqrt(np.abs(np.sort(np.linalg.eigvals(prod).real)[::-1]))
    return _clamp_measure(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]), "concurrence")


def _branch_entropy(a: float, d: float, zsq: float) -> tuple[float, float]:
    """(probability, entropy) of one conditional branch with diagonal (a, d)
    and |off-diagonal|^2 = zsq, before normalization."""
    p = a + d
    if p <= 0.0:
        return max(p, 0.0), 0.0
    rad = math.sqrt((a - d) ** 2 + 4.0 * zsq)
    return p, binary_entropy(0.5 * (1.0 + rad / p))


def conditional_entropy(state: XState, basis: MeasurementBasis) -> float:
    """Average entropy of site 1 after measuring site 2 in `basis`.

    The two branch density matrices are, up to normalization by their
    probabilities p0 = u c^2 + v s^2 + w and p1 = u s^2 + v c^2 + w
    (c = cos(theta_p/2), s = sin(theta_p/2)),

        [[u c^2 + w s^2, z*], [z, v s^2 + w c^2]],   z = e^{-i phi_p} x c s,

    and the partner with theta_p -> theta_p + pi, phi_p -> -phi_p.  Only |z|
    enters the branch spectra, so phi_p affects nothing once y = 0.
    """
    w = _require_model_x_state(state)
    u, v = state.u, state.v
    c2 = math.cos(0.5 * basis.theta_p) ** 2
    s2 = math.sin(0.5 * basis.theta_p) ** 2
    zsq = abs(state.x) ** 2 * c2 * s2
    p0, ent0 = _branch_entropy(u * c2 + w * s2, v * s2 + w * c2, zsq)
    p1, ent1 = _branch_entropy(u * s2 + w * c2, v * c2 + w * s2, zsq)
    return p0 * ent0 + p1 * ent1


def conditional_entropy_min(state: XState) -> float:
    """Minimum of the conditional entropy over product measurements.

    For these states the minimizer is theta_p = pi/2, phi_p = 0, giving
    H((1 + sqrt((u-v)^2 + 4|x|^2)) / 2).
    """
    _require_model_x_state(state)
    rad = math.sqrt((state.u - state.v) ** 2 + 4.0 * abs(state.x) ** 2)
    return binary_entropy(0.5 * (1.0 + rad))


def _pair_spectrum(state: XState) -> np.ndarray:
    """Eigenvalues of the model X state: {w, w, (u+v +/- rad)/2}."""
    w = state.w
    rad = math.sqrt((state.u - state.v) ** 2 + 4.0 * abs(state.x) ** 2)
    lam = np.array([w, w, 0.5 * (state.u + state.v + rad), 0.5 * (state.u + state.v - rad)])
    return np.clip(lam, 0.0, None)


def discord(state: XState) -> float:
    """Quantum discord D = min_basis S(1|2) - S(rho_12) + S(rho_1)."""
    s_cond = conditional_entropy_min(state)
    s_pair = _shannon_bits(_pair_spectrum(state))
    s_one = binary_entropy(state.u + state.w)
    return _clamp_measure(s_cond - s_pair + s_one, "discord")


def global_entanglement(n1: float) -> float:
    """Single-site-purity global entanglement 4 n1 (1 - n1); 1 exactly at n1 = 1/2."""
    if not 0.0 <= n1 <= 1.0:
        raise ValueError(f"n1 = {n1!r} outside [0, 1]")
    return _clamp_measure(4.0 * n1 * (1.0 - n1), "global entanglement")


def multispecies_density(params: ModelParams) -> float:
    """Multispecies entanglement density (bits per site).

    Each momentum block contributes the Shannon entropy of its six occupation
    probabilities {|alpha|^2, |beta|^2, |gamma|^2, |1-beta|^2, |gamma|^2,
    |alpha|^2}; the total over the N/4 blocks is divided by N.  Equals 1/2
    exactly at r = 1, h = 0 (each block contributes 2 bits).
    """
    q = momentum_grid(params)
    alpha, beta, gamma, one_minus_beta = _amplitude_arrays(params, q)
    asq = (alpha * alpha.conj()).real
    gsq = gamma * gamma
    probs = np.stack([asq, beta * beta, gsq, one_minus_beta * one_minus_beta, gsq, asq])
    return float(_shannon_bits(probs) / params.n_sites)


@dataclass(frozen=True)
class MeasureRecord:
    """All per-point observables of the sweep layer.

    x entries are stored complex (real-valued under the adopted conventions);
    every field must be finite and the bounded measures live in [0, 1].
    """

    n1: float
    x_odd: complex
    x_even: complex
    c_odd: float
    c_even: float
    d_odd: float
    d_even: float
    e_global: float
    ms_density: float

    def __post_init__(self):
        for name in ("n1", "c_odd", "c_even", "d_odd", "d_even", "e_global", "ms_density"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")
        for name in ("x_odd", "x_even"):
            z = complex(getattr(self, name))
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise ValueError(f"{name} is not finite")
        for name in ("c_odd", "c_even", "e_global"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} = {val!r} outside [0, 1]")


def measure_point(params: ModelParams) -> MeasureRecord:
    """Evaluate every analytic measure at one parameter point."""
    odd = rho_pair(params, "odd")
    even = rho_pair(params, "even")
    n1 = occupation(params)
    return MeasureRecord(
        n1=n1,
        x_odd=odd.x,
        x_even=even.x,
        c_odd=concurrence_x(odd),
        c_even=concurrence_x(even),
        d_odd=discord(odd),
        d_even=discord(even),
        e_global=global_entanglement(n1),
        ms_density=multispecies_density(params),
    )


# --------------------------------------------------------------------------
# Quarantined paper-variant formulas.  Reported for side-by-side comparison
# only; they do not reproduce the exact route and nothing downstream may
# assert against them.
# --------------------------------------------------------------------------


class VariantValue(NamedTuple):
    value: float
    marker: str = UNVALIDATED_MARKER


class VariantPair(NamedTuple):
    c_odd: float
    c_even: float
    marker: str = UNVALIDATED_MARKER


def concurrence_large_n_approx(state: XState) -> VariantValue:
    """Approximate pair concurrence |x|(1 - |x|) + n1(1 - n1) (experimental).

    Uses n1 = v + w of the supplied state.  Kept verbatim from the source
    formalism; visibly disagrees with `concurrence_x` (it is nonzero even for
    separable pairs) and is exposed only through the variant output columns.
    """
    n1 = state.v + state.w
    ax = abs(state.x)
    return VariantValue(ax * (1.0 - ax) + n1 * (1.0 - n1))


def elliptic_concurrence_h0(r: float) -> VariantPair:
    """Zero-field pair concurrences from the elliptic-integral closed form
    (experimental).

    C_odd = 1/4 + f(1 - f) and C_even = 1/4 + g(1 - g) with

        f, g = I0 -/+ (2r/(1+r)) I2,
        I0 = int_0^{pi/2} dq / sqrt(1 - k^2 sin^2 q),
        I2 = int_0^{pi/2} sin^2 q dq / sqrt(1 - k^2 sin^2 q),
        k = 4r / (1 + r)^2,

    evaluated by adaptive quadrature.  The modulus reaches 1 at r = 1 where
    I0 diverges; that point is rejected.
    """
    if r < 0.0:
        raise ValueError(f"r must be nonnegative, got {r}")
    if abs(r - 1.0) < 1e-12:
        raise ValueError("elliptic variant diverges at r = 1 (modulus 1)")
    k = 4.0 * r / (1.0 + r) ** 2
    ksq = k * k

    def kernel(qq: float) -> float:
        return 1.0 / math.sqrt(1.0 - ksq * math.sin(qq) ** 2)

    i0, _ = quad(kernel, 0.0, 0.5 * math.pi)
    i2, _ = quad(lambda qq: math.sin(qq) ** 2 * kernel(qq), 0.0, 0.5 * math.pi)
    f = i0 - (2.0 * r / (1.0 + r)) * i2
    g = i0 + (2.0 * r / (1.0 + r)) * i2
    return VariantPair(0.25 + f * (1.0 - f), 0.25 + g * (1.0 - g))
