"""Receive combining at the CPU and per-UE spectral efficiency.

The CPU detects each UE from the superposition of the amplify-and-forward
fronthaul signals. The SINR of a combiner v is a generalized Rayleigh
quotient of the summed effective channel against the interference-plus-
distortion covariance, so the optimal distortion-aware combiner is the
covariance solve against that channel sum. A distortion-unaware variant
computes its combiner pretending perfect hardware but is evaluated under the
true impairments, and a wired-fronthaul benchmark applies MMSE combining on
the stacked AP receive signals directly.
"""

from dataclasses import dataclass

import numpy as np

from . import impairments
from .linalg import solve_hermitian_pd


@dataclass
class CombinerReport:
    """One evaluated combiner: unit-norm vector, SINR, and SE for one UE."""

    v: np.ndarray
    sinr: float
    se: float
    combiner_kind: str  # aware | unaware | centralized
    ue_id: int


def spectral_efficiency(sinr, prelog=1.0):
    """SE in bit/s/Hz: prelog * log2(1 + sinr). Rejects negative SINR."""
    if sinr < 0:
        raise ValueError(f"SINR must be non-negative, got {sinr}")
    return float(prelog * np.log2(1.0 + sinr))


def evaluate_combiner(v, k, eff, r_k, hw, powers, combiner_kind, prelog=1.0):
    """CombinerReport of v for UE k: unit-normalized, with SINR and SE."""
    v = np.asarray(v, dtype=complex)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ValueError("combiner must be nonzero")
    v = v / norm
    sinr = sinr_of_combiner(v, k, eff, r_k, hw, powers)
    return CombinerReport(v=v, sinr=sinr, se=spectral_efficiency(sinr, prelog),
                          combiner_kind=combiner_kind, ue_id=k)


def sinr_of_combiner(v, k, eff, r_k, hw, powers):
    """SINR of an arbitrary combiner v for UE k.

    kappa_frt * kappa_ac * p_k * |v^H sum_l b_{kl}|^2 / (v^H R_k v);
    invariant to rescaling of v.
    """
    v = np.asarray(v, dtype=complex)
    if not np.any(v != 0):
        raise ValueError("combiner must be nonzero")
    p = impairments.validate_powers(powers, eff.b.shape[1])
    signal = (hw.kappa_frt * hw.kappa_ac * p[k]
              * np.abs(v.conj() @ eff.b_sum[k]) ** 2)
    denom = float(np.real(v.conj() @ r_k @ v))
    return float(signal / denom)


def optimal_combiner(k, eff, r_k):
    """SINR-optimal distortion-aware combiner, unit-normalized.

    Direction R_k^{-1} sum_l b_{kl}, computed with a Hermitian-PD solve.
    """
    v = solve_hermitian_pd(r_k, eff.b_sum[k])
    return v / np.linalg.norm(v)


def max_sinr(k, eff, r_k, hw, powers):
    """Largest achievable SINR for UE k over all linear combiners.

    kappa_frt * kappa_ac * p_k * (sum_l b_{kl})^H R_k^{-1} (sum_l b_{kl}).
    """
    p = impairments.validate_powers(powers, eff.b.shape[1])
    b = eff.b_sum[k]
    return float(hw.kappa_frt * hw.kappa_ac * p[k]
                 * np.real(b.conj() @ solve_hermitian_pd(r_k, b)))


def distortion_unaware_combiner(k, eff, precoders, fronthaul, sigma2, powers):
    """Combiner computed as if both hardware chains were distortion-free.

    Assembles the interference-plus-noise covariance with both quality
    factors at 1 (zero distortion, noise kept) and solves against the summed
    effective channel. Callers evaluate the result under the true hardware
    via sinr_of_combiner.
    """
    P = np.asarray(precoders, dtype=complex)
    L, N = P.shape[0], P.shape[-1]
    perfect = impairments.HardwareProfile(1.0, 1.0, sigma2)
    zero = np.zeros((L, N, N), dtype=complex)
    dist = impairments.DistortionCovariances(d_ac=zero, d_frt=zero)
    r_clean = impairments.cpu_covariance(k, eff, P, fronthaul, dist, perfect, powers)
    return optimal_combiner(k, eff, r_clean)


def sinr_term_breakdown(v, k, eff, precoders, fronthaul, dist, hw, powers,
                        coherent_interference=False):
    """Named numerator/denominator contributions of the SINR of v for UE k.

    Returns a dict with 'signal', 'interference', 'access_distortion',
    'fronthaul_distortion', and 'noise'; the four denominator terms sum to
    v^H R_k v. Computed term by term, independently of the covariance
    assembly, for cross-validation.
    """
    v = np.asarray(v, dtype=complex)
    p = impairments.validate_powers(powers, eff.b.shape[1])
    G = np.asarray(fronthaul, dtype=complex)
    P = np.asarray(precoders, dtype=complex)
    kk = hw.kappa_frt * hw.kappa_ac

    signal = kk * p[k] * np.abs(v.conj() @ eff.b_sum[k]) ** 2
    if coherent_interference:
        cross = eff.b_sum @ v.conj()                     # (K,)
        per_ue = np.abs(cross) ** 2
    else:
        cross = np.einsum("lkm,m->lk", eff.b, v.conj())  # (L, K)
        per_ue = np.sum(np.abs(cross) ** 2, axis=0)
    mask = np.ones(len(p), dtype=bool)
    mask[k] = False
    interference = kk * float(np.sum(p[mask] * per_ue[mask]))

    gp_v = np.einsum("lmn,m->ln", (G @ P).conj(), v)  # (L, N), (G_l P_l)^H v
    n_eye = hw.sigma2 * np.eye(P.shape[-1])
    access = hw.kappa_frt * float(np.real(
        np.einsum("ln,lno,lo->", gp_v.conj(), dist.d_ac + n_eye, gp_v)))
    g_v = np.einsum("lmn,m->ln", G.conj(), v)         # (L, N), G_l^H v
    fronthaul_term = float(np.real(
        np.einsum("ln,lno,lo->", g_v.conj(), dist.d_frt, g_v)))
    noise = hw.sigma2 * float(np.linalg.norm(v) ** 2)
    return {
        "signal": float(signal),
        "interference": interference,
        "access_distortion": access,
        "fronthaul_distortion": fronthaul_term,
        "noise": noise,
    }


def stack_access_channels(access):
    """Stack per-AP access channels into (K, L*N) collective channels."""
    h = np.asarray(access, dtype=complex)
    L, K, N = h.shape
    return np.transpose(h, (1, 0, 2)).reshape(K, L * N)


def centralized_benchmark_sinr(k, access, powers, sigma2):
    """Uplink SINR of ideal centralized MMSE combining with wired fronthaul.

    Works on the stacked channel h_k of length L*N with perfect hardware:
    p_k h_k^H (sum_{i != k} p_i h_i h_i^H + sigma2 I)^{-1} h_k.
    """
    h = stack_access_channels(access)
    K, LN = h.shape
    if not 0 <= k < K:
        raise ValueError(f"UE index {k} out of range [0, {K})")
    p = impairments.validate_powers(powers, K)
    mask = np.ones(K, dtype=bool)
    mask[k] = False
    others = h[mask]
    cov = (np.einsum("k,km,kn->mn", p[mask], others, others.conj())
           + sigma2 * np.eye(LN))
    return float(p[k] * np.real(h[k].conj() @ solve_hermitian_pd(cov, h[k])))
