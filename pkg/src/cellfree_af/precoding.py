"""Per-AP fronthaul precoders and transmit-power scaling.

Each AP forwards its received uplink signal through an N x N precoder
P_l = alpha_l * P_bar_l. The unit-shape matrix P_bar_l is either the
identity (no spatial shaping) or the product of the fronthaul channel's
right singular basis with the access channel's left singular basis, which
aligns the two hops. The scalar alpha_l sets the AP's fronthaul transmit
power to a configured budget.
"""

from dataclasses import dataclass

import numpy as np

SCHEMES = ("identity", "bi_svd")


@dataclass
class PrecoderSet:
    """Scaled fronthaul precoders of every AP for one channel realization."""

    scheme: str
    p_bar: np.ndarray  # (L, N, N) unit-shape matrices
    alpha: np.ndarray  # (L,) positive scales
    p_frt: np.ndarray  # (L,) transmit-power budgets, watts

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown precoder scheme {self.scheme!r}")
        self.alpha = np.asarray(self.alpha, dtype=float)
        self.p_frt = np.asarray(self.p_frt, dtype=float)
        if np.any(self.alpha <= 0):
            raise ValueError("precoder scales must be positive")

    @property
    def matrices(self):
        """Scaled precoders alpha_l * P_bar_l, shape (L, N, N)."""
        return self.alpha[:, None, None] * self.p_bar


def identity_precoder(n_antennas):
    """Unit-shape identity precoder I_N (baseline without spatial shaping)."""
    if n_antennas < 1:
        raise ValueError("antenna count must be >= 1")
    return np.eye(n_antennas, dtype=complex)


def _fix_svd_phases(u, v, n_pairs):
    """Rotate each left singular vector's largest entry to be real-positive.

    The corresponding right singular vector is co-rotated so the product is
    unchanged; this pins the per-column phase ambiguity of the SVD and makes
    the precoder reproducible. Ties between repeated singular values keep
    LAPACK's ordering (numerically sensitive, as any convention here is).
    """
    cols = np.arange(n_pairs)
    anchors = u[np.argmax(np.abs(u[:, :n_pairs]), axis=0), cols]
    phases = anchors / np.abs(anchors)
    u = u.copy()
    v = v.copy()
    u[:, :n_pairs] *= phases.conj()
    v[:, :n_pairs] *= phases.conj()
    return u, v


def bi_svd_precoder(fronthaul, access_matrix):
    """Unit-shape precoder matching the two hops' singular bases.

    With full SVDs G = U_G S_G V_G^H of the (M x N) fronthaul channel and
    H = U_H S_H V_H^H of the (N x K) stacked access channel, returns
    P_bar = V_G U_H^H, a unitary matrix that maps the access channel's left
    singular directions onto the fronthaul channel's right singular
    directions, strongest to strongest.
    """
    G = np.asarray(fronthaul, dtype=complex)
    H = np.asarray(access_matrix, dtype=complex)
    if G.ndim != 2 or H.ndim != 2:
        raise ValueError("expected 2-D channel matrices")
    M, N = G.shape
    if M < N:
        raise ValueError(f"fronthaul channel needs M >= N antennas, got {M} < {N}")
    if H.shape[0] != N:
        raise ValueError(f"access matrix must have {N} rows, got {H.shape[0]}")
    # M >= N, so the thin SVD already carries all N right singular vectors
    # of G; H needs the full left basis when it has fewer than N columns.
    u_g, _, vh_g = np.linalg.svd(G, full_matrices=False)
    _, v_g = _fix_svd_phases(u_g, vh_g.conj().T, N)
    u_h, _, vh_h = np.linalg.svd(H, full_matrices=True)
    u_h, _ = _fix_svd_phases(u_h, vh_h.conj().T, min(N, H.shape[1]))
    return v_g @ u_h.conj().T


def transmit_power(precoder, access_matrix, powers, sigma2):
    """Fronthaul transmit power of one AP applying `precoder`.

    trace(sum_k p_k P h_k h_k^H P^H + sigma2 P P^H), i.e. the power of the
    forwarded uplink signals plus the forwarded receive noise.
    """
    P = np.asarray(precoder, dtype=complex)
    H = np.asarray(access_matrix, dtype=complex)
    p = np.atleast_1d(np.asarray(powers, dtype=float))
    ph = P @ H
    return float(np.sum(p * np.sum(np.abs(ph) ** 2, axis=0))
                 + sigma2 * np.sum(np.abs(P) ** 2))


def power_scaling(p_bar, access_matrix, powers, sigma2, target_power):
    """Scale alpha so that alpha * P_bar radiates exactly `target_power`."""
    if target_power <= 0:
        raise ValueError("target power must be positive")
    base = transmit_power(p_bar, access_matrix, powers, sigma2)
    if base <= 0:
        raise ValueError("unit-shape precoder radiates no power, cannot scale")
    return float(np.sqrt(target_power / base))


def build_precoders(scheme, access, fronthaul, powers, sigma2, p_frt):
    """Scaled precoders of all APs for one channel realization.

    `access` is (L, K, N), `fronthaul` (L, M, N); `p_frt` is one budget in
    watts shared by all APs or a per-AP array of length L.
    """
    h = np.asarray(access, dtype=complex)
    G = np.asarray(fronthaul, dtype=complex)
    L, K, N = h.shape
    budgets = np.broadcast_to(np.asarray(p_frt, dtype=float), (L,)).copy()
    p_bar = np.empty((L, N, N), dtype=complex)
    alpha = np.empty(L)
    for l in range(L):
        access_matrix = h[l].T  # (N, K), one column per UE
        if scheme == "identity":
            p_bar[l] = identity_precoder(N)
        elif scheme == "bi_svd":
            p_bar[l] = bi_svd_precoder(G[l], access_matrix)
        else:
            raise ValueError(f"unknown precoder scheme {scheme!r}")
        alpha[l] = power_scaling(p_bar[l], access_matrix, powers, sigma2, budgets[l])
    return PrecoderSet(scheme=scheme, p_bar=p_bar, alpha=alpha, p_frt=budgets)
