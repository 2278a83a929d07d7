"""Two-hop impaired signal model for the amplify-and-forward fronthaul.

First hop: UEs transmit to the APs, whose receive chains pass a fraction
kappa_ac of the signal power undistorted and leak the rest into additive,
spatially white distortion. Second hop: each AP precodes and retransmits its
received signal toward the CPU through a transmit chain with quality factor
kappa_frt. All spectral-efficiency evaluation is analytic, from covariances
of a single channel realization; the symbol-level simulator exists as an
independent validation oracle.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import complex_gaussian, herm, hermitian_part


@dataclass
class HardwareProfile:
    """Transceiver quality factors and noise variance (linear watts)."""

    kappa_ac: float = 0.9
    kappa_frt: float = 0.9
    sigma2: float = 1.0

    def __post_init__(self):
        for name in ("kappa_ac", "kappa_frt"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {value}")
        if self.sigma2 <= 0:
            raise ValueError("sigma2 must be positive")

    def perfect(self):
        """Same noise level with both quality factors set to 1."""
        return HardwareProfile(1.0, 1.0, self.sigma2)


@dataclass
class DistortionCovariances:
    """Diagonal distortion covariances of every AP, shape (L, N, N) each."""

    d_ac: np.ndarray
    d_frt: np.ndarray


@dataclass
class EffectiveChannelSet:
    """Composite UE-to-CPU channels through each AP and their per-UE sums."""

    b: np.ndarray      # (L, K, M), b[l, k] = G_l P_l h_{kl}
    b_sum: np.ndarray  # (K, M), sum over APs


def validate_powers(powers, K=None):
    """Uplink transmit powers as a positive 1-D array."""
    p = np.atleast_1d(np.asarray(powers, dtype=float))
    if K is not None and p.shape != (K,):
        raise ValueError(f"expected {K} uplink powers, got shape {p.shape}")
    if np.any(p <= 0):
        raise ValueError("uplink powers must be positive")
    return p


def _check_kappa(kappa, name):
    if not 0 < kappa <= 1:
        raise ValueError(f"{name} must lie in (0, 1], got {kappa}")


def _diag_embed(d):
    """Batch of diagonal matrices from diagonal entries (..., N) -> (..., N, N)."""
    out = np.zeros(d.shape + (d.shape[-1],), dtype=complex)
    idx = np.arange(d.shape[-1])
    out[..., idx, idx] = d
    return out


def access_distortion_cov(channels, powers, kappa_ac):
    """Receive-chain distortion covariance at each AP.

    D_ac[l] = diag((1 - kappa_ac) * sum_k p_k h_{kl} h_{kl}^H): diagonal with
    non-negative entries, zero when kappa_ac = 1. `channels` is (L, K, N) or
    (K, N) for a single AP.
    """
    _check_kappa(kappa_ac, "kappa_ac")
    h = np.asarray(channels, dtype=complex)
    single = h.ndim == 2
    if single:
        h = h[None]
    p = validate_powers(powers, h.shape[1])
    diag = (1.0 - kappa_ac) * np.einsum("k,lkn->ln", p, np.abs(h) ** 2)
    out = _diag_embed(diag)
    return out[0] if single else out


def fronthaul_distortion_cov(precoders, channels, powers, sigma2, kappa_frt):
    """Transmit-chain distortion covariance of each AP's fronthaul signal.

    D_frt[l] = diag((1 - kappa_frt) * (sum_k p_k P_l h_{kl} h_{kl}^H P_l^H
                                       + sigma2 * P_l P_l^H)).
    Its trace equals (1 - kappa_frt) times the AP's fronthaul transmit power.
    """
    _check_kappa(kappa_frt, "kappa_frt")
    P = np.asarray(precoders, dtype=complex)
    h = np.asarray(channels, dtype=complex)
    single = h.ndim == 2
    if single:
        h = h[None]
        P = P[None]
    p = validate_powers(powers, h.shape[1])
    ph = np.einsum("lnm,lkm->lkn", P, h)
    diag = (1.0 - kappa_frt) * (np.einsum("k,lkn->ln", p, np.abs(ph) ** 2)
                                + sigma2 * np.sum(np.abs(P) ** 2, axis=2))
    out = _diag_embed(diag)
    return out[0] if single else out


def effective_channels(fronthaul, precoders, access):
    """Composite channels b[l, k] = G_l P_l h_{kl} and their per-UE sums."""
    G = np.asarray(fronthaul, dtype=complex)
    P = np.asarray(precoders, dtype=complex)
    h = np.asarray(access, dtype=complex)
    if G.ndim != 3 or P.ndim != 3 or h.ndim != 3:
        raise ValueError("expected batched arrays (L, M, N), (L, N, N), (L, K, N)")
    L, M, N = G.shape
    if P.shape != (L, N, N) or h.shape[0] != L or h.shape[2] != N:
        raise ValueError(
            f"inconsistent shapes: G {G.shape}, P {P.shape}, h {h.shape}"
        )
    gp = G @ P
    b = np.einsum("lmn,lkn->lkm", gp, h)
    return EffectiveChannelSet(b=b, b_sum=b.sum(axis=0))


def _sum_sandwich(left, middle):
    """sum_l left_l @ middle_l @ left_l^H as one flattened matrix product."""
    a = left @ middle
    m = left.shape[1]
    a_flat = a.transpose(1, 0, 2).reshape(m, -1)
    left_flat = left.transpose(1, 0, 2).reshape(m, -1)
    return a_flat @ left_flat.conj().T


def _forwarded_noise_distortion(precoders, fronthaul, dist, hw):
    """kappa_frt * sum_l G P (D_ac + sigma2 I) P^H G^H + sum_l G D_frt G^H."""
    G = np.asarray(fronthaul, dtype=complex)
    P = np.asarray(precoders, dtype=complex)
    gp = G @ P
    N = P.shape[-1]
    d_ac_noise = dist.d_ac + hw.sigma2 * np.eye(N)
    return (hw.kappa_frt * _sum_sandwich(gp, d_ac_noise)
            + _sum_sandwich(G, dist.d_frt))


def _interference_outer(eff, powers, exclude, coherent):
    """Interference covariance sum over UEs != exclude.

    Per-AP accumulation (default) sums outer products of the individual hop
    channels b[l, i]; the coherent variant uses the across-AP sums instead.
    The two differ by cross-AP terms and are both exposed because the model's
    per-AP form is what the combiner optimizes against.
    """
    p = validate_powers(powers, eff.b.shape[1])
    mask = np.ones(len(p), dtype=bool)
    mask[exclude] = False
    if coherent:
        bs = eff.b_sum[mask]
        return np.einsum("k,km,kn->mn", p[mask], bs, bs.conj())
    b = eff.b[:, mask]
    return np.einsum("k,lkm,lkn->mn", p[mask], b, b.conj())


def cpu_covariance(k, eff, precoders, fronthaul, dist, hw, powers,
                   coherent_interference=False):
    """Interference-plus-distortion covariance seen by the CPU for UE k.

    R_k = kappa_frt*kappa_ac * sum_{i != k} p_i sum_l b_{il} b_{il}^H
        + kappa_frt * sum_l G P (D_ac + sigma2 I) P^H G^H
        + sum_l G D_frt G^H + sigma2 I_M.

    Hermitian positive definite with smallest eigenvalue >= sigma2. The
    `coherent_interference` flag switches the first term to outer products of
    the across-AP channel sums (see _interference_outer).
    """
    K = eff.b.shape[1]
    if not 0 <= k < K:
        raise ValueError(f"UE index {k} out of range [0, {K})")
    M = eff.b.shape[2]
    interf = _interference_outer(eff, powers, k, coherent_interference)
    r = (hw.kappa_frt * hw.kappa_ac * interf
         + _forwarded_noise_distortion(precoders, fronthaul, dist, hw)
         + hw.sigma2 * np.eye(M))
    return hermitian_part(r)


def cpu_covariances(eff, precoders, fronthaul, dist, hw, powers,
                    coherent_interference=False):
    """R_k for every UE at once, shape (K, M, M).

    Shares the distortion/noise terms and the all-UE interference sum across
    UEs, subtracting each UE's own contribution.
    """
    p = validate_powers(powers, eff.b.shape[1])
    K, M = eff.b.shape[1], eff.b.shape[2]
    common = (_forwarded_noise_distortion(precoders, fronthaul, dist, hw)
              + hw.sigma2 * np.eye(M))
    if coherent_interference:
        scaled = np.sqrt(p)[:, None] * eff.b_sum
        total = scaled.T @ scaled.conj()
        own = np.einsum("km,kn->kmn", scaled, scaled.conj())
    else:
        scaled = np.sqrt(p)[None, :, None] * eff.b
        flat = scaled.reshape(-1, M)
        total = flat.T @ flat.conj()
        own = np.einsum("lkm,lkn->kmn", scaled, scaled.conj(), optimize=True)
    kk = hw.kappa_frt * hw.kappa_ac
    return hermitian_part(kk * (total[None] - own) + common[None])


def fronthaul_radiated_power(precoders, access, dist, hw, powers):
    """Analytic mean radiated power E{||y_tilde_l||^2} of each AP.

    Equals kappa_frt * trace(P C_y P^H) + trace(D_frt) where C_y is the
    covariance of the AP's impaired receive signal. For power-scaled unitary
    precoders this matches the configured fronthaul power budget exactly.
    """
    P = np.asarray(precoders, dtype=complex)
    h = np.asarray(access, dtype=complex)
    p = validate_powers(powers, h.shape[1])
    N = P.shape[-1]
    c_y = (hw.kappa_ac * np.einsum("k,lkm,lkn->lmn", p, h, h.conj())
           + dist.d_ac + hw.sigma2 * np.eye(N))
    forwarded = hw.kappa_frt * np.einsum("lnm,lmo,lno->l", P, c_y, P.conj()).real
    return forwarded + np.einsum("lnn->l", dist.d_frt).real


@dataclass
class SymbolSimResult:
    """Raw CPU samples and empirical moments from the symbol-level oracle."""

    y: np.ndarray                    # (n_symbols, M) received CPU samples
    s: np.ndarray                    # (n_symbols, K) transmitted symbols
    cov_y: np.ndarray                # empirical E{y y^H}
    desired_coefficients: np.ndarray  # (K, M), sqrt(kk * p_k) * sum_l b_{kl}
    d_ac_empirical: np.ndarray       # (L, N, N)
    d_frt_empirical: np.ndarray      # (L, N, N)
    tx_power_empirical: np.ndarray   # (L,) mean ||y_tilde_l||^2

    def residual_covariance(self, k):
        """Empirical covariance of y minus UE k's desired component."""
        resid = self.y - np.outer(self.s[:, k], self.desired_coefficients[k])
        return resid.T @ resid.conj() / self.y.shape[0]

    def empirical_sinr(self, v, k):
        """Ratio of sample powers of the desired and residual parts of v^H y."""
        v = np.asarray(v, dtype=complex)
        gain = v.conj() @ self.desired_coefficients[k]
        desired = gain * self.s[:, k]
        rest = self.y @ v.conj() - desired
        return float(np.mean(np.abs(desired) ** 2) / np.mean(np.abs(rest) ** 2))


def simulate_symbol_transmission(access, fronthaul, precoders, hw, powers,
                                 n_symbols, seed=None, interference="coherent",
                                 target_ue=None, chunk_size=100_000):
    """Monte-Carlo oracle propagating symbols through both impaired hops.

    Draws unit-power circularly symmetric Gaussian symbols, fresh distortion
    and noise per symbol, and accumulates the empirical second-order
    statistics alongside the raw CPU samples.

    interference="coherent" is the physical chain: every UE's symbol reaches
    all APs coherently. interference="per_ap" (requires target_ue) gives each
    UE other than the target an independent symbol per AP, which makes the
    empirical residual covariance match the per-AP interference-accumulation
    form used by the analytic covariances.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    if interference not in ("coherent", "per_ap"):
        raise ValueError("interference must be 'coherent' or 'per_ap'")
    if interference == "per_ap" and target_ue is None:
        raise ValueError("per_ap interference mode requires target_ue")

    h = np.asarray(access, dtype=complex)
    G = np.asarray(fronthaul, dtype=complex)
    P = np.asarray(precoders, dtype=complex)
    L, K, N = h.shape
    M = G.shape[1]
    p = validate_powers(powers, K)

    d_ac = access_distortion_cov(h, p, hw.kappa_ac)
    d_frt = fronthaul_distortion_cov(P, h, p, hw.sigma2, hw.kappa_frt)
    std_ac = np.sqrt(np.einsum("lnn->ln", d_ac).real)    # (L, N)
    std_frt = np.sqrt(np.einsum("lnn->ln", d_frt).real)  # (L, N)
    scaled_h = np.sqrt(p)[None, :, None] * h             # (L, K, N)

    eff = effective_channels(G, P, h)
    coeff = (np.sqrt(hw.kappa_frt * hw.kappa_ac * p)[:, None] * eff.b_sum)

    y = np.empty((n_symbols, M), dtype=complex)
    s = np.empty((n_symbols, K), dtype=complex)
    sum_yy = np.zeros((M, M), dtype=complex)
    sum_ac = np.zeros((L, N, N), dtype=complex)
    sum_frt = np.zeros((L, N, N), dtype=complex)
    sum_tx = np.zeros(L)

    rng = np.random.default_rng(seed)
    for start in range(0, n_symbols, chunk_size):
        n = min(chunk_size, n_symbols - start)
        sym = complex_gaussian(rng, (n, K))
        s[start:start + n] = sym
        if interference == "per_ap":
            sym_ap = complex_gaussian(rng, (L, n, K))
            sym_ap[:, :, target_ue] = sym[:, target_ue]
        y_chunk = np.zeros((n, M), dtype=complex)
        for l in range(L):
            sym_l = sym if interference == "coherent" else sym_ap[l]
            rx = np.sqrt(hw.kappa_ac) * (sym_l @ scaled_h[l])
            eta_ac = std_ac[l] * complex_gaussian(rng, (n, N))
            rx += eta_ac + np.sqrt(hw.sigma2) * complex_gaussian(rng, (n, N))
            tx = np.sqrt(hw.kappa_frt) * (rx @ P[l].T)
            eta_frt = std_frt[l] * complex_gaussian(rng, (n, N))
            tx += eta_frt
            sum_ac[l] += eta_ac.T @ eta_ac.conj()
            sum_frt[l] += eta_frt.T @ eta_frt.conj()
            sum_tx[l] += np.sum(np.abs(tx) ** 2)
            y_chunk += tx @ G[l].T
        y_chunk += np.sqrt(hw.sigma2) * complex_gaussian(rng, (n, M))
        y[start:start + n] = y_chunk
        sum_yy += y_chunk.T @ y_chunk.conj()

    return SymbolSimResult(
        y=y,
        s=s,
        cov_y=sum_yy / n_symbols,
        desired_coefficients=coeff,
        d_ac_empirical=sum_ac / n_symbols,
        d_frt_empirical=sum_frt / n_symbols,
        tx_power_empirical=sum_tx / n_symbols,
    )
