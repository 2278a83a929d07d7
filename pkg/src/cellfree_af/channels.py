"""Network geometry, large-scale fading, and channel realizations.

Generates one random uplink scenario: multi-antenna access points (APs) and
single-antenna user equipments (UEs) dropped uniformly in a square area, a
central processing unit (CPU) with a large array, correlated-shadowing path
loss on every link, spatially correlated Rayleigh fading on the UE-AP access
links, and spatially correlated Rician fading on the AP-CPU fronthaul links.

Array layout convention: access quantities are indexed AP-first, i.e.
h[l, k, :] is the channel from UE k to AP l.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import complex_gaussian, hermitian_part, psd_sqrt


@dataclass
class NetworkGeometry:
    """AP/UE/CPU positions (meters, 3-D) and dimensions of one random setup."""

    L: int
    K: int
    N: int
    M: int
    ap_positions: np.ndarray   # (L, 3)
    ue_positions: np.ndarray   # (K, 3)
    cpu_position: np.ndarray   # (3,)
    area_side: float

    def __post_init__(self):
        if min(self.L, self.K, self.N, self.M) < 1:
            raise ValueError("L, K, N, M must all be >= 1")
        if self.area_side <= 0:
            raise ValueError("area_side must be positive")
        self.ap_positions = np.asarray(self.ap_positions, dtype=float)
        self.ue_positions = np.asarray(self.ue_positions, dtype=float)
        self.cpu_position = np.asarray(self.cpu_position, dtype=float)
        if self.ap_positions.shape != (self.L, 3):
            raise ValueError(f"ap_positions must have shape ({self.L}, 3)")
        if self.ue_positions.shape != (self.K, 3):
            raise ValueError(f"ue_positions must have shape ({self.K}, 3)")
        if self.cpu_position.shape != (3,):
            raise ValueError("cpu_position must have shape (3,)")
        planar = np.vstack([self.ap_positions[:, :2], self.ue_positions[:, :2]])
        if np.any(planar < 0) or np.any(planar > self.area_side):
            raise ValueError("planar coordinates must lie within the service area")


@dataclass
class LargeScaleModel:
    """Path-loss, shadowing, and spatial-correlation parameterization.

    Path loss in dB at 3-D distance d (meters) is
    pathloss_offset_db - pathloss_exponent_factor * log10(d) plus a Gaussian
    shadowing term; shadowing terms of links sharing an endpoint are
    correlated with coefficient 2^(-separation / shadow_decorrelation_m).
    """

    pathloss_offset_db: float = -30.5
    pathloss_exponent_factor: float = 36.7
    shadow_std_db: float = 4.0
    shadow_decorrelation_m: float = 9.0
    asd_deg: float = 15.0
    rician_k_db: float = 10.0

    def __post_init__(self):
        if self.shadow_std_db < 0:
            raise ValueError("shadow_std_db must be >= 0")
        if self.asd_deg <= 0:
            raise ValueError("asd_deg must be positive")
        if self.shadow_decorrelation_m <= 0:
            raise ValueError("shadow_decorrelation_m must be positive")


@dataclass
class ChannelRealization:
    """Channels of one coherence snapshot plus the large-scale metadata."""

    access_channels: np.ndarray     # (L, K, N) complex, h[l, k]
    fronthaul_channels: np.ndarray  # (L, M, N) complex, G[l]
    access_corr: np.ndarray         # (L, K, N, N) Hermitian PSD
    beta_access: np.ndarray         # (L, K) linear gains
    beta_fronthaul: np.ndarray      # (L,) linear gains
    setup_id: int = 0
    realization_id: int = 0


def generate_geometry(L, K, N, M, area_side=800.0, elevation=10.0, ue_height=0.0,
                      cpu_position=None, seed=None):
    """Drop L APs and K UEs uniformly at random in a square service area.

    APs and the CPU sit `elevation` meters above the UE plane. The CPU
    defaults to the area center. Deterministic given the seed; APs are drawn
    before UEs.
    """
    if min(L, K, N, M) < 1:
        raise ValueError("L, K, N, M must all be >= 1")
    if area_side <= 0:
        raise ValueError("area_side must be positive")
    rng = np.random.default_rng(seed)
    ap_xy = rng.uniform(0.0, area_side, size=(L, 2))
    ue_xy = rng.uniform(0.0, area_side, size=(K, 2))
    ap_positions = np.column_stack([ap_xy, np.full(L, ue_height + elevation)])
    ue_positions = np.column_stack([ue_xy, np.full(K, ue_height)])
    if cpu_position is None:
        cpu_position = np.array([area_side / 2, area_side / 2, ue_height + elevation])
    return NetworkGeometry(L, K, N, M, ap_positions, ue_positions,
                           np.asarray(cpu_position, dtype=float), area_side)


def _decaying_correlation(positions, decorrelation):
    """Shadowing correlation matrix 2^(-distance/decorrelation) of terminals."""
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    return np.power(2.0, -dist / decorrelation)


def large_scale_coefficients(geometry, model, seed=None):
    """Per-link large-scale gains for the access and fronthaul hops.

    Returns (beta_access, beta_fronthaul) in linear scale with shapes (L, K)
    and (L,). Shadowing is jointly Gaussian: terms toward a common AP (or the
    CPU) are correlated across terminals with coefficient
    2^(-separation/decorrelation); fronthaul shadowing is drawn independently
    of the access shadowing. Access shadowing is drawn before fronthaul.
    """
    ap = geometry.ap_positions
    ue = geometry.ue_positions
    cpu = geometry.cpu_position

    d_access = np.linalg.norm(ap[:, None, :] - ue[None, :, :], axis=-1)   # (L, K)
    d_fronthaul = np.linalg.norm(ap - cpu[None, :], axis=-1)              # (L,)
    if np.any(d_access == 0) or np.any(d_fronthaul == 0):
        raise ValueError("zero propagation distance between terminals")

    shadow_access = np.zeros((geometry.L, geometry.K))
    shadow_fronthaul = np.zeros(geometry.L)
    if model.shadow_std_db > 0:
        rng = np.random.default_rng(seed)
        sqrt_ue = psd_sqrt(_decaying_correlation(ue, model.shadow_decorrelation_m))
        z = rng.standard_normal((geometry.K, geometry.L))
        shadow_access = model.shadow_std_db * (sqrt_ue @ z).T
        sqrt_ap = psd_sqrt(_decaying_correlation(ap, model.shadow_decorrelation_m))
        shadow_fronthaul = model.shadow_std_db * (sqrt_ap @ rng.standard_normal(geometry.L))

    beta_access_db = (model.pathloss_offset_db
                      - model.pathloss_exponent_factor * np.log10(d_access)
                      + shadow_access)
    beta_fronthaul_db = (model.pathloss_offset_db
                         - model.pathloss_exponent_factor * np.log10(d_fronthaul)
                         + shadow_fronthaul)
    return 10 ** (beta_access_db / 10), 10 ** (beta_fronthaul_db / 10)


def local_scattering_correlation(beta, nominal_angle, asd, n_antennas):
    """Spatial correlation of a half-wavelength ULA under local scattering.

    Multipath arrives around `nominal_angle` (radians, broadside azimuth)
    with Gaussian angular spread of standard deviation `asd` (radians).
    Entry (m, n) is the closed-form Gaussian approximation
    beta * exp(j*pi*(m-n)*sin(phi)) * exp(-(asd^2/2) * (pi*(m-n)*cos(phi))^2),
    which is Hermitian PSD with every diagonal entry equal to beta.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if asd <= 0:
        raise ValueError("asd must be positive")
    idx = np.arange(n_antennas)
    k = np.subtract.outer(idx, idx)
    phase = np.exp(1j * np.pi * k * np.sin(nominal_angle))
    spread = np.exp(-0.5 * (asd * np.pi * k * np.cos(nominal_angle)) ** 2)
    return hermitian_part(beta * phase * spread)


def array_response(angle, n_antennas):
    """Half-wavelength ULA response for a planar wave from `angle` (radians)."""
    return np.exp(1j * np.pi * np.arange(n_antennas) * np.sin(angle))


def azimuth(from_position, to_position):
    """Planar azimuth of `to_position` as seen from `from_position`."""
    delta = np.asarray(to_position)[..., :2] - np.asarray(from_position)[..., :2]
    return np.arctan2(delta[..., 1], delta[..., 0])


def build_access_correlations(geometry, beta_access, model):
    """Correlation matrices R[l, k] for every access link, shape (L, K, N, N).

    Nominal angles are the true azimuths from each AP to each UE; diagonal
    entries equal beta_access[l, k] so that trace(R[l, k]) = N * beta.
    """
    L, K, N = geometry.L, geometry.K, geometry.N
    asd = np.deg2rad(model.asd_deg)
    corr = np.empty((L, K, N, N), dtype=complex)
    for l in range(L):
        for k in range(K):
            angle = azimuth(geometry.ap_positions[l], geometry.ue_positions[k])
            corr[l, k] = local_scattering_correlation(beta_access[l, k], angle, asd, N)
    return corr


def sample_access_channels(correlations, seed=None, factors=None):
    """Correlated Rayleigh access channels h[l, k] = R[l, k]^(1/2) w.

    `correlations` has shape (L, K, N, N); the result has shape (L, K, N).
    Draws are independent across links and deterministic given the seed.
    Precomputed matrix square roots can be passed via `factors` to amortize
    the factorization across realizations of one setup.
    """
    correlations = np.asarray(correlations)
    if factors is None:
        factors = psd_sqrt(correlations)
    rng = np.random.default_rng(seed)
    w = complex_gaussian(rng, correlations.shape[:-1])
    return np.einsum("...ij,...j->...i", factors, w)


@dataclass
class FronthaulCorrelation:
    """Per-setup deterministic factors of the AP-CPU Rician channels."""

    los: np.ndarray       # (L, M, N) unit-magnitude line-of-sight outer products
    sqrt_cpu: np.ndarray  # (L, M, M) CPU-side correlation square roots
    sqrt_ap: np.ndarray   # (L, N, N) AP-side correlation square roots


def fronthaul_correlation_factors(geometry, model):
    """Precompute LoS responses and per-side correlation square roots.

    The CPU side is correlated around the azimuth of each AP seen from the
    CPU, the AP side around the azimuth of the CPU seen from the AP, both
    with the model's angular spread (Kronecker structure between the sides).
    """
    L, M, N = geometry.L, geometry.M, geometry.N
    asd = np.deg2rad(model.asd_deg)
    los = np.empty((L, M, N), dtype=complex)
    sqrt_cpu = np.empty((L, M, M), dtype=complex)
    sqrt_ap = np.empty((L, N, N), dtype=complex)
    for l in range(L):
        angle_cpu = azimuth(geometry.cpu_position, geometry.ap_positions[l])
        angle_ap = azimuth(geometry.ap_positions[l], geometry.cpu_position)
        a_cpu = array_response(angle_cpu, M)
        a_ap = array_response(angle_ap, N)
        los[l] = np.outer(a_cpu, a_ap.conj())
        sqrt_cpu[l] = psd_sqrt(local_scattering_correlation(1.0, angle_cpu, asd, M))
        sqrt_ap[l] = psd_sqrt(local_scattering_correlation(1.0, angle_ap, asd, N))
    return FronthaulCorrelation(los, sqrt_cpu, sqrt_ap)


def draw_channel_realization(geometry, model, shadow_seed=None, access_seed=None,
                             fronthaul_seed=None, setup_id=0, realization_id=0):
    """One complete ChannelRealization for a given geometry.

    Convenience wrapper chaining large-scale coefficients, access
    correlations, and both fading draws; campaign code precomputes the
    per-setup pieces instead and draws realizations from the cached factors.
    """
    beta_access, beta_fronthaul = large_scale_coefficients(geometry, model,
                                                           seed=shadow_seed)
    corr = build_access_correlations(geometry, beta_access, model)
    h = sample_access_channels(corr, seed=access_seed)
    g = sample_fronthaul_channels(geometry, beta_fronthaul, model,
                                  seed=fronthaul_seed)
    return ChannelRealization(access_channels=h, fronthaul_channels=g,
                              access_corr=corr, beta_access=beta_access,
                              beta_fronthaul=beta_fronthaul,
                              setup_id=setup_id, realization_id=realization_id)


def sample_fronthaul_channels(geometry, beta_fronthaul, model, seed=None, factors=None):
    """Correlated Rician fronthaul channels G[l], shape (L, M, N).

    G[l] = sqrt(beta_l) * (sqrt(kappa/(kappa+1)) * LoS
                           + sqrt(1/(kappa+1)) * correlated Rayleigh)
    with kappa the linear Rician factor, so E{||G[l]||_F^2} = M * N * beta_l.
    """
    beta_fronthaul = np.asarray(beta_fronthaul, dtype=float)
    if np.any(beta_fronthaul <= 0):
        raise ValueError("fronthaul gains must be positive")
    if factors is None:
        factors = fronthaul_correlation_factors(geometry, model)
    kappa = 10 ** (model.rician_k_db / 10)
    if np.isinf(kappa):
        w_los, w_nlos = 1.0, 0.0
    else:
        w_los = np.sqrt(kappa / (kappa + 1.0))
        w_nlos = np.sqrt(1.0 / (kappa + 1.0))
    rng = np.random.default_rng(seed)
    z = complex_gaussian(rng, (geometry.L, geometry.M, geometry.N))
    scatter = factors.sqrt_cpu @ z @ factors.sqrt_ap
    g = w_los * factors.los + w_nlos * scatter
    return np.sqrt(beta_fronthaul)[:, None, None] * g
