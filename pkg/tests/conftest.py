"""Shared helpers: one-call construction of a full simulation instance."""

from types import SimpleNamespace

import numpy as np

import cellfree_af as cf


def build_instance(L=2, K=2, N=2, M=4, kappa_ac=0.9, kappa_frt=0.9,
                   scheme="bi_svd", area_side=300.0, seed=0,
                   p_uplink=0.1, p_fronthaul=10.0, noise_dbm=-94.0,
                   coherent_interference=False):
    """Geometry -> channels -> precoders -> covariances for one realization.

    Seeds of the individual draws are derived from `seed` so two calls with
    equal arguments are identical.
    """
    sigma2 = 10 ** ((noise_dbm - 30.0) / 10.0)
    model = cf.LargeScaleModel()
    hw = cf.HardwareProfile(kappa_ac, kappa_frt, sigma2)
    geometry = cf.generate_geometry(L, K, N, M, area_side, seed=seed)
    beta_ac, beta_frt = cf.large_scale_coefficients(geometry, model, seed=seed + 1)
    corr = cf.build_access_correlations(geometry, beta_ac, model)
    h = cf.sample_access_channels(corr, seed=seed + 2)
    G = cf.sample_fronthaul_channels(geometry, beta_frt, model, seed=seed + 3)
    powers = np.full(K, p_uplink)
    pset = cf.build_precoders(scheme, h, G, powers, sigma2, p_fronthaul)
    P = pset.matrices
    eff = cf.effective_channels(G, P, h)
    d_ac = cf.access_distortion_cov(h, powers, kappa_ac)
    d_frt = cf.fronthaul_distortion_cov(P, h, powers, sigma2, kappa_frt)
    dist = cf.DistortionCovariances(d_ac=d_ac, d_frt=d_frt)
    r_true = cf.cpu_covariances(eff, P, G, dist, hw, powers,
                                coherent_interference=coherent_interference)
    return SimpleNamespace(
        geometry=geometry, model=model, hw=hw, powers=powers, sigma2=sigma2,
        beta_ac=beta_ac, beta_frt=beta_frt, corr=corr, h=h, G=G,
        pset=pset, P=P, eff=eff, dist=dist, r_true=r_true)


def frob_rel(a, b):
    """Frobenius norm of (a - b) relative to that of b."""
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))
