# Demo 2: the two-hop impaired signal chain, analytic vs symbol level.
#
# Builds a small instance, computes the distortion covariances and the
# CPU-side interference-plus-distortion covariance analytically, and then
# cross-checks everything against a symbol-level Monte-Carlo simulation of
# the actual transmit/forward/receive chain.
#
# Run: python demos/02_impairment_chain.py

import numpy as np

import cellfree_af as cf

L, K, N, M = 2, 2, 2, 4
geometry = cf.generate_geometry(L, K, N, M, area_side=300.0, seed=10)
model = cf.LargeScaleModel()
hw = cf.HardwareProfile(kappa_ac=0.9, kappa_frt=0.9, sigma2=10 ** (-12.4))
powers = np.full(K, 0.1)

real = cf.draw_channel_realization(geometry, model, shadow_seed=11,
                                   access_seed=12, fronthaul_seed=13)
h, G = real.access_channels, real.fronthaul_channels

pset = cf.build_precoders("bi_svd", h, G, powers, hw.sigma2, 10.0)
P = pset.matrices
eff = cf.effective_channels(G, P, h)
d_ac = cf.access_distortion_cov(h, powers, hw.kappa_ac)
d_frt = cf.fronthaul_distortion_cov(P, h, powers, hw.sigma2, hw.kappa_frt)
dist = cf.DistortionCovariances(d_ac, d_frt)

print(f"distortion power per AP, receive chain: "
      f"{np.einsum('lnn->l', d_ac).real}")
print(f"distortion power per AP, transmit chain: "
      f"{np.einsum('lnn->l', d_frt).real}")
print(f"radiated power (analytic) vs 10 W budget: "
      f"{cf.fronthaul_radiated_power(P, h, dist, hw, powers)}")

frob = lambda a, b: np.linalg.norm(a - b) / np.linalg.norm(b)

n = 200_000
sim = cf.simulate_symbol_transmission(h, G, P, hw, powers, n, seed=14)
print(f"\nsymbol-level oracle over {n} symbols:")
print(f"  empirical transmit power per AP: {sim.tx_power_empirical}")
print(f"  receive-chain distortion covariance error: "
      f"{frob(sim.d_ac_empirical, d_ac):.4f}")
print(f"  transmit-chain distortion covariance error: "
      f"{frob(sim.d_frt_empirical, d_frt):.4f}")

# the CPU covariance with coherent interference matches the physical chain
r_coherent = cf.cpu_covariance(0, eff, P, G, dist, hw, powers,
                               coherent_interference=True)
print(f"  CPU residual covariance error: "
      f"{frob(sim.residual_covariance(0), r_coherent):.4f}")

r0 = cf.cpu_covariance(0, eff, P, G, dist, hw, powers)
v = cf.optimal_combiner(0, eff, r0)
analytic = cf.sinr_of_combiner(v, 0, eff, r_coherent, hw, powers)
print(f"  empirical SINR {sim.empirical_sinr(v, 0):.3f} "
      f"vs analytic {analytic:.3f}")
