# Demo 1: random network geometry, large-scale fading, and channel draws.
#
# Generates one random setup at the default scale (16 four-antenna APs and
# 8 single-antenna UEs in an 800 x 800 m area, CPU with 128 antennas at the
# center), then inspects the large-scale gains, the spatial correlation of
# the access links, and one realization of the access and fronthaul fading.
#
# Run: python demos/01_network_and_channels.py

import numpy as np

import cellfree_af as cf

geometry = cf.generate_geometry(L=16, K=8, N=4, M=128, area_side=800.0, seed=1)
model = cf.LargeScaleModel()
print(f"APs at height {geometry.ap_positions[0, 2]} m, "
      f"CPU at {geometry.cpu_position}")

beta_access, beta_fronthaul = cf.large_scale_coefficients(geometry, model, seed=2)
print("\naccess gains (dB): "
      f"min {10 * np.log10(beta_access.min()):.1f}, "
      f"median {10 * np.log10(np.median(beta_access)):.1f}, "
      f"max {10 * np.log10(beta_access.max()):.1f}")
print("fronthaul gains (dB): "
      f"min {10 * np.log10(beta_fronthaul.min()):.1f}, "
      f"max {10 * np.log10(beta_fronthaul.max()):.1f}")

# spatial correlation of each access link: Hermitian PSD with trace N * beta
corr = cf.build_access_correlations(geometry, beta_access, model)
eigs = np.linalg.eigvalsh(corr)
print(f"\ncorrelation eigenvalue range: [{eigs.min():.3e}, {eigs.max():.3e}]")
traces = np.einsum("lknn->lk", corr).real
print("trace(R) == N * beta:", np.allclose(traces, geometry.N * beta_access))

# one coherence snapshot of both hops
h = cf.sample_access_channels(corr, seed=3)
G = cf.sample_fronthaul_channels(geometry, beta_fronthaul, model, seed=4)
print(f"\naccess channels {h.shape}, fronthaul channels {G.shape}")
print(f"per-link access power E||h||^2 vs N*beta (one draw): "
      f"{np.mean(np.sum(np.abs(h) ** 2, axis=2) / (geometry.N * beta_access)):.3f}")
print(f"fronthaul power ||G||_F^2 vs M*N*beta (one draw): "
      f"{np.mean([np.linalg.norm(G[l]) ** 2 / (128 * 4 * beta_fronthaul[l]) for l in range(16)]):.3f}")

# the same seeds reproduce the same network, bit for bit
again = cf.sample_access_channels(corr, seed=3)
print("\nsame seed, same draw:", np.array_equal(h, again))
