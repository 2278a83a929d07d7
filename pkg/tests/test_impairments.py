"""Distortion covariances, CPU covariance assembly, and the symbol oracle."""

import numpy as np
import pytest

import cellfree_af as cf

from conftest import build_instance, frob_rel


# ---------------------------------------------------------------------------
# Access distortion covariance
# ---------------------------------------------------------------------------

def test_access_distortion_zero_at_perfect_hardware():
    h = np.array([[1.0, 1j], [0.5, 0.5]], dtype=complex)[None]  # (1, 2, 2)
    d = cf.access_distortion_cov(h, [1.0, 1.0], kappa_ac=1.0)
    assert np.all(d == 0)


def test_access_distortion_single_ue_hand_value():
    h = np.array([[1.0, 1j]], dtype=complex)  # K=1, N=2, single AP
    d = cf.access_distortion_cov(h, [1.0], kappa_ac=0.9)
    np.testing.assert_allclose(d, np.diag([0.1, 0.1]), atol=1e-15)


def test_access_distortion_two_ue_hand_value():
    h = np.array([[1.0, 0.0], [0.0, 2.0]], dtype=complex)
    d = cf.access_distortion_cov(h, [1.0, 0.5], kappa_ac=0.5)
    np.testing.assert_allclose(d, np.diag([0.5, 1.0]), atol=1e-15)


@pytest.mark.parametrize("kappa", [0.0, -0.1, 1.5])
def test_access_distortion_rejects_bad_kappa(kappa):
    h = np.ones((1, 1, 2), dtype=complex)
    with pytest.raises(ValueError):
        cf.access_distortion_cov(h, [1.0], kappa)


def test_distortion_is_diagonal_nonnegative():
    inst = build_instance(L=3, K=3, N=4, M=8, seed=21)
    for d in (inst.dist.d_ac, inst.dist.d_frt):
        off = d - np.einsum("lnn->ln", d)[:, :, None] * np.eye(d.shape[-1])
        assert np.all(off == 0)
        assert np.all(np.einsum("lnn->ln", d).real >= 0)


def test_distortion_trace_decreases_linearly_in_kappa():
    h = np.ones((1, 2, 3), dtype=complex)
    P = (np.eye(3) * (1 + 1j))[None]
    p = [0.5, 1.5]
    # (1 - kappa) scaling: equally spaced kappas give equally spaced traces
    for cov in (lambda k: cf.access_distortion_cov(h, p, k),
                lambda k: cf.fronthaul_distortion_cov(P, h, p, 0.3, k)):
        traces = [np.trace(cov(k)[0]).real for k in (0.25, 0.5, 0.75)]
        assert traces[0] > traces[1] > traces[2]
        np.testing.assert_allclose(traces[0] - traces[1],
                                   traces[1] - traces[2], rtol=1e-12)


# ---------------------------------------------------------------------------
# Fronthaul distortion covariance
# ---------------------------------------------------------------------------

def test_fronthaul_distortion_zero_at_perfect_hardware():
    h = np.array([[1.0, 1j]], dtype=complex)
    P = np.eye(2, dtype=complex)
    d = cf.fronthaul_distortion_cov(P, h, [1.0], sigma2=1.0, kappa_frt=1.0)
    assert np.all(d == 0)


def test_fronthaul_distortion_hand_value():
    # P = I, sigma2 = 1, h = (1, i), p = 1, kappa = 0.9: 0.1 * (|h_n|^2 + 1)
    h = np.array([[1.0, 1j]], dtype=complex)
    P = np.eye(2, dtype=complex)
    d = cf.fronthaul_distortion_cov(P, h, [1.0], sigma2=1.0, kappa_frt=0.9)
    np.testing.assert_allclose(d, np.diag([0.2, 0.2]), atol=1e-15)


def test_fronthaul_distortion_trace_equals_leaked_transmit_power():
    inst = build_instance(L=3, K=2, N=3, M=6, seed=4)
    for l in range(3):
        p_frt = cf.transmit_power(inst.P[l], inst.h[l].T, inst.powers, inst.sigma2)
        np.testing.assert_allclose(np.trace(inst.dist.d_frt[l]).real,
                                   (1 - inst.hw.kappa_frt) * p_frt, rtol=1e-12)


# ---------------------------------------------------------------------------
# Effective channels
# ---------------------------------------------------------------------------

def test_effective_channels_identity_maps():
    h = (np.arange(12).reshape(2, 3, 2) + 1j).astype(complex)  # L=2, K=3, N=2
    eye = np.broadcast_to(np.eye(2, dtype=complex), (2, 2, 2))
    eff = cf.effective_channels(eye, eye, h)
    np.testing.assert_array_equal(eff.b, h)
    np.testing.assert_allclose(eff.b_sum, h.sum(axis=0), rtol=1e-15)


def test_effective_channels_annihilated_by_zero_precoder():
    inst = build_instance(seed=5)
    eff = cf.effective_channels(inst.G, np.zeros_like(inst.P), inst.h)
    assert np.all(eff.b == 0) and np.all(eff.b_sum == 0)


def test_effective_channels_match_naive_triple_product():
    inst = build_instance(L=3, K=2, N=2, M=5, seed=6)
    eff = inst.eff
    for l in range(3):
        for k in range(2):
            naive = inst.G[l] @ (inst.P[l] @ inst.h[l, k])
            np.testing.assert_allclose(eff.b[l, k], naive, rtol=1e-12)
    np.testing.assert_allclose(eff.b_sum, eff.b.sum(axis=0), rtol=1e-12)


def test_effective_channels_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        cf.effective_channels(np.zeros((2, 4, 2), dtype=complex),
                              np.zeros((2, 3, 3), dtype=complex),
                              np.zeros((2, 2, 2), dtype=complex))


# ---------------------------------------------------------------------------
# CPU covariance
# ---------------------------------------------------------------------------

def _naive_cpu_covariance(k, inst, coherent=False):
    """Direct per-term assembly, independent of the library's batching."""
    L, K, N = inst.h.shape
    M = inst.G.shape[1]
    hw = inst.hw
    r = np.zeros((M, M), dtype=complex)
    for i in range(K):
        if i == k:
            continue
        if coherent:
            b = inst.eff.b_sum[i]
            r += hw.kappa_frt * hw.kappa_ac * inst.powers[i] * np.outer(b, b.conj())
        else:
            for l in range(L):
                b = inst.eff.b[l, i]
                r += (hw.kappa_frt * hw.kappa_ac * inst.powers[i]
                      * np.outer(b, b.conj()))
    for l in range(L):
        gp = inst.G[l] @ inst.P[l]
        r += hw.kappa_frt * gp @ (inst.dist.d_ac[l]
                                  + hw.sigma2 * np.eye(N)) @ gp.conj().T
        r += inst.G[l] @ inst.dist.d_frt[l] @ inst.G[l].conj().T
    return r + hw.sigma2 * np.eye(M)


def test_cpu_covariance_vs_naive_assembly():
    inst = build_instance(L=3, K=3, N=2, M=5, seed=7)
    for coherent in (False, True):
        for k in range(3):
            got = cf.cpu_covariance(k, inst.eff, inst.P, inst.G, inst.dist,
                                    inst.hw, inst.powers,
                                    coherent_interference=coherent)
            assert frob_rel(got, _naive_cpu_covariance(k, inst, coherent)) < 1e-12


def test_cpu_covariances_batch_matches_single():
    inst = build_instance(L=2, K=3, N=2, M=6, seed=8)
    batch = cf.cpu_covariances(inst.eff, inst.P, inst.G, inst.dist, inst.hw,
                               inst.powers)
    for k in range(3):
        single = cf.cpu_covariance(k, inst.eff, inst.P, inst.G, inst.dist,
                                   inst.hw, inst.powers)
        assert frob_rel(batch[k], single) < 1e-12


def test_cpu_covariance_perfect_hardware_single_ue_closed_form():
    inst = build_instance(L=2, K=1, N=2, M=4, kappa_ac=1.0, kappa_frt=1.0, seed=9)
    r = cf.cpu_covariance(0, inst.eff, inst.P, inst.G,
                          cf.DistortionCovariances(np.zeros_like(inst.dist.d_ac),
                                                   np.zeros_like(inst.dist.d_frt)),
                          inst.hw, inst.powers)
    gp = inst.G @ inst.P
    expected = inst.sigma2 * (np.sum(gp @ np.conj(np.swapaxes(gp, 1, 2)), axis=0)
                              + np.eye(4))
    assert frob_rel(r, expected) < 1e-12


def test_cpu_covariance_hermitian_and_floor():
    inst = build_instance(L=3, K=4, N=2, M=8, seed=10)
    for k in range(4):
        r = inst.r_true[k]
        assert np.linalg.norm(r - r.conj().T) <= 1e-12 * np.linalg.norm(r)
        eigs = np.linalg.eigvalsh(r)
        assert eigs.min() >= inst.sigma2 * (1 - 1e-9)


def test_cpu_covariance_index_out_of_range():
    inst = build_instance(seed=11)
    with pytest.raises(ValueError):
        cf.cpu_covariance(5, inst.eff, inst.P, inst.G, inst.dist, inst.hw,
                          inst.powers)


# ---------------------------------------------------------------------------
# Radiated power
# ---------------------------------------------------------------------------

def test_radiated_power_equals_budget_for_both_schemes():
    for scheme in ("identity", "bi_svd"):
        for seed in range(5):
            inst = build_instance(L=3, K=2, N=3, M=6, scheme=scheme, seed=seed)
            radiated = cf.fronthaul_radiated_power(inst.P, inst.h, inst.dist,
                                                   inst.hw, inst.powers)
            np.testing.assert_allclose(radiated, inst.pset.p_frt, rtol=1e-12)


# ---------------------------------------------------------------------------
# Symbol-level oracle
# ---------------------------------------------------------------------------

def test_oracle_noiseless_identity_chain():
    # kappa = 1, sigma2 -> 0, single UE/AP, P = G = I: y = sqrt(p) h s
    h = np.array([[[0.8 - 0.3j, 1.2 + 0.5j]]])  # (1, 1, 2)
    eye = np.eye(2, dtype=complex)[None]
    hw = cf.HardwareProfile(1.0, 1.0, 1e-30)
    sim = cf.simulate_symbol_transmission(h, eye, eye, hw, [0.25], 200, seed=0)
    expected = np.sqrt(0.25) * sim.s[:, 0, None] * h[0, 0]
    np.testing.assert_allclose(sim.y, expected, atol=1e-12)


def test_oracle_transmit_power_matches_budget():
    inst = build_instance(L=2, K=2, N=2, M=4, seed=12)
    sim = cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                          inst.powers, 200_000, seed=1)
    ratio = sim.tx_power_empirical / inst.pset.p_frt
    assert np.all(np.abs(ratio - 1.0) < 0.01)


def test_oracle_distortion_covariances_match_analytic():
    inst = build_instance(L=2, K=2, N=2, M=4, seed=13)
    sim = cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                          inst.powers, 200_000, seed=2)
    assert frob_rel(sim.d_ac_empirical, inst.dist.d_ac) < 0.03
    assert frob_rel(sim.d_frt_empirical, inst.dist.d_frt) < 0.03


def test_oracle_residual_covariance_matches_both_interference_forms():
    inst = build_instance(L=2, K=2, N=2, M=4, seed=14)
    n = 300_000
    sim_coh = cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                              inst.powers, n, seed=3,
                                              interference="coherent")
    r_coh = cf.cpu_covariance(0, inst.eff, inst.P, inst.G, inst.dist, inst.hw,
                              inst.powers, coherent_interference=True)
    assert frob_rel(sim_coh.residual_covariance(0), r_coh) < 0.03

    sim_pap = cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                              inst.powers, n, seed=4,
                                              interference="per_ap", target_ue=0)
    r_pap = cf.cpu_covariance(0, inst.eff, inst.P, inst.G, inst.dist, inst.hw,
                              inst.powers, coherent_interference=False)
    assert frob_rel(sim_pap.residual_covariance(0), r_pap) < 0.03


def test_oracle_empirical_sinr_matches_analytic():
    inst = build_instance(L=2, K=2, N=2, M=4, seed=15)
    v = cf.optimal_combiner(0, inst.eff, inst.r_true[0])
    sim = cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                          inst.powers, 300_000, seed=5,
                                          interference="per_ap", target_ue=0)
    analytic = cf.sinr_of_combiner(v, 0, inst.eff, inst.r_true[0], inst.hw,
                                   inst.powers)
    assert abs(sim.empirical_sinr(v, 0) / analytic - 1.0) < 0.03


def test_oracle_argument_validation():
    inst = build_instance(seed=16)
    with pytest.raises(ValueError):
        cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                        inst.powers, 0, seed=0)
    with pytest.raises(ValueError):
        cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                        inst.powers, 10, seed=0,
                                        interference="per_ap")
    with pytest.raises(ValueError):
        cf.simulate_symbol_transmission(inst.h, inst.G, inst.P, inst.hw,
                                        inst.powers, 10, seed=0,
                                        interference="nonsense")


# ---------------------------------------------------------------------------
# Hardware profile
# ---------------------------------------------------------------------------

def test_hardware_profile_validation():
    with pytest.raises(ValueError):
        cf.HardwareProfile(kappa_ac=0.0)
    with pytest.raises(ValueError):
        cf.HardwareProfile(kappa_frt=1.2)
    with pytest.raises(ValueError):
        cf.HardwareProfile(sigma2=0.0)
    perfect = cf.HardwareProfile(0.8, 0.7, 2.0).perfect()
    assert perfect.kappa_ac == perfect.kappa_frt == 1.0
    assert perfect.sigma2 == 2.0
