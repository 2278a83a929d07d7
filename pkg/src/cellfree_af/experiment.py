"""Monte-Carlo campaign orchestration, CDF aggregation, and persistence.

A campaign sweeps random network setups and, inside each setup, small-scale
channel realizations. Every requested (precoder scheme, combiner) variant is
evaluated on the identical channel draw of a realization, so per-realization
comparisons between variants are paired. Per-trial seeds derive from
(master_seed, setup, realization), which makes serial and parallel runs
produce identical sample multisets.
"""

import csv
import dataclasses
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from threadpoolctl import threadpool_limits

from . import combining, impairments, precoding, seeding
from .channels import (
    LargeScaleModel,
    build_access_correlations,
    fronthaul_correlation_factors,
    generate_geometry,
    large_scale_coefficients,
    sample_access_channels,
    sample_fronthaul_channels,
)
from .impairments import DistortionCovariances, HardwareProfile
from .linalg import psd_sqrt

COMBINER_CHOICES = ("aware", "unaware")

# Exact on-disk column order of exported samples.
SAMPLE_COLUMNS = ("scenario", "setup_id", "realization_id", "ue_id",
                  "scheme", "combiner", "M", "sinr", "se")


@dataclass
class ExperimentConfig:
    """Resolved parameters of one campaign; serializable to/from JSON."""

    scenario: str = "custom"
    L: int = 16
    K: int = 8
    N: int = 4
    M: int = 128
    m_values: tuple = ()            # CPU-antenna sweep; empty means (M,)
    area_side: float = 800.0
    elevation_m: float = 10.0
    large_scale: LargeScaleModel = field(default_factory=LargeScaleModel)
    kappa_ac: float = 0.9
    kappa_frt: float = 0.9
    noise_dbm: float = -94.0
    p_uplink_w: float = 0.1
    p_fronthaul_w: float = 10.0
    schemes: tuple = ("bi_svd",)
    combiners: tuple = ("aware",)
    include_centralized: bool = False
    n_setups: int = 50
    n_realizations: int = 20
    master_seed: int = 1
    se_prelog: float = 1.0
    coherent_interference: bool = False

    def __post_init__(self):
        if isinstance(self.large_scale, dict):
            self.large_scale = LargeScaleModel(**self.large_scale)
        self.m_values = tuple(int(m) for m in self.m_values) or (int(self.M),)
        self.schemes = tuple(self.schemes)
        self.combiners = tuple(self.combiners)
        if min(self.L, self.K, self.N, self.M) < 1:
            raise ValueError("L, K, N, M must all be >= 1")
        if min(self.m_values) < self.N:
            raise ValueError("CPU antenna counts must satisfy M >= N")
        if min(self.n_setups, self.n_realizations) < 1:
            raise ValueError("setup and realization counts must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        for scheme in self.schemes:
            if scheme not in precoding.SCHEMES:
                raise ValueError(f"unknown precoder scheme {scheme!r}")
        for comb in self.combiners:
            if comb not in COMBINER_CHOICES:
                raise ValueError(f"unknown combiner {comb!r}")
        if not self.schemes or not self.combiners:
            raise ValueError("at least one scheme and one combiner required")
        if self.p_uplink_w <= 0 or self.p_fronthaul_w <= 0:
            raise ValueError("transmit powers must be positive")
        if self.se_prelog <= 0:
            raise ValueError("se_prelog must be positive")
        # Delegate range checks of the quality factors and noise level.
        _ = self.hardware

    @property
    def sigma2_w(self):
        """Noise variance in linear watts."""
        return 10 ** ((self.noise_dbm - 30.0) / 10.0)

    @property
    def hardware(self):
        return HardwareProfile(self.kappa_ac, self.kappa_frt, self.sigma2_w)

    @property
    def uplink_powers(self):
        return np.full(self.K, self.p_uplink_w)

    def to_dict(self):
        out = dataclasses.asdict(self)
        for key in ("m_values", "schemes", "combiners"):
            out[key] = list(out[key])
        return out

    @classmethod
    def from_dict(cls, data):
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass
class SeSample:
    """One (setup, realization, UE, scheme, combiner) spectral-efficiency record."""

    scenario: str
    setup_id: int
    realization_id: int
    ue_id: int
    scheme: str
    combiner: str
    M: int
    sinr: float
    se: float

    def sort_key(self):
        return (self.scenario, self.M, self.setup_id, self.realization_id,
                self.ue_id, self.scheme, self.combiner)


@dataclass
class CdfSeries:
    """Empirical CDF of one labeled sample population."""

    values: np.ndarray  # sorted SE values
    levels: np.ndarray  # strictly increasing to 1
    label: str

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.levels = np.asarray(self.levels, dtype=float)
        if self.values.shape != self.levels.shape or self.values.ndim != 1:
            raise ValueError("values and levels must be 1-D of equal length")
        if np.any(np.diff(self.values) < 0):
            raise ValueError("values must be nondecreasing")
        if (np.any(np.diff(self.levels) <= 0) or np.any(self.levels <= 0)
                or not np.isclose(self.levels[-1], 1.0)):
            raise ValueError("levels must increase strictly to 1")

    def median(self):
        return float(np.median(self.values))


@dataclass
class ExperimentResult:
    """Samples plus isolated per-trial failures of one campaign."""

    samples: list
    failures: list
    config: ExperimentConfig


def empirical_cdf(samples, label=""):
    """Standard empirical CDF over the SE values of the given samples."""
    values = np.asarray([getattr(s, "se", s) for s in samples], dtype=float)
    if values.size == 0:
        raise ValueError("cannot build a CDF from an empty selection")
    order = np.sort(values)
    levels = np.arange(1, order.size + 1) / order.size
    return CdfSeries(values=order, levels=levels, label=label)


def _evaluate_realization(config, M, setup_id, realization_id, h, G):
    """All requested variants on one shared channel draw -> SeSample list."""
    hw = config.hardware
    powers = config.uplink_powers
    sigma2 = config.sigma2_w
    samples = []
    d_ac = impairments.access_distortion_cov(h, powers, hw.kappa_ac)
    zero = np.zeros_like(d_ac)
    for scheme in config.schemes:
        pset = precoding.build_precoders(scheme, h, G, powers, sigma2,
                                         config.p_fronthaul_w)
        P = pset.matrices
        eff = impairments.effective_channels(G, P, h)
        d_frt = impairments.fronthaul_distortion_cov(P, h, powers, sigma2,
                                                     hw.kappa_frt)
        dist = DistortionCovariances(d_ac=d_ac, d_frt=d_frt)
        r_true = impairments.cpu_covariances(
            eff, P, G, dist, hw, powers,
            coherent_interference=config.coherent_interference)
        r_clean = None
        if "unaware" in config.combiners:
            clean = DistortionCovariances(d_ac=zero, d_frt=zero)
            r_clean = impairments.cpu_covariances(
                eff, P, G, clean, hw.perfect(), powers,
                coherent_interference=config.coherent_interference)
        for combiner in config.combiners:
            for k in range(config.K):
                if combiner == "aware":
                    v = combining.optimal_combiner(k, eff, r_true[k])
                else:
                    v = combining.optimal_combiner(k, eff, r_clean[k])
                sinr = combining.sinr_of_combiner(v, k, eff, r_true[k], hw, powers)
                samples.append(SeSample(
                    scenario=config.scenario, setup_id=setup_id,
                    realization_id=realization_id, ue_id=k, scheme=scheme,
                    combiner=combiner, M=M, sinr=sinr,
                    se=combining.spectral_efficiency(sinr, config.se_prelog)))
    if config.include_centralized:
        for k in range(config.K):
            sinr = combining.centralized_benchmark_sinr(k, h, powers, sigma2)
            samples.append(SeSample(
                scenario=config.scenario, setup_id=setup_id,
                realization_id=realization_id, ue_id=k, scheme="centralized",
                combiner="centralized", M=M, sinr=sinr,
                se=combining.spectral_efficiency(sinr, config.se_prelog)))
    return samples


def _run_setup(config, M, setup_id):
    """One random setup with all its realizations -> (samples, failures)."""
    samples, failures = [], []
    try:
        geometry = generate_geometry(
            config.L, config.K, config.N, M, config.area_side,
            config.elevation_m,
            seed=seeding.substream(config.master_seed, seeding.GEOMETRY, setup_id))
        beta_ac, beta_frt = large_scale_coefficients(
            geometry, config.large_scale,
            seed=seeding.substream(config.master_seed, seeding.SHADOWING, setup_id))
        corr = build_access_correlations(geometry, beta_ac, config.large_scale)
        corr_factors = psd_sqrt(corr)
        frt_factors = fronthaul_correlation_factors(geometry, config.large_scale)
    except Exception as err:  # geometry failure poisons the whole setup
        failures.append({"scenario": config.scenario, "M": M,
                         "setup_id": setup_id, "realization_id": None,
                         "error": f"{type(err).__name__}: {err}"})
        return samples, failures
    for r in range(config.n_realizations):
        try:
            h = sample_access_channels(
                corr, factors=corr_factors,
                seed=seeding.substream(config.master_seed,
                                       seeding.ACCESS_FADING, setup_id, r))
            G = sample_fronthaul_channels(
                geometry, beta_frt, config.large_scale, factors=frt_factors,
                seed=seeding.substream(config.master_seed,
                                       seeding.FRONTHAUL_FADING, setup_id, r))
            samples.extend(_evaluate_realization(config, M, setup_id, r, h, G))
        except Exception as err:
            failures.append({"scenario": config.scenario, "M": M,
                             "setup_id": setup_id, "realization_id": r,
                             "error": f"{type(err).__name__}: {err}"})
    return samples, failures


def _setup_task(args):
    # Trial matrices are small; BLAS threading only adds contention here, and
    # the campaign parallelizes across processes instead.
    with threadpool_limits(limits=1):
        return _run_setup(*args)


def run_experiment(config, n_workers=1):
    """Run the full campaign of one config; see ExperimentResult.

    Trials are independent; with n_workers > 1 the setups are distributed
    over processes. Samples are sorted into a canonical order, so the output
    is identical regardless of scheduling.
    """
    tasks = [(config, M, setup_id)
             for M in config.m_values
             for setup_id in range(config.n_setups)]
    samples, failures = [], []
    if n_workers and n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_setup_task, tasks))
    else:
        results = [_setup_task(t) for t in tasks]
    for chunk_samples, chunk_failures in results:
        samples.extend(chunk_samples)
        failures.extend(chunk_failures)
    samples.sort(key=SeSample.sort_key)
    return ExperimentResult(samples=samples, failures=failures, config=config)


def default_cdf_series(samples):
    """One CDF per (scenario, scheme, combiner, M) group, in sorted order."""
    groups = {}
    for s in samples:
        groups.setdefault((s.scenario, s.scheme, s.combiner, s.M), []).append(s)
    series = []
    for (scenario, scheme, combiner, m), members in sorted(groups.items()):
        label = f"{scenario} {scheme} {combiner} M={m}"
        series.append(empirical_cdf(members, label=label))
    return series


def slugify(label):
    return re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_")


def write_samples_csv(samples, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SAMPLE_COLUMNS)
        for s in samples:
            writer.writerow([s.scenario, s.setup_id, s.realization_id, s.ue_id,
                             s.scheme, s.combiner, s.M,
                             repr(float(s.sinr)), repr(float(s.se))])


def read_samples(path):
    """Samples back from CSV, bit-exact for round-tripped floats."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames) != SAMPLE_COLUMNS:
            raise ValueError(f"unexpected sample columns in {path}: "
                             f"{reader.fieldnames}")
        for row in reader:
            out.append(SeSample(
                scenario=row["scenario"], setup_id=int(row["setup_id"]),
                realization_id=int(row["realization_id"]),
                ue_id=int(row["ue_id"]), scheme=row["scheme"],
                combiner=row["combiner"], M=int(row["M"]),
                sinr=float(row["sinr"]), se=float(row["se"])))
    return out


def export_results(samples, cdfs, configs, out_dir, failures=None):
    """Persist one campaign: samples CSV, per-series CDF CSVs, config sidecar.

    Returns a dict of the written paths. The sidecar records the resolved
    configs including the master seed, for exact reproduction.
    """
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"samples": out / "samples.csv", "config": out / "config.json",
             "cdfs": []}
    write_samples_csv(samples, paths["samples"])
    for series in cdfs:
        cdf_path = out / f"cdf_{slugify(series.label)}.csv"
        with open(cdf_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["se", "cdf"])
            for value, level in zip(series.values, series.levels):
                writer.writerow([repr(float(value)), repr(float(level))])
        paths["cdfs"].append(cdf_path)
    if isinstance(configs, ExperimentConfig):
        configs = [configs]
    failure_path = None
    if failures:
        failure_path = out / "failures.json"
        with open(failure_path, "w") as fh:
            json.dump(failures, fh, indent=2)
        paths["failures"] = failure_path
    sidecar = {
        "configs": [c.to_dict() for c in configs],
        "master_seeds": [c.master_seed for c in configs],
        "sigma2_w": [c.sigma2_w for c in configs],
        "failure_log": str(failure_path) if failure_path else None,
    }
    with open(paths["config"], "w") as fh:
        json.dump(sidecar, fh, indent=2)
    return paths


def scenario_presets(name):
    """Preset config dicts of the bundled scenarios (may be more than one)."""
    presets = {
        "fig1": [dict(scenario="fig1", kappa_ac=1.0, kappa_frt=1.0,
                      schemes=("bi_svd",), combiners=("aware",),
                      include_centralized=True, m_values=(32, 64, 128))],
        "fig2": [dict(scenario="fig2", M=128, schemes=("identity",),
                      combiners=("aware", "unaware"), include_centralized=True)],
        "fig3": [dict(scenario="fig3", M=128, schemes=("bi_svd",),
                      combiners=("aware", "unaware"), include_centralized=True)],
        "fig4": [dict(scenario="fig4_access_only", M=128, kappa_frt=1.0,
                      schemes=("bi_svd",), combiners=("aware", "unaware")),
                 dict(scenario="fig4_both_hops", M=128,
                      schemes=("bi_svd",), combiners=("aware", "unaware"))],
        "custom": [dict(scenario="custom")],
    }
    if name not in presets:
        raise ValueError(f"unknown scenario {name!r}; "
                         f"choose from {sorted(presets)}")
    return [dict(p) for p in presets[name]]
