# Demo 5: a small Monte-Carlo campaign with CSV export.
#
# Runs a reduced version of the precoder-comparison scenario (both schemes,
# aware and unaware combining, impaired hardware, shared channel draws),
# prints the median spectral efficiency per variant, and exports the samples
# plus per-variant CDF series. The same outputs are produced at full scale
# by the command-line runner, e.g.
#
#     simulate --scenario fig3 --out results/fig3
#
# and the exported CDFs can be rendered with the separate figkit package.
#
# Run: python demos/05_cdf_campaign.py

from cellfree_af import experiment

config = experiment.ExperimentConfig(
    scenario="demo", M=64, schemes=("identity", "bi_svd"),
    combiners=("aware", "unaware"), include_centralized=True,
    n_setups=6, n_realizations=5, master_seed=99)

result = experiment.run_experiment(config, n_workers=2)
print(f"{len(result.samples)} samples, {len(result.failures)} failed trials")

cdfs = experiment.default_cdf_series(result.samples)
print("\nmedian spectral efficiency per variant:")
for series in cdfs:
    print(f"  {series.label:>40}: {series.median():.3f} bit/s/Hz")

paths = experiment.export_results(result.samples, cdfs, config,
                                  "results/demo_campaign")
print(f"\nwrote {paths['samples']} and {len(paths['cdfs'])} CDF files")
