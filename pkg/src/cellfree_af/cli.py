"""Command-line campaign runner.

Usage:
    simulate --scenario fig1 --out results/
    simulate --scenario custom --config my.json --setups 10 --seed 7 --out run/

Flag precedence: scenario preset < config file < command-line flags. Exits 0
on success; if any trial failed, the failure-log path is printed and the
exit code is nonzero.
"""

import argparse
import json
import sys

from .experiment import (
    ExperimentConfig,
    default_cdf_series,
    export_results,
    run_experiment,
    scenario_presets,
)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="simulate",
        description="Monte-Carlo spectral-efficiency campaigns for uplink "
                    "cell-free massive MIMO with an amplify-and-forward "
                    "wireless fronthaul.")
    parser.add_argument("--scenario", default="custom",
                        choices=["fig1", "fig2", "fig3", "fig4", "custom"],
                        help="preset scenario bundle (default: custom)")
    parser.add_argument("--config", metavar="FILE",
                        help="JSON file with ExperimentConfig keys")
    parser.add_argument("--setups", type=int, help="number of random setups")
    parser.add_argument("--realizations", type=int,
                        help="channel realizations per setup")
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--M", dest="m_list",
                        help="comma-separated CPU antenna counts, e.g. 32,64,128")
    parser.add_argument("--kappa-ac", type=float, dest="kappa_ac",
                        help="access-side hardware quality factor in (0, 1]")
    parser.add_argument("--kappa-frt", type=float, dest="kappa_frt",
                        help="fronthaul-side hardware quality factor in (0, 1]")
    parser.add_argument("--precoder", choices=["identity", "bisvd"],
                        help="fronthaul precoder scheme")
    parser.add_argument("--combiner", choices=["aware", "unaware", "both"],
                        help="combiner selection")
    parser.add_argument("--out", default="results",
                        help="output directory (default: results)")
    parser.add_argument("--workers", type=int, default=1,
                        help="parallel worker processes (default: 1)")
    return parser


def _flag_overrides(args):
    overrides = {}
    if args.setups is not None:
        overrides["n_setups"] = args.setups
    if args.realizations is not None:
        overrides["n_realizations"] = args.realizations
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.m_list is not None:
        overrides["m_values"] = tuple(int(m) for m in args.m_list.split(","))
    if args.kappa_ac is not None:
        overrides["kappa_ac"] = args.kappa_ac
    if args.kappa_frt is not None:
        overrides["kappa_frt"] = args.kappa_frt
    if args.precoder is not None:
        overrides["schemes"] = ("bi_svd",) if args.precoder == "bisvd" \
            else ("identity",)
    if args.combiner is not None:
        overrides["combiners"] = ("aware", "unaware") if args.combiner == "both" \
            else (args.combiner,)
    return overrides


def resolve_configs(args):
    """Merge scenario presets, config-file values, and flag overrides."""
    file_values = {}
    if args.config:
        with open(args.config) as fh:
            file_values = json.load(fh)
    overrides = _flag_overrides(args)
    configs = []
    for preset in scenario_presets(args.scenario):
        merged = {**preset, **file_values, **overrides}
        configs.append(ExperimentConfig.from_dict(merged))
    return configs


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        configs = resolve_configs(args)
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1

    samples, failures = [], []
    for config in configs:
        result = run_experiment(config, n_workers=args.workers)
        samples.extend(result.samples)
        failures.extend(result.failures)
    samples.sort(key=lambda s: s.sort_key())

    cdfs = default_cdf_series(samples) if samples else []
    paths = export_results(samples, cdfs, configs, args.out, failures=failures)
    print(f"wrote {len(samples)} samples to {paths['samples']}")
    for cdf_path in paths["cdfs"]:
        print(f"wrote {cdf_path}")
    if failures:
        print(f"{len(failures)} trial(s) failed; see {paths['failures']}",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
