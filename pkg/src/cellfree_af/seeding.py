"""Deterministic seed derivation for Monte-Carlo campaigns.

Every random draw in a campaign is keyed by (master seed, purpose, setup,
realization) so that serial and parallel executions consume identical
substreams regardless of scheduling order.
"""

import numpy as np

# Purpose tags for the independent substreams of one campaign.
GEOMETRY = 0
SHADOWING = 1
ACCESS_FADING = 2
FRONTHAUL_FADING = 3
SYMBOLS = 4


def substream(master_seed, *path):
    """SeedSequence for one named substream below a master seed."""
    entropy = [int(master_seed)] + [int(p) for p in path]
    if any(p < 0 for p in entropy):
        raise ValueError("seed path components must be non-negative integers")
    return np.random.SeedSequence(entropy)
