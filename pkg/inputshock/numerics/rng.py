"""Deterministic seed derivation for replications."""

from __future__ import annotations

import numpy as np


def derive_seeds(root_seed: int, count: int) -> list[int]:
    """Independent child seeds: replication ``r`` gets child ``r`` of
    ``SeedSequence(root_seed)``, so results do not depend on scheduling."""
    children = np.random.SeedSequence(root_seed).spawn(count)
    return [int(child.generate_state(1, dtype=np.uint64)[0]) for child in children]
