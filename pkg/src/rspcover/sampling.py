"""Reproducible uniform sampling of the sphere."""
from __future__ import annotations

import math

import numpy as np

# Samples per independently seeded chunk. Fixed, so a sample's value depends
# only on (seed, index) and never on how the work is split.
SAMPLE_CHUNK = 1 << 16


def sample_sphere(seed: int, lo: int, hi: int) -> np.ndarray:
    """Uniform points ``lo..hi-1`` of the stream identified by ``seed``.

    Sample ``k`` belongs to chunk ``k // SAMPLE_CHUNK``, whose generator is
    seeded by ``(seed, chunk)``; any range can be drawn independently.
    """
    out = []
    first, last = lo // SAMPLE_CHUNK, (hi - 1) // SAMPLE_CHUNK
    for chunk in range(first, last + 1):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, chunk])))
        z = rng.uniform(-1.0, 1.0, SAMPLE_CHUNK)
        az = rng.uniform(0.0, 2.0 * math.pi, SAMPLE_CHUNK)
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        block = np.column_stack([r * np.cos(az), r * np.sin(az), z])
        start = chunk * SAMPLE_CHUNK
        out.append(block[max(lo, start) - start:min(hi, start + SAMPLE_CHUNK) - start])
    return np.vstack(out)
