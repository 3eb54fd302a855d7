"""Deterministic random-stream derivation from a single master seed.

Every stochastic routine in the package takes a ``numpy.random.Generator``.
The CLI owns exactly one master seed and derives a named substream per
(module, task, worker) so that results do not depend on scheduling order.
"""

from __future__ import annotations

import hashlib

import numpy as np


def substream_entropy(master_seed: int, *labels: object) -> list[int]:
    """Entropy words for the substream named by ``labels``.

    Labels are hashed individually, so ``("kpa", 3)`` and ``("kpa3",)``
    yield unrelated streams.
    """
    words = [int(master_seed) & 0xFFFFFFFFFFFFFFFF]
    for label in labels:
        digest = hashlib.sha256(repr(label).encode("utf-8")).digest()
        words.append(int.from_bytes(digest[:8], "big"))
    return words


def substream(master_seed: int, *labels: object) -> np.random.Generator:
    """Generator for the named substream; same (seed, labels) -> same draws."""
    seq = np.random.SeedSequence(substream_entropy(master_seed, *labels))
    return np.random.default_rng(seq)
