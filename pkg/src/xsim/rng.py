"""Deterministic random-stream plumbing.

Sampling uses numpy's Philox generator, which is counter based: a stream is
fully determined by its two-word key. The split rules are fixed so that every
sampled artifact can be replayed byte for byte from (seed, structure):

* measurement settings draw from ``substream(seed, setting_index)`` where the
  setting index enumerates Pauli pairs row-major (XX=0, XY=1, ..., ZZ=8),
* readout bit-flips for a setting use ``substream(seed, 9 + setting_index)``,
* sweep experiments derive one seed per grid/time point with
  ``derive_seed(master_seed, point_index)`` (a SeedSequence spawn).
"""

from __future__ import annotations

import numpy as np

READOUT_STREAM_OFFSET = 9


def substream(seed: int, stream: int) -> np.random.Generator:
    """Independent generator keyed by (seed, stream)."""
    key = np.array([np.uint64(int(seed) & 0xFFFFFFFFFFFFFFFF), np.uint64(int(stream))])
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(master: int, *path: int) -> int:
    """Collapse (master, path...) into a fresh 63-bit seed, reproducibly."""
    ss = np.random.SeedSequence(entropy=int(master), spawn_key=tuple(int(p) for p in path))
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
