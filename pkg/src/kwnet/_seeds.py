"""Deterministic seed derivation for independent random streams.

Everything random in this package flows through numpy's PCG64 generator,
seeded through SeedSequence so that child streams (one per Louvain run,
one per time bucket, one per synthetic corpus) are statistically
independent yet fully determined by a single master seed.
"""

import hashlib

import numpy as np

__all__ = ["child_seed", "make_rng"]

_U64 = np.uint64


def child_seed(master_seed: int, *key) -> int:
    """Derive a 64-bit seed from a master seed and a key path.

    Key parts may be ints or strings; strings are digested so that e.g. a
    bucket label "2020-03" maps to a stable integer on every platform.
    """
    parts = [int(master_seed) & 0xFFFFFFFFFFFFFFFF]
    for part in key:
        if isinstance(part, str):
            digest = hashlib.blake2b(part.encode("utf-8"), digest_size=8).digest()
            parts.append(int.from_bytes(digest, "big"))
        else:
            parts.append(int(part) & 0xFFFFFFFFFFFFFFFF)
    seq = np.random.SeedSequence(parts)
    return int(seq.generate_state(1, _U64)[0])


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed) & 0xFFFFFFFFFFFFFFFF)))
