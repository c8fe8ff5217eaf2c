"""Deterministic named random streams.

Every random draw in the toolkit flows from a single top-level seed
through named substreams, so sub-draws are order-independent and runs
are byte-reproducible.
"""

import hashlib

import numpy as np


def stream(seed, name):
    """A numpy Generator for substream `name` of `seed`."""
    digest = hashlib.blake2b(
        name.encode() + b"/" + str(int(seed)).encode(), digest_size=8
    ).digest()
    return np.random.default_rng(int.from_bytes(digest, "big"))


def units(rng, count, p):
    """`count` nonzero scalars mod p."""
    return [int(x) for x in rng.integers(1, p, size=count)]


def scalars(rng, count, p):
    """`count` scalars mod p (zero allowed)."""
    return [int(x) for x in rng.integers(0, p, size=count)]
