"""Deterministic random streams for reproducible corpus construction.

Python's built-in hash() is salted per process, so stream derivation goes
through SHA-256 instead. Draws are funneled through Random.random(): it is
the one Mersenne Twister method whose output sequence is guaranteed stable
across Python versions and platforms (randrange/choice/shuffle carry no such
guarantee), which keeps corpora byte-identical wherever they are rebuilt.
"""

from __future__ import annotations

import hashlib
import random
from typing import Sequence, TypeVar

T = TypeVar("T")

_SEP = b"\x1f"


def derive_seed(base_seed: int, *parts: int | str) -> int:
    """Mix a base seed with string/int parts into a stable 64-bit seed."""
    h = hashlib.sha256()
    h.update(str(int(base_seed)).encode("utf-8"))
    for part in parts:
        h.update(_SEP)
        h.update(str(part).encode("utf-8"))
    return int.from_bytes(h.digest()[:8], "big")


def derive_rng(base_seed: int, *parts: int | str) -> random.Random:
    """A Random instance keyed by (base_seed, *parts), e.g. per table id."""
    return random.Random(derive_seed(base_seed, *parts))


def uniform_int(rng: random.Random, lo: int, hi: int) -> int:
    """Uniform integer in [lo, hi], both ends inclusive."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    span = hi - lo + 1
    return lo + min(int(rng.random() * span), span - 1)


def uniform_float(rng: random.Random, lo: float, hi: float) -> float:
    """Uniform float in [lo, hi)."""
    return lo + rng.random() * (hi - lo)


def choose(rng: random.Random, seq: Sequence[T]) -> T:
    """Uniform choice from a non-empty sequence."""
    if not seq:
        raise ValueError("cannot choose from an empty sequence")
    return seq[uniform_int(rng, 0, len(seq) - 1)]


def sample_indices(rng: random.Random, n: int, k: int) -> list[int]:
    """k distinct indices drawn without replacement from range(n).

    Partial Fisher-Yates over an explicit index list; output order is the
    draw order.
    """
    if not 0 <= k <= n:
        raise ValueError(f"cannot draw {k} from {n}")
    pool = list(range(n))
    out = []
    for i in range(k):
        j = uniform_int(rng, i, n - 1)
        pool[i], pool[j] = pool[j], pool[i]
        out.append(pool[i])
    return out
