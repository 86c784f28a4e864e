"""Seedable random streams that reproduce bit-for-bit across implementations.

Every random draw in the engine flows through xoshiro256** seeded with
splitmix64. Both are small published integer algorithms, so any other
implementation (or another language) fed the same 64-bit seed produces the
same stream, which is what makes reports byte-identical across platforms.

Independent streams are split off a base seed with `derive_seed`, which
hashes a label path (dataset id, feature id, utterance index, ...) with
BLAKE2b. Labels, not draw order, define a stream, so adding a dataset to a
run never shifts the randomness of another.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK = (1 << 64) - 1


def derive_seed(base: int, *labels: str) -> int:
    """Derive a child seed from `base` and a path of string labels."""
    h = hashlib.blake2b(digest_size=8)
    h.update((base & _MASK).to_bytes(8, "little"))
    for label in labels:
        h.update(b"\x1f")
        h.update(label.encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


class Xoshiro256StarStar:
    """xoshiro256** 1.0 with its state filled from four splitmix64 steps."""

    __slots__ = ("_s",)

    def __init__(self, seed: int) -> None:
        s = seed & _MASK
        state = []
        for _ in range(4):
            s = (s + 0x9E3779B97F4A7C15) & _MASK
            z = s
            z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
            state.append(z ^ (z >> 31))
        self._s = state

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self._s
        r = (s1 * 5) & _MASK
        r = ((r << 7) | (r >> 57)) & _MASK
        r = (r * 9) & _MASK
        t = (s1 << 17) & _MASK
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = ((s3 << 45) | (s3 >> 19)) & _MASK
        self._s = [s0, s1, s2, s3]
        return r

    def block(self, n: int) -> np.ndarray:
        """Next `n` outputs as uint64. Hot path for noise synthesis."""
        s0, s1, s2, s3 = self._s
        mask = _MASK
        out = np.empty(n, dtype=np.uint64)
        for i in range(n):
            r = (s1 * 5) & mask
            r = ((r << 7) | (r >> 57)) & mask
            out[i] = (r * 9) & mask
            t = (s1 << 17) & mask
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= t
            s3 = ((s3 << 45) | (s3 >> 19)) & mask
        self._s = [s0, s1, s2, s3]
        return out

    def uniforms(self, n: int) -> np.ndarray:
        """`n` doubles in [0, 1), each from the top 53 bits of one output."""
        return (self.block(n) >> np.uint64(11)) * 2.0**-53

    def uniform_signed(self, n: int) -> np.ndarray:
        """`n` doubles in [-1, 1)."""
        return self.uniforms(n) * 2.0 - 1.0

    def normals(self, n: int, sigma: float = 1.0) -> np.ndarray:
        """`n` Box-Muller normal draws with standard deviation `sigma`.

        Consumes one block of 2*ceil(n/2) outputs; even positions feed the
        radius (mapped into (0, 1] so the log is finite), odd ones the angle.
        """
        k = (n + 1) // 2
        raw = (self.block(2 * k) >> np.uint64(11)) * 2.0**-53
        u1 = raw[0::2] + 2.0**-53
        u2 = raw[1::2]
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        pairs = np.empty(2 * k)
        pairs[0::2] = radius * np.cos(angle)
        pairs[1::2] = radius * np.sin(angle)
        return sigma * pairs[:n]

    def randbelow(self, n: int) -> int:
        """Integer in [0, n). Plain modulo; bias is ~n/2**64, irrelevant here."""
        if n <= 0:
            raise ValueError("randbelow requires n > 0")
        return self.next_u64() % n
