"""Seeded, splittable random streams"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class RngStream:
    """Counter-based random stream (Philox) derived from a master seed and a task path

    Two streams with the same seed and path produce the same values for the same
    call sequence. Use ``child`` to hand independent streams to layers or sweep cells.

    Args:
        seed (int): 64-bit master seed
        path (tuple[int, ...]): spawn path identifying the task
    """

    seed: int
    path: tuple[int, ...] = ()
    generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ValueError(f"RngStream: seed must be non-negative, got {self.seed}")
        sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.path)
        self.generator = np.random.Generator(np.random.Philox(sequence))

    def child(self, index: int) -> "RngStream":
        """Derive an independent stream for task ``index``"""
        return RngStream(self.seed, self.path + (index,))

    def permutation(self, n: int) -> np.ndarray:
        """Random permutation of ``range(n)``"""
        return self.generator.permutation(n)


def as_stream(seed_or_stream: "int | RngStream") -> RngStream:
    """Accept either a plain seed or an existing stream"""
    if isinstance(seed_or_stream, RngStream):
        return seed_or_stream
    return RngStream(int(seed_or_stream))
