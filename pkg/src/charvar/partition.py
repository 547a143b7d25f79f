"""Integer partitions with multiplicities, used for both semisimple type and
eigenvalue-coincidence type."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable


@dataclass(frozen=True, order=True)
class Partition:
    """A partition ``r = a_1 r_1 + ... + a_s r_s`` with ``r_1 > ... > r_s > 0``.

    ``parts`` holds ``(r_t, a_t)`` pairs in decreasing ``r_t``.
    """

    parts: tuple[tuple[int, int], ...]

    def __post_init__(self):
        sizes = [p for p, _ in self.parts]
        if any(p <= 0 or a <= 0 for p, a in self.parts):
            raise ValueError(f"invalid partition parts {self.parts}")
        if sizes != sorted(set(sizes), reverse=True):
            raise ValueError(f"part sizes must be strictly decreasing: {self.parts}")

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> Partition:
        c = Counter(int(s) for s in sizes)
        return cls(tuple(sorted(c.items(), reverse=True)))

    @property
    def sizes(self) -> tuple[int, ...]:
        """Flat, decreasing list of part sizes, e.g. ``(2, 1)``."""
        return tuple(p for p, a in self.parts for _ in range(a))

    @property
    def total(self) -> int:
        return sum(p * a for p, a in self.parts)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.parts)

    @property
    def distinct(self) -> int:
        """Number of parts counted with multiplicity (distinct eigenvalues for a sigma type)."""
        return sum(a for _, a in self.parts)

    def __str__(self):
        return "(" + ",".join(str(s) for s in self.sizes) + ")"


@lru_cache(maxsize=None)
def partitions_of(r: int) -> tuple[Partition, ...]:
    """All partitions of ``r``, in reverse lexicographic order of sizes."""
    out = []

    def rec(remaining, largest, acc):
        if remaining == 0:
            out.append(Partition.from_sizes(acc))
            return
        for p in range(min(remaining, largest), 0, -1):
            rec(remaining - p, p, acc + [p])

    rec(r, r, [])
    return tuple(out)
