"""SplitMix64 pseudo-random stream with fixed derivation rules.

Every draw is defined on top of :meth:`SplitMix64.next_u64` so that a fixture
generated here can be regenerated bit-for-bit by any implementation:

* ``state += 0x9E3779B97F4A7C15``; output is the SplitMix64 finalizer of state.
* ``random()`` = ``(next_u64() >> 11) / 2**53``.
* ``randint(lo, hi)`` = ``lo + floor(random() * (hi - lo + 1))``.
* ``choice(seq)`` = ``seq[randint(0, len(seq) - 1)]``.
* ``shuffle`` is Fisher-Yates from the back, ``j = randint(0, i)``.
"""

from __future__ import annotations

from typing import List, MutableSequence, Sequence, TypeVar

T = TypeVar("T")

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next_u64() >> 11) / 9007199254740992.0

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]`` inclusive."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + int(self.random() * (hi - lo + 1))

    def choice(self, seq: Sequence[T]) -> T:
        if not seq:
            raise IndexError("choice from empty sequence")
        return seq[self.randint(0, len(seq) - 1)]

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]

    def sample(self, population: Sequence[T], k: int) -> List[T]:
        """``k`` distinct items: the first ``k`` of a partial Fisher-Yates from the front."""
        pool = list(population)
        n = len(pool)
        for i in range(min(k, n)):
            j = self.randint(i, n - 1)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
