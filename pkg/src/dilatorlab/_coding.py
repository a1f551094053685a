"""Small combinatorial helpers shared by the order and dilator modules."""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterator, Sequence


def flat(*codes: Sequence[int]) -> tuple[int, ...]:
    """Self-delimiting concatenation of integer codes (each part is length-prefixed)."""
    out: list[int] = []
    for c in codes:
        out.append(len(c))
        out.extend(c)
    return tuple(out)


def shortlex(code: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    # Length first, then lexicographic: a well-order on finite integer tuples.
    return (len(code), code)


def colex_unrank(j: int, k: int) -> tuple[int, ...]:
    """The j-th k-element subset of the naturals in colexicographic order."""
    out = []
    for i in range(k, 0, -1):
        lo, hi = i - 1, i - 1
        while comb(hi + 1, i) <= j:
            hi = 2 * hi + 1
        # largest c with comb(c, i) <= j
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if comb(mid, i) <= j:
                lo = mid
            else:
                hi = mid - 1
        out.append(lo)
        j -= comb(lo, i)
    return tuple(reversed(out))


class LazySeq:
    """Random access over a (possibly infinite) iterator, caching what it has pulled."""

    def __init__(self, it):
        self._it = iter(it)
        self._buf: list = []
        self.exhausted = False

    def get(self, i: int):
        while len(self._buf) <= i and not self.exhausted:
            try:
                self._buf.append(next(self._it))
            except StopIteration:
                self.exhausted = True
        return self._buf[i] if i < len(self._buf) else None

    def has(self, i: int) -> bool:
        self.get(i)
        return i < len(self._buf)

    def prefix(self, n: int) -> list:
        if n <= 0:
            return []
        self.get(n - 1)
        return self._buf[:n]

    def known_length(self):
        return len(self._buf) if self.exhausted else None


def placements(m: int, arities: Sequence[int], bound: int | None) -> Iterator[tuple[int, tuple[int, ...], tuple[tuple[int, ...], ...]]]:
    """Ways to add argument tuples of the given arities to a support of size ``m``.

    Yields ``(m2, image, placed)``: the new support size, the increasing image of
    the old positions in ``range(m2)``, and one increasing position tuple per
    arity.  Every new position is used by some placed tuple.
    """
    top = m + sum(arities)
    if bound is not None:
        top = min(top, bound)
    for m2 in range(m, top + 1):
        everything = set(range(m2))
        for image in combinations(range(m2), m):
            fresh = everything.difference(image)
            pools = [list(combinations(range(m2), a)) for a in arities]
            for placed in _product(pools):
                if fresh:
                    used = set()
                    for p in placed:
                        used.update(p)
                    if not fresh <= used:
                        continue
                yield m2, image, placed


def _product(pools):
    if not pools:
        yield ()
        return
    for head in pools[0]:
        for rest in _product(pools[1:]):
            yield (head,) + rest
