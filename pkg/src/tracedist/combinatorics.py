"""Exact counting of non-crossing permutations by cycle structure.

Conventions (used everywhere in the package):

* permutations act on ``{0, ..., n-1}`` and are stored as image tuples,
  ``p[i]`` being the image of ``i``;
* the long cycle is ``pi(i) = (i + 1) % n``;
* B-cycles are the cycles of ``p``, A-cycles the cycles of ``pi^-1 o p``,
  i.e. of ``i -> (p[i] - 1) % n``;
* ``p`` is non-crossing iff ``C(pi^-1 o p) + C(p) == n + 1``.

Every count is a Python ``int``; nothing here touches floating point.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

MAX_ENUMERATION_N = 12

# rows per enumeration chunk: permutations of the trailing 10 positions
_CHUNK_TAIL = 10


@dataclass(frozen=True)
class CyclePartition:
    """Multiset ``(1^l1, 2^l2, ..., n^ln)`` of cycle lengths.

    ``multiplicities[i - 1]`` is the number of cycles with ``i`` elements.
    """

    n: int
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        mult = tuple(int(m) for m in self.multiplicities)
        if len(mult) < self.n:
            mult = mult + (0,) * (self.n - len(mult))
        object.__setattr__(self, "multiplicities", mult)
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if len(mult) != self.n:
            raise ValueError(f"expected {self.n} multiplicities, got {len(mult)}")
        if any(m < 0 for m in mult):
            raise ValueError(f"multiplicities must be non-negative: {mult}")
        total = sum(i * m for i, m in enumerate(mult, start=1))
        if total != self.n:
            raise ValueError(f"cycle lengths sum to {total}, expected {self.n}")

    @classmethod
    def from_cycle_lengths(cls, lengths, n: int | None = None) -> "CyclePartition":
        lengths = [int(c) for c in lengths]
        n = sum(lengths) if n is None else n
        mult = [0] * n
        for c in lengths:
            if not 1 <= c <= n:
                raise ValueError(f"cycle length {c} outside 1..{n}")
            mult[c - 1] += 1
        return cls(n, tuple(mult))

    @property
    def length(self) -> int:
        """Number of cycles, ``l = sum_i lambda_i``."""
        return sum(self.multiplicities)

    @property
    def is_even(self) -> bool:
        """True when every cycle has an even number of elements."""
        return all(m == 0 for i, m in enumerate(self.multiplicities, start=1) if i % 2)

    def cycle_lengths(self) -> list[int]:
        out = []
        for i, m in enumerate(self.multiplicities, start=1):
            out.extend([i] * m)
        return out

    def __str__(self):
        parts = [f"{i}^{m}" for i, m in enumerate(self.multiplicities, start=1) if m]
        return "(" + " ".join(parts) + ")"


@dataclass(frozen=True)
class NonCrossingPermutation:
    mapping: tuple[int, ...]
    b_cycle_type: CyclePartition
    a_cycle_count: int


def _check_nk(n, k, kmax):
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not 1 <= k <= kmax:
        raise ValueError(f"k must lie in 1..{kmax} for n={n}, got {k}")


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    return math.comb(2 * n, n) // (n + 1)


def narayana(n: int, k: int) -> int:
    """Number of non-crossing permutations of ``n`` elements with ``k`` cycles."""
    _check_nk(n, k, n)
    num = math.comb(n, k) * math.comb(n, k - 1)
    q, r = divmod(num, n)
    assert r == 0
    return q


def kreweras(part: CyclePartition) -> int:
    """Number of non-crossing permutations whose cycle type is ``part``.

    ``n! / (lambda_1! ... lambda_n! (n + 1 - l)!)``
    """
    if not isinstance(part, CyclePartition):
        raise TypeError("kreweras expects a CyclePartition")
    den = math.factorial(part.n + 1 - part.length)
    for m in part.multiplicities:
        den *= math.factorial(m)
    q, r = divmod(math.factorial(part.n), den)
    assert r == 0
    return q


def even_narayana(n: int, k: int) -> int:
    """Non-crossing permutations with ``k`` cycles, all of even length."""
    if n < 2 or n % 2:
        raise ValueError(f"n must be a positive even integer, got {n}")
    _check_nk(n, k, n // 2)
    num = 2 * math.comb(n // 2, k) * math.comb(n, k - 1)
    q, r = divmod(num, n)
    assert r == 0
    return q


def integer_partitions(n: int, parts: int | None = None, even_only: bool = False) -> Iterator[CyclePartition]:
    """All cycle partitions of ``n``, optionally with a fixed number of cycles."""

    def rec(remaining, largest, acc):
        if remaining == 0:
            yield list(acc)
            return
        for c in range(min(largest, remaining), 0, -1):
            if even_only and c % 2:
                continue
            acc.append(c)
            yield from rec(remaining - c, c, acc)
            acc.pop()

    for lengths in rec(n, n, []):
        if parts is None or len(lengths) == parts:
            yield CyclePartition.from_cycle_lengths(lengths, n)


def cycle_lengths(p) -> list[int]:
    n = len(p)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i]:
            continue
        c = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            c += 1
        out.append(c)
    return out


def a_cycle_permutation(p) -> tuple[int, ...]:
    """``pi^-1 o p`` for ``pi(i) = (i + 1) % n``."""
    n = len(p)
    return tuple((p[i] - 1) % n for i in range(n))


def is_noncrossing(p) -> bool:
    return len(cycle_lengths(a_cycle_permutation(p))) + len(cycle_lengths(p)) == len(p) + 1


def _lex_permutations(m: int) -> np.ndarray:
    """All permutations of ``range(m)`` in lexicographic order, one per row."""
    out = np.zeros((1, 0), dtype=np.int8)
    for j in range(1, m + 1):
        blocks = []
        for first in range(j):
            rest = np.delete(np.arange(j, dtype=np.int8), first)
            block = np.empty((out.shape[0], j), dtype=np.int8)
            block[:, 0] = first
            block[:, 1:] = rest[out]
            blocks.append(block)
        out = np.concatenate(blocks, axis=0)
    return out


def _cycle_counts(perms: np.ndarray) -> np.ndarray:
    """Cycle count of every row; a cycle is counted at its smallest element."""
    n = perms.shape[1]
    idx = np.arange(n, dtype=np.int8)
    least = np.broadcast_to(idx, perms.shape).copy()
    cur = perms.copy()
    for _ in range(n - 1):
        np.minimum(least, cur, out=least)
        cur = np.take_along_axis(perms, cur.astype(np.intp), axis=1)
    return (least == idx).sum(axis=1)


def _permutation_chunks(n: int) -> Iterator[np.ndarray]:
    head = max(0, n - _CHUNK_TAIL)
    tail = _lex_permutations(n - head)
    for prefix in itertools.permutations(range(n), head):
        rest = np.array(sorted(set(range(n)) - set(prefix)), dtype=np.int8)
        chunk = np.empty((tail.shape[0], n), dtype=np.int8)
        chunk[:, :head] = prefix
        chunk[:, head:] = rest[tail]
        yield chunk


def enumerate_noncrossing(n: int) -> list[NonCrossingPermutation]:
    """Brute-force oracle: filter all of ``S_n`` by the maximal-cycle criterion.

    Returned in lexicographic order of the permutation word.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > MAX_ENUMERATION_N:
        raise ValueError(f"n={n} exceeds the enumeration guard {MAX_ENUMERATION_N}")
    out = []
    for chunk in _permutation_chunks(n):
        a_perm = (chunk.astype(np.int16) - 1) % n
        cb = _cycle_counts(chunk)
        ca = _cycle_counts(a_perm.astype(np.int8))
        keep = np.nonzero(cb + ca == n + 1)[0]
        for row in keep:
            p = tuple(int(v) for v in chunk[row])
            out.append(
                NonCrossingPermutation(
                    mapping=p,
                    b_cycle_type=CyclePartition.from_cycle_lengths(cycle_lengths(p), n),
                    a_cycle_count=int(ca[row]),
                )
            )
    return out


def count_by_cycle_type(perms) -> dict[CyclePartition, int]:
    counts: dict[CyclePartition, int] = {}
    for p in perms:
        counts[p.b_cycle_type] = counts.get(p.b_cycle_type, 0) + 1
    return counts


def narayana_from_kreweras(n: int, k: int) -> int:
    return sum(kreweras(part) for part in integer_partitions(n, parts=k))


def even_narayana_from_kreweras(n: int, k: int) -> int:
    return sum(kreweras(part) for part in integer_partitions(n, parts=k, even_only=True))
