"""Exhaustive and random generation of small closure systems and convex geometries."""
from __future__ import annotations

import random
from itertools import permutations
from typing import Iterable, Iterator

import numpy as np

from .closure import ClosedFamily, GroundSet, canonical_key, iter_bits

DEFAULT_LABELS = "abcdefghijklmnopqrstuvwxyz"


def default_ground(k: int) -> GroundSet:
    return GroundSet(tuple(DEFAULT_LABELS[:k]))


def closure_families(k: int) -> Iterator[ClosedFamily]:
    """Every intersection-closed family over ``k`` elements containing the empty and the full set.

    Brute force over all ``2**(2**k - 2)`` candidate families; meant for ``k <= 4``.
    """
    ground = default_ground(k)
    full = (1 << k) - 1
    middle = [m for m in range(1, full)]
    for choice in range(1 << len(middle)):
        members = [0, full] + [m for i, m in enumerate(middle) if choice >> i & 1]
        present = set(members)
        if all(a & b in present for a in members for b in members):
            yield ClosedFamily(ground, members)


def convex_geometries(k: int) -> Iterator[ClosedFamily]:
    """Every convex geometry on ``k`` labelled elements, in a fixed order.

    Works on the complements of closed sets (an antimatroid: union-closed and
    accessible) and decides subsets in canonical order, so each family is
    produced exactly once.
    """
    ground = default_ground(k)
    full = (1 << k) - 1
    order = sorted(range(1, full + 1), key=canonical_key)
    feasible = {0}

    def accessible(s: int) -> bool:
        return any((s & ~(1 << i)) in feasible for i in iter_bits(s))

    def forced(s: int) -> bool:
        acc = 0
        for f in feasible:
            if f & ~s == 0 and f != s:
                acc |= f
        return acc == s

    def rec(pos: int):
        if pos == len(order):
            if full in feasible:
                yield ClosedFamily(ground, (full & ~f for f in feasible))
            return
        s = order[pos]
        if forced(s):
            if not accessible(s):
                return
            feasible.add(s)
            yield from rec(pos + 1)
            feasible.discard(s)
            return
        yield from rec(pos + 1)
        if accessible(s):
            feasible.add(s)
            yield from rec(pos + 1)
            feasible.discard(s)

    yield from rec(0)


def random_convex_geometry(k: int, rng: random.Random, words: int | None = None) -> ClosedFamily:
    """Random convex geometry: complements of the union-closure of prefixes of random orderings."""
    ground = default_ground(k)
    full = (1 << k) - 1
    words = words if words is not None else rng.randint(1, 2 * k)
    feasible = {0}
    for _ in range(words):
        perm = list(range(k))
        rng.shuffle(perm)
        acc = 0
        for i in perm:
            acc |= 1 << i
            feasible.add(acc)
    changed = True
    while changed:
        changed = False
        for a in list(feasible):
            for b in list(feasible):
                if a | b not in feasible:
                    feasible.add(a | b)
                    changed = True
    return ClosedFamily(ground, (full & ~f for f in feasible))


_PERM_CACHE: dict[int, np.ndarray] = {}


def _perm_tables(k: int) -> np.ndarray:
    """``tables[p, m]`` is mask ``m`` with its bits relabelled by permutation ``p``."""
    if k not in _PERM_CACHE:
        perms = list(permutations(range(k)))
        tab = np.zeros((len(perms), 1 << k), dtype=np.int64)
        for p, perm in enumerate(perms):
            for m in range(1 << k):
                tab[p, m] = sum(1 << perm[i] for i in iter_bits(m))
        _PERM_CACHE[k] = tab
    return _PERM_CACHE[k]


def canonical_form(family: ClosedFamily) -> tuple[int, ...]:
    """Isomorphism invariant: lexicographically least sorted mask list over all relabellings."""
    tab = _perm_tables(family.ground.size)
    imgs = np.sort(tab[:, np.array(family.masks, dtype=np.int64)], axis=1)
    best = imgs[np.lexsort(imgs.T[::-1])[0]]
    return tuple(int(v) for v in best)


def isomorphism_classes(families: Iterable[ClosedFamily]) -> list[ClosedFamily]:
    """One representative (the first seen) per isomorphism class."""
    seen = {}
    for fam in families:
        key = (fam.ground.size, canonical_form(fam))
        if key not in seen:
            seen[key] = fam
    return list(seen.values())
