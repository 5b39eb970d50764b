"""Slow, definition-level reference implementations used to cross-check the library.

Nothing here shares code with the package beyond the plain data types.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product


def mask(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def bits(m: int, size: int) -> list[int]:
    return [i for i in range(size) if m >> i & 1]


def close(masks, size: int, s: int) -> int:
    """Intersection of every member containing ``s``."""
    out = (1 << size) - 1
    for m in masks:
        if m & s == s:
            out &= m
    return out


def anti_exchange(masks, size: int) -> bool:
    for X in masks:
        for x, y in permutations([i for i in range(size) if not X >> i & 1], 2):
            if close(masks, size, X | 1 << y) >> x & 1 and close(masks, size, X | 1 << x) >> y & 1:
                return False
    return True


def convex_geometry_axioms(masks, size: int) -> bool:
    """Closed sets ``X != A`` each have an ``a`` with ``X + {a}`` closed, plus empty and full present."""
    present = set(masks)
    full = (1 << size) - 1
    if 0 not in present or full not in present:
        return False
    return all(X == full or any((X | 1 << a) in present for a in range(size) if not X >> a & 1)
               for X in masks)


def caratheodory(masks, size: int, n: int) -> bool:
    for S in range(1 << size):
        cS = close(masks, size, S)
        for x in bits(cS, size):
            if not any(close(masks, size, mask(T)) >> x & 1
                       for k in range(1, n + 2) for T in combinations(bits(S, size), k)):
                return False
    return True


def carousel(masks, size: int, n: int) -> bool:
    for S in range(1 << size):
        cS = close(masks, size, S)
        members = bits(S, size)
        for x, y in product(bits(cS, size), repeat=2):
            if x == y:
                continue
            if not members:
                return False
            if not any(close(masks, size, 1 << y | mask(T)) >> x & 1 for T in product(members, repeat=n)):
                return False
    return True


def sharp_elementwise(masks, size: int) -> bool:
    cl = lambda *e: close(masks, size, mask(e))
    for x, y, a, b, c in product(range(size), repeat=5):
        yb = cl(y)
        if not cl(a, b, c) >> y & 1:
            continue
        if yb & cl(a, b) or yb & cl(b, c) or yb & cl(a, c) or yb & cl(x):
            continue
        if not (cl(y, a, b) >> x & 1 and cl(y, a, c) >> x & 1):
            continue
        if not cl(x) & cl(y, a):
            return False
    return True


def embeddings(src_masks, src_size, dst_masks, dst_size) -> list[tuple[int, ...]]:
    """Every injective map between closed-set lists preserving meets and joins."""
    src = list(src_masks)
    dst = list(dst_masks)
    pos = {m: i for i, m in enumerate(dst)}
    found = []
    for image in permutations(range(len(dst)), len(src)):
        phi = dict(zip(src, image))
        ok = True
        for p in src:
            for q in src:
                meet = pos[dst[phi[p]] & dst[phi[q]]]
                join = pos[close(dst, dst_size, dst[phi[p]] | dst[phi[q]])]
                if phi[p & q] != meet or phi[close(src, src_size, p | q)] != join:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.append(image)
    return found


# -- convex hull oracle: affinely independent subsets and barycentric solves --

def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of a consistent full-column-rank system, else ``None``."""
    m, k = len(rows), len(rows[0])
    aug = [list(r) + [v] for r, v in zip(rows, rhs)]
    piv_row = 0
    for col in range(k):
        p = next((r for r in range(piv_row, m) if aug[r][col] != 0), None)
        if p is None:
            return None
        aug[piv_row], aug[p] = aug[p], aug[piv_row]
        for r in range(m):
            if r != piv_row and aug[r][col] != 0:
                f = aug[r][col] / aug[piv_row][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[piv_row])]
        piv_row += 1
    if any(aug[r][k] != 0 for r in range(piv_row, m)):
        return None
    return [aug[r][k] / aug[r][r] for r in range(k)]


def in_hull_caratheodory(x, Y) -> bool:
    """``x in ch(Y)`` iff ``x`` is a nonnegative barycentric combination of at most ``d + 1`` points."""
    d = len(x)
    x = [Fraction(v) for v in x]
    Y = [[Fraction(v) for v in y] for y in Y]
    for k in range(1, min(d + 1, len(Y)) + 1):
        for T in combinations(Y, k):
            rows = [[p[j] for p in T] for j in range(d)] + [[Fraction(1)] * k]
            lam = _solve(rows, x + [Fraction(1)])
            if lam is not None and all(v >= 0 for v in lam):
                return True
    return False


def sharp_carousel_2(masks, size: int) -> bool:
    """Five-set rule over closed ``X, Y, A, B, C``, straight from its hypotheses."""
    fam = list(masks)
    cl = lambda s: close(fam, size, s)
    for A, B, C, Y in product(fam, repeat=4):
        if Y & ~cl(A | B | C):
            continue
        P = Y & cl(A | B)
        if Y & cl(B | C) != P or Y & cl(A | C) != P or P == Y:
            continue
        for X in fam:
            if X & Y != P or X == P:
                continue
            if X & ~cl(Y | A | B) or X & ~cl(Y | A | C) or Y & ~cl(X | B | C):
                continue
            if X & cl(A | Y) == P:
                return False
    return True
