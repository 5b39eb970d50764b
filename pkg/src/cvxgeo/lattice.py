"""Lattices of closed sets and sublattice (sub-geometry) embeddings."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .closure import ClosedFamily, ClosureReport, Subset, popcount
from .errors import CapExceeded, CvxGeoError, GroundSetMismatch, PreconditionError

SOURCE_CAP = 64
TARGET_CAP = 512
ASSOCIATIVITY_CAP = 160


class LatticeAxiomError(CvxGeoError):
    """The operation tables of a family violate a lattice law."""


class Lattice:
    """Closed sets of a family with ``meet = intersection`` and ``join = closure of union``.

    Elements are indexed in the family's canonical order; ``meet`` and
    ``join`` are ``N x N`` index tables.
    """

    def __init__(self, family: ClosedFamily):
        self.family = family
        self.bits = np.array(family.masks, dtype=np.uint64)
        n = len(self.bits)
        if family.table is not None:
            idx = np.full(1 << family.ground.size, -1, dtype=np.int64)
            idx[self.bits.astype(np.int64)] = np.arange(n)
            self.meet = idx[(self.bits[:, None] & self.bits[None, :]).astype(np.int64)]
            unions = (self.bits[:, None] | self.bits[None, :]).astype(np.int64)
            self.join = idx[family.table[unions].astype(np.int64)]
        else:
            pos = family._index
            masks = family.masks
            self.meet = np.array([[pos[a & b] for b in masks] for a in masks], dtype=np.int64)
            self.join = np.array([[pos[family.close_bits(a | b)] for b in masks] for a in masks], dtype=np.int64)
        self.leq = (self.bits[:, None] & ~self.bits[None, :]) == 0

    def __len__(self) -> int:
        return len(self.bits)

    def __repr__(self) -> str:
        return f"Lattice({len(self)} elements over {list(self.family.ground.labels)})"

    @property
    def ground(self):
        return self.family.ground

    def element(self, i: int) -> Subset:
        return self.family.ground.wrap(self.family.masks[i])

    @property
    def elements(self) -> list[Subset]:
        return list(self.family)

    def index(self, s: Subset) -> int:
        if s.ground != self.family.ground:
            raise GroundSetMismatch("subset is not over the lattice's ground set")
        return self.family.index_of(s.bits)

    @cached_property
    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs ``(lower, upper)`` of the Hasse diagram, in index order."""
        lt = self.leq & ~np.eye(len(self), dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        cov = lt & ~between
        return [(int(i), int(j)) for i, j in np.argwhere(cov)]

    @cached_property
    def cover_degree(self) -> np.ndarray:
        deg = np.zeros(len(self), dtype=np.int64)
        for i, j in self.covers:
            deg[i] += 1
            deg[j] += 1
        return deg

    @cached_property
    def interval_sizes(self) -> np.ndarray:
        """``[i, j]`` is the number of elements ``z`` with ``i <= z <= j``."""
        leq = self.leq.astype(np.float64)
        return np.rint(leq @ leq).astype(np.int64)

    @cached_property
    def depth(self) -> np.ndarray:
        """Length of the longest chain from the bottom to each element."""
        d = np.zeros(len(self), dtype=np.int64)
        # canonical order is a linear extension (sizes increase along chains)
        for j in range(len(self)):
            below = np.flatnonzero(self.leq[:, j])
            below = below[below != j]
            if below.size:
                d[j] = d[below].max() + 1
        return d

    @cached_property
    def height_above(self) -> np.ndarray:
        """Length of the longest chain from each element to the top."""
        h = np.zeros(len(self), dtype=np.int64)
        for i in range(len(self) - 1, -1, -1):
            above = np.flatnonzero(self.leq[i, :])
            above = above[above != i]
            if above.size:
                h[i] = h[above].max() + 1
        return h

    def to_dot(self, name: str = "lattice") -> str:
        """Hasse diagram in Graphviz DOT, bottom to top."""
        lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
        for i, s in enumerate(self.family):
            lines.append(f'  n{i} [label="{s}"];')
        for i, j in self.covers:
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _verify_axioms(lat: Lattice) -> None:
    M, J = lat.meet, lat.join
    n = len(lat)
    ar = np.arange(n)
    if (M < 0).any() or (J < 0).any():
        raise LatticeAxiomError("meet or join leaves the family")
    if not (M == M.T).all() or not (J == J.T).all():
        raise LatticeAxiomError("operations are not commutative")
    if not (M[ar, ar] == ar).all() or not (J[ar, ar] == ar).all():
        raise LatticeAxiomError("operations are not idempotent")
    if not (M[ar[:, None], J] == ar[:, None]).all() or not (J[ar[:, None], M] == ar[:, None]).all():
        raise LatticeAxiomError("absorption fails")
    if n <= ASSOCIATIVITY_CAP:
        for T in (M, J):
            left = T[T[:, :, None], ar[None, None, :]]
            right = T[ar[:, None, None], T[None, :, :]]
            if not (left == right).all():
                raise LatticeAxiomError("operations are not associative")


def build_lattice(family: ClosedFamily) -> Lattice:
    lat = Lattice(family)
    _verify_axioms(lat)
    return lat


@dataclass(frozen=True)
class EmbeddingMap:
    """A map from the elements of ``source`` to those of ``target`` (by index)."""

    source: Lattice
    target: Lattice
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != len(self.source):
            raise PreconditionError("mapping must be total on the source lattice")
        if any(not 0 <= t < len(self.target) for t in self.mapping):
            raise PreconditionError("mapping points outside the target lattice")

    @classmethod
    def from_function(cls, source: Lattice, target: Lattice, fn) -> "EmbeddingMap":
        """Build from a function on :class:`Subset` values."""
        return cls(source, target, tuple(target.index(fn(s)) for s in source.family))

    def image(self, s: Subset) -> Subset:
        return self.target.element(self.mapping[self.source.index(s)])

    def pairs(self) -> Iterator[tuple[Subset, Subset]]:
        for i, t in enumerate(self.mapping):
            yield self.source.element(i), self.target.element(t)

    def __str__(self) -> str:
        return "\n".join(f"{a} -> {b}" for a, b in self.pairs())


def verify_embedding(m: EmbeddingMap) -> ClosureReport:
    """Injective, meet-preserving and join-preserving, checked on every pair."""
    phi = np.array(m.mapping, dtype=np.int64)
    S, T = m.source, m.target
    seen = {}
    for i, t in enumerate(m.mapping):
        if t in seen:
            return ClosureReport(False, {"kind": "injectivity", "X": S.element(seen[t]), "Y": S.element(i)})
        seen[t] = i
    meet_ok = phi[S.meet] == T.meet[phi[:, None], phi[None, :]]
    join_ok = phi[S.join] == T.join[phi[:, None], phi[None, :]]
    for kind, ok in (("meet", meet_ok), ("join", join_ok)):
        bad = np.argwhere(~ok)
        if bad.size:
            i, j = (int(v) for v in bad[0])
            return ClosureReport(False, {"kind": kind, "X": S.element(i), "Y": S.element(j)})
    return ClosureReport(True)


class _Search:
    """Backtracking over a boolean domain matrix ``dom[x, t]`` ("x may map to t").

    Every assignment prunes the other rows by order consistency, injectivity
    and the meet/join rule ``dom[x', t'] => dom[x' ^ x, t' ^ t]``; forced
    meets, joins and singleton domains are assigned immediately.  The next
    element to branch on is the one with the fewest candidates.
    """

    def __init__(self, G: Lattice, H: Lattice):
        self.G, self.H = G, H
        # an order embedding maps the chains and the down/up-sets of x injectively into those of t
        self.dom0 = (H.depth[None, :] >= G.depth[:, None]) & (H.height_above[None, :] >= G.height_above[:, None])
        for lg, lh in ((G.leq.sum(axis=0), H.leq.sum(axis=0)), (G.leq.sum(axis=1), H.leq.sum(axis=1))):
            self.dom0 &= lh[None, :] >= lg[:, None]
        # value order: targets comparable to the most elements first (most room), then index
        comparable = H.leq.sum(axis=0) + H.leq.sum(axis=1)
        self.value_rank = np.empty(len(H), dtype=np.int64)
        self.value_rank[np.lexsort((np.arange(len(H)), -comparable))] = np.arange(len(H))
        # when labels are shared, the set with the same labels is tried first
        self.preferred = np.full(len(G), -1, dtype=np.int64)
        hg = H.family.ground
        if all(lab in hg._index for lab in G.family.ground.labels):
            for i, s in enumerate(G.family):
                bits = hg.bits_of(s.labels)
                if bits in H.family._index:
                    self.preferred[i] = H.family.index_of(bits)
        self.g_int = G.interval_sizes
        self.h_int = H.interval_sizes
        rank = sorted(range(len(G)), key=lambda i: (-int(G.cover_degree[i]), -popcount(G.family.masks[i]), i))
        self.rank = np.empty(len(G), dtype=np.int64)
        self.rank[rank] = np.arange(len(G))

    def _assign(self, dom: np.ndarray, phi: np.ndarray, x: int, t: int) -> bool:
        G, H = self.G, self.H
        queue = [(x, t)]
        while queue:
            x, t = queue.pop()
            if phi[x] == t:
                continue
            if phi[x] != -1 or not dom[x, t]:
                return False
            phi[x] = t
            dom[:, t] = False
            dom[x] = False
            dom[x, t] = True
            dom &= G.leq[:, x][:, None] == H.leq[:, t][None, :]
            dom &= G.leq[x, :][:, None] == H.leq[t, :][None, :]
            dom &= self.h_int[:, t][None, :] >= self.g_int[:, x][:, None]
            dom &= self.h_int[t, :][None, :] >= self.g_int[x, :][:, None]
            dom &= dom[G.meet[:, x][:, None], H.meet[:, t][None, :]]
            dom &= dom[G.join[:, x][:, None], H.join[:, t][None, :]]
            sizes = dom.sum(axis=1)
            if not sizes.all():
                return False
            ys = np.flatnonzero(phi >= 0)
            for table_g, table_h in ((G.meet, H.meet), (G.join, H.join)):
                ms = table_g[x, ys]
                tms = table_h[t, phi[ys]]
                for m, tm in zip(ms[phi[ms] != tms], tms[phi[ms] != tms]):
                    queue.append((int(m), int(tm)))
            for r in np.flatnonzero((sizes == 1) & (phi == -1)):
                queue.append((int(r), int(np.argmax(dom[r]))))
        return True

    def run(self, limit: int | None = None, max_nodes: int | None = None) -> Iterator[tuple[int, ...]]:
        """Yield complete maps; with ``max_nodes`` set, give up (set ``exhausted``) after that many branches."""
        found = 0
        self.nodes = 0
        self.exhausted = False

        def rec(dom, phi):
            nonlocal found
            free = np.flatnonzero(phi == -1)
            if free.size == 0:
                found += 1
                yield tuple(int(v) for v in phi)
                return
            sizes = dom[free].sum(axis=1)
            x = int(free[np.lexsort((self.rank[free], sizes))[0]])
            cands = np.flatnonzero(dom[x])
            order = self.value_rank[cands] + np.where(cands == self.preferred[x], -len(self.H), 0)
            for t in cands[np.argsort(order)]:
                self.nodes += 1
                if max_nodes is not None and self.nodes > max_nodes:
                    self.exhausted = True
                    return
                d2, p2 = dom.copy(), phi.copy()
                if self._assign(d2, p2, x, int(t)):
                    yield from rec(d2, p2)
                    if self.exhausted or (limit is not None and found >= limit):
                        return

        yield from rec(self.dom0.copy(), np.full(len(self.G), -1, dtype=np.int64))


def _check_caps(G: Lattice, H: Lattice) -> None:
    if len(G) > SOURCE_CAP or len(H) > TARGET_CAP:
        raise CapExceeded(f"embedding search capped at {SOURCE_CAP} -> {TARGET_CAP} elements "
                          f"(got {len(G)} -> {len(H)})")


def find_subgeometry_embedding(G: Lattice, H: Lattice) -> EmbeddingMap | None:
    """First meet- and join-preserving injection of ``G`` into ``H``, if any.

    The bottom and top need not be preserved.  The search is complete.
    """
    _check_caps(G, H)
    if len(G) > len(H):
        return None
    for phi in _Search(G, H).run(limit=1):
        return EmbeddingMap(G, H, phi)
    return None


def try_embedding(G: Lattice, H: Lattice, max_nodes: int) -> EmbeddingMap | None:
    """Budgeted variant of :func:`find_subgeometry_embedding`: ``None`` may also mean "gave up"."""
    _check_caps(G, H)
    if len(G) > len(H):
        return None
    for phi in _Search(G, H).run(limit=1, max_nodes=max_nodes):
        return EmbeddingMap(G, H, phi)
    return None


def count_subgeometry_embeddings(G: Lattice, H: Lattice) -> int:
    _check_caps(G, H)
    if len(G) > len(H):
        return 0
    return sum(1 for _ in _Search(G, H).run())


def is_strong_extension(G: ClosedFamily, H: ClosedFamily) -> ClosureReport:
    """Whether ``X -> X`` embeds the closed sets of ``G`` as a sublattice of those of ``H``."""
    if G.ground != H.ground:
        raise GroundSetMismatch("strong extensions need the same ground set")
    for m in G.masks:
        if m not in H._index:
            return ClosureReport(False, {"kind": "not closed", "X": G.ground.wrap(m)})
    masks = G.masks
    for i, a in enumerate(masks):
        for b in masks[i + 1:]:
            if H.close_bits(a | b) != G.close_bits(a | b):
                return ClosureReport(False, {"kind": "join", "X": G.ground.wrap(a), "Y": G.ground.wrap(b)})
    return ClosureReport(True)
