"""Validated constructions of the worked examples: the D_n / C_n / G_{n+1} family,
the five-element Sharp-rule counterexample and the strong-extension pair.

Each construction is exposed as a :class:`GalleryItem` carrying the claims it
is expected to satisfy, so the whole collection doubles as a regression suite.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources
from typing import Any, Callable

from .closure import (
    ClosedFamily,
    ClosureReport,
    GroundSet,
    Subset,
    is_atomistic,
    is_closure_family,
    is_convex_geometry,
    satisfies_anti_exchange,
)
from .errors import CvxGeoError, PreconditionError
from .geometry import (
    PointConfig,
    build_geometry,
    in_hull,
    parse_points,
    relative_closure,
    strictly_inside,
)
from .lattice import (
    TARGET_CAP,
    EmbeddingMap,
    build_lattice,
    find_subgeometry_embedding,
    is_strong_extension,
    verify_embedding,
)
from .rules import (
    check_caratheodory,
    check_carousel,
    check_sharp_carousel_2,
    check_sharp_theorem_elementwise,
    replay_witness,
)

SUPPORTED_N = (2, 3)
GRID = 64


class SearchFailure(CvxGeoError):
    """No admissible point pair was found within the attempt budget."""


def _check_n(n: int) -> None:
    if n not in SUPPORTED_N:
        raise PreconditionError(f"n must be one of {SUPPORTED_N}, got {n}")


# -- D_n: simplex plus two interior points -------------------------------------

def simplex_vertices(n: int) -> list[tuple[Fraction, ...]]:
    """``a_0 = 0`` and ``a_i = e_i`` in ``R^n``."""
    verts = [tuple(Fraction(0) for _ in range(n))]
    for i in range(n):
        verts.append(tuple(Fraction(int(k == i)) for k in range(n)))
    return verts


def _unique_index(p, q, verts) -> int | None:
    """The only ``k`` with ``p`` in ``ch({q} + verts minus verts[k])``, if exactly one exists."""
    hits = [k for k in range(len(verts)) if in_hull(p, [q] + verts[:k] + verts[k + 1:])]
    return hits[0] if len(hits) == 1 else None


def dn_indices(config: PointConfig) -> tuple[int, int]:
    """Validate a D_n configuration and return its distinguished ``(i, j)``.

    ``x`` must lie in exactly one ``P_i = ch({y} + D - a_i)``, ``y`` in
    exactly one ``Q_j = ch({x} + D - a_j)``, with ``i != j``; both strictly
    inside the simplex.
    """
    n = config.dim
    expected = tuple(f"a{k}" for k in range(n + 1)) + ("x", "y")
    if config.labels != expected:
        raise PreconditionError(f"labels must be {' '.join(expected)}")
    verts = [config.point(f"a{k}") for k in range(n + 1)]
    if verts != simplex_vertices(n):
        raise PreconditionError("a0..an must be the standard simplex vertices")
    x, y = config.point("x"), config.point("y")
    for lab, p in (("x", x), ("y", y)):
        if not strictly_inside(p, verts):
            raise PreconditionError(f"{lab} is not strictly inside the simplex")
    i = _unique_index(x, y, verts)
    j = _unique_index(y, x, verts)
    if i is None:
        raise PreconditionError("x does not lie in exactly one P_i")
    if j is None:
        raise PreconditionError("y does not lie in exactly one Q_j")
    if i == j:
        raise PreconditionError(f"distinguished indices coincide (i = j = {i})")
    return i, j


def _dn_config(n: int, x, y) -> PointConfig:
    items = [(f"a{k}", v) for k, v in enumerate(simplex_vertices(n))]
    return PointConfig.from_items(items + [("x", x), ("y", y)])


def _grid_interior_point(n: int, rng: random.Random) -> tuple[Fraction, ...]:
    while True:
        ks = [rng.randint(1, GRID - 1) for _ in range(n)]
        if sum(ks) < GRID:
            return tuple(Fraction(k, GRID) for k in ks)


def search_Dn(n: int, seed: int = 0, attempts: int = 10_000) -> PointConfig:
    """Seeded search for ``x, y`` on the ``1/64`` grid passing :func:`dn_indices`."""
    _check_n(n)
    rng = random.Random(seed)
    for _ in range(attempts):
        x = _grid_interior_point(n, rng)
        y = _grid_interior_point(n, rng)
        if x == y:
            continue
        config = _dn_config(n, x, y)
        try:
            dn_indices(config)
        except PreconditionError:
            continue
        return config
    raise SearchFailure(f"no admissible D_{n} found in {attempts} attempts (seed {seed})")


def fixture_text(name: str) -> str:
    return resources.files("cvxgeo").joinpath("fixtures").joinpath(name).read_text()


@lru_cache(maxsize=None)
def build_Dn(n: int) -> PointConfig:
    """The frozen D_n configuration, re-validated on load."""
    _check_n(n)
    config = parse_points(fixture_text(f"D{n}.pts"))
    if config.dim != n:
        raise PreconditionError(f"fixture D{n}.pts has dimension {config.dim}")
    dn_indices(config)
    return config


def _Dn_parts(n: int):
    config = build_Dn(n)
    g = config.ground
    i, j = dn_indices(config)
    D = g.subset(f"a{k}" for k in range(n + 1))
    return config, g, D, i, j


def added_sets(n: int) -> tuple[Subset, Subset]:
    """``{y} + D - a_i`` and ``{x} + D - a_j``."""
    _, g, D, i, j = _Dn_parts(n)
    return (D - g.subset([f"a{i}"])).add("y"), (D - g.subset([f"a{j}"])).add("x")


@lru_cache(maxsize=None)
def build_Cn(n: int) -> ClosedFamily:
    """The geometry of D_n with the two sets of :func:`added_sets` declared closed."""
    base = build_geometry(build_Dn(n))
    extra = [s.bits for s in added_sets(n)]
    return ClosedFamily(base.ground, list(base.masks) + extra)


# -- G_{n+1}: a prism over the simplex with an interior point and its lift ----------

@lru_cache(maxsize=None)
def build_Gn1(n: int) -> PointConfig:
    """Points ``c_i`` (height 0), ``b_i`` (height 1), ``u`` and its lift ``v`` in ``R^(n+1)``."""
    _check_n(n)
    base = simplex_vertices(n)
    centroid = tuple(sum(col, Fraction(0)) / (n + 1) for col in zip(*base))
    items = []
    for k, p in enumerate(base):
        items.append((f"c{k}", p + (Fraction(0),)))
        items.append((f"b{k}", p + (Fraction(1),)))
    items.append(("u", centroid + (Fraction(0),)))
    items.append(("v", centroid + (Fraction(1),)))
    config = PointConfig.from_items(items)
    cs = [config.point(f"c{k}") for k in range(n + 1)]
    if not strictly_inside(config.point("u"), cs):
        raise PreconditionError("u is not interior to ch(c_0..c_n)")
    return config


@lru_cache(maxsize=None)
def _Gn1_family(n: int) -> ClosedFamily:
    return build_geometry(build_Gn1(n))


def phi_labels(label: str) -> tuple[str, ...]:
    if label == "x":
        return ("u",)
    if label == "y":
        return ("v",)
    k = label[1:]
    return (f"c{k}", f"b{k}")


def phi_set(n: int, X: Subset) -> Subset:
    """Union of the images of the elements of ``X``."""
    g = build_Gn1(n).ground
    return g.subset(lab for e in X for lab in phi_labels(e))


@lru_cache(maxsize=None)
def build_phi(n: int) -> EmbeddingMap:
    source = build_lattice(build_Cn(n))
    target = build_lattice(_Gn1_family(n))
    return EmbeddingMap.from_function(source, target, lambda X: phi_set(n, X))


# -- closure case formulas -------------------------------------------------------

def _formula_report(family: ClosedFamily, image, extra: Subset, trigger: Subset, target: ClosedFamily):
    """Check ``cl(image X + image Y) = U + (extra if trigger <= X + Y)`` over all closed pairs."""
    sets = list(family)
    for a_i, X in enumerate(sets):
        for Y in sets[a_i:]:
            union = image(X) | image(Y)
            expect = union | extra if trigger <= (X | Y) else union
            got = target.close(union)
            if got != expect:
                return ClosureReport(False, {"X": X, "Y": Y, "expected": expect, "closure": got})
    return ClosureReport(True)


def check_Cn_union_formula(n: int):
    """In C_n, ``cl(X + Y)`` adds ``{x, y}`` exactly when all of ``a_0..a_n`` are present."""
    fam = build_Cn(n)
    _, g, D, _, _ = _Dn_parts(n)
    return _formula_report(fam, lambda s: s, g.subset("xy"), D, fam)


def check_phi_union_formula(n: int):
    """In G_{n+1}, ``cl(phi X + phi Y)`` adds ``{u, v}`` exactly when all of ``a_0..a_n`` are in ``X + Y``."""
    fam = build_Cn(n)
    _, _, D, _, _ = _Dn_parts(n)
    target = _Gn1_family(n)
    return _formula_report(fam, lambda s: phi_set(n, s), target.ground.subset("uv"), D, target)


def check_added_set_subsets_closed(n: int):
    """Every proper subset of each added set is already closed in the geometry of D_n."""
    base = build_geometry(build_Dn(n))
    for s in added_sets(n):
        sub = s.bits
        while sub:
            sub = (sub - 1) & s.bits
            if sub not in base:
                return ClosureReport(False, {"set": s, "subset": base.ground.wrap(sub)})
    return ClosureReport(True)


# -- the five-element Sharp-rule counterexample ---------------------------------

SHARP_LABELS = ("a", "b", "c", "x", "y")
SHARP_TRIPLES = ("xab", "xac", "ybc", "xya", "xyb", "xyc")
SHARP_QUADS = ("abxy", "bcxy", "acxy")


@lru_cache(maxsize=None)
def counterexample_sharp() -> ClosedFamily:
    """Five points ``a, b, c, x, y``: every set of size at most two is closed,
    plus six triples, three quadruples and the full set.

    ``{y,a,b}`` and ``{y,a,c}`` are deliberately not closed so that
    ``x`` lies in both of their closures.
    """
    g = GroundSet(SHARP_LABELS)
    sets = [m for m in range(1 << 5) if bin(m).count("1") <= 2]
    sets += [g.bits_of(s) for s in SHARP_TRIPLES + SHARP_QUADS]
    sets.append(g.full_bits)
    return ClosedFamily(g, sets)


def small_planar_configs() -> list[PointConfig]:
    """A handful of planar configurations of five and six points in different order types."""
    def cfg(*pts):
        return PointConfig.from_items((f"p{k}", p) for k, p in enumerate(pts))

    return [
        cfg((0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)),
        cfg((0, 0), (6, 0), (3, 6), (3, 2), (2, 1)),
        cfg((0, 0), (6, 0), (3, 6), (3, 2), (4, 3)),
        cfg((0, 0), (6, 0), (3, 6), (2, 2), (4, 2)),
        cfg((0, 0), (6, 0), (6, 6), (0, 6), (3, 2)),
        cfg((0, 0), (6, 0), (6, 6), (0, 6), (2, 3), (4, 3)),
        cfg((0, 0), (8, 0), (4, 8), (3, 2), (5, 2), (4, 4)),
        cfg((0, 0), (4, 0), (6, 3), (4, 6), (0, 6), (-2, 3)),
    ]


def sharp_counterexample_planar_embedding() -> EmbeddingMap | None:
    """First embedding of the counterexample into one of :func:`small_planar_configs`, if any."""
    src = build_lattice(counterexample_sharp())
    for config in small_planar_configs():
        found = find_subgeometry_embedding(src, build_lattice(build_geometry(config)))
        if found is not None:
            return found
    return None


# -- the strong-extension pair -------------------------------------------------------

EXTENSION_GROUND = ("a", "b", "c", "d", "x")
LISTED_G = ("", "a", "b", "d", "ab", "ad", "bd", "cd", "abd", "acd", "bcd",
            "abx", "adx", "bdx", "abdx", "acdx", "abcdx")


def listed_sets() -> list[Subset]:
    """The seventeen sets of the smaller geometry exactly as enumerated."""
    g = GroundSet(EXTENSION_GROUND)
    return [g.subset(s) for s in LISTED_G]


@lru_cache(maxsize=None)
def strong_extension_pair() -> tuple[ClosedFamily, ClosedFamily]:
    """``(G, H)`` on ``a, b, c, d, x``.

    ``H`` holds every subset except ``abcd``.  ``G`` is generated from the
    listed sets by intersections and ``H``-joins; it is the family of sets
    ``W != abcd`` with ``c in W => d in W``.
    """
    g = GroundSet(EXTENSION_GROUND)
    abcd = g.bits_of("abcd")
    H = ClosedFamily(g, (m for m in range(1 << 5) if m != abcd))
    current = {s.bits for s in listed_sets()}
    while True:
        grown = set(current)
        for p in current:
            for q in current:
                grown.add(p & q)
                grown.add(H.close_bits(p | q))
        if grown == current:
            break
        current = grown
    return ClosedFamily(g, current), H


def check_extension_union_formula():
    """``cl_G(U + V) = U + V + {x}`` when ``a, b, c`` are all in ``U + V``, else ``U + V``."""
    G, _ = strong_extension_pair()
    g = G.ground
    return _formula_report(G, lambda s: s, g.subset("x"), g.subset("abc"), G)


# -- claims ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    text: str
    check: Callable[[Any], Any]
    expected: bool = True


@dataclass(frozen=True)
class ClaimResult:
    item: str
    claim: str
    expected: bool
    actual: bool
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class GalleryItem:
    name: str
    build: Callable[[], Any]
    claims: list[Claim] = field(default_factory=list)

    @cached_property
    def artifact(self):
        return self.build()

    def run(self) -> list[ClaimResult]:
        out = []
        for c in self.claims:
            try:
                value = c.check(self.artifact)
                actual = bool(value)
                detail = value.describe() if hasattr(value, "describe") else ""
            except CvxGeoError as exc:
                actual, detail = False, f"error: {exc}"
            out.append(ClaimResult(self.name, c.text, c.expected, actual, detail))
        return out


def _dn_items(n: int) -> list[GalleryItem]:
    def dn_claims():
        return [
            Claim("x and y strictly inside the simplex",
                  lambda c: all(strictly_inside(c.point(p), simplex_vertices(n)) for p in "xy")),
            Claim("x in exactly one P_i, y in exactly one Q_j, i != j", lambda c: dn_indices(c) is not None),
            Claim("geometry of the configuration is a convex geometry", lambda c: is_convex_geometry(build_geometry(c))),
            Claim("added sets are not closed in the geometry",
                  lambda c: not any(s in build_geometry(c) for s in added_sets(n))),
            Claim("every proper subset of an added set is closed", lambda c: check_added_set_subsets_closed(n)),
        ]

    def cn_claims():
        all_a = [f"a{k}" for k in range(n + 1)]
        return [
            Claim("convex geometry", is_convex_geometry),
            Claim("anti-exchange holds", satisfies_anti_exchange),
            Claim("differs from the geometry of D_n in exactly two sets",
                  lambda f: len(set(f.masks) ^ set(build_geometry(build_Dn(n)).masks)) == 2),
            Claim(f"{n}-Caratheodory holds", lambda f: check_caratheodory(f, n)),
            Claim(f"{n}-Carousel fails at (x, y, D)",
                  lambda f: _carousel_at_xyD(f, n, all_a)),
            Claim("cl(X+Y) adds x,y exactly when all a_k are present", lambda f: check_Cn_union_formula(n)),
        ]

    def gn_claims():
        return [
            Claim("u strictly inside ch(c_0..c_n)",
                  lambda c: strictly_inside(c.point("u"), [c.point(f"c{k}") for k in range(n + 1)])),
            Claim("v is u lifted to height 1",
                  lambda c: c.point("v") == c.point("u")[:-1] + (Fraction(1),)),
            Claim("closure of all c_k, b_k adds exactly u and v",
                  lambda c: relative_closure(c, c.ground.subset(l for l in c.labels if l not in "uv"))
                  == c.ground.full),
            Claim("convex geometry", lambda c: is_convex_geometry(_Gn1_family(n))),
        ]

    def phi_claims():
        claims = [
            Claim("phi is an injective meet- and join-preserving map", verify_embedding),
            Claim("phi maps the empty set to the empty set",
                  lambda m: len(m.target.element(m.mapping[0])) == 0),
            Claim("cl(phi X + phi Y) adds u,v exactly when all a_k are in X+Y",
                  lambda m: check_phi_union_formula(n)),
        ]
        if len(build_lattice(_Gn1_family(n))) <= TARGET_CAP:
            claims.append(Claim("the embedding search finds phi itself",
                                lambda m: find_subgeometry_embedding(m.source, m.target) == m))
        return claims

    return [
        GalleryItem(f"D{n}", lambda: build_Dn(n), dn_claims()),
        GalleryItem(f"C{n}", lambda: build_Cn(n), cn_claims()),
        GalleryItem(f"G{n + 1}", lambda: build_Gn1(n), gn_claims()),
        GalleryItem(f"phi{n}", lambda: build_phi(n), phi_claims()),
    ]


def _carousel_at_xyD(family: ClosedFamily, n: int, all_a: list[str]) -> bool:
    v = check_carousel(family, n)
    if v.holds:
        return False
    w = v.witness
    return (w["x"], w["y"]) == ("x", "y") and w["S"] == family.ground.subset(all_a) and replay_witness(family, v)


def _sharp_claims() -> list[Claim]:
    def closes(src: str, dst: str):
        return lambda f: f.ground.subset(dst) <= f.close(f.ground.subset(src))

    def sharp2(f):
        v = check_sharp_carousel_2(f)
        if v.holds:
            return False
        w = v.witness
        got = tuple("".join(w[k].labels) for k in "XYABC")
        return got == ("x", "y", "a", "b", "c") and replay_witness(f, v)

    def elementwise(f):
        v = check_sharp_theorem_elementwise(f)
        if v.holds:
            return False
        got = tuple(v.witness[k] for k in "xyabc")
        return got == ("x", "y", "a", "b", "c") and replay_witness(f, v)

    return [
        Claim("convex geometry", is_convex_geometry),
        Claim("2-Carousel holds", lambda f: check_carousel(f, 2)),
        Claim("x, y in cl(abc)", closes("abc", "xy")),
        Claim("x in cl(yab) and x in cl(yac)", lambda f: closes("yab", "x")(f) and closes("yac", "x")(f)),
        Claim("y in cl(xbc)", closes("xbc", "y")),
        Claim("x in cl(ya)", closes("ya", "x"), expected=False),
        Claim("Sharp 2-Carousel fails at X=x, Y=y, A=a, B=b, C=c", sharp2),
        Claim("elementwise Sharp rule fails at (x, y, a, b, c)", elementwise),
        Claim("embeds into a small planar geometry",
              lambda f: sharp_counterexample_planar_embedding() is not None, expected=False),
    ]


def _extension_claims() -> list[Claim]:
    def caratheodory_H_fails_at_abcd(pair):
        _, H = pair
        v = check_caratheodory(H, 2)
        return (not v.holds and v.witness["x"] == "x"
                and v.witness["S"] == H.ground.subset("abcd") and replay_witness(H, v))

    return [
        Claim("the listed sets form an intersection-closed family",
              lambda p: is_closure_family(listed_sets()), expected=False),
        Claim("G is a convex geometry", lambda p: is_convex_geometry(p[0])),
        Claim("H is a convex geometry", lambda p: is_convex_geometry(p[1])),
        Claim("H is atomistic", lambda p: is_atomistic(p[1])),
        Claim("G is atomistic", lambda p: is_atomistic(p[0]), expected=False),
        Claim("H is a strong extension of G", lambda p: is_strong_extension(*p)),
        Claim("cl_G(U+V) adds x exactly when a, b, c are present", lambda p: check_extension_union_formula()),
        Claim("2-Caratheodory holds in G", lambda p: check_caratheodory(p[0], 2)),
        Claim("2-Caratheodory fails in H at (x, abcd)", caratheodory_H_fails_at_abcd),
        Claim("3-Caratheodory holds in G", lambda p: check_caratheodory(p[0], 3)),
        Claim("3-Caratheodory holds in H (abcd itself has four points)", lambda p: check_caratheodory(p[1], 3)),
        Claim("2-Carousel holds in H", lambda p: check_carousel(p[1], 2), expected=False),
    ]


def gallery_items() -> list[GalleryItem]:
    items = []
    for n in SUPPORTED_N:
        items.extend(_dn_items(n))
    items.append(GalleryItem("sharp", counterexample_sharp, _sharp_claims()))
    items.append(GalleryItem("extension", strong_extension_pair, _extension_claims()))
    return items


def item_names() -> list[str]:
    return [it.name for it in gallery_items()]


def run_gallery(names: list[str] | None = None) -> list[ClaimResult]:
    """Run the claims of the named items (all of them by default), in gallery order."""
    items = gallery_items()
    if names is not None:
        known = {it.name for it in items}
        unknown = [n for n in names if n not in known]
        if unknown:
            raise KeyError(unknown[0])
        items = [it for it in items if it.name in names]
    results = []
    for it in items:
        results.extend(it.run())
    return results


def format_results(results: list[ClaimResult]) -> str:
    rows = [("item", "claim", "expected", "actual", "status")]
    for r in results:
        rows.append((r.item, r.claim, _word(r.expected), _word(r.actual), "ok" if r.passed else "FAIL"))
    widths = [max(len(row[k]) for row in rows) for k in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row[:4], widths)) + "  " + row[4] for row in rows]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} claims as expected")
    return "\n".join(lines) + "\n"


def _word(b: bool) -> str:
    return "holds" if b else "fails"
