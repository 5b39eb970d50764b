import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cvxgeo import (
    ClosedFamily,
    FormatError,
    GroundSet,
    GroundSetMismatch,
    PreconditionError,
    Subset,
    extreme_points,
    format_family,
    is_atomistic,
    is_closure_family,
    is_convex_geometry,
    parse_family,
    read_family,
    satisfies_anti_exchange,
    write_family,
)
from cvxgeo.closure import subsets_canonical
from strategies import closure_families, convex_geometries

G3 = GroundSet(("a", "b", "c"))


def test_ground_set_rejects_duplicates_and_empty_labels():
    with pytest.raises(PreconditionError):
        GroundSet(("a", "a"))
    with pytest.raises(PreconditionError):
        GroundSet(("a", ""))
    with pytest.raises(PreconditionError):
        GroundSet(tuple(f"e{i}" for i in range(65)))


def test_subset_set_semantics():
    ab, bc = G3.subset("ab"), G3.subset("bc")
    assert (ab & bc).labels == ("b",)
    assert (ab | bc) == G3.full
    assert (ab - bc).labels == ("a",)
    assert G3.subset("a") <= ab and G3.subset("a") < ab and not ab < ab
    assert "a" in ab and "c" not in ab
    assert str(ab) == "{a,b}" and str(G3.empty) == "{}"


def test_subset_ground_mismatch():
    other = GroundSet(("a", "b", "d"))
    with pytest.raises(GroundSetMismatch):
        G3.subset("a") | other.subset("a")


def test_subsets_canonical_order():
    assert subsets_canonical(3) == [0, 1, 2, 4, 3, 5, 6, 7]


def test_close_in_extension(extension_pair):
    _, H = extension_pair
    g = H.ground
    assert H.close(g.subset("abcd")) == g.full
    assert H.close(g.empty) == g.empty
    assert H.close(g.subset("abc")) == g.subset("abc")


def test_close_ground_mismatch(extension_pair):
    _, H = extension_pair
    with pytest.raises(GroundSetMismatch):
        H.close(G3.subset("a"))


def test_family_validation():
    with pytest.raises(PreconditionError):
        ClosedFamily(G3, [0b011, 0b110, 0b111, 0])  # {a,b} & {b,c} = {b} missing
    with pytest.raises(PreconditionError):
        ClosedFamily(G3, [0b111])  # empty set missing
    with pytest.raises(PreconditionError):
        ClosedFamily(G3, [0, 1])  # full set missing


def test_is_closure_family_witness():
    sets = [G3.wrap(m) for m in (0, 0b011, 0b110, 0b111)]
    rep = is_closure_family(sets)
    assert not rep
    assert rep.witness["meet"] == G3.subset("b")
    assert is_closure_family([G3.wrap(m) for m in range(8)])
    with pytest.raises(PreconditionError):
        is_closure_family([])


def test_powerset_is_convex_geometry_and_atomistic():
    P = ClosedFamily.powerset(G3)
    assert len(P) == 8
    assert is_convex_geometry(P) and satisfies_anti_exchange(P) and is_atomistic(P)


def test_non_convex_geometry_has_witness():
    # {a,b} closed, but neither {a} nor {b}: adding one element never reaches {a,b} from {}
    F = ClosedFamily(G3, [0, 0b011, 0b111])
    rep = is_convex_geometry(F)
    assert not rep and rep.witness["X"] == G3.empty
    ae = satisfies_anti_exchange(F)
    assert not ae
    assert ae.witness["X"] == G3.empty and {ae.witness["x"], ae.witness["y"]} == {"a", "b"}


def test_extension_pair_atomistic(extension_pair):
    G, H = extension_pair
    assert is_atomistic(H)
    rep = is_atomistic(G)
    assert not rep and rep.witness == {"x": "c"}


def test_extreme_points():
    g = GroundSet(("a", "b", "m"))
    F = ClosedFamily.powerset(g)
    assert extreme_points(F, g.full) == g.full
    T = ClosedFamily(g, [0, 1, 2, 4, 0b101, 0b110, 0b111])  # m in cl(a,b)
    assert extreme_points(T, g.full) == g.subset("ab")
    with pytest.raises(PreconditionError):
        extreme_points(T, g.subset("ab"))


def test_family_text_round_trip(extension_pair, tmp_path):
    G, _ = extension_pair
    text = format_family(G)
    assert text.splitlines()[0] == "ground a b c d x"
    assert text.splitlines()[1] == "closed"
    assert parse_family(text) == G
    path = tmp_path / "g.fam"
    write_family(G, path)
    assert read_family(path) == G


def test_parse_family_comments_and_errors():
    fam = parse_family("# header\nground a b\n\nclosed   # the empty set\nclosed a\nclosed a b\n")
    assert len(fam) == 3
    with pytest.raises(FormatError, match="line 1"):
        parse_family("closed a\n")
    with pytest.raises(FormatError, match="line 2"):
        parse_family("ground a b\nclosed z\n")
    with pytest.raises(FormatError, match="line 2"):
        parse_family("ground a b\nclosed a-b\n")
    with pytest.raises(FormatError, match="line 2"):
        parse_family("ground a b\nopen a\n")
    with pytest.raises(FormatError):
        parse_family("ground a b\nclosed a\n")


@given(closure_families())
def test_close_matches_definition(F):
    size = F.ground.size
    for s in range(1 << size):
        assert F.close_bits(s) == oracles.close(F.masks, size, s)


@given(closure_families())
def test_closure_operator_axioms(F):
    size = F.ground.size
    for s in range(1 << size):
        c = F.close_bits(s)
        assert s & ~c == 0
        assert F.close_bits(c) == c
        for t in range(1 << size):
            if s & ~t == 0:
                assert c & ~F.close_bits(t) == 0


@given(closure_families())
def test_convex_geometry_iff_anti_exchange(F):
    expected = oracles.convex_geometry_axioms(F.masks, F.ground.size)
    assert bool(is_convex_geometry(F)) == expected
    if 0 in F.masks:
        assert bool(satisfies_anti_exchange(F)) == oracles.anti_exchange(F.masks, F.ground.size) == expected


@given(convex_geometries())
def test_generated_geometries_pass(F):
    assert is_convex_geometry(F)
    assert satisfies_anti_exchange(F)


@given(closure_families(max_size=4), st.data())
def test_large_ground_scan_agrees_with_table(F, data):
    # embed the family into a ground set above the table cap: extra elements only in the full set
    extra = tuple(f"z{i}" for i in range(22 - F.ground.size))
    big = GroundSet(F.ground.labels + extra)
    masks = [m for m in F.masks if m != F.ground.full_bits] + [big.full_bits]
    B = ClosedFamily(big, masks)
    assert B.table is None
    s = data.draw(st.integers(0, F.ground.full_bits))
    expected = F.close_bits(s)
    assert B.close_bits(s) == (expected if expected != F.ground.full_bits else big.full_bits)
