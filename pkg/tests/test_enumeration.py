import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cvxgeo import ClosedFamily, GroundSet, is_convex_geometry
from cvxgeo.enumeration import (
    canonical_form,
    closure_families,
    convex_geometries,
    isomorphism_classes,
    random_convex_geometry,
)

# labelled convex geometries and their isomorphism classes (OEIS A224913, A224914)
LABELLED = {1: 1, 2: 3, 3: 22, 4: 485}
UNLABELLED = {1: 1, 2: 2, 3: 6, 4: 34}

# Moore families on k points that contain the empty set.  With m(k) the number of
# Moore families (OEIS A102896: 1, 2, 7, 61, 2480), m(k) = sum_j C(k, j) e(k - j).
WITH_EMPTY = {1: 1, 2: 4, 3: 45, 4: 2271}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_convex_geometry_counts(k):
    fams = list(convex_geometries(k))
    assert len(fams) == LABELLED[k]
    assert len({tuple(f.masks) for f in fams}) == len(fams)
    assert all(is_convex_geometry(f) for f in fams)
    assert len(isomorphism_classes(fams)) == UNLABELLED[k]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_convex_geometries_match_axiom_filter(k):
    expected = {tuple(f.masks) for f in closure_families(k)
                if oracles.convex_geometry_axioms(f.masks, k)}
    assert {tuple(f.masks) for f in convex_geometries(k)} == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_closure_family_counts(k):
    assert sum(1 for _ in closure_families(k)) == WITH_EMPTY[k]


def test_canonical_form_is_relabelling_invariant():
    g = GroundSet(("a", "b", "c"))
    chain_a = ClosedFamily(g, [0, 0b001, 0b011, 0b111])
    chain_c = ClosedFamily(g, [0, 0b100, 0b110, 0b111])
    other = ClosedFamily.powerset(g)
    assert canonical_form(chain_a) == canonical_form(chain_c)
    assert canonical_form(chain_a) != canonical_form(other)
    assert isomorphism_classes([chain_a, chain_c, other]) == [chain_a, other]


@given(st.integers(1, 6), st.integers(0, 10_000))
def test_random_convex_geometry_is_convex(k, seed):
    f = random_convex_geometry(k, random.Random(seed))
    assert is_convex_geometry(f)
    assert oracles.anti_exchange(f.masks, k)


def test_random_convex_geometry_is_seeded():
    a = random_convex_geometry(6, random.Random(7))
    b = random_convex_geometry(6, random.Random(7))
    assert a == b
