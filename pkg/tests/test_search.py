import pytest

from cvxgeo import CapExceeded, ClosedFamily, GroundSet, PreconditionError, find_subgeometry_embedding
from cvxgeo.search import (
    conjecture_search,
    find_realization,
    geometries_of_size,
    passes_rules,
    planar_pool,
    thread_count,
)


def test_small_search_has_no_candidates():
    report = conjecture_search(3, seed=0, budget=5)
    assert report.candidates == ()
    assert [s.examined for s in report.sizes] == [1, 2, 6]
    assert all(s.exhaustive for s in report.sizes)
    text = report.format()
    assert text.splitlines()[0] == "search max_ground=3 seed=0 budget=5"
    assert "candidates: 0" in text


def test_search_is_deterministic(monkeypatch):
    monkeypatch.setenv("CVXGEO_THREADS", "1")
    one = conjecture_search(3, seed=4, budget=3).format()
    monkeypatch.setenv("CVXGEO_THREADS", "3")
    assert conjecture_search(3, seed=4, budget=3).format() == one


def test_search_limits():
    with pytest.raises(CapExceeded):
        conjecture_search(8)
    with pytest.raises(PreconditionError):
        conjecture_search(0)
    with pytest.raises(PreconditionError):
        conjecture_search(3, budget=0)


def test_sharp_family_is_filtered(sharp_family):
    assert not passes_rules(sharp_family)


def test_powerset_is_realized():
    P = ClosedFamily.powerset(GroundSet(("a", "b", "c")))
    assert passes_rules(P)
    assert find_realization(P, seed=0, budget=5) is not None


def test_realization_is_a_real_embedding():
    for fam in geometries_of_size(3, seed=0, budget=5):
        hit = find_realization(fam, seed=0, budget=5)
        assert hit is not None
        points, idx = hit
        from cvxgeo import build_lattice, verify_embedding

        target = planar_pool(points, 0, 5)[idx]
        found = find_subgeometry_embedding(build_lattice(fam), target)
        assert found is not None and verify_embedding(found)


def test_thread_count(monkeypatch):
    monkeypatch.setenv("CVXGEO_THREADS", "2")
    assert thread_count() == 2
    monkeypatch.delenv("CVXGEO_THREADS")
    assert thread_count() >= 1
    for bad in ("zero", "0", "-1"):
        monkeypatch.setenv("CVXGEO_THREADS", bad)
        with pytest.raises(PreconditionError):
            thread_count()
