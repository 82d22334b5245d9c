import pytest

from qtrade.errors import ScaleGuardExceeded
from qtrade.grassmann import covers, gaussian_binomial
from qtrade.search import build_incidence, search_below
from qtrade.trades import TradeParams, min_cardinality, verify_bitrade


def test_incidence_examples():
    sysm = build_incidence(TradeParams(2, 1, 2, 4))
    assert sysm.incidence.shape == (15, 35)
    assert (sysm.incidence.sum(axis=0) == 3).all()
    tiny = build_incidence(TradeParams(2, 0, 1, 2))
    assert tiny.incidence.shape == (1, 3) and tiny.incidence.all()


def test_incidence_consistent_with_covers():
    p = TradeParams(3, 1, 2, 4)
    sysm = build_incidence(p)
    assert len(sysm.t_subspaces) == gaussian_binomial(4, 1, 3)
    assert len(sysm.k_subspaces) == gaussian_binomial(4, 2, 3)
    assert (sysm.incidence.sum(axis=0) == gaussian_binomial(2, 1, 3)).all()
    for i in range(0, 40, 9):
        for j in range(0, 130, 13):
            assert sysm.incidence[i, j] == covers(sysm.t_subspaces[i], sysm.k_subspaces[j])


def test_incidence_guard():
    with pytest.raises(ScaleGuardExceeded):
        build_incidence(TradeParams(2, 1, 2, 4), max_entries=100)


def test_search_examples():
    p = TradeParams(2, 1, 2, 4)
    below = search_below(p, 6)
    assert below.exhausted and below.found is None and not below.inconclusive
    hit = search_below(p, 7)
    assert hit.found is not None and hit.found.cardinality == 6
    assert not hit.exhausted
    tiny = search_below(TradeParams(2, 0, 1, 2), 2)
    assert tiny.exhausted and tiny.found is None


def test_found_bitrade_verifies():
    p = TradeParams(2, 1, 2, 4)
    b = search_below(p, 7).found
    assert all(verify_bitrade(b, s).balanced for s in range(p.t + 1))
    first = min(b.members, key=lambda Y: Y.sort_key())
    assert first in b.t0  # sign symmetry pins the least element to +1


def test_t0_search_finds_pair():
    b = search_below(TradeParams(2, 0, 1, 2), 3).found
    assert b.cardinality == 2


def test_node_count_deterministic():
    p = TradeParams(2, 1, 2, 4)
    runs = [search_below(p, 7) for _ in range(2)]
    assert runs[0].nodes_visited == runs[1].nodes_visited
    assert runs[0].found == runs[1].found


def test_node_cap_is_inconclusive():
    v = search_below(TradeParams(2, 1, 2, 4), 6, max_nodes=100)
    assert v.inconclusive and not v.exhausted and v.found is None


def test_time_budget_is_inconclusive():
    v = search_below(TradeParams(3, 1, 2, 4), 8, time_budget_s=0.2)
    assert v.inconclusive


def test_parallel_agrees_with_serial():
    p = TradeParams(2, 1, 2, 4)
    par = search_below(p, 6, workers=2)
    assert par.exhausted
    hit = search_below(p, 7, workers=2)
    assert hit.found == search_below(p, 7).found
    assert search_below(p, 7, workers=2).nodes_visited == hit.nodes_visited


@pytest.mark.slow
@pytest.mark.parametrize("point", [(2, 1, 2, 5), (2, 1, 3, 5)])
def test_lower_bound_at_v5(point):
    p = TradeParams(*point)
    assert search_below(p, min_cardinality(p.q, p.t)).exhausted


def test_verdict_json():
    d = search_below(TradeParams(2, 1, 2, 4), 7).to_json()
    assert set(d) == {"params", "bound", "found", "exhausted", "nodes_visited", "wall_time_ms"}
    assert len(d["found"]["t0"]) == len(d["found"]["t1"]) == 3
