import random

import networkx as nx
import pytest

from qtrade.errors import InadmissibleParams, NotATotalTradeSet, ParamsMismatch
from qtrade.gf import field_spec
from qtrade.grassmann import (
    CanonicalSubspace,
    enumerate_subspaces,
    grassmann_distance,
    intersection_dim,
)
from qtrade.linalg import permute_columns
from qtrade.trades import (
    Bitrade,
    QuadraticForm,
    TradeParams,
    construct_minimum,
    hyperbolic_part,
    is_totally_singular,
    is_totally_singular_bruteforce,
    min_cardinality,
    min_cardinality_sum,
    reference_generator,
    split_families,
    verify_bitrade,
)

GF2 = field_spec(2)
GRID = [(2, 1, 2, 4), (2, 1, 2, 5), (2, 1, 3, 5), (3, 1, 2, 4), (2, 2, 3, 6), (2, 1, 3, 6),
        (4, 1, 2, 4), (3, 1, 3, 5), (2, 0, 1, 2), (2, 0, 2, 4), (3, 0, 2, 5)]


def sub(indices, v=4, spec=GF2):
    return CanonicalSubspace.coordinate(indices, v, spec)


def test_admissibility():
    TradeParams(2, 0, 1, 2)
    for bad in [(2, 1, 1, 4), (2, 1, 3, 4), (2, -1, 1, 3), (2, 2, 3, 5)]:
        with pytest.raises(InadmissibleParams):
            TradeParams(*bad)


def test_min_cardinality_examples():
    assert min_cardinality(2, 0) == 2
    assert min_cardinality(2, 1) == 6
    assert min_cardinality_sum(2, 1) == 1 + 3 + 2
    assert min_cardinality(3, 2) == 80 == 2 * 4 * 10


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_identity_grid(q):
    for t in range(7):
        assert min_cardinality(q, t) == min_cardinality_sum(q, t)


def test_min_cardinality_monotone_in_t():
    for q in (2, 3, 5):
        vals = [min_cardinality(q, t) for t in range(8)]
        assert vals == sorted(vals) and len(set(vals)) == len(vals)


def test_verify_examples():
    p = TradeParams(2, 1, 2, 4)
    b = Bitrade(p, {sub([0, 1])}, {sub([2, 3])})
    assert verify_bitrade(b, 0).balanced
    rep = verify_bitrade(Bitrade(p, {sub([0, 1])}, {sub([0, 2])}), 1)
    assert not rep.balanced
    assert (sub([1]), 1, 0) in rep.violations
    assert (sub([2]), 0, 1) in rep.violations
    assert len(rep.violations) == 4
    cert = rep.certificate().splitlines()
    assert cert[0] == "s=1 balanced=false violations=4" and len(cert) == 5
    with pytest.raises(ParamsMismatch):
        verify_bitrade(b, 3)


def test_unequal_volumes_fail_at_level_zero():
    p = TradeParams(2, 1, 2, 4)
    b = Bitrade(p, {sub([0, 1]), sub([0, 2])}, {sub([2, 3])})
    rep = verify_bitrade(b, 0)
    assert not rep.balanced and rep.violations[0][1:] == (2, 1)


def test_bitrade_structure_checks():
    p = TradeParams(2, 1, 2, 4)
    with pytest.raises(ParamsMismatch):
        Bitrade(p, set(), {sub([0, 1])})
    with pytest.raises(ParamsMismatch):
        Bitrade(p, {sub([0, 1])}, {sub([0, 1])})
    with pytest.raises(ParamsMismatch):
        Bitrade(p, {sub([0])}, {sub([1])})


@pytest.mark.parametrize("point", GRID)
def test_construction_meets_bound_and_balances(point):
    p = TradeParams(*point)
    b = construct_minimum(p)
    assert b.cardinality == min_cardinality(p.q, p.t)
    assert len(b.t0) == len(b.t1)
    for s in range(p.t + 1):
        assert verify_bitrade(b, s).balanced


@pytest.mark.parametrize("point", [(2, 1, 2, 4), (2, 1, 3, 5), (3, 1, 2, 4), (2, 2, 3, 6)])
def test_construction_is_not_a_higher_level_trade(point):
    # a minimum T(t) bitrade cannot balance at t+1: that would need min_cardinality(q, t+1)
    p = TradeParams(*point)
    if p.t + 1 <= p.k:
        assert not verify_bitrade(construct_minimum(p), p.t + 1).balanced


def test_construction_example_filters_to_six():
    p = TradeParams(2, 1, 2, 4)
    qf = QuadraticForm.for_params(p)
    survivors = [Y for Y in enumerate_subspaces(4, 2, GF2) if is_totally_singular_bruteforce(Y, qf)]
    assert len(survivors) == 6
    b = construct_minimum(p)
    assert set(survivors) == b.t0 | b.t1
    assert len(b.t0) == len(b.t1) == 3
    for fam in (b.t0, b.t1):
        assert all(grassmann_distance(X, Y) == 2 for X in fam for Y in fam if X != Y)


@pytest.mark.parametrize("point", [pt for pt in GRID if pt[1] >= 1])
def test_construction_equals_full_quadric_filter(point):
    p = TradeParams(*point)
    spec = field_spec(p.q)
    qf = QuadraticForm.for_params(p)
    b = construct_minimum(p)
    full = {Y for Y in enumerate_subspaces(p.v, p.k, spec) if is_totally_singular(Y, qf)}
    assert full == b.t0 | b.t1
    for Y in list(full)[:12]:
        assert is_totally_singular_bruteforce(Y, qf)


@pytest.mark.parametrize("point", [pt for pt in GRID if pt[1] >= 1])
def test_families_independent_and_cross_adjacent(point):
    p = TradeParams(*point)
    b = construct_minimum(p)
    for fam in (b.t0, b.t1):
        assert all(grassmann_distance(X, Y) != 1 for X in fam for Y in fam)
    for X in b.t0:
        assert any(grassmann_distance(X, Y) == 1 for Y in b.t1)


@pytest.mark.parametrize("point", [pt for pt in GRID if pt[1] >= 1])
def test_split_agrees_with_unique_two_colouring(point):
    p = TradeParams(*point)
    b = construct_minimum(p)
    members = b.members
    G = nx.Graph()
    G.add_nodes_from(range(len(members)))
    G.add_edges_from((i, j) for i in range(len(members)) for j in range(i + 1, len(members))
                     if grassmann_distance(members[i], members[j]) == 1)
    assert nx.is_connected(G) and nx.is_bipartite(G)
    left, right = nx.bipartite.sets(G)
    parts = {frozenset(members[i] for i in left), frozenset(members[i] for i in right)}
    assert parts == {b.t0, b.t1}


@pytest.mark.parametrize("point", [pt for pt in GRID if pt[1] >= 1])
def test_projection_correspondence(point):
    p = TradeParams(*point)
    b = construct_minimum(p)
    v, t, k = p.v, p.t, p.k
    spec = b.spec
    radical = CanonicalSubspace.coordinate(range(2 * t + 2, k + t + 1), v, spec)
    for Y in b.members:
        Yp = hyperbolic_part(Y, t)
        assert Yp.dim == t + 1
        assert CanonicalSubspace.span(list(Yp.rows) + list(radical.rows), v, spec) == Y


def test_split_examples():
    p = TradeParams(2, 1, 2, 4)
    Z = reference_generator(p)
    assert Z == sub([0, 1])
    b = construct_minimum(p)
    assert Z in b.t0
    assert all(intersection_dim(Y, Z) == p.t for Y in b.t1)
    t0, t1 = split_families(b.members, p)
    assert (t0, t1) == (b.t0, b.t1)
    with pytest.raises(NotATotalTradeSet):
        split_families([sub([0, 2])], p)


def test_totally_singular_examples():
    qf = QuadraticForm.for_params(TradeParams(2, 1, 2, 4))
    assert qf.pairs == ((0, 2), (1, 3)) and qf.zero_coords == ()
    assert is_totally_singular(CanonicalSubspace.span([], 4, GF2), qf)
    assert is_totally_singular(sub([0, 1]), qf)
    assert not is_totally_singular(sub([0, 2]), qf)
    qf5 = QuadraticForm.for_params(TradeParams(2, 1, 2, 5))
    assert qf5.zero_coords == (4,)
    assert not is_totally_singular(sub([0, 4], v=5), qf5)


def _forms_for(v, q):
    out = []
    for t in range(v):
        for k in range(t + 1, v - t):
            if 2 * t + 2 <= v and t >= 1:
                out.append(QuadraticForm.for_params(TradeParams(q, t, k, v)))
    return out


@pytest.mark.parametrize("q,v", [(2, 4), (2, 5), (2, 6), (3, 4)])
def test_totally_singular_matches_bruteforce(q, v):
    spec = field_spec(q)
    forms = _forms_for(v, q)
    assert forms
    for dim in range(v + 1):
        for Y in enumerate_subspaces(v, dim, spec):
            for qf in forms:
                assert is_totally_singular(Y, qf) == is_totally_singular_bruteforce(Y, qf)


def test_basis_choice_moves_construction():
    p = TradeParams(2, 1, 3, 6)
    rnd = random.Random(1)
    for _ in range(3):
        perm = list(range(6))
        rnd.shuffle(perm)
        b = construct_minimum(p, perm)
        base = construct_minimum(p)
        assert b.cardinality == 6
        assert all(verify_bitrade(b, s).balanced for s in range(2))
        Zp = CanonicalSubspace._trusted(permute_columns(reference_generator(p).basis, perm))
        assert any(intersection_dim(Zp, Y) == 2 for Y in b.t0)
        moved = {CanonicalSubspace._trusted(permute_columns(Y.basis, perm)) for Y in base.t0}
        assert moved == set(b.t0)


def test_t0_degenerate_case():
    b = construct_minimum(TradeParams(2, 0, 1, 2))
    first_two = list(enumerate_subspaces(2, 1, GF2))[:2]
    assert b.members == first_two
    assert b.cardinality == 2


def test_extension_field_with_other_modulus():
    spec = field_spec(4)
    b = construct_minimum(TradeParams(4, 1, 2, 4), spec=spec)
    assert b.cardinality == 10
    with pytest.raises(ParamsMismatch):
        construct_minimum(TradeParams(4, 1, 2, 4), spec=field_spec(2))


@pytest.mark.parametrize("point", GRID)
def test_json_roundtrip(point):
    b = construct_minimum(TradeParams(*point))
    assert Bitrade.from_json(b.to_json()) == b
    d = b.to_json()
    assert d["params"] == dict(zip("qtkv", point))
    assert len(d["t0"]) + len(d["t1"]) == b.cardinality


def test_json_without_field_key_uses_default():
    d = construct_minimum(TradeParams(4, 1, 2, 4)).to_json()
    del d["field"]
    assert Bitrade.from_json(d).cardinality == 10
