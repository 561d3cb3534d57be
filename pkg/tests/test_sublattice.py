import itertools
import json

import numpy as np
import pytest

from joinlat import (
    ResourceLimitError,
    build,
    enumerate_subgroups,
    lattice_json,
    mi_lattice,
    min_trivial_intersection_family,
)
from joinlat.config import Limits
from joinlat.sublattice import parse_lattice_json


def naive_all_subgroups(g):
    """Independent oracle: close every subset of the cyclic subgroups."""
    cyclics = set()
    for x in range(g.order):
        members = {0}
        y = x
        while y != 0:
            members.add(y)
            y = int(g.mul_table[y, x])
        cyclics.add(frozenset(members))
    cyclics = sorted(cyclics, key=sorted)
    subs = set()
    for r in range(len(cyclics) + 1):
        for combo in itertools.combinations(cyclics, r):
            seed = frozenset({0}).union(*combo) if combo else frozenset({0})
            elems = set(seed)
            changed = True
            while changed:
                changed = False
                for a in list(elems):
                    for b in list(elems):
                        c = int(g.mul_table[a, b])
                        if c not in elems:
                            elems.add(c)
                            changed = True
            subs.add(frozenset(elems))
    return subs


@pytest.mark.parametrize(
    "spec",
    ["Cyclic(8)", "Cyclic(12)", "Sym(3)", "ElemAbelian(3,2)", "Alt(4)",
     "Dihedral(10)", "DirectProduct(Cyclic(2),Cyclic(2))"],
)
def test_enumeration_matches_naive_oracle(spec):
    g = build(spec)
    lat = enumerate_subgroups(g)
    got = {frozenset(s) for s in lat.subgroups}
    assert got == naive_all_subgroups(g)


@pytest.mark.parametrize(
    "spec,count",
    [
        ("Cyclic(5)", 2),
        ("Sym(3)", 6),
        ("DirectProduct(ElemAbelian(3,2),Cyclic(2))", 12),
        ("Alt(5)", 59),
        ("Sym(5)", 156),
        ("ElemAbelian(2,4)", 67),
    ],
)
def test_known_subgroup_counts(spec, count):
    lat = enumerate_subgroups(build(spec))
    assert lat.count == count


def test_lattice_well_formed():
    for spec in ["Sym(4)", "Cyclic(12)", "DirectProduct(Sym(3),Cyclic(3))"]:
        g = build(spec)
        lat = enumerate_subgroups(g)
        # Lagrange, dedup, canonical sort
        assert all(g.order % int(o) == 0 for o in lat.orders)
        assert len({s for s in lat.subgroups}) == lat.count
        assert lat.subgroups[0] == (0,)
        assert lat.orders[lat.top_id] == g.order
        keys = [(int(lat.orders[i]), lat.subgroups[i]) for i in range(lat.count)]
        assert keys == sorted(keys)
        # leq is inclusion and a partial order
        for a in range(lat.count):
            for b in range(lat.count):
                want = set(lat.subgroups[a]) <= set(lat.subgroups[b])
                assert bool(lat.leq[a, b]) == want
        leq = lat.leq
        assert leq.diagonal().all()
        assert not (leq & leq.T & ~np.eye(lat.count, dtype=bool)).any()
        closure = leq @ leq
        assert (leq[closure > 0]).all()


@pytest.mark.parametrize(
    "spec,n_max",
    [("Cyclic(4)", 1), ("Sym(3)", 4), ("ElemAbelian(5,2)", 6), ("ElemAbelian(7,2)", 8)],
)
def test_maximal_counts(spec, n_max):
    lat = enumerate_subgroups(build(spec))
    assert len(lat.maximal_ids) == n_max
    # coatoms exactly: nothing strictly between a maximal and the top
    for mid in lat.maximal_ids:
        between = [
            k
            for k in range(lat.count)
            if lat.leq[mid, k] and k not in (mid, lat.top_id)
        ]
        assert not between


@pytest.mark.parametrize(
    "spec,frat_order",
    [("Cyclic(4)", 2), ("Sym(3)", 1), ("Cyclic(12)", 2), ("Cyclic(1)", 1),
     ("ElemAbelian(2,3)", 1), ("Cyclic(8)", 4)],
)
def test_frattini(spec, frat_order):
    lat = enumerate_subgroups(build(spec))
    assert lat.subgroup_order(lat.frattini_id) == frat_order


def test_frattini_is_intersection_of_maximals():
    lat = enumerate_subgroups(build("Cyclic(12)"))
    masks = [set(lat.subgroups[m]) for m in lat.maximal_ids]
    inter = set.intersection(*masks)
    assert set(lat.subgroups[lat.frattini_id]) == inter


def test_normal_subgroups():
    lat = enumerate_subgroups(build("Sym(3)"))
    normals = lat.normal_ids()
    orders = sorted(lat.subgroup_order(n) for n in normals)
    assert orders == [1, 3, 6]
    lat2 = enumerate_subgroups(build("ElemAbelian(3,2)"))
    assert len(lat2.normal_ids()) == lat2.count


def test_mi_lattice_examples(lattice_of):
    _, lat = lattice_of("Cyclic(4)")
    mi = mi_lattice(lat)
    assert mi.count == 2
    assert mi.bottom_id == lat.frattini_id

    _, lat = lattice_of("Sym(3)")
    assert mi_lattice(lat).count == 6

    g, lat = lattice_of("DirectProduct(Sym(3),Cyclic(3))")
    mi = mi_lattice(lat)
    nonmembers = [s for s in range(lat.count) if not mi.contains(s)]
    assert len(nonmembers) == 2
    assert all(lat.subgroup_order(s) == 3 for s in nonmembers)


def test_mi_lattice_invariants(lattice_of):
    for spec in ["Sym(4)", "Cyclic(12)", "Alt(4)", "DirectProduct(Sym(3),Cyclic(3))"]:
        _, lat = lattice_of(spec)
        mi = mi_lattice(lat)
        ids = mi.member_ids
        assert lat.top_id in ids
        assert mi.bottom_id == lat.frattini_id
        # intersection-closed, meets and joins land inside
        for a in ids:
            for b in ids:
                m = mi.meet(a, b)
                assert set(lat.subgroups[m]) == set(lat.subgroups[a]) & set(lat.subgroups[b])
                j = mi.join(a, b)
                # minimal member containing the generated subgroup
                gen = lat.join(a, b)
                above = [
                    c
                    for c in ids
                    if lat.leq[gen, c]
                ]
                assert j == min(above, key=lambda c: (lat.subgroup_order(c), c))
                assert lat.leq[gen, j]
        table = mi.meet_table()
        jtable = mi.join_table()
        pos = {s: i for i, s in enumerate(ids)}
        for a in ids[:6]:
            for b in ids[:6]:
                assert table[pos[a], pos[b]] == pos[mi.meet(a, b)]
                assert jtable[pos[a], pos[b]] == pos[mi.join(a, b)]


@pytest.mark.parametrize(
    "spec,size,uniform",
    [
        ("ElemAbelian(3,2)", 2, True),
        ("ElemAbelian(2,3)", 3, True),
        ("Cyclic(4)", 1, True),
        ("Sym(3)", 2, True),
        ("Cyclic(1)", 0, True),
    ],
)
def test_min_family(spec, size, uniform):
    lat = enumerate_subgroups(build(spec))
    got = min_trivial_intersection_family(lat)
    assert got.size == size
    assert got.uniform == uniform


def test_min_family_alt5():
    lat = enumerate_subgroups(build("Alt(5)"))
    got = min_trivial_intersection_family(lat, check_uniform=False)
    assert got.size == 2  # two point stabilizers already meet trivially
    assert got.size <= 5


def test_resource_limits():
    g = build("ElemAbelian(2,5)")
    with pytest.raises(ResourceLimitError):
        enumerate_subgroups(g, Limits(max_subgroups=50))
    with pytest.raises(ResourceLimitError):
        enumerate_subgroups(g, Limits(max_work=10))


def test_lattice_json_round_trip():
    lat = enumerate_subgroups(build("Sym(3)"))
    exported = lattice_json(lat)
    wire = json.loads(json.dumps(exported))
    assert parse_lattice_json(wire) == parse_lattice_json(exported)
    assert exported["order"] == 6
    assert len(exported["subgroups"]) == 6
    assert exported["frattini"] == 0
    # generators listed for every subgroup actually generate it
    for entry in exported["subgroups"]:
        assert len(entry["generators"]) <= 2
