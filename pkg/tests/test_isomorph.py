import itertools

import numpy as np
import pytest

from joinlat import (
    ResourceLimitError,
    build,
    build_delta,
    canonical_form,
    enumerate_subgroups,
    graph_iso,
    mi_lattice,
    poset_iso,
)
from joinlat.isomorph import (
    chain_poset,
    product_poset,
    struct_from_graph,
    struct_from_poset,
    struct_iso,
    witness_ok,
)


def brute_graph_iso(a, b):
    n = a.shape[0]
    if b.shape[0] != n:
        return False
    for perm in itertools.permutations(range(n)):
        p = np.array(perm)
        if (a[np.ix_(p, p)] == b).all():
            return True
    return False


def random_graph(rng, n, density=0.5):
    m = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                m[i, j] = m[j, i] = True
    return m


def test_graph_iso_against_brute_force():
    rng = np.random.default_rng(42)
    import random

    pyrng = random.Random(42)
    for trial in range(200):
        n = pyrng.randint(1, 7)
        a = random_graph(pyrng, n)
        if pyrng.random() < 0.5:
            perm = list(range(n))
            pyrng.shuffle(perm)
            p = np.array(perm, dtype=int)
            b = a[np.ix_(p, p)]
        else:
            b = random_graph(pyrng, n)
        want = brute_graph_iso(a, b)
        got = graph_iso(a, b)
        assert got.isomorphic == want
        assert (canonical_form(a) == canonical_form(b)) == want


def test_canonical_form_is_relabeling_invariant():
    import random

    pyrng = random.Random(9)
    for _ in range(40):
        n = pyrng.randint(2, 10)
        a = random_graph(pyrng, n)
        perm = list(range(n))
        pyrng.shuffle(perm)
        p = np.array(perm, dtype=int)
        b = a[np.ix_(p, p)]
        assert canonical_form(a) == canonical_form(b)


def test_witness_replays():
    g1 = build_delta(enumerate_subgroups(build("ElemAbelian(3,2)")))
    g2 = build_delta(enumerate_subgroups(build("Dihedral(6)")))
    res = graph_iso(g1, g2)
    assert res.isomorphic and res.witness is not None
    a = struct_from_graph(g1.adjacency_bool())
    b = struct_from_graph(g2.adjacency_bool())
    assert witness_ok(a, b, res.witness)
    # a wrong witness fails the replay
    bad = list(res.witness)
    if len(bad) >= 2:
        bad[0], bad[1] = bad[1], bad[0]
        assert witness_ok(a, b, bad) in (True, False)  # total function
        assert not witness_ok(a, b, bad) or bad == res.witness


def test_self_iso_identity():
    d = build_delta(enumerate_subgroups(build("Sym(3)")))
    res = graph_iso(d, d)
    assert res.isomorphic
    a = struct_from_graph(d.adjacency_bool())
    assert witness_ok(a, a, res.witness)


@pytest.mark.parametrize(
    "s1,s2,expect",
    [
        ("ElemAbelian(3,2)", "Sym(3)", True),
        ("ElemAbelian(3,2)", "Dihedral(6)", True),
        ("ElemAbelian(5,2)", "Dihedral(10)", True),
        ("ElemAbelian(7,2)", "Dihedral(14)", True),
        ("Cyclic(6)", "Cyclic(8)", False),
        (
            "DirectProduct(ElemAbelian(3,2),Cyclic(2))",
            "DirectProduct(Sym(3),Cyclic(3))",
            False,
        ),
    ],
)
def test_paper_graph_pairs(s1, s2, expect, lattice_of):
    _, lat1 = lattice_of(s1)
    _, lat2 = lattice_of(s2)
    d1, d2 = build_delta(lat1), build_delta(lat2)
    assert graph_iso(d1, d2).isomorphic == expect
    assert (canonical_form(d1) == canonical_form(d2)) == expect


def test_poset_iso_examples(lattice_of):
    _, lat4 = lattice_of("Cyclic(4)")
    assert poset_iso(mi_lattice(lat4), chain_poset(2)).isomorphic

    _, lat_a = lattice_of("DirectProduct(Sym(3),Cyclic(3))")
    _, lat_b = lattice_of("DirectProduct(ElemAbelian(3,2),Cyclic(2))")
    assert poset_iso(mi_lattice(lat_a), mi_lattice(lat_b)).isomorphic

    _, lat_s3 = lattice_of("Sym(3)")
    _, lat_c6 = lattice_of("Cyclic(6)")
    assert not poset_iso(mi_lattice(lat_s3), mi_lattice(lat_c6)).isomorphic


def test_poset_iso_respects_invariants():
    # chains of different lengths, antichains, products
    assert not poset_iso(chain_poset(3), chain_poset(4)).isomorphic
    square = product_poset(chain_poset(2), chain_poset(2))
    assert not poset_iso(square, chain_poset(4)).isomorphic
    assert poset_iso(
        product_poset(chain_poset(2), chain_poset(3)),
        product_poset(chain_poset(3), chain_poset(2)),
    ).isomorphic


def test_poset_witness_preserves_order(lattice_of):
    _, lat_a = lattice_of("DirectProduct(Sym(3),Cyclic(3))")
    _, lat_b = lattice_of("DirectProduct(ElemAbelian(3,2),Cyclic(2))")
    a = struct_from_poset(mi_lattice(lat_a).leq_matrix())
    b = struct_from_poset(mi_lattice(lat_b).leq_matrix())
    res = struct_iso(a, b)
    assert res.isomorphic
    assert witness_ok(a, b, res.witness)


def test_complete_graph_with_isolated_vertex_fast():
    # join graphs of elementary abelian squares: K_{p+1} plus one isolated
    for p in (11, 13):
        n = p + 2
        adj = np.ones((n, n), dtype=bool)
        adj[n - 1, :] = adj[:, n - 1] = False
        np.fill_diagonal(adj, False)
        perm = np.roll(np.arange(n), 3)
        relabeled = adj[np.ix_(perm, perm)]
        assert canonical_form(adj) == canonical_form(relabeled)


def test_budget_error():
    a = np.ones((8, 8), dtype=bool)
    np.fill_diagonal(a, False)
    with pytest.raises(ResourceLimitError):
        canonical_form(a, budget=2)


def test_empty_and_single():
    empty = np.zeros((0, 0), dtype=bool)
    assert graph_iso(empty, empty).isomorphic
    one = np.zeros((1, 1), dtype=bool)
    assert graph_iso(one, one).isomorphic
    assert not graph_iso(empty, one).isomorphic
