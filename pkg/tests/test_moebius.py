import pytest

from joinlat import (
    NotSolubleError,
    build,
    chief_series,
    enumerate_subgroups,
    hall_vanishing_check,
    moebius_table,
    mu_product_formula,
    normal_mi_check,
    quotient_group,
)
from joinlat.moebius import elementary_abelian_mu, mu_bottom_of_quotient


@pytest.mark.parametrize(
    "spec,mu1",
    [
        ("Cyclic(5)", -1),
        ("Cyclic(6)", 1),
        ("Cyclic(4)", 0),
        ("ElemAbelian(3,2)", 3),
        ("ElemAbelian(2,2)", 2),
        ("ElemAbelian(2,3)", -8),
        ("Sym(3)", 3),
        ("Alt(4)", 4),
        ("Sym(4)", -12),
        ("Dihedral(10)", 5),
        ("DirectProduct(Sym(3),Cyclic(3))", -3),
    ],
)
def test_known_mu_values(spec, mu1, lattice_of):
    _, lat = lattice_of(spec)
    assert moebius_table(lat).bottom_value == mu1


def test_table_satisfies_recursion(lattice_of):
    for spec in ["Sym(4)", "Cyclic(12)", "Alt(5)"]:
        _, lat = lattice_of(spec)
        table = moebius_table(lat)
        assert table.values[lat.top_id] == 1
        for h in range(lat.count - 1):
            above = sum(
                table.values[k]
                for k in range(lat.count)
                if lat.leq[h, k] and k != h
            )
            assert table.values[h] == -above


@pytest.mark.parametrize(
    "spec",
    ["Cyclic(6)", "Cyclic(4)", "Sym(3)", "Sym(4)", "Alt(4)", "Dihedral(12)",
     "PGroup(3,2,2)", "DirectProduct(Sym(3),Cyclic(3))", "ElemAbelian(2,4)",
     "DirectProduct(Dihedral(10),Cyclic(3))", "Cyclic(30)"],
)
def test_formula_equals_recursion(spec, lattice_of):
    g, lat = lattice_of(spec)
    assert mu_product_formula(g, lat) == moebius_table(lat).bottom_value


def test_formula_rejects_insoluble(lattice_of):
    g, lat = lattice_of("Alt(5)")
    with pytest.raises(NotSolubleError):
        mu_product_formula(g, lat)


def test_elementary_abelian_closed_form():
    assert elementary_abelian_mu([(5, 2)]) == 5
    assert elementary_abelian_mu([(2, 3)]) == -8
    assert elementary_abelian_mu([(3, 2), (2, 1)]) == -3
    for spec, parts in [
        ("ElemAbelian(5,2)", [(5, 2)]),
        ("DirectProduct(ElemAbelian(3,2),Cyclic(2))", [(3, 2), (2, 1)]),
    ]:
        lat = enumerate_subgroups(build(spec))
        assert moebius_table(lat).bottom_value == elementary_abelian_mu(parts)


def test_chief_series_cyclic6(lattice_of):
    g, lat = lattice_of("Cyclic(6)")
    recs = chief_series(g, lat)
    facts = sorted((r.prime, r.trivial_module, r.complemented, r.endo_order) for r in recs)
    assert facts == [(2, True, True, 2), (3, True, True, 3)]


def test_chief_series_sym3(lattice_of):
    g, lat = lattice_of("Sym(3)")
    recs = chief_series(g, lat)
    assert len(recs) == 2
    bottom, top = recs
    assert (bottom.prime, bottom.dimension) == (3, 1)
    assert not bottom.trivial_module and bottom.complemented and bottom.endo_order == 3
    assert (top.prime, top.dimension) == (2, 1)
    assert top.trivial_module and top.complemented


def test_chief_series_cyclic4_non_complemented(lattice_of):
    g, lat = lattice_of("Cyclic(4)")
    recs = chief_series(g, lat)
    assert [r.prime for r in recs] == [2, 2]
    assert [r.complemented for r in recs] == [False, True]
    assert mu_product_formula(g, lat) == 0


def test_chief_series_alt4_module(lattice_of):
    g, lat = lattice_of("Alt(4)")
    recs = chief_series(g, lat)
    v4 = next(r for r in recs if r.dimension == 2)
    assert v4.prime == 2 and not v4.trivial_module and v4.complemented
    assert v4.endo_order == 4  # the plane module has F_4 endomorphisms


def test_chief_series_rejects_insoluble(lattice_of):
    g, lat = lattice_of("Alt(5)")
    with pytest.raises(NotSolubleError):
        chief_series(g, lat)


def test_one_dimensional_endo_is_p(lattice_of):
    for spec in ["Cyclic(6)", "Sym(3)", "Cyclic(12)", "Dihedral(10)"]:
        g, lat = lattice_of(spec)
        for rec in chief_series(g, lat):
            if rec.dimension == 1:
                assert rec.endo_order == rec.prime


def test_delta_counts_independent_of_chain(lattice_of):
    for spec in ["Cyclic(12)", "Sym(4)", "DirectProduct(Sym(3),Cyclic(3))", "PGroup(3,2,2)"]:
        g, lat = lattice_of(spec)
        a = chief_series(g, lat, tie_break="min")
        b = chief_series(g, lat, tie_break="max")
        key = lambda recs: sorted(
            (r.prime, r.dimension, r.trivial_module, r.complemented, r.endo_order)
            for r in recs
        )
        assert key(a) == key(b)


def test_hall_vanishing(lattice_of):
    for spec in ["Sym(3)", "Cyclic(8)", "DirectProduct(Sym(3),Cyclic(3))", "Sym(4)"]:
        _, lat = lattice_of(spec)
        assert hall_vanishing_check(lat, moebius_table(lat)) == []


def test_mu_zero_on_the_two_diagonals(lattice_of):
    _, lat = lattice_of("DirectProduct(Sym(3),Cyclic(3))")
    from joinlat import mi_lattice

    mi = mi_lattice(lat)
    table = moebius_table(lat)
    for s in range(lat.count):
        if not mi.contains(s):
            assert table.values[s] == 0


def test_normal_mi_check(lattice_of):
    for spec in ["Sym(3)", "DirectProduct(Dihedral(10),Cyclic(3))", "ElemAbelian(2,2)"]:
        _, lat = lattice_of(spec)
        assert normal_mi_check(lat, moebius_table(lat)) == []
    # values from the six-subgroup lattice
    _, lat = lattice_of("Sym(3)")
    table = moebius_table(lat)
    normals = sorted(lat.normal_ids(), key=lat.subgroup_order)
    assert [table.values[n] for n in normals] == [3, -1, 1]


def test_interval_property(lattice_of):
    for spec in ["Cyclic(12)", "Sym(4)", "Alt(4)", "DirectProduct(Sym(3),Cyclic(3))"]:
        g, lat = lattice_of(spec)
        table = moebius_table(lat)
        for nid in lat.normal_ids():
            assert table.values[nid] == mu_bottom_of_quotient(g, lat, nid)
