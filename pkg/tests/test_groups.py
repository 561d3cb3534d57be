import itertools
import random

import numpy as np
import pytest

from joinlat import (
    SpecError,
    build,
    direct_product,
    generated_subgroup,
    parse_spec,
    quotient_group,
    subgroup_group,
)
from joinlat.groups import compose, invert


def naive_closure(g, seed):
    """Reference closure independent of the kernels: plain set fixpoint."""
    elems = set(seed) | {0}
    changed = True
    while changed:
        changed = False
        for a in list(elems):
            for b in list(elems):
                c = int(g.mul_table[a, b])
                if c not in elems:
                    elems.add(c)
                    changed = True
    return frozenset(elems)


@pytest.mark.parametrize(
    "spec,order",
    [
        ("Cyclic(1)", 1),
        ("Cyclic(12)", 12),
        ("ElemAbelian(2,3)", 8),
        ("ElemAbelian(5,2)", 25),
        ("Dihedral(2)", 2),
        ("Dihedral(4)", 4),
        ("Dihedral(16)", 16),
        ("Sym(4)", 24),
        ("Alt(4)", 12),
        ("Alt(5)", 60),
        ("PGroup(3,1,2)", 6),
        ("PGroup(7,2,3)", 147),
        ("DirectProduct(Sym(3),Cyclic(3))", 18),
        ("DirectProduct(Cyclic(2),Cyclic(3),Cyclic(5))", 30),
        ("PaperExample648", 648),
    ],
)
def test_build_orders(spec, order):
    g = build(spec)
    assert g.order == order
    assert g.elements[0] == tuple(range(g.degree))


@pytest.mark.parametrize(
    "bad",
    [
        "Cyclic(0)",
        "ElemAbelian(4,2)",
        "ElemAbelian(3,0)",
        "Dihedral(5)",
        "PGroup(3,1,3)",
        "PGroup(5,1,3)",  # 3 does not divide 4
        "PGroup(6,1,2)",
        "DirectProduct(Cyclic(2))",
        "Nonsense(3)",
        "Cyclic(2)x",
        "",
    ],
)
def test_bad_specs_rejected(bad):
    with pytest.raises(SpecError):
        build(bad)


def test_order_bound():
    with pytest.raises(SpecError):
        build("Sym(8)")
    assert build("Sym(5)", order_limit=120).order == 120
    with pytest.raises(SpecError):
        build("Sym(5)", order_limit=100)


def test_spec_round_trip():
    text = "DirectProduct(Sym(3),Cyclic(3),ElemAbelian(2,2))"
    assert str(parse_spec(text)) == text
    assert str(parse_spec(" DirectProduct( Sym(3), Cyclic(3) ) ")) == "DirectProduct(Sym(3),Cyclic(3))"


def test_build_deterministic():
    a = build("DirectProduct(Sym(3),Cyclic(4))")
    b = build("DirectProduct(Sym(3),Cyclic(4))")
    assert a.elements == b.elements
    assert (a.mul_table == b.mul_table).all()


@pytest.mark.parametrize("spec", ["Sym(4)", "Dihedral(12)", "PGroup(5,2,2)", "PaperExample648"])
def test_group_laws(spec):
    g = build(spec)
    rng = random.Random(1)
    n = g.order
    assert all(g.multiply(0, x) == x == g.multiply(x, 0) for x in range(min(n, 50)))
    for _ in range(60):
        a, b, c = (rng.randrange(n) for _ in range(3))
        assert g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c))
        assert g.multiply(a, g.inverse(a)) == 0
    # faithful: only the identity fixes every point
    assert sum(1 for p in g.elements if p == tuple(range(g.degree))) == 1


def test_multiply_examples():
    c6 = build("Cyclic(6)")
    gen = c6.index[c6.generators[0]]
    x = 0
    for _ in range(6):
        x = c6.multiply(x, gen)
    assert x == 0
    s3 = build("Sym(3)")
    t = s3.index[(1, 0, 2)]
    assert s3.multiply(t, t) == 0


def test_generated_subgroup_against_naive():
    rng = random.Random(5)
    for spec in ["Sym(3)", "Alt(4)", "Cyclic(8)", "Dihedral(10)"]:
        g = build(spec)
        for _ in range(12):
            seed = [rng.randrange(g.order) for _ in range(rng.randrange(3))]
            assert generated_subgroup(g, seed) == naive_closure(g, seed)


def test_generated_subgroup_examples():
    s3 = build("Sym(3)")
    assert generated_subgroup(s3, []) == frozenset({0})
    three = s3.index[(1, 2, 0)]
    swap = s3.index[(1, 0, 2)]
    assert len(generated_subgroup(s3, [three, swap])) == 6
    c8 = build("Cyclic(8)")
    gen = c8.index[c8.generators[0]]
    sq = c8.multiply(gen, gen)
    assert len(generated_subgroup(c8, [sq])) == 4


def test_generated_subgroup_idempotent():
    g = build("Sym(4)")
    sub = generated_subgroup(g, [5, 11])
    assert generated_subgroup(g, sub) == sub


def test_direct_product_properties():
    a = build("Sym(3)")
    b = build("Cyclic(3)")
    prod = direct_product(a, b)
    assert prod.order == 18
    assert prod.degree == a.degree + b.degree
    triv = build("Cyclic(1)")
    same = direct_product(triv, a)
    assert same.order == a.order
    assert same.is_abelian() == a.is_abelian()


def test_pgroup_power_automorphism():
    g = build("PGroup(5,2,2)")
    orders = [g.element_order(x) for x in range(g.order)]
    translations = [x for x in range(g.order) if orders[x] in (1, 5)]
    assert len(translations) == 25
    c = next(x for x in range(g.order) if orders[x] == 2)
    # conjugation by the complement acts as one power map x -> x^m, m != 1
    a0 = next(x for x in translations if x != 0)
    target = g.conjugate(a0, c)
    m, power = 1, a0
    while power != target:
        power = g.multiply(power, a0)
        m += 1
    assert m % 5 != 1
    for a in translations:
        power = a
        for _ in range(m - 1):
            power = g.multiply(power, a)
        assert power == g.conjugate(a, c)


def test_subgroup_group():
    g = build("Sym(4)")
    sub = generated_subgroup(g, [g.index[(1, 0, 3, 2)], g.index[(2, 3, 0, 1)]])
    h = subgroup_group(g, sub)
    assert h.order == 4
    assert h.is_abelian()


def test_quotient_group():
    g = build("Sym(4)")
    v4 = generated_subgroup(g, [g.index[(1, 0, 3, 2)], g.index[(2, 3, 0, 1)]])
    q = quotient_group(g, v4)
    assert q.order == 6
    assert not q.is_abelian()  # S4 / V4 = Sym(3)
    c12 = build("Cyclic(12)")
    gen = c12.index[c12.generators[0]]
    sub = generated_subgroup(c12, [c12.multiply(gen, c12.multiply(gen, gen))])
    assert quotient_group(c12, sub).order == 3


def test_wreath_point_stabilizer():
    g = build("PaperExample648")
    stab = [i for i, p in enumerate(g.elements) if p[0] == 0]
    assert len(stab) == 24


def test_compose_invert_helpers():
    for p in itertools.permutations(range(4)):
        assert compose(p, invert(p)) == tuple(range(4))
