"""Concrete finite groups as faithful permutation groups.

Every group is stored with its complete element list (index 0 is the
identity, the rest sorted lexicographically by permutation word) and a
cached multiplication table, so all downstream work happens on small
integer indices.

Spec grammar (ASCII, whitespace-insensitive)::

    Cyclic(n) | ElemAbelian(p,k) | Dihedral(m) | Sym(n) | Alt(n)
    | PGroup(p,n,q) | DirectProduct(spec,spec[,spec]*) | PaperExample648
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels
from .config import SpecError, max_order

Perm = tuple[int, ...]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def compose(a: Perm, b: Perm) -> Perm:
    """a after b: result[i] = a[b[i]]."""
    return tuple(a[b[i]] for i in range(len(a)))


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


# ---------------------------------------------------------------------------
# spec AST and parser
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    args: tuple[int, ...] = ()
    children: tuple["GroupSpec", ...] = ()

    def __str__(self) -> str:
        if self.kind == "PaperExample648":
            return self.kind
        if self.kind == "DirectProduct":
            return "DirectProduct(%s)" % ",".join(str(c) for c in self.children)
        return "%s(%s)" % (self.kind, ",".join(str(a) for a in self.args))

    def order(self) -> int:
        k, a = self.kind, self.args
        if k == "Cyclic":
            return a[0]
        if k == "ElemAbelian":
            return a[0] ** a[1]
        if k == "Dihedral":
            return a[0]
        if k == "Sym":
            return math.factorial(a[0])
        if k == "Alt":
            return max(1, math.factorial(a[0]) // 2)
        if k == "PGroup":
            return a[0] ** a[1] * a[2]
        if k == "PaperExample648":
            return 648
        if k == "DirectProduct":
            out = 1
            for c in self.children:
                out *= c.order()
            return out
        raise SpecError(f"unknown constructor {k!r}")

    def validate(self) -> None:
        k, a = self.kind, self.args
        if k == "Cyclic":
            if a[0] < 1:
                raise SpecError("Cyclic(n) needs n >= 1")
        elif k == "ElemAbelian":
            p, e = a
            if not _is_prime(p):
                raise SpecError(f"ElemAbelian({p},{e}): {p} is not prime")
            if e < 1:
                raise SpecError("ElemAbelian(p,k) needs k >= 1")
        elif k == "Dihedral":
            if a[0] < 2 or a[0] % 2:
                raise SpecError("Dihedral(m) needs even m >= 2")
        elif k in ("Sym", "Alt"):
            if a[0] < 1:
                raise SpecError(f"{k}(n) needs n >= 1")
        elif k == "PGroup":
            p, n, q = a
            if not (_is_prime(p) and _is_prime(q)):
                raise SpecError(f"PGroup({p},{n},{q}): p and q must be prime")
            if p == q:
                raise SpecError("PGroup(p,n,q) needs p != q")
            if n < 1:
                raise SpecError("PGroup(p,n,q) needs n >= 1")
            if (p - 1) % q:
                raise SpecError(f"PGroup({p},{n},{q}): q must divide p-1")
        elif k == "DirectProduct":
            if len(self.children) < 2:
                raise SpecError("DirectProduct needs at least two factors")
            for c in self.children:
                c.validate()
        elif k != "PaperExample648":
            raise SpecError(f"unknown constructor {k!r}")


_ATOMS = {"Cyclic": 1, "ElemAbelian": 2, "Dihedral": 1, "Sym": 1, "Alt": 1, "PGroup": 3}


class _Parser:
    def __init__(self, text: str):
        self.text = "".join(text.split())
        self.pos = 0

    def fail(self, msg: str):
        raise SpecError(f"bad group spec at position {self.pos}: {msg} (in {self.text!r})")

    def parse(self) -> GroupSpec:
        spec = self.spec()
        if self.pos != len(self.text):
            self.fail("trailing characters")
        return spec

    def spec(self) -> GroupSpec:
        name = self.ident()
        if name == "PaperExample648":
            return GroupSpec(name)
        if name == "DirectProduct":
            self.expect("(")
            children = [self.spec()]
            while self.peek() == ",":
                self.pos += 1
                children.append(self.spec())
            self.expect(")")
            return GroupSpec(name, children=tuple(children))
        if name not in _ATOMS:
            self.fail(f"unknown constructor {name!r}")
        self.expect("(")
        args = [self.integer()]
        for _ in range(_ATOMS[name] - 1):
            self.expect(",")
            args.append(self.integer())
        self.expect(")")
        return GroupSpec(name, args=tuple(args))

    def ident(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum()):
            self.pos += 1
        if start == self.pos:
            self.fail("expected a constructor name")
        return self.text[start:self.pos]

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.fail("expected an integer")
        return int(self.text[start:self.pos])

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1


def parse_spec(text: str) -> GroupSpec:
    spec = _Parser(text).parse()
    spec.validate()
    return spec


# ---------------------------------------------------------------------------
# the group object
# ---------------------------------------------------------------------------


@dataclass
class FiniteGroup:
    """Immutable after construction; safe to share between workers."""

    spec: str
    degree: int
    generators: list[Perm]
    elements: list[Perm]
    mul_table: np.ndarray
    inv_table: np.ndarray
    index: dict = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generator_ids(self) -> list[int]:
        return [self.index[g] for g in self.generators]

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv_table[a])

    def conjugate(self, x: int, g: int) -> int:
        """g^-1 * x * g."""
        return int(self.mul_table[self.mul_table[self.inv_table[g], x], g])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = int(self.mul_table[x, a])
            k += 1
        return k

    def largest_proper_divisor(self) -> int:
        n = self.order
        for f in range(2, n + 1):
            if n % f == 0:
                return n // f
        return 1

    def is_abelian(self) -> bool:
        ids = self.generator_ids
        return all(
            self.mul_table[a, b] == self.mul_table[b, a] for a in ids for b in ids
        )


def _closure_of_perms(gens: Sequence[Perm], degree: int) -> list[Perm]:
    identity = tuple(range(degree))
    seen = {identity}
    queue = [identity]
    while queue:
        cur = queue.pop()
        for g in gens:
            nxt = compose(g, cur)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    ordered = sorted(seen)
    ordered.remove(identity)
    return [identity] + ordered


def from_generators(gens: Sequence[Perm], degree: int, spec: str) -> FiniteGroup:
    elements = _closure_of_perms(gens, degree)
    return from_elements(elements, spec, generators=list(gens))


def from_elements(
    elements: list[Perm], spec: str, generators: Optional[list[Perm]] = None
) -> FiniteGroup:
    """Build tables for an explicit, closed element list.

    ``elements`` must be closed under composition; the list is re-sorted to
    the canonical order (identity first, then lexicographic).
    """
    degree = len(elements[0])
    identity = tuple(range(degree))
    ordered = sorted(set(elements))
    ordered.remove(identity)
    ordered = [identity] + ordered
    index = {p: i for i, p in enumerate(ordered)}
    n = len(ordered)
    arr = np.array(ordered, dtype=np.int16)
    void = np.dtype((np.void, arr.dtype.itemsize * degree))
    flat_keys = np.ascontiguousarray(arr).view(void).ravel()
    key_order = np.argsort(flat_keys)
    sorted_keys = flat_keys[key_order]

    def lookup(composed: np.ndarray) -> np.ndarray:
        keys = np.ascontiguousarray(composed).view(void).reshape(-1)
        pos = np.searchsorted(sorted_keys, keys)
        assert (sorted_keys[pos] == keys).all(), "element list is not closed"
        return key_order[pos].astype(np.int32)

    if n * n * degree <= 20_000_000:
        # mul[i, j] = index of ordered[i] after ordered[j], in one shot
        mul = lookup(arr[:, arr].reshape(n * n, degree)).reshape(n, n)
    else:
        mul = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            mul[i] = lookup(arr[i][arr])
    inv = np.empty(n, dtype=np.int32)
    for i, p in enumerate(ordered):
        inv[i] = index[invert(p)]
    if generators is None:
        generators = _small_generating_set(ordered, mul)
    return FiniteGroup(
        spec=spec,
        degree=degree,
        generators=list(generators),
        elements=ordered,
        mul_table=mul,
        inv_table=inv,
        index=index,
    )


def _small_generating_set(ordered: list[Perm], mul: np.ndarray) -> list[Perm]:
    n = len(ordered)
    stop = n  # no early exit: we want the exact closure
    covered = np.zeros(n, dtype=np.bool_)
    covered[0] = True
    gens: list[int] = []
    while not covered.all():
        nxt = int(np.flatnonzero(~covered)[0])
        gens.append(nxt)
        covered = kernels.closure_members(mul, np.array(gens, dtype=np.int64), stop)
    return [ordered[i] for i in gens]


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def _cyclic_gens(n: int) -> tuple[list[Perm], int]:
    if n == 1:
        return [], 1
    rot = tuple((i + 1) % n for i in range(n))
    return [rot], n


def _elem_abelian_gens(p: int, k: int) -> tuple[list[Perm], int]:
    degree = p * k
    gens = []
    for block in range(k):
        perm = list(range(degree))
        for i in range(p):
            perm[block * p + i] = block * p + (i + 1) % p
        gens.append(tuple(perm))
    return gens, degree


def _dihedral_gens(m: int) -> tuple[list[Perm], int]:
    n = m // 2
    if n == 1:
        return [(1, 0)], 2
    if n == 2:
        return [(1, 0, 2, 3), (0, 1, 3, 2)], 4
    rot = tuple((i + 1) % n for i in range(n))
    flip = tuple((n - i) % n for i in range(n))
    return [rot, flip], n


def _sym_gens(n: int) -> tuple[list[Perm], int]:
    if n == 1:
        return [], 1
    cycle = tuple((i + 1) % n for i in range(n))
    swap = tuple([1, 0] + list(range(2, n)))
    return [swap, cycle] if n > 2 else [swap], n


def _alt_gens(n: int) -> tuple[list[Perm], int]:
    if n <= 2:
        return [], max(1, n)
    three = tuple([1, 2, 0] + list(range(3, n)))
    if n == 3:
        return [three], n
    if n % 2:
        big = tuple((i + 1) % n for i in range(n))
    else:
        big = tuple([0] + [1 + (i % (n - 1)) for i in range(1, n)])
    return [three, big], n


def _vector_points(p: int, dim: int) -> list[tuple[int, ...]]:
    pts = [()]
    for _ in range(dim):
        pts = [v + (c,) for v in pts for c in range(p)]
    return pts


def _perm_from_map(points: list, mapping) -> Perm:
    pos = {pt: i for i, pt in enumerate(points)}
    return tuple(pos[mapping(pt)] for pt in points)


def _pgroup_gens(p: int, n: int, q: int) -> tuple[list[Perm], int]:
    m = 0
    for cand in range(2, p):
        k, x = 1, cand
        while x != 1:
            x = x * cand % p
            k += 1
        if k == q:
            m = cand
            break
    if not m:
        raise SpecError(f"PGroup({p},{n},{q}): no element of order {q} mod {p}")
    points = _vector_points(p, n)
    gens = []
    for axis in range(n):
        gens.append(
            _perm_from_map(
                points,
                lambda v, a=axis: v[:a] + ((v[a] + 1) % p,) + v[a + 1:],
            )
        )
    gens.append(_perm_from_map(points, lambda v: tuple(c * m % p for c in v)))
    return gens, p ** n


def _wreath648_gens() -> tuple[list[Perm], int]:
    # 27 points = F_3^3; generators: one translation, the coordinate
    # 3-cycle, and one sign flip.  Their closure is the order-648
    # affine group (translations extended by the signed cyclic shifts).
    points = _vector_points(3, 3)
    translate = _perm_from_map(points, lambda v: ((v[0] + 1) % 3,) + v[1:])
    shift = _perm_from_map(points, lambda v: (v[2], v[0], v[1]))
    flip = _perm_from_map(points, lambda v: ((-v[0]) % 3,) + v[1:])
    return [translate, shift, flip], 27


def _shift_perm(p: Perm, offset: int, degree: int) -> Perm:
    out = list(range(degree))
    for i, v in enumerate(p):
        out[offset + i] = offset + v
    return tuple(out)


def build(spec: GroupSpec | str, order_limit: Optional[int] = None) -> FiniteGroup:
    """Construct the group named by ``spec``; deterministic element order."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    else:
        spec.validate()
    limit = max_order() if order_limit is None else order_limit
    order = spec.order()
    if order > limit:
        raise SpecError(f"{spec} has order {order} > limit {limit}")

    k = spec.kind
    if k == "Cyclic":
        gens, degree = _cyclic_gens(spec.args[0])
    elif k == "ElemAbelian":
        gens, degree = _elem_abelian_gens(*spec.args)
    elif k == "Dihedral":
        gens, degree = _dihedral_gens(spec.args[0])
    elif k == "Sym":
        gens, degree = _sym_gens(spec.args[0])
    elif k == "Alt":
        gens, degree = _alt_gens(spec.args[0])
    elif k == "PGroup":
        gens, degree = _pgroup_gens(*spec.args)
    elif k == "PaperExample648":
        gens, degree = _wreath648_gens()
    elif k == "DirectProduct":
        parts = [build(c, order_limit=limit) for c in spec.children]
        return _product_of(parts, str(spec))
    else:  # pragma: no cover - validate() rejects these
        raise SpecError(f"unknown constructor {k!r}")
    group = from_generators(gens, degree, str(spec))
    assert group.order == order, f"{spec}: built order {group.order}, want {order}"
    return group


def _product_of(parts: list[FiniteGroup], spec: str) -> FiniteGroup:
    degree = sum(p.degree for p in parts)
    gens: list[Perm] = []
    offset = 0
    for part in parts:
        for g in part.generators:
            gens.append(_shift_perm(g, offset, degree))
        offset += part.degree
    if not gens:
        return from_generators([], degree, spec)
    return from_generators(gens, degree, spec)


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Product acting on the disjoint union of the two point sets."""
    return _product_of([g1, g2], f"DirectProduct({g1.spec},{g2.spec})")


# ---------------------------------------------------------------------------
# derived groups and subgroup closure
# ---------------------------------------------------------------------------


def generated_subgroup(g: FiniteGroup, seed: Iterable[int]) -> frozenset[int]:
    """Smallest subgroup containing ``seed`` (always includes the identity)."""
    seed_arr = np.fromiter(seed, dtype=np.int64)
    members = kernels.closure_members(g.mul_table, seed_arr, g.largest_proper_divisor())
    return frozenset(int(i) for i in np.flatnonzero(members))


def commutator_closure(g: FiniteGroup, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Membership mask of the subgroup generated by [x, y], x in left, y in right."""
    mul, inv = g.mul_table, g.inv_table
    pairs = mul[mul[np.ix_(inv[left], inv[right])], mul[np.ix_(left, right)]]
    seeds = np.unique(pairs.ravel()).astype(np.int64)
    return kernels.closure_members(mul, seeds, g.largest_proper_divisor())


def derived_reaches_trivial(g: FiniteGroup) -> bool:
    """Whether the derived series ends at the identity (solubility)."""
    cur = np.arange(g.order, dtype=np.int64)
    while cur.size > 1:
        nxt = np.flatnonzero(commutator_closure(g, cur, cur)).astype(np.int64)
        if nxt.size == cur.size:
            return False
        cur = nxt
    return True


def subgroup_group(g: FiniteGroup, indices: Iterable[int]) -> FiniteGroup:
    """The subgroup on the given element indices as a standalone group."""
    elems = [g.elements[i] for i in sorted(indices)]
    return from_elements(elems, f"Subgroup[{g.spec}]")


def quotient_group(g: FiniteGroup, normal_indices: Iterable[int]) -> FiniteGroup:
    """G/N realized by the action on right cosets of N (N must be normal)."""
    normal = sorted(normal_indices)
    n = g.order
    in_n = np.zeros(n, dtype=np.bool_)
    in_n[normal] = True
    coset_rep = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if coset_rep[x] >= 0:
            continue
        members = g.mul_table[normal, x]
        coset_rep[members] = x
        reps.append(x)
    rep_pos = {r: i for i, r in enumerate(reps)}
    degree = len(reps)
    gens = []
    for gid in (g.generator_ids or [0]):
        perm = tuple(rep_pos[int(coset_rep[g.mul_table[r, gid]])] for r in reps)
        gens.append(perm)
    gens = [p for p in gens if p != tuple(range(degree))]
    return from_generators(gens, degree, f"Quotient[{g.spec}/{len(normal)}]")
