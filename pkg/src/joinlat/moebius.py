"""The Moebius function of the subgroup lattice, computed two independent
ways: the top-down recursion, and (for soluble groups) a product over
complemented chief factors.  Their agreement is the central cross-check
of the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .groups import FiniteGroup, quotient_group
from .sublattice import SubgroupLattice, enumerate_subgroups, mi_lattice


class NotSolubleError(ValueError):
    """Raised when a chief factor fails to be elementary abelian."""


@dataclass
class MoebiusTable:
    lattice: SubgroupLattice
    values: dict[int, int]

    @property
    def bottom_value(self) -> int:
        return self.values[self.lattice.bottom_id]


def moebius_table(lat: SubgroupLattice) -> MoebiusTable:
    """mu(G) = 1 and mu(H) = -sum of mu over strict supersets of H.

    Python integers keep the recursion exact at any magnitude.
    """
    n = lat.count
    values: dict[int, int] = {}
    for h in sorted(range(n), key=lambda i: (-int(lat.orders[i]), i)):
        if h == lat.top_id:
            values[h] = 1
            continue
        sup = np.flatnonzero(lat.leq[h])
        values[h] = -sum(values[int(k)] for k in sup if int(k) != h)
    return MoebiusTable(lattice=lat, values=values)


# ---------------------------------------------------------------------------
# chief series with module data
# ---------------------------------------------------------------------------


@dataclass
class ChiefFactorRecord:
    lower_id: int
    upper_id: int
    prime: int
    dimension: int
    action: dict[int, np.ndarray] = field(repr=False)  # generator id -> matrix
    complemented: bool = False
    trivial_module: bool = False
    iso_class: int = -1
    endo_order: int = 0

    @property
    def size(self) -> int:
        return self.prime ** self.dimension


def _prime_power(n: int) -> tuple[int, int] | None:
    for p in range(2, n + 1):
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            return (p, k) if n == 1 else None
    return None


def chief_series(
    g: FiniteGroup, lat: SubgroupLattice, tie_break: str = "min"
) -> list[ChiefFactorRecord]:
    """A maximal chain of normal subgroups with per-factor module data.

    Raises NotSolubleError when a factor is not elementary abelian.
    ``tie_break`` picks among the minimal normal subgroups available at
    each step ("min" or "max" id), so independence checks can rerun the
    series along a different chain.
    """
    normals = lat.normal_ids()
    records = []
    cur = lat.bottom_id
    while cur != lat.top_id:
        ups = [nid for nid in normals if lat.leq[cur, nid] and nid != cur]
        minimal = [
            nid
            for nid in ups
            if not any(lat.leq[m, nid] for m in ups if m != nid)
        ]
        nxt = min(minimal) if tie_break == "min" else max(minimal)
        records.append(_factor_record(g, lat, cur, nxt))
        cur = nxt
    _assign_module_classes(records)
    return records


def _factor_record(g: FiniteGroup, lat: SubgroupLattice, cur: int, nxt: int) -> ChiefFactorRecord:
    ratio = lat.subgroup_order(nxt) // lat.subgroup_order(cur)
    pk = _prime_power(ratio)
    if pk is None:
        raise NotSolubleError(f"{g.spec}: chief factor of order {ratio}")
    p, k = pk
    cur_elems = list(lat.subgroups[cur])
    nxt_elems = list(lat.subgroups[nxt])
    in_cur = np.zeros(g.order, dtype=np.bool_)
    in_cur[cur_elems] = True

    mul = g.mul_table
    inv = g.inv_table
    arr = np.array(nxt_elems, dtype=np.int64)
    # elementary abelian factor: p-th powers and commutators land in the
    # lower term
    pows = arr.copy()
    for _ in range(p - 1):
        pows = mul[pows, arr]
    if not in_cur[pows].all():
        raise NotSolubleError(f"{g.spec}: factor of exponent > {p}")
    comm = mul[mul[np.ix_(inv[arr], inv[arr])], mul[np.ix_(arr, arr)]]
    if not in_cur[comm].all():
        raise NotSolubleError(f"{g.spec}: non-abelian chief factor")

    # coset basis of the factor as an F_p vector space
    stop = g.largest_proper_divisor()
    span = kernels.closure_members(mul, np.array(cur_elems, dtype=np.int64), stop)
    basis: list[int] = []
    for x in nxt_elems:
        if not span[x]:
            basis.append(x)
            span = kernels.closure_members(
                mul, np.array(cur_elems + basis, dtype=np.int64), stop
            )
    assert len(basis) == k

    vec_of: dict[int, tuple[int, ...]] = {}
    for code in range(p ** k):
        vec = []
        c = code
        for _ in range(k):
            vec.append(c % p)
            c //= p
        rep = 0
        for b, e in zip(basis, vec):
            for _ in range(e):
                rep = int(mul[rep, b])
        for ce in cur_elems:
            elem = int(mul[rep, ce])
            assert elem not in vec_of
            vec_of[elem] = tuple(vec)
    assert len(vec_of) == len(nxt_elems)

    action = {}
    trivial = True
    for gid in g.generator_ids:
        mat = np.zeros((k, k), dtype=np.int64)
        for i, b in enumerate(basis):
            mat[:, i] = vec_of[g.conjugate(b, gid)]
        action[gid] = mat
        if not (mat == np.eye(k, dtype=np.int64)).all():
            trivial = False

    want_order = g.order // ratio
    complemented = False
    for kid in np.flatnonzero(lat.orders == want_order):
        kid = int(kid)
        if lat.leq[cur, kid] and lat.intersect(kid, nxt) == cur:
            complemented = True
            break

    return ChiefFactorRecord(
        lower_id=cur,
        upper_id=nxt,
        prime=p,
        dimension=k,
        action=action,
        complemented=complemented,
        trivial_module=trivial,
    )


# ---------------------------------------------------------------------------
# module isomorphism over F_p
# ---------------------------------------------------------------------------


def _nullspace_mod(rows: np.ndarray, p: int) -> np.ndarray:
    """Basis of the solution space of rows @ x = 0 over F_p (rows of coeffs)."""
    a = np.array(rows, dtype=np.int64) % p
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        for i in range(m):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        pivots.append(c)
        r += 1
        if r == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for bi, c in enumerate(free):
        basis[bi, c] = 1
        for ri, pc in enumerate(pivots):
            basis[bi, pc] = (-a[ri, c]) % p
    return basis


def _invertible_mod(mat: np.ndarray, p: int) -> bool:
    a = np.array(mat, dtype=np.int64) % p
    k = a.shape[0]
    r = 0
    for c in range(k):
        piv = None
        for i in range(r, k):
            if a[i, c] % p:
                piv = i
                break
        if piv is None:
            return False
        a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        for i in range(k):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
    return True


def _intertwiner_space(a_mats, b_mats, k: int, p: int) -> np.ndarray:
    """Nullspace basis for T a_s = b_s T over all generators s; T is k x k."""
    rows = []
    for a, b in zip(a_mats, b_mats):
        for i in range(k):
            for j in range(k):
                row = np.zeros(k * k, dtype=np.int64)
                for m in range(k):
                    row[i * k + m] += a[m, j]
                    row[m * k + j] -= b[i, m]
                rows.append(row % p)
    if not rows:
        return np.eye(k * k, dtype=np.int64)
    return _nullspace_mod(np.array(rows), p)


def _has_invertible(space: np.ndarray, k: int, p: int, cap: int = 10_000) -> bool:
    d = space.shape[0]
    if d == 0:
        return False
    total = p ** d
    if total <= cap:
        for code in range(1, total):
            coeffs = []
            c = code
            for _ in range(d):
                coeffs.append(c % p)
                c //= p
            t = np.tensordot(np.array(coeffs), space, axes=1) % p
            if _invertible_mod(t.reshape(k, k), p):
                return True
        return False
    rng = np.random.default_rng(0)
    for _ in range(512):
        coeffs = rng.integers(0, p, size=d)
        if not coeffs.any():
            continue
        t = np.tensordot(coeffs, space, axes=1) % p
        if _invertible_mod(t.reshape(k, k), p):
            return True
    return False


def modules_isomorphic(a: ChiefFactorRecord, b: ChiefFactorRecord) -> bool:
    if (a.prime, a.dimension) != (b.prime, b.dimension):
        return False
    gens = sorted(a.action)
    assert gens == sorted(b.action)
    space = _intertwiner_space(
        [a.action[s] for s in gens], [b.action[s] for s in gens], a.dimension, a.prime
    )
    return _has_invertible(space, a.dimension, a.prime)


def _assign_module_classes(records: list[ChiefFactorRecord]) -> None:
    reps: list[ChiefFactorRecord] = []
    for rec in records:
        gens = sorted(rec.action)
        self_space = _intertwiner_space(
            [rec.action[s] for s in gens],
            [rec.action[s] for s in gens],
            rec.dimension,
            rec.prime,
        )
        rec.endo_order = rec.prime ** self_space.shape[0]
        for idx, rep in enumerate(reps):
            if modules_isomorphic(rec, rep):
                rec.iso_class = idx
                break
        else:
            rec.iso_class = len(reps)
            reps.append(rec)


# ---------------------------------------------------------------------------
# the product formula
# ---------------------------------------------------------------------------


def mu_product_formula(g: FiniteGroup, lat: SubgroupLattice | None = None) -> int:
    """mu(1) from complemented chief factors of a soluble group.

    Zero when the complemented factors do not account for the whole
    order; otherwise the product over module classes V of
    (-1)^delta * |V|^(theta*delta) * q^C(delta,2).
    """
    if lat is None:
        lat = enumerate_subgroups(g)
    return mu_from_records(chief_series(g, lat), g.order)


def mu_from_records(records: list[ChiefFactorRecord], group_order: int) -> int:
    by_class: dict[int, list[ChiefFactorRecord]] = {}
    for rec in records:
        by_class.setdefault(rec.iso_class, []).append(rec)

    covered = 1
    for recs in by_class.values():
        delta = sum(1 for r in recs if r.complemented)
        covered *= recs[0].size ** delta
    if covered != group_order:
        return 0

    out = 1
    for recs in by_class.values():
        delta = sum(1 for r in recs if r.complemented)
        if delta == 0:
            continue
        size = recs[0].size
        theta = 0 if recs[0].trivial_module else 1
        q = recs[0].endo_order
        assert all(r.trivial_module == recs[0].trivial_module for r in recs)
        assert all(r.endo_order == q for r in recs)
        out *= (-1) ** delta * size ** (theta * delta) * q ** math.comb(delta, 2)
    return out


def elementary_abelian_mu(factors: list[tuple[int, int]]) -> int:
    """Closed form for direct products of elementary abelian groups."""
    out = 1
    for p, m in factors:
        out *= (-1) ** m * p ** math.comb(m, 2)
    return out


# ---------------------------------------------------------------------------
# vanishing and normal-subgroup checks
# ---------------------------------------------------------------------------


def hall_vanishing_check(lat: SubgroupLattice, table: MoebiusTable) -> list[int]:
    """Ids of subgroups outside the maximal-intersection members with mu != 0."""
    mi = mi_lattice(lat)
    return [
        sid
        for sid in range(lat.count)
        if not mi.contains(sid) and table.values[sid] != 0
    ]


def normal_mi_check(lat: SubgroupLattice, table: MoebiusTable) -> list[tuple[int, str]]:
    """Normal subgroups above Frat(G) must be members with nonzero mu."""
    mi = mi_lattice(lat)
    frat = lat.frattini_id
    out = []
    for nid in lat.normal_ids():
        if not lat.leq[frat, nid]:
            continue
        if not mi.contains(nid):
            out.append((nid, "not a maximal-intersection"))
        elif table.values[nid] == 0:
            out.append((nid, "mu is zero"))
    return out


def mu_bottom_of_quotient(g: FiniteGroup, lat: SubgroupLattice, nid: int) -> int:
    """mu over the quotient by a normal subgroup, for interval checks."""
    q = quotient_group(g, lat.subgroups[nid])
    qlat = enumerate_subgroups(q)
    return moebius_table(qlat).bottom_value
