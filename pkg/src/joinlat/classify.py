"""Structural predicates and the nilpotent-partner classification.

A group is a "scalar-action group" here when it is elementary abelian or
an elementary abelian p-group extended by a prime-order power map (the
classical P-groups).  Frattini-free groups share a join graph with some
nilpotent group exactly when they are direct products of such groups
with pairwise coprime orders; sharing a maximal-intersection lattice
additionally allows towers of nonabelian P-groups along a divisibility
chain of primes, optionally with one extra cyclic factor on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .groups import (
    FiniteGroup,
    build,
    commutator_closure,
    derived_reaches_trivial,
    generated_subgroup,
    subgroup_group,
)
from .moebius import chief_series
from .sublattice import SubgroupLattice, enumerate_subgroups, mi_lattice
from . import joingraph, isomorph


class FrattiniNotTrivialError(ValueError):
    """The classification procedures require Frat(G) = 1."""


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_soluble(g: FiniteGroup) -> bool:
    return derived_reaches_trivial(g)


def is_nilpotent(g: FiniteGroup) -> bool:
    everything = np.arange(g.order, dtype=np.int64)
    cur = everything
    while cur.size > 1:
        nxt = np.flatnonzero(commutator_closure(g, cur, everything)).astype(np.int64)
        if nxt.size == cur.size:
            return False
        cur = nxt
    return True


def is_supersoluble(g: FiniteGroup, lat: Optional[SubgroupLattice] = None) -> bool:
    """True when some normal series has all factors cyclic of prime order,
    equivalently when every chief factor has prime order."""
    if not is_soluble(g):
        return False
    if lat is None:
        lat = enumerate_subgroups(g)
    return all(rec.dimension == 1 for rec in chief_series(g, lat))


# ---------------------------------------------------------------------------
# P-group recognition
# ---------------------------------------------------------------------------


def pgroup_signature(g: FiniteGroup) -> Optional[tuple[int, int, Optional[int]]]:
    """(p, n, None) for C_p^n; (p, n, q) for C_p^n extended by a prime-order
    nontrivial power map; None otherwise (including the trivial group)."""
    order = g.order
    if order == 1:
        return None
    factors = _prime_factors(order)
    orders = np.array([g.element_order(x) for x in range(order)], dtype=np.int64)
    if len(factors) == 1:
        (p, n), = factors.items()
        if (orders[1:] == p).all():
            return (p, n, None)
        return None
    if len(factors) != 2:
        return None
    for q in sorted(factors):
        if factors[q] != 1:
            continue
        (p,) = [r for r in factors if r != q]
        n = factors[p]
        # candidate normal subgroup: all elements of order 1 or p
        a_elems = np.flatnonzero((orders == 1) | (orders == p)).astype(np.int64)
        if a_elems.size != p ** n:
            continue
        closed = generated_subgroup(g, a_elems)
        if len(closed) != p ** n:
            continue
        c_candidates = np.flatnonzero(orders == q)
        if not c_candidates.size:
            continue
        c = int(c_candidates[0])
        m = _uniform_power_exponent(g, a_elems, c, p)
        if m is not None and m % p != 1 % p:
            return (p, n, q)
    return None


def _uniform_power_exponent(g: FiniteGroup, a_elems: np.ndarray, c: int, p: int) -> Optional[int]:
    """m with c^-1 a c = a^m for every a in the subgroup, else None."""
    nontrivial = [int(x) for x in a_elems if x != 0]
    if not nontrivial:
        return 1
    a0 = nontrivial[0]
    target = g.conjugate(a0, c)
    power, m = a0, 1
    while power != target:
        power = g.multiply(power, a0)
        m += 1
        if m > p:
            return None
    for a in nontrivial[1:]:
        power = a
        for _ in range(m - 1):
            power = g.multiply(power, a)
        if power != g.conjugate(a, c):
            return None
    return m


# ---------------------------------------------------------------------------
# coprime factorization
# ---------------------------------------------------------------------------


def coprime_factorization(g: FiniteGroup, lat: SubgroupLattice) -> list[int]:
    """Finest internal direct product of normal subgroups with pairwise
    coprime orders, as subgroup ids (Hall subgroups of prime blocks)."""
    order = g.order
    if order == 1:
        return [lat.top_id]
    factors = _prime_factors(order)
    primes = sorted(factors)
    orders = np.array([g.element_order(x) for x in range(order)], dtype=np.int64)
    supports = []
    for x in range(order):
        supports.append(frozenset(p for p in primes if orders[x] % p == 0))

    def hall_id(block: frozenset) -> Optional[int]:
        members = [x for x in range(order) if supports[x] <= block]
        want = math.prod(p ** factors[p] for p in block) if block else 1
        if len(members) != want:
            return None
        return lat.id_of(members)

    blocks = [frozenset(primes)]
    for size in range(1, len(primes)):
        for combo in _subsets(primes, size):
            s = frozenset(combo)
            comp = frozenset(primes) - s
            if hall_id(s) is not None and hall_id(comp) is not None:
                nxt = []
                for b in blocks:
                    for part in (b & s, b - s):
                        if part:
                            nxt.append(part)
                blocks = nxt
    ids = []
    for b in sorted(blocks, key=lambda b: sorted(b)):
        hid = hall_id(b)
        assert hid is not None, "refinement of valid splits stays valid"
        ids.append(hid)
    return ids


def _subsets(items, size):
    import itertools

    return itertools.combinations(items, size)


# ---------------------------------------------------------------------------
# tower (divisibility-chain) recognition of one coprime factor
# ---------------------------------------------------------------------------

KIND_ELEM_ABELIAN = "elementary-abelian"
KIND_CHAIN = "chain"
KIND_CHAIN_CYCLIC = "chain-with-cyclic"
KIND_OTHER = "other"


def indecomposable_factors(
    f: FiniteGroup, lat: Optional[SubgroupLattice] = None
) -> list[FiniteGroup]:
    """Split into directly indecomposable normal factors (Krull-Schmidt)."""
    if f.order == 1:
        return [f]
    if lat is None:
        lat = enumerate_subgroups(f)
    normals = [
        nid
        for nid in lat.normal_ids()
        if nid not in (lat.bottom_id, lat.top_id)
    ]
    normals.sort(key=lambda nid: (int(lat.orders[nid]), nid))
    for n1 in normals:
        o1 = int(lat.orders[n1])
        for n2 in normals:
            if int(lat.orders[n2]) * o1 != f.order:
                continue
            if lat.intersect(n1, n2) != lat.bottom_id:
                continue
            g1 = subgroup_group(f, lat.subgroups[n1])
            g2 = subgroup_group(f, lat.subgroups[n2])
            return indecomposable_factors(g1) + indecomposable_factors(g2)
    return [f]


def classify_factor(f: FiniteGroup, lat: Optional[SubgroupLattice] = None):
    """Kind of one coprime factor: elementary abelian, a chain of nonabelian
    P-groups along a prime divisibility chain, such a chain with one extra
    cyclic factor, or anything else."""
    sig = pgroup_signature(f)
    if sig is not None and sig[2] is None:
        return KIND_ELEM_ABELIAN, [sig]
    parts = indecomposable_factors(f, lat)
    nonabelian: list[tuple[int, int, int]] = []
    cyclic_primes: list[int] = []
    for part in parts:
        psig = pgroup_signature(part)
        if psig is None:
            return KIND_OTHER, None
        p, n, q = psig
        if q is None:
            if n != 1:
                return KIND_OTHER, None
            cyclic_primes.append(p)
        else:
            nonabelian.append((p, n, q))
    if not nonabelian:
        return KIND_OTHER, None
    nonabelian.sort(key=lambda s: -s[0])
    ps = [s[0] for s in nonabelian]
    if len(set(ps)) != len(ps):
        return KIND_OTHER, None
    for i in range(len(nonabelian) - 1):
        if nonabelian[i][2] != nonabelian[i + 1][0]:
            return KIND_OTHER, None
    if not cyclic_primes:
        return KIND_CHAIN, nonabelian
    if len(cyclic_primes) == 1 and cyclic_primes[0] == nonabelian[0][0]:
        return KIND_CHAIN_CYCLIC, nonabelian
    return KIND_OTHER, None


def _partner_spec_from_parts(parts: list[tuple[int, int]]) -> str:
    parts = sorted(parts, key=lambda t: (-t[0], -t[1]))
    specs = [
        f"ElemAbelian({p},{k})" if k > 1 else f"Cyclic({p})" for p, k in parts
    ]
    if len(specs) == 1:
        return specs[0]
    return "DirectProduct(%s)" % ",".join(specs)


def _require_frattini_free(lat: SubgroupLattice):
    if lat.frattini_id != lat.bottom_id:
        raise FrattiniNotTrivialError(
            f"{lat.group.spec}: classification needs a trivial Frattini subgroup"
        )


def delta_nilpotent_partner(
    g: FiniteGroup, lat: SubgroupLattice
) -> tuple[bool, Optional[str]]:
    """Does G share its join graph with a nilpotent group?  For
    Frattini-free G: exactly the coprime products of P-groups; the
    partner swaps each nonabelian P-group C_p^n x| C_q for C_p^(n+1)."""
    _require_frattini_free(lat)
    if g.order == 1:
        return True, "Cyclic(1)"
    parts: list[tuple[int, int]] = []
    for fid in coprime_factorization(g, lat):
        factor = subgroup_group(g, lat.subgroups[fid])
        sig = pgroup_signature(factor)
        if sig is None:
            return False, None
        p, n, q = sig
        parts.append((p, n) if q is None else (p, n + 1))
    return True, _partner_spec_from_parts(parts)


def m_nilpotent_partner(
    g: FiniteGroup, lat: SubgroupLattice
) -> tuple[bool, Optional[str]]:
    """Does G share its maximal-intersection lattice with a nilpotent group?"""
    _require_frattini_free(lat)
    if g.order == 1:
        return True, "Cyclic(1)"
    parts: list[tuple[int, int]] = []
    for fid in coprime_factorization(g, lat):
        if fid == lat.top_id:
            factor, flat = g, lat
        else:
            factor, flat = subgroup_group(g, lat.subgroups[fid]), None
        kind, payload = classify_factor(factor, flat)
        if kind == KIND_ELEM_ABELIAN:
            p, n, _ = payload[0]
            parts.append((p, n))
        elif kind == KIND_CHAIN:
            parts.extend((p, n + 1) for p, n, _ in payload)
        elif kind == KIND_CHAIN_CYCLIC:
            parts.extend((p, n + 1) for p, n, _ in payload)
            parts.append((payload[-1][2], 1))
        else:
            return False, None
    return True, _partner_spec_from_parts(parts)


# ---------------------------------------------------------------------------
# exhaustive partner search
# ---------------------------------------------------------------------------


def _gaussian_subgroup_count(p: int, k: int) -> int:
    total = 0
    for i in range(k + 1):
        num = den = 1
        for j in range(i):
            num *= p ** (k - j) - 1
            den *= p ** (j + 1) - 1
        total += num // den
    return total


def _nilpotent_candidates(max_order: int):
    """All direct products of elementary abelian groups over distinct primes
    with order <= max_order, by (order, spec string)."""
    primes = [p for p in range(2, max_order + 1) if _prime_factors(p) == {p: 1}]
    found: list[tuple[int, tuple[tuple[int, int], ...]]] = []

    def rec(start: int, order: int, parts: tuple):
        if parts:
            found.append((order, parts))
        for idx in range(start, len(primes)):
            p = primes[idx]
            if order * p > max_order:
                break
            k, new_order = 1, order * p
            while new_order <= max_order:
                rec(idx + 1, new_order, parts + ((p, k),))
                k += 1
                new_order *= p

    rec(0, 1, ())
    entries = []
    for order, parts in found:
        count = math.prod(_gaussian_subgroup_count(p, k) for p, k in parts)
        entries.append((order, _partner_spec_from_parts(list(parts)), count))
    entries.sort(key=lambda e: (e[0], e[1]))
    return entries


def search_nilpotent_partner(
    g: FiniteGroup,
    lat: SubgroupLattice,
    max_order: int,
    mode: str = "delta",
) -> Optional[str]:
    """Scan Frattini-free nilpotent groups up to ``max_order`` for one whose
    join graph (mode "delta") or maximal-intersection lattice (mode "m")
    matches G; first match in (order, spec) order, or None."""
    _require_frattini_free(lat)
    if mode not in ("delta", "m"):
        raise ValueError(f"unknown mode {mode!r}")
    if g.order == 1:
        return "Cyclic(1)"
    if mode == "delta":
        own_graph = joingraph.build_delta(lat)
        own_degrees = sorted(
            int(d) for d in np.bitwise_count(own_graph.adj).sum(axis=1)
        )
        want_count = lat.count
    else:
        own_mi = mi_lattice(lat)
        own_poset = own_mi.leq_matrix()
        want_count = own_mi.count

    for order, spec, count in _nilpotent_candidates(max_order):
        if count != want_count:
            continue
        cand = build(spec)
        cand_lat = enumerate_subgroups(cand)
        if mode == "delta":
            cand_graph = joingraph.build_delta(cand_lat)
            cand_degrees = sorted(
                int(d) for d in np.bitwise_count(cand_graph.adj).sum(axis=1)
            )
            if cand_degrees != own_degrees:
                continue
            if isomorph.graph_iso(own_graph, cand_graph).isomorphic:
                return spec
        else:
            cand_mi = mi_lattice(cand_lat)
            if isomorph.poset_iso(own_poset, cand_mi.leq_matrix()).isomorphic:
                return spec
    return None


# ---------------------------------------------------------------------------
# the full record
# ---------------------------------------------------------------------------


@dataclass
class Classification:
    spec: str
    order: int
    soluble: bool
    nilpotent: bool
    supersoluble: bool
    frattini_free: bool
    pgroup: Optional[tuple[int, int, Optional[int]]]
    coprime_factors: list[tuple[int, str]]  # (subgroup id, factor kind)
    delta_partner: Optional[bool]
    delta_partner_spec: Optional[str]
    m_partner: Optional[bool]
    m_partner_spec: Optional[str]

    def to_json_dict(self) -> dict:
        return {
            "spec": self.spec,
            "order": self.order,
            "soluble": self.soluble,
            "nilpotent": self.nilpotent,
            "supersoluble": self.supersoluble,
            "frattini_free": self.frattini_free,
            "pgroup_signature": list(self.pgroup) if self.pgroup else None,
            "coprime_factors": [
                {"subgroup": sid, "kind": kind} for sid, kind in self.coprime_factors
            ],
            "delta_partner": {
                "exists": self.delta_partner,
                "partner": self.delta_partner_spec,
            },
            "m_partner": {"exists": self.m_partner, "partner": self.m_partner_spec},
        }


def classification(g: FiniteGroup, lat: Optional[SubgroupLattice] = None) -> Classification:
    if lat is None:
        lat = enumerate_subgroups(g)
    soluble = is_soluble(g)
    nilpotent = is_nilpotent(g)
    supersoluble = is_supersoluble(g, lat) if soluble else False
    frattini_free = lat.frattini_id == lat.bottom_id
    factors = []
    if g.order > 1:
        for fid in coprime_factorization(g, lat):
            if fid == lat.top_id:
                kind, _ = classify_factor(g, lat)
            else:
                kind, _ = classify_factor(subgroup_group(g, lat.subgroups[fid]))
            factors.append((fid, kind))
    in_delta = delta_spec = in_m = m_spec = None
    if frattini_free:
        in_delta, delta_spec = delta_nilpotent_partner(g, lat)
        in_m, m_spec = m_nilpotent_partner(g, lat)
    return Classification(
        spec=g.spec,
        order=g.order,
        soluble=soluble,
        nilpotent=nilpotent,
        supersoluble=supersoluble,
        frattini_free=frattini_free,
        pgroup=pgroup_signature(g),
        coprime_factors=factors,
        delta_partner=in_delta,
        delta_partner_spec=delta_spec,
        m_partner=in_m,
        m_partner_spec=m_spec,
    )
