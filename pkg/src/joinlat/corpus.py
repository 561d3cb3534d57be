"""Deterministic test corpus: every grammar spec over small primes up to an
order bound, plus pairwise direct products, filtered by a cheap subgroup-
count estimate so the default sweep stays interactive.

The estimate is exact for products of elementary abelian groups (the one
family whose lattices explode) and a lower bound elsewhere; a runtime
work budget backstops the rest.
"""

from __future__ import annotations

import math

from .groups import GroupSpec, parse_spec

CORPUS_PRIMES = (2, 3, 5, 7, 11, 13)
DEFAULT_CORPUS_MAX_ORDER = 200
DEFAULT_CORPUS_MAX_SUBGROUPS = 3000

_SYM_COUNTS = {1: 1, 2: 2, 3: 6, 4: 30, 5: 156, 6: 1455}
_ALT_COUNTS = {1: 1, 2: 1, 3: 2, 4: 10, 5: 59, 6: 501}


def _smooth(n: int) -> bool:
    for p in CORPUS_PRIMES:
        while n % p == 0:
            n //= p
    return n == 1


def _divisor_count(n: int) -> int:
    return sum(1 for d in range(1, n + 1) if n % d == 0)


def _divisor_sum(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def gaussian_subgroup_count(p: int, k: int) -> int:
    """Number of subspaces of F_p^k over all dimensions."""
    total = 0
    for i in range(k + 1):
        num = den = 1
        for j in range(i):
            num *= p ** (k - j) - 1
            den *= p ** (j + 1) - 1
        total += num // den
    return total


def _prime_power_split(n: int) -> list[tuple[int, int]]:
    out = []
    for p in CORPUS_PRIMES:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    assert n == 1
    return out


def estimate_subgroups(spec: GroupSpec | str) -> int:
    """Exact for elementary abelian products; a lower bound otherwise."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    elementary: dict[int, int] = {}
    other = 1

    def absorb(s: GroupSpec):
        nonlocal other
        k = s.kind
        if k == "Cyclic":
            for p, e in _prime_power_split(s.args[0]):
                if e == 1:
                    elementary[p] = elementary.get(p, 0) + 1
                else:
                    other *= e + 1
        elif k == "ElemAbelian":
            p, e = s.args
            elementary[p] = elementary.get(p, 0) + e
        elif k == "Dihedral":
            n = s.args[0] // 2
            other *= _divisor_sum(n) + _divisor_count(n)
        elif k == "Sym":
            other *= _SYM_COUNTS.get(s.args[0], 1)
        elif k == "Alt":
            other *= _ALT_COUNTS.get(s.args[0], 1)
        elif k == "PGroup":
            p, n, _q = s.args
            other *= gaussian_subgroup_count(p, n) + 1
        elif k == "PaperExample648":
            other *= 100
        elif k == "DirectProduct":
            for c in s.children:
                absorb(c)

    absorb(spec)
    for p, rank in elementary.items():
        other *= gaussian_subgroup_count(p, rank)
    return other


def base_specs(max_order: int) -> list[str]:
    """Single-constructor specs of order 2..max_order over the small primes."""
    out = []
    for n in range(2, max_order + 1):
        if _smooth(n):
            out.append(f"Cyclic({n})")
    for p in CORPUS_PRIMES:
        k = 2
        while p ** k <= max_order:
            out.append(f"ElemAbelian({p},{k})")
            k += 1
    for n in range(2, max_order // 2 + 1):
        if _smooth(n):
            out.append(f"Dihedral({2 * n})")
    n = 3
    while math.factorial(n) <= max_order:
        out.append(f"Sym({n})")
        n += 1
    n = 4
    while math.factorial(n) // 2 <= max_order:
        out.append(f"Alt({n})")
        n += 1
    for p in CORPUS_PRIMES:
        for q in CORPUS_PRIMES:
            if q == p or (p - 1) % q:
                continue
            k = 1
            while p ** k * q <= max_order:
                out.append(f"PGroup({p},{k},{q})")
                k += 1
    return out


def _structure_key(spec: GroupSpec) -> tuple:
    """Collapses product spellings of one abelian group to one key;
    distinct constructors of isomorphic nonabelian groups stay distinct."""
    abelian: list[tuple[int, int]] = []
    rest: list[str] = []

    def absorb(s: GroupSpec):
        if s.kind == "Cyclic":
            abelian.extend(_prime_power_split(s.args[0]))
        elif s.kind == "ElemAbelian":
            abelian.extend([(s.args[0], 1)] * s.args[1])
        elif s.kind == "DirectProduct":
            for c in s.children:
                absorb(c)
        else:
            rest.append(str(s))

    absorb(spec)
    return (tuple(sorted(abelian)), tuple(sorted(rest)))


def default_corpus(
    max_order: int = DEFAULT_CORPUS_MAX_ORDER,
    max_subgroups: int = DEFAULT_CORPUS_MAX_SUBGROUPS,
) -> list[str]:
    """Base specs plus all pairwise direct products, by (order, spec)."""
    base = base_specs(max_order)
    entries: dict[str, int] = {}
    for s in base:
        entries[s] = parse_spec(s).order()
    pairs = sorted(base)
    for i, a in enumerate(pairs):
        oa = entries[a]
        for b in pairs[i:]:
            order = oa * entries[b]
            if order <= max_order:
                entries[f"DirectProduct({a},{b})"] = order
    keep = [spec for spec in entries if estimate_subgroups(spec) <= max_subgroups]
    keep.sort(key=lambda s: (entries[s], s))
    seen_structures: set[tuple] = set()
    out = []
    for spec in keep:
        key = _structure_key(parse_spec(spec))
        if key in seen_structures:
            continue
        seen_structures.add(key)
        out.append(spec)
    return out


def coprime_pairs(specs: list[str], limit: int = 12) -> list[tuple[str, str]]:
    """Deterministic coprime-order pairs drawn from a spec list."""
    out = []
    orders = {s: parse_spec(s).order() for s in specs}
    for i, a in enumerate(specs):
        for b in specs[i:]:
            if math.gcd(orders[a], orders[b]) == 1 and orders[a] > 1 and orders[b] > 1:
                out.append((a, b))
                if len(out) >= limit:
                    return out
    return out
