"""Complete subgroup lattices, maximal subgroups, Frattini subgroup,
and the lattice of maximal-intersections.

Subgroups are stored as element-index bitsets (packed uint64 rows), so
inclusion and intersection are word operations.  Enumeration seeds with
all cyclic subgroups and closes under joins with cyclic subgroups; every
subgroup is such a join, so the fixpoint is exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .config import DEFAULT_LIMITS, Limits, ResourceLimitError
from .groups import FiniteGroup, derived_reaches_trivial


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % f for f in range(2, int(n ** 0.5) + 1))


@dataclass
class SubgroupLattice:
    group: FiniteGroup
    subgroups: list[tuple[int, ...]]  # sorted element-index tuples
    masks: np.ndarray  # packed uint64, one row per subgroup
    orders: np.ndarray
    leq: np.ndarray  # leq[a, b] == subgroup a contained in subgroup b
    maximal_ids: list[int]
    frattini_id: int
    id_by_mask: dict = field(repr=False)
    maxmask: np.ndarray = field(repr=False)  # row i: bitset of maximals containing i

    @property
    def count(self) -> int:
        return len(self.subgroups)

    @property
    def bottom_id(self) -> int:
        return 0

    @property
    def top_id(self) -> int:
        return self.count - 1

    def subgroup_order(self, sid: int) -> int:
        return int(self.orders[sid])

    def id_of(self, indices) -> Optional[int]:
        mask = kernels.pack_indices(sorted(indices), self.group.order)
        return self.id_by_mask.get(mask.tobytes())

    def id_of_mask(self, mask: np.ndarray) -> Optional[int]:
        return self.id_by_mask.get(mask.tobytes())

    def intersect(self, a: int, b: int) -> int:
        got = self.id_by_mask.get((self.masks[a] & self.masks[b]).tobytes())
        assert got is not None, "lattice is intersection-closed"
        return got

    def join(self, a: int, b: int) -> int:
        """Smallest subgroup containing a and b (the generated subgroup)."""
        union = np.flatnonzero(
            kernels.unpack_rows(self.masks[a] | self.masks[b], self.group.order)[0]
        )
        members = kernels.closure_members(
            self.group.mul_table, union, self.group.largest_proper_divisor()
        )
        got = self.id_by_mask.get(kernels.pack_rows(members)[0].tobytes())
        assert got is not None, "lattice enumeration is complete"
        return got

    def generating_ids(self, sid: int) -> list[int]:
        """A small generating set of element indices for subgroup ``sid``."""
        mul = self.group.mul_table
        stop = self.group.order
        want = np.array(kernels.unpack_rows(self.masks[sid], self.group.order)[0])
        covered = kernels.closure_members(mul, np.zeros(0, dtype=np.int64), stop)
        gens: list[int] = []
        while (covered < want).any():
            nxt = int(np.flatnonzero(want & ~covered)[0])
            gens.append(nxt)
            covered = kernels.closure_members(mul, np.array(gens, dtype=np.int64), stop)
        return gens

    def normal_ids(self) -> list[int]:
        """Subgroups invariant under conjugation by every generator."""
        g = self.group
        n = g.order
        rows = kernels.unpack_rows(self.masks, n)
        normal = np.ones(self.count, dtype=np.bool_)
        for gid in g.generator_ids:
            conj = np.array(
                [g.mul_table[g.mul_table[g.inv_table[gid], x], gid] for x in range(n)],
                dtype=np.int64,
            )
            moved = np.zeros_like(rows)
            moved[:, conj] = rows
            normal &= (moved == rows).all(axis=1)
        return [int(i) for i in np.flatnonzero(normal)]


def _cyclic_seeds(g: FiniteGroup) -> dict[bytes, tuple[np.ndarray, list[int]]]:
    """sorted-elements bytes -> (element array, generators) for cyclic subgroups."""
    out: dict[bytes, tuple[np.ndarray, list[int]]] = {}
    for x in range(g.order):
        members = [0]
        y = x
        while y != 0:
            members.append(y)
            y = int(g.mul_table[y, x])
        elems = np.array(sorted(members), dtype=np.int64)
        out.setdefault(elems.tobytes(), (elems, [x] if x else []))
    return out


def _perfect_candidate_seeds(
    g: FiniteGroup, cyc_gens: list[int], limits: Limits
) -> list[tuple[np.ndarray, list[int]]]:
    """Closures of pairs of cyclic generators.

    Prime-index extension reaches every subgroup except perfect ones; at
    these orders every perfect group is 2-generated, so pairs of cyclic
    generators cover the missing seeds.
    """
    mul = g.mul_table
    stop = g.largest_proper_divisor()
    seen: set[bytes] = set()
    out = []
    work = 0
    for i, a in enumerate(cyc_gens):
        for b in cyc_gens[i + 1:]:
            members = kernels.closure_members(mul, np.array([a, b], np.int64), stop)
            work += int(members.sum()) ** 2
            if work > limits.max_work:
                raise ResourceLimitError(
                    f"{g.spec}: perfect-subgroup seeding exceeded the work budget"
                )
            elems = np.flatnonzero(members).astype(np.int64)
            key = elems.tobytes()
            if key not in seen:
                seen.add(key)
                out.append((elems, [a, b]))
    return out


def enumerate_subgroups(g: FiniteGroup, limits: Limits = DEFAULT_LIMITS) -> SubgroupLattice:
    """Every subgroup of ``g``, with inclusion, maximal and Frattini data.

    Seeds with all cyclic subgroups (plus 2-generated seeds when the
    group is insoluble) and closes under prime-index extensions: every
    non-perfect subgroup K has a normal subgroup H of prime index, so K
    is a union of cosets H x^i for any x in K outside H.  Each extension
    is a few coset translations; no generic closure is needed.
    """
    n = g.order
    mul = g.mul_table
    inv = g.inv_table
    all_ids = np.arange(n, dtype=np.int64)
    primes = sorted({p for p in range(2, n + 1) if n % p == 0 and _is_prime(p)})
    power_map = {}
    for p in primes:
        vec = all_ids
        for _ in range(p - 1):
            vec = mul[vec, all_ids]
        power_map[p] = vec

    seeds = _cyclic_seeds(g)
    entries: dict[bytes, tuple[np.ndarray, list[int]]] = dict(seeds)
    if not derived_reaches_trivial(g):
        for elems, gens in _perfect_candidate_seeds(
            g, [gens[0] for elems, gens in seeds.values() if gens], limits
        ):
            entries.setdefault(elems.tobytes(), (elems, gens))

    queue = list(entries)
    work = 0
    while queue:
        key = queue.pop()
        elems, gens = entries[key]
        h = elems.size
        index = n // h
        if index == 1:
            continue
        in_h = np.zeros(n, dtype=np.bool_)
        in_h[elems] = True
        normalizes = np.ones(n, dtype=np.bool_)
        for gen in gens:
            conj = mul[mul[inv[all_ids], gen], all_ids]
            normalizes &= in_h[conj]
        work += (len(gens) + 1) * 3 * n
        for p in primes:
            if index % p:
                continue
            xs = np.flatnonzero(normalizes & ~in_h & in_h[power_map[p]])
            if not xs.size:
                continue
            # one representative per coset: Hx and Hx' extend to the same
            # subgroup when the cosets agree
            coset_reps = np.minimum.reduce(mul[np.ix_(elems, xs)], axis=0)
            _, first = np.unique(coset_reps, return_index=True)
            work += h * xs.size
            for x in xs[np.sort(first)]:
                x = int(x)
                new_elems = [elems]
                coset = elems
                for _ in range(p - 1):
                    coset = mul[coset, x]
                    new_elems.append(coset)
                work += p * h
                if work > limits.max_work:
                    raise ResourceLimitError(
                        f"subgroup enumeration of {g.spec} exceeded the work budget"
                    )
                combined = np.sort(np.concatenate(new_elems))
                new_key = combined.tobytes()
                if new_key not in entries:
                    entries[new_key] = (combined, gens + [x])
                    queue.append(new_key)
                    if len(entries) > limits.max_subgroups:
                        raise ResourceLimitError(
                            f"{g.spec} has more than {limits.max_subgroups} subgroups"
                        )

    masks = np.stack(
        [kernels.pack_indices(elems, n) for elems, _ in entries.values()]
    )
    rows = kernels.unpack_rows(masks, n)
    orders = rows.sum(axis=1, dtype=np.int64)
    subgroup_sets = [tuple(int(i) for i in np.flatnonzero(r)) for r in rows]
    order_key = sorted(range(len(subgroup_sets)), key=lambda i: (int(orders[i]), subgroup_sets[i]))
    masks = masks[order_key]
    orders = orders[order_key]
    subgroup_sets = [subgroup_sets[i] for i in order_key]

    leq = kernels.subset_matrix(masks, masks)
    count = len(subgroup_sets)
    strict = leq.copy()
    np.fill_diagonal(strict, False)
    # coatoms: the only strict superset is the whole group
    super_counts = strict.sum(axis=1)
    maximal_ids = [int(i) for i in np.flatnonzero(super_counts == 1) if i != count - 1]
    if count == 1:
        maximal_ids = []

    id_by_mask = {m.tobytes(): i for i, m in enumerate(masks)}
    if maximal_ids:
        frat_mask = masks[maximal_ids[0]].copy()
        for mid in maximal_ids[1:]:
            frat_mask &= masks[mid]
        frattini_id = id_by_mask[frat_mask.tobytes()]
    else:
        frattini_id = count - 1  # trivial group: Frat(G) = G

    if maximal_ids:
        contain = leq[:, maximal_ids]  # subgroup i contained in each maximal
        maxmask = kernels.pack_rows(contain)
    else:
        maxmask = np.zeros((count, 1), dtype=np.uint64)

    return SubgroupLattice(
        group=g,
        subgroups=subgroup_sets,
        masks=masks,
        orders=orders,
        leq=leq,
        maximal_ids=maximal_ids,
        frattini_id=frattini_id,
        id_by_mask=id_by_mask,
        maxmask=maxmask,
    )


def maximal_subgroups(lat: SubgroupLattice) -> list[int]:
    return list(lat.maximal_ids)


def frattini(lat: SubgroupLattice) -> int:
    return lat.frattini_id


# ---------------------------------------------------------------------------
# the maximal-intersection lattice
# ---------------------------------------------------------------------------


@dataclass
class MILattice:
    lattice: SubgroupLattice
    member_ids: list[int]  # ascending lattice ids; includes the whole group
    _pos: dict = field(repr=False)
    _meet_table: Optional[np.ndarray] = field(default=None, repr=False)
    _join_table: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return len(self.member_ids)

    @property
    def bottom_id(self) -> int:
        return self.member_ids[0]

    @property
    def top_id(self) -> int:
        return self.member_ids[-1]

    def contains(self, sid: int) -> bool:
        return sid in self._pos

    def meet(self, a: int, b: int) -> int:
        lat = self.lattice
        got = lat.id_by_mask[(lat.masks[a] & lat.masks[b]).tobytes()]
        assert got in self._pos
        return got

    def join(self, a: int, b: int) -> int:
        """Smallest member containing the subgroup generated by a and b.

        A maximal subgroup contains <a, b> exactly when it contains both a
        and b, so the join is the meet of the shared maximals (or the top).
        """
        lat = self.lattice
        shared = lat.maxmask[a] & lat.maxmask[b]
        if not shared.any():
            return self.top_id
        bits = np.flatnonzero(kernels.unpack_rows(shared, len(lat.maximal_ids))[0])
        mask = lat.masks[lat.maximal_ids[bits[0]]].copy()
        for b_ in bits[1:]:
            mask &= lat.masks[lat.maximal_ids[b_]]
        return lat.id_by_mask[mask.tobytes()]

    def meet_table(self) -> np.ndarray:
        if self._meet_table is None:
            ids = self.member_ids
            table = np.empty((self.count, self.count), dtype=np.int64)
            for i, a in enumerate(ids):
                for j in range(i, self.count):
                    m = self._pos[self.meet(a, ids[j])]
                    table[i, j] = table[j, i] = m
            self._meet_table = table
        return self._meet_table

    def join_table(self) -> np.ndarray:
        if self._join_table is None:
            ids = self.member_ids
            table = np.empty((self.count, self.count), dtype=np.int64)
            for i, a in enumerate(ids):
                for j in range(i, self.count):
                    m = self._pos[self.join(a, ids[j])]
                    table[i, j] = table[j, i] = m
            self._join_table = table
        return self._join_table

    def leq_matrix(self) -> np.ndarray:
        ids = np.array(self.member_ids)
        return self.lattice.leq[np.ix_(ids, ids)]


def _intersection_closure(lat: SubgroupLattice) -> dict[bytes, np.ndarray]:
    """All intersections of nonempty families of maximal subgroups."""
    maximal_masks = [lat.masks[m] for m in lat.maximal_ids]
    closed: dict[bytes, np.ndarray] = {}
    queue = []
    for m in maximal_masks:
        key = m.tobytes()
        if key not in closed:
            closed[key] = m
            queue.append(m)
    while queue:
        cur = queue.pop()
        for mm in maximal_masks:
            nxt = cur & mm
            key = nxt.tobytes()
            if key not in closed:
                closed[key] = nxt
                queue.append(nxt)
    return closed


def mi_lattice(lat: SubgroupLattice) -> MILattice:
    """The whole group plus every intersection of maximal subgroups."""
    member_masks = _intersection_closure(lat)
    top = lat.masks[lat.top_id]
    member_masks.setdefault(top.tobytes(), top)
    ids = sorted(lat.id_by_mask[key] for key in member_masks)
    return MILattice(lattice=lat, member_ids=ids, _pos={s: i for i, s in enumerate(ids)})


# ---------------------------------------------------------------------------
# smallest families of maximal subgroups meeting in the Frattini subgroup
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinFamilyResult:
    size: int
    uniform: Optional[bool]  # all inclusion-minimal families share one size


def min_trivial_intersection_family(
    lat: SubgroupLattice,
    check_uniform: bool = True,
    enum_budget: int = 2_000_000,
) -> MinFamilyResult:
    if lat.count == 1:
        return MinFamilyResult(0, True)
    target = lat.masks[lat.frattini_id].tobytes()
    maximal_masks = [lat.masks[m] for m in lat.maximal_ids]

    # breadth-first over distinct running intersections
    level: dict[bytes, np.ndarray] = {}
    for m in maximal_masks:
        level.setdefault(m.tobytes(), m)
    size = 1
    visited = dict(level)
    while target not in level:
        nxt: dict[bytes, np.ndarray] = {}
        for cur in level.values():
            for mm in maximal_masks:
                cand = cur & mm
                key = cand.tobytes()
                if key not in visited:
                    visited[key] = cand
                    nxt[key] = cand
        if not nxt:
            raise AssertionError("maximal subgroups always intersect in Frat(G)")
        level = nxt
        size += 1

    if not check_uniform:
        return MinFamilyResult(size, None)

    # Longest strictly-decreasing intersection chain ending at Frat(G).
    # Any irredundant family can be ordered into such a chain, so when the
    # longest chain already has the minimum length, every inclusion-minimal
    # family has that size.
    states = _intersection_closure(lat)
    depth: dict[bytes, int] = {target: 0}
    order_of = {key: int(kernels.popcount_rows(m)[0]) for key, m in states.items()}
    for key in sorted(states, key=lambda k: (order_of[k], k)):
        if key == target:
            continue
        cur = states[key]
        best = -1
        for mm in maximal_masks:
            cand = cur & mm
            ckey = cand.tobytes()
            if ckey != key and depth.get(ckey, -1) >= 0:
                best = max(best, depth[ckey] + 1)
        depth[key] = best
    longest = 1 + max(
        (depth[m.tobytes()] for m in maximal_masks if depth[m.tobytes()] >= 0),
        default=-1,
    )
    if longest == size:
        return MinFamilyResult(size, True)

    # Exhaustive fallback: walk id-ascending families whose running
    # intersection strictly decreases (every irredundant family does).
    sizes: set[int] = set()
    budget = [enum_budget]

    def walk(start: int, inter: np.ndarray, chosen: list[int]):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError("minimal-family enumeration budget exceeded")
        key = inter.tobytes()
        if key == target:
            if _irredundant(chosen, maximal_masks, inter):
                sizes.add(len(chosen))
            return
        for j in range(start, len(maximal_masks)):
            nxt = inter & maximal_masks[j]
            if nxt.tobytes() == key:
                continue
            chosen.append(j)
            walk(j + 1, nxt, chosen)
            chosen.pop()

    for j, mm in enumerate(maximal_masks):
        walk(j + 1, mm.copy(), [j])
    return MinFamilyResult(size, len(sizes) == 1)


def lattice_json(lat: SubgroupLattice) -> dict:
    """The export schema: subgroups with generators, strict inclusion pairs,
    maximal ids, Frattini id, and the maximal-intersection member ids."""
    mi = mi_lattice(lat)
    pairs = [
        [a, b]
        for a in range(lat.count)
        for b in range(lat.count)
        if a != b and bool(lat.leq[a, b])
    ]
    return {
        "order": lat.group.order,
        "subgroups": [
            {
                "id": sid,
                "order": lat.subgroup_order(sid),
                "generators": lat.generating_ids(sid),
            }
            for sid in range(lat.count)
        ],
        "leq": pairs,
        "maximal": list(lat.maximal_ids),
        "frattini": lat.frattini_id,
        "mi_members": list(mi.member_ids),
    }


def parse_lattice_json(data: dict) -> dict:
    """Normalize a parsed export back to a comparable in-memory value."""
    return {
        "order": int(data["order"]),
        "subgroups": [
            {
                "id": int(s["id"]),
                "order": int(s["order"]),
                "generators": [int(x) for x in s["generators"]],
            }
            for s in data["subgroups"]
        ],
        "leq": sorted([int(a), int(b)] for a, b in data["leq"]),
        "maximal": sorted(int(x) for x in data["maximal"]),
        "frattini": int(data["frattini"]),
        "mi_members": sorted(int(x) for x in data["mi_members"]),
    }


def _irredundant(chosen: list[int], masks: list[np.ndarray], inter: np.ndarray) -> bool:
    for skip in range(len(chosen)):
        rest = None
        for j, idx in enumerate(chosen):
            if j == skip:
                continue
            rest = masks[idx].copy() if rest is None else rest & masks[idx]
        # rest is None means the empty family, whose intersection is G != inter
        if rest is not None and (rest == inter).all():
            return False
    return True
