"""Isomorphism of join graphs and finite posets, with replayable witnesses.

The engine canonically labels a relational structure (one adjacency
relation for graphs, down/up relations for posets) by iterated color
refinement plus individualization over the smallest color class.
Discovered automorphisms prune sibling branches (vertices in one orbit
under prefix-fixing automorphisms lead to identical leaves).  Equal
canonical byte strings mean isomorphic; the composed labelings give the
witness, which is always replayed before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT_LIMITS, ResourceLimitError


@dataclass
class RelStruct:
    """n vertices with one or more relations given as int bitmask rows."""

    n: int
    relations: list[list[int]]
    colors: list[int]


@dataclass
class IsoResult:
    isomorphic: bool
    witness: Optional[list[int]] = None  # witness[i] = image vertex


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------


def _rows_to_masks(rows: np.ndarray) -> list[int]:
    out = []
    for row in rows:
        mask = 0
        for i in np.flatnonzero(row):
            mask |= 1 << int(i)
        out.append(mask)
    return out


def struct_from_graph(adj_bool: np.ndarray) -> RelStruct:
    n = adj_bool.shape[0]
    return RelStruct(n=n, relations=[_rows_to_masks(adj_bool)], colors=[0] * n)


def struct_from_poset(leq: np.ndarray) -> RelStruct:
    """Initial colors: (height, depth, down-set size, up-set size)."""
    leq = np.asarray(leq, dtype=np.bool_)
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=np.bool_)
    down = strict.T.copy()  # down[v] = everything strictly below v
    up = strict.copy()
    heights = _longest_path_lengths(down)
    depths = _longest_path_lengths(up)
    keys = [
        (int(heights[v]), int(depths[v]), int(down[v].sum()), int(up[v].sum()))
        for v in range(n)
    ]
    palette = {k: i for i, k in enumerate(sorted(set(keys)))}
    return RelStruct(
        n=n,
        relations=[_rows_to_masks(down), _rows_to_masks(up)],
        colors=[palette[k] for k in keys],
    )


def _longest_path_lengths(below: np.ndarray) -> np.ndarray:
    n = below.shape[0]
    out = np.full(n, -1, dtype=np.int64)
    order = np.argsort(below.sum(axis=1), kind="stable")
    for v in order:
        preds = np.flatnonzero(below[v])
        out[v] = 0 if preds.size == 0 else int(out[preds].max()) + 1
    return out


def product_poset(leq1: np.ndarray, leq2: np.ndarray) -> np.ndarray:
    return np.kron(np.asarray(leq1, np.bool_), np.asarray(leq2, np.bool_))


def chain_poset(k: int) -> np.ndarray:
    leq = np.zeros((k, k), dtype=np.bool_)
    for i in range(k):
        leq[i, i:] = True
    return leq


# ---------------------------------------------------------------------------
# color refinement
# ---------------------------------------------------------------------------


def _refine(struct: RelStruct, colors: list[int]) -> list[int]:
    n = struct.n
    while True:
        class_masks: dict[int, int] = {}
        for v, c in enumerate(colors):
            class_masks[c] = class_masks.get(c, 0) | (1 << v)
        palette = sorted(class_masks)
        sigs = []
        for v in range(n):
            counts = tuple(
                (rel[v] & class_masks[c]).bit_count()
                for rel in struct.relations
                for c in palette
            )
            sigs.append((colors[v], counts))
        ranking = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new_colors = [ranking[s] for s in sigs]
        if len(ranking) == len(class_masks):
            return new_colors
        colors = new_colors


def _color_histogram(struct: RelStruct) -> tuple:
    stable = _refine(struct, list(struct.colors))
    hist: dict[int, int] = {}
    for c in stable:
        hist[c] = hist.get(c, 0) + 1
    return tuple(sorted(hist.items()))


# ---------------------------------------------------------------------------
# canonical labeling
# ---------------------------------------------------------------------------


def _serialize(struct: RelStruct, position: list[int]) -> bytes:
    n = struct.n
    order = [0] * n  # order[p] = vertex at canonical position p
    for v, p in enumerate(position):
        order[p] = v
    blob = bytearray()
    blob += n.to_bytes(4, "big")
    blob += len(struct.relations).to_bytes(2, "big")
    for v in order:
        blob += struct.colors[v].to_bytes(4, "big")
    row_bytes = (n + 7) // 8 or 1
    for rel in struct.relations:
        for p in range(n):
            row = rel[order[p]]
            acc = 0
            for q in range(n):
                acc = (acc << 1) | ((row >> order[q]) & 1)
            blob += acc.to_bytes(row_bytes, "big")
    return bytes(blob)


class _Canonizer:
    def __init__(self, struct: RelStruct, budget: int):
        self.struct = struct
        self.budget = budget
        self.nodes = 0
        self.best: Optional[bytes] = None
        self.best_position: Optional[list[int]] = None
        self.autos: list[list[int]] = []

    def run(self) -> tuple[bytes, list[int]]:
        if self.struct.n == 0:
            return _serialize(self.struct, []), []
        self._search(_refine(self.struct, list(self.struct.colors)), [])
        assert self.best is not None and self.best_position is not None
        return self.best, self.best_position

    def _search(self, colors: list[int], prefix: list[int]):
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError("isomorphism search budget exceeded")
        n = self.struct.n
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                if target is None or len(cells[c]) < len(cells[target]):
                    target = c
        if target is None:
            position = [0] * n
            for rank, v in enumerate(sorted(range(n), key=lambda u: colors[u])):
                position[v] = rank
            blob = _serialize(self.struct, position)
            if self.best is None or blob < self.best:
                self.best = blob
                self.best_position = position
            elif blob == self.best:
                # two labelings with equal serializations compose to an
                # automorphism; remember it for orbit pruning
                assert self.best_position is not None
                inv_best = [0] * n
                for v, p in enumerate(self.best_position):
                    inv_best[p] = v
                self.autos.append([inv_best[position[v]] for v in range(n)])
            return

        cell = cells[target]
        fresh = max(colors) + 1
        done: list[int] = []
        for v in cell:
            if self._in_explored_orbit(v, done, prefix):
                continue
            done.append(v)
            child = list(colors)
            child[v] = fresh
            self._search(_refine(self.struct, child), prefix + [v])

    def _in_explored_orbit(self, v: int, done: list[int], prefix: list[int]) -> bool:
        if not done or not self.autos:
            return False
        gens = [a for a in self.autos if all(a[p] == p for p in prefix)]
        if not gens:
            return False
        orbit = {v}
        frontier = [v]
        while frontier:
            x = frontier.pop()
            for a in gens:
                for y in (a[x], a.index(x)):
                    if y not in orbit:
                        orbit.add(y)
                        frontier.append(y)
        return any(d in orbit for d in done)


def canonical_bytes(struct: RelStruct, budget: Optional[int] = None) -> bytes:
    blob, _ = _Canonizer(struct, budget or DEFAULT_LIMITS.iso_budget).run()
    return blob


def _canonical_with_labeling(struct: RelStruct, budget: Optional[int]) -> tuple[bytes, list[int]]:
    return _Canonizer(struct, budget or DEFAULT_LIMITS.iso_budget).run()


# ---------------------------------------------------------------------------
# public checks
# ---------------------------------------------------------------------------


def _witness_from_labelings(pos_a: list[int], pos_b: list[int]) -> list[int]:
    inv_b = [0] * len(pos_b)
    for v, p in enumerate(pos_b):
        inv_b[p] = v
    return [inv_b[p] for p in pos_a]


def struct_iso(a: RelStruct, b: RelStruct, budget: Optional[int] = None) -> IsoResult:
    if a.n != b.n or len(a.relations) != len(b.relations):
        return IsoResult(False)
    if sorted(a.colors) != sorted(b.colors):
        return IsoResult(False)
    if _color_histogram(a) != _color_histogram(b):
        return IsoResult(False)
    blob_a, pos_a = _canonical_with_labeling(a, budget)
    blob_b, pos_b = _canonical_with_labeling(b, budget)
    if blob_a != blob_b:
        return IsoResult(False)
    witness = _witness_from_labelings(pos_a, pos_b)
    assert witness_ok(a, b, witness), "canonical labelings must replay"
    return IsoResult(True, witness)


def witness_ok(a: RelStruct, b: RelStruct, witness: Sequence[int]) -> bool:
    """Replay: the witness must be a bijection preserving every relation."""
    if sorted(witness) != list(range(a.n)):
        return False
    for v in range(a.n):
        if a.colors[v] != b.colors[witness[v]]:
            return False
    for rel_a, rel_b in zip(a.relations, b.relations):
        for v in range(a.n):
            image = 0
            row = rel_a[v]
            while row:
                low = row & -row
                image |= 1 << witness[low.bit_length() - 1]
                row ^= low
            if image != rel_b[witness[v]]:
                return False
    return True


def graph_iso(a, b, budget: Optional[int] = None) -> IsoResult:
    """Isomorphism of two join graphs (or plain boolean adjacency matrices)."""
    return struct_iso(_as_graph_struct(a), _as_graph_struct(b), budget)


def poset_iso(a, b, budget: Optional[int] = None) -> IsoResult:
    """Isomorphism of two finite posets given by reflexive leq matrices."""
    return struct_iso(struct_from_poset(_as_leq(a)), struct_from_poset(_as_leq(b)), budget)


def canonical_form(a, budget: Optional[int] = None) -> bytes:
    """Canonical byte string: equal strings exactly when graphs are isomorphic."""
    return canonical_bytes(_as_graph_struct(a), budget)


def _as_graph_struct(a) -> RelStruct:
    if isinstance(a, RelStruct):
        return a
    if hasattr(a, "adjacency_bool"):
        return struct_from_graph(a.adjacency_bool())
    return struct_from_graph(np.asarray(a, dtype=np.bool_))


def _as_leq(a) -> np.ndarray:
    if hasattr(a, "leq_matrix"):
        return a.leq_matrix()
    if hasattr(a, "leq"):
        return np.asarray(a.leq, dtype=np.bool_)
    return np.asarray(a, dtype=np.bool_)
