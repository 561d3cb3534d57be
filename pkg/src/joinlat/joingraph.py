"""The graph on proper subgroups with edges at generating pairs, and the
reconstruction of the maximal-intersection lattice from that graph alone.

Vertices are all proper subgroups of G, including the trivial one; G is
not a vertex.  Two vertices are adjacent exactly when together they
generate G, equivalently when no maximal subgroup contains both.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .sublattice import SubgroupLattice


@dataclass
class JoinGraph:
    lattice: SubgroupLattice
    vertex_ids: list[int]
    adj: np.ndarray = field(repr=False)  # packed rows over vertex positions

    @property
    def vertex_count(self) -> int:
        return len(self.vertex_ids)

    @property
    def edge_count(self) -> int:
        return int(kernels.popcount_rows(self.adj).sum()) // 2

    def adjacency_bool(self) -> np.ndarray:
        return kernels.unpack_rows(self.adj, self.vertex_count)

    def edges(self) -> list[tuple[int, int]]:
        rows = self.adjacency_bool()
        out = []
        for i in range(self.vertex_count):
            for j in np.flatnonzero(rows[i]):
                if i < j:
                    out.append((self.vertex_ids[i], self.vertex_ids[int(j)]))
        return out


def build_delta(lat: SubgroupLattice, method: str = "hull") -> JoinGraph:
    """Build the generating-pair graph on the proper subgroups.

    ``hull`` (default) uses the fact that <H, K> < G exactly when some
    maximal subgroup contains both H and K.  ``closure`` computes the
    generated subgroup of every pair directly; it is the independent
    slow route the fast one is tested against.
    """
    vertex_ids = list(range(lat.top_id))
    if not vertex_ids:
        return JoinGraph(
            lattice=lat, vertex_ids=[], adj=np.zeros((0, 1), dtype=np.uint64)
        )
    if method == "hull":
        mm = lat.maxmask[:lat.top_id]
        adj_bool = kernels.disjoint_matrix(mm, mm)
    elif method == "closure":
        n = len(vertex_ids)
        adj_bool = np.zeros((n, n), dtype=np.bool_)
        for i in range(n):
            for j in range(i + 1, n):
                adj_bool[i, j] = adj_bool[j, i] = lat.join(i, j) == lat.top_id
    else:
        raise ValueError(f"unknown method {method!r}")
    np.fill_diagonal(adj_bool, False)
    return JoinGraph(lattice=lat, vertex_ids=vertex_ids, adj=kernels.pack_rows(adj_bool))


def neighborhood(graph: JoinGraph, v: int) -> set[int]:
    pos = graph.vertex_ids.index(v)
    row = kernels.unpack_rows(graph.adj[pos], graph.vertex_count)[0]
    return {graph.vertex_ids[int(i)] for i in np.flatnonzero(row)}


def hull(lat: SubgroupLattice, x: int) -> int:
    """Intersection of the maximal subgroups containing x (G if none do)."""
    containing = [m for m in lat.maximal_ids if lat.leq[x, m]]
    if not containing:
        return lat.top_id
    mask = lat.masks[containing[0]].copy()
    for mid in containing[1:]:
        mask &= lat.masks[mid]
    got = lat.id_by_mask.get(mask.tobytes())
    assert got is not None
    return got


def hull_ids(lat: SubgroupLattice) -> np.ndarray:
    """hull() of every subgroup id at once.

    Subgroups sharing their set of enclosing maximals share the hull,
    which is the largest subgroup of that class.
    """
    out = np.empty(lat.count, dtype=np.int64)
    classes: dict[bytes, list[int]] = {}
    for sid in range(lat.count):
        classes.setdefault(lat.maxmask[sid].tobytes(), []).append(sid)
    for ids in classes.values():
        hull_id = max(ids, key=lambda s: int(lat.orders[s]))
        out[ids] = hull_id
    # ids whose maxmask is empty sit above every maximal: only the group itself
    out[lat.top_id] = lat.top_id
    return out


def equivalence_classes(graph: JoinGraph) -> list[list[int]]:
    """Vertices grouped by identical neighborhoods, ordered by first vertex."""
    by_row: dict[bytes, list[int]] = {}
    for pos, vid in enumerate(graph.vertex_ids):
        by_row.setdefault(graph.adj[pos].tobytes(), []).append(vid)
    return sorted(by_row.values(), key=lambda c: c[0])


@dataclass
class ReconstructedLattice:
    """M(G) rebuilt from the graph: neighborhood classes plus an added top."""

    classes: list[list[int]]
    leq: np.ndarray  # (c+1) x (c+1); index len(classes) is the adjoined top

    @property
    def count(self) -> int:
        return len(self.classes) + 1

    @property
    def top(self) -> int:
        return len(self.classes)


def reconstruct_mi(graph: JoinGraph) -> ReconstructedLattice:
    """Order the neighborhood classes by neighborhood inclusion and adjoin a top.

    Uses graph data only; poset-isomorphic to the maximal-intersection
    lattice of the underlying group.
    """
    classes = equivalence_classes(graph)
    pos_of = {vid: pos for pos, vid in enumerate(graph.vertex_ids)}
    reps = np.array([pos_of[c[0]] for c in classes])
    rows = graph.adj[reps]
    k = len(classes)
    leq = np.zeros((k + 1, k + 1), dtype=np.bool_)
    leq[:k, :k] = kernels.subset_matrix(rows, rows)
    leq[:, k] = True  # adjoined top element for the whole group
    return ReconstructedLattice(classes=classes, leq=leq)


def reconstruction_matches(lat: SubgroupLattice, graph: JoinGraph | None = None) -> bool:
    """Replay the canonical witness between the rebuilt poset and M(G).

    The map sends each neighborhood class to the hull of any member and
    the adjoined top to G; this checks it is an order bijection.
    """
    from .sublattice import mi_lattice

    if graph is None:
        graph = build_delta(lat)
    recon = reconstruct_mi(graph)
    hulls = hull_ids(lat)
    images = []
    for cls in recon.classes:
        targets = {int(hulls[v]) for v in cls}
        if len(targets) != 1:
            return False
        images.append(targets.pop())
    if len(set(images)) != len(images):
        return False
    mi = mi_lattice(lat)
    if set(images) | {lat.top_id} != set(mi.member_ids):
        return False
    if lat.top_id in images:
        return False
    k = len(images)
    want = lat.leq[np.ix_(images, images)]
    if not (recon.leq[:k, :k] == want).all():
        return False
    return True


# ---------------------------------------------------------------------------
# exports
# ---------------------------------------------------------------------------


def to_dot(graph: JoinGraph) -> str:
    lat = graph.lattice
    lines = ["graph delta {"]
    for vid in graph.vertex_ids:
        lines.append(f'  v{vid} [label="{vid}:{lat.subgroup_order(vid)}"];')
    for a, b in graph.edges():
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json_dict(graph: JoinGraph) -> dict:
    lat = graph.lattice
    return {
        "order": lat.group.order,
        "subgroups": [
            {
                "id": vid,
                "order": lat.subgroup_order(vid),
                "generators": lat.generating_ids(vid),
            }
            for vid in graph.vertex_ids
        ],
        "edges": [[a, b] for a, b in graph.edges()],
    }
