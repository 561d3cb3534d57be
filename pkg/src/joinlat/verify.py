"""The verification suite: every desk-scale claim the library is built to
check, as named pass/fail records.

Checks 3-7, 11 and 14 quantify over the whole corpus and share a single
per-group pass (one lattice build per group); their records carry the
shared sweep elapsed time.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import classify, isomorph, joingraph, kernels, moebius
from .config import Limits, ResourceLimitError
from .corpus import DEFAULT_CORPUS_MAX_ORDER, default_corpus
from .groups import FiniteGroup, _perm_from_map, _vector_points, build, subgroup_group
from .sublattice import (
    SubgroupLattice,
    enumerate_subgroups,
    mi_lattice,
    min_trivial_intersection_family,
)

SWEEP_LIMITS = Limits(max_subgroups=4000, max_work=600_000_000)


@dataclass
class CheckRecord:
    check_id: str
    claim: str
    status: str  # pass | fail | skipped
    elapsed: float
    detail: str = ""


@dataclass
class VerificationReport:
    suite: str
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        return 1 if self.counts["fail"] else 0

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "checks": [
                {
                    "id": c.check_id,
                    "claim": c.claim,
                    "status": c.status,
                    "elapsed": round(c.elapsed, 3),
                    "detail": c.detail,
                }
                for c in self.checks
            ],
            "summary": self.counts,
        }


# ---------------------------------------------------------------------------
# shared corpus sweep
# ---------------------------------------------------------------------------

SWEEP_CLAIMS = {
    "reconstruction": "the maximal-intersection lattice is rebuilt from the graph alone",
    "hull-inclusion": "neighborhood inclusion matches maximal-hull inclusion",
    "mu-agreement": "recursive mu equals the chief-factor product formula",
    "mu-vanishing": "mu vanishes outside the maximal-intersection members",
    "normal-mu": "normal subgroups above Frat are members with nonzero mu",
    "supersoluble-m": "groups sharing an M-lattice with a nilpotent group are supersoluble",
    "uniform-families": "minimal trivial-intersection families share one size",
}


@dataclass
class SweepOutcome:
    processed: int = 0
    skipped: list[tuple[str, str]] = field(default_factory=list)
    complete: bool = True
    elapsed: float = 0.0
    violations: dict[str, list[str]] = field(default_factory=dict)
    instances: dict[str, int] = field(default_factory=dict)

    def note(self, check_id: str, spec: str):
        self.violations.setdefault(check_id, []).append(spec)

    def count(self, check_id: str, k: int = 1):
        self.instances[check_id] = self.instances.get(check_id, 0) + k


def corpus_sweep(
    specs: list[str],
    limits: Limits = SWEEP_LIMITS,
    deadline: Optional[float] = None,
) -> SweepOutcome:
    out = SweepOutcome()
    start = time.monotonic()
    for spec in specs:
        if deadline is not None and time.monotonic() > deadline:
            out.complete = False
            break
        try:
            g = build(spec)
            lat = enumerate_subgroups(g, limits)
        except ResourceLimitError as exc:
            out.skipped.append((spec, str(exc)))
            continue
        _sweep_one(g, lat, spec, out)
        out.processed += 1
    out.elapsed = time.monotonic() - start
    return out


def _sweep_one(g: FiniteGroup, lat: SubgroupLattice, spec: str, out: SweepOutcome):
    graph = joingraph.build_delta(lat)
    vcount = lat.top_id

    # neighborhood inclusion vs hull inclusion, all ordered vertex pairs
    if vcount:
        nb_incl = kernels.subset_matrix(graph.adj, graph.adj)
        hulls = joingraph.hull_ids(lat)[:vcount]
        hull_incl = lat.leq[np.ix_(hulls, hulls)]
        if not (nb_incl == hull_incl).all():
            out.note("hull-inclusion", spec)
        out.count("hull-inclusion", vcount * vcount)

    if not joingraph.reconstruction_matches(lat, graph):
        out.note("reconstruction", spec)
    out.count("reconstruction")

    table = moebius.moebius_table(lat)
    if moebius.hall_vanishing_check(lat, table):
        out.note("mu-vanishing", spec)
    out.count("mu-vanishing", lat.count)

    soluble = classify.is_soluble(g)
    nilpotent = classify.is_nilpotent(g) if soluble else False
    frattini_free = lat.frattini_id == lat.bottom_id

    records = moebius.chief_series(g, lat) if soluble else None
    if soluble:
        if moebius.mu_from_records(records, g.order) != table.bottom_value:
            out.note("mu-agreement", spec)
        out.count("mu-agreement")
        if nilpotent and frattini_free and g.order > 1:
            parts = [
                classify.pgroup_signature(subgroup_group(g, lat.subgroups[fid]))
                for fid in classify.coprime_factorization(g, lat)
            ]
            closed = moebius.elementary_abelian_mu([(p, n) for p, n, _ in parts])
            if closed != table.bottom_value:
                out.note("mu-agreement", spec + " (closed form)")

    in_m = False
    if frattini_free:
        in_m, _ = classify.m_nilpotent_partner(g, lat)

    if nilpotent or (frattini_free and in_m):
        if moebius.normal_mi_check(lat, table):
            out.note("normal-mu", spec)
        out.count("normal-mu")

    if frattini_free and in_m:
        supersoluble = records is not None and all(r.dimension == 1 for r in records)
        if not supersoluble:
            out.note("supersoluble-m", spec)
        out.count("supersoluble-m")

    if nilpotent and frattini_free and lat.count > 1:
        fam = min_trivial_intersection_family(lat)
        if fam.uniform is not True:
            out.note("uniform-families", spec)
        out.count("uniform-families")


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------


def _build_pair(spec: str) -> tuple[FiniteGroup, SubgroupLattice]:
    g = build(spec)
    return g, enumerate_subgroups(g)


def check_dihedral_pairing() -> tuple[bool, str]:
    details = []
    for p in (3, 5, 7):
        t0 = time.monotonic()
        g1, lat1 = _build_pair(f"ElemAbelian({p},2)")
        g2, lat2 = _build_pair(f"Dihedral({2 * p})")
        graphs_iso = isomorph.graph_iso(
            joingraph.build_delta(lat1), joingraph.build_delta(lat2)
        ).isomorphic
        lattices_iso = isomorph.poset_iso(lat1.leq, lat2.leq).isomorphic
        dt = time.monotonic() - t0
        details.append(f"p={p}: graphs={graphs_iso} lattices={lattices_iso} {dt:.2f}s")
        if not (graphs_iso and lattices_iso) or dt > 1.0:
            return False, "; ".join(details)
    return True, "; ".join(details)


def check_order_18_pair() -> tuple[bool, str]:
    g1, lat1 = _build_pair("DirectProduct(ElemAbelian(3,2),Cyclic(2))")
    g2, lat2 = _build_pair("DirectProduct(Sym(3),Cyclic(3))")
    mi1, mi2 = mi_lattice(lat1), mi_lattice(lat2)
    m_iso = isomorph.poset_iso(mi1, mi2).isomorphic
    d1, d2 = joingraph.build_delta(lat1), joingraph.build_delta(lat2)
    d_iso = isomorph.graph_iso(d1, d2).isomorphic
    diff = d2.vertex_count - d1.vertex_count

    nonmembers = [sid for sid in range(lat2.top_id) if not mi2.contains(sid)]
    shape_ok = len(nonmembers) == 2
    if shape_ok:
        # both leftovers are order-3 diagonals meeting each direct factor
        # trivially; the factors act on disjoint point blocks
        sym_part = lat2.id_of(
            [i for i, perm in enumerate(g2.elements) if perm[3:] == (3, 4, 5)]
        )
        cyc_part = lat2.id_of(
            [i for i, perm in enumerate(g2.elements) if perm[:3] == (0, 1, 2)]
        )
        for sid in nonmembers:
            shape_ok &= lat2.subgroup_order(sid) == 3
            shape_ok &= lat2.intersect(sid, sym_part) == lat2.bottom_id
            shape_ok &= lat2.intersect(sid, cyc_part) == lat2.bottom_id
    ok = m_iso and not d_iso and diff == 2 and shape_ok
    return ok, (
        f"M iso={m_iso}, delta iso={d_iso}, vertex diff={diff}, "
        f"non-members={len(nonmembers)} (order-3 diagonals={shape_ok})"
    )


_PRODUCT_PAIRS = [
    ("Cyclic(2)", "Cyclic(3)"),
    ("Cyclic(4)", "Cyclic(9)"),
    ("Sym(3)", "Cyclic(5)"),
    ("Dihedral(10)", "Cyclic(3)"),
    ("Alt(4)", "Cyclic(5)"),
    ("ElemAbelian(2,2)", "Cyclic(9)"),
    ("ElemAbelian(3,2)", "Cyclic(2)"),
    ("Sym(3)", "ElemAbelian(5,2)"),
    ("PGroup(7,1,3)", "Cyclic(2)"),
    ("Dihedral(14)", "Cyclic(9)"),
    ("Sym(4)", "Cyclic(5)"),
    ("Cyclic(8)", "PGroup(7,1,3)"),
]


def check_product_m_factorization() -> tuple[bool, str]:
    bad = []
    for s1, s2 in _PRODUCT_PAIRS:
        _, lat1 = _build_pair(s1)
        _, lat2 = _build_pair(s2)
        _, lat12 = _build_pair(f"DirectProduct({s1},{s2})")
        want = isomorph.product_poset(
            mi_lattice(lat1).leq_matrix(), mi_lattice(lat2).leq_matrix()
        )
        if not isomorph.poset_iso(mi_lattice(lat12), want).isomorphic:
            bad.append(f"{s1} x {s2}")
    return not bad, f"{len(_PRODUCT_PAIRS)} coprime pairs" + (
        f"; failing: {bad}" if bad else ""
    )


def check_classification_positives() -> tuple[bool, str]:
    details = []
    ok = True

    g, lat = _build_pair("DirectProduct(Sym(3),Cyclic(3))")
    got, partner = classify.m_nilpotent_partner(g, lat)
    good = got and partner == "DirectProduct(ElemAbelian(3,2),Cyclic(2))"
    if good:
        _, plat = _build_pair(partner)
        good = isomorph.poset_iso(mi_lattice(lat), mi_lattice(plat)).isomorphic
    ok &= good
    details.append(f"Sym(3)xC3 -> {partner}: {good}")

    g, lat = _build_pair("DirectProduct(PGroup(7,1,3),Sym(3))")
    got, partner = classify.m_nilpotent_partner(g, lat)
    good = got and partner == "DirectProduct(ElemAbelian(7,2),ElemAbelian(3,2))"
    if good:
        _, plat = _build_pair(partner)
        good = isomorph.poset_iso(mi_lattice(lat), mi_lattice(plat)).isomorphic
    ok &= good
    details.append(f"(C7:C3)xSym(3) -> {partner}: {good}")

    g, lat = _build_pair("DirectProduct(Dihedral(10),Cyclic(3))")
    got, partner = classify.delta_nilpotent_partner(g, lat)
    good = got and partner == "DirectProduct(ElemAbelian(5,2),Cyclic(3))"
    if good:
        _, plat = _build_pair(partner)
        good = isomorph.graph_iso(
            joingraph.build_delta(lat), joingraph.build_delta(plat)
        ).isomorphic
    ok &= good
    details.append(f"D10xC3 -> {partner}: {good}")
    return ok, "; ".join(details)


def check_classification_negative() -> tuple[bool, str]:
    g, lat = _build_pair("DirectProduct(Sym(3),Cyclic(2))")
    got_d = classify.search_nilpotent_partner(g, lat, 200, mode="delta")
    got_m = classify.search_nilpotent_partner(g, lat, 200, mode="m")
    ok = got_d is None and got_m is None
    return ok, f"delta search: {got_d}, m search: {got_m} (max order 200)"


def check_small_intersection_families() -> tuple[bool, str]:
    details = []
    ok = True
    for spec in ("Alt(5)", "Sym(5)", "Alt(6)"):
        g = build(spec)
        lat = enumerate_subgroups(g)
        fam = min_trivial_intersection_family(lat, check_uniform=False)
        details.append(f"{spec}: t={fam.size}")
        ok &= fam.size <= 5
    return ok, "; ".join(details)


def check_wreath_648() -> tuple[bool, str]:
    g = build("PaperExample648")
    lat = enumerate_subgroups(g)
    stab = [i for i, perm in enumerate(g.elements) if perm[0] == 0]
    H = lat.id_of(stab)

    pts = _vector_points(3, 3)

    def translation(v):
        return _perm_from_map(
            pts, lambda w: tuple((w[i] + v[i]) % 3 for i in range(3))
        )

    V = lat.id_of([g.index[translation(v)] for v in pts])
    tv = g.index[translation((1, 2, 0))]  # the vector (1, -1, 0) over F_3
    Hv = lat.id_of([g.conjugate(x, tv) for x in stab])
    K = lat.intersect(H, Hv)
    VK = lat.join(V, K)

    centralizer = lat.id_of([x for x in stab if g.conjugate(tv, x) == tv])
    k_order = lat.subgroup_order(K)
    k_mi = joingraph.hull(lat, K) == K
    v_mi = joingraph.hull(lat, V) == V
    vk_mi = joingraph.hull(lat, VK) == VK
    stab_ok = _is_c2_x_a4(g, lat, H)

    ok = (
        lat.subgroup_order(H) == 24
        and stab_ok
        and K == centralizer
        and k_order == 2
        and k_mi
        and v_mi
        and not vk_mi
    )
    return ok, (
        f"|H|=24 and H = C2 x Alt(4): {stab_ok}; K = H^H^v = C_H(v) of order "
        f"{k_order}, member={k_mi}; V member={v_mi}; VK member={vk_mi} (expected False)"
    )


def _is_c2_x_a4(g: FiniteGroup, lat: SubgroupLattice, hid: int) -> bool:
    """Decompose H as (center of order 2) x (order-12 complement iso Alt(4))."""
    h_elems = lat.subgroups[hid]
    center = [
        x
        for x in h_elems
        if all(g.multiply(x, y) == g.multiply(y, x) for y in h_elems)
    ]
    if len(center) != 2:
        return False
    zid = lat.id_of(center)
    for kid in np.flatnonzero(lat.orders == 12):
        kid = int(kid)
        if not lat.leq[kid, hid]:
            continue
        if lat.intersect(kid, zid) != lat.bottom_id:
            continue
        part = lat.subgroups[kid]
        orders = {g.element_order(x) for x in part}
        nonabelian = any(
            g.multiply(a, b) != g.multiply(b, a) for a in part for b in part
        )
        if nonabelian and orders == {1, 2, 3}:
            return True  # order 12, nonabelian, exponent 6-free: Alt(4)
    return False


# ---------------------------------------------------------------------------
# the suite
# ---------------------------------------------------------------------------


def run_suite(
    max_order: int = DEFAULT_CORPUS_MAX_ORDER,
    budget: Optional[float] = None,
    include_648: bool = False,
    suite: str = "paper",
) -> VerificationReport:
    report = VerificationReport(suite=suite)
    kernels.warm_up()
    deadline = time.monotonic() + budget if budget else None

    def overrun() -> bool:
        return deadline is not None and time.monotonic() > deadline

    def run(
        check_id: str,
        claim: str,
        fn: Callable[[], tuple[bool, str]],
        min_order: int = 1,
    ):
        # named spot checks are gated on their smallest example group so an
        # order bound of 1 leaves the whole report skipped
        if max_order < min_order:
            report.checks.append(
                CheckRecord(
                    check_id, claim, "skipped", 0.0,
                    f"order bound {max_order} excludes this check's groups",
                )
            )
            return
        if overrun():
            report.checks.append(
                CheckRecord(check_id, claim, "skipped", 0.0, "time budget exhausted")
            )
            return
        t0 = time.monotonic()
        try:
            ok, detail = fn()
            status = "pass" if ok else "fail"
        except ResourceLimitError as exc:
            status, detail = "skipped", f"resource limit: {exc}"
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        report.checks.append(
            CheckRecord(check_id, claim, status, time.monotonic() - t0, detail)
        )

    run(
        "dihedral-pairing",
        "squares of odd primes and dihedral groups share join graphs and lattices",
        check_dihedral_pairing,
        min_order=9,
    )
    run(
        "order-18-m-pair",
        "the order-18 pair shares M but not the graph; exactly two non-members",
        check_order_18_pair,
        min_order=18,
    )

    specs = default_corpus(max_order)
    sweep = corpus_sweep(specs, deadline=deadline)
    for check_id, claim in SWEEP_CLAIMS.items():
        viol = sweep.violations.get(check_id, [])
        if viol:
            status, detail = "fail", f"violations: {viol[:5]}"
        elif not sweep.complete:
            status = "skipped"
            detail = f"time budget exhausted after {sweep.processed}/{len(specs)} groups"
        elif sweep.processed == 0:
            status, detail = "skipped", "empty corpus"
        else:
            status = "pass"
            detail = (
                f"{sweep.processed} groups, {sweep.instances.get(check_id, 0)} instances"
            )
            if sweep.skipped:
                detail += f"; {len(sweep.skipped)} groups skipped on resource limits"
        report.checks.append(
            CheckRecord(check_id, claim, status, sweep.elapsed, detail)
        )

    run(
        "product-m-factorization",
        "M of a coprime product is the product of the M lattices",
        check_product_m_factorization,
        min_order=6,
    )
    run(
        "classification-positives",
        "known member groups get verified nilpotent partners",
        check_classification_positives,
        min_order=18,
    )
    run(
        "classification-negative",
        "Sym(3) x C2 has no nilpotent partner up to order 200",
        check_classification_negative,
        min_order=12,
    )
    run(
        "almost-simple-families",
        "the alternating and symmetric spot checks cut to 1 with at most five maximals",
        check_small_intersection_families,
        min_order=60,
    )
    if include_648:
        run(
            "wreath-648",
            "in the order-648 affine group, V and H^H^v are members but their product is not",
            check_wreath_648,
        )
    else:
        report.checks.append(
            CheckRecord(
                "wreath-648",
                "in the order-648 affine group, V and H^H^v are members but their product is not",
                "skipped",
                0.0,
                "opt-in: pass --include-648",
            )
        )
    return report
