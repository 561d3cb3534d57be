"""Acceptance suite: one test per exit criterion, each printing a
PASS/FAIL line (run with -s to stream them).  The corpus-wide criteria
share one sweep over every group of order <= 200; its wall time is
criterion 5's budget.

Criterion 13 builds the order-648 group and is opt-in: set
JOINLAT_INCLUDE_648=1.
"""

import os
import time

import pytest

from joinlat import verify as vf
from joinlat.corpus import default_corpus


def record(num: int, ok: bool, detail: str = ""):
    print(f"{'PASS' if ok else 'FAIL'} criterion-{num:02d} {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def sweep():
    return vf.corpus_sweep(default_corpus(200))


def test_criterion_01_dihedral_pairing():
    ok, detail = vf.check_dihedral_pairing()  # exact iso, under 1 s per pair
    record(1, ok, detail)


def test_criterion_02_order_18_pair():
    ok, detail = vf.check_order_18_pair()
    record(2, ok, detail)


def test_criterion_03_reconstruction(sweep):
    bad = sweep.violations.get("reconstruction", [])
    record(3, sweep.processed > 0 and not bad,
           f"{sweep.processed} corpus groups, violations: {bad}")


def test_criterion_04_hull_inclusion(sweep):
    bad = sweep.violations.get("hull-inclusion", [])
    pairs = sweep.instances.get("hull-inclusion", 0)
    record(4, sweep.processed > 0 and not bad,
           f"{pairs} ordered subgroup pairs, violations: {bad}")


def test_criterion_05_mu_agreement(sweep):
    bad = sweep.violations.get("mu-agreement", [])
    ok = sweep.processed > 0 and not bad and sweep.elapsed < 60.0
    record(5, ok,
           f"{sweep.instances.get('mu-agreement', 0)} soluble groups, "
           f"sweep {sweep.elapsed:.1f}s (< 60s), violations: {bad}")


def test_criterion_06_mu_vanishing(sweep):
    bad = sweep.violations.get("mu-vanishing", [])
    record(6, sweep.processed > 0 and not bad,
           f"{sweep.instances.get('mu-vanishing', 0)} subgroups, violations: {bad}")


def test_criterion_07_normal_mu(sweep):
    bad = sweep.violations.get("normal-mu", [])
    record(7, sweep.instances.get("normal-mu", 0) > 0 and not bad,
           f"{sweep.instances.get('normal-mu', 0)} groups with nilpotent "
           f"M-partners, violations: {bad}")


def test_criterion_08_product_m():
    ok, detail = vf.check_product_m_factorization()
    record(8, ok and len(vf._PRODUCT_PAIRS) >= 10, detail)


def test_criterion_09_classification_positives():
    ok, detail = vf.check_classification_positives()
    record(9, ok, detail)


def test_criterion_10_classification_negative():
    t0 = time.monotonic()
    ok, detail = vf.check_classification_negative()
    dt = time.monotonic() - t0
    record(10, ok and dt < 300.0, f"{detail}; {dt:.1f}s (< 300s)")


def test_criterion_11_supersoluble(sweep):
    bad = sweep.violations.get("supersoluble-m", [])
    record(11, sweep.instances.get("supersoluble-m", 0) > 0 and not bad,
           f"{sweep.instances.get('supersoluble-m', 0)} members checked, "
           f"violations: {bad}")


def test_criterion_12_almost_simple_families():
    t0 = time.monotonic()
    ok, detail = vf.check_small_intersection_families()
    dt = time.monotonic() - t0
    record(12, ok and dt < 120.0, f"{detail}; {dt:.1f}s (< 120s)")


@pytest.mark.skipif(
    os.environ.get("JOINLAT_INCLUDE_648", "") != "1",
    reason="opt-in: set JOINLAT_INCLUDE_648=1",
)
def test_criterion_13_wreath_648():
    t0 = time.monotonic()
    ok, detail = vf.check_wreath_648()
    dt = time.monotonic() - t0
    record(13, ok and dt < 600.0, f"{detail}; {dt:.1f}s (< 600s)")


def test_criterion_14_uniform_families(sweep):
    bad = sweep.violations.get("uniform-families", [])
    record(14, sweep.instances.get("uniform-families", 0) > 0 and not bad,
           f"{sweep.instances.get('uniform-families', 0)} nilpotent "
           f"Frattini-free groups, violations: {bad}")
