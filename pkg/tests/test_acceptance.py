"""Acceptance criteria 1-11, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines go to the
terminal even without ``-s``.
"""

import math
import time

import numpy as np
import pytest

from conftest import LN2, LN3, term_index, zeta3_sum
from oracles import PI_OVER_LN2, SIGMA_STAR, bisect_sigma_star, brute_polygon_min
from randomsums import corpus
from realproj import (
    EndKind, Rectangle, Tolerances, VerticalStrip, b_profile, b_roots, b_value, b_values,
    check_nonempty_entire, classify_boundary, compute_rset, crosscheck_rset, inf_modulus,
    load_spec, locate_zeros, term_moduli, validate_sum, winding_number,
)
from realproj.cli import main
from realproj.specfile import corpus_path

pytestmark = pytest.mark.slow

TOL = Tolerances()
STRIP = VerticalStrip(-3.0, 3.0)


@pytest.fixture
def verdict(capsys):
    def report(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {n}: {detail}"
    return report


@pytest.fixture(scope="module")
def random_corpus():
    """The 200 random sums with their sets on (-3, 3), and the time that took."""
    sums = corpus()
    start = time.perf_counter()
    results = [compute_rset(f, STRIP) for f in sums]
    return sums, results, time.perf_counter() - start


def test_1_three_term_interval(verdict):
    start = time.perf_counter()
    f = zeta3_sum()
    res = compute_rset(f, STRIP)
    elapsed = time.perf_counter() - start
    assert abs(bisect_sigma_star() - SIGMA_STAR) < 1e-14
    ok = (len(res.intervals) == 1
          and abs(res.intervals[0].lo + 1.0) <= 1e-12
          and abs(res.intervals[0].hi - SIGMA_STAR) <= 1e-9
          and elapsed < 1.0)
    iv = res.intervals[0]
    verdict(1, ok, f"[{iv.lo!r}, {iv.hi!r}] in {elapsed:.3f}s")


def test_2_boundary_uniqueness(verdict, random_corpus):
    f = zeta3_sum()
    res = compute_rset(f, STRIP)
    iv = res.intervals[0]
    left = classify_boundary(f, iv.lo)
    right = classify_boundary(f, iv.hi)
    ok = (left.kind == right.kind == "boundary"
          and left.equality_index == term_index(f, -LN3)
          and right.equality_index == term_index(f, 0.0))

    sums, results, compute_time = random_corpus
    start = time.perf_counter()
    endpoints = bad = 0
    for f, res in zip(sums, results):
        for iv in res.intervals:
            for sigma, kind in ((iv.lo, iv.lo_kind), (iv.hi, iv.hi_kind)):
                if kind is not EndKind.BOUNDARY:
                    continue
                endpoints += 1
                vals = [v.lo for v in b_values(f, sigma)]
                near = [b for b in vals if abs(b) <= 1e-9]
                rest = [b for b in vals if abs(b) > 1e-9]
                if len(near) != 1 or min(rest, default=1.0) <= 1e-9:
                    bad += 1
    elapsed = compute_time + time.perf_counter() - start
    ok = ok and bad == 0 and endpoints > 0 and elapsed < 30.0
    verdict(2, ok, f"{endpoints} endpoints, {bad} without a unique equality, {elapsed:.1f}s")


def test_3_at_most_two_roots_and_convexity(verdict, random_corpus):
    sums, results, _ = random_corpus
    grid = np.linspace(-3.0, 3.0, 1000)
    most = 0
    worst = math.inf
    for f, res in zip(sums, results):
        most = max(most, max(len(r.roots) for r in res.roots))
        prof = b_profile(f, grid)
        second = prof[:-2] - 2 * prof[1:-1] + prof[2:]
        # slack relative to the size of B, which reaches 1e17 on this range
        worst = min(worst, float((second / np.maximum(1.0, np.abs(prof[1:-1]))).min()))
    ok = most <= 2 and worst >= -1e-7
    verdict(3, ok, f"max roots {most}, worst relative second difference {worst:.3g}")


def test_4_no_isolated_points(verdict, random_corpus):
    sums, results, _ = random_corpus
    widths = [iv.width for f, res in zip(sums, results) if len(f) >= 3 for iv in res.intervals]
    thin = [w for w in widths if w <= 10 * TOL.root_tol]
    ok = bool(widths) and not thin
    verdict(4, ok, f"{len(widths)} components, narrowest {min(widths):.3g}, {len(thin)} degenerate")


def test_5_gaps_attributed(verdict, random_corpus):
    sums, results, _ = random_corpus
    gaps = bad = overlaps = 0
    for res in results:
        for lo, hi, j in res.gaps():
            gaps += 1
            if j is None:
                bad += 1
                continue
            roots = res.roots[j].roots
            if len(roots) != 2 or not (roots[0].lo <= lo <= roots[0].hi + TOL.root_tol
                                       and roots[1].lo - TOL.root_tol <= hi <= roots[1].hi):
                bad += 1
        negs = sorted(r.negative_interval for r in res.roots if r.negative_interval is not None)
        overlaps += sum(1 for a, b in zip(negs, negs[1:]) if b[0] < a[1])
    ok = gaps > 0 and bad == 0 and overlaps == 0
    verdict(5, ok, f"{gaps} gaps, {bad} badly attributed, {overlaps} overlapping negative intervals")


def test_6_nonempty_on_the_plane(verdict, random_corpus):
    sums, _, _ = random_corpus
    failures = 0
    for f in sums:
        check = check_nonempty_entire(f)
        if (not check.guaranteed or check.witness is None
                or min(v.lo for v in b_values(f, check.witness)) < 0):
            failures += 1
    verdict(6, failures == 0, f"{failures} of {len(sums)} without a witness")


def test_7_zero_free_strip(verdict, capsys):
    start = time.perf_counter()
    code = main(["verify", str(corpus_path("zero-free-strip"))])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - start
    f = load_spec(corpus_path("zero-free-strip")).sum
    j0 = term_index(f, 1.0)
    grid = np.linspace(-0.99, -0.01, 99)
    worst = max(b_value(f, j0, float(s)).hi for s in grid)
    roots = b_roots(f, j0, VerticalStrip(-1.0, 0.0), with_tail=True)
    neg = roots.negative_interval
    ok = (code == 0 and '"empty set certified"' in out and elapsed < 5.0
          and worst < -TOL.cert_margin and neg is not None and neg[0] < -0.99 and neg[1] > -0.01)
    verdict(7, ok, f"exit {code}, max upper B_j0 {worst:.4f}, {elapsed:.2f}s")


def test_8_zeros_inside_the_set(verdict):
    start = time.perf_counter()
    sums = [zeta3_sum()] + corpus(10, seed=8, k_min=3, k_max=5)
    zeros = violations = 0
    complete = True
    for f in sums:
        rep = crosscheck_rset(f, STRIP, 200.0)
        zeros += len(rep.zeros)
        violations += len(rep.violations)
        complete &= rep.complete
    elapsed = time.perf_counter() - start
    ok = violations == 0 and complete and zeros > 0 and elapsed < 60.0
    verdict(8, ok, f"{zeros} zeros, {violations} outside the set, {elapsed:.1f}s")


def test_9_polygon_closed_form(verdict):
    sums = [f for f in corpus() if len(f) == 3]
    rng = np.random.default_rng(7)
    worst = 0.0
    for f in sums:
        for sigma in rng.uniform(-3.0, 3.0, 20):
            m = term_moduli(f, float(sigma)).m
            # error relative to the sum of moduli: single-precision grid
            err = abs(brute_polygon_min(m) - inf_modulus(f, float(sigma))) / sum(m)
            worst = max(worst, err)
    ok = bool(sums) and worst < 1e-3
    verdict(9, ok, f"{len(sums)} three-term sums, worst error {worst:.3g}")


def test_10_invariances(verdict):
    rng = np.random.default_rng(10)
    sums = [zeta3_sum()] + corpus(5, seed=10)
    worst = 0.0
    for f in sums:
        base = [(iv.lo, iv.hi) for iv in compute_rset(f, STRIP).intervals]
        variants = [f.shifted(float(mu)) for mu in rng.uniform(-2.0, 2.0, 10)]
        for _ in range(3):
            turn = np.exp(1j * rng.uniform(0, 2 * np.pi, len(f)))
            variants.append(f.with_coefficients([t.coeff * r for t, r in zip(f.terms, turn)]))
        for g in variants:
            other = [(iv.lo, iv.hi) for iv in compute_rset(g, STRIP).intervals]
            if len(other) != len(base):
                worst = math.inf
                break
            for a, b in zip(base, other):
                worst = max(worst, abs(a[0] - b[0]), abs(a[1] - b[1]))
    windings_ok = True
    f = zeta3_sum()
    rects = [Rectangle(-1.5, 1.5, 0.5, 30.5), Rectangle(-0.9, 0.7, 10.25, 40.25)]
    for rect in rects:
        n = winding_number(f, rect)
        windings_ok &= all(winding_number(f.shifted(float(mu)), rect) == n
                           for mu in rng.uniform(-2.0, 2.0, 10))
    ok = worst <= 1e-12 and windings_ok
    verdict(10, ok, f"max endpoint change {worst:.3g}, windings unchanged: {windings_ok}")


def test_11_winding_sanity(verdict):
    f = validate_sum([(1, 1.0), (-1, 0.0)])
    counts = (winding_number(f, Rectangle(-1, 1, -1, 1)),
              winding_number(f, Rectangle(1, 2, 1, 2)),
              winding_number(f, Rectangle(-1, 1, 2 * math.pi - 1, 2 * math.pi + 1)))
    g = validate_sum([(1, 0.0), (1, -LN2)])
    (z,) = locate_zeros(g, Rectangle(-1, 1, 0.5, 6.0))
    ok = counts == (1, 0, 1) and abs(z.location.imag - PI_OVER_LN2) <= 1e-9 \
        and abs(z.location.real) <= 1e-9
    verdict(11, ok, f"windings {counts}, zero at {z.location!r}")
