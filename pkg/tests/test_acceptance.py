"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
complete.  Every tolerance and runtime bound is pinned here.
"""

import itertools
import math
import time
from math import gcd

import numpy as np

from shearorbits.forcing import SimpleOrbit, SimplePair, forced_set
from shearorbits.kicked import (
    TWO_PI,
    LiftedPoint,
    MapParams,
    Stability,
    acceleration,
    jacobian_step,
    lift_step,
    orbit_search_grid,
)
from shearorbits.markov import (
    RectangleKind,
    build_Onm,
    cycle_rotation_number,
    kind_ranges,
    label_rectangles,
    realized_rotation_numbers,
    verify_against_forcing,
)
from shearorbits.rationals import (
    FareyPair,
    Rational,
    is_farey_neighbor,
    make_rational,
    rationals_between,
)
from shearorbits.sweep import SweepConfig, run_sweep, tip_locations


def R(q, p):
    return make_rational(q, p)


P13_12 = FareyPair.of(R(1, 3), R(1, 2))


def report(number, description, ok):
    print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {description}")
    assert ok, f"criterion {number} failed: {description}"


def all_fractions(max_den):
    return [
        Rational(q, p)
        for p in range(1, max_den + 1)
        for q in range(p)
        if gcd(q, p) == 1
    ]


def test_criterion_1_forcing_closure_exactness():
    start = time.perf_counter()
    got = forced_set(P13_12, 10)
    # independent brute force: scan all reduced fractions with den <= 10
    lo, hi = R(1, 3), R(1, 2)
    orbits = {t for t in all_fractions(10) if lo <= t <= hi}
    pairs = {
        FareyPair.of(s, t)
        for s, t in itertools.combinations(sorted(orbits), 2)
        if is_farey_neighbor(s, t)
    }
    expected = {SimpleOrbit(t) for t in orbits} | {SimplePair(q) for q in pairs}
    elapsed = time.perf_counter() - start
    ok = got == expected and elapsed < 1.0
    report(1, f"forced_set(1/3 v 1/2, 10) exact ({len(got)} elements, {elapsed:.3f}s)", ok)


def test_criterion_2_realized_rotation_numbers_span():
    start = time.perf_counter()
    pairs = [
        P13_12,
        FareyPair.of(R(1, 4), R(1, 3)),
        FareyPair.of(R(2, 5), R(1, 2)),
        FareyPair.of(R(0, 1), R(1, 2)),
    ]
    ok = True
    for pair in pairs:
        realized = realized_rotation_numbers(pair, 60)
        lo, hi = pair.lo, pair.hi
        required = set(rationals_between(lo, hi, 12))
        if lo.den <= 12:
            required.add(lo)
        if hi.den <= 12:
            required.add(hi)
        ok = ok and required <= realized
        ok = ok and all(lo <= t <= hi for t in realized)
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 5.0
    report(2, f"realized rotation numbers span all denominators <= 12 ({elapsed:.3f}s)", ok)


def test_criterion_3_two_loop_cycle_formulas():
    ok = True
    words = set()
    for n in range(1, 7):
        for m in range(1, 7):
            c = build_Onm(P13_12, n, m)
            ok = ok and len(c) == 3 * n + 2 * m
            ok = ok and cycle_rotation_number(c, P13_12) == make_rational(n + m, 3 * n + 2 * m)
            words.add(c.canonical)
    ok = ok and len(words) == 36
    report(3, "O(n,m) lengths 3n+2m, rotations (n+m)/(3n+2m), 36 distinct words", ok)


def test_criterion_4_rectangle_count():
    labels = label_rectangles(P13_12)
    ranges = kind_ranges(P13_12)
    expected_ranges = {
        RectangleKind.D: [1, 2],
        RectangleKind.C: [3, 4],
        RectangleKind.L: [5, 6],
        RectangleKind.K: [7, 8],
        RectangleKind.A: [9, 10, 11],
        RectangleKind.B: [12, 13, 14, 15],
        RectangleKind.M: [16],
    }
    ok = len(labels) == 16
    for kind, expected in expected_ranges.items():
        ok = ok and list(ranges[kind]) == expected
        ok = ok and [r.index for r in labels if r.kind is kind] == expected
    report(4, "16 rectangles for 1/3 v 1/2 with the exact kind ranges", ok)


def test_criterion_5_map_invariants():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    ok = True
    h = 1e-6
    for _ in range(1000):
        params = MapParams(rng.uniform(0, 2), rng.uniform(-4, 4))
        x = LiftedPoint(*rng.uniform(-8, 8, size=2))
        y = lift_step(x, params)
        yj = lift_step(LiftedPoint(x.J + TWO_PI, x.theta), params)
        yt = lift_step(LiftedPoint(x.J, x.theta + TWO_PI), params)
        ok = ok and abs(yj.J - y.J - TWO_PI) < 1e-10
        ok = ok and abs(yj.theta - y.theta - TWO_PI) < 1e-10
        ok = ok and abs(yt.J - y.J) < 1e-10
        ok = ok and abs(yt.theta - y.theta - TWO_PI) < 1e-10
        m = jacobian_step(x, params)
        ok = ok and abs(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0] - 1.0) < 1e-12
        fd = np.empty((2, 2))
        for col, (dJ, dth) in enumerate([(h, 0.0), (0.0, h)]):
            up = lift_step(LiftedPoint(x.J + dJ, x.theta + dth), params)
            dn = lift_step(LiftedPoint(x.J - dJ, x.theta - dth), params)
            fd[0, col] = (up.J - dn.J) / (2 * h)
            fd[1, col] = (up.theta - dn.theta) / (2 * h)
        ok = ok and np.abs(m - fd).max() < 1e-5
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 1.0
    report(5, f"deck equivariance, unit determinant, finite-difference Jacobian ({elapsed:.3f}s)", ok)


def test_criterion_6_stable_and_unstable_two_orbit():
    start = time.perf_counter()
    params = MapParams(TWO_PI / 15, math.pi)
    orbits = orbit_search_grid(params, 2, 1, 16, tol=1e-12)
    elapsed = time.perf_counter() - start
    stable = [o for o in orbits if o.stability is Stability.ELLIPTIC]
    unstable = [o for o in orbits if o.stability is Stability.HYPERBOLIC]
    ok = len(orbits) >= 2
    ok = ok and len(stable) >= 1 and len(unstable) >= 1
    ok = ok and all(o.residual <= 1e-10 for o in orbits)
    ok = ok and all(acceleration(o, params) == 0.0 for o in stable)
    ok = ok and elapsed < 5.0
    report(
        6,
        f"k=2pi/15, omega=pi: {len(orbits)} two-orbits, "
        f"{len(stable)} stable / {len(unstable)} unstable, alpha(stable)=0 ({elapsed:.1f}s)",
        ok,
    )


def test_criterion_7_fixed_point_tongue_boundary():
    start = time.perf_counter()
    cfg = SweepConfig(
        k_min=0.0, k_max=1.0, omega_min=-1.0, omega_max=1.0,
        nk=200, nomega=200, periods=((1, 0),),
    )
    records = run_sweep(cfg)
    diag = math.hypot(1.0 / 200, 2.0 / 200)
    mismatches = [
        r for r in records
        if abs(r.k - abs(r.omega)) > diag and r.found != (r.k >= abs(r.omega))
    ]
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 60.0
    report(
        7,
        f"200x200 p=1 sweep matches k >= |omega| away from the boundary "
        f"({len(mismatches)} mismatches, {elapsed:.1f}s)",
        ok,
    )


def test_criterion_8_tongue_tips():
    start = time.perf_counter()
    cfg = SweepConfig(
        k_min=0.0, k_max=0.3, omega_min=0.0, omega_max=TWO_PI,
        nk=150, nomega=150, max_period=5,
    )
    records = run_sweep(cfg)
    tips = {(p, q): omega for p, q, omega in tip_locations(records)}
    cell = TWO_PI / 150
    targets = cfg.targets()
    ok = set(tips) == set(targets)
    detail = []
    for p, q in targets:
        expected = TWO_PI * q / p
        got = tips.get((p, q))
        hit = got is not None and abs(got - expected) <= cell
        detail.append(f"({p},{q}):{'ok' if hit else 'MISS'}")
        ok = ok and hit
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 600.0
    report(8, f"tongue tips at omega = 2*pi*q/p for p <= 5 ({' '.join(detail)}, {elapsed:.0f}s)", ok)


def test_criterion_9_cross_module_consistency():
    fracs = all_fractions(5)
    pairs = [
        FareyPair.of(a, b)
        for a, b in itertools.combinations(fracs, 2)
        if is_farey_neighbor(a, b)
    ]
    ok = bool(pairs)
    for pair in pairs:
        passed, missing = verify_against_forcing(pair, 10)
        ok = ok and passed and not missing
    report(9, f"markov-verify PASS for all {len(pairs)} pairs with p1 <= 5 at max_den 10", ok)
