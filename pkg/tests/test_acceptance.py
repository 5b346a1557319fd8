"""Acceptance suite: ten end-to-end criteria at their stated tolerances.

Each criterion is a function returning ``(ok, detail)``.  Under pytest every
criterion is one test and a PASS/FAIL line per criterion is printed in the
terminal summary (see ``conftest.py``).  Run this file directly to get the
same lines without pytest::

    python3 tests/test_acceptance.py [numbers...]
"""

import random
import sys
import time
from fractions import Fraction

import mpmath
import pytest

from yokota.evaluator import yokota
from yokota.pyramids import GROWTH_REFERENCE, VOLUMES, builtin
from yokota.qarith import RootContext
from yokota.sixj import sixj_integer, tet
from yokota.suites import (bar_product_suite, tree_shape_suite, oracle_suite, orthogonality_suite,
                           random_integer_tuple, symmetry_suite)
from yokota.volume import REGULAR_IDEAL_VOLUME, growth_estimate, regular_tet_growth

EPS = Fraction(1, 10**30)
PRECISION = 80
RESIDUAL = mpmath.mpf("1e-25")

#: criterion number -> (title, ok, detail, seconds); filled as criteria run
RESULTS = {}

TABLE_ROWS = {
    "gamma1": (24, 48, 72, 120),
    "gamma2": (24, 48, 120),
    "gamma3": (12, 24, 60),
    "gamma4": (10, 20, 60),
}


def _suite_verdict(residuals):
    worst = max(r.value for r in residuals)
    bad = [r.label for r in residuals if not r.ok]
    detail = f"{len(residuals)} residuals, worst {mpmath.nstr(worst, 3)}"
    if bad:
        detail += f"; failing: {', '.join(bad[:3])}"
    return not bad, detail


def table_reproduction():
    worst, bad = mpmath.mpf(0), []
    for name, ns in TABLE_ROWS.items():
        g = builtin(name)
        for n in ns:
            res = yokota(g, RootContext(n, EPS, PRECISION))
            delta = abs(growth_estimate(res, n) - mpmath.mpf(GROWTH_REFERENCE[name][n]))
            worst = max(worst, delta)
            if delta >= 1e-6:
                bad.append(f"{name} n={n} off by {mpmath.nstr(delta, 3)}")
    rows = sum(len(v) for v in TABLE_ROWS.values())
    return not bad, f"{rows} rows, worst |delta| {mpmath.nstr(worst, 3)}" + (f"; {'; '.join(bad)}" if bad else "")


def convergence_trend():
    vol = mpmath.mpf(VOLUMES["gamma2"])
    g = builtin("gamma2")
    gaps = []
    for n in (48, 120, 240):
        gaps.append(abs(growth_estimate(yokota(g, RootContext(n, EPS, PRECISION)), n) - vol))
    ok = gaps[0] > gaps[1] > gaps[2]
    return ok, "gaps " + " > ".join(mpmath.nstr(d, 6) for d in gaps)


def orthogonality():
    return _suite_verdict(orthogonality_suite(range(5, 16), count=100, precision=PRECISION))


def symmetry():
    return _suite_verdict(symmetry_suite(range(5, 13), count=50, precision=PRECISION))


def bar_product_identity():
    return _suite_verdict(bar_product_suite(range(5, 17), count=50, precision=PRECISION))


def tree_shape_independence():
    return _suite_verdict(tree_shape_suite((8, 12, 24), precision=PRECISION))


def oracle_equivalence():
    return _suite_verdict(oracle_suite((12, 24), precision=PRECISION))


def epsilon_limit():
    rng = random.Random(8)
    cases = [(8, (3,) * 6)] + [(n, random_integer_tuple(n, rng)) for n in (7, 10, 13)]
    # distinct epsilon multiples that cancel at every vertex
    ms = (1, 2, 3, 4, 7, 6)
    slopes = []
    for n, t in cases:
        ref = sixj_integer(*t, RootContext(n, precision=PRECISION))
        pts = [(Fraction(x), m) for x, m in zip(t, ms)]
        diffs = []
        for k in (20, 25, 30):
            ctx = RootContext(n, Fraction(1, 10**k), PRECISION)
            with ctx.working():
                diffs.append(abs(tet(pts, ctx) - ref))
        with mpmath.workdps(30):
            slopes += [mpmath.log10(diffs[0] / diffs[1]) / 5, mpmath.log10(diffs[1] / diffs[2]) / 5]
    ok = all(abs(s - 1) <= 0.2 for s in slopes)
    return ok, f"{len(cases)} tuples, slopes in [{mpmath.nstr(min(slopes), 4)}, {mpmath.nstr(max(slopes), 4)}]"


REALNESS_N = {"gamma1": 24, "gamma2": 12, "gamma3": 12, "gamma4": 10}


def realness():
    worst, parts = 0.0, []
    for name, n in REALNESS_N.items():
        res = yokota(builtin(name), RootContext(n, EPS, PRECISION), route="direct")
        worst = max(worst, res.max_rel_imag)
        parts.append(f"{name}@{n} {res.max_rel_imag:.1e}")
    return worst < 1e-20, "max relative imaginary part: " + ", ".join(parts)


def ideal_tetrahedron_trend():
    vol = mpmath.mpf(REGULAR_IDEAL_VOLUME)
    ns = (24, 48, 120, 240)
    gaps = [abs(regular_tet_growth(n, PRECISION) - vol) for n in ns]
    ok = all(a > b for a, b in zip(gaps, gaps[1:]))
    return ok, "gaps " + " > ".join(mpmath.nstr(d, 6) for d in gaps)


CRITERIA = {
    1: ("published growth values", table_reproduction),
    2: ("Gamma2 convergence trend", convergence_trend),
    3: ("orthogonality", orthogonality),
    4: ("tetrahedral symmetry suite", symmetry),
    5: ("bar product identity", bar_product_identity),
    6: ("tree-shape independence", tree_shape_independence),
    7: ("oracle equivalence", oracle_equivalence),
    8: ("integer formula as epsilon limit", epsilon_limit),
    9: ("realness of plane-graph factors", realness),
    10: ("regular ideal tetrahedron trend", ideal_tetrahedron_trend),
}


def run_criterion(k):
    title, fn = CRITERIA[k]
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, do not hide
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    RESULTS[k] = (title, ok, detail, time.perf_counter() - t0)
    return ok, detail


def summary_lines():
    out = []
    for k in RESULTS:
        title, ok, detail, secs = RESULTS[k]
        out.append(f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail} ({secs:.1f} s)")
    return out


@pytest.mark.slow
@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k):
    ok, detail = run_criterion(k)
    assert ok, detail


if __name__ == "__main__":
    picks = [int(a) for a in sys.argv[1:]] or sorted(CRITERIA)
    for k in picks:
        run_criterion(k)
        print(summary_lines()[-1], flush=True)
    sys.exit(0 if all(RESULTS[k][1] for k in picks) else 1)
