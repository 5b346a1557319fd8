"""Randomized identity suites shared by the command line and the tests.

Each suite returns a list of :class:`Residual` records; a suite passes when
every residual is below its threshold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import YokotaError
from .qarith import RootContext, padd, pshift, solve
from .sixj import (SYMMETRIES, admissible_integer_triple, orthogonality_sum,
                   orthogonality_window, rearrange, sixj_integer, tet_points)

THRESHOLD = mpmath.mpf("1e-25")
EPS_CHOICES = (1, 2, 4, 8, 16, 32, 64)


@dataclass
class Residual:
    suite: str
    label: str
    value: mpmath.mpf
    threshold: mpmath.mpf = THRESHOLD

    @property
    def ok(self) -> bool:
        return self.value < self.threshold


def _frac(rng, n, den=3):
    return Fraction(rng.randrange(0, den * n), den)


def random_tet_tuple(n: int, rng: random.Random, den: int = 3) -> tuple:
    """Perturbed colors (a..f) whose four vertex conditions all hold.

    Real parts are multiples of ``1/den``; the epsilon coefficients of a, b
    and d are distinct powers of two and the rest follow from the vertex
    conditions, so no loop weight is singular.
    """
    while True:
        ma, mb, md = rng.sample(EPS_CHOICES, 3)
        a = (_frac(rng, n, den), ma)
        b = (_frac(rng, n, den), mb)
        d = (_frac(rng, n, den), md)
        c = (a[0] + b[0] - rng.randrange(n), ma + mb)
        e = (c[0] + d[0] - rng.randrange(n), ma + mb + md)
        f = (b[0] + d[0] - rng.randrange(n), mb + md)
        if 0 <= a[0] + f[0] - e[0] <= n - 1:
            return (a, b, c, d, e, f)


def random_orthogonality_probe(n: int, rng: random.Random):
    """(a, b, c, d, e, g) with a nonempty f-window and g != c admissible."""
    while True:
        a, b, c, d, e, _ = random_tet_tuple(n, rng)
        if not orthogonality_window(a, b, d, e, n):
            continue
        gs = []
        for k in range(n):
            g = pshift(padd(a, b), -k)
            if g != c and 0 <= d[0] + g[0] - e[0] <= n - 1:
                gs.append(g)
        if gs:
            return a, b, c, d, e, rng.choice(gs)


def random_integer_tuple(n: int, rng: random.Random) -> tuple:
    while True:
        a, b, c, d, e, f = (rng.randint(1, n - 2) for _ in range(6))
        tris = ((a, b, c), (c, d, e), (b, d, f), (a, f, e))
        if all(admissible_integer_triple(*t, n) for t in tris):
            return (a, b, c, d, e, f)


def _rel(x, y):
    scale = max(abs(x), abs(y))
    return abs(x - y) / scale if scale else abs(x - y)


# ---------------------------------------------------------------------------


def orthogonality_suite(ns, count: int = 100, seed: int = 0, precision: int = 80) -> list:
    out = []
    for n in ns:
        rng = random.Random(f"orth-{seed}-{n}")
        ctx = RootContext(n, precision=precision)
        worst_diag, worst_off = mpmath.mpf(0), mpmath.mpf(0)
        for _ in range(count):
            a, b, c, d, e, g = random_orthogonality_probe(n, rng)
            with ctx.working():
                worst_diag = max(worst_diag, abs(orthogonality_sum(a, b, c, d, e, c, ctx) - 1))
                worst_off = max(worst_off, abs(orthogonality_sum(a, b, c, d, e, g, ctx)))
        out.append(Residual("orthogonality", f"n={n} g=c", worst_diag))
        out.append(Residual("orthogonality", f"n={n} g!=c", worst_off))
    return out


def symmetry_suite(ns, count: int = 50, seed: int = 0, precision: int = 80) -> list:
    """One residual per non-identity relation (maximum over tuples and n)."""
    worst = [mpmath.mpf(0)] * (len(SYMMETRIES) - 1)
    for n in ns:
        rng = random.Random(f"sym-{seed}-{n}")
        ctx = RootContext(n, precision=precision)
        for _ in range(count):
            t = random_tet_tuple(n, rng)
            base = solve(lambda c: tet_points(t, c), ctx).value
            for i, pat in enumerate(SYMMETRIES[1:]):
                other = rearrange(t, pat, n)
                v = solve(lambda c: tet_points(other, c), ctx).value
                with ctx.working():
                    worst[i] = max(worst[i], _rel(base, v))
    label = ",".join(str(n) for n in ns)
    return [Residual("symmetry", f"{SYMMETRIES[i + 1]} n={label}", w) for i, w in enumerate(worst)]


def bar_product_suite(ns, count: int = 50, seed: int = 0, precision: int = 80) -> list:
    """``tet(t) tet(tbar) = tet(a,bbar,..) tet(abar,b,cbar,..)`` for integer t."""
    out = []
    for n in ns:
        rng = random.Random(f"bar-{seed}-{n}")
        ctx = RootContext(n, precision=precision)
        worst = mpmath.mpf(0)
        for _ in range(count):
            a, b, c, d, e, f = random_integer_tuple(n, rng)
            B = lambda x: n - 1 - x
            p1 = sixj_integer(a, b, c, d, e, f, ctx)
            p2 = sixj_integer(B(a), B(b), B(c), B(d), B(e), B(f), ctx)
            q1 = sixj_integer(a, B(b), c, d, e, f, ctx)
            q2 = sixj_integer(B(a), b, B(c), B(d), B(e), B(f), ctx)
            # the products need the working precision, not mpmath's default
            with ctx.working():
                worst = max(worst, _rel(p1 * p2, q1 * q2))
        out.append(Residual("bar-product", f"n={n}", worst))
    return out


def tree_shape_graph(n: int):
    """A square pyramid coloring with integral colors at ``n``."""
    from .pyramids import gamma1, gamma2, square_pyramid

    if n % 24 == 0:
        return gamma1()
    if n % 3 == 0:
        return gamma2()
    if n % 8 == 0:
        return square_pyramid(Fraction(3, 8), Fraction(1, 4))
    raise ValueError(f"no square pyramid coloring for n={n}")


def tree_shape_suite(ns, precision: int = 80) -> list:
    """Two bracketings of the apex of a square pyramid give the same value."""
    from .evaluator import yokota
    from .graph import tree_shapes

    out = []
    for n in ns:
        g = tree_shape_graph(n)
        ctx = RootContext(n, precision=precision)
        apex = [v for v, hs in g.vertices if len(hs) == 4][0]
        shapes = []
        for s in tree_shapes(g.rotation[apex]):
            try:
                r = yokota(g, ctx, tree_shapes={apex: s})
            except YokotaError:  # a shape whose internal color is unperturbed
                continue
            shapes.append((s, r.value))
            if len(shapes) == 2:
                break
        with ctx.working():
            out.append(Residual("tree-shape", f"n={n} {shapes[0][0]} vs {shapes[1][0]}",
                                _rel(shapes[0][1], shapes[1][1])))
    return out


def oracle_suite(ns, precision: int = 80) -> list:
    from .evaluator import pentagonal_pyramid_oracle, square_pyramid_oracle, yokota
    from .pyramids import builtin, pentagonal_colors, square_colors

    out = []
    for n in ns:
        ctx = RootContext(n, precision=precision)
        for name in ("gamma1", "gamma2", "gamma3", "gamma4"):
            g = builtin(name)
            if any((e.color.n_coeff * n).denominator != 1 for e in g.edges):
                continue
            gen = yokota(g, ctx).value
            if name in ("gamma1", "gamma2"):
                ora = square_pyramid_oracle(*square_colors(name), ctx)
            else:
                ora = pentagonal_pyramid_oracle(*pentagonal_colors(name), ctx)
            with ctx.working():
                out.append(Residual("oracle", f"{name} n={n}", _rel(gen, ora)))
    return out


SUITES = {
    "orthogonality": orthogonality_suite,
    "symmetry": symmetry_suite,
    "bar-product": bar_product_suite,
    "tree-shape": tree_shape_suite,
    "oracle": oracle_suite,
}
