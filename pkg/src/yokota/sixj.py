"""6j-symbols and tetrahedron symbols at xi_n.

The tetrahedron symbol ``tet(a, b, c, d, e, f)`` is the value of the colored
tetrahedron graph with vertex triples (a, b, c), (c, d, e), (b, d, f) and
(a, f, e); the 6j-symbol is ``tet / [2f+n; 2f+1]``.  Both are real for real
colors, so the state-sum engine works with real mpmath numbers and the
public helpers return :data:`~yokota.qarith.HPComplex`.

Colors may be :class:`~yokota.qarith.ColorSpec` values, plain integers or
exact lattice points ``(Fraction, eps_coeff)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import mpmath

from .errors import NotAdmissible, PoleError
from .qarith import (ColorSpec, Point, RootContext, Tracked, as_point, padd,
                     pairwise_sum, pbar, pscale, pshift, psub, settle, solve)


class SixTuple(NamedTuple):
    a: object
    b: object
    c: object
    d: object
    e: object
    f: object


@dataclass(frozen=True)
class TriadSums:
    A: ColorSpec
    B: ColorSpec

    @classmethod
    def of(cls, x: ColorSpec, y: ColorSpec, z: ColorSpec) -> "TriadSums":
        return cls(x + y + z, x + y - z)


def bar(a, n: int | None = None):
    """``n - 1 - a``.  ColorSpecs are barred symbolically; points need ``n``."""
    if isinstance(a, ColorSpec):
        return a.bar()
    if n is None:
        raise TypeError("bar of a numeric color needs n")
    if isinstance(a, tuple):
        return pbar(a, n)
    return n - 1 - a


def _triple_points(a, b, c, n):
    return as_point(a, n), as_point(b, n), as_point(c, n)


def admissible_vertex(a, b, c, n: int) -> bool:
    """Colors all pointing toward the vertex.

    The epsilon parts have to cancel, the pairwise sums ``x + y - z`` have to
    be integers and the integer part of ``a + b + c`` must lie in
    ``{n-1, ..., 2n-2}``.
    """
    a, b, c = _triple_points(a, b, c, n)
    s = padd(a, b, c)
    if s[1] != 0 or s[0].denominator != 1:
        return False
    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
        if (x[0] + y[0] - z[0]).denominator != 1:
            return False
    return n - 1 <= s[0] <= 2 * n - 2


def admissible_integer_triple(i: int, j: int, k: int, n: int) -> bool:
    """Integer admissibility with strict inequalities throughout."""
    if not all(0 < x < n - 1 for x in (i, j, k)):
        return False
    if not n - 1 < i + j + k < 2 * (n - 1):
        return False
    return all(0 < x < n - 1 for x in (i + j - k, j + k - i, k + i - j))


# ---------------------------------------------------------------------------
# symmetry orbit

# Each entry rewrites (a, b, c, d, e, f); upper case means the barred color.
SYMMETRIES = (
    "abcdef", "cdeFaB", "eFabcD", "FAEcDb", "EcDBFa", "DBFAEC",
    "fDbCAE", "bCAefd", "AefDbc", "CaBfde", "BfdECA", "dECaBF",
    "CbAFED", "EdCbAf", "AFEdCB", "eAfBdC", "dceAfb", "fBdcea",
    "BDFeac", "aCBDFE", "FeaCBd", "bacEDF", "Dfbace", "cEDfbA",
)


def rearrange(t: Sequence, pattern: str, n: int | None = None) -> tuple:
    out = []
    for ch in pattern:
        x = t["abcdef".index(ch.lower())]
        out.append(bar(x, n) if ch.isupper() else x)
    return tuple(out)


def orbit(t: Sequence, n: int | None = None) -> list:
    return [rearrange(t, p, n) for p in SYMMETRIES]


# ---------------------------------------------------------------------------
# core formulas on lattice points


def _B(x: Point, y: Point, z: Point) -> Point:
    return psub(padd(x, y), z)


def _A(x: Point, y: Point, z: Point) -> Point:
    return padd(x, y, z)


def _int_B(q: Point, n: int, what: str) -> int:
    r = q[0]
    if r.denominator != 1 or q[1] != 0 or not 0 <= r <= n - 1:
        raise NotAdmissible(f"{what} = {r}{'+eps' if q[1] else ''} is not in {{0..{n - 1}}}")
    return int(r)


def _I(k: int) -> Point:
    return (Fraction(k), 0)


def _checked_binom(tabs, top: Point, bottom: Point, n: int):
    d = top[0] - bottom[0]
    if d.denominator != 1 or not 0 <= d <= n - 1:
        raise NotAdmissible(f"binomial length {d} outside {{0..{n - 1}}}")
    return tabs.binom(top, bottom)


def _settle_sum(pre, zpre, terms, ctx: RootContext) -> Tracked:
    """``pre * sum(terms)`` with zero orders resolved, as a tracked value."""
    vals = []
    for v, z in terms:
        z += zpre
        if z > 0:
            continue
        if z < 0:
            raise PoleError("tetrahedron symbol has a pole; perturb the colors by epsilon")
        vals.append(v)
    if not vals:
        return Tracked(mpmath.mpf(0), math.inf)
    total = pairwise_sum(vals)
    unit = ctx.unit_digits
    if not total:
        return Tracked(total, -math.inf)
    big = max(abs(v) for v in vals)
    loss = float(mpmath.log10(big / abs(total))) if big else 0.0
    return Tracked(pre * total, unit - max(loss, 0.0) - math.log10(len(vals) + 1))


def tet_points(t: Sequence[Point], ctx: RootContext) -> Tracked:
    """Tetrahedron symbol from the general formula (no loop weight)."""
    n = ctx.n
    a, b, c, d, e, f = t
    tabs = ctx.tables
    Bcde = _int_B(_B(c, d, e), n, "c+d-e")
    Babc = _int_B(_B(a, b, c), n, "a+b-c")
    Bbdf = _int_B(_B(b, d, f), n, "b+d-f")
    Bafe = _int_B(_B(a, f, e), n, "a+f-e")
    s, S = max(0, Bcde - Bbdf), min(Bcde, Bafe)
    with ctx.working():
        f1, z1 = tabs.fact(Bcde)
        f2, z2 = tabs.fact(Babc)
        f3, z3 = tabs.fact(Bbdf)
        f4, z4 = tabs.fact(Bafe)
        b1, y1 = _checked_binom(tabs, pscale(c, 2), pshift(_A(a, b, c), 1 - n), n)
        b2, y2 = _checked_binom(tabs, pscale(c, 2), _B(c, e, d), n)
        sign = -1 if (n - 1 + Bafe) % 2 else 1
        pre = sign * f1 * f2 / (f3 * f4) * b1 / b2
        zpre = z1 + z2 - z3 - z4 + y1 - y2
        top1 = pshift(_A(a, f, e), 1)
        Baef, Bbfd, Bdec, Bdfb = _B(a, e, f), _B(b, f, d), _B(d, e, c), _B(d, f, b)
        terms = []
        for z in range(s, S + 1):
            u1, w1 = tabs.binom(top1, pshift(pscale(e, 2), z + 1))
            u2, w2 = tabs.binom(pshift(Baef, z), Baef)
            u3, w3 = tabs.binom(pshift(padd(Bbfd, _B(c, d, e)), -z), Bbfd)
            u4, w4 = _checked_binom(tabs, pshift(Bdec, z), Bdfb, n)
            v = u1 * u2 * u3 * u4
            terms.append((-v if z % 2 else v, w1 + w2 + w3 + w4))
        return _settle_sum(pre, zpre, terms, ctx)


def tet_integer_points(t: Sequence[Point], ctx: RootContext) -> Tracked:
    """Tetrahedron symbol from the integer-color rearrangement."""
    n = ctx.n
    a, b, c, d, e, f = t
    tabs = ctx.tables
    Bcde = _int_B(_B(c, d, e), n, "c+d-e")
    Babc = _int_B(_B(a, b, c), n, "a+b-c")
    Bbdf = _int_B(_B(b, d, f), n, "b+d-f")
    Bafe = _int_B(_B(a, f, e), n, "a+f-e")
    Baef = int(_B(a, e, f)[0])
    Bbfd = int(_B(b, f, d)[0])
    Bdec = int(_B(d, e, c)[0])
    Bdfb = int(_B(d, f, b)[0])
    ie = int(e[0])
    s = max(0, n - 1 - 2 * ie, Bdfb - Bdec, Bbfd + Bcde - (n - 1))
    S = min(Bcde, Bafe, n - 1 - Baef, n - 1 - Bdec)
    with ctx.working():
        f1, z1 = tabs.fact(Bcde)
        f2, z2 = tabs.fact(Babc)
        f3, z3 = tabs.fact(Bbdf)
        f4, z4 = tabs.fact(Bafe)
        b1, y1 = _checked_binom(tabs, pscale(c, 2), pshift(_A(a, b, c), 1 - n), n)
        b2, y2 = _checked_binom(tabs, pscale(c, 2), _B(c, e, d), n)
        sign = -1 if (n - 1) % 2 else 1
        pre = sign * f1 * f2 / (f3 * f4) * b1 / b2
        zpre = z1 + z2 - z3 - z4 + y1 - y2
        top1 = pshift(_A(a, f, e), 1 - n)
        terms = []
        for z in range(s, S + 1):
            u1, w1 = tabs.binom(top1, pshift(pscale(e, 2), z + 1 - n))
            u2, w2 = tabs.binom(_I(Baef + z), _I(Baef))
            u3, w3 = tabs.binom(_I(Bbfd + Bcde - z), _I(Bbfd))
            u4, w4 = _checked_binom(tabs, _I(Bdec + z), _I(Bdfb), n)
            terms.append((u1 * u2 * u3 * u4, w1 + w2 + w3 + w4))
        return _settle_sum(pre, zpre, terms, ctx)


def loop_points(f: Point, ctx: RootContext) -> Tracked:
    with ctx.working():
        v, z = ctx.tables.loop(f)
        return Tracked(settle(v, z, "loop weight"), ctx.unit_digits)


def inverse_loop_points(f: Point, ctx: RootContext) -> Tracked:
    with ctx.working():
        v, z = ctx.tables.loop(f)
        if z > 0:
            raise PoleError(f"loop weight of color {f[0]} vanishes; perturb by epsilon")
        if z < 0:
            return Tracked(mpmath.mpf(0), math.inf)
        return Tracked(1 / v, ctx.unit_digits)


# ---------------------------------------------------------------------------
# cache


def canonical_key(t: Sequence[Point], n: int) -> tuple:
    """Lexicographically least member of the symmetry orbit."""
    return min(orbit(t, n))


def cached_tet(t: Sequence[Point], ctx: RootContext) -> Tracked:
    """Memoized :func:`tet_points` keyed by the orbit representative.

    The value for a key is always computed from that representative, so a
    hit is bit-identical to a fresh computation of the same key.
    """
    cache = ctx.cache.setdefault("tet", {})
    key = canonical_key(t, ctx.n)
    hit = cache.get(key)
    if hit is None:
        hit = cache[key] = tet_points(key, ctx)
    return hit


# ---------------------------------------------------------------------------
# public API


def _points(t, n) -> tuple:
    t = tuple(t)
    if len(t) != 6:
        raise ValueError("a 6j-symbol needs six colors")
    return tuple(as_point(x, n) for x in t)


def _value(fn, ctx: RootContext, abs_tol=None) -> mpmath.mpc:
    res = solve(fn, ctx, abs_tol=abs_tol)
    with ctx.working():
        return mpmath.mpc(res.value)


def tet(t, ctx: RootContext) -> mpmath.mpc:
    """Tetrahedron symbol ``[2f+n; 2f+1] * sixj(t)``.

    The loop weight is not multiplied in: the formula for the tetrahedron
    is evaluated directly, which stays finite where the weight has a pole.
    """
    pts = _points(t, ctx.n)
    return _value(lambda c: tet_points(pts, c), ctx)


def sixj_general(t, ctx: RootContext) -> mpmath.mpc:
    """The 6j-symbol from the general (perturbed-color) formula."""
    pts = _points(t, ctx.n)

    def run(c):
        with c.working():
            return tet_points(pts, c) * inverse_loop_points(pts[5], c)

    return _value(run, ctx)


def sixj_integer(a, b, c, d, e, f, ctx: RootContext) -> mpmath.mpc:
    """Tetrahedron symbol for integer colors via the sign-free rearrangement.

    All four vertex triples must be integer-admissible.  Like the formula it
    implements, the result is the tetrahedron value; divide by
    ``loop_weight(f)`` for the 6j normalization when that is finite.
    """
    n = ctx.n
    pts = _points((a, b, c, d, e, f), n)
    ints = []
    for p in pts:
        if p[1] != 0 or p[0].denominator != 1:
            raise NotAdmissible("sixj_integer needs integer colors")
        ints.append(int(p[0]))
    ia, ib, ic, id_, ie, if_ = ints
    for tri in ((ia, ib, ic), (ic, id_, ie), (ib, id_, if_), (ia, if_, ie)):
        if not admissible_integer_triple(*tri, n):
            raise NotAdmissible(f"triple {tri} is not admissible at n={n}")
    return _value(lambda c_: tet_integer_points(pts, c_), ctx)


def symmetry_residuals(t, ctx: RootContext) -> list:
    """``|tet(t) - tet(sigma(t))|`` for the 23 non-identity rearrangements."""
    pts = _points(t, ctx.n)
    base = solve(lambda c: tet_points(pts, c), ctx)
    out = []
    for pattern in SYMMETRIES[1:]:
        other = rearrange(pts, pattern, ctx.n)
        v = solve(lambda c: tet_points(other, c), ctx)
        with ctx.working():
            out.append(abs(base.value - v.value))
    return out


def k4_tet(colors, reversed_edges, n: int) -> tuple:
    """Points for ``tet`` from a K4 whose edges may oppose the reference.

    ``colors`` are the six edge colors in (a..f) position and
    ``reversed_edges`` flags the edges oriented against
    :data:`REFERENCE_ORIENTATION`; those colors are barred.
    """
    return tuple(pbar(c, n) if r else c for c, r in zip(colors, reversed_edges))


#: vertex triples V1..V4 of the tetrahedron symbol
TET_VERTICES = ((0, 1, 2), (2, 3, 4), (1, 3, 5), (0, 5, 4))

#: tail -> head vertex index (0-based into TET_VERTICES) per edge a..f
REFERENCE_ORIENTATION = ((3, 0), (2, 0), (0, 1), (2, 1), (1, 3), (3, 2))


def orthogonality_window(a: Point, b: Point, d: Point, e: Point, n: int) -> list:
    """Colors f with ``b + d - f`` and ``f + a - e`` both in ``{0..n-1}``."""
    out = []
    for k in range(n):
        f = pshift(padd(b, d), -k)
        q = _B(a, f, e)
        if q[1] == 0 and q[0].denominator == 1 and 0 <= q[0] <= n - 1:
            out.append(f)
    return out


def orthogonality_sum(a, b, c, d, e, g, ctx: RootContext) -> mpmath.mpc:
    """``sum_f sixj(a,b,c,d,e,f) * sixj(d,b,f,a,e,g)``, which is ``delta_cg``."""
    from .qarith import tracked_sum

    a, b, c, d, e, g = _points((a, b, c, d, e, g), ctx.n)
    fs = orthogonality_window(a, b, d, e, ctx.n)

    def run(cx):
        with cx.working():
            terms = []
            for f in fs:
                s1 = tet_points((a, b, c, d, e, f), cx) * inverse_loop_points(f, cx)
                s2 = tet_points((d, b, f, a, e, g), cx) * inverse_loop_points(g, cx)
                terms.append(s1 * s2)
            return tracked_sum(terms, cx)

    return _value(run, ctx, abs_tol=ctx.target_digits)


def tet_direct_points(t: Sequence[Point], ctx: RootContext) -> Tracked:
    """Tetrahedron symbol by complex products of ``{x}`` (definition route).

    Much slower than :func:`tet_points` and kept as an independent check; the
    result is complex, so its imaginary part measures how real it came out.
    """
    from .qarith import qbinom, qfact

    n = ctx.n
    a, b, c, d, e, f = t
    Bcde = _int_B(_B(c, d, e), n, "c+d-e")
    Babc = _int_B(_B(a, b, c), n, "a+b-c")
    Bbdf = _int_B(_B(b, d, f), n, "b+d-f")
    Bafe = _int_B(_B(a, f, e), n, "a+f-e")
    s, S = max(0, Bcde - Bbdf), min(Bcde, Bafe)
    with ctx.working():
        sign = -1 if (n - 1 + Bafe) % 2 else 1
        pre = sign * qfact(Bcde, ctx) * qfact(Babc, ctx) / (qfact(Bbdf, ctx) * qfact(Bafe, ctx))
        pre *= qbinom(pscale(c, 2), pshift(_A(a, b, c), 1 - n), ctx)
        pre /= qbinom(pscale(c, 2), _B(c, e, d), ctx)
        top1 = pshift(_A(a, f, e), 1)
        Baef, Bbfd, Bdec, Bdfb = _B(a, e, f), _B(b, f, d), _B(d, e, c), _B(d, f, b)
        vals = []
        for z in range(s, S + 1):
            v = qbinom(top1, pshift(pscale(e, 2), z + 1), ctx)
            v *= qbinom(pshift(Baef, z), Baef, ctx)
            v *= qbinom(pshift(padd(Bbfd, _B(c, d, e)), -z), Bbfd, ctx)
            v *= qbinom(pshift(Bdec, z), Bdfb, ctx)
            vals.append(-v if z % 2 else v)
        if not vals:
            return Tracked(mpmath.mpc(0), math.inf)
        total = pairwise_sum(vals)
        big = max(abs(v) for v in vals)
        if not total:
            return Tracked(total, -math.inf)
        loss = max(float(mpmath.log10(big / abs(total))), 0.0) if big else 0.0
        unit = ctx.working_dps - math.log10(40 * n * n)
        return Tracked(pre * total, unit - loss)


def loop_direct_points(f: Point, ctx: RootContext) -> Tracked:
    from .qarith import loop_weight

    with ctx.working():
        return Tracked(loop_weight(f, ctx), ctx.working_dps - math.log10(40 * ctx.n * ctx.n))
