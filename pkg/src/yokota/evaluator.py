"""State-sum evaluation of plane graph invariants.

``reduce_plane`` evaluates a connected trivalent plane diagram with the
local relations: bigons are removed (with a Kronecker delta on the through
colors), triangles are contracted to a vertex at the cost of a tetrahedron
symbol, and when neither exists an edge of a smallest face is fused, which
introduces a finite sum of 6j-symbols.  Theta graphs are 1 and tetrahedra
are evaluated directly.

``yokota`` expands multivalent vertices into trivalent trees, sums over the
admissible internal colorings with weights ``[2c+n; 2c+1]^-1`` and, for each
coloring, multiplies the diagram value by the value of the all-barred
diagram.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import mpmath

from .errors import (DivergentSum, EmptyWindow, IrreducibleDiagram, NotAdmissible,
                     PoleError)
from .graph import PlaneGraph, check_coloring, expand_vertices, validate
from .qarith import (ColorSpec, RootContext, Tracked, as_point, padd, pbar,
                     pshift, solve, tracked_sum)
from .sixj import (REFERENCE_ORIENTATION, admissible_vertex, cached_tet,
                   inverse_loop_points, loop_direct_points, loop_points,
                   tet_direct_points)

ONE = Tracked(mpmath.mpf(1), math.inf)
ZERO = Tracked(mpmath.mpf(0), math.inf)


# ---------------------------------------------------------------------------
# twist factors


def _product(a, b, ctx: RootContext):
    """Exact rational part and small epsilon part of ``a * b``."""
    (r1, m1), (r2, m2) = as_point(a, ctx.n), as_point(b, ctx.n)
    eps = ctx.eps
    return r1 * r2, (r1 * m2 + r2 * m1) * eps + m1 * m2 * eps * eps


def _xi_power(r: Fraction, small, ctx: RootContext) -> mpmath.mpc:
    q = r % (2 * ctx.n)
    return mpmath.expjpi((mpmath.mpf(q.numerator) / q.denominator + small) / ctx.n)


def _aabar(a, ctx):
    if isinstance(a, (ColorSpec, tuple, int, Fraction)):
        return _product(a, pbar(as_point(a, ctx.n), ctx.n), ctx)
    a = mpmath.mpc(a)
    return Fraction(0), a * (ctx.n - 1 - a)


def twist_pos(a, ctx: RootContext) -> mpmath.mpc:
    """Removing a positive curl on an edge colored ``a``: ``xi^(-2 a abar)``."""
    with ctx.working():
        r, s = _aabar(a, ctx)
        return _xi_power(-2 * r, -2 * s, ctx)


def twist_neg(a, ctx: RootContext) -> mpmath.mpc:
    with ctx.working():
        r, s = _aabar(a, ctx)
        return _xi_power(2 * r, 2 * s, ctx)


def vertex_twist(a, b, c, ctx: RootContext, inverse: bool = False) -> mpmath.mpc:
    """``xi^(a abar + b bbar - c cbar)``; ``inverse`` gives the mirror move."""
    with ctx.working():
        parts = [_aabar(x, ctx) for x in (a, b, c)]
        r = parts[0][0] + parts[1][0] - parts[2][0]
        s = parts[0][1] + parts[1][1] - parts[2][1]
        if inverse:
            r, s = -r, -s
        return _xi_power(r, s, ctx)


# ---------------------------------------------------------------------------
# evaluation engines


class Engine:
    """Tetrahedron symbols and loop weights for one context.

    ``route="table"`` uses the cached real prefix-product formulas;
    ``route="direct"`` evaluates every symbol from complex exponentials and
    records the largest relative imaginary part it meets.
    """

    def __init__(self, ctx: RootContext, route: str = "table"):
        if route not in ("table", "direct"):
            raise ValueError(f"unknown route {route!r}")
        self.ctx = ctx
        self.route = route
        self.max_rel_imag = 0.0
        self._direct = {}

    def tet(self, pts) -> Tracked:
        if self.route == "table":
            return cached_tet(pts, self.ctx)
        hit = self._direct.get(pts)
        if hit is None:
            hit = self._direct[pts] = tet_direct_points(pts, self.ctx)
        return hit

    def inv_loop(self, p) -> Tracked:
        if self.route == "table":
            return inverse_loop_points(p, self.ctx)
        w = loop_direct_points(p, self.ctx)
        if abs(w.value) < mpmath.mpf(10) ** (-self.ctx.working_dps + 10):
            raise PoleError(f"loop weight of color {p[0]} vanishes; perturb by epsilon")
        return Tracked(1 / w.value, w.digits)

    def loop(self, p) -> Tracked:
        if self.route == "table":
            return loop_points(p, self.ctx)
        return loop_direct_points(p, self.ctx)

    def note(self, value):
        if self.route == "direct" and value:
            v = mpmath.mpc(value)
            rel = float(abs(v.imag) / abs(v))
            self.max_rel_imag = max(self.max_rel_imag, rel)


def k4_points(edges, order, n: int) -> tuple:
    """Tetrahedron arguments of a K4 given as ``(tail, head, color)`` triples.

    ``order`` assigns the four vertex labels to the symbol's vertices
    (a, b, c), (c, d, e), (b, d, f), (a, f, e).  Any order gives the same
    value; colors of edges running against the reference orientation are
    barred.
    """
    idx = {v: i for i, v in enumerate(order)}
    by_pair = {}
    for tail, head, col in edges:
        key = frozenset((idx[tail], idx[head]))
        if key in by_pair or len(key) != 2:
            raise IrreducibleDiagram("not a tetrahedron")
        by_pair[key] = (idx[tail], idx[head], col)
    out = []
    for ti, hi in REFERENCE_ORIENTATION:
        i, j, col = by_pair[frozenset((ti, hi))]
        out.append(col if (i, j) == (ti, hi) else pbar(col, n))
    return tuple(out)


# ---------------------------------------------------------------------------
# mutable diagrams used during reduction


class Diagram:
    """A trivalent rotation system with lattice-point colors at fixed n."""

    __slots__ = ("n", "rot", "edges", "where", "at", "fresh")

    def __init__(self, n):
        self.n = n
        self.rot = {}  # vertex -> list of half-edges, counterclockwise
        self.edges = {}  # edge id -> [tail, head, color]
        self.where = {}  # half-edge -> (edge id, is_head)
        self.at = {}  # half-edge -> vertex
        self.fresh = 0

    @classmethod
    def from_graph(cls, g: PlaneGraph, n: int) -> "Diagram":
        d = cls(n)
        for v, hs in g.vertices:
            d.rot[v] = list(hs)
            for h in hs:
                d.at[h] = v
        for e in g.edges:
            d.edges[e.name] = [e.tail, e.head, e.color.point(n)]
            d.where[e.tail] = (e.name, False)
            d.where[e.head] = (e.name, True)
        return d

    def copy(self) -> "Diagram":
        d = Diagram(self.n)
        d.rot = {v: list(hs) for v, hs in self.rot.items()}
        d.edges = {k: list(v) for k, v in self.edges.items()}
        d.where = dict(self.where)
        d.at = dict(self.at)
        d.fresh = self.fresh
        return d

    def new_id(self, tag: str) -> str:
        self.fresh += 1
        return f"~{tag}{self.fresh}"

    def twin(self, h):
        eid, is_head = self.where[h]
        e = self.edges[eid]
        return e[0] if is_head else e[1]

    def eff(self, h):
        """Color of h's edge seen pointing toward h's vertex."""
        eid, is_head = self.where[h]
        col = self.edges[eid][2]
        return col if is_head else pbar(col, self.n)

    def oriented(self, h, other_label, own_label):
        """(tail, head, color) of h's edge with its far end relabeled."""
        eid, is_head = self.where[h]
        col = self.edges[eid][2]
        return (other_label, own_label, col) if is_head else (own_label, other_label, col)

    def sigma(self, h):
        hs = self.rot[self.at[h]]
        return hs[(hs.index(h) + 1) % len(hs)]

    def faces(self):
        seen = set()
        out = []
        for v in self.rot:
            for h in self.rot[v]:
                if h in seen:
                    continue
                cyc = []
                x = h
                while x not in seen:
                    seen.add(x)
                    cyc.append(x)
                    x = self.sigma(self.twin(x))
                out.append(cyc)
        return out

    def remove_vertex(self, v):
        for h in self.rot.pop(v):
            del self.at[h]

    def remove_edge(self, eid):
        t, h, _ = self.edges.pop(eid)
        del self.where[t]
        del self.where[h]

    def add_edge(self, eid, tail, head, col):
        self.edges[eid] = [tail, head, col]
        self.where[tail] = (eid, False)
        self.where[head] = (eid, True)

    def check_vertex(self, v):
        cols = [self.eff(h) for h in self.rot[v]]
        if not admissible_vertex(*cols, self.n):
            raise NotAdmissible(f"vertex {v} is not admissible: {cols}")

    def as_k4(self):
        vs = list(self.rot)
        if len(vs) != 4 or len(self.edges) != 6:
            return None
        pairs = set()
        for t, h, _ in self.edges.values():
            p = frozenset((self.at[t], self.at[h]))
            if len(p) != 2 or p in pairs:
                return None
            pairs.add(p)
        return [(self.at[t], self.at[h], c) for t, h, c in self.edges.values()], vs


@dataclass(frozen=True)
class Strategy:
    """Reduction choices.  ``fuse`` forces that many fusions before any
    shortcut; ``reverse`` scans faces in reverse canonical order.  With
    ``same_edge`` every forced fusion after the first acts on the edge the
    previous one created."""

    fuse: int = 0
    reverse: bool = False
    same_edge: bool = False
    focus: str | None = None

    def step(self, created: str | None = None) -> "Strategy":
        return Strategy(max(self.fuse - 1, 0), self.reverse, self.same_edge,
                        created if self.same_edge else None)


DEFAULT = Strategy()


def _fusion_color_eps(d: Diagram, h) -> int:
    u, hv = d.at[h], d.twin(h)
    ru, rv = d.rot[u], d.rot[d.at[hv]]
    x1 = ru[(ru.index(h) + 1) % 3]
    y2 = rv[(rv.index(hv) + 2) % 3]
    return d.eff(x1)[1] + d.eff(y2)[1]


def _reduce(d: Diagram, eng: Engine, st: Strategy = DEFAULT) -> Tracked:
    n = d.n
    if len(d.rot) == 2:
        u, v = d.rot
        if all(d.at[d.twin(h)] == v for h in d.rot[u]):
            d.check_vertex(u)
            d.check_vertex(v)
            return ONE
        raise IrreducibleDiagram("two-vertex diagram that is not a theta graph")
    k4 = d.as_k4()
    if k4 is not None and not st.fuse:
        edges, order = k4
        for v in order:
            d.check_vertex(v)
        return eng.tet(k4_points(edges, order, n))

    faces = d.faces()
    if st.reverse:
        faces.reverse()
    if not st.fuse:
        for f in faces:
            if len(f) == 2 and d.at[f[0]] != d.at[f[1]]:
                return _bigon(d, f, eng, st)
        for f in faces:
            if len(f) == 3 and len({d.at[h] for h in f}) == 3:
                res = _triangle(d, f, eng, st)
                if res is not None:
                    return res
    if st.fuse and st.focus in d.edges:
        return _fusion(d, d.edges[st.focus][0], eng, st)
    cands = [h for f in sorted((f for f in faces if len(f) >= 2), key=len)
             for h in f if d.at[h] != d.at[d.twin(h)]]
    if not cands:
        raise IrreducibleDiagram("no reducible face found")
    # an unperturbed fused color would put a pole into the sum; avoid it if possible
    good = [h for h in cands if _fusion_color_eps(d, h)]
    return _fusion(d, (good or cands)[0], eng, st)


# stand-ins for new vertices in a local tetrahedron; never equal to a vertex id
_NEW_P, _NEW_Q = object(), object()


def _bigon(d: Diagram, face, eng: Engine, st: Strategy) -> Tracked:
    h0, h1 = face
    u, v = d.at[h0], d.at[h1]
    d.check_vertex(u)
    d.check_vertex(v)
    x = [h for h in d.rot[u] if h != h0 and h != d.twin(h1)][0]
    y = [h for h in d.rot[v] if h != h1 and h != d.twin(h0)][0]
    xu, yv = d.eff(x), d.eff(y)
    if xu != pbar(yv, d.n):
        return ZERO
    xfar, yfar = d.twin(x), d.twin(y)
    nd = d.copy()
    for h in (h0, h1, x, y):
        eid = nd.where[h][0]
        if eid in nd.edges:
            nd.remove_edge(eid)
    nd.remove_vertex(u)
    nd.remove_vertex(v)
    nd.add_edge(nd.new_id("m"), xfar, yfar, xu)
    rest = _reduce(nd, eng, st)
    return rest * eng.loop(xu)


def _triangle(d: Diagram, face, eng: Engine, st: Strategy):
    us = [d.at[h] for h in face]
    legs = []
    for i, h in enumerate(face):
        back = d.twin(face[i - 1])
        legs.append([x for x in d.rot[us[i]] if x != h and x != back][0])
    leg_edges = {d.where[l][0] for l in legs}
    tri_edges = {d.where[h][0] for h in face}
    if len(leg_edges) != 3 or leg_edges & tri_edges:
        return None
    for u in us:
        d.check_vertex(u)
    if not admissible_vertex(*(d.eff(l) for l in legs), d.n):
        # the contracted vertex cannot exist, so the triangle vanishes
        return ZERO
    k4 = []
    for i, h in enumerate(face):
        k4.append(d.oriented(h, us[(i + 1) % 3], us[i]))
    for u, l in zip(us, legs):
        k4.append(d.oriented(l, _NEW_P, u))
    coef = eng.tet(k4_points(k4, us + [_NEW_P], d.n))
    nd = d.copy()
    for eid in tri_edges:
        nd.remove_edge(eid)
    for u in us:
        nd.remove_vertex(u)
    z = nd.new_id("z")
    nd.rot[z] = [legs[0], legs[2], legs[1]]
    for l in legs:
        nd.at[l] = z
    rest = _reduce(nd, eng, st)
    return coef * rest


def _fusion(d: Diagram, h, eng: Engine, st: Strategy) -> Tracked:
    """Fuse the edge at half-edge ``h`` (from u to v)."""
    n = d.n
    u, hv = d.at[h], d.twin(h)
    v = d.at[hv]
    d.check_vertex(u)
    d.check_vertex(v)
    ru, rv = d.rot[u], d.rot[v]
    i, j = ru.index(h), rv.index(hv)
    x1, x2 = ru[(i + 1) % 3], ru[(i + 2) % 3]
    y1, y2 = rv[(j + 1) % 3], rv[(j + 2) % 3]
    eid = d.where[h][0]
    e_tail, e_head, e_col = d.edges[eid]
    e_k4 = (d.at[e_tail], d.at[e_head], e_col)
    legs_k4 = [d.oriented(x1, _NEW_P, u), d.oriented(y2, _NEW_P, v),
               d.oriented(x2, _NEW_Q, u), d.oriented(y1, _NEW_Q, v)]
    top = padd(d.eff(x1), d.eff(y2))
    terms = []
    for k in range(n):
        f = pshift(top, -k)
        if not admissible_vertex(d.eff(x2), d.eff(y1), f, n):
            continue
        k4 = [e_k4] + legs_k4 + [(_NEW_Q, _NEW_P, f)]
        coef = eng.tet(k4_points(k4, [u, v, _NEW_P, _NEW_Q], n)) * eng.inv_loop(f)
        nd = d.copy()
        nd.remove_edge(eid)
        nd.remove_vertex(u)
        nd.remove_vertex(v)
        p, q = nd.new_id("p"), nd.new_id("q")
        fp, fq = f"{p}.f", f"{q}.f"
        nd.rot[p] = [fp, y2, x1]
        nd.rot[q] = [fq, x2, y1]
        for hh, w in ((fp, p), (y2, p), (x1, p), (fq, q), (x2, q), (y1, q)):
            nd.at[hh] = w
        fid = nd.new_id("f")
        nd.add_edge(fid, fp, fq, f)
        terms.append(coef * _reduce(nd, eng, st.step(fid)))
    return tracked_sum(terms, eng.ctx)


def reduce_tracked(g: PlaneGraph, eng: Engine, st: Strategy = DEFAULT) -> Tracked:
    if not g.is_trivalent:
        raise NotAdmissible("reduce_plane needs a trivalent diagram; expand first")
    with eng.ctx.working():
        d = Diagram.from_graph(g, eng.ctx.n)
        res = _reduce(d, eng, st)
        eng.note(res.value)
        return res


def reduce_plane(g: PlaneGraph, ctx: RootContext, *, route: str = "table",
                 strategy: Strategy = DEFAULT) -> mpmath.mpc:
    """Value of a connected trivalent plane diagram.

    A non-default ``strategy`` changes the order of the local moves (forced
    fusions, reversed face scan); the value must not change, which the
    tests use to cross-check the relations.
    """
    res = solve(lambda c: reduce_tracked(g, Engine(c, route), strategy), ctx,
                abs_tol=ctx.target_digits)
    with ctx.working():
        return mpmath.mpc(res.value)


def circle_value(a, ctx: RootContext) -> mpmath.mpc:
    """An isolated circle colored ``a``: ``[2a+n; 2a+1]^-1``."""
    p = as_point(a, ctx.n)
    res = solve(lambda c: inverse_loop_points(p, c), ctx)
    with ctx.working():
        return mpmath.mpc(res.value)


# ---------------------------------------------------------------------------
# the invariant


@dataclass
class InvariantResult:
    value: mpmath.mpc
    factor_plain: mpmath.mpc | None
    factor_barred: mpmath.mpc | None
    n: int
    epsilon: Fraction
    precision: int
    working_dps: int
    digits: float
    log_abs: mpmath.mpf
    phase: mpmath.mpf
    max_rel_imag: float = 0.0
    n_terms: int = 1
    perturbation: dict | None = None

    def growth(self):
        from .volume import growth_estimate

        return growth_estimate(self, self.n)


def auto_perturbation(g: PlaneGraph) -> dict:
    """Epsilon coefficients for every edge forming a circulation.

    Each face gets the weight ``2^i`` (faces in canonical order) and an edge
    gets the difference of the weights on its two sides, so epsilon parts
    cancel at every vertex and distinct face pairs give distinct values.
    """
    face_of = {}
    for i, f in enumerate(g.faces):
        for h in f:
            face_of[h] = i
    out = {}
    for e in g.edges:
        # the face traced by the tail half-edge runs along the edge tail -> head
        out[e.name] = 2 ** face_of[e.head] - 2 ** face_of[e.tail]
    return out


def needs_perturbation(g: PlaneGraph) -> bool:
    return all(e.color.eps_coeff == 0 for e in g.edges)


def apply_perturbation(g: PlaneGraph, eps: Mapping[str, int]) -> PlaneGraph:
    return g.with_colors({e.name: ColorSpec(e.color.n_coeff, e.color.const_off,
                                            e.color.eps_coeff + eps[e.name])
                          for e in g.edges})


def _term(base: PlaneGraph, assignment: dict, eng: Engine):
    """Weight, plain and barred value for one internal coloring."""
    n = eng.ctx.n
    w = ONE
    for c in assignment.values():
        try:
            w = w * eng.inv_loop(c.point(n))
        except PoleError as exc:
            raise DivergentSum(f"summation weight has a pole at color {c}: {exc}") from None
    g = base.with_colors(assignment)
    plain = reduce_tracked(g, eng)
    barred = reduce_tracked(g.barred(), eng)
    return w, plain, barred


def _chunk_worker(args):
    base, chunk, n, eps, precision, dps, target, route = args
    ctx = RootContext(n, eps, precision, working_dps=dps, target_digits=target)
    eng = Engine(ctx, route)
    out = []
    with ctx.working():
        for a in chunk:
            w, p, b = _term(base, a, eng)
            out.append((w * p * b, p, b))
    return out, eng.max_rel_imag


def _split(seq, k):
    size = max(1, math.ceil(len(seq) / k))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def yokota(g: PlaneGraph, ctx: RootContext, *, tree_shapes: Mapping | None = None,
           route: str = "table", workers: int = 1, perturb: str = "auto",
           abs_tol: float | None = None) -> InvariantResult:
    """``<<g>>`` at ``ctx``.

    Multivalent vertices are expanded (``tree_shapes`` maps vertex ids to
    bracketings, default left comb).  The sum over internal colorings is
    accumulated pairwise in canonical order, so the result does not depend
    on ``workers``.  If no edge carries an epsilon part and ``perturb`` is
    ``"auto"``, a circulation of epsilon coefficients is added first and
    reported in ``perturbation``.
    """
    g = validate(g)
    perturbation = None
    if perturb == "auto" and needs_perturbation(g):
        perturbation = auto_perturbation(g)
        g = apply_perturbation(g, perturbation)
    plan = expand_vertices(g, tree_shapes)
    n = ctx.n
    expanded = {v for v in plan.roots}
    for chk in check_coloring(plan.graph, n).checks:
        if chk.vertex in g.rotation and chk.vertex not in expanded and not chk.ok:
            raise NotAdmissible(f"vertex {chk.vertex} is not admissible at n={n}: {chk.colors}")
    assignments = plan.assignments(n)
    if not assignments:
        raise EmptyWindow(f"no admissible internal coloring at n={n}")
    base = plan.graph
    state = {}

    def run(c: RootContext):
        if workers > 1 and len(assignments) > 1:
            jobs = [(base, ch, n, c.epsilon, c.precision, c.working_dps, c.target_digits, route)
                    for ch in _split(assignments, workers * 4)]
            rows, imag = [], 0.0
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for part, im in pool.map(_chunk_worker, jobs):
                    rows += part
                    imag = max(imag, im)
        else:
            eng = Engine(c, route)
            with c.working():
                rows = []
                for a in assignments:
                    w, p, b = _term(base, a, eng)
                    rows.append((w * p * b, p, b))
            imag = eng.max_rel_imag
        with c.working():
            total = tracked_sum([r[0] for r in rows], c)
        state["rows"], state["imag"], state["ctx"] = rows, imag, c
        return total

    res = solve(run, ctx, abs_tol=abs_tol)
    c = state["ctx"]
    with c.working():
        value = mpmath.mpc(res.value)
        plain = barred = None
        if not plan.internal:
            _, p, b = state["rows"][0]
            plain, barred = mpmath.mpc(p.value), mpmath.mpc(b.value)
        if value == 0:
            log_abs, phase = mpmath.mpf("-inf"), mpmath.mpf(0)
        else:
            log_abs, phase = mpmath.log(abs(value)), mpmath.arg(value)
    return InvariantResult(value, plain, barred, n, ctx.epsilon, ctx.precision, c.working_dps,
                           res.digits, log_abs, phase, state["imag"], len(assignments),
                           perturbation)


# ---------------------------------------------------------------------------
# closed forms for pyramids


def _window(top, n):
    return [pshift(top, -j) for j in range(n)]


def _tet_pair(eng: Engine, t) -> Tracked:
    n = eng.ctx.n
    return eng.tet(t) * eng.tet(tuple(pbar(x, n) for x in t))


def square_pyramid_oracle(a, b, c, d, e, f, g, h, ctx: RootContext) -> mpmath.mpc:
    """Closed-form sum for a colored square pyramid.

    ``sum_x [2x+n; 2x+1]^-1 tet(c,f,b,e,a,x) tet(d,g,c,x,a,h)`` times the same
    with every color barred.  Colors of ``x`` that make a factor
    inadmissible are left out; an empty window gives 0.
    """
    n = ctx.n
    a, b, c, d, e, f, g, h = (as_point(x, n) for x in (a, b, c, d, e, f, g, h))

    def run(cx):
        eng = Engine(cx)
        terms = []
        with cx.working():
            for x in _window(padd(f, e), n):
                try:
                    t = eng.inv_loop(x) * _tet_pair(eng, (c, f, b, e, a, x))
                    t = t * _tet_pair(eng, (d, g, c, x, a, h))
                except NotAdmissible:
                    continue
                terms.append(t)
            return tracked_sum(terms, cx) if terms else ZERO

    res = solve(run, ctx, abs_tol=ctx.target_digits)
    with ctx.working():
        return mpmath.mpc(res.value)


def pentagonal_pyramid_oracle(a, b, c, d, e, p, q, r, s, t, ctx: RootContext) -> mpmath.mpc:
    """Closed-form double sum for a colored pentagonal pyramid.

    ``sum_{x,y} w(x)^-1 w(y)^-1 tet(c,q,b,p,a,x) tet(c,x,a,t,e,y)
    tet(d,r,c,y,e,s)`` times the barred factors, ``w(x) = [2x+n; 2x+1]``.
    """
    n = ctx.n
    a, b, c, d, e, p, q, r, s, t = (as_point(z, n) for z in (a, b, c, d, e, p, q, r, s, t))

    def run(cx):
        eng = Engine(cx)
        terms = []
        with cx.working():
            xs = []
            for x in _window(padd(q, p), n):
                try:
                    xs.append((x, eng.inv_loop(x) * _tet_pair(eng, (c, q, b, p, a, x))))
                except NotAdmissible:
                    pass
            for x, tx in xs:
                for y in _window(padd(x, t), n):
                    try:
                        ty = eng.inv_loop(y) * _tet_pair(eng, (d, r, c, y, e, s))
                        terms.append(tx * ty * _tet_pair(eng, (c, x, a, t, e, y)))
                    except NotAdmissible:
                        continue
            return tracked_sum(terms, cx) if terms else ZERO

    res = solve(run, ctx, abs_tol=ctx.target_digits)
    with ctx.working():
        return mpmath.mpc(res.value)
