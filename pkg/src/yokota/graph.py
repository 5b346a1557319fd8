"""Colored oriented plane graphs given by a rotation system.

A vertex lists its half-edges in counterclockwise order; an edge joins two
half-edges and is oriented from the vertex of its ``tail`` to the vertex of
its ``head``.  Faces come from the usual permutation
``phi(h) = sigma(twin(h))`` with ``sigma`` the counterclockwise successor.

Text format (``parse_graph`` / ``serialize_graph``)::

    vertices
      v1: h1 h2 h3
    edges
      a: h1 -> h4 : 3/8 n + 3 e
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Mapping, Sequence

from .errors import EmptyWindow, MalformedGraph
from .qarith import ColorSpec, parse_color
from .sixj import admissible_vertex


@dataclass(frozen=True)
class Edge:
    name: str
    tail: str
    head: str
    color: ColorSpec

    def reversed(self) -> "Edge":
        return Edge(self.name, self.head, self.tail, self.color.bar())


@dataclass(frozen=True)
class PlaneGraph:
    vertices: tuple  # ((vertex id, (half-edge, ...)), ...)
    edges: tuple  # (Edge, ...)

    # -- lookups -----------------------------------------------------------

    @cached_property
    def rotation(self) -> dict:
        return dict(self.vertices)

    @cached_property
    def edge_by_name(self) -> dict:
        return {e.name: e for e in self.edges}

    @cached_property
    def vertex_of(self) -> dict:
        return {h: v for v, hs in self.vertices for h in hs}

    @cached_property
    def _ends(self) -> dict:
        out = {}
        for e in self.edges:
            out[e.tail] = (e, False)
            out[e.head] = (e, True)
        return out

    def edge_at(self, h: str) -> Edge:
        return self._ends[h][0]

    def twin(self, h: str) -> str:
        e, is_head = self._ends[h]
        return e.tail if is_head else e.head

    def points_in(self, h: str) -> bool:
        """Is the edge at half-edge ``h`` oriented toward h's vertex?"""
        return self._ends[h][1]

    def effective_color(self, h: str) -> ColorSpec:
        e, is_head = self._ends[h]
        return e.color if is_head else e.color.bar()

    def sigma(self, h: str) -> str:
        hs = self.rotation[self.vertex_of[h]]
        return hs[(hs.index(h) + 1) % len(hs)]

    def valence(self, v) -> int:
        return len(self.rotation[v])

    # -- topology ----------------------------------------------------------

    @cached_property
    def faces(self) -> tuple:
        """Face boundaries as half-edge cycles, in a canonical order."""
        seen = set()
        faces = []
        for _, hs in self.vertices:
            for h in hs:
                if h in seen:
                    continue
                cyc = []
                x = h
                while x not in seen:
                    seen.add(x)
                    cyc.append(x)
                    x = self.sigma(self.twin(x))
                faces.append(tuple(cyc))
        return tuple(faces)

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        start = self.vertices[0][0]
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for h in self.rotation[v]:
                w = self.vertex_of[self.twin(h)]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    @property
    def is_trivalent(self) -> bool:
        return all(len(hs) == 3 for _, hs in self.vertices)

    # -- recoloring --------------------------------------------------------

    def with_colors(self, colors: Mapping[str, ColorSpec]) -> "PlaneGraph":
        edges = tuple(replace(e, color=colors[e.name]) if e.name in colors else e
                      for e in self.edges)
        return PlaneGraph(self.vertices, edges)

    def barred(self) -> "PlaneGraph":
        return PlaneGraph(self.vertices, tuple(replace(e, color=e.color.bar()) for e in self.edges))

    def reverse_edge(self, name: str) -> "PlaneGraph":
        """Flip one edge and bar its color, which does not change the invariant."""
        return PlaneGraph(self.vertices, tuple(e.reversed() if e.name == name else e
                                               for e in self.edges))

    def __str__(self):
        return serialize_graph(self)


def validate(g: PlaneGraph, *, min_valence: int = 3) -> PlaneGraph:
    vids = [v for v, _ in g.vertices]
    if len(set(vids)) != len(vids):
        raise MalformedGraph("duplicate vertex id")
    hs = [h for _, hl in g.vertices for h in hl]
    if len(set(hs)) != len(hs):
        raise MalformedGraph("a half-edge appears twice in the rotation system")
    names = [e.name for e in g.edges]
    if len(set(names)) != len(names):
        raise MalformedGraph("duplicate edge name")
    ends = [h for e in g.edges for h in (e.tail, e.head)]
    if len(set(ends)) != len(ends):
        raise MalformedGraph("a half-edge belongs to two edges")
    if set(ends) != set(hs):
        loose = sorted(set(ends) ^ set(hs))
        raise MalformedGraph(f"dangling half-edges: {' '.join(loose)}")
    for v, hl in g.vertices:
        if len(hl) < min_valence:
            raise MalformedGraph(f"vertex {v} has valence {len(hl)} < {min_valence}")
    if not g.is_connected():
        raise MalformedGraph("graph is not connected")
    chi = g.euler_characteristic()
    if chi != 2:
        raise MalformedGraph(f"rotation system is not planar: V - E + F = {chi}")
    return g


def build_graph(description) -> PlaneGraph:
    """Validated :class:`PlaneGraph` from text or a mapping.

    A mapping has ``vertices: {id: [half-edges]}`` and
    ``edges: {name: (tail, head, color)}``; colors may be strings.
    """
    if isinstance(description, PlaneGraph):
        return validate(description)
    if isinstance(description, str):
        return parse_graph(description)
    verts = tuple((str(v), tuple(str(h) for h in hs))
                  for v, hs in description["vertices"].items())
    edges = []
    for name, (tail, head, color) in description["edges"].items():
        if not isinstance(color, ColorSpec):
            color = parse_color(str(color))
        edges.append(Edge(str(name), str(tail), str(head), color))
    return validate(PlaneGraph(verts, tuple(edges)))


def parse_graph(text: str) -> PlaneGraph:
    section = None
    verts, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("vertices", "edges"):
            section = line
            continue
        if ":" not in line:
            raise MalformedGraph(f"line {lineno}: expected 'id: ...'")
        key, rest = (s.strip() for s in line.split(":", 1))
        if section == "vertices":
            verts.append((key, tuple(rest.split())))
        elif section == "edges":
            if ":" not in rest or "->" not in rest:
                raise MalformedGraph(f"line {lineno}: expected 'name: h1 -> h2 : color'")
            ends, color = (s.strip() for s in rest.split(":", 1))
            tail, head = (s.strip() for s in ends.split("->"))
            edges.append(Edge(key, tail, head, parse_color(color)))
        else:
            raise MalformedGraph(f"line {lineno}: content before a section header")
    return validate(PlaneGraph(tuple(verts), tuple(edges)))


def serialize_graph(g: PlaneGraph) -> str:
    lines = ["vertices"]
    lines += [f"  {v}: {' '.join(hs)}" for v, hs in g.vertices]
    lines.append("edges")
    lines += [f"  {e.name}: {e.tail} -> {e.head} : {e.color}" for e in g.edges]
    return "\n".join(lines) + "\n"


def normalize_orientations(g: PlaneGraph, vertex) -> tuple:
    """Colors at ``vertex`` as seen with every edge pointing toward it."""
    return tuple(g.effective_color(h) for h in g.rotation[vertex])


# ---------------------------------------------------------------------------
# admissibility


@dataclass(frozen=True)
class VertexCheck:
    vertex: str
    colors: tuple
    ok: bool


@dataclass(frozen=True)
class AdmissibilityReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list:
        return [c.vertex for c in self.checks if not c.ok]


def check_coloring(g: PlaneGraph, ctx) -> AdmissibilityReport:
    """Admissibility of every trivalent vertex at ``ctx.n`` (or an int n)."""
    n = getattr(ctx, "n", ctx)
    out = []
    for v, hs in g.vertices:
        cols = normalize_orientations(g, v)
        ok = len(cols) == 3 and admissible_vertex(*cols, n)
        out.append(VertexCheck(v, tuple(str(c) for c in cols), ok))
    return AdmissibilityReport(tuple(out))


# ---------------------------------------------------------------------------
# expansion of multivalent vertices


def left_comb(halfedges: Sequence[str], start: str | None = None) -> tuple:
    """Left-comb bracketing of a cyclic half-edge list starting at ``start``."""
    hs = list(halfedges)
    if start is None:
        start = min(hs)
    i = hs.index(start)
    hs = hs[i:] + hs[:i]
    if len(hs) < 3:
        raise MalformedGraph("cannot bracket fewer than three half-edges")
    node = hs[0]
    for h in hs[1:-2]:
        node = (node, h)
    return (node, hs[-2], hs[-1])


def _bracketings(hs: Sequence[str]):
    """All full binary bracketings of a contiguous run of half-edges."""
    if len(hs) == 1:
        yield hs[0]
        return
    for k in range(1, len(hs)):
        for left in _bracketings(hs[:k]):
            for right in _bracketings(hs[k:]):
                yield (left, right)


def tree_shapes(halfedges: Sequence[str]):
    """Every planar bracketing of a cyclic half-edge list, left combs first.

    Left combs come in order of their starting half-edge (smallest first);
    the remaining shapes follow in a fixed order without duplicates.
    """
    hs = list(halfedges)
    k = len(hs)
    seen = set()
    starts = sorted(range(k), key=lambda i: hs[i])
    firsts = [left_comb(hs, hs[i]) for i in starts]
    rest = []
    for i in starts:
        rot = hs[i:] + hs[:i]
        for a in range(1, k - 1):
            for b in range(a + 1, k):
                for x in _bracketings(rot[:a]):
                    for y in _bracketings(rot[a:b]):
                        for z in _bracketings(rot[b:]):
                            rest.append((x, y, z))
    everything = frozenset(hs)
    for shape in firsts + rest:
        # an internal edge is the split of the leaves into a block and its complement
        key = frozenset(frozenset((frozenset(b), everything - frozenset(b))) for b in _blocks(shape))
        if key not in seen:
            seen.add(key)
            yield shape


def _blocks(shape) -> list:
    """Leaf sets of the inner nodes (one per internal edge)."""
    out = []

    def rec(t):
        if isinstance(t, str):
            return [t]
        leaves = rec(t[0]) + rec(t[1])
        out.append(tuple(leaves))
        return leaves

    for s in shape:
        rec(s)
    return out


def default_tree_shape(g: "PlaneGraph", v) -> tuple:
    """Left comb from the smallest half-edge unless it strands an internal
    edge without epsilon part; then the first planar shape that does not.

    An internal edge inherits the summed epsilon coefficients of the legs
    below it, and an unperturbed internal color can hit a pole of its
    weight.  Graphs with no epsilon parts at all keep the left comb.
    """
    hs = g.rotation[v]
    eps = {h: g.effective_color(h).eps_coeff for h in hs}
    first = left_comb(hs)
    if not any(eps.values()):
        return first
    for shape in tree_shapes(hs):
        if all(sum(eps[h] for h in b) for b in _blocks(shape)):
            return shape
    return first


def _leaves(t) -> list:
    if isinstance(t, str):
        return [t]
    return [h for s in t for h in _leaves(s)]


@dataclass(frozen=True)
class InternalEdge:
    """Edge from a new child vertex to its parent; ``legs`` are the child's
    other two half-edges (original or parent ends of deeper internal edges)."""

    name: str
    child: str
    legs: tuple


@dataclass(frozen=True)
class ExpansionPlan:
    graph: PlaneGraph
    internal: tuple = ()
    roots: tuple = ()  # vertex ids that closed a bracketing

    def assignments(self, n: int) -> list:
        """Every admissible coloring of the internal edges.

        Returned as dicts ``{edge name: ColorSpec}`` in canonical order:
        internal edges in creation order, offsets ascending.
        """
        out = []
        g = self.graph
        internal = self.internal

        def color_of(h, chosen):
            e = g.edge_at(h)
            c = chosen.get(e.name, e.color)
            return c if g.points_in(h) else c.bar()

        def rec(i, chosen):
            if i == len(internal):
                for v in self.roots:
                    cols = [color_of(h, chosen) for h in g.rotation[v]]
                    if not admissible_vertex(*cols, n):
                        return
                out.append(dict(chosen))
                return
            ie = internal[i]
            alpha, beta = (color_of(h, chosen) for h in ie.legs)
            for j in range(n):
                chosen[ie.name] = alpha + beta - j
                rec(i + 1, chosen)
            del chosen[ie.name]

        rec(0, {})
        return out

    def windows(self, n: int) -> dict:
        """Per internal edge, the set of colors it takes over all assignments."""
        win = {ie.name: [] for ie in self.internal}
        for a in self.assignments(n):
            for k, c in a.items():
                if c not in win[k]:
                    win[k].append(c)
        return win


def expand_vertex(g: PlaneGraph, v, tree_shape=None, *, n: int | None = None) -> ExpansionPlan:
    """Replace a multivalent vertex by a tree of trivalent vertices.

    ``tree_shape`` brackets the counterclockwise half-edge order (default: left
    comb from the smallest half-edge id).  Pairs become new vertices joined to
    their parent by new edges ``<v>.x1, <v>.x2, ...`` oriented child to parent
    in post-order.  With ``n`` given an empty window raises EmptyWindow.
    """
    return expand_vertices(g, {v: tree_shape}, n=n)


def expand_vertices(g: PlaneGraph, shapes: Mapping | None = None, *,
                    n: int | None = None) -> ExpansionPlan:
    """Expand every vertex of valence >= 4 (or just those in ``shapes``)."""
    shapes = dict(shapes) if shapes is not None else {
        v: None for v, hs in g.vertices if len(hs) > 3}
    verts = list(g.vertices)
    edges = list(g.edges)
    internal, roots = [], []
    for v, shape in shapes.items():
        hs = g.rotation[v]
        if len(hs) == 3:
            continue
        shape = default_tree_shape(g, v) if shape is None else shape
        _check_shape(shape, hs, v)
        new_verts, new_edges, new_internal = _expand_one(v, shape)
        idx = [i for i, (w, _) in enumerate(verts) if w == v][0]
        verts[idx:idx + 1] = new_verts
        edges += new_edges
        internal += new_internal
        roots.append(v)
    plan = ExpansionPlan(validate(PlaneGraph(tuple(verts), tuple(edges))), tuple(internal), tuple(roots))
    if n is not None and not plan.assignments(n):
        raise EmptyWindow(f"no admissible internal coloring at n={n}")
    return plan


def _check_shape(shape, hs, v):
    if not (isinstance(shape, tuple) and len(shape) == 3):
        raise MalformedGraph("tree shape must be a triple at the top level")
    leaves = _leaves(shape)
    if sorted(leaves) != sorted(hs):
        raise MalformedGraph(f"tree shape does not use exactly the half-edges of {v}")
    k = hs.index(leaves[0])
    if list(hs[k:]) + list(hs[:k]) != leaves:
        raise MalformedGraph("tree shape does not follow the cyclic order (not planar)")

    def pairs_ok(t):
        if isinstance(t, str):
            return True
        return len(t) == 2 and all(pairs_ok(s) for s in t)

    if not all(pairs_ok(s) for s in shape):
        raise MalformedGraph("inner tree nodes must be pairs")


def _expand_one(v, shape):
    verts, edges, internal = [], [], []
    counter = itertools.count(1)

    def build(node):
        """Return the half-edge that carries ``node`` into its parent."""
        if isinstance(node, str):
            return node
        left, right = (build(s) for s in node)
        k = next(counter)
        name = f"{v}.x{k}"
        child = f"{v}.{k}"
        lo, hi = f"{name}.c", f"{name}.p"
        verts.append((child, (left, right, lo)))
        edges.append(Edge(name, lo, hi, ColorSpec()))
        internal.append(InternalEdge(name, child, (left, right)))
        return hi

    top = tuple(build(s) for s in shape)
    verts.append((v, top))
    return verts, edges, internal
