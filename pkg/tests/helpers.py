"""Small plane graphs for the tests, embedded by brute force."""

import itertools
from fractions import Fraction

from yokota.graph import Edge, PlaneGraph
from yokota.qarith import ColorSpec


def cyclic_orders(hs):
    first, rest = hs[0], hs[1:]
    for p in itertools.permutations(rest):
        yield (first,) + p


def _spec(color, n):
    if isinstance(color, ColorSpec):
        return color
    r, m = color if isinstance(color, tuple) else (color, 0)
    r = Fraction(r)
    if r.denominator == 1:
        return ColorSpec(0, int(r), m)
    if n is None:
        raise ValueError("a fractional point needs n")
    return ColorSpec(r / n, 0, m)


def embed(edges, n=None):
    """PlaneGraph from ``[(name, tail, head, color)]`` with a planar rotation.

    Half-edges are ``<name>.t`` and ``<name>.h``.  The first rotation system
    (in a fixed search order) with Euler characteristic 2 is used.  Colors
    may be ColorSpecs, integers or points ``(r, m)``; a fractional ``r``
    becomes ``(r/n) n`` so ``n`` must be given.
    """
    inc = {}
    es = []
    for name, tail, head, color in edges:
        color = _spec(color, n)
        es.append(Edge(name, f"{name}.t", f"{name}.h", color))
        inc.setdefault(tail, []).append(f"{name}.t")
        inc.setdefault(head, []).append(f"{name}.h")
    vids = list(inc)
    for rots in itertools.product(*(list(cyclic_orders(inc[v])) for v in vids)):
        g = PlaneGraph(tuple(zip(vids, rots)), tuple(es))
        if g.is_connected() and g.euler_characteristic() == 2:
            return g
    raise ValueError("no planar embedding")


def k4(t, n=None):
    """Tetrahedron whose value is ``tet(t)``: edge k joins the reference
    vertices of the symbol with the reference orientation."""
    ref = ((3, 0), (2, 0), (0, 1), (2, 1), (1, 3), (3, 2))
    return embed([(name, f"V{i}", f"V{j}", c) for name, (i, j), c in zip("abcdef", ref, t)], n)


def perturbed(g):
    from yokota.evaluator import apply_perturbation, auto_perturbation

    return apply_perturbation(g, auto_perturbation(g))


def prism(n):
    """Triangular prism, all colors n//3 plus an epsilon circulation."""
    k = ColorSpec(Fraction(0), n // 3, 0)
    edges = [("t01", "t0", "t1", k), ("t12", "t1", "t2", k), ("t20", "t2", "t0", k),
             ("b01", "b0", "b1", k), ("b12", "b1", "b2", k), ("b20", "b2", "b0", k)]
    edges += [(f"v{i}", f"b{i}", f"t{i}", k) for i in range(3)]
    return perturbed(embed(edges))


def cube(n):
    """Cube graph, all colors n//3 plus an epsilon circulation."""
    k = ColorSpec(Fraction(0), n // 3, 0)
    edges = []
    for i in range(4):
        j = (i + 1) % 4
        edges += [(f"t{i}{j}", f"t{i}", f"t{j}", k), (f"b{i}{j}", f"b{i}", f"b{j}", k),
                  (f"v{i}", f"b{i}", f"t{i}", k)]
    return perturbed(embed(edges))
