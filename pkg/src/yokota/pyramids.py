"""Built-in colored pyramid graphs and their published reference data.

Colors are ``q n + m eps``; the side colors of the base polygon and the
spoke colors to the apex follow the dihedral angles through
``2 pi a_n / n -> pi - theta``.  Edge orientations are the ones for which
the epsilon parts cancel at every vertex (unique up to reversing all edges).
"""

from __future__ import annotations

from fractions import Fraction

from .graph import Edge, PlaneGraph, validate
from .qarith import ColorSpec


def _c(q, m) -> ColorSpec:
    return ColorSpec(Fraction(q), 0, m)


def pyramid(corners, sides, spokes, orient) -> PlaneGraph:
    """Pyramid over a polygon with ``corners`` listed counterclockwise.

    ``sides[i]`` joins corners i-1 and i, ``spokes[i]`` joins the apex ``P``
    to corner i.  ``orient[name] = (tail, head)`` with vertex ids.
    """
    k = len(corners)
    rot = {}
    for i, v in enumerate(corners):
        nxt, prev = sides[(i + 1) % k][0], sides[i][0]
        rot[v] = (f"{nxt}.{v}", f"{spokes[i][0]}.{v}", f"{prev}.{v}")
    rot["P"] = tuple(f"{s[0]}.P" for s in spokes)
    edges = []
    for name, color in list(sides) + list(spokes):
        tail, head = orient[name]
        edges.append(Edge(name, f"{name}.{tail}", f"{name}.{head}", color))
    edges.sort(key=lambda e: e.name)
    verts = tuple((v, rot[v]) for v in list(corners) + ["P"])
    return validate(PlaneGraph(verts, tuple(edges)))


_SQUARE_CORNERS = ("UR", "UL", "LL", "LR")
_SQUARE_ORIENT = {
    "a": ("UR", "UL"), "b": ("LR", "UR"), "c": ("LL", "LR"), "d": ("UL", "LL"),
    "e": ("P", "UR"), "f": ("P", "LR"), "g": ("P", "LL"), "h": ("UL", "P"),
}

_PENT_CORNERS = ("ab", "bc", "cd", "de", "ea")
_PENT_ORIENT = {
    "a": ("ea", "ab"), "b": ("ab", "bc"), "c": ("bc", "cd"), "d": ("cd", "de"),
    "e": ("de", "ea"), "p": ("ab", "P"), "q": ("bc", "P"), "r": ("cd", "P"),
    "s": ("P", "de"), "t": ("ea", "P"),
}


def square_pyramid(side_q, spoke_q) -> PlaneGraph:
    a, b, c, d = (_c(side_q, m) for m in (3, 9, 4, 1))
    e, f, g, h = (_c(spoke_q, m) for m in (-6, 5, 3, 2))
    # corner UR sits between sides b (from LR) and a (to UL)
    sides = (("b", b), ("a", a), ("d", d), ("c", c))
    spokes = (("e", e), ("h", h), ("g", g), ("f", f))
    return pyramid(_SQUARE_CORNERS, sides, spokes, _SQUARE_ORIENT)


def pentagonal_pyramid(side_q, spoke_q) -> PlaneGraph:
    sides = tuple((k, _c(side_q, m)) for k, m in zip("abcde", (1, 2, 3, 1, 2)))
    spokes = tuple((k, _c(spoke_q, m)) for k, m in zip("pqrst", (-1, -1, 2, 1, 1)))
    return pyramid(_PENT_CORNERS, sides, spokes, _PENT_ORIENT)


def gamma1() -> PlaneGraph:
    return square_pyramid(Fraction(3, 8), Fraction(1, 3))


def gamma2() -> PlaneGraph:
    return square_pyramid(Fraction(1, 3), Fraction(1, 3))


def gamma3() -> PlaneGraph:
    return pentagonal_pyramid(Fraction(1, 3), Fraction(1, 3))


def gamma4() -> PlaneGraph:
    return pentagonal_pyramid(Fraction(2, 5), Fraction(1, 5))


BUILTINS = {"gamma1": gamma1, "gamma2": gamma2, "gamma3": gamma3, "gamma4": gamma4}

#: hyperbolic volumes of the four pyramids
VOLUMES = {"gamma1": "4.01536", "gamma2": "2.53735", "gamma3": "3.59919", "gamma4": "2.49338"}

#: published growth estimates at eps = 1e-30
GROWTH_REFERENCE = {
    "gamma1": {24: "3.440461579", 48: "3.653711604", 72: "3.741389781",
               120: "3.824412968", 240: "3.900858767"},
    "gamma2": {24: "2.597867632", 48: "2.603012089", 72: "2.594717180",
               120: "2.581960275", 240: "2.566522540"},
    "gamma3": {12: "3.4615752171", 24: "3.6087612014", 60: "3.6418032698"},
    "gamma4": {10: "2.5883206638", 20: "2.7020205533", 60: "2.6486057922"},
}


def builtin(name: str) -> PlaneGraph:
    try:
        return BUILTINS[name.lower()]()
    except KeyError:
        raise KeyError(f"unknown builtin graph {name!r}; choose from {', '.join(BUILTINS)}") from None


def square_colors(name: str) -> tuple:
    """(a..h) of a square pyramid in the closed-form oracle's order."""
    g = builtin(name)
    return tuple(g.edge_by_name[k].color for k in "abcdefgh")


def pentagonal_colors(name: str) -> tuple:
    g = builtin(name)
    return tuple(g.edge_by_name[k].color for k in "abcdepqrst")
