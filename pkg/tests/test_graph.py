from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import embed, prism
from yokota.errors import EmptyWindow, MalformedGraph
from yokota.graph import (Edge, PlaneGraph, build_graph, check_coloring, default_tree_shape,
                          expand_vertex, expand_vertices, left_comb, normalize_orientations,
                          parse_graph, serialize_graph, tree_shapes, validate)
from yokota.pyramids import BUILTINS, builtin
from yokota.qarith import ColorSpec, parse_color

TETRA = """
vertices
  A: ab.A ad.A ac.A
  B: ab.B bc.B bd.B
  C: ac.C cd.C bc.C
  D: ad.D bd.D cd.D
edges
  ab: ab.A -> ab.B : n/3 + e
  ac: ac.A -> ac.C : n/3 + 3 e
  ad: ad.A -> ad.D : n/3 - 4 e
  bc: bc.B -> bc.C : n/3 + 2 e
  bd: bd.B -> bd.D : n/3 - e
  cd: cd.C -> cd.D : n/3 + 5 e
"""


def test_tetrahedron_euler():
    g = parse_graph(TETRA)
    assert (len(g.vertices), len(g.edges), len(g.faces)) == (4, 6, 4)
    assert g.euler_characteristic() == 2
    assert all(len(f) == 3 for f in g.faces)


def test_square_pyramid_accepted():
    g = builtin("gamma1")
    assert sorted(g.valence(v) for v, _ in g.vertices) == [3, 3, 3, 3, 4]
    assert g.euler_characteristic() == 2


def test_build_from_mapping():
    g = build_graph({
        "vertices": {"u": ["x.u", "y.u", "z.u"], "v": ["x.v", "z.v", "y.v"]},
        "edges": {"x": ("x.u", "x.v", "3"), "y": ("y.u", "y.v", "3"), "z": ("z.u", "z.v", "3")},
    })
    assert len(g.faces) == 3


def test_two_valent_vertex_rejected():
    text = TETRA.replace("  D: ad.D bd.D cd.D", "  D: ad.D bd.D\n  E: cd.D")
    with pytest.raises(MalformedGraph):
        parse_graph(text)


def test_dangling_half_edge_rejected():
    with pytest.raises(MalformedGraph, match="dangling"):
        parse_graph(TETRA.replace("cd: cd.C -> cd.D", "cd: cd.C -> cd.X"))


def test_nonplanar_rotation_rejected():
    with pytest.raises(MalformedGraph, match="planar"):
        parse_graph(TETRA.replace("A: ab.A ad.A ac.A", "A: ab.A ac.A ad.A"))


def test_disconnected_rejected():
    theta = [("x", "u", "v", 3), ("y", "u", "v", 3), ("z", "u", "v", 3)]
    g1 = embed(theta)
    g2 = embed([(f"{n}2", f"{a}2", f"{b}2", c) for n, a, b, c in theta])
    both = PlaneGraph(g1.vertices + g2.vertices, g1.edges + g2.edges)
    with pytest.raises(MalformedGraph):
        validate(both)


def test_malformed_text():
    with pytest.raises(MalformedGraph):
        parse_graph("A: x y z")
    with pytest.raises(MalformedGraph):
        parse_graph("vertices\n  A x y z\n")


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_roundtrip_builtins(name):
    g = builtin(name)
    text = serialize_graph(g)
    g2 = parse_graph(text)
    assert g2 == g
    assert serialize_graph(g2) == text


@given(st.lists(st.tuples(st.fractions(0, 1, max_denominator=9), st.integers(-5, 5),
                          st.integers(-40, 40)), min_size=6, max_size=6))
@settings(max_examples=40, deadline=None)
def test_roundtrip_random_colors(cols):
    g = parse_graph(TETRA)
    g = g.with_colors({e.name: ColorSpec(*c) for e, c in zip(g.edges, cols)})
    assert parse_graph(serialize_graph(g)) == g


def test_normalize_orientations():
    g = parse_graph(TETRA)
    a = parse_color("n/3 + e")
    cols = normalize_orientations(g, "A")
    assert cols[0] == a.bar()  # ab points away from A
    assert normalize_orientations(g, "B")[0] == a


@pytest.mark.parametrize("edge", ["ab", "bc", "cd"])
def test_reversal_keeps_effective_colors(edge):
    g = parse_graph(TETRA)
    h = g.reverse_edge(edge)
    for v, _ in g.vertices:
        assert normalize_orientations(g, v) == normalize_orientations(h, v)
    assert check_coloring(g, 12) == check_coloring(h, 12)


def test_check_coloring_gamma2():
    plan = expand_vertices(builtin("gamma2"))
    g = plan.graph.with_colors(plan.assignments(24)[0])
    rep = check_coloring(g, 24)
    assert rep.ok and not rep.failures


def test_check_coloring_tetrahedron():
    g = parse_graph(TETRA)
    assert check_coloring(g, 12).ok
    low = g.with_colors({e.name: ColorSpec(Fraction(1, 10), 0, e.color.eps_coeff) for e in g.edges})
    rep = check_coloring(low, 20)
    # D has three incoming edges: 2 + 2 + 2 < 19
    assert not rep.ok and "D" in rep.failures


def test_left_comb():
    assert left_comb(["c", "a", "b", "d"]) == ((("a", "b"), "d", "c"))
    assert left_comb(["a", "b", "c", "d", "e"], "c") == ((("c", "d"), "e"), "a", "b")


@pytest.mark.parametrize("k, count", [(4, 2), (5, 5), (6, 14)])
def test_tree_shape_count(k, count):
    hs = [f"h{i}" for i in range(k)]
    shapes = list(tree_shapes(hs))
    assert len(shapes) == count  # triangulations of a k-gon
    assert shapes[0] == left_comb(hs)


def test_expand_square_pyramid():
    g = builtin("gamma1")
    plan = expand_vertex(g, "P", n=24)
    assert len(plan.internal) == 1
    assert plan.graph.is_trivalent and plan.graph.euler_characteristic() == 2
    win = plan.windows(24)["P.x1"]
    assert 0 < len(win) <= 24
    # the epsilon part of the internal color is forced by its legs
    assert len({c.eps_coeff for c in win}) == 1
    for a in plan.assignments(24):
        assert check_coloring(plan.graph.with_colors(a), 24).ok


def test_expand_pentagonal_pyramid():
    plan = expand_vertex(builtin("gamma3"), "P", n=12)
    assert len(plan.internal) == 2
    assert len(plan.graph.vertices) == 8
    assert all(len(w) <= 12 for w in plan.windows(12).values())


def test_expand_trivalent_is_identity():
    g = parse_graph(TETRA)
    plan = expand_vertex(g, "A")
    assert plan.internal == () and plan.graph == g


def test_expand_rejects_bad_shapes():
    g = builtin("gamma2")
    hs = g.rotation["P"]
    with pytest.raises(MalformedGraph):
        expand_vertex(g, "P", ((hs[0], hs[2]), hs[1], hs[3]))
    with pytest.raises(MalformedGraph):
        expand_vertex(g, "P", ((hs[0], hs[1]), hs[2]))


def test_empty_window():
    # a half-integer spoke leaves no integral internal color at the apex
    from yokota.pyramids import _SQUARE_CORNERS, _SQUARE_ORIENT, pyramid

    side, spoke = parse_color("3n/8"), parse_color("n/3")
    sides = (("b", side), ("a", side), ("d", side), ("c", side))
    spokes = (("e", parse_color("n/48")), ("h", spoke), ("g", spoke), ("f", spoke))
    g = pyramid(_SQUARE_CORNERS, sides, spokes, _SQUARE_ORIENT)
    with pytest.raises(EmptyWindow):
        expand_vertex(g, "P", n=24)


def test_default_shape_avoids_unperturbed_internal_edge():
    g = builtin("gamma3")
    shape = default_tree_shape(g, "P")
    plan = expand_vertex(g, "P", shape)
    for a in plan.assignments(12)[:3]:
        assert all(c.eps_coeff for c in a.values())


def test_edge_reversed():
    e = Edge("x", "x.a", "x.b", parse_color("n/3 + 2e"))
    r = e.reversed()
    assert (r.tail, r.head, r.color) == ("x.b", "x.a", parse_color("2n/3 - 1 - 2e"))
    assert r.reversed() == e


def test_prism_helper_is_admissible():
    g = prism(9)
    assert check_coloring(g, 9).ok
