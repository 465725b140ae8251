import random

import pytest

from fbc.core import FbcError, RawConfig, validate_fbc
from fbc import groups, walks as wk
from fbc.quiver import (Arrow, QuiverWithRelations, emit_dot, pi1_quiver,
                        quiver_covering_violations, quiver_map_of,
                        quiver_of, quiver_walk_word, reduce_presentation,
                        simply_connected_check, truncation_quiver,
                        walk_to_quiver_walk)

from conftest import (make_single_edge, make_three_edges,
                      random_brauer_config, three_edges_cover_map)


def single_orbit_edge():
    # one edge whose two angles form a single orbit of degree 2
    return validate_fbc(RawConfig(angles=("x", "y"), g_cycles=(("x", "y"),),
                                  polygons=(("x", "y"),), degree=(("x", 2),)))


def test_quiver_single_orbit_edge():
    q = quiver_of(single_orbit_edge())
    assert q.vertices == ("P[x]",)
    assert [a.name for a in q.arrows] == ["L[x]", "L[y]"]
    # hand enumeration: the squares are zero, the alternating cubes are zero
    assert set(q.zero_relations) == {
        ("L[x]", "L[x]"), ("L[y]", "L[y]"),
        ("L[x]", "L[y]", "L[x]"), ("L[y]", "L[x]", "L[y]")}
    assert q.binomial_relations == ((("L[x]", "L[y]"), ("L[y]", "L[x]")),)


def test_quiver_unit_degree_all_length_two_zero():
    cfg = validate_fbc(RawConfig(angles=("a", "b"), g_cycles=(),
                                 polygons=(("a", "b"),),
                                 degree=(("a", 1), ("b", 1))))
    q = quiver_of(cfg)
    composable = [(u.name, v.name) for u in q.arrows for v in q.arrows
                  if u.target == v.source]
    for pair in composable:
        assert pair in q.zero_relations
    assert all(len(p) == 2 for p in q.zero_relations)


def test_binomial_pairs_exist_iff_shared_polygon():
    q = quiver_of(make_single_edge())
    assert q.binomial_relations  # x and y share the polygon
    lonely = validate_fbc(RawConfig(angles=("a",), g_cycles=(),
                                    polygons=(("a",),), degree=(("a", 1),)))
    assert not quiver_of(lonely).binomial_relations


def test_binomial_pairs_are_parallel():
    rng = random.Random(2)
    for _ in range(6):
        cfg = random_brauer_config(rng, max_angles=8)
        q = quiver_of(cfg)
        for u, v in q.binomial_relations:
            assert q.path_endpoints(u) == q.path_endpoints(v)


def test_walk_to_quiver_walk(loop_pendant):
    cfg = loop_pendant
    assert walk_to_quiver_walk(cfg, wk.trivial_walk("e1")) == ()
    pure_tau = wk.Walk("e1", (wk.tau_step("e1'"),))
    assert walk_to_quiver_walk(cfg, pure_tau) == ()
    one = wk.Walk("e1", (wk.FWD,))
    assert walk_to_quiver_walk(cfg, one) == (("L[e1]", 1),)
    back = wk.Walk("e1'", (wk.BWD,))
    assert walk_to_quiver_walk(cfg, back) == (("L[e1]", -1),)


def test_pi1_tree_quiver_trivial():
    arrows = (Arrow("a", "v0", "v1"), Arrow("b", "v1", "v2"))
    q = QuiverWithRelations(("v0", "v1", "v2"), arrows, (("a", "b"),), ())
    pres = pi1_quiver(q, (), "v0")
    assert not pres.generators


def test_pi1_two_loop_bridge_quiver():
    # loops x at p, y at q, bridge z; the pair (z x^m, y^n z) collapses to
    # x^m = y^n after killing the tree arrow z
    m, n = 3, 2
    arrows = (Arrow("x", "p", "p"), Arrow("y", "q", "q"), Arrow("z", "p", "q"))
    u = ("x",) * m + ("z",)
    v = ("z",) + ("y",) * n
    q = QuiverWithRelations(("p", "q"), arrows, (), ((u, v),))
    pres = pi1_quiver(q, q.binomial_relations, "p")
    assert set(pres.generators) == {"x", "y"}
    assert pres.relators == (groups.word_mul(
        groups.word_pow(groups.letter("x"), m),
        groups.word_pow(groups.letter("y"), -n)),)


def test_pi1_quiver_base_independent(three_edges):
    q = quiver_of(three_edges)
    invs = {groups.abelianize(pi1_quiver(q, q.binomial_relations, v))
            for v in q.vertices}
    assert len(invs) == 1


def test_pi1_quiver_rejects_disconnected():
    arrows = (Arrow("a", "v0", "v0"),)
    q = QuiverWithRelations(("v0", "v1"), arrows, (), ())
    with pytest.raises(FbcError):
        pi1_quiver(q, (), "v0")


def test_reduce_drops_tree_tip_arrows():
    # a unit-degree tip arrow equals the long run around its hub and drops
    from conftest import make_brauer_tree
    tree = make_brauer_tree(2, 2)
    reduced, subst = reduce_presentation(tree)
    assert [a.name for a in reduced.arrows] == ["L[h0]", "L[h1]"]
    assert subst["L[t0]"] == ("L[h0]", "L[h1]", "L[h0]", "L[h1]")
    # parallel unit-degree arrows with equal turn complements merely merge
    tri = validate_fbc(RawConfig(angles=("p", "q", "r"), g_cycles=(),
                                 polygons=(("p", "q", "r"),),
                                 degree=(("p", 1), ("q", 1), ("r", 1))))
    reduced_tri, subst_tri = reduce_presentation(tri)
    assert [a.name for a in reduced_tri.arrows] == ["L[p]"]
    assert subst_tri["L[q]"] == ("L[p]",)


def test_reduce_matches_positive_degree_description():
    rng = random.Random(4)
    for _ in range(6):
        cfg = random_brauer_config(rng, max_angles=8, max_multiplicity=2)
        if any(cfg.degree_of(e) == 1 for e in cfg.angles):
            continue
        reduced, _ = reduce_presentation(cfg)
        # no run of length >= 2 can equal an arrow when all degrees exceed
        # its length budget, so every arrow survives
        assert len(reduced.arrows) == len(quiver_of(cfg).arrows)


def test_reduce_idempotent_on_invariants(three_edges):
    reduced, subst = reduce_presentation(three_edges)
    p1 = pi1_quiver(reduced, reduced.binomial_relations, reduced.vertices[0])
    full = quiver_of(three_edges)
    p2 = pi1_quiver(full, full.binomial_relations, full.vertices[0])
    assert groups.abelianize(p1) == groups.abelianize(p2)


def test_reduce_rejects_general_configuration():
    from conftest import make_general_config
    from fbc.core import classify, FBCClass
    cfg = make_general_config()
    assert classify(cfg) is FBCClass.GENERAL
    with pytest.raises(FbcError):
        reduce_presentation(cfg)


def test_quiver_covering_from_covering(three_edges, single_edge):
    qmap = quiver_map_of(three_edges_cover_map(), three_edges, single_edge)
    assert not quiver_covering_violations(qmap)


def test_quiver_covering_identity(three_edges):
    qmap = quiver_map_of({e: e for e in three_edges.angles},
                         three_edges, three_edges)
    assert not quiver_covering_violations(qmap)


def test_quiver_non_covering_fails_star_bijection(three_edges,
                                                  single_edge_layered):
    qmap = quiver_map_of(three_edges_cover_map(), three_edges,
                         single_edge_layered)
    violations = quiver_covering_violations(qmap)
    assert any(v.code == "star-bijection" for v in violations)


def test_covering_preserves_binomial_pairs(three_edges, single_edge):
    # the image of each supplied pair is again a supplied pair downstairs
    qmap = quiver_map_of(three_edges_cover_map(), three_edges, single_edge)
    cod_pairs = {frozenset((u, v)) for u, v in qmap.cod.binomial_relations}
    for u, v in qmap.dom.binomial_relations:
        iu = tuple(qmap.arrow_map[a] for a in u)
        iv = tuple(qmap.arrow_map[a] for a in v)
        assert frozenset((iu, iv)) in cod_pairs


def test_simply_connected_linear_quiver():
    arrows = (Arrow("a", "v0", "v1"), Arrow("b", "v1", "v2"))
    q = QuiverWithRelations(("v0", "v1", "v2"), arrows, (("a", "b"),), ())
    report = simply_connected_check(q, ())
    assert report.no_oriented_cycles
    assert report.unique_path_per_arrow
    assert report.pi1_trivial


def test_simply_connected_rejects_loop():
    q = QuiverWithRelations(("v",), (Arrow("a", "v", "v"),), (), ())
    report = simply_connected_check(q, ())
    assert not report.no_oriented_cycles
    assert not report.unique_path_per_arrow


def test_simply_connected_on_cover_interior(loop):
    from fbc.coverings import universal_cover_truncated
    tc = universal_cover_truncated(loop, "e", 8)
    q = truncation_quiver(tc)
    assert len(q.vertices) > 2
    report = simply_connected_check(q, q.binomial_relations)
    assert report.no_oriented_cycles
    assert report.unique_path_per_arrow
    assert report.pi1_trivial


def test_emit_dot_deterministic(three_edges):
    q = quiver_of(three_edges)
    text = emit_dot(q)
    assert text == emit_dot(quiver_of(make_three_edges()))
    assert text.startswith("digraph quiver {")
    empty = QuiverWithRelations((), (), (), ())
    assert emit_dot(empty) == "digraph quiver {\n}\n"
    one_loop = QuiverWithRelations(("v",), (Arrow("a", "v", "v"),), (), ())
    assert '"v" -> "v"' in emit_dot(one_loop)


def test_homotopic_walks_equal_in_presentation(loop_pendant):
    # images of homotopic walks agree in the spanning tree presentation
    cfg = loop_pendant
    q = quiver_of(cfg)
    base_vertex = q.vertices[0]
    rng = random.Random(17)
    pres = pi1_quiver(q, q.binomial_relations, base_vertex)
    checked = 0
    for _ in range(80):
        w = wk.random_walk(cfg, "e1", rng.randint(0, 6), rng)
        if wk.target(cfg, w) != "e1":
            continue
        for moved in wk.homotopy_moves(cfg, w):
            a = quiver_walk_word(q, base_vertex, walk_to_quiver_walk(cfg, w))
            b = quiver_walk_word(q, base_vertex, walk_to_quiver_walk(cfg, moved))
            diff = groups.word_mul(a, groups.word_inverse(b))
            # at least the abelianized image must vanish modulo relators
            pres_with = groups.presentation(
                pres.generators, pres.relators + (diff,))
            assert groups.abelianize(pres_with) == groups.abelianize(pres)
            checked += 1
    assert checked > 50
