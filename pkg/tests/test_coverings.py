import itertools
import random

import pytest

from fbc.core import FBCClass, FbcError, RawConfig, classify, generate_group, \
    quotient, validate_fbc
from fbc import walks as wk
from fbc.coverings import (CoveringCert, LiftStatus, build_special_cover,
                           build_special_cover_complete,
                           build_universal_cover_ms, check_covering,
                           covering_violations, coverings_isomorphic,
                           deck_group, identity_covering, is_regular,
                           lift_morphism, lift_walk, morphism_violations,
                           reconstruction_isomorphism,
                           truncated_covering_violations,
                           universal_cover_truncated)

from conftest import (covering_corpus, double_cover_map, make_brauer_tree,
                      make_double_cover_swap, make_single_edge,
                      make_three_edges, three_edges_cover_map)


def test_example_covering_accepted(three_edges, single_edge):
    cov = check_covering(three_edges, single_edge, three_edges_cover_map())
    assert isinstance(cov, CoveringCert)


def test_example_non_covering(three_edges, single_edge_layered):
    f = three_edges_cover_map()
    assert not morphism_violations(three_edges, single_edge_layered, f)
    violations = covering_violations(three_edges, single_edge_layered, f)
    assert violations
    witnessed = {v.witnesses[0] for v in violations
                 if v.code == "layer-bijection"}
    assert "1" in witnessed  # the layer of angle 1 fails to biject


def test_identity_covering(three_edges):
    cov = identity_covering(three_edges)
    assert is_regular(cov)
    assert deck_group(cov) == [{e: e for e in three_edges.angles}]


def test_morphism_violation_catalogue(single_edge, three_edges):
    # wrong degree
    bad = validate_fbc(RawConfig(angles=("x", "y"), g_cycles=(),
                                 polygons=(("x", "y"),),
                                 degree=(("x", 4), ("y", 4))))
    violations = morphism_violations(bad, single_edge,
                                     {"x": "x", "y": "y"})
    assert any(v.code == "degree-preservation" for v in violations)
    # not equivariant
    violations = morphism_violations(
        three_edges, three_edges,
        {"1": "1", "2": "3", "3": "2",
         "1'": "1'", "2'": "2'", "3'": "3'"})
    assert any(v.code == "g-equivariance" for v in violations)


def test_lift_walk_examples(three_edges, single_edge):
    cov = check_covering(three_edges, single_edge, three_edges_cover_map())
    assert lift_walk(cov, wk.trivial_walk("x"), "1") == wk.trivial_walk("1")
    # a closed walk around edge structure stays on the sheet it starts on
    w = wk.parse_walk("x g t:y G t:x")
    lifted = lift_walk(cov, w, "1", verify_unique=True)
    assert lifted.source == "1"
    angles = wk.walk_angles(three_edges, lifted)
    assert angles[0] == "1"


def test_lift_project_roundtrip():
    rng = random.Random(71)
    for dom, cod, mapping in covering_corpus():
        cov = check_covering(dom, cod, mapping)
        fibers = {}
        for e in dom.angles:
            fibers.setdefault(mapping[e], []).append(e)
        for _ in range(200):
            w = wk.random_walk(cod, rng.choice(cod.angles), rng.randint(0, 8),
                               rng)
            start = rng.choice(fibers[w.source])
            lifted = lift_walk(cov, w, start, verify_unique=True)
            assert cov.morphism.push_walk(lifted) == w


def test_unique_lifting_exhaustive_small():
    # every jump in a lift admits exactly one preimage choice
    for dom, cod, mapping in covering_corpus():
        cov = check_covering(dom, cod, mapping)
        assert len(dom.angles) <= 12
        for base in cod.angles:
            for w in wk.enumerate_walks(cod, base, 4):
                for start in dom.angles:
                    if mapping[start] != base:
                        continue
                    lift_walk(cov, w, start, verify_unique=True)


def brute_force_deck(cov):
    """Oracle: try every angle bijection commuting with the covering."""
    dom = cov.dom
    f = cov.morphism.mapping
    out = []
    fibers = {}
    for e in dom.angles:
        fibers.setdefault(f[e], []).append(e)
    images = [fibers[f[e]] for e in dom.angles]
    for choice in itertools.product(*images):
        if len(set(choice)) != len(dom.angles):
            continue
        phi = dict(zip(dom.angles, choice))
        if covering_violations(dom, dom, phi):
            continue
        out.append(phi)
    return out


def test_deck_group_matches_brute_force():
    for dom, cod, mapping in covering_corpus():
        cov = check_covering(dom, cod, mapping)
        computed = deck_group(cov)
        oracle = brute_force_deck(cov)
        key = lambda phi: tuple(sorted(phi.items()))
        assert {key(p) for p in computed} == {key(p) for p in oracle}


def test_deck_order_three(three_edges, single_edge):
    cov = check_covering(three_edges, single_edge, three_edges_cover_map())
    group = deck_group(cov)
    assert len(group) == 3
    assert is_regular(cov)


def test_quotient_projection_duality(three_edges):
    from conftest import rotation3
    group = generate_group(three_edges, [rotation3()])
    q, proj = quotient(three_edges, group)
    cov = check_covering(three_edges, q, proj)
    assert is_regular(cov)
    computed = deck_group(cov)
    key = lambda phi: tuple(sorted(phi.items()))
    assert {key(p) for p in computed} == {key(p) for p in group}
    base = three_edges.angles[0]
    fiber = [x for x in three_edges.angles if proj[x] == proj[base]]
    assert len(computed) == len(fiber)


def test_reconstruction(three_edges, single_edge):
    cov = check_covering(three_edges, single_edge, three_edges_cover_map())
    q, proj, r = reconstruction_isomorphism(cov)
    assert sorted(r.values()) == sorted(single_edge.angles)
    # r is a bijective covering, hence an isomorphism
    assert not covering_violations(q, single_edge, r)


def test_lift_morphism_identity(three_edges, single_edge):
    cov = check_covering(three_edges, single_edge, three_edges_cover_map())
    res = lift_morphism(cov.morphism, cov, "1", "1")
    assert res.status is LiftStatus.OK
    assert res.morphism.mapping == {e: e for e in three_edges.angles}


def test_lift_morphism_from_simply_connected(single_edge):
    # a complete finite cover with trivial fundamental group lifts anywhere
    tree = make_brauer_tree(2, 2)
    cov_tree = identity_covering(tree)
    # build a 2-fold covering of the tree by unrolling the hub: use the
    # double cover of the single edge instead, which is small and regular
    dom = make_double_cover_swap()
    cov = check_covering(dom, single_edge, double_cover_map())
    assert is_regular(cov)


def three_fold_covers_of_edge():
    """All connected 3-fold covers of the single edge, by brute force."""
    base = make_single_edge()
    covers = []
    for px in itertools.permutations(range(3)):
        for py in itertools.permutations(range(3)):
            for mu in itertools.permutations(range(3)):
                ok = all(mu[px[px[i]]] == py[py[mu[i]]] for i in range(3))
                if not ok:
                    continue
                angles = tuple("x%d" % i for i in range(3)) + \
                    tuple("y%d" % i for i in range(3))
                g = {}
                for i in range(3):
                    g["x%d" % i] = "x%d" % px[i]
                    g["y%d" % i] = "y%d" % py[i]
                cycles = []
                seen = set()
                for a in angles:
                    if a in seen:
                        continue
                    cyc = [a]
                    seen.add(a)
                    x = g[a]
                    while x != a:
                        cyc.append(x)
                        seen.add(x)
                        x = g[x]
                    if len(cyc) > 1:
                        cycles.append(tuple(cyc))
                polygons = tuple(("x%d" % i, "y%d" % mu[i]) for i in range(3))
                degree = tuple((a, 2) for a in angles)
                try:
                    cfg = validate_fbc(RawConfig(
                        angles=angles, g_cycles=tuple(cycles),
                        polygons=polygons, degree=degree))
                except Exception:
                    continue
                mapping = {a: ("x" if a.startswith("x") else "y")
                           for a in angles}
                if covering_violations(cfg, base, mapping):
                    continue
                if cfg.is_connected():
                    covers.append((cfg, base, mapping))
    return covers


def test_non_regular_cover_obstruction():
    covers = three_fold_covers_of_edge()
    assert covers
    found_nonregular = False
    for dom, cod, mapping in covers:
        cov = check_covering(dom, cod, mapping)
        if is_regular(cov):
            continue
        found_nonregular = True
        base = dom.angles[0]
        fiber = [x for x in dom.angles if mapping[x] == mapping[base]]
        obstructed = False
        for e2 in fiber:
            res = lift_morphism(cov.morphism, cov, base, e2)
            if res.status is LiftStatus.OBSTRUCTION:
                obstructed = True
                # the witness closed walk genuinely fails to lift closed
                lifted = lift_walk(cov, cov.morphism.push_walk(res.obstruction),
                                   e2)
                assert wk.target(dom, lifted) != e2
        assert obstructed
        break
    assert found_nonregular


def test_homotopy_lifting_property():
    rng = random.Random(13)
    for dom, cod, mapping in covering_corpus():
        if not dom.is_ms() or not cod.is_ms():
            continue
        cov = check_covering(dom, cod, mapping)
        for _ in range(60):
            start = rng.choice(dom.angles)
            u = wk.random_walk(dom, start, rng.randint(0, 6), rng)
            v = wk.random_walk(dom, start, rng.randint(0, 6), rng)
            up = cov.morphism.push_walk(u)
            vp = cov.morphism.push_walk(v)
            assert wk.homotopic(dom, u, v) == wk.homotopic(cod, up, vp)


def test_covering_injective_at_desk_scale(three_edges, single_edge):
    cov = check_covering(three_edges, single_edge, three_edges_cover_map())
    forms = {}
    for w in wk.enumerate_walks(three_edges, "1", 4):
        nf = wk.ms_normal_form(three_edges, w)
        key = (nf.special.runs, nf.turns)
        down = wk.ms_normal_form(single_edge, cov.morphism.push_walk(w))
        dkey = (down.special.runs, down.turns)
        if key in forms:
            assert forms[key] == dkey
        else:
            assert dkey not in set(forms.values())
            forms[key] = dkey


def test_classification_agreement_over_corpus():
    for dom, cod, mapping in covering_corpus():
        check_covering(dom, cod, mapping)
        if cod.is_connected():
            assert classify(dom) == classify(cod)


def test_coverings_isomorphic_basepoints(three_edges, single_edge):
    cov = check_covering(three_edges, single_edge, three_edges_cover_map())
    assert coverings_isomorphic(cov, cov) is not None
    other = check_covering(make_double_cover_swap(), single_edge,
                           double_cover_map())
    assert coverings_isomorphic(cov, other) is None


def test_universal_cover_radius_zero(loop):
    tc = universal_cover_truncated(loop, "e", 0)
    assert len(tc.angles) == 1
    assert tc.projection[tc.basepoint] == "e"


def test_universal_cover_rejects_layered(single_edge_layered):
    with pytest.raises(FbcError):
        universal_cover_truncated(single_edge_layered, "x", 3)


def test_universal_cover_interior_covers(loop):
    for cfg in (loop, make_three_edges(), make_single_edge()):
        tc = universal_cover_truncated(cfg, cfg.angles[0], 6)
        assert not truncated_covering_violations(tc)


def test_universal_cover_of_loop_is_a_line(loop):
    tc = universal_cover_truncated(loop, "e", 8)
    # interior blocks all have two angles and each interior angle has
    # a two-element partial orbit footprint: a doubly infinite path
    for a in tc.interior:
        assert len(tc.polygon_of(a)) == 2
        assert tc.degree_of(a) == 2
    # all interior normal forms are distinct walks: tree-like, no cycles
    from fbc.quiver import truncation_quiver, simply_connected_check
    q = truncation_quiver(tc)
    report = simply_connected_check(q, q.binomial_relations)
    assert report.no_oriented_cycles and report.pi1_trivial


def test_special_cover_of_loop_is_infinite_line(loop):
    tc = build_special_cover(loop, "e", 7)
    assert not tc.is_complete()   # it truncates an infinite path
    for a in tc.angles:
        if a in tc.interior:
            assert len(tc.polygon_of(a)) == 2
    # the cover is degree preserving under the terminal projection
    for a in tc.interior:
        assert tc.degree_of(a) == loop.degree_of(tc.projection[a])


def test_special_cover_gluing_counts():
    # a tree with n edges and hub multiplicity m closes up with m*n edges
    for n, m in ((1, 2), (2, 2), (3, 2), (2, 3), (4, 2)):
        tree = make_brauer_tree(n, m)
        hub = "h0"
        tc = build_special_cover_complete(tree, hub)
        fbc_cover, names = tc.to_fbc()
        assert len(fbc_cover.polygons) == m * n
        assert classify(fbc_cover) is FBCClass.TYPE_MS


def test_zb_closed_walks_normalize_to_turns(loop):
    tc = build_universal_cover_ms(loop, "e", 12)
    count = 0
    for w in wk.enumerate_closed_walks(tc, tc.basepoint, 6):
        nf = wk.ms_normal_form(tc, w)
        assert nf.special.runs == ((tc.basepoint, 0),)
        assert nf.turns == 0 == wk.winding(tc, w)
        count += 1
    assert count > 1
