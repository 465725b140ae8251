import random

import pytest

from fbc.core import FbcError, RawConfig, validate_fbc
from fbc import walks as wk
from fbc.walks import (BWD, FWD, Homotopy, InvalidWalk, SpecialWalk, Walk,
                       compose, enumerate_closed_walks, enumerate_walks,
                       homotopic, homotopy_moves, invert, is_special,
                       ms_normal_form, oracle_homotopic, parse_walk,
                       random_walk, target, tau_step, trivial_walk, winding)

from conftest import (make_loop, make_loop_pendant, make_single_edge,
                      make_three_edges)


def test_parse_and_text_roundtrip():
    w = parse_walk("e g g t:e' G")
    assert w.source == "e"
    assert w.text() == "e g g t:e' G"
    with pytest.raises(InvalidWalk):
        parse_walk("")
    with pytest.raises(InvalidWalk):
        parse_walk("e q")


def test_compose_and_invert(loop):
    w = parse_walk("e g t:e g")
    t = trivial_walk("e")
    assert compose(loop, w, t) == w
    assert invert(loop, invert(loop, w)) == w
    cancel = compose(loop, invert(loop, w), w)
    assert homotopic(loop, cancel, trivial_walk("e")) is Homotopy.YES
    with pytest.raises(InvalidWalk):
        compose(loop, w, w)  # endpoints do not chain


def test_walk_validity(loop):
    assert wk.is_valid_walk(loop, parse_walk("e t:e'"))
    assert not wk.is_valid_walk(loop, parse_walk("e t:zzz"))


def test_winding_basics():
    loop2 = make_loop(2)  # degree 4
    for n in range(-2, 3):
        w = wk.g_run(loop2, "e", 4 * n)
        assert winding(loop2, w) == n
    u = parse_walk("e g t:e")
    v = parse_walk("e g g G t:e'")
    uv = compose(loop2, v, u) if target(loop2, u) == v.source else None
    assert winding(loop2, u) + winding(loop2, invert(loop2, u)) == 0


def test_winding_additive(loop):
    rng = random.Random(5)
    for _ in range(50):
        u = random_walk(loop, "e", rng.randint(0, 6), rng)
        v = random_walk(loop, target(loop, u), rng.randint(0, 6), rng)
        assert winding(loop, compose(loop, v, u)) == \
            winding(loop, u) + winding(loop, v)


def test_winding_requires_singleton_layers(single_edge_layered):
    with pytest.raises(FbcError):
        winding(single_edge_layered, trivial_walk("x"))


def test_moves_preserve_endpoints_winding_and_class():
    rng = random.Random(11)
    for cfg in (make_loop(1), make_loop(2), make_three_edges(),
                make_loop_pendant()):
        base = cfg.angles[0]
        for _ in range(40):
            w = random_walk(cfg, base, rng.randint(0, 7), rng)
            nf = ms_normal_form(cfg, w)
            for moved in homotopy_moves(cfg, w):
                assert moved.source == w.source
                assert target(cfg, moved) == target(cfg, w)
                assert winding(cfg, moved) == winding(cfg, w)
                assert ms_normal_form(cfg, moved) == nf


def test_normal_form_examples(loop):
    # full turns at the base normalize to pure turn counts
    for n in (0, 1, 2, -1):
        w = wk.g_run(loop, "e", 2 * n)
        nf = ms_normal_form(loop, w)
        assert nf.turns == n
        assert nf.special.runs == (("e", 0),)
    # a single step stays special
    nf = ms_normal_form(loop, parse_walk("e g"))
    assert nf == wk.MsNormalForm(SpecialWalk((("e", 1),)), 0)


def test_normal_form_special_and_idempotent():
    rng = random.Random(23)
    for cfg in (make_loop(1), make_loop(3), make_three_edges(),
                make_loop_pendant()):
        for _ in range(40):
            w = random_walk(cfg, cfg.angles[0], rng.randint(0, 8), rng)
            nf = ms_normal_form(cfg, w)
            assert is_special(cfg, nf.special)
            rep = nf.representative(cfg)
            assert target(cfg, rep) == target(cfg, w)
            assert ms_normal_form(cfg, rep) == nf
            # the turn count is the winding minus the special contribution
            assert winding(cfg, w) == nf.turns + winding(
                cfg, nf.special.to_walk(cfg))


def test_homotopic_h1_insertion(loop):
    w = parse_walk("e g t:e")
    padded = Walk("e", (FWD, BWD) + w.steps)
    assert homotopic(loop, w, padded) is Homotopy.YES


def test_homotopic_turn_slide(three_edges):
    # jump after a full turn equals the turn of the polygon mate after a jump
    cfg = three_edges
    e, h = "1", "1'"
    lhs = Walk(e, (FWD, FWD, tau_step(cfg.sigma_of(h))))
    rhs = Walk(e, (tau_step(h), FWD, FWD))
    assert homotopic(cfg, lhs, rhs) is Homotopy.YES
    assert oracle_homotopic(cfg, lhs, rhs) is Homotopy.YES


def test_homotopic_distinguishes_turns():
    loop2 = make_loop(2)
    turn = wk.g_run(loop2, "e", 4)
    assert homotopic(loop2, turn, trivial_walk("e")) is Homotopy.NO
    assert winding(loop2, turn) == 1


def test_homotopic_endpoint_mismatch(loop):
    assert homotopic(loop, parse_walk("e g"), trivial_walk("e")) is Homotopy.NO


def test_homotopic_layered_is_bounded(single_edge_layered):
    cfg = single_edge_layered
    u = parse_walk("x t:y")
    v = parse_walk("x g g G G t:y")
    assert homotopic(cfg, u, v) is Homotopy.YES
    # a pair the bounded search cannot join is reported unknown, not denied
    far = Walk("x", (FWD,) * 2 + (tau_step("y"),))
    res = homotopic(cfg, u, far, budget=1, max_len=3)
    assert res in (Homotopy.UNKNOWN, Homotopy.YES)


def test_enumerate_closed_walks_counts():
    # single edge with unit degrees: hand count of the step graph
    cfg = validate_fbc(RawConfig(angles=("x", "y"), g_cycles=(),
                                 polygons=(("x", "y"),),
                                 degree=(("x", 1), ("y", 1))))
    closed0 = list(enumerate_closed_walks(cfg, "x", 0))
    assert closed0 == [trivial_walk("x")]
    closed1 = list(enumerate_closed_walks(cfg, "x", 1))
    # trivial, g, G, t:x  (t:y ends elsewhere)
    assert len(closed1) == 4
    counts = [len(list(enumerate_closed_walks(cfg, "x", n))) for n in range(4)]
    assert counts == sorted(counts)


def test_enumeration_is_shortlex(loop):
    def rank(step):
        if step == FWD:
            return (0,)
        if step == BWD:
            return (1,)
        return (2, loop.sort_key(wk.tau_target(step)))

    walks = list(enumerate_walks(loop, "e", 2))
    keys = [(len(w.steps), tuple(rank(s) for s in w.steps)) for w in walks]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)


def test_normal_forms_match_oracle_closures():
    """Walks with equal normal forms are joined by the bounded rewriting."""
    for cfg, max_len in ((make_loop(1), 4), (make_single_edge(), 4)):
        base = cfg.angles[0]
        by_class = {}
        for w in enumerate_walks(cfg, base, max_len):
            nf = ms_normal_form(cfg, w)
            by_class.setdefault((nf.special.runs, nf.turns,
                                 target(cfg, w)), []).append(w)
        for members in by_class.values():
            rep = members[0]
            reached, _ = wk.rewrite_closure(cfg, rep, max_len + 2, 30000)
            for other in members[1:]:
                assert (other.source, other.steps) in reached
