"""Shared fixtures: the paper-derived corpus configurations and generators."""

from pathlib import Path

import pytest

from fbc.core import RawConfig, validate_fbc

CORPUS = Path(__file__).resolve().parent.parent / "src" / "fbc" / "corpus"


def make_three_edges():
    return validate_fbc(RawConfig(
        angles=("1", "2", "3", "1'", "2'", "3'"),
        g_cycles=(("1", "2", "3"), ("1'", "2'", "3'")),
        polygons=(("1", "1'"), ("2", "2'"), ("3", "3'")),
        degree=(("1", 2), ("1'", 2))))


def make_single_edge():
    return validate_fbc(RawConfig(
        angles=("x", "y"), g_cycles=(), polygons=(("x", "y"),),
        degree=(("x", 2), ("y", 2))))


def make_single_edge_layered():
    return validate_fbc(RawConfig(
        angles=("x", "y"), g_cycles=(), polygons=(("x", "y"),),
        layers=(("x", "y"),), degree=(("x", 2), ("y", 2))))


def make_loop(multiplicity=1):
    return validate_fbc(RawConfig(
        angles=("e", "e'"), g_cycles=(("e", "e'"),), polygons=(("e", "e'"),),
        degree=(("e", 2 * multiplicity),)))


def make_loop_pendant():
    return validate_fbc(RawConfig(
        angles=("e1", "e1'", "e2", "e2'"), g_cycles=(("e1", "e1'", "e2"),),
        polygons=(("e1", "e1'"), ("e2", "e2'")),
        degree=(("e1", 3), ("e2'", 2))))


def make_triangle():
    return validate_fbc(RawConfig(
        angles=("p", "q", "r"), g_cycles=(), polygons=(("p", "q", "r"),),
        degree=(("p", 1), ("q", 1), ("r", 1))))


def make_brauer_tree(n_edges, multiplicity, shape="star"):
    """A tree of n edges whose hub vertex carries the multiplicity."""
    hub = ["h%d" % i for i in range(n_edges)]
    tips = ["t%d" % i for i in range(n_edges)]
    angles = tuple(x for pair in zip(hub, tips) for x in pair)
    cycles = (tuple(hub),) if n_edges > 1 else ()
    polygons = tuple((hub[i], tips[i]) for i in range(n_edges))
    degree = ((hub[0], n_edges * multiplicity),) + tuple((t, 1) for t in tips)
    return validate_fbc(RawConfig(angles=angles, g_cycles=cycles,
                                  polygons=polygons, degree=degree))


def make_path_graph(n_edges):
    """A path with n edges, all multiplicities 1."""
    angles = []
    cycles = []
    polygons = []
    for i in range(n_edges):
        polygons.append(("l%d" % i, "r%d" % i))
        angles.extend(polygons[-1])
    for i in range(n_edges - 1):
        cycles.append(("r%d" % i, "l%d" % (i + 1)))
    degree = [("l0", 1)]
    for c in cycles:
        degree.append((c[0], 2))
    degree.append(("r%d" % (n_edges - 1), 1))
    return validate_fbc(RawConfig(
        angles=tuple(angles), g_cycles=tuple(cycles),
        polygons=tuple(polygons), degree=tuple(degree)))


def make_general_config():
    """A valid configuration that fails the type S compatibility axiom."""
    return validate_fbc(RawConfig(
        angles=("a", "b", "c", "d", "e"),
        g_cycles=(("a", "b"), ("c", "d", "e")),
        polygons=(("a", "b", "d", "e"), ("c",)),
        layers=(("a", "b", "d"), ("c",), ("e",)),
        degree=(("a", 2), ("c", 3))))


def make_double_cover_swap():
    """Connected double cover of the single edge with swapped fibers."""
    return validate_fbc(RawConfig(
        angles=("x1", "x2", "y1", "y2"),
        g_cycles=(("x1", "x2"), ("y1", "y2")),
        polygons=(("x1", "y1"), ("x2", "y2")),
        degree=(("x1", 2), ("y1", 2))))


def double_cover_map():
    return {"x1": "x", "x2": "x", "y1": "y", "y2": "y"}


def three_edges_cover_map():
    return {"1": "x", "2": "x", "3": "x", "1'": "y", "2'": "y", "3'": "y"}


def rotation3():
    return {"1": "2", "2": "3", "3": "1", "1'": "2'", "2'": "3'", "3'": "1'"}


def random_brauer_config(rng, max_angles=10, max_multiplicity=3):
    """A random connected Brauer configuration (always validates)."""
    while True:
        n = rng.randint(2, max_angles)
        names = ["e%d" % i for i in range(n)]
        pool = names[:]
        rng.shuffle(pool)
        orbits = []
        i = 0
        while i < len(pool):
            k = rng.randint(1, len(pool) - i)
            orbits.append(tuple(pool[i:i + k]))
            i += k
        pool2 = names[:]
        rng.shuffle(pool2)
        blocks = []
        i = 0
        while i < len(pool2):
            rest = len(pool2) - i
            if rest < 2:
                break
            if rest in (2, 3):
                k = rest
            else:
                k = rng.randint(2, rest - 2) if rest >= 4 else rest
                if rest - k == 1:
                    k += 1
            blocks.append(tuple(pool2[i:i + k]))
            i += k
        if sum(len(b) for b in blocks) != n:
            continue
        degree = tuple((o[0], len(o) * rng.randint(1, max_multiplicity))
                       for o in orbits)
        cfg = validate_fbc(RawConfig(
            angles=tuple(names),
            g_cycles=tuple(o for o in orbits if len(o) > 1),
            polygons=tuple(blocks), degree=degree))
        if cfg.is_connected():
            return cfg


def covering_corpus():
    """(dom, cod, map) triples that are verified coverings."""
    triples = [
        (make_three_edges(), make_single_edge(), three_edges_cover_map()),
        (make_double_cover_swap(), make_single_edge(), double_cover_map()),
    ]
    return triples


@pytest.fixture
def three_edges():
    return make_three_edges()


@pytest.fixture
def single_edge():
    return make_single_edge()


@pytest.fixture
def single_edge_layered():
    return make_single_edge_layered()


@pytest.fixture
def loop():
    return make_loop()


@pytest.fixture
def loop_pendant():
    return make_loop_pendant()
