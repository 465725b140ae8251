"""Closed-form fundamental groups of Brauer configurations.

A Brauer configuration here is a configuration with all-singleton layers,
integer turning multiplicity at every vertex, and polygons of at least two
angles.  Its fundamental group is computed two ways and cross-checked: from
the vertex/polygon counts directly, and by splitting every larger polygon
into a chain of two-angle polygons and collapsing a spanning tree of the
resulting graph.  Relators come with explicit walk realizations so the exact
homotopy decision can certify them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import groups, walks as wk
from .core import (FBC, FbcError, RawConfig, Violation, f_degree,
                   sub_intersection, sub_union, validate_fbc)
from .walks import FWD, Walk, tau_step, tau_target


def brauer_violations(cfg):
    violations = []
    if not cfg.is_ms():
        violations.append(Violation(
            "layers", "Brauer configurations have all-singleton layers"))
    for block in cfg.polygons:
        if len(block) < 2:
            violations.append(Violation(
                "polygon-size", "polygons must have at least two angles",
                (block[0],)))
    for v in cfg.vertices:
        if f_degree(cfg, v).denominator != 1:
            violations.append(Violation(
                "multiplicity", "vertex multiplicity is not an integer", (v[0],)))
    return violations


def require_brauer_config(cfg):
    violations = brauer_violations(cfg)
    if violations:
        raise FbcError("not a Brauer configuration: "
                       + "; ".join(str(v) for v in violations))


# -- polygon splitting -----------------------------------------------------------

@dataclass(frozen=True)
class SplitStep:
    polygon: tuple
    inserted: tuple          # new angle per interior chain position
    chain: tuple             # two-angle blocks replacing the polygon


@dataclass(frozen=True)
class ReductionTrace:
    steps: tuple

    def to_jsonable(self):
        return [{"polygon": list(s.polygon), "inserted": list(s.inserted),
                 "chain": [list(b) for b in s.chain]} for s in self.steps]


def _fresh_name(base, taken):
    name = base + "'"
    while name in taken:
        name += "'"
    return name


def split_polygons(bc):
    """Replace every polygon of l >= 3 angles by a chain of l-1 two-angle ones.

    Returns the resulting graph-like configuration and a replayable trace.
    The inserted angle after e sits between e and g(e) in its orbit, so every
    vertex keeps its multiplicity.
    """
    require_brauer_config(bc)
    taken = set(bc.angles)
    steps = []
    primed = {}              # original angle -> inserted companion
    for block in bc.polygons:
        if len(block) < 3:
            continue
        inserted = []
        for e in block[1:-1]:
            name = _fresh_name(e, taken)
            taken.add(name)
            primed[e] = name
            inserted.append(name)
        chain = [(block[0], block[1])]
        for i in range(1, len(block) - 1):
            chain.append((primed[block[i]], block[i + 1]))
        steps.append(SplitStep(block, tuple(inserted), tuple(chain)))
    trace = ReductionTrace(tuple(steps))
    return replay_trace(bc, trace), trace


def replay_trace(bc, trace):
    """Rebuild the split configuration from a trace."""
    primed = {}
    chains = {}
    for step in trace.steps:
        chains[step.polygon] = step.chain
        for e, name in zip(step.polygon[1:-1], step.inserted):
            primed[e] = name
    angles = []
    for e in bc.angles:
        angles.append(e)
    angles.extend(name for step in trace.steps for name in step.inserted)

    succ = {}
    for e in bc.angles:
        if e in primed:
            succ[e] = primed[e]
            succ[primed[e]] = bc.g_of(e)
        else:
            succ[e] = bc.g_of(e)
    cycles = []
    placed = set()
    for e in angles:
        if e in placed:
            continue
        cyc = [e]
        placed.add(e)
        x = succ[e]
        while x != e:
            cyc.append(x)
            placed.add(x)
            x = succ[x]
        cycles.append(tuple(cyc))

    polygons = []
    for block in bc.polygons:
        polygons.extend(chains.get(block, (block,)))

    orbit_len = {}
    for cyc in cycles:
        for x in cyc:
            orbit_len[x] = len(cyc)
    deg = []
    for cyc in cycles:
        rep = cyc[0]
        original = rep if rep in bc._index else _unprime(rep, primed)
        old = bc.degree_of(original)
        old_orbit = len(bc.vertex_of(original))
        deg.append((rep, old * orbit_len[rep] // old_orbit))
    raw = RawConfig(angles=tuple(angles), g_cycles=tuple(cycles),
                    polygons=tuple(polygons), degree=tuple(deg))
    return validate_fbc(raw)


def _unprime(name, primed):
    for orig, new in primed.items():
        if new == name:
            return orig
    raise FbcError("unknown inserted angle %r" % (name,))


# -- angle removal ----------------------------------------------------------------

@dataclass(frozen=True)
class WalkTransport:
    """Walk maps between a configuration and its angle-removed shortcut."""

    full: FBC
    cut: FBC
    removed: frozenset

    def expand(self, w):
        """Rewrite a shortcut walk as a walk of the full configuration."""
        steps = []
        cur = w.source
        for step in w.steps:
            if step == FWD:
                nxt = self.full.g_of(cur)
                while nxt in self.removed:
                    steps.append(FWD)
                    nxt = self.full.g_of(nxt)
                steps.append(FWD)
                cur = nxt
            elif step == wk.BWD:
                nxt = self.full.g_inv_of(cur)
                while nxt in self.removed:
                    steps.append(wk.BWD)
                    nxt = self.full.g_inv_of(nxt)
                steps.append(wk.BWD)
                cur = nxt
            else:
                steps.append(step)
                cur = tau_target(step)
        return Walk(w.source, tuple(steps))

    def collapse(self, w):
        """Rewrite a full walk with kept endpoints as a shortcut walk."""
        if w.source in self.removed:
            raise FbcError("walk source was removed")
        angles = wk.walk_angles(self.full, w)
        if angles[-1] in self.removed:
            raise FbcError("walk target was removed")
        steps = []
        i = 0
        n = len(w.steps)
        while i < n:
            step = w.steps[i]
            if step.startswith(wk.TAU):
                if angles[i] in self.removed:
                    # singleton polygon: the jump is a self loop, drop it
                    i += 1
                    continue
                steps.append(step)
                i += 1
                continue
            if angles[i + 1] not in self.removed:
                steps.append(step)
                i += 1
                continue
            # a run through removed angles: net displacement is one step
            net = 1 if step == FWD else -1
            j = i + 1
            while angles[j] in self.removed:
                nxt = w.steps[j]
                if nxt == FWD:
                    net += 1
                elif nxt == wk.BWD:
                    net -= 1
                j += 1
            if net > 0:
                steps.append(FWD)
            elif net < 0:
                steps.append(wk.BWD)
            i = j
        return Walk(w.source, tuple(steps))


def remove_angles(cfg, removed):
    """Delete turn-closed singleton-polygon angles, shortcutting the permutation.

    Returns the smaller configuration and the walk transport maps.
    """
    removed = frozenset(removed)
    violations = []
    for e in removed:
        if e not in cfg._index:
            violations.append(Violation("unknown-angle", "cannot remove", (e,)))
            continue
        if cfg.sigma_of(e) not in removed or cfg.sigma_inv_of(e) not in removed:
            violations.append(Violation(
                "not-turn-closed", "removed set must be closed under full turns",
                (e,)))
        if len(cfg.polygon_of(e)) != 1:
            violations.append(Violation(
                "not-singleton", "removed angles must form singleton polygons",
                (e,)))
    kept = [e for e in cfg.angles if e not in removed]
    if not kept:
        violations.append(Violation("empty", "cannot remove every angle"))
    if violations:
        raise FbcError("; ".join(str(v) for v in violations))

    succ = {}
    for e in kept:
        x = cfg.g_of(e)
        while x in removed:
            x = cfg.g_of(x)
        succ[e] = x
    cycles = []
    placed = set()
    for e in kept:
        if e in placed:
            continue
        cyc = [e]
        placed.add(e)
        x = succ[e]
        while x != e:
            cyc.append(x)
            placed.add(x)
            x = succ[x]
        cycles.append(tuple(cyc))
    polygons = [b for b in cfg.polygons if b[0] not in removed]
    layers = [tuple(x for x in b if x not in removed)
              for b in cfg.layers if any(x not in removed for x in b)]
    deg = []
    for cyc in cycles:
        e = cyc[0]
        drop = sum(1 for i in range(1, cfg.degree_of(e))
                   if cfg.g_pow(e, i) in removed)
        deg.append((e, cfg.degree_of(e) - drop))
    raw = RawConfig(angles=tuple(kept), g_cycles=tuple(cycles),
                    polygons=tuple(polygons), layers=tuple(layers),
                    degree=tuple(deg))
    cut = validate_fbc(raw)
    return cut, WalkTransport(cfg, cut, removed)


# -- admissible unions -------------------------------------------------------------

@dataclass(frozen=True)
class PolygonComplexReport:
    polygon: tuple
    connected: bool
    simply_connected: bool
    edges: tuple
    triangles: tuple


def _edge_path_trivial(vertices, edges, triangles):
    if not vertices:
        return True, True
    adj = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = {vertices[0]}
    frontier = [vertices[0]]
    tree = set()
    while frontier:
        nxt = []
        for v in frontier:
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    tree.add(frozenset((v, w)))
                    nxt.append(w)
        frontier = nxt
    connected = len(seen) == len(vertices)
    if not connected:
        return False, False
    gens = [e for e in edges if frozenset(e) not in tree]
    relators = []

    def letter_of(a, b):
        for e in gens:
            if (a, b) == e:
                return groups.letter("%s-%s" % e)
            if (b, a) == e:
                return groups.word_inverse(groups.letter("%s-%s" % e))
        return ()

    for x, y, z in triangles:
        relators.append(groups.word_mul(
            letter_of(x, y), letter_of(y, z), letter_of(z, x)))
    pres = groups.presentation(
        tuple("%s-%s" % e for e in gens), relators)
    simplified = groups.tietze_simplify(pres)
    return True, not simplified.generators


def polygon_complex(cfg, parts, block):
    """1- and 2-skeleton of the nerve of the part polygons inside one polygon."""
    simplices = set()
    for part in parts:
        part_angles = set(part.angles)
        for h in block:
            if h in part_angles:
                simplices.add(frozenset(part.polygon_of(h)))
    edges = set()
    triangles = set()
    for simplex in simplices:
        members = sorted(simplex, key=cfg.sort_key)
        for a, b in itertools.combinations(members, 2):
            edges.add((a, b))
        for tri in itertools.combinations(members, 3):
            triangles.add(tri)
    return (tuple(sorted(edges, key=lambda e: tuple(map(cfg.sort_key, e)))),
            tuple(sorted(triangles, key=lambda t: tuple(map(cfg.sort_key, t)))))


def check_admissible_union(cfg, parts):
    """Is cfg the union of the parts with simply connected polygon nerves?

    The parts must be closed under pairwise intersection.  Returns the overall
    verdict with one report per polygon.
    """
    keys = {p.key() for p in parts}
    for a, b in itertools.combinations(parts, 2):
        inter = sub_intersection(cfg, [a, b])
        if inter.key() not in keys:
            raise FbcError("parts are not closed under intersection")
    union = sub_union(cfg, parts)
    if (set(union.angles) != set(cfg.angles)
            or {frozenset(b) for b in union.polygons}
            != {frozenset(b) for b in cfg.polygons}
            or {frozenset(b) for b in union.layers}
            != {frozenset(b) for b in cfg.layers}):
        raise FbcError("parts do not union to the configuration")
    reports = []
    ok = True
    for block in cfg.polygons:
        edges, triangles = polygon_complex(cfg, parts, block)
        connected, trivial = _edge_path_trivial(block, edges, triangles)
        reports.append(PolygonComplexReport(block, connected, trivial,
                                            edges, triangles))
        ok = ok and connected and trivial
    return ok, reports


# -- the two presentation routes ----------------------------------------------------

@dataclass(frozen=True)
class PiResult:
    presentation: groups.GroupPresentation
    generator_walks: dict        # generator name -> closed Walk at the base angle
    relator_walk_pairs: tuple    # pairs of walks asserted homotopic
    base_angle: str
    trace: ReductionTrace | None = None


def _chain_edges(cfg):
    """Two-angle adjacency chain per polygon, in canonical member order."""
    edges = []
    for block in cfg.polygons:
        for a, b in zip(block, block[1:]):
            edges.append((a, b))
    return edges


def _vertex_list(cfg):
    verts = sorted(cfg.vertices, key=lambda v: cfg.sort_key(v[0]))
    return verts


def pi1_bc(bc):
    """Fundamental group of a connected Brauer configuration, with witnesses.

    Builds the spanning-tree presentation over the chain-edge graph (one loop
    generator per vertex, one generator per non-tree chain edge) together
    with walk realizations of every generator and relator.  The closed-form
    count and the polygon-splitting route are both checked against it.
    """
    require_brauer_config(bc)
    if not bc.is_connected():
        raise FbcError("fundamental group of a disconnected configuration")
    verts = _vertex_list(bc)
    vindex = {v[0]: i for i, v in enumerate(verts)}
    for v in verts:
        for e in v:
            vindex[e] = vindex[v[0]]
    edges = _chain_edges(bc)
    n = len(verts)

    # spanning tree over the vertex graph, breadth-first in edge order
    tree_of = {0: None}
    order = [0]
    frontier = [0]
    tree_edges = set()
    while frontier:
        nxt = []
        for vi in frontier:
            for ei, (a, b) in enumerate(edges):
                va, vb = vindex[a], vindex[b]
                if va == vi and vb not in tree_of:
                    tree_of[vb] = (ei, 1)
                    tree_edges.add(ei)
                    nxt.append(vb)
                elif vb == vi and va not in tree_of:
                    tree_of[va] = (ei, -1)
                    tree_edges.add(ei)
                    nxt.append(va)
        frontier = nxt
    if len(tree_of) != n:
        raise FbcError("chain-edge graph is disconnected")

    base = verts[0][0]

    def run_fwd(a, b):
        return wk.run_to(bc, a, b)

    def edge_walk(ei, start_angle):
        """Cross chain edge ei from its vertex containing start_angle."""
        a, b = edges[ei]
        if vindex[start_angle] == vindex[a]:
            first = run_fwd(start_angle, a)
            jump = Walk(a, (tau_step(b),))
            return wk.compose(bc, jump, first), b
        first = run_fwd(start_angle, b)
        jump = Walk(b, (tau_step(a),))
        return wk.compose(bc, jump, first), a

    tree_walk = {0: Walk(base)}

    def walk_to_vertex(vi):
        if vi in tree_walk:
            return tree_walk[vi]
        ei, orient = tree_of[vi]
        a, b = edges[ei]
        prev = vindex[a] if orient == 1 else vindex[b]
        w_prev = walk_to_vertex(prev)
        cross, arrived = edge_walk(ei, wk.target(bc, w_prev))
        tree_walk[vi] = wk.compose(bc, cross, w_prev)
        return tree_walk[vi]

    for vi in range(n):
        walk_to_vertex(vi)

    def vertex_turn(vi):
        h = wk.target(bc, tree_walk[vi])
        return wk.g_run(bc, h, len(bc.vertex_of(h)))

    def conj(vi, loop):
        t = tree_walk[vi]
        return wk.compose(bc, wk.invert(bc, t), wk.compose(bc, loop, t))

    gen_names = ["a%d" % (i + 1) for i in range(n)]
    gen_walks = {}
    multiplicities = []
    for vi in range(n):
        gen_walks[gen_names[vi]] = conj(vi, vertex_turn(vi))
        multiplicities.append(int(f_degree(bc, verts[vi])))

    b_names = []
    for ei, (a, b) in enumerate(edges):
        if ei in tree_edges:
            continue
        name = "b%d" % (len(b_names) + 1)
        b_names.append(name)
        va = vindex[a]
        to_a = wk.compose(bc, run_fwd(wk.target(bc, tree_walk[va]), a),
                          tree_walk[va])
        crossed = wk.compose(bc, Walk(a, (tau_step(b),)), to_a)
        vb = vindex[b]
        back = wk.compose(bc, wk.invert(bc, tree_walk[vb]),
                          wk.compose(bc, run_fwd(b, wk.target(bc, tree_walk[vb])),
                                     crossed))
        gen_walks[name] = back

    relators = []
    relator_pairs = []
    full_turn_1 = wk.power(bc, gen_walks[gen_names[0]], multiplicities[0])
    for vi in range(1, n):
        relators.append(groups.word_mul(
            groups.word_pow(groups.letter(gen_names[0]), multiplicities[0]),
            groups.word_inverse(
                groups.word_pow(groups.letter(gen_names[vi]), multiplicities[vi]))))
        relator_pairs.append((full_turn_1,
                              wk.power(bc, gen_walks[gen_names[vi]],
                                       multiplicities[vi])))
    for name in b_names:
        relators.append(groups.word_mul(
            groups.word_pow(groups.letter(gen_names[0]), multiplicities[0]),
            groups.letter(name),
            groups.word_pow(groups.letter(gen_names[0]), -multiplicities[0]),
            groups.letter(name, -1)))
        relator_pairs.append((
            wk.compose(bc, gen_walks[name], full_turn_1),
            wk.compose(bc, full_turn_1, gen_walks[name])))

    pres = groups.presentation(tuple(gen_names + b_names), relators)
    expected_r = sum(len(b) - 1 for b in bc.polygons) - n + 1
    if len(b_names) != expected_r:
        raise AssertionError("free generator count mismatch: %d vs %d"
                             % (len(b_names), expected_r))
    return PiResult(pres, gen_walks, tuple(relator_pairs), base)


def pi1_bg(bg):
    """Fundamental group of a Brauer graph (all polygons two angles)."""
    require_brauer_config(bg)
    if any(len(b) != 2 for b in bg.polygons):
        raise FbcError("not a graph: some polygon is not a two-angle block")
    return pi1_bc(bg)


def bc_pi1_formula(n_vertices, polygon_sizes, multiplicities):
    """The closed-form presentation from the counts alone."""
    r = sum(l - 1 for l in polygon_sizes) - n_vertices + 1
    if r < 0:
        raise FbcError("disconnected counts: negative free generator number")
    gens = ["a%d" % (i + 1) for i in range(n_vertices)]
    gens += ["b%d" % (j + 1) for j in range(r)]
    relators = []
    for i in range(1, n_vertices):
        relators.append(groups.word_mul(
            groups.word_pow(groups.letter(gens[0]), multiplicities[0]),
            groups.word_inverse(
                groups.word_pow(groups.letter(gens[i]), multiplicities[i]))))
    for j in range(r):
        b = "b%d" % (j + 1)
        relators.append(groups.word_mul(
            groups.word_pow(groups.letter(gens[0]), multiplicities[0]),
            groups.letter(b),
            groups.word_pow(groups.letter(gens[0]), -multiplicities[0]),
            groups.letter(b, -1)))
    return groups.presentation(tuple(gens), relators)


def pi1_bc_both_routes(bc):
    """Presentation via splitting plus the direct formula, cross-checked.

    Returns (PiResult on the original configuration, formula presentation,
    split-route presentation, trace).
    """
    direct = pi1_bc(bc)
    split, trace = split_polygons(bc)
    split_result = pi1_bc(split)
    verts = _vertex_list(bc)
    formula = bc_pi1_formula(
        len(verts), [len(b) for b in bc.polygons],
        [int(f_degree(bc, v)) for v in verts])
    inv = groups.abelianize(direct.presentation)
    if groups.abelianize(split_result.presentation) != inv:
        raise AssertionError("split route changed the abelian invariants")
    if groups.abelianize(formula) != inv:
        raise AssertionError("closed form disagrees with the spanning tree route")
    split_verts = _vertex_list(split)
    if len(split_verts) != len(verts):
        raise AssertionError("splitting changed the vertex count")
    for v, w in zip(split_verts, verts):
        if f_degree(split, v) != f_degree(bc, w):
            raise AssertionError("splitting changed a vertex multiplicity")
    return PiResult(direct.presentation, direct.generator_walks,
                    direct.relator_walk_pairs, direct.base_angle, trace), \
        formula, split_result.presentation
