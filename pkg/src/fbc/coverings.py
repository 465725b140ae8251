"""Morphisms and coverings of configurations, lifting, and explicit covers.

A morphism commutes with the permutation, maps polygon blocks into polygon
blocks and layer blocks into layer blocks, and preserves degrees.  A covering
additionally restricts to bijections on every block; walks then lift uniquely
once a start angle over the source is fixed, and the whole theory of deck
transformations and the lifting criterion becomes effectively computable by
transporting walks.

Infinite covers are represented by radius truncations: the universal cover of
a configuration with all-singleton layers is materialized as pairs (special
walk from the base, turn count), grown breadth-first to a radius.  Angles far
enough from the truncation boundary behave exactly like the infinite object.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from . import walks as wk
from .core import FBC, FbcError, RawConfig, Violation, validate_fbc
from .walks import BWD, FWD, Walk, tau_step, tau_target


class MorphismError(FbcError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class FBCMorphism:
    dom: FBC
    cod: FBC
    mapping: dict

    def __call__(self, e):
        return self.mapping[e]

    def push_walk(self, w):
        steps = tuple(s if not s.startswith(wk.TAU)
                      else tau_step(self.mapping[tau_target(s)])
                      for s in w.steps)
        return Walk(self.mapping[w.source], steps)


def morphism_violations(dom, cod, mapping):
    violations = []
    missing = [e for e in dom.angles if e not in mapping]
    if missing:
        violations.append(Violation(
            "map-domain", "map is not defined on every angle", tuple(missing[:2])))
        return violations
    bad = [e for e in dom.angles if mapping[e] not in cod._index]
    if bad:
        violations.append(Violation(
            "map-codomain", "map leaves the codomain angle set", tuple(bad[:2])))
        return violations
    for e in dom.angles:
        if mapping[dom.g_of(e)] != cod.g_of(mapping[e]):
            violations.append(Violation(
                "g-equivariance", "map does not commute with the permutation", (e,)))
        if cod.degree_of(mapping[e]) != dom.degree_of(e):
            violations.append(Violation(
                "degree-preservation", "map changes a degree", (e,)))
    for e in dom.angles:
        img_poly = set(cod.polygon_of(mapping[e]))
        if any(mapping[h] not in img_poly for h in dom.polygon_of(e)):
            violations.append(Violation(
                "polygon-blocks", "polygon image leaves the image polygon", (e,)))
        img_layer = set(cod.layer_of(mapping[e]))
        if any(mapping[h] not in img_layer for h in dom.layer_of(e)):
            violations.append(Violation(
                "layer-blocks", "layer image leaves the image layer", (e,)))
    return violations


def check_morphism(dom, cod, mapping):
    violations = morphism_violations(dom, cod, mapping)
    if violations:
        raise MorphismError(violations)
    return FBCMorphism(dom, cod, dict(mapping))


@dataclass(frozen=True)
class CoveringCert:
    morphism: FBCMorphism
    block_bijections: dict    # angle -> dict restricting the map to its polygon

    @property
    def dom(self):
        return self.morphism.dom

    @property
    def cod(self):
        return self.morphism.cod

    def __call__(self, e):
        return self.morphism.mapping[e]


def covering_violations(dom, cod, mapping):
    violations = morphism_violations(dom, cod, mapping)
    if violations:
        return violations
    for e in dom.angles:
        block = dom.polygon_of(e)
        image = cod.polygon_of(mapping[e])
        if len({mapping[h] for h in block}) != len(block) or len(block) != len(image):
            violations.append(Violation(
                "polygon-bijection",
                "polygon does not map bijectively onto the image polygon", (e,)))
        lblock = dom.layer_of(e)
        limage = cod.layer_of(mapping[e])
        if (len({mapping[h] for h in lblock}) != len(lblock)
                or len(lblock) != len(limage)):
            violations.append(Violation(
                "layer-bijection",
                "layer does not map bijectively onto the image layer", (e,)))
    return violations


def check_covering(dom, cod, mapping):
    violations = covering_violations(dom, cod, mapping)
    if violations:
        raise MorphismError(violations)
    morphism = FBCMorphism(dom, cod, dict(mapping))
    witnesses = {}
    for e in dom.angles:
        witnesses[e] = {h: mapping[h] for h in dom.polygon_of(e)}
    return CoveringCert(morphism, witnesses)


def identity_covering(cfg):
    return check_covering(cfg, cfg, {e: e for e in cfg.angles})


# -- lifting --------------------------------------------------------------------

def lift_walk(cov, w, start, verify_unique=False):
    """The unique walk over w starting at start."""
    dom, cod = cov.dom, cov.cod
    f = cov.morphism.mapping
    if f[start] != w.source:
        raise FbcError("start angle does not lie over the walk source")
    cur = start
    steps = []
    for step in w.steps:
        if step == FWD:
            cur = dom.g_of(cur)
            steps.append(FWD)
        elif step == BWD:
            cur = dom.g_inv_of(cur)
            steps.append(BWD)
        else:
            y = tau_target(step)
            pre = [h for h in dom.polygon_of(cur) if f[h] == y]
            if verify_unique and len(pre) != 1:
                raise AssertionError("fiber of a polygon jump is not a singleton")
            if not pre:
                raise FbcError("no lift: jump target has no preimage in the polygon")
            steps.append(tau_step(pre[0]))
            cur = pre[0]
    return Walk(start, tuple(steps))


def _bfs_tree_walks(cfg, base):
    """A walk from base to every angle, following the step graph breadth-first."""
    tree = {base: Walk(base)}
    frontier = [base]
    while frontier:
        nxt = []
        for x in frontier:
            w = tree[x]
            moves = [(cfg.g_of(x), w.steps + (FWD,)),
                     (cfg.g_inv_of(x), w.steps + (BWD,))]
            for h in cfg.polygon_of(x):
                if h != x:
                    moves.append((h, w.steps + (tau_step(h),)))
            for y, steps in moves:
                if y not in tree:
                    tree[y] = Walk(base, steps)
                    nxt.append(y)
        frontier = nxt
    return tree


def _fundamental_cycles(cfg, base, tree):
    """Closed walks generating all closed walks at base, one per step-graph edge."""
    cycles = []
    for x in cfg.angles:
        # permutation edge x -> g x
        back = wk.invert(cfg, tree[cfg.g_of(x)])
        cycles.append(Walk(base, tree[x].steps + (FWD,) + back.steps))
    for block in cfg.polygons:
        for i, x in enumerate(block):
            for y in block[i + 1:]:
                back = wk.invert(cfg, tree[y])
                cycles.append(Walk(base, tree[x].steps + (tau_step(y),) + back.steps))
    return cycles


def deck_group(cov):
    """All automorphisms of the total configuration over the identity downstairs.

    The domain must be connected; candidates are the fiber of the base angle,
    each propagated by walk lifting and kept when globally consistent.
    """
    dom, cod = cov.dom, cov.cod
    if not dom.is_connected():
        raise FbcError("deck transformations need a connected total configuration")
    f = cov.morphism.mapping
    base = dom.angles[0]
    tree = _bfs_tree_walks(dom, base)
    members = []
    for cand in dom.angles:
        if f[cand] != f[base]:
            continue
        phi = {}
        ok = True
        for x in dom.angles:
            try:
                lifted = lift_walk(cov, cov.morphism.push_walk(tree[x]), cand)
            except FbcError:
                ok = False
                break
            phi[x] = wk.target(dom, lifted)
        if not ok:
            continue
        if len(set(phi.values())) != len(dom.angles):
            continue
        if any(f[phi[x]] != f[x] for x in dom.angles):
            continue
        if covering_violations(dom, dom, phi):
            continue
        members.append(phi)
    return members


def is_regular(cov):
    """True when the deck group is transitive on the fiber of the base angle."""
    dom = cov.dom
    f = cov.morphism.mapping
    base = dom.angles[0]
    fiber = [x for x in dom.angles if f[x] == f[base]]
    group = deck_group(cov)
    reached = {phi[base] for phi in group}
    return set(fiber) == reached


class LiftStatus(Enum):
    OK = "ok"
    OBSTRUCTION = "obstruction"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class LiftMorphismResult:
    status: LiftStatus
    morphism: FBCMorphism | None = None
    obstruction: Walk | None = None


def lift_morphism(f1, cov2, e1, e2):
    """Factor the morphism f1 through the covering cov2 sending e1 to e2.

    The factorization exists exactly when every generating closed walk at e1
    pushes to a walk whose lift at e2 closes up; the check over the
    fundamental cycles of the step graph is complete, so the answer is exact.
    """
    dom1 = f1.dom
    if not dom1.is_connected():
        raise FbcError("the source of the factorization must be connected")
    if f1.mapping[e1] != cov2.morphism.mapping[e2]:
        raise FbcError("base angles do not lie over a common angle")
    tree = _bfs_tree_walks(dom1, e1)
    for cyc in _fundamental_cycles(dom1, e1, tree):
        lifted = lift_walk(cov2, f1.push_walk(cyc), e2)
        if wk.target(cov2.dom, lifted) != e2:
            return LiftMorphismResult(LiftStatus.OBSTRUCTION, obstruction=cyc)
    phi = {}
    for x in dom1.angles:
        lifted = lift_walk(cov2, f1.push_walk(tree[x]), e2)
        phi[x] = wk.target(cov2.dom, lifted)
    violations = morphism_violations(dom1, cov2.dom, phi)
    if violations:
        raise AssertionError("constructed factorization is not a morphism: %s"
                             % violations[0])
    return LiftMorphismResult(LiftStatus.OK,
                              morphism=FBCMorphism(dom1, cov2.dom, phi))


def reconstruction_isomorphism(cov):
    """For a regular covering, the isomorphism quotient-by-deck -> codomain.

    Returns (quotient, projection, iso mapping); raises when the covering is
    not regular or the induced map fails to be an isomorphism.
    """
    from .core import quotient as core_quotient
    if not is_regular(cov):
        raise FbcError("reconstruction needs a regular covering")
    q, proj = core_quotient(cov.dom, deck_group(cov))
    f = cov.morphism.mapping
    r = {}
    for e in cov.dom.angles:
        image = f[e]
        if proj[e] in r and r[proj[e]] != image:
            raise FbcError("covering is not constant on deck orbits")
        r[proj[e]] = image
    if len(set(r.values())) != len(q.angles) or len(q.angles) != len(cov.cod.angles):
        raise FbcError("induced map is not a bijection")
    violations = covering_violations(q, cov.cod, r)
    if violations:
        raise MorphismError(violations)
    return q, proj, r


def coverings_isomorphic(cov1, cov2):
    """An isomorphism over the common base, or None.

    Tries every basepoint image; exact by the lifting criterion.
    """
    dom1, dom2 = cov1.dom, cov2.dom
    if len(dom1.angles) != len(dom2.angles):
        return None
    base = dom1.angles[0]
    for cand in dom2.angles:
        if cov2.morphism.mapping[cand] != cov1.morphism.mapping[base]:
            continue
        res = lift_morphism(cov1.morphism, cov2, base, cand)
        if res.status is not LiftStatus.OK:
            continue
        phi = res.morphism.mapping
        if len(set(phi.values())) == len(dom2.angles):
            if not covering_violations(dom1, dom2, phi):
                return dict(phi)
    return None


# -- truncated covers -------------------------------------------------------------

class TruncationBoundary(FbcError):
    """Raised when a partial cover is asked about an angle it cannot see."""


@dataclass
class TruncatedCover:
    """A radius truncation of a (possibly infinite) cover.

    Angles are fresh string names in breadth-first order; ``states`` recovers
    the underlying construction data.  The cover quacks like a configuration
    on its interior: ``g_of``/``g_inv_of``/``polygon_of``/``layer_of``/
    ``degree_of`` raise TruncationBoundary when the answer would depend on
    angles beyond the truncation.
    """

    base: FBC
    basepoint: str
    radius: int
    angles: tuple = ()
    states: dict = field(default_factory=dict)
    depth: dict = field(default_factory=dict)
    projection: dict = field(default_factory=dict)
    _g: dict = field(default_factory=dict)
    _g_inv: dict = field(default_factory=dict)
    _poly: dict = field(default_factory=dict)
    _deg: dict = field(default_factory=dict)
    _index: dict = field(default_factory=dict)

    def g_of(self, a):
        if a not in self._g:
            raise TruncationBoundary("forward step leaves the truncation")
        return self._g[a]

    def g_inv_of(self, a):
        if a not in self._g_inv:
            raise TruncationBoundary("backward step leaves the truncation")
        return self._g_inv[a]

    def g_pow(self, a, n):
        for _ in range(abs(n)):
            a = self.g_of(a) if n > 0 else self.g_inv_of(a)
        return a

    def polygon_of(self, a):
        if a not in self._poly:
            raise TruncationBoundary("polygon incomplete at the boundary")
        return self._poly[a]

    def layer_of(self, a):
        if a not in self.depth:
            raise KeyError(a)
        return (a,)

    def degree_of(self, a):
        return self._deg[a]

    def sigma_of(self, a):
        return self.g_pow(a, self.degree_of(a))

    def sigma_inv_of(self, a):
        return self.g_pow(a, -self.degree_of(a))

    def vertex_of(self, a):
        # walk the partial orbit both ways
        orbit = [a]
        x = a
        while x in self._g and self._g[x] != a:
            x = self._g[x]
            orbit.append(x)
        if x in self._g and self._g[x] == a:
            return tuple(orbit)
        x = a
        back = []
        while x in self._g_inv:
            x = self._g_inv[x]
            if x == a:
                break
            back.append(x)
        return tuple(reversed(back)) + tuple(orbit)

    def is_ms(self):
        return True

    def sort_key(self, a):
        return self._index[a]

    @property
    def boundary(self):
        return tuple(a for a in self.angles if a not in self.interior)

    @property
    def interior(self):
        if not hasattr(self, "_interior"):
            cut = self.radius - 2
            self._interior = frozenset(
                a for a in self.angles if self.depth[a] <= cut)
        return self._interior

    def is_complete(self):
        """True when no angle touches the truncation boundary."""
        return all(a in self._g and a in self._g_inv and a in self._poly
                   for a in self.angles)

    def to_fbc(self):
        """Materialize a complete truncation as a configuration."""
        if not self.is_complete():
            raise TruncationBoundary("truncation is not a closed configuration")
        cycles = []
        placed = set()
        for a in self.angles:
            if a in placed:
                continue
            orbit = [a]
            placed.add(a)
            x = self._g[a]
            while x != a:
                orbit.append(x)
                placed.add(x)
                x = self._g[x]
            cycles.append(tuple(orbit))
        polys = []
        seen = set()
        for a in self.angles:
            block = self._poly[a]
            if block not in seen:
                seen.add(block)
                polys.append(block)
        deg = tuple((c[0], self._deg[c[0]]) for c in cycles)
        raw = RawConfig(angles=self.angles, g_cycles=tuple(cycles),
                        polygons=tuple(polys), degree=deg)
        return validate_fbc(raw), dict(self.states)


# -- the explicit cover for all-singleton layers -----------------------------------

def _special_forward(cfg, runs):
    """One forward step on (special walk, carry): returns (runs, carry 0 or 1)."""
    e, i = runs[-1]
    if i < cfg.degree_of(e) - 1:
        return runs[:-1] + ((e, i + 1),), 0
    return runs[:-1] + ((e, 0),), 1


def _special_backward(cfg, runs):
    e, i = runs[-1]
    if i > 0:
        return runs[:-1] + ((e, i - 1),), 0
    return runs[:-1] + ((e, cfg.degree_of(e) - 1),), -1


def _special_block(cfg, runs):
    """Polygon block of a special walk: the run root and its jump extensions."""
    root = runs if (len(runs) == 1 or runs[-1][1] > 0) else runs[:-1]
    end = cfg.g_pow(root[-1][0], root[-1][1])
    block = [root]
    for h in cfg.polygon_of(end):
        if h != end:
            block.append(root + ((h, 0),))
    return tuple(block)


def _special_terminal(cfg, runs):
    e, i = runs[-1]
    return cfg.g_pow(e, i)


def build_universal_cover_ms(cfg, base, radius):
    """Breadth-first truncation of the universal cover, for singleton layers.

    Angles are pairs (special walk from base, turn count); the projection
    applies the turn automorphism turn-count times to the special terminal.
    """
    if not cfg.is_ms():
        raise FbcError("the explicit cover needs all-singleton layers")
    if base not in cfg._index:
        raise FbcError("unknown base angle %r" % (base,))
    start = (((base, 0),), 0)
    depth = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if depth[state] == radius:
            continue
        runs, n = state
        moves = []
        f_runs, carry = _special_forward(cfg, runs)
        moves.append((f_runs, n + carry))
        b_runs, carry = _special_backward(cfg, runs)
        moves.append((b_runs, n + carry))
        for member in _special_block(cfg, runs):
            if member != runs:
                moves.append((member, n))
        for nxt in moves:
            if nxt not in depth:
                depth[nxt] = depth[state] + 1
                order.append(nxt)
                queue.append(nxt)

    name = {state: "u%d" % i for i, state in enumerate(order)}
    tc = TruncatedCover(base=cfg, basepoint=name[start], radius=radius)
    tc.angles = tuple(name[s] for s in order)
    tc.states = {name[s]: s for s in order}
    tc.depth = {name[s]: depth[s] for s in order}
    tc._index = {a: i for i, a in enumerate(tc.angles)}

    def project(state):
        runs, n = state
        t = _special_terminal(cfg, runs)
        for _ in range(abs(n)):
            t = cfg.sigma_of(t) if n > 0 else cfg.sigma_inv_of(t)
        return t

    for state in order:
        runs, n = state
        a = name[state]
        tc.projection[a] = project(state)
        tc._deg[a] = cfg.degree_of(_special_terminal(cfg, runs))
        f_runs, carry = _special_forward(cfg, runs)
        if (f_runs, n + carry) in name:
            tc._g[a] = name[(f_runs, n + carry)]
        b_runs, carry = _special_backward(cfg, runs)
        if (b_runs, n + carry) in name:
            tc._g_inv[a] = name[(b_runs, n + carry)]
        block = tuple((member, n) for member in _special_block(cfg, runs))
        if all(m in name for m in block):
            tc._poly[a] = tuple(name[m] for m in block)
    return tc


def universal_cover_truncated(cfg, base, radius):
    """Radius truncation of the universal cover at base.

    Exact only when homotopy is decidable, i.e. for all-singleton layers;
    other inputs raise HomotopyUndecided.
    """
    if not cfg.is_ms():
        raise wk.HomotopyUndecided(
            "universal cover truncation needs an exact homotopy decision; "
            "only configurations with all-singleton layers are supported")
    return build_universal_cover_ms(cfg, base, radius)


def build_special_cover(cfg, base, radius):
    """Truncation of the cover whose angles are the special walks from base.

    The permutation advances the leading run and wraps full turns; blocks are
    a run root together with its one-jump extensions.  The recorded projection
    sends a special walk to its terminal; it is not itself a covering (the
    wrap forgets one full turn), but block structure and degrees match the
    base exactly, which is what the finite gluing counts use.
    """
    if not cfg.is_ms():
        raise FbcError("the explicit cover needs all-singleton layers")
    start = ((base, 0),)
    depth = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        runs = queue.popleft()
        if depth[runs] == radius:
            continue
        moves = [_special_forward(cfg, runs)[0], _special_backward(cfg, runs)[0]]
        moves.extend(m for m in _special_block(cfg, runs) if m != runs)
        for nxt in moves:
            if nxt not in depth:
                depth[nxt] = depth[runs] + 1
                order.append(nxt)
                queue.append(nxt)
    name = {state: "u%d" % i for i, state in enumerate(order)}
    tc = TruncatedCover(base=cfg, basepoint=name[start], radius=radius)
    tc.angles = tuple(name[s] for s in order)
    tc.states = {name[s]: s for s in order}
    tc.depth = {name[s]: depth[s] for s in order}
    tc._index = {a: i for i, a in enumerate(tc.angles)}
    for runs in order:
        a = name[runs]
        tc.projection[a] = _special_terminal(cfg, runs)
        tc._deg[a] = cfg.degree_of(_special_terminal(cfg, runs))
        f_runs, _ = _special_forward(cfg, runs)
        if f_runs in name:
            tc._g[a] = name[f_runs]
        b_runs, _ = _special_backward(cfg, runs)
        if b_runs in name:
            tc._g_inv[a] = name[b_runs]
        block = _special_block(cfg, runs)
        if all(m in name for m in block):
            tc._poly[a] = tuple(name[m] for m in block)
    return tc


def build_special_cover_complete(cfg, base, max_radius=64):
    """Grow the special-walk cover until it closes up; error if it will not."""
    for radius in range(2, max_radius + 1):
        tc = build_special_cover(cfg, base, radius)
        if tc.is_complete():
            return tc
    raise FbcError("special-walk cover did not close within radius %d" % max_radius)


def truncated_covering_violations(tc):
    """Covering conditions for the projection, checked on interior angles."""
    cfg = tc.base
    violations = []
    for a in tc.interior:
        pa = tc.projection[a]
        if tc._deg[a] != cfg.degree_of(pa):
            violations.append(Violation(
                "degree-preservation", "projection changes a degree", (str(a),)))
        try:
            ga = tc.g_of(a)
        except TruncationBoundary:
            violations.append(Violation(
                "truncation", "interior angle lost its forward step", (str(a),)))
            continue
        if tc.projection[ga] != cfg.g_of(pa):
            violations.append(Violation(
                "g-equivariance", "projection does not commute", (str(a),)))
        try:
            block = tc.polygon_of(a)
        except TruncationBoundary:
            violations.append(Violation(
                "truncation", "interior angle lost its polygon", (str(a),)))
            continue
        images = [tc.projection[m] for m in block]
        if sorted(images) != sorted(cfg.polygon_of(pa)):
            violations.append(Violation(
                "polygon-bijection",
                "interior polygon does not map bijectively", (str(a),)))
    return violations
