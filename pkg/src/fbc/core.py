"""Finite fractional Brauer configurations.

A configuration is a finite set of *angles* acted on by a single permutation
``g``, together with two nested partitions (*polygons* and the finer *layers*)
and a positive integer *degree* on each angle, constant along g-orbits.  This
module validates the defining axioms, classifies configurations, and provides
the basic combinatorics everything else is built on: the turn automorphism,
standard sequences, sub-configurations with unions and intersections, and
quotients by admissible automorphism groups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class FbcError(Exception):
    """Base class for all domain errors raised by this package."""


@dataclass(frozen=True)
class Violation:
    """One failed well-formedness or axiom check, with witness angles."""

    code: str
    message: str
    witnesses: tuple = ()

    def __str__(self):
        if self.witnesses:
            return "%s: %s (witness: %s)" % (
                self.code, self.message, " ".join(map(str, self.witnesses)))
        return "%s: %s" % (self.code, self.message)


class ConfigurationError(FbcError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__(
            "invalid configuration: " + "; ".join(str(v) for v in self.violations))


class FBCClass(Enum):
    GENERAL = "general"
    TYPE_S = "type S"
    TYPE_MS = "type MS"


@dataclass(frozen=True)
class RawConfig:
    """Unvalidated configuration description, as parsed from a file.

    ``g_cycles`` lists the cycles of the angle permutation (fixed points may
    be omitted).  ``degree`` maps representatives to the degree of their
    orbit; if several angles of one orbit are listed they must agree.
    ``layers`` defaults to the all-singletons partition when None.
    """

    angles: tuple
    g_cycles: tuple
    polygons: tuple
    degree: tuple   # pairs (angle, positive int)
    layers: tuple | None = None


class FBC:
    """A validated configuration.  Immutable; build through validate_fbc()."""

    __slots__ = ("angles", "_index", "_g", "_g_inv", "_poly", "_layer", "_deg",
                 "polygons", "layers", "vertices", "_vertex_of", "_ms")

    def __init__(self, angles, g, poly, layer, deg):
        self.angles = tuple(angles)
        self._index = {e: i for i, e in enumerate(self.angles)}
        self._g = dict(g)
        self._g_inv = {v: k for k, v in g.items()}
        self._poly = dict(poly)      # angle -> block tuple (shared)
        self._layer = dict(layer)
        self._deg = dict(deg)

        def distinct_blocks(of):
            seen, out = set(), []
            for e in self.angles:
                block = of[e]
                if id(block) not in seen:
                    seen.add(id(block))
                    out.append(block)
            return tuple(out)

        self.polygons = distinct_blocks(self._poly)
        self.layers = distinct_blocks(self._layer)
        verts = []
        placed = set()
        for e in self.angles:
            if e in placed:
                continue
            orbit = [e]
            placed.add(e)
            x = self._g[e]
            while x != e:
                orbit.append(x)
                placed.add(x)
                x = self._g[x]
            verts.append(tuple(orbit))
        self.vertices = tuple(verts)
        self._vertex_of = {e: v for v in self.vertices for e in v}
        self._ms = all(len(b) == 1 for b in self.layers)

    # -- basic accessors ---------------------------------------------------

    def index_of(self, e):
        return self._index[e]

    def g_of(self, e):
        return self._g[e]

    def g_inv_of(self, e):
        return self._g_inv[e]

    def g_pow(self, e, n):
        n %= len(self._vertex_of[e])
        for _ in range(n):
            e = self._g[e]
        return e

    def polygon_of(self, e):
        return self._poly[e]

    def layer_of(self, e):
        return self._layer[e]

    def degree_of(self, e):
        return self._deg[e]

    def sigma_of(self, e):
        """Turn automorphism: advance e by its full degree."""
        return self.g_pow(e, self._deg[e])

    def sigma_inv_of(self, e):
        return self.g_pow(e, -self._deg[e])

    def vertex_of(self, e):
        return self._vertex_of[e]

    def is_ms(self):
        return self._ms

    def sort_key(self, e):
        return self._index[e]

    def __len__(self):
        return len(self.angles)

    def __repr__(self):
        return "FBC(%d angles, %d vertices, %d polygons)" % (
            len(self.angles), len(self.vertices), len(self.polygons))

    def is_connected(self):
        if not self.angles:
            return True
        seen = {self.angles[0]}
        stack = [self.angles[0]]
        while stack:
            x = stack.pop()
            for y in (self._g[x], self._g_inv[x], *self._poly[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.angles)

    def to_raw(self):
        cycles = []
        for orbit in self.vertices:
            cycles.append(tuple(orbit))
        deg = tuple((v[0], self._deg[v[0]]) for v in self.vertices)
        return RawConfig(angles=self.angles, g_cycles=tuple(cycles),
                         polygons=self.polygons, layers=self.layers, degree=deg)


# -- validation -------------------------------------------------------------

def _partition_blocks(angles, index, blocks, what, violations):
    """Check that blocks partition the angle set; return angle -> block map."""
    out = {}
    seen = set()
    ok = True
    for raw_block in blocks:
        block = tuple(sorted(raw_block, key=lambda e: index.get(e, -1)))
        if not block:
            violations.append(Violation("empty-block", "%s block is empty" % what))
            ok = False
            continue
        for e in block:
            if e not in index:
                violations.append(Violation(
                    "unknown-angle", "%s block mentions unknown angle" % what, (e,)))
                ok = False
            elif e in seen:
                violations.append(Violation(
                    "overlapping-blocks", "angle appears in two %s blocks" % what, (e,)))
                ok = False
            else:
                seen.add(e)
                out[e] = block
    for e in angles:
        if e not in out:
            violations.append(Violation(
                "uncovered-angle", "angle missing from %s partition" % what, (e,)))
            ok = False
    return out if ok else None


def fbc_violations(raw):
    """All structural and axiom violations of a raw description (no raising)."""
    if isinstance(raw, dict):
        raw = RawConfig(
            angles=tuple(raw["angles"]),
            g_cycles=tuple(tuple(c) for c in raw["g"]),
            polygons=tuple(tuple(b) for b in raw["polygons"]),
            layers=(tuple(tuple(b) for b in raw["layers"])
                    if raw.get("layers") is not None else None),
            degree=tuple(raw["degree"].items()) if isinstance(raw["degree"], dict)
            else tuple(tuple(p) for p in raw["degree"]))
    violations = []
    angles = tuple(raw.angles)
    if not angles:
        violations.append(Violation("no-angles", "configuration has no angles"))
        return violations
    index = {}
    for i, e in enumerate(angles):
        if not isinstance(e, str) or not e or any(c.isspace() for c in e):
            violations.append(Violation(
                "bad-angle-id", "angle ids must be nonempty tokens without whitespace",
                (repr(e),)))
        elif e in index:
            violations.append(Violation("duplicate-angle", "angle id repeated", (e,)))
        else:
            index[e] = i
    if violations:
        return violations

    g = {}
    for cycle in raw.g_cycles:
        for e in cycle:
            if e not in index:
                violations.append(Violation(
                    "unknown-angle", "permutation mentions unknown angle", (e,)))
                return violations
        for a, b in zip(cycle, cycle[1:] + type(cycle)((cycle[0],))):
            if a in g:
                violations.append(Violation(
                    "not-a-permutation", "angle occurs in two cycles", (a,)))
                return violations
            g[a] = b
    for e in angles:
        g.setdefault(e, e)
    if set(g.values()) != set(angles):
        missing = sorted(set(angles) - set(g.values()), key=index.get)
        violations.append(Violation(
            "not-a-permutation", "permutation is not a bijection", tuple(missing)))
        return violations

    poly = _partition_blocks(angles, index, raw.polygons, "polygon", violations)
    layer_blocks = raw.layers if raw.layers is not None else tuple((e,) for e in angles)
    layer = _partition_blocks(angles, index, layer_blocks, "layer", violations)
    if poly is None or layer is None:
        return violations

    # degree: expand per-orbit, check positivity and orbit-constancy
    orbits = []
    placed = set()
    for e in angles:
        if e in placed:
            continue
        orbit = [e]
        placed.add(e)
        x = g[e]
        while x != e:
            orbit.append(x)
            placed.add(x)
            x = g[x]
        orbits.append(tuple(orbit))
    orbit_of = {e: o for o in orbits for e in o}
    deg = {}
    for e, d in raw.degree:
        if e not in index:
            violations.append(Violation(
                "unknown-angle", "degree entry mentions unknown angle", (e,)))
            continue
        if not isinstance(d, int) or d <= 0:
            violations.append(Violation(
                "bad-degree", "degree must be a positive integer", (e, d)))
            continue
        for h in orbit_of[e]:
            if h in deg and deg[h] != d:
                violations.append(Violation(
                    "degree-orbit", "degree not constant on a g-orbit",
                    (e, h)))
                break
            deg[h] = d
    for o in orbits:
        if o[0] not in deg:
            violations.append(Violation(
                "missing-degree", "no degree given for the orbit of this angle",
                (o[0],)))
    if violations:
        return violations

    def gpow(e, n):
        n %= len(orbit_of[e])
        for _ in range(n):
            e = g[e]
        return e

    # layer refines polygon
    for e in angles:
        if not set(layer[e]) <= set(poly[e]):
            bad = next(h for h in layer[e] if h not in poly[e])
            violations.append(Violation(
                "layer-not-in-polygon", "layer block not contained in a polygon",
                (e, bad)))
    # shared layer forces shared successor polygon
    for block in {id(b): b for b in layer.values()}.values():
        tgt = {id(poly[g[e]]) for e in block}
        if len(tgt) > 1:
            violations.append(Violation(
                "layer-successor-polygon",
                "g-images of one layer land in different polygons",
                tuple(block[:2])))
    # the turn map must induce a bijection on polygon blocks, and on layers
    for name, code, part in (("polygon", "polygon-turn-bijection", poly),
                             ("layer", "layer-turn-bijection", layer)):
        fwd = {}
        for block in {id(b): b for b in part.values()}.values():
            images = {id(part[gpow(e, deg[e])]): part[gpow(e, deg[e])] for e in block}
            if len(images) > 1:
                violations.append(Violation(
                    code, "turn map splits a %s block" % name, tuple(block[:2])))
                continue
            img = next(iter(images.values()))
            if id(img) in fwd and fwd[id(img)] is not block:
                violations.append(Violation(
                    code, "turn map merges two %s blocks" % name,
                    (fwd[id(img)][0], block[0])))
            else:
                fwd[id(img)] = block
    # no full-turn layer word may be a proper prefix of another
    words = {}
    for e in angles:
        word = tuple(id(layer[gpow(e, i)]) for i in range(deg[e]))
        words.setdefault(word, e)
    for word, e in words.items():
        for other, h in words.items():
            if len(word) < len(other) and other[:len(word)] == word:
                violations.append(Violation(
                    "turn-word-prefix",
                    "full-turn layer word of one angle is a proper prefix of another's",
                    (e, h)))
    return violations


def validate_fbc(raw):
    """Validate a raw description and build an FBC, or raise ConfigurationError."""
    violations = fbc_violations(raw)
    if violations:
        raise ConfigurationError(violations)
    if isinstance(raw, dict):
        raw = RawConfig(
            angles=tuple(raw["angles"]),
            g_cycles=tuple(tuple(c) for c in raw["g"]),
            polygons=tuple(tuple(b) for b in raw["polygons"]),
            layers=(tuple(tuple(b) for b in raw["layers"])
                    if raw.get("layers") is not None else None),
            degree=tuple(raw["degree"].items()) if isinstance(raw["degree"], dict)
            else tuple(tuple(p) for p in raw["degree"]))
    angles = tuple(raw.angles)
    index = {e: i for i, e in enumerate(angles)}
    g = {}
    for cycle in raw.g_cycles:
        for a, b in zip(cycle, tuple(cycle[1:]) + (cycle[0],)):
            g[a] = b
    for e in angles:
        g.setdefault(e, e)
    poly = {}
    for raw_block in raw.polygons:
        block = tuple(sorted(raw_block, key=index.get))
        for e in block:
            poly[e] = block
    layer = {}
    layer_blocks = raw.layers if raw.layers is not None else tuple((e,) for e in angles)
    for raw_block in layer_blocks:
        block = tuple(sorted(raw_block, key=index.get))
        for e in block:
            layer[e] = block
    deg = {}
    orbit_of = {}
    for e in angles:
        if e in orbit_of:
            continue
        orbit = [e]
        x = g[e]
        while x != e:
            orbit.append(x)
            x = g[x]
        for h in orbit:
            orbit_of[h] = orbit
    for e, d in raw.degree:
        for h in orbit_of[e]:
            deg[h] = d
    return FBC(angles, g, poly, layer, deg)


# -- classification ----------------------------------------------------------

@dataclass(frozen=True)
class StdSeq:
    """A g-consecutive angle run: start angle plus length 0 <= n <= d(start)."""

    start: str
    length: int


def standard_sequences(cfg):
    for e in cfg.angles:
        for n in range(cfg.degree_of(e) + 1):
            yield StdSeq(e, n)


def seq_source(cfg, p):
    return p.start


def seq_target(cfg, p):
    return cfg.g_pow(p.start, p.length)


def seq_word(cfg, p):
    """The layer word of a run; trivial runs carry their polygon as identity."""
    if p.length == 0:
        return ("1", cfg.polygon_of(p.start))
    return tuple(cfg.layer_of(cfg.g_pow(p.start, i)) for i in range(p.length))


def seq_hat(cfg, p):
    """The complementary run finishing the turn that p started."""
    return StdSeq(cfg.g_pow(p.start, p.length), cfg.degree_of(p.start) - p.length)


def seq_cohat(cfg, p):
    """The complementary run preceding p, one full turn back."""
    d = cfg.degree_of(p.start)
    return StdSeq(cfg.g_pow(p.start, p.length - d), d - p.length)


def _word_classes(cfg):
    classes = {}
    for p in standard_sequences(cfg):
        classes.setdefault(seq_word(cfg, p), []).append(p)
    return classes


def seq_class(cfg, p):
    """All standard sequences with the same layer word as p."""
    word = seq_word(cfg, p)
    return tuple(q for q in standard_sequences(cfg) if seq_word(cfg, q) == word)


def standard_sequence_ops(cfg, p):
    if not (0 <= p.length <= cfg.degree_of(p.start)):
        raise FbcError("standard sequence length out of range: %r" % (p,))
    return {
        "hat": seq_hat(cfg, p),
        "cohat": seq_cohat(cfg, p),
        "word": seq_word(cfg, p),
        "identical_class": seq_class(cfg, p),
    }


def _closure_words(cfg, seqs, word_classes):
    """Word set of the identical-closure of a set of sequences."""
    return frozenset(seq_word(cfg, q) for q in seqs)


def satisfies_type_s(cfg):
    """Exhaustive check of the compatibility axiom over identical pairs."""
    word_classes = _word_classes(cfg)
    cache = {}

    def side_a(p):
        if p not in cache:
            hat = seq_hat(cfg, p)
            cls = word_classes[seq_word(cfg, hat)]
            cache[p] = _closure_words(cfg, [seq_cohat(cfg, r) for r in cls], word_classes)
        return cache[p]

    cache_b = {}

    def side_b(p):
        if p not in cache_b:
            co = seq_cohat(cfg, p)
            cls = word_classes[seq_word(cfg, co)]
            cache_b[p] = _closure_words(cfg, [seq_hat(cfg, r) for r in cls], word_classes)
        return cache_b[p]

    for members in word_classes.values():
        for p, q in itertools.combinations(members, 2):
            if side_a(p) != side_a(q) and side_b(p) != side_b(q):
                return False
    return True


def classify(cfg):
    if cfg.is_ms():
        return FBCClass.TYPE_MS
    if satisfies_type_s(cfg):
        return FBCClass.TYPE_S
    return FBCClass.GENERAL


def nakayama(cfg):
    """The turn automorphism e -> g^d(e) e, as an angle map."""
    return {e: cfg.sigma_of(e) for e in cfg.angles}


def f_degree(cfg, vertex):
    """Degree of an orbit divided by its size; vertex may be a member angle."""
    if isinstance(vertex, str):
        vertex = cfg.vertex_of(vertex)
    vertex = tuple(vertex)
    return Fraction(cfg.degree_of(vertex[0]), len(vertex))


# -- sub-configurations ------------------------------------------------------

@dataclass(frozen=True)
class SubFBC:
    """A g-closed angle subset of a parent with refined partitions."""

    parent: FBC
    angles: tuple
    polygons: tuple
    layers: tuple

    def polygon_of(self, e):
        for b in self.polygons:
            if e in b:
                return b
        raise KeyError(e)

    def layer_of(self, e):
        for b in self.layers:
            if e in b:
                return b
        raise KeyError(e)

    def key(self):
        return (frozenset(self.angles),
                frozenset(frozenset(b) for b in self.polygons),
                frozenset(frozenset(b) for b in self.layers))


def sub_fbc(parent, angles, polygons, layers=None):
    angles = tuple(sorted(angles, key=parent.sort_key))
    polygons = tuple(tuple(sorted(b, key=parent.sort_key)) for b in polygons)
    polygons = tuple(sorted(polygons, key=lambda b: parent.sort_key(b[0])))
    if layers is None:
        layers = tuple((e,) for e in angles)
    else:
        layers = tuple(tuple(sorted(b, key=parent.sort_key)) for b in layers)
        layers = tuple(sorted(layers, key=lambda b: parent.sort_key(b[0])))
    return SubFBC(parent, angles, polygons, layers)


def sub_violations(sub):
    """Check the sub-configuration conditions against the parent."""
    parent = sub.parent
    violations = []
    aset = set(sub.angles)
    for e in sub.angles:
        if parent.g_of(e) not in aset:
            violations.append(Violation(
                "not-g-closed", "subset is not closed under the permutation", (e,)))
    cover = {e for b in sub.polygons for e in b}
    if cover != aset:
        violations.append(Violation(
            "sub-partition", "polygon blocks do not partition the subset"))
        return violations
    for b in sub.polygons:
        sample = set(b)
        for e in b:
            if not sample <= set(parent.polygon_of(e)):
                violations.append(Violation(
                    "sub-refinement", "sub-polygon not inside a parent polygon", (e,)))
                break
    for b in sub.layers:
        for e in b:
            if not set(b) <= set(parent.layer_of(e)):
                violations.append(Violation(
                    "sub-refinement", "sub-layer not inside a parent layer", (e,)))
                break
    if violations:
        return violations
    try:
        sub_to_fbc(sub)
    except ConfigurationError as exc:
        violations.extend(exc.violations)
    return violations


def sub_to_fbc(sub):
    """Materialize the sub-configuration as a configuration of its own."""
    parent = sub.parent
    cycles = []
    placed = set()
    for e in sub.angles:
        if e in placed:
            continue
        orbit = [e]
        placed.add(e)
        x = parent.g_of(e)
        while x != e:
            orbit.append(x)
            placed.add(x)
            x = parent.g_of(x)
        cycles.append(tuple(orbit))
    deg = tuple((c[0], parent.degree_of(c[0])) for c in cycles)
    raw = RawConfig(angles=sub.angles, g_cycles=tuple(cycles),
                    polygons=sub.polygons, layers=sub.layers, degree=deg)
    return validate_fbc(raw)


def full_sub(parent):
    """The parent itself viewed as a sub-configuration."""
    return sub_fbc(parent, parent.angles, parent.polygons, parent.layers)


def _transitive_blocks(parent, angle_set, block_families):
    index = {e: i for i, e in enumerate(sorted(angle_set, key=parent.sort_key))}
    rep = {e: e for e in index}

    def find(x):
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if parent.sort_key(ra) > parent.sort_key(rb):
                ra, rb = rb, ra
            rep[rb] = ra

    for family in block_families:
        for block in family:
            for a, b in zip(block, block[1:]):
                union(a, b)
    grouped = {}
    for e in index:
        grouped.setdefault(find(e), []).append(e)
    blocks = [tuple(sorted(v, key=parent.sort_key)) for v in grouped.values()]
    return tuple(sorted(blocks, key=lambda b: parent.sort_key(b[0])))


def sub_union(parent, parts):
    """Union of sub-configurations: transitive closure of the block relations."""
    if not parts:
        raise FbcError("union of no sub-configurations")
    angle_set = set()
    for part in parts:
        angle_set |= set(part.angles)
    polygons = _transitive_blocks(parent, angle_set, [p.polygons for p in parts])
    layers = _transitive_blocks(parent, angle_set, [p.layers for p in parts])
    return sub_fbc(parent, tuple(sorted(angle_set, key=parent.sort_key)),
                   polygons, layers)


def sub_intersection(parent, parts):
    """Intersection: common angles with intersected blocks."""
    if not parts:
        raise FbcError("intersection of no sub-configurations")
    angle_set = set(parts[0].angles)
    for part in parts[1:]:
        angle_set &= set(part.angles)
    polygons = {}
    layers = {}
    for e in angle_set:
        pb = set(parts[0].polygon_of(e))
        lb = set(parts[0].layer_of(e))
        for part in parts[1:]:
            pb &= set(part.polygon_of(e))
            lb &= set(part.layer_of(e))
        polygons[e] = frozenset(pb & angle_set)
        layers[e] = frozenset(lb & angle_set)
    pblocks = {b: tuple(sorted(b, key=parent.sort_key)) for b in set(polygons.values())}
    lblocks = {b: tuple(sorted(b, key=parent.sort_key)) for b in set(layers.values())}
    return sub_fbc(parent, tuple(sorted(angle_set, key=parent.sort_key)),
                   tuple(pblocks.values()), tuple(lblocks.values()))


# -- automorphisms and quotients ----------------------------------------------

def automorphism_violations(cfg, mapping):
    """Check that mapping is an automorphism of cfg."""
    violations = []
    if set(mapping) != set(cfg.angles) or set(mapping.values()) != set(cfg.angles):
        violations.append(Violation(
            "not-a-bijection", "map is not a bijection of the angle set"))
        return violations
    for e in cfg.angles:
        if mapping[cfg.g_of(e)] != cfg.g_of(mapping[e]):
            violations.append(Violation(
                "g-equivariance", "map does not commute with the permutation", (e,)))
        if cfg.degree_of(mapping[e]) != cfg.degree_of(e):
            violations.append(Violation(
                "degree-preservation", "map changes the degree", (e,)))
    for block in cfg.polygons:
        img = frozenset(mapping[e] for e in block)
        if img != frozenset(cfg.polygon_of(mapping[block[0]])):
            violations.append(Violation(
                "polygon-blocks", "map does not send a polygon onto a polygon",
                (block[0],)))
    for block in cfg.layers:
        img = frozenset(mapping[e] for e in block)
        if img != frozenset(cfg.layer_of(mapping[block[0]])):
            violations.append(Violation(
                "layer-blocks", "map does not send a layer onto a layer",
                (block[0],)))
    return violations


def generate_group(cfg, generators):
    """Close a list of automorphisms under composition (and inverse)."""
    ident = {e: e for e in cfg.angles}
    elems = {tuple(sorted(ident.items())): ident}
    frontier = [ident]
    gens = [dict(m) for m in generators]
    while frontier:
        cur = frontier.pop()
        for m in gens:
            nxt = {e: m[cur[e]] for e in cfg.angles}
            key = tuple(sorted(nxt.items()))
            if key not in elems:
                elems[key] = nxt
                frontier.append(nxt)
    return [elems[k] for k in sorted(elems)]


def admissibility_witness(cfg, group):
    """An (orbit-angle, polygon-mate) pair hit twice by the action, if any."""
    for e in cfg.angles:
        orbit = {m[e] for m in group}
        for block in cfg.polygons:
            inside = sorted((h for h in block if h in orbit), key=cfg.sort_key)
            if len(inside) > 1:
                return tuple(inside[:2])
    return None


def quotient(cfg, group):
    """Orbit configuration of an admissible automorphism group.

    Returns the quotient together with the projection angle map.  The group
    must be given as a full list of automorphisms closed under composition.
    """
    group = [dict(m) for m in group]
    for m in group:
        bad = automorphism_violations(cfg, m)
        if bad:
            raise ConfigurationError(bad)
    keys = {tuple(sorted(m.items())) for m in group}
    ident = tuple(sorted({e: e for e in cfg.angles}.items()))
    if ident not in keys:
        raise FbcError("group does not contain the identity")
    for a in group:
        for b in group:
            comp = tuple(sorted({e: a[b[e]] for e in cfg.angles}.items()))
            if comp not in keys:
                raise FbcError("automorphism list is not closed under composition")
    witness = admissibility_witness(cfg, group)
    if witness is not None:
        raise ConfigurationError([Violation(
            "not-admissible", "a group orbit meets a polygon twice", witness)])

    rep = {}
    for e in cfg.angles:
        orbit = sorted({m[e] for m in group}, key=cfg.sort_key)
        rep[e] = orbit[0]
    reps = []
    for e in cfg.angles:
        if rep[e] == e:
            reps.append(e)
    proj = dict(rep)

    g_map = {r: rep[cfg.g_of(r)] for r in reps}
    cycles = []
    placed = set()
    for r in reps:
        if r in placed:
            continue
        cyc = [r]
        placed.add(r)
        x = g_map[r]
        while x != r:
            cyc.append(x)
            placed.add(x)
            x = g_map[x]
        cycles.append(tuple(cyc))
    poly_blocks = {tuple(sorted({rep[h] for h in cfg.polygon_of(r)}, key=cfg.sort_key))
                   for r in reps}
    layer_blocks = {tuple(sorted({rep[h] for h in cfg.layer_of(r)}, key=cfg.sort_key))
                    for r in reps}
    deg = tuple((c[0], cfg.degree_of(c[0])) for c in cycles)
    raw = RawConfig(angles=tuple(reps), g_cycles=tuple(cycles),
                    polygons=tuple(sorted(poly_blocks, key=lambda b: cfg.sort_key(b[0]))),
                    layers=tuple(sorted(layer_blocks, key=lambda b: cfg.sort_key(b[0]))),
                    degree=deg)
    return validate_fbc(raw), proj
