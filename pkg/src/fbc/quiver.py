"""The quiver with relations attached to a configuration.

Vertices are the polygons, arrows the layer classes (source the polygon,
target the polygon one permutation step on).  A path is nonzero exactly when
it can be threaded by an actual run: some angle z with the i-th layer class
equal to the class of g^(i-1) z, of length at most the degree of z.  Zero
relation generators are the minimal zero paths; the binomial generators pair
the two truncated full turns of two angles sharing a polygon whose turn words
agree on a suffix.

The fundamental group of a quiver with a set of parallel-path pairs is
presented by collapsing a spanning tree: one generator per non-tree arrow,
one relator per pair.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import groups
from .core import FbcError, Violation
from .walks import BWD, FWD, tau_target


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class QuiverWithRelations:
    vertices: tuple           # vertex names
    arrows: tuple             # Arrow, names unique
    zero_relations: tuple     # paths: tuples of arrow names, first applied first
    binomial_relations: tuple  # pairs of parallel paths

    def arrow_map(self):
        return {a.name: a for a in self.arrows}

    def path_endpoints(self, path):
        amap = self.arrow_map()
        if not path:
            raise FbcError("empty path has no endpoints")
        src = amap[path[0]].source
        cur = src
        for name in path:
            a = amap[name]
            if a.source != cur:
                raise FbcError("path does not compose: %r" % (path,))
            cur = a.target
        return src, cur


def _block_name(cfg, block):
    return block[0]


def quiver_of(cfg):
    """Vertices, arrows and relation generators of the configuration."""
    poly_name = {id(b): "P[%s]" % _block_name(cfg, b) for b in cfg.polygons}
    layer_name = {id(b): "L[%s]" % _block_name(cfg, b) for b in cfg.layers}
    vertices = tuple(poly_name[id(b)] for b in cfg.polygons)
    arrows = []
    for b in cfg.layers:
        e = b[0]
        arrows.append(Arrow(layer_name[id(b)],
                            poly_name[id(cfg.polygon_of(e))],
                            poly_name[id(cfg.polygon_of(cfg.g_of(e)))]))
    arrows = tuple(arrows)

    members = {a.name: [] for a in arrows}
    for e in cfg.angles:
        members[layer_name[id(cfg.layer_of(e))]].append(e)

    def threads(path):
        for z in members[path[0]]:
            x = z
            ok = True
            for name in path[1:]:
                x = cfg.g_of(x)
                if layer_name[id(cfg.layer_of(x))] != name:
                    ok = False
                    break
            if ok:
                yield z

    def is_zero(path):
        return not any(len(path) <= cfg.degree_of(z) for z in threads(path))

    max_d = max(cfg.degree_of(e) for e in cfg.angles)
    succ = {}
    for a in arrows:
        succ.setdefault(a.source, []).append(a.name)
    amap = {a.name: a for a in arrows}

    candidates = []

    def extend(path, end):
        if len(path) >= 2 and is_zero(path):
            candidates.append(tuple(path))
            return
        if len(path) == max_d + 1:
            return
        for name in succ.get(end, ()):
            extend(path + [name], amap[name].target)

    for a in arrows:
        extend([a.name], a.target)
    # prefixes are nonzero by the search order; reject zero suffixes/middles
    zero = [p for p in candidates
            if not any(is_zero(p[i:j])
                       for i in range(1, len(p) - 1)
                       for j in range(i + 2, len(p) + 1))]

    pairs = set()
    ordered_pairs = []
    for block in cfg.polygons:
        for e, h in itertools.permutations(block, 2):
            kmax = min(cfg.degree_of(e), cfg.degree_of(h))
            for k in range(kmax):
                agree = all(
                    cfg.layer_of(cfg.g_pow(e, cfg.degree_of(e) - i))
                    is cfg.layer_of(cfg.g_pow(h, cfg.degree_of(h) - i))
                    for i in range(1, k + 1))
                if not agree:
                    continue
                u = tuple(layer_name[id(cfg.layer_of(cfg.g_pow(e, i)))]
                          for i in range(cfg.degree_of(e) - k))
                v = tuple(layer_name[id(cfg.layer_of(cfg.g_pow(h, i)))]
                          for i in range(cfg.degree_of(h) - k))
                if u == v:
                    continue
                key = frozenset((u, v))
                if key not in pairs:
                    pairs.add(key)
                    ordered_pairs.append((u, v))
    return QuiverWithRelations(vertices, arrows, tuple(zero), tuple(ordered_pairs))


def walk_to_quiver_walk(cfg, w):
    """Image of a walk: forward steps to arrows, backward to inverses, jumps drop."""
    layer_name = {id(b): "L[%s]" % _block_name(cfg, b) for b in cfg.layers}
    out = []
    cur = w.source
    for step in w.steps:
        if step == FWD:
            out.append((layer_name[id(cfg.layer_of(cur))], 1))
            cur = cfg.g_of(cur)
        elif step == BWD:
            cur = cfg.g_inv_of(cur)
            out.append((layer_name[id(cfg.layer_of(cur))], -1))
        else:
            cur = tau_target(step)
    return tuple(out)


# -- reduction to the admissible presentation ---------------------------------

def _standard_paths(cfg, layer_name):
    """All (path, hat word) pairs coming from nonempty runs."""
    out = []
    for e in cfg.angles:
        d = cfg.degree_of(e)
        for n in range(1, d + 1):
            path = tuple(layer_name[id(cfg.layer_of(cfg.g_pow(e, i)))]
                         for i in range(n))
            hat = tuple(layer_name[id(cfg.layer_of(cfg.g_pow(e, i)))]
                        for i in range(n, d))
            hat_anchor = "1@%s" % _block_name(cfg, cfg.polygon_of(cfg.g_pow(e, d))) \
                if n == d else ""
            out.append((path, (hat, hat_anchor)))
    return out


def reduce_presentation(cfg):
    """Drop arrows equal to longer paths; rewrite the relation generators.

    Returns the reduced quiver together with the substitution used, as
    (QuiverWithRelations, dict arrow name -> path in the reduced quiver).
    Requires the compatibility axiom (type S) so that equality of runs is
    transitive.
    """
    from .core import classify, FBCClass
    if classify(cfg) is FBCClass.GENERAL:
        raise FbcError("reduction requires a type S configuration")
    full = quiver_of(cfg)
    layer_name = {id(b): "L[%s]" % _block_name(cfg, b) for b in cfg.layers}

    pairs = _standard_paths(cfg, layer_name)
    paths = sorted({p for p, _ in pairs})
    parent = {p: p for p in paths}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    by_hat = {}
    for path, hatkey in pairs:
        by_hat.setdefault(hatkey, []).append(path)
    for group in by_hat.values():
        for a, b in zip(group, group[1:]):
            union(a, b)

    classes = {}
    for p in paths:
        classes.setdefault(find(p), []).append(p)

    arrow_class = {}
    for root, group in classes.items():
        for p in group:
            if len(p) == 1:
                arrow_class[p[0]] = root
    reduced_arrows = set()
    class_rep_arrow = {}
    for root, group in classes.items():
        arrows_here = sorted(p[0] for p in group if len(p) == 1)
        if not arrows_here:
            continue
        if any(len(p) >= 2 for p in group):
            for a in arrows_here:
                reduced_arrows.add(a)
        else:
            class_rep_arrow[root] = arrows_here[0]

    subst = {}

    def reduced_image(arrow):
        if arrow in subst:
            return subst[arrow]
        root = arrow_class[arrow]
        if root not in class_rep_arrow:
            # replace by the longest equal run, whose arrows are all kept
            group = classes[root]
            best = min((p for p in group if len(p) >= 2),
                       key=lambda p: (-len(p), p))
            image = []
            for a in best:
                if a in reduced_arrows:
                    raise FbcError(
                        "longest representative run still uses a dropped arrow")
                image.extend(reduced_image(a))
            subst[arrow] = tuple(image)
        else:
            subst[arrow] = (class_rep_arrow[root],)
        return subst[arrow]

    for a in full.arrows:
        reduced_image(a.name)

    kept = tuple(a for a in full.arrows if a.name not in reduced_arrows
                 and subst[a.name] == (a.name,))
    kept_names = {a.name for a in kept}

    def rewrite(path):
        out = []
        for a in path:
            out.extend(subst[a])
        return tuple(out)

    zero = []
    seen = set()
    for path in full.zero_relations:
        img = rewrite(path)
        if img not in seen:
            seen.add(img)
            zero.append(img)
    # keep only minimal images
    minimal = []
    for p in zero:
        others = [q for q in zero if q != p]
        if not any(_is_subpath(q, p) for q in others):
            minimal.append(p)
    binom = []
    seenb = set()
    for u, v in full.binomial_relations:
        iu, iv = rewrite(u), rewrite(v)
        if iu == iv:
            continue
        key = frozenset((iu, iv))
        if key not in seenb:
            seenb.add(key)
            binom.append((iu, iv))
    reduced = QuiverWithRelations(full.vertices, kept, tuple(minimal), tuple(binom))
    return reduced, dict(subst)


def _is_subpath(q, p):
    if len(q) > len(p):
        return False
    return any(p[i:i + len(q)] == q for i in range(len(p) - len(q) + 1))


# -- fundamental group ---------------------------------------------------------

def _spanning_tree(qwr, base):
    vorder = {v: i for i, v in enumerate(qwr.vertices)}
    aorder = {a.name: i for i, a in enumerate(qwr.arrows)}
    adj = {}
    for a in qwr.arrows:
        adj.setdefault(a.source, []).append((a.target, a.name))
        adj.setdefault(a.target, []).append((a.source, a.name))
    seen = {base}
    tree = set()
    frontier = [base]
    while frontier:
        nxt = []
        for v in frontier:
            for other, name in sorted(adj.get(v, ()),
                                      key=lambda t: (vorder[t[0]], aorder[t[1]])):
                if other not in seen:
                    seen.add(other)
                    tree.add(name)
                    nxt.append(other)
        frontier = nxt
    return seen, tree


def pi1_quiver(qwr, minimal_pairs, base):
    """Spanning-tree presentation of the fundamental group.

    ``minimal_pairs`` lists pairs of parallel paths identified in the group;
    for type S configurations these are the binomial generators.
    """
    if base not in qwr.vertices:
        raise FbcError("base vertex %r not in the quiver" % (base,))
    seen, tree = _spanning_tree(qwr, base)
    if len(seen) != len(qwr.vertices):
        raise FbcError("quiver is not connected")
    gens = tuple(a.name for a in qwr.arrows if a.name not in tree)

    def word(path):
        out = ()
        for name in path:
            if name not in tree:
                out = groups.word_mul(out, groups.letter(name))
        return out

    relators = []
    for u, v in minimal_pairs:
        su, tu = qwr.path_endpoints(u)
        sv, tv = qwr.path_endpoints(v)
        if (su, tu) != (sv, tv):
            raise FbcError("relation pair is not parallel")
        relators.append(groups.word_mul(word(u), groups.word_inverse(word(v))))
    return groups.presentation(gens, relators)


def quiver_walk_word(qwr, base, qwalk):
    """Image of a quiver walk in the spanning-tree presentation."""
    _, tree = _spanning_tree(qwr, base)
    out = ()
    for name, exp in qwalk:
        if name not in tree:
            out = groups.word_mul(out, groups.letter(name, exp))
    return out


# -- coverings of quivers with relations ---------------------------------------

@dataclass(frozen=True)
class QuiverMap:
    dom: QuiverWithRelations
    cod: QuiverWithRelations
    vertex_map: dict
    arrow_map: dict


def quiver_map_of(cfg_map, dom_cfg, cod_cfg):
    """The quiver map induced by an angle map."""
    vmap = {}
    amap = {}
    for b in dom_cfg.polygons:
        img = cod_cfg.polygon_of(cfg_map[b[0]])
        vmap["P[%s]" % b[0]] = "P[%s]" % img[0]
    for b in dom_cfg.layers:
        img = cod_cfg.layer_of(cfg_map[b[0]])
        amap["L[%s]" % b[0]] = "L[%s]" % img[0]
    return QuiverMap(quiver_of(dom_cfg), quiver_of(cod_cfg), vmap, amap)


def quiver_covering_violations(qmap):
    dom, cod = qmap.dom, qmap.cod
    violations = []
    dom_arrows = dom.arrow_map()
    cod_arrows = cod.arrow_map()
    for a in dom.arrows:
        img = cod_arrows[qmap.arrow_map[a.name]]
        if (img.source != qmap.vertex_map[a.source]
                or img.target != qmap.vertex_map[a.target]):
            violations.append(Violation(
                "quiver-morphism", "arrow image has wrong endpoints", (a.name,)))
    if violations:
        return violations
    # star bijections at every vertex
    out_dom, in_dom, out_cod, in_cod = {}, {}, {}, {}
    for a in dom.arrows:
        out_dom.setdefault(a.source, []).append(a.name)
        in_dom.setdefault(a.target, []).append(a.name)
    for a in cod.arrows:
        out_cod.setdefault(a.source, []).append(a.name)
        in_cod.setdefault(a.target, []).append(a.name)
    for v in dom.vertices:
        w = qmap.vertex_map[v]
        for local, remote, tag in ((out_dom, out_cod, "out"), (in_dom, in_cod, "in")):
            imgs = [qmap.arrow_map[a] for a in local.get(v, ())]
            if sorted(imgs) != sorted(remote.get(w, ())):
                violations.append(Violation(
                    "star-bijection",
                    "%s-arrows at %s do not match %s-arrows at %s" % (tag, v, tag, w),
                    (v,)))
    if violations:
        return violations

    def lift_path(path, start_vertex):
        by_src = {}
        for a in dom.arrows:
            by_src.setdefault((a.source, qmap.arrow_map[a.name]), a.name)
        cur = start_vertex
        out = []
        for name in path:
            key = (cur, name)
            if key not in by_src:
                return None
            out.append(by_src[key])
            cur = dom_arrows[by_src[key]].target
        return tuple(out)

    def lift_path_to(path, end_vertex):
        by_tgt = {}
        for a in dom.arrows:
            by_tgt.setdefault((a.target, qmap.arrow_map[a.name]), a.name)
        cur = end_vertex
        out = []
        for name in reversed(path):
            key = (cur, name)
            if key not in by_tgt:
                return None
            out.append(by_tgt[key])
            cur = dom_arrows[by_tgt[key]].source
        return tuple(reversed(out))

    dom_zero = set(dom.zero_relations)
    dom_pairs = {frozenset((u, v)) for u, v in dom.binomial_relations}
    fibers = {}
    for v in dom.vertices:
        fibers.setdefault(qmap.vertex_map[v], []).append(v)
    for path in cod.zero_relations:
        src, tgt = cod.path_endpoints(path)
        for v in fibers.get(src, ()):
            lifted = lift_path(path, v)
            if lifted is None or lifted not in dom_zero:
                violations.append(Violation(
                    "relation-lift", "zero relation does not lift at a source fiber",
                    (v,) + tuple(path)))
        for v in fibers.get(tgt, ()):
            lifted = lift_path_to(path, v)
            if lifted is None or lifted not in dom_zero:
                violations.append(Violation(
                    "relation-lift", "zero relation does not lift at a target fiber",
                    (v,) + tuple(path)))
    for u, v in cod.binomial_relations:
        src, tgt = cod.path_endpoints(u)
        for x in fibers.get(src, ()):
            lu, lv = lift_path(u, x), lift_path(v, x)
            if lu is None or lv is None or frozenset((lu, lv)) not in dom_pairs:
                violations.append(Violation(
                    "relation-lift",
                    "binomial relation does not lift at a source fiber", (x,)))
        for x in fibers.get(tgt, ()):
            lu, lv = lift_path_to(u, x), lift_path_to(v, x)
            if lu is None or lv is None or frozenset((lu, lv)) not in dom_pairs:
                violations.append(Violation(
                    "relation-lift",
                    "binomial relation does not lift at a target fiber", (x,)))
    return violations


# -- simple connectivity criterion ----------------------------------------------

@dataclass(frozen=True)
class SimpleConnectivityReport:
    no_oriented_cycles: bool
    unique_path_per_arrow: bool
    pi1_trivial: bool


def simply_connected_check(qwr, minimal_pairs):
    order = {v: i for i, v in enumerate(qwr.vertices)}
    succ = {v: [] for v in qwr.vertices}
    for a in qwr.arrows:
        succ[a.source].append(a.target)
    state = {v: 0 for v in qwr.vertices}
    acyclic = True

    def visit(v):
        nonlocal acyclic
        state[v] = 1
        for w in succ[v]:
            if state[w] == 1:
                acyclic = False
            elif state[w] == 0:
                visit(w)
        state[v] = 2

    for v in qwr.vertices:
        if state[v] == 0:
            visit(v)

    unique = acyclic
    if acyclic:
        counts = {}

        def npaths(a, b):
            if a == b:
                return 1
            if (a, b) not in counts:
                total = 0
                for w in succ[a]:
                    total += npaths(w, b)
                    if total > 1:
                        break
                counts[(a, b)] = total
            return counts[(a, b)]

        for arrow in qwr.arrows:
            counts.clear()
            if npaths(arrow.source, arrow.target) != 1:
                unique = False
                break

    try:
        pres = pi1_quiver(qwr, minimal_pairs, qwr.vertices[0])
        simplified = groups.tietze_simplify(pres)
        trivial = not simplified.generators
    except FbcError:
        trivial = False
    return SimpleConnectivityReport(acyclic, unique, trivial)


def truncation_quiver(tc):
    """Quiver of the interior of a truncated cover (singleton layers).

    Vertices are the complete polygon blocks made of interior angles; arrows
    the interior angles whose forward step stays in the picture.  Relations
    are included only when every angle supporting them is available, so the
    result understates the relation set near the boundary but is exact on a
    sufficiently deep interior.
    """
    from .coverings import TruncationBoundary
    blocks = []
    block_of = {}
    for a in tc.angles:
        if a not in tc.interior or a in block_of:
            continue
        try:
            block = tc.polygon_of(a)
        except TruncationBoundary:
            continue
        if all(m in tc.interior for m in block):
            blocks.append(block)
            for m in block:
                block_of[m] = block
    vname = {id(b): "P%d" % i for i, b in enumerate(blocks)}
    arrows = []
    aname = {}
    for a in tc.angles:
        if a not in block_of:
            continue
        try:
            ga = tc.g_of(a)
        except TruncationBoundary:
            continue
        if ga in block_of:
            name = "a%d" % len(arrows)
            aname[a] = name
            arrows.append(Arrow(name, vname[id(block_of[a])],
                                vname[id(block_of[ga])]))
    carrier = set(aname)

    def full_turn(e):
        word = []
        x = e
        for _ in range(tc.degree_of(e)):
            if x not in carrier:
                return None
            word.append(aname[x])
            try:
                x = tc.g_of(x)
            except TruncationBoundary:
                return None
        return tuple(word)

    pairs = []
    seen = set()
    for block in blocks:
        for e, h in itertools.combinations(block, 2):
            u, v = full_turn(e), full_turn(h)
            if u is None or v is None or u == v:
                continue
            key = frozenset((u, v))
            if key not in seen:
                seen.add(key)
                pairs.append((u, v))

    # minimal zero paths with singleton layers: composable pairs that are not
    # permutation successors, and runs one step past their degree
    zero = []
    for a in tc.angles:
        if a not in carrier:
            continue
        ga = tc.g_of(a)
        for b in block_of[ga]:
            if b != ga and b in carrier:
                zero.append((aname[a], aname[b]))
        word = []
        x = a
        ok = True
        for _ in range(tc.degree_of(a) + 1):
            if x not in carrier:
                ok = False
                break
            word.append(aname[x])
            try:
                x = tc.g_of(x)
            except TruncationBoundary:
                ok = False
                break
        if ok:
            zero.append(tuple(word))
    return QuiverWithRelations(tuple(vname[id(b)] for b in blocks),
                               tuple(arrows), tuple(zero), tuple(pairs))


def emit_dot(qwr):
    lines = ["digraph quiver {"]
    for v in qwr.vertices:
        lines.append('  "%s";' % v)
    for a in qwr.arrows:
        lines.append('  "%s" -> "%s" [label="%s"];' % (a.source, a.target, a.name))
    for path in qwr.zero_relations:
        lines.append("  // zero: %s" % " ".join(path))
    for u, v in qwr.binomial_relations:
        lines.append("  // equal: %s = %s" % (" ".join(u), " ".join(v)))
    lines.append("}")
    return "\n".join(lines) + "\n"
