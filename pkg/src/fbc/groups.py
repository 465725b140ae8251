"""Finitely presented groups and groupoids, just enough for this package.

Words are tuples of (generator, +-1) pairs kept freely reduced.  The only
canonical invariant we compute is the abelianization, via an integer Smith
normal form with exact arithmetic; presentation equality beyond that is out
of scope, so tests compare abelian invariants and verify relator images
directly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd

from .core import FbcError


# -- free words ---------------------------------------------------------------

def free_reduce(pairs):
    out = []
    for gen, exp in pairs:
        if exp not in (1, -1):
            raise FbcError("word letters must carry exponent +-1")
        if out and out[-1][0] == gen and out[-1][1] == -exp:
            out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


def word_inverse(word):
    return tuple((gen, -exp) for gen, exp in reversed(word))


def word_mul(*words):
    pairs = []
    for w in words:
        pairs.extend(w)
    return free_reduce(pairs)


def word_pow(word, n):
    if n < 0:
        return word_pow(word_inverse(word), -n)
    return word_mul(*([word] * n)) if n else ()


def cyclic_reduce(word):
    word = free_reduce(word)
    while len(word) >= 2 and word[0][0] == word[-1][0] and word[0][1] == -word[-1][1]:
        word = word[1:-1]
    return word


def letter(gen, exp=1):
    return ((gen, exp),)


# -- presentations ------------------------------------------------------------

@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple
    relators: tuple


def presentation(generators, relators):
    """Build a presentation; relators are freely and cyclically reduced."""
    gens = tuple(generators)
    seen = set()
    rels = []
    for r in relators:
        r = cyclic_reduce(free_reduce(r))
        if not r:
            continue
        key = min(_rotations(r) + _rotations(word_inverse(r)))
        if key not in seen:
            seen.add(key)
            rels.append(r)
    for r in rels:
        for gen, _ in r:
            if gen not in gens:
                raise FbcError("relator uses unknown generator %r" % (gen,))
    return GroupPresentation(gens, tuple(rels))


def _rotations(word):
    return [word[i:] + word[:i] for i in range(max(len(word), 1))]


@dataclass(frozen=True)
class GroupoidGenerator:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class GroupoidPresentation:
    """Objects, generating morphisms, and relations given as word pairs."""

    objects: tuple
    generators: tuple          # GroupoidGenerator
    relations: tuple           # pairs of words over generator names

    def generator_map(self):
        return {g.name: g for g in self.generators}

    def word_endpoints(self, word):
        gmap = self.generator_map()
        if not word:
            raise FbcError("empty groupoid word has no endpoints")
        cur = None
        start = None
        for gen, exp in word:
            g = gmap[gen]
            a, b = (g.source, g.target) if exp == 1 else (g.target, g.source)
            if cur is None:
                start = a
            elif cur != a:
                raise FbcError("groupoid word does not chain: %r" % (word,))
            cur = b
        return start, cur


# -- abelianization -----------------------------------------------------------

@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else "Z^%d" % self.free_rank)
        parts.extend("Z/%d" % t for t in self.torsion)
        return " x ".join(parts) if parts else "1"


def smith_diagonal(rows, ncols):
    """Diagonal of the Smith normal form of an integer matrix (list of rows)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    diag = []
    top = 0
    while top < min(nrows, ncols):
        # find a pivot of least absolute value
        pivot = None
        best = None
        for i in range(top, nrows):
            for j in range(top, ncols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        m[top], m[i] = m[i], m[top]
        for row in m:
            row[top], row[j] = row[j], row[top]
        changed = True
        while changed:
            changed = False
            p = m[top][top]
            for i in range(top + 1, nrows):
                q = m[i][top] // p
                if q:
                    for j in range(top, ncols):
                        m[i][j] -= q * m[top][j]
                if m[i][top]:
                    m[top], m[i] = m[i], m[top]
                    changed = True
                    break
            if changed:
                continue
            p = m[top][top]
            for j in range(top + 1, ncols):
                q = m[top][j] // p
                if q:
                    for i in range(top, nrows):
                        m[i][j] -= q * m[i][top]
                if m[top][j]:
                    for row in m:
                        row[top], row[j] = row[j], row[top]
                    changed = True
                    break
        diag.append(abs(m[top][top]))
        top += 1
    # enforce the divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            if a and b % a:
                g = gcd(a, b)
                diag[i], diag[j] = g, a * b // g
    return [d for d in diag if d]


def abelianize(pres):
    """Invariant factors of the abelianized presentation."""
    gens = list(pres.generators)
    idx = {g: i for i, g in enumerate(gens)}
    rows = []
    for rel in pres.relators:
        row = [0] * len(gens)
        for gen, exp in rel:
            row[idx[gen]] += exp
        rows.append(row)
    diag = smith_diagonal(rows, len(gens))
    rank = len(gens) - len(diag)
    torsion = tuple(d for d in diag if d > 1)
    return AbelianInvariants(rank, torsion)


# -- groupoid to group collapse ------------------------------------------------

def groupoid_to_group(gp, base):
    """Contract a spanning tree of the object graph onto the base object."""
    if base not in gp.objects:
        raise FbcError("base object %r not in the groupoid" % (base,))
    adj = {}
    for g in gp.generators:
        adj.setdefault(g.source, []).append((g.target, g.name, 1))
        adj.setdefault(g.target, []).append((g.source, g.name, -1))
    tree = {}          # object -> word from base to it
    tree[base] = ()
    order = [base]
    frontier = [base]
    tree_gens = set()
    while frontier:
        nxt = []
        for obj in frontier:
            for other, name, exp in adj.get(obj, ()):
                if other not in tree:
                    tree[other] = word_mul(tree[obj], letter(name, exp))
                    tree_gens.add(name)
                    order.append(other)
                    nxt.append(other)
        frontier = nxt
    if set(tree) != set(gp.objects):
        raise FbcError("groupoid object graph is not connected")

    def collapse(word):
        out = ()
        for gen, exp in word:
            if gen in tree_gens:
                continue
            out = word_mul(out, letter(gen, exp))
        return out

    gens = tuple(g.name for g in gp.generators if g.name not in tree_gens)
    relators = []
    for u, v in gp.relations:
        if gp.word_endpoints(u) != gp.word_endpoints(v):
            raise FbcError("groupoid relation between non-parallel morphisms")
        relators.append(word_mul(collapse(u), word_inverse(collapse(v))))
    return presentation(gens, relators)


# -- Tietze simplification ------------------------------------------------------

def _substitute(word, gen, replacement):
    out = ()
    for g, exp in word:
        if g == gen:
            out = word_mul(out, replacement if exp == 1 else word_inverse(replacement))
        else:
            out = word_mul(out, letter(g, exp))
    return out


def tietze_simplify(pres, budget=1000):
    """Repeatedly eliminate generators defined by a relator; keeps invariants.

    A generator is eliminable when some relator contains it exactly once.
    ``budget`` caps the number of elimination passes.
    """
    before = abelianize(pres)
    gens = list(pres.generators)
    rels = list(pres.relators)
    for _ in range(budget):
        rels = [cyclic_reduce(r) for r in rels]
        rels = [r for r in rels if r]
        choice = None
        for ri, rel in enumerate(rels):
            counts = {}
            for g, _ in rel:
                counts[g] = counts.get(g, 0) + 1
            # prefer eliminating the latest generator with the shortest relator
            for g in gens:
                if counts.get(g) == 1:
                    if choice is None or len(rel) < len(rels[choice[0]]):
                        choice = (ri, g)
                    break
        if choice is None:
            break
        ri, gen = choice
        rel = rels[ri]
        k = next(i for i, (g, _) in enumerate(rel) if g == gen)
        rotated = rel[k:] + rel[:k]
        head, tail = rotated[0], rotated[1:]
        replacement = word_inverse(tail)
        if head[1] == -1:
            replacement = word_inverse(replacement)
        del rels[ri]
        rels = [_substitute(r, gen, replacement) for r in rels]
        gens.remove(gen)
    simplified = presentation(tuple(gens), tuple(rels))
    if abelianize(simplified) != before:
        raise AssertionError("simplification changed the abelian invariants")
    return simplified


# -- text form -----------------------------------------------------------------

_NAME = re.compile(r"^[a-z][a-z0-9_]*$")


def _display_names(generators):
    if all(_NAME.match(g) for g in generators) and len(
            set(g.lower() for g in generators)) == len(generators):
        return {g: g for g in generators}
    return {g: "x%d" % (i + 1) for i, g in enumerate(generators)}


def presentation_text(pres):
    """One-line text form; capitalized first letter marks an inverse.

    Generators outside [a-z][a-z0-9_]* are renamed x1, x2, ... and the
    renaming is listed on preceding comment lines.
    """
    names = _display_names(pres.generators)
    lines = []
    if any(names[g] != g for g in pres.generators):
        for g in pres.generators:
            lines.append("# %s = %s" % (names[g], g))

    def fmt(word):
        toks = []
        for g, exp in word:
            n = names[g]
            toks.append(n if exp == 1 else n[0].upper() + n[1:])
        return " ".join(toks)

    body = "gens: " + " ".join(names[g] for g in pres.generators)
    if pres.relators:
        body += "; rels: " + ", ".join(fmt(r) for r in pres.relators)
    lines.append(body)
    return "\n".join(lines)
