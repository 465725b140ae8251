"""Walks on a configuration and their homotopy.

A walk is a start angle followed by steps: ``g`` (forward along the
permutation), ``G`` (backward), or ``t:<angle>`` (a jump inside the current
polygon).  Homotopy is generated by cancellation of inverse steps and trivial
jumps, merging of consecutive jumps, sliding a jump across a full degree turn,
and sliding a jump across one g-step when the two angles share a layer.

For configurations with all-singleton layers the word problem is solved
exactly: every walk factors uniquely as a number of full turns at its terminal
followed by a *special* walk (forward runs shorter than the degree, separated
by jumps to a different angle of the polygon).  ``ms_normal_form`` computes
that factorization by lifting the walk, one step at a time, into the cover
whose angles are pairs (special walk, turn count).

All functions take the configuration (or a partial cover that quacks like
one) as their first argument; walks themselves are plain immutable data.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .core import FbcError

FWD = "g"
BWD = "G"
TAU = "t:"


class InvalidWalk(FbcError):
    pass


class HomotopyUndecided(FbcError):
    pass


@dataclass(frozen=True)
class Walk:
    source: str
    steps: tuple = ()

    def __len__(self):
        return len(self.steps)

    def text(self):
        return " ".join((self.source,) + self.steps)


def trivial_walk(e):
    return Walk(e)


def tau_step(target):
    return TAU + target


def tau_target(step):
    return step[2:]


def parse_walk(text):
    tokens = text.split()
    if not tokens:
        raise InvalidWalk("empty walk text")
    for tok in tokens[1:]:
        if tok not in (FWD, BWD) and not tok.startswith(TAU):
            raise InvalidWalk("bad walk step %r" % tok)
    return Walk(tokens[0], tuple(tokens[1:]))


def walk_angles(cfg, w):
    """Angles visited by the walk, source first; raises on an illegal step."""
    out = [w.source]
    cur = w.source
    for step in w.steps:
        if step == FWD:
            cur = cfg.g_of(cur)
        elif step == BWD:
            cur = cfg.g_inv_of(cur)
        else:
            tgt = tau_target(step)
            if tgt not in cfg.polygon_of(cur):
                raise InvalidWalk(
                    "jump from %s to %s leaves the polygon" % (cur, tgt))
            cur = tgt
        out.append(cur)
    return out


def target(cfg, w):
    return walk_angles(cfg, w)[-1]


def is_valid_walk(cfg, w):
    try:
        walk_angles(cfg, w)
        return True
    except (InvalidWalk, KeyError):
        return False


def compose(cfg, u, v):
    """The walk running v first, then u."""
    if target(cfg, v) != u.source:
        raise InvalidWalk("cannot compose: v ends at %s, u starts at %s"
                          % (target(cfg, v), u.source))
    return Walk(v.source, v.steps + u.steps)


def invert(cfg, w):
    angles = walk_angles(cfg, w)
    steps = []
    for i in range(len(w.steps) - 1, -1, -1):
        step = w.steps[i]
        if step == FWD:
            steps.append(BWD)
        elif step == BWD:
            steps.append(FWD)
        else:
            steps.append(tau_step(angles[i]))
    return Walk(angles[-1], tuple(steps))


def power(cfg, w, n):
    """n-fold composite of a closed walk (negative n inverts first)."""
    if w.source != target(cfg, w):
        raise InvalidWalk("power of a non-closed walk")
    if n < 0:
        return power(cfg, invert(cfg, w), -n)
    return Walk(w.source, w.steps * n)


def g_run(cfg, e, n):
    """The walk of n forward (or -n backward) permutation steps from e."""
    if n >= 0:
        return Walk(e, (FWD,) * n)
    return Walk(e, (BWD,) * (-n))


def run_to(cfg, a, b):
    """Shortest forward run within the orbit from a to b."""
    n = 0
    x = a
    while x != b:
        x = cfg.g_of(x)
        n += 1
        if n > len(cfg.vertex_of(a)):
            raise InvalidWalk("%s and %s are not in one orbit" % (a, b))
    return g_run(cfg, a, n)


def _require_ms(cfg):
    if not cfg.is_ms():
        raise FbcError("operation defined only for all-singleton layers")


def winding(cfg, w):
    """Signed number of full turns: +1/d per forward step, -1/d per backward.

    Homotopy invariant when all layers are singletons.
    """
    _require_ms(cfg)
    total = Fraction(0)
    cur = w.source
    for step in w.steps:
        if step == FWD:
            total += Fraction(1, cfg.degree_of(cur))
            cur = cfg.g_of(cur)
        elif step == BWD:
            total -= Fraction(1, cfg.degree_of(cur))
            cur = cfg.g_inv_of(cur)
        else:
            tgt = tau_target(step)
            if tgt not in cfg.polygon_of(cur):
                raise InvalidWalk("jump leaves the polygon")
            cur = tgt
    return total


# -- special walks and the exact normal form ---------------------------------

@dataclass(frozen=True)
class SpecialWalk:
    """Alternating forward runs and polygon jumps, in compressed form.

    ``runs`` is a tuple of (angle, exponent) pairs: start at the first angle,
    apply g exponent-many times, jump to the next angle, and so on.  Interior
    exponents are strictly between 0 and the degree; the first and last lie
    in [0, degree); every jump lands on a different angle of the polygon.
    """

    runs: tuple

    @property
    def source(self):
        return self.runs[0][0]

    def terminal(self, cfg):
        e, i = self.runs[-1]
        return cfg.g_pow(e, i)

    def to_walk(self, cfg):
        steps = []
        prev_end = None
        for e, i in self.runs:
            if prev_end is not None:
                steps.append(tau_step(e))
            steps.extend([FWD] * i)
            prev_end = cfg.g_pow(e, i)
        return Walk(self.runs[0][0], tuple(steps))

    def __len__(self):
        return sum(i for _, i in self.runs) + len(self.runs) - 1


def trivial_special(e):
    return SpecialWalk(((e, 0),))


def is_special(cfg, sw):
    runs = sw.runs
    for j, (e, i) in enumerate(runs):
        d = cfg.degree_of(e)
        lo_ok = i > 0 or j == 0 or j == len(runs) - 1
        if not (0 <= i < d and lo_ok):
            return False
        if j + 1 < len(runs):
            end = cfg.g_pow(e, i)
            nxt = runs[j + 1][0]
            if nxt == end or nxt not in cfg.polygon_of(end):
                return False
    return True


@dataclass(frozen=True)
class MsNormalForm:
    special: SpecialWalk
    turns: int

    def representative(self, cfg):
        """The walk (full turns at the target) o (special part)."""
        sw = self.special.to_walk(cfg)
        t = self.special.terminal(cfg)
        extra = []
        x = t
        for _ in range(abs(self.turns)):
            d = cfg.degree_of(x)
            if self.turns > 0:
                extra.extend([FWD] * d)
                x = cfg.g_pow(x, d)
            else:
                extra.extend([BWD] * d)
                x = cfg.g_pow(x, -d)
        return Walk(sw.source, sw.steps + tuple(extra))


def _block_root(runs):
    if len(runs) == 1 or runs[-1][1] > 0:
        return runs
    return runs[:-1]


def _cover_forward(cfg, runs, n):
    e, i = runs[-1]
    if i < cfg.degree_of(e) - 1:
        return runs[:-1] + ((e, i + 1),), n
    return runs[:-1] + ((e, 0),), n + 1


def _cover_backward(cfg, runs, n):
    e, i = runs[-1]
    if i > 0:
        return runs[:-1] + ((e, i - 1),), n
    return runs[:-1] + ((e, cfg.degree_of(e) - 1),), n - 1


def _cover_jump(cfg, runs, n, y):
    """Lift a polygon jump whose downstairs target is y."""
    x_low = cfg.g_pow(runs[-1][0], runs[-1][1])
    h = y
    for _ in range(abs(n)):
        h = cfg.sigma_inv_of(h) if n > 0 else cfg.sigma_of(h)
    if h == x_low:
        return runs, n
    root = _block_root(runs)
    root_end = cfg.g_pow(root[-1][0], root[-1][1])
    if h == root_end:
        return root, n
    if h not in cfg.polygon_of(root_end):
        raise InvalidWalk("jump leaves the polygon")
    return root + ((h, 0),), n


def ms_normal_form(cfg, w):
    """Unique factorization of a walk as full turns after a special walk."""
    _require_ms(cfg)
    runs = ((w.source, 0),)
    n = 0
    cur = w.source
    for step in w.steps:
        if step == FWD:
            runs, n = _cover_forward(cfg, runs, n)
            cur = cfg.g_of(cur)
        elif step == BWD:
            runs, n = _cover_backward(cfg, runs, n)
            cur = cfg.g_inv_of(cur)
        else:
            y = tau_target(step)
            if y not in cfg.polygon_of(cur):
                raise InvalidWalk("jump from %s to %s leaves the polygon" % (cur, y))
            runs, n = _cover_jump(cfg, runs, n, y)
            cur = y
    form = MsNormalForm(SpecialWalk(runs), n)
    end = form.special.terminal(cfg)
    for _ in range(abs(n)):
        end = cfg.sigma_of(end) if n > 0 else cfg.sigma_inv_of(end)
    if end != cur:
        raise AssertionError("normal form terminal mismatch")
    return form


class Homotopy(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


def _walk_key(w):
    return (w.source, w.steps)


def homotopy_moves(cfg, w):
    """All walks one generating move away from w (both directions of each).

    Covers cancellation, jump merging/splitting, the full-turn slide, and the
    single-step layer slide, in both step orientations.
    """
    angles = walk_angles(cfg, w)
    steps = w.steps
    out = []

    def emit(i, removed, inserted):
        out.append(Walk(w.source, steps[:i] + tuple(inserted) + steps[i + removed:]))

    # insertions of cancelling pairs and trivial jumps
    for i in range(len(steps) + 1):
        emit(i, 0, (FWD, BWD))
        emit(i, 0, (BWD, FWD))
        emit(i, 0, (tau_step(angles[i]),))
    for i, a in enumerate(steps):
        b = steps[i + 1] if i + 1 < len(steps) else None
        if a.startswith(TAU) and tau_target(a) == angles[i]:
            emit(i, 1, ())
        if b is not None:
            if (a, b) in ((FWD, BWD), (BWD, FWD)):
                emit(i, 2, ())
            if a.startswith(TAU) and b.startswith(TAU):
                emit(i, 2, (b,))
        if a.startswith(TAU):
            for mid in cfg.polygon_of(angles[i]):
                if mid != angles[i] and mid != angles[i + 1]:
                    emit(i, 1, (tau_step(mid), a))

    def turn_run(j, direction, length):
        # j..j+length-1 all equal to direction?
        return (0 <= j and j + length <= len(steps)
                and all(s == direction for s in steps[j:j + length]))

    for i, a in enumerate(steps):
        if not a.startswith(TAU):
            continue
        e, h = angles[i], angles[i + 1]
        d_e, d_h = cfg.degree_of(e), cfg.degree_of(h)
        # forward turn before the jump  ->  jump first, forward turn after
        if turn_run(i - d_e, FWD, d_e):
            c = cfg.sigma_inv_of(h)
            base = angles[i - d_e]
            if c in cfg.polygon_of(base):
                emit(i - d_e, d_e + 1, (tau_step(c),) + (FWD,) * cfg.degree_of(c))
        # jump then forward turn  ->  forward turn then jump
        if turn_run(i + 1, FWD, d_h):
            emit(i, d_h + 1, (FWD,) * d_e + (tau_step(cfg.sigma_of(h)),))
        # backward turn before the jump  ->  jump first, backward turn after
        if turn_run(i - d_e, BWD, d_e):
            c = cfg.sigma_of(h)
            base = angles[i - d_e]
            if c in cfg.polygon_of(base):
                emit(i - d_e, d_e + 1, (tau_step(c),) + (BWD,) * cfg.degree_of(c))
        # jump then backward turn  ->  backward turn then jump
        if turn_run(i + 1, BWD, d_h):
            emit(i, d_h + 1, (BWD,) * d_e + (tau_step(cfg.sigma_inv_of(h)),))
        # layer slides across one permutation step
        if i + 1 < len(steps) and steps[i + 1] == FWD and h in cfg.layer_of(e):
            emit(i, 2, (FWD, tau_step(cfg.g_of(h))))
        if i + 1 < len(steps) and steps[i + 1] == BWD:
            if cfg.g_inv_of(h) in cfg.layer_of(cfg.g_inv_of(e)):
                emit(i, 2, (BWD, tau_step(cfg.g_inv_of(h))))
        if i >= 1 and steps[i - 1] == FWD:
            c = cfg.g_inv_of(h)
            if c in cfg.layer_of(cfg.g_inv_of(e)):
                emit(i - 1, 2, (tau_step(c), FWD))
        if i >= 1 and steps[i - 1] == BWD:
            if h in cfg.layer_of(e):
                emit(i - 1, 2, (tau_step(cfg.g_of(h)), BWD))
    return out


def rewrite_closure(cfg, w, max_len, max_states=100000):
    """Walks reachable from w by generating moves, capped in length and count.

    Returns (set of reached walk keys, True when the closure was exhausted
    under the caps).
    """
    start = _walk_key(w)
    seen = {start: w}
    queue = deque([w])
    complete = True
    while queue:
        cur = queue.popleft()
        for nxt in homotopy_moves(cfg, cur):
            if len(nxt.steps) > max_len:
                complete = False
                continue
            key = _walk_key(nxt)
            if key in seen:
                continue
            if len(seen) >= max_states:
                return set(seen), False
            seen[key] = nxt
            queue.append(nxt)
    return set(seen), complete


def bounded_homotopy_components(cfg, base, max_len):
    """Partition all walks from base of bounded length by capped rewriting.

    Each walk's one-move neighbours are computed once; moves leaving the
    length bound are ignored, so the partition refines true homotopy and two
    walks land together exactly when the bounded closure oracle joins them.
    Returns a dict walk key -> component representative key.
    """
    keys = []
    for w in enumerate_walks(cfg, base, max_len):
        keys.append(_walk_key(w))
    index = set(keys)
    parent = {k: k for k in keys}

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for w in enumerate_walks(cfg, base, max_len):
        k = _walk_key(w)
        for nxt in homotopy_moves(cfg, w):
            nk = _walk_key(nxt)
            if nk in index:
                ra, rb = find(k), find(nk)
                if ra != rb:
                    parent[rb] = ra
    return {k: find(k) for k in keys}


def oracle_homotopic(cfg, u, v, max_len=None, max_states=100000):
    """Bounded rewrite-closure test: YES when v is reached from u."""
    if u.source != v.source:
        return Homotopy.NO
    if target(cfg, u) != target(cfg, v):
        return Homotopy.NO
    if max_len is None:
        max_d = max(cfg.degree_of(e) for e in cfg.angles)
        max_len = max(len(u.steps), len(v.steps)) + 2 * max_d + 2
    reached, complete = rewrite_closure(cfg, u, max_len, max_states)
    if _walk_key(v) in reached:
        return Homotopy.YES
    return Homotopy.UNKNOWN


def homotopic(cfg, u, v, budget=64, max_len=None):
    """Decide homotopy: exactly for all-singleton layers, bounded otherwise.

    ``budget`` caps the number of rewrite states explored per walk in the
    bounded search (scaled by 1024), matching the CLI's --budget flag.
    """
    if not is_valid_walk(cfg, u) or not is_valid_walk(cfg, v):
        raise InvalidWalk("homotopy of invalid walks")
    if u.source != v.source or target(cfg, u) != target(cfg, v):
        return Homotopy.NO
    if cfg.is_ms():
        return (Homotopy.YES
                if ms_normal_form(cfg, u) == ms_normal_form(cfg, v)
                else Homotopy.NO)
    return oracle_homotopic(cfg, u, v, max_len=max_len,
                            max_states=max(budget, 1) * 1024)


# -- enumeration --------------------------------------------------------------

def _step_options(cfg, cur):
    opts = [FWD, BWD]
    for h in cfg.polygon_of(cur):
        opts.append(tau_step(h))
    return opts


def enumerate_walks(cfg, base, max_len):
    """All valid walks from base with at most max_len steps, in shortlex order."""
    frontier = [(base, ())]
    yield Walk(base)
    for _ in range(max_len):
        new_frontier = []
        for cur, steps in frontier:
            for step in _step_options(cfg, cur):
                if step == FWD:
                    nxt = cfg.g_of(cur)
                elif step == BWD:
                    nxt = cfg.g_inv_of(cur)
                else:
                    nxt = tau_target(step)
                new_frontier.append((nxt, steps + (step,)))
                yield Walk(base, steps + (step,))
        frontier = new_frontier


def enumerate_closed_walks(cfg, base, max_len):
    for w in enumerate_walks(cfg, base, max_len):
        if target(cfg, w) == base:
            yield w


def random_walk(cfg, start, length, rng):
    steps = []
    cur = start
    for _ in range(length):
        step = rng.choice(_step_options(cfg, cur))
        steps.append(step)
        if step == FWD:
            cur = cfg.g_of(cur)
        elif step == BWD:
            cur = cfg.g_inv_of(cur)
        else:
            cur = tau_target(step)
    return Walk(start, tuple(steps))
