"""Interval-hypergraph recognition and forbidden-configuration detection.

The main recognizer is a backtracking consecutive-ones solver over the
vertex-set incidence structure; an independent brute-force permutation
oracle (vectorized over all n! orders, n <= 8) is kept alongside it and
the two are agreement-tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

import numpy as np

from .core import (
    GroundError,
    GroundSet,
    SetSystem,
    Subset,
    Verdict,
    Witness,
    intersection_closure_check,
    mask_iter,
    passed,
)
from .structure import CycleWitness, find_weak_beta_cycle
from .transit import TransitFunction, check_monotone, pair_index, transit_sets


@dataclass(frozen=True)
class PyramidalOrder:
    """A vertex order under which every member of a system is an interval."""

    ground: GroundSet
    perm: tuple[int, ...]

    def labels(self) -> tuple[str, ...]:
        return tuple(self.ground.labels[i] for i in self.perm)

    def position(self, label: str) -> int:
        return self.perm.index(self.ground.index(label))

    def interval(self, u: str, v: str) -> Subset:
        a, b = self.position(u), self.position(v)
        if a > b:
            a, b = b, a
        mask = 0
        for k in range(a, b + 1):
            mask |= 1 << self.perm[k]
        return Subset(self.ground, mask)

    def is_compatible(self, system: SetSystem) -> bool:
        pos = [0] * self.ground.n
        for where, vertex in enumerate(self.perm):
            pos[vertex] = where
        for m in system.masks:
            spots = [pos[i] for i in mask_iter(m)]
            if max(spots) - min(spots) + 1 != len(spots):
                return False
        return True


def _normalize(ground: GroundSet, perm: list[int]) -> PyramidalOrder:
    # Fix reversal symmetry: lexicographically smaller first label wins.
    if ground.labels[perm[-1]] < ground.labels[perm[0]]:
        perm = perm[::-1]
    return PyramidalOrder(ground, tuple(perm))


def _c1p_order(masks: tuple[int, ...], n: int) -> Optional[list[int]]:
    """Backtracking search for a vertex order making every mask contiguous.

    A started-but-unfinished mask forces the next vertex to lie in the
    intersection of all such masks' remainders; failed placement masks are
    memoized, so the state space is at most 2^n.
    """
    cons = sorted({m for m in masks if 1 < m.bit_count() < n})
    full = (1 << n) - 1
    dead: set[int] = set()
    order: list[int] = []

    def step(placed: int) -> bool:
        if placed == full:
            return True
        if placed in dead:
            return False
        allowed = full & ~placed
        for m in cons:
            rest = m & ~placed
            if rest and m & placed:
                allowed &= rest
                if not allowed:
                    dead.add(placed)
                    return False
        for v in mask_iter(allowed):
            order.append(v)
            if step(placed | (1 << v)):
                return True
            order.pop()
        dead.add(placed)
        return False

    return order if step(0) else None


def find_pyramidal_order(system: SetSystem) -> Optional[PyramidalOrder]:
    """A witness order if the system is an interval hypergraph, else None."""
    order = _c1p_order(system.masks, system.ground.n)
    if order is None:
        return None
    return _normalize(system.ground, order)


_PERMS: dict[int, np.ndarray] = {}

BRUTE_FORCE_LIMIT = 8


def _all_perms(n: int) -> np.ndarray:
    if n not in _PERMS:
        _PERMS[n] = np.array(list(permutations(range(n))), dtype=np.int8)
    return _PERMS[n]


def brute_force_pyramidal_order(system: SetSystem) -> Optional[PyramidalOrder]:
    """Independent oracle: test every permutation of the ground set."""
    n = system.ground.n
    if n > BRUTE_FORCE_LIMIT:
        raise GroundError(f"brute-force oracle capped at {BRUTE_FORCE_LIMIT} vertices")
    perms = _all_perms(n)
    pos = np.argsort(perms, axis=1)
    ok = np.ones(len(perms), dtype=bool)
    for m in system.masks:
        idxs = list(mask_iter(m))
        if len(idxs) < 2:
            continue
        spots = pos[:, idxs]
        ok &= spots.max(axis=1) - spots.min(axis=1) + 1 == len(idxs)
        if not ok.any():
            return None
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return None
    return _normalize(system.ground, [int(v) for v in perms[hits[0]]])


def is_pyramidal(fn: TransitFunction, with_witness: bool = True) -> Verdict:
    """Monotone, transit sets form an interval hypergraph, and the family is
    closed under non-empty intersection.  Closedness is implied for monotone
    functions whose transit sets are interval-orderable, but it is verified
    independently here.
    """
    mono = check_monotone(fn)
    if not mono.passed:
        return Verdict("pyramidal", False, mono.witness)
    sets = transit_sets(fn)
    closed = intersection_closure_check(sets)
    order = find_pyramidal_order(sets)
    if order is not None and closed.passed:
        return passed("pyramidal")
    if not with_witness:
        return Verdict("pyramidal", False, Witness((), "no order or not closed"))
    if not closed.passed:
        return Verdict("pyramidal", False, closed.witness)
    config = None
    for family in range(1, 6):
        config = detect_config(sets, family)
        if config is not None:
            break
    binds: list[tuple[str, object]] = []
    note = "no compatible vertex order"
    if config is not None:
        note = f"forbidden configuration family {config.family}"
        binds = [(f"S{i + 1}", s) for i, s in enumerate(config.sets)]
    return Verdict("pyramidal", False, Witness(tuple(binds), note))


def pyramidal_via_axioms(fn: TransitFunction, p4_mode: str = "open") -> Verdict:
    """Conjunction route: monotone plus tb, p2, p3, p4."""
    from . import axioms as ax
    from .structure import check_second_order

    parts = [
        check_monotone(fn),
        check_second_order(fn, "tb"),
        ax.check(fn, "p2"),
        ax.check(fn, "p3"),
        check_second_order(fn, "p4", p4_mode=p4_mode),
    ]
    for verdict in parts:
        if not verdict.passed:
            note = f"fails {verdict.check}"
            if verdict.witness is not None and verdict.witness.note:
                note += f": {verdict.witness.note}"
            binds = verdict.witness.bindings if verdict.witness else ()
            return Verdict("pyramidal-axioms", False, Witness(binds, note))
    return passed("pyramidal-axioms")


# --- forbidden configurations ----------------------------------------------


@dataclass(frozen=True)
class ConfigWitness:
    """One forbidden sub-configuration, re-checkable via validate_config.

    Role conventions:
      family 1: sets = cycle members, vertices = pivots (as in CycleWitness);
      family 2: sets = (A, B, C, D) with A,B,C overlapping D, vertices =
                private points of A, B, C outside the other three;
      family 3: sets = (A, C, D, B) with A,C disjoint inside D and B
                overlapping all three, vertices = (point of B outside D,);
      family 4: sets = (S_0..S_{k+1}, D), vertices = (t_0, p_1..p_{k+1},
                t_{k+1}, y): a chain with exclusive pivots, all pivots plus
                the private y inside D, both chain tips outside D;
      family 5: sets = (S_0..S_{k+1}, D1, D2), vertices as family 4 but the
                left tip lies in D1 only and the right tip in D2 only, while
                pivots and y lie in both.
    """

    family: int
    sets: tuple[Subset, ...]
    vertices: tuple[str, ...]
    k: Optional[int] = None

    def describe(self) -> str:
        sets = ", ".join(repr(s) for s in self.sets)
        verts = ",".join(self.vertices)
        extra = f", k={self.k}" if self.k is not None else ""
        return f"family {self.family}: sets [{sets}], vertices ({verts}){extra}"


def _find_family2(system: SetSystem) -> Optional[ConfigWitness]:
    masks = system.masks
    g = system.ground

    def ov(a, b):
        return bool(a & b) and bool(a & ~b) and bool(b & ~a)

    for d in masks:
        against = [m for m in masks if ov(m, d)]
        for i, a in enumerate(against):
            for j in range(i + 1, len(against)):
                b = against[j]
                for c in against[j + 1 :]:
                    pa = a & ~(b | c | d)
                    pb = b & ~(a | c | d)
                    pc = c & ~(a | b | d)
                    if pa and pb and pc:
                        verts = tuple(
                            g.labels[next(mask_iter(p))] for p in (pa, pb, pc)
                        )
                        return ConfigWitness(
                            2,
                            (
                                Subset(g, a),
                                Subset(g, b),
                                Subset(g, c),
                                Subset(g, d),
                            ),
                            verts,
                        )
    return None


def _find_family3(system: SetSystem) -> Optional[ConfigWitness]:
    masks = system.masks
    g = system.ground

    def ov(x, y):
        return bool(x & y) and bool(x & ~y) and bool(y & ~x)

    for i, a in enumerate(masks):
        for c in masks[i + 1 :]:
            if a & c:
                continue
            for d in masks:
                if a & ~d or c & ~d:
                    continue
                for b in masks:
                    if ov(a, b) and ov(b, c) and ov(b, d):
                        out = next(mask_iter(b & ~d))
                        return ConfigWitness(
                            3,
                            (Subset(g, a), Subset(g, c), Subset(g, d), Subset(g, b)),
                            (g.labels[out],),
                        )
    return None


def _find_chain_config(system: SetSystem, family: int) -> Optional[ConfigWitness]:
    """Families 4 and 5: a chain of small sets with exclusive pivots whose
    pivots (plus a private point) live inside the big set(s) and whose tips
    stick out."""
    masks = system.masks
    g = system.ground
    count = len(masks)

    def search(d1: int, d2: Optional[int]) -> Optional[tuple]:
        inner = masks[d1] if d2 is None else masks[d1] & masks[d2]
        if not inner:
            return None
        t0_zone = (
            ~masks[d1]
            if d2 is None
            else masks[d1] & ~masks[d2]
        )
        t1_zone = (
            ~masks[d1]
            if d2 is None
            else masks[d2] & ~masks[d1]
        )
        banned = {d1} if d2 is None else {d1, d2}
        for y in mask_iter(inner):
            hit = chain_search(y, t0_zone, t1_zone, banned, inner)
            if hit is not None:
                return hit + (y,)
        return None

    def chain_search(y, t0_zone, t1_zone, banned, inner):
        ybit = 1 << y
        for s0 in range(count):
            if s0 in banned or masks[s0] & ybit:
                continue
            for t0 in mask_iter(masks[s0] & t0_zone):
                hit = extend([s0], [], t0, y, t0_zone, t1_zone, banned, inner)
                if hit is not None:
                    return (hit[0], [t0] + hit[1] + [hit[2]])
        return None

    def extend(chain, pivots, t0, y, t0_zone, t1_zone, banned, inner):
        # close: the last chain set needs a tip in t1_zone avoiding the rest
        if len(chain) >= 2:
            tip_pool = masks[chain[-1]] & t1_zone & ~(1 << t0)
            for l in chain[:-1]:
                tip_pool &= ~masks[l]
            for t1 in mask_iter(tip_pool):
                return chain, pivots, t1
        if len(chain) >= count - len(banned):
            return None
        last = chain[-1]
        for s in range(count):
            if s in banned or s in chain:
                continue
            cand = masks[s]
            if cand & (1 << y) or cand & (1 << t0):
                continue
            if any(cand >> p & 1 for p in pivots):
                continue
            pool = masks[last] & cand & inner
            for l in chain[:-1]:
                pool &= ~masks[l]
            for p in mask_iter(pool):
                if p == y or p == t0:
                    continue
                chain.append(s)
                pivots.append(p)
                hit = extend(chain, pivots, t0, y, t0_zone, t1_zone, banned, inner)
                chain.pop()
                pivots.pop()
                if hit is not None:
                    if s in hit[0]:
                        return hit
                    return [last, s] + hit[0][1:], [p] + hit[1], hit[2]
        return None

    if family == 4:
        for d1 in range(count):
            hit = search(d1, None)
            if hit is not None:
                chain, verts, y = hit[0], hit[1], hit[2]
                labels = tuple(g.labels[v] for v in verts + [y])
                return ConfigWitness(
                    4,
                    tuple(Subset(g, masks[s]) for s in chain)
                    + (Subset(g, masks[d1]),),
                    labels,
                    k=len(chain) - 2,
                )
    else:
        for d1 in range(count):
            for d2 in range(count):
                if d1 == d2:
                    continue
                hit = search(d1, d2)
                if hit is not None:
                    chain, verts, y = hit[0], hit[1], hit[2]
                    labels = tuple(g.labels[v] for v in verts + [y])
                    return ConfigWitness(
                        5,
                        tuple(Subset(g, masks[s]) for s in chain)
                        + (Subset(g, masks[d1]), Subset(g, masks[d2])),
                        labels,
                        k=len(chain) - 2,
                    )
    return None


def detect_config(system: SetSystem, family: int) -> Optional[ConfigWitness]:
    """Search one forbidden-configuration family (1..5); deterministic
    first witness or None."""
    if family == 1:
        cycle = find_weak_beta_cycle(system)
        if cycle is None:
            return None
        return ConfigWitness(1, cycle.sets, cycle.pivots)
    if family == 2:
        return _find_family2(system)
    if family == 3:
        return _find_family3(system)
    if family in (4, 5):
        return _find_chain_config(system, family)
    raise ValueError("configuration family must be 1..5")


def validate_config(system: SetSystem, witness: ConfigWitness) -> bool:
    """Re-check a configuration witness against its defining pattern."""
    g = system.ground
    sets = witness.sets
    if any(s not in system for s in sets):
        return False
    if witness.family == 1:
        return CycleWitness(sets, witness.vertices).is_valid()
    if witness.family == 2:
        a, b, c, d = (s.mask for s in sets)
        pa, pb, pc = (1 << g.index(v) for v in witness.vertices)
        ov = lambda x, y: bool(x & y) and bool(x & ~y) and bool(y & ~x)
        return (
            ov(a, d)
            and ov(b, d)
            and ov(c, d)
            and bool(pa & a & ~(b | c | d))
            and bool(pb & b & ~(a | c | d))
            and bool(pc & c & ~(a | b | d))
        )
    if witness.family == 3:
        a, c, d, b = (s.mask for s in sets)
        ov = lambda x, y: bool(x & y) and bool(x & ~y) and bool(y & ~x)
        return (
            not a & c
            and not a & ~d
            and not c & ~d
            and ov(a, b)
            and ov(b, c)
            and ov(b, d)
        )
    if witness.family in (4, 5):
        if witness.family == 4:
            chain = [s.mask for s in sets[:-1]]
            bigs = [sets[-1].mask]
        else:
            chain = [s.mask for s in sets[:-2]]
            bigs = [sets[-2].mask, sets[-1].mask]
        verts = [g.index(v) for v in witness.vertices]
        if len(verts) != len(chain) + 2 or len(chain) < 2:
            return False
        t0, *pivots, t1, y = verts
        if len(set(verts)) != len(verts):
            return False
        inner = bigs[0] if len(bigs) == 1 else bigs[0] & bigs[1]
        # pivots and y inside the big region, tips outside it
        for p in pivots + [y]:
            if not inner >> p & 1:
                return False
        if witness.family == 4:
            if bigs[0] >> t0 & 1 or bigs[0] >> t1 & 1:
                return False
        else:
            d1, d2 = bigs
            if not (d1 >> t0 & 1 and not d2 >> t0 & 1):
                return False
            if not (d2 >> t1 & 1 and not d1 >> t1 & 1):
                return False
        # exclusive membership pattern along the chain
        spots = [t0] + pivots + [t1]
        for ci, cmask in enumerate(chain):
            for vi, v in enumerate(spots):
                expected = vi in (ci, ci + 1)
                if bool(cmask >> v & 1) != expected:
                    return False
            if cmask >> y & 1:
                return False
        return True
    return False


# --- Duchet betweenness ------------------------------------------------------


def _lies_between(system: SetSystem, mid: int, a: int, b: int) -> bool:
    usable = [m for m in system.masks if not m >> mid & 1]
    reach = 1 << a
    changed = True
    while changed:
        changed = False
        for m in usable:
            if m & reach and m & ~reach:
                reach |= m
                changed = True
    return not reach >> b & 1


def duchet_between(system: SetSystem, x: str, y: str, z: str) -> tuple[str, ...]:
    """Which of the three distinct vertices lie between the other two, in the
    hyperpath sense: every edge-path joining the others uses an edge
    containing the vertex."""
    if len({x, y, z}) != 3:
        raise GroundError("betweenness needs three distinct vertices")
    g = system.ground
    xi, yi, zi = g.index(x), g.index(y), g.index(z)
    out = []
    for mid, (a, b) in ((x, (yi, zi)), (y, (xi, zi)), (z, (xi, yi))):
        if _lies_between(system, g.index(mid), a, b):
            out.append(mid)
    return tuple(out)


# --- order/interval agreement -------------------------------------------------


@dataclass(frozen=True)
class IntervalTransitReport:
    """Betweenness-style diagnostics for a transit function."""

    monotone: Verdict
    b3: Verdict
    b4: Verdict
    pyramidal: Verdict
    order: Optional[PyramidalOrder]
    interval_equality: Optional[Verdict]


def interval_transit_check(fn: TransitFunction) -> IntervalTransitReport:
    """For a monotone pyramidal function satisfying b3 or b4, every transit
    set must equal the order interval of its endpoints; reversal of the
    order does not change intervals, so the found order is checked directly.
    """
    from . import axioms as ax

    mono = check_monotone(fn)
    b3 = ax.check(fn, "b3")
    b4 = ax.check(fn, "b4")
    pyr = is_pyramidal(fn, with_witness=False)
    order = find_pyramidal_order(transit_sets(fn)) if pyr.passed else None
    equality: Optional[Verdict] = None
    if mono.passed and pyr.passed and (b3.passed or b4.passed) and order is not None:
        equality = passed("interval-equality")
        g = fn.ground
        for i in range(g.n):
            for j in range(i + 1, g.n):
                u, v = g.labels[i], g.labels[j]
                if fn.r(u, v) != order.interval(u, v):
                    equality = Verdict(
                        "interval-equality",
                        False,
                        Witness(
                            (("u", u), ("v", v), ("R(u,v)", fn.r(u, v))),
                            f"interval is {order.interval(u, v)!r}",
                        ),
                    )
                    break
            if equality is not None and not equality.passed:
                break
    return IntervalTransitReport(mono, b3, b4, pyr, order, equality)
