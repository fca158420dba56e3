"""Cycle-based and second-order structure of set systems and transit functions.

Covers weak beta-cycles (total balancedness), gamma-acyclicity, hierarchy
and weak-hierarchy recognition, and the subset/sequence-quantified transit
axioms tb, hc, tb', tb2, p4.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Optional

from .core import SetSystem, Subset, Verdict, Witness, failed, mask_iter, passed
from .transit import TransitFunction, pair_index

SECOND_ORDER_AXIOMS = ("tb", "hc", "tb'", "tb2", "p4")

P4_MODES = ("open", "cyclic")


@dataclass(frozen=True)
class CycleWitness:
    """Sets C_0..C_{L-1} and pivots x_i in C_i ∩ C_{i+1} (indices mod L),
    where each x_i avoids every other set of the cycle."""

    sets: tuple[Subset, ...]
    pivots: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.sets)

    def is_valid(self) -> bool:
        length = len(self.sets)
        if length < 3 or len(self.pivots) != length:
            return False
        ground = self.sets[0].ground
        for i in range(length):
            x = ground.index(self.pivots[i])
            for k in range(length):
                inside = bool(self.sets[k].mask >> x & 1)
                if inside != (k in (i, (i + 1) % length)):
                    return False
        return True

    def is_pure(self) -> bool:
        length = len(self.sets)
        for a in range(length):
            for b in range(a + 1, length):
                if (b - a) % length in (1, length - 1):
                    continue
                if self.sets[a].mask & self.sets[b].mask:
                    return False
        return True


def _beta_cycle_search(
    system: SetSystem, pure: bool = False, max_length: Optional[int] = None
) -> Optional[CycleWitness]:
    masks = [m for m in system.masks if m.bit_count() >= 2]
    count = len(masks)
    limit = max_length if max_length is not None else count
    ground = system.ground

    def close(chain: list[int], pivots: list[int]) -> Optional[list[int]]:
        pool = masks[chain[-1]] & masks[chain[0]]
        for l in range(1, len(chain) - 1):
            pool &= ~masks[chain[l]]
        for x in mask_iter(pool):
            return pivots + [x]
        return None

    def extend(chain: list[int], pivots: list[int], used: set[int]):
        if len(chain) >= 3:
            done = close(chain, pivots)
            if done is not None:
                return chain, done
        if len(chain) >= limit:
            return None
        last = masks[chain[-1]]
        for t in range(chain[0] + 1, count):
            if t in used:
                continue
            cand = masks[t]
            if any(cand >> x & 1 for x in pivots):
                continue
            if pure:
                if any(cand & masks[chain[l]] for l in range(1, len(chain) - 1)):
                    continue
                touches_first = len(chain) >= 2 and bool(cand & masks[chain[0]])
            else:
                touches_first = False
            pool = last & cand
            for l in range(len(chain) - 1):
                pool &= ~masks[chain[l]]
            for x in mask_iter(pool):
                chain.append(t)
                pivots.append(x)
                used.add(t)
                if touches_first:
                    hit = None
                    if len(chain) >= 3:
                        done = close(chain, pivots)
                        if done is not None:
                            hit = (list(chain), done)
                else:
                    hit = extend(chain, pivots, used)
                used.discard(t)
                pivots.pop()
                chain.pop()
                if hit is not None:
                    return hit
        return None

    for start in range(count):
        hit = extend([start], [], {start})
        if hit is not None:
            chain, pivots = hit
            return CycleWitness(
                tuple(Subset(ground, masks[t]) for t in chain),
                tuple(ground.labels[x] for x in pivots),
            )
    return None


def find_weak_beta_cycle(
    system: SetSystem, max_length: Optional[int] = None
) -> Optional[CycleWitness]:
    """First weak beta-cycle of the system, searched exhaustively over
    sequences of distinct members with pivot-feasibility pruning."""
    return _beta_cycle_search(system, pure=False, max_length=max_length)


def is_totally_balanced(system: SetSystem) -> Verdict:
    """No weak beta-cycle of any length."""
    cycle = find_weak_beta_cycle(system)
    if cycle is None:
        return passed("totally-balanced")
    return Verdict("totally-balanced", False, _cycle_witness(cycle))


def _cycle_witness(cycle: CycleWitness, note: str = "weak beta-cycle") -> Witness:
    binds: list[tuple[str, object]] = []
    for i, s in enumerate(cycle.sets):
        binds.append((f"C{i + 1}", s))
    for i, x in enumerate(cycle.pivots):
        binds.append((f"x{i + 1}", x))
    return Witness(tuple(binds), note)


def is_weak_hierarchy(system: SetSystem) -> Verdict:
    """Every triple's common part equals one of its pairwise intersections."""
    masks = system.masks
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            b = masks[j]
            ab = a & b
            for c in masks[j + 1 :]:
                abc = ab & c
                if abc not in (ab, a & c, b & c):
                    g = system.ground
                    return failed(
                        "weak-hierarchy",
                        ("A", Subset(g, a)),
                        ("B", Subset(g, b)),
                        ("C", Subset(g, c)),
                    )
    return passed("weak-hierarchy")


def is_hierarchy(system: SetSystem) -> Verdict:
    """Members pairwise nested or disjoint, with the ground set and all
    singletons present."""
    g = system.ground
    if not system.contains_mask(g.full_mask):
        return failed("hierarchy", note="ground set missing")
    for lab in g.labels:
        if not system.contains_mask(1 << g.index(lab)):
            return failed("hierarchy", ("x", lab), note="singleton missing")
    masks = system.masks
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            common = a & b
            if common and common not in (a, b):
                return failed(
                    "hierarchy",
                    ("A", Subset(g, a)),
                    ("B", Subset(g, b)),
                    note="overlapping members",
                )
    return passed("hierarchy")


def is_paired_hierarchy(system: SetSystem) -> Verdict:
    """Every member overlaps at most one other member."""
    masks = system.masks
    for i, a in enumerate(masks):
        partner = None
        for j, b in enumerate(masks):
            if i == j:
                continue
            if bool(a & b) and bool(a & ~b) and bool(b & ~a):
                if partner is None:
                    partner = b
                else:
                    g = system.ground
                    return failed(
                        "paired-hierarchy",
                        ("C", Subset(g, a)),
                        ("C'", Subset(g, partner)),
                        ("C''", Subset(g, b)),
                        note="member overlaps two others",
                    )
    return passed("paired-hierarchy")


def gamma_acyclicity(system: SetSystem) -> Verdict:
    """No pure cycle and no gamma-triangle; the witness names which kind
    of obstruction was found."""
    cycle = _beta_cycle_search(system, pure=True)
    if cycle is not None:
        return Verdict("gamma-acyclic", False, _cycle_witness(cycle, "pure cycle"))
    masks = system.masks
    g = system.ground
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            if not a & b:
                continue
            left, right = a & ~b, b & ~a
            if not left or not right:
                continue
            for c in masks:
                if not (a & c and b & c):
                    continue
                u_pool, v_pool = left & c, right & c
                if u_pool and v_pool:
                    u = next(mask_iter(u_pool))
                    v = next(mask_iter(v_pool))
                    return failed(
                        "gamma-acyclic",
                        ("C1", Subset(g, a)),
                        ("C2", Subset(g, b)),
                        ("C3", Subset(g, c)),
                        ("u", g.labels[u]),
                        ("v", g.labels[v]),
                        note="gamma-triangle",
                    )
    return passed("gamma-acyclic")


# --- second-order transit axioms -------------------------------------------


def _nested_from(fn: TransitFunction, x: int, bits: list[int]) -> bool:
    n = fn.ground.n
    table = fn.table
    sets = [table[pair_index(x, u, n)] for u in bits]
    for a in range(len(sets)):
        sa = sets[a]
        for sb in sets[a + 1 :]:
            if sa & ~sb and sb & ~sa:
                return False
    return True


def _subset_witness(fn: TransitFunction, check: str, wmask: int, note: str = "") -> Verdict:
    return Verdict(
        check, False, Witness((("W", Subset(fn.ground, wmask)),), note)
    )


def _check_tb(fn: TransitFunction) -> Verdict:
    n = fn.ground.n
    for wmask in range(1, 1 << n):
        if wmask.bit_count() < 3:
            continue
        bits = list(mask_iter(wmask))
        if not any(_nested_from(fn, x, bits) for x in bits):
            return _subset_witness(fn, "tb", wmask, "no vertex sees a nested fan")
    return passed("tb")


def _check_hc(fn: TransitFunction) -> Verdict:
    n = fn.ground.n
    for wmask in range(1, 1 << n):
        if wmask.bit_count() < 3:
            continue
        bits = list(mask_iter(wmask))
        good = 0
        for x in bits:
            if _nested_from(fn, x, bits):
                good += 1
                if good == 2:
                    break
        if good < 2:
            return _subset_witness(fn, "hc", wmask, "fewer than two chain vertices")
    return passed("hc")


def _check_tb2(fn: TransitFunction) -> Verdict:
    n = fn.ground.n
    table = fn.table
    for wmask in range(1, 1 << n):
        bits = list(mask_iter(wmask))
        ok = False
        for a in range(len(bits)):
            for b in range(a, len(bits)):
                if wmask & ~table[pair_index(bits[a], bits[b], n)] == 0:
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return _subset_witness(fn, "tb2", wmask, "no inner pair spans the subset")
    return passed("tb2")


def _check_tb_prime(fn: TransitFunction) -> Verdict:
    n = fn.ground.n
    table = fn.table
    for length in range(3, n + 1):
        for seq in permutations(range(n), length):
            edges = [
                table[pair_index(seq[k], seq[(k + 1) % length], n)]
                for k in range(length)
            ]
            ok = True
            for k in range(length):
                prev, nxt = seq[(k - 1) % length], seq[(k + 1) % length]
                if edges[k] >> prev & 1 or edges[(k - 1) % length] >> nxt & 1:
                    ok = False
                    break
            if not ok:
                continue
            conclusion = False
            for j in range(length):
                for i in range(length):
                    if i == j or i == (j - 1) % length:
                        continue
                    if edges[i] >> seq[j] & 1:
                        conclusion = True
                        break
                if conclusion:
                    break
            if not conclusion:
                g = fn.ground
                binds = tuple(
                    (f"v{k + 1}", g.labels[seq[k]]) for k in range(length)
                )
                return Verdict("tb'", False, Witness(binds))
    return passed("tb'")


def _check_p4(fn: TransitFunction, mode: str = "open") -> Verdict:
    if mode not in P4_MODES:
        raise ValueError(f"p4 mode must be one of {P4_MODES}")
    n = fn.ground.n
    table = fn.table
    pairs = [(u, v) for u in range(n) for v in range(u, n)]
    for length in range(3, n + 1):
        for seq in permutations(range(n), length):
            if seq[0] > seq[-1]:
                continue  # reversal symmetry
            legs = [
                table[pair_index(seq[k], seq[k + 1], n)] for k in range(length - 1)
            ]
            if mode == "cyclic":
                closed = legs + [table[pair_index(seq[-1], seq[0], n)]]
                ok = True
                for i in range(length):
                    for j in range(length):
                        if j == i or j == (i - 1) % length:
                            continue
                        if closed[j] >> seq[i] & 1:
                            ok = False
                            break
                    if not ok:
                        break
            else:
                ok = True
                for i in range(length):
                    for j in range(length - 1):
                        if j == i or j == i - 1:
                            continue
                        if legs[j] >> seq[i] & 1:
                            ok = False
                            break
                    if not ok:
                        break
            if not ok:
                continue
            union = 0
            for leg in legs:
                union |= leg
            first, last = legs[0], legs[-1]
            for u, v in pairs:
                big = table[pair_index(u, v, n)]
                if not (big & first and big & last):
                    continue
                pool = big & ~union
                if not pool:
                    continue
                if first & ~big == 0 or last & ~big == 0:
                    continue
                y = next(mask_iter(pool))
                g = fn.ground
                binds = [(f"x{k + 1}", g.labels[seq[k]]) for k in range(length)]
                binds += [("u", g.labels[u]), ("v", g.labels[v]), ("y", g.labels[y])]
                return Verdict("p4", False, Witness(tuple(binds)))
    return passed("p4")


def check_second_order(
    fn: TransitFunction, axiom: str, p4_mode: str = "open"
) -> Verdict:
    """Check one of the subset/sequence-quantified axioms tb, hc, tb', tb2, p4."""
    if axiom == "tb":
        return _check_tb(fn)
    if axiom == "hc":
        return _check_hc(fn)
    if axiom == "tb'":
        return _check_tb_prime(fn)
    if axiom == "tb2":
        return _check_tb2(fn)
    if axiom == "p4":
        return _check_p4(fn, p4_mode)
    raise ValueError(f"unknown second-order axiom {axiom!r}")
