"""First-order axiom checkers for transit functions and set systems.

Every checker sweeps its quantifier prefix exhaustively in a fixed
deterministic order and reports the first violating tuple as a witness.
Checkers whose condition depends only on the transit-set values sweep the
deduplicated values (with a fixed representative vertex pair per value);
the verdict is identical to the literal vertex sweep.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Callable, Optional

from .core import SetSystem, Subset, Verdict, failed, intersection_closure_check, mask_iter, passed
from .transit import TransitFunction, check_monotone, pair_index, transit_sets

TRANSIT_AXIOMS = (
    "a'",
    "k",
    "w",
    "b3",
    "b4",
    "u",
    "uc",
    "u3",
    "o'",
    "wp",
    "i",
    "l1",
    "l2",
    "n3o",
    "p2",
    "p3",
)

SET_AXIOMS = (
    "K1",
    "K2",
    "UC",
    "WP",
    "I",
    "L1",
    "N3O",
    "L2'",
    "L2''",
    "P2",
    "P3",
    "P3'",
)


class UnknownAxiomError(ValueError):
    pass


def _ov(a: int, b: int) -> bool:
    return bool(a & b) and bool(a & ~b) and bool(b & ~a)


def _pair_binds(fn: TransitFunction, names: tuple[str, str], mask: int):
    i, j = fn.representative_pair(mask)
    g = fn.ground
    return [(names[0], g.labels[i]), (names[1], g.labels[j])]


def _set_bind(fn: TransitFunction, role: str, mask: int):
    return (role, Subset(fn.ground, mask))


# --- transit-side checkers -------------------------------------------------


def _check_a_prime(fn: TransitFunction) -> Verdict:
    # Some transit set equals the whole ground set.
    if fn.ground.full_mask in fn.value_masks():
        return passed("a'")
    return failed("a'", note="no pair spans the whole ground set")


def _check_k(fn: TransitFunction) -> Verdict:
    # Non-empty intersections of transit sets are transit sets.
    values = fn.value_masks()
    vset = set(values)
    for a, b in combinations_with_replacement(values, 2):
        common = a & b
        if common and common not in vset:
            return Verdict(
                "k",
                False,
                _witness(
                    fn,
                    [("u", "v"), ("x", "y")],
                    [a, b],
                    note=f"intersection {Subset(fn.ground, common)!r} is no transit set",
                ),
            )
    return passed("k")


def _check_w(fn: TransitFunction) -> Verdict:
    # Of any three vertices, one lies in the transit set of the other two.
    n = fn.ground.n
    table = fn.table

    for x in range(n):
        for y in range(x + 1, n):
            rxy = table[pair_index(x, y, n)]
            for z in range(y + 1, n):
                if (
                    not rxy >> z & 1
                    and not table[pair_index(x, z, n)] >> y & 1
                    and not table[pair_index(y, z, n)] >> x & 1
                ):
                    g = fn.ground
                    return failed(
                        "w", ("x", g.labels[x]), ("y", g.labels[y]), ("z", g.labels[z])
                    )
    return passed("w")


def _check_b3(fn: TransitFunction) -> Verdict:
    # x between u,v and y between u,x forces x between y,v.
    n = fn.ground.n
    table = fn.table

    for u in range(n):
        for v in range(n):
            ruv = table[pair_index(u, v, n)]
            for x in mask_iter(ruv):
                rux = table[pair_index(u, x, n)]
                for y in mask_iter(rux):
                    if not table[pair_index(y, v, n)] >> x & 1:
                        g = fn.ground
                        return failed(
                            "b3",
                            ("u", g.labels[u]),
                            ("v", g.labels[v]),
                            ("x", g.labels[x]),
                            ("y", g.labels[y]),
                        )
    return passed("b3")


def _check_b4(fn: TransitFunction) -> Verdict:
    # x between u,v forces R(u,x) and R(x,v) to meet only in x.
    n = fn.ground.n
    table = fn.table

    for u in range(n):
        for v in range(u, n):
            for x in mask_iter(table[pair_index(u, v, n)]):
                meet = table[pair_index(u, x, n)] & table[pair_index(x, v, n)]
                if meet != 1 << x:
                    g = fn.ground
                    return failed(
                        "b4",
                        ("u", g.labels[u]),
                        ("v", g.labels[v]),
                        ("x", g.labels[x]),
                        note=f"common part {Subset(g, meet)!r}",
                    )
    return passed("b4")


def _check_u(fn: TransitFunction) -> Verdict:
    # Every inner point splits its transit set into the two half legs.
    n = fn.ground.n
    table = fn.table

    for u in range(n):
        for v in range(u, n):
            big = table[pair_index(u, v, n)]
            for z in mask_iter(big):
                if table[pair_index(u, z, n)] | table[pair_index(z, v, n)] != big:
                    g = fn.ground
                    return failed(
                        "u", ("u", g.labels[u]), ("v", g.labels[v]), ("z", g.labels[z])
                    )
    return passed("u")


def _check_uc(fn: TransitFunction) -> Verdict:
    # Unions of intersecting transit sets are spanned inside the union.
    values = fn.value_masks()
    n = fn.ground.n
    table = fn.table

    for a, b in combinations_with_replacement(values, 2):
        if not a & b:
            continue
        target = a | b
        bits = list(mask_iter(target))
        ok = False
        for ii in range(len(bits)):
            for jj in range(ii, len(bits)):
                if table[pair_index(bits[ii], bits[jj], n)] == target:
                    ok = True
                    break
            if ok:
                break
        if not ok:
            return Verdict(
                "uc",
                False,
                _witness(
                    fn,
                    [("x", "y"), ("u", "v")],
                    [a, b],
                    note=f"union {Subset(fn.ground, target)!r} is spanned by no inner pair",
                ),
            )
    return passed("uc")


def _check_u3(fn: TransitFunction) -> Verdict:
    # Non-trivial transit sets split at some interior point.
    n = fn.ground.n
    table = fn.table

    for x in range(n):
        for y in range(x + 1, n):
            big = table[pair_index(x, y, n)]
            ends = (1 << x) | (1 << y)
            if not big & ~ends:
                continue
            if not any(
                table[pair_index(x, z, n)] | table[pair_index(z, y, n)] == big
                for z in mask_iter(big & ~ends)
            ):
                g = fn.ground
                return failed("u3", ("x", g.labels[x]), ("y", g.labels[y]))
    return passed("u3")


def _check_o_prime(fn: TransitFunction) -> Verdict:
    # Every point of a transit set is flanked by a two-leg cover from inside.
    n = fn.ground.n
    table = fn.table

    for u in range(n):
        for v in range(u, n):
            big = table[pair_index(u, v, n)]
            bits = list(mask_iter(big))
            for z in bits:
                ok = False
                for ii in range(len(bits)):
                    for jj in range(ii, len(bits)):
                        if (
                            table[pair_index(bits[ii], z, n)]
                            | table[pair_index(z, bits[jj], n)]
                            == big
                        ):
                            ok = True
                            break
                    if ok:
                        break
                if not ok:
                    g = fn.ground
                    return failed(
                        "o'", ("u", g.labels[u]), ("v", g.labels[v]), ("z", g.labels[z])
                    )
    return passed("o'")


def _check_wp(fn: TransitFunction) -> Verdict:
    # Pairwise-intersecting transit-set triples: one inside the union of the others.
    values = fn.value_masks()
    for a, b, c in combinations_with_replacement(values, 3):
        if a & b and a & c and b & c:
            if not (
                c & ~(a | b) == 0 or a & ~(b | c) == 0 or b & ~(a | c) == 0
            ):
                return Verdict(
                    "wp",
                    False,
                    _witness(fn, [("u", "v"), ("x", "y"), ("p", "q")], [a, b, c]),
                )
    return passed("wp")


def _check_i(fn: TransitFunction) -> Verdict:
    # A covered non-empty intersection plus outside slack forces containment.
    values = fn.value_masks()
    for idx_a, a in enumerate(values):
        for b in values[idx_a:]:
            common = a & b
            if not common:
                continue
            both = a | b
            for c in values:
                if common & ~c == 0 and c & ~both and (a & ~c) and (b & ~c):
                    return Verdict(
                        "i",
                        False,
                        _witness(fn, [("x", "y"), ("u", "v"), ("p", "q")], [a, b, c]),
                    )
    return passed("i")


def _check_l1(fn: TransitFunction) -> Verdict:
    # Overlap chains are nested or sandwiched.
    values = fn.value_masks()
    for idx_a, a in enumerate(values):
        for c in values[idx_a + 1 :]:
            if a & ~c == 0 or c & ~a == 0:
                continue
            inter, union = a & c, a | c
            for b in values:
                if _ov(a, b) and _ov(b, c):
                    if not (inter & ~b == 0 and b & ~union == 0):
                        return Verdict(
                            "l1",
                            False,
                            _witness(
                                fn, [("x", "y"), ("p", "q"), ("u", "v")], [a, b, c]
                            ),
                        )
    return passed("l1")


def _check_n3o(fn: TransitFunction) -> Verdict:
    # No three mutually overlapping transit sets in a chain.
    values = fn.value_masks()
    for idx_a, a in enumerate(values):
        for c in values[idx_a + 1 :]:
            if a & ~c == 0 or c & ~a == 0 or not a & c:
                continue
            for b in values:
                if _ov(a, b) and _ov(b, c):
                    return Verdict(
                        "n3o",
                        False,
                        _witness(fn, [("x", "y"), ("p", "q"), ("u", "v")], [a, b, c]),
                    )
    return passed("n3o")


def _check_l2(fn: TransitFunction) -> Verdict:
    # Chains over a disjoint span are spanned by outer reference points.
    values = fn.value_masks()
    n = fn.ground.n
    table = fn.table

    for idx_a, a in enumerate(values):
        for c in values[idx_a + 1 :]:
            if a & c:
                continue
            for b in values:
                if _ov(a, b) and _ov(b, c):
                    target = a | b | c
                    if not any(
                        table[pair_index(s, t, n)] == target
                        for s in mask_iter(a & ~b)
                        for t in mask_iter(c & ~b)
                    ):
                        return Verdict(
                            "l2",
                            False,
                            _witness(
                                fn,
                                [("x", "y"), ("p", "q"), ("u", "v")],
                                [a, b, c],
                                note=f"union {Subset(fn.ground, target)!r} unmatched",
                            ),
                        )
    return passed("l2")


def _check_p2(fn: TransitFunction) -> Verdict:
    # Of three sets overlapping a common set, one sits in the union of the rest.
    values = fn.value_masks()
    for a, b, c in combinations_with_replacement(values, 3):
        for d in values:
            if _ov(a, d) and _ov(b, d) and _ov(c, d):
                rest = d
                if not (
                    a & ~(b | c | rest) == 0
                    or b & ~(a | c | rest) == 0
                    or c & ~(a | b | rest) == 0
                ):
                    return Verdict(
                        "p2",
                        False,
                        _witness(
                            fn,
                            [("x", "y"), ("u", "v"), ("p", "q"), ("s", "t")],
                            [a, b, c, d],
                        ),
                    )
    return passed("p2")


def _check_p3(fn: TransitFunction) -> Verdict:
    # Two sets nested in a common cover and overlapping a common set must meet.
    values = fn.value_masks()
    for idx_a, a in enumerate(values):
        for c in values[idx_a + 1 :]:
            if a & c:
                continue
            for d in values:
                if a & ~d == 0 and c & ~d == 0:
                    for b in values:
                        if _ov(b, d) and _ov(b, a) and _ov(b, c):
                            return Verdict(
                                "p3",
                                False,
                                _witness(
                                    fn,
                                    [("p", "q"), ("x", "y"), ("s", "t"), ("u", "v")],
                                    [a, b, c, d],
                                ),
                            )
    return passed("p3")


def _witness(fn, pair_names, masks, note: str = ""):
    from .core import Witness

    binds = []
    for names, mask in zip(pair_names, masks):
        binds.extend(_pair_binds(fn, names, mask))
    for names, mask in zip(pair_names, masks):
        binds.append((f"R({names[0]},{names[1]})", Subset(fn.ground, mask)))
    return Witness(tuple(binds), note)


_TRANSIT_CHECKERS: dict[str, Callable[[TransitFunction], Verdict]] = {
    "a'": _check_a_prime,
    "k": _check_k,
    "w": _check_w,
    "b3": _check_b3,
    "b4": _check_b4,
    "u": _check_u,
    "uc": _check_uc,
    "u3": _check_u3,
    "o'": _check_o_prime,
    "wp": _check_wp,
    "i": _check_i,
    "l1": _check_l1,
    "l2": _check_l2,
    "n3o": _check_n3o,
    "p2": _check_p2,
    "p3": _check_p3,
}


def check(fn: TransitFunction, axiom: str) -> Verdict:
    """Check one transit-side axiom by exhaustive sweep."""
    try:
        checker = _TRANSIT_CHECKERS[axiom]
    except KeyError:
        raise UnknownAxiomError(f"unknown transit axiom {axiom!r}") from None
    return checker(fn)


# --- set-side checkers ------------------------------------------------------


def _sets_bind(system: SetSystem, roles: str, masks) -> tuple:
    return tuple((role, Subset(system.ground, m)) for role, m in zip(roles, masks))


def _check_K1(system: SetSystem) -> Verdict:
    if system.contains_mask(system.ground.full_mask):
        return passed("K1")
    return failed("K1", note="ground set is not a member")


def _check_K2(system: SetSystem) -> Verdict:
    return intersection_closure_check(system)


def _check_UC(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            if a & b and not system.contains_mask(a | b):
                return Verdict(
                    "UC", False, _w_sets(system, "AB", [a, b], "union missing")
                )
    return passed("UC")


def _check_WP(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for j in range(i + 1, len(masks)):
            b = masks[j]
            if not a & b:
                continue
            for c in masks[j + 1 :]:
                if a & c and b & c:
                    if not (
                        a & ~(b | c) == 0 or b & ~(a | c) == 0 or c & ~(a | b) == 0
                    ):
                        return Verdict("WP", False, _w_sets(system, "ABC", [a, b, c]))
    return passed("WP")


def _check_I(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            common = a & b
            if not common:
                continue
            both = a | b
            for c in masks:
                if common & ~c == 0 and c & ~both and a & ~c and b & ~c:
                    return Verdict("I", False, _w_sets(system, "ABC", [a, b, c]))
    return passed("I")


def _check_L1(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for c in masks[i + 1 :]:
            if a & ~c == 0 or c & ~a == 0:
                continue
            inter, union = a & c, a | c
            for b in masks:
                if _ov(a, b) and _ov(b, c):
                    if not (inter & ~b == 0 and b & ~union == 0):
                        return Verdict("L1", False, _w_sets(system, "ABC", [a, b, c]))
    return passed("L1")


def _check_N3O(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for c in masks[i + 1 :]:
            if not _ov(a, c):
                continue
            for b in masks:
                if _ov(a, b) and _ov(b, c):
                    return Verdict("N3O", False, _w_sets(system, "ABC", [a, b, c]))
    return passed("N3O")


def _check_L2p(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for c in masks[i + 1 :]:
            if a & c:
                continue
            for b in masks:
                if _ov(a, b) and _ov(b, c) and not system.contains_mask(a | b | c):
                    return Verdict("L2'", False, _w_sets(system, "ABC", [a, b, c]))
    return passed("L2'")


def _check_L2pp(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for c in masks[i + 1 :]:
            if a & c:
                continue
            for b in masks:
                if not (_ov(a, b) and _ov(b, c)):
                    continue
                outside = (a | c) & ~b
                whole = a | b | c
                for d in masks:
                    if outside & ~d == 0 and whole & ~d:
                        return Verdict(
                            "L2''", False, _w_sets(system, "ABCD", [a, b, c, d])
                        )
    return passed("L2''")


def _check_P2(system: SetSystem) -> Verdict:
    masks = system.masks
    for a, b, c in combinations_with_replacement(masks, 3):
        for d in masks:
            if _ov(a, d) and _ov(b, d) and _ov(c, d):
                if not (
                    a & ~(b | c | d) == 0
                    or b & ~(a | c | d) == 0
                    or c & ~(a | b | d) == 0
                ):
                    return Verdict("P2", False, _w_sets(system, "ABCD", [a, b, c, d]))
    return passed("P2")


def _check_P3(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for c in masks[i + 1 :]:
            if a & c:
                continue
            for d in masks:
                if a & ~d == 0 and c & ~d == 0:
                    for b in masks:
                        if _ov(a, b) and _ov(b, c) and _ov(b, d):
                            return Verdict(
                                "P3", False, _w_sets(system, "ACDB", [a, c, d, b])
                            )
    return passed("P3")


def _check_P3p(system: SetSystem) -> Verdict:
    masks = system.masks
    for i, a in enumerate(masks):
        for c in masks[i + 1 :]:
            if a & c:
                continue
            both = a | c
            for b in masks:
                if not (_ov(a, b) and _ov(b, c)):
                    continue
                for d in masks:
                    if both & ~d == 0 and b & ~d:
                        return Verdict(
                            "P3'", False, _w_sets(system, "ACBD", [a, c, b, d])
                        )
    return passed("P3'")


def _w_sets(system: SetSystem, roles: str, masks, note: str = ""):
    from .core import Witness

    return Witness(_sets_bind(system, roles, masks), note)


_SET_CHECKERS: dict[str, Callable[[SetSystem], Verdict]] = {
    "K1": _check_K1,
    "K2": _check_K2,
    "UC": _check_UC,
    "WP": _check_WP,
    "I": _check_I,
    "L1": _check_L1,
    "N3O": _check_N3O,
    "L2'": _check_L2p,
    "L2''": _check_L2pp,
    "P2": _check_P2,
    "P3": _check_P3,
    "P3'": _check_P3p,
}


def check_set(system: SetSystem, axiom: str) -> Verdict:
    """Check one set-side axiom by exhaustive sweep over member tuples."""
    try:
        checker = _SET_CHECKERS[axiom]
    except KeyError:
        raise UnknownAxiomError(f"unknown set-system axiom {axiom!r}") from None
    return checker(system)


def check_all(fn: TransitFunction, p4_mode: str = "open") -> dict[str, Verdict]:
    """Every transit-side and second-order verdict for ``fn``, plus set-side
    verdicts on its transit sets, in a fixed deterministic order.
    """
    from . import structure

    out: dict[str, Verdict] = {"m": check_monotone(fn)}
    for axiom in TRANSIT_AXIOMS:
        out[axiom] = check(fn, axiom)
    for axiom in structure.SECOND_ORDER_AXIOMS:
        out[axiom] = structure.check_second_order(fn, axiom, p4_mode=p4_mode)
    sets = transit_sets(fn)
    for axiom in SET_AXIOMS:
        out[axiom] = check_set(sets, axiom)
    return out
