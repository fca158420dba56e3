"""Transit functions and their correspondence with set systems.

A transit function maps every unordered vertex pair {u,v} to a subset
that contains both endpoints, with R(u,u) = {u}.  Symmetry is structural
(tables are keyed by unordered pairs).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional

from .core import (
    GroundSet,
    SetSystem,
    Subset,
    Verdict,
    Witness,
    failed,
    mask_iter,
    passed,
)


class TransitError(ValueError):
    """A table is not a valid transit function; carries all violations."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class UncoveredPairError(ValueError):
    """Canonical transit function asked for a pair no member contains."""

    def __init__(self, u: str, v: str):
        super().__init__(f"no member contains both {u!r} and {v!r}")
        self.pair = (u, v)


def pair_index(i: int, j: int, n: int) -> int:
    """Dense index of the unordered pair {i,j} with i <= j."""
    if i > j:
        i, j = j, i
    return i * n - i * (i - 1) // 2 + (j - i)


def pair_count(n: int) -> int:
    return n * (n + 1) // 2


class TransitFunction:
    """A total symmetric map from unordered vertex pairs to subsets.

    The table is stored densely: n(n+1)/2 bitmasks in pair_index order.
    Instances are immutable; construct via :func:`validate_transit` or
    :func:`canonical_transit` to get the invariants checked.
    """

    __slots__ = ("ground", "table", "_values", "_reps")

    def __init__(self, ground: GroundSet, table: tuple[int, ...]):
        if len(table) != pair_count(ground.n):
            raise TransitError(["table does not cover all unordered pairs"])
        self.ground = ground
        self.table = table
        self._values: Optional[tuple[int, ...]] = None
        self._reps: Optional[dict[int, tuple[int, int]]] = None

    # -- access ------------------------------------------------------------

    def r_mask(self, i: int, j: int) -> int:
        return self.table[pair_index(i, j, self.ground.n)]

    def r(self, u: str, v: str) -> Subset:
        i, j = self.ground.index(u), self.ground.index(v)
        return Subset(self.ground, self.r_mask(i, j))

    def pairs(self) -> Iterator[tuple[int, int]]:
        n = self.ground.n
        for i in range(n):
            for j in range(i, n):
                yield i, j

    def value_masks(self) -> tuple[int, ...]:
        """Distinct transit-set masks, sorted by (cardinality, mask)."""
        if self._values is None:
            self._values = tuple(
                sorted(set(self.table), key=lambda m: (m.bit_count(), m))
            )
        return self._values

    def representative_pair(self, mask: int) -> tuple[int, int]:
        """First pair (in pair order) whose transit set equals ``mask``."""
        if self._reps is None:
            reps: dict[int, tuple[int, int]] = {}
            for i, j in self.pairs():
                reps.setdefault(self.r_mask(i, j), (i, j))
            self._reps = reps
        return self._reps[mask]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, TransitFunction)
            and self.ground == other.ground
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.ground, self.table))

    def __repr__(self) -> str:
        entries = []
        for i, j in self.pairs():
            if i != j:
                entries.append(
                    f"R({self.ground.labels[i]},{self.ground.labels[j]})="
                    f"{Subset(self.ground, self.r_mask(i, j))!r}"
                )
        return "TransitFunction(" + ", ".join(entries) + ")"


def validate_transit(
    ground: GroundSet, mapping: Mapping[tuple[str, str], Iterable[str]]
) -> TransitFunction:
    """Build a transit function from a pair->labels mapping, checking totality,
    endpoint containment, and R(u,u)={u}.  Diagonal entries may be omitted.

    Raises TransitError listing every violation found.
    """
    n = ground.n
    table: list[Optional[int]] = [None] * pair_count(n)
    violations: list[str] = []
    for (u, v), labels in mapping.items():
        i, j = ground.index(u), ground.index(v)
        idx = pair_index(i, j, n)
        mask = 0
        for lab in labels:
            mask |= 1 << ground.index(lab)
        if table[idx] is not None and table[idx] != mask:
            violations.append(f"conflicting entries for pair ({u},{v})")
        table[idx] = mask
    for i in range(n):
        idx = pair_index(i, i, n)
        own = 1 << i
        if table[idx] is None:
            table[idx] = own
        elif table[idx] != own:
            lab = ground.labels[i]
            violations.append(f"R({lab},{lab}) must equal {{{lab}}}")
    for i in range(n):
        for j in range(i + 1, n):
            idx = pair_index(i, j, n)
            mask = table[idx]
            want = (1 << i) | (1 << j)
            if mask is None:
                violations.append(
                    f"missing pair ({ground.labels[i]},{ground.labels[j]})"
                )
            elif mask & want != want:
                violations.append(
                    f"R({ground.labels[i]},{ground.labels[j]}) must contain "
                    "both endpoints"
                )
    if violations:
        raise TransitError(violations)
    return TransitFunction(ground, tuple(table))  # type: ignore[arg-type]


def transit_function_from_masks(ground: GroundSet, table: Iterable[int]) -> TransitFunction:
    """Checked constructor from a dense mask table in pair_index order."""
    table = tuple(table)
    n = ground.n
    violations = []
    for i in range(n):
        for j in range(i, n):
            mask = table[pair_index(i, j, n)]
            want = (1 << i) | (1 << j)
            if i == j and mask != want:
                violations.append(f"R({ground.labels[i]},{ground.labels[i]}) != singleton")
            elif mask & want != want:
                violations.append(
                    f"R({ground.labels[i]},{ground.labels[j]}) misses an endpoint"
                )
    if violations:
        raise TransitError(violations)
    return TransitFunction(ground, table)


def check_monotone(fn: TransitFunction) -> Verdict:
    """Axiom m: p,q in R(u,v) implies R(p,q) ⊆ R(u,v)."""
    witness = monotone_violation(fn.ground.n, fn.table)
    if witness is None:
        return passed("m")
    (i, j), (p, q) = witness
    g = fn.ground
    return failed(
        "m",
        ("u", g.labels[i]),
        ("v", g.labels[j]),
        ("p", g.labels[p]),
        ("q", g.labels[q]),
        note=f"R(p,q)={Subset(g, fn.r_mask(p, q))!r} not within "
        f"R(u,v)={Subset(g, fn.r_mask(i, j))!r}",
    )


def monotone_violation(
    n: int, table: tuple[int, ...]
) -> Optional[tuple[tuple[int, int], tuple[int, int]]]:
    """First ((u,v),(p,q)) violating monotonicity, or None."""
    for i in range(n):
        for j in range(i, n):
            big = table[pair_index(i, j, n)]
            members = list(mask_iter(big))
            for a in range(len(members)):
                for b in range(a, len(members)):
                    p, q = members[a], members[b]
                    if table[pair_index(p, q, n)] & ~big:
                        return (i, j), (p, q)
    return None


def canonical_transit(system: SetSystem) -> TransitFunction:
    """The map sending {x,y} to the intersection of all members containing
    both.  Every pair must be covered by at least one member; singleton
    diagonals additionally require the result to be a valid transit table.
    """
    ground = system.ground
    n = ground.n
    table = [0] * pair_count(n)
    for i in range(n):
        for j in range(i, n):
            want = (1 << i) | (1 << j)
            acc = ground.full_mask
            found = False
            for m in system.masks:
                if m & want == want:
                    acc &= m
                    found = True
            if not found:
                raise UncoveredPairError(ground.labels[i], ground.labels[j])
            table[pair_index(i, j, n)] = acc
    return transit_function_from_masks(ground, table)


def transit_sets(fn: TransitFunction) -> SetSystem:
    """The deduplicated family of all transit sets of ``fn``."""
    return SetSystem.from_masks(fn.ground, fn.value_masks())


# -- T-systems ------------------------------------------------------------


@dataclass(frozen=True)
class TSystemReport:
    """Per-axiom verdicts for the KS/KR/KC characterization."""

    ks: Verdict
    kr: Verdict
    kc: Verdict
    generators: tuple[tuple[Subset, tuple[str, str]], ...] = ()

    @property
    def is_t_system(self) -> bool:
        return self.ks.passed and self.kr.passed and self.kc.passed


def check_t_system(system: SetSystem) -> TSystemReport:
    """Check KS (all singletons), KR (every member has a generating pair),
    and KC (every covered-pair intersection is a member; an uncovered pair
    fails KC, since no transit function can identify such a family).
    """
    ground = system.ground
    n = ground.n

    missing = [lab for lab in ground.labels if not system.contains_mask(1 << ground.index(lab))]
    ks = (
        passed("KS")
        if not missing
        else failed("KS", ("x", missing[0]), note="singleton missing")
    )

    kr_witness = None
    generators: list[tuple[Subset, tuple[str, str]]] = []
    for member in system.masks:
        vertices = list(mask_iter(member))
        gen = None
        for a in range(len(vertices)):
            for b in range(a, len(vertices)):
                p, q = vertices[a], vertices[b]
                want = (1 << p) | (1 << q)
                if all(member & ~m == 0 for m in system.masks if m & want == want):
                    gen = (ground.labels[p], ground.labels[q])
                    break
            if gen:
                break
        if gen is None:
            if kr_witness is None:
                kr_witness = Subset(ground, member)
        else:
            generators.append((Subset(ground, member), gen))
    kr = (
        passed("KR")
        if kr_witness is None
        else failed("KR", ("C", kr_witness), note="no generating pair")
    )

    kc_verdict = passed("KC")
    for i in range(n):
        done = False
        for j in range(i, n):
            want = (1 << i) | (1 << j)
            acc = ground.full_mask
            found = False
            for m in system.masks:
                if m & want == want:
                    acc &= m
                    found = True
            if not found:
                kc_verdict = failed(
                    "KC",
                    ("p", ground.labels[i]),
                    ("q", ground.labels[j]),
                    note="pair covered by no member",
                )
                done = True
                break
            if not system.contains_mask(acc):
                kc_verdict = failed(
                    "KC",
                    ("p", ground.labels[i]),
                    ("q", ground.labels[j]),
                    note=f"intersection {Subset(ground, acc)!r} is not a member",
                )
                done = True
                break
        if done:
            break

    return TSystemReport(ks, kr, kc_verdict, tuple(generators))


@dataclass(frozen=True)
class RoundtripReport:
    """Outcome of mapping through the set-system/transit correspondence."""

    ok: bool
    lost: tuple[Subset, ...] = ()
    gained: tuple[Subset, ...] = ()
    changed_pairs: tuple[tuple[str, str, Subset, Subset], ...] = ()


def bijection_roundtrip(obj) -> RoundtripReport:
    """Round-trip a transit function (via its transit sets) or a set system
    (via its canonical transit function) and report any difference.
    Inequality is reported, not raised.
    """
    if isinstance(obj, TransitFunction):
        back = canonical_transit(transit_sets(obj))
        changed = []
        for i, j in obj.pairs():
            a, b = obj.r_mask(i, j), back.r_mask(i, j)
            if a != b:
                changed.append(
                    (
                        obj.ground.labels[i],
                        obj.ground.labels[j],
                        Subset(obj.ground, a),
                        Subset(obj.ground, b),
                    )
                )
        return RoundtripReport(not changed, changed_pairs=tuple(changed))
    if isinstance(obj, SetSystem):
        back = transit_sets(canonical_transit(obj))
        lost = tuple(s for s in obj if s.mask not in set(back.masks))
        gained = tuple(s for s in back if not obj.contains_mask(s.mask))
        return RoundtripReport(not lost and not gained, lost=lost, gained=gained)
    raise TypeError("expected a TransitFunction or a SetSystem")
