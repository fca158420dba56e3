"""Ground sets, bitset subsets, set systems, and elementary predicates.

Everything here is immutable after construction, so all operations are
safe to call concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

MAX_GROUND = 64


class GroundError(ValueError):
    """Invalid ground set or mixing of subsets over different grounds."""


class GroundSet:
    """An ordered universe of distinct vertex labels, at most 64 of them.

    The label <-> index bijection is fixed for the lifetime of the object;
    subsets over the ground are stored as bitmasks in index order.
    """

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        self.labels: tuple[str, ...] = tuple(labels)
        if not self.labels:
            raise GroundError("ground set must be non-empty")
        if len(self.labels) > MAX_GROUND:
            raise GroundError(f"ground set capped at {MAX_GROUND} vertices")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise GroundError("vertex labels must be pairwise distinct")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GroundError(f"unknown vertex label {label!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def subset(self, labels: Iterable[str] = ()) -> "Subset":
        mask = 0
        for lab in labels:
            mask |= 1 << self.index(lab)
        return Subset(self, mask)

    def subset_from_mask(self, mask: int) -> "Subset":
        return Subset(self, mask)

    def singleton(self, label: str) -> "Subset":
        return Subset(self, 1 << self.index(label))

    def universe(self) -> "Subset":
        return Subset(self, self.full_mask)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GroundSet) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"GroundSet({list(self.labels)!r})"


def mask_popcount(mask: int) -> int:
    return mask.bit_count()


def mask_iter(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Subset:
    """An immutable subset of a ground set, backed by one bitmask."""

    __slots__ = ("ground", "mask")

    def __init__(self, ground: GroundSet, mask: int):
        if mask < 0 or mask > ground.full_mask:
            raise GroundError("subset mask out of range for ground set")
        self.ground = ground
        self.mask = mask

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.ground.index(label) & 1)

    def __iter__(self) -> Iterator[str]:
        return (self.ground.labels[i] for i in mask_iter(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subset)
            and self.mask == other.mask
            and self.ground == other.ground
        )

    def __hash__(self) -> int:
        return hash((self.ground, self.mask))

    def _check(self, other: "Subset") -> None:
        if self.ground != other.ground:
            raise GroundError("subsets belong to different ground sets")

    def union(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.ground, self.mask | other.mask)

    def intersection(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.ground, self.mask & other.mask)

    def difference(self, other: "Subset") -> "Subset":
        self._check(other)
        return Subset(self.ground, self.mask & ~other.mask)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def issubset(self, other: "Subset") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    __le__ = issubset

    def overlaps(self, other: "Subset") -> bool:
        """True iff intersection and both differences are non-empty."""
        self._check(other)
        a, b = self.mask, other.mask
        return bool(a & b) and bool(a & ~b) and bool(b & ~a)

    def labels(self) -> tuple[str, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return "{" + ",".join(self) + "}"


def overlaps(a: Subset, b: Subset) -> bool:
    """Proper overlap: a∩b, a∖b, and b∖a are all non-empty."""
    return a.overlaps(b)


class SetSystem:
    """A deduplicated family of non-empty subsets over one ground set.

    Iteration order is deterministic: ascending cardinality, then
    ascending bitmask value.
    """

    __slots__ = ("ground", "sets", "_masks", "_mask_set")

    def __init__(self, ground: GroundSet, subsets: Iterable[Subset]):
        self.ground = ground
        seen: set[int] = set()
        masks: list[int] = []
        for s in subsets:
            if s.ground != ground:
                raise GroundError("set system members must share the ground set")
            if s.mask == 0:
                raise GroundError("set systems must not contain the empty set")
            if s.mask not in seen:
                seen.add(s.mask)
                masks.append(s.mask)
        masks.sort(key=lambda m: (m.bit_count(), m))
        self._masks = tuple(masks)
        self._mask_set = frozenset(masks)
        self.sets = tuple(Subset(ground, m) for m in masks)

    @classmethod
    def from_masks(cls, ground: GroundSet, masks: Iterable[int]) -> "SetSystem":
        return cls(ground, (Subset(ground, m) for m in masks))

    @classmethod
    def from_labels(
        cls, ground: GroundSet, families: Iterable[Iterable[str]]
    ) -> "SetSystem":
        return cls(ground, (ground.subset(f) for f in families))

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def contains_mask(self, mask: int) -> bool:
        return mask in self._mask_set

    def __contains__(self, s: Subset) -> bool:
        return s.ground == self.ground and s.mask in self._mask_set

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SetSystem)
            and self.ground == other.ground
            and self._masks == other._masks
        )

    def __hash__(self) -> int:
        return hash((self.ground, self._masks))

    def with_singletons(self) -> "SetSystem":
        """Return a copy with every singleton added."""
        extra = (self.ground.singleton(lab) for lab in self.ground.labels)
        return SetSystem(self.ground, tuple(self.sets) + tuple(extra))

    def __repr__(self) -> str:
        return "SetSystem(" + ", ".join(map(repr, self.sets)) + ")"


# --- verdicts -------------------------------------------------------------

BindingValue = Union[str, Subset, tuple[str, ...]]


@dataclass(frozen=True)
class Witness:
    """Named bindings that instantiate a violated quantifier prefix."""

    bindings: tuple[tuple[str, BindingValue], ...]
    note: str = ""

    def __str__(self) -> str:
        parts = []
        for name, value in self.bindings:
            if isinstance(value, tuple):
                value = "(" + ",".join(value) + ")"
            parts.append(f"{name}={value}")
        body = ", ".join(parts)
        if self.note:
            body = f"{body} ({self.note})" if body else self.note
        return body

    def get(self, name: str) -> BindingValue:
        for key, value in self.bindings:
            if key == name:
                return value
        raise KeyError(name)


@dataclass(frozen=True)
class Verdict:
    """Pass/fail outcome of one named check, with a witness on failure."""

    check: str
    passed: bool
    witness: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.passed

    def line(self) -> str:
        status = "pass" if self.passed else "fail"
        if self.witness is not None:
            return f"{self.check} {status} [witness: {self.witness}]"
        return f"{self.check} {status}"


def passed(check: str) -> Verdict:
    return Verdict(check, True)


def failed(check: str, *bindings: tuple[str, BindingValue], note: str = "") -> Verdict:
    return Verdict(check, False, Witness(tuple(bindings), note))


# --- elementary predicates ------------------------------------------------


def primal_graph(system: SetSystem) -> frozenset[tuple[str, str]]:
    """Edges {x,y} such that some member contains both x and y."""
    ground = system.ground
    edges = set()
    for m in system.masks:
        members = list(mask_iter(m))
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                edges.add((ground.labels[members[a]], ground.labels[members[b]]))
    return frozenset(edges)


def _adjacency(system: SetSystem) -> list[int]:
    n = system.ground.n
    adj = [0] * n
    for m in system.masks:
        for i in mask_iter(m):
            adj[i] |= m & ~(1 << i)
    return adj


def _maximal_cliques(adj: list[int], n: int) -> Iterator[int]:
    """Bron-Kerbosch with pivoting over bitmask adjacency."""

    def expand(r: int, p: int, x: int) -> Iterator[int]:
        if p == 0 and x == 0:
            yield r
            return
        pool = p | x
        pivot = max(mask_iter(pool), key=lambda v: (adj[v] & p).bit_count())
        for v in mask_iter(p & ~adj[pivot]):
            bit = 1 << v
            yield from expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    yield from expand(0, (1 << n) - 1, 0)


def is_conformal(system: SetSystem) -> Verdict:
    """Every maximal clique of the primal graph is covered by a member."""
    adj = _adjacency(system)
    for clique in _maximal_cliques(adj, system.ground.n):
        if not any(clique & ~m == 0 for m in system.masks):
            return failed(
                "conformal",
                ("clique", Subset(system.ground, clique)),
                note="maximal clique covered by no member",
            )
    return passed("conformal")


def intersection_closure_check(system: SetSystem) -> Verdict:
    """Axiom K2: non-empty pairwise intersections are members."""
    masks = system.masks
    for i, a in enumerate(masks):
        for b in masks[i + 1 :]:
            common = a & b
            if common and not system.contains_mask(common):
                return failed(
                    "K2",
                    ("A", Subset(system.ground, a)),
                    ("B", Subset(system.ground, b)),
                    note="intersection is not a member",
                )
    return passed("K2")
