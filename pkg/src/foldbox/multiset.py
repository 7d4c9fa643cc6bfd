"""Finite multisets over an explicit symbol universe.

A universe declares symbols 1..n (0 is reserved as the codec delimiter).
Multisets are sparse maps symbol -> positive count; operations across
distinct universes raise rather than coerce.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

MAX_NAT = 2**63 - 1

SymbolId = int


class UniverseMismatch(ValueError):
    """Operands live over different universes."""


class NotIncluded(ValueError):
    """Multiset difference is undefined: subtrahend not included."""


class NatOverflow(OverflowError):
    """A count exceeded the 64-bit natural range."""


def _checked_nat(n: int) -> int:
    if n < 0 or n > MAX_NAT:
        raise NatOverflow(f"count {n} outside [0, 2^63-1]")
    return n


@dataclass(frozen=True)
class Universe:
    """An ordered symbol universe {1, ..., size}, with optional display names."""

    size: int
    names: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("universe size must be non-negative")
        if self.names is not None and len(self.names) != self.size:
            raise ValueError("names must cover the whole universe")

    def symbols(self) -> range:
        return range(1, self.size + 1)

    def __contains__(self, sym: SymbolId) -> bool:
        return 1 <= sym <= self.size

    def name_of(self, sym: SymbolId) -> str:
        if sym not in self:
            raise KeyError(sym)
        return self.names[sym - 1] if self.names else str(sym)

    def index_of(self, name: str) -> SymbolId:
        if self.names is None:
            raise KeyError(name)
        return self.names.index(name) + 1

    def disjoint_union(self, other: "Universe") -> "Universe":
        """Tagged sum: our symbols keep their ids, other's shift by size."""
        names = None
        if self.names is not None or other.names is not None:
            left = self.names or tuple(str(i) for i in self.symbols())
            right = other.names or tuple(str(i) for i in other.symbols())
            names = tuple(f"left:{n}" for n in left) + tuple(
                f"right:{n}" for n in right
            )
        return Universe(self.size + other.size, names)


@dataclass(frozen=True)
class Multiset:
    """Sparse multiset: stored counts are strictly positive."""

    universe: Universe
    _items: tuple[tuple[SymbolId, int], ...]

    @staticmethod
    def of(universe: Universe, counts: Mapping[SymbolId, int] = {}) -> "Multiset":
        items = []
        for sym in sorted(counts):
            c = counts[sym]
            if c == 0:
                continue
            if sym not in universe:
                raise KeyError(f"symbol {sym} not in universe of size {universe.size}")
            items.append((sym, _checked_nat(c)))
        return Multiset(universe, tuple(items))

    @staticmethod
    def zero(universe: Universe) -> "Multiset":
        return Multiset(universe, ())

    @staticmethod
    def singleton(universe: Universe, sym: SymbolId, count: int = 1) -> "Multiset":
        return Multiset.of(universe, {sym: count})

    def counts(self) -> dict[SymbolId, int]:
        return dict(self._items)

    def items(self) -> tuple[tuple[SymbolId, int], ...]:
        return self._items

    def __getitem__(self, sym: SymbolId) -> int:
        for s, c in self._items:
            if s == sym:
                return c
        return 0

    def support(self) -> tuple[SymbolId, ...]:
        return tuple(s for s, _ in self._items)

    def is_zero(self) -> bool:
        return not self._items

    def _require_same_universe(self, other: "Multiset") -> None:
        if self.universe != other.universe:
            raise UniverseMismatch(
                f"universes differ: {self.universe} vs {other.universe}"
            )

    def union(self, other: "Multiset") -> "Multiset":
        """Pointwise sum."""
        self._require_same_universe(other)
        out = self.counts()
        for s, c in other._items:
            out[s] = _checked_nat(out.get(s, 0) + c)
        return Multiset.of(self.universe, out)

    def difference(self, other: "Multiset") -> "Multiset":
        """Pointwise subtraction; defined only when other <= self."""
        self._require_same_universe(other)
        if not other.included_in(self):
            raise NotIncluded(f"{other} not included in {self}")
        out = self.counts()
        for s, c in other._items:
            out[s] -= c
        return Multiset.of(self.universe, out)

    def included_in(self, other: "Multiset") -> bool:
        self._require_same_universe(other)
        return all(c <= other[s] for s, c in self._items)

    def scalar(self, n: int) -> "Multiset":
        if n < 0:
            raise ValueError("scalar must be a natural")
        return Multiset.of(
            self.universe, {s: _checked_nat(c * n) for s, c in self._items}
        )

    def disjoint_union(self, other: "Multiset") -> "Multiset":
        """Tagged union over the sum universe; right symbols shift."""
        uni = self.universe.disjoint_union(other.universe)
        shift = self.universe.size
        out = self.counts()
        for s, c in other._items:
            out[s + shift] = c
        return Multiset.of(uni, out)

    def cardinality(self) -> int:
        return sum(c for _, c in self._items)

    def __str__(self) -> str:
        inner = ",".join(
            f"{self.universe.name_of(s)}:{c}" for s, c in self._items
        )
        return "{" + inner + "}"


@dataclass(frozen=True)
class MultisetHom:
    """Multiset homomorphism, determined by the image of each source symbol."""

    source: Universe
    target: Universe
    image: tuple[Multiset, ...]  # indexed by source symbol - 1
    base: Optional[tuple[SymbolId, ...]] = None  # grounded witness, if any

    @staticmethod
    def of(
        source: Universe, target: Universe, image: Mapping[SymbolId, Multiset]
    ) -> "MultisetHom":
        imgs = []
        for sym in source.symbols():
            if sym not in image:
                raise ValueError(f"homomorphism not total: missing symbol {sym}")
            m = image[sym]
            if m.universe != target:
                raise UniverseMismatch(f"image of {sym} over the wrong universe")
            imgs.append(m)
        return MultisetHom(source, target, tuple(imgs))

    @property
    def grounded(self) -> bool:
        return self.base is not None

    def apply(self, a: Multiset) -> Multiset:
        if a.universe != self.source:
            raise UniverseMismatch("argument not over the hom's source universe")
        out = Multiset.zero(self.target)
        for s, c in a.items():
            out = out.union(self.image[s - 1].scalar(c))
        return out

    def compose(self, other: "MultisetHom") -> "MultisetHom":
        """self followed by other."""
        if self.target != other.source:
            raise UniverseMismatch("homs not composable")
        imgs = tuple(other.apply(m) for m in self.image)
        base = None
        if self.base is not None and other.base is not None:
            base = tuple(other.base[b - 1] for b in self.base)
        return MultisetHom(self.source, other.target, imgs, base)

    @staticmethod
    def identity(universe: Universe) -> "MultisetHom":
        return ground(universe, universe, {s: s for s in universe.symbols()})


def ground(
    source: Universe, target: Universe, base: Mapping[SymbolId, SymbolId]
) -> MultisetHom:
    """Extend a plain symbol map to a (grounded) multiset homomorphism."""
    syms = []
    for s in source.symbols():
        if s not in base:
            raise ValueError(f"base map not total: missing symbol {s}")
        t = base[s]
        if t not in target:
            raise KeyError(f"base image {t} not in target universe")
        syms.append(t)
    image = tuple(Multiset.singleton(target, t) for t in syms)
    return MultisetHom(source, target, image, tuple(syms))
