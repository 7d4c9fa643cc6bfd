"""Petri nets: markings, enabledness, firing, and net morphisms.

Places live in a symbol universe; transitions are indexed 1..n with
optional display names. Everything is an immutable value; firing
returns a fresh marking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .multiset import Multiset, MultisetHom, Universe, UniverseMismatch, ground

TransitionId = int


class UnknownTransition(KeyError):
    pass


class NotEnabled(ValueError):
    """The transition's input multiset is not included in the marking."""


class SquareViolation(ValueError):
    """A candidate net morphism fails a commuting square."""

    def __init__(self, transition: TransitionId, side: str, detail: str = ""):
        self.transition = transition
        self.side = side  # "input" | "output"
        super().__init__(
            f"morphism square fails at transition {transition} ({side}){': ' + detail if detail else ''}"
        )


@dataclass(frozen=True)
class Net:
    places: Universe
    input: tuple[Multiset, ...]  # indexed by transition - 1
    output: tuple[Multiset, ...]
    transition_names: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        if len(self.input) != len(self.output):
            raise ValueError("input/output must cover the same transitions")
        for m in (*self.input, *self.output):
            if m.universe != self.places:
                raise UniverseMismatch("arc multiset over the wrong place universe")
        if self.transition_names is not None and len(self.transition_names) != len(
            self.input
        ):
            raise ValueError("transition names must cover all transitions")

    @staticmethod
    def of(
        places: Universe,
        arcs: Iterable[tuple[Mapping[int, int], Mapping[int, int]]],
        transition_names: Optional[Iterable[str]] = None,
        place_names: Optional[Iterable[str]] = None,
    ) -> "Net":
        if place_names is not None:
            places = Universe(places.size, tuple(place_names))
        ins, outs = [], []
        for pre, post in arcs:
            ins.append(Multiset.of(places, pre))
            outs.append(Multiset.of(places, post))
        names = tuple(transition_names) if transition_names is not None else None
        return Net(places, tuple(ins), tuple(outs), names)

    @property
    def n_transitions(self) -> int:
        return len(self.input)

    def transitions(self) -> range:
        return range(1, self.n_transitions + 1)

    def _check(self, t: TransitionId) -> None:
        if not 1 <= t <= self.n_transitions:
            raise UnknownTransition(t)

    def pre(self, t: TransitionId) -> Multiset:
        self._check(t)
        return self.input[t - 1]

    def post(self, t: TransitionId) -> Multiset:
        self._check(t)
        return self.output[t - 1]

    def transition_name(self, t: TransitionId) -> str:
        self._check(t)
        if self.transition_names:
            return self.transition_names[t - 1]
        return f"t{t}"

    def transition_by_name(self, name: str) -> TransitionId:
        for t in self.transitions():
            if self.transition_name(t) == name:
                return t
        raise UnknownTransition(name)

    def marking(self, counts: Mapping[int, int] = {}) -> "Marking":
        return Marking(self, Multiset.of(self.places, counts))

    def marking_by_name(self, counts: Mapping[str, int]) -> "Marking":
        return self.marking({self.places.index_of(n): c for n, c in counts.items()})


@dataclass(frozen=True)
class Marking:
    net: Net
    tokens: Multiset

    def __post_init__(self) -> None:
        if self.tokens.universe != self.net.places:
            raise UniverseMismatch("marking over the wrong place universe")

    def enabled(self, t: TransitionId) -> bool:
        return self.net.pre(t).included_in(self.tokens)

    def enabled_set(self, ts: Iterable[TransitionId]) -> bool:
        need = Multiset.zero(self.net.places)
        for t in set(ts):
            need = need.union(self.net.pre(t))
        return need.included_in(self.tokens)

    def enabled_transitions(self) -> list[TransitionId]:
        return [t for t in self.net.transitions() if self.enabled(t)]

    def fire(self, t: TransitionId) -> "Marking":
        if not self.enabled(t):
            raise NotEnabled(f"transition {self.net.transition_name(t)} not enabled")
        tokens = self.tokens.difference(self.net.pre(t)).union(self.net.post(t))
        return Marking(self.net, tokens)

    def fire_set(self, ts: Iterable[TransitionId]) -> "Marking":
        ts = set(ts)
        if not self.enabled_set(ts):
            raise NotEnabled(f"set {sorted(ts)} not simultaneously enabled")
        tokens = self.tokens
        for t in sorted(ts):
            tokens = tokens.difference(self.net.pre(t))
        for t in sorted(ts):
            tokens = tokens.union(self.net.post(t))
        return Marking(self.net, tokens)

    def fire_sequence(self, ts: Iterable[TransitionId]) -> "Marking":
        m = self
        for t in ts:
            m = m.fire(t)
        return m

    def is_deadlocked(self) -> bool:
        return not self.enabled_transitions()


@dataclass(frozen=True)
class NetMorphism:
    """A pair (transition map, place homomorphism) making both squares commute.

    Use validate() to construct; the constructor itself trusts its input.
    """

    source: Net
    target: Net
    f: tuple[TransitionId, ...]  # indexed by source transition - 1
    g: MultisetHom

    @property
    def grounded(self) -> bool:
        return self.g.grounded

    @staticmethod
    def validate(
        source: Net, target: Net, f: Mapping[TransitionId, TransitionId], g: MultisetHom
    ) -> "NetMorphism":
        if g.source != source.places or g.target != target.places:
            raise UniverseMismatch("place hom endpoints do not match the nets")
        fs = []
        for t in source.transitions():
            if t not in f:
                raise UnknownTransition(f"transition map not total: missing {t}")
            ft = f[t]
            target._check(ft)
            if g.apply(source.pre(t)) != target.pre(ft):
                raise SquareViolation(t, "input")
            if g.apply(source.post(t)) != target.post(ft):
                raise SquareViolation(t, "output")
            fs.append(ft)
        return NetMorphism(source, target, tuple(fs), g)

    @staticmethod
    def identity(net: Net) -> "NetMorphism":
        return NetMorphism(
            net,
            net,
            tuple(net.transitions()),
            MultisetHom.identity(net.places),
        )

    def apply_transition(self, t: TransitionId) -> TransitionId:
        self.source._check(t)
        return self.f[t - 1]

    def compose(self, other: "NetMorphism") -> "NetMorphism":
        """self followed by other."""
        if self.target != other.source:
            raise ValueError("morphism endpoints do not match")
        f = tuple(other.f[ft - 1] for ft in self.f)
        return NetMorphism(self.source, other.target, f, self.g.compose(other.g))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.f == other.f
            and self.g.image == other.g.image
        )


def to_dot(net: Net, marking: Optional[Marking] = None) -> str:
    """GraphViz rendering: places as circles, transitions as boxes."""
    lines = ["digraph net {", "  rankdir=LR;"]
    for p in net.places.symbols():
        label = net.places.name_of(p)
        if marking is not None and marking.tokens[p]:
            label += f"\\n{marking.tokens[p]}"
        lines.append(f'  p{p} [shape=circle, label="{label}"];')
    for t in net.transitions():
        lines.append(f'  t{t} [shape=box, label="{net.transition_name(t)}"];')
    for t in net.transitions():
        for p, w in net.pre(t).items():
            attr = f' [label="{w}"]' if w != 1 else ""
            lines.append(f"  p{p} -> t{t}{attr};")
        for p, w in net.post(t).items():
            attr = f' [label="{w}"]' if w != 1 else ""
            lines.append(f"  t{t} -> p{p}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
