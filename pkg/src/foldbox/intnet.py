"""Integer Petri nets: Z-valued markings and conflict resolution.

Transitions are always enabled; firing may drive places negative,
which marks an illegal state. Legalization reorders an observed firing
sequence so every prefix marking is non-negative, preferring orders
close to the observed one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .codec import NET_SCHEMA, SchemaError, _validate_schema
from .multiset import Universe

MAX_LEGALIZE_LENGTH = 10


@dataclass(frozen=True)
class IntNet:
    """Net with integer arc weights (negative weights allowed)."""

    places: Universe
    input: tuple[tuple[tuple[int, int], ...], ...]  # per transition: (place, weight)
    output: tuple[tuple[tuple[int, int], ...], ...]
    transition_names: Optional[tuple[str, ...]] = None

    @staticmethod
    def of(
        places: Universe,
        arcs: Sequence[tuple[Mapping[int, int], Mapping[int, int]]],
        transition_names: Optional[Sequence[str]] = None,
        place_names: Optional[Sequence[str]] = None,
    ) -> "IntNet":
        if place_names is not None:
            places = Universe(places.size, tuple(place_names))
        ins = tuple(tuple(sorted(pre.items())) for pre, _ in arcs)
        outs = tuple(tuple(sorted(post.items())) for _, post in arcs)
        names = tuple(transition_names) if transition_names else None
        return IntNet(places, ins, outs, names)

    @property
    def n_transitions(self) -> int:
        return len(self.input)

    def transitions(self) -> range:
        return range(1, self.n_transitions + 1)

    def transition_name(self, t: int) -> str:
        if self.transition_names:
            return self.transition_names[t - 1]
        return f"t{t}"

    def transition_by_name(self, name: str) -> int:
        for t in self.transitions():
            if self.transition_name(t) == name:
                return t
        raise KeyError(name)

    def marking(self, counts: Mapping[int, int] = {}) -> "IntMarking":
        tokens = {p: 0 for p in self.places.symbols()}
        tokens.update(counts)
        return IntMarking(self, tuple(tokens[p] for p in self.places.symbols()))


@dataclass(frozen=True)
class IntMarking:
    net: IntNet
    tokens: tuple[int, ...]  # indexed by place - 1, values in Z

    def __getitem__(self, p: int) -> int:
        return self.tokens[p - 1]

    def counts(self) -> dict[int, int]:
        return {p: self.tokens[p - 1] for p in self.net.places.symbols()}

    def fire(self, t: int) -> "IntMarking":
        """Always enabled: subtract inputs, add outputs, in Z."""
        tokens = list(self.tokens)
        for p, w in self.net.input[t - 1]:
            tokens[p - 1] -= w
        for p, w in self.net.output[t - 1]:
            tokens[p - 1] += w
        return IntMarking(self.net, tuple(tokens))

    def fire_sequence(self, ts: Sequence[int]) -> "IntMarking":
        m = self
        for t in ts:
            m = m.fire(t)
        return m

    def is_legal(self) -> bool:
        return all(c >= 0 for c in self.tokens)


def int_fire(m: IntMarking, t: int) -> IntMarking:
    return m.fire(t)


def is_legal(m: IntMarking) -> bool:
    return m.is_legal()


def prefix_legal(m0: IntMarking, seq: Sequence[int]) -> bool:
    m = m0
    for t in seq:
        m = m.fire(t)
        if not m.is_legal():
            return False
    return True


def _kendall_tau(order: Sequence[int]) -> int:
    """Inversions of a sequence of original indices."""
    inv = 0
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                inv += 1
    return inv


def legalize(
    m0: IntMarking, seq: Sequence[int], node_cap: int = 200_000
) -> Optional[list[int]]:
    """Reorder seq so every prefix marking is legal, or None.

    An already-legal sequence is returned unchanged. Otherwise, among
    legal reorderings, the one with the fewest inversions against the
    observed order wins (observed timestamps are trusted as far as
    possible). Sequences longer than MAX_LEGALIZE_LENGTH return None:
    the exhaustive search is only meant for desk-scale conflicts.
    """
    if not m0.is_legal():
        raise ValueError("initial marking must be legal")
    seq = list(seq)
    if prefix_legal(m0, seq):
        return seq
    if len(seq) > MAX_LEGALIZE_LENGTH:
        return None

    best: Optional[list[int]] = None
    best_inv = None
    nodes = 0

    def search(prefix: list[int], remaining: list[int], m: IntMarking, inv: int) -> None:
        nonlocal best, best_inv, nodes
        if best_inv is not None and inv >= best_inv:
            return
        nodes += 1
        if nodes > node_cap:
            return
        if not remaining:
            best = list(prefix)
            best_inv = inv
            return
        for k in range(len(remaining)):
            idx = remaining[k]
            m2 = m.fire(seq[idx])
            if not m2.is_legal():
                continue
            # inversions added: remaining elements before idx that now come after
            added = sum(1 for other in remaining[:k])
            search(prefix + [idx], remaining[:k] + remaining[k + 1 :], m2, inv + added)

    search([], list(range(len(seq))), m0, 0)
    if best is None:
        return None
    return [seq[i] for i in best]


# ---------------------------------------------------------------------------
# JSON interchange (same schema as codec, with "integer": true)


def read_json(text: str) -> tuple[IntNet, Optional[IntMarking]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}: {e.msg}") from e
    _validate_schema(doc)
    place_docs = sorted(doc["places"], key=lambda d: d["id"])
    names = None
    if any("name" in d for d in place_docs):
        names = tuple(d.get("name", str(d["id"])) for d in place_docs)
    places = Universe(len(place_docs), names)
    tr_docs = sorted(doc["transitions"], key=lambda d: d["id"])
    arcs = [
        (
            {int(k): v for k, v in d["input"].items()},
            {int(k): v for k, v in d["output"].items()},
        )
        for d in tr_docs
    ]
    tnames = None
    if any("name" in d for d in tr_docs):
        tnames = tuple(d.get("name", f"t{d['id']}") for d in tr_docs)
    net = IntNet.of(places, arcs, tnames)
    marking = None
    if "marking" in doc:
        marking = net.marking({int(k): v for k, v in doc["marking"].items()})
    return net, marking


def write_json(net: IntNet, marking: Optional[IntMarking] = None) -> str:
    doc: dict = {
        "places": [
            {"id": p, **({"name": net.places.names[p - 1]} if net.places.names else {})}
            for p in net.places.symbols()
        ],
        "transitions": [
            {
                "id": t,
                **(
                    {"name": net.transition_names[t - 1]}
                    if net.transition_names
                    else {}
                ),
                "input": {str(p): w for p, w in net.input[t - 1]},
                "output": {str(p): w for p, w in net.output[t - 1]},
            }
            for t in net.transitions()
        ],
        "integer": True,
    }
    if marking is not None:
        doc["marking"] = {
            str(p): c for p, c in marking.counts().items() if c != 0
        }
    return json.dumps(doc, indent=2) + "\n"
