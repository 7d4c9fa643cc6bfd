"""Serialization: zero-delimited number strings and a JSON net format.

The wire format is a sequence of decimal naturals where 0 is a
delimiter: chopping at every zero yields segments, consecutive pairs
of segments are the source/target strings of the generators of a
presentation. The textual convention is comma-separated ASCII; a
binary variant packs the same numbers as unsigned LEB128.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .multiset import Multiset, Universe
from .petri import Marking, Net


class CodecError(ValueError):
    pass


class OddSegmentCount(CodecError):
    pass


class TrailingGarbage(CodecError):
    """A nonzero run was not terminated by its 0 delimiter."""


class SchemaError(CodecError):
    pass


@dataclass(frozen=True)
class Presentation:
    """Generating objects 1..n_objects plus ordered generators.

    Generator sources/targets are ordered strings (tuples) over the
    objects; their order matters for the category, and is forgotten
    (via multiplicity) when building a net.
    """

    n_objects: int
    generators: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]
    object_names: Optional[tuple[str, ...]] = None
    generator_names: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        for src, tgt in self.generators:
            for x in (*src, *tgt):
                if not 1 <= x <= self.n_objects:
                    raise ValueError(f"object index {x} outside 1..{self.n_objects}")

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def source(self, label: int) -> tuple[int, ...]:
        return self.generators[label - 1][0]

    def target(self, label: int) -> tuple[int, ...]:
        return self.generators[label - 1][1]

    def universe(self) -> Universe:
        return Universe(self.n_objects, self.object_names)


def decode_numbers(numbers: Sequence[int]) -> Presentation:
    """Chop at every zero, group segments into (source, target) pairs."""
    segments: list[tuple[int, ...]] = []
    current: list[int] = []
    for n in numbers:
        if n < 0:
            raise CodecError(f"negative number {n} in stream")
        if n == 0:
            segments.append(tuple(current))
            current = []
        else:
            current.append(n)
    if current:
        raise TrailingGarbage("stream does not end on a 0 delimiter")
    if len(segments) % 2:
        raise OddSegmentCount(f"{len(segments)} segments cannot pair up")
    gens = tuple(
        (segments[2 * k], segments[2 * k + 1]) for k in range(len(segments) // 2)
    )
    max_index = max((x for seg in segments for x in seg), default=0)
    return Presentation(max_index, gens)


def encode_numbers(p: Presentation) -> list[int]:
    out: list[int] = []
    for src, tgt in p.generators:
        out.extend(src)
        out.append(0)
        out.extend(tgt)
        out.append(0)
    return out


def decode(text: str) -> Presentation:
    """Parse the comma-separated textual form (.pnz)."""
    text = text.strip()
    if not text:
        return Presentation(0, ())
    try:
        numbers = [int(tok) for tok in text.split(",")]
    except ValueError as e:
        raise CodecError(f"not a comma-separated number string: {e}") from e
    return decode_numbers(numbers)


def encode(p: Presentation) -> str:
    return ",".join(str(n) for n in encode_numbers(p))


def encode_binary(p: Presentation) -> bytes:
    """Unsigned LEB128 packing of the same number stream."""
    out = bytearray()
    for n in encode_numbers(p):
        while True:
            byte = n & 0x7F
            n >>= 7
            if n:
                out.append(byte | 0x80)
            else:
                out.append(byte)
                break
    return bytes(out)


def decode_binary(data: bytes) -> Presentation:
    numbers: list[int] = []
    value = shift = 0
    for byte in data:
        value |= (byte & 0x7F) << shift
        if byte & 0x80:
            shift += 7
        else:
            numbers.append(value)
            value = shift = 0
    if shift:
        raise CodecError("truncated LEB128 number at end of stream")
    return decode_numbers(numbers)


def string_multiplicity(universe: Universe, s: Sequence[int]) -> Multiset:
    counts: dict[int, int] = {}
    for x in s:
        counts[x] = counts.get(x, 0) + 1
    return Multiset.of(universe, counts)


def presentation_to_net(p: Presentation) -> Net:
    """Forget generator string order: arcs are the multiplicities."""
    places = p.universe()
    ins = tuple(string_multiplicity(places, src) for src, _ in p.generators)
    outs = tuple(string_multiplicity(places, tgt) for _, tgt in p.generators)
    return Net(places, ins, outs, p.generator_names)


# ---------------------------------------------------------------------------
# JSON net format (.pn.json)

NET_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Marked Petri net",
    "type": "object",
    "required": ["places", "transitions"],
    "additionalProperties": False,
    "properties": {
        "places": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "name": {"type": "string"},
                },
            },
        },
        "transitions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "input", "output"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "name": {"type": "string"},
                    "input": {
                        "type": "object",
                        "additionalProperties": {"type": "integer"},
                    },
                    "output": {
                        "type": "object",
                        "additionalProperties": {"type": "integer"},
                    },
                },
            },
        },
        "marking": {
            "type": "object",
            "additionalProperties": {"type": "integer"},
        },
        "integer": {"type": "boolean"},
    },
}


def _validate_schema(doc: object) -> None:
    import jsonschema

    try:
        jsonschema.validate(doc, NET_SCHEMA)
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path)
        raise SchemaError(f"at {path or '<root>'}: {e.message}") from e


def read_json(text: str) -> tuple[Net, Optional[Marking], bool]:
    """Parse a marked net; returns (net, marking or None, integer flag)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}: {e.msg}") from e
    _validate_schema(doc)
    is_integer = bool(doc.get("integer", False))
    place_docs = sorted(doc["places"], key=lambda d: d["id"])
    if [d["id"] for d in place_docs] != list(range(1, len(place_docs) + 1)):
        raise SchemaError("place ids must be dense 1..n")
    names = None
    if any("name" in d for d in place_docs):
        names = tuple(d.get("name", str(d["id"])) for d in place_docs)
    places = Universe(len(place_docs), names)

    tr_docs = sorted(doc["transitions"], key=lambda d: d["id"])
    if [d["id"] for d in tr_docs] != list(range(1, len(tr_docs) + 1)):
        raise SchemaError("transition ids must be dense 1..n")

    def arc(d: dict, key: str) -> Multiset:
        counts = {}
        for k, v in d[key].items():
            p = int(k)
            if not 1 <= p <= places.size:
                raise SchemaError(f"transition {d['id']}: unknown place {k}")
            if v < 0 and not is_integer:
                raise SchemaError(
                    f"transition {d['id']}: negative weight without integer flag"
                )
            # integer nets keep raw weights at the intnet level; the Net
            # carries the non-negative projection for structure
            counts[p] = max(v, 0)
        return Multiset.of(places, counts)

    ins = tuple(arc(d, "input") for d in tr_docs)
    outs = tuple(arc(d, "output") for d in tr_docs)
    tnames = None
    if any("name" in d for d in tr_docs):
        tnames = tuple(d.get("name", f"t{d['id']}") for d in tr_docs)
    net = Net(places, ins, outs, tnames)

    marking = None
    if "marking" in doc:
        counts = {}
        for k, v in doc["marking"].items():
            p = int(k)
            if not 1 <= p <= places.size:
                raise SchemaError(f"marking: unknown place {k}")
            if v < 0 and not is_integer:
                raise SchemaError("marking: negative count without integer flag")
            counts[p] = v
        if is_integer:
            # negative counts cannot live in a Multiset; clamp here, the
            # intnet module re-reads the raw document for true Z markings
            counts = {p: c for p, c in counts.items() if c > 0}
        marking = net.marking(counts)
    return net, marking, is_integer


def write_json(
    net: Net, marking: Optional[Marking] = None, integer: bool = False
) -> str:
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
                "input": {str(p): c for p, c in net.pre(t).items()},
                "output": {str(p): c for p, c in net.post(t).items()},
            }
            for t in net.transitions()
        ],
    }
    if marking is not None:
        doc["marking"] = {str(p): c for p, c in marking.tokens.items()}
    if integer:
        doc["integer"] = True
    return json.dumps(doc, indent=2) + "\n"
