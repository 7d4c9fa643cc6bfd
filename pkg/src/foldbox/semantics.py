"""Executable semantics for histories: typed places, functions on transitions.

A binding is a strict symmetric monoidal functor into concrete values:
places carry value types, generators carry terminating functions whose
signatures must match the generator's strings under the place typing.
Running a history evaluates its diagram: identities copy, symmetries
permute, generators apply their bound functions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

from . import fssmc
from .bridge import History
from .codec import Presentation


class SignatureMismatch(ValueError):
    pass


class SemanticTypeError(TypeError):
    pass


class FunctionFailure(RuntimeError):
    def __init__(self, label: int, cause: BaseException):
        self.label = label
        self.cause = cause
        super().__init__(f"bound function of generator {label} failed: {cause}")


@dataclass(frozen=True)
class ValueType:
    """Closed type grammar: Unit, Bool, Int, IntList, Text, Pair(l, r)."""

    tag: str
    left: Optional["ValueType"] = None
    right: Optional["ValueType"] = None

    def check(self, value: Any) -> bool:
        if self.tag == "Unit":
            return value is None
        if self.tag == "Bool":
            return isinstance(value, bool)
        if self.tag == "Int":
            return isinstance(value, int) and not isinstance(value, bool)
        if self.tag == "IntList":
            return isinstance(value, list) and all(
                isinstance(x, int) and not isinstance(x, bool) for x in value
            )
        if self.tag == "Text":
            return isinstance(value, str)
        if self.tag == "Pair":
            return (
                isinstance(value, (list, tuple))
                and len(value) == 2
                and self.left.check(value[0])
                and self.right.check(value[1])
            )
        raise ValueError(f"unknown type tag {self.tag}")

    def __str__(self) -> str:
        if self.tag == "Pair":
            return f"Pair({self.left},{self.right})"
        return self.tag


UNIT = ValueType("Unit")
BOOL = ValueType("Bool")
INT = ValueType("Int")
INT_LIST = ValueType("IntList")
TEXT = ValueType("Text")


def pair(left: ValueType, right: ValueType) -> ValueType:
    return ValueType("Pair", left, right)


def parse_type(text: str) -> ValueType:
    text = text.strip()
    if text.startswith("Pair(") and text.endswith(")"):
        inner = text[5:-1]
        depth = 0
        for i, c in enumerate(inner):
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
            elif c == "," and depth == 0:
                return pair(parse_type(inner[:i]), parse_type(inner[i + 1 :]))
        raise ValueError(f"bad Pair type: {text}")
    if text in ("Unit", "Bool", "Int", "IntList", "Text"):
        return ValueType(text)
    raise ValueError(f"unknown type {text!r}")


@dataclass(frozen=True)
class BoundFn:
    """A named terminating function with an explicit signature."""

    name: str
    arg_types: tuple[ValueType, ...]
    out_types: tuple[ValueType, ...]
    fn: Callable[..., tuple]
    pure: bool = True


def _reference_sort(xs: list[int]) -> list[int]:
    return sorted(xs)


_BUILTINS: dict[str, Callable[[tuple[ValueType, ...], tuple[ValueType, ...]], BoundFn]] = {}


def _register(name: str):
    def deco(make):
        _BUILTINS[name] = make
        return make

    return deco


@_register("identity")
def _mk_identity(args, outs):
    if args != outs:
        raise SignatureMismatch("identity needs matching input/output types")
    return BoundFn("identity", args, outs, lambda *xs: tuple(xs))


@_register("increment")
def _mk_increment(args, outs):
    if args != (INT,) or outs != (INT,):
        raise SignatureMismatch("increment is Int -> Int")
    return BoundFn("increment", args, outs, lambda x: (x + 1,))


@_register("double")
def _mk_double(args, outs):
    if args != (INT,) or outs != (INT,):
        raise SignatureMismatch("double is Int -> Int")
    return BoundFn("double", args, outs, lambda x: (x * 2,))


@_register("quicksort")
def _mk_quicksort(args, outs):
    if args != (INT_LIST,) or outs != (INT_LIST,):
        raise SignatureMismatch("quicksort is IntList -> IntList")

    def qs(xs: list[int]) -> tuple:
        if len(xs) <= 1:
            return (list(xs),)
        pivot, rest = xs[0], xs[1:]
        (lo,) = qs([x for x in rest if x < pivot])
        (hi,) = qs([x for x in rest if x >= pivot])
        return (lo + [pivot] + hi,)

    return BoundFn("quicksort", args, outs, qs)


@_register("concat")
def _mk_concat(args, outs):
    if args != (TEXT, TEXT) or outs != (TEXT,):
        raise SignatureMismatch("concat is (Text, Text) -> Text")
    return BoundFn("concat", args, outs, lambda a, b: (a + b,))


@_register("const")
def _mk_const(args, outs):
    if outs != (INT,):
        raise SignatureMismatch("const produces a single Int")
    return BoundFn("const", args, outs, lambda *xs: (0,))


def builtin_registry() -> tuple[str, ...]:
    return tuple(sorted(_BUILTINS))


def builtin(
    name: str, arg_types: Sequence[ValueType], out_types: Sequence[ValueType]
) -> BoundFn:
    if name not in _BUILTINS:
        raise KeyError(f"unknown builtin {name!r}")
    return _BUILTINS[name](tuple(arg_types), tuple(out_types))


@dataclass(frozen=True)
class FoldBinding:
    presentation: Presentation
    place_types: tuple[ValueType, ...]  # indexed by place - 1
    transition_fns: tuple[BoundFn, ...]  # indexed by generator label - 1

    def type_of_string(self, w: Sequence[int]) -> tuple[ValueType, ...]:
        return tuple(self.place_types[x - 1] for x in w)


def validate_binding(
    p: Presentation,
    place_types: Sequence[ValueType],
    transition_fns: Sequence[BoundFn],
) -> FoldBinding:
    """Check every bound function's signature against its generator."""
    if len(place_types) != p.n_objects:
        raise SignatureMismatch("place typing not total")
    if len(transition_fns) != p.n_generators:
        raise SignatureMismatch("transition binding not total")
    b = FoldBinding(p, tuple(place_types), tuple(transition_fns))
    for label in range(1, p.n_generators + 1):
        fn = transition_fns[label - 1]
        want_in = b.type_of_string(p.source(label))
        want_out = b.type_of_string(p.target(label))
        if fn.arg_types != want_in or fn.out_types != want_out:
            raise SignatureMismatch(
                f"generator {label}: function {fn.name} has signature "
                f"{fn.arg_types} -> {fn.out_types}, generator needs "
                f"{want_in} -> {want_out}"
            )
    return b


def run_history(b: FoldBinding, h: History, inputs: Sequence[Any]) -> list[Any]:
    """Evaluate the history's diagram over concrete token values."""
    p = h.presentation
    if p != b.presentation:
        raise SemanticTypeError("binding is for a different presentation")
    dom_types = b.type_of_string(h.initial)
    if len(inputs) != len(dom_types):
        raise SemanticTypeError(
            f"expected {len(dom_types)} inputs, got {len(inputs)}"
        )
    for v, ty in zip(inputs, dom_types):
        if not ty.check(v):
            raise SemanticTypeError(f"value {v!r} is not a {ty}")

    diag = fssmc.to_diagram(h.term, p)
    box_outputs: list[Optional[tuple]] = [None] * len(diag.boxes)

    def value_at(end: tuple) -> Any:
        if end[0] == "in":
            return inputs[end[1]]
        return eval_box(end[0])[end[1]]

    def eval_box(i: int) -> tuple:
        if box_outputs[i] is None:
            label, ins = diag.boxes[i]
            fn = b.transition_fns[label - 1]
            args = [value_at(src) for src in ins]
            try:
                out = fn.fn(*args)
            except Exception as e:  # wrap user-function failures
                raise FunctionFailure(label, e) from e
            if len(out) != len(fn.out_types) or not all(
                ty.check(v) for v, ty in zip(out, fn.out_types)
            ):
                raise SemanticTypeError(
                    f"function {fn.name} returned ill-typed {out!r}"
                )
            box_outputs[i] = tuple(out)
        return box_outputs[i]

    return [value_at(src) for src in diag.outputs]


# ---------------------------------------------------------------------------
# Binding files: {"places": {"1": "IntList"}, "transitions": {"1": "quicksort"}}


def read_binding(p: Presentation, text: str) -> FoldBinding:
    doc = json.loads(text)
    place_types = []
    for place in range(1, p.n_objects + 1):
        raw = doc.get("places", {}).get(str(place))
        if raw is None:
            raise SignatureMismatch(f"no type for place {place}")
        place_types.append(parse_type(raw))
    fns = []
    for label in range(1, p.n_generators + 1):
        name = doc.get("transitions", {}).get(str(label))
        if name is None:
            raise SignatureMismatch(f"no function for generator {label}")
        want_in = tuple(place_types[x - 1] for x in p.source(label))
        want_out = tuple(place_types[x - 1] for x in p.target(label))
        fns.append(builtin(name, want_in, want_out))
    return validate_binding(p, place_types, fns)
