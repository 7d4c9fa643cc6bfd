"""Free strict symmetric monoidal categories.

Objects are strings (tuples) of object indices; morphisms are terms
built from identities, swaps, and declared generators under sequential
and parallel composition. The monoidal axioms are decided on open
wiring diagrams: two terms are equal iff their diagrams agree up to a
boundary-fixing isomorphism, which we decide by canonical labeling
(partition refinement with deterministic backtracking).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .codec import Presentation

ObString = tuple[int, ...]

UNIT: ObString = ()


class TypeMismatch(ValueError):
    """A sequential composite whose endpoint strings do not meet."""


class ShapeMismatch(ValueError):
    """A functor assignment whose generator shapes do not line up."""


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Id:
    obj: ObString


@dataclass(frozen=True)
class Sym:
    left: ObString
    right: ObString


@dataclass(frozen=True)
class Gen:
    label: int


@dataclass(frozen=True)
class Seq:
    first: "MorphTerm"
    second: "MorphTerm"


@dataclass(frozen=True)
class Par:
    top: "MorphTerm"
    bottom: "MorphTerm"


MorphTerm = Union[Id, Sym, Gen, Seq, Par]


def dom(t: MorphTerm, p: Presentation) -> ObString:
    if isinstance(t, Id):
        return t.obj
    if isinstance(t, Sym):
        return t.left + t.right
    if isinstance(t, Gen):
        return p.source(t.label)
    if isinstance(t, Seq):
        _check_seq(t, p)
        return dom(t.first, p)
    if isinstance(t, Par):
        return dom(t.top, p) + dom(t.bottom, p)
    raise TypeError(t)


def cod(t: MorphTerm, p: Presentation) -> ObString:
    if isinstance(t, Id):
        return t.obj
    if isinstance(t, Sym):
        return t.right + t.left
    if isinstance(t, Gen):
        return p.target(t.label)
    if isinstance(t, Seq):
        _check_seq(t, p)
        return cod(t.second, p)
    if isinstance(t, Par):
        return cod(t.top, p) + cod(t.bottom, p)
    raise TypeError(t)


def _check_seq(t: Seq, p: Presentation) -> None:
    mid_a, mid_b = cod(t.first, p), dom(t.second, p)
    if mid_a != mid_b:
        raise TypeMismatch(f"composite mismatch: {mid_a} vs {mid_b}")


def seq(*terms: MorphTerm) -> MorphTerm:
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def par(*terms: MorphTerm) -> MorphTerm:
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


# ---------------------------------------------------------------------------
# Diagrams

# A wire end is ("in", i) for boundary input i, or (box index, port index)
# on a box. Producer ends are boundary inputs and box outputs; consumer
# ends are boundary outputs and box inputs.


@dataclass(frozen=True)
class Diagram:
    """Open wiring diagram: boxes with input links, plus output links.

    Links are producer ends; each box stores the producer feeding each
    of its input ports, `outputs` stores the producer feeding each
    boundary output. Box order is construction order, not canonical.
    """

    dom: ObString
    cod: ObString
    boxes: tuple[tuple[int, tuple[tuple, ...]], ...]  # (label, input links)
    outputs: tuple[tuple, ...]


def to_diagram(t: MorphTerm, p: Presentation) -> Diagram:
    d = dom(t, p)
    boxes: list[tuple[int, tuple[tuple, ...]]] = []

    def eval_term(t: MorphTerm, ins: tuple[tuple, ...]) -> tuple[tuple, ...]:
        if isinstance(t, Id):
            return ins
        if isinstance(t, Sym):
            n = len(t.left)
            return ins[n:] + ins[:n]
        if isinstance(t, Gen):
            idx = len(boxes)
            boxes.append((t.label, ins))
            return tuple((idx, i) for i in range(len(p.target(t.label))))
        if isinstance(t, Seq):
            return eval_term(t.second, eval_term(t.first, ins))
        if isinstance(t, Par):
            n = len(dom(t.top, p))
            return eval_term(t.top, ins[:n]) + eval_term(t.bottom, ins[n:])
        raise TypeError(t)

    outs = eval_term(t, tuple(("in", i) for i in range(len(d))))
    return Diagram(d, cod(t, p), tuple(boxes), outs)


def _canonical_encoding(
    diag: Diagram, p: Presentation
) -> tuple:
    """Canonical form: relabel boxes by refinement + backtracking.

    Box colors start as generator labels and are refined by the colors
    feeding their input ports and consuming their output ports until
    stable; remaining ties are broken by individualizing one box of the
    smallest ambiguous class and taking the lexicographically least
    encoding.
    """
    n = len(diag.boxes)
    if n == 0:
        return (diag.dom, diag.cod, (), diag.outputs)

    # consumer map: producer end -> consumer token
    consumers: dict[tuple, tuple] = {}
    for b, (_, ins) in enumerate(diag.boxes):
        for i, src in enumerate(ins):
            consumers[src] = (b, i)
    for j, src in enumerate(diag.outputs):
        consumers[src] = ("out", j)

    def refine(colors: list) -> list:
        # tokens are disambiguated by a leading integer tag so they sort
        while True:
            def prod_token(end: tuple) -> tuple:
                if end[0] == "in":
                    return (0, end[1], 0)
                return (1, colors[end[0]], end[1])

            def cons_token(end: tuple) -> tuple:
                if end[0] == "out":
                    return (0, end[1], 0)
                return (1, colors[end[0]], end[1])

            sigs = []
            for b, (label, ins) in enumerate(diag.boxes):
                in_sig = tuple(prod_token(src) for src in ins)
                out_sig = tuple(
                    cons_token(consumers[(b, i)])
                    for i in range(len(p.target(label)))
                )
                sigs.append((colors[b], label, in_sig, out_sig))
            ranked = sorted(set(sigs))
            new = [ranked.index(s) for s in sigs]
            if new == colors:
                return colors
            colors = new

    def encode_with(order: list[int]) -> tuple:
        # order[b] = canonical index of box b
        def rename(end: tuple) -> tuple:
            if end[0] == "in":
                return end
            return (order[end[0]], end[1])

        boxes = [None] * n
        for b, (label, ins) in enumerate(diag.boxes):
            boxes[order[b]] = (label, tuple(rename(src) for src in ins))
        return (
            diag.dom,
            diag.cod,
            tuple(boxes),
            tuple(rename(src) for src in diag.outputs),
        )

    best: Optional[tuple] = None

    def search(colors: list) -> None:
        nonlocal best
        colors = refine(colors)
        classes: dict[int, list[int]] = {}
        for b, c in enumerate(colors):
            classes.setdefault(c, []).append(b)
        ambiguous = sorted(
            (c for c, members in classes.items() if len(members) > 1)
        )
        if not ambiguous:
            order = [0] * n
            for rank, b in enumerate(sorted(range(n), key=lambda b: colors[b])):
                order[b] = rank
            enc = encode_with(order)
            if best is None or enc < best:
                best = enc
            return
        target = classes[ambiguous[0]]
        for b in target:
            child = list(colors)
            child[b] = -1  # individualize below every existing color
            search(child)

    search([0] * n)
    assert best is not None
    return best


def canonical(t: MorphTerm, p: Presentation) -> tuple:
    return _canonical_encoding(to_diagram(t, p), p)


def equal(a: MorphTerm, b: MorphTerm, p: Presentation) -> bool:
    """Equality in the free category: same diagram modulo the axioms."""
    if dom(a, p) != dom(b, p) or cod(a, p) != cod(b, p):
        return False
    return canonical(a, p) == canonical(b, p)


# ---------------------------------------------------------------------------
# Symmetries

Permutation = tuple[int, ...]  # perm[i] = destination position of input i


def permute(s: Sequence, perm: Permutation) -> tuple:
    if len(s) != len(perm):
        raise ValueError("permutation arity mismatch")
    out = [None] * len(s)
    for i, j in enumerate(perm):
        out[j] = s[i]
    return tuple(out)


def compose_permutations(p: Permutation, q: Permutation) -> Permutation:
    """p then q."""
    return tuple(q[p[i]] for i in range(len(p)))


def invert_permutation(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def sym_from_permutation(w: ObString, perm: Permutation) -> MorphTerm:
    """Realize a position permutation as adjacent swaps on w."""
    if len(w) != len(perm):
        raise ValueError("permutation arity mismatch")
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("not a permutation")
    if len(w) == 0 or perm == tuple(range(len(w))):
        return Id(w)
    # bubble sort targets; track the string as swaps are emitted
    targets = list(perm)
    current = list(w)
    term: Optional[MorphTerm] = None
    changed = True
    while changed:
        changed = False
        for i in range(len(targets) - 1):
            if targets[i] > targets[i + 1]:
                step = par(
                    *(
                        [Id(tuple(current[:i]))] if i else []
                    ),
                    Sym((current[i],), (current[i + 1],)),
                    *(
                        [Id(tuple(current[i + 2 :]))]
                        if i + 2 < len(current)
                        else []
                    ),
                )
                term = step if term is None else Seq(term, step)
                targets[i], targets[i + 1] = targets[i + 1], targets[i]
                current[i], current[i + 1] = current[i + 1], current[i]
                changed = True
    return term if term is not None else Id(w)


def is_symmetry(t: MorphTerm, p: Presentation) -> Optional[Permutation]:
    """The traced permutation, if the term's diagram has no boxes."""
    diag = to_diagram(t, p)
    if diag.boxes:
        return None
    perm = [0] * len(diag.outputs)
    for j, src in enumerate(diag.outputs):
        perm[src[1]] = j
    return tuple(perm)


# ---------------------------------------------------------------------------
# Generator-preserving functors


@dataclass(frozen=True)
class Functor:
    """Strict symmetric monoidal functor determined on generators.

    Each generating object maps to a string; each generator maps to
    (pre-permutation, target generator, post-permutation), realizing
    a sandwich symmetry;generator;symmetry.
    """

    source: Presentation
    target: Presentation
    object_map: tuple[ObString, ...]  # indexed by source object - 1
    gen_map: tuple[tuple[Permutation, int, Permutation], ...]

    def apply_object(self, w: ObString) -> ObString:
        out: list[int] = []
        for x in w:
            out.extend(self.object_map[x - 1])
        return tuple(out)

    @property
    def grounded(self) -> bool:
        return all(len(img) == 1 for img in self.object_map)

    def apply_term(self, t: MorphTerm) -> MorphTerm:
        if isinstance(t, Id):
            return Id(self.apply_object(t.obj))
        if isinstance(t, Sym):
            return Sym(self.apply_object(t.left), self.apply_object(t.right))
        if isinstance(t, Gen):
            pre, label, post = self.gen_map[t.label - 1]
            src = self.apply_object(self.source.source(t.label))
            tgt_str = self.target.target(label)
            out: MorphTerm = sym_from_permutation(src, pre)
            out = Seq(out, Gen(label))
            out = Seq(out, sym_from_permutation(tgt_str, post))
            return out
        if isinstance(t, Seq):
            return Seq(self.apply_term(t.first), self.apply_term(t.second))
        if isinstance(t, Par):
            return Par(self.apply_term(t.top), self.apply_term(t.bottom))
        raise TypeError(t)

    def compose(self, other: "Functor") -> "Functor":
        """self followed by other."""
        if self.target != other.source:
            raise ValueError("functor endpoints do not match")
        object_map = tuple(
            other.apply_object(img) for img in self.object_map
        )
        gen_map = []
        for label in range(1, self.source.n_generators + 1):
            image = other.apply_term(self.apply_term(Gen(label)))
            gen_map.append(_term_to_sandwich(image, other.target))
        return check_generator_preserving(
            self.source, other.target, object_map, tuple(gen_map)
        )


def _term_to_sandwich(
    t: MorphTerm, p: Presentation
) -> tuple[Permutation, int, Permutation]:
    """Split a one-generator term into (pre-perm, label, post-perm)."""
    diag = to_diagram(t, p)
    if len(diag.boxes) != 1:
        raise ShapeMismatch("image is not a single sandwiched generator")
    label, ins = diag.boxes[0]
    pre = [0] * len(diag.dom)
    for port, src in enumerate(ins):
        assert src[0] == "in"
        pre[src[1]] = port
    post = [0] * len(diag.outputs)
    for j, src in enumerate(diag.outputs):
        assert src[0] == 0
        post[src[1]] = j
    return (tuple(pre), label, tuple(post))


def check_generator_preserving(
    source: Presentation,
    target: Presentation,
    object_map: Sequence[ObString],
    gen_map: Sequence[tuple[Permutation, int, Permutation]],
) -> Functor:
    """Validate that every generator image has the right shape."""
    if len(object_map) != source.n_objects:
        raise ShapeMismatch("object map not total")
    if len(gen_map) != source.n_generators:
        raise ShapeMismatch("generator map not total")
    f = Functor(source, target, tuple(object_map), tuple(gen_map))
    for label in range(1, source.n_generators + 1):
        pre, tgt_label, post = gen_map[label - 1]
        if not 1 <= tgt_label <= target.n_generators:
            raise ShapeMismatch(f"generator {label}: unknown target {tgt_label}")
        src_img = f.apply_object(source.source(label))
        tgt_img = f.apply_object(source.target(label))
        beta_src = target.source(tgt_label)
        beta_tgt = target.target(tgt_label)
        if len(pre) != len(src_img) or permute(src_img, pre) != beta_src:
            raise ShapeMismatch(
                f"generator {label}: source {src_img} does not permute onto {beta_src}"
            )
        if len(post) != len(beta_tgt) or permute(beta_tgt, post) != tgt_img:
            raise ShapeMismatch(
                f"generator {label}: target {beta_tgt} does not permute onto {tgt_img}"
            )
    return f


def identity_functor(p: Presentation) -> Functor:
    return Functor(
        p,
        p,
        tuple((i,) for i in range(1, p.n_objects + 1)),
        tuple(
            (
                tuple(range(len(p.source(g)))),
                g,
                tuple(range(len(p.target(g)))),
            )
            for g in range(1, p.n_generators + 1)
        ),
    )


def functor_equal(f: Functor, g: Functor) -> bool:
    """Equality as functors: same endpoints, objects, and generator images."""
    if (f.source, f.target) != (g.source, g.target):
        return False
    if f.object_map != g.object_map:
        return False
    return all(
        equal(f.apply_term(Gen(l)), g.apply_term(Gen(l)), f.target)
        for l in range(1, f.source.n_generators + 1)
    )


# ---------------------------------------------------------------------------
# Term grammar: id[w], sym[u|v], g<k>, ';' for seq, '*' for par


def print_term(t: MorphTerm) -> str:
    def w(s: ObString) -> str:
        return ",".join(str(x) for x in s)

    def go(t: MorphTerm, parent: str) -> str:
        if isinstance(t, Id):
            return f"id[{w(t.obj)}]"
        if isinstance(t, Sym):
            return f"sym[{w(t.left)}|{w(t.right)}]"
        if isinstance(t, Gen):
            return f"g<{t.label}>"
        if isinstance(t, Seq):
            body = f"{go(t.first, ';')} ; {go(t.second, ';')}"
            return f"({body})" if parent == "*" else body
        if isinstance(t, Par):
            body = f"{go(t.top, '*')} * {go(t.bottom, '*')}"
            return f"({body})" if parent == ";" else body
        raise TypeError(t)

    return go(t, "")


class ParseError(ValueError):
    pass


def parse_term(text: str) -> MorphTerm:
    """Parse the textual grammar; ';' binds looser than '*'."""
    tokens = _tokenize(text)
    pos = 0

    def peek() -> Optional[str]:
        return tokens[pos] if pos < len(tokens) else None

    def take(expected: Optional[str] = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        tok = tokens[pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def obstring(raw: str) -> ObString:
        raw = raw.strip()
        if not raw:
            return ()
        return tuple(int(x) for x in raw.split(","))

    def atom() -> MorphTerm:
        tok = take()
        if tok == "(":
            t = sequence()
            take(")")
            return t
        if tok.startswith("id["):
            return Id(obstring(tok[3:-1]))
        if tok.startswith("sym["):
            left, right = tok[4:-1].split("|")
            return Sym(obstring(left), obstring(right))
        if tok.startswith("g<"):
            return Gen(int(tok[2:-1]))
        raise ParseError(f"unexpected token {tok!r}")

    def parallel() -> MorphTerm:
        t = atom()
        while peek() == "*":
            take()
            t = Par(t, atom())
        return t

    def sequence() -> MorphTerm:
        t = parallel()
        while peek() == ";":
            take()
            t = Seq(t, parallel())
        return t

    out = sequence()
    if pos != len(tokens):
        raise ParseError(f"trailing input at token {tokens[pos]!r}")
    return out


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "();*":
            tokens.append(c)
            i += 1
        elif text.startswith("id[", i) or text.startswith("sym[", i):
            j = text.index("]", i)
            tokens.append(text[i : j + 1])
            i = j + 1
        elif text.startswith("g<", i):
            j = text.index(">", i)
            tokens.append(text[i : j + 1])
            i = j + 1
        else:
            raise ParseError(f"bad character {c!r} at offset {i}")
    return tokens


def diagram_to_json(diag: Diagram, p: Presentation) -> dict:
    """Layered JSON export of a diagram, for external rendering."""
    def link(end: tuple) -> dict:
        if end[0] == "in":
            return {"kind": "input", "index": end[1]}
        return {"kind": "box", "box": end[0], "port": end[1]}

    return {
        "dom": list(diag.dom),
        "cod": list(diag.cod),
        "boxes": [
            {
                "label": label,
                "name": (
                    p.generator_names[label - 1]
                    if p.generator_names
                    else f"t{label}"
                ),
                "inputs": [link(src) for src in ins],
                "arity_out": len(p.target(label)),
            }
            for label, ins in diag.boxes
        ],
        "outputs": [link(src) for src in diag.outputs],
    }
