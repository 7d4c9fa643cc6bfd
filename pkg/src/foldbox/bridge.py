"""The net <-> free-category correspondence and token histories.

Folding a net yields a presentation whose generators are its
transitions with canonically ordered source/target strings; unfolding
forgets string order via multiplicity. Histories are morphism terms
grown by firing generators with explicit token choices, inserting the
bookkeeping symmetries automatically.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from . import fssmc
from .codec import Presentation, string_multiplicity
from .fssmc import (
    Functor,
    Gen,
    Id,
    MorphTerm,
    ObString,
    Permutation,
    check_generator_preserving,
    cod,
    sym_from_permutation,
)
from .multiset import Multiset, MultisetHom, Universe
from .petri import Marking, Net, NetMorphism, NotEnabled, TransitionId


class BadChoice(ValueError):
    """Chosen token positions do not match the generator's source string."""


def multiplicity(universe: Universe, w: Sequence[int]) -> Multiset:
    """Count occurrences per symbol; a monoid homomorphism on strings."""
    return string_multiplicity(universe, w)


def order(x: Multiset) -> ObString:
    """Canonical ordering: ascending symbol, repeated by count."""
    out: list[int] = []
    for s, c in x.items():
        out.extend([s] * c)
    return tuple(out)


def fold(net: Net) -> Presentation:
    """The presentation of the net's execution category."""
    gens = tuple(
        (order(net.pre(t)), order(net.post(t))) for t in net.transitions()
    )
    return Presentation(
        net.places.size, gens, net.places.names, net.transition_names
    )


def unfold(p: Presentation) -> Net:
    """The net presented by a presentation, via multiplicity."""
    places = p.universe()
    ins = tuple(string_multiplicity(places, src) for src, _ in p.generators)
    outs = tuple(string_multiplicity(places, tgt) for _, tgt in p.generators)
    return Net(places, ins, outs, p.generator_names)


def unfold_functor(f: Functor) -> NetMorphism:
    """Project a generator-preserving functor to a net morphism."""
    source = unfold(f.source)
    target = unfold(f.target)
    trans_map = {
        label: f.gen_map[label - 1][1]
        for label in range(1, f.source.n_generators + 1)
    }
    if f.grounded:
        base = {
            s: f.object_map[s - 1][0] for s in source.places.symbols()
        }
        from .multiset import ground

        g = ground(source.places, target.places, base)
    else:
        g = MultisetHom.of(
            source.places,
            target.places,
            {
                s: string_multiplicity(target.places, f.object_map[s - 1])
                for s in source.places.symbols()
            },
        )
    return NetMorphism.validate(source, target, trans_map, g)


def _stable_matching_perm(w: Sequence[int], target: Sequence[int]) -> Permutation:
    """Leftmost permutation sending w onto target (equal-symbol order kept)."""
    if sorted(w) != sorted(target):
        raise ValueError(f"{w} and {target} are not anagrams")
    used = [False] * len(target)
    perm = []
    for x in w:
        for j, y in enumerate(target):
            if not used[j] and y == x:
                used[j] = True
                perm.append(j)
                break
    return tuple(perm)


def lift_net_morphism(
    m: NetMorphism,
    symmetry_table: Optional[dict[TransitionId, tuple[Permutation, Permutation]]] = None,
) -> Functor:
    """Section of unfold_functor for grounded morphisms.

    Symmetries default to leftmost occurrence matching; an explicit
    per-transition (pre, post) table overrides them. The section is not
    functorial: composing lifts need not equal lifting the composite.
    """
    if not m.grounded:
        raise ValueError("only grounded net morphisms lift canonically")
    src_p = fold(m.source)
    tgt_p = fold(m.target)
    base = m.g.base
    object_map = tuple((base[s - 1],) for s in m.source.places.symbols())

    def image(w: ObString) -> ObString:
        return tuple(base[x - 1] for x in w)

    gen_map = []
    for t in m.source.transitions():
        ft = m.f[t - 1]
        if symmetry_table is not None and t in symmetry_table:
            pre, post = symmetry_table[t]
        else:
            src_img = image(src_p.source(t))
            tgt_img = image(src_p.target(t))
            pre = _stable_matching_perm(src_img, tgt_p.source(ft))
            # post maps the target generator's string onto the image string
            post = _stable_matching_perm(tgt_p.target(ft), tgt_img)
        gen_map.append((pre, ft, post))
    return check_generator_preserving(src_p, tgt_p, object_map, tuple(gen_map))


# ---------------------------------------------------------------------------
# Histories


@dataclass(frozen=True)
class History:
    """A morphism of the execution category, grown one firing at a time.

    The replay log is kept alongside the term; the two must stay
    consistent: the codomain's multiplicity always equals the marking
    obtained by replaying the log through plain net firing.
    """

    presentation: Presentation
    initial: ObString
    term: MorphTerm
    log: tuple[tuple[int, tuple[int, ...]], ...]  # (label, chosen positions)

    @property
    def current(self) -> ObString:
        return cod(self.term, self.presentation)

    def marking(self) -> Multiset:
        return string_multiplicity(self.presentation.universe(), self.current)

    def replay_marking(self) -> Multiset:
        """The marking from replaying the log through net firing."""
        net = unfold(self.presentation)
        m = Marking(net, string_multiplicity(net.places, self.initial))
        for label, _ in self.log:
            m = m.fire(label)
        return m.tokens

    def enabled(self, label: int) -> bool:
        uni = self.presentation.universe()
        need = string_multiplicity(uni, self.presentation.source(label))
        return need.included_in(self.marking())

    def enabled_generators(self) -> list[int]:
        return [
            g
            for g in range(1, self.presentation.n_generators + 1)
            if self.enabled(g)
        ]

    def valid_choices(self, label: int) -> list[tuple[int, ...]]:
        """All position tuples that can feed the generator, in order."""
        src = self.presentation.source(label)
        cur = self.current
        choices: list[tuple[int, ...]] = []

        def go(i: int, used: tuple[int, ...]) -> None:
            if i == len(src):
                choices.append(used)
                return
            for j in range(len(cur)):
                if j in used or cur[j] != src[i]:
                    continue
                # avoid symmetric duplicates: equal source symbols in
                # ascending positions
                if i > 0 and src[i] == src[i - 1] and j < used[-1]:
                    continue
                go(i + 1, used + (j,))

        go(0, ())
        return choices


def start_history(p: Presentation, initial: ObString) -> History:
    for x in initial:
        if not 1 <= x <= p.n_objects:
            raise KeyError(f"unknown object {x}")
    return History(p, initial, Id(initial), ())


def start_from_marking(p: Presentation, m: Multiset) -> History:
    return start_history(p, order(m))


def fire_history(
    h: History, label: int, choice: Optional[Sequence[int]] = None
) -> History:
    """Fire a generator, consuming the chosen (default leftmost) tokens."""
    p = h.presentation
    if not 1 <= label <= p.n_generators:
        raise KeyError(f"unknown generator {label}")
    src = p.source(label)
    cur = h.current
    if choice is None:
        used: list[int] = []
        for sym in src:
            for j, y in enumerate(cur):
                if j not in used and y == sym:
                    used.append(j)
                    break
            else:
                raise NotEnabled(f"generator {label} not enabled at {cur}")
        choice = tuple(used)
    else:
        choice = tuple(choice)
        if len(choice) != len(src) or len(set(choice)) != len(choice):
            raise BadChoice(f"choice {choice} has the wrong arity")
        for i, j in enumerate(choice):
            if not 0 <= j < len(cur):
                raise BadChoice(f"position {j} out of range")
            if cur[j] != src[i]:
                raise BadChoice(
                    f"position {j} holds {cur[j]}, generator needs {src[i]}"
                )
    # permutation bringing the chosen positions to the front, in choice
    # order; the remaining tokens keep their relative order behind them
    rest = [j for j in range(len(cur)) if j not in set(choice)]
    perm = [0] * len(cur)
    for front, j in enumerate(choice):
        perm[j] = front
    for back, j in enumerate(rest):
        perm[j] = len(choice) + back
    shuffle = sym_from_permutation(cur, tuple(perm))
    rest_str = tuple(cur[j] for j in rest)
    step: MorphTerm = Gen(label)
    if rest_str:
        step = fssmc.Par(step, Id(rest_str))
    term = fssmc.Seq(fssmc.Seq(h.term, shuffle), step)
    return History(p, h.initial, term, h.log + ((label, tuple(choice)),))


def token_history(h: History, position: int) -> list[int]:
    """Generator labels in the causal past of an output token.

    Labels are returned innermost (earliest) first, in construction
    order of the underlying diagram.
    """
    diag = fssmc.to_diagram(h.term, h.presentation)
    if not 0 <= position < len(diag.outputs):
        raise IndexError(position)
    seen_boxes: set[int] = set()

    def trace(end: tuple) -> None:
        if end[0] == "in":
            return
        b = end[0]
        if b in seen_boxes:
            return
        seen_boxes.add(b)
        _, ins = diag.boxes[b]
        for src in ins:
            trace(src)

    trace(diag.outputs[position])
    return [diag.boxes[b][0] for b in sorted(seen_boxes)]


def history_to_json(h: History) -> dict:
    """Diagram JSON plus the replay log and per-output provenance."""
    diag = fssmc.to_diagram(h.term, h.presentation)
    return {
        "initial": list(h.initial),
        "current": list(h.current),
        "term": fssmc.print_term(h.term),
        "log": [
            {"generator": label, "choice": list(choice)}
            for label, choice in h.log
        ],
        "diagram": fssmc.diagram_to_json(diag, h.presentation),
        "token_histories": [
            token_history(h, j) for j in range(len(h.current))
        ],
    }
