"""Shared strategies and helpers for the test suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from foldbox.codec import Presentation
from foldbox.multiset import Multiset, Universe
from foldbox.petri import Net


@st.composite
def universes(draw, max_size: int = 6) -> Universe:
    return Universe(draw(st.integers(min_value=1, max_value=max_size)))


@st.composite
def multisets(draw, universe: Universe | None = None, max_count: int = 5) -> Multiset:
    if universe is None:
        universe = draw(universes())
    counts = {
        s: draw(st.integers(min_value=0, max_value=max_count))
        for s in universe.symbols()
    }
    return Multiset.of(universe, counts)


@st.composite
def multiset_pairs(draw):
    uni = draw(universes())
    return (
        draw(multisets(universe=uni)),
        draw(multisets(universe=uni)),
    )


@st.composite
def nets(draw, max_places: int = 8, max_transitions: int = 8, max_weight: int = 3) -> Net:
    places = Universe(draw(st.integers(min_value=1, max_value=max_places)))
    n_tr = draw(st.integers(min_value=0, max_value=max_transitions))
    arcs = []
    for _ in range(n_tr):
        pre = {
            p: draw(st.integers(min_value=0, max_value=max_weight))
            for p in places.symbols()
        }
        post = {
            p: draw(st.integers(min_value=0, max_value=max_weight))
            for p in places.symbols()
        }
        arcs.append((pre, post))
    return Net.of(places, arcs)


@st.composite
def presentations(draw, max_objects: int = 5, max_generators: int = 5, max_len: int = 4) -> Presentation:
    n_obj = draw(st.integers(min_value=1, max_value=max_objects))
    n_gen = draw(st.integers(min_value=0, max_value=max_generators))
    gens = []
    for _ in range(n_gen):
        src = tuple(
            draw(st.integers(min_value=1, max_value=n_obj))
            for _ in range(draw(st.integers(min_value=0, max_value=max_len)))
        )
        tgt = tuple(
            draw(st.integers(min_value=1, max_value=n_obj))
            for _ in range(draw(st.integers(min_value=0, max_value=max_len)))
        )
        gens.append((src, tgt))
    return Presentation(n_obj, tuple(gens))


def random_net(rng: random.Random, max_places=8, max_transitions=8, max_weight=3) -> Net:
    places = Universe(rng.randint(1, max_places))
    arcs = []
    for _ in range(rng.randint(0, max_transitions)):
        pre = {p: rng.randint(0, max_weight) for p in places.symbols()}
        post = {p: rng.randint(0, max_weight) for p in places.symbols()}
        arcs.append((pre, post))
    return Net.of(places, arcs)


def random_presentation(rng: random.Random, max_objects=5, max_generators=5, max_len=4) -> Presentation:
    n_obj = rng.randint(1, max_objects)
    gens = []
    for _ in range(rng.randint(0, max_generators)):
        src = tuple(rng.randint(1, n_obj) for _ in range(rng.randint(0, max_len)))
        tgt = tuple(rng.randint(1, n_obj) for _ in range(rng.randint(0, max_len)))
        gens.append((src, tgt))
    return Presentation(n_obj, tuple(gens))
