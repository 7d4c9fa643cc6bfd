"""Bundled example nets used throughout the tests, CLI, and UI."""

from __future__ import annotations

from .intnet import IntNet
from .multiset import Universe
from .petri import Marking, Net


def evolution_net() -> Net:
    """Three places in a row; two competing transitions feed the middle."""
    return Net.of(
        Universe(3),
        [
            ({1: 1}, {2: 1}),  # t1: p1 -> p2
            ({1: 1}, {2: 1}),  # t2: p1 -> p2
            ({2: 1}, {3: 1}),  # t3: p2 -> p3
        ],
        transition_names=["t1", "t2", "t3"],
        place_names=["p1", "p2", "p3"],
    )


def evolution_marking() -> Marking:
    return evolution_net().marking({1: 2})


# Traffic lights: two lights compete for the middle token. Places are
# green1, red1, mid, red2, green2; "go" turns a light green (consumes
# red + mid), "stop" turns it red (releases the mid token).
def traffic_light_net() -> Net:
    return Net.of(
        Universe(5),
        [
            ({1: 1}, {2: 1, 3: 1}),  # stop1: green1 -> red1 + mid
            ({2: 1, 3: 1}, {1: 1}),  # go1:   red1 + mid -> green1
            ({5: 1}, {4: 1, 3: 1}),  # stop2: green2 -> red2 + mid
            ({4: 1, 3: 1}, {5: 1}),  # go2:   red2 + mid -> green2
        ],
        transition_names=["stop1", "go1", "stop2", "go2"],
        place_names=["green1", "red1", "mid", "red2", "green2"],
    )


def traffic_light_good() -> Marking:
    return traffic_light_net().marking({2: 1, 3: 1, 4: 1})


def traffic_light_bad() -> Marking:
    """Two tokens in the middle let both lights go green."""
    return traffic_light_net().marking({2: 1, 3: 2, 4: 1})


def both_green(m: Marking) -> bool:
    return m.tokens[1] >= 1 and m.tokens[5] >= 1


def mutual_exclusion(m: Marking) -> bool:
    return not both_green(m)


def production_net() -> Net:
    """Unbounded: requests pile up in place a without limit."""
    return Net.of(
        Universe(2),
        [
            ({}, {1: 1}),      # request: nothing -> a
            ({1: 1}, {2: 1}),  # production: a -> b
            ({2: 1}, {}),      # finish: b -> nothing
        ],
        transition_names=["request", "production", "finish"],
        place_names=["a", "b"],
    )


def production_marking() -> Marking:
    return production_net().marking({1: 1})


def capacity_net() -> Net:
    """Production net made 6-bounded by a capacity place (5 tokens)."""
    return Net.of(
        Universe(3),
        [
            ({1: 1}, {2: 1}),        # request: cap -> buf
            ({2: 1}, {1: 1, 3: 1}),  # production: buf -> cap + out
            ({3: 1}, {}),            # finish: out -> nothing
        ],
        transition_names=["request", "production", "finish"],
        place_names=["cap", "buf", "out"],
    )


def capacity_marking() -> Marking:
    return capacity_net().marking({1: 5, 2: 1})


def dead_transition_net() -> Net:
    """A single transition needing two places, one forever empty."""
    return Net.of(
        Universe(3),
        [({1: 1, 2: 1}, {3: 1})],
        transition_names=["t"],
        place_names=["p", "q", "r"],
    )


def dead_transition_marking() -> Marking:
    return dead_transition_net().marking({1: 1})


def quicksort_net() -> Net:
    """One transition from an input list place to an output list place."""
    return Net.of(
        Universe(2),
        [({1: 1}, {2: 1})],
        transition_names=["sort"],
        place_names=["in", "out"],
    )


def conflict_net() -> IntNet:
    """Integer net for conflict resolution: tau: X->Y, mu: Y->X, nu: X->Z."""
    return IntNet.of(
        Universe(3),
        [
            ({1: 1}, {2: 1}),  # tau: X -> Y
            ({2: 1}, {1: 1}),  # mu:  Y -> X
            ({1: 1}, {3: 1}),  # nu:  X -> Z
        ],
        transition_names=["tau", "mu", "nu"],
        place_names=["X", "Y", "Z"],
    )


# merge morphism target: collapses the two competing transitions
def merge_target_net() -> Net:
    return Net.of(
        Universe(3),
        [
            ({1: 1}, {2: 1}),  # u: q1 -> q2
            ({2: 1}, {3: 1}),  # w: q2 -> q3
        ],
        transition_names=["u", "w"],
        place_names=["q1", "q2", "q3"],
    )


ALL_NETS = {
    "evolution": evolution_net,
    "traffic-light": traffic_light_net,
    "production": production_net,
    "capacity": capacity_net,
    "dead-transition": dead_transition_net,
    "quicksort": quicksort_net,
    "merge-target": merge_target_net,
}
