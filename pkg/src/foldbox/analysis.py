"""State-space analysis: reachability, deadlock, liveness, boundedness.

Exploration is a bounded breadth-first search so every query is total;
whether the graph is complete is always reported, never assumed. The
boundedness check runs a Karp-Miller coverability tree with the
classical strict-domination omega rule.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from .multiset import Multiset
from .petri import Marking, Net, TransitionId

DEFAULT_MAX_NODES = 100_000
DEFAULT_MAX_TOKENS = 64

OMEGA = -1  # sentinel for unbounded counts in coverability markings


@dataclass(frozen=True)
class Limits:
    max_nodes: int = DEFAULT_MAX_NODES
    max_tokens_per_place: int = DEFAULT_MAX_TOKENS

    def __post_init__(self) -> None:
        if self.max_nodes <= 0 or self.max_tokens_per_place <= 0:
            raise ValueError("limits must be positive")

    @staticmethod
    def from_env(env: str = "FOLDBOX_LIMITS") -> "Limits":
        """Parse 'max_nodes,max_tokens' from the environment, if set."""
        raw = os.environ.get(env)
        if not raw:
            return Limits()
        nodes, tokens = (int(x) for x in raw.split(","))
        return Limits(nodes, tokens)


@dataclass
class ReachabilityGraph:
    root: Marking
    nodes: list[Marking]
    edges: list[tuple[int, TransitionId, int]]  # (src index, transition, dst index)
    truncated: bool
    limits: Limits
    _index: dict[tuple, int] = field(default_factory=dict, repr=False)

    def index_of(self, m: Marking) -> Optional[int]:
        return self._index.get(m.tokens.items())

    def __contains__(self, m: Marking) -> bool:
        return self.index_of(m) is not None

    @property
    def complete(self) -> bool:
        return not self.truncated

    def successors(self, i: int) -> list[tuple[TransitionId, int]]:
        return [(t, d) for s, t, d in self.edges if s == i]


class Incomplete(RuntimeError):
    """The analysis needs a complete reachability graph but hit a limit."""


def explore(m0: Marking, limits: Limits = Limits()) -> ReachabilityGraph:
    """BFS closure of the firing relation, capped by the limits.

    Successor markings exceeding the per-place token cap are dropped
    (and the graph flagged truncated) so exploration always terminates.
    """
    net = m0.net
    nodes: list[Marking] = [m0]
    index: dict[tuple, int] = {m0.tokens.items(): 0}
    edges: list[tuple[int, TransitionId, int]] = []
    truncated = False
    frontier = [0]
    while frontier:
        next_frontier: list[int] = []
        for i in frontier:
            m = nodes[i]
            for t in net.transitions():
                if not m.enabled(t):
                    continue
                succ = m.fire(t)
                if any(
                    c > limits.max_tokens_per_place for _, c in succ.tokens.items()
                ):
                    truncated = True
                    continue
                key = succ.tokens.items()
                j = index.get(key)
                if j is None:
                    if len(nodes) >= limits.max_nodes:
                        truncated = True
                        continue
                    j = len(nodes)
                    nodes.append(succ)
                    index[key] = j
                    next_frontier.append(j)
                edges.append((i, t, j))
        frontier = next_frontier
    return ReachabilityGraph(m0, nodes, edges, truncated, limits, index)


def _witness_path(
    graph: ReachabilityGraph, accept: Callable[[int], bool]
) -> Optional[list[TransitionId]]:
    """Shortest firing sequence from the root to a node satisfying accept."""
    if accept(0):
        return []
    succ: dict[int, list[tuple[TransitionId, int]]] = {}
    for s, t, d in graph.edges:
        succ.setdefault(s, []).append((t, d))
    parent: dict[int, tuple[int, TransitionId]] = {}
    frontier = [0]
    seen = {0}
    while frontier:
        nxt = []
        for i in frontier:
            for t, j in succ.get(i, []):
                if j in seen:
                    continue
                seen.add(j)
                parent[j] = (i, t)
                if accept(j):
                    path = []
                    k = j
                    while k != 0:
                        k, t2 = parent[k]
                        path.append(t2)
                    return path[::-1]
                nxt.append(j)
        frontier = nxt
    return None


@dataclass(frozen=True)
class SearchResult:
    path: Optional[list[TransitionId]]
    complete: bool

    @property
    def found(self) -> bool:
        return self.path is not None

    @property
    def status(self) -> str:
        if self.found:
            return "found"
        return "absent" if self.complete else "unknown"


def reachable(
    m0: Marking, target: Marking, limits: Limits = Limits()
) -> SearchResult:
    """Shortest witness firing sequence m0 -> target, if any."""
    if m0.net != target.net:
        raise ValueError("markings over different nets")
    graph = explore(m0, limits)
    key = target.tokens.items()
    path = _witness_path(graph, lambda i: graph.nodes[i].tokens.items() == key)
    return SearchResult(path, graph.complete)


@dataclass(frozen=True)
class DeadlockResult:
    path: Optional[list[TransitionId]]
    marking: Optional[Marking]
    complete: bool

    @property
    def found(self) -> bool:
        return self.marking is not None


def find_deadlock(m0: Marking, limits: Limits = Limits()) -> DeadlockResult:
    """A reachable marking enabling no transition, with a witness path.

    The initial marking itself counts (empty witness path).
    """
    graph = explore(m0, limits)
    dead = {i for i, m in enumerate(graph.nodes) if m.is_deadlocked()}
    path = _witness_path(graph, lambda i: i in dead)
    if path is None:
        return DeadlockResult(None, None, graph.complete)
    return DeadlockResult(path, m0.fire_sequence(path), graph.complete)


def liveness(
    m0: Marking, limits: Limits = Limits()
) -> dict[TransitionId, str]:
    """Classify each transition as 'dead', 'live', or 'neither'.

    Requires a complete reachability graph; raises Incomplete otherwise.
    """
    graph = explore(m0, limits)
    if not graph.complete:
        raise Incomplete("reachability graph truncated; liveness undecidable")
    net = m0.net
    pred: dict[int, set[int]] = {i: set() for i in range(len(graph.nodes))}
    for s, _, d in graph.edges:
        pred[d].add(s)
    result: dict[TransitionId, str] = {}
    n = len(graph.nodes)
    for t in net.transitions():
        firing = {s for s, tt, _ in graph.edges if tt == t}
        if not firing:
            result[t] = "dead"
            continue
        # live iff every node can reach a node where t fires: reverse BFS
        seen = set(firing)
        stack = list(firing)
        while stack:
            i = stack.pop()
            for j in pred[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        result[t] = "live" if len(seen) == n else "neither"
    return result


@dataclass(frozen=True)
class OmegaMarking:
    """Coverability marking: per-place count or OMEGA."""

    counts: tuple[int, ...]  # indexed by place - 1; OMEGA = unbounded

    def get(self, p: int) -> int:
        return self.counts[p - 1]

    def covers(self, other: "OmegaMarking") -> bool:
        return all(
            a == OMEGA or (b != OMEGA and a >= b)
            for a, b in zip(self.counts, other.counts)
        )


def _km_enabled(m: OmegaMarking, pre: Multiset) -> bool:
    return all(m.get(p) == OMEGA or m.get(p) >= c for p, c in pre.items())


def _km_fire(m: OmegaMarking, pre: Multiset, post: Multiset) -> OmegaMarking:
    counts = list(m.counts)
    for p, c in pre.items():
        if counts[p - 1] != OMEGA:
            counts[p - 1] -= c
    for p, c in post.items():
        if counts[p - 1] != OMEGA:
            counts[p - 1] += c
    return OmegaMarking(tuple(counts))


def coverability_tree(m0: Marking) -> list[OmegaMarking]:
    """Karp-Miller tree, returned as its (finite) set of node markings.

    Omega is introduced whenever a node strictly dominates an ancestor
    on its path.
    """
    net = m0.net
    root = OmegaMarking(tuple(m0.tokens[p] for p in net.places.symbols()))
    nodes: list[OmegaMarking] = []
    stack: list[tuple[OmegaMarking, tuple[OmegaMarking, ...]]] = [(root, ())]
    while stack:
        m, ancestors = stack.pop()
        nodes.append(m)
        # a marking repeating on its own path is a leaf
        if any(m.counts == anc.counts for anc in ancestors):
            continue
        for t in net.transitions():
            if not _km_enabled(m, net.pre(t)):
                continue
            succ = _km_fire(m, net.pre(t), net.post(t))
            # accelerate: strict domination of an ancestor introduces omega
            counts = list(succ.counts)
            for anc in (*ancestors, m):
                if succ.covers(anc) and succ.counts != anc.counts:
                    for i in range(len(counts)):
                        if counts[i] != OMEGA and (
                            anc.counts[i] == OMEGA or counts[i] > anc.counts[i]
                        ):
                            counts[i] = OMEGA
            succ = OmegaMarking(tuple(counts))
            stack.append((succ, (*ancestors, m)))
    return nodes


def boundedness(
    m0: Marking, limits: Limits = Limits()
) -> dict[int, Optional[int]]:
    """Per-place bound k, or None for unbounded (via Karp-Miller)."""
    net = m0.net
    tree = coverability_tree(m0)
    unbounded = {
        p
        for p in net.places.symbols()
        if any(m.get(p) == OMEGA for m in tree)
    }
    result: dict[int, Optional[int]] = {}
    for p in net.places.symbols():
        if p in unbounded:
            result[p] = None
        else:
            result[p] = max(m.get(p) for m in tree)
    return result


@dataclass(frozen=True)
class PredicateResult:
    status: str  # "holds" | "counterexample" | "unknown"
    path: Optional[list[TransitionId]] = None


def check_predicate(
    m0: Marking,
    predicate: Callable[[Marking], bool],
    limits: Limits = Limits(),
) -> PredicateResult:
    """Check that the predicate holds at every explored marking."""
    graph = explore(m0, limits)
    path = _witness_path(graph, lambda i: not predicate(graph.nodes[i]))
    if path is not None:
        return PredicateResult("counterexample", path)
    return PredicateResult("holds" if graph.complete else "unknown")


def report(m0: Marking, limits: Limits = Limits()) -> dict:
    """Full JSON-ready analysis report for a marked net."""
    net = m0.net
    bounds = boundedness(m0, limits)
    dead = find_deadlock(m0, limits)
    out: dict = {
        "places": {
            net.places.name_of(p): ("unbounded" if b is None else b)
            for p, b in bounds.items()
        },
        "safe": all(b == 1 for b in bounds.values() if b is not None)
        and all(b is not None for b in bounds.values()),
        "deadlock": (
            {
                "path": [net.transition_name(t) for t in dead.path],
                "marking": dead.marking.tokens.counts(),
            }
            if dead.found
            else None
        ),
        "complete": dead.complete,
    }
    try:
        live = liveness(m0, limits)
        out["liveness"] = {net.transition_name(t): s for t, s in live.items()}
    except Incomplete:
        out["liveness"] = "unknown"
    return out


def reachability_dot(graph: ReachabilityGraph) -> str:
    """DOT rendering of a reachability graph."""
    net = graph.root.net
    lines = ["digraph reachability {", "  rankdir=LR;"]
    for i, m in enumerate(graph.nodes):
        lines.append(f'  n{i} [label="{m.tokens}"];')
    for s, t, d in graph.edges:
        lines.append(f'  n{s} -> n{d} [label="{net.transition_name(t)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
