import itertools
import random
from pathlib import Path

import pytest

from foldbox import intnet
from foldbox.examples import conflict_net
from foldbox.intnet import IntNet, legalize, prefix_legal
from foldbox.multiset import Universe

GOLDEN = Path(__file__).parent.parent / "golden"


def brute_force_legalize(m0, seq):
    """Oracle: enumerate all reorderings, pick legal ones with fewest
    inversions (first in lexicographic index order on ties)."""
    best, best_inv = None, None
    for perm in itertools.permutations(range(len(seq))):
        if not prefix_legal(m0, [seq[i] for i in perm]):
            continue
        inv = sum(
            1
            for i in range(len(perm))
            for j in range(i + 1, len(perm))
            if perm[i] > perm[j]
        )
        if best_inv is None or inv < best_inv:
            best, best_inv = [seq[i] for i in perm], inv
    return best


class TestFiring:
    def test_always_enabled(self):
        m = conflict_net().marking({})
        m = m.fire(1)  # consume an X that is not there
        assert m.counts() == {1: -1, 2: 1, 3: 0}
        assert not m.is_legal()

    def test_fire_commutes(self):
        m = conflict_net().marking({1: 1})
        for a, b in itertools.permutations([1, 2, 3], 2):
            assert m.fire(a).fire(b) == m.fire(b).fire(a)

    def test_fire_sequence(self):
        m = conflict_net().marking({1: 1})
        assert m.fire_sequence([1, 2, 3]).counts() == {1: 0, 2: 0, 3: 1}

    def test_legal_detection(self):
        m = conflict_net().marking({1: 1})
        assert m.is_legal()
        assert not m.fire(3).fire(3).is_legal()


class TestPrefixLegal:
    def test_empty(self):
        assert prefix_legal(conflict_net().marking({1: 1}), [])

    def test_observed_conflict(self):
        # from {X:1}: tau leaves X=0, so a following nu drives X to -1
        # unless mu has returned the token first
        m = conflict_net().marking({1: 1})
        assert prefix_legal(m, [1, 2])
        assert not prefix_legal(m, [1, 3])
        assert prefix_legal(m, [1, 2, 3])


class TestLegalize:
    def test_already_legal_unchanged(self):
        m = conflict_net().marking({1: 1})
        assert legalize(m, [1, 2, 3]) == [1, 2, 3]

    def test_conflict_example(self):
        # observed tau, nu, mu from a single X token: nu fired on credit.
        # The minimal repair delays nu until mu has returned the token.
        m = conflict_net().marking({1: 1})
        assert legalize(m, [1, 3, 2]) == [1, 2, 3]

    def test_illegal_initial_rejected(self):
        with pytest.raises(ValueError):
            legalize(conflict_net().marking({1: -1}), [1])

    def test_unfixable(self):
        net = IntNet.of(Universe(1), [({1: 1}, {})])
        assert legalize(net.marking({}), [1]) is None

    def test_too_long_gives_up(self):
        net = IntNet.of(Universe(1), [({1: 1}, {})])
        seq = [1] * (intnet.MAX_LEGALIZE_LENGTH + 1)
        assert legalize(net.marking({}), seq) is None

    def test_matches_brute_force(self):
        rng = random.Random(83)
        net = conflict_net()
        for _ in range(60):
            m0 = net.marking(
                {p: rng.randint(0, 2) for p in net.places.symbols()}
            )
            seq = [rng.randint(1, 3) for _ in range(rng.randint(1, 6))]
            assert legalize(m0, seq) == brute_force_legalize(m0, seq)

    def test_result_is_a_reordering(self):
        rng = random.Random(89)
        net = conflict_net()
        for _ in range(40):
            seq = [rng.randint(1, 3) for _ in range(5)]
            m0 = net.marking({1: 1})
            out = legalize(m0, seq)
            if out is not None:
                assert sorted(out) == sorted(seq)
                assert prefix_legal(m0, out)


class TestJson:
    def test_golden_round_trip(self):
        text = (GOLDEN / "conflict.pn.json").read_text()
        net, marking = intnet.read_json(text)
        assert intnet.write_json(net, marking) == text

    def test_conflict_names(self):
        net, marking = intnet.read_json((GOLDEN / "conflict.pn.json").read_text())
        assert net.transition_name(1) == "tau"
        assert net.transition_by_name("nu") == 3
        assert marking.counts() == {1: 1, 2: 0, 3: 0}

    def test_marking_preserved(self):
        net = conflict_net()
        m = net.marking({1: 2, 3: 1})
        back_net, back_m = intnet.read_json(intnet.write_json(net, m))
        assert back_net == net and back_m == m
