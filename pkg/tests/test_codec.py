import json
from pathlib import Path

import pytest
from hypothesis import given

from conftest import presentations
from foldbox import bridge, codec
from foldbox.codec import (
    OddSegmentCount,
    Presentation,
    SchemaError,
    TrailingGarbage,
)
from foldbox.examples import evolution_net
from foldbox.multiset import Multiset

GOLDEN = Path(__file__).parent.parent / "golden"


class TestDecode:
    def test_single_generator(self):
        p = codec.decode("1,2,0,3,0")
        assert p.n_objects == 3
        assert p.generators == (((1, 2), (3,)),)

    def test_empty_string(self):
        assert codec.decode("") == Presentation(0, ())

    def test_unit_generator(self):
        p = codec.decode("0,0")
        assert p.generators == (((), ()),)

    def test_odd_segments(self):
        with pytest.raises(OddSegmentCount):
            codec.decode("1,0,2,0,3,0")

    def test_trailing_garbage(self):
        with pytest.raises(TrailingGarbage):
            codec.decode("1,2,0,3")


class TestEncode:
    def test_round_trip(self):
        assert codec.encode(codec.decode("1,2,0,3,0")) == "1,2,0,3,0"

    def test_empty(self):
        assert codec.encode(Presentation(0, ())) == ""

    def test_evolution_fold(self):
        assert codec.encode(bridge.fold(evolution_net())) == "1,0,2,0,1,0,2,0,2,0,3,0"

    @given(presentations())
    def test_encode_decode_identity(self, p):
        back = codec.decode(codec.encode(p))
        assert back.generators == p.generators
        # decoding infers the universe from the largest index seen
        assert back.n_objects <= p.n_objects

    @given(presentations())
    def test_binary_round_trip(self, p):
        back = codec.decode_binary(codec.encode_binary(p))
        assert back.generators == p.generators


class TestPresentationToNet:
    def test_basic(self):
        net = codec.presentation_to_net(codec.decode("1,2,0,3,0"))
        assert net.pre(1) == Multiset.of(net.places, {1: 1, 2: 1})
        assert net.post(1) == Multiset.of(net.places, {3: 1})

    def test_unit_transition(self):
        net = codec.presentation_to_net(codec.decode("0,0"))
        assert net.pre(1).is_zero() and net.post(1).is_zero()

    def test_weighted_arc(self):
        net = codec.presentation_to_net(codec.decode("1,1,0,2,0"))
        assert net.pre(1) == Multiset.of(net.places, {1: 2})
        assert net.post(1) == Multiset.of(net.places, {2: 1})

    @given(presentations())
    def test_multiplicity_forgets_only_order(self, p):
        net = codec.presentation_to_net(p)
        for k, (src, _) in enumerate(p.generators):
            assert net.pre(k + 1) == codec.string_multiplicity(net.places, src)

    def test_no_place_zero(self):
        net = codec.presentation_to_net(codec.decode("1,0,2,0"))
        assert 0 not in net.places


class TestJson:
    @pytest.mark.parametrize(
        "name",
        [
            "evolution",
            "trafficlight",
            "trafficlight-bad",
            "production",
            "capacity",
            "quicksort",
            "dead-transition",
        ],
    )
    def test_golden_round_trip(self, name):
        text = (GOLDEN / f"{name}.pn.json").read_text()
        net, marking, integer = codec.read_json(text)
        assert codec.write_json(net, marking, integer) == text

    def test_traffic_light_shape(self):
        net, marking, _ = codec.read_json(
            (GOLDEN / "trafficlight.pn.json").read_text()
        )
        assert net.places.size == 5
        assert net.n_transitions == 4
        assert marking.tokens.cardinality() == 3

    def test_missing_output_field(self):
        doc = {
            "places": [{"id": 1}],
            "transitions": [{"id": 1, "input": {}}],
        }
        with pytest.raises(SchemaError):
            codec.read_json(json.dumps(doc))

    def test_diagnostic_names_field(self):
        doc = {"places": [{"id": 1}], "transitions": [{"id": 1, "input": {}}]}
        with pytest.raises(SchemaError) as exc:
            codec.read_json(json.dumps(doc))
        assert "output" in str(exc.value)

    def test_negative_weight_needs_flag(self):
        doc = {
            "places": [{"id": 1}],
            "transitions": [{"id": 1, "input": {"1": -1}, "output": {}}],
        }
        with pytest.raises(SchemaError):
            codec.read_json(json.dumps(doc))

    def test_golden_pnz(self):
        text = (GOLDEN / "evolution.pnz").read_text()
        assert codec.encode(codec.decode(text)) == text.strip()
