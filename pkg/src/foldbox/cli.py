"""Command-line front door.

Machine-first: results go to stdout as JSON, diagnostics to stderr.
Exit codes: 0 success, 1 user error, 2 internal assertion.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from . import analysis, bridge, codec, examples, petri, semantics
from .analysis import Limits
from .fssmc import print_term


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_net(path: str) -> tuple[petri.Net, Optional[petri.Marking]]:
    text = Path(path).read_text()
    if path.endswith(".pnz"):
        return codec.presentation_to_net(codec.decode(text)), None
    net, marking, _ = codec.read_json(text)
    return net, marking


@click.group()
def main() -> None:
    """Petri nets with monoidal run histories: validate, analyze, step, run."""


@main.command()
@click.option("--net", "net_path", required=True, type=click.Path(exists=True))
def validate(net_path: str) -> None:
    """Parse and validate a net file, reporting its shape."""
    try:
        net, marking = _load_net(net_path)
    except (codec.CodecError, ValueError) as e:
        _fail(str(e))
    click.echo(
        json.dumps(
            {
                "places": net.places.size,
                "transitions": net.n_transitions,
                "marking": marking.tokens.counts() if marking else None,
            }
        )
    )


@main.command()
@click.option("--net", "net_path", required=True, type=click.Path(exists=True))
@click.option("--predicate", type=str, default=None, help="named predicate, e.g. mutual-exclusion")
def analyze(net_path: str, predicate: Optional[str]) -> None:
    """Print the full analysis report (bounds, liveness, deadlock)."""
    try:
        net, marking = _load_net(net_path)
    except (codec.CodecError, ValueError) as e:
        _fail(str(e))
    if marking is None:
        _fail("net file carries no marking")
    limits = Limits.from_env()
    out = analysis.report(marking, limits)
    if predicate is not None:
        fn = _named_predicate(net, predicate)
        res = analysis.check_predicate(marking, fn, limits)
        out["predicate"] = {
            "name": predicate,
            "status": res.status,
            "counterexample": (
                [net.transition_name(t) for t in res.path] if res.path else None
            ),
        }
    click.echo(json.dumps(out, indent=2))


def _named_predicate(net: petri.Net, name: str):
    if name == "mutual-exclusion":
        if net.places.names and "green1" in net.places.names:
            return examples.mutual_exclusion
        _fail("mutual-exclusion needs green1/green2 places")
    _fail(f"unknown predicate {name!r}")


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def decode(in_path: str, out_path: str) -> None:
    """Decode a .pnz number string into a .pn.json net."""
    try:
        pres = codec.decode(Path(in_path).read_text())
    except codec.CodecError as e:
        _fail(str(e))
    Path(out_path).write_text(codec.write_json(codec.presentation_to_net(pres)))
    click.echo(json.dumps({"written": out_path}))


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def encode(in_path: str, out_path: str) -> None:
    """Encode a .pn.json net as a .pnz number string."""
    try:
        net, _, _ = codec.read_json(Path(in_path).read_text())
    except codec.CodecError as e:
        _fail(str(e))
    Path(out_path).write_text(codec.encode(bridge.fold(net)))
    click.echo(json.dumps({"written": out_path}))


@main.command()
@click.option("--net", "net_path", required=True, type=click.Path(exists=True))
def fold(net_path: str) -> None:
    """Print the presentation (generators) of a net's execution category."""
    net, _ = _load_net(net_path)
    pres = bridge.fold(net)
    click.echo(
        json.dumps(
            {
                "objects": pres.n_objects,
                "generators": [
                    {"label": k + 1, "source": list(src), "target": list(tgt)}
                    for k, (src, tgt) in enumerate(pres.generators)
                ],
                "pnz": codec.encode(pres),
            }
        )
    )


@main.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def unfold(in_path: str, out_path: str) -> None:
    """Build the net presented by a .pnz presentation."""
    try:
        pres = codec.decode(Path(in_path).read_text())
    except codec.CodecError as e:
        _fail(str(e))
    Path(out_path).write_text(codec.write_json(bridge.unfold(pres)))
    click.echo(json.dumps({"written": out_path}))


@main.command("export-dot")
@click.option("--net", "net_path", required=True, type=click.Path(exists=True))
@click.option("--reachability", is_flag=True, help="export the reachability graph instead")
def export_dot(net_path: str, reachability: bool) -> None:
    """Write a DOT rendering of the net (or its reachability graph)."""
    net, marking = _load_net(net_path)
    if reachability:
        if marking is None:
            _fail("reachability export needs a marking")
        graph = analysis.explore(marking, Limits.from_env())
        click.echo(analysis.reachability_dot(graph), nl=False)
    else:
        click.echo(petri.to_dot(net, marking), nl=False)


@main.command()
@click.option("--net", "net_path", required=True, type=click.Path(exists=True))
@click.option("--session", "session_path", required=True, type=click.Path())
@click.option("--fire", "fire_name", default=None, help="transition to fire (else list state)")
@click.option("--choice", default=None, help="comma-separated token positions")
def step(
    net_path: str, session_path: str, fire_name: Optional[str], choice: Optional[str]
) -> None:
    """Step a persistent history session one firing at a time."""
    net, marking = _load_net(net_path)
    pres = bridge.fold(net)
    sess = Path(session_path)
    if sess.exists():
        doc = json.loads(sess.read_text())
        h = bridge.start_history(pres, tuple(doc["initial"]))
        for entry in doc["log"]:
            h = bridge.fire_history(h, entry["generator"], tuple(entry["choice"]))
    else:
        if marking is None:
            _fail("net file carries no marking to start from")
        h = bridge.start_from_marking(pres, marking.tokens)
    if fire_name is not None:
        try:
            label = net.transition_by_name(fire_name)
        except KeyError:
            _fail(f"unknown transition {fire_name!r}")
        chosen = (
            tuple(int(x) for x in choice.split(",")) if choice else None
        )
        try:
            h = bridge.fire_history(h, label, chosen)
        except (petri.NotEnabled, bridge.BadChoice) as e:
            _fail(str(e))
        sess.write_text(
            json.dumps(
                {
                    "initial": list(h.initial),
                    "log": [
                        {"generator": g, "choice": list(c)} for g, c in h.log
                    ],
                }
            )
        )
    click.echo(
        json.dumps(
            {
                "marking": {
                    net.places.name_of(s): c for s, c in h.marking().items()
                },
                "current": list(h.current),
                "enabled": [
                    {
                        "transition": net.transition_name(g),
                        "choices": [list(c) for c in h.valid_choices(g)],
                    }
                    for g in h.enabled_generators()
                ],
                "term": print_term(h.term),
            }
        )
    )


@main.command()
@click.option("--net", "net_path", required=True, type=click.Path(exists=True))
@click.option("--binding", "binding_path", required=True, type=click.Path(exists=True))
@click.option("--tokens", required=True, help="JSON array of input token values")
@click.option("--fire", "fire_names", multiple=True, help="transitions to fire, in order")
def run(net_path: str, binding_path: str, tokens: str, fire_names: tuple[str, ...]) -> None:
    """Fire a sequence of transitions and evaluate the bound functions."""
    net, _ = _load_net(net_path)
    pres = bridge.fold(net)
    try:
        binding = semantics.read_binding(pres, Path(binding_path).read_text())
    except (semantics.SignatureMismatch, KeyError, ValueError) as e:
        _fail(str(e))
    values = json.loads(tokens)
    # each input value lands in the first place whose type accepts it
    initial = []
    for v in values:
        placed = False
        for place in range(1, pres.n_objects + 1):
            if binding.place_types[place - 1].check(v):
                initial.append(place)
                placed = True
                break
        if not placed:
            _fail(f"no place accepts input {v!r}")
    h = bridge.start_history(pres, tuple(initial))
    for name in fire_names:
        try:
            h = bridge.fire_history(h, net.transition_by_name(name))
        except (petri.NotEnabled, KeyError) as e:
            _fail(str(e))
    try:
        out = semantics.run_history(binding, h, values)
    except (semantics.SemanticTypeError, semantics.FunctionFailure) as e:
        _fail(str(e))
    click.echo(json.dumps(out))


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@click.option("--log-file", default=None, type=click.Path())
def serve(host: str, port: int, log_file: Optional[str]) -> None:
    """Run the HTTP stepping service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(log_file), host=host, port=port)


if __name__ == "__main__":
    main()
