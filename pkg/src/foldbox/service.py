"""HTTP/JSON stepping service for the browser UI.

Sessions live in memory; each holds a net, its folded presentation,
and the current history. Mutations are serialized per session, and an
optional append-only log file lets a crashed service replay its state.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import analysis, bridge, codec, examples, intnet, semantics
from .analysis import Limits
from .bridge import BadChoice, History
from .fssmc import print_term
from .petri import Marking, Net, NotEnabled


class CreateSession(BaseModel):
    net: Optional[dict] = None
    pnz: Optional[str] = None
    example: Optional[str] = None
    marking: Optional[dict[str, int]] = None


class FireRequest(BaseModel):
    transition: str | int
    choice: Optional[list[int]] = None


class RunRequest(BaseModel):
    binding: dict
    inputs: list[Any]


@dataclass
class Session:
    id: str
    net: Net
    history: History
    lock: threading.Lock = field(default_factory=threading.Lock)


def _state_payload(s: Session) -> dict:
    net = s.net
    h = s.history
    return {
        "id": s.id,
        "marking": {
            net.places.name_of(p): c for p, c in h.marking().items()
        },
        "current": list(h.current),
        "places": [net.places.name_of(p) for p in net.places.symbols()],
        "transitions": [
            {
                "id": t,
                "name": net.transition_name(t),
                "input": {
                    net.places.name_of(p): c for p, c in net.pre(t).items()
                },
                "output": {
                    net.places.name_of(p): c for p, c in net.post(t).items()
                },
                "enabled": h.enabled(t),
                "choices": [
                    {
                        "positions": list(c),
                        "provenance": [
                            [
                                net.transition_name(g)
                                for g in bridge.token_history(h, pos)
                            ]
                            for pos in c
                        ],
                    }
                    for c in (h.valid_choices(t) if h.enabled(t) else [])
                ],
            }
            for t in net.transitions()
        ],
        "log": [
            {"generator": g, "transition": net.transition_name(g), "choice": list(c)}
            for g, c in h.log
        ],
    }


def create_app(log_file: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="foldbox stepping service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    log_path = Path(log_file) if log_file else None
    log_lock = threading.Lock()

    def append_log(event: dict) -> None:
        if log_path is None:
            return
        with log_lock:
            with log_path.open("a") as f:
                f.write(json.dumps(event) + "\n")

    def get_session(session_id: str) -> Session:
        s = sessions.get(session_id)
        if s is None:
            raise HTTPException(status_code=404, detail="no such session")
        return s

    @app.post("/sessions")
    def create_session(req: CreateSession) -> dict:
        if req.example is not None:
            if req.example == "conflict":
                raise HTTPException(
                    status_code=400,
                    detail="the conflict example is an integer net; use /integer endpoints",
                )
            maker = examples.ALL_NETS.get(req.example)
            if maker is None:
                raise HTTPException(status_code=400, detail="unknown example")
            net = maker()
            marking = None
            if req.example == "evolution":
                marking = examples.evolution_marking()
            elif req.example == "traffic-light":
                marking = examples.traffic_light_good()
            elif req.example == "production":
                marking = examples.production_marking()
            elif req.example == "capacity":
                marking = examples.capacity_marking()
        elif req.pnz is not None:
            try:
                net = codec.presentation_to_net(codec.decode(req.pnz))
            except codec.CodecError as e:
                raise HTTPException(status_code=400, detail=str(e))
            marking = None
        elif req.net is not None:
            try:
                net, marking, _ = codec.read_json(json.dumps(req.net))
            except codec.SchemaError as e:
                raise HTTPException(status_code=400, detail=str(e))
        else:
            raise HTTPException(status_code=400, detail="no net given")
        if req.marking is not None:
            try:
                counts = {
                    net.places.index_of(k) if not k.isdigit() else int(k): v
                    for k, v in req.marking.items()
                }
                marking = net.marking(counts)
            except (KeyError, ValueError) as e:
                raise HTTPException(status_code=400, detail=f"bad marking: {e}")
        if marking is None:
            marking = net.marking({})
        pres = bridge.fold(net)
        sid = uuid.uuid4().hex
        h = bridge.start_from_marking(pres, marking.tokens)
        sessions[sid] = Session(sid, net, h)
        append_log({"event": "create", "session": sid})
        return {
            "id": sid,
            "presentation": {
                "objects": pres.n_objects,
                "generators": [
                    {"label": k + 1, "source": list(s), "target": list(t)}
                    for k, (s, t) in enumerate(pres.generators)
                ],
                "pnz": codec.encode(pres),
            },
            **_state_payload(sessions[sid]),
        }

    @app.get("/sessions/{session_id}")
    def get_state(session_id: str) -> dict:
        return _state_payload(get_session(session_id))

    @app.post("/sessions/{session_id}/fire")
    def fire(session_id: str, req: FireRequest) -> dict:
        s = get_session(session_id)
        with s.lock:
            try:
                label = (
                    int(req.transition)
                    if isinstance(req.transition, int)
                    or str(req.transition).isdigit()
                    else s.net.transition_by_name(str(req.transition))
                )
            except KeyError:
                raise HTTPException(status_code=400, detail="unknown transition")
            choice = tuple(req.choice) if req.choice is not None else None
            try:
                s.history = bridge.fire_history(s.history, label, choice)
            except NotEnabled as e:
                raise HTTPException(status_code=409, detail=f"NotEnabled: {e}")
            except BadChoice as e:
                raise HTTPException(status_code=409, detail=f"BadChoice: {e}")
            append_log(
                {
                    "event": "fire",
                    "session": session_id,
                    "transition": label,
                    "choice": list(s.history.log[-1][1]),
                }
            )
            return _state_payload(s)

    @app.get("/sessions/{session_id}/history")
    def history(session_id: str) -> dict:
        s = get_session(session_id)
        return {"term": print_term(s.history.term), **bridge.history_to_json(s.history)}

    @app.post("/sessions/{session_id}/undo")
    def undo(session_id: str) -> dict:
        s = get_session(session_id)
        with s.lock:
            if not s.history.log:
                raise HTTPException(status_code=409, detail="nothing to undo")
            h = bridge.start_history(s.history.presentation, s.history.initial)
            for label, choice in s.history.log[:-1]:
                h = bridge.fire_history(h, label, choice)
            s.history = h
            append_log({"event": "undo", "session": session_id})
            return _state_payload(s)

    @app.get("/sessions/{session_id}/analysis")
    def analyze(session_id: str) -> dict:
        s = get_session(session_id)
        m = Marking(
            s.net,
            bridge.string_multiplicity(s.net.places, s.history.initial),
        )
        out = analysis.report(m, Limits.from_env())
        if s.net.places.names and "green1" in s.net.places.names:
            res = analysis.check_predicate(
                m, examples.mutual_exclusion, Limits.from_env()
            )
            out["mutual_exclusion"] = {
                "status": res.status,
                "counterexample": (
                    [s.net.transition_name(t) for t in res.path]
                    if res.path
                    else None
                ),
            }
        return out

    @app.post("/sessions/{session_id}/run")
    def run(session_id: str, req: RunRequest) -> dict:
        s = get_session(session_id)
        pres = s.history.presentation
        try:
            binding = semantics.read_binding(pres, json.dumps(req.binding))
        except (semantics.SignatureMismatch, KeyError, ValueError) as e:
            raise HTTPException(status_code=400, detail=str(e))
        try:
            out = semantics.run_history(binding, s.history, req.inputs)
        except (semantics.SemanticTypeError, semantics.FunctionFailure) as e:
            raise HTTPException(status_code=409, detail=str(e))
        return {"outputs": out}

    @app.post("/integer/replay")
    def integer_replay(req: dict) -> dict:
        """Replay a firing sequence on an integer net, flagging illegal states."""
        try:
            if req.get("example") == "conflict":
                net = examples.conflict_net()
                marking = net.marking({1: 1})
            else:
                net, marking = intnet.read_json(json.dumps(req["net"]))
                if marking is None:
                    marking = net.marking({})
        except (intnet.SchemaError, KeyError) as e:
            raise HTTPException(status_code=400, detail=str(e))
        try:
            seq = [
                net.transition_by_name(t) if isinstance(t, str) else int(t)
                for t in req.get("sequence", [])
            ]
        except KeyError as e:
            raise HTTPException(status_code=400, detail=f"unknown transition {e}")
        states = []
        m = marking
        for t in seq:
            m = m.fire(t)
            states.append(
                {
                    "transition": net.transition_name(t),
                    "marking": {
                        net.places.name_of(p): c for p, c in m.counts().items()
                    },
                    "legal": m.is_legal(),
                }
            )
        legalized = intnet.legalize(marking, seq)
        return {
            "states": states,
            "final_legal": m.is_legal(),
            "legalized": (
                [net.transition_name(t) for t in legalized]
                if legalized is not None
                else None
            ),
        }

    ui_dir = Path(__file__).resolve().parent.parent.parent / "frontend" / "dist"
    if ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
