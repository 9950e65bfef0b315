"""HTTP API over graphs, catalogs, and explanation queries.

Graphs are immutable once stored; what-if state lives in per-session overlays
so concurrent sessions explore independently. Responses are serialized with
sorted keys, making /state and /explain byte-stable for identical inputs.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Query, Request, Response

from . import catalog, dynamics, environments, explain, htn, mapping, model

MAX_GRAPH_NODES = 5000


@dataclass
class Session:
    id: str
    graph_id: str
    overlay: dynamics.Overlay
    created: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _json_response(payload: Any, status_code: int = 200) -> Response:
    return Response(
        content=json.dumps(payload, sort_keys=True, separators=(",", ":")),
        media_type="application/json",
        status_code=status_code,
    )


def _error(status_code: int, detail: str) -> Response:
    return _json_response({"detail": detail}, status_code)


def create_app(initial_graphs: Optional[dict] = None) -> FastAPI:
    app = FastAPI(title="planprov", version="0.1.0")
    graphs: dict[str, model.ProvGraph] = dict(initial_graphs or {})
    sessions: dict[str, Session] = {}
    store_lock = threading.Lock()

    def new_id() -> str:
        return uuid.uuid4().hex[:12]

    def get_graph(graph_id: str) -> Optional[model.ProvGraph]:
        return graphs.get(graph_id)

    def state_payload(graph: model.ProvGraph, overlay: dynamics.Overlay) -> dict:
        status = dynamics.support_fixpoint(graph, overlay)
        confidence = dynamics.propagate_confidence(graph, overlay, status)
        return {
            "nodes": {
                node_id: {
                    "status": status[node_id],
                    "confidence": confidence.get(node_id),
                }
                for node_id in sorted(graph.nodes)
            }
        }

    @app.post("/graphs")
    async def post_graph(request: Request) -> Response:
        try:
            body = await request.json()
        except Exception:
            return _error(422, "body must be a graph JSON document")
        if not isinstance(body, dict):
            return _error(422, "body must be a graph JSON document")
        try:
            graph = model.ProvGraph.from_dict(body)
        except (model.GraphError, KeyError, TypeError) as exc:
            return _error(422, f"cannot parse graph: {exc}")
        violations = graph.validate()
        if violations:
            return _error(422, "; ".join(str(v) for v in violations[:10]))
        if len(graph) > MAX_GRAPH_NODES:
            return _error(413, f"graph exceeds {MAX_GRAPH_NODES} nodes")
        graph_id = new_id()
        with store_lock:
            graphs[graph_id] = graph
        return _json_response({"graph_id": graph_id}, 201)

    @app.post("/graphs/{graph_id}/plan")
    async def post_plan(graph_id: str, request: Request) -> Response:
        graph = get_graph(graph_id)
        if graph is None:
            return _error(404, f"unknown graph: {graph_id}")
        try:
            body = await request.json()
            domain = htn.Domain.from_dict(body["domain"])
            problem = htn.Problem.from_dict(body["problem"])
        except Exception as exc:
            return _error(422, f"body must carry domain and problem: {exc}")
        limit = body.get("limit", 8)
        try:
            plans = htn.all_plans(domain, problem, limit=limit)
        except htn.DepthExceeded as exc:
            return _error(422, str(exc))
        appraisals = [
            model.Appraisal.from_dict(a) for a in body.get("appraisals", ())
        ]
        try:
            mapped, report = mapping.plan_to_prov(plans, problem, appraisals)
            merged = graph.merge(mapped)
        except (mapping.MappingError, htn.UnknownSource, model.GraphError) as exc:
            return _error(422, str(exc))
        violations = merged.validate()
        if violations:
            return _error(422, "; ".join(str(v) for v in violations[:10]))
        if len(merged) > MAX_GRAPH_NODES:
            return _error(413, f"merged graph exceeds {MAX_GRAPH_NODES} nodes")
        with store_lock:
            graphs[graph_id] = merged
        return _json_response(
            {"graph_id": graph_id, "plans": len(plans), "report": report.to_dict()}
        )

    @app.get("/graphs/{graph_id}")
    async def get_graph_doc(graph_id: str) -> Response:
        graph = get_graph(graph_id)
        if graph is None:
            return _error(404, f"unknown graph: {graph_id}")
        return _json_response(graph.to_dict())

    @app.get("/graphs/{graph_id}/catalog")
    async def get_catalog(graph_id: str) -> Response:
        graph = get_graph(graph_id)
        if graph is None:
            return _error(404, f"unknown graph: {graph_id}")
        return _json_response(catalog.build_catalog(graph).to_dict())

    @app.post("/sessions")
    async def post_session(request: Request) -> Response:
        try:
            body = await request.json()
            graph_id = body["graph_id"]
        except Exception:
            return _error(422, "body must be {\"graph_id\": ...}")
        if graph_id not in graphs:
            return _error(404, f"unknown graph: {graph_id}")
        session = Session(new_id(), graph_id, dynamics.Overlay())
        with store_lock:
            sessions[session.id] = session
        return _json_response({"session_id": session.id}, 201)

    def resolve_refuted(graph: model.ProvGraph, items: list) -> tuple[Optional[Response], frozenset]:
        cat = None
        refuted: set[str] = set()
        for item in items:
            if isinstance(item, str):
                if item not in graph:
                    return _error(404, f"unknown node id: {item}"), frozenset()
                refuted.add(item)
            elif isinstance(item, dict) and "dimension" in item and "key" in item:
                if cat is None:
                    cat = catalog.build_catalog(graph)
                try:
                    members = catalog.class_members(cat, item["dimension"], item["key"])
                except catalog.UnknownClass as exc:
                    return _error(409, str(exc)), frozenset()
                if not members:
                    return _error(409, f"selector matches no nodes: {item}"), frozenset()
                refuted.update(members)
            else:
                return _error(422, f"bad refutation item: {item!r}"), frozenset()
        return None, frozenset(refuted)

    @app.put("/sessions/{session_id}/refuted")
    async def put_refuted(session_id: str, request: Request) -> Response:
        session = sessions.get(session_id)
        if session is None:
            return _error(404, f"unknown session: {session_id}")
        try:
            body = await request.json()
        except Exception:
            return _error(422, "body must be a JSON list")
        if not isinstance(body, list):
            return _error(422, "body must be a list of node ids or selectors")
        graph = get_graph(session.graph_id)
        error, refuted = resolve_refuted(graph, body)
        if error is not None:
            return error
        with session.lock:
            session.overlay = dynamics.Overlay(
                refuted, dict(session.overlay.confidence_overrides)
            )
            return _json_response(state_payload(graph, session.overlay))

    @app.put("/sessions/{session_id}/appraisals")
    async def put_appraisals(session_id: str, request: Request) -> Response:
        session = sessions.get(session_id)
        if session is None:
            return _error(404, f"unknown session: {session_id}")
        try:
            body = await request.json()
        except Exception:
            return _error(422, "body must be a JSON object")
        if not isinstance(body, dict):
            return _error(422, "body must map node ids to confidences")
        graph = get_graph(session.graph_id)
        overrides: dict[str, float] = {}
        for node_id, value in body.items():
            if node_id not in graph:
                return _error(404, f"unknown node id: {node_id}")
            if not isinstance(value, (int, float)) or not 0.0 <= float(value) <= 1.0:
                return _error(422, f"confidence must be in [0,1]: {node_id}={value!r}")
            overrides[node_id] = float(value)
        with session.lock:
            session.overlay = dynamics.Overlay(session.overlay.refuted, overrides)
            return _json_response(state_payload(graph, session.overlay))

    @app.get("/sessions/{session_id}/state")
    async def get_state(session_id: str) -> Response:
        session = sessions.get(session_id)
        if session is None:
            return _error(404, f"unknown session: {session_id}")
        graph = get_graph(session.graph_id)
        return _json_response(state_payload(graph, session.overlay))

    @app.get("/sessions/{session_id}/explain")
    async def get_explain(
        session_id: str,
        kind: str,
        focus: list[str] = Query(default=[]),
        threshold: float = 0.0,
    ) -> Response:
        session = sessions.get(session_id)
        if session is None:
            return _error(404, f"unknown session: {session_id}")
        graph = get_graph(session.graph_id)
        focus = list(focus)
        missing = [f for f in focus if f not in graph]
        if missing:
            return _error(404, f"unknown focus id(s): {missing}")
        try:
            explanation = explain.answer(
                graph, session.overlay, kind, focus, threshold=threshold
            )
        except (explain.NotAnActivity, explain.NotAGoal, dynamics.UnknownNode) as exc:
            return _error(404, str(exc))
        except (environments.OverflowUnsound, ValueError) as exc:
            return _error(422, str(exc))
        return Response(content=explanation.to_json(), media_type="application/json")

    return app
