"""HTTP service: chat sessions, graph CRUD and export, trace lookup.

Every non-2xx response body has the shape {code, message, details?} so the
UI and scripts can handle all failures uniformly. Graph edits made over the
API are recorded as synthetic traces for auditing.
"""

from __future__ import annotations

from typing import Any, Dict, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel
from starlette.exceptions import HTTPException as StarletteHTTPException

from graphtalk.config import AppConfig
from graphtalk.errors import (
    EmptyNameError,
    EmptyQueryError,
    ExecutionError,
    ForbiddenSelfLoopError,
    GatewayError,
    GraphTalkError,
    InvalidPropertyValueError,
    MalformedRecordError,
    MissingConceptsError,
    QuerySyntaxError,
    StepFailedError,
    UnknownEdgeError,
    UnknownEndpointError,
    UnknownNodeError,
    UnknownSessionError,
    UnknownTraceError,
    error_payload,
)
from graphtalk.pipeline import AgentTrace, PipelineContext, run_chat
from graphtalk.service.sessions import DEFAULT_IDLE_TIMEOUT, SessionStore
from graphtalk.wiring import build_context

MAX_PAGE_LIMIT = 5000
DEFAULT_PAGE_LIMIT = 500

_STATUS_BY_ERROR = (
    (StepFailedError, 422),
    (MissingConceptsError, 422),
    (GatewayError, 503),
    (UnknownNodeError, 404),
    (UnknownEdgeError, 404),
    (UnknownSessionError, 404),
    (UnknownTraceError, 404),
    (ForbiddenSelfLoopError, 409),
    (EmptyQueryError, 400),
    (EmptyNameError, 400),
    (InvalidPropertyValueError, 400),
    (QuerySyntaxError, 400),
    (MalformedRecordError, 400),
    (UnknownEndpointError, 400),
    (ExecutionError, 400),
)


def status_for(exc: GraphTalkError) -> int:
    for kind, status in _STATUS_BY_ERROR:
        if isinstance(exc, kind):
            return status
    return 500


def _error_details(exc: GraphTalkError) -> Optional[dict]:
    if isinstance(exc, (StepFailedError, MissingConceptsError)):
        details: Dict[str, Any] = {"trace_id": getattr(exc, "trace_id", None)}
        if isinstance(exc, StepFailedError):
            details["step_id"] = exc.step_id
        return details
    if isinstance(exc, QuerySyntaxError):
        return exc.to_dict()
    return None


class ChatBody(BaseModel):
    session_id: Optional[str] = None
    message: str


class NodeBody(BaseModel):
    name: str
    label: str = "Concept"
    properties: Optional[Dict[str, Any]] = None


class EdgeBody(BaseModel):
    source: str
    relation: str
    target: str
    properties: Optional[Dict[str, Any]] = None


def create_app(
    config: Optional[AppConfig] = None,
    context: Optional[PipelineContext] = None,
    session_timeout: float = DEFAULT_IDLE_TIMEOUT,
) -> FastAPI:
    """Build the service; tests may inject a prebuilt pipeline context."""
    config = config or AppConfig()
    if context is None:
        context = build_context(config)
    graph = context.graph
    traces = context.trace_store
    sessions = SessionStore(idle_timeout=session_timeout)

    app = FastAPI(title="graphtalk", docs_url=None, redoc_url=None)
    app.state.context = context
    app.state.sessions = sessions

    if config.ui_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.ui_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(GraphTalkError)
    async def graphtalk_error_handler(request: Request, exc: GraphTalkError):
        return JSONResponse(
            status_code=status_for(exc),
            content=error_payload(exc, details=_error_details(exc)),
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_argument", "message": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(request: Request, exc: RequestValidationError):
        details = [
            {"loc": [str(part) for part in err.get("loc", ())], "msg": str(err.get("msg", ""))}
            for err in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={"code": "validation_error", "message": "invalid request body", "details": details},
        )

    @app.exception_handler(StarletteHTTPException)
    async def http_exception_handler(request: Request, exc: StarletteHTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content={"code": f"http_{exc.status_code}", "message": str(exc.detail)},
        )

    @app.exception_handler(Exception)
    async def unexpected_error_handler(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"code": "internal_error", "message": "unexpected server error"},
        )

    def audit_trace(action: str, artifact: dict) -> str:
        """Record a graph edit as a one-entry trace and return its id."""
        trace = AgentTrace(trace_id=context.next_trace_id(action), query=action, task_type="GRAPH_EDIT")
        trace.add(stage="edit", output=action, artifact=artifact)
        trace.answer = action
        traces.save(trace)
        return trace.trace_id

    @app.post("/api/chat")
    def chat(body: ChatBody):
        if body.session_id is None:
            session = sessions.create()
        else:
            found = sessions.get(body.session_id)
            if found is None:
                raise UnknownSessionError(f"unknown or expired session {body.session_id!r}")
            session = found
        with session.lock:
            result = run_chat(context, body.message, history=session.history_pairs())
            session.append(body.message, result.answer, result.trace_id)
        return {
            "session_id": session.session_id,
            "answer": result.answer,
            "task_type": result.task_type,
            "trace_id": result.trace_id,
        }

    @app.get("/api/graph")
    def export_graph(limit: int = DEFAULT_PAGE_LIMIT, offset: int = 0):
        if limit < 0 or limit > MAX_PAGE_LIMIT:
            raise ValueError(f"limit must be between 0 and {MAX_PAGE_LIMIT}")
        if offset < 0:
            raise ValueError("offset must not be negative")
        with graph.lock.read_locked():
            ordered = graph.nodes_sorted()
            page = ordered[offset : offset + limit]
            page_ids = {node.id for node in page}
            edges = [
                edge.to_dict()
                for edge in sorted(graph.edges.values(), key=lambda e: e.id)
                if edge.source in page_ids and edge.target in page_ids
            ]
            return {
                "nodes": [node.to_dict() for node in page],
                "edges": edges,
                "total_nodes": graph.node_count,
                "total_edges": graph.edge_count,
            }

    @app.post("/api/graph/nodes")
    def create_node(body: NodeBody):
        outcome = graph.upsert_node(body.name, body.label, body.properties)
        summary = {
            "nodes_created": 1 if outcome.created else 0,
            "edges_created": 0,
            "nodes_deleted": 0,
            "edges_deleted": 0,
        }
        trace_id = audit_trace(f"api: create node {body.name!r} ({body.label})", {"id": outcome.id, "summary": summary})
        return {"id": outcome.id, "created": outcome.created, "summary": summary, "trace_id": trace_id}

    @app.post("/api/graph/edges")
    def create_edge(body: EdgeBody):
        outcome = graph.upsert_edge(body.source, body.relation, body.target, body.properties)
        summary = {
            "nodes_created": 0,
            "edges_created": 1 if outcome.created else 0,
            "nodes_deleted": 0,
            "edges_deleted": 0,
        }
        trace_id = audit_trace(
            f"api: create edge {body.source} -{body.relation}-> {body.target}",
            {"id": outcome.id, "summary": summary},
        )
        return {"id": outcome.id, "created": outcome.created, "summary": summary, "trace_id": trace_id}

    @app.delete("/api/graph/nodes/{node_id}")
    def delete_node(node_id: str):
        removed_edges = graph.delete_node(node_id)
        summary = {
            "nodes_created": 0,
            "edges_created": 0,
            "nodes_deleted": 1,
            "edges_deleted": removed_edges,
        }
        trace_id = audit_trace(f"api: delete node {node_id}", {"id": node_id, "summary": summary})
        return {"id": node_id, "summary": summary, "trace_id": trace_id}

    @app.delete("/api/graph/edges/{edge_id}")
    def delete_edge(edge_id: str):
        graph.delete_edge(edge_id)
        summary = {
            "nodes_created": 0,
            "edges_created": 0,
            "nodes_deleted": 0,
            "edges_deleted": 1,
        }
        trace_id = audit_trace(f"api: delete edge {edge_id}", {"id": edge_id, "summary": summary})
        return {"id": edge_id, "summary": summary, "trace_id": trace_id}

    @app.get("/api/graph/neighbors/{node_id}")
    def neighbors(node_id: str, direction: str = "out", relation: Optional[str] = None):
        pairs = graph.neighbors(node_id, direction=direction, relation_filter=relation)
        return {
            "node": graph.get_node(node_id).to_dict(),
            "neighbors": [{"edge": edge.to_dict(), "node": node.to_dict()} for edge, node in pairs],
        }

    @app.get("/api/trace/{trace_id}")
    def get_trace(trace_id: str):
        stored = traces.get(trace_id)
        if stored is None:
            raise UnknownTraceError(f"no trace with id {trace_id!r}")
        return stored

    if config.ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
