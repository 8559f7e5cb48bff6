"""HTTP service layer: FastAPI app factory and session registry."""

from graphtalk.service.app import create_app, status_for
from graphtalk.service.sessions import DEFAULT_IDLE_TIMEOUT, Session, SessionStore

__all__ = [
    "DEFAULT_IDLE_TIMEOUT",
    "Session",
    "SessionStore",
    "create_app",
    "status_for",
]
