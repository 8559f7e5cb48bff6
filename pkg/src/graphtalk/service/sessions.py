"""Chat session registry.

Sessions hold an append-only (user text, answer, trace_id) history and expire
after an idle timeout. Each session carries its own lock so concurrent chats
in one session serialize while different sessions proceed in parallel.
"""

from __future__ import annotations

import threading
import time
import uuid
from typing import Callable, Dict, List, Optional, Tuple

DEFAULT_IDLE_TIMEOUT = 3600.0


class Session:
    def __init__(self, session_id: str, now: float):
        self.session_id = session_id
        self.history: List[Tuple[str, str, str]] = []
        self.created_at = now
        self.last_active = now
        self.lock = threading.Lock()

    def append(self, user_text: str, answer: str, trace_id: str) -> None:
        self.history.append((user_text, answer, trace_id))

    def history_pairs(self) -> List[Tuple[str, str]]:
        """(user, answer) pairs in order, the shape the pipeline consumes."""
        return [(user, answer) for user, answer, _ in self.history]


class SessionStore:
    """Thread-safe map of live sessions with idle expiry on access."""

    def __init__(
        self,
        idle_timeout: float = DEFAULT_IDLE_TIMEOUT,
        clock: Callable[[], float] = time.time,
    ):
        self.idle_timeout = idle_timeout
        self.clock = clock
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self) -> Session:
        now = self.clock()
        session = Session(session_id=uuid.uuid4().hex, now=now)
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> Optional[Session]:
        """Return the live session, or None if unknown or idle-expired."""
        now = self.clock()
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                return None
            if now - session.last_active > self.idle_timeout:
                del self._sessions[session_id]
                return None
            session.last_active = now
            return session

    def sweep(self) -> int:
        """Drop every expired session; returns how many were removed."""
        now = self.clock()
        with self._lock:
            stale = [
                sid
                for sid, session in self._sessions.items()
                if now - session.last_active > self.idle_timeout
            ]
            for sid in stale:
                del self._sessions[sid]
            return len(stale)

    def count(self) -> int:
        with self._lock:
            return len(self._sessions)
