"""Chat-completion gateway with two interchangeable backends.

HttpBackend speaks the OpenAI-style /v1/chat/completions JSON protocol.
MockBackend replays a scripted rule table and is a pure function of
(script, request): same inputs, same output, no randomness anywhere. All
pipeline behavior that matters for tests runs against the mock.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Pattern, Sequence, Tuple
import re

import httpx

from ..errors import (
    EmptyCompletionError,
    GatewayError,
    GatewayTimeoutError,
    HttpStatusError,
    IoFailureError,
    MalformedRecordError,
)

CHAT_COMPLETIONS_PATH = "/v1/chat/completions"
ROLES = ("user", "assistant")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str


@dataclass
class ChatRequest:
    system_prompt: str
    messages: List[ChatMessage]
    temperature: float = 0.0
    max_tokens: int = 1024

    def __post_init__(self) -> None:
        if not self.messages:
            raise ValueError("a chat request needs at least one message")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")
        for index, message in enumerate(self.messages):
            expected = ROLES[index % 2]
            if message.role != expected:
                raise ValueError(
                    f"message {index} must have role {expected!r} (roles alternate starting with user)"
                )


def render_request(request: ChatRequest) -> str:
    """Canonical one-string form of a request; mock rules match against this."""
    lines = [f"SYSTEM: {request.system_prompt}"]
    for message in request.messages:
        lines.append(f"{message.role.upper()}: {message.content}")
    return "\n".join(lines)


@dataclass
class MockRule:
    match: str
    response: str
    regex: bool = False
    _compiled: Optional[Pattern[str]] = field(default=None, repr=False, compare=False)

    def applies_to(self, rendered: str) -> bool:
        if self.regex:
            if self._compiled is None:
                object.__setattr__(self, "_compiled", re.compile(self.match))
            return self._compiled.search(rendered) is not None
        return self.match in rendered


@dataclass
class MockScript:
    rules: List[MockRule]
    default_response: str

    def response_for(self, rendered: str) -> str:
        for rule in self.rules:
            if rule.applies_to(rendered):
                return rule.response
        return self.default_response


def load_mock_script(path: str) -> MockScript:
    """Load a script file: {"rules": [{"match", "response", "regex"?}], "default": str}."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = handle.read()
    except OSError as exc:
        raise IoFailureError(f"cannot read mock script {path!r}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise MalformedRecordError(exc.lineno, f"mock script is not valid JSON: {exc.msg}")
    if not isinstance(data, dict):
        raise MalformedRecordError(1, "mock script must be a JSON object")
    unknown = set(data) - {"rules", "default"}
    if unknown:
        raise MalformedRecordError(1, f"unknown mock script keys: {sorted(unknown)}")
    if "default" not in data or not isinstance(data["default"], str):
        raise MalformedRecordError(1, "mock script needs a string 'default'")
    rules = []
    for index, entry in enumerate(data.get("rules", [])):
        if not isinstance(entry, dict):
            raise MalformedRecordError(1, f"rule {index} must be an object")
        bad = set(entry) - {"match", "response", "regex"}
        if bad:
            raise MalformedRecordError(1, f"rule {index} has unknown keys: {sorted(bad)}")
        if not isinstance(entry.get("match"), str) or not isinstance(entry.get("response"), str):
            raise MalformedRecordError(1, f"rule {index} needs string 'match' and 'response'")
        rules.append(MockRule(match=entry["match"], response=entry["response"], regex=bool(entry.get("regex", False))))
    return MockScript(rules=rules, default_response=data["default"])


class MockBackend:
    """Deterministic scripted backend: first matching rule wins, else the default."""

    def __init__(self, script: MockScript) -> None:
        self.script = script

    def complete(self, request: ChatRequest) -> str:
        return self.script.response_for(render_request(request))


class HttpBackend:
    """OpenAI-compatible HTTP backend with bounded retries.

    Retries twice with exponential backoff on 429 and 5xx; 4xx client errors
    surface immediately. Timeouts and unreachable hosts raise
    GatewayTimeoutError after the configured deadline.
    """

    MAX_RETRIES = 2

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: Optional[str] = None,
        api_key_env: Optional[str] = None,
        timeout: float = 30.0,
        transport: Optional[httpx.BaseTransport] = None,
        sleeper: Callable[[float], None] = time.sleep,
    ) -> None:
        if api_key is None and api_key_env:
            api_key = os.environ.get(api_key_env, "")
        self.api_key = api_key or ""
        self.model = model
        base = endpoint.rstrip("/")
        self.url = base if base.endswith("/chat/completions") else base + CHAT_COMPLETIONS_PATH
        self.timeout = timeout
        self._sleeper = sleeper
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def close(self) -> None:
        self._client.close()

    def _payload(self, request: ChatRequest) -> dict:
        messages = [{"role": "system", "content": request.system_prompt}]
        messages.extend({"role": m.role, "content": m.content} for m in request.messages)
        return {
            "model": self.model,
            "messages": messages,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }

    def complete(self, request: ChatRequest) -> str:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        payload = self._payload(request)
        attempt = 0
        while True:
            try:
                response = self._client.post(self.url, json=payload, headers=headers)
            except httpx.TimeoutException as exc:
                raise GatewayTimeoutError(f"request timed out after {self.timeout}s") from exc
            except httpx.TransportError as exc:
                raise GatewayTimeoutError(f"endpoint unreachable: {exc}") from exc
            status = response.status_code
            if status == 429 or status >= 500:
                if attempt < self.MAX_RETRIES:
                    self._sleeper(0.5 * (2**attempt))
                    attempt += 1
                    continue
                raise HttpStatusError(status)
            if status >= 400:
                raise HttpStatusError(status)
            try:
                body = response.json()
                content = body["choices"][0]["message"]["content"]
            except (ValueError, LookupError, TypeError) as exc:
                raise EmptyCompletionError(f"malformed completion payload: {exc}") from exc
            if content is None:
                raise EmptyCompletionError("completion content was null")
            return content


def complete(backend, request: ChatRequest) -> str:
    """Run one completion and insist on non-empty assistant text."""
    text = backend.complete(request)
    if not isinstance(text, str) or not text.strip():
        raise EmptyCompletionError("backend returned empty text")
    return text
