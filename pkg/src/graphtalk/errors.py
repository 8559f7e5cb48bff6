"""Exception taxonomy shared across the package.

Every error raised by graphtalk's own logic derives from GraphTalkError so
callers (CLI, HTTP service) can map failures to a single error shape.
"""

from __future__ import annotations

from typing import Any, Optional, Sequence


class GraphTalkError(Exception):
    """Base class for all graphtalk errors."""

    code = "error"


# --- graph store ---------------------------------------------------------


class EmptyNameError(GraphTalkError):
    code = "empty_name"


class InvalidPropertyValueError(GraphTalkError):
    code = "invalid_property_value"


class UnknownNodeError(GraphTalkError):
    code = "unknown_node"


class UnknownEdgeError(GraphTalkError):
    code = "unknown_edge"


class ForbiddenSelfLoopError(GraphTalkError):
    code = "forbidden_self_loop"


class IoFailureError(GraphTalkError):
    code = "io_failure"


class MalformedRecordError(GraphTalkError):
    """A persisted record (graph file or benchmark dataset) failed to parse."""

    code = "malformed_record"

    def __init__(self, line_number: int, reason: str):
        super().__init__(f"line {line_number}: {reason}")
        self.line_number = line_number
        self.reason = reason


# --- query language -------------------------------------------------------


class QuerySyntaxError(GraphTalkError):
    """Syntax error with a byte offset and the set of tokens that were expected."""

    code = "query_syntax"

    def __init__(self, offset: int, message: str, expected: Sequence[str] = ()):
        super().__init__(f"at byte {offset}: {message}")
        self.offset = offset
        self.message = message
        self.expected = sorted(expected)

    def to_dict(self) -> dict:
        return {"offset": self.offset, "message": self.message, "expected": self.expected}


class UnboundVariableError(GraphTalkError):
    code = "unbound_variable"

    def __init__(self, name: str, context: str = ""):
        detail = f"variable '{name}' is not bound by any pattern"
        if context:
            detail += f" ({context})"
        super().__init__(detail)
        self.name = name


class MixedReadWriteError(GraphTalkError):
    code = "mixed_read_write"


class ExecutionError(GraphTalkError):
    code = "execution_error"


# --- llm gateway -----------------------------------------------------------


class GatewayError(GraphTalkError):
    code = "gateway_error"


class GatewayTimeoutError(GatewayError):
    code = "gateway_timeout"


class HttpStatusError(GatewayError):
    code = "gateway_http_status"

    def __init__(self, status: int, detail: str = ""):
        super().__init__(f"backend returned HTTP {status}" + (f": {detail}" if detail else ""))
        self.status = status


class EmptyCompletionError(GatewayError):
    code = "empty_completion"


class MissingPlaceholderError(GraphTalkError):
    code = "missing_placeholder"

    def __init__(self, name: str):
        super().__init__(f"no binding supplied for placeholder '{name}'")
        self.name = name


class BudgetExhaustedError(GraphTalkError):
    """ReAct episode hit its step cap without a FINISH action.

    Carries the partial trace so callers can still audit the episode.
    """

    code = "budget_exhausted"

    def __init__(self, steps: list):
        super().__init__(f"react episode exhausted its budget after {len(steps)} steps")
        self.steps = steps


# --- concept linking -------------------------------------------------------


class EmptyQueryError(GraphTalkError):
    code = "empty_query"


class ExtractionParseFailureError(GraphTalkError):
    code = "extraction_parse_failure"


# --- pipeline ---------------------------------------------------------------


class MissingConceptsError(GraphTalkError):
    code = "missing_concepts"

    def __init__(self, kind: str, needed: int, got: int):
        super().__init__(f"{kind} needs {needed} linked concept(s), got {got}")
        self.kind = kind
        self.needed = needed
        self.got = got


class StepFailedError(GraphTalkError):
    """A pipeline step failed; the trace retains the completed prefix."""

    code = "step_failed"

    def __init__(self, step_id: int, cause: BaseException, trace_id: Optional[str] = None):
        super().__init__(f"step {step_id} failed: {cause}")
        self.step_id = step_id
        self.cause = cause
        self.trace_id = trace_id


class UnknownEndpointError(GraphTalkError):
    code = "unknown_endpoint"


# --- configuration and service ----------------------------------------------


class InvalidConfigError(GraphTalkError):
    code = "invalid_config"


class UnknownSessionError(GraphTalkError):
    code = "unknown_session"


class UnknownTraceError(GraphTalkError):
    code = "unknown_trace"


def error_payload(exc: GraphTalkError, details: Optional[Any] = None) -> dict:
    """Uniform machine-readable shape for CLI and HTTP error bodies."""
    body = {"code": exc.code, "message": str(exc)}
    if details is not None:
        body["details"] = details
    return body
