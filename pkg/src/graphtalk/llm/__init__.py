"""LLM gateway: chat backends, prompt templates, ReAct loop."""

from .gateway import (
    ChatMessage,
    ChatRequest,
    HttpBackend,
    MockBackend,
    MockRule,
    MockScript,
    complete,
    load_mock_script,
    render_request,
)
from .prompts import PromptTemplate, load_template, load_template_file, render_prompt
from .react import ReactStep, ReactTools, run_react

__all__ = [
    "ChatMessage",
    "ChatRequest",
    "HttpBackend",
    "MockBackend",
    "MockRule",
    "MockScript",
    "PromptTemplate",
    "ReactStep",
    "ReactTools",
    "complete",
    "load_mock_script",
    "load_template",
    "load_template_file",
    "render_prompt",
    "render_request",
    "run_react",
]
