"""Uniform access to the remote chat model, plus deterministic mocks for tests.

The remote kind speaks the de-facto chat-completions wire schema (message
array in, choice array out) so the gateway can front any compatible provider.
The mock kinds are pure functions: mock-echo returns the last user content,
mock-extract applies a deterministic extraction-rule table to it.

Message content is never logged at default verbosity.
"""

from __future__ import annotations

import logging
import os
import re
import time
from dataclasses import dataclass, field
from typing import Sequence

import httpx

from .errors import BackendTimeoutError, ConfigurationError, TransportError, UsageError

logger = logging.getLogger(__name__)

ROLES = ("system", "user", "assistant")
BACKEND_KINDS = ("remote", "mock-echo", "mock-extract")


@dataclass(frozen=True)
class ChatMessage:
    role: str
    content: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise UsageError(f"invalid message role {self.role!r}")


@dataclass(frozen=True)
class ExtractionRule:
    """Answer rule for the mock-extract backend.

    When `trigger` matches the request content, the first capture group of
    `answer_pattern` is the reply.
    """

    name: str
    trigger: str
    answer_pattern: str


@dataclass
class BackendConfig:
    kind: str = "mock-echo"
    endpoint: str | None = None
    model_id: str = ""
    timeout: float = 30.0
    credential_env: str = "LLM_API_KEY"
    max_retries: int = 2
    backoff_base: float = 0.5
    extract_rules: tuple[ExtractionRule, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in BACKEND_KINDS:
            raise ConfigurationError(f"unknown backend kind {self.kind!r}")
        if self.kind == "remote" and not self.endpoint:
            raise ConfigurationError("remote backend requires an endpoint")


def _last_user_content(messages: Sequence[ChatMessage]) -> str:
    if not messages:
        raise UsageError("messages must be non-empty")
    if messages[-1].role != "user":
        raise UsageError("last message must have the user role")
    return messages[-1].content


def complete(messages: Sequence[ChatMessage], cfg: BackendConfig) -> str:
    """Return the assistant text for a message list under the given backend."""
    content = _last_user_content(messages)
    if cfg.kind == "mock-echo":
        return content
    if cfg.kind == "mock-extract":
        return _mock_extract(content, cfg.extract_rules)
    return _remote_complete(messages, cfg)


def _mock_extract(content: str, rules: Sequence[ExtractionRule]) -> str:
    for rule in rules:
        if not re.search(rule.trigger, content, re.IGNORECASE):
            continue
        m = re.search(rule.answer_pattern, content)
        if m:
            return m.group(1).strip()
    return ""


def _remote_complete(messages: Sequence[ChatMessage], cfg: BackendConfig) -> str:
    key = os.environ.get(cfg.credential_env, "")
    if not key:
        raise ConfigurationError(
            f"remote backend requires a credential in ${cfg.credential_env}"
        )
    body = {
        "model": cfg.model_id,
        "messages": [{"role": m.role, "content": m.content} for m in messages],
    }
    headers = {"Authorization": f"Bearer {key}"}
    last_error: Exception | None = None
    for attempt in range(cfg.max_retries + 1):
        if attempt:
            time.sleep(cfg.backoff_base * (2 ** (attempt - 1)))
        try:
            response = httpx.post(cfg.endpoint, json=body, headers=headers, timeout=cfg.timeout)
        except httpx.TimeoutException:
            last_error = BackendTimeoutError(f"backend timed out after {cfg.timeout}s")
            logger.info("backend timeout (attempt %d/%d)", attempt + 1, cfg.max_retries + 1)
            continue
        except httpx.HTTPError as exc:
            last_error = TransportError(f"backend request failed: {exc}")
            logger.info("backend transport failure (attempt %d/%d)", attempt + 1, cfg.max_retries + 1)
            continue
        if response.status_code >= 400:
            last_error = TransportError(
                f"backend returned status {response.status_code}", payload=response.text
            )
            logger.info("backend status %d (attempt %d/%d)",
                        response.status_code, attempt + 1, cfg.max_retries + 1)
            continue
        try:
            data = response.json()
            text = data["choices"][0]["message"]["content"]
        except (ValueError, LookupError, TypeError) as exc:
            raise TransportError(f"malformed provider response: {exc}", payload=response.text)
        logger.info("completion ok (%d chars)", len(text))
        logger.debug("completion content: %r", text)
        return text
    assert last_error is not None
    raise last_error
