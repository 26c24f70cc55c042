"""Backend client tests: mocks, remote wire handling, retries, logging posture."""

from __future__ import annotations

import logging

import pytest

from ppts.errors import BackendTimeoutError, ConfigurationError, TransportError, UsageError
from ppts.llm import BackendConfig, ChatMessage, ExtractionRule, complete


def test_mock_echo_returns_last_user_content():
    cfg = BackendConfig(kind="mock-echo")
    messages = [ChatMessage("system", "be brief"), ChatMessage("user", "Tom travelled to London")]
    assert complete(messages, cfg) == "Tom travelled to London"


def test_mock_backends_are_deterministic():
    cfg = BackendConfig(kind="mock-echo")
    msg = [ChatMessage("user", "same input")]
    assert complete(msg, cfg) == complete(msg, cfg)


def test_mock_extract_applies_rule_table():
    rule = ExtractionRule("subject-of-visited", r"who visited", r"^(.+?)\s+visited\b")
    cfg = BackendConfig(kind="mock-extract", extract_rules=(rule,))
    content = "Jack visited Berlin. Q: who visited?"
    # rule-table oracle: trigger matches, answer is group 1 of the pattern
    import re

    assert re.search(rule.trigger, content)
    expected = re.search(rule.answer_pattern, content).group(1)
    assert expected == "Jack"
    assert complete([ChatMessage("user", content)], cfg) == "Jack"


def test_mock_extract_without_matching_rule_returns_empty():
    rule = ExtractionRule("subject-of-visited", r"who visited", r"^(.+?)\s+visited\b")
    cfg = BackendConfig(kind="mock-extract", extract_rules=(rule,))
    assert complete([ChatMessage("user", "unrelated question?")], cfg) == ""


def test_message_validation():
    cfg = BackendConfig(kind="mock-echo")
    with pytest.raises(UsageError):
        complete([], cfg)
    with pytest.raises(UsageError):
        complete([ChatMessage("user", "hi"), ChatMessage("assistant", "yo")], cfg)
    with pytest.raises(UsageError):
        ChatMessage("tool", "nope")


def test_remote_requires_endpoint():
    with pytest.raises(ConfigurationError):
        BackendConfig(kind="remote")


def test_remote_requires_credential(monkeypatch):
    monkeypatch.delenv("LLM_API_KEY", raising=False)
    cfg = BackendConfig(kind="remote", endpoint="http://127.0.0.1:1/v1/chat/completions")
    with pytest.raises(ConfigurationError):
        complete([ChatMessage("user", "hi")], cfg)


def test_remote_unreachable_endpoint_is_transport_error(monkeypatch):
    monkeypatch.setenv("LLM_API_KEY", "test-key")
    cfg = BackendConfig(
        kind="remote",
        endpoint="http://127.0.0.1:9/v1/chat/completions",
        timeout=0.2,
        max_retries=0,
    )
    with pytest.raises((TransportError, BackendTimeoutError)):
        complete([ChatMessage("user", "hi")], cfg)


class _FakeResponse:
    def __init__(self, status_code=200, payload=None, text=""):
        self.status_code = status_code
        self._payload = payload
        self.text = text

    def json(self):
        if self._payload is None:
            raise ValueError("no json")
        return self._payload


def test_remote_parses_choice_content(monkeypatch):
    monkeypatch.setenv("LLM_API_KEY", "test-key")
    calls = []

    def fake_post(url, json=None, headers=None, timeout=None):
        calls.append((url, json))
        return _FakeResponse(payload={"choices": [{"message": {"content": "the reply"}}]})

    monkeypatch.setattr("ppts.llm.httpx.post", fake_post)
    cfg = BackendConfig(kind="remote", endpoint="http://x/v1/chat/completions", model_id="m-1")
    out = complete([ChatMessage("user", "hello")], cfg)
    assert out == "the reply"
    assert calls[0][1]["model"] == "m-1"
    assert calls[0][1]["messages"] == [{"role": "user", "content": "hello"}]


def test_remote_retries_then_raises_with_payload(monkeypatch):
    monkeypatch.setenv("LLM_API_KEY", "test-key")
    attempts = []

    def fake_post(url, json=None, headers=None, timeout=None):
        attempts.append(1)
        return _FakeResponse(status_code=503, text='{"error": "busy"}')

    monkeypatch.setattr("ppts.llm.httpx.post", fake_post)
    cfg = BackendConfig(
        kind="remote", endpoint="http://x/v1", max_retries=2, backoff_base=0.001
    )
    with pytest.raises(TransportError) as err:
        complete([ChatMessage("user", "hello")], cfg)
    assert len(attempts) == 3  # initial call plus two retries
    assert err.value.payload == '{"error": "busy"}'


def test_remote_malformed_body_is_transport_error(monkeypatch):
    monkeypatch.setenv("LLM_API_KEY", "test-key")
    monkeypatch.setattr(
        "ppts.llm.httpx.post",
        lambda *a, **k: _FakeResponse(payload={"unexpected": True}),
    )
    cfg = BackendConfig(kind="remote", endpoint="http://x/v1")
    with pytest.raises(TransportError):
        complete([ChatMessage("user", "hello")], cfg)


def test_no_message_content_logged_at_info(monkeypatch, caplog):
    monkeypatch.setenv("LLM_API_KEY", "test-key")
    secret = "Tom's secret address in Paris"
    monkeypatch.setattr(
        "ppts.llm.httpx.post",
        lambda *a, **k: _FakeResponse(payload={"choices": [{"message": {"content": secret}}]}),
    )
    cfg = BackendConfig(kind="remote", endpoint="http://x/v1")
    with caplog.at_level(logging.INFO, logger="ppts.llm"):
        complete([ChatMessage("user", secret)], cfg)
    assert secret not in caplog.text
