"""Text-generator backends.

``MockBackend`` turns marker-bearing transcript lines into chapter lines and
serves as the deterministic oracle for synthetic corpora. ``HttpBackend``
talks to any OpenAI-compatible ``/v1/chat/completions`` endpoint.
"""

from __future__ import annotations

import json
import logging
import os
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Protocol

import httpx

from .errors import MisuseError, ProtocolError, TransportError

log = logging.getLogger(__name__)

MARKER = "§CHAPTER§"
API_KEY_ENV = "CHAPTERFORGE_API_KEY"

_TRANSCRIPT_LINE = re.compile(
    r"^(?:(?:ASR|Caption) )?(\d{2}:\d{2}:\d{2})(?: - \d{2}:\d{2}:\d{2})?: (.*)$"
)


@dataclass(frozen=True)
class GeneratorRequest:
    prompt: str
    max_output_tokens: int = 1024
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")


@dataclass(frozen=True)
class GeneratorResponse:
    raw_text: str
    usage: dict | None = None


class Backend(Protocol):
    def complete(self, req: GeneratorRequest) -> GeneratorResponse: ...


def generate(backend: Backend, req: GeneratorRequest) -> GeneratorResponse:
    if not req.prompt.strip():
        raise MisuseError("empty prompt")
    return backend.complete(req)


@dataclass
class MockBackend:
    """Echo one ``HH:MM:SS - Title`` line per transcript line carrying the marker.

    The title is the text after the marker. Output depends only on the
    prompt; ``seed`` is accepted for interface symmetry.
    """

    seed: int = 0
    calls: int = field(default=0, compare=False)

    def complete(self, req: GeneratorRequest) -> GeneratorResponse:
        self.calls += 1
        out = []
        for line in req.prompt.splitlines():
            m = _TRANSCRIPT_LINE.match(line)
            if m is None:
                continue
            stamp, text = m.groups()
            pos = text.find(MARKER)
            if pos < 0:
                continue
            title = text[pos + len(MARKER):].strip()
            if title:
                out.append(f"{stamp} - {title}")
        raw = "\n".join(out) + ("\n" if out else "")
        return GeneratorResponse(raw, {"prompt_tokens": 0, "completion_tokens": 0})


def _retryable(status: int) -> bool:
    return status == 429 or 500 <= status < 600


@dataclass
class HttpBackend:
    base_url: str
    model: str
    retries: int = 3
    backoff: float = 0.5
    timeout: float = 60.0
    api_key: str | None = None
    sleep: Callable[[float], None] = time.sleep
    transport: httpx.BaseTransport | None = None

    def __post_init__(self) -> None:
        if self.api_key is None:
            self.api_key = os.environ.get(API_KEY_ENV)
        if self.retries < 0:
            raise ValueError("retries must be >= 0")
        self._client = httpx.Client(timeout=self.timeout, transport=self.transport)

    @property
    def url(self) -> str:
        return self.base_url.rstrip("/") + "/v1/chat/completions"

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def complete(self, req: GeneratorRequest) -> GeneratorResponse:
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": req.prompt}],
            "temperature": req.temperature,
            "max_tokens": req.max_output_tokens,
        }
        attempt = 0
        while True:
            try:
                resp = self._client.post(self.url, json=body, headers=self._headers())
            except httpx.TransportError as exc:
                if attempt >= self.retries:
                    raise TransportError(
                        f"{self.url}: {type(exc).__name__} after {attempt + 1} attempts: {exc}"
                    ) from exc
                log.warning("transport error %s, retrying", exc)
            else:
                if resp.status_code < 300 and resp.status_code >= 200:
                    return self._decode(resp)
                if not _retryable(resp.status_code) or attempt >= self.retries:
                    raise ProtocolError("non-2xx response", resp.status_code, resp.text)
                log.warning("HTTP %d from %s, retrying", resp.status_code, self.url)
            self.sleep(self.backoff * (2**attempt))
            attempt += 1

    def _decode(self, resp: httpx.Response) -> GeneratorResponse:
        try:
            payload = resp.json()
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise ProtocolError("malformed JSON body", resp.status_code, resp.text) from exc
        try:
            content = payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProtocolError("missing choices[0].message.content", resp.status_code, resp.text) from exc
        if not isinstance(content, str):
            raise ProtocolError("content is not a string", resp.status_code, resp.text)
        usage = payload.get("usage") if isinstance(payload, dict) else None
        return GeneratorResponse(content, usage if isinstance(usage, dict) else None)

    def close(self) -> None:
        self._client.close()
