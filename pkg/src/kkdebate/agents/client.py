"""Chat-completions client shared by all remote agents of a process.

Environment:
  KKDEBATE_API_BASE  endpoint base URL (default https://api.openai.com/v1)
  KKDEBATE_API_KEY   bearer token, sent when set
  KKDEBATE_TIMEOUT   per-request timeout in seconds (default 120)
"""

from __future__ import annotations

import logging
import os
import time
from typing import Callable, Mapping, Sequence

import httpx

log = logging.getLogger(__name__)

DEFAULT_BASE = "https://api.openai.com/v1"


class EndpointError(RuntimeError):
    """The endpoint kept failing after the transport retry budget was spent."""


class OfflineError(RuntimeError):
    """A remote call was attempted while running offline."""


class ChatClient:
    """Thread-safe wrapper around one ``httpx.Client``.

    Transport errors, 429 and 5xx responses are retried with exponential
    backoff; other 4xx responses fail immediately.
    """

    def __init__(
        self,
        base_url: str | None = None,
        api_key: str | None = None,
        timeout: float | None = None,
        temperature: float = 0.0,
        max_retries: int = 4,
        backoff: float = 1.0,
        transport: httpx.BaseTransport | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        env = os.environ
        self.base_url = (base_url or env.get("KKDEBATE_API_BASE") or DEFAULT_BASE).rstrip("/")
        api_key = api_key if api_key is not None else env.get("KKDEBATE_API_KEY")
        timeout = timeout if timeout is not None else float(env.get("KKDEBATE_TIMEOUT", "120"))
        headers = {"Authorization": f"Bearer {api_key}"} if api_key else {}
        self.temperature = temperature
        self.max_retries = max_retries
        self.backoff = backoff
        self._sleep = sleep
        self._http = httpx.Client(timeout=timeout, headers=headers, transport=transport)

    def complete(self, model: str, messages: Sequence[Mapping[str, str]], temperature: float | None = None) -> str:
        body = {
            "model": model,
            "messages": [dict(m) for m in messages],
            "temperature": self.temperature if temperature is None else temperature,
        }
        url = f"{self.base_url}/chat/completions"
        last: str = ""
        for attempt in range(self.max_retries + 1):
            if attempt:
                self._sleep(self.backoff * 2 ** (attempt - 1))
            try:
                resp = self._http.post(url, json=body)
            except httpx.HTTPError as exc:
                last = f"{type(exc).__name__}: {exc}"
                log.warning("request to %s failed (%s), attempt %d", url, last, attempt + 1)
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last = f"HTTP {resp.status_code}"
                log.warning("%s from %s, attempt %d", last, url, attempt + 1)
                continue
            if resp.status_code >= 400:
                raise EndpointError(f"HTTP {resp.status_code} from {url}: {resp.text[:200]}")
            try:
                return resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise EndpointError(f"unexpected response body from {url}: {exc}") from exc
        raise EndpointError(f"{url} failed after {self.max_retries + 1} attempts: {last}")

    def close(self) -> None:
        self._http.close()


class OfflineClient:
    """Stand-in used with ``--offline``; any call is an error."""

    def complete(self, model, messages, temperature=None) -> str:
        raise OfflineError(f"remote model {model!r} requested while offline")

    def close(self) -> None:
        pass
