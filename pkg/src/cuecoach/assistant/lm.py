"""Language-model clients: remote chat-completion endpoint plus deterministic mocks.

The assistant only ever talks to an ``LMClient``; tests and the degraded
service path use the scripted/fixture mocks so nothing in the test suite
needs network access.
"""

from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import Any, List, Optional, Protocol, Sequence, runtime_checkable

import httpx

from ..errors import LMUnavailable

__all__ = [
    "LMClient",
    "HttpChatLM",
    "ScriptedLM",
    "FixtureLM",
    "lm_from_env",
    "request_hash",
]

DEFAULT_TIMEOUT = 60.0


@runtime_checkable
class LMClient(Protocol):
    def complete(self, system_text: str, user_text: str, **decode: Any) -> str:
        """Return the model's text for one system+user exchange."""
        ...


def request_hash(system_text: str, user_text: str) -> str:
    """Stable key for a prompt pair; used to file fixture responses."""
    blob = system_text.encode() + b"\x00" + user_text.encode()
    return hashlib.sha256(blob).hexdigest()


class HttpChatLM:
    """Chat-completion endpoint speaking the usual messages JSON.

    POSTs to ``{base_url}/chat/completions`` with a system+user message pair.
    Any transport failure, non-2xx status, or malformed payload surfaces as
    LMUnavailable; we never fabricate text.
    """

    def __init__(
        self,
        base_url: str,
        model: str,
        api_key: str = "",
        timeout: float = DEFAULT_TIMEOUT,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.api_key = api_key
        self.timeout = timeout

    def complete(self, system_text: str, user_text: str, **decode: Any) -> str:
        payload = {
            "model": self.model,
            "messages": [
                {"role": "system", "content": system_text},
                {"role": "user", "content": user_text},
            ],
        }
        payload.update(decode)
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = "Bearer " + self.api_key
        try:
            resp = httpx.post(
                self.base_url + "/chat/completions",
                json=payload,
                headers=headers,
                timeout=self.timeout,
            )
            resp.raise_for_status()
            data = resp.json()
            return data["choices"][0]["message"]["content"]
        except httpx.HTTPError as exc:
            raise LMUnavailable("LM request failed: %s" % exc) from exc
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise LMUnavailable("LM returned a malformed response: %s" % exc) from exc


class ScriptedLM:
    """Replays a fixed list of responses and records every prompt it saw."""

    def __init__(self, responses: Sequence[str], repeat: bool = False):
        self.responses: List[str] = list(responses)
        self.repeat = repeat
        self.calls: List[dict] = []
        self._i = 0

    def complete(self, system_text: str, user_text: str, **decode: Any) -> str:
        self.calls.append(
            {"system": system_text, "user": user_text, "decode": dict(decode)}
        )
        if self._i >= len(self.responses):
            if not self.repeat or not self.responses:
                raise LMUnavailable("scripted LM ran out of responses")
            return self.responses[-1]
        text = self.responses[self._i]
        self._i += 1
        return text


class FixtureLM:
    """Looks responses up by prompt hash in a fixture directory.

    Each fixture is ``<sha256(system + NUL + user)>.txt``. Pure given the
    directory contents; a missing fixture is an LMUnavailable, not a guess.
    """

    def __init__(self, fixture_dir: str | Path):
        self.fixture_dir = Path(fixture_dir)
        self.calls: List[dict] = []

    def complete(self, system_text: str, user_text: str, **decode: Any) -> str:
        key = request_hash(system_text, user_text)
        self.calls.append(
            {"system": system_text, "user": user_text, "decode": dict(decode), "key": key}
        )
        path = self.fixture_dir / (key + ".txt")
        if not path.is_file():
            raise LMUnavailable("no fixture for request %s" % key)
        return path.read_text()

    def store(self, system_text: str, user_text: str, response: str) -> Path:
        """Write a fixture for the given prompt pair (test helper)."""
        self.fixture_dir.mkdir(parents=True, exist_ok=True)
        path = self.fixture_dir / (request_hash(system_text, user_text) + ".txt")
        path.write_text(response)
        return path


def lm_from_env(env: Optional[dict] = None) -> Optional[HttpChatLM]:
    """Build an HttpChatLM from LM_BASE_URL / LM_API_KEY / LM_MODEL, or None if unset."""
    src = os.environ if env is None else env
    base_url = src.get("LM_BASE_URL", "")
    if not base_url:
        return None
    return HttpChatLM(
        base_url=base_url,
        model=src.get("LM_MODEL", "default"),
        api_key=src.get("LM_API_KEY", ""),
    )
