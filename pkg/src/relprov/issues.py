"""Issue records from the GitHub Issues REST API or from offline JSON dumps."""

from __future__ import annotations

import json
import logging
import os
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterable

import httpx

from .errors import BadTimestamp, ConfigError, HttpError, ParseError, RateLimited, SchemaError
from .gitlog import parse_timestamp
from .linking import DEFAULT_CONFIG, LinkConfig, classify_issue
from .model import Issue

log = logging.getLogger(__name__)

DEFAULT_BASE_URL = "https://api.github.com"


@dataclass(frozen=True)
class IssueSourceConfig:
    repo: str
    base_url: str = DEFAULT_BASE_URL
    auth_token_env: str | None = None
    page_size: int = 100
    retry_backoff: float = 2.0
    timeout: float = 30.0

    def __post_init__(self) -> None:
        if self.repo.count("/") != 1 or not all(self.repo.split("/")):
            raise ConfigError(f"issue repo must look like 'owner/name', got {self.repo!r}")
        if not 1 <= self.page_size <= 100:
            raise ConfigError(f"page_size must be within 1..100, got {self.page_size}")

    @property
    def issues_url(self) -> str:
        return f"{self.base_url.rstrip('/')}/repos/{self.repo}/issues"

    def token(self) -> str | None:
        if not self.auth_token_env:
            return None
        return os.environ.get(self.auth_token_env) or None


def issue_from_json(record: Any, config: LinkConfig = DEFAULT_CONFIG) -> Issue:
    """Map one API record onto :class:`Issue`, keeping only the tracked fields."""
    if not isinstance(record, dict):
        raise SchemaError("<record>", "issue record is not an object")
    for key in ("number", "title", "created_at"):
        if key not in record or record[key] is None:
            raise SchemaError(key)
    number = record["number"]
    if not isinstance(number, int) or isinstance(number, bool) or number < 1:
        raise SchemaError("number", "not a positive integer")

    user = record.get("user")
    author = user.get("login") if isinstance(user, dict) else None

    labels = set()
    for label in record.get("labels") or []:
        name = label.get("name") if isinstance(label, dict) else label
        if not isinstance(name, str):
            raise SchemaError("labels", "label without a name")
        labels.add(name)

    try:
        created = parse_timestamp(record["created_at"])
        closed = parse_timestamp(record["closed_at"]) if record.get("closed_at") else None
    except BadTimestamp as exc:
        raise SchemaError("created_at/closed_at", str(exc)) from exc

    return Issue(
        number=number,
        subject=str(record["title"]),
        created_at=created,
        closed_at=closed,
        author=author,
        labels=frozenset(labels),
        kind=classify_issue(labels, config),
    )


def issues_from_json(records: Iterable[Any], config: LinkConfig = DEFAULT_CONFIG) -> list[Issue]:
    return [issue_from_json(r, config) for r in records]


def load_issues_json(path: str | Path, config: LinkConfig = DEFAULT_CONFIG) -> list[Issue]:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from exc
    if not isinstance(data, list):
        raise SchemaError("<root>", "expected a JSON array of issues")
    return issues_from_json(data, config)


def _rate_limit_reset(response: httpx.Response) -> datetime | None:
    if response.status_code not in (403, 429):
        return None
    headers = response.headers
    if headers.get("X-RateLimit-Remaining") != "0":
        return None
    try:
        return datetime.fromtimestamp(int(headers.get("X-RateLimit-Reset", "0")), tz=timezone.utc)
    except ValueError:
        return datetime.now(timezone.utc)


def fetch_issues(
    config: IssueSourceConfig,
    link: LinkConfig = DEFAULT_CONFIG,
    *,
    client: httpx.Client | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> list[Issue]:
    """Download every issue (``state=all``) following ``rel="next"`` links.

    Pull requests share the issue number space and are kept.
    """
    headers = {"Accept": "application/vnd.github+json"}
    token = config.token()
    if token:
        headers["Authorization"] = f"token {token}"

    owns_client = client is None
    if client is None:
        client = httpx.Client(timeout=config.timeout)
    try:
        records: list[Any] = []
        url: str | None = config.issues_url
        params: dict[str, Any] | None = {"state": "all", "per_page": config.page_size, "page": 1}
        while url is not None:
            response = _get(client, url, params, headers, config.retry_backoff, sleep)
            payload = response.json()
            if not isinstance(payload, list):
                raise SchemaError("<root>", "expected a JSON array of issues")
            records.extend(payload)
            log.debug("fetched %d issues from %s", len(payload), response.url)
            url = response.links.get("next", {}).get("url")
            # the next link already carries the query string
            params = None
    finally:
        if owns_client:
            client.close()
    return issues_from_json(records, link)


def _get(client, url, params, headers, backoff, sleep) -> httpx.Response:
    for attempt in (0, 1):
        response = client.get(url, params=params, headers=headers)
        reset = _rate_limit_reset(response)
        if reset is not None:
            raise RateLimited(reset)
        if response.status_code >= 500 and attempt == 0:
            log.warning("HTTP %d from %s; retrying in %.0fs", response.status_code, url, backoff)
            sleep(backoff)
            continue
        if not response.is_success:
            raise HttpError(response.status_code, str(response.url))
        return response
    raise AssertionError("unreachable")
