"""Exception types raised across relprov."""

from __future__ import annotations


class RelprovError(Exception):
    """Base class for every error raised by this package."""


# graph construction

class GraphError(RelprovError):
    pass


class CyclicHistory(GraphError):
    def __init__(self, commit_id: str):
        super().__init__(f"parent cycle detected through commit {commit_id}")
        self.commit_id = commit_id


class DanglingParent(GraphError):
    def __init__(self, commit_id: str, parent_id: str):
        super().__init__(f"commit {commit_id} lists unknown parent {parent_id}")
        self.commit_id = commit_id
        self.parent_id = parent_id


class DuplicateCommit(GraphError):
    def __init__(self, commit_id: str):
        super().__init__(f"duplicate commit {commit_id}")
        self.commit_id = commit_id


class DuplicateIssue(GraphError):
    def __init__(self, number: int):
        super().__init__(f"duplicate issue #{number}")
        self.number = number


# lookups

class UnknownCommit(RelprovError, LookupError):
    def __init__(self, commit_id: str):
        super().__init__(f"unknown commit {commit_id}")
        self.commit_id = commit_id


class UnknownTag(RelprovError, LookupError):
    def __init__(self, name: str):
        super().__init__(f"unknown release tag {name!r}")
        self.name = name


# ingestion

class IngestError(RelprovError):
    pass


class MalformedRecord(IngestError):
    def __init__(self, index: int, detail: str):
        super().__init__(f"malformed log record #{index}: {detail}")
        self.index = index


class BadTimestamp(IngestError):
    def __init__(self, value: str, index: int | None = None):
        where = f" in record #{index}" if index is not None else ""
        super().__init__(f"bad ISO-8601 timestamp {value!r}{where}")
        self.value = value
        self.index = index


class SchemaError(IngestError):
    def __init__(self, field: str, detail: str = "missing required field"):
        super().__init__(f"{detail}: {field}")
        self.field = field


class ParseError(IngestError):
    def __init__(self, line: int, detail: str):
        super().__init__(f"line {line}: {detail}")
        self.line = line


class HttpError(IngestError):
    def __init__(self, status: int, url: str = ""):
        super().__init__(f"HTTP {status} from {url}" if url else f"HTTP {status}")
        self.status = status
        self.url = url


class RateLimited(IngestError):
    def __init__(self, reset_time):
        super().__init__(f"GitHub API rate limit exceeded; resets at {reset_time}")
        self.reset_time = reset_time


# linking / reporting / export

class NotAReleaseTag(RelprovError, ValueError):
    def __init__(self, name: str):
        super().__init__(f"{name!r} is not a release tag")
        self.name = name


class NoReleases(RelprovError):
    pass


class EmptyRange(RelprovError):
    pass


class InvalidRange(RelprovError, ValueError):
    pass


class InvalidQualifiedName(RelprovError, ValueError):
    pass


class ConfigError(RelprovError):
    pass
