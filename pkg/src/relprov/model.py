"""Domain types of the release provenance metamodel.

Developers, commits and tags come from version control; issues come from the
issue tracker. The commit -> issue and commit -> release relations are
inferred by :mod:`relprov.linking` when the graph is built.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from datetime import datetime

CommitId = str


def normalize_email(email: str) -> str:
    return email.strip().lower()


@dataclass(frozen=True, eq=False)
class Developer:
    """A person identified by their normalized e-mail address.

    Equality and hashing only look at :attr:`key`; ``name`` is informative.
    """

    name: str
    email: str

    @property
    def key(self) -> str:
        email = normalize_email(self.email)
        if email:
            return email
        # git accepts empty e-mails; fall back to the name so such authors
        # still have a stable identity
        return "name:" + self.name.strip().lower()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Developer):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return f"{self.name} <{self.email}>"


class IssueKind(str, enum.Enum):
    BUGFIX = "bugfix"
    FEATURE = "feature"


@dataclass(frozen=True)
class Issue:
    number: int
    subject: str
    created_at: datetime | None = None
    closed_at: datetime | None = None
    author: str | None = None
    labels: frozenset[str] = frozenset()
    kind: IssueKind = IssueKind.FEATURE
    placeholder: bool = False

    def __post_init__(self) -> None:
        if self.number < 1:
            raise ValueError(f"issue number must be positive, got {self.number}")
        if (
            self.created_at is not None
            and self.closed_at is not None
            and self.closed_at < self.created_at
        ):
            raise ValueError(f"issue #{self.number} closed before it was created")
        if not isinstance(self.labels, frozenset):
            object.__setattr__(self, "labels", frozenset(self.labels))

    @classmethod
    def unknown(cls, number: int) -> Issue:
        """Stand-in for an issue referenced by a commit but absent from tracker data."""
        return cls(number=number, subject="(unknown)", placeholder=True)


@dataclass(frozen=True)
class Commit:
    id: CommitId
    parents: tuple[CommitId, ...]
    author: Developer
    committer: Developer
    author_time: datetime
    commit_time: datetime
    message: str = ""
    decorations: frozenset[str] = frozenset()
    issue_refs: frozenset[int] = frozenset()
    release_tags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("commit id must be non-empty")
        if self.id in self.parents:
            raise ValueError(f"commit {self.id} lists itself as a parent")

    @property
    def subject(self) -> str:
        return self.message.split("\n", 1)[0]


def _prerelease_key(identifier: str) -> tuple[int, int | str]:
    # numeric identifiers sort before alphanumeric ones
    if identifier.isdigit():
        return (0, int(identifier))
    return (1, identifier)


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class SemVer:
    major: int
    minor: int
    patch: int
    prerelease: str | None = None

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, SemVer):
            return NotImplemented
        return compare_versions(self, other) < 0

    def __str__(self) -> str:
        core = f"{self.major}.{self.minor}.{self.patch}"
        return f"{core}-{self.prerelease}" if self.prerelease is not None else core


def compare_versions(a: SemVer, b: SemVer) -> int:
    """Return -1, 0 or 1 as ``a`` precedes, equals or follows ``b``.

    Numeric triples compare first; a pre-release precedes its final release;
    two pre-releases compare identifier by identifier. Identifiers that tie
    numerically but differ textually (``01`` vs ``1``) fall back to a plain
    string comparison so the order stays antisymmetric.
    """
    c = _cmp((a.major, a.minor, a.patch), (b.major, b.minor, b.patch))
    if c:
        return c
    if a.prerelease == b.prerelease:
        return 0
    if a.prerelease is None:
        return 1
    if b.prerelease is None:
        return -1
    left = [_prerelease_key(p) for p in a.prerelease.split(".")]
    right = [_prerelease_key(p) for p in b.prerelease.split(".")]
    for x, y in zip(left, right):
        if x[0] != y[0]:
            return _cmp(x[0], y[0])
        c = _cmp(x[1], y[1])
        if c:
            return c
    c = _cmp(len(left), len(right))
    if c:
        return c
    return _cmp(a.prerelease, b.prerelease)


@dataclass(frozen=True)
class ReleaseTag:
    name: str
    head: CommitId
    version: SemVer
    time: datetime
    annotated: bool = field(default=False, compare=False)
