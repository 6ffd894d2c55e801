"""Textual conventions that tie commits to issues and tags to releases."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import ConfigError, NotAReleaseTag
from .model import IssueKind, SemVer, compare_versions

__all__ = [
    "DEFAULT_BUG_LABEL_PATTERN",
    "DEFAULT_ISSUE_REF_PATTERN",
    "DEFAULT_RELEASE_TAG_PATTERN",
    "LinkConfig",
    "classify_issue",
    "compare_versions",
    "extract_issue_refs",
    "is_release_tag",
    "parse_semver",
]

DEFAULT_ISSUE_REF_PATTERN = r"^.*#[0-9]+.*"
DEFAULT_BUG_LABEL_PATTERN = r"^bug.*$"
DEFAULT_RELEASE_TAG_PATTERN = r"^v?[0-9]+\.[0-9]+\.[0-9]+(-.+)?$"

_ISSUE_NUMBER = re.compile(r"#([0-9]+)")
_SEMVER = re.compile(r"v?([0-9]+)\.([0-9]+)\.([0-9]+)(?:-(.+))?", re.DOTALL)
_EMBEDDED_SEMVER = re.compile(r"([0-9]+)\.([0-9]+)\.([0-9]+)(?:-(.+))?\Z", re.DOTALL)


@dataclass(frozen=True)
class LinkConfig:
    issue_ref_pattern: str = DEFAULT_ISSUE_REF_PATTERN
    bug_label_pattern: str = DEFAULT_BUG_LABEL_PATTERN
    release_tag_pattern: str = DEFAULT_RELEASE_TAG_PATTERN

    def __post_init__(self) -> None:
        for name in ("issue_ref_pattern", "bug_label_pattern", "release_tag_pattern"):
            try:
                re.compile(getattr(self, name))
            except re.error as exc:
                raise ConfigError(f"link.{name} does not compile: {exc}") from exc

    # the commit message is searched line by line, so the presence pattern
    # is compiled with MULTILINE
    @cached_property
    def issue_ref_re(self) -> re.Pattern[str]:
        return re.compile(self.issue_ref_pattern, re.MULTILINE)

    @cached_property
    def bug_label_re(self) -> re.Pattern[str]:
        return re.compile(self.bug_label_pattern)

    @cached_property
    def release_tag_re(self) -> re.Pattern[str]:
        return re.compile(self.release_tag_pattern)


DEFAULT_CONFIG = LinkConfig()


def extract_issue_refs(message: str, config: LinkConfig = DEFAULT_CONFIG) -> frozenset[int]:
    """Issue numbers referenced by a commit message.

    The configured pattern only decides whether the message references issues
    at all; the numbers are every ``#<digits>`` run in the message. ``#0`` is
    not an issue number and is skipped.

    >>> sorted(extract_issue_refs("Fix #12 and #7; see #12"))
    [7, 12]
    """
    if not config.issue_ref_re.search(message):
        return frozenset()
    return frozenset(n for n in map(int, _ISSUE_NUMBER.findall(message)) if n > 0)


def classify_issue(labels: Iterable[str], config: LinkConfig = DEFAULT_CONFIG) -> IssueKind:
    pattern = config.bug_label_re
    if any(pattern.search(label) for label in labels):
        return IssueKind.BUGFIX
    return IssueKind.FEATURE


def is_release_tag(name: str, config: LinkConfig = DEFAULT_CONFIG) -> bool:
    return config.release_tag_re.fullmatch(name) is not None


def parse_semver(name: str, config: LinkConfig = DEFAULT_CONFIG) -> SemVer:
    """Parse a release tag name such as ``v1.1.0-beta`` into a :class:`SemVer`.

    Custom release patterns may add a prefix (``release-1.2.3``); the version
    is then read from the trailing ``major.minor.patch[-pre]`` part. Names
    without such a core raise :class:`NotAReleaseTag`.
    """
    if not is_release_tag(name, config):
        raise NotAReleaseTag(name)
    m = _SEMVER.fullmatch(name) or _EMBEDDED_SEMVER.search(name)
    if m is None:
        raise NotAReleaseTag(name)
    major, minor, patch, pre = m.groups()
    return SemVer(int(major), int(minor), int(patch), pre)
