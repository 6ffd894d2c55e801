"""The indexed, read-only project graph ``p = (D, C, I, T)``."""

from __future__ import annotations

import logging
from dataclasses import replace
from datetime import datetime
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import CyclicHistory, DanglingParent, DuplicateCommit, DuplicateIssue, NotAReleaseTag
from .gitlog import RawCommitRecord, parse_decorations, parse_timestamp
from .linking import DEFAULT_CONFIG, LinkConfig, classify_issue, extract_issue_refs, is_release_tag, parse_semver
from .model import Commit, CommitId, Developer, Issue, ReleaseTag, SemVer

log = logging.getLogger(__name__)


class RepoGraph:
    """Commits, developers, issues and release tags of one project.

    Instances are built by :func:`build_graph` and never change afterwards.
    The only mutable state is the history cache, which is filled lazily with
    idempotent writes and is therefore safe to share between threads.
    """

    def __init__(
        self,
        commits: dict[CommitId, Commit],
        developers: dict[str, Developer],
        issues: dict[int, Issue],
        releases: dict[str, ReleaseTag],
        config: LinkConfig,
    ):
        self._commits = MappingProxyType(commits)
        self._developers = MappingProxyType(developers)
        self._issues = MappingProxyType(issues)
        self._releases = MappingProxyType(releases)
        self.config = config
        children: dict[CommitId, set[CommitId]] = {cid: set() for cid in commits}
        for commit in commits.values():
            for parent in commit.parents:
                children[parent].add(commit.id)
        self._children = MappingProxyType({k: frozenset(v) for k, v in children.items()})
        self._history_cache: dict[CommitId, frozenset[CommitId]] = {}

    @property
    def commits(self) -> Mapping[CommitId, Commit]:
        return self._commits

    @property
    def developers(self) -> Mapping[str, Developer]:
        """Developers keyed by normalized e-mail."""
        return self._developers

    @property
    def issues(self) -> Mapping[int, Issue]:
        return self._issues

    @property
    def releases(self) -> Mapping[str, ReleaseTag]:
        return self._releases

    def children(self, commit_id: CommitId) -> frozenset[CommitId]:
        return self._children[commit_id]

    def linked_issues(self) -> frozenset[int]:
        """Issue numbers referenced by at least one commit."""
        linked: set[int] = set()
        for commit in self._commits.values():
            linked |= commit.issue_refs
        return frozenset(linked)

    def __repr__(self) -> str:
        return (
            f"<RepoGraph commits={len(self._commits)} developers={len(self._developers)} "
            f"issues={len(self._issues)} releases={len(self._releases)}>"
        )


def _check_acyclic(commits: Mapping[CommitId, Commit]) -> None:
    # Kahn's algorithm over the parent relation
    pending = {cid: len(c.parents) for cid, c in commits.items()}
    children: dict[CommitId, list[CommitId]] = {cid: [] for cid in commits}
    for c in commits.values():
        for p in c.parents:
            children[p].append(c.id)
    ready = [cid for cid, n in pending.items() if n == 0]
    seen = 0
    while ready:
        cid = ready.pop()
        seen += 1
        for child in children[cid]:
            pending[child] -= 1
            if pending[child] == 0:
                ready.append(child)
    if seen != len(commits):
        stuck = min(cid for cid, n in pending.items() if n > 0)
        raise CyclicHistory(stuck)


def _release_version(name: str, config: LinkConfig) -> SemVer | None:
    if not is_release_tag(name, config):
        return None
    try:
        return parse_semver(name, config)
    except NotAReleaseTag:
        log.warning("tag %s matches the release pattern but has no x.y.z version; skipped", name)
        return None


def build_graph(
    raw_commits: Iterable[RawCommitRecord],
    issues: Iterable[Issue] = (),
    config: LinkConfig = DEFAULT_CONFIG,
    tag_times: Mapping[str, datetime] | None = None,
) -> RepoGraph:
    """Validate and index raw records into a :class:`RepoGraph`.

    Issue references and release tags are resolved here with ``config``.
    ``tag_times`` supplies tagger dates of annotated tags; other releases are
    dated by their head commit.
    """
    tag_times = tag_times or {}

    # D holds commit authors; committers are kept on the commit only
    developers: dict[str, Developer] = {}
    committers: dict[str, Developer] = {}
    tracker: dict[int, Issue] = {}
    for issue in issues:
        if issue.number in tracker:
            raise DuplicateIssue(issue.number)
        tracker[issue.number] = issue

    commits: dict[CommitId, Commit] = {}
    release_heads: dict[str, tuple[CommitId, datetime]] = {}
    versions: dict[str, SemVer | None] = {}
    for rec in raw_commits:
        if rec.id in commits:
            raise DuplicateCommit(rec.id)
        if rec.id in rec.parent_ids:
            raise CyclicHistory(rec.id)
        # first-seen display name wins
        author = Developer(rec.author_name, rec.author_email)
        author = developers.setdefault(author.key, author)
        committer = Developer(rec.committer_name, rec.committer_email)
        committer = developers.get(committer.key) or committers.setdefault(committer.key, committer)
        commit_time = parse_timestamp(rec.commit_time)
        decorations = parse_decorations(rec.decorations)
        for name in decorations - versions.keys():
            versions[name] = _release_version(name, config)
        releases = frozenset(t for t in decorations if versions[t] is not None)
        for name in releases:
            release_heads.setdefault(name, (rec.id, commit_time))
        commits[rec.id] = Commit(
            id=rec.id,
            parents=tuple(rec.parent_ids),
            author=author,
            committer=committer,
            author_time=parse_timestamp(rec.author_time),
            commit_time=commit_time,
            message=rec.message,
            decorations=decorations,
            issue_refs=extract_issue_refs(rec.message, config),
            release_tags=releases,
        )

    for c in commits.values():
        for p in c.parents:
            if p not in commits:
                raise DanglingParent(c.id, p)
    _check_acyclic(commits)

    all_issues: dict[int, Issue] = {}
    for number, issue in tracker.items():
        kind = classify_issue(issue.labels, config)
        all_issues[number] = issue if issue.kind == kind else replace(issue, kind=kind)
    for c in commits.values():
        for number in c.issue_refs:
            if number not in all_issues:
                all_issues[number] = Issue.unknown(number)

    releases: dict[str, ReleaseTag] = {}
    for name, (head, commit_time) in release_heads.items():
        annotated = name in tag_times
        releases[name] = ReleaseTag(
            name=name,
            head=head,
            version=versions[name],
            time=tag_times[name] if annotated else commit_time,
            annotated=annotated,
        )

    return RepoGraph(
        commits=commits,
        developers=developers,
        issues=dict(sorted(all_issues.items())),
        releases=releases,
        config=config,
    )
