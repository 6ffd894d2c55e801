"""Project overview, per-release report and changelog."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from . import algebra
from .errors import EmptyRange, InvalidRange, NoReleases
from .graph import RepoGraph
from .model import Issue, IssueKind, ReleaseTag


def _release_order_key(tag: ReleaseTag):
    # version precedence, then tag date, then name, so ties are stable
    return (tag.version, tag.time, tag.name)


def releases_by_precedence(graph: RepoGraph) -> list[ReleaseTag]:
    """All releases, oldest version first."""
    return sorted(graph.releases.values(), key=_release_order_key)


@dataclass(frozen=True)
class ProjectOverview:
    last_release: str | None
    release_count: int
    commit_count: int
    developer_count: int
    linked_issue_count: int
    developers: list[str] = field(default_factory=list)

    def render(self) -> str:
        lines = ["Project Overview"]
        if self.last_release is None:
            lines.append(f"- no release tags found ({self.release_count} releases)")
        else:
            lines.append(f"- {self.last_release} is the last of {self.release_count} releases")
        lines.append(f"- {self.commit_count} commits made by {self.developer_count} developers")
        lines.append(f"- {self.linked_issue_count} issues linked")
        lines.append("")
        lines.append("Developers")
        lines.extend(f"- {d}" for d in self.developers)
        return "\n".join(lines) + "\n"


def project_overview(graph: RepoGraph, *, strict: bool = False) -> ProjectOverview:
    """Summarize the whole project.

    Developers are listed by the time of their first authored commit. With
    ``strict=True`` a graph without releases raises :class:`NoReleases`
    instead of producing an overview with an empty ``last_release``.
    """
    releases = releases_by_precedence(graph)
    if not releases and strict:
        raise NoReleases("the repository has no tags matching the release pattern")

    first_authored: dict[str, datetime] = {}
    for commit in graph.commits.values():
        key = commit.author.key
        seen = first_authored.get(key)
        if seen is None or commit.author_time < seen:
            first_authored[key] = commit.author_time
    devs = sorted(graph.developers.values(), key=lambda d: (first_authored[d.key], d.key))

    return ProjectOverview(
        last_release=releases[-1].name if releases else None,
        release_count=len(releases),
        commit_count=len(graph.commits),
        developer_count=len(graph.developers),
        linked_issue_count=len(graph.linked_issues()),
        developers=[str(d) for d in devs],
    )


@dataclass(frozen=True)
class IssueLine:
    number: int
    subject: str
    kind: IssueKind

    @classmethod
    def of(cls, issue: Issue) -> IssueLine:
        return cls(issue.number, issue.subject, issue.kind)


@dataclass(frozen=True)
class ReleaseReport:
    tag: str
    base_releases: list[str]
    date: datetime
    commit_count: int
    authors: list[str]
    issues: list[IssueLine]

    def render(self) -> str:
        lines = [
            f"Information about release {self.tag}",
            " ".join(["Based on:", *self.base_releases]),
            f"Date: {self.date}",
            f"Commits: {self.commit_count}",
            "Authors:",
        ]
        lines.extend(f"- {a}" for a in self.authors)
        lines.append("")
        lines.append("Issues:")
        lines.extend(f"- {i.number}: {i.subject} ({i.kind.value})" for i in self.issues)
        return "\n".join(lines) + "\n"


def _issue_lines(graph: RepoGraph, numbers) -> list[IssueLine]:
    return [IssueLine.of(graph.issues[n]) for n in sorted(numbers, reverse=True)]


def release_report(graph: RepoGraph, tag_name: str) -> ReleaseReport:
    tag = algebra.resolve_tag(graph, tag_name)
    released = algebra.commits_released(graph, tag)
    bases = [graph.releases[n] for n in algebra.base_releases(graph, tag)]
    bases.sort(key=_release_order_key, reverse=True)

    commits = sorted((graph.commits[c] for c in released), key=lambda c: (c.author_time, c.id))
    authors: dict[str, str] = {}
    for c in commits:
        authors.setdefault(c.author.key, str(graph.developers[c.author.key]))

    return ReleaseReport(
        tag=tag.name,
        base_releases=[b.name for b in bases],
        date=tag.time,
        commit_count=len(released),
        authors=list(authors.values()),
        issues=_issue_lines(graph, algebra.issues_released(graph, tag)),
    )


@dataclass(frozen=True)
class ChangelogEntry:
    release: str
    date: datetime
    features: list[IssueLine]
    bugfixes: list[IssueLine]


@dataclass(frozen=True)
class Changelog:
    entries: list[ChangelogEntry]

    def render(self) -> str:
        out = ["# Changelog", ""]
        for entry in self.entries:
            out.append(f"## {entry.release} ({entry.date.isoformat()})")
            out.append("")
            if not entry.features and not entry.bugfixes:
                out.append("No linked issues.")
                out.append("")
            for title, items in (("Features", entry.features), ("Bugfixes", entry.bugfixes)):
                if not items:
                    continue
                out.append(f"### {title}")
                out.append("")
                out.extend(f"- #{i.number} {i.subject}" for i in items)
                out.append("")
        return "\n".join(out).rstrip("\n") + "\n"


def changelog(graph: RepoGraph, from_tag: str | None = None, to_tag: str | None = None) -> Changelog:
    """Releases in ``(from_tag, to_tag]`` by version precedence, newest first."""
    ordered = releases_by_precedence(graph)
    lo = algebra.resolve_tag(graph, from_tag) if from_tag is not None else None
    hi = algebra.resolve_tag(graph, to_tag) if to_tag is not None else None
    if lo is not None and hi is not None and _release_order_key(lo) > _release_order_key(hi):
        raise InvalidRange(f"--from {lo.name} is newer than --to {hi.name}")

    selected = [
        t
        for t in ordered
        if (lo is None or _release_order_key(t) > _release_order_key(lo))
        and (hi is None or _release_order_key(t) <= _release_order_key(hi))
    ]
    if not selected:
        raise EmptyRange("no releases fall in the requested range")

    entries = []
    for tag in reversed(selected):
        lines = _issue_lines(graph, algebra.issues_released(graph, tag))
        entries.append(
            ChangelogEntry(
                release=tag.name,
                date=tag.time,
                features=[i for i in lines if i.kind is IssueKind.FEATURE],
                bugfixes=[i for i in lines if i.kind is IssueKind.BUGFIX],
            )
        )
    return Changelog(entries)
