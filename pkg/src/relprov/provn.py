"""PROV-N and Graphviz DOT export of the release provenance graph.

Mapping: developers are agents, commits are activities, issues and releases
are entities. A commit is associated with its author and informed by its
parents; an issue is generated by the commits that address it; a release is
derived from its base releases and from the issues it delivers, and is
generated directly by the commits it delivers that address no issue.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from datetime import datetime

from . import algebra
from .errors import InvalidQualifiedName
from .graph import RepoGraph
from .model import Commit, Developer, Issue, ReleaseTag

DEFAULT_PREFIX = "rel"
DEFAULT_NAMESPACE = "https://relprov.invalid/ns#"

# relation -> (subject kind, object kind)
RELATION_KINDS = {
    "wasAssociatedWith": ("activity", "agent"),
    "wasInformedBy": ("activity", "activity"),
    "wasGeneratedBy": ("entity", "activity"),
    "wasDerivedFrom": ("entity", "entity"),
    "used": ("activity", "entity"),
}
# relations whose PROV-N form carries a trailing optional time/agent slot
_MARKER_SLOTS = {"wasAssociatedWith": 1, "wasGeneratedBy": 1, "used": 1}

_QNAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.-]*:[A-Za-z0-9_][A-Za-z0-9_-]*")
_UNSAFE = re.compile(r"[^A-Za-z0-9_-]")


@dataclass(frozen=True)
class Declaration:
    kind: str  # entity | activity | agent
    id: str
    role: str  # commit | issue | release | developer
    start: datetime | None = None
    end: datetime | None = None
    attributes: tuple[tuple[str, str], ...] = ()
    label: str = ""


@dataclass(frozen=True, order=True)
class Relation:
    subject: str
    object: str
    kind: str


@dataclass
class ProvDocument:
    namespaces: dict[str, str] = field(default_factory=lambda: {DEFAULT_PREFIX: DEFAULT_NAMESPACE})
    declarations: list[Declaration] = field(default_factory=list)
    relations: list[Relation] = field(default_factory=list)

    def count(self, kind: str) -> int:
        return sum(1 for d in self.declarations if d.kind == kind) + sum(
            1 for r in self.relations if r.kind == kind
        )

    def declared(self) -> dict[str, Declaration]:
        return {d.id: d for d in self.declarations}


def _local(text: str) -> str:
    return _UNSAFE.sub("_", text)


def commit_qname(commit_id: str) -> str:
    return f"{DEFAULT_PREFIX}:commit_{_local(commit_id)}"


def issue_qname(number: int) -> str:
    return f"{DEFAULT_PREFIX}:issue_{number}"


def release_qname(name: str) -> str:
    return f"{DEFAULT_PREFIX}:release_{_local(name)}"


def developer_qname(dev: Developer) -> str:
    digest = hashlib.sha1(dev.key.encode("utf-8")).hexdigest()[:8]
    return f"{DEFAULT_PREFIX}:dev_{digest}"


class _Builder:
    def __init__(self) -> None:
        self.decls: dict[str, Declaration] = {}
        self.sources: dict[str, object] = {}
        self.rels: set[Relation] = set()

    def declare(self, decl: Declaration, source: object) -> None:
        previous = self.sources.get(decl.id)
        if previous is not None and previous != source:
            raise InvalidQualifiedName(
                f"{previous!r} and {source!r} both map to identifier {decl.id}"
            )
        self.sources[decl.id] = source
        self.decls[decl.id] = decl

    def relate(self, kind: str, subject: str, obj: str) -> None:
        if subject in self.decls and obj in self.decls:
            self.rels.add(Relation(subject, obj, kind))

    def document(self) -> ProvDocument:
        return ProvDocument(
            declarations=sorted(self.decls.values(), key=lambda d: d.id),
            relations=sorted(self.rels),
        )


def _declare_commit(b: _Builder, c: Commit) -> None:
    b.declare(
        Declaration("activity", commit_qname(c.id), "commit", c.commit_time, c.commit_time, label=c.id[:7]),
        ("commit", c.id),
    )


def _declare_issue(b: _Builder, issue: Issue) -> None:
    b.declare(
        Declaration(
            "entity",
            issue_qname(issue.number),
            "issue",
            attributes=(("prov:label", issue.subject), (f"{DEFAULT_PREFIX}:kind", issue.kind.value)),
            label=f"#{issue.number}",
        ),
        ("issue", issue.number),
    )


def _declare_release(b: _Builder, tag: ReleaseTag) -> None:
    b.declare(
        Declaration(
            "entity", release_qname(tag.name), "release", attributes=(("prov:label", tag.name),), label=tag.name
        ),
        ("release", tag.name),
    )


def _declare_developer(b: _Builder, dev: Developer) -> None:
    b.declare(
        Declaration("agent", developer_qname(dev), "developer", attributes=(("prov:label", dev.name),), label=dev.name),
        ("developer", dev.key),
    )


def to_prov(graph: RepoGraph, scope: str | ReleaseTag | None = None) -> ProvDocument:
    """Build the PROV document for the whole project or for one release.

    A scoped export keeps the commits and issues the release delivers
    exclusively, their authors, the release itself and its base releases.
    """
    b = _Builder()
    if scope is None:
        commits = list(graph.commits.values())
        issues = list(graph.issues.values())
        releases = list(graph.releases.values())
        delivering = releases
    else:
        tag = algebra.resolve_tag(graph, scope)
        released = algebra.commits_released(graph, tag)
        commits = [graph.commits[c] for c in released]
        issues = [graph.issues[n] for n in algebra.issues_released(graph, tag)]
        releases = [tag] + [graph.releases[n] for n in algebra.base_releases(graph, tag)]
        delivering = [tag]

    for c in commits:
        _declare_commit(b, c)
        _declare_developer(b, graph.developers[c.author.key])
    for issue in issues:
        _declare_issue(b, issue)
    for tag in releases:
        _declare_release(b, tag)

    for c in commits:
        b.relate("wasAssociatedWith", commit_qname(c.id), developer_qname(c.author))
        for parent in c.parents:
            b.relate("wasInformedBy", commit_qname(c.id), commit_qname(parent))
        for number in c.issue_refs:
            b.relate("wasGeneratedBy", issue_qname(number), commit_qname(c.id))
    for tag in delivering:
        rid = release_qname(tag.name)
        for base in algebra.base_releases(graph, tag):
            b.relate("wasDerivedFrom", rid, release_qname(base))
        for cid in algebra.commits_released(graph, tag):
            if not graph.commits[cid].issue_refs:
                b.relate("wasGeneratedBy", rid, commit_qname(cid))
        for number in algebra.issues_released(graph, tag):
            b.relate("wasDerivedFrom", rid, issue_qname(number))
    return b.document()


def _string_literal(value: str) -> str:
    escaped = (
        value.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )
    return f'"{escaped}"'


def _check_qname(name: str, prefixes) -> str:
    if not _QNAME.fullmatch(name) or name.split(":", 1)[0] not in prefixes:
        raise InvalidQualifiedName(name)
    return name


def serialize_provn(doc: ProvDocument) -> str:
    prefixes = set(doc.namespaces) | {"prov", "xsd"}
    lines = ["document"]
    for prefix, uri in sorted(doc.namespaces.items()):
        lines.append(f"  prefix {prefix} <{uri}>")
    if doc.declarations or doc.relations:
        lines.append("")

    declared: dict[str, str] = {}
    for d in sorted(doc.declarations, key=lambda d: d.id):
        args = [_check_qname(d.id, prefixes)]
        if d.id in declared:
            raise InvalidQualifiedName(f"{d.id} is declared twice")
        declared[d.id] = d.kind
        if d.kind == "activity":
            args.append(d.start.isoformat() if d.start else "-")
            args.append(d.end.isoformat() if d.end else "-")
        if d.attributes:
            attrs = ", ".join(f"{_check_qname(k, prefixes)}={_string_literal(v)}" for k, v in d.attributes)
            args.append(f"[{attrs}]")
        lines.append(f"  {d.kind}({', '.join(args)})")

    for r in sorted(doc.relations):
        for ident, expected in zip((r.subject, r.object), RELATION_KINDS[r.kind]):
            if ident not in declared:
                raise InvalidQualifiedName(f"{ident} is used by {r.kind} but never declared")
            if declared[ident] != expected:
                raise InvalidQualifiedName(f"{r.kind} needs an {expected}, but {ident} is an {declared[ident]}")
        args = [_check_qname(r.subject, prefixes), _check_qname(r.object, prefixes)]
        args.extend(["-"] * _MARKER_SLOTS.get(r.kind, 0))
        lines.append(f"  {r.kind}({', '.join(args)})")

    lines.append("endDocument")
    return "\n".join(lines) + "\n"


_DOT_SHAPES = {"commit": "box", "issue": "diamond", "release": "house", "developer": "ellipse"}


def _dot_string(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def to_dot(graph: RepoGraph, scope: str | ReleaseTag | None = None) -> str:
    doc = to_prov(graph, scope)
    lines = ["digraph release {"]
    for d in doc.declarations:
        style = ', style="rounded"' if d.role == "commit" else ""
        lines.append(f"  {_dot_string(d.id)} [shape={_DOT_SHAPES[d.role]}{style}, label={_dot_string(d.label or d.id)}];")
    for r in doc.relations:
        lines.append(f"  {_dot_string(r.subject)} -> {_dot_string(r.object)} [label={_dot_string(r.kind)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
