"""Set algebra over commit histories and release tags.

Notation used in the docstrings below, for a commit ``c`` and release ``t``:

* ``H(c)``  -- ``c`` plus every commit reachable through parent edges
* ``CH(t)`` -- ``H(head of t)``
* ``IH(t)`` -- issues referenced by commits in ``CH(t)``
* ``TH(t)`` -- releases whose ``CH`` is a strict subset of ``CH(t)``
* ``CR(t)`` -- ``CH(t)`` minus the ``CH`` of every release in ``TH(t)``
* ``IR(t)`` -- issues referenced by commits in ``CR(t)``

Every function takes the tag either as a :class:`ReleaseTag` or by name.
"""

from __future__ import annotations

from typing import Iterable, Union

from .errors import UnknownCommit, UnknownTag
from .graph import RepoGraph
from .model import CommitId, ReleaseTag

TagRef = Union[ReleaseTag, str]


def resolve_tag(graph: RepoGraph, tag: TagRef) -> ReleaseTag:
    name = tag.name if isinstance(tag, ReleaseTag) else tag
    try:
        return graph.releases[name]
    except KeyError:
        raise UnknownTag(name) from None


def history(graph: RepoGraph, commit_id: CommitId) -> frozenset[CommitId]:
    """``H(c)``: the commit and all of its ancestors."""
    cache = graph._history_cache
    cached = cache.get(commit_id)
    if cached is not None:
        return cached
    commits = graph.commits
    if commit_id not in commits:
        raise UnknownCommit(commit_id)

    seen = {commit_id}
    stack = [commit_id]
    while stack:
        cid = stack.pop()
        for parent in commits[cid].parents:
            if parent in seen:
                continue
            known = cache.get(parent)
            if known is not None:
                seen |= known
            else:
                seen.add(parent)
                stack.append(parent)
    result = frozenset(seen)
    cache[commit_id] = result
    return result


def _issues_of(graph: RepoGraph, commit_ids: Iterable[CommitId]) -> frozenset[int]:
    commits = graph.commits
    issues: set[int] = set()
    for cid in commit_ids:
        issues |= commits[cid].issue_refs
    return frozenset(issues)


def commit_history(graph: RepoGraph, tag: TagRef) -> frozenset[CommitId]:
    return history(graph, resolve_tag(graph, tag).head)


def issue_history(graph: RepoGraph, tag: TagRef) -> frozenset[int]:
    return _issues_of(graph, commit_history(graph, tag))


def tag_history(graph: RepoGraph, tag: TagRef) -> frozenset[str]:
    """``TH(t)``.

    Histories are closed under ancestry, so ``CH(k) ⊆ CH(t)`` exactly when the
    head of ``k`` lies in ``CH(t)``. In a DAG two heads that reach each other
    are the same commit, hence the subset is strict iff the heads differ.
    """
    t = resolve_tag(graph, tag)
    ch = history(graph, t.head)
    return frozenset(
        k.name for k in graph.releases.values() if k.head != t.head and k.head in ch
    )


def commits_released(graph: RepoGraph, tag: TagRef) -> frozenset[CommitId]:
    """``CR(t)``: commits first delivered by ``t``."""
    t = resolve_tag(graph, tag)
    released = set(history(graph, t.head))
    for name in base_releases(graph, t):
        # the union over TH(t) equals the union over its maximal elements
        released -= history(graph, graph.releases[name].head)
    return frozenset(released)


def issues_released(graph: RepoGraph, tag: TagRef) -> frozenset[int]:
    return _issues_of(graph, commits_released(graph, tag))


def diff_commits(graph: RepoGraph, a: TagRef, b: TagRef) -> frozenset[CommitId]:
    return commit_history(graph, a) - commit_history(graph, b)


def diff_issues(graph: RepoGraph, a: TagRef, b: TagRef) -> frozenset[int]:
    return issue_history(graph, a) - issue_history(graph, b)


def reworked_issues(graph: RepoGraph, a: TagRef, b: TagRef) -> frozenset[int]:
    """Issues released exclusively by both ``a`` and ``b``."""
    return issues_released(graph, a) & issues_released(graph, b)


def base_releases(graph: RepoGraph, tag: TagRef) -> frozenset[str]:
    """Maximal members of ``TH(t)`` under strict inclusion of their histories."""
    below = tag_history(graph, tag)
    heads = {graph.releases[name].head for name in below}
    dominated: set[CommitId] = set()
    for head in heads:
        if head in dominated:
            continue
        for other in heads:
            if other != head and other in history(graph, head):
                dominated.add(other)
    return frozenset(name for name in below if graph.releases[name].head not in dominated)

