"""A small PROV-N reader used to check exporter output.

Covers the subset of the W3C PROV-N grammar the exporter may emit: document
framing, prefix declarations, entity/activity/agent declarations with
optional attribute lists, and the five relations wasAssociatedWith,
wasInformedBy, wasGeneratedBy, wasDerivedFrom and used in their positional
form with ``-`` placeholders. Raises ``ProvSyntaxError`` on anything else.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

# PN_PREFIX / PN_LOCAL restricted to ASCII
PN_PREFIX = r"[A-Za-z](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?"
PLX = r"(?:%[0-9A-Fa-f]{2}|\\[=',;:\[\]\-.()~&+*?#$!/@])"
PN_LOCAL = rf"(?:[A-Za-z0-9_:]|{PLX})(?:(?:[A-Za-z0-9_.:-]|{PLX})*(?:[A-Za-z0-9_:-]|{PLX}))?"
QUALIFIED_NAME = re.compile(rf"(?:({PN_PREFIX}):)?({PN_LOCAL})")
DATETIME = re.compile(r"-?[0-9]{4,}-[0-9]{2}-[0-9]{2}T[0-9]{2}:[0-9]{2}:[0-9]{2}(?:\.[0-9]+)?(?:Z|[+-][0-9]{2}:[0-9]{2})?")

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\\n\r]|\\[tbnrf"'\\])*")
  | (?P<punct>[(),\[\]=;])
  | (?P<word>[^\s(),\[\]=;"<>]+)
    """,
    re.VERBOSE,
)

DECLARATIONS = {"entity": 0, "agent": 0, "activity": 2}
# relation -> (subject kind, object kind, number of trailing optional slots)
RELATIONS = {
    "wasAssociatedWith": ("activity", "agent", 1),
    "wasInformedBy": ("activity", "activity", 0),
    "wasGeneratedBy": ("entity", "activity", 1),
    "wasDerivedFrom": ("entity", "entity", 0),
    "used": ("activity", "entity", 1),
}


class ProvSyntaxError(ValueError):
    pass


@dataclass
class ParsedDocument:
    prefixes: dict[str, str] = field(default_factory=dict)
    declarations: list[tuple[str, str]] = field(default_factory=list)  # (kind, id)
    relations: list[tuple[str, str, str]] = field(default_factory=list)  # (kind, subject, object)

    def count(self, kind: str) -> int:
        return sum(1 for k, _ in self.declarations if k == kind) + sum(
            1 for k, _, _ in self.relations if k == kind
        )


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ProvSyntaxError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group()))
    return tokens


class _Reader:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None:
            raise ProvSyntaxError("unexpected end of input")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ProvSyntaxError(f"expected {value or kind}, got {tok[1]!r}")
        self.i += 1
        return tok[1]


def parse(text: str) -> ParsedDocument:
    r = _Reader(tokenize(text))
    doc = ParsedDocument()
    kinds: dict[str, str] = {}

    def qname(value: str) -> str:
        m = QUALIFIED_NAME.fullmatch(value)
        if m is None:
            raise ProvSyntaxError(f"invalid qualified name {value!r}")
        prefix = m.group(1)
        if prefix is None or (prefix not in doc.prefixes and prefix not in ("prov", "xsd")):
            raise ProvSyntaxError(f"undeclared prefix in {value!r}")
        return value

    def attributes() -> None:
        r.take("punct", "[")
        while True:
            qname(r.take("word"))
            r.take("punct", "=")
            kind, value = r.peek()
            if kind == "string":
                r.take()
            elif kind == "word" and re.fullmatch(r"-?[0-9]+(?:\.[0-9]+)?", value):
                r.take()
            else:
                raise ProvSyntaxError(f"bad attribute value {value!r}")
            if r.peek()[1] == ",":
                r.take()
                continue
            r.take("punct", "]")
            return

    r.take("word", "document")
    while r.peek()[1] == "prefix":
        r.take()
        prefix = r.take("word")
        if not re.fullmatch(PN_PREFIX, prefix):
            raise ProvSyntaxError(f"invalid prefix {prefix!r}")
        doc.prefixes[prefix] = r.take("iri")[1:-1]

    while r.peek()[1] != "endDocument":
        keyword = r.take("word")
        r.take("punct", "(")
        if keyword in DECLARATIONS:
            ident = qname(r.take("word"))
            for _ in range(DECLARATIONS[keyword]):
                r.take("punct", ",")
                value = r.take("word")
                if value != "-" and not DATETIME.fullmatch(value):
                    raise ProvSyntaxError(f"bad time {value!r}")
            if r.peek()[1] == ",":
                r.take()
                attributes()
            if ident in kinds:
                raise ProvSyntaxError(f"{ident} declared twice")
            kinds[ident] = keyword
            doc.declarations.append((keyword, ident))
        elif keyword in RELATIONS:
            subject_kind, object_kind, slots = RELATIONS[keyword]
            subject = qname(r.take("word"))
            r.take("punct", ",")
            obj = qname(r.take("word"))
            for _ in range(slots):
                r.take("punct", ",")
                value = r.take("word")
                if value != "-" and not DATETIME.fullmatch(value):
                    qname(value)
            for ident, expected in ((subject, subject_kind), (obj, object_kind)):
                # declaration before use
                if ident not in kinds:
                    raise ProvSyntaxError(f"{keyword} uses undeclared {ident}")
                if kinds[ident] != expected:
                    raise ProvSyntaxError(f"{keyword} expects {expected} but {ident} is {kinds[ident]}")
            doc.relations.append((keyword, subject, obj))
        else:
            raise ProvSyntaxError(f"unknown statement {keyword!r}")
        r.take("punct", ")")
    r.take("word", "endDocument")
    if r.peek()[0] is not None:
        raise ProvSyntaxError("content after endDocument")
    return doc
