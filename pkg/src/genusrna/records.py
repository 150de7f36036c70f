"""Text and JSON records for diagrams.

Text records are one structure per line::

    12 | (1,5)(2,7)(3,9) | g=1 r=...

The trailing ``key=value`` field is optional; blank lines and lines starting
with ``#`` are skipped by :func:`read_records`.
"""
import json
from dataclasses import dataclass
from typing import Optional

from .diagram import Diagram, DiagramError


class RecordError(ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno is not None else message)


_INT_FIELDS = ("genus", "boundary", "seed", "index")
_TEXT_KEYS = {"g": "genus", "r": "boundary"}


@dataclass(frozen=True)
class DiagramRecord:
    length: int
    arcs: tuple
    genus: Optional[int] = None
    boundary: Optional[int] = None
    seed: Optional[int] = None
    index: Optional[int] = None

    @classmethod
    def from_diagram(cls, diagram, **extra):
        return cls(diagram.length, tuple(diagram.arcs), **extra)

    def to_diagram(self):
        return Diagram(self.length, self.arcs)

    def to_text(self):
        line = Diagram(self.length, self.arcs).to_text()
        notes = [f"{short}={getattr(self, name)}" for short, name in _TEXT_KEYS.items()
                 if getattr(self, name) is not None]
        return f"{line} | {' '.join(notes)}" if notes else line

    @classmethod
    def from_text(cls, line):
        parts = line.split("|")
        if len(parts) not in (2, 3):
            raise RecordError("expected '<length> | (i,j)... [| g=..]'")
        try:
            d = Diagram.from_text("|".join(parts[:2]))
        except DiagramError as exc:
            raise RecordError(str(exc)) from None
        extra = {}
        if len(parts) == 3:
            for item in parts[2].split():
                key, sep, value = item.partition("=")
                if not sep or key not in _TEXT_KEYS:
                    raise RecordError(f"bad annotation {item!r}")
                try:
                    extra[_TEXT_KEYS[key]] = int(value)
                except ValueError:
                    raise RecordError(f"bad annotation {item!r}") from None
        return cls.from_diagram(d, **extra)

    def to_json(self):
        out = {"length": self.length, "arcs": [list(a) for a in self.arcs]}
        for name in _INT_FIELDS:
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return json.dumps(out, separators=(",", ":"))

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
            d = Diagram(obj["length"], [tuple(a) for a in obj["arcs"]])
        except (ValueError, KeyError, TypeError) as exc:
            raise RecordError(f"bad JSON record: {exc}") from None
        extra = {name: int(obj[name]) for name in _INT_FIELDS if obj.get(name) is not None}
        return cls.from_diagram(d, **extra)


def read_records(lines):
    """Parse text or JSON lines (auto-detected per line), yielding ``DiagramRecord``s."""
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("{"):
                yield DiagramRecord.from_json(line)
            else:
                yield DiagramRecord.from_text(line)
        except RecordError as exc:
            raise RecordError(str(exc).split(": ", 1)[-1], lineno) from None
