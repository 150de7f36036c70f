"""Diagrams: backbone vertices ``1..length`` with non-adjacent-sharing arcs ``(i, j)``, ``i < j``.

Internally a diagram is a 0-based partner array (``-1`` for unpaired
vertices), which keeps conversion to and from the map machinery linear.
The text form is ``"<length> | (i,j)(i,j)..."`` with 1-based indices and arcs
sorted by their left endpoint.
"""
import re

import numpy as np


class DiagramError(ValueError):
    pass


_ARC = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


class Diagram:
    __slots__ = ("length", "partner", "_arcs")

    def __init__(self, length, arcs=()):
        length = int(length)
        if length < 0:
            raise DiagramError("length must be non-negative")
        partner = np.full(length, -1, dtype=np.int64)
        for i, j in arcs:
            i, j = int(i), int(j)
            if not 1 <= i < j <= length:
                raise DiagramError(f"arc ({i},{j}) outside 1..{length} or not i<j")
            if partner[i - 1] >= 0 or partner[j - 1] >= 0:
                raise DiagramError(f"vertex of arc ({i},{j}) already paired")
            partner[i - 1] = j - 1
            partner[j - 1] = i - 1
        partner.flags.writeable = False
        self.length = length
        self.partner = partner
        self._arcs = None

    @classmethod
    def from_partner(cls, partner, length=None, *, copy=True):
        """Build from a 0-based partner array without re-validating it.

        ``copy=False`` adopts an ``int64`` array the caller no longer uses.
        """
        d = cls.__new__(cls)
        p = np.array(partner, dtype=np.int64, copy=copy or None)
        p.flags.writeable = False
        d.length = len(p) if length is None else int(length)
        d.partner = p
        d._arcs = None
        return d

    @property
    def arcs(self):
        if self._arcs is None:
            p = self.partner
            left = np.flatnonzero(p > np.arange(len(p)))
            self._arcs = tuple(zip((left + 1).tolist(), (p[left] + 1).tolist()))
        return self._arcs

    @property
    def n_arcs(self):
        return int(np.count_nonzero(self.partner >= 0)) // 2

    @property
    def is_matching(self):
        return 2 * self.n_arcs == self.length

    def strip_unpaired(self):
        """The matching on the paired vertices, relabelled in backbone order."""
        paired = np.flatnonzero(self.partner >= 0)
        new_index = np.full(self.length, -1, dtype=np.int64)
        new_index[paired] = np.arange(len(paired))
        return Diagram.from_partner(new_index[self.partner[paired]])

    def insert_unpaired(self, unpaired, length):
        """Spread this matching over ``length`` vertices, leaving the 0-based positions ``unpaired`` empty."""
        if not self.is_matching:
            raise DiagramError("insert_unpaired expects a matching")
        mask = np.ones(length, dtype=bool)
        mask[np.asarray(unpaired, dtype=np.int64)] = False
        slots = np.flatnonzero(mask)
        if len(slots) != self.length:
            raise DiagramError("number of paired slots does not match the matching size")
        partner = np.full(length, -1, dtype=np.int64)
        partner[slots] = slots[self.partner]
        return Diagram.from_partner(partner)

    def crossings(self):
        """Pairs of crossing arcs (quadratic; meant for small diagrams)."""
        arcs = self.arcs
        return [(x, y) for k, x in enumerate(arcs) for y in arcs[k + 1:]
                if x[0] < y[0] < x[1] < y[1]]

    def to_text(self):
        body = "".join(f"({i},{j})" for i, j in self.arcs)
        return f"{self.length} | {body}" if body else f"{self.length} |"

    @classmethod
    def from_text(cls, text):
        head, sep, body = text.partition("|")
        if not sep:
            raise DiagramError("expected '<length> | (i,j)...'")
        try:
            length = int(head.strip())
        except ValueError:
            raise DiagramError(f"bad length {head.strip()!r}") from None
        body = body.strip()
        arcs = [(int(a), int(b)) for a, b in _ARC.findall(body)]
        if _ARC.sub("", body).strip():
            raise DiagramError(f"unparseable arc list {body!r}")
        return cls(length, arcs)

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.length == other.length and np.array_equal(self.partner, other.partner)

    def __hash__(self):
        return hash((self.length, self.partner.tobytes()))

    def __repr__(self):
        return f"Diagram({self.length}, {list(self.arcs)})"

    def __str__(self):
        return self.to_text()
