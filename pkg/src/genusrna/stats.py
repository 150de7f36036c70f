"""Loop statistics over sampled structures."""
from collections import Counter

from .energy import LoopClass, loop_sizes

CLASS_ORDER = (LoopClass.ROOT, LoopClass.HAIRPIN, LoopClass.INTERIOR, LoopClass.MULTI,
               LoopClass.PSEUDOKNOT)


class LoopHistogram:
    """Per loop class, how many loops of each size (dual-vertex degree) were seen."""

    def __init__(self):
        self.counts = {c: Counter() for c in CLASS_ORDER}

    def add(self, matching):
        for cls, size in loop_sizes(matching):
            self.counts[cls][size] += 1

    def update(self, other):
        for c in CLASS_ORDER:
            self.counts[c].update(other.counts[c])

    def total(self, cls):
        return sum(self.counts[cls].values())

    def rows(self):
        """``(class, size, count, frequency)`` with frequency relative to the class total."""
        for c in CLASS_ORDER:
            total = self.total(c)
            for size in sorted(self.counts[c]):
                n = self.counts[c][size]
                yield c.value, size, n, n / total

    def to_tsv(self):
        lines = ["class\tsize\tcount\tfrequency"]
        lines += [f"{c}\t{s}\t{n}\t{f:.6f}" for c, s, n, f in self.rows()]
        return "\n".join(lines) + "\n"
