"""Protocol Invocation and Round Counters"""

from collections import Counter
from dataclasses import dataclass, field

# Kinds reported by the round report, in display order
KINDS = ("mult", "div", "cmp", "cast", "ar", "aw", "dv", "wdp", "free", "resolve", "open")


@dataclass
class RoundCounter:
    """
    Counts top-level protocol invocations per kind and total share-exchange rounds

    Rounds spent by protocols a top-level protocol calls internally (e.g. the
    multiplication inside a resolve) are added to `rounds` but not to `kinds`.
    """

    kinds: Counter = field(default_factory=Counter)
    rounds: int = 0

    def invoke(self, kind):
        self.kinds[kind] += 1

    def spend(self, rounds=1):
        self.rounds += rounds

    def snapshot(self):
        counts = {k: self.kinds.get(k, 0) for k in KINDS}
        counts.update({k: v for k, v in self.kinds.items() if k not in counts})
        return {"kinds": counts, "rounds": self.rounds}

    def reset(self):
        self.kinds.clear()
        self.rounds = 0
