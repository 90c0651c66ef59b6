"""Evaluation Traces: Codes D, Accessed Locations L and the ψ Swap Log"""

import json
import os
from contextlib import contextmanager
from typing import List


class Trace:
    """
    Per-party code lists and accessed-location lists

    `codes` holds every code in evaluation order. `spine` is the derivation
    view used for code congruence: the bodies of private-conditioned branches
    are hidden there, only the guard codes and the branch rule's own code
    remain.
    """

    def __init__(self, parties):
        self.parties = parties
        self.codes: List[List[str]] = [[] for _ in range(parties)]
        self.spine: List[List[str]] = [[] for _ in range(parties)]
        self.locs: List[List[tuple]] = [[] for _ in range(parties)]
        self.accs: List[List[int]] = [[] for _ in range(parties)]
        self.hidden = 0

    def emit(self, code, party=None):
        for p in self._targets(party):
            self.codes[p].append(code)
            if not self.hidden:
                self.spine[p].append(code)

    def touch(self, block, offset, party=None):
        for p in self._targets(party):
            self.locs[p].append((block, offset))

    def record_acc(self, acc):
        for p in range(self.parties):
            self.accs[p].append(acc)

    def _targets(self, party):
        return range(self.parties) if party is None else (party,)

    @contextmanager
    def hidden_region(self):
        self.hidden += 1
        try:
            yield
        finally:
            self.hidden -= 1

    def __len__(self):
        return len(self.codes[0]) if self.parties else 0

    def write(self, directory):
        """trace.d (`p<k> <code>`) and trace.l (`p<k> <block> <offset>`)."""
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "trace.d"), "w", encoding="utf-8") as f:
            for p, codes in enumerate(self.codes):
                for code in codes:
                    f.write(f"p{p + 1} {code}\n")
        with open(os.path.join(directory, "trace.l"), "w", encoding="utf-8") as f:
            for p, locs in enumerate(self.locs):
                for block, offset in locs:
                    f.write(f"p{p + 1} {block} {offset}\n")


class PsiMap:
    """Location swaps performed by multi-location pfree, in order."""

    def __init__(self):
        self.swaps: List[List[int]] = []

    def record(self, freed_block, target_block):
        self.swaps.append([freed_block, target_block])

    def logical(self, block):
        """Vanilla-side block id of a physical SMC² block: s1(s2(...sk(block)))."""
        for a, b in reversed(self.swaps):
            if block == a:
                block = b
            elif block == b:
                block = a
        return block

    def __len__(self):
        return len(self.swaps)

    def __iter__(self):
        return iter(self.swaps)

    def write(self, directory):
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, "psi.json"), "w", encoding="utf-8") as f:
            json.dump(self.swaps, f)
