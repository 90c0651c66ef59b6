"""Runtime Values: Locations, Pointer Data, Permissions"""

import enum
from dataclasses import dataclass
from typing import NamedTuple, Tuple


class Location(NamedTuple):
    block: int
    offset: int = 0

    def __str__(self):
        return f"({self.block},{self.offset})"


# Pre-allocated block 0: default target of fresh pointers, never freeable
L_DEFAULT = Location(0, 0)
NULL = L_DEFAULT

# Temporaries live in a separate block-id space
TEMP_BASE = 1 << 40


def is_temp(block: int) -> bool:
    return block >= TEMP_BASE


class Permission(enum.Enum):
    FREEABLE = "Freeable"
    NONE = "None"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class PointerData:
    """
    (alpha, locations, tags, indirection)

    Tags are plaintext 0/1 for public pointers and one party's shares for
    private ones; exactly one logical tag is 1.
    """

    alpha: int
    locs: Tuple[Location, ...]
    tags: Tuple[int, ...]
    indirection: int = 1

    def __post_init__(self):
        if self.alpha < 1 or len(self.locs) != self.alpha or len(self.tags) != self.alpha:
            from lang.errors import MalformedPointer
            raise MalformedPointer(f"alpha={self.alpha} locs={len(self.locs)} tags={len(self.tags)}")

    @classmethod
    def single(cls, loc, indirection=1, tag=1):
        return cls(1, (Location(*loc),), (tag,), indirection)

    @property
    def location(self):
        """The only location of a single-location pointer."""
        return self.locs[0]

    def __str__(self):
        locs = ", ".join(str(l) for l in self.locs)
        return f"[{self.alpha}, [{locs}], {list(self.tags)}, {self.indirection}]"


@dataclass
class FunctionPayload:
    """Contents of a function block."""

    fundef: object
    summary: object
    closure: object = None
