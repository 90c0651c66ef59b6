"""Conditional Code Block Tracking: DynExtract, Variable Snapshots and the Δ Map"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from lang.labels import ModifiedNames
from lang.types import ConstArrPtr, Ptr, element_type
from memory.codec import decode_all, decode_ptr, decode_val, encode_ptr, encode_val
from memory.store import perm_list
from memory.values import Location, PointerData
from mpc.protocols import SharedPointer

logger = logging.getLogger(__name__)


# DynExtract

def dyn_extract(then, orelse, env) -> Tuple[List[str], int]:
    """
    Variables modified by the two branches of a private if

    Args:
        then, orelse: branch statements (orelse may be None)
        env: environment at the if statement

    Returns:
        (x_mod in first-occurrence order, j) where j = 1 when a branch writes
        through a pointer or at a public array index
    """
    extractor = ModifiedNames(env)
    extractor.scoped(then)
    if orelse is not None:
        extractor.scoped(orelse)
    return extractor.x_mod, extractor.j


# Storage of a tracked variable

@dataclass(frozen=True)
class Slot:
    """Block holding a variable's value: `val` scalar, `ptr` pointer data, `arr` array data."""

    block: int
    kind: str
    ty: object


def slot_of(env, memory, name) -> Slot:
    loc, ty = env.lookup(name)
    if isinstance(ty, ConstArrPtr):
        data = memory.read_ptr(loc).location.block
        return Slot(data, "arr", element_type(ty))
    if isinstance(ty, Ptr):
        return Slot(loc.block, "ptr", ty)
    return Slot(loc.block, "val", ty)


def location_kind(memory, loc, ty):
    """Kind of a Δ entry for a write of type ty at loc."""
    if isinstance(ty, Ptr) and isinstance(memory.block(loc.block).ty, (Ptr, ConstArrPtr)):
        return "ptr"
    return "val"


def snapshot(memories, loc, kind, ty):
    """Per-party raw content: τ(ty) bytes for `val`, (bytes, count) of the whole block otherwise."""
    if kind == "val":
        return [m.read_bytes(loc, m.sizes.tau(ty)) for m in memories]
    return [(bytes(m.block(loc.block).data), m.block(loc.block).count) for m in memories]


def restore(memories, loc, kind, snap):
    if kind == "val":
        for m, raw in zip(memories, snap):
            m.write_bytes(loc, raw)
        return
    for m, (raw, count) in zip(memories, snap):
        blk = m.block(loc.block)
        if len(blk.perms) != len(raw):
            label, perm = blk.perms[0]
            blk.perms = perm_list(label, len(raw), perm)
        blk.data = bytearray(raw)
        blk.count = count


def shared_value(snap, kind, ty, sizes):
    """Snapshot as a value mpc_resolve accepts: share tuple, list of share tuples, SharedPointer."""
    if kind == "val":
        return tuple(decode_val(ty, raw, sizes) for raw in snap)
    if kind == "arr":
        per_party = [decode_all(ty, raw, sizes) for raw, _ in snap]
        return [tuple(elements) for elements in zip(*per_party)]
    pds = [decode_ptr(ty, count, raw, sizes) for raw, count in snap]
    return SharedPointer(pds[0].locs, [tuple(tags) for tags in zip(*(pd.tags for pd in pds))], pds[0].indirection)


def encode_shared(value, kind, ty, sizes, parties):
    """Inverse of shared_value."""
    if kind == "val":
        return [encode_val(ty, value[k], sizes) for k in range(parties)]
    if kind == "arr":
        return [(b"".join(encode_val(ty, element[k], sizes) for element in value), len(value))
                for k in range(parties)]
    snap = []
    for k in range(parties):
        pd = PointerData(len(value.locs), tuple(value.locs), tuple(tag[k] for tag in value.tags), value.indirection)
        snap.append((encode_ptr(ty, pd, sizes), pd.alpha))
    return snap


def copy_block(memories, source, target):
    for m in memories:
        src, dst = m.block(source), m.block(target)
        dst.data = bytearray(src.data)
        dst.count = src.count
        dst.perms = list(src.perms)


# Location tracking

@dataclass
class DeltaEntry:
    """Original and then-branch content of a tracked location; `tag` is 1 once `then` is set."""

    loc: Location
    kind: str
    ty: object
    orig: list
    then: Optional[list] = None
    tag: int = 0


class DeltaStack:
    """One map per active location-tracking private if, innermost last."""

    def __init__(self):
        self.levels: List[Dict[tuple, DeltaEntry]] = []

    def push(self):
        self.levels.append({})
        return self.levels[-1]

    def pop(self):
        return self.levels.pop()

    def __len__(self):
        return len(self.levels)

    def track(self, memories, loc, kind, ty):
        """DynamicUpdate: record the current content in every level that lacks it."""
        for level in self.levels:
            key = (Location(*loc), kind)
            if key not in level:
                level[key] = DeltaEntry(Location(*loc), kind, ty, snapshot(memories, loc, kind, ty))
                logger.debug("tracking %s %s at level %d", kind, loc, self.levels.index(level) + 1)


def dyn_restore(level, memories):
    """Keep the then-branch content of every entry and put the originals back."""
    entries = list(level.values())
    for entry in entries:
        entry.then = snapshot(memories, entry.loc, entry.kind, entry.ty)
        entry.tag = 1
    for entry in reversed(entries):
        restore(memories, entry.loc, entry.kind, entry.orig)


def dyn_resolve(level, memories, suite, cond):
    """Obliviously select then or else content of every tracked location."""
    sizes = memories[0].sizes
    entries = list(level.values())
    pairs = []
    for entry in entries:
        then = entry.then if entry.tag else entry.orig
        orelse = snapshot(memories, entry.loc, entry.kind, entry.ty)
        pairs.append((shared_value(then, entry.kind, entry.ty, sizes),
                      shared_value(orelse, entry.kind, entry.ty, sizes)))
    for entry, (then, orelse) in zip(entries, pairs):
        resolved = suite.mpc_resolve(cond, then, orelse)
        restore(memories, entry.loc, entry.kind, encode_shared(resolved, entry.kind, entry.ty, sizes, len(memories)))
