"""Byte-Level Block Memory σ of One Party"""

import copy
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from lang.errors import (
    AddressBeyondMemory, DoubleFree, MalformedPointer, SizeMismatch, UseAfterFree,
)
from lang.types import Base, BaseType, ConstArrPtr, Fun, PrivacyLabel, Ptr
from memory.codec import decode_ptr, decode_val, encode_ptr, encode_val
from memory.values import L_DEFAULT, TEMP_BASE, Location, Permission, PointerData, is_temp

logger = logging.getLogger(__name__)

VOID = Base(PrivacyLabel.PUBLIC, BaseType.VOID)


@dataclass
class MemoryBlock:
    """
    One block: bytes ω, type, element count n and per-byte (label, permission)

    For data blocks `ty` is the element type; pointer blocks carry the pointer
    type with count = alpha; array-pointer blocks carry ConstArrPtr; malloc'd
    blocks carry void (or the element type for pmalloc) and function blocks a
    Fun type with the definition in `payload`.
    """

    data: bytearray
    ty: object
    count: int
    perms: List[Tuple[PrivacyLabel, Permission]]
    heap: bool = False
    payload: object = None

    @property
    def size(self):
        return len(self.data)

    @property
    def freed(self):
        return bool(self.perms) and all(p is Permission.NONE for _, p in self.perms)

    def check_live(self, start, length, block_id):
        for _, perm in self.perms[start:start + length]:
            if perm is Permission.NONE:
                raise UseAfterFree(f"block {block_id} byte {start} has been freed")


def perm_list(label, nbytes, perm=Permission.FREEABLE):
    return [(label, perm) for _ in range(nbytes)]


class Memory:
    """
    Memory of one simulated party

    Args:
        sizes: SizeModel used by every encode/decode
    """

    def __init__(self, sizes):
        self.sizes = sizes
        self.blocks: Dict[int, MemoryBlock] = {}
        self.next_id = 0
        self.next_temp = TEMP_BASE
        # l_default
        default = self.allocate(VOID, sizes.private)
        assert default == L_DEFAULT

    # Allocation

    def phi(self, temp=False) -> Location:
        """Fresh (BlockId, 0); ids are never recycled."""
        if temp:
            loc = Location(self.next_temp, 0)
            self.next_temp += 1
        else:
            loc = Location(self.next_id, 0)
            self.next_id += 1
        return loc

    def allocate(self, ty, count, data=None, label=None, heap=False, temp=False, payload=None):
        """
        Obtain a block from phi and initialize it

        Args:
            ty: element type (see MemoryBlock)
            count: number of elements
            data: initial bytes, zeros when None
            label: label of every byte (defaults to the type's label)
            heap: allocated by malloc/pmalloc

        Returns:
            Location (l, 0)
        """
        loc = self.phi(temp=temp)
        if data is None:
            nbytes = self.sizes.tau(ty) * count if not isinstance(ty, Fun) else 0
            data = bytes(nbytes)
        if label is None:
            label = PrivacyLabel.PUBLIC if isinstance(ty, (Fun, ConstArrPtr)) else ty.effective_label
        self.blocks[loc.block] = MemoryBlock(
            bytearray(data), ty, count, perm_list(label, len(data)), heap=heap, payload=payload)
        return loc

    # Lookup

    def block(self, block_id) -> MemoryBlock:
        try:
            return self.blocks[block_id]
        except KeyError:
            raise AddressBeyondMemory(f"no block {block_id}")

    def __contains__(self, block_id):
        return block_id in self.blocks

    def element_size(self, blk):
        if isinstance(blk.ty, (Ptr, ConstArrPtr)):
            return max(blk.size, 1)
        if isinstance(blk.ty, Fun):
            return 1
        return self.sizes.tau(blk.ty)

    def flat_order(self):
        """Block ids in flat address order (temporaries excluded)."""
        return sorted(b for b in self.blocks if not is_temp(b))

    # Byte access

    def normalize(self, loc) -> Location:
        """
        Move an offset past the end of its block into the following blocks

        Raises AddressBeyondMemory when the byte lies after the last block.
        """
        loc = Location(*loc)
        blk = self.block(loc.block)
        if loc.offset < blk.size or is_temp(loc.block):
            return loc
        order = self.flat_order()
        index = order.index(loc.block)
        offset = loc.offset
        while offset >= self.blocks[order[index]].size:
            offset -= self.blocks[order[index]].size
            index += 1
            if index >= len(order):
                raise AddressBeyondMemory(f"byte {loc.offset} of block {loc.block} lies beyond memory")
        return Location(order[index], offset)

    def span(self, start, nbytes):
        """[(block, offset, length)] covering nbytes raw bytes from start in flat order."""
        loc = self.normalize(start)
        if is_temp(loc.block):
            return [(loc.block, loc.offset, nbytes)]
        order = self.flat_order()
        index = order.index(loc.block)
        offset = loc.offset
        pieces = []
        remaining = nbytes
        while remaining > 0:
            if index >= len(order):
                raise AddressBeyondMemory(f"{nbytes} bytes from {start} exceed memory")
            blk = self.blocks[order[index]]
            take = min(blk.size - offset, remaining)
            if take > 0:
                pieces.append((order[index], offset, take))
                remaining -= take
            index += 1
            offset = 0
        return pieces

    def read_bytes(self, start, nbytes) -> bytes:
        return b"".join(bytes(self.blocks[b].data[o:o + n]) for b, o, n in self.span(start, nbytes))

    def write_bytes(self, start, raw):
        pos = 0
        for b, o, n in self.span(start, len(raw)):
            self.blocks[b].data[o:o + n] = raw[pos:pos + n]
            pos += n

    def read_oob(self, start, ty):
        """
        Read τ(ty) raw bytes from start across consecutive blocks as ty

        No reconstruction and no permission check; the bytes are taken as-is.
        """
        return decode_val(ty, self.read_bytes(start, self.sizes.tau(ty)), self.sizes)

    def write_oob(self, start, value, ty):
        """Write τ(ty) raw bytes from start; block metadata stays untouched."""
        self.write_bytes(start, encode_val(ty, value, self.sizes))

    def well_aligned(self, start, ty) -> bool:
        """
        Whether a τ(ty)-byte access at start lands on exactly one element of a
        block holding values of the same type size and label
        """
        try:
            loc = self.normalize(start)
        except AddressBeyondMemory:
            return False
        blk = self.blocks[loc.block]
        size = self.sizes.tau(ty)
        if loc.offset + size > blk.size:
            return False
        if isinstance(blk.ty, Base) and blk.ty.bty == BaseType.VOID:
            return True
        if isinstance(blk.ty, (Ptr, ConstArrPtr)) or isinstance(ty, (Ptr, ConstArrPtr)):
            return isinstance(blk.ty, type(ty)) and loc.offset == 0
        if isinstance(blk.ty, Fun):
            return False
        return (self.sizes.tau(blk.ty) == size
                and loc.offset % size == 0
                and blk.ty.effective_label == ty.effective_label)

    # Typed updates

    def update_val(self, loc, value, ty):
        """
        Overwrite the τ(ty) bytes at loc (inside one block) with value

        Args:
            loc: (block, byte offset)
            value: number/share, or raw bytes of length τ(ty)
            ty: type used for the encoding
        """
        loc = Location(*loc)
        blk = self.block(loc.block)
        raw = value if isinstance(value, (bytes, bytearray)) else encode_val(ty, value, self.sizes)
        if loc.offset + len(raw) > blk.size:
            raise SizeMismatch(f"{len(raw)} bytes at {loc} overrun block of {blk.size}")
        blk.check_live(loc.offset, len(raw), loc.block)
        blk.data[loc.offset:loc.offset + len(raw)] = raw

    def update_arr(self, loc, value, ty):
        """Write element i of the data block l; loc is (l, i), ty the element type."""
        block, index = loc
        size = self.sizes.tau(ty)
        self.update_val(Location(block, index * size), value, ty)

    def update_ptr(self, loc, pd: PointerData, ty):
        """Replace the pointer data held by pointer block l; alpha may change."""
        loc = Location(*loc)
        blk = self.block(loc.block)
        if not isinstance(blk.ty, (Ptr, ConstArrPtr)):
            # Pointer stored inside a malloc'd block
            self.update_val(loc, encode_ptr(ty, pd, self.sizes), ty)
            return
        blk.check_live(0, blk.size, loc.block)
        raw = encode_ptr(blk.ty, pd, self.sizes)
        label = blk.perms[0][0] if blk.perms else ty.effective_label
        blk.data = bytearray(raw)
        blk.perms = perm_list(label, len(raw))
        blk.count = pd.alpha

    def read_val(self, loc, ty):
        """Typed read of τ(ty) bytes inside one live block."""
        loc = Location(*loc)
        blk = self.block(loc.block)
        size = self.sizes.tau(ty)
        if loc.offset + size > blk.size:
            raise SizeMismatch(f"{size} bytes at {loc} overrun block of {blk.size}")
        blk.check_live(loc.offset, size, loc.block)
        return decode_val(ty, blk.data[loc.offset:loc.offset + size], self.sizes)

    def read_ptr(self, loc, ty=None) -> PointerData:
        """Pointer data held by a pointer block (or stored at loc in a malloc'd block)."""
        loc = Location(*loc)
        blk = self.block(loc.block)
        if isinstance(blk.ty, (Ptr, ConstArrPtr)):
            blk.check_live(0, blk.size, loc.block)
            return decode_ptr(blk.ty, blk.count, blk.data, self.sizes)
        if ty is None:
            raise MalformedPointer(f"block {loc.block} holds no pointer")
        size = self.sizes.pointer_size(ty.effective_label, 1)
        blk.check_live(loc.offset, size, loc.block)
        return decode_ptr(ty, 1, blk.data[loc.offset:loc.offset + size], self.sizes)

    def read_arr(self, block_id, ty):
        """All elements of a data block."""
        blk = self.block(block_id)
        size = self.sizes.tau(ty)
        return [self.read_val(Location(block_id, k * size), ty) for k in range(blk.size // size)]

    # Pointer arithmetic and dereference

    def get_location(self, loc, stride) -> Tuple[Location, bool]:
        """
        Advance (l, μ) by stride bytes, rolling into the next block at block end

        Returns:
            (new location, True when it stayed inside the original block)
        """
        loc = Location(*loc)
        target = Location(loc.block, loc.offset + stride)
        blk = self.block(loc.block)
        if target.offset < blk.size:
            return target, True
        return self.normalize(target), False

    def deref_ptr(self, ty, loc):
        """
        Read a value of type ty at (l, μ)

        Returns:
            (value, True when the access was element-aligned inside its block)
        """
        loc = Location(*loc)
        if isinstance(ty, (Ptr, ConstArrPtr)):
            blk = self.block(loc.block)
            if isinstance(blk.ty, (Ptr, ConstArrPtr)) and loc.offset == 0:
                return self.read_ptr(loc), True
        if self.well_aligned(loc, ty):
            return self.read_val(self.normalize(loc), ty), loc.offset < self.block(loc.block).size
        logger.warning("misaligned read of %s at %s", ty, loc)
        return self.read_oob(loc, ty), False

    # Free

    def release(self, block_id):
        """Drop a temporary block outright; its id is not reused."""
        if not is_temp(block_id):
            raise ValueError(f"block {block_id} is not a temporary")
        self.blocks.pop(block_id, None)

    def free_block(self, block_id):
        blk = self.block(block_id)
        if blk.freed:
            raise DoubleFree(f"block {block_id} is already freed")
        blk.perms = [(label, Permission.NONE) for label, _ in blk.perms]

    def check_freeable(self, locs) -> bool:
        """True iff every location heads a live malloc/pmalloc block."""
        for loc in locs:
            loc = Location(*loc)
            if loc == L_DEFAULT or loc.offset != 0 or loc.block not in self.blocks:
                return False
            blk = self.blocks[loc.block]
            if not blk.heap:
                return False
        return True

    # Inspection

    def clone(self):
        return copy.deepcopy(self)

    def dump(self) -> List[str]:
        """One line per block: `#id ty n [perm-summary] hexbytes`."""
        lines = []
        for block_id in sorted(self.blocks):
            blk = self.blocks[block_id]
            lines.append(f"#{block_id} {blk.ty} {blk.count} [{_perm_summary(blk.perms)}] {bytes(blk.data).hex()}")
        return lines


def _perm_summary(perms):
    """Run-length summary, e.g. `16xprivate/Freeable`."""
    if not perms:
        return ""
    runs = []
    current, count = perms[0], 0
    for p in perms:
        if p == current:
            count += 1
        else:
            runs.append(f"{count}x{str(current[0])}/{current[1]}")
            current, count = p, 1
    runs.append(f"{count}x{str(current[0])}/{current[1]}")
    return ",".join(runs)
