"""Memory Erasure: Reconstructed, Public-Width View of a Final State"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from erasure.erase import erase_fundef, erase_type
from lang.errors import MalformedPointer
from lang.types import Base, BaseType, ConstArrPtr, Fun, Ptr
from memory.codec import decode_all, encode_val
from memory.sizes import SizeModel
from memory.values import Location, Permission, is_temp

logger = logging.getLogger(__name__)

VOID = Base(None, BaseType.VOID)


@dataclass
class ErasedBlock:
    """
    One block of the erased memory

    `data` holds public-width bytes for value blocks, `target` the (logical)
    location a pointer block refers to, `fundef` the erased definition of a
    function block. Freed blocks keep only type, count and permission.
    """

    ty: object
    count: int
    perm: Permission
    data: Optional[bytes] = None
    target: Optional[Location] = None
    indirection: int = 0
    fundef: object = None

    @property
    def freed(self):
        return self.perm == Permission.NONE


@dataclass
class ErasureReport:
    """Erased environment and memory; the plaintext view is the same for every party."""

    blocks: Dict[int, ErasedBlock]
    env: Dict[str, tuple]
    dropped: List[str] = field(default_factory=list)


class _Reconstructor:
    def __init__(self, memories, suite, psi):
        self.memories = memories
        self.layout = memories[0]
        self.suite = suite
        self.psi = psi
        self.sizes = self.layout.sizes
        self.public_sizes = SizeModel(self.sizes.public_int, self.sizes.public_float, self.sizes.private)

    def logical(self, block):
        return self.psi.logical(block) if self.psi is not None else block

    def values(self, block_id, ty):
        """Plaintext elements of a value block."""
        per_party = [decode_all(ty, bytes(m.block(block_id).data), self.sizes) for m in self.memories]
        if not ty.is_private:
            return per_party[0]
        return [self.suite.peek(tuple(shares), ty.bty) for shares in zip(*per_party)]

    def true_location(self, block_id):
        """Tag-selected location of a pointer block."""
        parts = [m.read_ptr(Location(block_id, 0)) for m in self.memories]
        first = parts[0]
        if first.alpha == 1 and not self._private_tags(block_id):
            return first.location, first.indirection
        for k, loc in enumerate(first.locs):
            tag = tuple(pd.tags[k] for pd in parts)
            if self._private_tags(block_id):
                if self.suite.open(tag) == 1:
                    return loc, first.indirection
            elif tag[0] == 1:
                return loc, first.indirection
        raise MalformedPointer(f"pointer block {block_id} has no true location")

    def _private_tags(self, block_id):
        ty = self.layout.block(block_id).ty
        return isinstance(ty, Ptr) and ty.is_private

    def rescale(self, loc):
        """Offset into the erased pointee block."""
        if loc.block not in self.layout:
            return Location(self.logical(loc.block), loc.offset)
        blk = self.layout.block(loc.block)
        offset = loc.offset
        if isinstance(blk.ty, Base) and blk.ty.bty != BaseType.VOID:
            offset = loc.offset * self.public_sizes.tau(erase_type(blk.ty)) // self.sizes.tau(blk.ty)
        return Location(self.logical(loc.block), offset)

    def block(self, block_id) -> ErasedBlock:
        blk = self.layout.block(block_id)
        perm = blk.perms[0][1] if blk.perms else Permission.FREEABLE
        ty = blk.ty
        if isinstance(ty, Fun):
            fundef = None
            if blk.payload is not None and blk.payload.fundef is not None:
                fundef = erase_fundef(blk.payload.fundef, blk.payload.closure) if self.suite is not None \
                    else blk.payload.fundef
            return ErasedBlock(erase_type(ty), blk.count, perm, fundef=fundef)
        if isinstance(ty, (Ptr, ConstArrPtr)):
            if blk.freed:
                return ErasedBlock(erase_type(ty), 1, perm)
            loc, indirection = self.true_location(block_id)
            return ErasedBlock(erase_type(ty), 1, perm, target=self.rescale(loc), indirection=indirection)
        if ty.bty == BaseType.VOID:
            return ErasedBlock(VOID, blk.count, perm, None if blk.freed else bytes(blk.data))
        erased_ty = erase_type(ty)
        if blk.heap and ty.is_private:
            # pmalloc'd blocks erase to malloc'd bytes
            nbytes = blk.count * self.public_sizes.tau(erased_ty)
            if blk.freed:
                return ErasedBlock(VOID, nbytes, perm)
            data = b"".join(encode_val(erased_ty, v, self.public_sizes) for v in self.values(block_id, ty))
            return ErasedBlock(VOID, nbytes, perm, data)
        if blk.freed:
            return ErasedBlock(erased_ty, blk.count, perm)
        data = b"".join(encode_val(erased_ty, v, self.public_sizes) for v in self.values(block_id, ty))
        return ErasedBlock(erased_ty, blk.count, perm, data)


def erase_memory(result) -> ErasureReport:
    """
    Erase a final state

    Args:
        result: RunResult of either interpreter; SMC² results are reconstructed
            through their protocol suite and remapped through ψ

    Returns:
        ErasureReport keyed by logical (Vanilla-side) block id
    """
    smc2 = result.suite is not None
    rebuild = _Reconstructor(result.memories, result.suite, result.psi if smc2 else None)
    blocks = {}
    for block_id in sorted(rebuild.layout.blocks):
        if is_temp(block_id):
            continue
        blocks[rebuild.logical(block_id)] = rebuild.block(block_id)
    env = {}
    for name, (loc, ty) in result.env.bindings().items():
        env[name] = (Location(rebuild.logical(loc.block), loc.offset), erase_type(ty))
    dropped = sorted(result.env.temp_bindings())
    if dropped:
        logger.debug("dropped temporaries: %s", dropped)
    return ErasureReport(blocks, env, dropped)
