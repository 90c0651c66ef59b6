"""Tests for the size model, byte codec, block store and environment"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lang.errors import (
    AddressBeyondMemory, DoubleFree, MalformedPointer, SizeMismatch, UnboundVariable, UseAfterFree,
)
from lang.types import Base, BaseType, ConstArrPtr, PrivacyLabel, Ptr
from memory.codec import c_div, decode_ptr, decode_val, encode_ptr, encode_val, to_int32
from memory.env import Env
from memory.sizes import SizeModel
from memory.store import VOID, Memory
from memory.values import L_DEFAULT, Location, PointerData, is_temp

PUBLIC_INT = Base(PrivacyLabel.PUBLIC, BaseType.INT)
PRIVATE_INT = Base(PrivacyLabel.PRIVATE, BaseType.INT)
PUBLIC_FLOAT = Base(PrivacyLabel.PUBLIC, BaseType.FLOAT)
PRIVATE_PTR = Ptr(PrivacyLabel.PRIVATE, BaseType.INT, 1)
PUBLIC_PTR = Ptr(PrivacyLabel.PUBLIC, BaseType.INT, 1)

sizes = SizeModel()


def test_size_model():
    assert sizes.tau(PUBLIC_INT) == 4
    assert sizes.tau(PUBLIC_FLOAT) == 4
    assert sizes.tau(PRIVATE_INT) == 16
    assert sizes.tau(Base(None, BaseType.INT)) == 4
    assert sizes.tau(VOID) == 1
    # alpha | (block, offset) | tag | indirection
    assert sizes.tau(PUBLIC_PTR) == 8 + 16 + 4 + 8
    assert sizes.pointer_size(PrivacyLabel.PRIVATE, 2) == 8 + 32 + 32 + 8
    assert sizes.tau(ConstArrPtr(PrivacyLabel.PRIVATE, BaseType.INT)) == 36


def test_size_model_rejects_small_private_size():
    with pytest.raises(ValueError):
        SizeModel(private=4)


def test_int32_wraps_and_c_division_truncates():
    assert to_int32(2 ** 31) == -2 ** 31
    assert to_int32(-1) == -1
    assert c_div(-7, 2) == -3
    assert c_div(7, -2) == -3
    assert c_div(-7, -2) == 3


def test_encodings():
    assert encode_val(PUBLIC_INT, -2, sizes) == (-2).to_bytes(4, "little", signed=True)
    raw = encode_val(PRIVATE_INT, 12345, sizes)
    assert len(raw) == 16 and raw[8:] == bytes(8)
    assert decode_val(PUBLIC_FLOAT, encode_val(PUBLIC_FLOAT, 0.5, sizes), sizes) == 0.5
    with pytest.raises(SizeMismatch):
        decode_val(PUBLIC_INT, b"\x00\x00", sizes)


@given(st.integers(min_value=-2 ** 31, max_value=2 ** 31 - 1))
def test_public_int_codec(v):
    assert decode_val(PUBLIC_INT, encode_val(PUBLIC_INT, v, sizes), sizes) == v


@given(st.integers(min_value=0, max_value=2 ** 61 - 2))
def test_private_share_codec(share):
    assert decode_val(PRIVATE_INT, encode_val(PRIVATE_INT, share, sizes), sizes) == share


@given(st.lists(st.tuples(st.integers(0, 2 ** 20), st.integers(0, 255), st.integers(0, 2 ** 61 - 2)),
                min_size=1, max_size=4))
def test_private_pointer_codec(entries):
    pd = PointerData(len(entries), tuple(Location(b, o) for b, o, _ in entries),
                     tuple(t for _, _, t in entries), 2)
    raw = encode_ptr(PRIVATE_PTR, pd, sizes)
    assert len(raw) == sizes.pointer_size(PrivacyLabel.PRIVATE, len(entries))
    assert decode_ptr(PRIVATE_PTR, None, raw, sizes) == pd


def test_pointer_codec_rejects_wrong_alpha():
    raw = encode_ptr(PUBLIC_PTR, PointerData.single(Location(3, 0)), sizes)
    with pytest.raises(MalformedPointer):
        decode_ptr(PUBLIC_PTR, 2, raw, sizes)
    with pytest.raises(MalformedPointer):
        PointerData(2, (Location(1, 0),), (1,))


def test_default_block():
    memory = Memory(sizes)
    blk = memory.block(L_DEFAULT.block)
    assert blk.ty == VOID and blk.size == 16 and not blk.heap
    assert not memory.check_freeable([L_DEFAULT])


def test_array_elements():
    memory = Memory(sizes)
    loc = memory.allocate(PUBLIC_INT, 3)
    memory.update_arr((loc.block, 1), -5, PUBLIC_INT)
    assert memory.read_arr(loc.block, PUBLIC_INT) == [0, -5, 0]
    with pytest.raises(SizeMismatch):
        memory.update_val(Location(loc.block, 12), 1, PUBLIC_INT)


def test_offsets_roll_into_the_next_block():
    memory = Memory(sizes)
    a = memory.allocate(PUBLIC_INT, 2)
    b = memory.allocate(PUBLIC_INT, 1)
    memory.update_val(b, 9, PUBLIC_INT)
    assert memory.normalize(Location(a.block, 8)) == Location(b.block, 0)
    assert memory.read_oob(Location(a.block, 8), PUBLIC_INT) == 9
    assert memory.get_location(Location(a.block, 4), 4) == (Location(b.block, 0), False)
    with pytest.raises(AddressBeyondMemory):
        memory.normalize(Location(b.block, 4))


def test_temporaries_are_outside_the_flat_order():
    memory = Memory(sizes)
    a = memory.allocate(PUBLIC_INT, 1)
    temp = memory.allocate(PUBLIC_INT, 1, temp=True)
    assert is_temp(temp.block) and not is_temp(a.block)
    assert temp.block not in memory.flat_order()
    memory.release(temp.block)
    assert temp.block not in memory
    with pytest.raises(ValueError):
        memory.release(a.block)


def test_well_aligned():
    memory = Memory(sizes)
    pub = memory.allocate(PUBLIC_INT, 2)
    priv = memory.allocate(PRIVATE_INT, 1)
    ptr = memory.allocate(PUBLIC_PTR, 1, encode_ptr(PUBLIC_PTR, PointerData.single(L_DEFAULT), sizes))
    heap = memory.allocate(VOID, 8, heap=True)
    assert memory.well_aligned(Location(pub.block, 4), PUBLIC_INT)
    assert not memory.well_aligned(Location(pub.block, 2), PUBLIC_INT)
    assert memory.well_aligned(Location(pub.block, 8), PRIVATE_INT)
    assert not memory.well_aligned(priv, PUBLIC_INT)
    assert not memory.well_aligned(ptr, PUBLIC_INT)
    assert memory.well_aligned(ptr, PUBLIC_PTR)
    assert memory.well_aligned(Location(heap.block, 4), PUBLIC_INT)


def test_pointer_block_grows_with_alpha():
    memory = Memory(sizes)
    loc = memory.allocate(PRIVATE_PTR, 1, encode_ptr(PRIVATE_PTR, PointerData.single(L_DEFAULT), sizes))
    pd = PointerData(2, (Location(1, 0), Location(2, 0)), (5, 7))
    memory.update_ptr(loc, pd, PRIVATE_PTR)
    assert memory.read_ptr(loc) == pd
    assert memory.block(loc.block).count == 2
    assert memory.block(loc.block).size == sizes.pointer_size(PrivacyLabel.PRIVATE, 2)


def test_free_and_use_after_free():
    memory = Memory(sizes)
    heap = memory.allocate(VOID, 4, heap=True)
    stack = memory.allocate(PUBLIC_INT, 1)
    assert memory.check_freeable([heap])
    assert not memory.check_freeable([stack])
    assert not memory.check_freeable([Location(heap.block, 1)])
    memory.free_block(heap.block)
    assert memory.block(heap.block).freed
    with pytest.raises(UseAfterFree):
        memory.read_val(heap, PUBLIC_INT)
    with pytest.raises(DoubleFree):
        memory.free_block(heap.block)
    with pytest.raises(AddressBeyondMemory):
        memory.block(999)


def test_block_ids_are_never_recycled():
    memory = Memory(sizes)
    first = memory.allocate(VOID, 4, heap=True)
    memory.free_block(first.block)
    second = memory.allocate(VOID, 4, heap=True)
    assert second.block == first.block + 1


def test_dump_lists_every_block():
    memory = Memory(sizes)
    i = memory.allocate(PUBLIC_INT, 1)
    memory.update_val(i, 1, PUBLIC_INT)
    data = memory.allocate(PUBLIC_INT, 2)
    memory.update_arr((data.block, 1), -1, PUBLIC_INT)
    heap = memory.allocate(VOID, 4, heap=True)
    memory.free_block(heap.block)
    assert memory.dump() == [
        "#0 public void 16 [16xpublic/Freeable] " + "00" * 16,
        "#1 public int 1 [4xpublic/Freeable] 01000000",
        "#2 public int 2 [8xpublic/Freeable] 00000000ffffffff",
        "#3 public void 4 [4xpublic/None] 00000000",
    ]


def test_env_scoping():
    env = Env()
    env.declare("x", Location(1, 0), PUBLIC_INT)
    inner = env.child()
    inner.declare("x", Location(2, 0), PRIVATE_INT)
    inner.declare_temp("x_then_1", Location(3, 0), PRIVATE_INT)
    assert inner.lookup("x") == (Location(2, 0), PRIVATE_INT)
    assert env.lookup("x") == (Location(1, 0), PUBLIC_INT)
    assert inner.bindings() == {"x": (Location(2, 0), PRIVATE_INT)}
    assert inner.depth() == 1
    with pytest.raises(UnboundVariable):
        inner.lookup("x_then_1")
    assert inner.lookup_temp("x_then_1")[0] == Location(3, 0)
