"""EncodeVal / DecodeVal and Friends: Values <-> Little-Endian Bytes"""

import numpy as np

from lang.errors import MalformedPointer, SizeMismatch
from lang.types import Base, BaseType, ConstArrPtr, PrivacyLabel, Ptr
from memory.sizes import WORD
from memory.values import Location, PointerData


def to_int32(n: int) -> int:
    """Wrap to 32-bit two's complement."""
    n &= 0xFFFFFFFF
    return n - (1 << 32) if n & 0x80000000 else n


def to_float32(x) -> float:
    return float(np.float32(x))


def c_div(a, b):
    """C integer division (truncation toward zero)."""
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def _int_bytes(n, size, signed):
    return int(n).to_bytes(size, "little", signed=signed)


def _field_bytes(n, size):
    # field element in the first WORD bytes, remaining bytes reserved (zero)
    return _int_bytes(n, WORD, signed=False) + bytes(size - WORD)


def encode_val(ty, v, sizes) -> bytes:
    """
    Encode one value of type ty

    Args:
        ty: Base type (labelled or not) or pointer type
        v: plaintext number, or one party's share (field element) when private
        sizes: SizeModel

    Returns:
        τ(ty) bytes
    """
    if isinstance(ty, (Ptr, ConstArrPtr)):
        return encode_ptr(ty, v, sizes)
    if not isinstance(ty, Base) or ty.bty == BaseType.VOID:
        raise SizeMismatch(f"cannot encode a value of type {ty}")
    size = sizes.tau(ty)
    if ty.is_private:
        return _field_bytes(v, size)
    if ty.bty == BaseType.FLOAT:
        return np.array([v], dtype="<f4").tobytes()
    return _int_bytes(to_int32(v), size, signed=True)


def decode_val(ty, data, sizes):
    """
    Decode τ(ty) bytes as a value of type ty (no reconstruction)

    Args:
        ty: Base or pointer type
        data: exactly τ(ty) bytes (pointer types: a whole encoded PointerData)
        sizes: SizeModel

    Returns:
        number (share when private) or PointerData
    """
    data = bytes(data)
    if isinstance(ty, (Ptr, ConstArrPtr)):
        return decode_ptr(ty, None, data, sizes)
    size = sizes.tau(ty)
    if len(data) != size:
        raise SizeMismatch(f"{len(data)} bytes for {ty} (expected {size})")
    if ty.is_private:
        return int.from_bytes(data[:WORD], "little", signed=False)
    if ty.bty == BaseType.FLOAT:
        return float(np.frombuffer(data, dtype="<f4")[0])
    return int.from_bytes(data, "little", signed=True)


def _tag_label(ty):
    if isinstance(ty, ConstArrPtr):
        return PrivacyLabel.PUBLIC
    return ty.effective_label


def encode_ptr(ty, pd: PointerData, sizes) -> bytes:
    """Bytes of a PointerData: alpha | (block, offset)* | tag* | indirection."""
    label = _tag_label(ty)
    tag_ty = Base(label, BaseType.INT)
    out = bytearray(_int_bytes(pd.alpha, WORD, signed=False))
    for loc in pd.locs:
        out += _int_bytes(loc.block, WORD, signed=False)
        out += _int_bytes(loc.offset, WORD, signed=False)
    for tag in pd.tags:
        out += encode_val(tag_ty, tag, sizes)
    out += _int_bytes(pd.indirection, WORD, signed=False)
    return bytes(out)


def decode_ptr(ty, alpha, data, sizes) -> PointerData:
    """
    Parse an encoded PointerData

    Args:
        ty: pointer type, fixes the tag encoding
        alpha: expected location count, or None to take it from the bytes
        data: encoded bytes

    Returns:
        PointerData
    """
    data = bytes(data)
    label = _tag_label(ty)
    tag_ty = Base(label, BaseType.INT)
    tag_size = sizes.tag_size(label)
    if len(data) < WORD:
        raise MalformedPointer(f"{len(data)} bytes cannot hold pointer data")
    stored_alpha = int.from_bytes(data[:WORD], "little")
    if alpha is not None and stored_alpha != alpha:
        raise MalformedPointer(f"pointer holds {stored_alpha} locations, expected {alpha}")
    if stored_alpha < 1 or len(data) != sizes.pointer_size(label, stored_alpha):
        raise MalformedPointer(f"{len(data)} bytes cannot hold {stored_alpha} locations")
    pos = WORD
    locs = []
    for _ in range(stored_alpha):
        block = int.from_bytes(data[pos:pos + WORD], "little")
        offset = int.from_bytes(data[pos + WORD:pos + 2 * WORD], "little")
        locs.append(Location(block, offset))
        pos += 2 * WORD
    tags = []
    for _ in range(stored_alpha):
        tags.append(decode_val(tag_ty, data[pos:pos + tag_size], sizes))
        pos += tag_size
    indirection = int.from_bytes(data[pos:pos + WORD], "little")
    return PointerData(stored_alpha, tuple(locs), tuple(tags), indirection)


def encode_arr(ty, values, sizes) -> bytes:
    """Concatenated element encodings; ty is the element type."""
    return b"".join(encode_val(ty, v, sizes) for v in values)


def decode_arr(ty, i, data, sizes):
    """Element i of an encoded array of element type ty."""
    size = sizes.tau(ty)
    if i < 0 or (i + 1) * size > len(data):
        raise SizeMismatch(f"index {i} outside {len(data) // size} encoded elements")
    return decode_val(ty, data[i * size:(i + 1) * size], sizes)


def decode_all(ty, data, sizes):
    size = sizes.tau(ty)
    return [decode_val(ty, data[k:k + size], sizes) for k in range(0, len(data), size)]
