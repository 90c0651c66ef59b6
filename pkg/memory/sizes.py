"""Size Model τ"""

from lang.types import Base, BaseType, ConstArrPtr, Fun, PrivacyLabel, Ptr

WORD = 8  # alpha, block id, offset and indirection fields of pointer data


class SizeModel:
    """
    Byte sizes per type

    Args:
        public_int: τ(public int)
        public_float: τ(public float)
        private: τ(private int) = τ(private float); one field element plus padding
    """

    def __init__(self, public_int=4, public_float=4, private=16):
        if private < WORD:
            raise ValueError(f"private size must hold an {WORD}-byte field element")
        self.public_int = public_int
        self.public_float = public_float
        self.private = private

    @classmethod
    def from_config(cls, config):
        return cls(config.public_int_size, config.public_float_size, config.private_size)

    def tag_size(self, label):
        return self.private if label == PrivacyLabel.PRIVATE else self.public_int

    def pointer_size(self, label, alpha=1):
        """Encoded PointerData size for a pointer with alpha locations."""
        return WORD + alpha * 2 * WORD + alpha * self.tag_size(label) + WORD

    def tau(self, ty) -> int:
        """τ(ty): size in bytes of one value of type ty."""
        if isinstance(ty, Base):
            if ty.bty == BaseType.VOID:
                return 1
            if ty.is_private:
                return self.private
            return self.public_int if ty.bty == BaseType.INT else self.public_float
        if isinstance(ty, (Ptr, ConstArrPtr)):
            return self.pointer_size(ty.effective_label if isinstance(ty, Ptr) else PrivacyLabel.PUBLIC)
        if isinstance(ty, Fun):
            return 0
        raise TypeError(f"no size for {ty!r}")

    def __repr__(self):
        return f"SizeModel(public_int={self.public_int}, public_float={self.public_float}, private={self.private})"
