"""Privacy Labels and Types of the Annotated C Subset"""

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

from lang.errors import LabelFault


class PrivacyLabel(enum.IntEnum):
    """Ordered so that max() is the label join."""

    PUBLIC = 0
    PRIVATE = 1

    def __str__(self):
        return self.name.lower()


class BaseType(str, enum.Enum):
    INT = "int"
    FLOAT = "float"
    VOID = "void"

    def __str__(self):
        return self.value


def join(*labels):
    """Label join; unlabeled (None) counts as public."""
    result = PrivacyLabel.PUBLIC
    for label in labels:
        if label is not None and label > result:
            result = label
    return result


@dataclass(frozen=True)
class Ty:
    """Common base. `label` is None for the unlabeled (Vanilla C) view."""

    @property
    def is_private(self) -> bool:
        return getattr(self, "label", None) == PrivacyLabel.PRIVATE

    @property
    def effective_label(self) -> PrivacyLabel:
        label = getattr(self, "label", None)
        return PrivacyLabel.PUBLIC if label is None else label


def _prefix(label):
    return "" if label is None else str(label) + " "


@dataclass(frozen=True)
class Base(Ty):
    label: Optional[PrivacyLabel]
    bty: BaseType

    def __post_init__(self):
        if self.bty == BaseType.VOID and self.label == PrivacyLabel.PRIVATE:
            raise LabelFault("void cannot carry a private label")

    def __str__(self):
        return f"{_prefix(self.label)}{self.bty}"


@dataclass(frozen=True)
class Ptr(Ty):
    label: Optional[PrivacyLabel]
    bty: BaseType
    indirection: int = 1

    def __post_init__(self):
        if self.indirection < 1:
            raise LabelFault("pointer indirection must be at least 1")

    def __str__(self):
        return f"{_prefix(self.label)}{self.bty}{'*' * self.indirection}"


@dataclass(frozen=True)
class ConstArrPtr(Ty):
    """Type of an array variable: a constant pointer to its data block."""

    label: Optional[PrivacyLabel]
    bty: BaseType

    def __str__(self):
        return f"{_prefix(self.label)}const {self.bty}*"


@dataclass(frozen=True)
class Fun(Ty):
    params: Tuple[Ty, ...]
    ret: Ty

    def __str__(self):
        return f"({', '.join(str(p) for p in self.params)}) -> {self.ret}"


def element_type(ty):
    """Type of the value a pointer or array refers to."""
    if isinstance(ty, ConstArrPtr):
        return Base(ty.label, ty.bty)
    if isinstance(ty, Ptr):
        if ty.indirection == 1:
            return Base(ty.label, ty.bty)
        return Ptr(ty.label, ty.bty, ty.indirection - 1)
    raise LabelFault(f"type {ty} has no element type")


def pointer_to(ty):
    """Type of `&x` for a variable of type ty."""
    if isinstance(ty, Base):
        return Ptr(ty.label, ty.bty, 1)
    if isinstance(ty, Ptr):
        return Ptr(ty.label, ty.bty, ty.indirection + 1)
    if isinstance(ty, ConstArrPtr):
        return Ptr(ty.label, ty.bty, 1)
    raise LabelFault(f"cannot take the address of {ty}")


def with_label(ty, label):
    """Same shape, different label (None strips it)."""
    if isinstance(ty, Base):
        if ty.bty == BaseType.VOID:
            return Base(None if label is None else PrivacyLabel.PUBLIC, ty.bty)
        return Base(label, ty.bty)
    if isinstance(ty, Ptr):
        return Ptr(label, ty.bty, ty.indirection)
    if isinstance(ty, ConstArrPtr):
        return ConstArrPtr(label, ty.bty)
    if isinstance(ty, Fun):
        return Fun(tuple(with_label(p, label) for p in ty.params), with_label(ty.ret, label))
    raise LabelFault(f"unknown type {ty!r}")


def is_pointer(ty) -> bool:
    return isinstance(ty, Ptr)


def is_scalar(ty) -> bool:
    return isinstance(ty, Base) and ty.bty != BaseType.VOID


PUBLIC_INT = Base(PrivacyLabel.PUBLIC, BaseType.INT)
PRIVATE_INT = Base(PrivacyLabel.PRIVATE, BaseType.INT)
