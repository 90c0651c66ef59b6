"""Multiparty Protocol Suite Invoked by the SMC² Semantics"""

import logging
from typing import List, NamedTuple, Sequence, Tuple

from lang.errors import DivisionByZero, ShapeMismatch
from lang.types import BaseType
from memory.codec import c_div, to_float32, to_int32
from mpc.backends import BACKENDS, DealerBackend
from mpc.field import Share, field_to_float, float_to_field, from_signed, reconstruct, share, to_signed
from mpc.rounds import RoundCounter

logger = logging.getLogger(__name__)

Shares = Tuple[int, ...]  # one field element per party, party k at index k-1


class SharedPointer(NamedTuple):
    """Party-independent view of a private pointer: tags as share tuples."""

    locs: tuple
    tags: List[Shares]
    indirection: int = 1


class ProtocolSuite:
    """
    The protocols of the semantics over q simulated parties

    Args:
        params: FieldParams
        rng: ProtocolRng (or any object with coefficients/perturbation)
        backend: "shamir" or "dealer"; selects how +, - and * are computed
        listeners: callables(kind, info) notified on every top-level invocation
    """

    def __init__(self, params, rng, backend="shamir", listeners=None):
        self.params = params
        self.rng = rng
        self.counter = RoundCounter()
        self.backend = BACKENDS[backend](self)
        self.dealer = DealerBackend(self)
        self.listeners = list(listeners or [])
        self.access_log: List[tuple] = []

    # Sharing

    @property
    def parties(self):
        return self.params.parties

    def encode(self, v, bty=BaseType.INT) -> int:
        if bty == BaseType.FLOAT:
            return float_to_field(v)
        return from_signed(int(v), self.params.prime)

    def decode(self, x, bty=BaseType.INT):
        if bty == BaseType.FLOAT:
            return field_to_float(x)
        return to_signed(x, self.params.prime)

    def fresh(self, x) -> Shares:
        """Random degree-t sharing of field element x."""
        shares = share(x, self.rng, self.params)
        p = self.params.prime
        return tuple((s.value + self.rng.perturbation(s.party)) % p for s in shares)

    def encrypt(self, v, bty=BaseType.INT) -> Shares:
        """Public value as a private one: the constant sharing."""
        return (self.encode(v, bty),) * self.parties

    def input_share(self, v, bty=BaseType.INT) -> Shares:
        """Private input entering the computation: a fresh random sharing."""
        return self.fresh(self.encode(v, bty))

    def open(self, shares) -> int:
        """Reconstructed field element; the simulator's view, no round spent."""
        return reconstruct([Share(k + 1, v) for k, v in enumerate(shares)], self.params)

    def peek(self, shares, bty=BaseType.INT):
        return self.decode(self.open(shares), bty)

    def reveal(self, shares, bty=BaseType.INT):
        """Reconstruction towards an output recipient. One round."""
        self._invoke("open")
        self.counter.spend(1)
        return self.peek(shares, bty)

    # Arithmetic

    def mpc_mult(self, a, b) -> Shares:
        self._invoke("mult")
        return self.backend.mul(a, b)

    def mpc_b(self, op, a, b, bty=BaseType.INT) -> Shares:
        """
        Binary operation on shares

        Args:
            op: one of + - * /
            a, b: share tuples
            bty: int or float

        Returns:
            share tuple of a op b
        """
        if bty == BaseType.FLOAT:
            return self._float_op(op, a, b)
        if op == "+":
            return self.backend.add(a, b)
        if op == "-":
            return self.backend.sub(a, b)
        if op == "*":
            return self.mpc_mult(a, b)
        if op == "/":
            self._invoke("div")
            p = self.params.prime

            def divide(x, y):
                y = to_signed(y, p)
                if y == 0:
                    raise DivisionByZero("private division by zero")
                return from_signed(to_int32(c_div(to_signed(x, p), y)), p)

            return self.dealer.evaluate(divide, a, b)
        raise ValueError(f"unknown binary operator {op!r}")

    def _float_op(self, op, a, b):
        self._invoke({"*": "mult", "/": "div"}.get(op, "float"))

        def apply(x, y):
            x, y = field_to_float(x), field_to_float(y)
            if op == "/" and y == 0:
                raise DivisionByZero("private division by zero")
            result = {"+": lambda: x + y, "-": lambda: x - y,
                      "*": lambda: x * y, "/": lambda: x / y}[op]()
            return float_to_field(to_float32(result))

        return self.dealer.evaluate(apply, a, b)

    def mpc_cmp(self, op, a, b, bty=BaseType.INT) -> Shares:
        """Sharing of 1 if `a op b` holds else 0, op in < == !="""
        self._invoke("cmp")

        def compare(x, y):
            x, y = self.decode(x, bty), self.decode(y, bty)
            holds = {"<": x < y, "==": x == y, "!=": x != y}[op]
            return 1 if holds else 0

        return self.dealer.evaluate(compare, a, b)

    def mpc_cast(self, a, from_bty, to_bty) -> Shares:
        if from_bty == to_bty:
            return a
        self._invoke("cast")

        def convert(x):
            v = self.decode(x, from_bty)
            if to_bty == BaseType.FLOAT:
                return float_to_field(to_float32(v))
            return from_signed(to_int32(int(v)), self.params.prime)

        return self.dealer.evaluate(convert, a)

    # Oblivious selection

    def _selector(self, index, m) -> Shares:
        p = self.params.prime
        return self.dealer.evaluate(lambda i: 1 if to_signed(i, p) == m else 0, index)

    def _warn_out_of_range(self, index, n, what):
        i = self.peek(index)
        if not 0 <= i < n:
            logger.warning("private %s index out of range (%d elements)", what, n)

    def mpc_ar(self, index, elements: Sequence[Shares]) -> Shares:
        """
        Read at a private index, touching every element once

        Args:
            index: share tuple of the index
            elements: share tuples of all n elements

        Returns:
            share tuple of element[index], or of 0 when the index is out of range
        """
        self._invoke("ar", n=len(elements))
        self._warn_out_of_range(index, len(elements), "read")
        total = (0,) * self.parties
        for m, element in enumerate(elements):
            self.access_log.append(("ar", m))
            term = self.backend.mul(self._selector(index, m), element)
            total = self._add(total, term)
        return total

    def mpc_aw(self, index, elements: Sequence[Shares], value) -> List[Shares]:
        """Write at a private index: element m becomes (m == index) ? value : old_m."""
        self._invoke("aw", n=len(elements))
        self._warn_out_of_range(index, len(elements), "write")
        updated = []
        for m, element in enumerate(elements):
            self.access_log.append(("aw", m))
            delta = self.backend.mul(self._selector(index, m), self._sub(value, element))
            updated.append(self._add(element, delta))
        return updated

    def mpc_dv(self, values: Sequence[Shares], tags: Sequence[Shares]) -> Shares:
        """Value at the true location of a private pointer: Σ tag_k · value_k."""
        if len(values) != len(tags):
            raise ShapeMismatch(f"{len(values)} values for {len(tags)} tags")
        self._invoke("dv", alpha=len(tags))
        total = (0,) * self.parties
        for k, (value, tag) in enumerate(zip(values, tags)):
            self.access_log.append(("dv", k))
            total = self._add(total, self.backend.mul(tag, value))
        return total

    def mpc_dv_pointer(self, pointers: Sequence[SharedPointer], tags: Sequence[Shares]) -> SharedPointer:
        """Pointer stored at the true location: the union of the candidates, tags weighted by `tags`."""
        if len(pointers) != len(tags):
            raise ShapeMismatch(f"{len(pointers)} pointers for {len(tags)} tags")
        self._invoke("dv", alpha=len(tags))
        zero = (0,) * self.parties
        locs = []
        for pointer in pointers:
            for loc in pointer.locs:
                if loc not in locs:
                    locs.append(loc)
        combined = {loc: zero for loc in locs}
        for k, (pointer, tag) in enumerate(zip(pointers, tags)):
            self.access_log.append(("dv", k))
            for loc, inner in zip(pointer.locs, pointer.tags):
                combined[loc] = self._add(combined[loc], self.backend.mul(tag, inner))
        return SharedPointer(tuple(locs), [combined[loc] for loc in locs], pointers[0].indirection)

    def mpc_wdp(self, olds: Sequence, tags: Sequence[Shares], value):
        """
        Write through a multi-location private pointer, touching every location

        Args:
            olds: current content of each location (share tuples or SharedPointer)
            tags: tag sharing over the locations
            value: the value written at the true location

        Returns:
            new content of each location; only the true one changes
        """
        if len(olds) != len(tags):
            raise ShapeMismatch(f"{len(olds)} locations for {len(tags)} tags")
        self._invoke("wdp", alpha=len(tags))
        updated = []
        for k, (old, tag) in enumerate(zip(olds, tags)):
            self.access_log.append(("wdp", k))
            updated.append(self._resolve(tag, value, old))
        return updated

    def mul_tags(self, a, b) -> Shares:
        """Product used when pointer tags are rescaled; counted as rounds only."""
        return self.backend.mul(a, b)

    def complement(self, cond) -> Shares:
        """Sharing of 1 - cond; local."""
        return self._sub(self.encrypt(1), cond)

    def mpc_free(self, contents: Sequence[Sequence[Shares]], tags: Sequence[Shares]):
        """
        Oblivious relocation before freeing location 0 of a private pointer

        Args:
            contents: per location, the share tuples of its elements
            tags: one-hot tag sharing over the α locations

        Returns:
            (contents with location 0's data moved to the true location,
             tags over the α-1 surviving locations)
        """
        alpha = len(tags)
        if alpha < 2 or len(contents) != alpha:
            raise ShapeMismatch(f"mpc_free needs α >= 2 locations with contents, got {alpha}")
        width = len(contents[0])
        if any(len(c) != width for c in contents):
            raise ShapeMismatch("pfree over blocks of different sizes")
        self._invoke("free", alpha=alpha)
        first = list(contents[0])
        updated = [first]
        for m in range(1, alpha):
            moved = []
            for e, element in enumerate(contents[m]):
                self.access_log.append(("free", m, e))
                delta = self.backend.mul(tags[m], self._sub(first[e], element))
                moved.append(self._add(element, delta))
            updated.append(moved)
        new_tags = [self._add(tags[1], tags[0])] + list(tags[2:])
        return updated, new_tags

    def mpc_resolve(self, cond, then, orelse):
        """
        Oblivious merge of the two branch results under a 0/1 condition

        Args:
            cond: share tuple reconstructing to 0 or 1
            then, orelse: share tuples, lists of share tuples (arrays) or
                SharedPointer values

        Returns:
            value of the same shape: then when cond is 1, orelse when it is 0
        """
        self._invoke("resolve")
        return self._resolve(cond, then, orelse)

    def _resolve(self, cond, then, orelse):
        if isinstance(then, SharedPointer):
            return self._resolve_pointer(cond, then, orelse)
        if isinstance(then, list):
            if len(then) != len(orelse):
                raise ShapeMismatch(f"cannot resolve arrays of {len(then)} and {len(orelse)} elements")
            return [self._select(cond, a, b) for a, b in zip(then, orelse)]
        return self._select(cond, then, orelse)

    def _select(self, cond, a, b) -> Shares:
        return self._add(b, self.backend.mul(cond, self._sub(a, b)))

    def _resolve_pointer(self, cond, then, orelse):
        zero = (0,) * self.parties
        locs = list(then.locs)
        for loc in orelse.locs:
            if loc not in locs:
                locs.append(loc)
        then_tags = dict(zip(then.locs, then.tags))
        else_tags = dict(zip(orelse.locs, orelse.tags))
        tags = [self._select(cond, then_tags.get(loc, zero), else_tags.get(loc, zero)) for loc in locs]
        return SharedPointer(tuple(locs), tags, then.indirection)

    # Local helpers

    def _add(self, a, b):
        p = self.params.prime
        return tuple((x + y) % p for x, y in zip(a, b))

    def _sub(self, a, b):
        p = self.params.prime
        return tuple((x - y) % p for x, y in zip(a, b))

    def _invoke(self, kind, **info):
        self.counter.invoke(kind)
        logger.debug("protocol %s %s", kind, info)
        for listener in self.listeners:
            listener(kind, info)
