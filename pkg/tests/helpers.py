"""Helpers shared by the test modules"""

from data.input_loader import InputSet
from erasure.erase import erase_program
from interp.smc2 import smc2_eval
from interp.vanilla import van_eval
from lang.parser import parse
from lang.types import ConstArrPtr, Ptr, element_type
from memory.values import Location


def party_inputs(records, parties=3):
    """{party: {name: value}} as an InputSet."""
    return InputSet(parties, records)


def run_smc2(source, inputs=None, seed=7, **options):
    """Parse and run an SMC² source."""
    return smc2_eval(parse(source), inputs, seed, **options)


def run_vanilla(source, inputs=None, parties=3, **options):
    """Parse and run a Vanilla C source (unlabeled)."""
    return van_eval(parse(source, vanilla=True), inputs, parties=parties, **options)


def run_erased(source, inputs=None, parties=3, **options):
    """Erase an SMC² source and run it on the Vanilla side."""
    return van_eval(erase_program(parse(source)), inputs, parties=parties, **options)


def _plain(result, ty, shares):
    if ty.is_private:
        return result.suite.peek(tuple(shares), ty.bty)
    return shares[0]


def value_at(result, loc, ty):
    """Plaintext of one value at loc, reconstructed when private."""
    return _plain(result, ty, [m.read_val(Location(*loc), ty) for m in result.memories])


def value_of(result, name):
    """
    Final plaintext value of a variable

    Scalars give a number, arrays a list, pointers party 1's PointerData.
    """
    loc, ty = result.env.lookup(name)
    layout = result.memories[0]
    if isinstance(ty, ConstArrPtr):
        data = layout.read_ptr(loc).location.block
        elem = element_type(ty)
        per_party = [m.read_arr(data, elem) for m in result.memories]
        return [_plain(result, elem, list(shares)) for shares in zip(*per_party)]
    if isinstance(ty, Ptr):
        return layout.read_ptr(loc)
    return value_at(result, loc, ty)


def pointer_tags(result, name):
    """Reconstructed tags of a private pointer, in location order."""
    loc, _ = result.env.lookup(name)
    parts = [m.read_ptr(loc) for m in result.memories]
    return [result.suite.open(tuple(pd.tags[k] for pd in parts)) for k in range(parts[0].alpha)]
