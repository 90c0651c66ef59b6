"""Protocol Backends: Shamir (honest +, -, *) and Trusted Dealer"""

import logging

from mpc.field import Share, lagrange_at_zero, reconstruct

logger = logging.getLogger(__name__)


class DealerBackend:
    """
    Reference backend: reconstruct, compute the plaintext, reshare

    Used for the operations no honest protocol is implemented for (division,
    comparison, float arithmetic, casts) and, when selected, for everything.
    """

    name = "dealer"

    def __init__(self, suite):
        self.suite = suite

    def open(self, shares):
        params = self.suite.params
        return reconstruct([Share(k + 1, v) for k, v in enumerate(shares)], params)

    def evaluate(self, fn, *operands):
        """fn over reconstructed field elements; result freshly reshared. One round."""
        plain = fn(*(self.open(s) for s in operands))
        self.suite.counter.spend(1)
        return self.suite.fresh(plain)

    def add(self, a, b):
        p = self.suite.params.prime
        return self.evaluate(lambda x, y: (x + y) % p, a, b)

    def sub(self, a, b):
        p = self.suite.params.prime
        return self.evaluate(lambda x, y: (x - y) % p, a, b)

    def mul(self, a, b):
        p = self.suite.params.prime
        return self.evaluate(lambda x, y: (x * y) % p, a, b)


class ShamirBackend(DealerBackend):
    """
    Honest backend: + and - are local, * follows the degree-reduction protocol

    For multiplication every party multiplies its two shares locally (a degree
    2t sharing of the product), reshares that value with a fresh degree-t
    polynomial, and combines the q sub-shares it receives with the Lagrange
    coefficients at zero.
    """

    name = "shamir"

    def add(self, a, b):
        p = self.suite.params.prime
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.suite.params.prime
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul(self, a, b):
        params = self.suite.params
        p, q = params.prime, params.parties
        lambdas = lagrange_at_zero(list(range(1, q + 1)), p)
        # One sharing of each party's local product
        sub_shares = [self.suite.fresh(x * y % p) for x, y in zip(a, b)]
        self.suite.counter.spend(1)
        return tuple(
            sum(lambdas[k] * sub_shares[k][j] for k in range(q)) % p
            for j in range(q)
        )


BACKENDS = {"shamir": ShamirBackend, "dealer": DealerBackend}
