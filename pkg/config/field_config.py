"""Field and Party Configuration"""

import os


class FieldConfig:
    """Secret-sharing field and party settings"""

    # Field
    prime = 2305843009213693951  # 2^61 - 1
    test_prime = 101  # hand-checkable examples
    axiom_prime = 11  # exhaustive protocol checks

    # Parties
    parties = 3
    threshold = 1  # t < q/2

    # Protocol randomness (replayable)
    seed = 42
    seed_env_var = "SMC2_SEED"

    @classmethod
    def from_env(cls):
        """Defaults with SMC2_SEED applied when set"""
        config = cls()
        value = os.environ.get(cls.seed_env_var)
        if value is not None and value.strip():
            config.seed = int(value)
        return config


config = FieldConfig()
