"""Interpreter and Run Configuration"""


class InterpreterConfig:

    # Size model τ
    public_int_size = 4
    public_float_size = 4
    private_size = 16  # 8-byte field element + 8 reserved

    # Evaluation
    loop_budget = 10 ** 6  # while-loop iterations per run
    tracking = "auto"  # auto | variable | location
    tracking_choices = ("auto", "variable", "location")
    backend = "shamir"  # shamir | dealer, for + - *
    backend_choices = ("shamir", "dealer")
    legacy_per_statement = False  # single-statement flattening of private branches

    # Logging
    log_dir = "./logs"
    trace_files = ("trace.d", "trace.l", "psi.json")
    output_pattern = "out.party{k}.txt"
    output_dir = "./outputs"

    # Corpus
    corpus_dir = "corpus"
    input_dir = "corpus/inputs"
    seeds = (7, 11, 23)  # noninterference reruns
    axiom_max_length = 4  # mux axioms: arrays up to this length


config = InterpreterConfig()
