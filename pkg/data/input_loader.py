"""Party Input Files, Output Records and Corpus Discovery"""

import glob
import os
import re
from typing import Dict, List

from lang.errors import ConfigError, MissingInput

RECORD_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+?)\s*$")


def parse_scalar(text, path=None):
    text = text.strip()
    try:
        if re.fullmatch(r"-?[0-9]+", text):
            return int(text)
        return float(text)
    except ValueError:
        raise ConfigError(f"bad input value {text!r}" + (f" in {path}" if path else ""))


def parse_record_value(text, path=None):
    """`7`, `2.5` or `[1, 2, 3]`."""
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ConfigError(f"unterminated list {text!r}" + (f" in {path}" if path else ""))
        inner = text[1:-1].strip()
        return [parse_scalar(v, path) for v in inner.split(",")] if inner else []
    return parse_scalar(text, path)


def load_input_file(path) -> Dict[str, object]:
    """
    Read one party's input file

    Args:
        path: file with `var = value` / `var = [v1, v2, ...]` lines; `#` starts a comment

    Returns:
        {name: number or list}
    """
    records = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0]
            if not line.strip():
                continue
            match = RECORD_RE.match(line)
            if match is None:
                raise ConfigError(f"{path}:{lineno}: expected `var = value`")
            records[match.group(1)] = parse_record_value(match.group(2), path)
    return records


class InputSet:
    """
    Inputs of every party

    Args:
        parties: q
        records: {party index 1..q: {name: value}}
    """

    def __init__(self, parties, records=None):
        self.parties = parties
        self.records = {k: dict((records or {}).get(k, {})) for k in range(1, parties + 1)}

    @classmethod
    def from_files(cls, paths: List[str]):
        """Party k reads paths[k-1]."""
        return cls(len(paths), {k + 1: load_input_file(p) for k, p in enumerate(paths)})

    @classmethod
    def empty(cls, parties):
        return cls(parties)

    def lookup(self, party, name):
        try:
            return self.records[party][name]
        except KeyError:
            raise MissingInput(f"party {party} has no input '{name}'")

    def shape(self):
        """Names and list lengths per party; equal shapes make two input sets comparable."""
        return {k: {n: (len(v) if isinstance(v, list) else None) for n, v in r.items()}
                for k, r in self.records.items()}

    def __eq__(self, other):
        return isinstance(other, InputSet) and self.records == other.records


def input_paths(stem, parties, input_dir, variant=None):
    """corpus/inputs/<stem>.party<k>.txt, or <stem>.<variant>.party<k>.txt."""
    middle = f"{stem}.{variant}" if variant else stem
    return [os.path.join(input_dir, f"{middle}.party{k}.txt") for k in range(1, parties + 1)]


def load_program_inputs(program_path, parties, input_dir, variant=None):
    """Inputs shipped for a program; parties without a file get no records."""
    stem = os.path.splitext(os.path.basename(program_path))[0]
    records = {}
    for k, path in enumerate(input_paths(stem, parties, input_dir, variant), 1):
        if os.path.exists(path):
            records[k] = load_input_file(path)
    return InputSet(parties, records)


def alternate_variants(program_path, input_dir):
    """Variant names of alternate input sets (`<stem>.alt1.party1.txt` -> `alt1`)."""
    stem = os.path.splitext(os.path.basename(program_path))[0]
    found = set()
    for path in glob.glob(os.path.join(input_dir, f"{stem}.alt*.party1.txt")):
        found.add(os.path.basename(path)[len(stem) + 1:].split(".")[0])
    return sorted(found)


def list_corpus(corpus_dir):
    return sorted(glob.glob(os.path.join(corpus_dir, "*.sc")))


# Outputs

def format_value(v):
    if isinstance(v, list):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def output_lines(records):
    """`var = value` lines in program order."""
    return [f"{name} = {format_value(value)}" for name, value in records]


def write_outputs(outputs, directory, pattern="out.party{k}.txt"):
    """
    Write every party's output records

    Args:
        outputs: per party (index 0 = party 1) list of (name, value)
        directory: target directory
        pattern: file name pattern with {k}

    Returns:
        written paths
    """
    os.makedirs(directory, exist_ok=True)
    paths = []
    for k, records in enumerate(outputs, 1):
        path = os.path.join(directory, pattern.format(k=k))
        with open(path, "w", encoding="utf-8") as f:
            for line in output_lines(records):
                f.write(line + "\n")
        paths.append(path)
    return paths
