import pathlib

from food import desugar, parse
from food.syntax import Program

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"

# (program, natural selected-type set) for every corpus pair member
GOLDEN_SELECTIONS = {
    "sets_oop": {"Set"},
    "sets_fp": {"Set"},
    "exp_oop": {"Exp"},
    "exp_fp": {"Exp"},
    "setlist_oop": {"Set"},
    "setlist_fp": {"Set"},
    "boolnorm_ctx_oop": {"Context"},
    "boolnorm_ctx_fp": {"Context"},
}


def corpus_text(name: str) -> str:
    return (CORPUS / f"{name}.food").read_text()


def load(name: str) -> Program:
    """Parse and desugar one corpus program."""
    return desugar(parse(corpus_text(name)))


def load_raw(name: str) -> Program:
    """Parse without desugaring (keeps bare-expression consumer bodies)."""
    return parse(corpus_text(name))
