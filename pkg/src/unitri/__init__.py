"""Exact random-walk laboratory for unipotent upper-triangular groups over Z/pZ."""

from unitri.errors import CapacityError, UsageError
from unitri.group import (
    GeneratorStep,
    GeneratorWord,
    PrimeModulus,
    UniTriMatrix,
    commutator,
    decode_index,
    encode_index,
    eval_word,
    mat_inv,
    mat_mul,
)

__all__ = [
    "CapacityError",
    "UsageError",
    "GeneratorStep",
    "GeneratorWord",
    "PrimeModulus",
    "UniTriMatrix",
    "commutator",
    "decode_index",
    "encode_index",
    "eval_word",
    "mat_inv",
    "mat_mul",
]

__version__ = "0.1.0"
