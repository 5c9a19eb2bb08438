"""mubforge: mutually unbiased bases, complex Hadamard matrices, and
numerical MU-vector searches."""

from .core import (
    DEFAULT_TOL,
    ConstructionError,
    DomainError,
    InputError,
    MubforgeError,
    NumericalError,
    ShapeError,
    ToleranceProfile,
    UnsupportedError,
    is_hadamard,
    operator_schmidt_rank,
    product_vector_test,
    purity,
)

__all__ = [
    "DEFAULT_TOL",
    "ToleranceProfile",
    "MubforgeError",
    "ShapeError",
    "InputError",
    "ConstructionError",
    "DomainError",
    "UnsupportedError",
    "NumericalError",
    "is_hadamard",
    "purity",
    "operator_schmidt_rank",
    "product_vector_test",
]

__version__ = "0.1.0"
