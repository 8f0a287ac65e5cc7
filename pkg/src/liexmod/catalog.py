"""Small named algebras used by the corpus, the tests and the CLI examples."""

from __future__ import annotations

from .exactlin import QQ, Field
from .liealg import LieAlgebra, zero_algebra


def sl2(field: Field = QQ, name: str = "sl2") -> LieAlgebra:
    return LieAlgebra.from_brackets(
        name,
        ["h", "e", "f"],
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}},
        field,
    )


def perturbed_sl2(field: Field = QQ) -> LieAlgebra:
    """sl2 with [e,f] = e instead of h; not a Lie algebra."""
    return LieAlgebra.from_brackets(
        "sl2'",
        ["h", "e", "f"],
        {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"e": 1}},
        field,
    )


def heisenberg(field: Field = QQ, name: str = "heis") -> LieAlgebra:
    return LieAlgebra.from_brackets(name, ["x", "y", "z"], {("x", "y"): {"z": 1}}, field)


def aff2(field: Field = QQ, name: str = "aff") -> LieAlgebra:
    """The 2-dimensional nonabelian algebra [e1, e2] = e2."""
    return LieAlgebra.from_brackets(name, ["e1", "e2"], {("e1", "e2"): {"e2": 1}}, field)


def abelian(n: int, field: Field = QQ, name: str | None = None, prefix: str = "a") -> LieAlgebra:
    basis = [prefix] if n == 1 else [f"{prefix}{i + 1}" for i in range(n)]
    return LieAlgebra.abelian(name or f"ab{n}", basis, field)


__all__ = ["abelian", "aff2", "heisenberg", "perturbed_sl2", "sl2", "zero_algebra"]
