"""Twisted derivations: membership tests, solution spaces, inner derivations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AxiomReport,
    NotFixedPoint,
    NotRegular,
    ThreeBihomLieAlgebra,
    compare,
    compare_maps,
    is_fixed,
    is_regular,
    transform_slots,
)
from .linalg import (
    DimensionMismatch,
    Scaled,
    exact_einsum,
    fraction_array,
    identity,
    int_einsum,
    matmul,
    matrix_power,
    solution_space,
)

__all__ = [
    "DerivationSpace",
    "is_derivation",
    "derivation_space",
    "inner_derivation",
    "derivation_bracket",
    "twist_power",
]


@dataclass(frozen=True)
class DerivationSpace:
    k: int
    l: int
    basis: list[np.ndarray] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)


def twist_power(A: ThreeBihomLieAlgebra, k: int, l: int) -> np.ndarray:
    """The matrix of ``alpha^k beta^l``."""
    if k < 0 or l < 0:
        raise ValueError("exponents must be non-negative")
    return matmul(matrix_power(A.alpha, k), matrix_power(A.beta, l))


def _square_matrix(D, n: int) -> np.ndarray:
    D = fraction_array(D)
    if D.shape != (n, n):
        raise DimensionMismatch(f"derivation must be {n}x{n}, got {D.shape}")
    return D


def _slot_tensors(A: ThreeBihomLieAlgebra, P: np.ndarray) -> tuple[Scaled, Scaled, Scaled, Scaled]:
    """The bracket and its three partial twists ``[x, Py, Pz]``, ``[Px, y, Pz]``, ``[Px, Py, z]``."""
    I = identity(A.n)
    c = A.bracket
    return (Scaled.of(c),
            Scaled.of(transform_slots(c, I, P, P)),
            Scaled.of(transform_slots(c, P, I, P)),
            Scaled.of(transform_slots(c, P, P, I)))


def _leibniz_sides(D: np.ndarray, tensors) -> tuple[Scaled, Scaled]:
    c, t1, t2, t3 = tensors
    lhs = int_einsum("ts,ijks->ijkt", D, c)
    rhs = (int_einsum("ai,ajkt->ijkt", D, t1) + int_einsum("bj,ibkt->ijkt", D, t2)
           + int_einsum("ck,ijct->ijkt", D, t3))
    return lhs, rhs


def is_derivation(D, A: ThreeBihomLieAlgebra, k: int, l: int) -> AxiomReport:
    """Check that ``D`` commutes with both maps and satisfies the Leibniz
    rule twisted by ``alpha^k beta^l`` on every basis triple."""
    D = _square_matrix(D, A.n)
    report = AxiomReport()
    compare_maps(report, "commute-alpha", matmul(D, A.alpha), matmul(A.alpha, D))
    compare_maps(report, "commute-beta", matmul(D, A.beta), matmul(A.beta, D))
    lhs, rhs = _leibniz_sides(D, _slot_tensors(A, twist_power(A, k, l)))
    compare(report, "leibniz", lhs, rhs)
    return report


def derivation_space(A: ThreeBihomLieAlgebra, k: int, l: int) -> DerivationSpace:
    """A basis of all ``alpha^k beta^l``-derivations, by exact kernel computation."""
    tensors = _slot_tensors(A, twist_power(A, k, l))
    alpha, beta = A.alpha, A.beta

    def residual(D):
        lhs, rhs = _leibniz_sides(D, tensors)
        return [matmul(D, alpha) - matmul(alpha, D), matmul(D, beta) - matmul(beta, D), lhs - rhs]

    return DerivationSpace(k, l, solution_space(residual, (A.n, A.n)))


def inner_derivation(A: ThreeBihomLieAlgebra, u1, u2, k: int, l: int) -> np.ndarray:
    """Matrix of ``w -> [u1, u2, alpha^k beta^l w]``.

    Both vectors must be fixed by ``alpha`` and ``beta``; the result is an
    ``alpha^k beta^(l+1)``-derivation on a regular algebra.
    """
    if not is_regular(A):
        raise NotRegular("inner derivations need a regular algebra")
    u1 = fraction_array(u1)
    u2 = fraction_array(u2)
    for name, u in (("u1", u1), ("u2", u2)):
        if u.shape != (A.n,):
            raise DimensionMismatch(f"{name} must have length {A.n}")
        if not is_fixed(A, u):
            raise NotFixedPoint(f"{name} is not fixed by alpha and beta")
    ad = exact_einsum("i,j,ijqp->pq", u1, u2, A.bracket)
    return matmul(ad, twist_power(A, k, l))


def derivation_bracket(D, E) -> np.ndarray:
    """Commutator ``D E - E D``."""
    D = fraction_array(D)
    E = fraction_array(E)
    if D.ndim != 2 or D.shape[0] != D.shape[1] or D.shape != E.shape:
        raise DimensionMismatch(f"cannot bracket shapes {D.shape} and {E.shape}")
    return matmul(D, E) - matmul(E, D)
