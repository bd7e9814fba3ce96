"""Algebra-producing constructions: twists, tensor products, sums, induced algebras."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .algebra import (
    AxiomReport,
    BihomLieAlgebra,
    NotFixedPoint,
    PreconditionFailed,
    ThreeBihomLieAlgebra,
    TotallyBihomAssocAlgebra,
    _check_multiplicative,
    check_tensor_condition,
    check_three_bihom_lie,
    check_totally_assoc,
    is_fixed,
    transform_slots,
)
from .linalg import (
    block_diag,
    equal,
    exact_einsum,
    fraction_array,
    identity,
    matmul,
    matrix_power,
    rank,
    zeros,
)

__all__ = [
    "yau_twist",
    "twist",
    "power_twist",
    "tensor_product",
    "induced_binary",
    "direct_sum",
]


def _require_multiplicative(c, maps: dict) -> None:
    report = AxiomReport()
    _check_multiplicative(report, c, maps)
    if not report.passed:
        bad = ", ".join(report.failed_axioms())
        raise PreconditionFailed(f"multiplicativity: {bad}", report)


def _require_commuting(maps: dict) -> None:
    for (p, x), (q, y) in combinations(maps.items(), 2):
        if not equal(matmul(x, y), matmul(y, x)):
            raise PreconditionFailed(f"commutation: {p} and {q} do not commute")


def _require_valid(A: ThreeBihomLieAlgebra, what: str = "not-3-bihom-lie") -> None:
    report = check_three_bihom_lie(A)
    if not report.passed:
        raise PreconditionFailed(f"{what}: {', '.join(report.failed_axioms())}", report)


def yau_twist(L: ThreeBihomLieAlgebra, a, b) -> ThreeBihomLieAlgebra:
    """``[x, y, z]' = [a x, a y, b z]`` with structure maps ``a``, ``b``.

    ``L`` must be a 3-Lie algebra: its bracket has to pass the checker with
    identity maps (``L.alpha``/``L.beta`` are ignored).
    """
    a = fraction_array(a)
    b = fraction_array(b)
    _require_commuting({"a": a, "b": b})
    _require_multiplicative(L.bracket, {"a": a, "b": b})
    n = L.n
    _require_valid(ThreeBihomLieAlgebra(L.bracket, identity(n), identity(n)), "not-3-Lie")
    return ThreeBihomLieAlgebra(transform_slots(L.bracket, a, a, b), a, b)


def twist(A: ThreeBihomLieAlgebra, a, b) -> ThreeBihomLieAlgebra:
    """Twist by multiplicative maps ``a``, ``b`` commuting with each other and
    with the structure maps: bracket ``[a x, a y, b z]``, maps ``alpha a``,
    ``beta b``."""
    a = fraction_array(a)
    b = fraction_array(b)
    _require_commuting({"alpha": A.alpha, "beta": A.beta, "a'": a, "b'": b})
    _require_multiplicative(A.bracket, {"a'": a, "b'": b})
    return ThreeBihomLieAlgebra(
        transform_slots(A.bracket, a, a, b), matmul(A.alpha, a), matmul(A.beta, b)
    )


def power_twist(A: ThreeBihomLieAlgebra, k: int, validate: bool = True) -> ThreeBihomLieAlgebra:
    """``[x, y, z]_k = [alpha^k x, alpha^k y, beta^k z]`` with maps ``alpha^{k+1}``, ``beta^{k+1}``."""
    if k < 0:
        raise ValueError("power_twist needs k >= 0")
    if validate:
        _require_valid(A)
    return twist(A, matrix_power(A.alpha, k), matrix_power(A.beta, k))


def tensor_product(T: TotallyBihomAssocAlgebra, A: ThreeBihomLieAlgebra) -> ThreeBihomLieAlgebra:
    """Bracket ``(a (x) x, b (x) y, c (x) z) -> abc (x) [x, y, z]`` on ``T (x) A``.

    The basis vector ``e_i (x) f_j`` sits at 0-based index ``i * dim(A) + j``.
    """
    report = check_totally_assoc(T)
    if not report.passed:
        raise PreconditionFailed(f"not-totally-assoc: {', '.join(report.failed_axioms())}", report)
    report = check_tensor_condition(T)
    if not report.passed:
        raise PreconditionFailed(f"tensor-condition: {', '.join(report.failed_axioms())}", report)
    if rank(T.alpha) < T.n:
        raise PreconditionFailed("alpha-surjective: alpha of the associative factor is singular")
    _require_valid(A)
    n, m = T.n, A.n
    nm = n * m
    c = exact_einsum("abcd,xyzw->axbyczdw", T.product, A.bracket).reshape(nm, nm, nm, nm)
    return ThreeBihomLieAlgebra(c, np.kron(T.alpha, A.alpha), np.kron(T.beta, A.beta))


def induced_binary(A: ThreeBihomLieAlgebra, a) -> BihomLieAlgebra:
    """Binary algebra ``[x, y] = [a, x, y]`` for a vector fixed by both maps."""
    a = fraction_array(a)
    if a.shape != (A.n,):
        raise PreconditionFailed(f"vector must have length {A.n}")
    if not is_fixed(A, a):
        raise NotFixedPoint("vector is not fixed by alpha and beta")
    return BihomLieAlgebra(exact_einsum("i,ijkt->jkt", a, A.bracket), A.alpha, A.beta)


def direct_sum(A: ThreeBihomLieAlgebra, B: ThreeBihomLieAlgebra) -> ThreeBihomLieAlgebra:
    """Componentwise bracket on ``A (+) B``; ``A`` occupies the first indices."""
    n, m = A.n, B.n
    c = zeros((n + m,) * 4)
    c[:n, :n, :n, :n] = A.bracket
    c[n:, n:, n:, n:] = B.bracket
    return ThreeBihomLieAlgebra(c, block_diag(A.alpha, B.alpha), block_diag(A.beta, B.beta))
