"""Core algebra types and axiom checkers.

Brackets are stored as dense structure-constant tensors: ``c[i, j, k, l]``
is the coefficient of ``e_l`` in ``[e_i, e_j, e_k]``.  Maps act on column
vectors, so ``alpha[:, i]`` is the image of ``e_i``.

All checkers evaluate identities on basis tuples by multilinear expansion
and return an :class:`AxiomReport`; witnesses are reported 1-based and in
lexicographic order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .linalg import (
    DimensionMismatch,
    Scaled,
    column_stack,
    equal,
    exact_einsum,
    fraction_array,
    identity,
    in_span,
    int_einsum,
    invert,
    matmul,
    rank,
    SingularMatrix,
    zeros,
)

__all__ = [
    "DependentSpanInput",
    "PreconditionFailed",
    "NotFixedPoint",
    "NotRegular",
    "Violation",
    "AxiomReport",
    "compare",
    "compare_maps",
    "transform_slots",
    "apply_output",
    "ThreeBihomLieAlgebra",
    "BihomLieAlgebra",
    "TotallyBihomAssocAlgebra",
    "bihom_skew_tensor",
    "jacobi_sides",
    "check_three_bihom_lie",
    "check_bihom_lie",
    "check_totally_assoc",
    "check_tensor_condition",
    "subspace_basis",
    "is_subalgebra",
    "is_ideal",
    "is_morphism",
    "graph_subspace",
    "is_regular",
    "inverse_maps",
    "require_regular",
    "fixed_points",
    "is_fixed",
]

class DependentSpanInput(ValueError):
    """Raised when a spanning set that must be a basis is linearly dependent."""


class PreconditionFailed(ValueError):
    """Raised when an operation's hypotheses do not hold for its inputs.

    ``reason`` names the failed condition; ``report`` optionally carries the
    axiom report that exposed it.
    """

    def __init__(self, reason: str, report: "AxiomReport | None" = None):
        super().__init__(reason)
        self.reason = reason
        self.report = report


class NotFixedPoint(PreconditionFailed):
    pass


class NotRegular(PreconditionFailed):
    pass


# ---------------------------------------------------------------------------
# reports


@dataclass
class Violation:
    axiom: str
    witness: tuple[int, ...]
    lhs: np.ndarray
    rhs: np.ndarray

    def residual(self) -> np.ndarray:
        return self.lhs - self.rhs


@dataclass
class AxiomReport:
    """Outcome of an axiom scan.

    ``axioms`` maps every evaluated axiom id to its violation count, in the
    order the axioms were scanned.  ``side_reports`` hold informational
    scans (alternative readings of an identity) that never affect ``passed``.
    """

    axioms: dict[str, int] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)
    side_reports: dict[str, "AxiomReport"] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed

    def mark(self, axiom: str) -> None:
        self.axioms.setdefault(axiom, 0)

    def add(self, axiom: str, witness, lhs, rhs) -> None:
        self.axioms[axiom] = self.axioms.get(axiom, 0) + 1
        self.violations.append(
            Violation(axiom, tuple(int(w) + 1 for w in witness), np.asarray(lhs), np.asarray(rhs))
        )

    def merge(self, other: "AxiomReport", prefix: str = "") -> "AxiomReport":
        for name, count in other.axioms.items():
            self.axioms[prefix + name] = self.axioms.get(prefix + name, 0) + count
        for v in other.violations:
            self.violations.append(Violation(prefix + v.axiom, v.witness, v.lhs, v.rhs))
        return self

    def failed_axioms(self) -> list[str]:
        return [name for name, count in self.axioms.items() if count]

    def first(self, axiom: str | None = None) -> Violation | None:
        for v in self.violations:
            if axiom is None or v.axiom == axiom:
                return v
        return None

    def __repr__(self) -> str:
        status = "passed" if self.passed else f"failed {self.failed_axioms()}"
        return f"<AxiomReport {status}, {len(self.violations)} violations>"


def compare(report: AxiomReport, axiom: str, lhs, rhs, axes: int = 1) -> None:
    """Record one violation per index where two tensors disagree.

    ``lhs``/``rhs`` are Fraction arrays or :class:`Scaled` tensors whose last
    ``axes`` axes hold the compared value (vector or matrix); the leading axes
    index the witness tuple.
    """
    lhs = lhs if isinstance(lhs, Scaled) else Scaled.of(lhs)
    rhs = rhs if isinstance(rhs, Scaled) else Scaled.of(rhs)
    if lhs.shape != rhs.shape:
        raise DimensionMismatch(f"cannot compare shapes {lhs.shape} and {rhs.shape}")
    report.mark(axiom)
    for idx in lhs.differs(rhs, axes):
        report.add(axiom, idx, lhs.at(idx), rhs.at(idx))


def compare_maps(report: AxiomReport, axiom: str, lhs: np.ndarray, rhs: np.ndarray) -> None:
    """Compare two linear maps column by column (witness = basis index)."""
    compare(report, axiom, np.asarray(lhs).T, np.asarray(rhs).T)


# ---------------------------------------------------------------------------
# tensor helpers


def transform_slots(c: np.ndarray, a, b, d) -> np.ndarray:
    """Tensor of ``(i, j, k) -> [a e_i, b e_j, d e_k]`` for a trilinear ``c``."""
    return exact_einsum("ai,bj,ck,abct->ijkt", a, b, d, c)


def apply_output(m: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Compose a linear map after the output slot of a multilinear tensor."""
    return exact_einsum("ts,...s->...t", m, c)


def _as_basis(vectors, n: int) -> np.ndarray:
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        mat = fraction_array(vectors)
        if mat.shape[0] != n:
            raise DimensionMismatch(f"subspace vectors must have length {n}")
    else:
        mat = column_stack([fraction_array(v) for v in vectors], n)
    if rank(mat) != mat.shape[1]:
        raise DependentSpanInput("spanning vectors are linearly dependent")
    return mat


# ---------------------------------------------------------------------------
# algebra types


def _square(m, n: int, name: str) -> np.ndarray:
    m = fraction_array(m)
    if m.shape != (n, n):
        raise DimensionMismatch(f"{name} must be {n}x{n}, got {m.shape}")
    return m


@dataclass(frozen=True, eq=False)
class ThreeBihomLieAlgebra:
    """Structure constants ``bracket[i, j, k, l]`` plus the twisting maps.

    The axioms are not assumed; use :func:`check_three_bihom_lie`.
    """

    bracket: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        c = fraction_array(self.bracket)
        n = c.shape[0] if c.ndim == 4 else -1
        if c.ndim != 4 or c.shape != (n,) * 4:
            raise DimensionMismatch(f"bracket tensor must be (n,n,n,n), got {c.shape}")
        object.__setattr__(self, "bracket", c)
        object.__setattr__(self, "alpha", _square(self.alpha, n, "alpha"))
        object.__setattr__(self, "beta", _square(self.beta, n, "beta"))

    @property
    def n(self) -> int:
        return self.bracket.shape[0]

    @classmethod
    def from_entries(cls, n: int, entries, alpha=None, beta=None, skew: bool = False):
        """Build from ``{(i, j, k): {l: value}}`` or ``(i, j, k, l, value)`` records.

        Indices are 1-based.  With ``skew=True`` each record is extended to
        all six permutations of ``(i, j, k)`` with the sign of the permutation.
        """
        c = zeros((n, n, n, n))
        records = []
        if isinstance(entries, dict):
            for (i, j, k), out in entries.items():
                for l, v in out.items():
                    records.append((i, j, k, l, v))
        else:
            records = list(entries)
        for i, j, k, l, v in records:
            v = fraction_array(v).item()
            if skew:
                for (p, q, r), sign in _PERMS3:
                    idx = (i, j, k)
                    c[idx[p] - 1, idx[q] - 1, idx[r] - 1, l - 1] = sign * v
            else:
                c[i - 1, j - 1, k - 1, l - 1] = v
        return cls(
            c,
            identity(n) if alpha is None else alpha,
            identity(n) if beta is None else beta,
        )

    def __call__(self, x, y, z) -> np.ndarray:
        """Bracket of three vectors by multilinear expansion."""
        return exact_einsum("i,j,k,ijkt->t", fraction_array(x), fraction_array(y),
                            fraction_array(z), self.bracket)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThreeBihomLieAlgebra):
            return NotImplemented
        return (equal(self.bracket, other.bracket) and equal(self.alpha, other.alpha)
                and equal(self.beta, other.beta))

    __hash__ = None  # type: ignore[assignment]


_PERMS3 = [
    ((0, 1, 2), 1), ((1, 0, 2), -1), ((0, 2, 1), -1),
    ((2, 1, 0), -1), ((1, 2, 0), 1), ((2, 0, 1), 1),
]


@dataclass(frozen=True, eq=False)
class BihomLieAlgebra:
    """Binary bracket ``bracket[i, j, l]`` with twisting maps ``alpha``, ``beta``."""

    bracket: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        c = fraction_array(self.bracket)
        n = c.shape[0] if c.ndim == 3 else -1
        if c.ndim != 3 or c.shape != (n,) * 3:
            raise DimensionMismatch(f"binary bracket must be (n,n,n), got {c.shape}")
        object.__setattr__(self, "bracket", c)
        object.__setattr__(self, "alpha", _square(self.alpha, n, "alpha"))
        object.__setattr__(self, "beta", _square(self.beta, n, "beta"))

    @property
    def n(self) -> int:
        return self.bracket.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BihomLieAlgebra):
            return NotImplemented
        return (equal(self.bracket, other.bracket) and equal(self.alpha, other.alpha)
                and equal(self.beta, other.beta))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class TotallyBihomAssocAlgebra:
    """Trilinear product ``product[i, j, k, l]`` with twisting maps."""

    product: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        c = fraction_array(self.product)
        n = c.shape[0] if c.ndim == 4 else -1
        if c.ndim != 4 or c.shape != (n,) * 4:
            raise DimensionMismatch(f"product tensor must be (n,n,n,n), got {c.shape}")
        object.__setattr__(self, "product", c)
        object.__setattr__(self, "alpha", _square(self.alpha, n, "alpha"))
        object.__setattr__(self, "beta", _square(self.beta, n, "beta"))

    @property
    def n(self) -> int:
        return self.product.shape[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TotallyBihomAssocAlgebra):
            return NotImplemented
        return (equal(self.product, other.product) and equal(self.alpha, other.alpha)
                and equal(self.beta, other.beta))

    __hash__ = None  # type: ignore[assignment]


# ---------------------------------------------------------------------------
# checkers


def _check_multiplicative(report, c, maps: dict[str, np.ndarray]) -> None:
    for name, m in maps.items():
        compare(report, f"multiplicative-{name}", apply_output(m, c), transform_slots(c, m, m, m))


def bihom_skew_tensor(c: np.ndarray, alpha, beta) -> np.ndarray:
    """``S[x, y, z] = [beta x, beta y, alpha z]``."""
    return transform_slots(c, beta, beta, alpha)


def jacobi_sides(c: np.ndarray, alpha, beta) -> tuple[Scaled, Scaled]:
    """Both sides of the 3-BiHom-Jacobi identity as tensors over ``(u,v,x,y,z)``.

    ``lhs = [b2 u, b2 v, [b x, b y, a z]]`` and
    ``rhs = J(y,z,u,v,x) - J(x,z,u,v,y) + J(x,y,u,v,z)`` where ``J`` is the
    left-hand tensor.
    """
    beta2 = matmul(beta, beta)
    inner = Scaled.of(bihom_skew_tensor(c, alpha, beta))
    outer = Scaled.of(exact_einsum("au,bv,abwt->uvwt", beta2, beta2, c))
    lhs = int_einsum("uvwt,xyzw->uvxyzt", outer, inner)
    rhs = (lhs.permute("yzuvxt->uvxyzt") - lhs.permute("xzuvyt->uvxyzt")
           + lhs.permute("xyuvzt->uvxyzt"))
    return lhs, rhs


def check_three_bihom_lie(A: ThreeBihomLieAlgebra) -> AxiomReport:
    """Scan commutation, multiplicativity, Bihom-skewsymmetry and 3-BiHom-Jacobi."""
    report = AxiomReport()
    c, a, b = A.bracket, A.alpha, A.beta
    compare_maps(report, "commute", matmul(a, b), matmul(b, a))
    _check_multiplicative(report, c, {"alpha": a, "beta": b})
    s = Scaled.of(bihom_skew_tensor(c, a, b))
    compare(report, "skew-12", s, -s.permute("yxzt->xyzt"))
    compare(report, "skew-23", s, -s.permute("xzyt->xyzt"))
    lhs, rhs = jacobi_sides(c, a, b)
    compare(report, "jacobi", lhs, rhs)
    return report


def check_bihom_lie(B: BihomLieAlgebra) -> AxiomReport:
    report = AxiomReport()
    c, a, b = B.bracket, B.alpha, B.beta
    compare_maps(report, "commute", matmul(a, b), matmul(b, a))
    for name, m in (("alpha", a), ("beta", b)):
        compare(report, f"multiplicative-{name}", exact_einsum("ts,ijs->ijt", m, c),
                exact_einsum("ai,bj,abt->ijt", m, m, c))
    s = Scaled.of(exact_einsum("ai,bj,abt->ijt", b, a, c))  # [beta x, alpha y]
    compare(report, "skew", s, -s.permute("yxt->xyt"))
    beta2 = matmul(b, b)
    outer = Scaled.of(exact_einsum("ax,awt->xwt", beta2, c))
    # T[x, y, z] = [b2 x, [b y, a z]]
    t = int_einsum("xwt,yzw->xyzt", outer, s)
    cyclic = t + t.permute("yzxt->xyzt") + t.permute("zxyt->xyzt")
    compare(report, "jacobi", cyclic, Scaled(np.zeros(cyclic.shape, dtype=object)))
    return report


def check_totally_assoc(T: TotallyBihomAssocAlgebra) -> AxiomReport:
    report = AxiomReport()
    p, a, b = T.product, T.alpha, T.beta
    compare_maps(report, "commute", matmul(a, b), matmul(b, a))
    _check_multiplicative(report, p, {"alpha": a, "beta": b})
    ident = identity(T.n)
    # (a1 a2 a3) b(a4) b(a5)
    left_outer = Scaled.of(transform_slots(p, ident, b, b))
    lhs = int_einsum("wdet,abcw->abcdet", left_outer, p)
    # a(a1) (a2 a3 a4) b(a5)
    mid_outer = Scaled.of(transform_slots(p, a, ident, b))
    mid = int_einsum("awet,bcdw->abcdet", mid_outer, p)
    # a(a1) a(a2) (a3 a4 a5)
    right_outer = Scaled.of(transform_slots(p, a, a, ident))
    right = int_einsum("abwt,cdew->abcdet", right_outer, p)
    compare(report, "assoc-left", lhs, mid)
    compare(report, "assoc-right", mid, right)
    return report


def check_tensor_condition(T: TotallyBihomAssocAlgebra) -> AxiomReport:
    """``b(a1) b(a2) a(a3) = b(a2) b(a1) a(a3) = b(a1) b(a3) a(a2)``."""
    report = AxiomReport()
    s = Scaled.of(transform_slots(T.product, T.beta, T.beta, T.alpha))
    compare(report, "swap-12", s, s.permute("yxzt->xyzt"))
    compare(report, "swap-23", s, s.permute("xzyt->xyzt"))
    return report


# ---------------------------------------------------------------------------
# subspaces and morphisms


def subspace_basis(A: ThreeBihomLieAlgebra, vectors) -> np.ndarray:
    """Column matrix of a subspace given by independent vectors."""
    return _as_basis(vectors, A.n)


def _images_in_span(basis: np.ndarray, images: np.ndarray) -> bool:
    return in_span(basis, images.reshape(basis.shape[0], -1))


def is_subalgebra(A: ThreeBihomLieAlgebra, vectors) -> bool:
    s = _as_basis(vectors, A.n)
    if s.shape[1] == 0:
        return True
    if not _images_in_span(s, matmul(A.alpha, s)) or not _images_in_span(s, matmul(A.beta, s)):
        return False
    br = exact_einsum("ia,jb,kc,ijkt->tabc", s, s, s, A.bracket)
    return _images_in_span(s, br)


def is_ideal(A: ThreeBihomLieAlgebra, vectors) -> bool:
    """Bihom ideal: map-stable and ``[S, L, L]`` contained in ``S``."""
    s = _as_basis(vectors, A.n)
    if s.shape[1] == 0:
        return True
    if not _images_in_span(s, matmul(A.alpha, s)) or not _images_in_span(s, matmul(A.beta, s)):
        return False
    br = exact_einsum("ia,ijkt->tajk", s, A.bracket)
    return _images_in_span(s, br)


def is_morphism(F, A: ThreeBihomLieAlgebra, B: ThreeBihomLieAlgebra) -> AxiomReport:
    F = fraction_array(F)
    if F.shape != (B.n, A.n):
        raise DimensionMismatch(f"morphism matrix must be {B.n}x{A.n}, got {F.shape}")
    report = AxiomReport()
    compare(report, "bracket", apply_output(F, A.bracket), transform_slots(B.bracket, F, F, F))
    compare_maps(report, "alpha", matmul(F, A.alpha), matmul(B.alpha, F))
    compare_maps(report, "beta", matmul(F, A.beta), matmul(B.beta, F))
    return report


def graph_subspace(F, A: ThreeBihomLieAlgebra, B: ThreeBihomLieAlgebra) -> list[np.ndarray]:
    """Basis ``{e_i + F e_i}`` of the graph of ``F`` inside ``A (+) B``."""
    F = fraction_array(F)
    if F.shape != (B.n, A.n):
        raise DimensionMismatch(f"graph matrix must be {B.n}x{A.n}, got {F.shape}")
    out = []
    for i in range(A.n):
        v = zeros(A.n + B.n)
        v[i] = Fraction(1)
        v[A.n:] = F[:, i]
        out.append(v)
    return out


def is_regular(A: ThreeBihomLieAlgebra) -> bool:
    """Both maps invertible and multiplicative."""
    if rank(A.alpha) < A.n or rank(A.beta) < A.n:
        return False
    report = AxiomReport()
    _check_multiplicative(report, A.bracket, {"alpha": A.alpha, "beta": A.beta})
    return report.passed


def inverse_maps(A: ThreeBihomLieAlgebra) -> tuple[np.ndarray, np.ndarray]:
    try:
        return invert(A.alpha), invert(A.beta)
    except SingularMatrix as exc:
        raise NotRegular("structure maps are not invertible") from exc


def require_regular(A: ThreeBihomLieAlgebra) -> None:
    if not is_regular(A):
        raise NotRegular("algebra is not regular (maps must be invertible and multiplicative)")


def fixed_points(A: ThreeBihomLieAlgebra) -> list[np.ndarray]:
    """Basis of ``{a : alpha(a) = beta(a) = a}`` by exact kernel computation."""
    from .linalg import kernel_basis

    n = A.n
    system = np.concatenate([A.alpha - identity(n), A.beta - identity(n)], axis=0)
    return kernel_basis(system)


def is_fixed(A: ThreeBihomLieAlgebra, v) -> bool:
    v = fraction_array(v)
    return equal(matmul(A.alpha, v), v) and equal(matmul(A.beta, v), v)
