"""Representations, semidirect products, 3-cocycles and T_theta-extensions.

A representation stores ``rho[i, j]`` as the ``m x m`` matrix of
``rho(e_i, e_j)``; a cocycle stores ``theta[i, j, k]`` as a vector of the
module.  Extension spaces are ordered with the algebra block first.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AxiomReport,
    PreconditionFailed,
    NotRegular,
    Scaled,
    ThreeBihomLieAlgebra,
    check_three_bihom_lie,
    compare,
    compare_maps,
    is_morphism,
    is_regular,
    transform_slots,
)
from .linalg import (
    DimensionMismatch,
    SingularMatrix,
    equal,
    exact_einsum,
    fraction_array,
    identity,
    int_einsum,
    invert,
    matmul,
    rank,
    solution_space,
    zeros,
)

__all__ = [
    "Representation",
    "Cocycle",
    "check_representation",
    "adjoint_rep",
    "semidirect_product",
    "check_cocycle",
    "t_theta_extension",
    "coboundary_cocycle",
    "cocycle_sum",
    "extension_isomorphism",
    "zero_cocycle",
    "check_extension",
    "cocycle_space",
    "cocycle_residuals",
]


@dataclass(frozen=True, eq=False)
class Representation:
    """``rho`` has shape ``(n, n, m, m)`` and is skew in its first two axes."""

    rho: np.ndarray
    alpha_M: np.ndarray
    beta_M: np.ndarray

    def __post_init__(self):
        rho = fraction_array(self.rho)
        if rho.ndim != 4 or rho.shape[0] != rho.shape[1] or rho.shape[2] != rho.shape[3]:
            raise DimensionMismatch(f"rho must have shape (n,n,m,m), got {rho.shape}")
        if not equal(rho, -rho.transpose(1, 0, 2, 3)):
            raise ValueError("rho must be skew: rho(i,j) = -rho(j,i)")
        m = rho.shape[2]
        for name in ("alpha_M", "beta_M"):
            mat = fraction_array(getattr(self, name))
            if mat.shape != (m, m):
                raise DimensionMismatch(f"{name} must be {m}x{m}, got {mat.shape}")
            object.__setattr__(self, name, mat)
        object.__setattr__(self, "rho", rho)
        if not equal(matmul(self.alpha_M, self.beta_M), matmul(self.beta_M, self.alpha_M)):
            raise ValueError("alpha_M and beta_M must commute")

    @property
    def n(self) -> int:
        return self.rho.shape[0]

    @property
    def m(self) -> int:
        return self.rho.shape[2]

    @classmethod
    def zero(cls, n: int, alpha_M, beta_M) -> "Representation":
        m = fraction_array(alpha_M).shape[0]
        return cls(zeros((n, n, m, m)), alpha_M, beta_M)

    def __call__(self, x, y) -> np.ndarray:
        """``rho(x, y)`` for arbitrary vectors."""
        return exact_einsum("i,j,ijpq->pq", fraction_array(x), fraction_array(y), self.rho)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Representation):
            return NotImplemented
        return (equal(self.rho, other.rho) and equal(self.alpha_M, other.alpha_M)
                and equal(self.beta_M, other.beta_M))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class Cocycle:
    """Trilinear map into a module: ``theta[i, j, k]`` is a vector of length m."""

    theta: np.ndarray

    def __post_init__(self):
        th = fraction_array(self.theta)
        if th.ndim != 4 or not th.shape[0] == th.shape[1] == th.shape[2]:
            raise DimensionMismatch(f"theta must have shape (n,n,n,m), got {th.shape}")
        object.__setattr__(self, "theta", th)

    @property
    def n(self) -> int:
        return self.theta.shape[0]

    @property
    def m(self) -> int:
        return self.theta.shape[3]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cocycle):
            return NotImplemented
        return equal(self.theta, other.theta)

    __hash__ = None  # type: ignore[assignment]


def zero_cocycle(n: int, m: int) -> Cocycle:
    return Cocycle(zeros((n, n, n, m)))


def _check_dims(A: ThreeBihomLieAlgebra, R: Representation) -> None:
    if R.n != A.n:
        raise DimensionMismatch(f"representation is over a {R.n}-dim algebra, algebra has dim {A.n}")


def _rho_at(rho: np.ndarray, a, b) -> np.ndarray:
    """Tensor of ``rho(a e_u, b e_v)`` over ``(u, v)``."""
    return exact_einsum("iu,jv,ijpq->uvpq", a, b, rho)


# ---------------------------------------------------------------------------
# representation axioms


def _rep_conditions(A: ThreeBihomLieAlgebra, R: Representation, literal: bool) -> AxiomReport:
    """Evaluate the four representation conditions.

    Axiom ids: ``alpha-compatible`` and ``beta-compatible`` (the module maps
    intertwine ``rho``), ``product-rule`` (composition of two actions) and
    ``bracket-rule`` (action of a bracket).  With ``literal=True`` the beta
    and bracket rules use a repeated first argument ``(u, u)``; otherwise
    the ``(u, v)`` form used throughout the constructions.
    """
    report = AxiomReport()
    n = A.n
    I = identity(n)
    a, b = A.alpha, A.beta
    ab = matmul(a, b)
    aM, bM = R.alpha_M, R.beta_M
    rho = R.rho

    rho_aa = _rho_at(rho, a, a)
    rho_bb = _rho_at(rho, b, b)
    rho_abab = _rho_at(rho, ab, ab)
    rhs1 = exact_einsum("pq,uvqr->uvpr", aM, rho)
    rhs2 = exact_einsum("pq,uvqr->uvpr", bM, rho)

    if not literal:
        compare(report, "alpha-compatible", exact_einsum("uvpq,qr->uvpr", rho_aa, aM), rhs1, axes=2)
        compare(report, "beta-compatible", exact_einsum("uvpq,qr->uvpr", rho_bb, bM), rhs2, axes=2)
    else:
        # rho(beta u, beta u) beta_M = beta_M rho(u, v)
        diag_bb = exact_einsum("uupq->upq", rho_bb)
        lhs2 = exact_einsum("upq,qr,v->uvpr", diag_bb, bM, np.ones(n, dtype=object))
        compare(report, "beta-compatible", lhs2, rhs2, axes=2)

    # [beta u, beta v, x]
    k_bbi = transform_slots(A.bracket, b, b, I)

    if not literal:
        lhs3 = int_einsum("uvpq,xyqr->uvxypr", rho_abab, rho)
        t1 = int_einsum("xypq,uvqr->uvxypr", rho_bb, rho_aa)
        t2 = int_einsum("uvxs,by,sbpq,qr->uvxypr", k_bbi, b, rho, bM)
        t3 = int_einsum("ax,uvys,aspq,qr->uvxypr", b, k_bbi, rho, bM)
        compare(report, "product-rule", lhs3, t1 + t2 + t3, axes=2)

    # rho([b u, b v, x], b y) beta_M
    #      = rho(ab v, b x) rho(a u, y) + rho(b x, ab u) rho(a v, y) + rho(ab u, ab v) rho(x, y)
    rho_ab_b = _rho_at(rho, ab, b)      # rho(ab v, b x) indexed (v, x)
    rho_b_ab = _rho_at(rho, b, ab)      # rho(b x, ab u) indexed (x, u)
    rho_a_i = _rho_at(rho, a, I)        # rho(a u, y) indexed (u, y)
    r1 = int_einsum("vxpq,uyqr->uvxypr", rho_ab_b, rho_a_i)
    r2 = int_einsum("xupq,vyqr->uvxypr", rho_b_ab, rho_a_i)
    r3 = int_einsum("uvpq,xyqr->uvxypr", rho_abab, rho)
    rhs4 = r1 + r2 + r3
    if not literal:
        lhs4 = int_einsum("uvxs,by,sbpq,qr->uvxypr", k_bbi, b, rho, bM)
    else:
        k_diag = exact_einsum("uuxs->uxs", k_bbi)
        lhs4 = int_einsum("uxs,by,sbpq,qr,v->uvxypr", k_diag, b, rho, bM,
                          np.ones(n, dtype=object))
    compare(report, "bracket-rule", lhs4, rhs4, axes=2)
    return report


def check_representation(A: ThreeBihomLieAlgebra, R: Representation) -> AxiomReport:
    """Check the four representation conditions on all basis tuples.

    The returned report additionally carries ``literal``: the evaluation of
    the beta and bracket rules with the repeated-argument reading.  It is
    informational and does not affect ``passed``.
    """
    _check_dims(A, R)
    report = _rep_conditions(A, R, literal=False)
    report.side_reports["literal"] = _rep_conditions(A, R, literal=True)
    return report


def adjoint_rep(A: ThreeBihomLieAlgebra) -> tuple[Representation, AxiomReport]:
    """``ad(u, v)(x) = [u, v, x]`` on ``L`` with the algebra's own maps."""
    if not is_regular(A):
        raise NotRegular("adjoint representation needs a regular algebra")
    rho = A.bracket.transpose(0, 1, 3, 2)
    try:
        R = Representation(rho, A.alpha, A.beta)
    except ValueError as exc:
        raise PreconditionFailed(f"adjoint map is not skew: {exc}") from exc
    return R, check_representation(A, R)


# ---------------------------------------------------------------------------
# extensions


def _extension_bracket(A: ThreeBihomLieAlgebra, R: Representation, theta: np.ndarray | None):
    n, m = A.n, R.m
    g = matmul(invert(A.alpha), A.beta)        # alpha^-1 beta
    h = matmul(R.alpha_M, invert(R.beta_M))    # alpha_M beta_M^-1
    N = n + m
    c = zeros((N,) * 4)
    c[:n, :n, :n, :n] = A.bracket
    if theta is not None:
        c[:n, :n, :n, n:] = theta
    # [e_i, e_j, f_k] = rho(e_i, e_j) f_k
    c[:n, :n, n:, n:] = R.rho.transpose(0, 1, 3, 2)
    # X[i, k] = rho(e_i, g e_k) h
    X = exact_einsum("sk,ispq,qr->ikpr", g, R.rho, h)
    # [e_i, f_j, e_k] = -rho(e_i, g e_k) h f_j
    c[:n, n:, :n, n:] = -X.transpose(0, 3, 1, 2)
    # [f_i, e_j, e_k] = rho(e_j, g e_k) h f_i
    c[n:, :n, :n, n:] = X.transpose(3, 0, 1, 2)
    return ThreeBihomLieAlgebra(c, _block(A.alpha, R.alpha_M), _block(A.beta, R.beta_M))


def _block(a, b):
    from .linalg import block_diag

    return block_diag(a, b)


def _require_extension_inputs(A: ThreeBihomLieAlgebra, R: Representation) -> None:
    _check_dims(A, R)
    if rank(A.alpha) < A.n:
        raise PreconditionFailed("alpha-surjective: alpha is singular")
    if rank(R.beta_M) < R.m:
        raise PreconditionFailed("beta_M-surjective: beta_M is singular")
    report = check_representation(A, R)
    if not report.passed:
        raise PreconditionFailed(
            f"not-a-representation: {', '.join(report.failed_axioms())}", report)


def semidirect_product(A: ThreeBihomLieAlgebra, R: Representation) -> ThreeBihomLieAlgebra:
    """Algebra on ``L (+) M`` with bracket
    ``[u+x, v+y, w+z] = [u,v,w] + rho(u,v) z - rho(u, a^-1 b w) aM bM^-1 y
    + rho(v, a^-1 b w) aM bM^-1 x``."""
    _require_extension_inputs(A, R)
    return _extension_bracket(A, R, None)


def _cocycle_shape(A, R, th: Cocycle) -> None:
    if th.n != A.n or th.m != R.m:
        raise DimensionMismatch(
            f"cocycle shape {th.theta.shape} incompatible with dims ({A.n}, {R.m})")


def cocycle_sides(A: ThreeBihomLieAlgebra, R: Representation, theta: np.ndarray):
    """Both sides of the 5-variable cocycle identity as tensors over ``x1..x5``."""
    a, b = A.alpha, A.beta
    b2 = matmul(b, b)
    inner = Scaled.of(transform_slots(A.bracket, b, b, a))         # [b x3, b x4, a x5]
    th_bba = Scaled.of(transform_slots(theta, b, b, a))           # theta(b x3, b x4, a x5)
    th_outer = Scaled.of(exact_einsum("au,bv,abwt->uvwt", b2, b2, theta))
    rho_b2 = Scaled.of(_rho_at(R.rho, b2, b2))
    k = (int_einsum("uvwt,xyzw->uvxyzt", th_outer, inner)
         + int_einsum("uvtq,xyzq->uvxyzt", rho_b2, th_bba))
    rhs = (k.permute("yzuvxt->uvxyzt") - k.permute("xzuvyt->uvxyzt")
           + k.permute("xyuvzt->uvxyzt"))
    return k, rhs


def cocycle_residuals(A: ThreeBihomLieAlgebra, R: Representation, theta: np.ndarray) -> list:
    """Differences of both sides of every cocycle condition (all zero iff cocycle)."""
    out = []
    for m, mM in ((A.alpha, R.alpha_M), (A.beta, R.beta_M)):
        out.append(exact_einsum("ts,ijks->ijkt", mM, theta) - transform_slots(theta, m, m, m))
    s = Scaled.of(transform_slots(theta, A.beta, A.beta, A.alpha))
    out.append(s + s.permute("yxzt->xyzt"))
    out.append(s + s.permute("xzyt->xyzt"))
    lhs, rhs = cocycle_sides(A, R, theta)
    out.append(lhs - rhs)
    return out


def cocycle_space(A: ThreeBihomLieAlgebra, R: Representation) -> list[Cocycle]:
    """A basis of all 3-cocycles for ``R``, by exact kernel computation."""
    _check_dims(A, R)
    return [Cocycle(t) for t in
            solution_space(lambda th: cocycle_residuals(A, R, th), (A.n, A.n, A.n, R.m))]


def check_cocycle(A: ThreeBihomLieAlgebra, R: Representation, th: Cocycle) -> AxiomReport:
    """Equivariance under both maps, Bihom-skewsymmetry, and the cocycle identity."""
    _check_dims(A, R)
    _cocycle_shape(A, R, th)
    report = AxiomReport()
    theta = th.theta
    for name, m, mM in (("alpha", A.alpha, R.alpha_M), ("beta", A.beta, R.beta_M)):
        compare(report, f"equivariant-{name}", exact_einsum("ts,ijks->ijkt", mM, theta),
                transform_slots(theta, m, m, m))
    s = Scaled.of(transform_slots(theta, A.beta, A.beta, A.alpha))
    compare(report, "skew-12", s, -s.permute("yxzt->xyzt"))
    compare(report, "skew-23", s, -s.permute("xzyt->xyzt"))
    lhs, rhs = cocycle_sides(A, R, theta)
    compare(report, "cocycle", lhs, rhs)
    return report


def t_theta_extension(A: ThreeBihomLieAlgebra, R: Representation, th: Cocycle,
                      validate: bool = True) -> ThreeBihomLieAlgebra:
    """Semidirect product bracket plus ``theta(u, v, w)`` in the module block."""
    _require_extension_inputs(A, R)
    _cocycle_shape(A, R, th)
    if validate:
        report = check_cocycle(A, R, th)
        if not report.passed:
            raise PreconditionFailed(f"not-a-cocycle: {', '.join(report.failed_axioms())}", report)
    return _extension_bracket(A, R, th.theta)


def _require_intertwiner(A, R, F) -> np.ndarray:
    F = fraction_array(F)
    if F.shape != (R.m, A.n):
        raise DimensionMismatch(f"F must be {R.m}x{A.n}, got {F.shape}")
    try:
        invert(A.alpha)
        invert(A.beta)
    except SingularMatrix as exc:
        raise PreconditionFailed("invertibility: alpha and beta must be invertible") from exc
    if not equal(matmul(F, A.alpha), matmul(R.alpha_M, F)):
        raise PreconditionFailed("intertwining: F alpha != alpha_M F")
    if not equal(matmul(F, A.beta), matmul(R.beta_M, F)):
        raise PreconditionFailed("intertwining: F beta != beta_M F")
    return F


def coboundary_cocycle(A: ThreeBihomLieAlgebra, R: Representation, F) -> Cocycle:
    """``theta_f(x,y,z) = F[x,y,z] - rho(x,y) F z + rho(x, a^-1 b z) F a b^-1 y
    - rho(y, a^-1 b z) F a b^-1 x``."""
    _check_dims(A, R)
    F = _require_intertwiner(A, R, F)
    g = matmul(invert(A.alpha), A.beta)
    kk = matmul(A.alpha, invert(A.beta))
    t1 = exact_einsum("ps,ijks->ijkp", F, A.bracket)
    t2 = exact_einsum("ijpq,qk->ijkp", R.rho, F)
    # X[i, k] = rho(e_i, g e_k); Y = F kk
    X = exact_einsum("sk,ispq->ikpq", g, R.rho)
    Y = matmul(F, kk)
    t3 = exact_einsum("ikpq,qj->ijkp", X, Y)
    t4 = exact_einsum("jkpq,qi->ijkp", X, Y)
    return Cocycle(t1 - t2 + t3 - t4)


def cocycle_sum(th1: Cocycle, th2: Cocycle) -> Cocycle:
    if th1.theta.shape != th2.theta.shape:
        raise DimensionMismatch(f"cocycle shapes differ: {th1.theta.shape} vs {th2.theta.shape}")
    return Cocycle(th1.theta + th2.theta)


def extension_isomorphism(A: ThreeBihomLieAlgebra, R: Representation, th: Cocycle,
                          F) -> tuple[np.ndarray, AxiomReport]:
    """``sigma(v + x) = v + F v + x`` and a report certifying it is an algebra
    isomorphism from ``T_theta(L)`` onto ``T_{theta + theta_F}(L)``."""
    _check_dims(A, R)
    _cocycle_shape(A, R, th)
    F = _require_intertwiner(A, R, F)
    if rank(R.beta_M) < R.m:
        raise PreconditionFailed("beta_M-surjective: beta_M is singular")
    n, m = A.n, R.m
    sigma = identity(n + m)
    sigma[n:, :n] = F
    source = _extension_bracket(A, R, th.theta)
    target = _extension_bracket(A, R, cocycle_sum(th, coboundary_cocycle(A, R, F)).theta)
    report = is_morphism(sigma, source, target)
    report.mark("invertible")
    if rank(sigma) < n + m:
        report.add("invertible", (), sigma, identity(n + m))
    return sigma, report


def check_extension(A, R, th: Cocycle | None = None) -> AxiomReport:
    """Axiom scan of the semidirect product / T_theta-extension without
    validating its inputs first."""
    theta = None if th is None else th.theta
    return check_three_bihom_lie(_extension_bracket(A, R, theta))
