"""Invariant bilinear forms, dual modules, solvability, T*_theta-extensions
and the reconstruction of quadratic algebras from isotropic ideals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    AxiomReport,
    NotRegular,
    PreconditionFailed,
    ThreeBihomLieAlgebra,
    _as_basis,
    bihom_skew_tensor,
    compare,
    compare_maps,
    is_ideal,
    is_morphism,
    is_regular,
    transform_slots,
)
from .linalg import (
    DimensionMismatch,
    SingularMatrix,
    block_diag,
    column_space,
    equal,
    exact_einsum,
    fraction_array,
    identity,
    int_einsum,
    invert,
    is_zero,
    kernel_basis,
    matmul,
    rank,
    solve,
    solution_space,
    zeros,
)
from .representations import (
    Cocycle,
    Representation,
    _extension_bracket,
    _rho_at,
    adjoint_rep,
    check_cocycle,
    check_representation,
    cocycle_residuals,
)

__all__ = [
    "BilinearForm",
    "QuadraticAlgebra",
    "NoIsotropicComplement",
    "check_quadratic",
    "dual_representation",
    "coadjoint_rep",
    "derived_series",
    "descending_series",
    "is_solvable",
    "is_nilpotent",
    "series_length",
    "hyperbolic_form",
    "check_tstar_symmetry",
    "t_star_extension",
    "tstar_cocycle_space",
    "orthogonal_complement",
    "is_isotropic",
    "ideal_bracket_vanishes",
    "isotropic_complement",
    "reconstruct",
    "is_isometry",
    "Reconstruction",
]


class NoIsotropicComplement(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class BilinearForm:
    gram: np.ndarray

    def __post_init__(self):
        g = fraction_array(self.gram)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionMismatch(f"Gram matrix must be square, got {g.shape}")
        object.__setattr__(self, "gram", g)

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def __call__(self, x, y):
        return matmul(fraction_array(x), self.gram, fraction_array(y))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BilinearForm):
            return NotImplemented
        return equal(self.gram, other.gram)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class QuadraticAlgebra:
    algebra: ThreeBihomLieAlgebra
    form: BilinearForm

    def __post_init__(self):
        if self.algebra.n != self.form.n:
            raise DimensionMismatch(
                f"form has size {self.form.n}, algebra has dim {self.algebra.n}")

    @property
    def n(self) -> int:
        return self.algebra.n


def check_quadratic(A: ThreeBihomLieAlgebra, f: BilinearForm) -> AxiomReport:
    """Nondegeneracy, symmetry, ``alpha beta``-invariance and self-adjointness
    of ``alpha`` and ``beta``.  Scalar identities are compared with the
    witness covering every index."""
    if f.n != A.n:
        raise DimensionMismatch(f"form has size {f.n}, algebra has dim {A.n}")
    report = AxiomReport()
    G = f.gram
    report.mark("nondegenerate")
    r = rank(G)
    if r < A.n:
        report.add("nondegenerate", (), np.array([Fraction(r)]), np.array([Fraction(A.n)]))
    compare(report, "symmetric", G, G.T, axes=0)
    # f([b x1, b x2, a x3], a x4) = -f(a x3, [b x1, b x2, a x4])
    s = bihom_skew_tensor(A.bracket, A.alpha, A.beta)
    lhs = int_einsum("ijks,sl->ijkl", s, matmul(G, A.alpha))
    rhs = -int_einsum("kt,ijlt->ijkl", matmul(A.alpha.T, G), s)
    compare(report, "invariant", lhs, rhs, axes=0)
    for name, m in (("alpha", A.alpha), ("beta", A.beta)):
        compare(report, f"self-adjoint-{name}", matmul(m.T, G), matmul(G, m), axes=0)
    return report


# ---------------------------------------------------------------------------
# dual and coadjoint modules


def _dual_conditions(A: ThreeBihomLieAlgebra, R: Representation, printed: bool) -> AxiomReport:
    """Conditions on ``rho`` itself that make ``-rho^T`` a representation.

    ``printed=True`` evaluates only the product rule with ``rho(beta u, beta v)``
    in its first product, as the statement displays it.
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
    k_bbi = transform_slots(A.bracket, b, b, I)       # [b u, b v, x]
    # b_M rho([b u, b v, x], b y) and b_M rho(b x, [b u, b v, y])
    t_left = int_einsum("pq,uvxs,by,sbqr->uvxypr", bM, k_bbi, b, rho)
    t_right = int_einsum("pq,ax,uvys,asqr->uvxypr", bM, b, k_bbi, rho)
    lhs3 = int_einsum("xypq,uvqr->uvxypr", rho, rho_abab)
    ones = np.ones(n, dtype=object)
    if printed:
        first = int_einsum("uvpq,uvqr,x,y->uvxypr", rho_aa, rho_bb, ones, ones)
        compare(report, "product-rule", lhs3, first - t_left - t_right, axes=2)
        return report
    compare(report, "alpha-compatible", exact_einsum("pq,xyqr->xypr", aM, rho_aa),
            exact_einsum("xypq,qr->xypr", rho, aM), axes=2)
    compare(report, "beta-compatible", exact_einsum("pq,xyqr->xypr", bM, rho_bb),
            exact_einsum("xypq,qr->xypr", rho, bM), axes=2)
    first = int_einsum("uvpq,xyqr->uvxypr", rho_aa, rho_bb)
    compare(report, "product-rule", lhs3, first - t_left - t_right, axes=2)
    rho_a_i = _rho_at(rho, a, I)        # rho(a u, y) over (u, y)
    rho_ab_b = _rho_at(rho, ab, b)      # rho(ab v, b x) over (v, x)
    rho_b_ab = _rho_at(rho, b, ab)      # rho(b x, ab u) over (x, u)
    rhs4 = -(int_einsum("uypq,vxqr->uvxypr", rho_a_i, rho_ab_b)
             + int_einsum("vypq,xuqr->uvxypr", rho_a_i, rho_b_ab)
             + lhs3)
    compare(report, "bracket-rule", t_left, rhs4, axes=2)
    return report


def dual_representation(A: ThreeBihomLieAlgebra, R: Representation) -> tuple[Representation, AxiomReport]:
    """``rho~(x, y) = -rho(x, y)^T`` on the dual module with transposed maps.

    The report evaluates, directly on ``rho``, the four conditions that are
    equivalent to ``rho~`` being a representation.  Its side report
    ``printed`` holds the product rule in the form with ``rho(beta u, beta v)``.
    """
    if R.n != A.n:
        raise DimensionMismatch(f"representation is over a {R.n}-dim algebra, algebra has dim {A.n}")
    dual = Representation(-R.rho.transpose(0, 1, 3, 2), R.alpha_M.T, R.beta_M.T)
    report = _dual_conditions(A, R, printed=False)
    report.side_reports["printed"] = _dual_conditions(A, R, printed=True)
    return dual, report


def coadjoint_rep(A: ThreeBihomLieAlgebra) -> tuple[Representation, AxiomReport]:
    """The dual of the adjoint representation, acting on ``L*``."""
    R, _ = adjoint_rep(A)
    return dual_representation(A, R)


# ---------------------------------------------------------------------------
# derived and descending series


def _span_of_brackets(A: ThreeBihomLieAlgebra, S1, S2, S3) -> np.ndarray:
    images = exact_einsum("ia,jb,kc,ijkt->abct", S1, S2, S3, A.bracket)
    return column_space(images.reshape(-1, A.n).T)


def _series(A: ThreeBihomLieAlgebra, step, max_steps: int | None) -> list[np.ndarray]:
    limit = A.n + 1 if max_steps is None else max_steps
    series = [identity(A.n)]
    for _ in range(limit):
        current = series[-1]
        if current.shape[1] == 0:
            break
        nxt = step(current)
        if nxt.shape[1] == current.shape[1]:
            break
        series.append(nxt)
    return series


def derived_series(A: ThreeBihomLieAlgebra, max_steps: int | None = None) -> list[np.ndarray]:
    """``L^(0) = L``, ``L^(k+1) = [L^(k), L^(k), L]`` as column bases.

    Stops once a member is zero, once the series stabilizes, or after
    ``max_steps`` steps (default ``n + 1``, which always suffices).
    """
    full = identity(A.n)
    return _series(A, lambda S: _span_of_brackets(A, S, S, full), max_steps)


def descending_series(A: ThreeBihomLieAlgebra, max_steps: int | None = None) -> list[np.ndarray]:
    """``L^0 = L``, ``L^(k+1) = [L^k, L, L]`` as column bases."""
    full = identity(A.n)
    return _series(A, lambda S: _span_of_brackets(A, S, full, full), max_steps)


def series_length(series: list[np.ndarray]) -> int | None:
    """Index of the first zero member, or ``None`` when the series never vanishes."""
    for k, S in enumerate(series):
        if S.shape[1] == 0:
            return k
    return None


def is_solvable(A: ThreeBihomLieAlgebra, max_steps: int | None = None) -> bool:
    return series_length(derived_series(A, max_steps)) is not None


def is_nilpotent(A: ThreeBihomLieAlgebra, max_steps: int | None = None) -> bool:
    return series_length(descending_series(A, max_steps)) is not None


# ---------------------------------------------------------------------------
# T*_theta-extensions


def hyperbolic_form(n: int) -> BilinearForm:
    """``q(x + f, y + g) = f(y) + g(x)`` on ``L (+) L*``."""
    G = zeros((2 * n, 2 * n))
    G[:n, n:] = identity(n)
    G[n:, :n] = identity(n)
    return BilinearForm(G)


def _paired(A: ThreeBihomLieAlgebra, theta: np.ndarray) -> np.ndarray:
    """``S[x1, x2, x3, x4] = theta(b x1, b x2, a x3)(a x4)``."""
    return exact_einsum("ijka,al->ijkl", transform_slots(theta, A.beta, A.beta, A.alpha), A.alpha)


def check_tstar_symmetry(A: ThreeBihomLieAlgebra, th: Cocycle) -> AxiomReport:
    """``theta(b x1, b x2, a x3)(a x4) + theta(b x1, b x2, a x4)(a x3) = 0``.

    The side report ``printed`` evaluates the variant whose second term is
    ``theta(b x1, b x3, a x3)(a x4)``.
    """
    if th.theta.shape != (A.n,) * 4:
        raise DimensionMismatch(f"cocycle into L* must have shape {(A.n,) * 4}")
    S = _paired(A, th.theta)
    report = AxiomReport()
    compare(report, "symmetry", S, -S.transpose(0, 1, 3, 2), axes=0)
    printed = AxiomReport()
    diag = np.einsum("ikkl->ikl", S)
    compare(printed, "symmetry", S, -np.broadcast_to(diag[:, None, :, :], S.shape), axes=0)
    report.side_reports["printed"] = printed
    return report


def tstar_cocycle_space(A: ThreeBihomLieAlgebra) -> list[Cocycle]:
    """Basis of the cocycles for the coadjoint module that also satisfy the
    symmetry condition, i.e. the admissible inputs of :func:`t_star_extension`."""
    R, _ = coadjoint_rep(A)

    def residual(theta):
        S = _paired(A, theta)
        return cocycle_residuals(A, R, theta) + [S + S.transpose(0, 1, 3, 2)]

    n = A.n
    return [Cocycle(t) for t in solution_space(residual, (n, n, n, n))]


def _tstar_algebra(A: ThreeBihomLieAlgebra, R: Representation, theta: np.ndarray) -> QuadraticAlgebra:
    return QuadraticAlgebra(_extension_bracket(A, R, theta), hyperbolic_form(A.n))


def t_star_extension(A: ThreeBihomLieAlgebra, th: Cocycle | None = None,
                     strict: bool = False) -> QuadraticAlgebra:
    """T_theta-extension by the coadjoint module with the hyperbolic form.

    Requires a regular algebra, a cocycle for the coadjoint module and the
    symmetry condition of :func:`check_tstar_symmetry`.  When the
    coadjoint module itself fails the representation conditions (which
    happens for twists that are not orthogonal for the standard pairing) the
    extended bracket is not multiplicative; ``strict=True`` turns that case
    into :class:`PreconditionFailed` instead of returning the structure.
    """
    if not is_regular(A):
        raise NotRegular("T* extensions need a regular algebra")
    n = A.n
    th = Cocycle(zeros((n, n, n, n))) if th is None else th
    R, _ = coadjoint_rep(A)
    if strict:
        rep = check_representation(A, R)
        if not rep.passed:
            raise PreconditionFailed(
                f"coadjoint representation fails: {', '.join(rep.failed_axioms())}", rep)
    report = check_cocycle(A, R, th)
    if not report.passed:
        raise PreconditionFailed(f"not-a-cocycle: {', '.join(report.failed_axioms())}", report)
    report = check_tstar_symmetry(A, th)
    if not report.passed:
        v = report.first()
        raise PreconditionFailed(f"symmetry condition fails at witness {v.witness}", report)
    return _tstar_algebra(A, R, th.theta)


# ---------------------------------------------------------------------------
# orthogonality and isotropic ideals


def _basis_or_empty(vectors, n: int) -> np.ndarray:
    if isinstance(vectors, (list, tuple)) and not vectors:
        return zeros((n, 0))
    return _as_basis(vectors, n)


def orthogonal_complement(f: BilinearForm, S) -> np.ndarray:
    """``{x : f(x, s) = 0 for all s in S}`` as a column basis."""
    S = _basis_or_empty(S, f.n)
    if S.shape[1] == 0:
        return identity(f.n)
    vectors = kernel_basis(matmul(f.gram, S).T)
    out = zeros((f.n, len(vectors)))
    for j, v in enumerate(vectors):
        out[:, j] = v
    return out


def is_isotropic(f: BilinearForm, S) -> bool:
    S = _basis_or_empty(S, f.n)
    return is_zero(matmul(S.T, f.gram, S))


def _require_half_isotropic_ideal(A: ThreeBihomLieAlgebra, f: BilinearForm, I: np.ndarray) -> None:
    if A.n % 2:
        raise PreconditionFailed(f"odd-dimension: dim {A.n} is not even")
    if I.shape[1] != A.n // 2:
        raise PreconditionFailed(f"dimension: ideal has dim {I.shape[1]}, need {A.n // 2}")
    if not is_ideal(A, I):
        raise PreconditionFailed("not-an-ideal: subspace is not a Bihom ideal")
    if not is_isotropic(f, I):
        raise PreconditionFailed("not-isotropic: subspace is not isotropic")


def ideal_bracket_vanishes(A: ThreeBihomLieAlgebra, f: BilinearForm, I) -> bool:
    """Whether ``[beta(I), beta(L), alpha(I)] = 0`` for a half-dimensional
    isotropic ideal."""
    I = _as_basis(I, A.n)
    _require_half_isotropic_ideal(A, f, I)
    if rank(A.alpha) < A.n:
        raise PreconditionFailed("alpha-surjective: alpha is singular")
    values = exact_einsum("ia,jx,kb,ijkt->axbt",
                          matmul(A.beta, I), A.beta, matmul(A.alpha, I), A.bracket)
    return is_zero(values)


def _greedy_complement(I: np.ndarray) -> np.ndarray | None:
    """Standard basis vectors extending ``I`` to a basis of its double."""
    N, d = I.shape
    chosen = I
    for j in range(N):
        if chosen.shape[1] == min(2 * d, N):
            break
        cand = np.hstack([chosen, identity(N)[:, j:j + 1]])
        if rank(cand) == cand.shape[1]:
            chosen = cand
    W = chosen[:, d:]
    return W if W.shape[1] == d else None


def _invariant_complement(I: np.ndarray, maps) -> np.ndarray | None:
    """A complement of ``I`` stable under every matrix in ``maps``.

    It is the kernel of a projection ``I X`` onto ``I`` commuting with the
    maps; the conditions on ``X`` are linear, so one exact solve decides
    whether such a complement exists.
    """
    N, d = I.shape
    blocks = [np.kron(I.T, identity(d))]          # X I = identity
    rhs = [identity(d).reshape(-1, order="F")]
    for m in maps:
        # m I X - I X m = 0, in column-major vec form
        blocks.append(np.kron(identity(N), matmul(m, I)) - np.kron(m.T, I))
        rhs.append(zeros(N * N))
    x = solve(np.vstack(blocks), np.concatenate(rhs))
    if x is None:
        return None
    X = x.reshape((d, N), order="F")
    W = _basis_or_empty(kernel_basis(X), N)
    return W if W.shape[1] == N - d else None


def isotropic_complement(f: BilinearForm, I, maps=()) -> np.ndarray:
    """An isotropic complement of an isotropic subspace, dual to it.

    Without ``maps`` the starting complement is made of standard basis
    vectors; with ``maps`` (commuting, self-adjoint for ``f``, preserving
    ``I``) it is stable under them, and so is the result.  The start is made
    dual to ``I`` and then shifted by multiples of ``I`` until it pairs to
    zero with itself.  Column ``b`` of the result ``W`` satisfies
    ``f(i_a, w_b) = delta_ab``.
    """
    I = _as_basis(I, f.n)
    d = I.shape[1]
    maps = [fraction_array(m) for m in maps]
    W = _invariant_complement(I, maps) if maps else _greedy_complement(I)
    if W is None or W.shape[1] != d:
        raise NoIsotropicComplement("no complement of the right dimension"
                                    + (" stable under the structure maps" if maps else ""))
    try:
        W = matmul(W, invert(matmul(I.T, f.gram, W)))
    except SingularMatrix as exc:
        raise NoIsotropicComplement("pairing between subspace and complement is singular") from exc
    W = W - matmul(I, matmul(W.T, f.gram, W)) * Fraction(1, 2)
    if not is_zero(matmul(W.T, f.gram, W)) or not equal(matmul(I.T, f.gram, W), identity(d)):
        raise NoIsotropicComplement("correction did not produce an isotropic dual complement")
    return W


# ---------------------------------------------------------------------------
# reconstruction


def is_isometry(phi, Q: QuadraticAlgebra, Q2: QuadraticAlgebra) -> AxiomReport:
    """Algebra isomorphism that carries one form onto the other."""
    phi = fraction_array(phi)
    if phi.shape != (Q2.n, Q.n):
        raise DimensionMismatch(f"phi must be {Q2.n}x{Q.n}, got {phi.shape}")
    report = is_morphism(phi, Q.algebra, Q2.algebra)
    report.mark("invertible")
    if Q.n != Q2.n or rank(phi) < Q.n:
        report.add("invertible", (), np.array([Fraction(rank(phi))]), np.array([Fraction(Q.n)]))
    compare(report, "isometry", matmul(phi.T, Q2.form.gram, phi), Q.form.gram, axes=0)
    return report


@dataclass
class Reconstruction:
    quotient: ThreeBihomLieAlgebra
    cocycle: Cocycle
    phi: np.ndarray
    complement: np.ndarray
    target: QuadraticAlgebra
    report: AxiomReport

    def __iter__(self):
        return iter((self.quotient, self.cocycle, self.phi, self.report))


def reconstruct(Q: QuadraticAlgebra, I) -> Reconstruction:
    """Exhibit ``Q`` as isometric to a T*_theta-extension of ``B = Q / I``.

    Unpacks as ``(B, theta, phi, report)``.  ``phi`` maps ``Q`` onto
    ``B (+) B*`` and the report certifies that it is an isometric algebra
    isomorphism onto the extension; it also records the cocycle, symmetry and
    coadjoint scans for ``B``.  The complement used to identify ``B`` is
    chosen stable under ``alpha`` and ``beta`` (otherwise the maps would not
    be intertwined); :class:`NoIsotropicComplement` is raised when none exists.
    """
    A, f = Q.algebra, Q.form
    I = _as_basis(I, A.n)
    _require_half_isotropic_ideal(A, f, I)
    if not is_regular(A):
        raise NotRegular("reconstruction needs a regular algebra")
    quad = check_quadratic(A, f)
    if not quad.passed:
        raise PreconditionFailed(f"not-quadratic: {', '.join(quad.failed_axioms())}", quad)
    n = A.n // 2
    B0 = isotropic_complement(f, I, (A.alpha, A.beta))
    basis_inv = invert(np.hstack([B0, I]))
    alpha_bar = matmul(basis_inv, A.alpha, B0)[:n]
    beta_bar = matmul(basis_inv, A.beta, B0)[:n]
    coords = exact_einsum("st,ia,jb,kc,ijkt->abcs", basis_inv, B0, B0, B0, A.bracket)
    B = ThreeBihomLieAlgebra(coords[..., :n], alpha_bar, beta_bar)
    # q*(i)(x) = q(i, x) on I-coordinates, evaluated on the complement basis
    pairing = matmul(I.T, f.gram, B0)
    theta = Cocycle(exact_einsum("abce,ed->abcd", coords[..., n:], pairing))
    phi = matmul(block_diag(identity(n), pairing.T), basis_inv)
    R, _ = coadjoint_rep(B)
    target = _tstar_algebra(B, R, theta.theta)
    report = is_isometry(phi, Q, target)
    report.merge(check_representation(B, R), "coadjoint/")
    report.merge(check_cocycle(B, R, theta), "cocycle/")
    report.merge(check_tstar_symmetry(B, theta), "symmetry/")
    return Reconstruction(B, theta, phi, B0, target, report)
