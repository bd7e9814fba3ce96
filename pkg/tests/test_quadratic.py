import random
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bihom3.algebra import (
    NotRegular,
    PreconditionFailed,
    ThreeBihomLieAlgebra,
    check_three_bihom_lie,
    is_morphism,
)
from bihom3.generators import conjugate, random_unimodular
from bihom3.io import load_corpus
from bihom3.linalg import (
    DimensionMismatch, diag, equal, fraction_array, identity, invert, matmul, rank, zeros,
)
from bihom3.quadratic import (
    BilinearForm,
    NoIsotropicComplement,
    QuadraticAlgebra,
    check_quadratic,
    check_tstar_symmetry,
    coadjoint_rep,
    derived_series,
    descending_series,
    dual_representation,
    hyperbolic_form,
    ideal_bracket_vanishes,
    is_isometry,
    is_isotropic,
    is_nilpotent,
    is_solvable,
    isotropic_complement,
    orthogonal_complement,
    reconstruct,
    series_length,
    t_star_extension,
    tstar_cocycle_space,
)
from bihom3.representations import (
    Cocycle, Representation, adjoint_rep, check_cocycle, check_representation, cocycle_space,
)

from conftest import abelian

TSTAR_READY = ["nilpotent4", "simple4", "simple4_twisted"]


@lru_cache(maxsize=None)
def admissible(name):
    return tuple(tstar_cocycle_space(load_corpus(name)))


def upper_half(n):
    return identity(2 * n)[:, n:]


# ---------------------------------------------------------------- forms

def test_simple_algebra_euclidean_form(simple4):
    assert check_quadratic(simple4, BilinearForm(identity(4))).passed


def test_nilpotent_identity_form_not_invariant(nil4):
    report = check_quadratic(nil4, BilinearForm(identity(4)))
    assert report.failed_axioms() == ["invariant"]


def test_abelian_form_conditions():
    A = abelian(2)
    assert check_quadratic(A, BilinearForm(diag([1, -1]))).passed
    assert check_quadratic(A, BilinearForm(diag([1, 0]))).failed_axioms() == ["nondegenerate"]
    skewed = fraction_array([[1, 1], [0, 1]])
    assert check_quadratic(A, BilinearForm(skewed)).failed_axioms() == ["symmetric"]
    twisted = ThreeBihomLieAlgebra(A.bracket, skewed, identity(2))
    assert check_quadratic(twisted, BilinearForm(identity(2))).failed_axioms() == ["self-adjoint-alpha"]


def test_form_dimension_mismatch(nil4):
    with pytest.raises(DimensionMismatch):
        check_quadratic(nil4, BilinearForm(identity(3)))


def test_hyperbolic_form_values():
    q = hyperbolic_form(2)
    assert q([1, 0, 0, 0], [0, 0, 1, 0]) == 1
    assert q([1, 0, 0, 0], [0, 1, 0, 0]) == 0
    assert rank(q.gram) == 4


# ---------------------------------------------------------------- duals

def test_dual_is_involutive(nil4):
    R, _ = adjoint_rep(nil4)
    D, _ = dual_representation(nil4, R)
    DD, _ = dual_representation(nil4, D)
    assert DD == R
    assert equal(D.rho[0, 1], -nil4.bracket[0, 1])


def test_coadjoint_valid_for_identity_maps():
    for name in ["nilpotent4", "simple4", "solvable3", "nilpotent5", "simple4_twisted"]:
        A = load_corpus(name)
        R, report = coadjoint_rep(A)
        assert report.passed, name
        assert check_representation(A, R).passed, name


def test_coadjoint_fails_for_nonorthogonal_twist():
    A = load_corpus("nilpotent4_twisted")
    R, report = coadjoint_rep(A)
    assert report.failed_axioms() == ["alpha-compatible", "beta-compatible"]
    assert not check_representation(A, R).passed


@pytest.mark.parametrize("name", ["nilpotent4", "nilpotent4_twisted", "simple4_twisted", "solvable4"])
def test_dual_report_agrees_with_direct_check(name):
    A = load_corpus(name)
    R, _ = adjoint_rep(A)
    D, report = dual_representation(A, R)
    assert report.passed == check_representation(A, D).passed
    assert "printed" in report.side_reports


def test_dual_of_zero_representation():
    A = load_corpus("nilpotent4_twisted")
    R = Representation.zero(4, diag([2, 3]), diag([1, 5]))
    D, report = dual_representation(A, R)
    assert report.passed and check_representation(A, D).passed


# ---------------------------------------------------------------- series

@pytest.mark.parametrize("name,derived,descending,solvable,nilpotent", [
    ("abelian3", [3, 0], [3, 0], True, True),
    ("nilpotent4", [4, 1, 0], [4, 1, 0], True, True),
    ("nilpotent5", [5, 2, 0], [5, 2, 1, 0], True, True),
    ("solvable3", [3, 1, 0], [3, 1], True, False),
    ("simple4", [4], [4], False, False),
    ("simple4_twisted", [4], [4], False, False),
])
def test_series(name, derived, descending, solvable, nilpotent):
    A = load_corpus(name)
    assert [s.shape[1] for s in derived_series(A)] == derived
    assert [s.shape[1] for s in descending_series(A)] == descending
    assert is_solvable(A) is solvable
    assert is_nilpotent(A) is nilpotent


def test_series_length():
    assert series_length(descending_series(load_corpus("nilpotent5"))) == 3
    assert series_length(derived_series(load_corpus("simple4"))) is None


def test_nilpotent_implies_solvable_on_twists():
    for name in ["nilpotent4_twisted", "nilpotent4", "solvable4"]:
        A = load_corpus(name)
        assert not is_nilpotent(A) or is_solvable(A)


# ---------------------------------------------------------------- subspaces

def test_orthogonal_complement_and_isotropy():
    q = hyperbolic_form(2)
    perp = orthogonal_complement(q, [[1, 0, 0, 0]])
    assert perp.shape == (4, 3)
    assert all(q([1, 0, 0, 0], perp[:, j]) == 0 for j in range(3))
    assert equal(orthogonal_complement(q, []), identity(4))
    assert is_isotropic(q, [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert not is_isotropic(q, [[1, 0, 1, 0]])


def test_isotropic_complement_is_dual():
    q = hyperbolic_form(3)
    rng = random.Random(4)
    g = random_unimodular(rng, 6)
    gi = invert(g)
    f = BilinearForm(matmul(gi.T, q.gram, gi))
    I = matmul(g, upper_half(3))
    W = isotropic_complement(f, I)
    assert is_isotropic(f, W)
    assert equal(matmul(I.T, f.gram, W), identity(3))


def test_no_invariant_complement():
    J = fraction_array([[1, 1], [0, 1]])
    f = BilinearForm(fraction_array([[0, 1], [1, 0]]))
    assert isotropic_complement(f, [[1, 0]]).shape == (2, 1)
    with pytest.raises(NoIsotropicComplement):
        isotropic_complement(f, [[1, 0]], (J,))
    A = ThreeBihomLieAlgebra(zeros((2,) * 4), J, identity(2))
    assert check_quadratic(A, f).passed
    with pytest.raises(NoIsotropicComplement):
        reconstruct(QuadraticAlgebra(A, f), [[1, 0]])


# ---------------------------------------------------------------- T* extensions

@pytest.mark.parametrize("name", TSTAR_READY + ["abelian3"])
def test_tstar_zero_cocycle(name):
    A = load_corpus(name)
    Q = t_star_extension(A)
    assert Q.n == 2 * A.n
    assert check_three_bihom_lie(Q.algebra).passed
    assert check_quadratic(Q.algebra, Q.form).passed
    assert ideal_bracket_vanishes(Q.algebra, Q.form, upper_half(A.n))


@pytest.mark.parametrize("name", TSTAR_READY)
def test_tstar_nonzero_cocycle(name):
    A = load_corpus(name)
    space = admissible(name)
    assert len(space) == 1 and np.any(space[0].theta != 0)
    Q = t_star_extension(A, space[0])
    assert check_quadratic(Q.algebra, Q.form).passed
    assert check_three_bihom_lie(Q.algebra).passed


def test_tstar_rejects_asymmetric_cocycle(nil4):
    R, _ = coadjoint_rep(nil4)
    asymmetric = [th for th in cocycle_space(nil4, R) if not check_tstar_symmetry(nil4, th).passed]
    assert asymmetric
    th = asymmetric[0]
    assert check_cocycle(nil4, R, th).passed
    with pytest.raises(PreconditionFailed, match="symmetry condition fails at witness") as info:
        t_star_extension(nil4, th)
    v = info.value.report.first("symmetry")
    assert len(v.witness) == 4 and v.lhs != v.rhs


def test_tstar_rejects_non_cocycle(nil4):
    th = zeros((4, 4, 4, 4))
    th[0, 1, 2, 3] = 1
    with pytest.raises(PreconditionFailed, match="not-a-cocycle"):
        t_star_extension(nil4, Cocycle(th))


def test_tstar_with_invalid_coadjoint():
    A = load_corpus("nilpotent4_twisted")
    Q = t_star_extension(A)
    # the form is fine, the extended bracket is not multiplicative
    assert check_quadratic(Q.algebra, Q.form).passed
    assert check_three_bihom_lie(Q.algebra).failed_axioms() == ["multiplicative-alpha",
                                                                 "multiplicative-beta"]
    with pytest.raises(PreconditionFailed, match="coadjoint representation fails: alpha-compatible, beta-compatible"):
        t_star_extension(A, strict=True)


def test_tstar_preconditions():
    singular = ThreeBihomLieAlgebra(zeros((2,) * 4), diag([0, 1]), identity(2))
    with pytest.raises(NotRegular):
        t_star_extension(singular)


# ---------------------------------------------------------------- reconstruction

def test_ideal_bracket_preconditions(nil4):
    Q = t_star_extension(nil4)
    with pytest.raises(PreconditionFailed, match="dimension"):
        ideal_bracket_vanishes(Q.algebra, Q.form, identity(8)[:, 5:])
    with pytest.raises(PreconditionFailed, match="odd-dimension"):
        ideal_bracket_vanishes(abelian(3), BilinearForm(identity(3)), [[1, 0, 0]])
    flat = t_star_extension(abelian(2))
    with pytest.raises(PreconditionFailed, match="not-isotropic"):
        ideal_bracket_vanishes(flat.algebra, flat.form, [[1, 0, 0, 0], [0, 0, 1, 0]])


@pytest.mark.parametrize("name", TSTAR_READY)
def test_reconstruct_roundtrip(name):
    A = load_corpus(name)
    th = admissible(name)[0]
    Q = t_star_extension(A, th)
    B, theta, phi, report = reconstruct(Q, upper_half(A.n))
    assert report.passed
    assert B == A
    assert theta == th
    assert equal(phi, identity(2 * A.n))


@settings(max_examples=6)
@given(st.sampled_from(TSTAR_READY), st.integers(0, 10 ** 6), st.integers(-2, 2))
def test_reconstruct_transported(name, seed, scale):
    A = load_corpus(name)
    th = Cocycle(scale * admissible(name)[0].theta)
    Q = t_star_extension(A, th)
    rng = random.Random(seed)
    n = A.n
    g = random_unimodular(rng, 2 * n)
    gi = invert(g)
    moved = QuadraticAlgebra(conjugate(Q.algebra, g), BilinearForm(matmul(gi.T, Q.form.gram, gi)))
    assert check_quadratic(moved.algebra, moved.form).passed
    rec = reconstruct(moved, matmul(g, upper_half(n)))
    assert rec.report.passed
    # the quotient is isomorphic to A through the L-part of the complement
    psi = matmul(gi, rec.complement)[:n]
    assert rank(psi) == n
    assert is_morphism(psi, rec.quotient, A).passed


def test_reconstruct_requires_quadratic():
    A = ThreeBihomLieAlgebra(zeros((4,) * 4), diag([2, 1, 1, 1]), identity(4))
    with pytest.raises(PreconditionFailed, match="not-quadratic: self-adjoint-alpha"):
        reconstruct(QuadraticAlgebra(A, hyperbolic_form(2)), upper_half(2))


# ---------------------------------------------------------------- isometries

def test_isometry_examples(simple4):
    Q = QuadraticAlgebra(abelian(2), BilinearForm(diag([1, -1])))
    assert is_isometry(-identity(2), Q, Q).passed
    assert is_isometry(diag([1, 2]), Q, Q).failed_axioms() == ["isometry"]
    E = QuadraticAlgebra(simple4, BilinearForm(identity(4)))
    assert is_isometry(-identity(4), E, E).passed
    report = is_isometry(2 * identity(4), E, E)
    assert set(report.failed_axioms()) == {"bracket", "isometry"}
    assert is_isometry(zeros((4, 4)), E, E).failed_axioms() == ["invertible", "isometry"]
