"""Random valid instances for property tests.

Every generator takes a :class:`random.Random` so that runs are
reproducible from a seed (or from a hypothesis-drawn integer).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import numpy as np

from .algebra import ThreeBihomLieAlgebra, apply_output, transform_slots
from .constructions import yau_twist
from .io import load_corpus
from .linalg import block_diag, diag, fraction_array, identity, invert, matmul, matrix_power, zeros

__all__ = [
    "random_unimodular",
    "conjugate",
    "cayley",
    "random_two_step_nilpotent",
    "random_three_lie_with_endomorphism",
    "random_twist_input",
    "random_regular_algebra",
    "random_diagonal",
]


def random_unimodular(rng: random.Random, n: int, steps: int | None = None) -> np.ndarray:
    """Integer matrix with determinant +-1 built from elementary operations."""
    m = identity(n)
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            m[i] = m[i] + rng.choice([-2, -1, 1, 2]) * m[j]
    if rng.random() < 0.5:
        m[0] = -m[0]
    return m


def conjugate(A: ThreeBihomLieAlgebra, P) -> ThreeBihomLieAlgebra:
    """Transport the structure along the basis change ``x -> P x``."""
    P = fraction_array(P)
    Pi = invert(P)
    c = apply_output(P, transform_slots(A.bracket, Pi, Pi, Pi))
    return ThreeBihomLieAlgebra(c, matmul(P, A.alpha, Pi), matmul(P, A.beta, Pi))


def cayley(S) -> np.ndarray:
    """``(I - S)(I + S)^-1``, a rational rotation for skew-symmetric ``S``."""
    S = fraction_array(S)
    I = identity(S.shape[0])
    return matmul(I - S, invert(I + S))


def _random_skew(rng: random.Random, n: int) -> np.ndarray:
    S = zeros((n, n))
    for i, j in combinations(range(n), 2):
        S[i, j] = Fraction(rng.randint(-2, 2), rng.choice([1, 2]))
        S[j, i] = -S[i, j]
    return S


def random_two_step_nilpotent(rng: random.Random, v: int = 3, z: int = 1,
                              density: float = 0.6) -> ThreeBihomLieAlgebra:
    """``V (+) Z`` with an alternating trilinear map ``V^3 -> Z`` and identity maps.

    Every double bracket vanishes, so the result is a 3-Lie algebra.
    """
    n = v + z
    entries = []
    for i, j, k in combinations(range(1, v + 1), 3):
        for l in range(v + 1, n + 1):
            if rng.random() < density:
                entries.append((i, j, k, l, rng.choice([-2, -1, 1, 2, Fraction(1, 2)])))
    return ThreeBihomLieAlgebra.from_entries(n, entries, skew=True)


def _det3(m: np.ndarray) -> Fraction:
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def random_three_lie_with_endomorphism(rng: random.Random):
    """A 3-Lie algebra (identity maps) of dimension at most 4 and a random
    multiplicative map ``g`` of it, in a randomly changed basis."""
    family = rng.choice(["nilpotent4", "simple4", "solvable3", "abelian"])
    if family == "nilpotent4":
        L = load_corpus("nilpotent4")
        M = fraction_array([[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)])
        g = block_diag(M, fraction_array([[_det3(M)]]))
    elif family == "simple4":
        L = load_corpus("simple4")
        g = cayley(_random_skew(rng, 4))
        if rng.random() < 0.5:
            g = -g
    elif family == "solvable3":
        # [e1, e2, e3] = e1 is preserved by g = diag(1, G) with det G = 1
        L = load_corpus("solvable3")
        g = block_diag(identity(1), random_unimodular(rng, 2))
        if _det3(g) != 1:
            g[1] = -g[1]
    else:
        n = rng.randint(1, 4)
        L = ThreeBihomLieAlgebra(zeros((n,) * 4), identity(n), identity(n))
        g = fraction_array([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
    P = random_unimodular(rng, L.n)
    Pi = invert(P)
    return conjugate(L, P), matmul(P, g, Pi)


def random_twist_input(rng: random.Random):
    """``(L, a, b)`` with ``L`` 3-Lie and ``a, b`` commuting multiplicative maps
    (powers of one endomorphism)."""
    L, g = random_three_lie_with_endomorphism(rng)
    return L, matrix_power(g, rng.randint(0, 2)), matrix_power(g, rng.randint(0, 2))


def random_regular_algebra(rng: random.Random, tries: int = 50) -> ThreeBihomLieAlgebra:
    """A Yau twist by invertible commuting automorphisms."""
    for _ in range(tries):
        L, g = random_three_lie_with_endomorphism(rng)
        try:
            invert(g)
        except ValueError:
            continue
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        return yau_twist(L, matrix_power(g, p), matrix_power(g, q))
    raise RuntimeError("no invertible endomorphism found")


def random_diagonal(rng: random.Random, n: int, allow_zero: bool = False) -> np.ndarray:
    values = [-2, -1, 1, 2, 3] + ([0] if allow_zero else [])
    return diag([rng.choice(values) for _ in range(n)])
