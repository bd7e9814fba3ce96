"""Exact rational linear algebra on numpy object arrays.

Every matrix, vector and tensor in the package is a numpy array of dtype
``object`` whose entries are :class:`fractions.Fraction`.  Heavy
contractions are carried out on integer-scaled copies (``int64`` when the
result provably fits, Python integers otherwise) and only converted back to
fractions at the end.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm, prod
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SingularMatrix",
    "DimensionMismatch",
    "frac",
    "fraction_array",
    "zeros",
    "identity",
    "diag",
    "is_zero",
    "equal",
    "matmul",
    "matrix_power",
    "block_diag",
    "rank",
    "kernel_basis",
    "invert",
    "solve",
    "in_span",
    "column_stack",
    "column_space",
    "solution_space",
    "integer_scaled",
    "Scaled",
    "int_einsum",
    "exact_einsum",
    "format_scalar",
]

_INT64_SAFE = 2**62


class SingularMatrix(ValueError):
    """Raised when inverting a matrix of deficient rank."""


class DimensionMismatch(ValueError):
    """Raised when operand shapes are incompatible."""


def frac(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, or a ``"p/q"`` string) to a Fraction.

    Floats are rejected: the package never admits inexact scalars.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (bool, float)):
        raise TypeError(f"inexact or boolean scalar not allowed: {x!r}")
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational number")


_to_frac = np.frompyfunc(frac, 1, 1)


def fraction_array(data, shape: Sequence[int] | None = None) -> np.ndarray:
    """Build an object array of Fractions from nested data or an array."""
    arr = np.asarray(data, dtype=object)
    if arr.size:
        arr = _to_frac(arr)
    arr = np.asarray(arr, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    return arr


def zeros(shape) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int) -> np.ndarray:
    out = zeros((n, n))
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def diag(values: Iterable) -> np.ndarray:
    values = [frac(v) for v in values]
    out = zeros((len(values), len(values)))
    for i, v in enumerate(values):
        out[i, i] = v
    return out


def is_zero(a: np.ndarray) -> bool:
    return not np.any(np.asarray(a, dtype=object) != 0)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and not np.any(a != b)


def matmul(*ms: np.ndarray) -> np.ndarray:
    """Exact product of a chain of matrices (and possibly a trailing vector)."""
    return reduce(lambda a, b: np.dot(a, b), ms)


def matrix_power(a: np.ndarray, k: int) -> np.ndarray:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("matrix_power needs a square matrix")
    if k < 0:
        return matrix_power(invert(a), -k)
    result = identity(a.shape[0])
    base = a
    while k:
        if k & 1:
            result = np.dot(result, base)
        base = np.dot(base, base)
        k >>= 1
    return result


def block_diag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, m = a.shape[0], b.shape[0]
    out = zeros((n + m, n + m))
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def column_stack(vectors: Sequence[np.ndarray], length: int) -> np.ndarray:
    """Stack vectors as the columns of a ``length x len(vectors)`` matrix."""
    out = zeros((length, len(vectors)))
    for j, v in enumerate(vectors):
        v = np.asarray(v, dtype=object)
        if v.shape != (length,):
            raise DimensionMismatch(f"vector of shape {v.shape}, expected ({length},)")
        out[:, j] = v
    return out


# ---------------------------------------------------------------------------
# integer scaling

_numer = np.frompyfunc(lambda x: x.numerator, 1, 1)
_denom = np.frompyfunc(lambda x: x.denominator, 1, 1)


def integer_scaled(a: np.ndarray) -> tuple[np.ndarray, int]:
    """Return ``(ints, d)`` with ``a == ints / d`` and ``ints`` integral.

    ``ints`` is an object array of Python ints.
    """
    a = np.asarray(a, dtype=object)
    if a.size == 0:
        return np.zeros(a.shape, dtype=object), 1
    dens = _denom(a)
    d = lcm(*(int(x) for x in set(dens.ravel().tolist())))
    ints = np.asarray(_numer(a) * (d // dens), dtype=object)
    return ints, d


def _max_abs(ints: np.ndarray) -> int:
    if ints.size == 0:
        return 0
    return int(max(abs(int(ints.max())), abs(int(ints.min()))))


def _contracted_size(subscripts: str, shapes) -> int:
    inputs, output = subscripts.replace(" ", "").split("->")
    sizes: dict[str, int] = {}
    for term, shape in zip(inputs.split(","), shapes):
        for ch, s in zip(term, shape):
            sizes[ch] = s
    return prod(s for ch, s in sizes.items() if ch not in output) or 1


class Scaled:
    """An exact tensor stored as integer numerators over one common denominator."""

    __slots__ = ("ints", "d")

    def __init__(self, ints: np.ndarray, d: int = 1):
        self.ints = np.asarray(ints, dtype=object)
        self.d = int(d)

    @classmethod
    def of(cls, a: np.ndarray) -> "Scaled":
        return cls(*integer_scaled(a))

    @property
    def shape(self):
        return self.ints.shape

    def _common(self, other: "Scaled"):
        d = lcm(self.d, other.d)
        return self.ints * (d // self.d), other.ints * (d // other.d), d

    def __add__(self, other: "Scaled") -> "Scaled":
        a, b, d = self._common(other)
        return Scaled(a + b, d)

    def __sub__(self, other: "Scaled") -> "Scaled":
        a, b, d = self._common(other)
        return Scaled(a - b, d)

    def __neg__(self) -> "Scaled":
        return Scaled(-self.ints, self.d)

    def permute(self, spec: str) -> "Scaled":
        """Reorder axes with einsum notation, e.g. ``"yzuvxt->uvxyzt"``."""
        return Scaled(np.einsum(spec, self.ints), self.d)

    def differs(self, other: "Scaled", axes: int = 1) -> np.ndarray:
        """Indices (over all but the trailing ``axes`` axes) where self != other."""
        a, b, _ = self._common(other)
        diff = a != b
        if axes:
            diff = np.any(diff, axis=tuple(range(diff.ndim - axes, diff.ndim)))
        return np.argwhere(diff)

    def at(self, index) -> np.ndarray:
        return from_scaled(self.ints[tuple(index)], self.d)

    def fractions(self) -> np.ndarray:
        return from_scaled(self.ints, self.d)


def int_einsum(subscripts: str, *operands) -> Scaled:
    """Exact einsum over Fraction arrays (or :class:`Scaled`), as a :class:`Scaled`.

    Runs in int64 when the worst-case magnitude of the result fits, and in
    Python integers otherwise.
    """
    scaled = [op if isinstance(op, Scaled) else Scaled.of(op) for op in operands]
    d = prod(s.d for s in scaled)
    bound = prod(_max_abs(s.ints) for s in scaled) * _contracted_size(
        subscripts, [s.shape for s in scaled]
    )
    if bound < _INT64_SAFE:
        out = np.einsum(subscripts, *[s.ints.astype(np.int64) for s in scaled], optimize=True)
    else:
        out = np.einsum(subscripts, *[s.ints for s in scaled], optimize=True)
    return Scaled(np.asarray(out, dtype=object), d)


_make_frac = np.frompyfunc(lambda n, d: Fraction(int(n), int(d)), 2, 1)


def from_scaled(ints: np.ndarray, d: int) -> np.ndarray:
    ints = np.asarray(ints, dtype=object)
    if ints.size == 0:
        return zeros(ints.shape)
    return np.asarray(_make_frac(ints, d), dtype=object).reshape(ints.shape)


def exact_einsum(subscripts: str, *operands: np.ndarray) -> np.ndarray:
    """Exact einsum over Fraction arrays; returns a Fraction array."""
    return int_einsum(subscripts, *operands).fractions()


# ---------------------------------------------------------------------------
# elimination


def _integer_rows(a: np.ndarray) -> list[list[int]]:
    """Rows of ``a`` scaled to primitive integer vectors; zero rows and
    duplicates (up to sign) dropped.  The row space is unchanged."""
    seen = set()
    rows = []
    for row in np.asarray(a, dtype=object):
        if not np.any(row != 0):
            continue
        d = lcm(*(x.denominator for x in row))
        ints = [int(x * d) for x in row]
        g = reduce(gcd, ints)
        ints = [x // g for x in ints]
        lead = next(x for x in ints if x)
        if lead < 0:
            ints = [-x for x in ints]
        key = tuple(ints)
        if key not in seen:
            seen.add(key)
            rows.append(ints)
    return rows


def _bareiss_echelon(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Fraction-free row echelon form of ``a``.

    Returns the nonzero echelon rows (integer object array) and the pivot
    column indices.
    """
    a = np.asarray(a, dtype=object)
    ncols = a.shape[1] if a.ndim == 2 else 0
    rows = _integer_rows(a) if a.size else []
    if not rows:
        return np.zeros((0, ncols), dtype=object), []
    m = np.array(rows, dtype=object)
    nrows = m.shape[0]
    prev = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(m[r:, c] != 0)[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        piv = m[r, c]
        if r + 1 < nrows:
            below = m[r + 1 :, c : c + 1]
            m[r + 1 :, c + 1 :] = (piv * m[r + 1 :, c + 1 :] - below * m[r, c + 1 :]) // prev
            m[r + 1 :, c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: np.ndarray) -> int:
    """Rank over the rationals by fraction-free elimination."""
    a = np.asarray(a, dtype=object)
    if a.ndim != 2 or 0 in a.shape:
        return 0
    return len(_bareiss_echelon(a)[1])


def kernel_basis(a: np.ndarray) -> list[np.ndarray]:
    """Basis of ``{v : a @ v = 0}``; empty iff ``a`` is injective."""
    a = np.asarray(a, dtype=object)
    ncols = a.shape[1]
    ech, pivots = _bareiss_echelon(a)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(reversed(ech), reversed(pivots)):
            s = sum((row[c] * x[c] for c in range(pc + 1, ncols) if row[c]), Fraction(0))
            x[pc] = -s / row[pc]
        basis.append(np.array(x, dtype=object))
    return basis


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """One exact solution of ``a @ x = b`` (free variables zero), or None."""
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    rhs_cols = 1 if b.ndim == 1 else b.shape[1]
    aug = np.concatenate([a, b.reshape(a.shape[0], rhs_cols)], axis=1)
    ech, pivots = _bareiss_echelon(aug)
    n = a.shape[1]
    if any(p >= n for p in pivots):
        return None
    xs = zeros((n, rhs_cols))
    for row, pc in zip(reversed(ech), reversed(pivots)):
        for t in range(rhs_cols):
            s = sum((row[c] * xs[c, t] for c in range(pc + 1, n) if row[c]), Fraction(0))
            xs[pc, t] = (row[n + t] - s) / row[pc]
    return xs[:, 0] if b.ndim == 1 else xs


def invert(a: np.ndarray) -> np.ndarray:
    """Exact inverse; raises :class:`SingularMatrix` on rank deficiency."""
    a = np.asarray(a, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("only square matrices can be inverted")
    n = a.shape[0]
    if n == 0:
        return zeros((0, 0))
    if rank(a) < n:
        raise SingularMatrix(f"matrix of size {n} is singular")
    inv = solve(a, identity(n))
    assert inv is not None
    return inv


def in_span(basis: np.ndarray, vectors: np.ndarray) -> bool:
    """True iff every column of ``vectors`` lies in the column span of ``basis``."""
    basis = np.asarray(basis, dtype=object)
    vectors = np.asarray(vectors, dtype=object)
    if vectors.size == 0:
        return True
    if basis.size == 0:
        return is_zero(vectors)
    return rank(np.concatenate([basis, vectors], axis=1)) == rank(basis)


def format_scalar(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def column_space(a: np.ndarray) -> np.ndarray:
    """A basis (as columns) of the column space of ``a``."""
    a = np.asarray(a, dtype=object)
    if a.size == 0:
        return zeros((a.shape[0], 0))
    ech, _ = _bareiss_echelon(a.T)
    return fraction_array(ech.T) if len(ech) else zeros((a.shape[0], 0))


def solution_space(residual, shape: tuple[int, ...]) -> list[np.ndarray]:
    """Basis of ``{X : residual(X) = 0}`` for a linear ``residual``.

    ``residual`` maps a Fraction array of the given shape to a sequence of
    tensors (Fraction arrays or :class:`Scaled`).  The linear system is
    assembled by probing unit arrays, then solved exactly.
    """
    size = prod(shape)
    columns = []
    for idx in range(size):
        probe = zeros(size)
        probe[idx] = Fraction(1)
        parts = [r if isinstance(r, Scaled) else Scaled.of(r) for r in residual(probe.reshape(shape))]
        d = lcm(*(p.d for p in parts)) if parts else 1
        columns.append((np.concatenate([(p.ints * (d // p.d)).ravel() for p in parts]), d))
    if not columns:
        return []
    d_all = lcm(*(d for _, d in columns))
    system = np.stack([col * (d_all // d) for col, d in columns], axis=1)
    return [v.reshape(shape) for v in kernel_basis(system)]
