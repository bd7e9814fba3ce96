"""Line-based text format for algebras, modules, cocycles, forms and matrices.

A file is a sequence of directives, one per line.  ``#`` starts a comment.
Rationals are written as integers or ``p/q``; indices are 1-based::

    kind three_bihom_lie
    dim 4
    skew
    bracket 1 2 3 4 1
    matrix alpha
    1 0 0 0
    ...
    end

Unlisted structure constants are zero and unlisted maps are identities.
The ``skew`` directive extends every ``bracket`` record to all six
permutations of its first three indices with the sign of the permutation.
``rho`` records are given for ``i < j`` only and are skew-extended on read.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from itertools import permutations
from pathlib import Path

import numpy as np

from .algebra import BihomLieAlgebra, ThreeBihomLieAlgebra, TotallyBihomAssocAlgebra
from .linalg import fraction_array, identity, zeros
from .quadratic import BilinearForm, QuadraticAlgebra
from .representations import Cocycle, Representation

__all__ = [
    "FormatError",
    "KINDS",
    "loads",
    "dumps",
    "load",
    "dump",
    "file_digest",
    "corpus_names",
    "corpus_path",
    "load_corpus",
]

KINDS = ("three_bihom_lie", "bihom_lie", "totally_assoc", "representation", "cocycle",
         "bilinear_form", "quadratic", "matrix")

# entry keyword -> number of index fields
_ENTRY = {"bracket": 4, "bracket2": 3, "product": 4, "rho": 4, "theta": 4}
_ENTRY_KINDS = {
    "three_bihom_lie": "bracket",
    "quadratic": "bracket",
    "bihom_lie": "bracket2",
    "totally_assoc": "product",
    "representation": "rho",
    "cocycle": "theta",
}
_MATRICES = {
    "three_bihom_lie": ("alpha", "beta"),
    "bihom_lie": ("alpha", "beta"),
    "totally_assoc": ("alpha", "beta"),
    "representation": ("alpha_M", "beta_M"),
    "cocycle": (),
    "bilinear_form": ("gram",),
    "quadratic": ("alpha", "beta", "gram"),
    "matrix": ("data",),
}


class FormatError(ValueError):
    """A parse error; the message names the line and the offending field."""

    def __init__(self, lineno: int, field: str, message: str):
        super().__init__(f"line {lineno}: {field}: {message}")
        self.lineno = lineno
        self.field = field


def _parse_scalar(token: str, lineno: int, field: str) -> Fraction:
    try:
        if "." in token or "e" in token.lower():
            raise ValueError
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(lineno, field, f"not an exact rational: {token!r}") from None


def _parse_int(token: str, lineno: int, field: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(lineno, field, f"not an integer: {token!r}") from None


@dataclass
class _Parsed:
    kind: str | None = None
    dims: dict | None = None
    skew: bool = False
    entries: list | None = None
    matrices: dict | None = None


def _tokenize(text: str) -> _Parsed:
    out = _Parsed(dims={}, entries=[], matrices={})
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        lineno = i + 1
        line = lines[i].split("#", 1)[0].strip()
        i += 1
        if not line:
            continue
        words = line.split()
        key = words[0]
        if key == "kind":
            if len(words) != 2 or words[1] not in KINDS:
                raise FormatError(lineno, "kind", f"expected one of {', '.join(KINDS)}")
            if out.kind is not None:
                raise FormatError(lineno, "kind", "kind given twice")
            out.kind = words[1]
        elif key in ("dim", "module_dim", "rows", "cols"):
            if len(words) != 2:
                raise FormatError(lineno, key, "expected exactly one value")
            value = _parse_int(words[1], lineno, key)
            if value < 0:
                raise FormatError(lineno, key, "must be non-negative")
            if key in out.dims:
                raise FormatError(lineno, key, "given twice")
            out.dims[key] = value
        elif key == "skew":
            if len(words) != 1:
                raise FormatError(lineno, "skew", "takes no arguments")
            out.skew = True
        elif key in _ENTRY:
            count = _ENTRY[key]
            if len(words) != count + 2:
                raise FormatError(lineno, key, f"expected {count} indices and a value")
            idx = tuple(_parse_int(w, lineno, f"{key} index") for w in words[1:count + 1])
            out.entries.append((lineno, key, idx, _parse_scalar(words[-1], lineno, f"{key} value")))
        elif key == "matrix":
            if len(words) != 2:
                raise FormatError(lineno, "matrix", "expected a matrix name")
            name = words[1]
            if name in out.matrices:
                raise FormatError(lineno, f"matrix {name}", "given twice")
            rows = []
            while True:
                if i >= len(lines):
                    raise FormatError(lineno, f"matrix {name}", "missing 'end'")
                body = lines[i].split("#", 1)[0].strip()
                i += 1
                if body == "end":
                    break
                if body:
                    rows.append([_parse_scalar(t, i, f"matrix {name}") for t in body.split()])
            if len({len(r) for r in rows}) > 1:
                raise FormatError(lineno, f"matrix {name}", "rows have different lengths")
            out.matrices[name] = (lineno, rows)
        else:
            raise FormatError(lineno, key, "unknown directive")
    if out.kind is None:
        raise FormatError(len(lines), "kind", "missing kind directive")
    return out


def _need_dim(p: _Parsed, name: str) -> int:
    if name not in p.dims:
        raise FormatError(0, name, f"missing {name} directive")
    return p.dims[name]


def _matrix(p: _Parsed, name: str, shape: tuple[int, int], default=None) -> np.ndarray:
    if name not in p.matrices:
        if default is None:
            raise FormatError(0, f"matrix {name}", "missing")
        return default
    lineno, rows = p.matrices[name]
    if shape[0] == 0 and not rows:
        return zeros(shape)
    got = (len(rows), len(rows[0]) if rows else 0)
    if got != shape:
        raise FormatError(lineno, f"matrix {name}", f"expected shape {shape}, got {got}")
    return fraction_array(rows)


def _fill(p: _Parsed, keyword: str, shape: tuple[int, ...], skew: str | None = None) -> np.ndarray:
    """Dense tensor from sparse records.  ``skew='3'`` extends over the first
    three indices, ``skew='2'`` over the first two."""
    t = zeros(shape)
    seen = set()
    for lineno, key, idx, value in p.entries:
        if key != keyword:
            raise FormatError(lineno, key, f"not allowed in a {p.kind} file")
        for pos, (v, bound) in enumerate(zip(idx, shape)):
            if not 1 <= v <= bound:
                raise FormatError(lineno, f"{key} index {pos + 1}", f"{v} outside 1..{bound}")
        zidx = tuple(v - 1 for v in idx)
        if skew == "2":
            if not idx[0] < idx[1]:
                raise FormatError(lineno, f"{key} index", "records need i < j (skew-extended)")
            targets = [(zidx, value), ((zidx[1], zidx[0]) + zidx[2:], -value)]
        elif skew == "3":
            targets = [(tuple(zidx[q] for q in perm) + zidx[3:], _sign(perm) * value)
                       for perm in permutations(range(3))]
        else:
            targets = [(zidx, value)]
        for target, val in targets:
            if target in seen:
                raise FormatError(lineno, key, f"duplicate entry for indices {tuple(x + 1 for x in target)}")
            seen.add(target)
            t[target] = val
    return t


def _sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


def _check_matrix_names(p: _Parsed) -> None:
    allowed = _MATRICES[p.kind]
    for name, (lineno, _) in p.matrices.items():
        if name not in allowed:
            raise FormatError(lineno, f"matrix {name}", f"not allowed in a {p.kind} file")
    if p.skew and p.kind not in ("three_bihom_lie", "quadratic"):
        raise FormatError(0, "skew", f"not allowed in a {p.kind} file")
    if p.kind not in _ENTRY_KINDS and p.entries:
        lineno, key, _, _ = p.entries[0]
        raise FormatError(lineno, key, f"not allowed in a {p.kind} file")


def loads(text: str):
    """Parse a file's contents into the corresponding library object."""
    p = _tokenize(text)
    _check_matrix_names(p)
    kind = p.kind
    if kind == "matrix":
        rows, cols = _need_dim(p, "rows"), _need_dim(p, "cols")
        return _matrix(p, "data", (rows, cols))
    n = _need_dim(p, "dim")
    if kind in ("three_bihom_lie", "quadratic"):
        c = _fill(p, "bracket", (n,) * 4, "3" if p.skew else None)
        A = ThreeBihomLieAlgebra(c, _matrix(p, "alpha", (n, n), identity(n)),
                                 _matrix(p, "beta", (n, n), identity(n)))
        if kind == "three_bihom_lie":
            return A
        return QuadraticAlgebra(A, BilinearForm(_matrix(p, "gram", (n, n))))
    if kind == "bihom_lie":
        return BihomLieAlgebra(_fill(p, "bracket2", (n,) * 3),
                               _matrix(p, "alpha", (n, n), identity(n)),
                               _matrix(p, "beta", (n, n), identity(n)))
    if kind == "totally_assoc":
        return TotallyBihomAssocAlgebra(_fill(p, "product", (n,) * 4),
                                        _matrix(p, "alpha", (n, n), identity(n)),
                                        _matrix(p, "beta", (n, n), identity(n)))
    if kind == "bilinear_form":
        return BilinearForm(_matrix(p, "gram", (n, n)))
    m = _need_dim(p, "module_dim")
    if kind == "representation":
        return Representation(_fill(p, "rho", (n, n, m, m), "2"),
                              _matrix(p, "alpha_M", (m, m), identity(m)),
                              _matrix(p, "beta_M", (m, m), identity(m)))
    return Cocycle(_fill(p, "theta", (n, n, n, m)))


def _fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _matrix_lines(name: str, m: np.ndarray) -> list[str]:
    return [f"matrix {name}", *(" ".join(_fmt(x) for x in row) for row in m), "end"]


def _entry_lines(keyword: str, t: np.ndarray, keep=lambda idx: True) -> list[str]:
    lines = []
    for idx in np.argwhere(t != 0):
        idx = tuple(int(v) for v in idx)
        if keep(idx):
            lines.append(f"{keyword} {' '.join(str(v + 1) for v in idx)} {_fmt(t[idx])}")
    return lines


def dumps(obj, header: list[str] | None = None) -> str:
    """Serialize an object; ``loads(dumps(x))`` reproduces ``x`` exactly."""
    lines = [f"# {h}" for h in header or []]
    if isinstance(obj, QuadraticAlgebra):
        A = obj.algebra
        lines += ["kind quadratic", f"dim {A.n}", *_entry_lines("bracket", A.bracket),
                  *_matrix_lines("alpha", A.alpha), *_matrix_lines("beta", A.beta),
                  *_matrix_lines("gram", obj.form.gram)]
    elif isinstance(obj, ThreeBihomLieAlgebra):
        lines += ["kind three_bihom_lie", f"dim {obj.n}", *_entry_lines("bracket", obj.bracket),
                  *_matrix_lines("alpha", obj.alpha), *_matrix_lines("beta", obj.beta)]
    elif isinstance(obj, BihomLieAlgebra):
        lines += ["kind bihom_lie", f"dim {obj.n}", *_entry_lines("bracket2", obj.bracket),
                  *_matrix_lines("alpha", obj.alpha), *_matrix_lines("beta", obj.beta)]
    elif isinstance(obj, TotallyBihomAssocAlgebra):
        lines += ["kind totally_assoc", f"dim {obj.n}", *_entry_lines("product", obj.product),
                  *_matrix_lines("alpha", obj.alpha), *_matrix_lines("beta", obj.beta)]
    elif isinstance(obj, Representation):
        lines += ["kind representation", f"dim {obj.n}", f"module_dim {obj.m}",
                  *_entry_lines("rho", obj.rho, lambda idx: idx[0] < idx[1]),
                  *_matrix_lines("alpha_M", obj.alpha_M), *_matrix_lines("beta_M", obj.beta_M)]
    elif isinstance(obj, Cocycle):
        lines += ["kind cocycle", f"dim {obj.n}", f"module_dim {obj.m}",
                  *_entry_lines("theta", obj.theta)]
    elif isinstance(obj, BilinearForm):
        lines += ["kind bilinear_form", f"dim {obj.n}", *_matrix_lines("gram", obj.gram)]
    elif isinstance(obj, np.ndarray) and obj.ndim == 2:
        lines += ["kind matrix", f"rows {obj.shape[0]}", f"cols {obj.shape[1]}",
                  *_matrix_lines("data", obj)]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def load(path):
    return loads(Path(path).read_text())


def dump(obj, path, header: list[str] | None = None) -> None:
    Path(path).write_text(dumps(obj, header))


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def corpus_names() -> list[str]:
    """Names (without extension) of the bundled example files."""
    root = resources.files("bihom3") / "corpus"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".alg"))


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("bihom3") / "corpus" / f"{name}.alg"))


def load_corpus(name: str):
    return load(corpus_path(name))
