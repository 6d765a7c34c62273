"""Exact linear algebra over the rationals and prime fields.

Matrices are numpy object arrays whose entries are exact scalars: ``gmpy2.mpq``
over Q and plain Python ints reduced mod p over F_p. Every routine takes the
field explicitly so that F_p entries can be reduced after each operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from gmpy2 import is_prime, mpq

Mat = np.ndarray


class DimensionMismatch(ValueError):
    """Raised when operands have incompatible shapes."""


@dataclass(frozen=True)
class FieldSpec:
    """A prime field F_p or the rationals (characteristic 0)."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p < 0 or (p != 0 and not is_prime(p)):
            raise ValueError(f"characteristic must be 0 or a prime, got {p}")

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @property
    def kind(self) -> str:
        return "rationals" if self.characteristic == 0 else "prime_field"

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F_{self.characteristic}"

    # scalars

    def scalar(self, x) -> object:
        """Coerce an int, Fraction, mpq or string like '3/4' into the field."""
        p = self.characteristic
        if p == 0:
            return mpq(x)
        q = mpq(x)
        num, den = int(q.numerator), int(q.denominator)
        if den % p == 0:
            raise ZeroDivisionError(f"{x} has no image in F_{p}")
        return num * pow(den, -1, p) % p

    @property
    def zero(self):
        return self.scalar(0)

    @property
    def one(self):
        return self.scalar(1)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic == 0:
            return 1 / mpq(x)
        return pow(int(x), -1, self.characteristic)

    # arrays

    def reduce(self, a: Mat) -> Mat:
        """Bring freshly computed entries back into canonical form."""
        if self.characteristic:
            return a % self.characteristic
        return a

    def matrix(self, rows: Iterable[Sequence], cols: Optional[int] = None) -> Mat:
        rows = [list(r) for r in rows]
        if not rows:
            return self.zeros(0, cols or 0)
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged matrix rows")
        out = np.empty((len(rows), width), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                out[i, j] = self.scalar(x)
        return out

    def vector(self, xs: Iterable) -> Mat:
        xs = list(xs)
        out = np.empty(len(xs), dtype=object)
        for i, x in enumerate(xs):
            out[i] = self.scalar(x)
        return out

    def zeros(self, r: int, c: int) -> Mat:
        return np.full((r, c), self.zero, dtype=object)

    def zero_vector(self, n: int) -> Mat:
        return np.full(n, self.zero, dtype=object)

    def eye(self, n: int) -> Mat:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.one
        return out

    def unit_vector(self, n: int, i: int) -> Mat:
        v = self.zero_vector(n)
        v[i] = self.one
        return v

    def dot(self, a: Mat, b: Mat) -> Mat:
        if a.shape[-1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        if a.shape[-1] == 0:
            shape = a.shape[:-1] + b.shape[1:]
            return np.full(shape, self.zero, dtype=object)
        return self.reduce(a.dot(b))

    def chain(self, *mats: Mat) -> Mat:
        """Product of matrices left to right."""
        out = mats[0]
        for m in mats[1:]:
            out = self.dot(out, m)
        return out

    def kron(self, a: Mat, b: Mat) -> Mat:
        ra, ca = a.shape
        rb, cb = b.shape
        out = self.zeros(ra * rb, ca * cb)
        for i in range(ra):
            for j in range(ca):
                if a[i, j] != 0:
                    out[i * rb:(i + 1) * rb, j * cb:(j + 1) * cb] = self.reduce(a[i, j] * b)
        return out

    def random_matrix(self, rng: np.random.Generator, r: int, c: int, spread: int = 5) -> Mat:
        lo, hi = (-spread, spread + 1) if self.characteristic == 0 else (0, self.characteristic)
        return self.matrix([[int(x) for x in rng.integers(lo, hi, size=c)] for _ in range(r)], cols=c)


QQ = FieldSpec.rationals()


def is_zero(a: Mat) -> bool:
    return not any(x != 0 for x in np.asarray(a).flat)


def _rref(m: Mat, fs: FieldSpec) -> tuple[Mat, list[int]]:
    a = np.array(m, dtype=object, copy=True)
    if a.ndim != 2:
        raise DimensionMismatch("rref expects a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        if a[r, c] != 1:
            a[r] = fs.reduce(a[r] * fs.inv(a[r, c]))
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i] = fs.reduce(a[i] - a[i, c] * a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def rref(m: Mat, fs: FieldSpec = QQ) -> tuple[Mat, int]:
    """Reduced row-echelon form and rank."""
    a, pivots = _rref(m, fs)
    return a, len(pivots)


def rank(m: Mat, fs: FieldSpec = QQ) -> int:
    if 0 in m.shape:
        return 0
    return len(_rref(m, fs)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of k^n stored by its canonical reduced-echelon basis (rows)."""

    ambient_dim: int
    basis: Mat
    pivots: tuple[int, ...]
    field: FieldSpec = QQ

    @classmethod
    def span(cls, vectors: Mat | Sequence, ambient_dim: int, fs: FieldSpec = QQ) -> "Subspace":
        """Span of the rows of `vectors`."""
        if ambient_dim == 0:
            return cls.zero(0, fs)
        if isinstance(vectors, np.ndarray):
            a = vectors.reshape(-1, ambient_dim) if vectors.size else fs.zeros(0, ambient_dim)
        else:
            vectors = list(vectors)
            a = np.array(vectors, dtype=object).reshape(-1, ambient_dim) if vectors else fs.zeros(0, ambient_dim)
        if a.shape[1] != ambient_dim:
            raise DimensionMismatch("vectors do not live in the ambient space")
        red, piv = _rref(a, fs)
        return cls(ambient_dim, red[: len(piv)], tuple(piv), fs)

    @classmethod
    def zero(cls, n: int, fs: FieldSpec = QQ) -> "Subspace":
        return cls(n, fs.zeros(0, n), (), fs)

    @classmethod
    def full(cls, n: int, fs: FieldSpec = QQ) -> "Subspace":
        return cls(n, fs.eye(n), tuple(range(n)), fs)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def key(self) -> tuple:
        return (self.ambient_dim, tuple(self.basis.flat))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def reduce(self, v: Mat) -> Mat:
        """Normal form of v modulo the subspace (zero on pivot positions)."""
        v = np.array(v, dtype=object, copy=True)
        for row, p in zip(self.basis, self.pivots):
            if v[p] != 0:
                v = self.field.reduce(v - v[p] * row)
        return v

    def contains(self, v: Mat) -> bool:
        return is_zero(self.reduce(v))

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def coords(self, v: Mat) -> Mat:
        """Coordinates of v in the stored basis; raises if v is not inside."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return np.array([v[p] for p in self.pivots], dtype=object)

    def complement_indices(self) -> list[int]:
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]


def kernel_basis(m: Mat, fs: FieldSpec = QQ) -> Subspace:
    """Null space {v : m v = 0}."""
    rows, cols = m.shape
    if rows == 0:
        return Subspace.full(cols, fs)
    red, piv = _rref(m, fs)
    free = [j for j in range(cols) if j not in set(piv)]
    vecs = []
    for f in free:
        v = fs.zero_vector(cols)
        v[f] = fs.one
        for i, p in enumerate(piv):
            v[p] = fs.reduce(-red[i, f]) if fs.characteristic else -red[i, f]
        vecs.append(v)
    k = Subspace.span(np.array(vecs, dtype=object).reshape(len(vecs), cols), cols, fs)
    assert k.dim + len(piv) == cols, "rank-nullity violated"
    return k


def image_basis(m: Mat, fs: FieldSpec = QQ) -> Subspace:
    """Column space of m."""
    return Subspace.span(m.T, m.shape[0], fs)


def solve(m: Mat, b: Mat, fs: FieldSpec = QQ) -> Optional[Mat]:
    """Some x with m x = b, or None. `b` may be a vector or a matrix of columns."""
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    if bb.shape[0] != m.shape[0]:
        raise DimensionMismatch(f"solve: {m.shape} against {b.shape}")
    rows, cols = m.shape
    k = bb.shape[1]
    if rows == 0:
        x = fs.zeros(cols, k)
        return x.reshape(-1) if vec else x
    aug = np.hstack([m, bb])
    red, piv = _rref(aug, fs)
    if any(p >= cols for p in piv):
        return None
    x = fs.zeros(cols, k)
    for i, p in enumerate(piv):
        x[p] = red[i, cols:]
    return x.reshape(-1) if vec else x


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("sum of subspaces of different spaces")
    return Subspace.span(np.vstack([a.basis, b.basis]), a.ambient_dim, a.field)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("intersection of subspaces of different spaces")
    fs = a.field
    n = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(n, fs)
    # x A = y B  <=>  [A; -B]^T (x, y) = 0
    stacked = np.vstack([a.basis, fs.reduce(-b.basis)]).T
    ker = kernel_basis(stacked, fs)
    vecs = fs.dot(ker.basis[:, : a.dim], a.basis) if ker.dim else fs.zeros(0, n)
    out = Subspace.span(vecs, n, fs)
    assert a.dim + b.dim == subspace_sum(a, b).dim + out.dim
    return out


def quotient_map(ambient_dim: int, sub: Subspace) -> Mat:
    """Surjection k^n -> k^(n - dim sub) whose kernel is exactly `sub`.

    Coordinates of the target are the non-pivot coordinates of the normal form.
    """
    fs = sub.field
    keep = sub.complement_indices()
    q = fs.zeros(len(keep), ambient_dim)
    for r, j in enumerate(keep):
        q[r, j] = fs.one
    for row, p in zip(sub.basis, sub.pivots):
        q[:, p] = fs.reduce(-row[keep])
    return q


def quotient_section(ambient_dim: int, sub: Subspace) -> Mat:
    """A right inverse of quotient_map: embeds the non-pivot coordinates."""
    fs = sub.field
    keep = sub.complement_indices()
    s = fs.zeros(ambient_dim, len(keep))
    for c, j in enumerate(keep):
        s[j, c] = fs.one
    return s


def inverse(m: Mat, fs: FieldSpec = QQ) -> Mat:
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionMismatch("inverse of a non-square matrix")
    red, piv = _rref(np.hstack([m, fs.eye(n)]), fs)
    if n and (len(piv) < n or piv[n - 1] != n - 1):
        raise ZeroDivisionError("matrix is singular")
    return red[:, n:]


def left_inverse(m: Mat, fs: FieldSpec = QQ) -> Mat:
    """L with L m = I, for m of full column rank."""
    rows, cols = m.shape
    if cols == 0:
        return fs.zeros(0, rows)
    _, piv = _rref(m.T, fs)
    if len(piv) != cols:
        raise ValueError("matrix does not have full column rank")
    out = fs.zeros(cols, rows)
    out[:, piv] = inverse(m[piv, :], fs)
    return out


def right_inverse(m: Mat, fs: FieldSpec = QQ) -> Mat:
    """R with m R = I, for m of full row rank."""
    return left_inverse(m.T, fs).T


def is_injective(m: Mat, fs: FieldSpec = QQ) -> bool:
    return rank(m, fs) == m.shape[1]


def is_surjective(m: Mat, fs: FieldSpec = QQ) -> bool:
    return rank(m, fs) == m.shape[0]


def embedding(sub: Subspace) -> Mat:
    """Column matrix whose columns are the basis vectors of `sub`."""
    return sub.basis.T.copy() if sub.dim else sub.field.zeros(sub.ambient_dim, 0)


def to_int_rows(m: Mat) -> list[list[str]]:
    """Entries rendered as strings, for reports."""
    return [[str(x) for x in row] for row in m]
