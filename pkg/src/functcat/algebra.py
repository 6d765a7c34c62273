"""Finite-dimensional algebras given by structure constants, and their left modules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .exactlin import (
    FieldSpec,
    Mat,
    Subspace,
    embedding,
    image_basis,
    kernel_basis,
    left_inverse,
    quotient_map,
    quotient_section,
    rank,
    solve,
    subspace_sum,
)


class AlgebraError(ValueError):
    pass


class FDAlgebra:
    """An associative unital algebra with basis b_0..b_{n-1}.

    mult[:, i, j] holds the coordinates of b_i · b_j. `radical` is the Jacobson radical as
    a subspace, and `idempotents` lists one primitive idempotent per isoclass of
    indecomposable projective, keyed by a label.
    """

    def __init__(self, field: FieldSpec, mult: Mat, unit: Mat, radical: Subspace,
                 idempotents: Sequence[tuple[str, Mat]], check: bool = True):
        self.field = field
        self.mult = mult
        self.dim = mult.shape[0]
        self.unit = unit
        self.radical = radical
        self.idempotents = list(idempotents)
        self._opposite: Optional[FDAlgebra] = None
        if check:
            self.check()

    @property
    def labels(self) -> list[str]:
        return [u for u, _ in self.idempotents]

    def basis_vector(self, i: int) -> Mat:
        return self.field.unit_vector(self.dim, i)

    def mul(self, x: Mat, y: Mat) -> Mat:
        fs = self.field
        out = fs.zero_vector(self.dim)
        for i in range(self.dim):
            if x[i] != 0:
                out = out + x[i] * fs.dot(self.mult[:, i, :], y)
        return fs.reduce(out)

    def left_mult(self, x: Mat) -> Mat:
        """Matrix of y ↦ x·y."""
        fs = self.field
        out = fs.zeros(self.dim, self.dim)
        for i in range(self.dim):
            if x[i] != 0:
                out = out + x[i] * self.mult[:, i, :]
        return fs.reduce(out)

    def right_mult(self, y: Mat) -> Mat:
        """Matrix of x ↦ x·y."""
        fs = self.field
        out = fs.zeros(self.dim, self.dim)
        for j in range(self.dim):
            if y[j] != 0:
                out = out + y[j] * self.mult[:, :, j]
        return fs.reduce(out)

    def check(self) -> None:
        n = self.dim
        for i in range(n):
            ei = self.basis_vector(i)
            if not np.array_equal(self.mul(self.unit, ei), ei) or not np.array_equal(self.mul(ei, self.unit), ei):
                raise AlgebraError("unit axiom fails")
            for j in range(n):
                eij = self.mult[:, i, j]
                for k in range(n):
                    ek = self.basis_vector(k)
                    if not np.array_equal(self.mul(eij, ek), self.mul(ei, self.mult[:, j, k])):
                        raise AlgebraError(f"associativity fails on basis triple ({i}, {j}, {k})")
        for _, e in self.idempotents:
            if not np.array_equal(self.mul(e, e), e):
                raise AlgebraError("declared idempotent is not idempotent")
        for row in self.radical.basis:
            for i in range(n):
                if not self.radical.contains(self.mul(self.basis_vector(i), row)):
                    raise AlgebraError("radical is not a left ideal")

    def opposite(self) -> "FDAlgebra":
        if self._opposite is None:
            op = FDAlgebra(self.field, np.transpose(self.mult, (0, 2, 1)).copy(), self.unit,
                           self.radical, self.idempotents, check=False)
            op._opposite = self
            self._opposite = op
        return self._opposite


class AlgModule:
    """A finite-dimensional left module: action[i] is the matrix of b_i."""

    def __init__(self, algebra: FDAlgebra, dim: int, action: Sequence[Mat], check: bool = True,
                 bundle: Optional[tuple[str, ...]] = None):
        self.algebra = algebra
        self.dim = int(dim)
        fs = algebra.field
        self.action = [np.asarray(m, dtype=object).reshape(self.dim, self.dim) if self.dim else fs.zeros(0, 0)
                       for m in action]
        if len(self.action) != algebra.dim:
            raise AlgebraError("one action matrix per basis element is required")
        self.bundle = bundle
        if check:
            self.validate()

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def act(self, x: Mat) -> Mat:
        fs = self.field
        out = fs.zeros(self.dim, self.dim)
        for i, c in enumerate(x):
            if c != 0:
                out = out + c * self.action[i]
        return fs.reduce(out)

    def validate(self) -> None:
        fs = self.field
        A = self.algebra
        if not np.array_equal(self.act(A.unit), fs.eye(self.dim)):
            raise AlgebraError("unit does not act as identity")
        for i in range(A.dim):
            for j in range(A.dim):
                if not np.array_equal(fs.dot(self.action[i], self.action[j]), self.act(A.mult[:, i, j])):
                    raise AlgebraError(f"action is not multiplicative on ({i}, {j})")

    def is_zero(self) -> bool:
        return self.dim == 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgModule):
            return NotImplemented
        return (self.algebra is other.algebra and self.dim == other.dim
                and all(np.array_equal(a, b) for a, b in zip(self.action, other.action)))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"AlgModule(dim={self.dim})"


@dataclass
class AlgMap:
    source: AlgModule
    target: AlgModule
    matrix: Mat

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=object).reshape(self.target.dim, self.source.dim)

    def is_linear(self) -> bool:
        fs = self.source.field
        return all(np.array_equal(fs.dot(self.matrix, a), fs.dot(b, self.matrix))
                   for a, b in zip(self.source.action, self.target.action))

    def __matmul__(self, other: "AlgMap") -> "AlgMap":
        return AlgMap(other.source, self.target, self.source.field.dot(self.matrix, other.matrix))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.matrix.reshape(-1))

    def is_mono(self) -> bool:
        return rank(self.matrix, self.source.field) == self.source.dim

    def is_epi(self) -> bool:
        return rank(self.matrix, self.source.field) == self.target.dim

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()


def identity_alg_map(X: AlgModule) -> AlgMap:
    return AlgMap(X, X, X.field.eye(X.dim))


def zero_alg_module(A: FDAlgebra) -> AlgModule:
    return AlgModule(A, 0, [A.field.zeros(0, 0)] * A.dim, check=False, bundle=())


class AlgHomSpace:
    """Hom_A(X, Y) with a basis of matrices."""

    def __init__(self, X: AlgModule, Y: AlgModule):
        if X.algebra is not Y.algebra:
            raise AlgebraError("modules over different algebras")
        fs = X.field
        self.source, self.target = X, Y
        n = X.dim * Y.dim
        blocks = []
        for a, b in zip(X.action, Y.action):
            if n:
                # f a - b f = 0, row-major vectorisation of f
                blocks.append(fs.reduce(fs.kron(fs.eye(Y.dim), a.T) - fs.kron(b, fs.eye(X.dim))))
        system = np.vstack(blocks) if blocks else fs.zeros(0, n)
        self.space = kernel_basis(system, fs)

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> list[Mat]:
        return [row.reshape(self.target.dim, self.source.dim) for row in self.space.basis]

    def maps(self) -> list[AlgMap]:
        return [AlgMap(self.source, self.target, m) for m in self.basis]

    def coords(self, m: Mat) -> Mat:
        return self.space.coords(np.asarray(m, dtype=object).reshape(-1))

    def element(self, coords: Sequence) -> Mat:
        fs = self.source.field
        out = fs.zeros(self.target.dim, self.source.dim)
        for c, b in zip(coords, self.basis):
            if c != 0:
                out = out + c * b
        return fs.reduce(out)


def alg_hom_dim(X: AlgModule, Y: AlgModule) -> int:
    return AlgHomSpace(X, Y).dim


# submodules, quotients, sums

def alg_submodule(X: AlgModule, sub: Subspace) -> tuple[AlgModule, AlgMap]:
    fs = X.field
    E = embedding(sub)
    L = left_inverse(E, fs) if sub.dim else fs.zeros(0, X.dim)
    action = []
    for a in X.action:
        img = fs.dot(a, E)
        for col in img.T:
            if not sub.contains(col):
                raise AlgebraError("subspace is not a submodule")
        action.append(fs.dot(L, img))
    S = AlgModule(X.algebra, sub.dim, action, check=False)
    return S, AlgMap(S, X, E)


def alg_quotient(X: AlgModule, sub: Subspace) -> tuple[AlgModule, AlgMap]:
    fs = X.field
    q = quotient_map(X.dim, sub)
    s = quotient_section(X.dim, sub)
    action = [fs.chain(q, a, s) for a in X.action]
    Q = AlgModule(X.algebra, q.shape[0], action, check=False)
    return Q, AlgMap(X, Q, q)


def alg_kernel(f: AlgMap) -> tuple[AlgModule, AlgMap]:
    return alg_submodule(f.source, kernel_basis(f.matrix, f.source.field))


def alg_direct_sum(mods: Sequence[AlgModule], A: FDAlgebra) -> tuple[AlgModule, list[AlgMap], list[AlgMap]]:
    fs = A.field
    n = sum(m.dim for m in mods)
    action = []
    for i in range(A.dim):
        big = fs.zeros(n, n)
        o = 0
        for m in mods:
            big[o:o + m.dim, o:o + m.dim] = m.action[i]
            o += m.dim
        action.append(big)
    bundle = tuple(v for m in mods for v in m.bundle) if all(m.bundle is not None for m in mods) else None
    S = AlgModule(A, n, action, check=False, bundle=bundle)
    inj, proj, o = [], [], 0
    for m in mods:
        e = fs.zeros(n, m.dim)
        for k in range(m.dim):
            e[o + k, k] = fs.one
        inj.append(AlgMap(m, S, e))
        proj.append(AlgMap(S, m, e.T.copy()))
        o += m.dim
    return S, inj, proj


# regular, projective and simple modules

def regular_module(A: FDAlgebra) -> AlgModule:
    return AlgModule(A, A.dim, [A.mult[:, i, :].copy() for i in range(A.dim)], check=False)


def _idempotent(A: FDAlgebra, label: str) -> Mat:
    for u, e in A.idempotents:
        if u == label:
            return e
    raise AlgebraError(f"no idempotent labelled {label!r}")


def indecomposable_projective(A: FDAlgebra, label: str) -> AlgModule:
    """A·e for the idempotent e with the given label."""
    e = _idempotent(A, label)
    R = regular_module(A)
    P, _ = alg_submodule(R, image_basis(A.right_mult(e), A.field))
    P.bundle = (label,)
    return P


def radical_subspace(X: AlgModule) -> Subspace:
    fs = X.field
    sub = Subspace.zero(X.dim, fs)
    for j in X.algebra.radical.basis:
        sub = subspace_sum(sub, image_basis(X.act(j), fs))
    return sub


def alg_top(X: AlgModule) -> tuple[AlgModule, AlgMap]:
    return alg_quotient(X, radical_subspace(X))


def alg_simple(A: FDAlgebra, label: str) -> AlgModule:
    S, _ = alg_top(indecomposable_projective(A, label))
    return S


def alg_dual(X: AlgModule) -> AlgModule:
    """D X = Hom_k(X, k), a left module over the opposite algebra."""
    return AlgModule(X.algebra.opposite(), X.dim, [a.T.copy() for a in X.action], check=False)


def alg_element_map(X: AlgModule, label: str, x: Mat) -> AlgMap:
    """A e -> X, r ↦ r·x, for x ∈ e X."""
    P = indecomposable_projective(X.algebra, label)
    A = X.algebra
    fs = X.field
    E = embedding(image_basis(A.right_mult(_idempotent(A, label)), fs))
    cols = [fs.dot(X.act(E[:, k]), x) for k in range(E.shape[1])]
    m = np.column_stack(cols) if cols else fs.zeros(X.dim, 0)
    return AlgMap(P, X, m)


def alg_projective_cover(X: AlgModule) -> tuple[AlgModule, AlgMap]:
    """Minimal cover ⊕ A e_u^(m_u) -> X with m_u = dim e_u (X / rad X)."""
    fs = X.field
    A = X.algebra
    rad = radical_subspace(X)
    maps = []
    for u, e in A.idempotents:
        eX = image_basis(X.act(e), fs)
        acc = rad
        for x in eX.basis:
            if not acc.contains(x):
                acc = subspace_sum(acc, Subspace.span([x], X.dim, fs))
                maps.append(alg_element_map(X, u, x))
    P, _, proj = alg_direct_sum([f.source for f in maps], A)
    m = fs.zeros(X.dim, P.dim)
    for f, p in zip(maps, proj):
        m = m + fs.dot(f.matrix, p.matrix)
    if rank(m, fs) != X.dim:
        raise AlgebraError("idempotents do not cover the top; the idempotent set is incomplete")
    return P, AlgMap(P, X, fs.reduce(m))


def alg_is_projective(X: AlgModule) -> bool:
    """Lifting test: the cover X admits a section."""
    P, p = alg_projective_cover(X)
    hs = AlgHomSpace(X, P)
    fs = X.field
    target = fs.eye(X.dim).reshape(-1)
    if hs.dim == 0:
        return X.dim == 0
    cols = np.column_stack([fs.dot(p.matrix, g).reshape(-1) for g in hs.basis])
    return solve(cols, target, fs) is not None


def alg_is_injective(X: AlgModule) -> bool:
    return alg_is_projective(alg_dual(X))


@dataclass
class AlgResolution:
    resolved: AlgModule
    modules: list[AlgModule]
    maps: list[AlgMap]  # maps[i] : P_{i+1} -> P_i
    bundles: list[tuple[str, ...]]
    complete: bool

    @property
    def length(self) -> Optional[int]:
        if not self.complete:
            return None
        nz = [i for i, m in enumerate(self.modules) if m.dim]
        return nz[-1] if nz else 0


def alg_projective_resolution(X: AlgModule, n: int) -> AlgResolution:
    P0, eps = alg_projective_cover(X)
    modules, maps, bundles = [P0], [], [P0.bundle or ()]
    K, emb = alg_kernel(eps)
    for _ in range(n):
        if K.dim == 0:
            break
        Pi, cov = alg_projective_cover(K)
        modules.append(Pi)
        maps.append(AlgMap(Pi, modules[-2], X.field.dot(emb.matrix, cov.matrix)))
        bundles.append(Pi.bundle or ())
        K, emb2 = alg_kernel(cov)
        emb = AlgMap(K, Pi, emb2.matrix)
    return AlgResolution(X, modules, maps, bundles, complete=K.dim == 0)


def alg_projective_dimension(X: AlgModule, bound: int) -> Optional[int]:
    R = alg_projective_resolution(X, bound)
    if not R.complete:
        return None
    return -1 if X.dim == 0 else R.length


def alg_global_dimension(A: FDAlgebra, bound: int) -> Optional[int]:
    out = 0
    for u in A.labels:
        pd = alg_projective_dimension(alg_simple(A, u), bound)
        if pd is None:
            return None
        out = max(out, pd)
    return out


def alg_ext(X: AlgModule, Y: AlgModule, bound: int) -> list[int]:
    """dim Ext^i_A(X, Y) for 0 <= i <= bound."""
    fs = X.field
    R = alg_projective_resolution(X, bound + 1)
    zero = zero_alg_module(X.algebra)
    terms = [R.modules[i] if i < len(R.modules) else zero for i in range(bound + 2)]
    spaces = [AlgHomSpace(T, Y) for T in terms]
    ranks = []
    for i in range(bound + 1):
        if i < len(R.maps):
            d = R.maps[i].matrix
            cols = [spaces[i + 1].coords(fs.dot(f, d)) for f in spaces[i].basis]
            m = np.column_stack(cols) if cols else fs.zeros(spaces[i + 1].dim, 0)
            ranks.append(rank(m, fs) if m.size else 0)
        else:
            ranks.append(0)
    return [spaces[i].dim - ranks[i] - (ranks[i - 1] if i else 0) for i in range(bound + 1)]


def alg_find_isomorphism(X: AlgModule, Y: AlgModule, tries: int = 12, seed: int = 0) -> Optional[AlgMap]:
    if X.dim != Y.dim:
        return None
    if X.dim == 0:
        return AlgMap(X, Y, X.field.zeros(0, 0))
    hs = AlgHomSpace(X, Y)
    if hs.dim == 0:
        return None
    fs = X.field
    rng = np.random.default_rng(seed)
    candidates = list(hs.basis)
    lo, hi = (-50, 51) if fs.characteristic == 0 else (0, fs.characteristic)
    for _ in range(tries):
        candidates.append(hs.element([fs.scalar(int(c)) for c in rng.integers(lo, hi, size=hs.dim)]))
    for m in candidates:
        if rank(m, fs) == X.dim:
            return AlgMap(X, Y, m)
    return None
