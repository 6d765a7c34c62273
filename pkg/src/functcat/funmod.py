"""Finitely presented covariant functors on a finite category, as representations.

An :class:`FModule` stores a vector space dimension per vertex and a matrix per
arrow (shape dim(target) x dim(source)). Modules over a quotient category C/I
use the same arrows; the extra constraint is that I acts as zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np
import sympy

from .exactlin import (
    FieldSpec,
    Mat,
    Subspace,
    embedding,
    image_basis,
    inverse,
    is_zero,
    kernel_basis,
    quotient_map,
    quotient_section,
    rank,
    solve,
    subspace_sum,
)
from .pathcat import FiniteCategory, Path


class ModuleError(ValueError):
    """The data does not define a module (relations violated, wrong shapes)."""


class NotNatural(ValueError):
    pass


class FModule:
    """A representation of the quiver of `category` satisfying its constraints."""

    def __init__(self, category: FiniteCategory, dims: dict, action: Optional[dict] = None,
                 check: bool = True, bundle: Optional[tuple[str, ...]] = None):
        self.category = category
        self.field: FieldSpec = category.field
        self.dims = {v: int(dims.get(v, 0)) for v in category.vertices}
        action = action or {}
        self.action: dict[str, Mat] = {}
        for a in category.arrows:
            shape = (self.dims[a.target], self.dims[a.source])
            m = action.get(a.name)
            if m is None:
                m = self.field.zeros(*shape)
            m = np.asarray(m, dtype=object).reshape(shape)
            self.action[a.name] = m
        # vertex multiset when the module was built as a sum of representables
        self.bundle = bundle
        if check:
            self.validate()

    def validate(self) -> None:
        fs = self.field
        for name, m in self.action.items():
            a = self.category.quiver.arrow(name)
            if m.shape != (self.dims[a.target], self.dims[a.source]):
                raise ModuleError(f"arrow {name}: matrix has shape {m.shape}")
        for x, y, terms in self.category.module_constraints():
            total = fs.zeros(self.dims[y], self.dims[x])
            for c, p in terms:
                total = fs.reduce(total + c * self.path_matrix(p))
            if not is_zero(total):
                raise ModuleError(f"constraint {x}->{y} is not annihilated")

    # basic data

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.category.vertices

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def __repr__(self) -> str:
        return f"FModule{self.dim_vector()}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FModule):
            return NotImplemented
        return (self.category is other.category and self.dims == other.dims
                and all(np.array_equal(self.action[a], other.action[a]) for a in self.action))

    __hash__ = None  # type: ignore[assignment]

    def path_matrix(self, p: Path) -> Mat:
        fs = self.field
        out = fs.eye(self.dims[p.source])
        for name in p.arrows:
            out = fs.dot(self.action[name], out)
        return out

    @cached_property
    def _basis_cache(self) -> dict:
        return {}

    def basis_action(self, x: str, y: str) -> list[Mat]:
        """Matrices M(b) for the basis morphisms b of Hom(x, y)."""
        key = (x, y)
        if key not in self._basis_cache:
            self._basis_cache[key] = [self.path_matrix(p) for p in self.category.basis_paths(x, y)]
        return self._basis_cache[key]

    def morphism_matrix(self, x: str, y: str, coords: Sequence) -> Mat:
        fs = self.field
        out = fs.zeros(self.dims[y], self.dims[x])
        for c, m in zip(coords, self.basis_action(x, y)):
            if c != 0:
                out = out + c * m
        return fs.reduce(out)

    def retag(self, category: FiniteCategory) -> "FModule":
        """Same data viewed over another category with the same quiver."""
        return FModule(category, self.dims, self.action, check=True, bundle=self.bundle)


class FMap:
    """A natural transformation between modules over the same category."""

    def __init__(self, source: FModule, target: FModule, comps: dict, check: bool = True):
        if source.category is not target.category:
            raise ValueError("modules over different categories")
        self.source = source
        self.target = target
        fs = source.field
        self.comps: dict[str, Mat] = {}
        for v in source.vertices:
            shape = (target.dims[v], source.dims[v])
            m = comps.get(v)
            self.comps[v] = fs.zeros(*shape) if m is None else np.asarray(m, dtype=object).reshape(shape)
        if check:
            self.check_natural()

    @property
    def field(self) -> FieldSpec:
        return self.source.field

    def check_natural(self) -> None:
        fs = self.field
        for a in self.source.category.arrows:
            left = fs.dot(self.comps[a.target], self.source.action[a.name])
            right = fs.dot(self.target.action[a.name], self.comps[a.source])
            if not np.array_equal(left, right):
                raise NotNatural(f"naturality fails at arrow {a.name}")

    def __repr__(self) -> str:
        return f"FMap({self.source!r} -> {self.target!r})"

    def __matmul__(self, other: "FMap") -> "FMap":
        """self ∘ other."""
        if other.target != self.source:
            raise ValueError("maps are not composable")
        fs = self.field
        return FMap(other.source, self.target, {v: fs.dot(self.comps[v], other.comps[v]) for v in self.comps}, check=False)

    def __add__(self, other: "FMap") -> "FMap":
        fs = self.field
        return FMap(self.source, self.target, {v: fs.reduce(self.comps[v] + other.comps[v]) for v in self.comps}, check=False)

    def __sub__(self, other: "FMap") -> "FMap":
        return self + other.scale(-1)

    def scale(self, c) -> "FMap":
        fs = self.field
        c = fs.scalar(c)
        return FMap(self.source, self.target, {v: fs.reduce(c * m) for v, m in self.comps.items()}, check=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and all(np.array_equal(self.comps[v], other.comps[v]) for v in self.comps))

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return all(is_zero(m) for m in self.comps.values())

    def is_mono(self) -> bool:
        return all(rank(m, self.field) == m.shape[1] for m in self.comps.values())

    def is_epi(self) -> bool:
        return all(rank(m, self.field) == m.shape[0] for m in self.comps.values())

    def is_iso(self) -> bool:
        return self.is_mono() and self.is_epi()

    def flat(self) -> Mat:
        parts = [self.comps[v].reshape(-1) for v in self.source.vertices]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=object)

    def inverse(self) -> "FMap":
        fs = self.field
        return FMap(self.target, self.source, {v: inverse(m, fs) for v, m in self.comps.items()}, check=False)


def identity_map(M: FModule) -> FMap:
    return FMap(M, M, {v: M.field.eye(d) for v, d in M.dims.items()}, check=False)


def zero_map(M: FModule, N: FModule) -> FMap:
    return FMap(M, N, {}, check=False)


def zero_module(C: FiniteCategory) -> FModule:
    return FModule(C, {}, {})


# sums, submodules and quotients

@dataclass
class DirectSum:
    module: FModule
    injections: list[FMap]
    projections: list[FMap]


def direct_sum(mods: Sequence[FModule], C: Optional[FiniteCategory] = None) -> DirectSum:
    if not mods:
        if C is None:
            raise ValueError("empty direct sum needs a category")
        Z = zero_module(C)
        return DirectSum(Z, [], [])
    C = mods[0].category
    fs = C.field
    dims = {v: sum(m.dims[v] for m in mods) for v in C.vertices}
    action = {}
    for a in C.arrows:
        big = fs.zeros(dims[a.target], dims[a.source])
        r = c = 0
        for m in mods:
            blk = m.action[a.name]
            big[r:r + blk.shape[0], c:c + blk.shape[1]] = blk
            r += blk.shape[0]
            c += blk.shape[1]
        action[a.name] = big
    bundle = None
    if all(m.bundle is not None for m in mods):
        bundle = tuple(v for m in mods for v in m.bundle)
    S = FModule(C, dims, action, check=False, bundle=bundle)
    inj, proj = [], []
    offs = {v: 0 for v in C.vertices}
    for m in mods:
        ic, pc = {}, {}
        for v in C.vertices:
            e = fs.zeros(dims[v], m.dims[v])
            for i in range(m.dims[v]):
                e[offs[v] + i, i] = fs.one
            ic[v], pc[v] = e, e.T.copy()
            offs[v] += m.dims[v]
        inj.append(FMap(m, S, ic, check=False))
        proj.append(FMap(S, m, pc, check=False))
    return DirectSum(S, inj, proj)


def map_from_sum(ds: DirectSum, maps: Sequence[FMap], target: FModule) -> FMap:
    """The map ⊕ X_i -> target restricting to maps[i] on the i-th summand."""
    out = zero_map(ds.module, target)
    for p, f in zip(ds.projections, maps):
        out = out + (f @ p)
    return out


def map_to_sum(ds: DirectSum, maps: Sequence[FMap], source: FModule) -> FMap:
    out = zero_map(source, ds.module)
    for i, f in zip(ds.injections, maps):
        out = out + (i @ f)
    return out


def submodule(M: FModule, subs: dict[str, Subspace]) -> tuple[FModule, FMap]:
    """The submodule with the given value spaces, and its inclusion."""
    fs = M.field
    action = {}
    for a in M.category.arrows:
        s, t = subs[a.source], subs[a.target]
        img = fs.dot(M.action[a.name], embedding(s))
        for col in img.T:
            if not t.contains(col):
                raise ModuleError("subspaces are not closed under the arrow action")
        action[a.name] = img[list(t.pivots), :] if t.dim else fs.zeros(0, s.dim)
    K = FModule(M.category, {v: subs[v].dim for v in M.vertices}, action, check=False)
    emb = FMap(K, M, {v: embedding(subs[v]) for v in M.vertices}, check=False)
    return K, emb


def quotient_module(M: FModule, subs: dict[str, Subspace]) -> tuple[FModule, FMap]:
    """M / (sub), with the projection. Quotient coordinates are the non-pivot ones."""
    fs = M.field
    q = {v: quotient_map(M.dims[v], subs[v]) for v in M.vertices}
    s = {v: quotient_section(M.dims[v], subs[v]) for v in M.vertices}
    action = {a.name: fs.chain(q[a.target], M.action[a.name], s[a.source]) for a in M.category.arrows}
    Q = FModule(M.category, {v: q[v].shape[0] for v in M.vertices}, action, check=False)
    return Q, FMap(M, Q, q, check=False)


def kernel(f: FMap) -> tuple[FModule, FMap]:
    fs = f.field
    subs = {v: kernel_basis(m, fs) for v, m in f.comps.items()}
    return submodule(f.source, subs)


def image_subspaces(f: FMap) -> dict[str, Subspace]:
    return {v: image_basis(m, f.field) for v, m in f.comps.items()}


def image(f: FMap) -> tuple[FModule, FMap]:
    return submodule(f.target, image_subspaces(f))


def cokernel(f: FMap) -> tuple[FModule, FMap]:
    return quotient_module(f.target, image_subspaces(f))


def sum_of_images(M: FModule, maps: Iterable[FMap]) -> dict[str, Subspace]:
    fs = M.field
    subs = {v: Subspace.zero(M.dims[v], fs) for v in M.vertices}
    for f in maps:
        for v, m in f.comps.items():
            if m.shape[1]:
                subs[v] = subspace_sum(subs[v], image_basis(m, fs))
    return subs


def is_exact_at(f: FMap, g: FMap) -> bool:
    """Whether im f = ker g (f: A -> B, g: B -> C)."""
    fs = f.field
    for v in f.target.vertices:
        if image_basis(f.comps[v], fs) != kernel_basis(g.comps[v], fs):
            return False
    return True


# representables, simples, radicals

def yoneda_projective(C: FiniteCategory, v: str) -> FModule:
    """Hom_C(v, -) with post-composition."""
    C.check_vertex(v)
    fs = C.field
    dims = {w: C.hom_dim(v, w) for w in C.vertices}
    action = {}
    for a in C.arrows:
        tab = C.composition_table(v, a.source, a.target)
        ac = C.arrow_coords(a.name)
        m = fs.zeros(dims[a.target], dims[a.source])
        for i, c in enumerate(ac):
            if c != 0:
                m = m + c * tab[:, i, :]
        action[a.name] = fs.reduce(m)
    return FModule(C, dims, action, check=False, bundle=(v,))


@dataclass(frozen=True)
class ProjBundle:
    """A projective P = ⊕ Hom_C(v, -) recorded by its vertex multiset."""

    category: FiniteCategory
    vertices: tuple[str, ...]

    def __post_init__(self) -> None:
        for v in self.vertices:
            self.category.check_vertex(v)

    @property
    def support(self) -> tuple[str, ...]:
        """Distinct vertices in category order."""
        s = set(self.vertices)
        return tuple(v for v in self.category.vertices if v in s)

    def opposite(self) -> "ProjBundle":
        return ProjBundle(self.category.opposite(), self.vertices)


def realize_bundle(P: ProjBundle) -> FModule:
    ds = direct_sum([yoneda_projective(P.category, v) for v in P.vertices], P.category)
    M = ds.module
    M.bundle = tuple(P.vertices)
    return M


def simple(C: FiniteCategory, v: str) -> FModule:
    C.check_vertex(v)
    if C.is_zero_object(v):
        raise ModuleError(f"vertex {v} is a zero object; no simple module lives there")
    return FModule(C, {v: 1}, {})


def radical_subspaces(M: FModule) -> dict[str, Subspace]:
    fs = M.field
    subs = {v: Subspace.zero(M.dims[v], fs) for v in M.vertices}
    for a in M.category.arrows:
        m = M.action[a.name]
        if m.shape[1] and m.shape[0]:
            subs[a.target] = subspace_sum(subs[a.target], image_basis(m, fs))
    return subs


def radical(M: FModule) -> tuple[FModule, FMap]:
    return submodule(M, radical_subspaces(M))


def top(M: FModule) -> tuple[FModule, FMap]:
    return quotient_module(M, radical_subspaces(M))


def element_map(M: FModule, v: str, m: Mat) -> FMap:
    """Yoneda: the map Hom(v, -) -> M sending id_v to m ∈ M(v)."""
    C = M.category
    Y = yoneda_projective(C, v)
    fs = M.field
    comps = {}
    for w in C.vertices:
        cols = [fs.dot(b, m) for b in M.basis_action(v, w)]
        comps[w] = np.column_stack(cols) if cols else fs.zeros(M.dims[w], 0)
    return FMap(Y, M, comps, check=False)


def generator_of(Y: FModule, v: str) -> Mat:
    """id_v inside Hom(v, v)."""
    return Y.category.identity_coords(v)


def projective_cover(M: FModule) -> tuple[FModule, FMap]:
    """Minimal projective cover ⊕ Hom(v, -)^(dim top M(v)) -> M."""
    C = M.category
    rad = radical_subspaces(M)
    maps = []
    for v in C.vertices:
        s = quotient_section(M.dims[v], rad[v])
        for j in range(s.shape[1]):
            maps.append(element_map(M, v, s[:, j]))
    ds = direct_sum([f.source for f in maps], C)
    cover = map_from_sum(ds, maps, M)
    return ds.module, cover


def is_projective(M: FModule) -> bool:
    P0, _ = projective_cover(M)
    return P0.dims == M.dims


# duality and injectives

def dualize(M: FModule) -> FModule:
    """D M = Hom_k(M, k), a module over the opposite category."""
    op = M.category.opposite()
    return FModule(op, M.dims, {a: m.T.copy() for a, m in M.action.items()}, check=False, bundle=None)


def dualize_map(f: FMap) -> FMap:
    """D f : D N -> D M for f : M -> N."""
    return FMap(dualize(f.target), dualize(f.source), {v: m.T.copy() for v, m in f.comps.items()}, check=False)


def indecomposable_injective(C: FiniteCategory, v: str) -> FModule:
    return dualize(yoneda_projective(C.opposite(), v))


def injective_envelope(M: FModule) -> tuple[FModule, FMap]:
    P0, cover = projective_cover(dualize(M))
    env = dualize_map(cover)
    return env.target, FMap(M, env.target, env.comps, check=False)


def is_injective(M: FModule) -> bool:
    return is_projective(dualize(M))


def socle_subspaces(M: FModule) -> dict[str, Subspace]:
    """Elements killed by every arrow."""
    fs = M.field
    out = {}
    for v in M.vertices:
        rows = [M.action[a.name] for a in M.category.arrows if a.source == v]
        stacked = np.vstack(rows) if rows else fs.zeros(0, M.dims[v])
        out[v] = kernel_basis(stacked, fs)
    return out


# Hom spaces

class HomSpace:
    """Hom(M, N) with a canonical basis of natural transformations."""

    def __init__(self, M: FModule, N: FModule):
        if M.category is not N.category:
            raise ValueError("modules over different categories")
        self.source, self.target = M, N
        fs = M.field
        C = M.category
        offs, n = {}, 0
        for v in C.vertices:
            offs[v] = n
            n += N.dims[v] * M.dims[v]
        self.offsets, self.n_unknowns = offs, n
        blocks = []
        for a in C.arrows:
            x, y = a.source, a.target
            rows = N.dims[y] * M.dims[x]
            if rows == 0:
                continue
            eq = fs.zeros(rows, n)
            # phi_y M(a) - N(a) phi_x = 0, row-major vectorisation
            eq[:, offs[y]:offs[y] + N.dims[y] * M.dims[y]] += fs.kron(fs.eye(N.dims[y]), M.action[a.name].T)
            eq[:, offs[x]:offs[x] + N.dims[x] * M.dims[x]] -= fs.kron(N.action[a.name], fs.eye(M.dims[x]))
            blocks.append(fs.reduce(eq))
        system = np.vstack(blocks) if blocks else fs.zeros(0, n)
        self.space = kernel_basis(system, fs)

    @property
    def dim(self) -> int:
        return self.space.dim

    def element(self, coords: Sequence) -> FMap:
        fs = self.source.field
        vec = fs.zero_vector(self.n_unknowns)
        for c, row in zip(coords, self.space.basis):
            if c != 0:
                vec = vec + c * row
        return self._unflatten(fs.reduce(vec))

    def _unflatten(self, vec: Mat) -> FMap:
        M, N = self.source, self.target
        comps = {}
        for v in M.vertices:
            o = self.offsets[v]
            comps[v] = vec[o:o + N.dims[v] * M.dims[v]].reshape(N.dims[v], M.dims[v])
        return FMap(M, N, comps, check=False)

    @cached_property
    def basis(self) -> list[FMap]:
        return [self._unflatten(row) for row in self.space.basis]

    def coords(self, f: FMap) -> Mat:
        return self.space.coords(f.flat())


def hom_modules(M: FModule, N: FModule) -> list[FMap]:
    return HomSpace(M, N).basis


def hom_dim(M: FModule, N: FModule) -> int:
    return HomSpace(M, N).dim


def hom_matrix(hs_from: HomSpace, hs_to: HomSpace, op) -> Mat:
    """Matrix of a linear map between hom spaces given on basis elements."""
    fs = hs_from.source.field
    cols = [hs_to.coords(op(f)) for f in hs_from.basis]
    return np.column_stack(cols) if cols else fs.zeros(hs_to.dim, 0)


def split_epi(f: FMap) -> Optional[FMap]:
    """A section s with f∘s = id, if one exists."""
    hs = HomSpace(f.target, f.source)
    fs = f.field
    target = identity_map(f.target).flat()
    if hs.dim == 0:
        return hs.element([]) if is_zero(target) else None
    cols = np.column_stack([(f @ g).flat() for g in hs.basis])
    x = solve(cols, target, fs)
    return None if x is None else hs.element(x)


def split_mono(f: FMap) -> Optional[FMap]:
    """A retraction r with r∘f = id, if one exists."""
    hs = HomSpace(f.target, f.source)
    fs = f.field
    target = identity_map(f.source).flat()
    if hs.dim == 0:
        return hs.element([]) if is_zero(target) else None
    cols = np.column_stack([(g @ f).flat() for g in hs.basis])
    x = solve(cols, target, fs)
    return None if x is None else hs.element(x)


def find_isomorphism(M: FModule, N: FModule, tries: int = 12, seed: int = 0) -> Optional[FMap]:
    """An isomorphism M -> N, found by trying random elements of Hom(M, N)."""
    if M.dims != N.dims:
        return None
    if M.is_zero():
        return zero_map(M, N)
    hs = HomSpace(M, N)
    if hs.dim == 0:
        return None
    fs = M.field
    rng = np.random.default_rng(seed)
    candidates = list(hs.basis)
    for _ in range(tries):
        lo, hi = (-50, 51) if fs.characteristic == 0 else (0, fs.characteristic)
        candidates.append(hs.element([fs.scalar(int(c)) for c in rng.integers(lo, hi, size=hs.dim)]))
    for f in candidates:
        if f.is_iso():
            return f
    return None


def is_isomorphic(M: FModule, N: FModule) -> bool:
    return find_isomorphism(M, N) is not None


# tensor product over C

class TensorProduct:
    """N ⊗_C M for N over C^op and M over C, as a quotient of ⊕_v N(v) ⊗ M(v)."""

    def __init__(self, N: FModule, M: FModule):
        C = M.category
        if N.category is not C.opposite():
            raise ValueError("tensor_over_C needs N over the opposite category of M's")
        fs = M.field
        self.N, self.M = N, M
        offs, n = {}, 0
        for v in C.vertices:
            offs[v] = n
            n += N.dims[v] * M.dims[v]
        self.offsets, self.full_dim = offs, n
        cols = []
        for x in C.vertices:
            for y in C.vertices:
                if not (N.dims[y] and M.dims[x]):
                    continue
                nb = N.basis_action(y, x)
                mb = M.basis_action(x, y)
                for nf, mf in zip(nb, mb):
                    block = fs.zeros(n, N.dims[y] * M.dims[x])
                    # n ⊗ m  ->  N(f)n ⊗ m - n ⊗ M(f)m
                    block[offs[x]:offs[x] + N.dims[x] * M.dims[x]] += fs.kron(nf, fs.eye(M.dims[x]))
                    block[offs[y]:offs[y] + N.dims[y] * M.dims[y]] -= fs.kron(fs.eye(N.dims[y]), mf)
                    cols.append(fs.reduce(block))
        rel = np.hstack(cols) if cols else fs.zeros(n, 0)
        self.relations = image_basis(rel, fs)
        self.quotient = quotient_map(n, self.relations)
        self.section = quotient_section(n, self.relations)

    @property
    def dim(self) -> int:
        return self.quotient.shape[0]

    def element(self, v: str, n: Mat, m: Mat) -> Mat:
        """Class of n ⊗ m with n ∈ N(v), m ∈ M(v)."""
        fs = self.M.field
        vec = fs.zero_vector(self.full_dim)
        o = self.offsets[v]
        vec[o:o + self.N.dims[v] * self.M.dims[v]] = fs.kron(n.reshape(-1, 1), m.reshape(-1, 1)).reshape(-1)
        return fs.dot(self.quotient, vec)


def tensor_over_C(N: FModule, M: FModule) -> TensorProduct:
    return TensorProduct(N, M)


def tensor_map(tn: TensorProduct, tm: TensorProduct, f: FMap) -> Mat:
    """Matrix of N ⊗ f : N ⊗ M -> N ⊗ M' in the quotient coordinates."""
    fs = f.field
    C = f.source.category
    big = fs.zeros(tm.full_dim, tn.full_dim)
    for v in C.vertices:
        dn = tn.N.dims[v]
        if not dn:
            continue
        blk = fs.kron(fs.eye(dn), f.comps[v])
        big[tm.offsets[v]:tm.offsets[v] + blk.shape[0], tn.offsets[v]:tn.offsets[v] + blk.shape[1]] = blk
    return fs.chain(tm.quotient, big, tn.section)


# random modules

def random_extension(M: FModule, N: FModule, rng: np.random.Generator) -> FModule:
    """Middle term of a pseudo-random extension 0 -> N -> E -> M -> 0."""
    fs = M.field
    C = M.category
    offs, n = {}, 0
    for a in C.arrows:
        offs[a.name] = n
        n += N.dims[a.target] * M.dims[a.source]
    rows = []
    for x, y, terms in C.module_constraints():
        blk = fs.zeros(N.dims[y] * M.dims[x], n)
        for c, p in terms:
            for i, name in enumerate(p.arrows):
                pre = Path(p.source, C.quiver.arrow(name).source, p.arrows[:i])
                post = Path(C.quiver.arrow(name).target, p.target, p.arrows[i + 1:])
                a = C.quiver.arrow(name)
                width = N.dims[a.target] * M.dims[a.source]
                if not width or not blk.shape[0]:
                    continue
                coef = fs.kron(N.path_matrix(post), M.path_matrix(pre).T)
                blk[:, offs[name]:offs[name] + width] += c * coef
        rows.append(fs.reduce(blk))
    system = np.vstack(rows) if rows else fs.zeros(0, n)
    cocycles = kernel_basis(system, fs)
    delta = fs.zero_vector(n)
    for row in cocycles.basis:
        c = int(rng.integers(1, 4)) * (1 if rng.random() < 0.5 else -1)
        delta = delta + fs.scalar(c) * row
    delta = fs.reduce(delta)
    dims = {v: N.dims[v] + M.dims[v] for v in C.vertices}
    action = {}
    for a in C.arrows:
        s, t = a.source, a.target
        e = fs.zeros(dims[t], dims[s])
        e[:N.dims[t], :N.dims[s]] = N.action[a.name]
        e[N.dims[t]:, N.dims[s]:] = M.action[a.name]
        o = offs[a.name]
        e[:N.dims[t], N.dims[s]:] = delta[o:o + N.dims[t] * M.dims[s]].reshape(N.dims[t], M.dims[s])
        action[a.name] = e
    return FModule(C, dims, action)


# Krull-Schmidt

def _total_matrix(f: FMap) -> Mat:
    fs = f.field
    vs = f.source.vertices
    n = f.source.total_dim
    out = fs.zeros(n, n)
    o = 0
    for v in vs:
        d = f.source.dims[v]
        out[o:o + d, o:o + d] = f.comps[v]
        o += d
    return out


def _to_sympy(m: Mat, fs: FieldSpec) -> sympy.Matrix:
    return sympy.Matrix(m.shape[0], m.shape[1], [sympy.Rational(int(x.numerator), int(x.denominator))
                                                   if fs.characteristic == 0 else int(x) for x in m.flat])


def _poly_eval(coeffs: list, m: Mat, fs: FieldSpec) -> Mat:
    n = m.shape[0]
    out = fs.zeros(n, n)
    for c in coeffs:
        out = fs.reduce(fs.dot(out, m) + fs.scalar(c) * fs.eye(n))
    return out


def _fitting_split(M: FModule, phi: FMap) -> Optional[tuple[dict, dict]]:
    """Primary decomposition of M under the endomorphism phi, if nontrivial."""
    fs = M.field
    n = M.total_dim
    A = _to_sympy(_total_matrix(phi), fs)
    x = sympy.Symbol("x")
    if fs.characteristic:
        poly = sympy.Poly(A.charpoly(x).as_expr(), x, modulus=fs.characteristic)
    else:
        poly = A.charpoly(x)
    _, factors = poly.factor_list()
    if len(factors) < 2:
        return None
    f0 = factors[0][0]
    if fs.characteristic:
        coeffs = [int(c) % fs.characteristic for c in f0.all_coeffs()]
    else:
        coeffs = [fs.scalar(str(c)) for c in f0.all_coeffs()]
    ker, img = {}, {}
    for v in M.vertices:
        d = M.dims[v]
        pv = _poly_eval(coeffs, phi.comps[v], fs)
        power = fs.eye(d)
        for _ in range(n):
            power = fs.dot(power, pv)
        ker[v] = kernel_basis(power, fs)
        img[v] = image_basis(power, fs)
    return ker, img


def decomposition(M: FModule, seed: int = 0) -> tuple[list[FModule], FMap]:
    """Indecomposable summands of M and an isomorphism ⊕ summands -> M."""
    if M.is_zero():
        return [], zero_map(direct_sum([], M.category).module, M)
    fs = M.field
    hs = HomSpace(M, M)
    rng = np.random.default_rng(seed)
    candidates = list(hs.basis)
    lo, hi = (-9, 10) if fs.characteristic == 0 else (0, fs.characteristic)
    for _ in range(6):
        candidates.append(hs.element([fs.scalar(int(c)) for c in rng.integers(lo, hi, size=hs.dim)]))
    for phi in candidates:
        split = _fitting_split(M, phi)
        if split is None:
            continue
        ker, img = split
        A, ea = submodule(M, ker)
        B, eb = submodule(M, img)
        sa, ia = decomposition(A, seed)
        sb, ib = decomposition(B, seed)
        parts = sa + sb
        ds = direct_sum(parts, M.category)
        maps = [ea @ ia @ inj for inj in direct_sum(sa, M.category).injections] if sa else []
        maps += [eb @ ib @ inj for inj in direct_sum(sb, M.category).injections] if sb else []
        iso = map_from_sum(ds, maps, M)
        return parts, iso
    return [M], identity_map(M)


def decompose(M: FModule) -> list[FModule]:
    return decomposition(M)[0]


def endomorphism_top_dim(M: FModule) -> int:
    """dim End(M)/rad End(M), via the trace form (characteristic 0 only).

    The value 1 certifies that M is indecomposable with trivial top.
    """
    fs = M.field
    if fs.characteristic:
        raise ValueError("trace-form radical needs characteristic 0")
    basis = [_total_matrix(f) for f in HomSpace(M, M).basis]
    g = fs.zeros(len(basis), len(basis))
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            g[i, j] = np.trace(fs.dot(a, b)) if a.size else fs.zero
    return rank(g, fs)
