"""Ideals of a path category, the quotient C/I and the functors π^*, π_*, π^!."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactlin import Subspace, is_zero, kernel_basis, quotient_map, quotient_section, subspace_sum
from .funmod import (
    FMap,
    FModule,
    HomSpace,
    ProjBundle,
    cokernel,
    projective_cover,
    quotient_module,
    realize_bundle,
    submodule,
    sum_of_images,
    yoneda_projective,
)
from .pathcat import FiniteCategory, Morphism, Path


class IdealError(ValueError):
    pass


class Ideal:
    """Per-pair subspaces I(x, y) of Hom_C(x, y), closed under composition on both sides."""

    def __init__(self, category: FiniteCategory, sub: dict, check: bool = True, label: str = ""):
        self.category = category
        fs = category.field
        self.sub: dict[tuple[str, str], Subspace] = {}
        for x, y in product(category.vertices, repeat=2):
            s = sub.get((x, y))
            self.sub[(x, y)] = s if s is not None else Subspace.zero(category.hom_dim(x, y), fs)
        self.label = label
        if check and not self.is_closed():
            raise IdealError("subspaces are not closed under composition")

    def __repr__(self) -> str:
        total = sum(s.dim for s in self.sub.values())
        return f"Ideal({self.label or 'unnamed'}, total dim {total})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return self.category is other.category and self.sub == other.sub

    __hash__ = None  # type: ignore[assignment]

    def dim(self, x: str, y: str) -> int:
        return self.sub[(x, y)].dim

    def dims(self) -> dict[tuple[str, str], int]:
        return {k: s.dim for k, s in self.sub.items()}

    def contains(self, f: Morphism) -> bool:
        return self.sub[(f.source, f.target)].contains(np.array(f.coords, dtype=object))

    def is_closed(self) -> bool:
        C = self.category
        fs = C.field
        vs = C.vertices
        for (x, y), s in self.sub.items():
            for g in s.basis:
                for z in vs:
                    for i in range(C.hom_dim(y, z)):
                        h = fs.unit_vector(C.hom_dim(y, z), i)
                        if not self.sub[(x, z)].contains(C.compose_coords(x, y, z, h, g)):
                            return False
                for w in vs:
                    for i in range(C.hom_dim(w, x)):
                        e = fs.unit_vector(C.hom_dim(w, x), i)
                        if not self.sub[(w, y)].contains(C.compose_coords(w, x, y, g, e)):
                            return False
        return True

    def opposite(self) -> "Ideal":
        """I^op, an ideal of C^op with I^op(y, x) = I(x, y)."""
        op = self.category.opposite()
        return Ideal(op, {(y, x): s for (x, y), s in self.sub.items()}, check=False, label=self.label)


def _close(C: FiniteCategory, gens: dict[tuple[str, str], list]) -> dict[tuple[str, str], Subspace]:
    """Two-sided ideal generated by the given coordinate vectors."""
    fs = C.field
    vs = C.vertices
    vecs: dict[tuple[str, str], list] = {}
    for (x, y), gs in gens.items():
        for g in gs:
            for w, z in product(vs, repeat=2):
                for j in range(C.hom_dim(w, x)):
                    ge = C.compose_coords(w, x, y, g, fs.unit_vector(C.hom_dim(w, x), j))
                    if is_zero(ge):
                        continue
                    for i in range(C.hom_dim(y, z)):
                        h = fs.unit_vector(C.hom_dim(y, z), i)
                        vecs.setdefault((w, z), []).append(C.compose_coords(w, y, z, h, ge))
    return {pair: Subspace.span(vs_, C.hom_dim(*pair), fs) for pair, vs_ in vecs.items()}


def ideal_generated(C: FiniteCategory, gens: Iterable[Morphism], label: str = "generated") -> Ideal:
    g: dict[tuple[str, str], list] = {}
    for f in gens:
        g.setdefault((f.source, f.target), []).append(np.array(f.coords, dtype=object))
    return Ideal(C, _close(C, g), label=label)


def zero_ideal(C: FiniteCategory) -> Ideal:
    return Ideal(C, {}, check=False, label="zero")


def full_ideal(C: FiniteCategory) -> Ideal:
    fs = C.field
    return Ideal(C, {(x, y): Subspace.full(C.hom_dim(x, y), fs) for x, y in product(C.vertices, repeat=2)},
                 check=False, label="full")


def arrow_ideal(C: FiniteCategory) -> Ideal:
    """The ideal spanned by all classes of paths of positive length."""
    fs = C.field
    sub = {}
    for x, y in product(C.vertices, repeat=2):
        n = C.hom_dim(x, y)
        vecs = [fs.unit_vector(n, i) for i, p in enumerate(C.basis_paths(x, y)) if len(p) > 0]
        sub[(x, y)] = Subspace.span(vecs, n, fs)
    return Ideal(C, sub, label="arrow")


def trace_ideal(C: FiniteCategory, P: ProjBundle | Sequence[str]) -> Ideal:
    """Morphisms factoring through the vertices of P."""
    verts = P.support if isinstance(P, ProjBundle) else tuple(dict.fromkeys(P))
    fs = C.field
    sub = {}
    for x, y in product(C.vertices, repeat=2):
        vecs = []
        for v in verts:
            for j in range(C.hom_dim(x, v)):
                f = fs.unit_vector(C.hom_dim(x, v), j)
                for i in range(C.hom_dim(v, y)):
                    g = fs.unit_vector(C.hom_dim(v, y), i)
                    vecs.append(C.compose_coords(x, v, y, g, f))
        sub[(x, y)] = Subspace.span(vecs, C.hom_dim(x, y), fs)
    return Ideal(C, sub, label="trace(" + ",".join(verts) + ")")


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    """IJ: spans of f∘g with g ∈ J(x, c) and f ∈ I(c, y)."""
    if I.category is not J.category:
        raise IdealError("ideals over different categories")
    C = I.category
    fs = C.field
    sub = {}
    for x, y in product(C.vertices, repeat=2):
        vecs = []
        for c in C.vertices:
            for g in J.sub[(x, c)].basis:
                for f in I.sub[(c, y)].basis:
                    vecs.append(C.compose_coords(x, c, y, f, g))
        sub[(x, y)] = Subspace.span(vecs, C.hom_dim(x, y), fs)
    return Ideal(C, sub, label="product")


def is_idempotent(I: Ideal) -> bool:
    return ideal_product(I, I) == I


def ideal_submodule(I: Ideal, c: str) -> tuple[FModule, FMap]:
    """I(c, -) with its inclusion into Hom(c, -)."""
    Y = yoneda_projective(I.category, c)
    return submodule(Y, {w: I.sub[(c, w)] for w in I.category.vertices})


def ideal_as_module(I: Ideal, c: str) -> FModule:
    return ideal_submodule(I, c)[0]


def coideal_submodule(I: Ideal, c: str) -> tuple[FModule, FMap]:
    """I(-, c) over C^op, inside Hom_{C^op}(c, -) = Hom_C(-, c)."""
    Y = yoneda_projective(I.category.opposite(), c)
    return submodule(Y, {w: I.sub[(w, c)] for w in I.category.vertices})


def coideal_as_module(I: Ideal, c: str) -> FModule:
    return coideal_submodule(I, c)[0]


def quotient_representable(I: Ideal, c: str) -> FModule:
    """Hom_C(c, -)/I(c, -) as a C-module."""
    return cokernel(ideal_submodule(I, c)[1])[0]


def coquotient_representable(I: Ideal, c: str) -> FModule:
    """Hom_C(-, c)/I(-, c) as a C^op-module."""
    return cokernel(coideal_submodule(I, c)[1])[0]


@dataclass
class PropertyAWitness:
    covariant: dict[str, FMap]
    contravariant: dict[str, FMap]

    def all_surjective(self) -> bool:
        return all(f.is_epi() for f in list(self.covariant.values()) + list(self.contravariant.values()))


def property_A_witness(C: FiniteCategory, I: Ideal) -> PropertyAWitness:
    """Finite projective presentations of I(c, -) and I(-, c) for every c."""
    cov = {c: projective_cover(ideal_as_module(I, c))[1] for c in C.vertices}
    contra = {c: projective_cover(coideal_as_module(I, c))[1] for c in C.vertices}
    return PropertyAWitness(cov, contra)


class QuotientCategory(FiniteCategory):
    """C/I: same objects and arrows; Hom_{C/I}(x, y) = Hom_C(x, y)/I(x, y).

    The basis of each quotient hom space is the set of base basis elements at
    non-pivot positions of I(x, y); the section maps each of them to itself.
    Vertices with I(v, v) = Hom(v, v) stay as zero objects.
    """

    def __init__(self, base: FiniteCategory, ideal: Ideal):
        if ideal.category is not base:
            raise IdealError("ideal lives on another category")
        self.base = base
        self.ideal = ideal
        self.quiver = base.quiver
        self.field = base.field
        self._keep = {k: s.complement_indices() for k, s in ideal.sub.items()}
        self._proj = {k: quotient_map(s.ambient_dim, s) for k, s in ideal.sub.items()}
        self._opposite: Optional[QuotientCategory] = None

    def __repr__(self) -> str:
        return f"QuotientCategory({self.base!r} / {self.ideal!r})"

    def basis_paths(self, x: str, y: str) -> list[Path]:
        bp = self.base.basis_paths(x, y)
        return [bp[j] for j in self._keep[(x, y)]]

    def projection(self, x: str, y: str) -> np.ndarray:
        return self._proj[(x, y)]

    def section(self, x: str, y: str) -> np.ndarray:
        s = self.ideal.sub[(x, y)]
        return quotient_section(s.ambient_dim, s)

    def project(self, x: str, y: str, coords) -> np.ndarray:
        return self.field.dot(self._proj[(x, y)], np.asarray(coords, dtype=object))

    def path_coords(self, p: Path) -> np.ndarray:
        return self.project(p.source, p.target, self.base.path_coords(p))

    def module_constraints(self) -> list:
        out = list(self.base.module_constraints())
        for (x, y), s in self.ideal.sub.items():
            paths = self.base.basis_paths(x, y)
            for row in s.basis:
                out.append((x, y, [(c, paths[j]) for j, c in enumerate(row) if c != 0]))
        return out

    def opposite(self) -> "QuotientCategory":
        if self._opposite is None:
            op = QuotientCategory(self.base.opposite(), self.ideal.opposite())
            op._opposite = self
            self._opposite = op
        return self._opposite

    def check_well_defined(self) -> bool:
        """π(i∘f) = 0 and π(g∘i) = 0 for ideal basis i and base basis f, g."""
        C = self.base
        fs = self.field
        for (x, y), s in self.ideal.sub.items():
            for i in s.basis:
                for z in C.vertices:
                    for k in range(C.hom_dim(y, z)):
                        g = fs.unit_vector(C.hom_dim(y, z), k)
                        if not is_zero(self.project(x, z, C.compose_coords(x, y, z, g, i))):
                            return False
                    for k in range(C.hom_dim(z, x)):
                        f = fs.unit_vector(C.hom_dim(z, x), k)
                        if not is_zero(self.project(z, y, C.compose_coords(z, x, y, i, f))):
                            return False
        return True


def quotient_category(C: FiniteCategory, I: Ideal) -> QuotientCategory:
    return QuotientCategory(C, I)


# the three functors

def _require(M: FModule, cat: FiniteCategory, what: str) -> None:
    if M.category is not cat:
        raise ValueError(f"{what} expects a module over {cat!r}")


def pi_push(Q: QuotientCategory, F: FModule) -> FModule:
    """π_*: restriction of scalars along C -> C/I."""
    _require(F, Q, "pi_push")
    return FModule(Q.base, F.dims, F.action, check=False, bundle=None)


def pi_push_map(Q: QuotientCategory, f: FMap) -> FMap:
    return FMap(pi_push(Q, f.source), pi_push(Q, f.target), f.comps, check=False)


def ideal_action_subspaces(Q: QuotientCategory, M: FModule) -> dict[str, Subspace]:
    """(IM)(v) = Σ images of M(f) over basis f ∈ I(w, v)."""
    fs = M.field
    C = Q.base
    subs = {}
    for v in C.vertices:
        s = Subspace.zero(M.dims[v], fs)
        for w in C.vertices:
            if not M.dims[w]:
                continue
            for row in Q.ideal.sub[(w, v)].basis:
                m = M.morphism_matrix(w, v, row)
                s = subspace_sum(s, Subspace.span(m.T, M.dims[v], fs))
        subs[v] = s
    return subs


def pi_star_unit(Q: QuotientCategory, M: FModule) -> FMap:
    """The projection M -> π_*π^*(M) = M/IM, over C."""
    _require(M, Q.base, "pi_star")
    _, proj = quotient_module(M, ideal_action_subspaces(Q, M))
    return proj


def pi_star(Q: QuotientCategory, M: FModule) -> FModule:
    """π^* = C/I ⊗_C -, computed as M/IM."""
    return pi_star_unit(Q, M).target.retag(Q)


def pi_star_map(Q: QuotientCategory, f: FMap) -> FMap:
    """π^*(f): M/IM -> N/IN."""
    fs = f.field
    um, un = pi_star_unit(Q, f.source), pi_star_unit(Q, f.target)
    sm = {v: quotient_section(f.source.dims[v], ideal_action_subspaces(Q, f.source)[v]) for v in f.source.vertices}
    comps = {v: fs.chain(un.comps[v], f.comps[v], sm[v]) for v in f.source.vertices}
    return FMap(um.target.retag(Q), un.target.retag(Q), comps, check=True)


def annihilator_subspaces(Q: QuotientCategory, M: FModule) -> dict[str, Subspace]:
    """{m ∈ M(v) : M(f) m = 0 for all f ∈ I(v, w)}."""
    fs = M.field
    C = Q.base
    subs = {}
    for v in C.vertices:
        rows = []
        for w in C.vertices:
            for row in Q.ideal.sub[(v, w)].basis:
                rows.append(M.morphism_matrix(v, w, row))
        stacked = np.vstack(rows) if rows else fs.zeros(0, M.dims[v])
        subs[v] = kernel_basis(stacked, fs)
    return subs


def pi_shriek_counit(Q: QuotientCategory, M: FModule) -> FMap:
    """The inclusion π_*π^!(M) -> M."""
    _require(M, Q.base, "pi_shriek")
    _, emb = submodule(M, annihilator_subspaces(Q, M))
    return emb


def pi_shriek(Q: QuotientCategory, M: FModule, cross_check: bool = False) -> FModule:
    """π^!: the largest submodule of M annihilated by I."""
    emb = pi_shriek_counit(Q, M)
    if cross_check and trace_of_quotients(Q, M) != annihilator_subspaces(Q, M):
        raise AssertionError("annihilator and trace descriptions of π^! disagree")
    return emb.source.retag(Q)


def pi_shriek_map(Q: QuotientCategory, f: FMap) -> FMap:
    """π^!(f), the restriction of f to the annihilated parts."""
    fs = f.field
    em, en = pi_shriek_counit(Q, f.source), pi_shriek_counit(Q, f.target)
    sub_n = annihilator_subspaces(Q, f.target)
    comps = {}
    for v in f.source.vertices:
        img = fs.dot(f.comps[v], em.comps[v])
        t = sub_n[v]
        comps[v] = img[list(t.pivots), :] if t.dim else fs.zeros(0, img.shape[1])
    return FMap(em.source.retag(Q), en.source.retag(Q), comps, check=True)


def trace_of_quotients(Q: QuotientCategory, M: FModule) -> dict[str, Subspace]:
    """Sum of images of all maps Hom_C(c, -)/I(c, -) -> M."""
    maps = []
    for c in Q.base.vertices:
        G = quotient_representable(Q.ideal, c)
        maps.extend(HomSpace(G, M).basis)
    return sum_of_images(M, maps)


def trace_submodule(M: FModule, sources: Sequence[FModule]) -> dict[str, Subspace]:
    """Tr_X(M): sum of images of all maps X -> M, for X in `sources`."""
    maps = []
    for X in sources:
        maps.extend(HomSpace(X, M).basis)
    return sum_of_images(M, maps)


def trace_P(P: ProjBundle, M: FModule) -> dict[str, Subspace]:
    return trace_submodule(M, [realize_bundle(P)])


def quotient_projective(Q: QuotientCategory, v: str) -> FModule:
    """Hom_{C/I}(v, -) over C/I."""
    return yoneda_projective(Q, v)


def quotient_injective(Q: QuotientCategory, v: str) -> FModule:
    """D Hom_{C/I}(-, v) over C/I."""
    from .funmod import dualize

    return dualize(yoneda_projective(Q.opposite(), v))


def annihilated(Q: QuotientCategory, M: FModule) -> bool:
    """Whether M (over C) lies in Ann(I)."""
    subs = ideal_action_subspaces(Q, M)
    return all(s.dim == 0 for s in subs.values())
