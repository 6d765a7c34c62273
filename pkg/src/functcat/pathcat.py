"""Finite path categories KQ/<relations> of quivers with admissible relations.

Conventions: ``g∘f`` means f first. A :class:`Path` stores its arrows in
traversal order, while relation words are written right-to-left, so the word
``("a2", "a1")`` is the composite a2∘a1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence

import numpy as np

from .exactlin import QQ, FieldSpec, Mat, Subspace, is_zero


class NonAdmissible(ValueError):
    """Some path of the maximal length survives modulo the relations."""


class UnknownVertex(ValueError):
    pass


class UnknownArrow(ValueError):
    pass


class NotComposable(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        known = set(self.vertices)
        for a in self.arrows:
            for v in (a.source, a.target):
                if v not in known:
                    raise UnknownVertex(f"arrow {a.name} uses unknown vertex {v!r}")

    @classmethod
    def from_lists(cls, vertices: Iterable, arrows: Iterable[tuple[str, str, str]] = ()) -> "Quiver":
        return cls(tuple(str(v) for v in vertices), tuple(Arrow(n, str(s), str(t)) for n, s, t in arrows))

    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrow_map[name]
        except KeyError:
            raise UnknownArrow(f"unknown arrow {name!r}") from None

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


@dataclass(frozen=True)
class Path:
    """A path x -> y; `arrows` lists arrow names in the order they are traversed."""

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def reversed(self) -> "Path":
        return Path(self.target, self.source, self.arrows[::-1])

    def word(self) -> str:
        """Right-to-left notation, e.g. 'a2.a1'; trivial paths print as 'e_x'."""
        return ".".join(reversed(self.arrows)) if self.arrows else f"e_{self.source}"


@dataclass(frozen=True)
class Relation:
    """Linear combination of parallel paths; words are written right-to-left."""

    terms: tuple[tuple[object, tuple[str, ...]], ...]

    def paths(self, q: Quiver) -> list[tuple[object, Path]]:
        out = []
        for coef, word in self.terms:
            if not word:
                raise ValueError("relation terms need at least one arrow")
            trav = tuple(reversed(word))
            arrows = [q.arrow(a) for a in trav]
            for a, b in zip(arrows, arrows[1:]):
                if a.target != b.source:
                    raise NotComposable(f"{'.'.join(word)} is not a path")
            out.append((coef, Path(arrows[0].source, arrows[-1].target, trav)))
        ends = {(p.source, p.target) for _, p in out}
        if len(ends) != 1:
            raise ValueError("relation terms must be parallel paths")
        return out

    def opposite(self) -> "Relation":
        return Relation(tuple((c, tuple(reversed(w))) for c, w in self.terms))


@dataclass(frozen=True)
class Morphism:
    source: str
    target: str
    coords: tuple

    def __add__(self, other: "Morphism") -> "Morphism":
        if (self.source, self.target) != (other.source, other.target):
            raise NotComposable("adding morphisms between different objects")
        return Morphism(self.source, self.target, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


class FiniteCategory:
    """Shared interface of path categories and their quotients.

    Subclasses provide `quiver`, `field`, `basis_paths(x, y)` and
    `path_coords(path)`; hom spaces carry the basis given by `basis_paths`.
    """

    quiver: Quiver
    field: FieldSpec

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    def check_vertex(self, v: str) -> str:
        if v not in self.quiver.vertices:
            raise UnknownVertex(f"unknown vertex {v!r}")
        return v

    def basis_paths(self, x: str, y: str) -> list[Path]:
        raise NotImplementedError

    def path_coords(self, p: Path) -> Mat:
        raise NotImplementedError

    def module_constraints(self) -> list[tuple[str, str, list[tuple[object, Path]]]]:
        """Linear combinations of paths that every module must annihilate."""
        raise NotImplementedError

    def opposite(self) -> "FiniteCategory":
        raise NotImplementedError

    def hom_dim(self, x: str, y: str) -> int:
        return len(self.basis_paths(x, y))

    def hom_dims(self) -> dict[tuple[str, str], int]:
        return {(x, y): self.hom_dim(x, y) for x in self.vertices for y in self.vertices}

    def identity_coords(self, v: str) -> Mat:
        return self.path_coords(Path(v, v, ()))

    def identity(self, v: str) -> Morphism:
        return Morphism(v, v, tuple(self.identity_coords(v)))

    def arrow_coords(self, name: str) -> Mat:
        a = self.quiver.arrow(name)
        return self.path_coords(Path(a.source, a.target, (name,)))

    def arrow_morphism(self, name: str) -> Morphism:
        a = self.quiver.arrow(name)
        return Morphism(a.source, a.target, tuple(self.arrow_coords(name)))

    def path_morphism(self, p: Path) -> Morphism:
        return Morphism(p.source, p.target, tuple(self.path_coords(p)))

    def basis_morphism(self, x: str, y: str, i: int) -> Morphism:
        return Morphism(x, y, tuple(self.field.unit_vector(self.hom_dim(x, y), i)))

    def is_zero_object(self, v: str) -> bool:
        return self.hom_dim(v, v) == 0

    @cached_property
    def _tables(self) -> dict:
        return {}

    def composition_table(self, x: str, y: str, z: str) -> Mat:
        """T[:, i, j] = coords of b_i(y,z) ∘ b_j(x,y)."""
        key = (x, y, z)
        tab = self._tables.get(key)
        if tab is None:
            fs = self.field
            bxy, byz = self.basis_paths(x, y), self.basis_paths(y, z)
            dxz = self.hom_dim(x, z)
            tab = np.full((dxz, len(byz), len(bxy)), fs.zero, dtype=object)
            for i, g in enumerate(byz):
                for j, f in enumerate(bxy):
                    tab[:, i, j] = self.path_coords(Path(x, z, f.arrows + g.arrows))
            self._tables[key] = tab
        return tab

    def compose_coords(self, x: str, y: str, z: str, g: Mat, f: Mat) -> Mat:
        """Coordinates of g∘f for f: x -> y and g: y -> z."""
        fs = self.field
        tab = self.composition_table(x, y, z)
        out = fs.zero_vector(tab.shape[0])
        for i, gi in enumerate(g):
            if gi == 0:
                continue
            for j, fj in enumerate(f):
                if fj != 0:
                    out = out + gi * fj * tab[:, i, j]
        return fs.reduce(out)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if f.target != g.source:
            raise NotComposable(f"cannot compose {f.source}->{f.target} with {g.source}->{g.target}")
        c = self.compose_coords(f.source, f.target, g.target, np.array(g.coords, dtype=object), np.array(f.coords, dtype=object))
        return Morphism(f.source, g.target, tuple(c))

    def check_associativity(self) -> bool:
        """Exhaustive check of (h∘g)∘f = h∘(g∘f) on basis triples."""
        fs = self.field
        vs = self.vertices
        for w, x, y, z in product(vs, repeat=4):
            dwx, dxy, dyz = self.hom_dim(w, x), self.hom_dim(x, y), self.hom_dim(y, z)
            if not (dwx and dxy and dyz):
                continue
            for i, j, k in product(range(dyz), range(dxy), range(dwx)):
                h, g, f = fs.unit_vector(dyz, i), fs.unit_vector(dxy, j), fs.unit_vector(dwx, k)
                left = self.compose_coords(w, x, z, self.compose_coords(x, y, z, h, g), f)
                right = self.compose_coords(w, y, z, h, self.compose_coords(w, x, y, g, f))
                if not np.array_equal(left, right):
                    return False
        return True

    def check_identities(self) -> bool:
        fs = self.field
        for x, y in product(self.vertices, repeat=2):
            for i in range(self.hom_dim(x, y)):
                f = fs.unit_vector(self.hom_dim(x, y), i)
                if not np.array_equal(self.compose_coords(x, y, y, self.identity_coords(y), f), f):
                    return False
                if not np.array_equal(self.compose_coords(x, x, y, f, self.identity_coords(x)), f):
                    return False
        return True


class PathCategory(FiniteCategory):
    """C = KQ/<rho>, with hom bases made of residue classes of paths."""

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], fs: FieldSpec, max_len: int,
                 basis: dict, normal: dict):
        self.quiver = quiver
        self.relations = tuple(relations)
        self.field = fs
        self.max_len = max_len
        self._basis = basis
        self._normal = normal
        self._opposite: Optional[PathCategory] = None

    def __repr__(self) -> str:
        return f"PathCategory({len(self.vertices)} vertices, {len(self.arrows)} arrows, {self.field})"

    def basis_paths(self, x: str, y: str) -> list[Path]:
        self.check_vertex(x)
        self.check_vertex(y)
        return self._basis.get((x, y), [])

    def path_coords(self, p: Path) -> Mat:
        d = self.hom_dim(p.source, p.target)
        if len(p) > self.max_len:
            return self.field.zero_vector(d)
        try:
            return self._normal[(p.source, p.target)][p.arrows].copy()
        except KeyError:
            raise NotComposable(f"{p.word()} is not a path {p.source} -> {p.target}") from None

    def module_constraints(self) -> list[tuple[str, str, list[tuple[object, Path]]]]:
        out = []
        for r in self.relations:
            terms = [(self.field.scalar(c), p) for c, p in r.paths(self.quiver)]
            out.append((terms[0][1].source, terms[0][1].target, terms))
        return out

    def opposite(self) -> "PathCategory":
        if self._opposite is None:
            basis = {(y, x): [p.reversed() for p in ps] for (x, y), ps in self._basis.items()}
            normal = {(y, x): {tuple(reversed(k)): v for k, v in nf.items()} for (x, y), nf in self._normal.items()}
            op = PathCategory(self.quiver.opposite(), [r.opposite() for r in self.relations], self.field,
                              self.max_len, basis, normal)
            op._opposite = self
            self._opposite = op
        return self._opposite


def _enumerate_paths(q: Quiver, max_len: int) -> list[Path]:
    out_arrows: dict[str, list[Arrow]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        out_arrows[a.source].append(a)
    paths = [Path(v, v, ()) for v in q.vertices]
    frontier = list(paths)
    for _ in range(max_len):
        nxt = [Path(p.source, a.target, p.arrows + (a.name,)) for p in frontier for a in out_arrows[p.target]]
        paths.extend(nxt)
        frontier = nxt
    return paths


def build_path_category(q: Quiver, rels: Sequence[Relation] = (), fs: FieldSpec = QQ, max_len: int = 4) -> PathCategory:
    """Build KQ/<rels> with paths truncated at `max_len`.

    Raises NonAdmissible unless every path of length `max_len` lies in the
    span of the relation ideal, which certifies that all longer paths vanish.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    rel_paths = [[(fs.scalar(c), p) for c, p in r.paths(q)] for r in rels]
    paths = _enumerate_paths(q, max_len)

    by_pair: dict[tuple[str, str], list[Path]] = {}
    for p in paths:
        by_pair.setdefault((p.source, p.target), []).append(p)
    # long paths first so that echelon pivots fall on them
    for ps in by_pair.values():
        ps.sort(key=lambda p: (-len(p), p.arrows))
    index = {pair: {p.arrows: i for i, p in enumerate(ps)} for pair, ps in by_pair.items()}
    starting: dict[str, list[Path]] = {v: [] for v in q.vertices}
    ending: dict[str, list[Path]] = {v: [] for v in q.vertices}
    for p in paths:
        starting[p.source].append(p)
        ending[p.target].append(p)

    def ideal_vectors(truncate: bool) -> dict[tuple[str, str], list[Mat]]:
        vecs: dict[tuple[str, str], list[Mat]] = {}
        for terms in rel_paths:
            x, y = terms[0][1].source, terms[0][1].target
            for w in ending[x]:
                for u in starting[y]:
                    pair = (w.source, u.target)
                    full = [(c, w.arrows + p.arrows + u.arrows) for c, p in terms]
                    short = [(c, a) for c, a in full if len(a) <= max_len]
                    if not short or (len(short) < len(full) and not truncate):
                        continue
                    v = fs.zero_vector(len(by_pair[pair]))
                    for c, a in short:
                        v[index[pair][a]] = fs.reduce(v[index[pair][a]] + c) if fs.characteristic else v[index[pair][a]] + c
                    vecs.setdefault(pair, []).append(v)
        return vecs

    def spans(vecs: dict) -> dict[tuple[str, str], Subspace]:
        return {pair: Subspace.span(vecs.get(pair, []), len(ps), fs) for pair, ps in by_pair.items()}

    exact = spans(ideal_vectors(truncate=False))
    for pair, ps in by_pair.items():
        for p in ps:
            if len(p) == max_len and not exact[pair].contains(fs.unit_vector(len(ps), index[pair][p.arrows])):
                raise NonAdmissible(f"path {p.word()} of length {max_len} survives modulo the relations")
    # all paths of length >= max_len lie in the ideal, so truncated vectors are legitimate
    ideal = spans(ideal_vectors(truncate=True))

    basis: dict[tuple[str, str], list[Path]] = {}
    normal: dict[tuple[str, str], dict[tuple[str, ...], Mat]] = {}
    for pair, ps in by_pair.items():
        sub = ideal[pair]
        keep = sub.complement_indices()
        order = sorted(keep, key=lambda j: (len(ps[j]), ps[j].arrows))
        basis[pair] = [ps[j] for j in order]
        nf = {}
        for i, p in enumerate(ps):
            red = sub.reduce(fs.unit_vector(len(ps), i))
            nf[p.arrows] = np.array([red[j] for j in order], dtype=object).reshape(len(order))
        normal[pair] = nf
    cat = PathCategory(q, rels, fs, max_len, basis, normal)
    for x, y, terms in cat.module_constraints():
        total = fs.zero_vector(cat.hom_dim(x, y))
        for c, p in terms:
            total = fs.reduce(total + c * cat.path_coords(p))
        assert is_zero(total), "relation does not vanish in the built category"
    return cat


def compose(C: FiniteCategory, g: Morphism, f: Morphism) -> Morphism:
    return C.compose(g, f)


def opposite(C: FiniteCategory) -> FiniteCategory:
    return C.opposite()


def linear_quiver(n: int, prefix: str = "a") -> Quiver:
    """1 -> 2 -> ... -> n with arrows a1, ..., a(n-1)."""
    return Quiver.from_lists(range(1, n + 1), [(f"{prefix}{i}", str(i), str(i + 1)) for i in range(1, n)])
