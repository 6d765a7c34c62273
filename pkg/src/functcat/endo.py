"""The algebra R_P = End(P)^op, the functor Hom(P, -) and its adjoints, and the recollement checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    AlgebraError,
    AlgHomSpace,
    AlgMap,
    AlgModule,
    FDAlgebra,
    alg_ext,
    alg_find_isomorphism,
    alg_global_dimension,
    alg_is_injective,
    alg_is_projective,
    alg_projective_dimension,
    alg_simple,
    indecomposable_projective,
    regular_module,
)
from .exactlin import Mat, Subspace, image_basis, kernel_basis, quotient_map, quotient_section, rank
from .funmod import (
    FMap,
    FModule,
    HomSpace,
    ModuleError,
    ProjBundle,
    element_map,
    hom_dim,
    identity_map,
    image_subspaces,
    indecomposable_injective,
    is_projective,
    kernel,
    cokernel,
    projective_cover,
    radical_subspaces,
    realize_bundle,
    split_epi,
    yoneda_projective,
)
from .homology import (
    CriteriaMismatch,
    DEFAULT_SEED,
    ext,
    global_dimension,
    idempotency_level,
    injective_coresolution,
    module_battery,
    pk_level,
    projective_dimension,
    quotient_battery,
)
from .ideals import (
    QuotientCategory,
    ideal_as_module,
    pi_push,
    pi_push_map,
    pi_shriek,
    pi_shriek_counit,
    pi_shriek_map,
    pi_star,
    pi_star_map,
    pi_star_unit,
    quotient_category,
    trace_P,
    trace_ideal,
)
from .pathcat import FiniteCategory


class EndoAlgebra(FDAlgebra):
    """R_P = End(P)^op with basis the natural endomorphisms of P.

    The product is b_i · b_j = b_j ∘ b_i. Summand j of P has projection π_j and
    inclusion ι_j, and ε_j = ι_j ∘ π_j is the idempotent of that summand.
    """

    def __init__(self, P: ProjBundle, check: bool = True):
        if not P.vertices:
            raise ModuleError("the projective P must be nonzero")
        C = P.category
        fs = C.field
        self.field = fs
        self.bundle = P
        self.module = realize_bundle(P)
        self.space = HomSpace(self.module, self.module)
        maps = self.space.basis
        self.maps = maps
        n = len(maps)
        mult = np.empty((n, n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                mult[:, i, j] = self.space.coords(maps[j] @ maps[i])
        unit = self.space.coords(identity_map(self.module))
        self.summands = [yoneda_projective(C, v) for v in P.vertices]
        self.projections, self.inclusions = self._summand_maps()
        self.summand_idempotents = [self.space.coords(i @ p) for i, p in zip(self.inclusions, self.projections)]
        seen, idem = set(), []
        for v, e in zip(P.vertices, self.summand_idempotents):
            if v not in seen:
                seen.add(v)
                idem.append((v, e))
        super().__init__(fs, mult, unit, self._radical(), idem, check=check)

    def _summand_maps(self) -> tuple[list[FMap], list[FMap]]:
        fs = self.field
        PM = self.module
        proj, inc = [], []
        offs = {w: 0 for w in PM.vertices}
        for Y in self.summands:
            pc, ic = {}, {}
            for w in PM.vertices:
                e = fs.zeros(PM.dims[w], Y.dims[w])
                for k in range(Y.dims[w]):
                    e[offs[w] + k, k] = fs.one
                ic[w], pc[w] = e, e.T.copy()
                offs[w] += Y.dims[w]
            proj.append(FMap(PM, Y, pc, check=False))
            inc.append(FMap(Y, PM, ic, check=False))
        return proj, inc

    def _radical(self) -> Subspace:
        """Endomorphisms with image in rad P."""
        fs = self.field
        PM = self.module
        rad = radical_subspaces(PM)
        qs = {w: quotient_map(PM.dims[w], rad[w]) for w in PM.vertices}
        cols = []
        for f in self.maps:
            parts = [fs.dot(qs[w], f.comps[w]).reshape(-1) for w in PM.vertices]
            cols.append(np.concatenate(parts) if parts else fs.zero_vector(0))
        m = np.column_stack(cols) if cols else fs.zeros(0, 0)
        return kernel_basis(m, fs)

    def element(self, coords: Sequence) -> FMap:
        return self.space.element(coords)


def endomorphism_algebra(P: ProjBundle) -> EndoAlgebra:
    return EndoAlgebra(P)


# Hom(P, -)

class HomP:
    """Hom(P, M) as a left R_P-module, r·φ = φ ∘ r, with its basis of maps."""

    def __init__(self, R: EndoAlgebra, M: FModule):
        self.algebra, self.source = R, M
        self.space = HomSpace(R.module, M)
        phis = self.space.basis
        action = []
        fs = R.field
        for r in R.maps:
            cols = [self.space.coords(phi @ r) for phi in phis]
            action.append(np.column_stack(cols) if cols else fs.zeros(0, 0))
        self.module = AlgModule(R, len(phis), action, check=False)

    def coords(self, f: FMap) -> Mat:
        return self.space.coords(f)

    def element(self, coords: Sequence) -> FMap:
        return self.space.element(coords)


def hom_P(R: EndoAlgebra, M: FModule) -> AlgModule:
    return HomP(R, M).module


def hom_P_map(R: EndoAlgebra, f: FMap) -> AlgMap:
    hs, ht = HomP(R, f.source), HomP(R, f.target)
    fs = R.field
    cols = [ht.coords(f @ phi) for phi in hs.space.basis]
    m = np.column_stack(cols) if cols else fs.zeros(ht.module.dim, hs.module.dim)
    return AlgMap(hs.module, ht.module, m)


# P ⊗_R -

class PTensor:
    """P ⊗_R X with (P ⊗ X)(c) = P(c) ⊗ X / (p·r ⊗ x - p ⊗ r·x), where p·r = r_c(p)."""

    def __init__(self, R: EndoAlgebra, X: AlgModule):
        if X.algebra is not R:
            raise AlgebraError("module over a different algebra")
        fs = R.field
        PM = R.module
        C = PM.category
        self.algebra, self.X = R, X
        self.quotient, self.section = {}, {}
        dims = {}
        for c in C.vertices:
            n = PM.dims[c] * X.dim
            blocks = [fs.reduce(fs.kron(r.comps[c], fs.eye(X.dim)) - fs.kron(fs.eye(PM.dims[c]), a))
                      for r, a in zip(R.maps, X.action)]
            rel = image_basis(np.hstack(blocks), fs) if blocks and n else Subspace.zero(n, fs)
            self.quotient[c] = quotient_map(n, rel)
            self.section[c] = quotient_section(n, rel)
            dims[c] = self.quotient[c].shape[0]
        action = {}
        for a in C.arrows:
            big = fs.kron(PM.action[a.name], fs.eye(X.dim))
            action[a.name] = fs.chain(self.quotient[a.target], big, self.section[a.source])
        self.module = FModule(C, dims, action, check=True)

    def element(self, c: str, p: Mat, x: Mat) -> Mat:
        fs = self.algebra.field
        return fs.dot(self.quotient[c], fs.kron(p.reshape(-1, 1), x.reshape(-1, 1)).reshape(-1))


def p_tensor(R: EndoAlgebra, X: AlgModule) -> FModule:
    return PTensor(R, X).module


def p_tensor_map(R: EndoAlgebra, g: AlgMap, src: Optional[PTensor] = None, tgt: Optional[PTensor] = None) -> FMap:
    fs = R.field
    src = src or PTensor(R, g.source)
    tgt = tgt or PTensor(R, g.target)
    comps = {}
    for c in R.module.vertices:
        big = fs.kron(fs.eye(R.module.dims[c]), g.matrix)
        comps[c] = fs.chain(tgt.quotient[c], big, src.section[c])
    return FMap(src.module, tgt.module, comps, check=True)


# Hom_R(P*, -)

class PStar:
    """P*(c) = Hom(P, Hom(c, -)) as R-modules, with P*(a) : P*(d) -> P*(c) for a : c -> d."""

    def __init__(self, R: EndoAlgebra):
        self.algebra = R
        C = R.module.category
        self.yoneda = {c: yoneda_projective(C, c) for c in C.vertices}
        self.hom = {c: HomP(R, self.yoneda[c]) for c in C.vertices}
        self.arrow_maps = {}
        fs = R.field
        for a in C.arrows:
            # precomposition with a: Hom(d, -) -> Hom(c, -), id_d ↦ a
            y = element_map(self.yoneda[a.source], a.target, C.arrow_coords(a.name))
            hd, hc = self.hom[a.target], self.hom[a.source]
            cols = [hc.coords(y @ psi) for psi in hd.space.basis]
            m = np.column_stack(cols) if cols else fs.zeros(hc.module.dim, hd.module.dim)
            self.arrow_maps[a.name] = m

    def module(self, c: str) -> AlgModule:
        return self.hom[c].module


class HomPstar:
    """Hom_R(P*, X) over C: value at c is Hom_R(P*(c), X), arrows act by precomposition with P*(a)."""

    def __init__(self, R: EndoAlgebra, X: AlgModule, pstar: Optional[PStar] = None):
        self.algebra, self.X = R, X
        self.pstar = pstar or pstar_of(R)
        C = R.module.category
        fs = R.field
        self.spaces = {c: AlgHomSpace(self.pstar.module(c), X) for c in C.vertices}
        dims = {c: s.dim for c, s in self.spaces.items()}
        action = {}
        for a in C.arrows:
            src, tgt = self.spaces[a.source], self.spaces[a.target]
            cols = [tgt.coords(fs.dot(h, self.pstar.arrow_maps[a.name])) for h in src.basis]
            action[a.name] = np.column_stack(cols) if cols else fs.zeros(dims[a.target], dims[a.source])
        self.module = FModule(C, dims, action, check=True)


_PSTAR_CACHE: dict[int, PStar] = {}


def pstar_of(R: EndoAlgebra) -> PStar:
    key = id(R)
    hit = _PSTAR_CACHE.get(key)
    if hit is None or hit.algebra is not R:
        hit = PStar(R)
        _PSTAR_CACHE[key] = hit
    return hit


def hom_Pstar(R: EndoAlgebra, X: AlgModule) -> FModule:
    return HomPstar(R, X).module


def hom_Pstar_map(R: EndoAlgebra, g: AlgMap, src: Optional[HomPstar] = None, tgt: Optional[HomPstar] = None) -> FMap:
    fs = R.field
    src = src or HomPstar(R, g.source)
    tgt = tgt or HomPstar(R, g.target)
    comps = {}
    for c in R.module.vertices:
        cols = [tgt.spaces[c].coords(fs.dot(g.matrix, h)) for h in src.spaces[c].basis]
        comps[c] = np.column_stack(cols) if cols else fs.zeros(tgt.module.dims[c], src.module.dims[c])
    return FMap(src.module, tgt.module, comps, check=True)


# units and counits

def tensor_unit(R: EndoAlgebra, X: AlgModule, T: Optional[PTensor] = None) -> AlgMap:
    """η_X : X -> Hom(P, P ⊗ X), x ↦ (p ↦ p ⊗ x)."""
    fs = R.field
    T = T or PTensor(R, X)
    H = HomP(R, T.module)
    PM = R.module
    cols = []
    for k in range(X.dim):
        x = fs.unit_vector(X.dim, k).reshape(-1, 1)
        comps = {c: fs.dot(T.quotient[c], fs.kron(fs.eye(PM.dims[c]), x)) for c in PM.vertices}
        cols.append(H.coords(FMap(PM, T.module, comps, check=True)))
    m = np.column_stack(cols) if cols else fs.zeros(H.module.dim, 0)
    return AlgMap(X, H.module, m)


def tensor_counit(R: EndoAlgebra, M: FModule) -> FMap:
    """ε_M : P ⊗ Hom(P, M) -> M, p ⊗ φ ↦ φ(p)."""
    fs = R.field
    H = HomP(R, M)
    T = PTensor(R, H.module)
    PM = R.module
    phis = H.space.basis
    comps = {}
    for c in PM.vertices:
        E = fs.zeros(M.dims[c], PM.dims[c] * len(phis))
        for k, phi in enumerate(phis):
            for p in range(PM.dims[c]):
                E[:, p * len(phis) + k] = phi.comps[c][:, p]
        comps[c] = fs.dot(E, T.section[c])
    return FMap(T.module, M, comps, check=True)


def hom_unit(R: EndoAlgebra, M: FModule) -> FMap:
    """θ_M : M -> Hom_R(P*, Hom(P, M)), m ↦ (ψ ↦ m̂ ∘ ψ)."""
    fs = R.field
    H = HomP(R, M)
    S = HomPstar(R, H.module)
    comps = {}
    for c in M.vertices:
        psis = S.pstar.hom[c].space.basis
        cols = []
        for k in range(M.dims[c]):
            mhat = element_map(M, c, fs.unit_vector(M.dims[c], k))
            rcols = [H.coords(mhat @ psi) for psi in psis]
            h = np.column_stack(rcols) if rcols else fs.zeros(H.module.dim, 0)
            cols.append(S.spaces[c].coords(h))
        comps[c] = np.column_stack(cols) if cols else fs.zeros(S.module.dims[c], 0)
    return FMap(M, S.module, comps, check=True)


def hom_counit(R: EndoAlgebra, X: AlgModule) -> AlgMap:
    """ζ_X : Hom(P, Hom_R(P*, X)) -> X, φ ↦ Σ_j h_j(π_j) with h_j the image of the j-th generator."""
    fs = R.field
    S = HomPstar(R, X)
    H = HomP(R, S.module)
    PM = R.module
    C = PM.category
    gens = []
    for j, v in enumerate(R.bundle.vertices):
        g = fs.dot(R.inclusions[j].comps[v], C.identity_coords(v))
        pij = S.pstar.hom[v].coords(R.projections[j])
        gens.append((v, g, pij))
    cols = []
    for phi in H.space.basis:
        x = fs.zero_vector(X.dim)
        for v, g, pij in gens:
            hv = S.spaces[v].element(fs.dot(phi.comps[v], g))
            x = x + fs.dot(hv, pij)
        cols.append(fs.reduce(x))
    m = np.column_stack(cols) if cols else fs.zeros(X.dim, 0)
    return AlgMap(H.module, X, m)


# recollement

@dataclass
class Verdict:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    title: str
    verdicts: list[Verdict] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.verdicts.append(Verdict(name, bool(passed), detail))


def _fmap_is_identity(f: FMap) -> bool:
    return f == identity_map(f.source)


def _alg_is_identity(f: AlgMap) -> bool:
    return f.source.dim == f.target.dim and np.array_equal(f.matrix, f.source.field.eye(f.source.dim))


def _retag_map(f: FMap, source: FModule, target: FModule) -> FMap:
    return FMap(source, target, f.comps, check=True)


def pi_triangles(Q: QuotientCategory, M: FModule, F: FModule) -> dict[str, bool]:
    """Triangle identities for π^* ⊣ π_* ⊣ π^!, at M over C and F over C/I.

    The counit π^*π_* F -> F and the unit F -> π^!π_* F are identities on coordinates,
    since π_* F is already annihilated by I.
    """
    def canon(src: FModule, tgt: FModule) -> FMap:
        return FMap(src, tgt, identity_map(tgt).comps, check=True)

    out = {}
    eta = pi_star_unit(Q, M)
    SM = pi_star(Q, M)
    counit = canon(pi_star(Q, pi_push(Q, SM)), SM)
    out["pi^* -| pi_* (left)"] = _fmap_is_identity(counit @ pi_star_map(Q, eta))
    F_ = pi_push(Q, F)
    counit_F = canon(pi_star(Q, F_), F)
    out["pi^* -| pi_* (right)"] = _fmap_is_identity(pi_push_map(Q, counit_F) @ pi_star_unit(Q, F_))
    unit_F = canon(F, pi_shriek(Q, F_))
    out["pi_* -| pi^! (left)"] = _fmap_is_identity(pi_shriek_counit(Q, F_) @ pi_push_map(Q, unit_F))
    AM = pi_shriek(Q, M)
    unit_AM = canon(AM, pi_shriek(Q, pi_push(Q, AM)))
    kappa = pi_shriek_counit(Q, M)
    out["pi_* -| pi^! (right)"] = _fmap_is_identity(pi_shriek_map(Q, kappa) @ unit_AM)
    return out


def tensor_triangles(R: EndoAlgebra, X: AlgModule, M: FModule) -> dict[str, bool]:
    """Triangle identities for P ⊗_R - ⊣ Hom(P, -)."""
    out = {}
    T = PTensor(R, X)
    eta = tensor_unit(R, X, T)
    left = tensor_counit(R, T.module) @ p_tensor_map(R, eta, src=T)
    out["P⊗-|Hom(P,-) (left)"] = _fmap_is_identity(left)
    H = HomP(R, M)
    eta_H = tensor_unit(R, H.module)
    right = hom_P_map(R, tensor_counit(R, M)) @ eta_H
    out["P⊗-|Hom(P,-) (right)"] = _alg_is_identity(right)
    return out


def hom_triangles(R: EndoAlgebra, X: AlgModule, M: FModule) -> dict[str, bool]:
    """Triangle identities for Hom(P, -) ⊣ Hom_R(P*, -)."""
    out = {}
    theta = hom_unit(R, M)
    left = hom_counit(R, hom_P(R, M)) @ hom_P_map(R, theta)
    out["Hom(P,-)|Hom(P*,-) (left)"] = _alg_is_identity(left)
    S = HomPstar(R, X)
    right = hom_Pstar_map(R, hom_counit(R, X), tgt=HomPstar(R, X)) @ hom_unit(R, S.module)
    out["Hom(P,-)|Hom(P*,-) (right)"] = _fmap_is_identity(right)
    return out


def algebra_battery(R: EndoAlgebra, C_battery: Sequence[FModule]) -> list[AlgModule]:
    mods = [regular_module(R)]
    mods += [indecomposable_projective(R, u) for u in R.labels]
    mods += [alg_simple(R, u) for u in R.labels]
    mods += [hom_P(R, M) for M in C_battery]
    return mods


def recollement_check(C: FiniteCategory, P: ProjBundle, battery: Optional[Sequence[FModule]] = None,
                      seed: int = DEFAULT_SEED) -> Report:
    """Verify the recollement mod(C/I) -> mod(C) -> mod(R_P) for I = Tr_P C on a battery."""
    if not P.vertices:
        raise ModuleError("the projective P must be nonzero")
    R = endomorphism_algebra(P)
    I = trace_ideal(C, P)
    Q = quotient_category(C, I)
    battery = list(battery) if battery is not None else module_battery(C, seed, Q=Q)
    if not battery:
        raise ValueError("battery must be nonempty")
    qbat = quotient_battery(Q, seed)
    rbat = algebra_battery(R, battery[:6])
    rep = Report(f"recollement for bundle {{{','.join(P.vertices)}}}")
    rep.data["battery_sizes"] = {"C": len(battery), "C/I": len(qbat), "R_P": len(rbat)}
    # R1
    fails = []
    for idx, M in enumerate(battery):
        F = qbat[idx % len(qbat)] if qbat else None
        X = rbat[idx % len(rbat)]
        checks = {}
        if F is not None:
            checks.update(pi_triangles(Q, M, F))
        checks.update(tensor_triangles(R, X, M))
        checks.update(hom_triangles(R, X, M))
        fails += [f"{k} at battery[{idx}]" for k, ok in checks.items() if not ok]
    rep.add("R1 triangle identities", not fails, "; ".join(fails[:5]))
    # R2
    bad = [i for i, F in enumerate(qbat) if hom_P(R, pi_push(Q, F)).dim != 0]
    rep.add("R2 Hom(P, π_*F) = 0", not bad, f"nonzero for quotient battery {bad}" if bad else "")
    # R3
    ff = []
    for i, F in enumerate(qbat):
        for j, G in enumerate(qbat):
            if hom_dim(F, G) != hom_dim(pi_push(Q, F), pi_push(Q, G)):
                ff.append(f"π_* on ({i},{j})")
    tens = {id(X): p_tensor(R, X) for X in rbat}
    stars = {id(X): hom_Pstar(R, X) for X in rbat}
    for i, X in enumerate(rbat):
        for j, Y in enumerate(rbat):
            h = AlgHomSpace(X, Y).dim
            if h != hom_dim(tens[id(X)], tens[id(Y)]):
                ff.append(f"P⊗- on ({i},{j})")
            if h != hom_dim(stars[id(X)], stars[id(Y)]):
                ff.append(f"Hom(P*,-) on ({i},{j})")
    rep.add("R3 full faithfulness", not ff, "; ".join(ff[:5]))
    return rep


# comparison maps

def rho_matrix(R: EndoAlgebra, X: FModule, Y: FModule) -> Mat:
    """ρ_{X,Y} : Hom(X, Y) -> Hom_R(Hom(P, X), Hom(P, Y)), f ↦ Hom(P, f), in coordinates."""
    fs = R.field
    target = AlgHomSpace(hom_P(R, X), hom_P(R, Y))
    cols = [target.coords(hom_P_map(R, f).matrix) for f in HomSpace(X, Y).basis]
    return np.column_stack(cols) if cols else fs.zeros(target.dim, 0)


def ik_level(P: ProjBundle, X: FModule, bound: int) -> Optional[int]:
    """Largest k <= bound with X ∈ I_k (-1 if not I_0); None when I_∞ is certified."""
    Rs = injective_coresolution(X, bound)
    sup = set(P.vertices)
    k = -1
    for i in range(bound + 1):
        if not all(v in sup for v in Rs.bundle(i)):
            return k
        k = i
    return None if Rs.complete else k


def _at_least(level: Optional[int], k: int) -> bool:
    return level is None or level >= k


def phi_check(P: ProjBundle, X: FModule, Y: FModule, n: int, R: Optional[EndoAlgebra] = None) -> Report:
    """Compare Ext^i(X, Y) with Ext^i_R(Hom(P, X), Hom(P, Y)) where the theory promises isomorphism."""
    R = R or endomorphism_algebra(P)
    fs = R.field
    bound = n + 2
    xi, yj = pk_level(P, X, bound), ik_level(P, Y, bound)
    rep = Report("comparison maps")
    rep.data.update({"P_level": "inf" if xi is None else xi, "I_level": "inf" if yj is None else yj})
    rho = rho_matrix(R, X, Y)
    r = rank(rho, fs) if rho.size else 0
    mono, epi = r == rho.shape[1], r == rho.shape[0]
    if _at_least(xi, 0) or _at_least(yj, 0):
        rep.add("rho mono", mono)
    if (_at_least(xi, 0) and _at_least(yj, 0)) or _at_least(xi, 1) or _at_least(yj, 1):
        rep.add("rho iso", mono and epi)
    lhs = ext(X, Y, n).dims
    rhs = alg_ext(hom_P(R, X), hom_P(R, Y), n)
    rep.data["ext_C"], rep.data["ext_R"] = lhs, rhs
    for m in range(n + 1):
        promised = (
            (xi is None or yj is None or (xi >= 0 and yj >= 0 and m <= xi + yj))
            and (_at_least(xi, 0) and _at_least(yj, 0))
        ) or _at_least(yj, m + 1) or _at_least(xi, m + 1)
        if promised:
            rep.add(f"Ext^{m} agrees", lhs[m] == rhs[m], f"{lhs[m]} vs {rhs[m]}")
    return rep


def pd_transfer_check(P: ProjBundle, X: FModule, bound: int, R: Optional[EndoAlgebra] = None) -> Optional[bool]:
    """For X ∈ P_∞: pd X = pd_R Hom(P, X). None when X is not certified in P_∞."""
    if pk_level(P, X, bound) is not None:
        return None
    R = R or endomorphism_algebra(P)
    return projective_dimension(X, bound) == alg_projective_dimension(hom_P(R, X), bound)


# I_1 = I_∞ and ideal projectivity

@dataclass
class I1Evidence:
    holds: bool
    pstar_projective: dict[str, bool]
    tensor_projective: dict[str, bool]


def i1_eq_iinf(C: FiniteCategory, P: ProjBundle) -> I1Evidence:
    """I_1 = I_∞, decided by projectivity of P*(c) over R_P and of P ⊗ P*(c) over C."""
    R = endomorphism_algebra(P)
    ps = pstar_of(R)
    a, b = {}, {}
    for c in C.vertices:
        Z = ps.module(c)
        a[c] = alg_is_projective(Z)
        b[c] = is_projective(p_tensor(R, Z))
        if a[c] != b[c]:
            raise CriteriaMismatch(f"I_1 = I_inf criteria disagree at {c}: P* projective={a[c]}, P⊗P* projective={b[c]}")
    return I1Evidence(all(a.values()), a, b)


def p1_eq_pinf(C: FiniteCategory, P: ProjBundle) -> I1Evidence:
    """P_1 = P_∞, via the dual statement over the opposite category."""
    return i1_eq_iinf(C.opposite(), P.opposite())


def ideal_projectivity_report(C: FiniteCategory, P: ProjBundle, kmax: int = 6, bound: int = 8) -> Report:
    I = trace_ideal(C, P)
    Q = quotient_category(C, I)
    R = endomorphism_algebra(P)
    rep = Report(f"ideal projectivity for bundle {{{','.join(P.vertices)}}}")
    proj = {c: is_projective(ideal_as_module(I, c)) for c in C.vertices}
    lhs = all(proj.values())
    level = idempotency_level(Q, kmax, bundle=P)
    i1 = i1_eq_iinf(C, P)
    rhs = level.level >= 2 and i1.holds
    if lhs != rhs:
        raise CriteriaMismatch(f"I(c,-) projective for all c is {lhs}, but 2-idempotent and I_1 = I_inf is {rhs}")
    gd = alg_global_dimension(R, bound)
    rep.data.update({
        "ideal_projective": proj,
        "level": level.level,
        "i1_eq_iinf": i1.holds,
        "dim_R": R.dim,
        "gldim_R": "exceeds bound" if gd is None else gd,
        "quasi_hereditary": gd is not None and gd <= 2,
        "strongly_idempotent": level.strongly_idempotent,
    })
    rep.add("I(c,-) projective for all c", lhs, ", ".join(c for c, ok in proj.items() if not ok))
    rep.add("2-idempotent and I_1 = I_inf", rhs, f"level {level.level}, I_1 = I_inf {i1.holds}")
    rep.add("biconditional", lhs == rhs)
    rep.add("gl.dim R_P <= 2", gd is not None and gd <= 2, f"gl.dim R_P = {rep.data['gldim_R']}")
    return rep


def gl_dim_inequality_check(C: FiniteCategory, P: ProjBundle, bound: int = 8) -> Report:
    rep = Report("global dimension inequality")
    i1 = i1_eq_iinf(C, P).holds
    p1 = p1_eq_pinf(C, P).holds
    gc = global_dimension(C, bound)
    gr = alg_global_dimension(endomorphism_algebra(P), bound)
    rep.data.update({"I1_eq_Iinf": i1, "P1_eq_Pinf": p1, "gldim_C": gc, "gldim_R": gr})
    if i1 or p1:
        ok = gr is not None and (gc is None or gr <= gc)
        rep.add("gl.dim R_P <= gl.dim C", ok, f"{gr} vs {gc}")
    return rep


# further checks

def counit_image_is_trace(R: EndoAlgebra, M: FModule) -> bool:
    """Image of P ⊗ Hom(P, M) -> M is Tr_P M, and kernel and cokernel are killed by Hom(P, -)."""
    eps = tensor_counit(R, M)
    img = image_subspaces(eps)
    if img != trace_P(R.bundle, M):
        return False
    K, _ = kernel(eps)
    Kc, _ = cokernel(eps)
    return hom_P(R, K).dim == 0 and hom_P(R, Kc).dim == 0


def dual_basis(X: FModule) -> Optional[tuple[list[str], list[FMap], list[Mat]]]:
    """Vertices c_j, maps β_j : X -> Hom(c_j, -) and x_j ∈ X(c_j) with a = Σ X(β_j(a))(x_j).

    Returns None when X is not projective.
    """
    P0, f = projective_cover(X)
    g = split_epi(f)
    if g is None:
        return None
    C = X.category
    fs = X.field
    verts, betas, xs = [], [], []
    offs = {w: 0 for w in C.vertices}
    for v in P0.bundle:
        Y = yoneda_projective(C, v)
        comps = {w: g.comps[w][offs[w]:offs[w] + Y.dims[w], :] for w in C.vertices}
        gen = fs.zero_vector(P0.dims[v])
        idc = C.identity_coords(v)
        gen[offs[v]:offs[v] + len(idc)] = idc
        for w in C.vertices:
            offs[w] += Y.dims[w]
        verts.append(v)
        betas.append(FMap(X, Y, comps, check=True))
        xs.append(fs.dot(f.comps[v], gen))
    return verts, betas, xs


def dual_basis_reconstructs(X: FModule) -> bool:
    db = dual_basis(X)
    if db is None:
        return False
    verts, betas, xs = db
    fs = X.field
    for w in X.vertices:
        for k in range(X.dims[w]):
            a = fs.unit_vector(X.dims[w], k)
            total = fs.zero_vector(X.dims[w])
            for v, beta, x in zip(verts, betas, xs):
                coords = fs.dot(beta.comps[w], a)
                total = total + fs.dot(X.morphism_matrix(v, w, coords), x)
            if not np.array_equal(fs.reduce(total), a):
                return False
    return True


def equivalence_checks(R: EndoAlgebra, Zs: Sequence[AlgModule]) -> dict[str, bool]:
    """Every R-module is Hom(P, -) of something in P_1 and of something in I_1, via units and counits."""
    out = {}
    for i, Z in enumerate(Zs):
        out[f"unit iso at {i}"] = tensor_unit(R, Z).is_iso()
        out[f"counit iso at {i}"] = hom_counit(R, Z).is_iso()
    return out


def add_P_to_projectives(R: EndoAlgebra) -> bool:
    """Hom(P, -) sends indecomposable summands of P to projectives and matching injectives to injectives."""
    C = R.module.category
    for v in R.bundle.support:
        if not alg_is_projective(hom_P(R, yoneda_projective(C, v))):
            return False
        if not alg_is_injective(hom_P(R, indecomposable_injective(C, v))):
            return False
        if alg_find_isomorphism(hom_P(R, yoneda_projective(C, v)), indecomposable_projective(R, v)) is None:
            return False
    return True
