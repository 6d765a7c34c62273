import pytest

from functcat.algebra import (
    AlgHomSpace,
    alg_find_isomorphism,
    alg_global_dimension,
    alg_is_projective,
    regular_module,
    zero_alg_module,
)
from functcat.endo import (
    add_P_to_projectives,
    algebra_battery,
    counit_image_is_trace,
    dual_basis_reconstructs,
    endomorphism_algebra,
    equivalence_checks,
    gl_dim_inequality_check,
    hom_P,
    hom_Pstar,
    hom_triangles,
    i1_eq_iinf,
    ideal_projectivity_report,
    p1_eq_pinf,
    p_tensor,
    pd_transfer_check,
    phi_check,
    pi_triangles,
    pstar_of,
    recollement_check,
    tensor_triangles,
)
from functcat.funmod import (
    ModuleError,
    ProjBundle,
    hom_dim,
    is_isomorphic,
    realize_bundle,
    simple,
    yoneda_projective,
)
from functcat.homology import module_battery, quotient_battery
from functcat.ideals import pi_push, quotient_category, trace_ideal
from functcat.pathcat import Quiver, build_path_category


def bundle(C, *verts):
    return ProjBundle(C, tuple(verts))


def test_endo_dimensions(z6, a2):
    assert endomorphism_algebra(bundle(z6, "4")).dim == 1
    assert endomorphism_algebra(bundle(z6, "2", "3")).dim == 3
    assert endomorphism_algebra(bundle(a2, "1", "2")).dim == 3
    R = endomorphism_algebra(bundle(z6, "2", "3", "3"))
    assert R.dim == 7 and R.labels == ["2", "3"]


def test_empty_bundle_rejected(z6):
    with pytest.raises(ModuleError):
        endomorphism_algebra(bundle(z6))
    with pytest.raises(ModuleError):
        recollement_check(z6, bundle(z6))


def test_hom_P(z6):
    P = bundle(z6, "2", "3")
    R = endomorphism_algebra(P)
    reg = hom_P(R, realize_bundle(P))
    assert alg_find_isomorphism(reg, regular_module(R)) is not None
    assert hom_P(R, simple(z6, "2")).dim == 1
    Q = quotient_category(z6, trace_ideal(z6, P))
    for F in quotient_battery(Q, seed=1):
        assert hom_P(R, pi_push(Q, F)).dim == 0


def test_p_tensor(z6):
    P = bundle(z6, "2", "3")
    R = endomorphism_algebra(P)
    assert is_isomorphic(p_tensor(R, regular_module(R)), realize_bundle(P))
    assert p_tensor(R, zero_alg_module(R)).is_zero()
    X = hom_P(R, yoneda_projective(z6, "1"))
    assert is_isomorphic(p_tensor(R, X), simple(z6, "2"))


def test_hom_Pstar(z6, aus):
    for C, verts in ((z6, ("2", "3")), (aus, ("2",))):
        R = endomorphism_algebra(ProjBundle(C, verts))
        ps = pstar_of(R)
        H = hom_Pstar(R, regular_module(R))
        for v in C.vertices:
            assert H.dims[v] == AlgHomSpace(ps.module(v), regular_module(R)).dim
        assert hom_Pstar(R, zero_alg_module(R)).is_zero()


def test_adjunction_dimensions(aus):
    R = endomorphism_algebra(bundle(aus, "1", "2"))
    Ms = module_battery(aus, seed=2, n_random=3)
    Xs = algebra_battery(R, Ms[:4])
    for M in Ms[::2]:
        for X in Xs[::2]:
            assert AlgHomSpace(hom_P(R, M), X).dim == hom_dim(M, hom_Pstar(R, X))
            assert hom_dim(p_tensor(R, X), M) == AlgHomSpace(X, hom_P(R, M)).dim


def test_triangle_identities(z6):
    P = bundle(z6, "2", "3")
    R = endomorphism_algebra(P)
    Q = quotient_category(z6, trace_ideal(z6, P))
    Ms = module_battery(z6, seed=3, n_random=3, Q=Q)
    Fs = quotient_battery(Q, seed=3)
    Xs = algebra_battery(R, Ms[:4])
    for i, M in enumerate(Ms[::3]):
        X = Xs[i % len(Xs)]
        assert all(pi_triangles(Q, M, Fs[i % len(Fs)]).values())
        assert all(tensor_triangles(R, X, M).values())
        assert all(hom_triangles(R, X, M).values())


@pytest.mark.parametrize("name,verts", [("a2", ("2",)), ("z6", ("2", "3")), ("aus", ("2",)), ("a3h", ("2",))])
def test_recollement(name, verts, request):
    C = request.getfixturevalue(name)
    rep = recollement_check(C, ProjBundle(C, verts))
    assert rep.passed, [(v.name, v.detail) for v in rep.verdicts if not v.passed]
    assert rep.data["battery_sizes"]["C"] >= 10
    assert [v.name.split()[0] for v in rep.verdicts] == ["R1", "R2", "R3"]


def test_recollement_needs_battery(z6):
    with pytest.raises(ValueError):
        recollement_check(z6, bundle(z6, "2"), battery=[])


def test_i1_eq_iinf(a3h, z6, aus):
    assert i1_eq_iinf(a3h, bundle(a3h, "2")).holds
    ev = i1_eq_iinf(z6, bundle(z6, "2", "3"))
    assert not ev.holds
    assert [c for c, ok in ev.pstar_projective.items() if not ok] == ["1"]
    assert ev.pstar_projective == ev.tensor_projective
    assert i1_eq_iinf(aus, bundle(aus, *aus.vertices)).holds
    assert p1_eq_pinf(aus, bundle(aus, *aus.vertices)).holds


def test_ideal_projectivity_a3h(a3h):
    rep = ideal_projectivity_report(a3h, bundle(a3h, "2"), kmax=4)
    assert rep.passed
    assert rep.data["quasi_hereditary"] and rep.data["level"] == 4
    assert rep.data["strongly_idempotent"] and rep.data["gldim_R"] == 0


def test_ideal_projectivity_z6(z6):
    rep = ideal_projectivity_report(z6, bundle(z6, "2", "3"))
    verdicts = {v.name: v for v in rep.verdicts}
    assert not verdicts["I(c,-) projective for all c"].passed
    assert verdicts["I(c,-) projective for all c"].detail == "1"
    assert not verdicts["2-idempotent and I_1 = I_inf"].passed
    assert verdicts["biconditional"].passed
    assert rep.data["level"] == 2 and not rep.data["i1_eq_iinf"]


def test_ideal_projectivity_full_bundle(aus):
    rep = ideal_projectivity_report(aus, bundle(aus, *aus.vertices), kmax=3)
    assert all(rep.data["ideal_projective"].values())
    assert rep.data["gldim_R"] == 2 and rep.data["quasi_hereditary"]


def test_gl_dim_inequality(a3h, aus, z6):
    rep = gl_dim_inequality_check(a3h, bundle(a3h, "2"))
    assert rep.passed and rep.data["gldim_R"] == 0 and rep.data["gldim_C"] == 1
    full = gl_dim_inequality_check(aus, bundle(aus, *aus.vertices))
    assert full.passed and full.data["gldim_R"] == full.data["gldim_C"] == 2
    rep = gl_dim_inequality_check(z6, bundle(z6, "1", "2", "3"))
    assert rep.passed and rep.data["gldim_R"] == 2
    semisimple = build_path_category(Quiver.from_lists(["x"]), [])
    rep = gl_dim_inequality_check(semisimple, bundle(semisimple, "x"))
    assert rep.passed and rep.data["gldim_R"] == rep.data["gldim_C"] == 0


def test_phi_check(z6):
    P = bundle(z6, "2", "3")
    R = endomorphism_algebra(P)
    rep = phi_check(P, simple(z6, "2"), simple(z6, "3"), 1, R)
    assert rep.passed and rep.data["P_level"] == 1
    for X in (yoneda_projective(z6, "2"), yoneda_projective(z6, "3")):
        for Y in module_battery(z6, seed=4, n_random=2)[::3]:
            rep = phi_check(P, X, Y, 3, R)
            assert rep.passed
            assert rep.data["ext_C"][1:] == [0, 0, 0]


def test_pd_transfer(z6, aus):
    P = bundle(z6, "2", "3")
    assert pd_transfer_check(P, yoneda_projective(z6, "3"), 6) is True
    assert pd_transfer_check(P, simple(z6, "1"), 6) is None
    Pa = bundle(aus, "2", "3")
    verdicts = [pd_transfer_check(Pa, X, 6) for X in module_battery(aus, seed=6, n_random=4)]
    assert False not in verdicts and True in verdicts


def test_counit_image_is_trace(z6, aus):
    for C, verts in ((z6, ("2", "3")), (aus, ("2",)), (aus, ("1", "3"))):
        R = endomorphism_algebra(ProjBundle(C, verts))
        for M in module_battery(C, seed=8, n_random=3):
            assert counit_image_is_trace(R, M)


def test_dual_basis(z6, aus):
    for C in (z6, aus):
        for v in C.vertices:
            assert dual_basis_reconstructs(yoneda_projective(C, v))
        assert dual_basis_reconstructs(realize_bundle(ProjBundle(C, tuple(C.vertices[:2]) * 2)))
    assert not dual_basis_reconstructs(simple(z6, "1"))


def test_equivalences_and_projectives(z6, aus):
    for C, verts in ((z6, ("2", "3")), (aus, ("2",)), (aus, ("1", "2"))):
        R = endomorphism_algebra(ProjBundle(C, verts))
        Zs = algebra_battery(R, module_battery(C, seed=1, n_random=2)[:5])
        assert all(equivalence_checks(R, Zs).values())
        assert add_P_to_projectives(R)
        for u in R.labels:
            assert alg_is_projective(hom_P(R, yoneda_projective(C, u)))


def test_non_basic_endo_algebra(z6):
    R = endomorphism_algebra(bundle(z6, "2", "3", "3"))
    assert alg_global_dimension(R, 4) == 1
    assert recollement_check(z6, R.bundle).passed
