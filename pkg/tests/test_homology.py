import pytest

from functcat.funmod import (
    ProjBundle,
    direct_sum,
    dualize,
    hom_dim,
    indecomposable_injective,
    simple,
    tensor_over_C,
    yoneda_projective,
)
from functcat.homology import (
    EXT_of_quotient,
    EXT_table,
    TOR_of_quotient,
    TOR_table,
    CriteriaMismatch,
    ar_duality_check,
    ext,
    ext_via_injectives,
    global_dimension,
    idempotency_level,
    ik_membership,
    injective_coresolution,
    injective_dimension,
    module_battery,
    pi_shriek_coresolution_exact,
    pi_star_resolution_exact,
    pk_criterial,
    pk_direct,
    pk_level,
    pk_membership,
    projective_dimension,
    projective_resolution,
    quotient_battery,
    tor,
)
from functcat.ideals import (
    ideal_as_module,
    is_idempotent,
    pi_push,
    pi_shriek,
    pi_star,
    quotient_category,
    trace_ideal,
    zero_ideal,
)
from functcat.pathcat import Quiver, build_path_category


def quotient(C, verts):
    return quotient_category(C, trace_ideal(C, verts))


def test_projective_resolution_of_projective(z6):
    R = projective_resolution(yoneda_projective(z6, "2"), 4)
    assert R.complete and R.length == 0 and R.check()


def test_z6_simple_resolution(z6):
    R = projective_resolution(simple(z6, "1"), 6)
    assert R.complete and R.length == 5
    assert [R.bundle(i) for i in range(6)] == [(str(i),) for i in range(1, 7)]
    assert R.check() and R.is_minimal()
    assert R.differential(9).is_zero()


def test_a3h_simple_resolution(a3h):
    R = projective_resolution(simple(a3h, "1"), 3)
    assert R.length == 1
    assert R.bundle(0) == ("1",) and R.bundle(1) == ("2",)


def test_truncated_resolution_is_incomplete(z6):
    R = projective_resolution(simple(z6, "1"), 2)
    assert not R.complete and R.length is None and R.check()
    assert projective_dimension(simple(z6, "1"), 2) is None


def test_injective_coresolutions(z6):
    R = injective_coresolution(simple(z6, "6"), 6)
    assert R.length == 5 and R.check() and R.is_minimal()
    assert injective_coresolution(simple(z6, "1"), 3).length == 0
    assert injective_dimension(indecomposable_injective(z6, "4"), 3) == 0


def test_resolutions_on_battery(aus):
    for M in module_battery(aus, seed=12, n_random=5):
        assert projective_resolution(M, 4).check()
        R = injective_coresolution(M, 4)
        assert R.check() and R.is_minimal()


def test_ext_examples(z6):
    P3 = yoneda_projective(z6, "3")
    N = simple(z6, "3")
    t = ext(P3, N, 3)
    assert t.dims == [1, 0, 0, 0]
    assert ext(simple(z6, "1"), simple(z6, "2"), 2)[1] == 1
    assert ext(simple(z6, "1"), simple(z6, "4"), 5).dims == [0, 0, 0, 1, 0, 0]


def test_ext_degree_zero_is_hom(aus):
    bat = module_battery(aus, seed=3, n_random=3)
    for M in bat[::3]:
        for N in bat[1::3]:
            assert ext(M, N, 1)[0] == hom_dim(M, N)


def test_ext_pipelines_agree(z6, aus):
    for C in (z6, aus):
        bat = module_battery(C, seed=21, n_random=3)
        for M in bat[::4]:
            for N in bat[2::4]:
                assert ext(M, N, 4).dims == ext_via_injectives(M, N, 4).dims


def test_tor_degree_zero_and_projectives(z6):
    op = z6.opposite()
    N = module_battery(op, seed=2, n_random=1)[-1]
    M = module_battery(z6, seed=2, n_random=1)[-1]
    assert tor(N, M, 2)[0] == tensor_over_C(N, M).dim
    assert tor(N, yoneda_projective(z6, "2"), 3).vanishes(1, 3)


def test_ar_duality(z6, aus):
    for C in (z6, aus):
        op = C.opposite()
        Ns = module_battery(op, seed=5, n_random=2)
        Ms = module_battery(C, seed=5, n_random=2)
        for N in Ns[::3]:
            for M in Ms[1::3]:
                assert ar_duality_check(N, M, 5)


def test_global_dimension(z6, a3h, aus):
    semisimple = build_path_category(Quiver.from_lists(["x", "y"]), [])
    assert global_dimension(semisimple, 3) == 0
    assert global_dimension(a3h, 4) == 1
    assert global_dimension(z6, 6) == 5
    assert global_dimension(z6, 3) is None
    assert global_dimension(aus, 4) == 2


def test_EXT_TOR_of_quotient_degree_zero(z6, aus):
    for C, verts in ((z6, ("2", "3")), (aus, ("2",))):
        Q = quotient(C, verts)
        for M in module_battery(C, seed=1, n_random=3):
            assert EXT_of_quotient(Q, M, 0) == pi_shriek(Q, M).dims
            assert TOR_of_quotient(Q, M, 0) == pi_star(Q, M).dims


def test_EXT_TOR_for_zero_ideal(aus):
    Q = quotient_category(aus, zero_ideal(aus))
    for M in module_battery(aus, seed=4, n_random=2):
        ext_t = EXT_table(Q, M, 3)
        tor_t = TOR_table(Q, M, 3)
        assert ext_t[0] == M.dims and tor_t[0] == M.dims
        for i in (1, 2, 3):
            assert not any(ext_t[i].values()) and not any(tor_t[i].values())


def test_EXT_of_annihilated_module(z6):
    Q = quotient(z6, ("2", "3"))
    for F in quotient_battery(Q, seed=3, n_random=2):
        M = pi_push(Q, F)
        assert EXT_of_quotient(Q, M, 0) == M.dims
    assert EXT_of_quotient(Q, pi_push(Q, simple(Q, "1")), 1)["1"] == 0


def test_pk_membership(z6):
    P23 = ProjBundle(z6, ("2", "3"))
    S2 = simple(z6, "2")
    assert pk_membership(P23, S2, 1)
    assert not pk_membership(P23, S2, 2)
    assert pk_level(P23, S2, 6) == 1
    P123 = ProjBundle(z6, ("1", "2", "3"))
    I = trace_ideal(z6, P123)
    for c in z6.vertices:
        X = ideal_as_module(I, c)
        assert all(pk_membership(P123, X, k) for k in range(7))
    P3 = yoneda_projective(z6, "3")
    assert all(pk_membership(P23, P3, k) for k in range(4))
    assert pk_level(P23, P3, 4) is None


def test_ik_membership(z6):
    P23 = ProjBundle(z6, ("2", "3"))
    assert ik_membership(P23, indecomposable_injective(z6, "3"), 3)
    assert not ik_membership(P23, simple(z6, "1"), 0)


def test_membership_concordance_on_battery(aus):
    for verts in (("2",), ("1", "2"), ("2", "3")):
        P = ProjBundle(aus, verts)
        Q = quotient(aus, verts)
        for X in module_battery(aus, seed=9, n_random=3, Q=Q):
            for k in range(4):
                assert pk_direct(P, X, k) == pk_criterial(P, X, k, Q)
                ik_membership(P, X, k)


def test_level_z6_P23(z6):
    P = ProjBundle(z6, ("2", "3"))
    rep = idempotency_level(quotient(z6, P.vertices), 6, bundle=P)
    assert rep.level == 2 and not rep.strongly_idempotent
    assert rep.verdicts["d"] == [True, True, False, False, False, False]
    assert set(rep.verdicts) == {"c", "d", "g", "P"}
    assert rep.summary() == "level = 2"


def test_level_z6_P123(z6):
    P = ProjBundle(z6, ("1", "2", "3"))
    rep = idempotency_level(quotient(z6, P.vertices), 6, bundle=P)
    assert rep.level == 6 and rep.global_dimension == 5 and rep.strongly_idempotent
    assert "strongly idempotent" in rep.summary()


def test_level_zero_ideal(z6):
    rep = idempotency_level(quotient_category(z6, zero_ideal(z6)), 3)
    assert rep.level == 3 and rep.summary() == "level = 3 (verified up to bound 3)"


def test_level_a3h_and_aus(a3h, aus):
    P = ProjBundle(a3h, ("2",))
    rep = idempotency_level(quotient(a3h, P.vertices), 4, bundle=P)
    assert rep.level == 4 and rep.strongly_idempotent
    P = ProjBundle(aus, ("2",))
    rep = idempotency_level(quotient(aus, P.vertices), 4, bundle=P)
    # Ext^2(S1, S3) survives, so the trace of P2 stops at level 1
    assert rep.level == 1


def test_level_argument_validation(z6):
    Q = quotient(z6, ("2", "3"))
    with pytest.raises(ValueError):
        idempotency_level(Q, 0)
    with pytest.raises(ValueError):
        idempotency_level(Q, 2, bundle=ProjBundle(z6, ("2",)))


def test_criteria_mismatch_is_an_assertion():
    assert issubclass(CriteriaMismatch, AssertionError)


@pytest.mark.parametrize("name,verts", [("z6", ("2", "3")), ("aus", ("2",)), ("aus", ("2", "3")), ("a3h", ("2",))])
def test_level_at_least_one_for_trace_ideals(name, verts, request):
    C = request.getfixturevalue(name)
    Q = quotient(C, verts)
    assert is_idempotent(Q.ideal)
    assert idempotency_level(Q, 2).level >= 1


@pytest.mark.parametrize("name,verts", [("z6", ("2", "3")), ("aus", ("2",)), ("z6", ("1", "2", "3"))])
def test_transfer_invariants(name, verts, request):
    C = request.getfixturevalue(name)
    Q = quotient(C, verts)
    k = 3
    seen = set()
    for G in module_battery(C, seed=13, n_random=3, Q=Q)[::2]:
        tors = TOR_table(Q, G, k)
        exts = EXT_table(Q, G, k)
        tor_zero = all(not any(tors[i].values()) for i in range(1, k + 1))
        ext_zero = all(not any(exts[i].values()) for i in range(1, k + 1))
        assert pi_star_resolution_exact(Q, G, k) == tor_zero
        assert pi_shriek_coresolution_exact(Q, G, k) == ext_zero
        seen.add(tor_zero)
    # the battery must exercise both outcomes
    assert seen == {True, False}


def test_prime_field_homology(z6_f5):
    assert global_dimension(z6_f5, 6) == 5
    assert ext(simple(z6_f5, "1"), simple(z6_f5, "4"), 4)[3] == 1
    D = dualize(direct_sum([simple(z6_f5, "2"), yoneda_projective(z6_f5, "1")]).module)
    assert projective_dimension(D, 6) is not None
