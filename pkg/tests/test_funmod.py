import numpy as np
import pytest

from functcat.funmod import (
    FMap,
    FModule,
    ModuleError,
    NotNatural,
    ProjBundle,
    cokernel,
    decompose,
    decomposition,
    direct_sum,
    dualize,
    find_isomorphism,
    hom_dim,
    hom_modules,
    identity_map,
    image,
    image_subspaces,
    indecomposable_injective,
    injective_envelope,
    is_injective,
    is_isomorphic,
    is_projective,
    kernel,
    projective_cover,
    radical,
    radical_subspaces,
    random_extension,
    realize_bundle,
    simple,
    socle_subspaces,
    tensor_over_C,
    top,
    yoneda_projective,
    zero_module,
)
from functcat.homology import module_battery


def dims(M):
    return M.dim_vector()


def test_yoneda_projective_dims(a2, z6):
    assert dims(yoneda_projective(a2, "1")) == (1, 1)
    assert dims(yoneda_projective(z6, "3")) == (0, 0, 1, 1, 0, 0)
    assert is_isomorphic(yoneda_projective(z6, "6"), simple(z6, "6"))


def test_realize_bundle(a2, z6):
    assert dims(realize_bundle(ProjBundle(z6, ("2", "3")))) == (0, 1, 2, 1, 0, 0)
    assert realize_bundle(ProjBundle(z6, ())).is_zero()
    P = realize_bundle(ProjBundle(a2, ("1", "1")))
    assert dims(P) == (2, 2) and P.bundle == ("1", "1")


def test_module_validation(z6, a2):
    with pytest.raises(ModuleError):
        # a2.a1 must act as zero in z6
        FModule(z6, {"1": 1, "2": 1, "3": 1}, {"a1": [[1]], "a2": [[1]]})
    S1, S2 = simple(a2, "1"), simple(a2, "2")
    P1 = yoneda_projective(a2, "1")
    with pytest.raises(NotNatural):
        FMap(S1, P1, {"1": [[1]]})
    assert len(hom_modules(S2, P1)) == 1


def test_hom_examples(z6):
    assert hom_dim(simple(z6, "1"), simple(z6, "2")) == 0
    assert hom_dim(yoneda_projective(z6, "1"), yoneda_projective(z6, "1")) == 1


def test_yoneda_lemma_on_battery(z6, aus):
    for C in (z6, aus):
        for M in module_battery(C, seed=3, n_random=4):
            for v in C.vertices:
                assert hom_dim(yoneda_projective(C, v), M) == M.dims[v]


def test_kernel_cokernel_image(z6):
    P1, P2 = yoneda_projective(z6, "1"), yoneda_projective(z6, "2")
    assert kernel(identity_map(P1))[0].is_zero()
    (f,) = hom_modules(P2, P1)
    Q, _ = cokernel(f)
    assert is_isomorphic(Q, simple(z6, "1"))
    Im, emb = image(f)
    assert is_isomorphic(Im, simple(z6, "2")) and emb.is_mono()


def test_exactness_on_random_maps(z6):
    rng = np.random.default_rng(11)
    bat = module_battery(z6, seed=5, n_random=4)
    for _ in range(10):
        M, N = bat[rng.integers(len(bat))], bat[rng.integers(len(bat))]
        hs = hom_modules(M, N)
        if not hs:
            continue
        coeffs = rng.integers(-2, 3, size=len(hs))
        f = hs[0].scale(0)
        for c, h in zip(coeffs, hs):
            f = f + h.scale(int(c))
        K, _ = kernel(f)
        img = image_subspaces(f)
        for v in z6.vertices:
            assert K.dims[v] + img[v].dim == M.dims[v]


def test_radical_and_top(z6):
    assert radical(simple(z6, "3"))[0].is_zero()
    assert is_isomorphic(radical(yoneda_projective(z6, "1"))[0], simple(z6, "2"))
    for v in z6.vertices:
        assert is_isomorphic(top(yoneda_projective(z6, v))[0], simple(z6, v))


def test_projective_cover(z6):
    P1 = yoneda_projective(z6, "1")
    P0, eps = projective_cover(P1)
    assert is_isomorphic(P0, P1) and eps.is_iso()
    P0, eps = projective_cover(simple(z6, "1"))
    assert dims(P0) == dims(P1) and eps.is_epi()
    S23 = direct_sum([simple(z6, "2"), simple(z6, "3")]).module
    P0, _ = projective_cover(S23)
    assert sorted(P0.bundle) == ["2", "3"]
    assert is_projective(P0) and not is_projective(S23)


def test_cover_kernel_is_superfluous(aus):
    for M in module_battery(aus, seed=2, n_random=4):
        P0, eps = projective_cover(M)
        _, emb = kernel(eps)
        rad = radical_subspaces(P0)
        img = image_subspaces(emb)
        assert all(rad[v].contains_space(img[v]) for v in aus.vertices)


def test_duality(a2, z6):
    Dz = dualize(simple(z6, "4"))
    assert Dz.category is z6.opposite()
    assert is_isomorphic(Dz, simple(z6.opposite(), "4"))
    DP = dualize(yoneda_projective(a2, "1"))
    assert dims(DP) == (1, 1)
    assert is_isomorphic(DP, indecomposable_injective(a2.opposite(), "1"))
    for M in module_battery(z6, seed=1, n_random=3):
        assert dims(dualize(M)) == dims(M)
        assert find_isomorphism(dualize(dualize(M)), M) is not None


def test_hom_duality_on_battery(aus):
    bat = module_battery(aus, seed=4, n_random=3)
    for M in bat[::3]:
        for N in bat[1::3]:
            assert hom_dim(M, N) == hom_dim(dualize(N), dualize(M))


def test_injectives(z6):
    assert dims(indecomposable_injective(z6, "2")) == (1, 1, 0, 0, 0, 0)
    I3 = indecomposable_injective(z6, "3")
    J, env = injective_envelope(I3)
    assert is_isomorphic(J, I3) and env.is_iso()
    S1 = simple(z6, "1")
    assert is_injective(S1)
    J, env = injective_envelope(S1)
    assert dims(J) == (1, 0, 0, 0, 0, 0)


def test_envelope_is_essential(aus):
    for M in module_battery(aus, seed=8, n_random=3):
        J, env = injective_envelope(M)
        assert env.is_mono() and is_injective(J)
        soc = socle_subspaces(J)
        img = image_subspaces(env)
        assert all(img[v].contains_space(soc[v]) for v in aus.vertices)


def test_tensor(z6):
    op = z6.opposite()
    bat = module_battery(z6, seed=9, n_random=3)
    obat = module_battery(op, seed=9, n_random=3)
    for N in obat[:6]:
        for v in z6.vertices:
            assert tensor_over_C(N, yoneda_projective(z6, v)).dim == N.dims[v]
        assert tensor_over_C(N, zero_module(z6)).dim == 0
    for N in obat[::4]:
        for M in bat[::4]:
            assert tensor_over_C(N, M).dim == hom_dim(M, dualize(N))
    with pytest.raises(ValueError):
        tensor_over_C(yoneda_projective(z6, "1"), yoneda_projective(z6, "1"))


def test_decompose(z6, a2):
    P2, P3 = yoneda_projective(z6, "2"), yoneda_projective(z6, "3")
    parts = decompose(direct_sum([P2, P3]).module)
    assert sorted(dims(p) for p in parts) == sorted([dims(P2), dims(P3)])
    assert len(decompose(simple(z6, "1"))) == 1
    parts = decompose(realize_bundle(ProjBundle(a2, ("1", "1"))))
    assert len(parts) == 2 and all(is_isomorphic(p, yoneda_projective(a2, "1")) for p in parts)


def test_decomposition_iso_and_idempotent(aus):
    rng = np.random.default_rng(0)
    bat = module_battery(aus, seed=6, n_random=2)
    for _ in range(4):
        M = direct_sum([bat[rng.integers(len(bat))] for _ in range(3)]).module
        parts, iso = decomposition(M)
        assert iso.is_iso()
        assert sum(p.total_dim for p in parts) == M.total_dim
        for p in parts:
            assert len(decompose(p)) == 1


def test_random_extension_is_exact(z6):
    rng = np.random.default_rng(3)
    A, B = simple(z6, "2"), simple(z6, "1")
    E = random_extension(A, B, rng)
    assert dims(E) == tuple(a + b for a, b in zip(dims(A), dims(B)))


def test_prime_field_modules(z6_f5):
    P1 = yoneda_projective(z6_f5, "1")
    assert hom_dim(P1, P1) == 1
    assert is_isomorphic(cokernel(hom_modules(yoneda_projective(z6_f5, "2"), P1)[0])[0], simple(z6_f5, "1"))
