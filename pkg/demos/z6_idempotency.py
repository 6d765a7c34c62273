# %% [markdown]
# # Idempotency levels on a radical-square-zero line
#
# Six vertices, arrows 1 -> 2 -> ... -> 6, every composite of two arrows zero.
# We compare the trace ideals of two bundles.

# %%
from functcat.funmod import simple
from functcat.homology import ext, global_dimension, idempotency_level, projective_resolution
from functcat.ideals import quotient_category, trace_ideal
from functcat.instance import load_instance

inst = load_instance("z6")
C = inst.category
print("gl.dim C =", global_dimension(C, 8))

# %% [markdown]
# The simple at vertex 1 has a linear resolution that walks down the quiver.

# %%
res = projective_resolution(simple(C, "1"), 6)
print("length", res.length, "terms", [res.bundle(i) for i in range(res.length + 1)])
print("Ext(S1, S4) =", ext(simple(C, "1"), simple(C, "4"), 4).dims)

# %% [markdown]
# The trace of P2 + P3 stops being idempotent after degree 2,
# while adding P1 gives a strongly idempotent ideal.

# %%
for name in ("P23", "P123"):
    P = inst.bundle(name)
    rep = idempotency_level(quotient_category(C, trace_ideal(C, P)), 6, bundle=P)
    print(name, rep.summary(), "| strongly idempotent:", rep.strongly_idempotent)
