# %% [markdown]
# # Endomorphism rings and heredity on the hereditary A3 line

# %%
from functcat.endo import endomorphism_algebra, ideal_projectivity_report
from functcat.instance import load_instance

inst = load_instance("a3h")
C = inst.category
P = inst.bundle("P2")
R = endomorphism_algebra(P)
print("dim R_P =", R.dim)

# %% [markdown]
# Every I(c, -) is projective here, so the ideal is heredity-like.

# %%
rep = ideal_projectivity_report(C, P, kmax=4)
for v in rep.verdicts:
    print(f"[{'PASS' if v.passed else 'FAIL'}] {v.name}: {v.detail}")
print("quasi-hereditary:", rep.data["quasi_hereditary"])
