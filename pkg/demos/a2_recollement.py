# %% [markdown]
# # A recollement on the A2 quiver
#
# Cutting out vertex 2 splits mod C into modules over C/I and over R_P.

# %%
from functcat.endo import recollement_check
from functcat.instance import load_instance

inst = load_instance("a2")
rep = recollement_check(inst.category, inst.bundle("P2"))
for v in rep.verdicts:
    print(f"[{'PASS' if v.passed else 'FAIL'}] {v.name}")
print("battery sizes:", rep.data["battery_sizes"])
