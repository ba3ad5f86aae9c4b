"""Carried tori on the flap-torus complex and Lutz plans over them.

Run with ``python3 demos/flap_torus.py``.
"""

from carrier import corpus
from carrier.carried import enumerate_carried, report_line
from carrier.diophantine import equations_from, hilbert_basis
from carrier.lutz import LutzPlan, apply_lutz, cover_check, cover_plan, derive_generators, realize

B = corpus.branched("flap-torus")
S = equations_from(B)
print(S.serialize(), end="")

for w, summary in enumerate_carried(B, 2):
    print(" ", report_line(summary))

H = hilbert_basis(S)
G = derive_generators(B, H)
print("generators:", G.generators)

plan = apply_lutz(apply_lutz(LutzPlan(), 0, 2, G), 1, 1, G)
print(plan.serialize(), end="")
print("realized weight:", realize(plan, G))
print("plan for (2, 5, 3):", cover_plan(G, (2, 5, 3)).twists)
print(cover_check(S, G, 5).lines()[0])
for i in range(len(G.generators)):
    print(f"without generator {i}:", cover_check(S, G.without(i), 5).lines()[0])
