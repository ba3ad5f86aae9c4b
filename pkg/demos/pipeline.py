"""Walk the two-tetrahedron example from dividing set to carried surfaces.

Run with ``python3 demos/pipeline.py``.
"""

from carrier import corpus
from carrier.branched import build_from_prisms, validate
from carrier.carried import classify
from carrier.diophantine import equations_from, hilbert_basis
from carrier.dividing import tb_total
from carrier.normalize import extract_prisms, normalize

T, D = corpus.dividing("two-tet", "two-tet")
print(f"two tetrahedra, {D.endpoint_total()} endpoints, tb={tb_total(D)}")

N, moves = normalize(D)
for m in moves:
    print(" ", m.to_line())
print(f"normal form after {len(moves)} moves, tb={tb_total(N)}")

P = extract_prisms(N)
for line in P.report_lines():
    print(" ", line)

B = build_from_prisms(T, P)
rep = validate(B)
print(f"branched complex: {B.d} sectors, closed={rep.closed}, violations={len(rep.violations)}")

H = hilbert_basis(equations_from(B))
for u in H:
    print(" ", u, [v for *_, v in classify(B, u)])

# a random dividing set needs many edge isotopies before it is normal
T1, D1 = corpus.dividing("random1", "random1")
N1, moves1 = normalize(D1)
print(f"random1: tb {tb_total(D1)} -> {tb_total(N1)} in {len(moves1)} moves")
