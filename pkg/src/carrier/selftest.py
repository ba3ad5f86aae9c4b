"""Oracle suites behind ``carrier selftest``.

Each check returns ``(name, ok, detail)``.  Sizes are smaller than the
test suite's so the command finishes in a few seconds.
"""

import random

from . import corpus
from .carried import chi_coefficients, enumerate_carried, surface_from_weight
from .diophantine import (boxed_solutions, brute_force_basis, equations_from,
                          hilbert_basis)
from .dividing import tb_total
from .errors import CarrierError
from .generate import random_branch_system, random_dividing, random_shelled_triangulation
from .lutz import combine, cover_check, decompose, derive_generators
from .normalize import extract_prisms, normal_form_violations, normalize


def _hilbert(seed, n=30):
    for s in range(n):
        S = random_branch_system(seed * 1000 + s)
        if set(hilbert_basis(S).restricted(8)) != set(brute_force_basis(S, 8).members):
            return False, f"system {S.equations} d={S.d}"
    return True, f"{n} systems"


def _normalize(seed, n=10):
    for s in range(n):
        T = random_shelled_triangulation(1 + s % 8, seed * 1000 + s)
        D = random_dividing(T, seed * 1000 + s, max_per_edge=12)
        budget = D.endpoint_total()
        N, moves = normalize(D)
        if len(moves) > budget or normal_form_violations(N):
            return False, f"instance {s}"
        if any(m.tb_after < m.tb_before + 1 for m in moves) or tb_total(N) != (
                moves[-1].tb_after if moves else tb_total(D)):
            return False, f"tb audit failed on instance {s}"
    return True, f"{n} dividing sets"


def _prisms(C):
    for tri_name, div_name in corpus.CONTACT_DERIVED:
        T, D = corpus.dividing(tri_name, div_name)
        N, _ = normalize(D)
        P = extract_prisms(N, C=C)
        for t in range(T.tet_count):
            if P.positions_used(t) > 5:
                return False, f"{tri_name}: tet {t} uses {P.positions_used(t)} positions"
            for x in range(4):
                packed = P.packed(t, x)
                if any(packed[v] + P.leftover[(t, x)][v] != P.corners[(t, x)][v]
                       for v in packed):
                    return False, f"{tri_name}: arc balance broken at {t}:{x}"
    return True, f"{len(corpus.CONTACT_DERIVED)} examples, C={C}"


def _carried(bound):
    for name in corpus.BRANCHED:
        B = corpus.branched(name)
        S = equations_from(B)
        box = {tuple(map(int, r)) for r in boxed_solutions(S, bound)}
        if {w for w, _ in enumerate_carried(B, bound)} != box:
            return False, f"{name}: weight sets differ"
        c = chi_coefficients(B)
        for w in sorted(box):
            if max(w, default=0) > 3:
                continue
            surf = surface_from_weight(B, w)
            if not surf.closed or surf.chi != sum(a * b for a, b in zip(c, w)):
                return False, f"{name}: w={w}"
            doubled = surface_from_weight(B, [2 * x for x in w])
            if len(doubled.components) != 2 * len(surf.components):
                return False, f"{name}: components of 2w={w}"
    return True, f"{len(corpus.BRANCHED)} complexes"


def _lutz(bound, seed):
    rng = random.Random(seed)
    for name in corpus.BRANCHED:
        B = corpus.branched(name)
        S = equations_from(B)
        H = hilbert_basis(S)
        for _ in range(20):
            w = combine(H.members, [rng.randint(0, 5) for _ in H.members], [0] * S.d)
            if combine(H.members, decompose(S, H, w), [0] * S.d) != w:
                return False, f"{name}: roundtrip failed"
        if name in corpus.NON_TORIC:
            continue
        G = derive_generators(B, H)
        if not cover_check(S, G, bound).ok:
            return False, f"{name}: uncovered weights"
        if any(cover_check(S, G.without(i), bound).ok for i in range(len(G.generators))):
            return False, f"{name}: a generator is redundant"
    return True, f"bound {bound}"


def _io():
    loaders = {".tri": lambda n: corpus.triangulation(n),
               ".bs": corpus.branched, ".eqs": corpus.equations, ".plan": corpus.plan}
    count = 0
    for name in corpus.names():
        suffix = name[name.rindex("."):]
        if suffix == ".div":
            tri = name.replace(".div", ".tri")
            if tri not in corpus.names():
                tri = "single-tet.tri"
            obj = corpus.dividing(tri, name)[1]
        else:
            obj = loaders[suffix](name)
        if obj.serialize() != corpus.text(name):
            return False, name
        count += 1
    return True, f"{count} files"


def run(seed=0, C=12, bound=5):
    checks = [("hilbert-oracle", lambda: _hilbert(seed)),
              ("normalize-contract", lambda: _normalize(seed)),
              ("prism-packing", lambda: _prisms(C)),
              ("carried-bijection", lambda: _carried(bound)),
              ("lutz-generation", lambda: _lutz(bound, seed)),
              ("io-roundtrip", _io)]
    out = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except CarrierError as e:
            ok, detail = False, str(e)
        out.append((name, ok, detail))
    return out
