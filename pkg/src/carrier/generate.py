"""Seeded random instances for property tests and the bundled corpus."""

import random

from .dividing import DividingSet, FaceDiagram
from .errors import CarrierError
from .tri import PERMS, Triangulation


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_triangulation(n_tets, seed=0, boundary_faces=0, attempts=1000):
    """Random face pairing on ``n_tets`` tetrahedra.

    ``boundary_faces`` faces are left unglued (the rest must be even).
    Pairings that identify an edge with itself reversed are redrawn.
    """
    rng = _rng(seed)
    sides = [(t, f) for t in range(n_tets) for f in range(4)]
    if (len(sides) - boundary_faces) % 2:
        raise ValueError("an even number of faces must be glued")
    for _ in range(attempts):
        rng.shuffle(sides)
        glued = sides[boundary_faces:]
        pairs = [(glued[i], glued[i + 1], rng.choice(PERMS)) for i in range(0, len(glued), 2)]
        try:
            return Triangulation.from_pairs(n_tets, pairs)
        except CarrierError:
            continue
    raise RuntimeError("no valid pairing found")


def has_simple_faces(tri):
    """True when no face has two of its edges identified."""
    return all(len({tri.face_edge(fid, i)[0] for i in range(3)}) == 3
               for fid in range(len(tri.faces)))


def random_shelled_triangulation(n_tets, seed=0, extra_gluings=None):
    """Tetrahedra glued along a random tree, plus extra random face gluings.

    Extra gluings are kept only if the result stays valid and every face
    keeps three distinct edges.  Free faces stay boundary.
    """
    rng = _rng(seed)
    pairs = []
    free = [(0, f) for f in range(4)]
    for t in range(1, n_tets):
        side = free.pop(rng.randrange(len(free)))
        f = rng.randrange(4)
        pairs.append((side, (t, f), rng.choice(PERMS)))
        free += [(t, g) for g in range(4) if g != f]
    tri = Triangulation.from_pairs(n_tets, pairs)
    if extra_gluings is None:
        extra_gluings = n_tets
    for _ in range(extra_gluings):
        if len(free) < 2:
            break
        a, b = rng.sample(range(len(free)), 2)
        cand = pairs + [(free[a], free[b], rng.choice(PERMS))]
        try:
            attempt = Triangulation.from_pairs(n_tets, cand)
        except CarrierError:
            continue
        if has_simple_faces(attempt):
            pairs, tri = cand, attempt
            free = [s for i, s in enumerate(free) if i not in (a, b)]
    return tri


def random_noncrossing(m, rng):
    """Uniform non-crossing perfect matching on ``2m`` points (as partner list)."""
    # cycle lemma: rotate a word of m ups and m+1 downs into a Dyck path
    word = [1] * m + [-1] * (m + 1)
    rng.shuffle(word)
    h, low, cut = 0, 0, 0
    for i, s in enumerate(word):
        h += s
        if h < low:
            low, cut = h, i + 1
    word = (word[cut:] + word[:cut])[:-1]
    partner = [0] * (2 * m)
    stack = []
    for p, s in enumerate(word):
        if s > 0:
            stack.append(p)
        else:
            q = stack.pop()
            partner[p], partner[q] = q, p
    return partner


def random_dividing(tri, seed=0, max_per_edge=26, min_per_edge=2):
    """Random dividing set: even endpoint counts per edge, random planar matchings."""
    rng = _rng(seed)
    lo, hi = (min_per_edge + 1) // 2, max_per_edge // 2
    counts = [2 * rng.randint(lo, hi) for _ in tri.edges]
    diagrams = []
    for fid in range(len(tri.faces)):
        slots = tuple(counts[tri.face_edge(fid, i)[0]] for i in range(3))
        partner = random_noncrossing(sum(slots) // 2, rng)
        diagrams.append(FaceDiagram._from_partner(slots, partner))
    return DividingSet(tri, diagrams)


def normal_dividing(tri, tris, quads=None, near_bp=()):
    """Dividing set traced by normal triangles and quads.

    ``tris[t][v]`` triangles cut the corner at vertex ``v`` of tetrahedron
    ``t``; ``quads[t]`` is ``(axis, count)`` or a list of such pairs.  Each face takes its arcs from
    its representative side.  ``near_bp`` lists ``(edge, end)`` pairs,
    ``end`` being 0 or 1 for the low or high end of the global edge; every
    face along that edge receives one boundary-parallel arc next to that end.
    """
    from .dividing import CORNER_OF
    from .normalize import quad_corners
    from .tri import edge_ends, face_vertices

    quads = quads or {}
    local = {v: ty for ty, v in CORNER_OF.items()}
    diagrams = []
    for fid, (t, f) in enumerate(tri.faces):
        fv = face_vertices(f)
        corner = [tris[t][fv[v]] for v in range(3)]
        fam = quads.get(t, [])
        for axis, q in ([fam] if fam and not isinstance(fam[0], (tuple, list)) else fam):
            if axis is not None and q:
                corner[fv.index(quad_corners(axis)[f])] += q
        n = {local[v]: corner[v] for v in range(3)}
        bp = {}
        for i in range(3):
            g, sign = tri.face_edge(fid, i)
            lo, hi = edge_ends(i)
            for eg, end in near_bp:
                if eg == g:
                    v = (lo if end == 0 else hi) if sign > 0 else (hi if end == 0 else lo)
                    bp[(i, v)] = bp.get((i, v), 0) + 1
        diagrams.append(FaceDiagram.from_counts(n[(0, 1)], n[(0, 2)], n[(1, 2)], bp))
    return DividingSet(tri, diagrams)


def vertex_link_dividing(tri, multiplicity, near_bp=()):
    """Dividing set of ``multiplicity[v]`` parallel links of each vertex ``v``."""
    tris = [[multiplicity[tri.vertex_of[(t, v)]] for v in range(4)]
            for t in range(tri.tet_count)]
    return normal_dividing(tri, tris, None, near_bp)


def random_branch_system(seed=0, max_dim=6, max_eqs=4):
    """Random system of equations ``x_i = x_j + x_k`` (``j == k`` allowed)."""
    from .diophantine import BranchSystem

    rng = _rng(seed)
    d = rng.randint(1, max_dim)
    eqs = []
    for _ in range(rng.randint(0, max_eqs)):
        i = rng.randrange(d)
        j = rng.randrange(d)
        k = rng.randrange(d)
        eqs.append((i, j, k))
    return BranchSystem(d, eqs)
