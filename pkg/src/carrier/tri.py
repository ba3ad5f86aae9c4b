"""Triangulations of closed (or bounded) 3-manifolds given by face gluings.

A triangulation is a list of tetrahedra with vertices ``0..3``.  Face ``f``
of a tetrahedron is the face opposite vertex ``f``; its three vertices,
in increasing order, carry the face-local labels ``0, 1, 2``.  A gluing
identifies face ``(t, f)`` with face ``(t2, f2)`` through a permutation of
the face-local labels.

Face-local edge ``i`` of a face is the edge opposite face-local vertex
``i``; it is oriented from its lower to its higher face-local vertex.
"""

from itertools import permutations

from .errors import CarrierError

PERMS = tuple("".join(p) for p in permutations("012"))


_FACE_VERTICES = tuple(tuple(v for v in range(4) if v != f) for f in range(4))
_EDGE_ENDS = tuple(tuple(j for j in range(3) if j != i) for i in range(3))


def face_vertices(f):
    """Tetrahedron vertices of face ``f`` in face-local order."""
    return _FACE_VERTICES[f]


def edge_ends(i):
    """Face-local endpoints (low, high) of face-local edge ``i``."""
    return _EDGE_ENDS[i]


def corner_edges(v):
    """The two face-local edges meeting at face-local vertex ``v``."""
    return tuple(j for j in range(3) if j != v)


def _inverse(perm):
    inv = [0, 0, 0]
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


class _UnionFind:
    """Union-find with a parity bit (used for edge orientations)."""

    def __init__(self):
        self.parent = {}
        self.parity = {}

    def add(self, x):
        if x not in self.parent:
            self.parent[x] = x
            self.parity[x] = 0

    def find(self, x):
        root, par = x, 0
        path = []
        while self.parent[root] != root:
            path.append(root)
            par ^= self.parity[root]
            root = self.parent[root]
        # path compression with parity bookkeeping
        acc = par
        for node in path:
            old = self.parity[node]
            self.parent[node] = root
            self.parity[node] = acc
            acc ^= old
        return root, par

    def union(self, x, y, rel=0):
        """Merge so that parity(x) ^ parity(y) == rel.  False on conflict."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == rel
        if ry < rx:
            rx, ry, px, py = ry, rx, py, px
        self.parent[ry] = rx
        self.parity[ry] = px ^ py ^ rel
        return True


class Triangulation:
    """A validated, immutable triangulation with derived skeleton indices.

    ``gluings`` maps ``(t, f)`` to ``(t2, f2, perm)`` for every glued face
    side (both directions present); faces absent from the mapping are
    boundary faces.  ``perm[i]`` is the face-local label on ``(t2, f2)``
    matched with label ``i`` on ``(t, f)``.
    """

    def __init__(self, tet_count, gluings):
        if tet_count < 0:
            raise CarrierError("PARSE_ERROR", "negative tetrahedron count")
        self.tet_count = tet_count
        self.gluings = {k: (v[0], v[1], tuple(v[2])) for k, v in gluings.items()}
        self._check_gluings()
        self._build_faces()
        self._build_edges()
        self._build_vertices()
        self._face_edges = []
        self._occurrences = {e: [] for e in range(len(self.edges))}
        for fid, (t, f) in enumerate(self.faces):
            fv = face_vertices(f)
            row = []
            for i in range(3):
                lo, hi = edge_ends(i)
                e, s = self.tet_edge(t, fv[lo], fv[hi])
                row.append((e, s))
                self._occurrences[e].append((fid, i, s))
            self._face_edges.append(tuple(row))

    @classmethod
    def from_pairs(cls, tet_count, pairs):
        """Build from one-directional ``((t, f), (t2, f2), perm)`` triples."""
        gluings = {}
        for (t, f), (t2, f2), perm in pairs:
            perm = tuple(int(c) for c in perm) if isinstance(perm, str) else tuple(perm)
            gluings[(t, f)] = (t2, f2, perm)
            gluings[(t2, f2)] = (t, f, _inverse(perm))
        return cls(tet_count, gluings)

    # -- validation ---------------------------------------------------------

    def _check_gluings(self):
        for (t, f), (t2, f2, perm) in self.gluings.items():
            for tt in (t, t2):
                if not 0 <= tt < self.tet_count:
                    raise CarrierError("DANGLING_REFERENCE",
                                       f"tetrahedron {tt} out of range")
            if not (0 <= f < 4 and 0 <= f2 < 4):
                raise CarrierError("PARSE_ERROR", f"face index out of range at ({t},{f})")
            if sorted(perm) != [0, 1, 2]:
                raise CarrierError("PARSE_ERROR", f"bad permutation {perm}")
            if (t, f) == (t2, f2):
                raise CarrierError("SELF_GLUED_FACE", f"face ({t},{f}) glued to itself")
            back = self.gluings.get((t2, f2))
            if back is None or back[:2] != (t, f) or back[2] != _inverse(perm):
                raise CarrierError("GLUE_NOT_INVOLUTIVE",
                                   f"gluing ({t},{f}) -> ({t2},{f2}) has no matching inverse")

    # -- derived indices ----------------------------------------------------

    def map_vertex(self, t, f, v):
        """Image of tetrahedron vertex ``v`` (on face ``f`` of ``t``) across the gluing."""
        t2, f2, perm = self.gluings[(t, f)]
        i = face_vertices(f).index(v)
        return t2, face_vertices(f2)[perm[i]]

    def _build_faces(self):
        self.faces = []
        self.face_of = {}
        for t in range(self.tet_count):
            for f in range(4):
                if (t, f) in self.face_of:
                    continue
                fid = len(self.faces)
                self.faces.append((t, f))
                self.face_of[(t, f)] = fid
                if (t, f) in self.gluings:
                    t2, f2, _ = self.gluings[(t, f)]
                    self.face_of[(t2, f2)] = fid

    def _build_edges(self):
        uf = _UnionFind()
        for t in range(self.tet_count):
            for a in range(4):
                for b in range(a + 1, 4):
                    uf.add((t, a, b))
        for (t, f), (t2, _, _) in self.gluings.items():
            fv = face_vertices(f)
            for i in range(3):
                for j in range(i + 1, 3):
                    a, b = fv[i], fv[j]
                    _, a2 = self.map_vertex(t, f, a)
                    _, b2 = self.map_vertex(t, f, b)
                    rel = 0 if a2 < b2 else 1
                    key2 = (t2, min(a2, b2), max(a2, b2))
                    if not uf.union((t, a, b), key2, rel):
                        raise CarrierError(
                            "EDGE_SELF_REVERSED",
                            f"edge ({t}:{a}{b}) is identified with itself reversed")
        classes = {}
        for key in sorted(uf.parent):
            root, _ = uf.find(key)
            classes.setdefault(root, []).append(key)
        reps = sorted(min(members) for members in classes.values())
        rep_index = {r: i for i, r in enumerate(reps)}
        self.edges = reps
        self.edge_of = {}
        for key in uf.parent:
            root, par = uf.find(key)
            rep = min(classes[root])
            _, rep_par = uf.find(rep)
            self.edge_of[key] = (rep_index[rep], par ^ rep_par)

    def _build_vertices(self):
        uf = _UnionFind()
        for t in range(self.tet_count):
            for v in range(4):
                uf.add((t, v))
        for (t, f) in self.gluings:
            for v in face_vertices(f):
                uf.union((t, v), self.map_vertex(t, f, v))
        classes = {}
        for key in sorted(uf.parent):
            classes.setdefault(uf.find(key)[0], []).append(key)
        reps = sorted(min(m) for m in classes.values())
        index = {r: i for i, r in enumerate(reps)}
        self.vertices = reps
        self.vertex_of = {}
        for key in uf.parent:
            root = uf.find(key)[0]
            self.vertex_of[key] = index[min(classes[root])]

    # -- queries ------------------------------------------------------------

    def is_boundary(self, t, f):
        return (t, f) not in self.gluings

    def is_closed(self):
        return len(self.gluings) == 4 * self.tet_count

    def tet_edge(self, t, a, b):
        """Global edge id and orientation sign (+1 if a->b follows it)."""
        if a < b:
            e, par = self.edge_of[(t, a, b)]
            return e, -1 if par else 1
        e, par = self.edge_of[(t, b, a)]
        return e, 1 if par else -1

    def face_edge(self, face_id, i):
        """Global edge and sign of face-local edge ``i`` (representative side)."""
        return self._face_edges[face_id][i]

    def edge_occurrences(self, e):
        """All ``(face_id, local_edge, sign)`` whose face-local edge is ``e``."""
        return list(self._occurrences[e])

    def face_view(self, t, f):
        """Map face-local labels of the representative side to those of ``(t, f)``.

        Returns a tuple ``m`` with ``m[label_on_rep] = label_on_(t, f)``.
        """
        fid = self.face_of[(t, f)]
        if self.faces[fid] == (t, f):
            return (0, 1, 2)
        rt, rf = self.faces[fid]
        return self.gluings[(rt, rf)][2]

    def edge_ring(self, e):
        """Tetrahedron faces met while walking around edge ``e``.

        For an interior edge the list is the full cyclic ring; for a
        boundary edge it runs from one boundary face to the other.
        """
        t, a, b = self.edges[e]
        c, d = (v for v in range(4) if v not in (a, b))

        def walk(t, a, b, exit_vertex):
            seq = []
            start = (t, exit_vertex)
            cur = (t, a, b, exit_vertex)
            while True:
                tt, aa, bb, x = cur
                seq.append((tt, x))
                if (tt, x) not in self.gluings:
                    return seq, False
                t2, a2 = self.map_vertex(tt, x, aa)
                _, b2 = self.map_vertex(tt, x, bb)
                f2 = self.gluings[(tt, x)][1]
                other = next(v for v in range(4) if v not in (a2, b2, f2))
                cur = (t2, a2, b2, other)
                if (t2, other) == start:
                    return seq, True

        fwd, closed = walk(t, a, b, d)
        if closed:
            return fwd
        back, _ = walk(t, a, b, c)
        return list(reversed(back)) + fwd

    def skeleton_counts(self):
        """``(vertices, edges, faces, tetrahedra)`` after identifications."""
        return len(self.vertices), len(self.edges), len(self.faces), self.tet_count

    def euler_characteristic(self):
        v, e, f, t = self.skeleton_counts()
        return v - e + f - t

    # -- IO -----------------------------------------------------------------

    def serialize(self):
        lines = [f"tetrahedra {self.tet_count}"]
        for t in range(self.tet_count):
            for f in range(4):
                g = self.gluings.get((t, f))
                if g is None:
                    lines.append(f"boundary {t} {f}")
                elif (t, f) < g[:2]:
                    perm = "".join(str(x) for x in g[2])
                    lines.append(f"glue {t} {f} -> {g[0]} {g[1]} {perm}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return (isinstance(other, Triangulation) and self.tet_count == other.tet_count
                and self.gluings == other.gluings)

    def __hash__(self):
        return hash((self.tet_count, tuple(sorted(self.gluings.items()))))

    def __repr__(self):
        v, e, f, t = self.skeleton_counts()
        return f"Triangulation(tets={t}, faces={f}, edges={e}, vertices={v})"


def _int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise CarrierError("PARSE_ERROR", f"line {lineno}: expected integer, got {tok!r}")


def load_triangulation(text):
    """Parse ``.tri`` text into a validated :class:`Triangulation`."""
    n = None
    gluings = {}
    boundary = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if tok[0] != "tetrahedra" or len(tok) != 2:
                raise CarrierError("PARSE_ERROR", f"line {lineno}: expected 'tetrahedra <N>'")
            n = _int(tok[1], lineno)
            if n < 0:
                raise CarrierError("PARSE_ERROR", "negative tetrahedron count")
            continue
        if tok[0] == "glue":
            if len(tok) != 7 or tok[3] != "->":
                raise CarrierError("PARSE_ERROR", f"line {lineno}: malformed glue line")
            t, f, t2, f2 = (_int(x, lineno) for x in (tok[1], tok[2], tok[4], tok[5]))
            if tok[6] not in PERMS:
                raise CarrierError("PARSE_ERROR", f"line {lineno}: bad permutation {tok[6]!r}")
            for tt in (t, t2):
                if not 0 <= tt < n:
                    raise CarrierError("DANGLING_REFERENCE",
                                       f"line {lineno}: tetrahedron {tt} out of range")
            if not (0 <= f < 4 and 0 <= f2 < 4):
                raise CarrierError("PARSE_ERROR", f"line {lineno}: face index out of range")
            if (t, f) == (t2, f2):
                raise CarrierError("SELF_GLUED_FACE", f"line {lineno}: face ({t},{f})")
            perm = tuple(int(c) for c in tok[6])
            for key, val in (((t, f), (t2, f2, perm)), ((t2, f2), (t, f, _inverse(perm)))):
                if key in boundary:
                    raise CarrierError("PARSE_ERROR", f"line {lineno}: face {key} listed twice")
                old = gluings.get(key)
                if old is not None and old != val:
                    raise CarrierError("GLUE_NOT_INVOLUTIVE",
                                       f"line {lineno}: face {key} glued inconsistently")
                gluings[key] = val
        elif tok[0] == "boundary":
            if len(tok) != 3:
                raise CarrierError("PARSE_ERROR", f"line {lineno}: malformed boundary line")
            t, f = _int(tok[1], lineno), _int(tok[2], lineno)
            if not 0 <= t < n:
                raise CarrierError("DANGLING_REFERENCE", f"line {lineno}: tetrahedron {t}")
            if not 0 <= f < 4:
                raise CarrierError("PARSE_ERROR", f"line {lineno}: face index out of range")
            if (t, f) in gluings or (t, f) in boundary:
                raise CarrierError("PARSE_ERROR", f"line {lineno}: face ({t},{f}) listed twice")
            boundary.add((t, f))
        else:
            raise CarrierError("PARSE_ERROR", f"line {lineno}: unknown keyword {tok[0]!r}")
    if n is None:
        raise CarrierError("PARSE_ERROR", "missing 'tetrahedra' header")
    for t in range(n):
        for f in range(4):
            if (t, f) not in gluings and (t, f) not in boundary:
                raise CarrierError("PARSE_ERROR", f"face ({t},{f}) not listed")
    return Triangulation(n, gluings)


def canonicalize_triangulation(text):
    return load_triangulation(text).serialize()


def skeleton_counts(T):
    return T.skeleton_counts()
