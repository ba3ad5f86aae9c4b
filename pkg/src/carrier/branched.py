"""Abstract branched surfaces as cell complexes.

Sectors are numbered ``0..d-1``.  Each face lies in one sector and lists
its boundary as a cycle of signed edges.  Edges are interior (two face
sides of one sector), branch (one parent side and two child sides) or
boundary (one side, part of the boundary train track).
"""

import re
from dataclasses import dataclass, field, replace

from .errors import CarrierError


@dataclass(frozen=True)
class Vertex:
    id: str
    dom: int


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    kind: str  # "interior" | "branch" | "boundary"
    sector: int = None  # the interior sector, or the parent of a branch edge
    children: tuple = ()
    order: int = None
    rev: int = 0

    def line(self):
        head = f"edge {self.id} {self.tail} {self.head}"
        if self.kind == "interior":
            return f"{head} interior {self.sector}"
        if self.kind == "branch":
            j, k = self.children
            return f"{head} branch {self.sector} {j} {k} order {self.order} rev {self.rev}"
        return f"{head} boundary"


@dataclass(frozen=True)
class Face:
    id: str
    sector: int
    cycle: tuple  # ((edge id, +1 | -1), ...)

    def line(self):
        cyc = " ".join(("+" if s > 0 else "-") + e for e, s in self.cycle)
        return f"face {self.id} sector {self.sector} cycle {cyc}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    closed: bool = True

    @property
    def ok(self):
        return not self.violations

    def add(self, code, message):
        self.violations.append((code, message))

    def lines(self):
        out = [f"closed={'yes' if self.closed else 'no'} violations={len(self.violations)}"]
        out += [f"{code} {msg}" for code, msg in self.violations]
        return out


class BranchedComplex:
    """Immutable cell complex with sector data.

    ``meta`` holds optional build provenance and is not serialized.
    """

    def __init__(self, d, vertices, edges, faces, meta=None):
        self.d = d
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.faces = tuple(faces)
        self.meta = dict(meta or {})
        self.vertex = {v.id: v for v in self.vertices}
        self.edge = {e.id: e for e in self.edges}
        self._inc = {e.id: [] for e in self.edges}
        for fi, f in enumerate(self.faces):
            for pos, (eid, sign) in enumerate(f.cycle):
                self._inc.setdefault(eid, []).append((fi, pos, sign))

    def incidences(self, eid):
        """Face sides on an edge as ``(face index, cycle position, sign)``."""
        return self._inc.get(eid, [])

    def is_closed(self):
        return not any(e.kind == "boundary" for e in self.edges)

    def face_corner(self, fi, pos):
        """Vertex at the start of cycle position ``pos`` of face ``fi``."""
        eid, sign = self.faces[fi].cycle[pos]
        e = self.edge[eid]
        return e.tail if sign > 0 else e.head

    def branch_roles(self, eid):
        """``(parent, first child, second child)`` incidences of a branch edge."""
        e = self.edge[eid]
        inc = list(self.incidences(eid))
        if len(inc) != 3:
            raise CarrierError("BAD_INCIDENCE", f"branch edge {eid} has {len(inc)} face sides")
        sec = [self.faces[fi].sector for fi, _, _ in inc]
        if e.sector not in sec:
            raise CarrierError("BAD_INCIDENCE", f"branch edge {eid}: no side in parent sector")
        p = inc.pop(sec.index(e.sector))
        rest = sorted(self.faces[fi].sector for fi, _, _ in inc)
        if rest != sorted(e.children):
            raise CarrierError("BAD_INCIDENCE", f"branch edge {eid}: child sides in sectors {rest}")
        first = 0 if self.faces[inc[0][0]].sector == e.order else 1
        return p, inc[first], inc[1 - first]

    def serialize(self):
        lines = [f"sectors {self.d}"]
        lines += [f"vertex {v.id} dom {v.dom}" for v in self.vertices]
        lines += [e.line() for e in self.edges]
        lines += [f.line() for f in self.faces]
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return isinstance(other, BranchedComplex) and self.serialize() == other.serialize()

    def __hash__(self):
        return hash(self.serialize())

    def __repr__(self):
        return (f"BranchedComplex(d={self.d}, vertices={len(self.vertices)}, "
                f"edges={len(self.edges)}, faces={len(self.faces)})")


# -- parsing -------------------------------------------------------------------

_ID = r"[\w.']+"
_LINES = {
    "sectors": re.compile(r"sectors\s+(\d+)$"),
    "vertex": re.compile(rf"vertex\s+({_ID})\s+dom\s+(\d+)$"),
    "interior": re.compile(rf"edge\s+({_ID})\s+({_ID})\s+({_ID})\s+interior\s+(\d+)$"),
    "branch": re.compile(rf"edge\s+({_ID})\s+({_ID})\s+({_ID})\s+branch\s+(\d+)\s+(\d+)\s+(\d+)"
                         r"\s+order\s+(\d+)\s+rev\s+([01])$"),
    "boundary": re.compile(rf"edge\s+({_ID})\s+({_ID})\s+({_ID})\s+boundary$"),
    "face": re.compile(rf"face\s+({_ID})\s+sector\s+(\d+)\s+cycle((?:\s+[+-]{_ID})+)$"),
}


def load_branched(text, check=True):
    """Parse a ``.bs`` file; with ``check`` the first violation found is raised."""
    d = None
    vertices, edges, faces = [], [], []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, m = next(((k, r.match(line)) for k, r in _LINES.items() if r.match(line)),
                       (None, None))
        if kind is None or (kind == "sectors") != (d is None):
            raise CarrierError("PARSE_ERROR", f"line {n}: {raw!r}")
        g = m.groups()
        if kind == "sectors":
            d = int(g[0])
        elif kind == "vertex":
            vertices.append(Vertex(g[0], int(g[1])))
        elif kind == "interior":
            edges.append(Edge(g[0], g[1], g[2], "interior", int(g[3])))
        elif kind == "branch":
            i, j, k, order, rev = map(int, g[3:])
            if order not in (j, k):
                raise CarrierError("PARSE_ERROR", f"line {n}: order must name a child")
            edges.append(Edge(g[0], g[1], g[2], "branch", i, (j, k), order, rev))
        elif kind == "boundary":
            edges.append(Edge(g[0], g[1], g[2], "boundary"))
        else:
            cycle = tuple((tok[1:], 1 if tok[0] == "+" else -1) for tok in g[2].split())
            faces.append(Face(g[0], int(g[1]), cycle))
    if d is None:
        raise CarrierError("PARSE_ERROR", "missing sectors header")
    B = BranchedComplex(d, vertices, edges, faces)
    if check:
        report = validate(B)
        if report.violations:
            code, msg = report.violations[0]
            raise CarrierError(code, msg)
    return B


# -- validation ----------------------------------------------------------------

def validate(B):
    """Audit incidences, sector data, dominance and cycle closure."""
    r = ValidationReport(closed=B.is_closed())
    ids = [v.id for v in B.vertices]
    if len(set(ids)) != len(ids) or len({e.id for e in B.edges}) != len(B.edges) or \
            len({f.id for f in B.faces}) != len(B.faces):
        r.add("PARSE_ERROR", "duplicate cell id")
    for v in B.vertices:
        if not 0 <= v.dom < B.d:
            r.add("BAD_INCIDENCE", f"vertex {v.id} dominated by unknown sector {v.dom}")
    for e in B.edges:
        for end in (e.tail, e.head):
            if end not in B.vertex:
                r.add("BAD_INCIDENCE", f"edge {e.id} ends at unknown vertex {end}")
        secs = [e.sector] + list(e.children) if e.kind != "boundary" else []
        if any(not 0 <= s < B.d for s in secs):
            r.add("BAD_INCIDENCE", f"edge {e.id} names a sector out of range")
            continue
        inc = B.incidences(e.id)
        fsec = [B.faces[fi].sector for fi, _, _ in inc]
        if len(inc) > 3:
            r.add("BAD_INCIDENCE", f"edge {e.id} has {len(inc)} face sides (not a double point)")
        elif e.kind == "interior":
            if len(inc) != 2 or set(fsec) != {e.sector}:
                r.add("BAD_INCIDENCE", f"interior edge {e.id} has sides in sectors {fsec}")
        elif e.kind == "boundary":
            if len(inc) != 1:
                r.add("BAD_INCIDENCE", f"boundary edge {e.id} has {len(inc)} face sides")
        else:
            try:
                B.branch_roles(e.id)
            except CarrierError as err:
                r.add(err.code, err.message)
    for f in B.faces:
        if not 0 <= f.sector < B.d:
            r.add("BAD_INCIDENCE", f"face {f.id} in unknown sector {f.sector}")
            continue
        if not f.cycle:
            r.add("BAD_INCIDENCE", f"face {f.id} has an empty cycle")
            continue
        if any(eid not in B.edge for eid, _ in f.cycle):
            r.add("BAD_INCIDENCE", f"face {f.id} uses an unknown edge")
            continue
        for pos, (eid, sign) in enumerate(f.cycle):
            e = B.edge[eid]
            end = e.head if sign > 0 else e.tail
            nxt_id, nsign = f.cycle[(pos + 1) % len(f.cycle)]
            nxt = B.edge[nxt_id]
            if end != (nxt.tail if nsign > 0 else nxt.head):
                r.add("BAD_INCIDENCE", f"face {f.id} cycle breaks after {eid}")
                break
    used = {f.sector for f in B.faces}
    for s in range(B.d):
        if s not in used:
            r.add("DANGLING_SECTOR", f"sector {s} has no faces")
    # a vertex should be dominated by a sector that actually reaches it
    near = {v.id: set() for v in B.vertices}
    for fi, f in enumerate(B.faces):
        for pos in range(len(f.cycle)):
            if f.cycle[pos][0] in B.edge:
                c = B.face_corner(fi, pos)
                if c in near:
                    near[c].add(f.sector)
    for v in B.vertices:
        if near[v.id] and v.dom not in near[v.id]:
            r.add("BAD_DOMINANCE", f"vertex {v.id} dominated by sector {v.dom} not incident to it")
    return r


# -- amputation ----------------------------------------------------------------

def _restrict(B, keep_faces, origin):
    """Subcomplex on ``keep_faces``, with sectors merged along new interior edges.

    ``origin[s]`` is the set of original sector ids behind current sector
    ``s``.  Returns the new complex and its origin map.
    """
    kept = [B.faces[fi] for fi in keep_faces]
    sec_of = {}
    for f in kept:
        sec_of.setdefault(f.sector, f.sector)
    parent = {s: s for s in sec_of}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    keep = set(keep_faces)
    sides = {}
    for e in B.edges:
        inc = [(fi, pos, s) for fi, pos, s in B.incidences(e.id) if fi in keep]
        sides[e.id] = inc
        if len(inc) == 2:
            a, b = (B.faces[fi].sector for fi, _, _ in inc)
            parent[find(a)] = find(b)
    roots = sorted({find(s) for s in sec_of}, key=lambda r: min(
        min(origin[s]) for s in sec_of if find(s) == r))
    renum = {r: n for n, r in enumerate(roots)}
    new_sec = {s: renum[find(s)] for s in sec_of}
    new_origin = [set() for _ in roots]
    for s in sec_of:
        new_origin[new_sec[s]] |= origin[s]

    edges = []
    for e in B.edges:
        inc = sides[e.id]
        if not inc:
            continue
        if len(inc) == 3:
            edges.append(replace(e, sector=new_sec[e.sector],
                                 children=tuple(new_sec[c] for c in e.children),
                                 order=new_sec[e.order]))
        elif len(inc) == 2:
            edges.append(Edge(e.id, e.tail, e.head, "interior",
                              new_sec[B.faces[inc[0][0]].sector]))
        else:
            edges.append(Edge(e.id, e.tail, e.head, "boundary"))
    touched = {end for e in edges for end in (e.tail, e.head)}
    reach = {}
    for fi in keep_faces:
        f = B.faces[fi]
        for pos in range(len(f.cycle)):
            reach.setdefault(B.face_corner(fi, pos), set()).add(new_sec[f.sector])
    vertices = []
    for v in B.vertices:
        if v.id not in touched:
            continue
        dom = new_sec.get(v.dom)
        if dom is None or dom not in reach.get(v.id, ()):
            dom = min(reach.get(v.id, {0}))
        vertices.append(Vertex(v.id, dom))
    faces = [replace(f, sector=new_sec[f.sector]) for f in kept]
    return BranchedComplex(len(roots), vertices, edges, faces, B.meta), new_origin


def boundary_sectors(B):
    out = set()
    for e in B.edges:
        if e.kind == "boundary":
            out.update(B.faces[fi].sector for fi, _, _ in B.incidences(e.id))
    return sorted(out)


def amputate_boundary(B, rng=None):
    """Remove sectors touching the boundary train track until none is left.

    The lowest such sector goes first, or a random one when ``rng`` is
    given.  After each removal, edges left with two face sides become
    interior (merging their sectors), with one side boundary, with none
    they disappear.  Returns the closed (possibly empty) complex and the
    ledger: for each removal, the original sector ids it carried.
    """
    origin = [{s} for s in range(B.d)]
    ledger = []
    while True:
        bad = boundary_sectors(B)
        if not bad:
            return B, ledger
        s = rng.choice(bad) if rng is not None else bad[0]
        ledger.append(tuple(sorted(origin[s])))
        keep = [fi for fi, f in enumerate(B.faces) if f.sector != s]
        B, origin = _restrict(B, keep, origin)


# -- assembly from fibered prisms ---------------------------------------------

def _polygon(kind, t, key):
    """Cycle of a prism mid-surface as ``[(tet face, corner, (u, w))]``.

    Each side lies on one face of the tetrahedron, cuts the corner at the
    given vertex and runs between the tetrahedron edges ``u`` and ``w``.
    """
    if kind == "T":
        v = key
        a, b, c = (y for y in range(4) if y != v)
        return [(c, v, ((v, a), (v, b))), (a, v, ((v, b), (v, c))), (b, v, ((v, c), (v, a)))]
    (a, b), (c, d) = _AXES[key]
    return [(d, c, ((a, c), (b, c))), (a, b, ((b, c), (b, d))),
            (c, d, ((b, d), (a, d))), (b, a, ((a, d), (a, c)))]


_AXES = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def build_from_prisms(T, P):
    """Branched complex whose sectors are the mid-surfaces of the prisms of ``P``.

    One polygon face per prism family with positive count.  Along each
    glued face, the prism blocks of the two sides (stacked from the corner:
    triangle prism, then rectangle, then leftover) are joined by bands where
    their arc intervals overlap.  A block met by two bands becomes a branch
    edge with the nearer band as order-first child; a band joining two such
    blocks becomes a bigon sector of its own.  Blocks with no band, and
    sides on boundary faces, become boundary train-track edges.  Every
    tetrahedron edge contributes a single hub vertex.
    """
    faces = []  # [face id, cycle [(side key, hub u, hub w)]]
    blocks = {}  # (t, x, v) -> [(lo, hi, side key)]
    for t in range(P.tet_count):
        for x in range(4):
            for v in range(4):
                if v == x:
                    continue
                got = P.corners[(t, x)].get(v, 0)
                if got < P.packed(t, x)[v]:
                    raise CarrierError("UNMATCHED_RECTANGLE",
                                       f"prisms on face {x} of tetrahedron {t} exceed its arcs")
        inst = [("T", v, P.tri[t][v]) for v in range(4)]
        axis, q = P.quad[t]
        if axis is not None:
            inst.append(("Q", axis, q))
        for kind, key, n in inst:
            if n <= 0:
                continue
            fi = len(faces)
            cycle = []
            for x, v, (u, w) in _polygon(kind, t, key):
                side = (fi, len(cycle))
                lo = P.tri[t][v] if kind == "Q" else 0
                blocks.setdefault((t, x, v), []).append((lo, lo + n, side))
                cycle.append((side, T.tet_edge(t, *sorted(u))[0], T.tet_edge(t, *sorted(w))[0]))
            faces.append([f"{kind}{t}.{key}", cycle, (kind, t, key, n)])

    edges = []  # [kind, hub a, hub b, sides [(side key, sign)], extra]
    side_edge = {}
    bigons = []

    def new_edge(kind, side_keys, extra=None):
        fi, pos = side_keys[0]
        _, hu, hw = faces[fi][1][pos]
        a, b = min(hu, hw), max(hu, hw)
        edges.append([kind, a, b, extra])
        for s in side_keys:
            side_edge[s] = len(edges) - 1
        return len(edges) - 1

    parent = list(range(len(faces)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    bands = []
    for fid, (t, x) in enumerate(T.faces):
        for v in range(4):
            if v == x:
                continue
            A = sorted(blocks.get((t, x, v), []))
            if T.is_boundary(t, x):
                for _, _, s in A:
                    new_edge("boundary", [s])
                continue
            t2, v2 = T.map_vertex(t, x, v)
            x2 = T.gluings[(t, x)][1]
            if P.corners[(t, x)].get(v, 0) != P.corners[(t2, x2)].get(v2, 0):
                raise CarrierError("UNMATCHED_RECTANGLE",
                                   f"sides of face {t}:{x} disagree at corner {v}")
            Bb = sorted(blocks.get((t2, x2, v2), []))
            over = [(a, b) for a in A for b in Bb if min(a[1], b[1]) > max(a[0], b[0])]
            deg = {}
            for a, b in over:
                deg[a[2]] = deg.get(a[2], 0) + 1
                deg[b[2]] = deg.get(b[2], 0) + 1
            for _, _, s in A + Bb:
                if s not in deg:
                    new_edge("boundary", [s])
            # a block with two bands splits along a branch edge
            branch_of = {}
            for _, _, s in A + Bb:
                if deg.get(s) == 2:
                    branch_of[s] = new_edge("branch", [s], {"parent": s, "children": []})
            for a, b in over:
                lo = max(a[0], b[0])
                width = min(a[1], b[1]) - lo
                sa, sb = a[2], b[2]
                bands.append((fid, v, sa, sb, lo, width))
                if deg[sa] == 1 and deg[sb] == 1:
                    new_edge("interior", [sa, sb])
                    parent[find(sa[0])] = find(sb[0])
                elif deg[sa] == 2 and deg[sb] == 2:
                    gi = len(faces)
                    hub = faces[sa[0]][1][sa[1]]
                    faces.append([f"b{len(bigons)}", [((gi, 0), hub[1], hub[2]),
                                                      ((gi, 1), hub[2], hub[1])],
                                  ("band", fid, v, width)])
                    parent.append(gi)
                    bigons.append(gi)
                    for s, other in (((gi, 0), sa), ((gi, 1), sb)):
                        edges[branch_of[other]][3]["children"].append((lo, s))
                        side_edge[s] = branch_of[other]
                else:
                    hi_s, lo_s = (sa, sb) if deg[sa] == 2 else (sb, sa)
                    edges[branch_of[hi_s]][3]["children"].append((lo, lo_s))
                    side_edge[lo_s] = branch_of[hi_s]

    roots = []
    for fi in range(len(faces)):
        r = find(fi)
        if r not in roots:
            roots.append(r)
    sector = [roots.index(find(fi)) for fi in range(len(faces))]

    cycles = []
    for fi, (_, cycle, _) in enumerate(faces):
        cycles.append([(side_edge[s], 1 if (hu, hw) == (edges[side_edge[s]][1],
                                                         edges[side_edge[s]][2]) else -1)
                       for s, hu, hw in cycle])
    # vertices: corners identified through the edges they bound
    corner = {}
    for fi, cyc in enumerate(cycles):
        for pos in range(len(cyc)):
            corner[(fi, pos)] = (fi, pos)

    def cfind(c):
        while corner[c] != c:
            corner[c] = corner[corner[c]]
            c = corner[c]
        return c

    ends = {}
    for fi, cyc in enumerate(cycles):
        for pos, (n, sign) in enumerate(cyc):
            nxt = (fi, (pos + 1) % len(cyc))
            tail, head = ((fi, pos), nxt) if sign > 0 else (nxt, (fi, pos))
            if n in ends:
                corner[cfind(tail)] = cfind(ends[n][0])
                corner[cfind(head)] = cfind(ends[n][1])
            else:
                ends[n] = (tail, head)
    hub_of = {}
    for fi, (_, cycle, _) in enumerate(faces):
        for pos, (_, hu, _) in enumerate(cycle):
            hub_of[(fi, pos)] = hu
    names = {}
    count = {}
    for c in sorted(corner, key=lambda c: (hub_of[c], c)):
        r = cfind(c)
        if r not in names:
            h = hub_of[c]
            names[r] = f"h{h}.{count.get(h, 0)}"
            count[h] = count.get(h, 0) + 1

    def vname(c):
        return names[cfind(c)]

    out_edges = []
    for n, (kind, a, b, extra) in enumerate(edges):
        eid, ta, tb = f"e{n}", vname(ends[n][0]), vname(ends[n][1])
        if kind == "boundary":
            out_edges.append(Edge(eid, ta, tb, "boundary"))
            continue
        if kind == "interior":
            s = next(k for k, e in side_edge.items() if e == n)
            out_edges.append(Edge(eid, ta, tb, "interior", sector[s[0]]))
            continue
        kids = [s for _, s in sorted(extra["children"])]
        j, k = (sector[s[0]] for s in kids)
        out_edges.append(Edge(eid, ta, tb, "branch", sector[extra["parent"][0]], (j, k), j, 0))

    out_faces = [Face(faces[fi][0], sector[fi], tuple((f"e{n}", sg) for n, sg in cyc))
                 for fi, cyc in enumerate(cycles)]
    incident, dom = {}, {}
    for fi, cyc in enumerate(cycles):
        for pos in range(len(cyc)):
            incident.setdefault(vname((fi, pos)), set()).add(sector[fi])
    for e in out_edges:
        if e.kind == "branch":
            for v in (e.tail, e.head):
                dom[v] = min(dom.get(v, e.sector), e.sector)
    order = sorted(incident, key=lambda v: tuple(int(p) for p in v[1:].split(".")))
    vertices = [Vertex(v, dom.get(v, min(incident[v]))) for v in order]
    meta = {"faces": [f[2] for f in faces], "bands": bands}
    return BranchedComplex(len(roots), vertices, out_edges, out_faces, meta)
