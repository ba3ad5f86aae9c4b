"""Surfaces carried by a branched complex, rebuilt sheet by sheet.

A face of sector ``i`` contributes sheets ``0..w_i-1``.  Across an interior
edge sheet ``s`` meets sheet ``s``.  Across a branch edge the order-first
child takes the lowest parent sheets and the other child the rest; ``rev``
reverses the parent's stacking.
"""

from dataclasses import dataclass, field

from .branched import BranchedComplex, Edge, Face, Vertex
from .diophantine import boxed_solutions, equations_from, is_solution
from .errors import CarrierError


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        p = self.p
        p.setdefault(x, x)
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


@dataclass
class Component:
    faces: list
    edges: int
    vertices: int
    orientable: bool

    @property
    def chi(self):
        return len(self.faces) - self.edges + self.vertices

    @property
    def verdict(self):
        if self.chi == 0:
            return "Torus" if self.orientable else "KleinBottle"
        return f"Other({self.chi})"


@dataclass
class CarriedSurface:
    complex: BranchedComplex
    weight: tuple
    sheets: list  # (face index, sheet)
    gluings: list  # ((sheet, pos), (sheet, pos)) sheet-edge side pairs
    free_sides: list  # sheet-edge sides glued to nothing
    vertex_class: dict  # (sheet, corner) -> vertex label
    components: list = field(default_factory=list)

    @property
    def closed(self):
        return not self.free_sides

    @property
    def chi(self):
        return sum(c.chi for c in self.components)

    def summary(self):
        return {"w": list(self.weight), "components": len(self.components),
                "chi": [c.chi for c in self.components],
                "verdicts": [c.verdict for c in self.components]}

    def to_complex(self):
        """The sheet complex as a branch-free complex, one sector per component."""
        B = self.complex
        comp_of = {}
        for n, c in enumerate(self.components):
            for sh in c.faces:
                comp_of[sh] = n
        edge_name = {}
        edges = []
        sides = [(a, b) for a, b in self.gluings] + [(a, None) for a in self.free_sides]
        sides.sort(key=lambda p: (p[0][0], p[0][1]))
        vids = {}
        for (sh, corner), v in sorted(self.vertex_class.items()):
            vids.setdefault(v, f"v{len(vids)}")
        for a, b in sides:
            (fi, s), pos = a
            eid, sign = B.faces[fi].cycle[pos]
            L = len(B.faces[fi].cycle)
            tail, head = (pos, (pos + 1) % L) if sign > 0 else ((pos + 1) % L, pos)
            name = f"{eid}.{s}" if f"{eid}.{s}" not in {e.id for e in edges} else f"{eid}.{s}.{len(edges)}"
            tv = vids[self.vertex_class[((fi, s), tail)]]
            hv = vids[self.vertex_class[((fi, s), head)]]
            if b is None:
                edges.append(Edge(name, tv, hv, "boundary"))
            else:
                edges.append(Edge(name, tv, hv, "interior", comp_of[(fi, s)]))
                edge_name[b] = name
            edge_name[a] = name
        faces = []
        for sh in sorted(self.sheets):
            fi, s = sh
            cyc = tuple((edge_name[(sh, pos)], sign)
                        for pos, (_, sign) in enumerate(B.faces[fi].cycle))
            faces.append(Face(f"{B.faces[fi].id}.{s}", comp_of[sh], cyc))
        dom = {}
        for (sh, _), v in self.vertex_class.items():
            dom[vids[v]] = comp_of[sh]
        vertices = [Vertex(v, dom[v]) for v in sorted(dom, key=lambda x: int(x[1:]))]
        return BranchedComplex(len(self.components), vertices, edges, faces)


def _check(B, w, strict):
    w = tuple(int(x) for x in w)
    if len(w) != B.d:
        raise CarrierError("BAD_WEIGHT", f"expected {B.d} entries, got {len(w)}")
    if any(x < 0 for x in w):
        raise CarrierError("NOT_A_SOLUTION", "negative weight")
    if strict:
        S = equations_from(B)
        if not is_solution(S, w):
            raise CarrierError("NOT_A_SOLUTION", f"{w} violates a branch equation")
    return w


def surface_from_weight(B, w, strict=True):
    """Sheet complex for weight ``w``.

    With ``strict=False`` the weight is not checked against the branch
    equations and sheets that find no partner are left as free sides.
    """
    w = _check(B, w, strict)
    sheets = [(fi, s) for fi, f in enumerate(B.faces) for s in range(w[f.sector])]
    gluings, free = [], []
    for e in B.edges:
        inc = B.incidences(e.id)
        if e.kind == "boundary" or len(inc) == 1:
            for fi, pos, _ in inc:
                free += [((fi, s), pos) for s in range(w[B.faces[fi].sector])]
            continue
        if e.kind == "interior":
            (f1, p1, _), (f2, p2, _) = inc
            n1, n2 = w[B.faces[f1].sector], w[B.faces[f2].sector]
            gluings += [(((f1, s), p1), ((f2, s), p2)) for s in range(min(n1, n2))]
            free += [((f1, s), p1) for s in range(n2, n1)]
            free += [((f2, s), p2) for s in range(n1, n2)]
            continue
        (pf, pp, _), (af, ap, _), (bf, bp, _) = B.branch_roles(e.id)
        np_ = w[B.faces[pf].sector]
        stack = [((af, s), ap) for s in range(w[B.faces[af].sector])]
        stack += [((bf, s), bp) for s in range(w[B.faces[bf].sector])]
        order = list(range(np_))
        if e.rev:
            order.reverse()
        for n, s in enumerate(order):
            if n < len(stack):
                gluings.append((((pf, s), pp), stack[n]))
            else:
                free.append(((pf, s), pp))
        free += stack[np_:]

    # vertices: sheet corners identified along glued edges
    uf = _UF()

    def ends(side, fi, pos):
        sign = B.faces[fi].cycle[pos][1]
        L = len(B.faces[fi].cycle)
        a, b = (side, pos), (side, (pos + 1) % L)
        return (a, b) if sign > 0 else (b, a)

    for sh in sheets:
        for pos in range(len(B.faces[sh[0]].cycle)):
            uf.find((sh, pos))
    for (sa, pa), (sb, pb) in gluings:
        ta, ha = ends(sa, sa[0], pa)
        tb, hb = ends(sb, sb[0], pb)
        uf.union(ta, tb)
        uf.union(ha, hb)
    vclass = {c: uf.find(c) for c in list(uf.p)}

    # components and orientation
    cuf = _UF()
    for sh in sheets:
        cuf.find(sh)
    adj = {sh: [] for sh in sheets}
    for (sa, pa), (sb, pb) in gluings:
        cuf.union(sa, sb)
        sig = B.faces[sa[0]].cycle[pa][1] * B.faces[sb[0]].cycle[pb][1]
        adj[sa].append((sb, -sig))
        adj[sb].append((sa, -sig))
    groups = {}
    for sh in sheets:
        groups.setdefault(cuf.find(sh), []).append(sh)
    comp_of = {sh: r for r, members in groups.items() for sh in members}
    edge_count = {r: 0 for r in groups}
    for (sa, _), _ in gluings:
        edge_count[comp_of[sa]] += 1
    for sa, _ in free:
        edge_count[comp_of[sa]] += 1
    verts = {r: set() for r in groups}
    for (sh, _), v in vclass.items():
        verts[comp_of[sh]].add(v)
    components = []
    for r in sorted(groups, key=lambda r: min(groups[r])):
        members = groups[r]
        orient = {members[0]: 1}
        todo = [members[0]]
        ok = True
        while todo:
            a = todo.pop()
            for b, rel in adj[a]:
                want = orient[a] * rel
                if b not in orient:
                    orient[b] = want
                    todo.append(b)
                elif orient[b] != want:
                    ok = False
        components.append(Component(sorted(members), edge_count[r], len(verts[r]), ok))
    return CarriedSurface(B, w, sheets, gluings, free, vclass, components)


def chi_coefficients(B):
    """Per-sector coefficients of the linear Euler characteristic."""
    c = [0] * B.d
    for f in B.faces:
        c[f.sector] += 1
    for e in B.edges:
        if e.kind != "boundary":
            c[e.sector] -= 1
    for v in B.vertices:
        c[v.dom] += 1
    return c


def euler_characteristic(B, w):
    w = _check(B, w, True)
    return sum(a * b for a, b in zip(chi_coefficients(B), w))


def classify(B, w):
    """``[(component index, chi, orientable, verdict)]`` for the surface of ``w``."""
    surf = surface_from_weight(B, w)
    return [(n, c.chi, c.orientable, c.verdict) for n, c in enumerate(surf.components)]


def enumerate_carried(B, bound):
    """Every solution weight in the box with the summary of its surface."""
    S = equations_from(B)
    out = []
    for row in boxed_solutions(S, bound):
        w = tuple(int(x) for x in row)
        out.append((w, surface_from_weight(B, w).summary()))
    return out


def report_line(summary):
    w = ",".join(map(str, summary["w"]))
    chi = ",".join(map(str, summary["chi"]))
    return (f"w=({w}) components={summary['components']} chi=[{chi}] "
            f"verdicts=[{','.join(summary['verdicts'])}]")
