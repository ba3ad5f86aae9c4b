"""Edge-isotopy normalization of dividing sets and prism extraction.

A far boundary-parallel arc on a face marks a bypass along the edge that
carries its endpoints.  Pushing the edge across the bypass deletes the arc
and the two endpoints it had on that edge; every other face along the same
edge loses the matching two endpoints, and the two arcs that ended there are
joined into one.  Each move removes at least one arc from the acted face, so
the total Thurston-Bennequin number goes up by at least one.
"""

from dataclasses import dataclass, field

from .dividing import CORNER_OF, DividingSet, FaceDiagram, tb_total
from .errors import CarrierError, OvertwistedHint, PropertyFailure
from .tri import face_vertices

DEFAULT_C = 12

# rectangle axes: the pair of opposite tetrahedron edges a quad separates
AXES = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


@dataclass(frozen=True)
class MoveRecord:
    face: tuple
    arc: tuple
    edge: int
    rewrites: tuple
    tb_before: int
    tb_after: int

    def to_line(self):
        (t, f), (a, b) = self.face, self.arc
        rw = ",".join(f"{rt}:{rf}:{kind}" for (rt, rf), kind in self.rewrites) or "-"
        return (f"move face={t}:{f} edge={self.edge} arc=e{a[0]}.{a[1]},e{b[0]}.{b[1]} "
                f"rewrites={rw} tb={self.tb_before}->{self.tb_after}")


def _check_tight(D):
    bad = [D.tri.faces[fid] for fid, d in enumerate(D.diagrams) if d.closed]
    if bad:
        raise OvertwistedHint(f"closed dividing curves on faces {bad}")


def find_bypass_candidates(D):
    """Far boundary-parallel arcs, ordered by (face id, edge, slot)."""
    _check_tight(D)
    out = []
    for fid, d in enumerate(D.diagrams):
        # a disk whose dividing set is connected has no bypass
        if d.arc_count < 2:
            continue
        out.extend((fid, arc) for arc in d.far_bp_arcs())
    out.sort(key=lambda c: (c[0], c[1][0][0], c[1][0][1]))
    return out


def join_rule(match, u, v, created):
    """Default attachment: the arcs ending at adjacent slots u, v are joined.

    Returns the rewrite kind.  Raises when joining closes up an arc that was
    itself produced by a join during this move.
    """
    x, y = match.pop(u), match.pop(v)
    if x == v:
        if frozenset((u, v)) in created:
            raise CarrierError("ATTACHMENT_CREATES_CLOSED",
                               "bypass attachment closes a dividing curve")
        return "delete"
    match[x], match[y] = y, x
    created.discard(frozenset((u, x)))
    created.discard(frozenset((v, y)))
    created.add(frozenset((x, y)))
    return "join"


def _rebuild(d, match, removed):
    """New diagram from a slot matching after deleting ``removed`` slots."""
    renum = {}
    slots = []
    for e in range(3):
        keep = [i for i in range(d.slots[e]) if (e, i) not in removed]
        for new, old in enumerate(keep):
            renum[(e, old)] = (e, new)
        slots.append(len(keep))
    pairs = [(renum[a], renum[b]) for a, b in match.items() if a < b]
    return FaceDiagram(slots, pairs, d.closed)


def apply_edge_isotopy(D, face, arc, rule=join_rule):
    """Push the edge carrying ``arc`` across its bypass.

    ``face`` is a face id or ``(t, f)``; ``arc`` a pair of slots
    ``((e, s), (e, s + 1))``.  Returns the new :class:`DividingSet` and a
    :class:`MoveRecord`.
    """
    tri = D.tri
    fid = tri.face_of[face] if isinstance(face, tuple) else face
    d = D.diagrams[fid]
    (ea, sa), (eb, sb) = sorted(arc)
    if ea != eb or sb != sa + 1:
        raise CarrierError("NOT_A_CANDIDATE", "arc must join two adjacent slots of one edge")
    if d.arc_count < 2 or d.partner[d.pos(ea, sa)] != d.pos(eb, sb) or not d.is_far_bp(
            (ea, sa), (eb, sb)):
        raise CarrierError("NOT_A_CANDIDATE", f"{arc} is not a far boundary-parallel arc")
    before = tb_total(D)
    g, sign = tri.face_edge(fid, ea)
    k = d.slots[ea]
    gpos = sorted(j if sign > 0 else k - 1 - j for j in (sa, sb))

    occurrences = {}
    for ofid, oe, osign in tri.edge_occurrences(g):
        lo = gpos[0] if osign > 0 else k - 1 - gpos[1]
        occurrences.setdefault(ofid, []).append((oe, lo))

    updates = {}
    rewrites = []
    for ofid in sorted(occurrences):
        od = D.diagrams[ofid]
        match = {}
        for a, b in od.arcs():
            match[a], match[b] = b, a
        created = set()
        removed = set()
        # the acted occurrence goes first on the acted face
        occ = sorted(occurrences[ofid], key=lambda o: (ofid != fid or o != (ea, sa), o))
        for oe, lo in occ:
            u, v = (oe, lo), (oe, lo + 1)
            kind = rule(match, u, v, created)
            removed.update((u, v))
            if ofid == fid and (oe, lo) == (ea, sa):
                continue
            rewrites.append((tri.faces[ofid], kind))
        updates[ofid] = _rebuild(od, match, removed)
    out = D.replace(updates)
    after = tb_total(out)
    if after < before + 1:
        raise PropertyFailure("MONOTONICITY", f"tb {before} -> {after}")
    rec = MoveRecord(tri.faces[fid], ((ea, sa), (eb, sb)), g, tuple(rewrites), before, after)
    return out, rec


def normalize(D, rule=join_rule, max_moves=None):
    """Apply edge isotopies at the first candidate until none remain."""
    _check_tight(D)
    moves = []
    budget = D.endpoint_total() if max_moves is None else max_moves
    while True:
        first = next(((fid, min(d.far_bp_arcs())) for fid, d in enumerate(D.diagrams)
                      if d.arc_count >= 2 and d.far_bp_arcs()), None)
        if first is None:
            return D, moves
        if len(moves) >= budget:
            raise PropertyFailure("NO_TERMINATION", f"more than {budget} moves")
        fid, arc = first
        D, rec = apply_edge_isotopy(D, fid, arc, rule)
        moves.append(rec)


def normal_form_violations(D):
    """Faces breaking the maximal-triangulation normal form.

    The normal form allows at most six boundary-parallel arcs per face, all
    of them next to a vertex.
    """
    bad = []
    for fid, d in enumerate(D.diagrams):
        bps = [(a, b) for a, b in d.arcs() if a[0] == b[0]]
        far = [p for p in bps if not d.is_near_vertex(*p)]
        if len(bps) > 6 or far or d.closed:
            bad.append((D.tri.faces[fid], len(bps), len(far)))
    return bad


# -- fibered prisms ------------------------------------------------------------

def quad_corners(axis):
    """``{face x: corner vertex}`` of the rectangle for an axis id."""
    (a, b), (c, d) = AXES[axis]
    return {a: b, b: a, c: d, d: c}


def corner_counts(D, t, x):
    """Normal-arc counts on face ``x`` of tetrahedron ``t`` keyed by corner vertex.

    Returns ``({tet vertex: count}, boundary-parallel count)``.
    """
    tri = D.tri
    fid = tri.face_of[(t, x)]
    n01, n02, n12, bp, _ = D.diagrams[fid].counts()
    view = tri.face_view(t, x)
    fv = face_vertices(x)
    out = {v: 0 for v in fv}
    for ty, n in zip(((0, 1), (0, 2), (1, 2)), (n01, n02, n12)):
        out[fv[view[CORNER_OF[ty]]]] += n
    return out, sum(bp.values())


@dataclass
class PrismCoordinates:
    """Per-tetrahedron prism counts and per-face leftovers.

    ``tri[t][v]`` counts triangle prisms at vertex ``v``; ``quad[t]`` is
    ``(axis, count)`` with ``axis`` None when no rectangle is used.
    ``corners[(t, x)]`` and ``bp[(t, x)]`` record the input arcs on face
    ``x`` of ``t``; ``leftover[(t, x)]`` the unpacked normal arcs by corner.
    """

    tet_count: int
    tri: dict = field(default_factory=dict)
    quad: dict = field(default_factory=dict)
    corners: dict = field(default_factory=dict)
    bp: dict = field(default_factory=dict)
    leftover: dict = field(default_factory=dict)
    C: int = DEFAULT_C

    def packed(self, t, x):
        """Normal arcs on face ``x`` of ``t`` consumed by prisms, by corner."""
        out = {v: 0 for v in face_vertices(x)}
        for v in out:
            out[v] += self.tri[t][v]
        axis, q = self.quad[t]
        if axis is not None:
            out[quad_corners(axis)[x]] += q
        return out

    def leftover_total(self, t, x):
        return sum(self.leftover[(t, x)].values()) + self.bp[(t, x)]

    def positions_used(self, t):
        return sum(1 for a in self.tri[t] if a) + (1 if self.quad[t][1] else 0)

    def prism_count(self):
        return sum(self.positions_used(t) for t in range(self.tet_count))

    def report_lines(self):
        lines = []
        for t in range(self.tet_count):
            a = " ".join(str(n) for n in self.tri[t])
            axis, q = self.quad[t]
            left = ",".join(f"{x}:{self.leftover_total(t, x)}" for x in range(4))
            lines.append(f"tet {t} tri {a} quad {'-' if axis is None else axis} {q} "
                         f"leftover {left}")
        return lines


def _pack(c):
    """Best packing of one tetrahedron given ``c[x][v]`` corner counts."""
    best = None
    for axis in range(3):
        qc = quad_corners(axis)
        qmax = min(c[x][qc[x]] for x in range(4))
        for q in range(qmax, -1, -1):
            rem = {x: dict(c[x]) for x in range(4)}
            for x in range(4):
                rem[x][qc[x]] -= q
            tris = tuple(min(rem[x][v] for x in range(4) if x != v) for v in range(4))
            score = 3 * sum(tris) + 4 * q
            if best is None or score > best[0]:
                best = (score, tris, axis if q else None, q)
    return best[1], best[2], best[3]


def extract_prisms(D, C=DEFAULT_C):
    """Pack the normal arcs of every tetrahedron into fibered prisms.

    Up to four triangle prisms and one rectangle family per tetrahedron are
    chosen to pack as many arcs as possible.  Raises ``LEFTOVER_EXCEEDS_C``
    when some face keeps more than ``C`` unpacked arcs (``C=None`` skips the
    check).
    """
    _check_tight(D)
    tri = D.tri
    P = PrismCoordinates(tri.tet_count, C=C)
    for t in range(tri.tet_count):
        c = {}
        for x in range(4):
            c[x], P.bp[(t, x)] = corner_counts(D, t, x)
            P.corners[(t, x)] = dict(c[x])
        tris, axis, q = _pack(c)
        P.tri[t] = tris
        P.quad[t] = (axis, q)
        for x in range(4):
            used = P.packed(t, x)
            P.leftover[(t, x)] = {v: c[x][v] - used[v] for v in c[x]}
    if C is not None:
        for (t, x) in sorted(P.leftover):
            n = P.leftover_total(t, x)
            if n > C:
                raise PropertyFailure("LEFTOVER_EXCEEDS_C",
                                      f"face {x} of tetrahedron {t} keeps {n} > {C} arcs")
    return P
