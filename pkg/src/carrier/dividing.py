"""Dividing sets on the faces of a triangulation, as non-crossing chord diagrams.

Each face carries endpoint slots on its three face-local edges.  Going once
around the boundary of a face visits edge 2 forward (vertex 0 to 1), edge 0
forward (1 to 2) and edge 1 backward (2 to 0); slot ``j`` on an edge is
counted from its lower face-local vertex.  A diagram is a non-crossing
perfect matching of the slots plus a count of closed components.

Arcs are classified as

* ``normal``: endpoints on two different edges ``i < j`` (such an arc cuts
  off the corner at the third vertex);
* ``bp`` (boundary-parallel): both endpoints on one edge, tagged with the
  end of that edge nearest to the arc.

A boundary-parallel arc occupying the two slots closest to an end of its
edge is *near* that vertex; an innermost one anywhere else is *far* and
can be removed by an edge isotopy (see :mod:`carrier.normalize`).
"""

import re
import warnings

from .errors import CarrierError
from .tri import corner_edges, edge_ends

# corner vertex cut off by a normal arc joining edges (i, j)
CORNER_OF = {(1, 2): 0, (0, 2): 1, (0, 1): 2}
NORMAL_TYPES = ((0, 1), (0, 2), (1, 2))


class NonconvexWarning(UserWarning):
    """A face has an empty dividing set (tb = 0)."""


class FaceDiagram:
    """A non-crossing chord diagram on one triangular face."""

    __slots__ = ("slots", "closed", "partner", "_offsets", "_far")

    def __init__(self, slots, pairs=(), closed=0):
        self.slots = tuple(int(k) for k in slots)
        if len(self.slots) != 3 or min(self.slots) < 0:
            raise CarrierError("PARSE_ERROR", f"bad slot counts {slots}")
        if closed < 0:
            raise CarrierError("PARSE_ERROR", "negative closed count")
        self.closed = int(closed)
        k0, k1, k2 = self.slots
        self._offsets = (k2, k2 + k0, 0)
        n = k0 + k1 + k2
        partner = [-1] * n
        for a, b in pairs:
            pa, pb = self.pos(*a), self.pos(*b)
            if pa == pb or partner[pa] != -1 or partner[pb] != -1:
                raise CarrierError("PARSE_ERROR", f"slot matched twice in pair {a},{b}")
            partner[pa], partner[pb] = pb, pa
        if -1 in partner:
            raise CarrierError("PARSE_ERROR", "unmatched slot")
        self.partner = tuple(partner)
        self._far = None
        if not _non_crossing(self.partner):
            raise CarrierError("CROSSING_ARCS", "matching is not planar")

    @classmethod
    def _from_partner(cls, slots, partner, closed=0):
        obj = cls.__new__(cls)
        obj.slots = tuple(slots)
        obj.closed = closed
        k0, k1, k2 = obj.slots
        obj._offsets = (k2, k2 + k0, 0)
        obj.partner = tuple(partner)
        obj._far = None
        return obj

    # -- slot <-> cyclic position -----------------------------------------

    def pos(self, edge, index):
        k = self.slots[edge]
        if not 0 <= index < k:
            raise CarrierError("PARSE_ERROR", f"slot e{edge}.{index} out of range")
        if edge == 1:
            return self._offsets[1] + (k - 1 - index)
        return self._offsets[edge] + index

    def slot(self, p):
        k0, k1, k2 = self.slots
        if p < k2:
            return 2, p
        if p < k2 + k0:
            return 0, p - k2
        return 1, k1 - 1 - (p - k2 - k0)

    # -- arcs -----------------------------------------------------------------

    def arcs(self):
        """Arcs as pairs of slots, ordered by the cyclic position of the first."""
        return [(self.slot(p), self.slot(q)) for p, q in enumerate(self.partner) if p < q]

    @property
    def arc_count(self):
        return len(self.partner) // 2

    def classify(self, a, b):
        """Classification of the arc joining slots ``a`` and ``b``."""
        (ea, ia), (eb, ib) = a, b
        if ea != eb:
            return ("normal", (min(ea, eb), max(ea, eb)))
        s, t = sorted((ia, ib))
        lo, hi = edge_ends(ea)
        k = self.slots[ea]
        end = lo if s <= k - 1 - t else hi
        return ("bp", ea, end)

    def is_near_vertex(self, a, b):
        (ea, ia), (eb, ib) = a, b
        if ea != eb:
            return False
        s, t = sorted((ia, ib))
        return t == s + 1 and (s == 0 or t == self.slots[ea] - 1)

    def is_far_bp(self, a, b):
        """Innermost boundary-parallel arc whose half disk avoids the vertices."""
        (ea, ia), (eb, ib) = a, b
        if ea != eb:
            return False
        s, t = sorted((ia, ib))
        return t == s + 1 and s >= 1 and t <= self.slots[ea] - 2

    def far_bp_arcs(self):
        """All far boundary-parallel arcs, in cyclic order (cached)."""
        if self._far is None:
            out = []
            part = self.partner
            for p in range(len(part) - 1):
                if part[p] == p + 1:
                    a, b = self.slot(p), self.slot(p + 1)
                    if a[0] == b[0] and self.is_far_bp(a, b):
                        out.append(tuple(sorted((a, b))))
            self._far = tuple(out)
        return self._far

    def counts(self):
        """Arc counts by class: ``(n01, n02, n12, bp, closed)``.

        ``bp`` maps ``(edge, end_vertex)`` to a count.
        """
        normal = {ty: 0 for ty in NORMAL_TYPES}
        bp = {}
        for a, b in self.arcs():
            c = self.classify(a, b)
            if c[0] == "normal":
                normal[c[1]] += 1
            else:
                bp[(c[1], c[2])] = bp.get((c[1], c[2]), 0) + 1
        return normal[(0, 1)], normal[(0, 2)], normal[(1, 2)], bp, self.closed

    @classmethod
    def from_counts(cls, n01=0, n02=0, n12=0, bp=None, closed=0):
        """The canonical diagram with the given arc counts.

        Along every edge, from its low end: boundary-parallel arcs at the low
        end (side by side), corner arcs at the low vertex (innermost first),
        corner arcs at the high vertex, boundary-parallel arcs at the high end.
        """
        bp = dict(bp or {})
        corner = {CORNER_OF[(0, 1)]: n01, CORNER_OF[(0, 2)]: n02, CORNER_OF[(1, 2)]: n12}
        for (e, v), k in bp.items():
            if v not in edge_ends(e) or k < 0:
                raise CarrierError("PARSE_ERROR", f"bad boundary-parallel key {e}:{v}:{k}")
        if min(corner.values()) < 0:
            raise CarrierError("PARSE_ERROR", "negative arc count")
        slots = []
        for e in range(3):
            lo, hi = edge_ends(e)
            slots.append(2 * bp.get((e, lo), 0) + corner[lo] + corner[hi]
                         + 2 * bp.get((e, hi), 0))
        pairs = []

        def near(e, v, r):
            lo, hi = edge_ends(e)
            if v == lo:
                return 2 * bp.get((e, lo), 0) + r
            return slots[e] - 1 - 2 * bp.get((e, hi), 0) - r

        for v in range(3):
            a, b = corner_edges(v)
            for r in range(corner[v]):
                pairs.append(((a, near(a, v, r)), (b, near(b, v, r))))
        for (e, v), k in bp.items():
            lo, _ = edge_ends(e)
            for r in range(k):
                if v == lo:
                    pairs.append(((e, 2 * r), (e, 2 * r + 1)))
                else:
                    pairs.append(((e, slots[e] - 2 - 2 * r), (e, slots[e] - 1 - 2 * r)))
        return cls(slots, pairs, closed)

    def determined_by_counts(self):
        n01, n02, n12, bp, closed = self.counts()
        return FaceDiagram.from_counts(n01, n02, n12, bp, closed) == self

    def __eq__(self, other):
        return (isinstance(other, FaceDiagram) and self.slots == other.slots
                and self.partner == other.partner and self.closed == other.closed)

    def __hash__(self):
        return hash((self.slots, self.partner, self.closed))

    def __repr__(self):
        return f"FaceDiagram(slots={self.slots}, arcs={self.arc_count}, closed={self.closed})"

    @property
    def is_empty(self):
        return not self.partner and not self.closed


def _non_crossing(partner):
    stack = []
    for p, q in enumerate(partner):
        if q > p:
            stack.append(p)
        elif not stack or stack.pop() != q:
            return False
    return True


EMPTY = FaceDiagram((0, 0, 0))


class DividingSet:
    """One :class:`FaceDiagram` per global face of a triangulation.

    Endpoint counts must agree along every edge of the triangulation.  With
    ``require_negative_tb`` every face must also put at least two endpoints
    on each of its edges.
    """

    def __init__(self, tri, diagrams, require_negative_tb=False):
        self.tri = tri
        if isinstance(diagrams, dict):
            diagrams = [diagrams.get(fid, EMPTY) for fid in range(len(tri.faces))]
        self.diagrams = tuple(diagrams)
        if len(self.diagrams) != len(tri.faces):
            raise CarrierError("PARSE_ERROR", "one diagram per face required")
        self.edge_counts = self._check_edges(require_negative_tb)

    def _check_edges(self, require_negative_tb):
        counts = {}
        for fid, d in enumerate(self.diagrams):
            for i in range(3):
                e, _ = self.tri.face_edge(fid, i)
                k = d.slots[i]
                if require_negative_tb and k < 2:
                    t, f = self.tri.faces[fid]
                    raise CarrierError("NONNEGATIVE_TB",
                                       f"face ({t},{f}) has {k} endpoints on edge {e}")
                if counts.setdefault(e, k) != k:
                    t, f = self.tri.faces[fid]
                    raise CarrierError("EDGE_MISMATCH",
                                       f"edge {e}: {counts[e]} vs {k} endpoints at face ({t},{f})")
        return counts

    def replace(self, updates):
        """Copy with some face diagrams swapped; only touched edges are rechecked."""
        diagrams = list(self.diagrams)
        for fid, d in updates.items():
            diagrams[fid] = d
        out = DividingSet.__new__(DividingSet)
        out.tri = self.tri
        out.diagrams = tuple(diagrams)
        counts = dict(self.edge_counts)
        touched = {self.tri.face_edge(fid, i)[0] for fid in updates for i in range(3)}
        for e in touched:
            ks = {diagrams[fid].slots[i] for fid, i, _ in self.tri.edge_occurrences(e)}
            if len(ks) != 1:
                raise CarrierError("EDGE_MISMATCH", f"edge {e}: endpoint counts {sorted(ks)}")
            counts[e] = ks.pop()
        out.edge_counts = counts
        return out

    def endpoint_total(self):
        return sum(sum(d.slots) for d in self.diagrams)

    def __eq__(self, other):
        return (isinstance(other, DividingSet) and self.tri == other.tri
                and self.diagrams == other.diagrams)

    def __hash__(self):
        return hash(self.diagrams)

    def __repr__(self):
        arcs = sum(d.arc_count for d in self.diagrams)
        return f"DividingSet(faces={len(self.diagrams)}, arcs={arcs})"

    # -- IO -----------------------------------------------------------------

    def serialize(self):
        lines = []
        for fid, d in enumerate(self.diagrams):
            if d.is_empty:
                continue
            t, f = self.tri.faces[fid]
            lines.append(f"face {t} {f} " + _stanza(d))
        return "\n".join(lines) + ("\n" if lines else "")


def _stanza(d):
    if d.determined_by_counts():
        n01, n02, n12, bp, closed = d.counts()
        parts = [f"counts n01={n01} n02={n02} n12={n12}"]
        parts += [f"bp={e}:{v}:{k}" for (e, v), k in sorted(bp.items()) if k]
        parts.append(f"closed={closed}")
        return " ".join(parts)
    k0, k1, k2 = d.slots
    pairs = " ".join(f"(e{a[0]}.{a[1]},e{b[0]}.{b[1]})" for a, b in d.arcs())
    body = f"explicit slots e0={k0} e1={k1} e2={k2} match"
    if pairs:
        body += " " + pairs
    return body + f" closed={d.closed}"


_KV = re.compile(r"^(n01|n02|n12|closed|e0|e1|e2)=(\d+)$")
_BP = re.compile(r"^bp=(\d):(\d):(\d+)$")
_PAIR = re.compile(r"^\(e(\d)\.(\d+),e(\d)\.(\d+)\)$")


def _parse_stanza(tok, lineno):
    kind = tok[0]
    if kind == "counts":
        vals = {"n01": 0, "n02": 0, "n12": 0, "closed": 0}
        bp = {}
        for item in tok[1:]:
            m = _KV.match(item)
            if m and m.group(1) in vals:
                vals[m.group(1)] = int(m.group(2))
                continue
            m = _BP.match(item)
            if m:
                e, v, k = (int(g) for g in m.groups())
                if e > 2 or v not in edge_ends(e):
                    raise CarrierError("PARSE_ERROR", f"line {lineno}: bad bp key {item}")
                bp[(e, v)] = bp.get((e, v), 0) + k
                continue
            raise CarrierError("PARSE_ERROR", f"line {lineno}: bad token {item!r}")
        return FaceDiagram.from_counts(vals["n01"], vals["n02"], vals["n12"], bp, vals["closed"])
    if kind == "explicit":
        if len(tok) < 5 or tok[1] != "slots":
            raise CarrierError("PARSE_ERROR", f"line {lineno}: malformed explicit stanza")
        slots = {}
        i = 2
        while i < len(tok) and tok[i] != "match":
            m = _KV.match(tok[i])
            if not m or not m.group(1).startswith("e"):
                raise CarrierError("PARSE_ERROR", f"line {lineno}: bad slot token {tok[i]!r}")
            slots[int(m.group(1)[1])] = int(m.group(2))
            i += 1
        if sorted(slots) != [0, 1, 2] or i == len(tok):
            raise CarrierError("PARSE_ERROR", f"line {lineno}: need e0=, e1=, e2= and match")
        pairs, closed = [], 0
        for item in tok[i + 1:]:
            m = _PAIR.match(item)
            if m:
                ea, ia, eb, ib = (int(g) for g in m.groups())
                if ea > 2 or eb > 2:
                    raise CarrierError("PARSE_ERROR", f"line {lineno}: bad slot {item}")
                pairs.append(((ea, ia), (eb, ib)))
                continue
            m = _KV.match(item)
            if m and m.group(1) == "closed":
                closed = int(m.group(2))
                continue
            raise CarrierError("PARSE_ERROR", f"line {lineno}: bad token {item!r}")
        return FaceDiagram((slots[0], slots[1], slots[2]), pairs, closed)
    raise CarrierError("PARSE_ERROR", f"line {lineno}: expected 'counts' or 'explicit'")


def load_dividing(tri, text, require_negative_tb=False):
    """Parse ``.div`` text against triangulation ``tri``."""
    diagrams = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "face" or len(tok) < 4:
            raise CarrierError("PARSE_ERROR", f"line {lineno}: expected 'face <t> <f> ...'")
        try:
            t, f = int(tok[1]), int(tok[2])
        except ValueError:
            raise CarrierError("PARSE_ERROR", f"line {lineno}: bad face reference")
        if (t, f) not in tri.face_of:
            raise CarrierError("DANGLING_REFERENCE", f"line {lineno}: no face ({t},{f})")
        fid = tri.face_of[(t, f)]
        if tri.faces[fid] != (t, f):
            rt, rf = tri.faces[fid]
            raise CarrierError("PARSE_ERROR",
                               f"line {lineno}: face ({t},{f}) must be given as ({rt},{rf})")
        if fid in diagrams:
            raise CarrierError("PARSE_ERROR", f"line {lineno}: face ({t},{f}) listed twice")
        diagrams[fid] = _parse_stanza(tok[3:], lineno)
    return DividingSet(tri, diagrams, require_negative_tb=require_negative_tb)


# -- invariants --------------------------------------------------------------

def detect_closed(D):
    """Faces with closed dividing curves, as ``[((t, f), count), ...]``."""
    return [(D.tri.faces[fid], d.closed) for fid, d in enumerate(D.diagrams) if d.closed]


def tb_face(D, face):
    """Relative Thurston-Bennequin number of a face boundary.

    ``face`` is a global face id or a ``(t, f)`` pair.  Equals minus the
    number of arcs, i.e. minus half the endpoint count.
    """
    fid = D.tri.face_of[face] if isinstance(face, tuple) else face
    d = D.diagrams[fid]
    if d.closed:
        raise CarrierError("CLOSED_COMPONENT", f"face {D.tri.faces[fid]} has closed curves")
    if not d.partner:
        warnings.warn(f"NONCONVEX_WARNING: face {D.tri.faces[fid]} has no dividing arcs",
                      NonconvexWarning, stacklevel=2)
        return 0
    return -(len(d.partner) // 2)


def tb_total(D):
    """Sum of :func:`tb_face` over all faces."""
    total = 0
    for fid, d in enumerate(D.diagrams):
        if d.closed:
            raise CarrierError("CLOSED_COMPONENT", f"face {D.tri.faces[fid]} has closed curves")
        total -= len(d.partner) // 2
    return total


def classify_arcs(D, face):
    """Arc counts ``(n01, n02, n12, bp, closed)`` on one face."""
    fid = D.tri.face_of[face] if isinstance(face, tuple) else face
    return D.diagrams[fid].counts()
