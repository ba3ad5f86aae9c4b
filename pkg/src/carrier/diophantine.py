"""Branch equations and the minimal nonnegative solutions of their systems.

Every equation has the shape ``x_i - x_j - x_k = 0``.  The minimal nonzero
solutions are found by a completion search; :func:`brute_force_basis`
enumerates a box and serves as the oracle.
"""

import re
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .errors import CarrierError

INTERNAL_LIMIT = 2 ** 31
BOX_LIMIT = 10 ** 7


@dataclass(frozen=True)
class BranchSystem:
    """Equations ``x_i = x_j + x_k`` over ``d`` unknowns (0-based indices)."""

    d: int
    equations: tuple = ()
    provenance: tuple = field(default=(), compare=False)

    def __post_init__(self):
        eqs = tuple(tuple(int(v) for v in e) for e in self.equations)
        object.__setattr__(self, "equations", eqs)
        if self.d < 0:
            raise CarrierError("PARSE_ERROR", "negative dimension")
        for e in eqs:
            if len(e) != 3 or any(not 0 <= v < self.d for v in e):
                raise CarrierError("PARSE_ERROR", f"equation {e} out of range for d={self.d}")

    def matrix(self):
        """Integer coefficient matrix, one row per equation."""
        A = np.zeros((len(self.equations), self.d), dtype=np.int64)
        for r, (i, j, k) in enumerate(self.equations):
            A[r, i] += 1
            A[r, j] -= 1
            A[r, k] -= 1
        return A

    def serialize(self):
        lines = [f"dim {self.d}"] + [f"eq {i} {j} {k}" for i, j, k in self.equations]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HilbertBasis:
    system: BranchSystem
    members: tuple

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def restricted(self, bound):
        """Members with every entry at most ``bound``."""
        return tuple(u for u in self.members if max(u, default=0) <= bound)

    def lines(self):
        return [" ".join(map(str, u)) for u in self.members]


_DIM = re.compile(r"dim\s+(\d+)$")
_EQ = re.compile(r"eq\s+(\d+)\s+(\d+)\s+(\d+)$")


def load_equations(text):
    """Parse a ``.eqs`` file."""
    d, eqs = None, []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _DIM.match(line)
        if m and d is None:
            d = int(m.group(1))
            continue
        m = _EQ.match(line)
        if m and d is not None:
            eqs.append(tuple(int(g) for g in m.groups()))
            continue
        raise CarrierError("PARSE_ERROR", f"line {n}: {raw!r}")
    if d is None:
        raise CarrierError("PARSE_ERROR", "missing dim header")
    return BranchSystem(d, eqs)


def equations_from(B):
    """One equation per branch curve of a closed complex.

    Branch edges that share a vertex and carry the same parent and children
    are taken to lie on the same smooth curve.
    """
    if not B.is_closed():
        raise CarrierError("NOT_CLOSED", "complex has boundary train-track edges")
    branch = [e for e in B.edges if e.kind == "branch"]
    parent = list(range(len(branch)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def key(e):
        return (e.sector, tuple(sorted(e.children)))

    seen = {}
    for n, e in enumerate(branch):
        for v in {e.tail, e.head}:
            other = seen.setdefault((v, key(e)), n)
            parent[find(n)] = find(other)
    curves = {}
    for n, e in enumerate(branch):
        curves.setdefault(find(n), []).append(e)
    eqs, prov = [], []
    for root in sorted(curves, key=lambda r: min(branch.index(e) for e in curves[r])):
        es = curves[root]
        j, k = es[0].children
        eqs.append((es[0].sector, j, k))
        prov.append(tuple(e.id for e in es))
    return BranchSystem(B.d, eqs, tuple(prov))


def is_solution(S, w):
    if len(w) != S.d:
        raise CarrierError("BAD_WEIGHT", f"expected {S.d} entries, got {len(w)}")
    if any(x < 0 for x in w):
        return False
    return all(w[i] == w[j] + w[k] for i, j, k in S.equations)


def is_minimal(S, w):
    """True for a nonzero solution with no nonzero solution strictly below it."""
    if not any(w) or not is_solution(S, w):
        return False
    for y in product(*(range(x + 1) for x in w)):
        if any(y) and tuple(y) != tuple(w) and is_solution(S, y):
            return False
    return True


def hilbert_basis(S):
    """Minimal nonzero solutions by completion.

    Candidates grow one unit at a time, only in directions whose defect
    points against the current defect; candidates dominating a found
    solution are dropped.  Solutions found at level ``n`` (entry sum ``n``)
    are minimal because anything below them has a smaller sum.
    """
    d = S.d
    A = S.matrix()
    rows = [tuple(int(v) for v in r) for r in A]
    cols = [tuple(r[j] for r in rows) for j in range(d)]
    sols = []
    frontier = {tuple(int(j == i) for j in range(d)) for i in range(d)}

    def dominates(x):
        return any(all(a >= b for a, b in zip(x, u)) for u in sols)

    while frontier:
        nxt = set()
        level = sorted(frontier)
        defects = {x: tuple(sum(a * b for a, b in zip(r, x)) for r in rows) for x in level}
        found = [x for x in level if not any(defects[x])]
        sols.extend(found)
        for x in level:
            defect = defects[x]
            if not any(defect):
                continue
            for j in range(d):
                if sum(a * b for a, b in zip(defect, cols[j])) < 0:
                    y = x[:j] + (x[j] + 1,) + x[j + 1:]
                    if y[j] > INTERNAL_LIMIT:
                        raise CarrierError("INTERNAL_BOUND", f"entry exceeds 2^31 at {y}")
                    if y not in nxt and not dominates(y):
                        nxt.add(y)
        frontier = nxt
    return HilbertBasis(S, tuple(sorted(sols)))


def _check_box(d, bound):
    if bound < 0:
        raise CarrierError("BAD_BOUND", "bound must be nonnegative")
    if (bound + 1) ** d > BOX_LIMIT:
        raise CarrierError("BOX_TOO_LARGE", f"({bound}+1)^{d} points exceed {BOX_LIMIT}")


def boxed_solutions(S, bound):
    """All solutions with entries in ``[0, bound]`` as an ``(n, d)`` array, sorted."""
    _check_box(S.d, bound)
    if S.d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((bound + 1,) * S.d, dtype=np.int16).reshape(S.d, -1).T
    A = S.matrix()
    if len(A):
        grid = grid[~np.any(grid @ A.T.astype(np.int16), axis=1)]
    return grid.astype(np.int64)


def brute_force_basis(S, bound):
    """Minimal nonzero solutions inside the box ``[0, bound]^d``, by enumeration."""
    X = boxed_solutions(S, bound)
    X = X[np.argsort(X.sum(axis=1), kind="stable")]
    X = X[X.sum(axis=1) > 0]
    alive = np.ones(len(X), dtype=bool)
    kept = []
    for n in range(len(X)):
        if not alive[n]:
            continue
        u = X[n]
        kept.append(tuple(int(v) for v in u))
        alive &= ~np.all(X >= u, axis=1)
    return HilbertBasis(S, tuple(sorted(kept)))
