"""Weight arithmetic for Lutz modifications along carried tori.

A plan names a base structure and a list of twist indices, one per derived
torus generator; its realized weight is the base offset plus the weighted
sum of generators.  Klein-bottle generators are doubled, and their halves
become extra base offsets.
"""

import re
from dataclasses import dataclass
from itertools import combinations

from .carried import classify
from .diophantine import boxed_solutions, is_solution
from .errors import CarrierError, PropertyFailure

BASE = "xi0"


@dataclass(frozen=True)
class LutzPlan:
    base: str = BASE
    twists: tuple = ()  # ((generator index, n), ...), sorted, merged

    def __post_init__(self):
        merged = {}
        for i, n in self.twists:
            if n < 0:
                raise CarrierError("BAD_INDEX", f"negative twist index {n}")
            merged[i] = merged.get(i, 0) + n
        object.__setattr__(self, "twists",
                           tuple(sorted((i, n) for i, n in merged.items() if n)))

    def coefficients(self, k):
        out = [0] * k
        for i, n in self.twists:
            if not 0 <= i < k:
                raise CarrierError("BAD_INDEX", f"generator {i} out of range")
            out[i] = n
        return out

    def serialize(self):
        return "\n".join([f"base {self.base}"] + [f"twist {i} {n}" for i, n in self.twists]) + "\n"


_BASE = re.compile(r"base\s+(\S+)$")
_TWIST = re.compile(r"twist\s+(\d+)\s+(\d+)$")


def load_plan(text):
    base, twists = None, []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _BASE.match(line)
        if m and base is None:
            base = m.group(1)
            continue
        m = _TWIST.match(line)
        if m and base is not None:
            twists.append((int(m.group(1)), int(m.group(2))))
            continue
        raise CarrierError("PARSE_ERROR", f"line {n}: {raw!r}")
    if base is None:
        raise CarrierError("PARSE_ERROR", "missing base line")
    return LutzPlan(base, tuple(twists))


@dataclass(frozen=True)
class GeneratorSet:
    basis: tuple
    kinds: tuple
    generators: tuple  # derived torus weights
    offsets: tuple  # ((base id, weight), ...)

    def offset(self, base):
        for b, w in self.offsets:
            if b == base:
                return w
        raise CarrierError("BAD_INDEX", f"unknown base {base}")

    def without(self, i):
        """Copy with generator ``i`` removed (adversarial check)."""
        gens = self.generators[:i] + self.generators[i + 1:]
        kinds = self.kinds[:i] + self.kinds[i + 1:]
        return GeneratorSet(self.basis, kinds, gens, self.offsets)


def _search(vectors, w, memo=None):
    """Nonnegative coefficients with ``sum c_i v_i == w``, or None.

    Depth-first, each coefficient tried from its largest feasible value
    down, so the first hit is the lexicographically greatest.
    """
    memo = set() if memo is None else memo
    k = len(vectors)

    def go(i, rest):
        if not any(rest):
            return [0] * (k - i)
        if i == k or (i, rest) in memo:
            return None
        u = vectors[i]
        top = min((r // x for r, x in zip(rest, u) if x), default=0)
        for n in range(top, -1, -1):
            sub = go(i + 1, tuple(r - n * x for r, x in zip(rest, u)))
            if sub is not None:
                return [n] + sub
        memo.add((i, rest))
        return None

    return go(0, tuple(w))


def decompose(S, basis, w):
    """Coefficients ``n`` with ``sum n_i u_i == w`` over the basis members."""
    w = tuple(int(x) for x in w)
    if any(x < 0 for x in w) or not is_solution(S, w):
        raise CarrierError("NOT_IN_CONE", f"{w} is not a nonnegative solution")
    members = tuple(basis)
    if any(not any(u) for u in members):
        raise CarrierError("BAD_INDEX", "zero vector in basis")
    c = _search(members, w)
    if c is None:
        raise PropertyFailure("INCOMPLETE_BASIS", f"{w} is not a combination of the basis")
    return tuple(c)


def combine(vectors, coeffs, start=None):
    d = len(vectors[0]) if vectors else len(start or ())
    out = list(start) if start is not None else [0] * d
    for c, u in zip(coeffs, vectors):
        for j in range(d):
            out[j] += c * u[j]
    return tuple(out)


def apply_lutz(plan, i, n, gen=None):
    """Plan with ``n`` more twists along generator ``i``."""
    if n < 1:
        raise CarrierError("BAD_INDEX", f"twist index must be positive, got {n}")
    if i < 0 or (gen is not None and i >= len(gen.generators)):
        raise CarrierError("BAD_INDEX", f"generator {i} out of range")
    return LutzPlan(plan.base, plan.twists + ((i, n),))


def realize(plan, gen):
    """Weight of a plan: base offset plus twisted generators."""
    coeffs = plan.coefficients(len(gen.generators))
    return combine(gen.generators, coeffs, gen.offset(plan.base))


def derive_generators(B, basis):
    """Torus generators and base offsets from a basis of the branch equations.

    Klein bottles are replaced by their doubles; each subset of Klein
    bottles gives one base offset (the sum of its members), labelled by the
    basis indices involved.
    """
    members = tuple(basis)
    kinds, gens, klein = [], [], []
    for i, u in enumerate(members):
        verdicts = {c[3] for c in classify(B, u)}
        if verdicts == {"Torus"}:
            kinds.append("Torus")
            gens.append(u)
        elif verdicts <= {"Torus", "KleinBottle"}:
            kinds.append("KleinBottle")
            gens.append(tuple(2 * x for x in u))
            klein.append(i)
        else:
            raise CarrierError("OTHER_VERDICT", f"basis element {u} carries {sorted(verdicts)}")
    d = len(members[0]) if members else B.d
    offsets = []
    for r in range(len(klein) + 1):
        for sub in combinations(klein, r):
            base = BASE if not sub else f"{BASE}+pi[{','.join(map(str, sub))}]"
            offsets.append((base, combine([members[i] for i in sub], [1] * len(sub), [0] * d)))
    return GeneratorSet(members, tuple(kinds), tuple(gens), tuple(offsets))


@dataclass
class CoverReport:
    checked: int
    uncovered: list

    @property
    def ok(self):
        return not self.uncovered

    def lines(self):
        out = [f"checked={self.checked} uncovered={len(self.uncovered)}"]
        out += ["uncovered " + " ".join(map(str, w)) for w in self.uncovered]
        return out


def cover_plan(gen, w, memo=None):
    """A plan realizing ``w`` from the generator set, or None."""
    for base, off in gen.offsets:
        rest = tuple(a - b for a, b in zip(w, off))
        if min(rest, default=0) < 0:
            continue
        c = _search(gen.generators, rest, None if memo is None else memo.setdefault(base, set()))
        if c is not None:
            return LutzPlan(base, tuple(enumerate(c)))
    return None


def cover_check(S, gen, bound):
    """Every boxed solution must be an offset plus a combination of generators."""
    sols = boxed_solutions(S, bound)
    uncovered = []
    memo = {}
    for row in sols:
        w = tuple(int(x) for x in row)
        if cover_plan(gen, w, memo) is None:
            uncovered.append(w)
    return CoverReport(len(sols), uncovered)
