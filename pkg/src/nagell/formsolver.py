"""Positive solutions of x^2 - k*x*y + y^2 = sign * 2^n.

Even k >= 4 goes through u^2 - d*v^2 = sign * 2^n with u = |x - (k/2)y|,
v = y, d = (k/2)^2 - 1.  Solutions with x, y both even are peeled down
to the same form with 2^(n-2) and lifted back.  Every k >= 3 also has a
second, independent route by Vieta jumping, which the Pell route is
checked against.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .gpell import ClassSet, class_reps, class_solutions
from .ikern import as_square, isqrt, v2

BOTH_ODD = "both-odd"
BOTH_EVEN = "both-even"
MIXED = "mixed"

EMPTY = "empty"
FINITE = "finite"
INFINITE = "infinite"


def form_value(x: int, y: int, k: int) -> int:
    return x * x - k * x * y + y * y


def parse_sign(sign) -> int:
    """Accept +1/-1, '+'/'-' and 'plus'/'minus'."""
    if isinstance(sign, str):
        s = sign.strip().lower()
        table = {"+": 1, "plus": 1, "+1": 1, "1": 1, "-": -1, "minus": -1, "-1": -1}
        if s not in table:
            raise ValueError(f"unrecognised sign {sign!r}")
        return table[s]
    if sign in (1, -1):
        return int(sign)
    raise ValueError(f"sign must be +1 or -1, got {sign!r}")


@dataclass(frozen=True)
class FormInstance:
    k: int
    n: int
    sign: int = 1

    def __post_init__(self):
        if self.k < 0:
            # sign=-1 has no positive solutions for k < 0, and sign=+1 maps
            # to |k| via y -> -y; callers must do that explicitly
            raise ValueError(f"k must be >= 0, got {self.k}")
        if self.n < 0:
            raise ValueError(f"n must be >= 0, got {self.n}")
        object.__setattr__(self, "sign", parse_sign(self.sign))

    @property
    def rhs(self) -> int:
        return self.sign << self.n

    def holds(self, x: int, y: int) -> bool:
        return form_value(x, y, self.k) == self.rhs


def parity_of(x: int, y: int) -> str:
    if x % 2 and y % 2:
        return BOTH_ODD
    if x % 2 == 0 and y % 2 == 0:
        return BOTH_EVEN
    return MIXED


@dataclass(frozen=True, order=True)
class SolutionPair:
    # field order gives the (y, x) sort used everywhere
    y: int
    x: int

    def __post_init__(self):
        if self.x < 1 or self.y < 1:
            raise ValueError(f"solution pairs are positive, got ({self.x}, {self.y})")

    @property
    def parity(self) -> str:
        return parity_of(self.x, self.y)

    def as_tuple(self) -> tuple[int, int]:
        return self.x, self.y

    def __repr__(self):
        return f"SolutionPair(x={self.x}, y={self.y})"


def pair(x: int, y: int) -> SolutionPair:
    return SolutionPair(y=y, x=x)


@dataclass
class SolveOutcome:
    instance: FormInstance
    bound: int
    status: str
    solutions: list[SolutionPair] = field(default_factory=list)
    generators: Optional[dict] = None

    def __post_init__(self):
        if self.status == EMPTY and self.solutions:
            raise ValueError("empty outcome with solutions")
        if self.status == INFINITE and self.generators is None:
            raise ValueError("infinite outcome needs generators")

    def pairs(self) -> list[tuple[int, int]]:
        return [s.as_tuple() for s in self.solutions]


# -- reduction to generalized Pell -------------------------------------------

def reduce_to_gpell(inst: FormInstance) -> tuple[int, int]:
    if inst.k % 2 or inst.k < 4:
        raise ValueError(f"Pell reduction needs even k >= 4, got k={inst.k}")
    h = inst.k // 2
    return h * h - 1, inst.rhs


def recover_xy(u: int, v: int, k: int, inst: FormInstance) -> set[SolutionPair]:
    """Undo u = |x - (k/2)y|, v = y; keep positive pairs that really solve inst."""
    h = k // 2
    out = set()
    for x in (h * v + u, h * v - u):
        if x >= 1 and v >= 1 and inst.holds(x, v):
            out.add(pair(x, v))
    return out


def descent_split(x: int, y: int) -> tuple[int, int, int]:
    """Strip the common power of two: x = 2^e x0, y = 2^e y0, not both even."""
    if x < 1 or y < 1:
        raise ValueError("descent_split needs positive x, y")
    e = min(v2(x), v2(y))
    return x >> e, y >> e, e


def _primitive_pell(inst: FormInstance, bound: int) -> tuple[set[SolutionPair], ClassSet]:
    d, N = reduce_to_gpell(inst)
    cs = class_reps(d, N)
    found = set()
    for rep in cs.reps:
        for u, v in class_solutions(rep, cs.unit, bound):
            for sp in recover_xy(u, v, inst.k, inst):
                if sp.x <= bound and (sp.x % 2 or sp.y % 2):
                    found.add(sp)
    return found, cs


def pell_path(inst: FormInstance, bound: int) -> tuple[list[SolutionPair], list[ClassSet]]:
    """Solutions with max(x, y) <= bound through the Pell reduction.

    Primitive solutions are found for each residual exponent n - 2e >= 0 and
    scaled by 2^e.  Returns the solutions and the class set of each exponent.
    """
    found: set[SolutionPair] = set()
    class_sets = []
    for e in range(inst.n // 2 + 1):
        sub = FormInstance(inst.k, inst.n - 2 * e, inst.sign)
        prim, cs = _primitive_pell(sub, bound >> e)
        class_sets.append(cs)
        for sp in prim:
            lifted = pair(sp.x << e, sp.y << e)
            assert inst.holds(lifted.x, lifted.y)
            found.add(lifted)
    return sorted(found), class_sets


# -- Vieta jumping -------------------------------------------------------------

def vieta_jump(x: int, y: int, k: int) -> tuple[int, int]:
    """Replace x by the other root k*y - x of t^2 - k*y*t + (y^2 - N), then swap."""
    return y, k * y - x


def _roots_for_y(y: int, k: int, rhs: int) -> list[int]:
    # x^2 - k y x + (y^2 - rhs) = 0
    disc = (k * k - 4) * y * y + 4 * rhs
    r = as_square(disc)
    if r is None:
        return []
    roots = set()
    for num in (k * y + r, k * y - r):
        if num % 2 == 0:
            roots.add(num // 2)
    return sorted(roots)


def vieta_base_solutions(inst: FormInstance) -> list[SolutionPair]:
    """Positive (x, y), x >= y, where the descending jump cannot go lower.

    sign=+1: the other root k*y - x equals (y^2 - 2^n)/x, so a pair is base
    exactly when y^2 <= 2^n.  sign=-1: the other root is always positive and
    the pair is base when 2x <= k*y; then (k-2) y^2 <= 2^n.
    """
    k, M = inst.k, 1 << inst.n
    if k < 3:
        raise ValueError("Vieta descent needs k >= 3")
    if inst.sign > 0:
        y_max = isqrt(M)
    else:
        y_max = isqrt(M // (k - 2))
    out = []
    for y in range(1, y_max + 1):
        for x in _roots_for_y(y, k, inst.rhs):
            if x < y:
                continue
            other = k * y - x
            if inst.sign > 0:
                base = other <= 0
            else:
                base = other >= x
            if base:
                assert inst.holds(x, y)
                out.append(pair(x, y))
    return sorted(out)


def vieta_closure(seeds: Iterable[SolutionPair], k: int, bound: int) -> list[SolutionPair]:
    """All positive pairs reachable from seeds by single-coordinate jumps,
    staying within max(x, y) <= bound."""
    seen = set()
    stack = []
    for s in seeds:
        for p in (s, pair(s.y, s.x)):
            if max(p.x, p.y) <= bound and p not in seen:
                seen.add(p)
                stack.append(p)
    while stack:
        p = stack.pop()
        for x, y in ((k * p.y - p.x, p.y), (p.x, k * p.x - p.y), (p.y, p.x)):
            if 1 <= x <= bound and 1 <= y <= bound:
                q = pair(x, y)
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
    return sorted(seen)


def vieta_path(inst: FormInstance, bound: int) -> tuple[list[SolutionPair], list[SolutionPair]]:
    base = vieta_base_solutions(inst)
    return vieta_closure(base, inst.k, bound), base


# -- brute force (reference only) ------------------------------------------------

def scan_solutions(inst: FormInstance, bound: int) -> list[SolutionPair]:
    """Plain double loop over 1 <= x, y <= bound."""
    k, rhs = inst.k, inst.rhs
    out = []
    for y in range(1, bound + 1):
        for x in range(1, bound + 1):
            if x * x - k * x * y + y * y == rhs:
                out.append(pair(x, y))
    return out


def _scan_by_roots(inst: FormInstance, y_max: int, bound: int) -> list[SolutionPair]:
    out = []
    for y in range(1, min(y_max, bound) + 1):
        for x in _roots_for_y(y, inst.k, inst.rhs):
            if 1 <= x <= bound:
                out.append(pair(x, y))
    return sorted(out)


# -- dispatcher ------------------------------------------------------------------

def solve_all(inst: FormInstance, bound: int, cross_check: bool = True) -> SolveOutcome:
    """Decide solvability and list every positive solution with max(x, y) <= bound.

    The status is exact and does not depend on bound.
    """
    k, n, sign = inst.k, inst.n, inst.sign
    if k <= 1:
        if sign < 0 and k == 0:
            return SolveOutcome(inst, bound, EMPTY)
        # k = 0: x^2 + y^2 = N;  k = 1: x^2 - xy + y^2 >= (x^2 + y^2)/2
        # either way x, y <= sqrt(2N)
        every = _scan_by_roots(inst, isqrt(2 << n), 2 << n) if sign > 0 else []
        sols = [s for s in every if s.x <= bound and s.y <= bound]
        return SolveOutcome(inst, bound, FINITE if every else EMPTY, sols)
    if k == 2:
        # (x - y)^2 = sign * 2^n
        if sign < 0 or n % 2:
            return SolveOutcome(inst, bound, EMPTY)
        gap = 1 << (n // 2)
        sols = []
        for y in range(1, bound - gap + 1):
            sols.append(pair(y + gap, y))
            sols.append(pair(y, y + gap))
        return SolveOutcome(inst, bound, INFINITE, sorted(sols), {"difference": gap})
    if k % 2:
        sols, base = vieta_path(inst, bound)
        status = INFINITE if base else EMPTY
        gens = {"base": [b.as_tuple() for b in base]} if base else None
        return SolveOutcome(inst, bound, status, sols, gens)
    sols, class_sets = pell_path(inst, bound)
    if cross_check:
        vsols, _ = vieta_path(inst, bound)
        if vsols != sols:
            raise AssertionError(f"Pell and Vieta routes disagree for {inst}")
    nonempty = [cs for cs in class_sets if cs]
    if not nonempty:
        return SolveOutcome(inst, bound, EMPTY)
    gens = {
        "unit": (nonempty[0].unit.x1, nonempty[0].unit.y1),
        "classes": [
            {"N": cs.N, "scale": 1 << e, "reps": [(r.u, r.v) for r in cs.reps]}
            for e, cs in enumerate(class_sets)
            if cs
        ],
    }
    return SolveOutcome(inst, bound, INFINITE, sols, gens)


def adaptive_bound(k: int, n: int) -> int:
    """Search bound that contains every base pair: max(2^(n+2), k * 2^(n//2 + 2))."""
    return max(1 << (n + 2), k << (n // 2 + 2))


@dataclass(frozen=True)
class KRow:
    """Solvability summary of one (k, n, sign) cell."""

    k: int
    n: int
    sign: int
    solvable: bool
    witness: Optional[SolutionPair] = None
    odd_witness: Optional[SolutionPair] = None

    @property
    def odd_solution(self) -> bool:
        return self.odd_witness is not None


def solvability_row(k: int, n: int, sign, bound: Optional[int] = None) -> KRow:
    """Exact solvability of (k, n, sign) plus its least witnesses in (y, x) order.

    The both-odd witness comes from the solutions up to `bound` (default
    adaptive_bound), which holds every base pair of every orbit.
    """
    sign = parse_sign(sign)
    if bound is None:
        bound = adaptive_bound(k, n)
    out = solve_all(FormInstance(k, n, sign), bound, cross_check=False)
    if out.status == EMPTY:
        return KRow(k, n, sign, False)
    witness = out.solutions[0] if out.solutions else None
    odd = next((s for s in out.solutions if s.parity == BOTH_ODD), None)
    return KRow(k, n, sign, True, witness, odd)


def solvable_k_set(n: int, sign, k_max: int) -> tuple[list[int], list[int]]:
    """(k with a positive solution, k with a both-odd one) for 1 <= k <= k_max.

    k = 0 is left out: it is a sum of two squares, outside the family studied.
    """
    rows = [solvability_row(k, n, sign) for k in range(1, k_max + 1)]
    return [r.k for r in rows if r.solvable], [r.k for r in rows if r.odd_solution]
