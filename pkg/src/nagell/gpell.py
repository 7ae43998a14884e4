"""Complete solution of u^2 - d*v^2 = N for nonsquare d and N != 0.

Solutions fall into finitely many classes under multiplication by Pell
units.  Each class has a fundamental member inside Nagell's box, which
makes finding one representative per class a finite scan over v.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .ikern import as_square, isqrt
from .pell import PellFundamental, pell_fundamental


@dataclass(frozen=True)
class ClassRep:
    d: int
    N: int
    u: int
    v: int
    ambiguous: bool = False

    def __post_init__(self):
        if self.u * self.u - self.d * self.v * self.v != self.N:
            raise ValueError(f"({self.u}, {self.v}) does not solve u^2 - {self.d}v^2 = {self.N}")


@dataclass(frozen=True)
class ClassSet:
    d: int
    N: int
    unit: PellFundamental
    reps: tuple[ClassRep, ...] = field(default_factory=tuple)

    def __bool__(self):
        return bool(self.reps)


def _max_with_square_le(coef: int, rhs: int) -> int:
    """Largest t >= 0 with coef * t^2 <= rhs (coef > 0, rhs >= 0)."""
    return isqrt(rhs // coef)


def nagell_bounds(d: int, N: int, fund: PellFundamental) -> tuple[int, int, int]:
    """Box (v_min, v_max, u_max) holding the fundamental member of each class.

    N > 0:  0 <= v <= y1*sqrt(N) / sqrt(2(x1+1)),   |u| <= sqrt((x1+1)N/2)
    N < 0:  1 <= v <= y1*sqrt(|N|) / sqrt(2(x1-1)), |u| <= sqrt((x1-1)|N|/2)

    All floors are taken on integers, no floating point.
    """
    if N == 0:
        raise ValueError("N must be nonzero")
    if fund.d != d:
        raise ValueError(f"fundamental solution is for d={fund.d}, not {d}")
    x1, y1 = fund.x1, fund.y1
    M = abs(N)
    shift = 1 if N > 0 else -1
    # floor(y1 sqrt(M) / sqrt(2(x1+shift))) = max v with 2(x1+shift) v^2 <= y1^2 M
    v_max = _max_with_square_le(2 * (x1 + shift), y1 * y1 * M)
    # floor(sqrt((x1+shift) M / 2)) = isqrt(floor((x1+shift) M / 2))
    u_max = isqrt((x1 + shift) * M // 2)
    v_min = 0 if N > 0 else 1
    return v_min, v_max, u_max


def is_solution(s: tuple[int, int], d: int, N: int) -> bool:
    u, v = s
    return u * u - d * v * v == N


def same_class(s1: tuple[int, int], s2: tuple[int, int], d: int, N: int) -> bool:
    """Whether two solutions of u^2 - d*v^2 = N are associated."""
    for s in (s1, s2):
        if not is_solution(s, d, N):
            raise ValueError(f"{s} does not solve u^2 - {d}v^2 = {N}")
    (u1, v1), (u2, v2) = s1, s2
    M = abs(N)
    return (u1 * u2 - d * v1 * v2) % M == 0 and (u1 * v2 - u2 * v1) % M == 0


def class_reps(d: int, N: int, fund: PellFundamental | None = None) -> ClassSet:
    """One canonical representative per class of u^2 - d*v^2 = N.

    Representatives have the least v in their class; an ambiguous class
    (closed under u -> -u) is stored with u >= 0.  Otherwise (u, v) and
    (-u, v) are kept as two separate classes.
    """
    if fund is None:
        fund = pell_fundamental(d)
    v_min, v_max, u_max = nagell_bounds(d, N, fund)
    reps: list[tuple[int, int]] = []
    for v in range(v_min, v_max + 1):
        u = as_square(N + d * v * v)
        if u is None or u > u_max:
            continue
        if N > 0 and u == 0:
            continue
        for cand in ((u, v), (-u, v)) if u else ((0, v),):
            if not any(same_class(cand, r, d, N) for r in reps):
                reps.append(cand)
    out = []
    for u, v in reps:
        ambiguous = same_class((u, v), (-u, v), d, N)
        out.append(ClassRep(d, N, u, v, ambiguous))
    return ClassSet(d, N, fund, tuple(out))


def _orbit_abs(u: int, v: int, fund: PellFundamental, v_limit: int) -> set[tuple[int, int]]:
    # |v_j| along (u + v sqrt d) * eps^j is unimodal in j, so stop once it
    # is past v_limit and increasing
    d, x1, y1 = fund.d, fund.x1, fund.y1
    found = set()
    prev = None
    while True:
        av = abs(v)
        if av <= v_limit:
            found.add((abs(u), av))
        elif prev is not None and av > prev:
            return found
        prev = av
        u, v = u * x1 + d * v * y1, u * y1 + v * x1


def class_solutions(rep: ClassRep, fund: PellFundamental, v_limit: int) -> list[tuple[int, int]]:
    """Nonnegative members of rep's class (and its conjugate) with v <= v_limit."""
    if rep.d != fund.d:
        raise ValueError("rep and fundamental solution disagree on d")
    sols = _orbit_abs(rep.u, rep.v, fund, v_limit) | _orbit_abs(rep.u, -rep.v, fund, v_limit)
    return sorted(sols, key=lambda s: (s[1], s[0]))


def solve_gpell(d: int, N: int, v_limit: int) -> list[tuple[int, int]]:
    """All (u, v) with u, v >= 0, v <= v_limit and u^2 - d*v^2 = N, sorted by (v, u)."""
    cs = class_reps(d, N)
    sols: set[tuple[int, int]] = set()
    for rep in cs.reps:
        sols.update(class_solutions(rep, cs.unit, v_limit))
    return sorted(sols, key=lambda s: (s[1], s[0]))
