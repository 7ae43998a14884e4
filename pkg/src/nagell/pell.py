"""The classical Pell equation x^2 - d*y^2 = 1.

The fundamental solution comes from the continued fraction of sqrt(d):
with period length L, the convergent p/q at index L-1 satisfies
p^2 - d*q^2 = (-1)^L, so an odd period needs one squaring step.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .ikern import as_square, isqrt


@dataclass(frozen=True)
class PellFundamental:
    d: int
    x1: int
    y1: int

    def __post_init__(self):
        if self.x1 * self.x1 - self.d * self.y1 * self.y1 != 1:
            raise ValueError(f"({self.x1}, {self.y1}) does not solve x^2 - {self.d}y^2 = 1")


class SurdState(NamedTuple):
    """One step of the expansion of (m + sqrt(d)) / q."""

    d: int
    m: int
    q: int
    a: int


def _check_d(d: int) -> None:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    if as_square(d) is not None:
        raise ValueError(f"d = {d} is a perfect square")


def surd_states(d: int) -> Iterator[SurdState]:
    """Yield the states of the continued fraction of sqrt(d), forever."""
    a0 = isqrt(d)
    m, q, a = 0, 1, a0
    while True:
        yield SurdState(d, m, q, a)
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q


def cf_expand(d: int) -> tuple[int, list[int]]:
    """Return (a0, period) with sqrt(d) = [a0; period repeated]."""
    _check_d(d)
    states = surd_states(d)
    a0 = next(states).a
    period = []
    for st in states:
        period.append(st.a)
        if st.a == 2 * a0:
            break
    return a0, period


def _convergent(a0: int, quotients: list[int]) -> tuple[int, int]:
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    for a in quotients:
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return p, q


def pell_fundamental_cf(d: int) -> PellFundamental:
    """Fundamental solution from the continued fraction only, no shortcuts."""
    a0, period = cf_expand(d)
    length = len(period)
    p, q = _convergent(a0, period[:-1])
    if length % 2 == 1:
        # p^2 - d q^2 = -1 here; square it
        p, q = p * p + d * q * q, 2 * p * q
    return PellFundamental(d, p, q)


def pell_fundamental(d: int) -> PellFundamental:
    """Least positive solution of x^2 - d*y^2 = 1.

    For d = m^2 - 1 the answer is (m, 1) directly; every other d goes
    through the continued fraction.
    """
    _check_d(d)
    m = as_square(d + 1)
    if m is not None:
        return PellFundamental(d, m, 1)
    return pell_fundamental_cf(d)


def iter_pell_solutions(fund: PellFundamental) -> Iterator[tuple[int, int]]:
    x1, y1, d = fund.x1, fund.y1, fund.d
    x, y = x1, y1
    while True:
        yield x, y
        x, y = x1 * x + d * y1 * y, x1 * y + y1 * x


def pell_solutions(fund: PellFundamental, count: int) -> list[tuple[int, int]]:
    """First `count` positive solutions, ascending."""
    if count < 1:
        raise ValueError("count must be >= 1")
    out = []
    for sol in iter_pell_solutions(fund):
        out.append(sol)
        if len(out) == count:
            return out
    return out  # pragma: no cover
