"""Grid checks for the bounds on k in x^2 - kxy + y^2 = +-2^n.

Each check walks a grid of (n, k) cells, keeps the least solution of every
solvable cell as a witness, and records a counterexample whenever a cell
contradicts the statement under test.  Reports serialize to JSON with big
integers as decimal strings and re-verify every stored pair on load.
"""
from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .formsolver import (
    INFINITE,
    FormInstance,
    KRow,
    adaptive_bound,
    form_value,
    parse_sign,
    solvability_row,
    solve_all,
    vieta_jump,
)
from .ikern import legendre, primes_up_to

PASS = "pass"
FAIL = "fail"
REPORT_ONLY = "report-only"

DEFAULT_K_MARGIN = 8


@dataclass(frozen=True)
class Witness:
    n: int
    k: int
    sign: int
    x: int
    y: int
    p: Optional[int] = None
    reason: str = ""

    def verify(self) -> bool:
        return self.x >= 1 and self.y >= 1 and form_value(self.x, self.y, self.k) == self.sign << self.n

    def to_json(self) -> dict:
        out = {"n": self.n, "k": self.k, "sign": "+" if self.sign > 0 else "-", "x": str(self.x), "y": str(self.y)}
        if self.p is not None:
            out["p"] = self.p
        if self.reason:
            out["reason"] = self.reason
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Witness":
        return cls(
            n=int(obj["n"]),
            k=int(obj["k"]),
            sign=parse_sign(obj["sign"]),
            x=int(obj["x"]),
            y=int(obj["y"]),
            p=obj.get("p"),
            reason=obj.get("reason", ""),
        )


@dataclass
class TheoremCheck:
    theorem_id: str
    n_values: list[int]
    k_max: int = 0
    p_max: Optional[int] = None
    verdict: str = PASS
    witnesses: list[Witness] = field(default_factory=list)
    counterexamples: list[Witness] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    report_only: bool = False

    def finish(self) -> "TheoremCheck":
        key = lambda w: (w.n, w.k, w.p or 0, w.y, w.x, w.sign, w.reason)
        self.witnesses.sort(key=key)
        self.counterexamples.sort(key=key)
        if self.report_only:
            self.verdict = REPORT_ONLY
        else:
            self.verdict = FAIL if self.counterexamples else PASS
        return self

    @property
    def failed(self) -> bool:
        return self.verdict == FAIL

    def to_json(self) -> dict:
        config = {"n_values": list(self.n_values), "k_max": self.k_max}
        if self.p_max is not None:
            config["p_max"] = self.p_max
        if self.skipped:
            config["skipped_n"] = list(self.skipped)
        config.update(self.config)
        return {
            "theorem": self.theorem_id,
            "config": config,
            "verdict": self.verdict,
            "witnesses": [w.to_json() for w in self.witnesses],
            "counterexamples": [w.to_json() for w in self.counterexamples],
        }


# -- grid evaluation -------------------------------------------------------------

def _workers() -> int:
    raw = os.environ.get("NAGELL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ValueError(f"NAGELL_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


@lru_cache(maxsize=None)
def _row(k: int, n: int, sign: int) -> KRow:
    return solvability_row(k, n, sign)


def _rows_chunk(args: tuple[int, int, int, int]) -> list[KRow]:
    n, sign, lo, hi = args
    return [solvability_row(k, n, sign) for k in range(lo, hi + 1)]


def grid_rows(n: int, sign: int, k_max: int, workers: Optional[int] = None) -> list[KRow]:
    """Rows for k = 1..k_max, in k order."""
    if workers is None:
        workers = _workers()
    if workers <= 1 or k_max < 512:
        return [_row(k, n, sign) for k in range(1, k_max + 1)]
    step = -(-k_max // workers)
    chunks = [(n, sign, lo, min(lo + step - 1, k_max)) for lo in range(1, k_max + 1, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_rows_chunk, chunks))
    return [r for part in parts for r in part]


def _witness(row: KRow, odd: bool = False, **extra) -> Witness:
    sp = row.odd_witness if odd else row.witness
    return Witness(row.n, row.k, row.sign, sp.x, sp.y, **extra)


def _odd_n_above_2(n: int) -> bool:
    return n > 2 and n % 2 == 1


# -- theorem checks --------------------------------------------------------------

def _bound_check(theorem_id, n_values, sign, offset, k_margin, odd_n, even_rule=None):
    """Shared body of the k-bound statements.

    Odd n > 2: no solvable k above 2^n + offset, every solvable k even.
    Even n >= 1: same, restricted to k with a both-odd solution; even_rule
    adds an extra divisibility demand on those k.
    """
    check = TheoremCheck(theorem_id, sorted(n_values), config={"k_margin": k_margin, "sign": "+" if sign > 0 else "-"})
    for n in check.n_values:
        applies = _odd_n_above_2(n) if odd_n else (n >= 1 and n % 2 == 0)
        if not applies:
            check.skipped.append(n)
            continue
        limit = (1 << n) + offset
        k_max = limit + k_margin
        check.k_max = max(check.k_max, k_max)
        for row in grid_rows(n, sign, k_max):
            if odd_n:
                if not row.solvable:
                    continue
                check.witnesses.append(_witness(row))
                if row.k > limit:
                    check.counterexamples.append(_witness(row, reason=f"solvable with k > {limit}"))
                if row.k % 2:
                    check.counterexamples.append(_witness(row, reason="solvable with odd k"))
            else:
                if not row.odd_solution:
                    continue
                check.witnesses.append(_witness(row, odd=True))
                if row.k > limit:
                    check.counterexamples.append(_witness(row, odd=True, reason=f"odd solution with k > {limit}"))
                if row.k % 2:
                    check.counterexamples.append(_witness(row, odd=True, reason="odd solution with odd k"))
                if even_rule is not None and not even_rule(row.k):
                    check.counterexamples.append(_witness(row, odd=True, reason="odd solution with k not 2 mod 4"))
    return check.finish()


def check_thm31(n_values: Iterable[int], k_margin: int = DEFAULT_K_MARGIN) -> list[TheoremCheck]:
    """x^2 - kxy + y^2 = 2^n: k <= 2^n - 2 and k even (odd n > 2), and the
    same for k admitting a both-odd solution (even n)."""
    n_values = list(n_values)
    return [
        _bound_check("T31i", n_values, 1, -2, k_margin, odd_n=True),
        _bound_check("T31ii", n_values, 1, -2, k_margin, odd_n=False),
    ]


def check_thm32(n_values: Iterable[int], k_margin: int = DEFAULT_K_MARGIN) -> list[TheoremCheck]:
    """The -2^n analogue with threshold 2^n + 2, plus 2 || k for even n.

    A third, report-only entry reads part (i) with right-hand side +2^n
    as literally printed, and lists any solvable k above 2^n + 2.
    """
    n_values = list(n_values)
    checks = [
        _bound_check("T32i", n_values, -1, 2, k_margin, odd_n=True),
        _bound_check("T32ii", n_values, -1, 2, k_margin, odd_n=False, even_rule=lambda k: k % 4 == 2),
    ]
    literal = TheoremCheck("T32i+", sorted(n_values), config={"k_margin": k_margin, "sign": "+"}, report_only=True)
    for n in literal.n_values:
        if not _odd_n_above_2(n):
            literal.skipped.append(n)
            continue
        limit = (1 << n) + 2
        literal.k_max = max(literal.k_max, limit + k_margin)
        for row in grid_rows(n, 1, limit + k_margin):
            if row.solvable and row.k > limit:
                literal.counterexamples.append(_witness(row, reason=f"solvable with k > {limit}"))
    checks.append(literal.finish())
    return checks


def _near_unit(h: int, p: int) -> bool:
    return h % p in (1, p - 1)


def check_thm33(n_values: Iterable[int], p_max: int, k_margin: int = DEFAULT_K_MARGIN) -> list[TheoremCheck]:
    """(i) 2^n side, odd n > 2: 3 | k, and k/2 is not +-1 mod any p with (2/p) = -1.
    (ii) -2^n side with (2/p) = +1: violations are listed, never failed."""
    n_values = sorted(n_values)
    odd_primes = [p for p in primes_up_to(p_max) if p > 2]
    inert = [p for p in odd_primes if legendre(2, p) == -1]
    split = [p for p in odd_primes if legendre(2, p) == 1]

    part1 = TheoremCheck("T33i", n_values, p_max=p_max, config={"k_margin": k_margin, "sign": "+", "primes": inert})
    part2 = TheoremCheck(
        "T33ii", n_values, p_max=p_max, report_only=True, config={"k_margin": k_margin, "sign": "-", "primes": split}
    )
    for n in n_values:
        if not _odd_n_above_2(n):
            part1.skipped.append(n)
            part2.skipped.append(n)
            continue
        k_max = (1 << n) - 2 + k_margin
        part1.k_max = max(part1.k_max, k_max)
        for row in grid_rows(n, 1, k_max):
            if not row.solvable:
                continue
            part1.witnesses.append(_witness(row))
            if row.k % 3:
                part1.counterexamples.append(_witness(row, p=3, reason="k not a multiple of 3"))
            if row.k % 2:
                part1.counterexamples.append(_witness(row, reason="odd k"))
                continue
            for p in inert:
                if _near_unit(row.k // 2, p):
                    part1.counterexamples.append(_witness(row, p=p, reason="k/2 = +-1 mod p"))
        k_max = (1 << n) + 2 + k_margin
        part2.k_max = max(part2.k_max, k_max)
        for row in grid_rows(n, -1, k_max):
            if not row.solvable:
                continue
            part2.witnesses.append(_witness(row))
            for p in split:
                if row.k % 2 == 0 and _near_unit(row.k // 2, p):
                    part2.counterexamples.append(_witness(row, p=p, reason="k/2 = +-1 mod p"))
    return [part1.finish(), part2.finish()]


def ascend(x: int, y: int, k: int, steps: int) -> list[tuple[int, int]]:
    """Follow the increasing jump (x, y) -> (k*x - y, x) from a pair with x >= y."""
    chain = [(x, y)]
    for _ in range(steps):
        y_next, x_next = vieta_jump(y, x, k)  # jump the smaller coordinate
        x, y = x_next, y_next
        chain.append((x, y))
    return chain


def check_sharpness(n_values: Iterable[int], chain_length: int = 3) -> TheoremCheck:
    """The thresholds 2^n - 2 (for +2^n) and 2^n + 2 (for -2^n) are attained.

    (2^n - 1, 1) solves k = 2^n - 2 and (1, 1) solves k = 2^n + 2; ascending
    jumps from each must give chain_length distinct positive solutions, and
    the exact solver must report infinitely many.  The +2^n side needs
    n >= 2 (k = 2^n - 2 <= 0 below that); those n are listed as skipped.
    """
    check = TheoremCheck(
        "SHARP", sorted(n_values), config={"chain_length": chain_length, "skipped_side": "+"}
    )
    for n in check.n_values:
        sides = [((1 << n) + 2, -1, (1, 1))]
        if n >= 2:
            sides.insert(0, ((1 << n) - 2, 1, ((1 << n) - 1, 1)))
        else:
            check.skipped.append(n)
        for k, sign, start in sides:
            check.k_max = max(check.k_max, k)
            chain = ascend(*start, k, chain_length - 1)
            for x, y in chain:
                w = Witness(n, k, sign, x, y)
                check.witnesses.append(w)
                if not w.verify():
                    check.counterexamples.append(Witness(n, k, sign, x, y, reason="chain pair fails"))
            if len(set(chain)) < chain_length or min(min(c) for c in chain) < 1:
                check.counterexamples.append(Witness(n, k, sign, *start, reason="ascending chain too short"))
            out = solve_all(FormInstance(k, n, sign), max(start), cross_check=False)
            if out.status != INFINITE:
                check.counterexamples.append(Witness(n, k, sign, *start, reason=f"solver reports {out.status}"))
    return check.finish()


def check_bound_stability(n: int, sign, k_values: Iterable[int]) -> list[int]:
    """k values whose summary changes when the search bound is doubled."""
    sign = parse_sign(sign)
    changed = []
    for k in k_values:
        base = solvability_row(k, n, sign)
        wide = solvability_row(k, n, sign, bound=2 * adaptive_bound(k, n))
        if (base.solvable, base.odd_solution, base.witness, base.odd_witness) != (
            wide.solvable,
            wide.odd_solution,
            wide.witness,
            wide.odd_witness,
        ):
            changed.append(k)
    return changed


THEOREMS = ("3.1", "3.2", "3.3", "sharpness")


def run_checks(theorem: str, n_max: int, k_margin: int = DEFAULT_K_MARGIN, p_max: int = 100) -> list[TheoremCheck]:
    """All checks for one theorem name (or 'all') over n = 1..n_max."""
    if theorem not in THEOREMS + ("all",):
        raise ValueError(f"unknown theorem {theorem!r}")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    ns = list(range(1, n_max + 1))
    todo = THEOREMS if theorem == "all" else (theorem,)
    checks: list[TheoremCheck] = []
    for name in todo:
        if name == "3.1":
            checks += check_thm31(ns, k_margin)
        elif name == "3.2":
            checks += check_thm32(ns, k_margin)
        elif name == "3.3":
            checks += check_thm33([n for n in ns if _odd_n_above_2(n)], p_max, k_margin)
        else:
            checks.append(check_sharpness(ns))
    return checks


# -- tables ----------------------------------------------------------------------

@dataclass
class SolvabilityTable:
    sign: int
    k_margin: int
    rows: list[tuple[int, list[int], list[int]]] = field(default_factory=list)
    cells: list[KRow] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "sign": "+" if self.sign > 0 else "-",
            "k_margin": self.k_margin,
            "rows": [{"n": n, "solvable": s, "odd_solution": o} for n, s, o in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "sign", "solvable", "odd_solution", "min_witness_x", "min_witness_y"])
        for c in self.cells:
            wx = str(c.witness.x) if c.witness else ""
            wy = str(c.witness.y) if c.witness else ""
            w.writerow([c.n, c.k, "+" if c.sign > 0 else "-", int(c.solvable), int(c.odd_solution), wx, wy])
        return buf.getvalue()


def build_tables(n_max: int, sign, k_margin: int = DEFAULT_K_MARGIN) -> SolvabilityTable:
    """Solvable and odd-solution k for n = 0..n_max, k = 1..2^n + 2 + k_margin."""
    sign = parse_sign(sign)
    table = SolvabilityTable(sign, k_margin)
    for n in range(n_max + 1):
        rows = grid_rows(n, sign, (1 << n) + 2 + k_margin)
        table.cells.extend(rows)
        table.rows.append((n, [r.k for r in rows if r.solvable], [r.k for r in rows if r.odd_solution]))
    return table


# -- report I/O ------------------------------------------------------------------

def dumps_report(checks: list[TheoremCheck]) -> str:
    return json.dumps([c.to_json() for c in checks], indent=2, sort_keys=True) + "\n"


class ReportError(ValueError):
    pass


def loads_report(text: str) -> list[dict]:
    """Parse a report and re-verify every stored pair against its equation.

    Counterexample pairs must also solve their equation: they are real
    solutions that contradict a statement, not failed checks.
    """
    data = json.loads(text)
    if not isinstance(data, list):
        raise ReportError("report must be a JSON list of checks")
    for entry in data:
        for key in ("theorem", "config", "verdict", "witnesses", "counterexamples"):
            if key not in entry:
                raise ReportError(f"report entry missing {key!r}")
        for kind in ("witnesses", "counterexamples"):
            for obj in entry[kind]:
                w = Witness.from_json(obj)
                if not w.verify():
                    raise ReportError(f"{entry['theorem']}: stored pair {asdict(w)} does not verify")
    return data


def checks_to_csv(checks: list[TheoremCheck]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["theorem", "kind", "n", "k", "sign", "p", "x", "y", "reason"])
    for c in checks:
        for kind, items in (("witness", c.witnesses), ("counterexample", c.counterexamples)):
            for it in items:
                w.writerow([c.theorem_id, kind, it.n, it.k, "+" if it.sign > 0 else "-",
                            "" if it.p is None else it.p, it.x, it.y, it.reason])
    return buf.getvalue()


__all__ = [
    "FAIL",
    "PASS",
    "REPORT_ONLY",
    "ReportError",
    "SolvabilityTable",
    "TheoremCheck",
    "Witness",
    "build_tables",
    "check_bound_stability",
    "check_sharpness",
    "check_thm31",
    "check_thm32",
    "check_thm33",
    "checks_to_csv",
    "dumps_report",
    "grid_rows",
    "loads_report",
    "run_checks",
]
