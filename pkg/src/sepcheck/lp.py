"""Exact feasibility for homogeneous systems with strict, weak and equality rows.

``solve`` decides which side of the transposition theorem holds::

    A x >> 0, B x >= 0, C x = 0        (Primal)
    p A + q B + r C = 0, p > 0, q >= 0  (Dual, integral)

via the bounded program ``max t  s.t.  A x >= t, B x >= 0, C x = 0,
-1 <= x <= 1, t <= 1``.  The simplex runs on an integer-preserving tableau
(every entry is a subdeterminant, the common denominator is tracked
separately) with Bland's rule, so it is exact and cycle-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import EmptySystem, VerificationFailure
from .rationals import format_rational, integerize, parse_rational, sqrt_upper

_INT64_SAFE = 2**30


def _rows(rows, d):
    out = []
    for row in rows:
        row = tuple(Fraction(v) for v in row)
        if len(row) != d:
            raise ValueError(f"row has {len(row)} entries, expected {d}")
        out.append(row)
    return tuple(out)


@dataclass(frozen=True)
class FeasibilitySystem:
    num_vars: int
    strict: tuple = ()
    weak: tuple = ()
    equality: tuple = ()
    column_labels: Optional[tuple] = None
    # Free-form provenance for each strict/weak row, e.g. the compared profiles.
    strict_tags: Optional[tuple] = field(default=None, compare=False, repr=False)
    weak_tags: Optional[tuple] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        d = self.num_vars
        object.__setattr__(self, "strict", _rows(self.strict, d))
        object.__setattr__(self, "weak", _rows(self.weak, d))
        object.__setattr__(self, "equality", _rows(self.equality, d))
        if self.column_labels is not None:
            labels = tuple(self.column_labels)
            if len(labels) != d or len(set(labels)) != d:
                raise ValueError("column labels must be distinct, one per column")
            object.__setattr__(self, "column_labels", labels)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        return len(self.strict), len(self.weak), len(self.equality), self.num_vars


@dataclass(frozen=True)
class Primal:
    x: tuple


@dataclass(frozen=True)
class Dual:
    p: tuple
    q: tuple
    r: tuple


FeasibilityOutcome = Union[Primal, Dual]


def _dot(row, x):
    return sum((a * b for a, b in zip(row, x)), Fraction(0))


def check_primal(system: FeasibilitySystem, x: Sequence) -> bool:
    return (
        all(_dot(row, x) > 0 for row in system.strict)
        and all(_dot(row, x) >= 0 for row in system.weak)
        and all(_dot(row, x) == 0 for row in system.equality)
    )


def dual_combination(system: FeasibilitySystem, p, q, r) -> list[Fraction]:
    total = [Fraction(0)] * system.num_vars
    for mult, rows in ((p, system.strict), (q, system.weak), (r, system.equality)):
        for m, row in zip(mult, rows):
            if m:
                for k, v in enumerate(row):
                    if v:
                        total[k] += m * v
    return total


def check_dual(system: FeasibilitySystem, p, q, r) -> bool:
    if len(p) != len(system.strict) or len(q) != len(system.weak) or len(r) != len(system.equality):
        return False
    if any(v < 0 for v in p) or not any(v > 0 for v in p) or any(v < 0 for v in q):
        return False
    return all(v == 0 for v in dual_combination(system, p, q, r))


def lift_to_integers(p, q=(), r=()) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Clear denominators and divide out the common gcd."""
    p, q, r = [list(map(parse_rational, v)) for v in (p, q, r)]
    flat = integerize(p + q + r)
    a, b = len(p), len(p) + len(q)
    return tuple(flat[:a]), tuple(flat[a:b]), tuple(flat[b:])


def hadamard_bound(k: int, entry_bound=1) -> Fraction:
    """Upper bound ``(entry_bound * sqrt(k))**k`` on a k x k determinant."""
    if k < 0:
        raise ValueError("k must be non-negative")
    e = parse_rational(entry_bound)
    if k == 0:
        return Fraction(1)
    base = e**k * Fraction(k) ** (k // 2)
    if k % 2:
        base *= sqrt_upper(k)
    return base


class _Tableau:
    """Integer tableau for ``max c.v  s.t.  M v <= b, v >= 0`` with ``b >= 0``."""

    def __init__(self, M: list[list[int]], b: list[int], c: list[int]):
        m, n = len(M), len(c)
        self.m, self.n = m, n
        big = max([abs(v) for row in M for v in row] + [abs(v) for v in b] + [abs(v) for v in c] + [1])
        dtype = np.int64 if big < _INT64_SAFE else object
        T = np.zeros((m + 1, n + m + 1), dtype=dtype)
        for i in range(m):
            T[i, :n] = M[i]
            T[i, n + i] = 1
            T[i, -1] = b[i]
        T[m, :n] = [-v for v in c]
        self.T = T
        self.D = 1
        self.basis = list(range(n, n + m))

    def _pivot(self, r: int, c: int):
        T = self.T
        if T.dtype != object and max(int(np.abs(T).max()), self.D) >= _INT64_SAFE:
            T = self.T = T.astype(object)
        pr = T[r].copy()
        pc = T[:, c].copy()
        piv = pr[c]
        new = (T * piv - np.outer(pc, pr)) // self.D
        new[r] = pr
        self.T = new
        self.D = int(piv)
        self.basis[r] = c

    def run(self, max_iter: int = 100_000):
        for _ in range(max_iter):
            obj = self.T[self.m, :-1]
            neg = np.nonzero(obj < 0)[0]
            if neg.size == 0:
                return
            c = int(neg[0])  # Bland: smallest entering index
            col = self.T[: self.m, c]
            best = None
            for i in np.nonzero(col > 0)[0]:
                i = int(i)
                num, den = self.T[i, -1], col[i]
                if best is None:
                    best = (i, num, den)
                    continue
                _, bn, bd = best
                lhs, rhs = num * bd, bn * den
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best[0]]):
                    best = (i, num, den)
            if best is None:
                raise VerificationFailure("bounded program reported unbounded")
            self._pivot(best[0], c)
        raise VerificationFailure("simplex iteration limit reached")

    def value(self, var: int) -> Fraction:
        if var in self.basis:
            r = self.basis.index(var)
            return Fraction(int(self.T[r, -1]), self.D)
        return Fraction(0)

    def dual(self, row: int) -> Fraction:
        return Fraction(int(self.T[self.m, self.n + row]), self.D)


def _integer_rows(rows):
    """Scale each row to a primitive integer vector (positive factor)."""
    out, scales = [], []
    for row in rows:
        ints = integerize(row)
        nz = next((k for k, v in enumerate(row) if v), None)
        s = Fraction(ints[nz]) / row[nz] if nz is not None else Fraction(1)
        out.append(ints)
        scales.append(s)
    return out, scales


def solve(system: FeasibilitySystem) -> FeasibilityOutcome:
    d = system.num_vars
    if d == 0:
        raise EmptySystem("system has no variables")
    if not system.strict:
        x = tuple(Fraction(0) for _ in range(d))
        if not check_primal(system, x):
            raise VerificationFailure("zero vector failed a system without strict rows")
        return Primal(x)

    A, sa = _integer_rows(system.strict)
    B, sb = _integer_rows(system.weak)
    C, sc = _integer_rows(system.equality)
    n = 2 * d + 1
    t = 2 * d
    M, rhs = [], []
    for row in A:
        M.append([-v for v in row] + list(row) + [1])
        rhs.append(0)
    for row in B:
        M.append([-v for v in row] + list(row) + [0])
        rhs.append(0)
    for row in C:
        M.append(list(row) + [-v for v in row] + [0])
        rhs.append(0)
        M.append([-v for v in row] + list(row) + [0])
        rhs.append(0)
    box_start = len(M)
    for k in range(2 * d):
        unit = [0] * n
        unit[k] = 1
        M.append(unit)
        rhs.append(1)
    unit = [0] * n
    unit[t] = 1
    M.append(unit)
    rhs.append(1)
    cost = [0] * n
    cost[t] = 1

    tab = _Tableau(M, rhs, cost)
    tab.run()
    t_star = tab.value(t)

    if t_star > 0:
        x = tuple(tab.value(k) - tab.value(d + k) for k in range(d))
        if not check_primal(system, x):
            raise VerificationFailure("primal vertex failed verification")
        return Primal(x)

    a, b = len(A), len(B)
    yA = [tab.dual(i) * sa[i] for i in range(a)]
    yB = [tab.dual(a + i) * sb[i] for i in range(b)]
    yC = [(tab.dual(a + b + 2 * i) - tab.dual(a + b + 2 * i + 1)) * sc[i] for i in range(len(C))]
    if any(tab.dual(k) != 0 for k in range(box_start, len(M))):
        raise VerificationFailure("box multipliers nonzero at t* = 0")
    # Stationarity reads -yA A - yB B + yC C = 0, so r = -yC.
    p, q, r = lift_to_integers(yA, yB, [-v for v in yC])
    if not check_dual(system, p, q, r):
        raise VerificationFailure("dual multipliers failed verification")
    return Dual(p, q, r)


def system_to_dict(system: FeasibilitySystem) -> dict:
    labels = system.column_labels
    return {
        "columns": [list(l) if isinstance(l, tuple) else l for l in labels] if labels else None,
        "strict": [[format_rational(v) for v in row] for row in system.strict],
        "weak": [[format_rational(v) for v in row] for row in system.weak],
        "equality": [[format_rational(v) for v in row] for row in system.equality],
    }


def system_from_dict(data: dict) -> FeasibilitySystem:
    rows = {k: [[parse_rational(v) for v in row] for row in data.get(k, [])] for k in ("strict", "weak", "equality")}
    cols = data.get("columns")
    d = len(cols) if cols else max((len(r[0]) for r in rows.values() if r), default=0)
    labels = tuple(tuple(c) if isinstance(c, list) else c for c in cols) if cols else None
    return FeasibilitySystem(d, rows["strict"], rows["weak"], rows["equality"], labels)

