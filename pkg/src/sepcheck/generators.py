"""Utility families used as test beds: linear-quadratic, linear aggregates,
random additively separable tables, the tan obstruction, the b = 0.15 log
example and separable games with an injected 4-cycle.

The focal player is always player 0.  Rational families are tabulated
exactly.  Families involving ln, sqrt, exp or tan are evaluated in floats
and snapped to rationals; generation aborts with :class:`AmbiguousTie`
when two distinct float values fall closer than the gap guard.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import AmbiguousTie, DomainError, GameError
from .game import Game
from .rationals import GAP_GUARD, parse_rational, snap


class Family(str, Enum):
    LINQUAD = "linquad"
    AGGREGATE = "aggregate"
    RANDOM_SEPARABLE = "random_separable"
    TAN_OBSTRUCTION = "tan_obstruction"
    LOG_EXAMPLE = "log_example"
    CYCLE_PERTURBED = "cycle_perturbed"


@dataclass(frozen=True)
class Poly:
    """``sum(c_k * x**k)`` with rational coefficients, lowest degree first."""

    coeffs: tuple = (0,)
    exact = True

    def __call__(self, x):
        x = Fraction(x)
        return sum((parse_rational(c) * x**k for k, c in enumerate(self.coeffs)), Fraction(0))

    def as_float(self, x: float) -> float:
        return sum(float(parse_rational(c)) * x**k for k, c in enumerate(self.coeffs))


@dataclass(frozen=True)
class ExpTerm:
    """``scale * exp(rate * x + shift)``."""

    scale: object = 1
    rate: object = 1
    shift: object = 0
    exact = False

    def as_float(self, x: float) -> float:
        s, r, c = (float(parse_rational(v)) for v in (self.scale, self.rate, self.shift))
        return s * math.exp(r * x + c)


PSI = ("identity", "log", "sqrt", "poly")


@dataclass(frozen=True)
class GeneratorSpec:
    family: Family
    focal_grid: tuple = ()
    grids: tuple = ()
    b: object = 0
    weights: tuple = ()
    f: Optional[object] = None
    gamma: Optional[object] = None
    psi: str = "identity"
    psi_coeffs: tuple = ()
    seed: int = 0
    magnitude: int = 5
    gap: float = GAP_GUARD
    base: Optional["GeneratorSpec"] = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "focal_grid", tuple(parse_rational(v) for v in self.focal_grid))
        object.__setattr__(
            self, "grids", tuple(tuple(parse_rational(v) for v in g) for g in self.grids)
        )
        object.__setattr__(self, "weights", tuple(parse_rational(v) for v in self.weights))
        object.__setattr__(self, "b", parse_rational(self.b))
        for grid in (self.focal_grid,) + self.grids:
            if any(x >= y for x, y in zip(grid, grid[1:])):
                raise GameError("grids must be strictly increasing")
        if self.psi not in PSI:
            raise GameError(f"psi must be one of {PSI}")


def _actions(spec: GeneratorSpec):
    if not spec.focal_grid or not spec.grids:
        raise GameError("generator needs a focal grid and at least one opponent grid")
    return (spec.focal_grid,) + spec.grids


def _weights(spec: GeneratorSpec):
    w = spec.weights or (Fraction(1),) * len(spec.grids)
    if len(w) != len(spec.grids):
        raise GameError(f"{len(w)} weights for {len(spec.grids)} opponents")
    return w


def _aggregate(weights, opp_vals) -> Fraction:
    return sum((w * v for w, v in zip(weights, opp_vals)), Fraction(0))


def _snap_table(floats: np.ndarray, gap: float) -> np.ndarray:
    flat = floats.ravel()
    if not np.all(np.isfinite(flat)):
        raise DomainError("utility evaluated to a non-finite value")
    distinct = np.unique(flat)
    if distinct.size > 1:
        diffs = np.diff(distinct)
        k = int(np.argmin(diffs))
        if diffs[k] < gap:
            raise AmbiguousTie(
                f"values {distinct[k]!r} and {distinct[k + 1]!r} differ by {diffs[k]:.3g} < {gap:g}"
            )
    out = np.empty(floats.shape, dtype=object)
    for idx in np.ndindex(floats.shape):
        out[idx] = snap(float(floats[idx]))
    return out


def _tabulate(actions, fn) -> np.ndarray:
    shape = tuple(len(a) for a in actions)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(shape):
        out[idx] = fn(actions[0][idx[0]], tuple(actions[k + 1][i] for k, i in enumerate(idx[1:])))
    return out


def _psi_float(spec: GeneratorSpec, a: Fraction) -> float:
    if spec.psi == "identity":
        return float(a)
    if spec.psi == "poly":
        return Poly(spec.psi_coeffs).as_float(float(a))
    if a <= 0:
        raise DomainError(f"{spec.psi} of non-positive aggregate {a}")
    return math.log(a) if spec.psi == "log" else math.sqrt(a)


def _term_float(term, x: Fraction) -> float:
    return term.as_float(float(x))


def _gen_linquad(spec):
    w, b = _weights(spec), spec.b
    return _tabulate(
        _actions(spec), lambda s0, opp: b * s0 + s0 * _aggregate(w, opp) - s0 * s0 / 2
    ), True


def _gen_aggregate(spec):
    w = _weights(spec)
    f = spec.f if spec.f is not None else Poly((0,))
    gamma = spec.gamma if spec.gamma is not None else Poly((0, 1))
    exact = f.exact and gamma.exact and spec.psi in ("identity", "poly")
    if exact:
        psi = (lambda a: a) if spec.psi == "identity" else Poly(spec.psi_coeffs)
        return _tabulate(
            _actions(spec), lambda s0, opp: f(s0) + gamma(s0) * psi(_aggregate(w, opp))
        ), True
    return _tabulate(
        _actions(spec),
        lambda s0, opp: _term_float(f, s0)
        + _term_float(gamma, s0) * _psi_float(spec, _aggregate(w, opp)),
    ), False


def separable_blocks(spec: GeneratorSpec) -> list[np.ndarray]:
    """The integer blocks ``g[j][s0, sj]`` behind a random separable game."""
    rng = np.random.default_rng(spec.seed)
    k = spec.magnitude
    return [
        rng.integers(-k, k + 1, size=(len(spec.focal_grid), len(g))).astype(object)
        for g in spec.grids
    ]


def _gen_random_separable(spec):
    _actions(spec)
    blocks = separable_blocks(spec)
    shape = (len(spec.focal_grid),) + tuple(len(g) for g in spec.grids)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(shape):
        out[idx] = Fraction(sum(int(blk[idx[0], idx[pos + 1]]) for pos, blk in enumerate(blocks)))
    return out, True


def _gen_tan_obstruction(spec):
    actions = _actions(spec)
    half_pi = math.pi / 2
    low = [
        math.tan(float(s0)) * float(sum(opp))
        for s0 in actions[0]
        if float(s0) < half_pi
        for opp in _opp_values(actions)
    ]
    offset = math.ceil(max(low, default=0.0)) + 1

    def u(s0, opp):
        total = float(sum(opp))
        if float(s0) < half_pi:
            return math.tan(float(s0)) * total
        return offset + total

    if any(v <= 0 for g in spec.grids for v in g):
        raise DomainError("the tan example needs strictly positive opponent actions")
    return _tabulate(actions, u), False


def _opp_values(actions):
    return itertools.product(*actions[1:])


def _gen_log_example(spec):
    b = spec.b
    w = _weights(spec)

    def u(s0, opp):
        a = _aggregate(w, opp)
        if a <= 0:
            raise DomainError(f"log of non-positive aggregate {a}")
        return float(b * s0 - s0 * s0) + float(s0) * math.log(a)

    return _tabulate(_actions(spec), u), False


def log_example_spec(**overrides) -> GeneratorSpec:
    """The log example with b = 3/20 on a grid holding the eight values."""
    params = dict(
        family=Family.LOG_EXAMPLE,
        focal_grid=("1", "6/5"),
        grids=(("1/2", "1", "2", "5/2"), ("1/2", "1", "2", "5/2")),
        b="3/20",
        weights=(1, 1),
    )
    params.update(overrides)
    return GeneratorSpec(**params)


def inject_cycle(table: np.ndarray, rng) -> tuple[np.ndarray, tuple]:
    """Overwrite four slices of ``table`` so they form a single-switch cycle.

    Returns the new table and ``(a, b, pos, x, y, p, q)``: focal actions,
    opponent axis, its two actions and the two rest-profiles (axes order,
    flattened over the other opponents).
    """
    table = table.copy()
    S0 = table.shape[0]
    opp = table.shape[1:]
    choices = [pos for pos, k in enumerate(opp) if k >= 2]
    if S0 < 2 or not choices:
        raise GameError("cycle injection needs two focal actions and a binary opponent")
    rest_ok = [
        pos for pos in choices if int(np.prod(opp[:pos] + opp[pos + 1:], dtype=np.int64)) >= 2
    ]
    if not rest_ok:
        raise GameError("cycle injection needs a second non-trivial opponent")
    pos = int(rng.choice(rest_ok))
    a, b = (int(v) for v in rng.choice(S0, size=2, replace=False))
    x, y = (int(v) for v in rng.choice(opp[pos], size=2, replace=False))
    rest_shape = opp[:pos] + opp[pos + 1:]
    p, q = (int(v) for v in rng.choice(int(np.prod(rest_shape)), size=2, replace=False))
    top = max(table.ravel()) + 1

    def slice_index(own, rest):
        r = [int(v) for v in np.unravel_index(rest, rest_shape)]
        return tuple(r[:pos] + [own] + r[pos:])

    for own, rest, winner in ((x, p, a), (y, p, b), (x, q, b), (y, q, a)):
        s_plus = slice_index(own, rest)
        loser = b if winner == a else a
        table[(winner,) + s_plus] = top + 1
        table[(loser,) + s_plus] = top
    return table, (a, b, pos, x, y, p, q)


def _gen_cycle(spec):
    base = spec.base or GeneratorSpec(
        Family.RANDOM_SEPARABLE, spec.focal_grid, spec.grids, seed=spec.seed, magnitude=spec.magnitude
    )
    table, exact = _GENERATORS[base.family](base)
    if not exact:
        table = _snap_table(table.astype(float), spec.gap)
    out, _ = inject_cycle(table, np.random.default_rng(spec.seed + 1))
    return out, True


_GENERATORS = {
    Family.LINQUAD: _gen_linquad,
    Family.AGGREGATE: _gen_aggregate,
    Family.RANDOM_SEPARABLE: _gen_random_separable,
    Family.TAN_OBSTRUCTION: _gen_tan_obstruction,
    Family.LOG_EXAMPLE: _gen_log_example,
    Family.CYCLE_PERTURBED: _gen_cycle,
}


def generate(spec: GeneratorSpec) -> Game:
    table, exact = _GENERATORS[spec.family](spec)
    if not exact:
        table = _snap_table(table.astype(float), spec.gap)
    if spec.family is Family.CYCLE_PERTURBED:
        base = spec.base
        actions = (base.focal_grid,) + base.grids if base else _actions(spec)
    else:
        actions = _actions(spec)
    return Game(actions, 0, utility=table)


def linquad_values(b, weights, s0, opp) -> Fraction:
    """Closed form of the linear-quadratic utility, for hand checks."""
    return b * s0 + s0 * _aggregate(weights, opp) - s0 * s0 / 2


def uniform_grid(start, step, size: int) -> tuple:
    start, step = parse_rational(start), parse_rational(step)
    return tuple(start + k * step for k in range(size))


def grids_like(grid: Sequence, count: int) -> tuple:
    return tuple(tuple(grid) for _ in range(count))
