"""Constant rate of substitution on uniform grids and the linear canonical
form ``f(s0) + gamma(s0) * sum_j w_j s_j``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from .errors import GameError, MissingActionValues, NonUniformGrid
from .game import Game, PreferenceFamily, preference_family, strategically_equivalent
from .lp import FeasibilitySystem, Primal, solve
from .rationals import format_rational, integerize
from .separability import Mode, Representation


@dataclass(frozen=True)
class NotCRS:
    """No shift rate survives; ``witness`` is the first order-changing shift
    of the best-supported candidate: ``(delta, s_plus, shifted_s_plus)``."""

    reason: str
    witness: Optional[tuple] = None


@dataclass(frozen=True)
class NotFactorable:
    relation: str
    detail: Optional[dict] = None


@dataclass(frozen=True)
class LinearCanonicalForm:
    f: tuple  # per focal action
    gamma: tuple  # per focal action
    weights: dict  # opponent player -> weight

    def value(self, game: Game, axes_profile) -> Fraction:
        s0 = axes_profile[0]
        agg = sum(
            (
                self.weights.get(j, Fraction(0)) * game.actions[j][axes_profile[pos + 1]]
                for pos, j in enumerate(game.opponents)
            ),
            Fraction(0),
        )
        return self.f[s0] + self.gamma[s0] * agg

    def table(self, game: Game) -> np.ndarray:
        out = np.empty(game.shape, dtype=object)
        for idx in np.ndindex(*game.shape):
            out[idx] = self.value(game, idx)
        return out

    def to_dict(self) -> dict:
        return {
            "f": [format_rational(v) for v in self.f],
            "gamma": [format_rational(v) for v in self.gamma],
            "weights": {str(j): format_rational(w) for j, w in sorted(self.weights.items())},
        }


def _need_values(game: Game, player: int):
    if not game.has_values(player):
        raise MissingActionValues(f"player {player} has no action values")


def grid_step(values) -> Optional[Fraction]:
    """Common spacing of a uniform grid; None for a single point."""
    if len(values) < 2:
        return None
    steps = {b - a for a, b in zip(values, values[1:])}
    if len(steps) != 1:
        raise NonUniformGrid(f"grid {[format_rational(v) for v in values]} is not uniform")
    return steps.pop()


def _move(ranks: np.ndarray, pj: int, pk: int) -> np.ndarray:
    """Axes (focal, j, k, rest...)."""
    return np.moveaxis(ranks, (pj + 1, pk + 1), (1, 2))


def _shift_steps(delta: Fraction, hj, hk, Sj: int, Sk: int):
    steps = []
    for m in range(1, Sj):
        n = -delta * m * hj / hk if hk is not None else (Fraction(0) if delta == 0 else None)
        if n is None or n.denominator != 1 or abs(n) > Sk - 1:
            continue
        steps.append((m, int(n)))
    return steps


def _check_delta(M: np.ndarray, steps):
    """(instances, first mismatch) over all in-grid integer steps."""
    Sj, Sk = M.shape[1], M.shape[2]
    count, first = 0, None
    for m, n in steps:
        lo, hi = max(0, -n), Sk - max(0, n)
        if hi <= lo:
            continue
        A = M[:, : Sj - m, lo:hi]
        B = M[:, m:, lo + n: hi + n]
        diff = np.any(A != B, axis=0)
        count += diff.size
        if first is None and diff.any():
            x, y, *rest = (int(v) for v in np.unravel_index(int(np.argmax(diff)), diff.shape))
            first = (m, n, x, y + lo, tuple(rest))
    return count, first


def _unmove(pj, pk, nopp, xj, xk, rest):
    out, it = [0] * nopp, iter(rest)
    for pos in range(nopp):
        if pos == pj:
            out[pos] = xj
        elif pos == pk:
            out[pos] = xk
        else:
            out[pos] = next(it)
    return tuple(out)


def _rate_table(game: Game, j: int, k: int):
    """Verified rates ``[(delta, instances)]`` and the best failing candidate."""
    for p in (j, k):
        if p == game.focal or p not in game.opponents:
            raise GameError(f"player {p} is not an opponent")
        _need_values(game, p)
    vj, vk = game.actions[j], game.actions[k]
    hj, hk = grid_step(vj), grid_step(vk)
    if hj is None:
        return None, None
    pj, pk = game.opponent_position(j), game.opponent_position(k)
    M = _move(preference_family(game).ranks, pj, pk)
    rest_shape = M.shape[3:]
    M = M.reshape(M.shape[0], M.shape[1], M.shape[2], -1)
    Sj, Sk = len(vj), len(vk)
    cands = {Fraction(0)}
    if hk is not None:
        cands |= {Fraction(b) * hk / (a * hj) for a in range(1, Sj) for b in range(-(Sk - 1), Sk)}
    verified, failing = [], None
    for delta in sorted(cands, key=lambda d: (abs(d), -d)):
        count, first = _check_delta(M, _shift_steps(delta, hj, hk, Sj, Sk))
        if count == 0:
            continue
        if first is None:
            verified.append((delta, count))
        elif failing is None or count > failing[1]:
            m, n, x, y, (flat,) = first
            rest = tuple(int(v) for v in np.unravel_index(flat, rest_shape))
            nopp = len(game.opponents)
            src = _unmove(pj, pk, nopp, x, y, rest)
            dst = _unmove(pj, pk, nopp, x + m, y + n, rest)
            failing = (delta, count, src, dst)
    # stable sort keeps (|delta|, -delta) order among equal counts
    verified.sort(key=lambda dc: -dc[1])
    return verified, failing


def detect_crs(game: Game, j: int, k: int) -> Union[Fraction, NotCRS]:
    """Rate ``delta`` with every shift ``(s_j + d, s_k - delta * d)`` keeping
    the slice orders, among grid-consistent ratios; the candidate verified on
    the most shifts wins."""
    if j == k:
        return Fraction(1)
    verified, failing = _rate_table(game, j, k)
    if verified is None:
        return NotCRS(f"player {j} has a single action; no shift is in the grid")
    if verified:
        return verified[0][0]
    if failing is None:
        return NotCRS("no in-grid shift exists")
    delta, _, src, dst = failing
    return NotCRS("every candidate rate changes some slice order", (delta, src, dst))


def essential_opponents(family: PreferenceFamily, game: Game) -> tuple:
    """Opponents whose action changes the focal order at some profile."""
    out = []
    for pos, j in enumerate(game.opponents):
        R = np.moveaxis(family.ranks, pos + 1, 1)
        if np.any(R != R[:, :1]):
            out.append(j)
    return tuple(out)


def _direct(rep: Representation, game: Game):
    """Per-block fit ``g = f_j(s0) + gamma_j(sj) + v_j(s0) * value(sj)``."""
    ref = 0
    fj, vj = {}, {}
    for pos, j in enumerate(game.opponents):
        blk, vals = rep.blocks[pos], game.actions[j]
        S0, Sj = blk.shape
        f = [blk[ref, 0]] * S0
        gam = [blk[ref, s] - blk[ref, 0] for s in range(Sj)]
        v = [Fraction(0)] * S0
        for s0 in range(S0):
            resid = [blk[s0, s] - gam[s] for s in range(Sj)]
            if Sj >= 2:
                v[s0] = (resid[1] - resid[0]) / (vals[1] - vals[0])
            f[s0] = resid[0] - v[s0] * vals[0]
            for s in range(Sj):
                if resid[s] != f[s0] + v[s0] * vals[s]:
                    return NotFactorable(
                        "block is not affine in the opponent's action",
                        {"opponent": j, "s0": s0, "sj": s},
                    )
        fj[j], vj[j] = f, v
    lead = next((j for j in game.opponents if any(vj[j])), None)
    S0 = game.shape[0]
    if lead is None:
        f = tuple(sum((fj[j][s0] for j in game.opponents), Fraction(0)) for s0 in range(S0))
        return LinearCanonicalForm(f, (Fraction(1),) * S0, {j: Fraction(0) for j in game.opponents})
    gamma = tuple(vj[lead])
    anchor = next(s0 for s0 in range(S0) if gamma[s0])
    weights = {}
    for j in game.opponents:
        w = vj[j][anchor] / gamma[anchor]
        bad = next((s0 for s0 in range(S0) if vj[j][s0] != w * gamma[s0]), None)
        if bad is not None:
            return NotFactorable(
                "slopes are not a constant multiple across opponents",
                {"opponent": j, "s0": bad, "reference_opponent": lead},
            )
        weights[j] = w
    f = tuple(sum((fj[j][s0] for j in game.opponents), Fraction(0)) for s0 in range(S0))
    return LinearCanonicalForm(f, gamma, weights)


MAX_WEIGHT_CANDIDATES = 4096


def crs_weight_candidates(game: Game):
    """Weight vectors from the verified pairwise rates against the first
    essential opponent, best-supported first; NotFactorable if some pair
    has no usable rate."""
    family = preference_family(game)
    ess = essential_opponents(family, game)
    zero = {j: Fraction(0) for j in game.opponents}
    if not ess:
        return [zero]
    lead = ess[0]
    options = []
    for k in ess[1:]:
        verified, failing = _rate_table(game, lead, k)
        rates = [d for d, _ in verified or () if d != 0]
        if not rates:
            return NotFactorable(
                f"no constant rate of substitution between {lead} and {k}",
                {"pair": (lead, k), "witness": failing[2:] if failing else None},
            )
        options.append([(k, 1 / d) for d in rates])
    out = []
    for combo in itertools.islice(itertools.product(*options), MAX_WEIGHT_CANDIDATES):
        w = dict(zero)
        w[lead] = Fraction(1)
        w.update(combo)
        out.append(w)
    return out


def crs_weights(game: Game) -> Union[dict, NotFactorable]:
    """Best-supported weight vector."""
    cands = crs_weight_candidates(game)
    return cands if isinstance(cands, NotFactorable) else cands[0]


def _refit(family: PreferenceFamily, game: Game, weights: dict):
    """Exact search for ``f, gamma`` given the weights."""
    S0 = game.shape[0]
    d = 2 * S0
    strict, weak = [], []
    for s_plus in game.opponent_profiles():
        agg = sum(
            (weights[j] * game.actions[j][s_plus[pos]] for pos, j in enumerate(game.opponents)),
            Fraction(0),
        )
        ranks = family.ranks[(slice(None), *s_plus)]
        order = sorted(range(S0), key=lambda a: (ranks[a], a))
        for a, b in zip(order, order[1:]):
            row = [Fraction(0)] * d
            row[a] += 1
            row[b] -= 1
            row[S0 + a] += agg
            row[S0 + b] -= agg
            if ranks[a] < ranks[b]:
                strict.append(row)
            else:
                weak.append(row)
                weak.append([-v for v in row])
    if not strict:
        return LinearCanonicalForm((Fraction(0),) * S0, (Fraction(1),) * S0, weights)
    out = solve(FeasibilitySystem(d, strict, weak))
    if not isinstance(out, Primal):
        return NotFactorable(
            "no f, gamma reproduce the orders with these weights",
            {"weights": {j: format_rational(w) for j, w in weights.items()}},
        )
    x = integerize(out.x)
    return LinearCanonicalForm(
        tuple(Fraction(v) for v in x[:S0]), tuple(Fraction(v) for v in x[S0:]), weights
    )


def canonicalize_crs(rep: Representation, game: Game) -> Union[LinearCanonicalForm, NotFactorable]:
    """Factor a strategic representation into the linear canonical form.

    The exact per-block factorization (pinned at the first grid point and
    the first focal action) is tried first.  A representation produced by
    the solver is rarely affine in opponent actions even when the orders
    are, so on failure the weights are read off the pairwise substitution
    rates and ``f, gamma`` are refit exactly against the orders.  Small
    grids can admit several verified rates per pair; candidates are tried
    best-supported first until a refit succeeds.
    """
    if rep.mode is not Mode.STRATEGIC:
        raise GameError("canonicalization needs a strategic representation")
    for j in game.opponents:
        _need_values(game, j)
    source = game.with_utility(rep.table(game.shape))
    direct = _direct(rep, game)
    if isinstance(direct, LinearCanonicalForm) and _reproduces(direct, source):
        return direct
    cands = crs_weight_candidates(source)
    if isinstance(cands, NotFactorable):
        return cands
    family = preference_family(source)
    form = None
    for weights in cands:
        form = _refit(family, source, weights)
        if isinstance(form, LinearCanonicalForm):
            if not _reproduces(form, source):
                return NotFactorable("refit form disagrees with the orders")
            return form
    return form


def _reproduces(form: LinearCanonicalForm, game: Game) -> bool:
    return strategically_equivalent(game.with_utility(form.table(game)), game).equivalent
