"""Decide (strategic) separability and produce verified witnesses.

A representation is a table ``g[j][s0, sj]`` with one block per opponent;
the focal utility it induces is ``sum_j g[j][s0, s_j]``.  Columns of the
feasibility systems are the triples ``(j, s0, sj)`` in that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional, Union

import numpy as np

from . import _kernels
from .axioms import BalancedCertificate, verify_certificate
from .errors import DualIdentityViolated, NotApplicable, VerificationFailure
from .game import (
    FullOrder,
    Game,
    PreferenceFamily,
    full_order_from_utility,
    preference_family,
)
from .lp import Dual, FeasibilitySystem, Primal, check_dual, solve
from .rationals import integerize, sqrt_upper


class Mode(str, Enum):
    STRATEGIC = "strategic"
    FULL = "full"


def _mode(mode) -> Mode:
    return mode if isinstance(mode, Mode) else Mode(str(mode).lower())


def column_labels(game: Game) -> list[tuple[int, int, int]]:
    return [
        (j, s0, sj)
        for pos, j in enumerate(game.opponents)
        for s0 in range(game.shape[0])
        for sj in range(game.opponent_shape[pos])
    ]


def _offsets(game: Game) -> list[int]:
    out, acc = [], 0
    for k in game.opponent_shape:
        out.append(acc)
        acc += game.shape[0] * k
    return out


@dataclass(frozen=True, eq=False)
class Representation:
    mode: Mode
    opponents: tuple
    blocks: tuple  # one (num_focal, |S_j|) object array per opponent

    @property
    def g(self) -> dict:
        return {
            (j, s0, sj): self.blocks[pos][s0, sj]
            for pos, j in enumerate(self.opponents)
            for s0, sj in np.ndindex(self.blocks[pos].shape)
        }

    def value(self, axes_profile) -> Fraction:
        s0 = axes_profile[0]
        return sum(
            (blk[s0, axes_profile[pos + 1]] for pos, blk in enumerate(self.blocks)),
            Fraction(0),
        )

    def table(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        for idx in np.ndindex(*shape):
            out[idx] = self.value(idx)
        return out

    @classmethod
    def zeros(cls, game: Game, mode) -> "Representation":
        blocks = tuple(
            np.full((game.shape[0], k), Fraction(0), dtype=object) for k in game.opponent_shape
        )
        return cls(_mode(mode), game.opponents, blocks)

    @classmethod
    def from_vector(cls, game: Game, mode, x) -> "Representation":
        blocks, k = [], 0
        for size in game.opponent_shape:
            n = game.shape[0] * size
            blk = np.empty(n, dtype=object)
            blk[:] = [Fraction(v) for v in x[k:k + n]]
            blocks.append(blk.reshape(game.shape[0], size))
            k += n
        return cls(_mode(mode), game.opponents, tuple(blocks))

    def normalized(self) -> "Representation":
        """Same induced utility, shifted and rescaled for display.

        For each focal action, every block but the last is shifted to have
        minimum 0 and the last block absorbs the shift; then the whole table
        is scaled to coprime integers.
        """
        blocks = [b.copy() for b in self.blocks]
        if not blocks:
            return self
        for s0 in range(blocks[0].shape[0]):
            for blk in blocks[:-1]:
                shift = min(blk[s0])
                blk[s0] = [v - shift for v in blk[s0]]
                blocks[-1][s0] = [v + shift for v in blocks[-1][s0]]
        flat = [v for b in blocks for v in b.ravel()]
        ints = integerize(flat) if any(flat) else [0] * len(flat)
        out, k = [], 0
        for b in blocks:
            arr = np.empty(b.size, dtype=object)
            arr[:] = [Fraction(v) for v in ints[k:k + b.size]]
            out.append(arr.reshape(b.shape))
            k += b.size
        return Representation(self.mode, self.opponents, tuple(out))


@dataclass(frozen=True)
class Separable:
    rep: Representation


@dataclass(frozen=True)
class NotSeparable:
    cert: BalancedCertificate


SeparabilityVerdict = Union[Separable, NotSeparable]


@dataclass(frozen=True)
class NoneWithinBudget:
    budget: int


def _row(game: Game, offsets, better, worse, d) -> list[int]:
    row = [0] * d
    K = game.opponent_shape
    for pos in range(len(K)):
        base = offsets[pos]
        row[base + better[0] * K[pos] + better[pos + 1]] += 1
        row[base + worse[0] * K[pos] + worse[pos + 1]] -= 1
    return row


def _comparisons(groups, pairwise):
    """Yield (better, worse, strict) from rank-sorted groups of items."""
    if pairwise:
        flat = [(rank, item) for rank, members in enumerate(groups) for item in members]
        for (ra, a), (rb, b) in itertools.product(flat, repeat=2):
            if a == b:
                continue
            if ra < rb:
                yield a, b, True
            elif ra == rb:
                yield a, b, False
        return
    for members in groups:
        for a, b in zip(members, members[1:]):
            yield a, b, False
            yield b, a, False
    for upper, lower in zip(groups, groups[1:]):
        yield upper[0], lower[0], True


def _assemble(game: Game, comparisons) -> FeasibilitySystem:
    d = sum(game.shape[0] * k for k in game.opponent_shape)
    offsets = _offsets(game)
    strict, weak, stags, wtags = [], [], [], []
    for better, worse, is_strict in comparisons:
        row = _row(game, offsets, better, worse, d)
        tag = (game.to_roster(better), game.to_roster(worse))
        if is_strict:
            strict.append(row)
            stags.append(tag)
        else:
            weak.append(row)
            wtags.append(tag)
    return FeasibilitySystem(
        d, strict, weak, (), tuple(column_labels(game)), tuple(stags), tuple(wtags)
    )


def _groups(items, ranks):
    by_rank: dict[int, list] = {}
    for item, r in zip(items, ranks):
        by_rank.setdefault(int(r), []).append(item)
    return [by_rank[r] for r in sorted(by_rank)]


def build_strategic_system(
    family: PreferenceFamily, game: Game, pairwise: bool = False
) -> FeasibilitySystem:
    """Rows compare focal actions within each opponent profile.

    By default only adjacent rank classes are compared (one strict row per
    step, two opposing weak rows per tie link); ``pairwise=True`` emits
    every ordered pair instead.
    """
    def comparisons():
        for s_plus in game.opponent_profiles():
            ranks = family.ranks[(slice(None), *s_plus)]
            groups = _groups([(a,) + s_plus for a in range(game.shape[0])], ranks)
            yield from _comparisons(groups, pairwise)

    return _assemble(game, comparisons())


def build_full_system(order: FullOrder, game: Game, pairwise: bool = False) -> FeasibilitySystem:
    profiles = list(np.ndindex(*game.shape))
    ranks = [order.ranks[p] for p in profiles]
    return _assemble(game, _comparisons(_groups(profiles, ranks), pairwise))


def _prefs(game: Game, mode: Mode):
    if mode is Mode.STRATEGIC:
        return preference_family(game)
    return full_order_from_utility(game)


def _system(game: Game, mode: Mode, prefs, pairwise=False):
    if mode is Mode.STRATEGIC:
        return build_strategic_system(prefs, game, pairwise)
    return build_full_system(prefs, game, pairwise)


def extract_certificate(dual, system: FeasibilitySystem, game: Game) -> BalancedCertificate:
    """Turn integral multipliers into profile pairs, ``l`` copies per row."""
    if isinstance(dual, Dual):
        p, q = dual.p, dual.q
    else:
        p, q = dual
    if not check_dual(system, p, q, (0,) * len(system.equality)):
        raise DualIdentityViolated("multipliers do not cancel or p has no positive entry")
    pairs = []
    for mult, tags in ((p, system.strict_tags), (q, system.weak_tags)):
        for m, tag in zip(mult, tags):
            pairs.extend([tag] * int(m))
    return BalancedCertificate(tuple(pairs))


class RepresentationCheck(NamedTuple):
    ok: bool
    first_disagreement: Optional[tuple]


def verify_representation(rep: Representation, game: Game) -> RepresentationCheck:
    """Exhaustively compare the representation with the game's preferences.

    Strategic mode checks every focal pair at every opponent profile; full
    mode checks every pair of profiles.  Disagreements are reported as
    roster-order profile pairs ``(r, t)``.
    """
    table = rep.table(game.shape)
    if rep.mode is Mode.STRATEGIC:
        family = preference_family(game)
        for s_plus in game.opponent_profiles():
            ranks = family.ranks[(slice(None), *s_plus)]
            vals = table[(slice(None), *s_plus)]
            for a in range(len(ranks)):
                for b in range(a + 1, len(ranks)):
                    if np.sign(int(ranks[b] - ranks[a])) != _sign(vals[a] - vals[b]):
                        return RepresentationCheck(
                            False, (game.to_roster((a,) + s_plus), game.to_roster((b,) + s_plus))
                        )
        return RepresentationCheck(True, None)
    order = full_order_from_utility(game)
    profiles = list(np.ndindex(*game.shape))
    ranks = np.array([order.ranks[p] for p in profiles])
    vals = [table[p] for p in profiles]
    by_rank = sorted(range(len(profiles)), key=lambda k: (ranks[k], k))
    ok = True
    for u, v in zip(by_rank, by_rank[1:]):
        same = ranks[u] == ranks[v]
        if (same and vals[u] != vals[v]) or (not same and not vals[u] > vals[v]):
            ok = False
            break
    if ok:
        return RepresentationCheck(True, None)
    for u in range(len(profiles)):
        for v in range(u + 1, len(profiles)):
            if np.sign(int(ranks[v] - ranks[u])) != _sign(vals[u] - vals[v]):
                return RepresentationCheck(
                    False, (game.to_roster(profiles[u]), game.to_roster(profiles[v]))
                )
    raise VerificationFailure("sorted check and pairwise check disagree")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def decide(game: Game, mode=Mode.STRATEGIC) -> SeparabilityVerdict:
    mode = _mode(mode)
    prefs = _prefs(game, mode)
    system = _system(game, mode, prefs)
    if not system.strict:
        rep = Representation.zeros(game, mode)
        return Separable(rep)
    outcome = solve(system)
    if isinstance(outcome, Primal):
        rep = Representation.from_vector(game, mode, outcome.x).normalized()
        ok, bad = verify_representation(rep, game)
        if not ok:
            raise VerificationFailure(f"representation disagrees at {bad}")
        return Separable(rep)
    cert = extract_certificate(outcome, system, game)
    ok, failed = verify_certificate(cert, prefs, game)
    if not ok:
        raise VerificationFailure(f"certificate fails condition ({failed})")
    return NotSeparable(cert)


def minimal_certificate(game: Game, mode=Mode.STRATEGIC, length_budget: int = 8, backend=None):
    """Shortest balanced sequence of length <= ``length_budget``.

    Enumerates integer multiplier vectors of growing l1 norm over the
    all-pairs system (adjacent-rank rows would miss shortcuts) and returns
    the first that cancels, or :class:`NoneWithinBudget`.
    """
    mode = _mode(mode)
    prefs = _prefs(game, mode)
    system = _system(game, mode, prefs, pairwise=True)
    if not system.strict or isinstance(solve(system), Primal):
        raise NotApplicable("preferences are separable; no certificate exists")
    rows = np.array(list(system.strict) + list(system.weak), dtype=object).astype(np.int64)
    tags = list(system.strict_tags) + list(system.weak_tags)
    for length in range(1, length_budget + 1):
        counts = _kernels.balanced_search(rows, len(system.strict), length, backend)
        if counts is None:
            continue
        pairs = []
        for c, tag in zip(counts, tags):
            pairs.extend([tag] * int(c))
        cert = BalancedCertificate(tuple(pairs))
        ok, failed = verify_certificate(cert, prefs, game)
        if not ok:
            raise VerificationFailure(f"search produced a failing certificate ({failed})")
        return cert
    return NoneWithinBudget(length_budget)


def length_bound(m: int) -> Fraction:
    """Outward-rounded ``(m-1)**((m+1)/2)``."""
    if m < 1:
        raise ValueError("need at least one profile")
    base = m - 1
    if (m + 1) % 2 == 0:
        return Fraction(base ** ((m + 1) // 2))
    return Fraction(base ** (m // 2)) * sqrt_upper(base)


def certificate_length_bound(game: Game) -> Fraction:
    return length_bound(game.num_profiles)
