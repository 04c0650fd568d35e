"""Bilateral decomposition of a Bernoulli index over pure profiles.

Profiles here are full profiles in roster order and ``n`` is the total
player count, so the telescoping factor is ``n - 2``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import GameError, SplitMismatch, TooFewPlayers, VerificationFailure
from .game import Game
from .rationals import format_rational, parse_rational


@dataclass(frozen=True, eq=False)
class BernoulliIndex:
    """``values[s]`` for every roster-order profile ``s``."""

    values: np.ndarray
    focal: int = 0

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx in np.ndindex(arr.shape):
            out[idx] = parse_rational(arr[idx])
        out.setflags(write=False)
        object.__setattr__(self, "values", out)
        if not 0 <= self.focal < out.ndim:
            raise GameError("focal index out of range")

    @property
    def num_players(self) -> int:
        return self.values.ndim

    @property
    def shape(self) -> tuple:
        return self.values.shape

    def __call__(self, profile) -> Fraction:
        return self.values[tuple(profile)]

    @classmethod
    def from_game(cls, game: Game) -> "BernoulliIndex":
        if game.utility is None:
            raise GameError("a Bernoulli index needs a utility table")
        # Axes order puts the focal player first; move it back to its roster slot.
        return cls(np.moveaxis(game.utility, 0, game.focal), game.focal)


@dataclass(frozen=True)
class Lottery:
    """Finite-support lottery; duplicate profiles are merged."""

    support: tuple

    def __post_init__(self):
        merged: dict = {}
        for prof, p in self.support:
            p = parse_rational(p)
            if p <= 0:
                raise ValueError("probabilities must be positive")
            prof = tuple(int(v) for v in prof)
            merged[prof] = merged.get(prof, Fraction(0)) + p
        if sum(merged.values(), Fraction(0)) != 1:
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "support", tuple(sorted(merged.items())))

    def marginal(self, players) -> dict:
        out: dict = defaultdict(Fraction)
        for prof, p in self.support:
            out[tuple(prof[k] for k in players)] += p
        return dict(out)

    def expected(self, index: BernoulliIndex) -> Fraction:
        return sum((p * index(prof) for prof, p in self.support), Fraction(0))


@dataclass(frozen=True)
class BilateralDecomposition:
    u_ij: dict  # (j, s_i, s_j) -> rational
    ubar: dict  # (j, s_i) -> rational
    reference: tuple
    error: Fraction
    worst_profile: Optional[tuple]

    def reconstruct(self, profile, focal: int) -> Fraction:
        opps = sorted({j for j, _, _ in self.u_ij})
        return sum((self.u_ij[(j, profile[focal], profile[j])] for j in opps), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "reference": list(self.reference),
            "ubar": {f"{j}|{si}": format_rational(v) for (j, si), v in sorted(self.ubar.items())},
            "u_ij": {
                f"{j}|{si}|{sj}": format_rational(v) for (j, si, sj), v in sorted(self.u_ij.items())
            },
        }


def _need_three(index: BernoulliIndex):
    if index.num_players < 3:
        raise TooFewPlayers(f"need at least 3 players, got {index.num_players}")


def _replace(profile, changes: dict) -> tuple:
    out = list(profile)
    for k, v in changes.items():
        out[k] = v
    return tuple(out)


def equal_split(index: BernoulliIndex, reference) -> dict:
    i, n = index.focal, index.num_players
    opps = [j for j in range(n) if j != i]
    return {
        j: tuple(index(_replace(reference, {i: si})) / (n - 1) for si in range(index.shape[i]))
        for j in opps
    }


def decompose(index: BernoulliIndex, reference=None, split: Optional[dict] = None) -> BilateralDecomposition:
    """``u_ij(s_i, s_j) = u(s_i, s_j, s*_-ij) - (n - 2) * ubar_j(s_i)``.

    ``split`` maps each opponent to its ``ubar_j`` values, one per focal
    action; they must add up to ``u(., s*_-i)``.  Defaults to the equal
    split.  The reported error is ``max_s |sum_j u_ij - u(s)|``.
    """
    _need_three(index)
    i, n = index.focal, index.num_players
    opps = [j for j in range(n) if j != i]
    reference = tuple(0 for _ in range(n)) if reference is None else tuple(int(v) for v in reference)
    if len(reference) != n or any(not 0 <= r < k for r, k in zip(reference, index.shape)):
        raise GameError("reference profile does not index the game")
    split = equal_split(index, reference) if split is None else split
    if set(split) != set(opps):
        raise SplitMismatch("split must give one ubar per opponent")
    ubar = {}
    for si in range(index.shape[i]):
        total = Fraction(0)
        for j in opps:
            v = parse_rational(split[j][si])
            ubar[(j, si)] = v
            total += v
        if total != index(_replace(reference, {i: si})):
            raise SplitMismatch(f"ubar does not add up to u(s_i, s*) at s_i = {si}")
    u_ij = {}
    for j in opps:
        for si in range(index.shape[i]):
            for sj in range(index.shape[j]):
                u_ij[(j, si, sj)] = index(_replace(reference, {i: si, j: sj})) - (n - 2) * ubar[(j, si)]
    err, worst = Fraction(0), None
    for prof in np.ndindex(*index.shape):
        gap = abs(sum((u_ij[(j, prof[i], prof[j])] for j in opps), Fraction(0)) - index(prof))
        if gap > err:
            err, worst = gap, tuple(int(v) for v in prof)
    return BilateralDecomposition(u_ij, ubar, reference, err, worst)


def counterexample_lotteries(index: BernoulliIndex, profile, base) -> tuple[Lottery, Lottery]:
    """The 1/(n-1) mixtures around ``base`` that share all focal pairwise marginals.

    ``p`` puts 1/(n-1) on ``profile`` and the rest on ``(s_i, base_-i)``;
    ``q`` puts 1/(n-1) on each ``(s_i, s_j, base_-ij)``.
    """
    i, n = index.focal, index.num_players
    si = profile[i]
    w = Fraction(1, n - 1)
    p = Lottery(((tuple(profile), w), (_replace(base, {i: si}), (n - 2) * w)))
    q = Lottery(
        tuple((_replace(base, {i: si, j: profile[j]}), w) for j in range(n) if j != i)
    )
    return p, q


def same_focal_marginals(p: Lottery, q: Lottery, focal: int, n: int) -> bool:
    return all(p.marginal((focal, j)) == q.marginal((focal, j)) for j in range(n) if j != focal)


class MarginalCheck(NamedTuple):
    holds: bool
    counterexample: Optional[tuple]  # (p, q)
    decomposition: BilateralDecomposition


def check_pairwise_marginal_condition(
    index: BernoulliIndex, samples: int = 0, seed: int = 0, reference=None
) -> MarginalCheck:
    """Exact test through the decomposition, plus a random spot check.

    The spot check draws ``samples`` (profile, base) pairs, builds the
    matching lottery pair around each base and compares expected utilities;
    a mismatch while the exact test holds is an internal error.
    """
    dec = decompose(index, reference)
    n, i = index.num_players, index.focal
    if dec.error:
        p, q = counterexample_lotteries(index, dec.worst_profile, dec.reference)
        if not same_focal_marginals(p, q, i, n) or p.expected(index) == q.expected(index):
            raise VerificationFailure("counterexample lotteries failed their own check")
        return MarginalCheck(False, (p, q), dec)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        prof = tuple(int(rng.integers(k)) for k in index.shape)
        base = tuple(int(rng.integers(k)) for k in index.shape)
        p, q = counterexample_lotteries(index, prof, base)
        if p.expected(index) != q.expected(index):
            raise VerificationFailure("exact test and spot check disagree")
    return MarginalCheck(True, None, dec)
