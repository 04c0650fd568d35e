"""Finite games, preference families and strategic equivalence.

Arrays are laid out in *axes order*: axis 0 is the focal player, axes
1..n are the opponents in roster order.  Profiles exposed to callers
(certificates, witnesses, files) are in *roster order*, i.e. indexed by
player number.  The two coincide when the focal player is 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Optional, Sequence

import numpy as np

from .errors import GameError, MissingUtility, ShapeMismatch
from .rationals import parse_rational


def dense_ranks(values: Sequence) -> list[int]:
    """Rank 0 for the largest value; ties share a rank; ranks are contiguous."""
    distinct = sorted(set(values), reverse=True)
    lookup = {v: r for r, v in enumerate(distinct)}
    return [lookup[v] for v in values]


def normalize_ranks(ranks: Sequence[int]) -> list[int]:
    """Map arbitrary rank labels (smaller = better) to contiguous ranks from 0."""
    distinct = sorted(set(ranks))
    lookup = {v: r for r, v in enumerate(distinct)}
    return [lookup[v] for v in ranks]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PreferenceFamily:
    """One total preorder over focal actions per opponent profile.

    ``ranks[a, *s_plus]`` is the rank of focal action ``a`` at ``s_plus``
    (opponent actions in roster order); smaller is better.
    """

    ranks: np.ndarray

    def __post_init__(self):
        ranks = np.array(self.ranks, dtype=np.int64)
        if ranks.ndim < 1 or ranks.shape[0] == 0:
            raise GameError("family needs at least one focal action")
        flat = ranks.reshape(ranks.shape[0], -1)
        for p in range(flat.shape[1]):
            flat[:, p] = normalize_ranks(flat[:, p].tolist())
        object.__setattr__(self, "ranks", _frozen(flat.reshape(ranks.shape)))

    @property
    def num_focal(self) -> int:
        return self.ranks.shape[0]

    @property
    def opponent_shape(self) -> tuple[int, ...]:
        return self.ranks.shape[1:]

    def weakly(self, a: int, b: int, s_plus: Sequence[int]) -> bool:
        """True iff focal action ``a`` is weakly preferred to ``b`` at ``s_plus``."""
        return self.ranks[(a, *s_plus)] <= self.ranks[(b, *s_plus)]

    def strictly(self, a: int, b: int, s_plus: Sequence[int]) -> bool:
        return self.ranks[(a, *s_plus)] < self.ranks[(b, *s_plus)]

    def flat(self) -> np.ndarray:
        """Ranks as a ``(num_focal, num_opponent_profiles)`` array."""
        return self.ranks.reshape(self.num_focal, -1)

    def __eq__(self, other):
        if not isinstance(other, PreferenceFamily):
            return NotImplemented
        return self.ranks.shape == other.ranks.shape and bool(
            np.array_equal(self.ranks, other.ranks)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class FullOrder:
    """Total preorder over all full profiles (axes order), smaller rank = better."""

    ranks: np.ndarray

    def __post_init__(self):
        ranks = np.array(self.ranks, dtype=np.int64)
        flat = normalize_ranks(ranks.ravel().tolist())
        object.__setattr__(
            self, "ranks", _frozen(np.array(flat, dtype=np.int64).reshape(ranks.shape))
        )

    def weakly(self, r: Sequence[int], t: Sequence[int]) -> bool:
        return self.ranks[tuple(r)] <= self.ranks[tuple(t)]

    def strictly(self, r: Sequence[int], t: Sequence[int]) -> bool:
        return self.ranks[tuple(r)] < self.ranks[tuple(t)]

    def restrict(self) -> PreferenceFamily:
        """The induced family of orders over focal actions."""
        return PreferenceFamily(self.ranks)

    def __eq__(self, other):
        if not isinstance(other, FullOrder):
            return NotImplemented
        return self.ranks.shape == other.ranks.shape and bool(
            np.array_equal(self.ranks, other.ranks)
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Game:
    """A finite normal-form game seen from one focal player.

    ``actions[i]`` lists player ``i``'s actions; each entry is an exact
    rational value or ``None``.  Exactly one of ``utility`` (object array
    of Fractions, axes order) or ``orders`` (a :class:`PreferenceFamily`
    or rank array, axes order) must be given.
    """

    actions: tuple
    focal: int = 0
    utility: Optional[np.ndarray] = None
    orders: Optional[PreferenceFamily] = None
    _shape: tuple = field(init=False, repr=False)

    def __post_init__(self):
        actions = []
        for i, acts in enumerate(self.actions):
            acts = tuple(None if a is None else parse_rational(a) for a in acts)
            if not acts:
                raise GameError(f"player {i} has an empty action set")
            vals = [a for a in acts if a is not None]
            if vals and len(vals) != len(acts):
                raise GameError(f"player {i} mixes valued and valueless actions")
            if any(x >= y for x, y in zip(vals, vals[1:])):
                raise GameError(f"player {i} action values are not strictly increasing")
            actions.append(acts)
        if len(actions) < 1:
            raise GameError("a game needs at least one player")
        if not 0 <= self.focal < len(actions):
            raise GameError(f"focal index {self.focal} out of range")
        object.__setattr__(self, "actions", tuple(actions))
        opps = [i for i in range(len(actions)) if i != self.focal]
        shape = (len(actions[self.focal]),) + tuple(len(actions[i]) for i in opps)
        object.__setattr__(self, "_shape", shape)

        if (self.utility is None) == (self.orders is None):
            raise GameError("exactly one of utility or orders is required")
        if self.utility is not None:
            table = np.empty(shape, dtype=object)
            given = np.asarray(self.utility, dtype=object)
            if given.shape != shape:
                if given.size != int(np.prod(shape)):
                    raise GameError(
                        f"utility has {given.size} entries, expected {int(np.prod(shape))}"
                    )
                given = given.reshape(shape)
            for idx in np.ndindex(shape):
                table[idx] = parse_rational(given[idx])
            object.__setattr__(self, "utility", _frozen(table))
        else:
            fam = self.orders
            if not isinstance(fam, PreferenceFamily):
                fam = PreferenceFamily(np.asarray(fam, dtype=np.int64).reshape(shape))
            if fam.ranks.shape != shape:
                raise GameError(f"orders shape {fam.ranks.shape} != game shape {shape}")
            object.__setattr__(self, "orders", fam)

    # -- shape helpers -------------------------------------------------
    @property
    def num_players(self) -> int:
        return len(self.actions)

    @property
    def opponents(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.num_players) if i != self.focal)

    @property
    def shape(self) -> tuple[int, ...]:
        return self._shape

    @property
    def opponent_shape(self) -> tuple[int, ...]:
        return self._shape[1:]

    @property
    def num_profiles(self) -> int:
        return int(np.prod(self._shape))

    def values(self, player: int) -> tuple:
        return self.actions[player]

    def has_values(self, player: int) -> bool:
        return self.actions[player][0] is not None

    def opponent_profiles(self) -> Iterator[tuple[int, ...]]:
        """Opponent profiles in lexicographic (C) order."""
        return itertools.product(*(range(k) for k in self.opponent_shape))

    def to_axes(self, profile: Sequence[int]) -> tuple[int, ...]:
        """Roster-order full profile -> axes-order index tuple."""
        profile = tuple(profile)
        return (profile[self.focal],) + tuple(profile[i] for i in self.opponents)

    def to_roster(self, axes: Sequence[int]) -> tuple[int, ...]:
        axes = tuple(axes)
        out = [0] * self.num_players
        out[self.focal] = axes[0]
        for pos, i in enumerate(self.opponents):
            out[i] = axes[pos + 1]
        return tuple(out)

    def opponent_position(self, player: int) -> int:
        """Axis of ``player`` minus one (its position among opponents)."""
        return self.opponents.index(player)

    def with_utility(self, table) -> "Game":
        return Game(self.actions, self.focal, utility=table)

    @classmethod
    def from_function(cls, actions, fn: Callable, focal: int = 0) -> "Game":
        """Tabulate ``fn(focal_value, opponent_values_tuple)`` on the grid.

        Actions without values are passed as their index.
        """
        proto = cls(actions, focal, orders=np.zeros(
            (len(actions[focal]),) + tuple(
                len(a) for i, a in enumerate(actions) if i != focal
            ), dtype=np.int64))
        table = np.empty(proto.shape, dtype=object)
        for idx in np.ndindex(proto.shape):
            vals = []
            for pos, player in enumerate((proto.focal,) + proto.opponents):
                v = proto.actions[player][idx[pos]]
                vals.append(idx[pos] if v is None else v)
            table[idx] = fn(vals[0], tuple(vals[1:]))
        return cls(proto.actions, focal, utility=table)


def family_from_utility(game: Game) -> PreferenceFamily:
    if game.utility is None:
        raise MissingUtility("game carries an order family, not a utility table")
    flat = game.utility.reshape(game.shape[0], -1)
    ranks = np.empty(flat.shape, dtype=np.int64)
    for p in range(flat.shape[1]):
        ranks[:, p] = dense_ranks(flat[:, p].tolist())
    return PreferenceFamily(ranks.reshape(game.shape))


def full_order_from_utility(game: Game) -> FullOrder:
    if game.utility is None:
        raise MissingUtility("game carries an order family, not a utility table")
    ranks = dense_ranks(game.utility.ravel().tolist())
    return FullOrder(np.array(ranks, dtype=np.int64).reshape(game.shape))


def preference_family(game: Game) -> PreferenceFamily:
    """The game's family, whichever source it carries."""
    if game.orders is not None:
        return game.orders
    return family_from_utility(game)


class Equivalence(NamedTuple):
    equivalent: bool
    witness: Optional[tuple]  # (s_plus roster order, a, b)


def first_family_difference(fu: PreferenceFamily, fv: PreferenceFamily):
    """First ``(s_plus, a, b)`` with ``a < b`` whose comparison differs, or None."""
    shape = fu.opponent_shape
    for s_plus in itertools.product(*(range(k) for k in shape)):
        ru = fu.ranks[(slice(None), *s_plus)]
        rv = fv.ranks[(slice(None), *s_plus)]
        if np.array_equal(ru, rv):
            continue
        for a in range(len(ru)):
            for b in range(a + 1, len(ru)):
                if np.sign(ru[a] - ru[b]) != np.sign(rv[a] - rv[b]):
                    return s_plus, a, b
    return None


def strategically_equivalent(game_u: Game, game_v: Game) -> Equivalence:
    if (
        game_u.shape != game_v.shape
        or game_u.focal != game_v.focal
        or game_u.num_players != game_v.num_players
    ):
        raise ShapeMismatch(f"{game_u.shape} vs {game_v.shape}")
    if game_u.utility is None or game_v.utility is None:
        raise MissingUtility("strategic equivalence compares utility tables")
    diff = first_family_difference(family_from_utility(game_u), family_from_utility(game_v))
    if diff is None:
        return Equivalence(True, None)
    return Equivalence(False, diff)
