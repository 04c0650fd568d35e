"""Finite checkers for opponent, strategic and joint independence, and the
balanced-sequence certificate verifier."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import ComplexityRefusal, IndexOutOfRange
from .game import FullOrder, Game, PreferenceFamily

DEFAULT_JI_BUDGET = 10**9


class Axiom(str, Enum):
    OPPONENT_INDEPENDENCE = "OpponentIndependence"
    STRATEGIC_INDEPENDENCE = "StrategicIndependence"
    JOINT_INDEPENDENCE = "JointIndependence"


Pair = tuple  # (better roster profile, worse roster profile)


@dataclass(frozen=True)
class BalancedCertificate:
    """Profile pairs ``(r, t)``, full profiles in roster order."""

    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "pairs", tuple((tuple(r), tuple(t)) for r, t in self.pairs)
        )

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class AxiomReport:
    axiom: Axiom
    holds: bool
    witness: Optional[dict] = None
    pattern: Optional[str] = None  # "weak" or "strict"
    premises: tuple = field(default=(), repr=False)
    conclusion: Optional[Pair] = field(default=None, repr=False)

    def replay(self, prefs: Union[FullOrder, PreferenceFamily], game: Game) -> bool:
        """True iff the recorded comparisons really violate the axiom."""
        if self.holds:
            return False
        weakly, strictly = _relations(prefs, game)
        if not all(weakly(r, t) for r, t in self.premises):
            return False
        r, t = self.conclusion
        if self.pattern == "weak":
            return not weakly(r, t)
        return (
            any(strictly(a, b) for a, b in self.premises)
            and weakly(r, t)
            and weakly(t, r)
        )

    def to_certificate(self) -> BalancedCertificate:
        """The length-4 balanced sequence behind a strategic-independence failure."""
        if self.axiom is not Axiom.STRATEGIC_INDEPENDENCE or self.holds:
            raise ValueError("only failed strategic-independence reports carry a cycle")
        r, t = self.conclusion
        return BalancedCertificate(tuple(self.premises) + ((t, r),))


def _relations(prefs, game):
    if isinstance(prefs, FullOrder):
        def weakly(r, t):
            return prefs.weakly(game.to_axes(r), game.to_axes(t))

        def strictly(r, t):
            return prefs.strictly(game.to_axes(r), game.to_axes(t))
    else:
        def weakly(r, t):
            ra, ta = game.to_axes(r), game.to_axes(t)
            if ra[1:] != ta[1:]:
                raise ValueError("family comparisons need equal opponent profiles")
            return prefs.weakly(ra[0], ta[0], ra[1:])

        def strictly(r, t):
            ra, ta = game.to_axes(r), game.to_axes(t)
            return prefs.strictly(ra[0], ta[0], ra[1:])
    return weakly, strictly


def _split_axis(ranks: np.ndarray, pos: int):
    """Move opponent ``pos`` to axis 1 and flatten the other opponents."""
    moved = np.moveaxis(ranks, pos + 1, 1)
    rest_shape = moved.shape[2:]
    return moved.reshape(moved.shape[0], moved.shape[1], -1), rest_shape


def _join(pos: int, own: int, rest_shape, rest_index: int) -> tuple:
    rest = np.unravel_index(rest_index, rest_shape) if rest_shape else ()
    rest = [int(v) for v in rest]
    return tuple(rest[:pos] + [own] + rest[pos:])


def check_opponent_independence(order: FullOrder, game: Game, backend=None) -> AxiomReport:
    for pos, player in enumerate(game.opponents):
        R, rest_shape = _split_axis(order.ranks, pos)
        s0, x, y, p, q = _kernels.oi_scan(R, backend)
        if s0 == _kernels.NO_WITNESS:
            continue
        sm, smp = _join(pos, x, rest_shape, p), _join(pos, x, rest_shape, q)
        im, imp = _join(pos, y, rest_shape, p), _join(pos, y, rest_shape, q)
        full = lambda s_plus: game.to_roster((s0,) + s_plus)  # noqa: E731
        return AxiomReport(
            Axiom.OPPONENT_INDEPENDENCE,
            False,
            witness={
                "i": player,
                "s0": s0,
                "s_i": x,
                "s_i'": y,
                "s_-i": _drop(sm, pos),
                "s_-i'": _drop(smp, pos),
            },
            pattern="weak",
            premises=((full(smp), full(sm)),),
            conclusion=(full(imp), full(im)),
        )
    return AxiomReport(Axiom.OPPONENT_INDEPENDENCE, True)


def _drop(t: tuple, pos: int) -> tuple:
    return t[:pos] + t[pos + 1:]


def check_strategic_independence(
    family: PreferenceFamily, game: Game, backend=None
) -> AxiomReport:
    best = None
    for pos, player in enumerate(game.opponents):
        F, rest_shape = _split_axis(family.ranks, pos)
        hit = _kernels.si_scan(F, backend)
        if hit[0] == _kernels.NO_WITNESS:
            continue
        key = (hit[0], hit[1], pos) + hit[2:6]
        if best is None or key < best[0]:
            best = (key, pos, player, hit, rest_shape)
    if best is None:
        return AxiomReport(Axiom.STRATEGIC_INDEPENDENCE, True)
    _, pos, player, (a, b, x, y, p, q, pattern), rest_shape = best
    sxp, syp = _join(pos, x, rest_shape, p), _join(pos, y, rest_shape, p)
    sxq, syq = _join(pos, x, rest_shape, q), _join(pos, y, rest_shape, q)
    full = lambda s0, s_plus: game.to_roster((s0,) + s_plus)  # noqa: E731
    return AxiomReport(
        Axiom.STRATEGIC_INDEPENDENCE,
        False,
        witness={
            "s0": a,
            "s0'": b,
            "i": player,
            "s_i": x,
            "s_i'": y,
            "s_-i": _drop(sxp, pos),
            "s_-i'": _drop(sxq, pos),
        },
        pattern="weak" if pattern == _kernels.WEAK else "strict",
        premises=(
            (full(a, sxp), full(b, sxp)),
            (full(b, syp), full(a, syp)),
            (full(b, sxq), full(a, sxq)),
        ),
        conclusion=(full(b, syq), full(a, syq)),
    )


def check_joint_independence(
    order: FullOrder,
    game: Game,
    budget: int = DEFAULT_JI_BUDGET,
    backend=None,
    focal_pairs: Optional[Sequence] = None,
) -> AxiomReport:
    """Scan the full quantifier block, or only the ordered focal pairs
    ``(s0, s0')`` listed in ``focal_pairs`` (indices, scan order kept)."""
    opp_shape = game.opponent_shape
    n = len(opp_shape)
    P = int(np.prod(opp_shape)) if n else 1
    if focal_pairs is not None:
        pairs = np.array(list(focal_pairs), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= game.shape[0]):
            raise IndexOutOfRange("focal pair outside the focal action set")
        count = len(pairs) * n**2 * P**4
    else:
        pairs = None
        count = _kernels.ji_count(game.shape[0], n, P)
    if count > budget:
        raise ComplexityRefusal(count, budget)
    if n == 0:
        return AxiomReport(Axiom.JOINT_INDEPENDENCE, True)
    Rf = order.ranks.reshape(game.shape[0], P)
    repl = _kernels.replacement_table(opp_shape)
    a, b, i, j, sp, spp, tp, tpp, pattern = _kernels.ji_scan(Rf, repl, backend, pairs)
    if a == _kernels.NO_WITNESS:
        return AxiomReport(Axiom.JOINT_INDEPENDENCE, True)

    def prof(k):
        return tuple(int(v) for v in np.unravel_index(k, opp_shape))

    def full(s0, k):
        return game.to_roster((s0,) + prof(k))

    return AxiomReport(
        Axiom.JOINT_INDEPENDENCE,
        False,
        witness={
            "s0": a,
            "s0'": b,
            "i": game.opponents[i],
            "j": game.opponents[j],
            "s+": prof(sp),
            "s+'": prof(spp),
            "t+": prof(tp),
            "t+'": prof(tpp),
        },
        pattern="weak" if pattern == _kernels.WEAK else "strict",
        premises=(
            (full(a, sp), full(b, spp)),
            (full(b, repl[j, spp, tpp]), full(a, repl[i, sp, tp])),
            (full(b, repl[j, tpp, spp]), full(a, repl[i, tp, sp])),
        ),
        conclusion=(full(b, tpp), full(a, tp)),
    )


class CertificateCheck(NamedTuple):
    ok: bool
    failed_condition: Optional[str]


def verify_certificate(
    cert: BalancedCertificate,
    prefs: Union[PreferenceFamily, FullOrder],
    game: Game,
) -> CertificateCheck:
    """Check the three balanced-sequence conditions.

    With a :class:`FullOrder`, the pairs may differ in opponent coordinates
    and condition (a) is skipped, which is the notion that refutes full
    separability.
    """
    for r, t in cert.pairs:
        for prof in (r, t):
            if len(prof) != game.num_players or any(
                not 0 <= a < len(game.actions[i]) for i, a in enumerate(prof)
            ):
                raise IndexOutOfRange(f"profile {prof} does not index the game")
    if isinstance(prefs, PreferenceFamily):
        if any(
            game.to_axes(r)[1:] != game.to_axes(t)[1:] for r, t in cert.pairs
        ):
            return CertificateCheck(False, "a")
    weakly, strictly = _relations(prefs, game)
    if not cert.pairs or not all(weakly(r, t) for r, t in cert.pairs):
        return CertificateCheck(False, "b")
    if not any(strictly(r, t) for r, t in cert.pairs):
        return CertificateCheck(False, "b")
    f = game.focal
    for i in game.opponents:
        left = Counter((r[f], r[i]) for r, _ in cert.pairs)
        right = Counter((t[f], t[i]) for _, t in cert.pairs)
        if left != right:
            return CertificateCheck(False, "c")
    return CertificateCheck(True, None)


def certificate_from_pairs(pairs: Sequence) -> BalancedCertificate:
    return BalancedCertificate(tuple(pairs))
