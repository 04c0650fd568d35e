import math
from fractions import Fraction

import numpy as np
import pytest

from sepcheck.errors import AmbiguousTie, DomainError, GameError
from sepcheck.game import Game, preference_family
from sepcheck.generators import (
    ExpTerm,
    GeneratorSpec,
    Poly,
    generate,
    grids_like,
    inject_cycle,
    linquad_values,
    log_example_spec,
    uniform_grid,
)
from sepcheck.separability import NotSeparable, Separable, decide, verify_representation
from sepcheck.axioms import verify_certificate


def test_poly_exact_and_float():
    p = Poly((1, "1/2", -1))
    assert p(2) == Fraction(1) + 1 - 4
    assert p.as_float(2.0) == pytest.approx(-2.0)
    assert ExpTerm(2, 1, 0).as_float(0.0) == 2.0


def test_linquad_matches_closed_form():
    spec = GeneratorSpec("linquad", (0, 1, 2), ((0, 1), (0, 2)), b="1/2", weights=(1, 3))
    g = generate(spec)
    for idx in np.ndindex(*g.shape):
        s0 = g.actions[0][idx[0]]
        opp = tuple(g.actions[k + 1][v] for k, v in enumerate(idx[1:]))
        assert g.utility[idx] == linquad_values(Fraction(1, 2), (1, 3), s0, opp)


def test_linquad_without_interaction_is_constant_family():
    g = generate(GeneratorSpec("linquad", (0, 1, 2), ((0, 1, 2), (0, 1)), b=0, weights=(0, 0)))
    ranks = preference_family(g).ranks
    assert np.all(ranks == ranks[:, :1, :1])


@pytest.mark.parametrize("seed", range(5))
def test_random_separable_is_separable(seed):
    g = generate(GeneratorSpec("random_separable", (0, 1, 2), ((0, 1, 2), (0, 1), (0, 1)), seed=seed))
    v = decide(g)
    assert isinstance(v, Separable) and verify_representation(v.rep, g).ok


def test_random_separable_is_deterministic():
    spec = GeneratorSpec("random_separable", (0, 1), ((0, 1), (0, 1)), seed=11)
    assert np.array_equal(generate(spec).utility, generate(spec).utility)


@pytest.mark.parametrize("seed", range(5))
def test_cycle_injection_breaks_separability(seed):
    g = generate(GeneratorSpec("cycle_perturbed", (0, 1, 2), ((0, 1), (0, 1, 2)), seed=seed))
    v = decide(g)
    assert isinstance(v, NotSeparable)
    assert verify_certificate(v.cert, preference_family(g), g).ok


def test_inject_cycle_needs_room():
    with pytest.raises(GameError):
        inject_cycle(np.zeros((1, 2, 2), dtype=object), np.random.default_rng(0))


def test_log_example_values():
    g = generate(log_example_spec())
    v = {0: Fraction(1, 2), 1: Fraction(1), 2: Fraction(2), 3: Fraction(5, 2)}
    assert float(g.utility[1, 2, 3]) == pytest.approx(0.5449, abs=1e-4)
    assert float(g.utility[0, 2, 2]) == pytest.approx(0.5363, abs=1e-4)
    assert g.utility[1, 2, 3] > g.utility[0, 2, 2]
    assert float(g.utility[1, 2, 3]) == pytest.approx(0.18 - 1.44 + 1.2 * math.log(4.5), abs=1e-12)
    assert len(v) == g.shape[1]


def test_aggregate_log_domain():
    spec = GeneratorSpec("aggregate", (1, 2), ((0, 1),), f=Poly((0,)), gamma=Poly((0, 1)), psi="log")
    with pytest.raises(DomainError):
        generate(spec)


def test_gap_guard_rejects_near_ties():
    spec = GeneratorSpec(
        "aggregate", (1, 2), (("1/2", "1"),), f=ExpTerm(1, 0, 0),
        gamma=ExpTerm("1/1000000000000", 0, 0), psi="identity",
    )
    with pytest.raises(AmbiguousTie):
        generate(spec)


def test_tan_example_slices():
    focal = ("1/2", "1", "3/2", "8/5", "2")
    g = generate(GeneratorSpec("tan_obstruction", focal, (("1/2", "1", "2"), ("1", "3"))))
    for s_plus in g.opponent_profiles():
        actions = (g.actions[0],) + tuple((g.actions[k + 1][v],) for k, v in enumerate(s_plus))
        table = g.utility[(slice(None), *s_plus)].reshape((len(focal), 1, 1))
        assert isinstance(decide(Game(actions, utility=table)), Separable)
    with pytest.raises(DomainError):
        generate(GeneratorSpec("tan_obstruction", focal, ((0, 1),)))


def test_spec_validation():
    with pytest.raises(GameError):
        GeneratorSpec("linquad", (1, 0), ((0, 1),))
    with pytest.raises(GameError):
        GeneratorSpec("aggregate", (0, 1), ((0, 1),), psi="cube")
    with pytest.raises(GameError):
        generate(GeneratorSpec("linquad", (0, 1), ((0, 1),), weights=(1, 2)))


def test_grid_helpers():
    assert uniform_grid("1/2", "1/4", 3) == (Fraction(1, 2), Fraction(3, 4), Fraction(1))
    assert grids_like((0, 1), 2) == ((0, 1), (0, 1))
