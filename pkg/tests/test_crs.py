from fractions import Fraction

import numpy as np
import pytest

from sepcheck.crs import (
    LinearCanonicalForm,
    NotCRS,
    NotFactorable,
    canonicalize_crs,
    crs_weights,
    detect_crs,
    grid_step,
)
from sepcheck.errors import MissingActionValues, NonUniformGrid
from sepcheck.game import Game, preference_family, strategically_equivalent
from sepcheck.generators import GeneratorSpec, generate, grids_like, uniform_grid
from sepcheck.separability import Mode, decide, verify_representation


def _linquad(weights, focal=(0, 1, 2, 3), grid=(0, 1, 2, 3), b=1):
    return generate(GeneratorSpec("linquad", focal, grids_like(grid, len(weights)), b=b, weights=weights))


def test_rate_equals_weight_ratio():
    g = _linquad((2, 1))
    assert detect_crs(g, 1, 2) == 2
    assert detect_crs(g, 2, 1) == Fraction(1, 2)
    assert detect_crs(g, 1, 1) == 1


def test_order_changing_shift_is_reported():
    ranks = np.zeros((2, 2, 2), dtype=np.int64)
    for (x, y), r in {(0, 0): [0, 1], (1, 0): [1, 0], (0, 1): [0, 1], (1, 1): [1, 0]}.items():
        ranks[:, x, y] = r
    g = Game(((0, 1), (0, 1), (0, 1)), orders=ranks)
    res = detect_crs(g, 1, 2)
    assert isinstance(res, NotCRS)
    _, src, dst = res.witness
    fam = preference_family(g)
    assert not np.array_equal(fam.ranks[(slice(None), *src)], fam.ranks[(slice(None), *dst)])


def test_crs_needs_values_and_uniform_grids():
    g = Game(((0, 1), (None, None), (0, 1)), orders=np.zeros((2, 2, 2), dtype=np.int64))
    with pytest.raises(MissingActionValues):
        detect_crs(g, 1, 2)
    with pytest.raises(NonUniformGrid):
        grid_step((0, 1, 3))
    assert grid_step((5,)) is None


def test_single_action_opponent_is_not_crs():
    g = Game(((0, 1), (0,), (0, 1)), orders=np.zeros((2, 1, 2), dtype=np.int64))
    assert isinstance(detect_crs(g, 1, 2), NotCRS)


def test_canonical_form_binary_grid():
    g = generate(GeneratorSpec("linquad", (0, 1), ((0, 1), (0, 1)), b=1, weights=(1, 2)))
    rep = decide(g).rep
    form = canonicalize_crs(rep, g)
    assert isinstance(form, LinearCanonicalForm)
    assert form.weights[2] * 1 == form.weights[1] * 2
    rebuilt = g.with_utility(form.table(g))
    assert strategically_equivalent(rebuilt, g).equivalent
    rebuilt_rep = decide(rebuilt).rep
    assert verify_representation(rebuilt_rep, g).ok


@pytest.mark.parametrize("weights", [(1, 2, 3), (2, 2, 1), (3, 1, 2)])
def test_canonical_weights_proportional(weights):
    g = _linquad(weights, focal=uniform_grid(0, 1, 5), grid=uniform_grid(0, 1, 4), b="1/2")
    form = canonicalize_crs(decide(g).rep, g)
    assert isinstance(form, LinearCanonicalForm)
    ratio = form.weights[1] / weights[0]
    assert all(form.weights[j + 1] == ratio * w for j, w in enumerate(weights))
    assert strategically_equivalent(g.with_utility(form.table(g)), g).equivalent


def test_constant_blocks_give_zero_weights():
    g = Game(((0, 1), (0, 1, 2), (0, 1)), utility=[[[0, 0]] * 3, [[1, 1]] * 3])
    rep = decide(g).rep
    form = canonicalize_crs(rep, g)
    assert isinstance(form, LinearCanonicalForm)
    assert all(w == 0 for w in form.weights.values())
    assert len(set(form.gamma)) == 1


def test_zero_rate_when_family_is_constant(load):
    g = load("fix_d")
    assert detect_crs(g, 1, 2) == 0
    assert isinstance(crs_weights(g), dict)


def test_nonlinear_in_opponent_is_not_factorable():
    def u(s0, opp):
        return s0 * (opp[0] ** 2 + opp[1] ** 2) - Fraction(5, 2) * s0

    g = Game.from_function(((0, 1), (0, 1, 2), (0, 1, 2)), u)
    rep = decide(g).rep
    assert isinstance(canonicalize_crs(rep, g), NotFactorable)


def test_canonicalize_needs_strategic_rep(load):
    g = load("fix_c")
    with pytest.raises(Exception):
        canonicalize_crs(decide(g, Mode.FULL).rep, g)


def test_witness_with_several_other_opponents():
    # order depends on opponent 1 alone, so no rate against opponent 2 exists
    ranks = np.zeros((2, 2, 2, 2, 2), dtype=np.int64)
    ranks[0, 1] = 1
    ranks[1, 0] = 1
    g = Game(((0, 1),) * 5, orders=ranks)
    res = detect_crs(g, 1, 2)
    assert isinstance(res, NotCRS)
    _, src, dst = res.witness
    assert len(src) == len(dst) == 4
    fam = preference_family(g)
    assert not np.array_equal(fam.ranks[(slice(None), *src)], fam.ranks[(slice(None), *dst)])
