from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sepcheck.errors import EmptySystem
from sepcheck.lp import (
    Dual,
    FeasibilitySystem,
    Primal,
    check_dual,
    check_primal,
    hadamard_bound,
    lift_to_integers,
    solve,
    system_from_dict,
    system_to_dict,
)
from sepcheck.separability import build_strategic_system
from sepcheck.game import preference_family


def test_single_strict_row():
    out = solve(FeasibilitySystem(1, [[1]]))
    assert isinstance(out, Primal) and out.x[0] > 0


def test_opposing_rows():
    out = solve(FeasibilitySystem(1, [[1], [-1]]))
    assert isinstance(out, Dual) and out.p == (1, 1)


def test_equality_rows_enter_dual():
    # x1 > 0, x1 - x2 = 0, -x2 >= 0
    sys_ = FeasibilitySystem(2, [[1, 0]], [[0, -1]], [[1, -1]])
    out = solve(sys_)
    assert isinstance(out, Dual)
    assert check_dual(sys_, out.p, out.q, out.r)
    assert all(isinstance(v, int) for v in out.p + out.q + out.r)


def test_no_strict_rows_gives_zero():
    out = solve(FeasibilitySystem(3, [], [[1, -1, 0]]))
    assert out == Primal((0, 0, 0))


def test_empty_system_errors():
    with pytest.raises(EmptySystem):
        solve(FeasibilitySystem(0))


def test_four_cycle_dual(load):
    g = load("fix_b")
    system = build_strategic_system(preference_family(g), g)
    out = solve(system)
    assert isinstance(out, Dual)
    assert out.p == (1, 1, 1, 1) and out.q == ()


def test_lift():
    assert lift_to_integers([Fraction(1, 2), Fraction(1, 2)]) == ((1, 1), (), ())
    assert lift_to_integers([Fraction(2, 3), Fraction(1, 6), 0]) == ((4, 1, 0), (), ())


@pytest.mark.parametrize("k, e, expect", [(0, 1, 1), (1, 1, 1), (4, 1, 16), (2, 3, 18)])
def test_hadamard(k, e, expect):
    assert hadamard_bound(k, e) == expect


def test_hadamard_odd_is_upper():
    assert hadamard_bound(3) ** 2 >= 27


def test_system_json_round_trip():
    s = FeasibilitySystem(2, [[1, Fraction(1, 2)]], [[0, 1]], [[1, -1]])
    assert system_from_dict(system_to_dict(s)) == s


rows = st.lists(st.integers(-2, 2), min_size=3, max_size=3)


@settings(max_examples=80, deadline=None)
@given(st.lists(rows, min_size=1, max_size=5), st.lists(rows, max_size=3), st.integers(1, 5))
def test_row_scaling_does_not_change_outcome(A, B, k):
    base = solve(FeasibilitySystem(3, A, B))
    scaled = solve(FeasibilitySystem(3, [[k * v for v in r] for r in A], B))
    assert type(base) is type(scaled)
    if isinstance(base, Primal):
        assert base.x == scaled.x


@settings(max_examples=80, deadline=None)
@given(st.lists(rows, min_size=1, max_size=5), st.lists(rows, max_size=3), st.lists(rows, max_size=2))
def test_exactly_one_alternative(A, B, C):
    s = FeasibilitySystem(3, A, B, C)
    out = solve(s)
    if isinstance(out, Primal):
        assert check_primal(s, out.x)
    else:
        assert check_dual(s, out.p, out.q, out.r)
