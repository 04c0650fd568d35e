import numpy as np
import pytest

from sepcheck.axioms import (
    Axiom,
    BalancedCertificate,
    check_joint_independence,
    check_opponent_independence,
    check_strategic_independence,
    verify_certificate,
)
from sepcheck.errors import ComplexityRefusal, IndexOutOfRange
from sepcheck.game import FullOrder, Game, full_order_from_utility, preference_family
from sepcheck import io


def _indifferent(shape):
    return Game(tuple(tuple(range(k)) for k in shape), orders=np.zeros(shape, dtype=np.int64))


def test_single_opponent_oi_vacuous():
    g = Game(((0, 1), (0, 1, 2)), utility=np.arange(6).reshape(2, 3) % 4)
    assert check_opponent_independence(full_order_from_utility(g), g).holds


def test_separable_game_satisfies_all(load):
    g = load("fix_c")
    order = full_order_from_utility(g)
    assert check_opponent_independence(order, g).holds
    assert check_strategic_independence(preference_family(g), g).holds
    assert check_joint_independence(order, g).holds


def test_total_indifference_holds():
    g = _indifferent((2, 2, 2))
    assert check_strategic_independence(g.orders, g).holds
    order = FullOrder(np.zeros((2, 2, 2), dtype=np.int64))
    assert check_joint_independence(order, g).holds
    assert check_opponent_independence(order, g).holds


def test_four_cycle_fails_si(load):
    g = load("fix_b")
    rep = check_strategic_independence(g.orders, g)
    assert not rep.holds
    assert rep.witness["i"] == 1
    assert rep.replay(g.orders, g)
    cert = rep.to_certificate()
    assert len(cert) == 4
    assert verify_certificate(cert, g.orders, g).ok


def test_log_example_oi_si_hold(load):
    g = load("log_example")
    assert check_opponent_independence(full_order_from_utility(g), g).holds
    assert check_strategic_independence(preference_family(g), g).holds


def test_log_example_ji_witness(load):
    g = load("log_example")
    order = full_order_from_utility(g)
    full = check_joint_independence(order, g)
    assert not full.holds and full.replay(order, g)
    rep = check_joint_independence(order, g, focal_pairs=[(1, 0)])
    assert not rep.holds and rep.replay(order, g)
    w = rep.witness
    assert (w["s0"], w["s0'"], w["i"], w["j"]) == (1, 0, 1, 1)
    assert (w["s+"], w["s+'"], w["t+"], w["t+'"]) == ((0, 1), (0, 0), (2, 3), (2, 2))


def test_ji_budget_and_range(load):
    g = load("log_example")
    order = full_order_from_utility(g)
    with pytest.raises(ComplexityRefusal):
        check_joint_independence(order, g, budget=10)
    with pytest.raises(IndexOutOfRange):
        check_joint_independence(order, g, focal_pairs=[(0, 5)])


def test_oi_violation_hand_built():
    # focal 1 action, two binary opponents; player 2 at 0 prefers s1 = 0, at 1 prefers s1 = 1
    g = Game(((0,), (0, 1), (0, 1)), orders=np.zeros((1, 2, 2), dtype=np.int64))
    order = FullOrder(np.array([[[0, 1], [1, 0]]]))
    rep = check_opponent_independence(order, g)
    assert not rep.holds and rep.axiom is Axiom.OPPONENT_INDEPENDENCE
    assert rep.replay(order, g)


def test_certificate_checks(load, fixture_path):
    g = load("fix_b")
    cert = io.cert_from_dict(io.read_json(fixture_path("fix_b.cert.json")))
    assert verify_certificate(cert, g.orders, g).ok
    assert verify_certificate(BalancedCertificate(()), g.orders, g) == (False, "b")
    pairs = list(cert.pairs)
    r, t = pairs[0]
    pairs[0] = (t, r)
    assert verify_certificate(BalancedCertificate(pairs), g.orders, g) == (False, "b")
    pairs = list(cert.pairs)
    assert verify_certificate(BalancedCertificate(pairs[:2]), g.orders, g).failed_condition == "c"
    mixed = [((0, 0, 0), (1, 1, 0))]
    assert verify_certificate(BalancedCertificate(mixed), g.orders, g).failed_condition == "a"
    with pytest.raises(IndexOutOfRange):
        verify_certificate(BalancedCertificate([((0, 0, 5), (1, 0, 5))]), g.orders, g)


@pytest.mark.parametrize("backend", ["numba", "numpy"])
def test_backends_give_same_reports(backend):
    rng = np.random.default_rng(3)
    for _ in range(30):
        shape = (2, 2, 3)
        g = _indifferent(shape)
        order = FullOrder(rng.integers(0, 4, size=shape))
        fam = order.restrict()
        ref = (
            check_opponent_independence(order, g, backend="numba"),
            check_strategic_independence(fam, g, backend="numba"),
            check_joint_independence(order, g, backend="numba"),
        )
        got = (
            check_opponent_independence(order, g, backend=backend),
            check_strategic_independence(fam, g, backend=backend),
            check_joint_independence(order, g, backend=backend),
        )
        for a, b in zip(ref, got):
            assert (a.holds, a.witness, a.pattern) == (b.holds, b.witness, b.pattern)
