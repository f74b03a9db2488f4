from itertools import product

import numpy as np
import pytest
from active_margins.cpnr import (CpnrQuery, call_threshold, call_thresholds,
                                 conditional_ratio, cpnr, cpnr_oracle,
                                 exact_first_passage, loss_threshold,
                                 prob_joint_negative, prob_margin_call)
from active_margins.markov import StateSpace, TransitionModel
from tqdm.auto import trange

from .utils import random_model, random_query, toy_model

SPACE = StateSpace.from_reps([1, 4, 7, 10])

HAND_CHAIN = toy_model(
    [6.0, 8.0, 10.0],
    [
        [0.5, 0.3, 0.2],
        [0.2, 0.5, 0.3],
        [0.1, 0.3, 0.6]
    ]
)


def hand_query(**kwargs) -> CpnrQuery:
    return CpnrQuery(**{
        **dict(model=HAND_CHAIN, h=3, P0=10.0, Q0=2.0, delta=0.0, w=1.0, r=0.0, T=3),
        **kwargs
    })


def test_call_threshold():
    """Testing call thresholds on hand scanned state spaces."""
    assert call_threshold(SPACE, 10.0, 5.0, 0.0, 1.3, 0.0, 1) == 3
    assert call_threshold(SPACE, 10.0, 5.0, 0.0, 1.3, 0.1, 2) == 3
    assert call_threshold(SPACE, 10.0, 14.0, 0.0, 1.3, 0.0, 1) == 0
    assert call_thresholds(SPACE, 10.0, 13.0, 0.2, 1.3, 0.01, 30).tolist() == [0] * 30
    # Strict comparison: a threshold equal to a representative price excludes it.
    assert call_threshold(SPACE, 10.0, 6.0, 0.0, 1.3, 0.0, 1) == 2
    with pytest.raises(ValueError):
        call_threshold(SPACE, 10.0, 5.0, 0.0, 1.3, 0.0, 0)


def test_loss_threshold():
    """Testing loss thresholds on hand scanned state spaces."""
    assert loss_threshold(SPACE, 10.0, 5.0, 0.0, 0.0, 1) == 2
    assert loss_threshold(SPACE, 10.0, 10.0, 0.0, 0.0, 1) == 0
    assert loss_threshold(SPACE, 10.0, 12.0, 0.0, 0.0, 1) == 0
    for w in (1.0, 1.2, 1.7):
        for t in range(1, 6):
            assert loss_threshold(SPACE, 10.0, 3.0, 0.1, 0.01, t) <= call_threshold(
                SPACE, 10.0, 3.0, 0.1, w, 0.01, t
            )


def test_thresholds_grow_with_the_maintenance_ratio():
    """Testing that a larger maintenance ratio never lowers a call threshold."""
    random_state = np.random.default_rng(4)
    for _ in trange(200, desc="Comparing thresholds", leave=False):
        q = random_query(random_state, max_states=20, max_days=30)
        larger = q._replace(w=q.w + float(random_state.uniform(0, 0.5)))
        assert np.all(cpnr(larger).k >= np.array(cpnr(q).k))


def test_impossible_calls():
    """Testing that empty call sets give no call and a zero CPNR."""
    result = cpnr(hand_query(Q0=11.0))
    assert result.k == [0, 0, 0]
    assert result.prob_C == 0.0
    assert result.prob_NC == 0.0
    assert result.cpnr == 0.0
    assert conditional_ratio(0.0, 0.0) == 0.0


def test_single_state_chain():
    """Testing the certain call and the certain loss of a single state chain."""
    chain = toy_model([10.0], [[1.0]])
    result = cpnr(CpnrQuery(chain, 1, 10.0, 0.0, 0.0, 1.3, 0.0, 5))
    assert result.prob_C == 1.0
    assert result.per_day[0].prob_C == 1.0
    assert result.prob_NC == 0.0
    assert result.cpnr == 0.0
    chain = toy_model([1.0], [[1.0]])
    result = cpnr(CpnrQuery(chain, 1, 10.0, 0.0, 0.0, 1.3, 0.0, 1))
    assert result.prob_C == 1.0
    assert result.prob_NC == 1.0
    assert result.cpnr == 1.0
    assert cpnr_oracle(CpnrQuery(chain, 1, 10.0, 0.0, 0.0, 1.3, 0.0, 4)).prob_C == 1.0


def test_fully_covered_loans_never_lose():
    """Testing that cash covering the price rules out negative returns."""
    result = cpnr(hand_query(Q0=10.0, w=1.8))
    assert result.a == [0, 0, 0]
    assert result.prob_C > 0
    assert result.prob_NC == 0.0
    assert result.cpnr == 0.0


def test_hand_chain_matches_oracle():
    """Testing the recursion on a hand specified chain against the nested loop oracle."""
    for kwargs in (
        dict(),
        dict(T=1),
        dict(w=1.2, Q0=1.0),
        dict(h=1, delta=0.3, Q0=0.5, w=1.3),
        dict(r=0.01)
    ):
        q = hand_query(**kwargs)
        result, oracle = cpnr(q), cpnr_oracle(q)
        assert result.k == oracle.k and result.a == oracle.a
        assert result.prob_C == pytest.approx(oracle.prob_C, abs=1e-12)
        assert result.prob_NC == pytest.approx(oracle.prob_NC, abs=1e-12)
        assert result.cpnr == pytest.approx(oracle.cpnr, abs=1e-12)
        prob_C, per_day = prob_margin_call(q)
        assert prob_C == pytest.approx(result.prob_C, abs=1e-15)
        assert len(per_day) == q.T
        prob_NC, per_day = prob_joint_negative(q)
        assert prob_NC == pytest.approx(result.prob_NC, abs=1e-15)


def test_hand_chain_values():
    """Testing the recursion against a hand derivation of the product formula."""
    # States below 8 call and states below 8 lose: k = a = (1, 1, 1).
    q = hand_query()
    result = cpnr(q)
    assert result.k == [1, 1, 1] and result.a == [1, 1, 1]
    P = HAND_CHAIN.one_step
    P2 = P @ P
    call_1 = P[2, 0]
    conditional_2 = (P[2, 1:] @ P[1:, 0]) / P[2, 1:].sum()
    conditional_3 = (P2[2, 1:] @ P[1:, 0]) / P2[2, 1:].sum()
    calls = [
        call_1,
        (1 - call_1) * conditional_2,
        (1 - call_1) * (1 - conditional_2) * conditional_3
    ]
    losses = [P[0, 0], P[0, 0], 1.0]
    assert [day.prob_C for day in result.per_day] == pytest.approx(calls, abs=1e-15)
    assert [day.prob_NC for day in result.per_day] == pytest.approx(
        [call * loss for call, loss in zip(calls, losses)], abs=1e-15
    )


def test_random_chains_match_oracle():
    """Testing the recursion against the nested loop oracle on random chains."""
    random_state = np.random.default_rng(42)
    for _ in trange(1000, desc="Comparing with the oracle", leave=False):
        q = random_query(random_state)
        result, oracle = cpnr(q), cpnr_oracle(q)
        assert result.k == oracle.k
        assert result.a == oracle.a
        assert result.prob_C == pytest.approx(oracle.prob_C, abs=1e-12)
        assert result.prob_NC == pytest.approx(oracle.prob_NC, abs=1e-12)
        assert result.cpnr == pytest.approx(oracle.cpnr, abs=1e-12)
        assert len(result.per_day) == len(oracle.per_day) == q.T
        for day, expected in zip(result.per_day, oracle.per_day):
            assert day.t == expected.t
            assert day.prob_C == pytest.approx(expected.prob_C, abs=1e-12)
            assert day.prob_NC == pytest.approx(expected.prob_NC, abs=1e-12)


def test_probability_bounds():
    """Testing that daily probabilities are ordered and their sums stay below one."""
    random_state = np.random.default_rng(8)
    for _ in trange(300, desc="Checking bounds", leave=False):
        q = random_query(random_state, max_states=30, max_days=30)
        result = cpnr(q)
        total = 0.0
        for day in result.per_day:
            assert 0 <= day.prob_NC <= day.prob_C <= 1
            total += day.prob_C
            assert total <= 1 + 1e-9
        assert 0 <= result.prob_NC <= result.prob_C <= 1 + 1e-9
        assert 0 <= result.cpnr <= 1


@pytest.mark.parametrize("scale", [0.5, 3, 117])
def test_scaling_invariance(scale):
    """Testing that scaling every price leaves thresholds and probabilities unchanged."""
    random_state = np.random.default_rng(13)
    for _ in range(200):
        q = random_query(random_state, max_states=12, max_days=10)
        scaled_model = TransitionModel(
            StateSpace.from_reps(q.model.state_space.reps * scale),
            q.model.one_step
        )
        scaled = q._replace(model=scaled_model, P0=q.P0 * scale, Q0=q.Q0 * scale)
        result, scaled_result = cpnr(q), cpnr(scaled)
        assert scaled_result.k == result.k
        assert scaled_result.a == result.a
        assert scaled_result.prob_C == pytest.approx(result.prob_C, abs=1e-12)
        assert scaled_result.prob_NC == pytest.approx(result.prob_NC, abs=1e-12)
        assert scaled_result.cpnr == pytest.approx(result.cpnr, abs=1e-12)


def brute_force_first_passage(q: CpnrQuery):
    """Return first call and joint loss probabilities by enumerating every path."""
    result = cpnr(q)
    k, a = result.k, result.a
    P = q.model.one_step
    prob_C, prob_NC = 0.0, 0.0
    for states in product(range(q.model.n), repeat=q.T):
        probability, previous = 1.0, q.h - 1
        for state in states:
            probability *= P[previous, state]
            previous = state
        called = [t for t in range(1, q.T + 1) if states[t - 1] < k[t - 1]]
        if not called:
            continue
        tau = called[0]
        liquidation = min(tau + 1, q.T)
        prob_C += probability
        if states[liquidation - 1] < a[liquidation - 1]:
            prob_NC += probability
    return prob_C, prob_NC


def test_exact_first_passage():
    """Testing the exact first passage probabilities against path enumeration."""
    random_state = np.random.default_rng(21)
    for _ in trange(100, desc="Enumerating paths", leave=False):
        q = random_query(random_state, max_states=4, max_days=5)
        exact = exact_first_passage(q)
        prob_C, prob_NC = brute_force_first_passage(q)
        assert exact.prob_C == pytest.approx(prob_C, abs=1e-12)
        assert exact.prob_NC == pytest.approx(prob_NC, abs=1e-12)
        assert exact.k == cpnr(q).k


def test_exact_first_passage_agrees_on_single_days():
    """Testing that both methods agree on one-day loans."""
    random_state = np.random.default_rng(22)
    for _ in range(100):
        q = random_query(random_state)._replace(T=1)
        assert exact_first_passage(q).cpnr == pytest.approx(cpnr(q).cpnr, abs=1e-12)


def test_exact_first_passage_diverges_on_longer_loans():
    """Testing that the product form differs from exact first passage beyond one day."""
    random_state = np.random.default_rng(23)
    gaps = []
    for _ in range(200):
        q = random_query(random_state, max_states=8, max_days=6)._replace(T=int(random_state.integers(3, 7)))
        gaps.append(abs(exact_first_passage(q).prob_C - cpnr(q).prob_C))
    assert max(gaps) > 1e-9


def test_query_validation():
    """Testing that invalid queries and oversized oracle inputs are rejected."""
    with pytest.raises(ValueError):
        cpnr(hand_query(h=0))
    with pytest.raises(ValueError):
        cpnr(hand_query(h=4))
    with pytest.raises(ValueError):
        cpnr(hand_query(T=0))
    with pytest.raises(ValueError):
        cpnr(hand_query(r=-0.1))
    big = random_model(65, np.random.default_rng(0))
    with pytest.raises(ValueError):
        cpnr_oracle(CpnrQuery(big, 1, 10.0, 5.0, 0.0, 1.3, 0.0, 2))
    with pytest.raises(ValueError):
        cpnr_oracle(hand_query(T=31))


def test_result_serialization():
    """Testing the JSON description of a result."""
    data = cpnr(hand_query()).to_dict()
    assert set(data) == {"prob_C", "prob_NC", "cpnr", "per_day", "k", "a"}
    assert [day["t"] for day in data["per_day"]] == [1, 2, 3]
