import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stochauto import catalog
from stochauto.acceptor import (
    StochasticAcceptor,
    accept_prob,
    determinize_zero,
    dfa_cutpoint_to_zero,
    distinguishability_classes,
    enumerate_language,
    in_language,
    is_deterministic_acceptor,
    isolation_gap,
    normalize_initial,
    padic,
    rescale_cutpoint,
    state_after,
    validate_acceptor,
)
from stochauto.automaton import AutomatonError
from stochauto.hmatrix import BudgetExceeded
from stochauto.ratlin import RatMatrix

from strategies import acceptors

F = Fraction


def all_words(alphabet, max_len):
    for L in range(max_len + 1):
        yield from product(alphabet, repeat=L)


def positional(word, p):
    """Base-p value of 0.x_k ... x_1 from the digit string, via integer arithmetic."""
    digits = "".join(reversed(word))
    if not digits:
        return F(0)
    return F(int(digits, p), p ** len(digits))


def test_length_three_table():
    A = catalog.drifting_acceptor()
    table = {
        "aaa": F(7, 8), "baa": F(15, 16), "aab": F(27, 32), "bab": F(55, 64),
        "aba": F(29, 32), "bba": F(59, 64), "abb": F(109, 128), "bbb": F(219, 256),
    }
    for w, p in table.items():
        assert accept_prob(A, w) == p


def test_parity_table():
    A = catalog.parity_acceptor()
    assert is_deterministic_acceptor(A)
    for w in product("ab", repeat=3):
        assert accept_prob(A, w) == w.count("b") % 2


def test_halving_membership_rule():
    A = catalog.halving_acceptor()
    for l in range(5):
        lo, hi = 1 - F(1, 2**l), 1 - F(1, 2 ** (l + 1))
        for lam in (lo, (lo + hi) / 2, hi - F(1, 10**6)):
            for k in range(12):
                assert in_language(A, lam, "a" * k) == (k > l)


def test_powerset_table():
    B = determinize_zero(catalog.halving_acceptor(), full_powerset=True)
    assert B.states == ("{}", "{s1}", "{s2}", "{s1,s2}")
    assert B.matrices["a"] == RatMatrix([[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert B.initial == (0, 1, 0, 0)
    assert B.final_states == ("{s2}", "{s1,s2}")


def test_reachable_powerset_is_smaller():
    B = determinize_zero(catalog.halving_acceptor())
    assert B.states == ("{s1}", "{s1,s2}")
    with pytest.raises(BudgetExceeded):
        determinize_zero(catalog.halving_acceptor(), cap=1)


def test_nonregular_closed_form():
    A = catalog.nonregular_acceptor()
    for i in range(5):
        for j in range(1, 7):
            assert accept_prob(A, "a" * i + "b" * j) == F(1, 2) + F(1, 2 ** (i + 1)) - F(1, 2**j)
            # the state distribution behind the closed form
            v = state_after(A, "a" * i + "b" * j)
            assert v == (0, 0, F(1, 2**j), F((2**j - 1) + (2**i - 1) * (2 ** (j - 1) - 1), 2 ** (i + j)), F(2**i - 1, 2 ** (i + 1)))
        assert accept_prob(A, "a" * i) == 0


def test_nonregular_language_and_growth():
    A = catalog.nonregular_acceptor()
    lang = enumerate_language(A, F(1, 2), 6)
    want = {tuple("a" * i + "b" * j) for i in range(7) for j in range(7) if j >= i + 2 and i + j <= 6}
    assert set(lang.accepted) == want
    counts = [distinguishability_classes(A, F(1, 2), k, 6) for k in range(1, 5)]
    assert all(a < b for a, b in zip(counts, counts[1:]))


def test_enumerate_language_order_and_budget():
    lang = enumerate_language(catalog.parity_acceptor(), 0, 2)
    assert lang.accepted == (("b",), ("a", "b"), ("b", "a"))
    with pytest.raises(BudgetExceeded):
        enumerate_language(catalog.parity_acceptor(), 0, 30)


def test_padic_matches_positional_values():
    rng = random.Random(2024)
    for p in (2, 3, 10):
        A = padic(p)
        digits = A.inputs
        for _ in range(200):
            w = tuple(rng.choice(digits) for _ in range(rng.randint(0, 8)))
            assert accept_prob(A, w) == positional(w, p)


def test_cantor_subset():
    A = catalog.cantor_acceptor()
    B = padic(3)
    for w in all_words(("0", "2"), 6):
        n = len(w)
        assert accept_prob(A, w) == sum((F(int(x), 3 ** (n + 1 - i)) for i, x in enumerate(w, 1)), F(0))
        assert accept_prob(A, w) == accept_prob(B, w)


def test_padic_rejects_small_base():
    with pytest.raises(ValueError):
        padic(1)


def test_validation():
    assert validate_acceptor(catalog.drifting_acceptor()).ok
    bad = StochasticAcceptor(("p", "q"), ("a",), {"a": RatMatrix([[1, 1], [0, 1]])}, (1, 0), (0, F(1, 2)))
    report = validate_acceptor(bad)
    assert len(report.violations) == 2
    with pytest.raises(AutomatonError):
        StochasticAcceptor(("p",), ("a",), {"a": RatMatrix([[1, 0]])}, (1,), (0,))
    with pytest.raises(AutomatonError):
        StochasticAcceptor(("p",), ("a",), {}, (1,), (0,))


def test_isolation_gap():
    g = isolation_gap(catalog.halving_acceptor(), F(1, 2), 6)
    assert g.gap == 0 and g.witness == ("a",)
    g = isolation_gap(catalog.parity_acceptor(), F(1, 3), 4)
    assert g.gap == F(1, 3) and g.witness == ()
    g = isolation_gap(catalog.halving_acceptor(), F(2, 3), 4)
    assert g.gap == abs(F(3, 4) - F(2, 3))


@pytest.mark.parametrize("name", ["halving_acceptor", "nonregular_acceptor"])
@pytest.mark.parametrize("mu", [F(1, 4), F(3, 4)])
def test_rescale_preserves_language(name, mu):
    A = catalog.ACCEPTORS[name]()
    B = rescale_cutpoint(A, F(1, 2), mu)
    assert validate_acceptor(B).ok
    for w in all_words(A.inputs, 6):
        assert in_language(A, F(1, 2), w) == in_language(B, mu, w)


@pytest.mark.parametrize("name", ["halving_acceptor", "nonregular_acceptor", "drifting_acceptor"])
def test_normalize_initial_preserves_language(name):
    A = catalog.ACCEPTORS[name]()
    for lam in (F(0), F(1, 2), F(7, 8), F(1)):
        B = normalize_initial(A, lam)
        assert B.initial[0] == 1 and B.n == A.n + 1
        assert validate_acceptor(B).ok
        for w in all_words(A.inputs, 6 if len(A.inputs) > 1 else 10):
            assert in_language(A, lam, w) == in_language(B, lam, w)


def test_rescale_edge_cut_points():
    A = catalog.halving_acceptor()
    B = rescale_cutpoint(A, 0, F(1, 3))
    assert is_deterministic_acceptor(B)
    for w in all_words("a", 8):
        assert in_language(A, 0, w) == in_language(B, F(1, 3), w)
    C = rescale_cutpoint(A, 1, F(1, 3))
    assert not any(in_language(C, F(1, 3), w) for w in all_words("a", 8))
    with pytest.raises(ValueError):
        rescale_cutpoint(A, F(1, 2), 1)


def test_dfa_cutpoint_example():
    # two start states with weights 1/3 and 2/3 running the parity machine in opposite phases
    A = StochasticAcceptor(("e", "o"), ("a", "b"), catalog.parity_acceptor().matrices, (F(1, 3), F(2, 3)), (0, 1))
    B = dfa_cutpoint_to_zero(A, F(1, 2))
    assert B.initial == (1, 0)
    for w in all_words("ab", 5):
        assert in_language(A, F(1, 2), w) == in_language(B, 0, w)
    assert dfa_cutpoint_to_zero(A, 1).n == 1


@settings(max_examples=100, deadline=None)
@given(acceptors(max_states=3))
def test_determinize_zero_keeps_zero_language(A):
    for full in (False, True):
        B = determinize_zero(A, full_powerset=full)
        assert is_deterministic_acceptor(B)
        for w in all_words(A.inputs, 4):
            assert in_language(A, 0, w) == in_language(B, 0, w)


@settings(max_examples=100, deadline=None)
@given(acceptors(max_states=4, deterministic=True), st.sampled_from([F(0), F(1, 4), F(1, 2), F(2, 3)]))
def test_dfa_cutpoint_to_zero_keeps_language(A, lam):
    B = dfa_cutpoint_to_zero(A, lam)
    assert is_deterministic_acceptor(B) and sum(B.initial) == 1 and max(B.initial) == 1
    for w in all_words(A.inputs, 5):
        assert in_language(A, lam, w) == in_language(B, 0, w)


@settings(max_examples=100, deadline=None)
@given(acceptors(max_states=3), st.fractions(0, 1, max_denominator=8), st.fractions(0, 1, max_denominator=8))
def test_normalizations_keep_language(A, lam, mu):
    if 0 < mu < 1:
        B = rescale_cutpoint(A, lam, mu)
        for w in all_words(A.inputs, 4):
            assert in_language(A, lam, w) == in_language(B, mu, w)
    C = normalize_initial(A, lam)
    for w in all_words(A.inputs, 4):
        assert in_language(A, lam, w) == in_language(C, lam, w)
