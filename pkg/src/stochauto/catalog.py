"""The worked automata from the standard theory, ready to use.

Each function returns a fresh value.  They double as fixtures for the test
suite and as sources for the JSON files shipped under ``data/``.
"""

from __future__ import annotations

from .acceptor import StochasticAcceptor
from .automaton import StochasticAutomaton
from .ratlin import RatMatrix


def _sa(states, inputs, outputs, kernels):
    return StochasticAutomaton(
        tuple(states),
        tuple(inputs),
        tuple(outputs),
        {(a, b): RatMatrix(grid) for (a, b), grid in kernels.items()},
    )


S2 = ("s1", "s2")
S3 = ("s1", "s2", "s3")
S4 = ("s1", "s2", "s3", "s4")
S5 = ("s1", "s2", "s3", "s4", "s5")


def two_state_drift():
    """One input, one output: ``P(b|a) = [[2/3, 1/3], [0, 1]]``."""
    return _sa(S2, "a", "b", {("a", "b"): [["2/3", "1/3"], [0, 1]]})


def two_input_channel():
    """Two states, inputs ``a, b``, outputs ``c, d``; states are not equivalent."""
    return _sa(
        S2,
        "ab",
        "cd",
        {
            ("a", "c"): [["1/4", "1/8"], [0, "1/2"]],
            ("a", "d"): [["1/8", "1/2"], [0, "1/2"]],
            ("b", "c"): [["1/4", "1/4"], ["1/4", 0]],
            ("b", "d"): [["3/8", "1/8"], ["3/4", 0]],
        },
    )


def cycle(n: int = 4):
    """Deterministic ``n``-cycle; only ``s_n`` reading ``b`` emits ``d``.

    ``s1`` and ``s2`` agree on all pairs of length ``n - 2`` but not ``n - 1``.
    """
    states = tuple(f"s{i}" for i in range(1, n + 1))
    ac = [[0] * n for _ in range(n)]
    bc = [[0] * n for _ in range(n)]
    bd = [[0] * n for _ in range(n)]
    for i in range(n):
        ac[i][(i + 1) % n] = 1
        if i < n - 1:
            bc[i][i + 1] = 1
    bd[n - 1][0] = 1
    return _sa(states, "ab", "cd", {("a", "c"): ac, ("b", "c"): bc, ("b", "d"): bd})


def four_state_reducible():
    """Four states where ``s3`` and ``s4`` are equivalent."""
    return _sa(
        S4,
        "a",
        "bc",
        {
            ("a", "b"): [
                [0, 0, "1/6", "1/6"],
                [0, 0, "1/3", "1/3"],
                ["1/4", "1/4", 0, 0],
                [0, 0, 0, "1/2"],
            ],
            ("a", "c"): [
                [0, 0, "1/3", "1/3"],
                [0, 0, "1/6", "1/6"],
                ["1/4", "1/4", 0, 0],
                [0, 0, 0, "1/2"],
            ],
        },
    )


def reduced_by_s3():
    """Quotient of :func:`four_state_reducible` keeping ``s3`` for the merged class."""
    return _sa(
        ("s1", "s2", "s3"),
        "a",
        "bc",
        {
            ("a", "b"): [[0, 0, "1/3"], [0, 0, "2/3"], ["1/4", "1/4", 0]],
            ("a", "c"): [[0, 0, "2/3"], [0, 0, "1/3"], ["1/4", "1/4", 0]],
        },
    )


def reduced_by_s4():
    """Quotient of :func:`four_state_reducible` keeping ``s4`` for the merged class."""
    return _sa(
        ("s1", "s2", "s4"),
        "a",
        "bc",
        {
            ("a", "b"): [[0, 0, "1/3"], [0, 0, "2/3"], [0, 0, "1/2"]],
            ("a", "c"): [[0, 0, "2/3"], [0, 0, "1/3"], [0, 0, "1/2"]],
        },
    )


def reduced_not_full_rank():
    """Three states, reduced, rank-2 H; ``s3`` mixes ``s1`` and ``s2`` evenly.

    Its minimal form is the determined two-state machine
    :func:`determined_pair`.
    """
    return _sa(
        S3,
        "a",
        "bc",
        {
            ("a", "b"): [[1, 0, 0], [0, 0, 0], ["1/2", 0, 0]],
            ("a", "c"): [[0, 0, 0], [0, 1, 0], [0, "1/2", 0]],
        },
    )


def determined_pair():
    return _sa(
        ("t1", "t2"),
        "a",
        "bc",
        {("a", "b"): [[1, 0], [0, 0]], ("a", "c"): [[0, 0], [0, 1]]},
    )


def convex_three_state():
    """Reduced but not minimal: ``s1`` behaves like ``(0, 1/2, 1/2)``."""
    return _sa(
        S3,
        "a",
        "bc",
        {
            ("a", "b"): [[0, 0, "1/2"], [0, 0, "1/3"], [0, 0, "2/3"]],
            ("a", "c"): [[0, 0, "1/2"], [0, 0, "2/3"], [0, 0, "1/3"]],
        },
    )


def _even_common():
    z = [[0] * 5 for _ in range(5)]
    half = "1/2"
    ca = [row[:] for row in z]
    ca[0][1] = ca[1][1] = half
    da = [row[:] for row in z]
    da[2][3] = da[3][3] = half
    cb = [row[:] for row in z]
    cb[0][0] = cb[3][0] = half
    db = [row[:] for row in z]
    db[1][2] = db[2][2] = half
    return {("a", "c"): ca, ("a", "d"): da, ("b", "c"): cb, ("b", "d"): db}


def even_a():
    """Five-state minimal automaton with rank-4 H (not strongly reduced)."""
    k = _even_common()
    e = [[0, 0, 0, 0, "1/2"]] * 4 + [["1/2", 0, "1/2", 0, 0]]
    k[("a", "e")] = e
    k[("b", "e")] = e
    return _sa(S5, "ab", "cde", k)


def even_b():
    """Same as :func:`even_a` except the last row of ``P(e|.)`` is spread evenly."""
    k = _even_common()
    e = [[0, 0, 0, 0, "1/2"]] * 4 + [["1/4", "1/4", "1/4", "1/4", 0]]
    k[("a", "e")] = e
    k[("b", "e")] = e
    return _sa(S5, "ab", "cde", k)


def hom_source():
    return _sa(
        S4,
        "a",
        "bc",
        {
            ("a", "b"): [[0, 0, "1/6", "1/6"], [0, 0, "2/3", 0], [0, 0, 0, "1/2"], [0, 0, 0, "1/2"]],
            ("a", "c"): [[0, 0, "1/3", "1/3"], [0, 0, "1/3", 0], [0, 0, "1/2", 0], [0, 0, 0, "1/2"]],
        },
    )


def hom_target():
    return _sa(
        ("t1", "t2", "t3"),
        "a",
        "bc",
        {
            ("a", "b"): [[0, 0, "1/3"], [0, 0, "2/3"], [0, 0, "1/2"]],
            ("a", "c"): [[0, 0, "2/3"], [0, 0, "1/3"], [0, 0, "1/2"]],
        },
    )


def observable_funnel():
    """Observable, reduced, not minimal (``s3 ~ (1/2, 1/2, 0)``)."""
    return _sa(
        S3,
        "a",
        "bc",
        {
            ("a", "b"): [[0, "1/2", 0], [0, "1/3", 0], [0, "5/12", 0]],
            ("a", "c"): [[0, "1/2", 0], [0, "2/3", 0], [0, "7/12", 0]],
        },
    )


def state_determined_swap():
    """``a`` swaps the two states; output ``b`` with probability 1/3 from ``s1``, 2/3 from ``s2``."""
    return _sa(
        S2,
        "a",
        "bc",
        {("a", "b"): [[0, "1/3"], ["2/3", 0]], ("a", "c"): [[0, "2/3"], ["1/3", 0]]},
    )


def output_determined_pair():
    return _sa(
        S2,
        "a",
        "bc",
        {("a", "b"): [["1/3", "2/3"], [0, 0]], ("a", "c"): [[0, 0], ["1/2", "1/2"]]},
    )


def mealy_pair():
    """Output law and transition law independent given (input, state)."""
    return _sa(
        S2,
        "a",
        "bc",
        {
            ("a", "b"): [["1/6", "1/3"], ["1/20", "1/5"]],
            ("a", "c"): [["1/6", "1/3"], ["3/20", "3/5"]],
        },
    )


# ---------------------------------------------------------------- acceptors


def _acc(states, inputs, matrices, initial, final):
    return StochasticAcceptor(
        tuple(states),
        tuple(inputs),
        {a: RatMatrix(g) for a, g in matrices.items()},
        initial,
        final,
    )


def drifting_acceptor():
    """Two states, length-3 acceptance probabilities from 7/8 down to 219/256."""
    return _acc(
        S2,
        "ab",
        {"a": [["1/2", "1/2"], [0, 1]], "b": [["1/4", "3/4"], ["1/8", "7/8"]]},
        (1, 0),
        (0, 1),
    )


def parity_acceptor():
    """Deterministic: accepts words with an odd number of ``b``."""
    return _acc(S2, "ab", {"a": [[1, 0], [0, 1]], "b": [[0, 1], [1, 0]]}, (1, 0), (0, 1))


def halving_acceptor():
    """One symbol; ``a^k`` is accepted with probability ``1 - 2^-k``."""
    return _acc(S2, "a", {"a": [["1/2", "1/2"], [0, 1]]}, (1, 0), (0, 1))


def nonregular_acceptor():
    """At cut point 1/2 accepts exactly ``a^i b^j`` with ``j >= i + 2``."""
    h = "1/2"
    return _acc(
        S5,
        "ab",
        {
            "a": [[h, h, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 0, 0, 1], [0, 0, 0, 0, 1], [0, 0, 0, 0, 1]],
            "b": [[0, 0, h, h, 0], [0, 0, h, 0, h], [0, 0, h, h, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]],
        },
        (1, 0, 0, 0, 0),
        (0, 0, 0, 1, 0),
    )


def cantor_acceptor():
    """The 3-adic acceptor restricted to digits 0 and 2."""
    return _acc(
        S2,
        ("0", "2"),
        {"0": [[1, 0], ["2/3", "1/3"]], "2": [["1/3", "2/3"], [0, 1]]},
        (1, 0),
        (0, 1),
    )


TRANSDUCERS = {
    "two_state_drift": two_state_drift,
    "two_input_channel": two_input_channel,
    "cycle4": cycle,
    "four_state_reducible": four_state_reducible,
    "reduced_by_s3": reduced_by_s3,
    "reduced_by_s4": reduced_by_s4,
    "reduced_not_full_rank": reduced_not_full_rank,
    "determined_pair": determined_pair,
    "convex_three_state": convex_three_state,
    "even_a": even_a,
    "even_b": even_b,
    "hom_source": hom_source,
    "hom_target": hom_target,
    "observable_funnel": observable_funnel,
    "state_determined_swap": state_determined_swap,
    "output_determined_pair": output_determined_pair,
    "mealy_pair": mealy_pair,
}

ACCEPTORS = {
    "drifting_acceptor": drifting_acceptor,
    "parity_acceptor": parity_acceptor,
    "halving_acceptor": halving_acceptor,
    "nonregular_acceptor": nonregular_acceptor,
    "cantor_acceptor": cantor_acceptor,
}

# file names under data/; the two Even-style machines keep their short names
FILE_NAMES = {"even_a": "evenA", "even_b": "evenB"}


def export(directory) -> list:
    """Write every catalog entry (plus the 3-adic acceptor) as canonical JSON."""
    from pathlib import Path

    from . import io
    from .acceptor import padic

    directory = Path(directory)
    written = []
    entries = {**{k: f() for k, f in TRANSDUCERS.items()}, **{k: f() for k, f in ACCEPTORS.items()}}
    entries["padic3"] = padic(3)
    for key, obj in entries.items():
        path = directory / f"{FILE_NAMES.get(key, key)}.json"
        io.dump(obj, path)
        written.append(path)
    return written
