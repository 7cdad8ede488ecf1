"""Stochastic automata (transducers) and their word-level semantics."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional, Sequence

from .ratlin import (
    ONE,
    ZERO,
    RatMatrix,
    RatVector,
    block_diag,
    dot,
    format_rat,
    is_distribution,
    mat_mul,
    mat_vec,
    ones,
    rat,
    unit,
    vec,
)


class AutomatonError(ValueError):
    """Structurally broken automaton or acceptor (not repairable by reporting)."""


@dataclass(frozen=True)
class WordPair:
    """The pair ``(y|x)``: output word ``y`` emitted while reading ``x``."""

    output: tuple
    input: tuple

    def __post_init__(self):
        object.__setattr__(self, "output", tuple(self.output))
        object.__setattr__(self, "input", tuple(self.input))

    def __len__(self):
        return len(self.input)

    @property
    def balanced(self) -> bool:
        return len(self.input) == len(self.output)

    def __str__(self) -> str:
        y = "".join(map(str, self.output)) or "ε"
        x = "".join(map(str, self.input)) or "ε"
        return f"({y}|{x})"


EMPTY = WordPair((), ())


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class StochasticAutomaton:
    """Finite transducer with one substochastic kernel ``P(b|a)`` per symbol pair.

    ``kernels[(a, b)][i][j]`` is ``p(b, s_j | a, s_i)``.  Declaration order of
    states and symbols is kept; it fixes every canonical order downstream.
    """

    states: tuple
    inputs: tuple
    outputs: tuple
    kernels: Mapping

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if not self.states:
            raise AutomatonError("empty state set")
        if not self.inputs or not self.outputs:
            raise AutomatonError("empty alphabet")
        for name, seq in (("state", self.states), ("input", self.inputs), ("output", self.outputs)):
            if len(set(seq)) != len(seq):
                raise AutomatonError(f"duplicate {name} name")
        n = len(self.states)
        kernels = {}
        for a in self.inputs:
            for b in self.outputs:
                m = self.kernels.get((a, b))
                if m is None:
                    m = RatMatrix.zeros(n, n)
                elif not isinstance(m, RatMatrix):
                    m = RatMatrix(m)
                if m.shape != (n, n):
                    raise AutomatonError(f"kernel P({b}|{a}) has shape {m.shape}, expected {(n, n)}")
                kernels[(a, b)] = m
        extra = set(self.kernels) - set(kernels)
        if extra:
            raise AutomatonError(f"kernels for unknown symbol pairs: {sorted(extra)}")
        object.__setattr__(self, "kernels", kernels)

    @property
    def n(self) -> int:
        return len(self.states)

    def kernel(self, a, b) -> RatMatrix:
        try:
            return self.kernels[(a, b)]
        except KeyError:
            raise KeyError(f"unknown symbol pair ({b}|{a})") from None

    def p(self, b, t, a, s) -> Fraction:
        """``p(b, t | a, s)`` by state and symbol names."""
        return self.kernels[(a, b)][self.state_index(s), self.state_index(t)]

    def state_index(self, s) -> int:
        if isinstance(s, int) and s not in self.states:
            if not 0 <= s < self.n:
                raise IndexError(f"state index {s} out of range")
            return s
        try:
            return self.states.index(s)
        except ValueError:
            raise KeyError(f"unknown state {s!r}") from None

    def generators(self) -> list:
        """Symbol pairs ``(b, a)`` in canonical order: output major, then input."""
        return [(b, a) for b in self.outputs for a in self.inputs]

    def with_kernels(self, kernels: Mapping, states: Optional[Sequence] = None) -> "StochasticAutomaton":
        return StochasticAutomaton(states or self.states, self.inputs, self.outputs, kernels)

    def __eq__(self, other):
        if not isinstance(other, StochasticAutomaton):
            return NotImplemented
        return (
            self.states == other.states
            and self.inputs == other.inputs
            and self.outputs == other.outputs
            and self.kernels == other.kernels
        )

    def __hash__(self):
        return hash((self.states, self.inputs, self.outputs))


@dataclass(frozen=True)
class StateDistribution:
    weights: RatVector

    def __post_init__(self):
        w = vec(self.weights)
        if not is_distribution(w):
            raise ValueError(f"not a state distribution: {[format_rat(x) for x in w]}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def state(cls, n: int, i: int) -> "StateDistribution":
        return cls(unit(n, i))

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)


@dataclass(frozen=True)
class ResultVector:
    values: RatVector
    label: WordPair


def _weights(pi, n: int) -> RatVector:
    if isinstance(pi, StateDistribution):
        w = pi.weights
    elif isinstance(pi, int):
        w = unit(n, pi)
    else:
        w = vec(pi)
    if len(w) != n:
        raise ValueError(f"distribution of length {len(w)} for {n} states")
    return w


def validate(A: StochasticAutomaton) -> ValidationReport:
    """Check nonnegativity and the per-(a, s) unit mass of every kernel row."""
    report = ValidationReport()
    for (a, b), m in A.kernels.items():
        for i, r in enumerate(m.entries):
            for j, x in enumerate(r):
                if x < 0:
                    report.violations.append(
                        f"negative entry p({b},{A.states[j]}|{a},{A.states[i]}) = {format_rat(x)}"
                    )
    for a in A.inputs:
        for i, s in enumerate(A.states):
            mass = sum((sum(A.kernels[(a, b)].row(i), ZERO) for b in A.outputs), ZERO)
            if mass != 1:
                report.violations.append(f"mass of (a={a}, s={s}) is {format_rat(mass)}, expected 1")
    return report


def _check_word(word, alphabet, kind) -> tuple:
    word = tuple(word)
    for sym in word:
        if sym not in alphabet:
            raise KeyError(f"{kind} symbol {sym!r} not in alphabet {list(alphabet)}")
    return word


def word_matrix(A: StochasticAutomaton, x, y) -> RatMatrix:
    """``P(y|x)``; the zero matrix when the lengths differ."""
    x = _check_word(x, A.inputs, "input")
    y = _check_word(y, A.outputs, "output")
    if len(x) != len(y):
        return RatMatrix.zeros(A.n, A.n)
    m = RatMatrix.identity(A.n)
    for a, b in zip(x, y):
        m = mat_mul(m, A.kernels[(a, b)])
    return m


def symbol_matrix(A: StochasticAutomaton, a) -> RatMatrix:
    """``P(a) = sum_b P(b|a)``."""
    total = RatMatrix.zeros(A.n, A.n)
    for b in A.outputs:
        total = total + A.kernels[(a, b)]
    return total


def input_matrix(A: StochasticAutomaton, x) -> RatMatrix:
    x = _check_word(x, A.inputs, "input")
    m = RatMatrix.identity(A.n)
    for a in x:
        m = mat_mul(m, symbol_matrix(A, a))
    return m


def eta(A: StochasticAutomaton, x, y) -> RatVector:
    """Result vector values ``P(y|x) 1``, computed right to left."""
    x = _check_word(x, A.inputs, "input")
    y = _check_word(y, A.outputs, "output")
    if len(x) != len(y):
        return (ZERO,) * A.n
    v = ones(A.n)
    for a, b in zip(reversed(x), reversed(y)):
        v = mat_vec(A.kernels[(a, b)], v)
    return v


def result_vector(A: StochasticAutomaton, x, y) -> ResultVector:
    return ResultVector(eta(A, x, y), WordPair(y, x))


def dist_prob(A: StochasticAutomaton, pi, x, y) -> Fraction:
    """Probability of emitting ``y`` on ``x`` when started in distribution ``pi``."""
    return dot(_weights(pi, A.n), eta(A, x, y))


def bsc(p) -> StochasticAutomaton:
    """Single-state binary symmetric channel with crossover probability ``p``."""
    p = rat(p)
    if not 0 <= p <= Fraction(1, 2):
        raise ValueError("crossover probability must lie in [0, 1/2]")
    keep, flip = RatMatrix([[ONE - p]]), RatMatrix([[p]])
    kernels = {("0", "0"): keep, ("0", "1"): flip, ("1", "0"): flip, ("1", "1"): keep}
    return StochasticAutomaton(("s",), ("0", "1"), ("0", "1"), kernels)


def avc(emission: Mapping, drift, states: Sequence, inputs: Sequence, outputs: Sequence) -> StochasticAutomaton:
    """Arbitrarily varying channel ``p(b, s'|a, s) = p'(b|a, s) p''(s'|s)``.

    ``emission[(a, s)]`` maps each output symbol to its probability; ``drift``
    is the stochastic state-drift matrix.
    """
    drift = drift if isinstance(drift, RatMatrix) else RatMatrix(drift)
    n = len(states)
    if drift.shape != (n, n) or not drift.is_stochastic():
        raise ValueError("drift must be a stochastic matrix over the states")
    law = {}
    for a in inputs:
        for s in states:
            dist = emission.get((a, s))
            if dist is None:
                raise ValueError(f"missing emission law for ({a}, {s})")
            row = tuple(rat(dist.get(b, 0)) for b in outputs)
            if set(dist) - set(outputs) or not is_distribution(row):
                raise ValueError(f"emission law for ({a}, {s}) is not a distribution over the outputs")
            law[(a, s)] = dict(zip(outputs, row))
    kernels = {}
    for a in inputs:
        for b in outputs:
            kernels[(a, b)] = RatMatrix(
                [[law[(a, s)][b] * drift[i, j] for j in range(n)] for i, s in enumerate(states)]
            )
    return StochasticAutomaton(states, inputs, outputs, kernels)


def words(alphabet: Sequence, length: int):
    return product(alphabet, repeat=length)


def word_pairs(A: StochasticAutomaton, length: int):
    """All balanced pairs of the given length, in shortlex generator order."""
    for gens in product(A.generators(), repeat=length):
        yield WordPair(tuple(b for b, _ in gens), tuple(a for _, a in gens))


def direct_sum(A: StochasticAutomaton, B: StochasticAutomaton) -> StochasticAutomaton:
    """Block-diagonal union of two automata over the same alphabets."""
    if A.inputs != B.inputs or A.outputs != B.outputs:
        raise ValueError("direct sum needs identical input and output alphabets")
    if set(A.states) & set(B.states):
        states = tuple(f"A.{s}" for s in A.states) + tuple(f"B.{s}" for s in B.states)
    else:
        states = A.states + B.states
    kernels = {k: block_diag(A.kernels[k], B.kernels[k]) for k in A.kernels}
    return StochasticAutomaton(states, A.inputs, A.outputs, kernels)
