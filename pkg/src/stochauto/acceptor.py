"""Stochastic acceptors and their cut-point languages."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional, Sequence

from .automaton import AutomatonError, ValidationReport
from .hmatrix import BudgetExceeded, default_budget
from .ratlin import (
    ONE,
    ZERO,
    RatMatrix,
    dot,
    format_rat,
    is_distribution,
    mat_vec,
    rat,
    unit,
    vec,
    vec_mat,
)

DEFAULT_POWERSET_CAP = 16


@dataclass(frozen=True)
class StochasticAcceptor:
    """States, one stochastic matrix per symbol, initial row ``pi``, final 0/1 column ``f``.

    The constructor only checks shapes; :func:`validate_acceptor` reports
    value-level problems (non-stochastic rows, non-binary ``f``...).
    """

    states: tuple
    inputs: tuple
    matrices: Mapping
    initial: tuple
    final: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "inputs", tuple(self.inputs))
        if not self.states:
            raise AutomatonError("empty state set")
        if not self.inputs:
            raise AutomatonError("empty alphabet")
        n = len(self.states)
        mats = {}
        for a in self.inputs:
            if a not in self.matrices:
                raise AutomatonError(f"missing matrix for symbol {a!r}")
            m = self.matrices[a]
            m = m if isinstance(m, RatMatrix) else RatMatrix(m)
            if m.shape != (n, n):
                raise AutomatonError(f"P({a}) has shape {m.shape}, expected {(n, n)}")
            mats[a] = m
        if set(self.matrices) - set(self.inputs):
            raise AutomatonError("matrices for symbols outside the alphabet")
        object.__setattr__(self, "matrices", mats)
        initial, final = vec(self.initial), vec(self.final)
        if len(initial) != n or len(final) != n:
            raise AutomatonError("initial and final vectors must have one entry per state")
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "final", final)

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def final_states(self) -> tuple:
        return tuple(s for s, f in zip(self.states, self.final) if f == 1)

    def __eq__(self, other):
        if not isinstance(other, StochasticAcceptor):
            return NotImplemented
        return (
            self.states == other.states
            and self.inputs == other.inputs
            and self.matrices == other.matrices
            and self.initial == other.initial
            and self.final == other.final
        )

    def __hash__(self):
        return hash((self.states, self.inputs, self.initial, self.final))


@dataclass(frozen=True)
class LanguageSample:
    cutpoint: Fraction
    max_len: int
    accepted: tuple
    probabilities: Mapping = field(repr=False)


@dataclass(frozen=True)
class GapEstimate:
    """Smallest observed distance to the cut point over words of length <= max_len.

    An upper bound on the isolation radius; zero refutes isolation, a positive
    value proves nothing about longer words.
    """

    cutpoint: Fraction
    max_len: int
    gap: Fraction
    witness: tuple


def validate_acceptor(A: StochasticAcceptor) -> ValidationReport:
    report = ValidationReport()
    for a, m in A.matrices.items():
        for i, r in enumerate(m.entries):
            if any(x < 0 for x in r) or sum(r, ZERO) != 1:
                report.violations.append(
                    f"row {A.states[i]} of P({a}) is not a distribution "
                    f"(mass {format_rat(sum(r, ZERO))})"
                )
    if not is_distribution(A.initial):
        report.violations.append(f"initial vector is not a distribution (mass {format_rat(sum(A.initial, ZERO))})")
    for s, f in zip(A.states, A.final):
        if f not in (0, 1):
            report.violations.append(f"final entry for {s} is {format_rat(f)}, expected 0 or 1")
    return report


def _check(A: StochasticAcceptor, x) -> tuple:
    x = tuple(x)
    for a in x:
        if a not in A.matrices:
            raise KeyError(f"symbol {a!r} not in alphabet {list(A.inputs)}")
    return x


def state_after(A: StochasticAcceptor, x) -> tuple:
    """Distribution ``pi P(x)``."""
    v = A.initial
    for a in _check(A, x):
        v = vec_mat(v, A.matrices[a])
    return v


def word_matrix(A: StochasticAcceptor, x) -> RatMatrix:
    m = RatMatrix.identity(A.n)
    for a in _check(A, x):
        m = m @ A.matrices[a]
    return m


def accept_prob(A: StochasticAcceptor, x) -> Fraction:
    return dot(state_after(A, x), A.final)


def in_language(A: StochasticAcceptor, cutpoint, x) -> bool:
    return accept_prob(A, x) > rat(cutpoint)


def _walk(A: StochasticAcceptor, max_len: int, budget: Optional[int]):
    """Yield ``(word, pi P(word))`` for every word up to ``max_len`` in shortlex order."""
    budget = default_budget() if budget is None else budget
    k = len(A.inputs)
    total = sum(k**l for l in range(max_len + 1))
    if total > budget:
        raise BudgetExceeded(f"{total} words exceed the budget of {budget}")
    level = [((), A.initial)]
    for length in range(max_len + 1):
        yield from level
        if length == max_len:
            break
        level = [(w + (a,), vec_mat(v, A.matrices[a])) for w, v in level for a in A.inputs]


def enumerate_language(A: StochasticAcceptor, cutpoint, max_len: int, budget: Optional[int] = None) -> LanguageSample:
    lam = rat(cutpoint)
    probs = {}
    accepted = []
    for w, v in _walk(A, max_len, budget):
        p = dot(v, A.final)
        probs[w] = p
        if p > lam:
            accepted.append(w)
    return LanguageSample(lam, max_len, tuple(accepted), probs)


def is_deterministic_acceptor(A: StochasticAcceptor) -> bool:
    return all(m.is_binary() and all(s == 1 for s in m.row_sums()) for m in A.matrices.values())


def _subset_name(A: StochasticAcceptor, members) -> str:
    return "{" + ",".join(A.states[i] for i in sorted(members)) + "}"


def determinize_zero(A: StochasticAcceptor, full_powerset: bool = False, cap: int = DEFAULT_POWERSET_CAP) -> StochasticAcceptor:
    """Subset construction with ``L_{A,0} == L_{B,0}``.

    By default only subsets reachable from the support of ``pi`` are built.
    ``full_powerset`` builds all ``2^n`` subsets, ordered by bitmask with
    state ``i`` as bit ``i``.
    """
    if A.n > cap:
        raise BudgetExceeded(f"{A.n} states exceed the powerset cap of {cap}")
    def step(subset: frozenset, a) -> frozenset:
        m = A.matrices[a]
        return frozenset(j for i in subset for j in range(A.n) if m[i, j] != 0)

    start = frozenset(i for i, x in enumerate(A.initial) if x != 0)
    if full_powerset:
        subsets = [frozenset(i for i in range(A.n) if mask >> i & 1) for mask in range(2**A.n)]
    else:
        subsets = [start]
        seen = {start}
        k = 0
        while k < len(subsets):
            for a in A.inputs:
                t = step(subsets[k], a)
                if t not in seen:
                    seen.add(t)
                    subsets.append(t)
            k += 1
    index = {s: i for i, s in enumerate(subsets)}
    N = len(subsets)
    mats = {}
    for a in A.inputs:
        grid = [[ZERO] * N for _ in range(N)]
        for i, s in enumerate(subsets):
            grid[i][index[step(s, a)]] = ONE
        mats[a] = RatMatrix(grid)
    finals = {i for i, f in enumerate(A.final) if f == 1}
    final = tuple(ONE if s & finals else ZERO for s in subsets)
    return StochasticAcceptor(
        tuple(_subset_name(A, s) for s in subsets),
        A.inputs,
        mats,
        unit(N, index[start]),
        final,
    )


def empty_acceptor(inputs: Sequence) -> StochasticAcceptor:
    """One non-final state looping on every symbol."""
    return StochasticAcceptor(("sink",), tuple(inputs), {a: RatMatrix([[1]]) for a in inputs}, (1,), (0,))


def dfa_cutpoint_to_zero(A: StochasticAcceptor, cutpoint, cap: int = 10**5) -> StochasticAcceptor:
    """Deterministic acceptor with one start state and ``L_{B,0} == L_{A,cutpoint}``.

    Runs all start states of ``A`` in lockstep (the product of the ``A_i``);
    a tuple of current states is final when the initial mass of the runs
    sitting in ``F`` exceeds the cut point.  That is the union over all
    start sets ``T`` with ``pi(T) > cutpoint`` of the intersection of the
    ``L(A_i)``, ``i`` in ``T``.
    """
    if not is_deterministic_acceptor(A):
        raise ValueError("dfa_cutpoint_to_zero needs a deterministic acceptor")
    lam = rat(cutpoint)
    if lam >= 1:
        return empty_acceptor(A.inputs)
    support = [i for i, x in enumerate(A.initial) if x != 0]
    succ = {a: [m.row(i).index(ONE) for i in range(A.n)] for a, m in A.matrices.items()}
    start = tuple(support)
    tuples = [start]
    index = {start: 0}
    k = 0
    while k < len(tuples):
        for a in A.inputs:
            t = tuple(succ[a][i] for i in tuples[k])
            if t not in index:
                if len(tuples) >= cap:
                    raise BudgetExceeded(f"product machine exceeds {cap} states")
                index[t] = len(tuples)
                tuples.append(t)
        k += 1
    N = len(tuples)
    mats = {}
    for a in A.inputs:
        grid = [[ZERO] * N for _ in range(N)]
        for i, t in enumerate(tuples):
            grid[i][index[tuple(succ[a][j] for j in t)]] = ONE
        mats[a] = RatMatrix(grid)
    final = []
    for t in tuples:
        mass = sum((A.initial[i] for i, cur in zip(support, t) if A.final[cur] == 1), ZERO)
        final.append(ONE if mass > lam else ZERO)
    names = tuple("(" + ",".join(A.states[i] for i in t) + ")" for t in tuples)
    return StochasticAcceptor(names, A.inputs, mats, unit(N, 0), tuple(final))


def rescale_cutpoint(A: StochasticAcceptor, cutpoint, target) -> StochasticAcceptor:
    """Acceptor ``B`` with ``L_{B,target} == L_{A,cutpoint}``, for ``0 < target < 1``.

    For an interior cut point an absorbing sink ``s_sink`` receives initial
    mass ``nu``; it is non-final when shrinking the threshold and final when
    raising it.
    """
    lam, mu = rat(cutpoint), rat(target)
    if not 0 < mu < 1:
        raise ValueError("target cut point must lie strictly between 0 and 1")
    if not 0 <= lam <= 1:
        raise ValueError("cut point must lie in [0, 1]")
    if lam == 0:
        # a deterministic machine with a single start state only emits 0 or 1
        return determinize_zero(A)
    if lam == 1:
        return empty_acceptor(A.inputs)
    if mu <= lam:
        nu = 1 - mu / lam
        sink_final = ZERO
    else:
        nu = (mu - lam) / (1 - lam)
        sink_final = ONE
    n = A.n
    mats = {}
    for a, m in A.matrices.items():
        grid = [list(r) + [ZERO] for r in m.entries] + [[ZERO] * n + [ONE]]
        mats[a] = RatMatrix(grid)
    initial = tuple((1 - nu) * x for x in A.initial) + (nu,)
    name = "sink"
    while name in A.states:
        name += "'"
    return StochasticAcceptor(A.states + (name,), A.inputs, mats, initial, A.final + (sink_final,))


def normalize_initial(A: StochasticAcceptor, cutpoint) -> StochasticAcceptor:
    """Equivalent acceptor (same cut point) starting from a single fresh state ``s0``."""
    lam = rat(cutpoint)
    n = A.n
    mats = {}
    for a, m in A.matrices.items():
        top = [ZERO] + list(vec_mat(A.initial, m))
        mats[a] = RatMatrix([top] + [[ZERO] + list(r) for r in m.entries])
    f0 = ONE if dot(A.initial, A.final) > lam else ZERO
    name = "s0"
    while name in A.states:
        name += "'"
    return StochasticAcceptor((name,) + A.states, A.inputs, mats, unit(n + 1, 0), (f0,) + A.final)


def padic(p: int) -> StochasticAcceptor:
    """Two-state acceptor over digits ``0..p-1``.

    Reading ``x1 ... xk`` is accepted with probability equal to the base-p
    fraction ``0.xk ... x1``.
    """
    if p < 2:
        raise ValueError("base must be at least 2")
    P = Fraction(1, p)
    mats = {}
    for a in range(p):
        mats[str(a)] = RatMatrix([[1 - a * P, a * P], [1 - (a + 1) * P, (a + 1) * P]])
    return StochasticAcceptor(("s1", "s2"), tuple(str(a) for a in range(p)), mats, (1, 0), (0, 1))


def isolation_gap(A: StochasticAcceptor, cutpoint, max_len: int, budget: Optional[int] = None) -> GapEstimate:
    lam = rat(cutpoint)
    best, witness = None, ()
    for w, v in _walk(A, max_len, budget):
        d = abs(dot(v, A.final) - lam)
        if best is None or d < best:
            best, witness = d, w
            if d == 0:
                break
    return GapEstimate(lam, max_len, best, witness)


def distinguishability_classes(
    A: StochasticAcceptor, cutpoint, prefix_len: int, suffix_len: int, budget: Optional[int] = None
) -> int:
    """Number of membership signatures among prefixes of length <= prefix_len.

    Two prefixes share a class when no suffix of length <= suffix_len tells
    them apart, so the count is a lower bound on the Nerode index.
    """
    lam = rat(cutpoint)
    budget = default_budget() if budget is None else budget
    k = len(A.inputs)
    n_pre = sum(k**l for l in range(prefix_len + 1))
    n_suf = sum(k**l for l in range(suffix_len + 1))
    if n_pre * n_suf > budget:
        raise BudgetExceeded(f"{n_pre * n_suf} membership tests exceed the budget of {budget}")
    suffixes = [w for l in range(suffix_len + 1) for w in product(A.inputs, repeat=l)]
    # acceptance of suffix z from each state: P(z) f, computed once
    tails = []
    for z in suffixes:
        col = A.final
        for a in reversed(z):
            col = mat_vec(A.matrices[a], col)
        tails.append(col)
    signatures = set()
    for _, v in _walk(A, prefix_len, budget):
        signatures.add(tuple(dot(v, t) > lam for t in tails))
    return len(signatures)
