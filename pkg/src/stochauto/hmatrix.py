"""Result-vector bases and the equivalence / covering decisions built on them."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence

from .automaton import (
    EMPTY,
    StochasticAutomaton,
    WordPair,
    _weights,
    direct_sum,
    eta,
)
from .ratlin import (
    ZERO,
    FeasibilityProblem,
    RatMatrix,
    dot,
    feasible_distribution,
    in_span,
    mat_vec,
    ones,
    vec_mat,
)

__all__ = [
    "HMatrix",
    "CoverCertificate",
    "BudgetExceeded",
    "build_h",
    "h_from_labels",
    "dist_equiv",
    "states_equiv",
    "state_classes",
    "k_equiv",
    "direct_sum",
    "cross_equiv",
    "covers",
    "automata_equivalent",
    "s_equivalent",
    "h_image",
]

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


def default_budget() -> int:
    return int(os.environ.get("STOCHAUTO_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class HMatrix:
    """``n x d`` basis of the result-vector space, columns labelled by word pairs."""

    matrix: RatMatrix
    labels: tuple
    automaton: StochasticAutomaton

    @property
    def d(self) -> int:
        return self.matrix.cols

    def rows(self) -> list:
        return list(self.matrix.entries)

    def image(self, pi) -> tuple:
        """``pi H``."""
        return vec_mat(_weights(pi, self.matrix.rows), self.matrix)


@dataclass(frozen=True)
class CoverCertificate:
    """Row-stochastic ``Q`` with ``eta_B = Q eta_A`` on every basis label."""

    Q: RatMatrix
    labels: tuple
    residuals: tuple

    @property
    def exact(self) -> bool:
        return all(r == 0 for row in self.residuals for r in row)


def build_h(A: StochasticAutomaton) -> HMatrix:
    """Canonical basis of result vectors.

    Word pairs are scanned level by level in shortlex order, a pair ranking
    by its leading generator first (output symbol major, then input).  Only
    one-step extensions ``(by|ax)`` of pairs kept at the previous level are
    candidates: ``eta(by|ax) = P(b|a) eta(y|x)``, so extending a dependent
    pair can never produce a new direction.
    """
    n = A.n
    gens = A.generators()
    labels = [EMPTY]
    columns = [ones(n)]
    frontier = [(EMPTY, ones(n))]
    length = 0
    while frontier and len(columns) < n and length < n - 1:
        length += 1
        candidates = []
        for rank_b, (b, a) in enumerate(gens):
            kernel = A.kernels[(a, b)]
            for pos, (label, v) in enumerate(frontier):
                candidates.append(((rank_b, pos), WordPair((b,) + label.output, (a,) + label.input), kernel, v))
        # sort key: leading generator, then order of the extended pair at its own level
        candidates.sort(key=lambda c: c[0])
        new_frontier = []
        for _, label, kernel, v in candidates:
            w = mat_vec(kernel, v)
            if in_span(w, columns) is None:
                labels.append(label)
                columns.append(w)
                new_frontier.append((label, w))
                if len(columns) == n:
                    break
        frontier = new_frontier
    return HMatrix(RatMatrix.from_columns(columns, n), tuple(labels), A)


def h_from_labels(A: StochasticAutomaton, labels: Sequence[WordPair]) -> HMatrix:
    """H-matrix with a caller-chosen list of column labels.

    The labels must give a basis of the same space as :func:`build_h`.
    """
    labels = tuple(labels)
    columns = [eta(A, lab.input, lab.output) for lab in labels]
    canonical = build_h(A)
    for c in columns:
        if in_span(c, canonical.matrix.columns()) is None:
            raise ValueError("label outside the result-vector space")
    for i, c in enumerate(columns):
        if in_span(c, columns[:i]) is not None:
            raise ValueError(f"label {labels[i]} is dependent on the previous ones")
    if len(columns) != canonical.d:
        raise ValueError(f"{len(columns)} labels for a space of dimension {canonical.d}")
    return HMatrix(RatMatrix.from_columns(columns, A.n), labels, A)


def dist_equiv(A: StochasticAutomaton, pi, pi2, H: Optional[HMatrix] = None) -> bool:
    H = H or build_h(A)
    return H.image(pi) == H.image(pi2)


def states_equiv(A: StochasticAutomaton, i: int, j: int, H: Optional[HMatrix] = None) -> bool:
    H = H or build_h(A)
    i, j = A.state_index(i), A.state_index(j)
    return H.matrix.row(i) == H.matrix.row(j)


def state_classes(A: StochasticAutomaton, H: Optional[HMatrix] = None) -> list:
    """Equivalence classes of states (lists of indices), ordered by smallest member."""
    H = H or build_h(A)
    by_row = {}
    for i, row in enumerate(H.matrix.entries):
        by_row.setdefault(row, []).append(i)
    return sorted(by_row.values(), key=lambda block: block[0])


def k_equiv(A, pi, B, pi2, k: int, budget: Optional[int] = None) -> bool:
    """Agreement of ``eta^pi_A`` and ``eta^pi2_B`` on every pair of length <= k.

    Decided by brute-force enumeration of all word pairs.
    """
    if A.inputs != B.inputs or A.outputs != B.outputs:
        raise ValueError("k-equivalence needs identical alphabets")
    budget = default_budget() if budget is None else budget
    gens = A.generators()
    if len(gens) ** k > budget:
        raise BudgetExceeded(f"{len(gens)}^{k} word pairs exceed the budget of {budget}")
    wa, wb = _weights(pi, A.n), _weights(pi2, B.n)
    level = [(ones(A.n), ones(B.n))]
    for length in range(k + 1):
        for va, vb in level:
            if dot(wa, va) != dot(wb, vb):
                return False
        if length == k:
            break
        level = [
            (mat_vec(A.kernels[(a, b)], va), mat_vec(B.kernels[(a, b)], vb))
            for b, a in gens
            for va, vb in level
        ]
    return True


def _embed(pi, n: int, offset: int, total: int) -> tuple:
    w = _weights(pi, n)
    return (ZERO,) * offset + w + (ZERO,) * (total - offset - n)


def cross_equiv(A: StochasticAutomaton, pi_a, B: StochasticAutomaton, pi_b) -> bool:
    C = direct_sum(A, B)
    total = A.n + B.n
    return dist_equiv(C, _embed(pi_a, A.n, 0, total), _embed(pi_b, B.n, A.n, total))


def covers(A: StochasticAutomaton, B: StochasticAutomaton) -> Optional[CoverCertificate]:
    """Stochastic ``Q`` (|S_B| x |S_A|) with ``eta_B = Q eta_A``, or None.

    Row ``j`` of ``Q`` is a distribution of ``A`` equivalent to state ``t_j``,
    found by exact feasibility on the joint basis of ``A (+) B``.
    """
    C = direct_sum(A, B)
    H = build_h(C)
    labels = H.labels
    cols_a = [col[: A.n] for col in H.matrix.columns()]
    cols_b = [col[A.n :] for col in H.matrix.columns()]
    rows = []
    for j in range(B.n):
        problem = FeasibilityProblem(A.n, tuple((ca, cb[j]) for ca, cb in zip(cols_a, cols_b)))
        q = feasible_distribution(problem)
        if q is None:
            return None
        rows.append(q)
    Q = RatMatrix(rows, cols=A.n)
    residuals = tuple(
        tuple(dot(Q.row(j), ca) - cb[j] for ca, cb in zip(cols_a, cols_b)) for j in range(B.n)
    )
    return CoverCertificate(Q, labels, residuals)


def automata_equivalent(A: StochasticAutomaton, B: StochasticAutomaton) -> bool:
    return covers(A, B) is not None and covers(B, A) is not None


def s_equivalent(A: StochasticAutomaton, B: StochasticAutomaton) -> bool:
    """Same set of single-state behaviours, compared as rows of the joint basis."""
    H = build_h(direct_sum(A, B))
    rows = H.matrix.entries
    return set(rows[: A.n]) == set(rows[A.n :])


def h_image(Q: RatMatrix, H) -> RatMatrix:
    """``Q H`` with columns dependent on earlier ones removed."""
    M = H.matrix if isinstance(H, HMatrix) else H
    if Q.cols != M.rows:
        raise ValueError(f"dimension mismatch: {Q.shape} @ {M.shape}")
    if not Q.is_stochastic():
        raise ValueError("Q must be row-stochastic")
    product = Q @ M
    kept = []
    for col in product.columns():
        if in_span(col, kept) is None:
            kept.append(col)
    return RatMatrix.from_columns(kept, Q.rows)

