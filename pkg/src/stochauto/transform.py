"""Reduction, minimization and structural classification of stochastic automata."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .automaton import StochasticAutomaton, symbol_matrix, validate
from .hmatrix import HMatrix, build_h, state_classes
from .ratlin import ONE, ZERO, RatMatrix, convex_membership, rank

DEFAULT_ISO_CAP = 8


@dataclass(frozen=True)
class Partition:
    blocks: tuple
    representatives: tuple

    def __post_init__(self):
        blocks = tuple(tuple(b) for b in self.blocks)
        reps = tuple(self.representatives)
        if len(blocks) != len(reps):
            raise ValueError("one representative per block")
        seen = [i for b in blocks for i in b]
        if len(seen) != len(set(seen)) or sorted(seen) != list(range(len(seen))):
            raise ValueError("blocks must partition the state indices")
        for b, r in zip(blocks, reps):
            if r not in b:
                raise ValueError(f"representative {r} outside its block {b}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "representatives", reps)

    def block_of(self, i: int) -> int:
        for k, b in enumerate(self.blocks):
            if i in b:
                return k
        raise IndexError(i)


@dataclass(frozen=True)
class StateMapping:
    """Total map from source state indices to target state indices."""

    targets: tuple

    @classmethod
    def from_names(cls, A: StochasticAutomaton, B: StochasticAutomaton, pairs: Mapping) -> "StateMapping":
        missing = [s for s in A.states if s not in pairs]
        if missing:
            raise ValueError(f"map undefined on {missing}")
        return cls(tuple(B.state_index(pairs[s]) for s in A.states))

    def __call__(self, i: int) -> int:
        return self.targets[i]

    def __len__(self):
        return len(self.targets)

    def named(self, A: StochasticAutomaton, B: StochasticAutomaton) -> dict:
        return {A.states[i]: B.states[j] for i, j in enumerate(self.targets)}


@dataclass
class ClassificationReport:
    reduced: bool
    minimal: bool
    strongly_reduced: bool
    observable: bool
    state_determined: bool
    output_determined: bool
    determined: bool
    mealy: bool
    moore: bool
    simplex_dimension: int
    witnesses: dict = field(default_factory=dict)

    FLAGS = (
        "reduced",
        "minimal",
        "strongly_reduced",
        "observable",
        "state_determined",
        "output_determined",
        "determined",
        "mealy",
        "moore",
    )

    def flags(self) -> dict:
        return {k: getattr(self, k) for k in self.FLAGS}


# ------------------------------------------------------------ reduction


def is_reduced(A: StochasticAutomaton, H: Optional[HMatrix] = None) -> bool:
    rows = (H or build_h(A)).matrix.entries
    return len(set(rows)) == len(rows)


def reduce(A: StochasticAutomaton, representatives: Optional[Sequence] = None):
    """Merge equivalent states.  Returns ``(B, partition)``.

    Each class keeps the transitions of its representative, with target
    mass summed over classes.  ``representatives`` (names or indices, one
    per class in any order) overrides the default smallest index.
    """
    blocks = state_classes(A)
    if representatives is None:
        reps = [b[0] for b in blocks]
    else:
        chosen = [A.state_index(r) for r in representatives]
        reps = []
        for b in blocks:
            hits = [r for r in chosen if r in b]
            if len(hits) > 1:
                raise ValueError(f"several representatives for class {[A.states[i] for i in b]}")
            reps.append(hits[0] if hits else b[0])
        if len(set(chosen)) != len(chosen) or not set(chosen) <= set(reps):
            raise ValueError("representatives must be distinct states from different classes")
    part = Partition(blocks, reps)
    kernels = {}
    for key, m in A.kernels.items():
        kernels[key] = RatMatrix(
            [[sum((m[r, z] for z in target), ZERO) for target in blocks] for r in reps]
        )
    B = StochasticAutomaton(tuple(A.states[r] for r in reps), A.inputs, A.outputs, kernels)
    return B, part


# ------------------------------------------------------------ minimality


def _convex_witness(rows: Sequence, i: int) -> Optional[tuple]:
    """Weights over all rows (zero at ``i``) expressing row ``i`` by the others."""
    others = [r for k, r in enumerate(rows) if k != i]
    if not others:
        return None
    w = convex_membership(rows[i], others)
    if w is None:
        return None
    w = list(w)
    w.insert(i, ZERO)
    return tuple(w)


def is_minimal(A: StochasticAutomaton, H: Optional[HMatrix] = None) -> bool:
    rows = (H or build_h(A)).matrix.entries
    return all(_convex_witness(rows, i) is None for i in range(len(rows)))


def _drop_state(A: StochasticAutomaton, i: int, weights: tuple) -> StochasticAutomaton:
    keep = [k for k in range(A.n) if k != i]
    kernels = {}
    for key, m in A.kernels.items():
        kernels[key] = RatMatrix([[m[s, j] + weights[j] * m[s, i] for j in keep] for s in keep])
    return StochasticAutomaton(tuple(A.states[k] for k in keep), A.inputs, A.outputs, kernels)


def minimize(A: StochasticAutomaton) -> StochasticAutomaton:
    """Equivalent minimal automaton by convex elimination.

    The lowest-index state whose H row is a convex combination of the other
    rows is removed; transitions into it are redistributed by the weights of
    that combination.  Repeats on the smaller automaton until none is left.
    The result is one minimal form among possibly several.
    """
    if not is_reduced(A):
        A, _ = reduce(A)
    while A.n > 1:
        rows = build_h(A).matrix.entries
        for i in range(A.n):
            w = _convex_witness(rows, i)
            if w is not None:
                A = _drop_state(A, i, w)
                break
        else:
            break
    return A


def is_strongly_reduced(A: StochasticAutomaton, H: Optional[HMatrix] = None) -> bool:
    return (H or build_h(A)).d == A.n


# ------------------------------------------------------------ determinism flavours


def is_observable(A: StochasticAutomaton) -> Optional[dict]:
    """Partial map ``(b, a, s) -> s'`` when every kernel row has at most one nonzero entry."""
    gamma = {}
    for (a, b), m in A.kernels.items():
        for i, row in enumerate(m.entries):
            hits = [j for j, x in enumerate(row) if x != 0]
            if len(hits) > 1:
                return None
            if hits:
                gamma[(b, a, A.states[i])] = A.states[hits[0]]
    return gamma


def is_state_determined(A: StochasticAutomaton) -> Optional[dict]:
    delta = {}
    for a in A.inputs:
        m = symbol_matrix(A, a)
        for i, row in enumerate(m.entries):
            if sorted(row) != [ZERO] * (A.n - 1) + [ONE]:
                return None
            delta[(a, A.states[i])] = A.states[row.index(ONE)]
    return delta


def is_output_determined(A: StochasticAutomaton) -> Optional[dict]:
    lam = {}
    for a in A.inputs:
        for i, s in enumerate(A.states):
            carriers = [b for b in A.outputs if sum(A.kernels[(a, b)].row(i), ZERO) == 1]
            if len(carriers) != 1:
                return None
            lam[(a, s)] = carriers[0]
    return lam


def is_determined(A: StochasticAutomaton) -> Optional[tuple]:
    """``(delta, lambda)`` when every ``(a, s)`` has a single certain ``(b, s')``."""
    delta, lam = {}, {}
    for a in A.inputs:
        for i, s in enumerate(A.states):
            hits = []
            for b in A.outputs:
                for j, x in enumerate(A.kernels[(a, b)].row(i)):
                    if x != 0:
                        hits.append((b, j, x))
            if len(hits) != 1 or hits[0][2] != 1:
                return None
            b, j, _ = hits[0]
            delta[(a, s)] = A.states[j]
            lam[(a, s)] = b
    return delta, lam


def mealy_factorization(A: StochasticAutomaton) -> Optional[tuple]:
    """``(p1, p2)`` with ``p(b, s'|a, s) = p1[(a, s)][b] * p2[(a, s)][s']``, or None."""
    p1, p2 = {}, {}
    for a in A.inputs:
        for i, s in enumerate(A.states):
            out = {b: sum(A.kernels[(a, b)].row(i), ZERO) for b in A.outputs}
            nxt = {t: sum((A.kernels[(a, b)][i, j] for b in A.outputs), ZERO) for j, t in enumerate(A.states)}
            for b in A.outputs:
                for j, t in enumerate(A.states):
                    if A.kernels[(a, b)][i, j] != out[b] * nxt[t]:
                        return None
            p1[(a, s)] = out
            p2[(a, s)] = nxt
    return p1, p2


def moore_factorization(A: StochasticAutomaton) -> Optional[tuple]:
    """``(mu, p')`` with ``p(b, s'|a, s) = mu[s'][b] * p'[(a, s)][s']``, or None.

    States never entered get the uniform output law.
    """
    mu = {}
    trans = {}
    for a in A.inputs:
        for i, s in enumerate(A.states):
            trans[(a, s)] = {
                t: sum((A.kernels[(a, b)][i, j] for b in A.outputs), ZERO) for j, t in enumerate(A.states)
            }
    for j, t in enumerate(A.states):
        law = None
        for a in A.inputs:
            for i, s in enumerate(A.states):
                mass = trans[(a, s)][t]
                if mass == 0:
                    continue
                here = {b: A.kernels[(a, b)][i, j] / mass for b in A.outputs}
                if law is None:
                    law = here
                elif law != here:
                    return None
        if law is None:
            law = {b: Fraction(1, len(A.outputs)) for b in A.outputs}
        mu[t] = law
    return mu, trans


def to_moore(A: StochasticAutomaton):
    """Moore automaton on ``outputs x states`` and the projection onto ``A``'s states.

    State ``(b, s)`` remembers the last output; reading ``a`` it moves to
    ``(b', s')`` and emits ``b'`` with probability ``p_A(b', s'|a, s)``.
    """
    pairs = [(b, j) for b in A.outputs for j in range(A.n)]
    names = tuple(f"{b}:{A.states[j]}" for b, j in pairs)
    N = len(pairs)
    kernels = {}
    for a in A.inputs:
        for b2 in A.outputs:
            grid = [[ZERO] * N for _ in range(N)]
            for src, (_, s0) in enumerate(pairs):
                for dst, (b1, s1) in enumerate(pairs):
                    if b1 == b2:
                        grid[src][dst] = A.kernels[(a, b1)][s0, s1]
            kernels[(a, b2)] = RatMatrix(grid)
    B = StochasticAutomaton(names, A.inputs, A.outputs, kernels)
    return B, StateMapping(tuple(j for _, j in pairs))


# ------------------------------------------------------------ morphisms


def check_s_homomorphism(A: StochasticAutomaton, B: StochasticAutomaton, phi) -> bool:
    """Does ``phi`` carry ``A``'s kernel mass, summed over fibres, onto ``B``'s kernels?"""
    if isinstance(phi, Mapping):
        phi = StateMapping.from_names(A, B, phi)
    if len(phi) != A.n or not all(0 <= t < B.n for t in phi.targets):
        raise ValueError("state map must be total from A into B")
    if A.inputs != B.inputs or A.outputs != B.outputs:
        raise ValueError("S-homomorphism needs identical alphabets")
    for (a, b), m in A.kernels.items():
        mb = B.kernels[(a, b)]
        for s in range(A.n):
            mass = [ZERO] * B.n
            for j in range(A.n):
                mass[phi(j)] += m[s, j]
            for t in set(phi.targets):
                if mb[phi(s), t] != mass[t]:
                    return False
    return True


def _signature(A: StochasticAutomaton, i: int) -> tuple:
    sig = []
    for key in sorted(A.kernels):
        m = A.kernels[key]
        sig.append((tuple(sorted(m.row(i))), tuple(sorted(m.column(i))), m[i, i]))
    return tuple(sig)


def is_isomorphic(A: StochasticAutomaton, B: StochasticAutomaton, cap: int = DEFAULT_ISO_CAP) -> Optional[StateMapping]:
    """Lexicographically smallest state bijection preserving every kernel entry, or None."""
    if A.n != B.n or A.inputs != B.inputs or A.outputs != B.outputs:
        return None
    n = A.n
    if n > cap:
        raise ValueError(f"isomorphism search capped at {cap} states")
    sa = [_signature(A, i) for i in range(n)]
    sb = [_signature(B, j) for j in range(n)]
    if sorted(sa) != sorted(sb):
        return None
    keys = list(A.kernels)
    image = [None] * n
    used = [False] * n

    def fits(i: int, j: int) -> bool:
        for key in keys:
            ma, mb = A.kernels[key], B.kernels[key]
            if ma[i, i] != mb[j, j]:
                return False
            for k in range(i):
                t = image[k]
                if ma[i, k] != mb[j, t] or ma[k, i] != mb[t, j]:
                    return False
        return True

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if not used[j] and sa[i] == sb[j] and fits(i, j):
                image[i], used[j] = j, True
                if extend(i + 1):
                    return True
                used[j] = False
        return False

    return StateMapping(tuple(image)) if extend(0) else None


def th4_check(A: StochasticAutomaton, candidates: Mapping) -> Optional[StochasticAutomaton]:
    """Automaton from ``candidates`` when ``P_A(b|a) H_A == P_cand(b|a) H_A`` for every pair.

    Such a candidate is S-equivalent to ``A``; otherwise None.
    """
    H = build_h(A).matrix
    mats = {}
    for key in A.kernels:
        if key not in candidates:
            raise ValueError(f"missing candidate kernel for {key}")
        m = candidates[key]
        m = m if isinstance(m, RatMatrix) else RatMatrix(m)
        if m.shape != (A.n, A.n):
            raise ValueError(f"candidate for {key} has shape {m.shape}, expected {(A.n, A.n)}")
        if not m.is_nonnegative():
            raise ValueError(f"candidate for {key} has negative entries")
        mats[key] = m
    for key, m in mats.items():
        if A.kernels[key] @ H != m @ H:
            return None
    B = A.with_kernels(mats)
    return B if validate(B).ok else None


# ------------------------------------------------------------ report


def classify(A: StochasticAutomaton) -> ClassificationReport:
    H = build_h(A)
    gamma = is_observable(A)
    delta = is_state_determined(A)
    lam = is_output_determined(A)
    det = is_determined(A)
    mealy = mealy_factorization(A)
    moore = moore_factorization(A)
    witnesses = {}
    for name, w in (
        ("gamma", gamma),
        ("delta", delta),
        ("lambda", lam),
        ("determined", det),
        ("mealy", mealy),
        ("moore", moore),
    ):
        if w is not None:
            witnesses[name] = w
    reduced = is_reduced(A, H)
    return ClassificationReport(
        reduced=reduced,
        minimal=reduced and is_minimal(A, H),
        strongly_reduced=is_strongly_reduced(A, H),
        observable=gamma is not None,
        state_determined=delta is not None,
        output_determined=lam is not None,
        determined=det is not None,
        mealy=mealy is not None,
        moore=moore is not None,
        simplex_dimension=rank(H.matrix) - 1,
        witnesses=witnesses,
    )
