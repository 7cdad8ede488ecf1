"""Seeded simulation of transducer and acceptor runs, used to cross-check exact values.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence([seed,
replica])``.  Each step draws a uniform 63-bit integer ``u`` and picks the
first outcome whose exact threshold ``ceil(cum * 2^63)`` exceeds ``u``, so
the inversion never touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .acceptor import StochasticAcceptor
from .automaton import StochasticAutomaton, _check_word, _weights
from .ratlin import ZERO

SCALE = 1 << 63


@dataclass(frozen=True)
class SimConfig:
    samples: int
    seed: int
    replicas: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if self.replicas < 1 or self.replicas > self.samples:
            raise ValueError("replicas must lie between 1 and the sample count")

    def chunks(self):
        """``(generator, size)`` per replica; sizes sum to ``samples``."""
        base, extra = divmod(self.samples, self.replicas)
        for r in range(self.replicas):
            ss = np.random.SeedSequence([self.seed, r])
            yield np.random.Generator(np.random.PCG64(ss)), base + (r < extra)


@dataclass(frozen=True)
class Estimate:
    hits: int
    samples: int

    @property
    def frequency(self) -> Fraction:
        return Fraction(self.hits, self.samples)

    def within(self, exact, k: int = 4) -> bool:
        """Is the frequency within ``k`` binomial standard deviations of ``exact``?"""
        p = Fraction(exact)
        if p in (0, 1):
            return self.frequency == p
        band = k * math.sqrt(p * (1 - p) / self.samples)
        return abs(float(self.frequency - p)) <= band


def _thresholds(rows: Sequence[Sequence[Fraction]]) -> np.ndarray:
    """Integer cumulative thresholds, one row per source, as uint64."""
    out = []
    for probs in rows:
        cum = ZERO
        t = []
        for q in probs:
            cum += q
            t.append(-((-cum.numerator * SCALE) // cum.denominator))  # ceil
        out.append(t)
    return np.array(out, dtype=np.uint64)


def _draw(rng, table: np.ndarray, current: np.ndarray) -> np.ndarray:
    u = rng.integers(0, SCALE, size=current.shape[0], dtype=np.uint64)
    return (u[:, None] >= table[current]).sum(axis=1)


def _transducer_tables(A: StochasticAutomaton) -> dict:
    """Per input symbol: thresholds over outcomes ``(b, s')``, output major."""
    tables = {}
    for a in A.inputs:
        rows = []
        for i in range(A.n):
            rows.append([A.kernels[(a, b)][i, j] for b in A.outputs for j in range(A.n)])
        tables[a] = _thresholds(rows)
    return tables


def sample_run(A: StochasticAutomaton, s, x, seed: int):
    """One run from state ``s`` on ``x``; returns ``(output word, final state)``."""
    x = _check_word(x, A.inputs, "input")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, 0])))
    tables = _transducer_tables(A)
    cur = np.array([A.state_index(s)])
    y = []
    for a in x:
        k = _draw(rng, tables[a], cur)
        b, j = divmod(int(k[0]), A.n)
        y.append(A.outputs[b])
        cur = np.array([j])
    return tuple(y), A.states[int(cur[0])]


def estimate_prob(A: StochasticAutomaton, pi, x, y, config: SimConfig) -> Estimate:
    """Share of runs from ``pi``-sampled starts that emit ``y`` while reading ``x``."""
    x = _check_word(x, A.inputs, "input")
    y = _check_word(y, A.outputs, "output")
    if len(x) != len(y):
        return Estimate(0, config.samples)
    start = _thresholds([_weights(pi, A.n)])
    tables = _transducer_tables(A)
    want = [A.outputs.index(b) for b in y]
    hits = 0
    for rng, size in config.chunks():
        cur = _draw(rng, start, np.zeros(size, dtype=np.intp))
        alive = np.ones(size, dtype=bool)
        for a, b in zip(x, want):
            k = _draw(rng, tables[a], cur)
            alive &= k // A.n == b
            cur = k % A.n
        hits += int(alive.sum())
    return Estimate(hits, config.samples)


def estimate_accept(A: StochasticAcceptor, x, config: SimConfig) -> Estimate:
    """Share of runs on ``x`` that end in a final state."""
    x = tuple(x)
    for a in x:
        if a not in A.matrices:
            raise KeyError(f"symbol {a!r} not in alphabet {list(A.inputs)}")
    start = _thresholds([A.initial])
    tables = {a: _thresholds(m.entries) for a, m in A.matrices.items()}
    final = np.array([f == 1 for f in A.final])
    hits = 0
    for rng, size in config.chunks():
        cur = _draw(rng, start, np.zeros(size, dtype=np.intp))
        for a in x:
            cur = _draw(rng, tables[a], cur)
        hits += int(final[cur].sum())
    return Estimate(hits, config.samples)
