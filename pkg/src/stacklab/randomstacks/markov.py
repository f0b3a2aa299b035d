"""The block-repeat Markov chain and its conditional symbol limits.

Random binary spacers between repeats of a fixed block w of length H
drive the linear recursion p_s = (p_{s-H} + p_{s-H-1})/2 for conditional
symbol probabilities, whose companion matrix is an irreducible aperiodic
(H+1)-state chain.  Three independent routes to the limiting conditional
probabilities are provided: the chain route (stationary vector times an
exactly enumerated initial window), a renewal-density closed form, and
seeded Monte Carlo on the symbol stream itself.

Note on constants: the stationary vector of the companion chain is
(2/(2H+1), ..., 2/(2H+1), 1/(2H+1)).  A commonly quoted variant with
denominator 2H-1 does not normalize; this module always computes the
vector rather than pinning printed constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

import numpy as np

from ..parallel import run_blocks
from ..rng import BULK_RNG_ID, bulk_generator


class MarkovError(ValueError):
    """Invalid chain parameters or non-convergence."""


@dataclass(frozen=True)
class MarkovModel:
    """(H+1)x(H+1) row-stochastic companion matrix, exact entries."""

    period: int
    rows: tuple[tuple[Fraction, ...], ...]

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows], dtype=float)

    def validate(self) -> None:
        size = self.period + 1
        if len(self.rows) != size or any(len(r) != size for r in self.rows):
            raise MarkovError("matrix shape disagrees with the period")
        for i, row in enumerate(self.rows):
            if sum(row) != 1:
                raise MarkovError(f"row {i + 1} does not sum to 1")
            if any(x < 0 for x in row):
                raise MarkovError(f"row {i + 1} has a negative entry")


def build_markov_matrix(H: int) -> MarkovModel:
    """Companion chain of p_s = (p_{s-H} + p_{s-H-1})/2.

    First row has 1/2 in columns H and H+1; row i (i >= 2) has 1 in
    column i-1.
    """
    if H < 2:
        raise MarkovError("period H must be >= 2")
    size = H + 1
    half = Fraction(1, 2)
    rows = []
    first = [Fraction(0)] * size
    first[H - 1] = half
    first[H] = half
    rows.append(tuple(first))
    for i in range(1, size):
        row = [Fraction(0)] * size
        row[i - 1] = Fraction(1)
        rows.append(tuple(row))
    return MarkovModel(period=H, rows=tuple(rows))


def stationary_distribution(
    model: MarkovModel,
    residual_tol: float = 1e-14,
    agree_tol: float = 1e-10,
    max_squarings: int = 200,
) -> np.ndarray:
    """Unique stationary probability vector, in floats.

    Power iteration (accelerated by repeated matrix squaring) down to the
    residual tolerance, cross-checked against a direct linear solve; the
    two must agree to `agree_tol`.
    """
    model.validate()
    A = model.as_array()
    size = A.shape[0]
    B = A.copy()
    for _ in range(max_squarings):
        B = B @ B
        B /= B.sum(axis=1, keepdims=True)
        spread = np.max(B.max(axis=0) - B.min(axis=0))
        if spread < 1e-16:
            break
    pi = B.mean(axis=0)
    pi /= pi.sum()
    residual = np.max(np.abs(pi @ A - pi))
    if residual > residual_tol:
        raise MarkovError(
            f"power iteration stalled at residual {residual:.3e} "
            f"(> {residual_tol:.0e}) after {max_squarings} squarings"
        )
    # Direct solve of pi (A - I) = 0 with the normalization constraint.
    M = A.T - np.eye(size)
    M[-1, :] = 1.0
    rhs = np.zeros(size)
    rhs[-1] = 1.0
    solved = np.linalg.solve(M, rhs)
    if np.max(np.abs(solved - pi)) > agree_tol:
        raise MarkovError("power iteration and linear solve disagree")
    return pi


def stationary_distribution_exact(model: MarkovModel) -> tuple[Fraction, ...]:
    """Stationary vector by Gaussian elimination over the rationals."""
    model.validate()
    size = model.period + 1
    # Rows of (A^T - I) with the last equation replaced by normalization.
    M = [
        [model.rows[j][i] - (1 if i == j else 0) for j in range(size)]
        for i in range(size)
    ]
    M[-1] = [Fraction(1)] * size
    rhs = [Fraction(0)] * (size - 1) + [Fraction(1)]
    for col in range(size):
        pivot = next(
            (r for r in range(col, size) if M[r][col] != 0), None
        )
        if pivot is None:
            raise MarkovError("singular stationary system")
        M[col], M[pivot] = M[pivot], M[col]
        rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        rhs[col] = rhs[col] * inv
        for r in range(size):
            if r != col and M[r][col] != 0:
                factor = M[r][col]
                M[r] = [a - factor * b for a, b in zip(M[r], M[col])]
                rhs[r] = rhs[r] - factor * rhs[col]
    return tuple(rhs)


# -- the repeated-block symbol stream -----------------------------------------


def pattern_word(h: int, pattern: Sequence[int]) -> tuple[int, ...]:
    """w = v 0^{b_1} v ... 0^{b_{g-1}} v with v = (1, ..., h)."""
    if h < 2:
        raise MarkovError("block height h must be >= 2")
    if any(b not in (0, 1) for b in pattern):
        raise MarkovError("internal spacer pattern must be binary")
    v = tuple(range(1, h + 1))
    word: list[int] = list(v)
    for b in pattern:
        word.extend([0] * b)
        word.extend(v)
    return tuple(word)


def _symbol_at(word: tuple[int, ...], bits: Sequence[int], position: int) -> int:
    """Symbol of  w 0^{a_1} w 0^{a_2} ...  at a 1-based position."""
    H = len(word)
    end = 0
    for j, a in enumerate(bits, start=1):
        prev = end
        end = j * H + sum(bits[:j])
        if position <= end:
            off = position - prev
            return word[off - 1] if off <= H else 0
    raise MarkovError("position not covered by the generated prefix")


def _window_bits_needed(H: int, position: int) -> int:
    return position // H + 2


def _check_period(word: tuple[int, ...], period: int | None) -> None:
    if period is not None and period != len(word):
        raise MarkovError(
            f"declared period {period} disagrees with the pattern "
            f"(g*h + b = {len(word)})"
        )


def conditional_limit_chain(
    h: int,
    pattern: Sequence[int],
    l0: int,
    l1: int,
    position: int | None = None,
    period: int | None = None,
) -> Fraction:
    """Exact s -> infinity limit of P(symbol at n+s = l1 | symbol at n = l0).

    The initial window p_0..p_H is enumerated exactly over the few spacer
    bits it involves, then contracted with the stationary vector of the
    companion chain.
    """
    word = pattern_word(h, pattern)
    _check_period(word, period)
    H = len(word)
    if position is None:
        position = _default_position(word, l0)
    m = _window_bits_needed(H, position + H)
    weight_l0 = 0
    window = [0] * (H + 1)
    for bits in product((0, 1), repeat=m):
        if _symbol_at(word, bits, position) != l0:
            continue
        weight_l0 += 1
        for i in range(H + 1):
            if _symbol_at(word, bits, position + i) == l1:
                window[i] += 1
    if weight_l0 == 0:
        raise MarkovError(f"conditioning symbol {l0} has zero probability at {position}")
    p = [Fraction(c, weight_l0) for c in window]
    c = Fraction(1, 2 * H + 1)
    return 2 * c * sum(p[1:], Fraction(0)) + c * p[0]


def _default_position(word: tuple[int, ...], l0: int) -> int:
    H = len(word)
    for position in range(H + 1, 4 * H + 2):
        m = _window_bits_needed(H, position)
        if any(
            _symbol_at(word, bits, position) == l0
            for bits in product((0, 1), repeat=m)
        ):
            return position
    raise MarkovError(f"symbol {l0} never occurs near the stream start")


def symbol_density_limit(h: int, pattern: Sequence[int], l1: int) -> Fraction:
    """Renewal closed form for the limiting symbol density.

    Each segment (one copy of w plus its random trailing spacer) has
    expected length H + 1/2 and contains g copies of every in-alphabet
    symbol and b + 1/2 expected spacers, so the limits are 2g/(2H+1) and
    (2b+1)/(2H+1).  Independent of the chain route; used to cross-check it.
    """
    word = pattern_word(h, pattern)
    H = len(word)
    g = len(pattern) + 1
    b = sum(pattern)
    if l1 == 0:
        return Fraction(2 * b + 1, 2 * H + 1)
    if 1 <= l1 <= h:
        return Fraction(2 * g, 2 * H + 1)
    raise MarkovError(f"symbol {l1} outside the alphabet")


def chain_limit_report(
    h: int, pattern: Sequence[int], l0: int, position: int | None = None
) -> dict[int, Fraction]:
    """Chain-route limits for every target symbol, keyed by symbol."""
    return {
        l1: conditional_limit_chain(h, pattern, l0, l1, position)
        for l1 in range(0, h + 1)
    }


# -- Monte Carlo on the symbol stream -----------------------------------------

_MC_BLOCK = 1 << 15


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    std_error: float
    conditioning_hits: int
    samples: int
    position: int
    separation: int
    rng: str = BULK_RNG_ID


def _mc_block(args) -> tuple[int, tuple[int, ...]]:
    """One sampling block: conditioning hits and joint hits for every target symbol."""
    h, pattern, l0, position, separation, seed, block, count = args
    word = np.array(pattern_word(h, tuple(pattern)), dtype=np.int64)
    H = len(word)
    far = position + separation
    m = _window_bits_needed(H, far)
    rng = bulk_generator(seed, block)
    bits = rng.integers(0, 2, size=(count, m), dtype=np.int64)
    ends = (np.arange(1, m + 1, dtype=np.int64) * H)[None, :] + np.cumsum(bits, axis=1)

    def symbols(p: int) -> np.ndarray:
        seg = np.sum(ends < p, axis=1)
        prev = np.where(
            seg == 0,
            0,
            np.take_along_axis(ends, np.maximum(seg - 1, 0)[:, None], axis=1)[:, 0],
        )
        off = p - prev
        return np.where(off <= H, word[np.minimum(off, H) - 1], 0)

    hit0 = symbols(position) == l0
    far_syms = symbols(far)[hit0]
    joint = np.bincount(far_syms, minlength=h + 1)
    return int(hit0.sum()), tuple(int(x) for x in joint[: h + 1])


def conditional_limits_mc(
    h: int,
    pattern: Sequence[int],
    l0: int,
    separation: int,
    samples: int,
    seed: int,
    position: int | None = None,
    workers: int = 1,
    period: int | None = None,
) -> dict[int, McEstimate]:
    """Monte Carlo estimates of P(symbol at n+s = l1 | symbol at n = l0)
    for every target symbol l1, from a single pass over the stream.

    The separation s must be large enough that the estimates approximate
    the limits; sampling is blocked so the result is identical for any
    worker count.
    """
    word = pattern_word(h, pattern)
    _check_period(word, period)
    if position is None:
        position = _default_position(word, l0)
    blocks = []
    remaining = samples
    index = 0
    while remaining > 0:
        count = min(_MC_BLOCK, remaining)
        blocks.append((h, tuple(pattern), l0, position, separation, seed, index, count))
        remaining -= count
        index += 1
    results = run_blocks(_mc_block, blocks, workers=workers)
    hits0 = sum(r[0] for r in results)
    if hits0 == 0:
        raise MarkovError("zero conditioning events in the Monte Carlo run")
    out = {}
    for l1 in range(h + 1):
        joint = sum(r[1][l1] for r in results)
        p = joint / hits0
        se = math.sqrt(max(p * (1 - p), 1e-12) / hits0)
        out[l1] = McEstimate(
            estimate=p,
            std_error=se,
            conditioning_hits=hits0,
            samples=samples,
            position=position,
            separation=separation,
        )
    return out


def conditional_limit_mc(
    h: int,
    pattern: Sequence[int],
    l0: int,
    l1: int,
    separation: int,
    samples: int,
    seed: int,
    position: int | None = None,
    workers: int = 1,
) -> McEstimate:
    """Single-target variant of conditional_limits_mc."""
    return conditional_limits_mc(
        h, pattern, l0, separation, samples, seed, position, workers
    )[l1]
