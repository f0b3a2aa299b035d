"""Combinatorial word-count bounds, tower-selection rules, and the balancing
diagnostics that drive the vanishing-entropy regime.

The word-count bound binom(N+c, N) * (h+1) * (s+1)^c is exact big-integer
arithmetic; the per-n balancing diagnostics are double precision.  "Trends
toward zero" are operationalized over a finite horizon: the diagnostic at
the endpoint must be below its value at 1% of the horizon, and its running
maximum over the last decade of n must sit below its first-decade minimum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .intarith import floor_pow
from .sequences import SamplingSequence, max_gap
from .tower import CodingSpec, ResourceGuard, StackingData, code_orbit, valid_levels


class BoundsError(ValueError):
    """Invalid bound parameters or case pairing."""


def word_count_bound(N: int, c: int, h: int, s: int) -> int:
    """binom(N+c, N) * (h+1) * (s+1)^c, exactly."""
    if min(N, c, h, s) < 0:
        raise BoundsError("all bound arguments must be nonnegative")
    return math.comb(N + c, N) * (h + 1) * (s + 1) ** c


def brute_force_words(
    sd: StackingData,
    r: int,
    n: int,
    A,
    N: int,
    level_cap: int = 10**6,
) -> set[tuple[int, ...]]:
    """Exact distinct coded-word set over the valid levels of tower n."""
    offsets = tuple(A.prefix(N)) if hasattr(A, "prefix") else tuple(A)[:N]
    if len(offsets) != N:
        raise BoundsError(f"need {N} sampling offsets")
    if N == 0:
        return {()}
    levels = valid_levels(sd, n, offsets[-1])
    if levels.count > level_cap:
        raise ResourceGuard(
            f"valid-level set has {levels.count} levels, above the cap {level_cap}"
        )
    spec = CodingSpec(reference=r, mode="base")
    return {code_orbit(sd, spec, n, k, offsets) for k in levels}


# -- tower selection -----------------------------------------------------------


def select_tau(
    heights: Sequence[int],
    A,
    cuts: Callable[[int], int] | int,
    N: int,
    rule: str = "strict",
    lam=None,
) -> int:
    """Minimal stage whose height clears the orbit-length threshold.

    rule "strict": min n with h_n > t_N / c_N; rule "lambda": min n with
    h_n >= t_N / (lam * N).  Comparisons are exact rationals.
    """
    t_N = A.generate(N) if hasattr(A, "generate") else tuple(A)[N - 1]
    if rule == "strict":
        c_N = cuts(N) if callable(cuts) else int(cuts)
        if c_N < 1:
            raise BoundsError("cut schedule must be >= 1")
        threshold = Fraction(t_N, c_N)
        ok = lambda h: h > threshold
    elif rule == "lambda":
        if lam is None:
            raise BoundsError("lambda rule needs lam")
        lam = Fraction(lam) if not isinstance(lam, Fraction) else lam
        if lam <= 0:
            raise BoundsError("lam must be positive")
        threshold = Fraction(t_N) / (lam * N)
        ok = lambda h: h >= threshold
    else:
        raise BoundsError(f"unknown tau rule {rule!r}")
    for idx, h in enumerate(heights, start=1):
        if ok(h):
            return idx
    raise BoundsError(
        f"no stage qualifies: tallest height {heights[-1]} vs threshold {threshold}"
    )


# -- cut schedules and growth gauges -------------------------------------------


def constant_cuts(value: int = 1) -> Callable[[int], int]:
    if value < 1:
        raise BoundsError("constant cut schedule must be >= 1")
    return lambda n: value


def power_cuts(alpha, beta) -> Callable[[int], int]:
    """c_n = floor(n^((alpha - 1/beta + 1)/2)), exact, clamped at 1."""
    alpha = Fraction(alpha)
    beta = Fraction(beta)
    exponent = (alpha - 1 / beta + 1) / 2
    if exponent < 0:
        raise BoundsError("cut exponent is negative for these (alpha, beta)")
    return lambda n: max(1, floor_pow(n, exponent))


def loglog_cuts() -> Callable[[int], int]:
    """c_n = floor(n / (log log n)^2), clamped at 1."""

    def c(n: int) -> int:
        if n < 2:
            return 1
        ll = math.log(math.log(n))
        return max(1, math.floor(n / (ll * ll)))

    return c


@dataclass(frozen=True)
class GrowthGauge:
    """The height-growth gauge phi: log x, x^beta, or e^(x^beta)."""

    kind: str
    beta: float | None = None

    def __call__(self, x: float) -> float:
        if x <= 0:
            raise BoundsError("gauge argument must be positive")
        if self.kind == "log":
            return math.log(x)
        if self.kind == "power":
            return x**self.beta
        try:
            return math.exp(x**self.beta)
        except OverflowError:
            return math.inf


def phi_log() -> GrowthGauge:
    return GrowthGauge(kind="log")


def phi_power(beta) -> GrowthGauge:
    b = float(beta)
    if b <= 0:
        raise BoundsError("power gauge needs beta > 0")
    return GrowthGauge(kind="power", beta=b)


def phi_exp_power(beta) -> GrowthGauge:
    b = float(beta)
    if b <= 0:
        raise BoundsError("exp-power gauge needs beta > 0")
    return GrowthGauge(kind="exp_power", beta=b)


# -- balancing profile -----------------------------------------------------------


@dataclass(frozen=True)
class BalancingRow:
    n: int
    c_n: int
    max_gap: int
    diag_balance: float  # (c_n/n) log s_n
    diag_phi: float  # (1/n) phi(t_n / c_n)
    diag_binom: float  # (1/n) log binom(n + c_n, n)


@dataclass(frozen=True)
class BalancingProfile:
    rows: tuple[BalancingRow, ...]

    def series(self, field: str) -> list[float]:
        return [getattr(r, field) for r in self.rows]

    def ns(self) -> list[int]:
        return [r.n for r in self.rows]


def _log_binom(a: int, b: int) -> float:
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def balancing_profile(
    A: SamplingSequence,
    phi: GrowthGauge,
    cuts: Callable[[int], int],
    horizon: int,
) -> BalancingProfile:
    """Per-n balancing diagnostics over [n0+1, horizon].

    Exponential-looking sequences are rejected (the slice-count balancing
    condition cannot hold for them regardless of the cut schedule): the
    heuristic trips when the maximal gap reaches half the final term.
    """
    if horizon < A.n0 + 1:
        raise BoundsError("horizon leaves no gaps to diagnose")
    t_H = A.generate(horizon)
    s_H = max_gap(A, horizon)
    if t_H >= 2 and s_H * 2 >= t_H:
        raise BoundsError(
            "sequence gaps grow like the terms themselves (exponential regime); "
            "the slice-count balancing condition cannot hold for any cut schedule"
        )
    rows = []
    s_n = 0
    prev = A.generate(A.n0)
    for n in range(A.n0 + 1, horizon + 1):
        t_n = A.generate(n)
        s_n = max(s_n, t_n - prev)
        prev = t_n
        c_n = cuts(n)
        diag_balance = (c_n / n) * math.log(s_n) if s_n > 0 else 0.0
        diag_phi = phi(t_n / c_n) / n if t_n > 0 else 0.0
        diag_binom = _log_binom(n + c_n, n) / n
        rows.append(
            BalancingRow(
                n=n,
                c_n=c_n,
                max_gap=s_n,
                diag_balance=diag_balance,
                diag_phi=diag_phi,
                diag_binom=diag_binom,
            )
        )
    return BalancingProfile(rows=tuple(rows))


def trend_toward_zero(ns: Sequence[int], values: Sequence[float]) -> bool:
    """Finite-horizon stand-in for "tends to zero".

    True when the endpoint value is below the value at 1% of the horizon
    and the running maximum over the last decade of n is below the minimum
    over the first decade.
    """
    if len(ns) != len(values) or len(ns) < 2:
        raise BoundsError("need matched, nontrivial series")
    horizon = ns[-1]
    early_n = max(ns[0], horizon // 100)
    early_value = next(v for n, v in zip(ns, values) if n >= early_n)
    first_decade = [v for n, v in zip(ns, values) if n < ns[0] * 10]
    last_decade = [v for n, v in zip(ns, values) if n > horizon // 10]
    if not first_decade or not last_decade:
        raise BoundsError("horizon too short for decade comparison")
    return values[-1] < early_value and max(last_decade) < min(first_decade)


# -- the critical-threshold tradeoff --------------------------------------------


def tradeoff_upper_value(kappa, beta, L: int) -> tuple[float, float]:
    """Minimize lam^-beta log kappa + lam log L over lam > 0.

    The closed-form minimizer lam* = (beta log kappa / log L)^(1/(1+beta))
    balances the two terms at ratio beta; the minimum equals
    (1+beta) * ((1/beta^beta) log kappa (log L)^beta)^(1/(1+beta)).
    """
    kappa = float(kappa)
    beta = float(beta)
    if kappa <= 1 or beta <= 0 or L < 2:
        raise BoundsError("need kappa > 1, beta > 0, L >= 2")
    log_L = math.log(L)
    lam = (beta * math.log(kappa) / log_L) ** (1.0 / (1.0 + beta))
    value = lam**-beta * math.log(kappa) + lam * log_L
    return lam, value


def bounded_spacer_word_bound(h_tau: int, L: int, lam: float, N: int) -> float:
    """(h_tau + 1) * L^(lam*N + 1): word count cap when spacers are in [0, L-1]."""
    if h_tau < 1 or L < 2 or lam <= 0 or N < 1:
        raise BoundsError("invalid bounded-spacer bound arguments")
    return (h_tau + 1) * L ** (lam * N + 1)
