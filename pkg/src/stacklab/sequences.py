"""Orbit-sampling sequences: generation, gaps, dilation and density diagnostics.

A sampling sequence A = {t_n} is strictly increasing and nonnegative on its
declared index range.  Power sequences floor(n^alpha) with rational alpha
are evaluated with exact integer root arithmetic (bit-exact across
platforms); floor(C*n*(log n)^alpha) uses double precision, which is the
best available since log n is transcendental.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .intarith import floor_pow


class SequenceError(ValueError):
    """Invalid sampling-sequence definition or index."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise SequenceError(f"expected an exact rational, got {x!r}")


@dataclass(frozen=True)
class SamplingSequence:
    """A concrete sampling sequence on the index range [n0, horizon].

    kind: "power" (floor(n^alpha), alpha rational), "nlog"
    (floor(C*n*(log n)^alpha)), "linear" (a*n + b) or "explicit".
    For the nlog kind the constructor raises n0 to the first index from
    which the sequence increases strictly through the horizon; the bump is
    recorded in `requested_n0`.
    """

    kind: str
    horizon: int
    n0: int = 1
    alpha: Fraction | float | None = None
    coeff: float | None = None
    a: int | None = None
    b: int | None = None
    values: tuple[int, ...] | None = None
    requested_n0: int = field(default=0, compare=False)
    _terms: tuple[int, ...] = field(default=(), repr=False, compare=False)

    # -- constructors -------------------------------------------------------

    @classmethod
    def power(cls, alpha, horizon: int, n0: int = 1) -> "SamplingSequence":
        alpha = _as_fraction(alpha)
        if alpha <= 0:
            raise SequenceError("power sequence needs alpha > 0")
        return cls(kind="power", horizon=horizon, n0=n0, alpha=alpha)

    @classmethod
    def nlog(cls, coeff: float, alpha: float, horizon: int, n0: int = 1) -> "SamplingSequence":
        if coeff <= 0 or alpha <= 0:
            raise SequenceError("nlog sequence needs C > 0 and alpha > 0")
        return cls(kind="nlog", horizon=horizon, n0=n0, coeff=float(coeff), alpha=float(alpha))

    @classmethod
    def linear(cls, a: int, b: int = 0, horizon: int = 1 << 16, n0: int = 1) -> "SamplingSequence":
        if not isinstance(a, int) or not isinstance(b, int):
            raise SequenceError("linear sequence needs integer coefficients")
        if a < 1:
            raise SequenceError("linear sequence needs slope a >= 1")
        return cls(kind="linear", horizon=horizon, n0=n0, a=a, b=b)

    @classmethod
    def explicit(cls, values: Iterable[int], n0: int = 1) -> "SamplingSequence":
        vals = tuple(int(v) for v in values)
        if not vals:
            raise SequenceError("explicit sequence must be nonempty")
        return cls(
            kind="explicit", horizon=n0 + len(vals) - 1, n0=n0, values=vals
        )

    def __post_init__(self) -> None:
        if self.kind not in ("power", "nlog", "linear", "explicit"):
            raise SequenceError(f"unknown sequence kind {self.kind!r}")
        if self.horizon < self.n0:
            raise SequenceError("horizon must be >= n0")
        terms = tuple(self._raw_term(i) for i in range(self.n0, self.horizon + 1))
        n0 = self.n0
        if self.kind == "nlog":
            # Skip the small-index degeneracy: keep the requested n0 on
            # record and start where strict increase holds to the horizon.
            last_bad = -1
            for j in range(1, len(terms)):
                if terms[j] <= terms[j - 1]:
                    last_bad = j
            if last_bad >= 0:
                object.__setattr__(self, "requested_n0", n0)
                n0 = n0 + last_bad
                terms = terms[last_bad:]
                object.__setattr__(self, "n0", n0)
        if terms[0] < 0:
            raise SequenceError(f"sequence is negative at index {n0}")
        for j in range(1, len(terms)):
            if terms[j] <= terms[j - 1]:
                raise SequenceError(
                    f"sequence not strictly increasing at index {n0 + j}"
                )
        object.__setattr__(self, "_terms", terms)

    def _raw_term(self, i: int) -> int:
        if self.kind == "power":
            return floor_pow(i, self.alpha)
        if self.kind == "nlog":
            if i == 1:
                return 0
            return math.floor(self.coeff * i * math.log(i) ** self.alpha)
        if self.kind == "linear":
            return self.a * i + self.b
        return self.values[i - self.n0]

    # -- queries ------------------------------------------------------------

    def generate(self, i: int) -> int:
        """t_i, for n0 <= i <= horizon."""
        if not self.n0 <= i <= self.horizon:
            raise SequenceError(
                f"index {i} outside range [{self.n0}, {self.horizon}]"
            )
        return self._terms[i - self.n0]

    def prefix(self, length: int) -> tuple[int, ...]:
        """The first `length` terms, starting at n0."""
        if length < 0 or length > len(self._terms):
            raise SequenceError(f"prefix length {length} unavailable")
        return self._terms[:length]

    def describe(self) -> dict:
        out = {"kind": self.kind, "n0": self.n0, "horizon": self.horizon}
        if self.kind == "power":
            out["alpha"] = str(self.alpha)
        elif self.kind == "nlog":
            out["C"] = self.coeff
            out["alpha"] = self.alpha
            if self.requested_n0:
                out["requested_n0"] = self.requested_n0
        elif self.kind == "linear":
            out["a"], out["b"] = self.a, self.b
        else:
            out["length"] = len(self.values)
        return out


def max_gap(seq: SamplingSequence, n: int) -> int:
    """s_n, the maximal difference t_{i+1} - t_i over n0 <= i <= n-1."""
    if n < seq.n0 + 1:
        raise SequenceError("max_gap needs at least two terms")
    terms = seq.prefix(n - seq.n0 + 1)
    return max(terms[j + 1] - terms[j] for j in range(len(terms) - 1))


@dataclass(frozen=True)
class DilationReport:
    """Tail-gap diagnostics over a finite horizon.

    `tail_minima[j]` is the smallest gap from position j onward; the
    verdict is a finite-horizon heuristic: gaps strictly increase over the
    final half of the range and the closing tail minimum beats the opening
    one.  It is a trend statement about the inspected range, nothing more.
    """

    gaps: tuple[int, ...]
    tail_minima: tuple[int, ...]
    dilating: bool


def dilation_diagnostic(seq: SamplingSequence, horizon: int | None = None) -> DilationReport:
    horizon = seq.horizon if horizon is None else horizon
    if horizon < seq.n0 + 1:
        raise SequenceError("dilation diagnostic needs at least two terms")
    terms = seq.prefix(horizon - seq.n0 + 1)
    gaps = tuple(terms[j + 1] - terms[j] for j in range(len(terms) - 1))
    tail = [0] * len(gaps)
    running = gaps[-1]
    for j in range(len(gaps) - 1, -1, -1):
        running = min(running, gaps[j])
        tail[j] = running
    half = len(gaps) // 2
    strictly_rising = all(
        gaps[j] < gaps[j + 1] for j in range(half, len(gaps) - 1)
    )
    verdict = strictly_rising and tail[-1] > tail[0]
    return DilationReport(gaps=gaps, tail_minima=tuple(tail), dilating=verdict)


def krug_K_estimate(seq: SamplingSequence, r: int, n: int) -> Fraction:
    """Finite (r, n) evaluation of the thickened-sequence density:
    (1/n)*#{ t_i + j : i <= n, -r <= j <= r }, counted exactly.
    """
    if r < 0:
        raise SequenceError("r must be nonnegative")
    if n < seq.n0:
        raise SequenceError("n precedes the sequence start")
    points: set[int] = set()
    for i in range(seq.n0, n + 1):
        t = seq.generate(i)
        points.update(range(t - r, t + r + 1))
    return Fraction(len(points), n - seq.n0 + 1)


def lower_density_estimate(J: Iterable[int], n: int) -> Fraction:
    """|J intersect [1, n]| / n."""
    if n < 1:
        raise SequenceError("n must be positive")
    hits = len({j for j in J if 1 <= j <= n})
    return Fraction(hits, n)
