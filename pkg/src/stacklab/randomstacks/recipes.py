"""Parameter recipes for the randomized constructions, and the flexibility
constants for bounded-spacer systems.

Three recipes are provided, named for the sampling regime they target:

* "poly":  A = floor(n^alpha) with alpha >= 1 + 1/beta; the mixing floor
  is N0 = floor(h^beta) + 1 and the cut count q = 2^N0.
* "nlog":  A = floor(n (log n)^alpha) with alpha >= 1/beta; the floor is
  N0 = floor(e^(h^beta + 1)) + 1 and q = 2^N0.
* "flex":  bounded spacers in [0, L-1] at the critical alpha = 1 + 1/beta;
  q = floor(kappa^(h^beta)) + 1 and the word length is
  N = floor(((h-2)/alpha)^beta) - 1.

All integer outputs are exact; failure-probability diagnostics are floats
and come in two variants that differ in the denominator of the Hoeffding
floor (the orbit horizon t_N itself versus the dependence range
m = floor(t_N/h) + 2), reported side by side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..intarith import floor_pow, floor_rational_pow, iroot


class RecipeError(ValueError):
    """Parameters outside a recipe's stated range."""


def _frac(x, name: str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    raise RecipeError(f"{name} must be rational, got {x!r}")


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class RecipeBundle:
    name: str
    floor_length: int | None  # N0
    word_length: int | None  # N (None when the length rule degenerates)
    cuts: int  # q
    dependence_range: int | None  # m
    deviation: float | None  # delta
    horizon_term: int | None  # t_N
    p_fail_horizon_floor: float | None  # floor denominator t_N
    p_fail_range_floor: float | None  # floor denominator m
    notes: tuple[str, ...] = ()


def _p_fail(alphabet: int, N: int, q: int, denom: int, delta: float) -> float | None:
    if denom < 1:
        return None
    exponent = N * math.log(alphabet) - 2.0 * (q // denom) * delta * delta
    if exponent > 700.0:
        return math.inf
    return math.exp(exponent)


def recipe_params(
    name: str,
    *,
    h: int,
    beta,
    alpha=None,
    gamma=Fraction(3, 2),
    eps=Fraction(1, 10),
    kappa=None,
    L: int | None = None,
    A=None,
) -> RecipeBundle:
    """Exact parameter bundle (N0, N, q, m, delta) for one construction step.

    `A` (a sampling sequence) is needed to evaluate t_N for the dependence
    range and failure diagnostics; without it those fields are None.
    """
    beta = _frac(beta, "beta")
    if beta <= 0:
        raise RecipeError("beta must be positive")
    notes: list[str] = []
    if name in ("poly", "nlog"):
        if alpha is None:
            raise RecipeError(f"recipe {name!r} needs alpha")
        alpha = _frac(alpha, "alpha")
        if name == "poly" and alpha < 1 + 1 / beta:
            raise RecipeError(
                f"recipe 'poly' requires alpha >= 1 + 1/beta "
                f"(= {1 + 1 / beta}), got {alpha}"
            )
        if name == "nlog" and alpha < 1 / beta:
            raise RecipeError(
                f"recipe 'nlog' requires alpha >= 1/beta (= {1 / beta}), got {alpha}"
            )
        gamma = _frac(gamma, "gamma")
        if gamma <= 1:
            raise RecipeError("gamma must exceed 1")
        eps = _frac(eps, "eps")
        if name == "poly":
            N0 = floor_pow(h, beta) + 1
        else:
            growth = float(h) ** float(beta) + 1.0
            if growth > 700.0:
                raise RecipeError(
                    f"recipe 'nlog': floor length e^(h^beta + 1) overflows at h={h}"
                )
            N0 = math.floor(math.exp(growth)) + 1
        q = 2**N0
        N = _ceil_frac(gamma * N0)
        notes.append("word length rounds up: N = ceil(gamma * N0)")
        exp_delta = -float((Fraction(1, 2) / gamma - eps) * N)
        delta = 2.0**exp_delta
        alphabet = h + 1
    elif name == "flex":
        if kappa is None:
            raise RecipeError("recipe 'flex' needs kappa")
        if alpha is None:
            alpha = 1 + 1 / beta
        alpha = _frac(alpha, "alpha")
        if alpha != 1 + 1 / beta:
            raise RecipeError(
                f"recipe 'flex' requires alpha = 1 + 1/beta (= {1 + 1 / beta}), "
                f"got {alpha}"
            )
        if L is None or L < 2:
            raise RecipeError("recipe 'flex' needs an integer spacer range L >= 2")
        if h <= L:
            notes.append("initial height at or below L; the construction wants h > L")
        eps = _frac(eps, "eps")
        hb_exact = _exact_power(h, beta)
        if hb_exact is not None and isinstance(kappa, (int, Fraction)):
            kq = Fraction(kappa) ** hb_exact
            q = kq.numerator // kq.denominator + 1
        else:
            q = math.floor(float(kappa) ** (float(h) ** float(beta))) + 1
        if h > 2:
            N = floor_rational_pow(Fraction(h - 2) / alpha, beta) - 1
        else:
            N = 0
        if N < 1:
            N = None
            notes.append("word-length rule gives N < 1 at this height")
        N0 = None
        delta = float(kappa) ** (-(0.5 - float(eps)) * float(h) ** float(beta))
        alphabet = h + L
    else:
        raise RecipeError(f"unknown recipe {name!r}")

    t_N = None
    m = None
    p_horizon = None
    p_range = None
    if (
        A is not None
        and N is not None
        and N >= getattr(A, "n0", 1)
        and N <= getattr(A, "horizon", 0)
    ):
        t_N = A.generate(N)
        m = t_N // h + 2
        p_horizon = _p_fail(alphabet, N, q, t_N, delta) if t_N >= 1 else None
        p_range = _p_fail(alphabet, N, q, m, delta)
    return RecipeBundle(
        name=name,
        floor_length=N0,
        word_length=N,
        cuts=q,
        dependence_range=m,
        deviation=delta,
        horizon_term=t_N,
        p_fail_horizon_floor=p_horizon,
        p_fail_range_floor=p_range,
        notes=tuple(notes),
    )


def _exact_power(h: int, beta: Fraction) -> int | None:
    """h^beta as an exact integer when it is one, else None."""
    p, qd = beta.numerator, beta.denominator
    x = h**p
    r = iroot(x, qd)
    return r if r**qd == x else None


@dataclass(frozen=True)
class FlexibilityBounds:
    lower: float
    upper: float
    c1: float
    c2: float
    c1_log_L: float
    c2_log_L: float


def flexibility_bounds(L: int, beta, kappa) -> FlexibilityBounds:
    """Two-sided bracket for the achievable entropy at the critical exponent.

    lower = alpha^beta * log min(L^(alpha^(-1-beta)), kappa^(1/2)) and
    upper = (1+beta) * ((1/beta^beta) log kappa (log L)^beta)^(1/(1+beta))
    with alpha = 1 + 1/beta.  At kappa = L^(2 alpha^(-1-beta)) these collapse
    to C1 log L and C2 log L with C1 = beta/(1+beta), C2 = (2 beta)^(1/(1+beta)).
    """
    if L < 2:
        raise RecipeError("L must be an integer >= 2")
    beta_f = float(_frac(beta, "beta"))
    kappa_f = float(kappa)
    if beta_f <= 0 or kappa_f <= 1:
        raise RecipeError("need beta > 0 and kappa > 1")
    alpha = 1.0 + 1.0 / beta_f
    log_L = math.log(L)
    scale = alpha ** (-1.0 - beta_f)
    lower = alpha**beta_f * min(scale * log_L, 0.5 * math.log(kappa_f))
    upper = (1.0 + beta_f) * (
        (1.0 / beta_f**beta_f) * math.log(kappa_f) * log_L**beta_f
    ) ** (1.0 / (1.0 + beta_f))
    c1 = beta_f / (1.0 + beta_f)
    c2 = (2.0 * beta_f) ** (1.0 / (1.0 + beta_f))
    return FlexibilityBounds(
        lower=lower,
        upper=upper,
        c1=c1,
        c2=c2,
        c1_log_L=c1 * log_L,
        c2_log_L=c2 * log_L,
    )
