"""Cut-and-stack towers with implicit symbolic decoding.

A tower of height h_n is cut into q_n slices which are restacked with
spacer levels in between, producing a tower of height
h_{n+1} = q_n*h_n + a_n.  The word encoding tower n over the alphabet of
a reference tower r <= n is exponentially long, so it is never
materialized: a level's symbol is resolved by arithmetic descent through
per-stage prefix-sum tables, one binary search per stage.

Levels and heights are arbitrary-precision integers throughout.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .rng import SpacerProcess

# Seeded stages regenerate their spacers on demand; expanding more than
# this many is treated as a resource guard, not an error in the data.
SEEDED_STAGE_GUARD = 1 << 22


class TowerError(ValueError):
    """Malformed stacking data or an out-of-range level query."""


class ResourceGuard(RuntimeError):
    """A configured memory/size guard tripped before any allocation."""


class OrbitEscape(Exception):
    """An orbit sample left the tower.

    Carries the 1-based index of the first offending sample.
    """

    def __init__(self, index: int, level: int, height: int):
        self.index = index
        self.level = level
        self.height = height
        super().__init__(
            f"orbit escapes tower at sample {index}: level {level} >= height {height}"
        )


@dataclass(frozen=True)
class Stage:
    """One cut-and-stack step: q slices separated by q-1 spacer blocks.

    Spacer counts are given explicitly or regenerated from a seed (uniform
    over [0, spacer_cap - 1]); exactly one of the two forms must be used.
    """

    q: int
    spacers: tuple[int, ...] | None = None
    seed: int | None = None
    distribution: str | None = None

    def __post_init__(self) -> None:
        if self.spacers is not None and not isinstance(self.spacers, tuple):
            object.__setattr__(self, "spacers", tuple(self.spacers))

    @property
    def is_seeded(self) -> bool:
        return self.seed is not None


@dataclass(frozen=True)
class StackingData:
    """The full defining data of a finite-stage cut-and-stack construction.

    `stages[m-1]` holds the cut count q_m and spacer counts a_{m,1..q_m-1}
    used to build tower m+1 from tower m; spacer counts lie in
    [0, spacer_cap - 1] (spacer_cap=None means unbounded).
    """

    initial_height: int
    stages: tuple[Stage, ...]
    spacer_cap: int | None = None
    _cache: dict = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if not isinstance(self.stages, tuple):
            object.__setattr__(self, "stages", tuple(self.stages))
        if not isinstance(self.initial_height, int) or self.initial_height < 1:
            raise TowerError("initial_height must be a positive integer")
        if self.spacer_cap is not None and (
            not isinstance(self.spacer_cap, int) or self.spacer_cap < 1
        ):
            raise TowerError("spacer_cap must be a positive integer or None")
        for m, stage in enumerate(self.stages, start=1):
            self._validate_stage(m, stage)

    def _validate_stage(self, m: int, stage: Stage) -> None:
        if not isinstance(stage.q, int) or stage.q < 2:
            raise TowerError(f"stage {m}: cut count q must be an integer >= 2, got {stage.q}")
        explicit = stage.spacers is not None
        seeded = stage.seed is not None
        if explicit == seeded:
            raise TowerError(
                f"stage {m}: exactly one of spacers/seed must be given"
            )
        if explicit:
            if len(stage.spacers) != stage.q - 1:
                raise TowerError(
                    f"stage {m}: expected {stage.q - 1} spacer counts, "
                    f"got {len(stage.spacers)}"
                )
            for i, a in enumerate(stage.spacers, start=1):
                if not isinstance(a, int) or a < 0:
                    raise TowerError(
                        f"stage {m}: spacer {i} must be a nonnegative integer, got {a!r}"
                    )
                if self.spacer_cap is not None and a > self.spacer_cap - 1:
                    raise TowerError(
                        f"stage {m}: spacer {i} = {a} exceeds cap "
                        f"{self.spacer_cap - 1}"
                    )
        else:
            if self.spacer_cap is None:
                raise TowerError(
                    f"stage {m}: seeded spacers require a finite spacer_cap"
                )
            if stage.distribution != "uniform":
                raise TowerError(
                    f"stage {m}: unknown spacer distribution "
                    f"{stage.distribution!r} (only 'uniform')"
                )

    # -- derived tables ----------------------------------------------------

    @property
    def num_towers(self) -> int:
        return len(self.stages) + 1

    def stage_spacers(self, m: int) -> tuple[int, ...]:
        """Spacer counts a_{m,1..q_m-1} of stage m (1-based), materialized."""
        key = ("spc", m)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        stage = self.stages[m - 1]
        if stage.spacers is not None:
            out = stage.spacers
        else:
            if stage.q - 1 > SEEDED_STAGE_GUARD:
                raise ResourceGuard(
                    f"stage {m}: seeded stage with q={stage.q} exceeds the "
                    f"expansion guard ({SEEDED_STAGE_GUARD})"
                )
            proc = SpacerProcess(self.spacer_cap, stage.seed)
            out = proc.chunk(0, stage.q - 1)
        self._cache[key] = out
        return out

    def heights(self) -> tuple[int, ...]:
        """Heights h_1..h_M, via h_{m+1} = q_m*h_m + sum of stage-m spacers."""
        cached = self._cache.get("hts")
        if cached is not None:
            return cached
        hs = [self.initial_height]
        for m, stage in enumerate(self.stages, start=1):
            hs.append(stage.q * hs[-1] + sum(self.stage_spacers(m)))
        out = tuple(hs)
        self._cache["hts"] = out
        return out

    def height(self, n: int) -> int:
        if not 1 <= n <= self.num_towers:
            raise TowerError(f"tower index {n} out of range 1..{self.num_towers}")
        return self.heights()[n - 1]

    def spacer_total(self, m: int) -> int:
        """a_m, the number of spacer levels added by stage m."""
        return sum(self.stage_spacers(m))

    def slice_starts(self, m: int) -> list[int]:
        """P_i = i*h_m + (a_{m,1}+...+a_{m,i}) for i = 0..q_m-1.

        P_i is the start of slice i+1 inside tower m+1; spacer block i+1
        occupies [P_i + h_m, P_{i+1}).
        """
        key = ("pfx", m)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        h = self.heights()[m - 1]
        starts = [0]
        acc = 0
        for a in self.stage_spacers(m)[: self.stages[m - 1].q - 1]:
            acc += h + a
            starts.append(acc)
        self._cache[key] = starts
        return starts

    def extended(self, stage: Stage) -> "StackingData":
        """A new construction with one more stage appended."""
        return StackingData(self.initial_height, self.stages + (stage,), self.spacer_cap)

    # -- serialization (exact field names of the document schema) ----------

    def to_dict(self) -> dict:
        doc: dict = {"initial_height": self.initial_height}
        if self.spacer_cap is not None:
            doc["spacer_cap"] = self.spacer_cap
        doc["stages"] = []
        for stage in self.stages:
            if stage.spacers is not None:
                doc["stages"].append({"q": stage.q, "spacers": list(stage.spacers)})
            else:
                doc["stages"].append(
                    {"q": stage.q, "seed": stage.seed, "distribution": stage.distribution}
                )
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "StackingData":
        try:
            h1 = doc["initial_height"]
        except KeyError:
            raise TowerError("stacking document missing 'initial_height'") from None
        stages = []
        for idx, item in enumerate(doc.get("stages", []), start=1):
            if "q" not in item:
                raise TowerError(f"stage {idx}: missing 'q'")
            if "spacers" in item:
                stages.append(Stage(q=item["q"], spacers=tuple(item["spacers"])))
            elif "seed" in item:
                stages.append(
                    Stage(
                        q=item["q"],
                        seed=item["seed"],
                        distribution=item.get("distribution", "uniform"),
                    )
                )
            else:
                raise TowerError(f"stage {idx}: needs 'spacers' or 'seed'")
        return cls(h1, tuple(stages), doc.get("spacer_cap"))


@dataclass(frozen=True)
class CodingSpec:
    """Reference partition for symbol decoding.

    base mode: levels inside a copy of tower `reference` code to their
    offset + 1; every spacer level codes to 0.  refined mode: the spacer
    at position j of a block codes to h_r + j + 1 instead, giving the
    alphabet {0, ..., h_r + spacer_cap - 1} (0 is reserved for points
    outside the tower and never produced by in-tower decoding).
    """

    reference: int
    mode: str = "base"

    def __post_init__(self) -> None:
        if self.mode not in ("base", "refined"):
            raise TowerError(f"unknown coding mode {self.mode!r}")
        if self.reference < 1:
            raise TowerError("reference stage must be >= 1")

    def alphabet_size(self, sd: StackingData) -> int:
        h_r = sd.height(self.reference)
        if self.mode == "base":
            return h_r + 1
        if sd.spacer_cap is None:
            raise TowerError("refined mode requires a finite spacer_cap")
        return h_r + sd.spacer_cap


@dataclass(frozen=True)
class LocatorStep:
    """One descent step: tower (stage+1) decomposed into copies of tower stage."""

    stage: int
    kind: str  # "slice" | "spacer"
    index: int  # 1-based slice or spacer-block index
    offset: int  # slice: level inside the inner tower; spacer: position in block


@dataclass(frozen=True)
class LevelLocator:
    """Full resolution of a level of tower n down to tower 1 or a spacer block."""

    n: int
    level: int
    chain: tuple[LocatorStep, ...]

    @property
    def is_spacer(self) -> bool:
        return bool(self.chain) and self.chain[-1].kind == "spacer"

    @property
    def terminal_stage(self) -> int:
        """Tower index where the descent stopped."""
        if not self.chain:
            return self.n
        last = self.chain[-1]
        return last.stage + 1 if last.kind == "spacer" else last.stage

    @property
    def terminal_offset(self) -> int:
        if not self.chain:
            return self.level
        return self.chain[-1].offset


def compute_heights(
    sd: StackingData,
) -> tuple[tuple[int, ...], tuple[int, ...], list[list[int]]]:
    """Heights h_1..h_M with the per-stage spacer totals and slice-start
    tables that back level location.

    Returns (heights, totals, tables) where totals[m-1] is a_m and
    tables[m-1][i] = i*h_m + (a_{m,1} + ... + a_{m,i}).
    """
    heights = sd.heights()
    totals = tuple(sd.spacer_total(m) for m in range(1, sd.num_towers))
    tables = [sd.slice_starts(m) for m in range(1, sd.num_towers)]
    return heights, totals, tables


def _check_level(sd: StackingData, n: int, k: int) -> int:
    h_n = sd.height(n)
    if not 0 <= k < h_n:
        raise TowerError(f"level {k} out of range [0, {h_n}) for tower {n}")
    return h_n


def _descend_once(sd: StackingData, m: int, k: int) -> tuple[str, int, int]:
    """Resolve level k of tower m+1 against stage m.

    Returns ("slice", i, inner_level) or ("spacer", i, position), i 1-based.
    """
    starts = sd.slice_starts(m)
    h = sd.heights()[m - 1]
    i = bisect_right(starts, k) - 1
    off = k - starts[i]
    if off < h:
        return ("slice", i + 1, off)
    return ("spacer", i + 1, off - h)


def locate_level(sd: StackingData, n: int, k: int, stop_stage: int = 1) -> LevelLocator:
    """Descent chain for level k of tower n, down to `stop_stage` or the
    first spacer block hit.  Cost is one binary search per stage.
    """
    _check_level(sd, n, k)
    if not 1 <= stop_stage <= n:
        raise TowerError(f"stop stage {stop_stage} out of range 1..{n}")
    steps: list[LocatorStep] = []
    cur, lvl = n, k
    while cur > stop_stage:
        m = cur - 1
        kind, idx, off = _descend_once(sd, m, lvl)
        steps.append(LocatorStep(stage=m, kind=kind, index=idx, offset=off))
        if kind == "spacer":
            break
        cur, lvl = m, off
    return LevelLocator(n=n, level=k, chain=tuple(steps))


def recompose_level(sd: StackingData, locator: LevelLocator) -> int:
    """Inverse of locate_level: rebuild the level index from the chain."""
    if not locator.chain:
        return locator.level
    last = locator.chain[-1]
    k = last.offset
    if last.kind == "spacer":
        k += sd.heights()[last.stage - 1]  # past the slice below the block
    for step in reversed(locator.chain):
        k += sd.slice_starts(step.stage)[step.index - 1]
    return k


def decode_symbol(sd: StackingData, spec: CodingSpec, n: int, k: int) -> int:
    """The k-th symbol of the word encoding tower n over reference spec.

    Equals entry k of the fully expanded word without materializing it.
    """
    r = spec.reference
    if r > n:
        raise TowerError(f"reference stage {r} exceeds tower index {n}")
    refined = spec.mode == "refined"
    if refined and sd.spacer_cap is None:
        raise TowerError("refined mode requires a finite spacer_cap")
    _check_level(sd, n, k)
    heights = sd.heights()
    h_r = heights[r - 1]
    cur, lvl = n, k
    while cur > r:
        m = cur - 1
        kind, _, off = _descend_once(sd, m, lvl)
        if kind == "spacer":
            return h_r + off + 1 if refined else 0
        cur, lvl = m, off
    return lvl + 1


@dataclass(frozen=True)
class ValidLevels:
    """The level set K of tower n for a sampling horizon t_N.

    K = { k : 0 <= k <= h_n - t_N - 1, level k is not inside a spacer
    block added by stage n-1 }.  The set is never enumerated eagerly:
    membership counting and rank selection run off the stage n-1 prefix
    sums, so uniform sampling needs no materialization.
    """

    sd: StackingData
    n: int
    t_max: int
    count: int

    def __len__(self) -> int:
        return self.count

    def select(self, u: int) -> int:
        """The u-th valid level in increasing order, 0 <= u < count."""
        if not 0 <= u < self.count:
            raise TowerError(f"rank {u} out of range [0, {self.count})")
        h = self.sd.heights()[self.n - 2]
        return self.sd.slice_starts(self.n - 1)[u // h] + (u % h)

    def __iter__(self) -> Iterator[int]:
        h = self.sd.heights()[self.n - 2]
        starts = self.sd.slice_starts(self.n - 1)
        for u in range(self.count):
            yield starts[u // h] + (u % h)

    @property
    def coverage(self) -> float:
        """|K| / h_n, the mass fraction the conditioning retains."""
        return self.count / self.sd.height(self.n)


def valid_levels(sd: StackingData, n: int, t_max: int) -> ValidLevels:
    """Valid-level set K for tower n and horizon t_max (= t_N).

    t_max >= h_n yields an empty set rather than an error.
    """
    if n < 2:
        raise TowerError("valid_levels needs n >= 2 (a previous stage must exist)")
    if t_max < 0:
        raise TowerError("t_max must be nonnegative")
    h_n = sd.height(n)
    bound = h_n - t_max - 1
    if bound < 0:
        return ValidLevels(sd=sd, n=n, t_max=t_max, count=0)
    kind, i, off = _descend_once(sd, n - 1, bound)
    h = sd.heights()[n - 2]
    if kind == "slice":
        count = (i - 1) * h + off + 1
    else:
        count = i * h
    return ValidLevels(sd=sd, n=n, t_max=t_max, count=count)


def code_orbit(
    sd: StackingData,
    spec: CodingSpec,
    n: int,
    k: int,
    offsets: Sequence[int],
) -> tuple[int, ...]:
    """Coded orbit word: symbol i is the level k + offsets[i] of tower n.

    Raises OrbitEscape with the 1-based sample index if the orbit leaves
    the tower.
    """
    h_n = _check_level(sd, n, k)
    word = []
    for i, t in enumerate(offsets, start=1):
        lvl = k + t
        if lvl >= h_n:
            raise OrbitEscape(i, lvl, h_n)
        word.append(decode_symbol(sd, spec, n, lvl))
    return tuple(word)
