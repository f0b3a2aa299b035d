"""Experiment configuration: a single JSON-compatible document.

Numeric parameters may be given as exact rationals ("3/2") anywhere a
float is accepted; they are kept as Fractions internally.  Two runs from
an identical document (same effective seed) must produce byte-identical
data outputs, so the document hash is computed over the canonical JSON of
the effective configuration and embedded in every report.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .sequences import SamplingSequence, SequenceError
from .tower import StackingData, TowerError

DEFAULT_WORD_CAP = 1 << 24

KNOWN_OPS = ("entropy", "profile", "seq", "markov", "generic", "bounds", "recipe")


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


def parse_rational(value, fieldname: str) -> Fraction:
    try:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise TypeError
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(value).limit_denominator(10**12)
    except (ValueError, ZeroDivisionError, TypeError):
        pass
    raise ConfigError(f"{fieldname}: expected a number or 'p/q' rational, got {value!r}")


def canonical_json(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def config_hash(doc: Any) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()


def build_sequence(doc: dict, fieldname: str = "sequence") -> SamplingSequence:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ConfigError(f"{fieldname}: needs an object with a 'kind'")
    kind = doc["kind"]
    n0 = doc.get("n0", 1)
    try:
        if kind == "power":
            return SamplingSequence.power(
                parse_rational(doc["alpha"], f"{fieldname}.alpha"),
                horizon=doc["horizon"],
                n0=n0,
            )
        if kind == "nlog":
            return SamplingSequence.nlog(
                float(parse_rational(doc.get("C", 1), f"{fieldname}.C")),
                float(parse_rational(doc["alpha"], f"{fieldname}.alpha")),
                horizon=doc["horizon"],
                n0=n0,
            )
        if kind == "linear":
            return SamplingSequence.linear(
                doc["a"], doc.get("b", 0), horizon=doc.get("horizon", 1 << 20), n0=n0
            )
        if kind == "explicit":
            return SamplingSequence.explicit(doc["values"], n0=n0)
    except KeyError as e:
        raise ConfigError(f"{fieldname}: missing {e.args[0]!r} for kind {kind!r}") from None
    except SequenceError as e:
        raise ConfigError(f"{fieldname}: {e}") from None
    raise ConfigError(f"{fieldname}.kind: unknown kind {kind!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    doc: dict = field(repr=False)
    stacking: StackingData | None
    sequence: SamplingSequence | None
    operations: tuple[dict, ...]
    seed: int
    word_cap: int

    @property
    def hash(self) -> str:
        return config_hash(self.doc)


def load_config(
    doc: dict, seed_override: int | None = None, require_operations: bool = True
) -> ExperimentConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    doc = json.loads(canonical_json(doc))  # defensive copy, JSON-clean
    if seed_override is not None:
        doc["seed"] = seed_override
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed: must be a nonnegative integer")
    stacking = None
    if "stacking" in doc:
        try:
            stacking = StackingData.from_dict(doc["stacking"])
        except TowerError as e:
            raise ConfigError(f"stacking: {e}") from None
    sequence = build_sequence(doc["sequence"]) if "sequence" in doc else None
    ops = doc.get("operations", [])
    if not ops and require_operations:
        raise ConfigError("operations: at least one operation is required")
    if not isinstance(ops, list):
        raise ConfigError("operations: must be a list")
    for i, op in enumerate(ops):
        if not isinstance(op, dict) or "op" not in op:
            raise ConfigError(f"operations[{i}]: needs an 'op' name")
        if op["op"] not in KNOWN_OPS:
            raise ConfigError(
                f"operations[{i}].op: unknown operation {op['op']!r} "
                f"(known: {', '.join(KNOWN_OPS)})"
            )
        _validate_op(i, op, stacking, sequence)
    caps = doc.get("caps", {})
    word_cap = caps.get("words", DEFAULT_WORD_CAP)
    if not isinstance(word_cap, int) or word_cap < 1:
        raise ConfigError("caps.words: must be a positive integer")
    return ExperimentConfig(
        doc=doc,
        stacking=stacking,
        sequence=sequence,
        operations=tuple(ops),
        seed=seed,
        word_cap=word_cap,
    )


def _require(op_index: int, op: dict, *names: str) -> None:
    for name in names:
        if name not in op:
            raise ConfigError(f"operations[{op_index}].{name}: required for op {op['op']!r}")


def _validate_op(i: int, op: dict, stacking, sequence) -> None:
    kind = op["op"]
    if kind == "entropy":
        _require(i, op, "stage", "length")
        if stacking is None:
            raise ConfigError(f"operations[{i}]: entropy needs a 'stacking' document")
        if sequence is None:
            raise ConfigError(f"operations[{i}]: entropy needs a 'sequence' document")
        if op.get("method", "exact") not in ("exact", "sampled"):
            raise ConfigError(f"operations[{i}].method: must be 'exact' or 'sampled'")
        if op.get("method") == "sampled" and "count" not in op:
            raise ConfigError(f"operations[{i}].count: required for sampled mode")
    elif kind == "profile":
        _require(i, op, "lengths")
        if stacking is None or sequence is None:
            raise ConfigError(f"operations[{i}]: profile needs 'stacking' and 'sequence'")
    elif kind == "seq":
        if sequence is None:
            raise ConfigError(f"operations[{i}]: seq needs a 'sequence' document")
    elif kind == "markov":
        _require(i, op, "period")
        if not isinstance(op["period"], int) or op["period"] < 2:
            raise ConfigError(f"operations[{i}].period: must be an integer >= 2")
    elif kind == "generic":
        _require(i, op, "length", "floor_length", "q", "alphabet", "trial_cap")
        if stacking is None or sequence is None:
            raise ConfigError(f"operations[{i}]: generic needs 'stacking' and 'sequence'")
    elif kind == "bounds":
        _require(i, op, "phi", "cuts", "horizon")
        if sequence is None:
            raise ConfigError(f"operations[{i}]: bounds needs a 'sequence' document")
    elif kind == "recipe":
        _require(i, op, "name", "h", "beta")
