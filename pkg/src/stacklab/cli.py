"""Command-line harness tying construction, entropy runs, randomized
searches, and bound evaluations into reproducible experiments.

One experiment = one JSON config document.  Data outputs (CSV, summary)
are byte-deterministic for a fixed effective config; timestamps live only
in meta.json.  Every report embeds the config hash; `verify` rejects
mixed-provenance output directories.

Exit codes: 0 success, 2 validation error, 3 resource guard, 4 search
exhausted.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__, bounds as bounds_mod
from .config import (
    ConfigError,
    ExperimentConfig,
    canonical_json,
    load_config,
    parse_rational,
)
from .entropy import (
    EntropyError,
    WordCapExceeded,
    empirical_sequence_entropy,
    seq_entropy_upper_profile,
)
from .randomstacks import (
    build_markov_matrix,
    genericness_search,
    recipe_params,
    stationary_distribution,
    stationary_distribution_exact,
)
from .randomstacks.generic import GenericSearchError
from .randomstacks.markov import MarkovError
from .randomstacks.recipes import RecipeError
from .rng import BULK_RNG_ID, SPACER_RNG_ID
from .sequences import SequenceError, dilation_diagnostic, krug_K_estimate, max_gap
from .tower import CodingSpec, ResourceGuard, TowerError, valid_levels

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_RESOURCE = 3
EXIT_EXHAUSTED = 4

LN2 = math.log(2.0)

_VALIDATION_ERRORS = (
    ConfigError,
    TowerError,
    SequenceError,
    EntropyError,
    bounds_mod.BoundsError,
    MarkovError,
    GenericSearchError,
    RecipeError,
)


class SearchExhausted(RuntimeError):
    """A randomized search ran out of trials without acceptance."""


def fmt(x) -> str:
    """Deterministic CSV formatting; floats at fixed precision 12."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        if x == 0.0:
            return "0.000000000000"
        if 1e-12 <= abs(x) < 1e16:
            return f"{x:.12f}"
        return f"{x:.12e}"
    return str(x)


@dataclass
class Report:
    """One operation's tabular output plus its summary lines."""

    name: str
    header: tuple[str, ...]
    rows: list[tuple]
    summary: list[str]
    accepted: bool | None = None  # searches only


# -- operation runners ---------------------------------------------------------


def _coding_spec(op: dict) -> CodingSpec:
    return CodingSpec(reference=op.get("reference", 1), mode=op.get("mode", "base"))


def _run_entropy(cfg: ExperimentConfig, op: dict, workers: int) -> Report:
    spec = _coding_spec(op)
    stage = op["stage"]
    length = op["length"]
    method = op.get("method", "exact")
    res = empirical_sequence_entropy(
        cfg.stacking,
        spec,
        stage,
        cfg.sequence,
        length,
        method=method,
        sample_count=op.get("count"),
        seed=cfg.seed,
        word_cap=cfg.word_cap,
        workers=workers,
    )
    hist = res.histogram
    row = (
        length,
        stage,
        spec.reference,
        f"{method}/{spec.mode}",
        res.h_nats,
        res.h_per_sample,
        res.h_per_sample / LN2,
        hist.distinct_words,
        hist.coverage,
        cfg.seed,
    )
    header = (
        "N",
        "stage",
        "reference",
        "mode",
        "H_nats",
        "H_per_N",
        "H_per_N_bits",
        "distinct_words",
        "coverage",
        "seed",
    )
    summary = [
        f"entropy: stage={stage} reference={spec.reference} mode={method}/{spec.mode} "
        f"N={length} H_per_N={fmt(res.h_per_sample)} distinct={hist.distinct_words} "
        f"coverage={fmt(hist.coverage)}"
    ]
    return Report(name="entropy", header=header, rows=[row], summary=summary)


def _tau_from_op(cfg: ExperimentConfig, op: dict):
    heights = cfg.stacking.heights()
    rule = op.get("rule", "strict")
    cuts = _cuts_from_op(op)
    lam = parse_rational(op["lam"], "lam") if "lam" in op else None

    def tau(N: int) -> int:
        return bounds_mod.select_tau(heights, cfg.sequence, cuts, N, rule=rule, lam=lam)

    return tau


def _cuts_from_op(op: dict):
    cuts = op.get("cuts", 1)
    if isinstance(cuts, int):
        return bounds_mod.constant_cuts(cuts)
    if cuts == "constant":
        return bounds_mod.constant_cuts(op.get("c", 1))
    if cuts == "power":
        return bounds_mod.power_cuts(
            parse_rational(op["alpha"], "cuts.alpha"),
            parse_rational(op["beta"], "cuts.beta"),
        )
    if cuts == "loglog":
        return bounds_mod.loglog_cuts()
    raise ConfigError(f"cuts: unknown schedule {cuts!r}")


def _run_profile(cfg: ExperimentConfig, op: dict, workers: int) -> Report:
    tau = _tau_from_op(cfg, op)
    points = seq_entropy_upper_profile(
        cfg.stacking,
        cfg.sequence,
        tau,
        op["lengths"],
        coding_mode=op.get("mode", "base"),
        workers=workers,
        word_cap=cfg.word_cap,
    )
    header = (
        "N",
        "stage",
        "H_nats",
        "H_per_N",
        "H_per_N_bits",
        "distinct_words",
        "coverage",
    )
    rows = [
        (
            p.length,
            p.stage,
            p.h_nats,
            p.h_per_sample,
            p.h_per_sample / LN2,
            p.distinct_words,
            p.coverage,
        )
        for p in points
    ]
    summary = [
        f"profile: N={points[0].length}..{points[-1].length} "
        f"H_per_N {fmt(points[0].h_per_sample)} -> {fmt(points[-1].h_per_sample)}"
    ]
    return Report(name="profile", header=header, rows=rows, summary=summary)


def _run_seq(cfg: ExperimentConfig, op: dict, workers: int) -> Report:
    seq = cfg.sequence
    limit = op.get("limit", seq.horizon)
    rows = []
    prev = None
    for i in range(seq.n0, min(limit, seq.horizon) + 1):
        t = seq.generate(i)
        rows.append((i, t, "" if prev is None else t - prev))
        prev = t
    summary = [f"seq: kind={seq.kind} n0={seq.n0} horizon={seq.horizon}"]
    if len(rows) >= 2:
        report = dilation_diagnostic(seq, min(limit, seq.horizon))
        summary.append(
            f"seq: dilation verdict (finite-horizon heuristic) = {report.dilating}"
        )
    return Report(name="seq", header=("index", "value", "gap"), rows=rows, summary=summary)


def _run_markov(cfg: ExperimentConfig, op: dict, workers: int) -> Report:
    H = op["period"]
    model = build_markov_matrix(H)
    pi = stationary_distribution(model)
    exact = stationary_distribution_exact(model)
    rows = [
        (i + 1, float(pi[i]), exact[i].numerator, exact[i].denominator)
        for i in range(H + 1)
    ]
    residual = max(
        abs(sum(float(model.rows[j][i]) * pi[j] for j in range(H + 1)) - pi[i])
        for i in range(H + 1)
    )
    summary = [
        f"markov: period={H} stationary head={fmt(float(pi[0]))} "
        f"tail={fmt(float(pi[-1]))} residual={residual:.3e}"
    ]
    return Report(
        name="markov",
        header=("state", "stationary", "exact_num", "exact_den"),
        rows=rows,
        summary=summary,
    )


def _run_generic(cfg: ExperimentConfig, op: dict, workers: int) -> Report:
    report = genericness_search(
        cfg.stacking,
        cfg.sequence,
        N=op["length"],
        N0=op["floor_length"],
        q=op["q"],
        alphabet=op["alphabet"],
        trial_cap=op["trial_cap"],
        seed=cfg.seed,
        evaluate_all=op.get("evaluate_all", False),
    )
    rows = [
        (
            r.trial,
            r.accepted,
            r.worst_count / r.valid_count,
            r.worst_cap / r.valid_count,
            report.analytic_bound,
        )
        for r in report.records
    ]
    header = ("trial", "accepted", "worst_word_frequency", "cap", "p_failure_bound")
    if report.accepted is not None:
        summary = [
            f"generic: accepted at trial {report.accepted_trial} of "
            f"{report.trials_used}; spacers={','.join(map(str, report.accepted))}"
        ]
    else:
        summary = [
            f"generic: EXHAUSTED after {report.trials_used} trials; "
            f"best worst-ratio {fmt(report.best_ratio)}"
        ]
    summary.append(
        f"generic: empirical failure rate {fmt(report.empirical_failure_rate)} "
        f"vs analytic bound {fmt(report.analytic_bound)} (rng={report.rng})"
    )
    return Report(
        name="generic",
        header=header,
        rows=rows,
        summary=summary,
        accepted=report.accepted is not None,
    )


def _phi_from_op(op: dict):
    phi = op["phi"]
    if phi == "log":
        return bounds_mod.phi_log()
    if phi == "power":
        return bounds_mod.phi_power(parse_rational(op["beta"], "phi.beta"))
    if phi == "exp_power":
        return bounds_mod.phi_exp_power(parse_rational(op["beta"], "phi.beta"))
    raise ConfigError(f"phi: unknown gauge {phi!r}")


def _run_bounds(cfg: ExperimentConfig, op: dict, workers: int) -> Report:
    phi = _phi_from_op(op)
    cuts = _cuts_from_op(op)
    horizon = op["horizon"]
    profile = bounds_mod.balancing_profile(cfg.sequence, phi, cuts, horizon)
    heights = cfg.stacking.heights() if cfg.stacking is not None else None
    rows = []
    for r in profile.rows:
        tau = ""
        if heights is not None:
            try:
                tau = bounds_mod.select_tau(heights, cfg.sequence, cuts, r.n)
            except bounds_mod.BoundsError:
                tau = ""
        rows.append((r.n, r.c_n, r.diag_balance, r.diag_phi, r.diag_binom, tau))
    first, last = profile.rows[0], profile.rows[-1]
    summary = [
        f"bounds: n={first.n}..{last.n} balance {fmt(first.diag_balance)} -> "
        f"{fmt(last.diag_balance)}, phi-diag {fmt(first.diag_phi)} -> {fmt(last.diag_phi)}"
    ]
    return Report(
        name="bounds",
        header=("n", "c_n", "diag_balance", "diag_phi", "diag_binom", "tau"),
        rows=rows,
        summary=summary,
    )


def _run_recipe(cfg: ExperimentConfig, op: dict, workers: int) -> Report:
    bundle = recipe_params(
        op["name"],
        h=op["h"],
        beta=parse_rational(op["beta"], "beta"),
        alpha=parse_rational(op["alpha"], "alpha") if "alpha" in op else None,
        gamma=parse_rational(op.get("gamma", "3/2"), "gamma"),
        eps=parse_rational(op.get("eps", "1/10"), "eps"),
        kappa=parse_rational(op["kappa"], "kappa") if "kappa" in op else None,
        L=op.get("L"),
        A=cfg.sequence,
    )
    header = (
        "name",
        "N0",
        "N",
        "q",
        "m",
        "delta",
        "t_N",
        "p_fail_horizon_floor",
        "p_fail_range_floor",
    )
    row = (
        bundle.name,
        "" if bundle.floor_length is None else bundle.floor_length,
        "" if bundle.word_length is None else bundle.word_length,
        bundle.cuts,
        "" if bundle.dependence_range is None else bundle.dependence_range,
        "" if bundle.deviation is None else bundle.deviation,
        "" if bundle.horizon_term is None else bundle.horizon_term,
        "" if bundle.p_fail_horizon_floor is None else bundle.p_fail_horizon_floor,
        "" if bundle.p_fail_range_floor is None else bundle.p_fail_range_floor,
    )
    summary = [
        f"recipe {bundle.name}: q={bundle.cuts} N={bundle.word_length} "
        f"N0={bundle.floor_length}"
    ]
    summary.extend(f"recipe note: {note}" for note in bundle.notes)
    return Report(name="recipe", header=header, rows=[row], summary=summary)


_RUNNERS = {
    "entropy": _run_entropy,
    "profile": _run_profile,
    "seq": _run_seq,
    "markov": _run_markov,
    "generic": _run_generic,
    "bounds": _run_bounds,
    "recipe": _run_recipe,
}


# -- output writing --------------------------------------------------------------


def _write_csv(path: Path, header: tuple[str, ...], rows, cfg_hash: str) -> None:
    lines = [f"# config_hash={cfg_hash}", ",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def execute(
    cfg: ExperimentConfig, outdir: Path, workers: int = 1, op_filter: tuple[str, ...] | None = None
) -> list[Report]:
    """Run the config's operations and write the report bundle."""
    outdir.mkdir(parents=True, exist_ok=True)
    cfg_hash = cfg.hash
    reports: list[Report] = []
    filenames: list[str] = []
    seen: dict[str, int] = {}
    summary_lines = [f"# config_hash={cfg_hash}", f"seed={cfg.seed}"]
    for op in cfg.operations:
        if op_filter is not None and op["op"] not in op_filter:
            continue
        report = _RUNNERS[op["op"]](cfg, op, workers)
        seen[report.name] = seen.get(report.name, 0) + 1
        suffix = "" if seen[report.name] == 1 else f"_{seen[report.name]}"
        filename = f"{report.name}{suffix}.csv"
        _write_csv(outdir / filename, report.header, report.rows, cfg_hash)
        filenames.append(filename)
        summary_lines.extend(report.summary)
        reports.append(report)
    if not reports:
        raise ConfigError("operations: nothing to run after filtering")
    (outdir / "summary.txt").write_text("\n".join(summary_lines) + "\n", encoding="utf-8")
    (outdir / "config.json").write_text(canonical_json(cfg.doc) + "\n", encoding="utf-8")
    meta = {
        "tool": "stacklab",
        "version": __version__,
        "config_hash": cfg_hash,
        "seed": cfg.seed,
        "workers": workers,
        "rng": {"spacer": SPACER_RNG_ID, "bulk": BULK_RNG_ID},
        "outputs": filenames,
        "created_unix": time.time(),
    }
    (outdir / "meta.json").write_text(
        json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return reports


def describe(cfg: ExperimentConfig, out=None) -> None:
    """Print derived quantities without executing heavy work."""
    out = out if out is not None else sys.stdout
    print(f"config hash: {cfg.hash}", file=out)
    print(f"seed: {cfg.seed}", file=out)
    if cfg.stacking is not None:
        heights = cfg.stacking.heights()
        print(f"heights: {', '.join(map(str, heights))}", file=out)
        if cfg.stacking.spacer_cap is not None:
            print(f"spacer cap: {cfg.stacking.spacer_cap}", file=out)
    if cfg.sequence is not None:
        d = cfg.sequence.describe()
        print(f"sequence: {d}", file=out)
    for i, op in enumerate(cfg.operations):
        kind = op["op"]
        print(f"[{i}] op={kind}", file=out)
        if kind == "entropy" and cfg.stacking is not None:
            t_max = cfg.sequence.generate(cfg.sequence.n0 + op["length"] - 1)
            K = valid_levels(cfg.stacking, op["stage"], t_max)
            spec = _coding_spec(op)
            print(
                f"    stage={op['stage']} reference={spec.reference} "
                f"|K|={K.count} coverage={fmt(K.coverage)} "
                f"alphabet={spec.alphabet_size(cfg.stacking)}",
                file=out,
            )
        elif kind == "generic":
            h_n = cfg.stacking.heights()[-1]
            print(
                f"    q={op['q']} candidate height >= {op['q'] * h_n} "
                f"trial_cap={op['trial_cap']}",
                file=out,
            )
        elif kind == "recipe":
            rep = _run_recipe(cfg, op, 1)
            for line in rep.summary:
                print(f"    {line}", file=out)
        elif kind == "markov":
            print(f"    period={op['period']}", file=out)


def verify(outdir: Path, out=None) -> int:
    """Check that every report in a run directory matches its config hash."""
    out = out if out is not None else sys.stdout
    meta_path = outdir / "meta.json"
    config_path = outdir / "config.json"
    if not meta_path.exists() or not config_path.exists():
        print("REJECTED: missing meta.json or config.json", file=out)
        return EXIT_VALIDATION
    meta = json.loads(meta_path.read_text())
    declared = meta.get("config_hash", "")
    from .config import config_hash as hash_fn

    actual = hash_fn(json.loads(config_path.read_text()))
    ok = True
    if actual != declared:
        print(f"REJECTED: config.json hashes to {actual}, meta says {declared}", file=out)
        ok = False
    for name in sorted(outdir.glob("*.csv")) + [outdir / "summary.txt"]:
        first = name.read_text(encoding="utf-8").splitlines()[0]
        if first != f"# config_hash={declared}":
            print(f"REJECTED: {name.name} carries a different hash", file=out)
            ok = False
        else:
            print(f"ok: {name.name}", file=out)
    if ok:
        print(f"verified: {declared}", file=out)
        return EXIT_OK
    return EXIT_VALIDATION


# -- argument parsing -------------------------------------------------------------


def _load_doc(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from None


def _cfg_from_args(args) -> ExperimentConfig:
    doc = _load_doc(args.config)
    if getattr(args, "cap_words", None):
        doc.setdefault("caps", {})["words"] = args.cap_words
    return load_config(doc, seed_override=args.seed)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stacklab",
        description="cut-and-stack tower simulator and sequence-entropy lab",
    )
    parser.add_argument("--version", action="version", version=f"stacklab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_out=True):
        p.add_argument("--config", required=True, help="experiment config (JSON)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--cap-words", type=int, default=None, dest="cap_words")
        if needs_out:
            p.add_argument("--out", required=True, help="output directory")

    p_desc = sub.add_parser("describe", help="print derived quantities, no heavy work")
    common(p_desc, needs_out=False)

    p_run = sub.add_parser("run", help="execute all configured operations")
    common(p_run)

    p_seq = sub.add_parser("seq", help="sampling-sequence diagnostics")
    seq_sub = p_seq.add_subparsers(dest="seq_command", required=True)
    for name in ("describe", "gaps", "kvalue"):
        sp = seq_sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--limit", type=int, default=None)
        if name == "kvalue":
            sp.add_argument("--r", type=int, required=True)
            sp.add_argument("--n", type=int, required=True)

    p_ent = sub.add_parser("entropy", help="entropy operations")
    ent_sub = p_ent.add_subparsers(dest="entropy_command", required=True)
    p_ent_run = ent_sub.add_parser("run")
    common(p_ent_run)

    p_markov = sub.add_parser("markov", help="companion chain and stationary vector")
    p_markov.add_argument("--period", type=int, required=True)

    p_gen = sub.add_parser("generic", help="genericness search")
    common(p_gen)

    p_bounds = sub.add_parser("bounds", help="balancing diagnostics")
    common(p_bounds)

    p_recipe = sub.add_parser("recipe", help="construction parameter bundles")
    p_recipe.add_argument("--name", required=True, choices=("poly", "nlog", "flex"))
    p_recipe.add_argument("--h", type=int, required=True)
    p_recipe.add_argument("--beta", required=True)
    p_recipe.add_argument("--alpha", default=None)
    p_recipe.add_argument("--kappa", default=None)
    p_recipe.add_argument("--L", type=int, default=None)
    p_recipe.add_argument("--gamma", default="3/2")
    p_recipe.add_argument("--eps", default="1/10")
    p_recipe.add_argument("--config", default=None, help="optional, supplies the sequence")
    p_recipe.add_argument("--seed", type=int, default=None)

    p_verify = sub.add_parser("verify", help="check report hashes in a run directory")
    p_verify.add_argument("--out", required=True)
    return parser


def _dispatch(args) -> int:
    if args.command == "describe":
        describe(_cfg_from_args(args))
        return EXIT_OK
    if args.command == "run":
        reports = execute(_cfg_from_args(args), Path(args.out), workers=args.workers)
        if any(r.accepted is False for r in reports):
            raise SearchExhausted("no spacer sequence accepted within the trial cap")
        return EXIT_OK
    if args.command == "entropy":
        reports = execute(
            _cfg_from_args(args),
            Path(args.out),
            workers=args.workers,
            op_filter=("entropy", "profile"),
        )
        return EXIT_OK if reports else EXIT_VALIDATION
    if args.command == "generic":
        reports = execute(
            _cfg_from_args(args), Path(args.out), workers=args.workers, op_filter=("generic",)
        )
        if any(r.accepted is False for r in reports):
            raise SearchExhausted("no spacer sequence accepted within the trial cap")
        return EXIT_OK
    if args.command == "bounds":
        execute(_cfg_from_args(args), Path(args.out), workers=args.workers, op_filter=("bounds",))
        return EXIT_OK
    if args.command == "markov":
        model = build_markov_matrix(args.period)
        pi = stationary_distribution(model)
        exact = stationary_distribution_exact(model)
        print("state,stationary,exact")
        for i in range(args.period + 1):
            print(f"{i + 1},{fmt(float(pi[i]))},{exact[i].numerator}/{exact[i].denominator}")
        return EXIT_OK
    if args.command == "recipe":
        sequence = None
        if args.config:
            cfg = load_config(
                _load_doc(args.config), seed_override=args.seed, require_operations=False
            )
            sequence = cfg.sequence
        bundle = recipe_params(
            args.name,
            h=args.h,
            beta=parse_rational(args.beta, "beta"),
            alpha=parse_rational(args.alpha, "alpha") if args.alpha else None,
            gamma=parse_rational(args.gamma, "gamma"),
            eps=parse_rational(args.eps, "eps"),
            kappa=parse_rational(args.kappa, "kappa") if args.kappa else None,
            L=args.L,
            A=sequence,
        )
        print(f"recipe={bundle.name}")
        print(f"q={bundle.cuts}")
        print(f"N0={bundle.floor_length}")
        print(f"N={bundle.word_length}")
        print(f"m={bundle.dependence_range}")
        print(f"delta={bundle.deviation}")
        for note in bundle.notes:
            print(f"note: {note}")
        return EXIT_OK
    if args.command == "seq":
        return _dispatch_seq(args)
    if args.command == "verify":
        return verify(Path(args.out))
    raise ConfigError(f"unknown command {args.command!r}")


def _dispatch_seq(args) -> int:
    cfg = load_config(
        _load_doc(args.config), seed_override=args.seed, require_operations=False
    )
    if cfg.sequence is None:
        raise ConfigError("sequence: required for seq subcommands")
    seq = cfg.sequence
    limit = args.limit or seq.horizon
    limit = min(limit, seq.horizon)
    if args.seq_command == "describe":
        print(f"sequence: {seq.describe()}")
        if limit >= seq.n0 + 1:
            rep = dilation_diagnostic(seq, limit)
            print(f"max gap s_{limit} = {max_gap(seq, limit)}")
            print(f"dilating on horizon (heuristic): {rep.dilating}")
            for r in (1, 2, 4):
                k = krug_K_estimate(seq, r, limit)
                print(f"thickened density r={r}: {k.numerator}/{k.denominator} = {fmt(float(k))}")
        return EXIT_OK
    if args.seq_command == "gaps":
        print("index,value,gap")
        prev = None
        for i in range(seq.n0, limit + 1):
            t = seq.generate(i)
            print(f"{i},{t},{'' if prev is None else t - prev}")
            prev = t
        return EXIT_OK
    if args.seq_command == "kvalue":
        value = krug_K_estimate(seq, args.r, args.n)
        print("r,n,kvalue_exact,kvalue")
        print(f"{args.r},{args.n},{value.numerator}/{value.denominator},{fmt(float(value))}")
        return EXIT_OK
    raise ConfigError(f"unknown seq subcommand {args.seq_command!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except _VALIDATION_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ResourceGuard, WordCapExceeded) as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except SearchExhausted as e:
        print(f"search exhausted: {e}", file=sys.stderr)
        return EXIT_EXHAUSTED


if __name__ == "__main__":
    sys.exit(main())
