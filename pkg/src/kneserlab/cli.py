"""Command-line surface: build/sample/solve hypergraph instances, run Monte
Carlo experiments, sweep bound evaluators, and drive the witness and
empty-window pipelines.

Exit codes: 0 success, 2 invalid arguments or input, 3 success with
deadline-censored results present.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .blowup import WitnessBudgetError, lemma1_witness
from .bounds import (
    case_i_bound,
    case_ii_bound,
    chromatic_formula,
    lemma31_lhs,
    lemma42_lhs,
    schedule,
    shadow_bound,
    thm1_bound,
    threshold_check,
    upper_cond,
)
from .coloring import Coloring, exact_chi
from .combinatorics import binom_exact
from .family import (
    SampleConfig,
    hypergraph_from_json,
    hypergraph_to_json,
    kneser_hypergraph,
    sample,
)
from .harness import (
    ExperimentConfig,
    FamilySpec,
    mc_run,
    mc_summary,
    upper_pipeline,
)

_PREDICATE_COLUMNS = (
    "pair_count_vs_nlogn",
    "subset_count_cubed",
    "doubled_window_squared",
    "subset_count_power",
    "doubled_window_power",
)

BOUNDS_CSV_HEADER = (
    "n,k,l,r,p,chromatic_formula,d,beta,s,u,"
    "thm1_cap_ln,thm1_cap_vacuous,lemma31_lhs,"
    "case_i0_ln,case_i0_vacuous,case_ii0_ln,case_ii0_vacuous,"
    "lemma42_a0,lemma42_b0,upper_cond,shadow_full_ln,shadow_full_vacuous,"
    + ",".join(_PREDICATE_COLUMNS)
)


def _write_out(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _family_spec(args: argparse.Namespace) -> FamilySpec:
    if args.family == "full":
        return FamilySpec("full")
    if args.family == "stable":
        if args.s is None:
            raise ValueError("--family stable requires --s")
        return FamilySpec("stable", s=args.s)
    if args.from_k is None:
        raise ValueError("--family shadow requires --from-k")
    return FamilySpec("shadow", of=FamilySpec("full"), from_k=args.from_k)


def _cmd_build(args: argparse.Namespace) -> int:
    fam = _family_spec(args).build(args.n, args.k)
    h = kneser_hypergraph(fam, args.r)
    if args.materialize:
        h = h.materialize()
    _write_out(hypergraph_to_json(h), args.out)
    return 0


def _cmd_chi(args: argparse.Namespace) -> int:
    with open(getattr(args, "in"), encoding="utf-8") as fh:
        h, _ = hypergraph_from_json(fh.read())
    deadline_s = args.deadline_ms / 1000.0 if args.deadline_ms is not None else None
    cert = exact_chi(h, deadline_s=deadline_s)
    result = {
        "chi_lo": cert.chi_lo,
        "chi_hi": cert.chi_hi,
        "exact": cert.exact,
        "work": cert.work,
        "witness": list(cert.witness.colors),
    }
    _write_out(json.dumps(result, separators=(",", ":")), args.out)
    return 0 if cert.exact else 3


def _cmd_sample(args: argparse.Namespace) -> int:
    with open(getattr(args, "in"), encoding="utf-8") as fh:
        h, _ = hypergraph_from_json(fh.read())
    hs = sample(h, SampleConfig(args.p, args.seed, args.mode))
    _write_out(hypergraph_to_json(hs), args.out)
    return 0


def _cmd_mc(args: argparse.Namespace) -> int:
    if args.config is not None:
        with open(args.config, encoding="utf-8") as fh:
            cfg = ExperimentConfig.from_json(fh.read())
        if args.out is not None:
            cfg = ExperimentConfig(cfg.family, cfg.n, cfg.k, cfg.r, cfg.p_grid,
                                   cfg.trials, cfg.seed, cfg.deadline_s, args.out)
    else:
        for field in ("n", "k", "r", "p_grid"):
            if getattr(args, field) is None:
                raise ValueError(f"mc without --config requires --{field.replace('_', '-')}")
        cfg = ExperimentConfig(
            family=_family_spec(args),
            n=args.n,
            k=args.k,
            r=args.r,
            p_grid=tuple(args.p_grid),
            trials=args.trials,
            seed=args.seed,
            deadline_s=args.deadline_ms / 1000.0 if args.deadline_ms is not None else None,
            out_path=args.out,
        )
    records = mc_run(cfg, jobs=args.jobs)
    summary = mc_summary(records)
    for p, info in summary.items():
        freq = " ".join(f"Pr[chi<={d}]={f:.4f}" for d, f in sorted(info["freq"].items()))
        print(f"p={p} trials={info['trials']} censored={info['censored']} {freq}")
    censored = sum(info["censored"] for info in summary.values())
    return 3 if censored else 0


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    return str(value)


def _bounds_row(n: int, k: int, l: int, r: int, p: float, const: float) -> str:
    chrom = chromatic_formula(n, k, r)
    d = chromatic_formula(n, k + l, r) - 1
    sched = None
    try:
        sched = schedule(n, k, l, r)
    except ValueError:
        pass
    row: list[object] = [n, k, l, r, p, chrom, d]
    row += [sched.beta, sched.s, sched.u] if sched else [None, None, None]
    edge_cap = binom_exact(n, k + l) ** r
    if d >= 1 and 0.0 < p < 1.0:
        rep = thm1_bound(edge_cap, binom_exact(k + l, k), d, r, p)
        row += [rep.ln_bound.ln_value, rep.vacuous, lemma31_lhs(n, k, l, r, p)]
    else:
        row += [None, None, None]
    if sched and 0.0 < p < 1.0:
        ci = case_i_bound(sched, 0, p)
        row += [ci.ln_bound.ln_value, ci.vacuous]
        if sched.u >= 1:
            cii = case_ii_bound(sched, 0, p)
            row += [cii.ln_bound.ln_value, cii.vacuous]
        else:
            row += [None, None]
        a0, b0 = lemma42_lhs(sched, 0, p)
        row += [a0, b0]
    else:
        row += [None] * 6
    row.append(upper_cond(n, k, l, r, p) if 0.0 < p < 1.0 else None)
    if d >= 1 and 0.0 < p < 1.0:
        srep = shadow_bound(binom_exact(n, k), k, l, d, r, p)
        row += [srep.ln_bound.ln_value, srep.vacuous]
    else:
        row += [None, None]
    preds = threshold_check(n, k, l, r, const)
    for name in _PREDICATE_COLUMNS:
        row.append(preds[name].holds if name in preds else None)
    return ",".join(_fmt(v) for v in row)


def _cmd_bounds(args: argparse.Namespace) -> int:
    lines = [BOUNDS_CSV_HEADER]
    for n in args.n:
        for k in args.k:
            for l in args.l:
                for r in args.r:
                    for p in args.p_grid:
                        lines.append(_bounds_row(n, k, l, r, p, args.const))
    _write_out("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_lemma1(args: argparse.Namespace) -> int:
    with open(getattr(args, "in"), encoding="utf-8") as fh:
        obj = json.loads(fh.read())
    n, k = int(obj["n"]), int(obj["k"])
    colors = obj["coloring"]
    kappa = Coloring.from_colors(colors)
    try:
        report = lemma1_witness(n, k, args.l, args.r, kappa, budget=args.budget)
    except WitnessBudgetError as exc:
        _write_out(json.dumps({"status": "budget-exhausted", "spent": exc.spent}), args.out)
        return 0
    if report is None:
        _write_out(json.dumps({"status": "none"}), args.out)
        return 0
    _write_out(report.to_json(), args.out)
    return 0


def _cmd_upper(args: argparse.Namespace) -> int:
    report = upper_pipeline(args.n, args.k, args.r, args.l, args.p, args.seed, args.trials)
    _write_out(json.dumps(report, separators=(",", ":")), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kneserlab",
        description="Kneser-type hypergraphs: exact chromatic numbers, random "
                    "subhypergraph experiments, and probability-bound sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_family_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", choices=["full", "stable", "shadow"], default="full")
        p.add_argument("--s", type=int, default=None, help="stability gap for --family stable")
        p.add_argument("--from-k", type=int, default=None,
                       help="subset size of the base family for --family shadow")

    p_build = sub.add_parser("build", help="emit a hypergraph JSON instance")
    p_build.add_argument("--n", type=int, required=True)
    p_build.add_argument("--k", type=int, required=True)
    p_build.add_argument("--r", type=int, required=True)
    add_family_flags(p_build)
    p_build.add_argument("--materialize", action="store_true",
                         help="emit the explicit edge list instead of the generator flag")
    p_build.add_argument("--out", default=None)
    p_build.set_defaults(func=_cmd_build)

    p_chi = sub.add_parser("chi", help="exactly solve a JSON instance")
    p_chi.add_argument("--in", required=True)
    p_chi.add_argument("--deadline-ms", type=float, default=None)
    p_chi.add_argument("--out", default=None)
    p_chi.set_defaults(func=_cmd_chi)

    p_sample = sub.add_parser("sample", help="emit a sampled instance")
    p_sample.add_argument("--in", required=True)
    p_sample.add_argument("--p", type=float, required=True)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--mode", choices=["coupled", "independent"], default="coupled")
    p_sample.add_argument("--out", default=None)
    p_sample.set_defaults(func=_cmd_sample)

    p_mc = sub.add_parser("mc", help="Monte Carlo chromatic-number experiment")
    p_mc.add_argument("--config", default=None, help="ExperimentConfig JSON file")
    p_mc.add_argument("--n", type=int, default=None)
    p_mc.add_argument("--k", type=int, default=None)
    p_mc.add_argument("--r", type=int, default=None)
    add_family_flags(p_mc)
    p_mc.add_argument("--p-grid", type=_float_list, default=None)
    p_mc.add_argument("--trials", type=int, default=100)
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--deadline-ms", type=float, default=None)
    p_mc.add_argument("--jobs", type=int, default=1)
    p_mc.add_argument("--out", default=None)
    p_mc.set_defaults(func=_cmd_mc)

    p_bounds = sub.add_parser("bounds", help="CSV sweep of the bound evaluators")
    p_bounds.add_argument("--n", type=_int_list, required=True)
    p_bounds.add_argument("--k", type=_int_list, required=True)
    p_bounds.add_argument("--l", type=_int_list, required=True)
    p_bounds.add_argument("--r", type=_int_list, required=True)
    p_bounds.add_argument("--p-grid", type=_float_list, required=True)
    p_bounds.add_argument("--const", type=float, default=1.0,
                          help="explicit constant standing in for the growth conditions")
    p_bounds.add_argument("--out", default=None)
    p_bounds.set_defaults(func=_cmd_bounds)

    p_lem = sub.add_parser("lemma1", help="witness search on a coloring file")
    p_lem.add_argument("--in", required=True,
                       help='JSON with fields "n", "k", "coloring"')
    p_lem.add_argument("--l", type=int, required=True)
    p_lem.add_argument("--r", type=int, required=True)
    p_lem.add_argument("--budget", type=int, default=50_000_000)
    p_lem.add_argument("--out", default=None)
    p_lem.set_defaults(func=_cmd_lemma1)

    p_up = sub.add_parser("upper", help="empty-window color-saving pipeline")
    p_up.add_argument("--n", type=int, required=True)
    p_up.add_argument("--k", type=int, required=True)
    p_up.add_argument("--r", type=int, required=True)
    p_up.add_argument("--l", type=int, required=True)
    p_up.add_argument("--p", type=float, required=True)
    p_up.add_argument("--seed", type=int, default=0)
    p_up.add_argument("--trials", type=int, default=20)
    p_up.add_argument("--out", default=None)
    p_up.set_defaults(func=_cmd_upper)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
