"""Command line front end.

    eac check    <instance.json>   freeness, rotundity, hull summary
    eac hull     <instance.json>   rational hull and hull chain
    eac certify  <instance.json>   non-vanishing certificate or refusal
    eac solve    <instance.json>   certified intersection point harvest
    eac density  <instance.json>   larger harvest plus spread statistics
    eac selftest                   built-in verification suite

Instance may also be given as catalog:<name>; see eac list. Reports are
JSON (schema-validated, keys sorted, reproducible for a fixed seed except
the "timings" block) written to --out, with a human summary on stdout.
Exit codes: check 0 passed / 2 failed / 3 indeterminate; certify 0 emitted /
2 refused / 3 indeterminate; solve and density 0 found / 4 uncertified /
5 certified but empty within budget; file problems 1.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .instance import (Instance, InstanceError, builtin_instance, catalog_names,
                       load_instance, validate_report)
from .pipeline import (BidegreeMismatch, CertifyOutcome, Decision, certify,
                       decide, density_summary, solve)
from .solver import SolveReport


def _chain_entries(decision: Decision) -> list[dict]:
    return [{"kind": s.kind, "dim": s.dim} for s in decision.chain.chain]


def _verdict_block(decision: Decision) -> dict:
    v = decision.verdicts
    reason = None
    for part in (v.free, v.rotund):
        if part.ok is None:
            reason = str(part.detail.get("reason", "missing data"))
            break
    W = decision.W_effective
    return {
        "free": v.free.ok,
        "free_witness": v.free.witness,
        "rotund": v.rotund.ok,
        "rotund_witness": v.rotund.witness,
        "indeterminate_reason": reason,
        "bidegree": list(W.bidegree) if W.bidegree is not None else None,
    }


def _hull_block(instance: Instance, decision: Decision) -> dict:
    return {
        "dim_L_complex": instance.L.dim,
        "dim_T": decision.hull.dim,
        "codim_T": decision.hull.codim,
        "equations": [list(e) for e in decision.hull.equations],
    }


def _cert_block(outcome: CertifyOutcome) -> dict:
    c = outcome.certificate
    return {
        "refused": outcome.refused,
        "reason": outcome.reason,
        "value": c.value_str if c is not None else None,
        "value_float": c.value_float if c is not None else None,
        "cross_float": c.cross_float if c is not None else None,
        "nonzero": c.nonzero if c is not None else None,
    }


def _solve_block(report: SolveReport, cfg) -> dict:
    return {
        "config": {
            "seed": cfg.seed, "grid": cfg.grid, "budget_cells": cfg.budget_cells,
            "target_count": cfg.target_count,
            "coarse_threshold": cfg.coarse_threshold,
            "solve_tol": cfg.solve_tol, "dedup_tol": cfg.dedup_tol,
            "newton_steps": cfg.newton_steps, "seeds_per_cell": cfg.seeds_per_cell,
        },
        "solutions": [{
            "re_l": s.l.real, "im_l": s.l.imag,
            "residual": s.residual, "verified_residual": s.verified_residual,
            "winding": s.winding, "jacobian_rank": s.jacobian_rank,
            "cell": s.cell,
            "z": [[zj.real, zj.imag] for zj in s.z],
        } for s in report.solutions],
        "distinct_count": len(report.solutions),
        "cells_scanned": report.cells_scanned,
        "cells_with_solutions": sorted(report.cells_with_solutions),
        "seeds_refined": report.seeds_refined,
        "failures": len(report.failures),
        "budget_exhausted": report.budget_exhausted,
        "target_reached": report.target_reached,
        "defect": report.defect,
    }


def _base_report(command: str, instance: Instance, exit_code: int) -> dict:
    return {
        "command": command,
        "label": instance.label,
        "instance_hash": instance.hash,
        "assumptions": list(instance.A.assumptions()),
        "exit_code": exit_code,
        "verdicts": None, "hull": None, "chain": None,
        "certificate": None, "solve": None, "density": None,
        "selftest": None, "timings": {},
    }


def _emit(report: dict, out_path: str | None):
    validate_report(report)
    if out_path:
        with open(out_path, "w") as fh:
            json.dump(report, fh, sort_keys=True, indent=2)
            fh.write("\n")


def _write_csv(report: SolveReport, path: str):
    with open(path, "w") as fh:
        fh.write("re_l,im_l,residual,cell\n")
        for s in report.solutions:
            fh.write(f"{s.l.real!r},{s.l.imag!r},{s.residual!r},{s.cell}\n")


def _get_instance(spec: str) -> Instance:
    if spec.startswith("catalog:"):
        return builtin_instance(spec[len("catalog:"):])
    return load_instance(spec)


def _apply_overrides(instance: Instance, args) -> Instance:
    cfg = instance.config
    if getattr(args, "seed", None) is not None:
        cfg = cfg.replace(seed=args.seed)
    if getattr(args, "budget", None) is not None:
        cfg = cfg.replace(budget_cells=args.budget)
    if getattr(args, "grid", None) is not None:
        cfg = cfg.replace(grid=args.grid)
    if getattr(args, "target", None) is not None:
        cfg = cfg.replace(target_count=args.target)
    from dataclasses import replace

    return replace(instance, config=cfg)


def cmd_check(args) -> int:
    instance = _apply_overrides(_get_instance(args.instance), args)
    decision = decide(instance)
    v = decision.verdicts
    if v.indeterminate:
        code = 3
    elif v.free.ok and v.rotund.ok:
        code = 0
    else:
        code = 2
    report = _base_report("check", instance, code)
    report["verdicts"] = _verdict_block(decision)
    report["hull"] = _hull_block(instance, decision)
    report["chain"] = {"entries": _chain_entries(decision),
                       "rounds": decision.chain.rounds,
                       "non_free": decision.chain.non_free}
    _emit(report, args.out)
    word = {0: "free and rotund", 2: "failed", 3: "indeterminate"}[code]
    print(f"check {instance.label}: {word}")
    if v.free.ok is False:
        print(f"  not free: {v.free.witness}")
    if v.rotund.ok is False:
        print(f"  not rotund: {v.rotund.witness}")
    if v.indeterminate:
        print(f"  indeterminate: {report['verdicts']['indeterminate_reason']}")
    bd = report["verdicts"]["bidegree"]
    if bd is not None:
        print(f"  bidegree ({bd[0]}, {bd[1]})")
    return code


def cmd_hull(args) -> int:
    instance = _apply_overrides(_get_instance(args.instance), args)
    decision = decide(instance, measure="never")
    report = _base_report("hull", instance, 0)
    report["hull"] = _hull_block(instance, decision)
    report["chain"] = {"entries": _chain_entries(decision),
                       "rounds": decision.chain.rounds,
                       "non_free": decision.chain.non_free}
    _emit(report, args.out)
    h = report["hull"]
    print(f"hull {instance.label}: dim_C L = {h['dim_L_complex']}, "
          f"dim_R T = {h['dim_T']}, {h['codim_T']} rational equation(s)")
    for e in h["equations"]:
        print(f"  covector {e}")
    dims = " -> ".join(str(x["dim"]) for x in report["chain"]["entries"])
    print(f"  chain dims {dims}, rounds {report['chain']['rounds']}"
          + (", stabilized at a proper subspace" if report["chain"]["non_free"] else ""))
    return 0


def cmd_certify(args) -> int:
    instance = _apply_overrides(_get_instance(args.instance), args)
    outcome = certify(instance)
    if not outcome.refused:
        code = 0
    elif outcome.decision.verdicts.indeterminate:
        code = 3
    else:
        code = 2
    report = _base_report("certify", instance, code)
    report["verdicts"] = _verdict_block(outcome.decision)
    report["hull"] = _hull_block(instance, outcome.decision)
    report["certificate"] = _cert_block(outcome)
    _emit(report, args.out)
    if outcome.refused:
        print(f"certify {instance.label}: refused ({outcome.reason})")
    else:
        c = outcome.certificate
        print(f"certify {instance.label}: value {c.value_str} "
              f"(~ {c.value_float:.6f}), nonzero")
    return code


def _run_solve(args, command: str) -> int:
    instance = _apply_overrides(_get_instance(args.instance), args)
    if command == "density" and getattr(args, "target", None) is None:
        instance = _apply_overrides(instance, argparse.Namespace(
            seed=None, budget=None, grid=None,
            target=max(instance.config.target_count, 60)))
    outcome = solve(instance)
    report = _base_report(command, instance, outcome.exit_code)
    report["verdicts"] = _verdict_block(outcome.certify.decision)
    report["hull"] = _hull_block(instance, outcome.certify.decision)
    report["certificate"] = _cert_block(outcome.certify)
    if outcome.report is not None:
        report["solve"] = _solve_block(outcome.report, instance.config)
        report["timings"] = {k: float(v) for k, v in outcome.report.timings.items()}
        if command == "density":
            report["density"] = density_summary(instance, outcome.report)
        if args.csv:
            _write_csv(outcome.report, args.csv)
    _emit(report, args.out)
    if outcome.exit_code == 4:
        print(f"{command} {instance.label}: refused, uncertified "
              f"({outcome.certify.reason})")
    elif outcome.exit_code == 5:
        print(f"{command} {instance.label}: certificate nonzero but no point "
              f"passed verification within {instance.config.budget_cells} cells; "
              "reported as a defect")
    else:
        r = outcome.report
        print(f"{command} {instance.label}: {len(r.solutions)} verified point(s) "
              f"across {len(r.cells_with_solutions)} cell(s), "
              f"{r.cells_scanned} cell(s) scanned")
        if command == "density" and report["density"]:
            d = report["density"]
            if d["min_pairwise_distance"] is not None:
                print(f"  min pairwise distance {d['min_pairwise_distance']:.4f}, "
                      f"median nearest {d['median_nearest_distance']:.4f}")
    return outcome.exit_code


def cmd_solve(args) -> int:
    return _run_solve(args, "solve")


def cmd_density(args) -> int:
    return _run_solve(args, "density")


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    passed, results = run_selftest(verbose=True)
    if args.out:
        report = {
            "command": "selftest", "label": "selftest", "instance_hash": "",
            "assumptions": [], "exit_code": 0 if passed else 1,
            "verdicts": None, "hull": None, "chain": None, "certificate": None,
            "solve": None, "density": None, "timings": {},
            "selftest": {"passed": passed,
                         "results": [{"name": n, "ok": ok, "detail": d}
                                     for n, ok, d in results]},
        }
        _emit(report, args.out)
    return 0 if passed else 1


def cmd_list(args) -> int:
    for name in catalog_names():
        print(f"catalog:{name}")
    return 0


def _add_common(sp, solver_opts: bool):
    sp.add_argument("instance", help="instance file path or catalog:<name>")
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.add_argument("--seed", type=int, default=None, help="override the solver seed")
    if solver_opts:
        sp.add_argument("--budget", type=int, default=None,
                        help="cell budget for the scan")
        sp.add_argument("--grid", type=int, default=None,
                        help="grid density per cell")
        sp.add_argument("--target", type=int, default=None,
                        help="stop after this many verified points")
        sp.add_argument("--csv", default=None,
                        help="also write solutions as CSV (re_l,im_l,residual,cell)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eac",
        description="certify and solve exponential-algebraic intersections "
                    "on products of elliptic curves")
    p.add_argument("--version", action="version", version=f"eac {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("check", help="freeness and rotundity verdicts")
    _add_common(sp, solver_opts=False)
    sp.set_defaults(func=cmd_check)
    sp = sub.add_parser("hull", help="rational hull and hull chain")
    _add_common(sp, solver_opts=False)
    sp.set_defaults(func=cmd_hull)
    sp = sub.add_parser("certify", help="non-vanishing certificate")
    _add_common(sp, solver_opts=False)
    sp.set_defaults(func=cmd_certify)
    sp = sub.add_parser("solve", help="harvest verified intersection points")
    _add_common(sp, solver_opts=True)
    sp.set_defaults(func=cmd_solve)
    sp = sub.add_parser("density", help="larger harvest with spread statistics")
    _add_common(sp, solver_opts=True)
    sp.set_defaults(func=cmd_density)
    sp = sub.add_parser("selftest", help="run the built-in verification suite")
    sp.add_argument("--out", default=None, help="write the JSON report here")
    sp.set_defaults(func=cmd_selftest)
    sp = sub.add_parser("list", help="list built-in catalog instances")
    sp.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, BidegreeMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
