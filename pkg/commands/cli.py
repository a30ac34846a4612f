"""Command-line surface.

Subcommands::

    build-ball   Cayley ball of a host presentation
    schreier     Schreier coset ball of a subgroup
    diagnose     full diagnostics pipeline for one instance
    cogrowth     closed-path counts and growth bounds of a subgroup of a free group
    separate     conjugacy separation: check | find-cyclic | construct
    export       run the pipeline and write JSON, CSV and DOT files
    show         tabulate a saved JSON report

Every subcommand accepts the shared flags (``--radius``, ``--n-max``, ``--seed``, ``--budget``,
``--format``, ``--out``, ``--config``, ``--log-level``, ...). Exit codes: 0 success, 2 failed
precondition or gate, 3 exhausted budget, 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
from pathlib import Path
from typing import List, Optional, Sequence

from tabulate import tabulate

from diagnostics.cogrowth import count_closed_paths, verify_cogrowth_bound
from groups.balls import cayley_ball
from groups.exceptions import AtlasError, PreconditionError
from groups.presentations import (
    Presentation,
    free_presentation,
    load_presentation,
    load_subgroup,
    surface_presentation,
)
from groups.words import Word, parse_word
from report.config import KERNEL_FAMILY, InstanceConfig, kernel_generators
from report.pipeline import run_pipeline
from report.stages import StageError, StageLog
from schreier.core import stallings_core, subgroup_index_info
from schreier.cosets import schreier_ball
from separation.conjugacy import (
    construct_separated_free,
    find_separated_cyclic,
    is_cyclic_conjugate_into,
    subgroups_conjugacy_separated,
)
from storage.export import (
    cogrowth_csv,
    dumps_canonical,
    export_dot,
    load_json,
    schreier_graph_for_dot,
    write_files,
    write_report,
)
from storage.log import set_global_level
from storage.logging_compat import get_logger

logger = get_logger(__name__)

FORMATS = ("json", "csv", "dot")


def _shared_flags() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--radius", type=int, help="ball radius R")
    shared.add_argument("--n-max", type=int, help="longest walk length")
    shared.add_argument("--seed", type=int, help="seed for sampled and Monte Carlo stages")
    shared.add_argument("--budget", type=int, help="vertex budget for ball construction")
    shared.add_argument("--format", choices=FORMATS, help="output format")
    shared.add_argument("--out", type=Path, help="output directory")
    shared.add_argument("--config", type=Path, help="instance config (JSON)")
    shared.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")
    shared.add_argument(
        "--mode",
        choices=("exhaustive", "greedy", "sampled"),
        help="Cheeger search mode, or sampled triangles for the δ estimate",
    )
    shared.add_argument("--max-subset-size", type=int, help="largest subset for set searches")
    shared.add_argument("--walks", type=int, help="Monte Carlo walks (0 disables)")

    host = shared.add_argument_group("instance")
    host.add_argument("--host", type=Path, help="presentation file (alphabet:/relator: lines)")
    host.add_argument("--genus", type=int, help="use the closed surface group of this genus")
    host.add_argument("--rank", type=int, help="use the free group of this rank (default 2)")
    host.add_argument("--subgroup", type=Path, help="subgroup file, one generator per line")
    host.add_argument("--gen", action="append", default=[], help="subgroup generator word")
    host.add_argument("--kernel", action="store_true", help="truncated kernel of a->1, b->0")
    return shared


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = argparse.ArgumentParser(
        prog="atlas",
        description="Schreier coset graph diagnostics for subgroups of free and "
        "small-cancellation groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build-ball", parents=[shared], help="Cayley ball of the host")
    sub.add_parser("schreier", parents=[shared], help="Schreier coset ball of H")
    sub.add_parser("diagnose", parents=[shared], help="full diagnostics pipeline")
    sub.add_parser("cogrowth", parents=[shared], help="cogrowth of H in a free host")
    sub.add_parser("export", parents=[shared], help="pipeline plus file exports")
    show = sub.add_parser("show", parents=[shared], help="tabulate a saved JSON report")
    show.add_argument("report", type=Path)

    separate = sub.add_parser("separate", help="conjugacy separation in free hosts")
    actions = separate.add_subparsers(dest="action", required=True)
    check = actions.add_parser("check", parents=[shared], help="test <c> or F against H")
    check.add_argument("--word", help="cyclic word c")
    check.add_argument("--other", action="append", default=[], help="generator of F")
    find = actions.add_parser("find-cyclic", parents=[shared], help="shortest separated <c>")
    find.add_argument("--length", type=int, default=8, help="longest candidate c")
    construct = actions.add_parser("construct", parents=[shared], help="separated free <x, y>")
    construct.add_argument("--length", type=int, default=8, help="longest candidate c")
    construct.add_argument("--powers", type=int, default=6, help="largest power m tried")
    return parser


def _host(args) -> Presentation:
    if args.host is not None:
        return load_presentation(args.host)
    if args.genus is not None:
        return surface_presentation(args.genus)
    return free_presentation(args.rank or 2)


def _generators(args, host: Presentation, radius: int) -> List[Word]:
    if args.kernel:
        return kernel_generators(host.alphabet, radius + 2)
    gens = load_subgroup(host.alphabet, args.subgroup) if args.subgroup else []
    gens += [parse_word(host.alphabet, g) for g in args.gen]
    return gens


def load_config(args) -> InstanceConfig:
    """The instance from ``--config`` (or the instance flags) with the shared flags on top."""
    overrides = dict(
        radius=args.radius,
        n_max=args.n_max,
        seed=args.seed,
        vertex_budget=args.budget,
        mode=None if args.mode == "sampled" else args.mode,
        delta_mode="sampled" if args.mode == "sampled" else None,
        max_subset_size=args.max_subset_size,
        walks=args.walks,
    )
    if args.config is not None:
        return InstanceConfig.from_file(args.config, **overrides)
    host = _host(args)
    gens = load_subgroup(host.alphabet, args.subgroup) if args.subgroup else []
    config = InstanceConfig(
        name=args.subgroup.stem if args.subgroup else "instance",
        alphabet=host.alphabet.positive_letters,
        relators=tuple(str(r) for r in host.relators),
        subgroup=tuple(str(g) for g in gens) + tuple(args.gen),
        subgroup_family=KERNEL_FAMILY if args.kernel else None,
    )
    return config.with_overrides(**overrides)


def _emit(args, files: dict, text: str) -> None:
    """Print ``text`` and write ``files`` when ``--out`` is given."""
    print(text)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        write_files(args.out, files)


def cmd_build_ball(args) -> int:
    host = _host(args)
    radius = args.radius if args.radius is not None else 3
    ball = cayley_ball(host, radius, budget=args.budget)
    ball.check_invariants()
    summary = {"radius": radius, **ball.summary()}
    rows = sorted(summary.items())
    files = {"ball.json": dumps_canonical(summary)}
    if args.format == "dot":
        files = {"ball.dot": export_dot(ball, "ball")}
    _emit(args, files, tabulate(rows, headers=["Cayley ball", ""], tablefmt="fancy_grid"))
    return 0


def cmd_schreier(args) -> int:
    host = _host(args)
    radius = args.radius if args.radius is not None else 6
    sb = schreier_ball(host, _generators(args, host, radius), radius, budget=args.budget)
    summary = sb.summary()
    files = {"schreier.json": dumps_canonical(summary)}
    if args.format == "dot":
        files = {"schreier.dot": export_dot(schreier_graph_for_dot(sb), "schreier")}
    rows = sorted((k, v) for k, v in summary.items())
    _emit(args, files, tabulate(rows, headers=["Schreier ball", ""], tablefmt="fancy_grid"))
    return 0


def _run(args) -> "tuple":
    stages = StageLog()
    report = run_pipeline(load_config(args), stages)
    stages.log_summary()
    return report, stages


def cmd_diagnose(args) -> int:
    report, _ = _run(args)
    if args.out is not None:
        write_report(report, args.out, args.format or "json")
    rows = [
        ["rho_hat", f"{report.spectral.rho_hat:.6f}"],
        ["best |dS|/|S|", str(report.best_ratio)],
        ["doubling", report.doubling.verdict],
        ["verdict", report.verdict],
    ]
    if report.cogrowth_bound is not None:
        rows.insert(2, ["cogrowth bound", "PASS" if report.cogrowth_bound.passed else "FAIL"])
    print(tabulate(rows, headers=[report.config.name, ""], tablefmt="fancy_grid"))
    return 0


def cmd_export(args) -> int:
    report, _ = _run(args)
    out = args.out or Path("out")
    for fmt in [args.format] if args.format else list(FORMATS):
        write_report(report, out, fmt)
    return 0


def _free_host(args) -> Presentation:
    host = _host(args)
    if not host.is_free:
        raise PreconditionError("this command needs a free host")
    return host


def cmd_cogrowth(args) -> int:
    host = _free_host(args)
    radius = args.radius if args.radius is not None else 12
    n_max = args.n_max if args.n_max is not None else 2 * radius
    sb = schreier_ball(host, _generators(args, host, radius), radius, budget=args.budget)
    core = sb.core
    series = count_closed_paths(sb, n_max)
    data = {"alpha_hat": series.alpha_hat, "beta_hat": series.beta_hat, "a": series.a, "b": series.b}
    if core.rank > 0 and not subgroup_index_info(core).finite:
        data["bound"] = verify_cogrowth_bound(core, n_max=n_max, ball=sb).to_dict()
    files = {"cogrowth.json": dumps_canonical(data), "cogrowth.csv": cogrowth_csv(series)}
    _emit(args, files, dumps_canonical(data))
    return 0


def cmd_separate(args) -> int:
    host = _free_host(args)
    core = stallings_core(host.alphabet, _generators(args, host, args.radius or 0))
    if args.action == "check":
        if args.word:
            cert = is_cyclic_conjugate_into(core, parse_word(host.alphabet, args.word))
        elif args.other:
            other = stallings_core(host.alphabet, [parse_word(host.alphabet, g) for g in args.other])
            cert = subgroups_conjugacy_separated(core, other)
        else:
            raise PreconditionError("give --word or at least one --other generator")
        data = cert.to_dict()
    elif args.action == "find-cyclic":
        data = {"c": str(find_separated_cyclic(core, args.length))}
    else:
        data = construct_separated_free(core, args.powers, search_length=args.length).to_dict()
    _emit(args, {f"separate_{args.action}.json": dumps_canonical(data)}, dumps_canonical(data))
    return 0


def cmd_show(args) -> int:
    data = load_json(args.report)
    amen = data.get("amenability", {})
    spectral = amen.get("spectral", {})
    cheeger = amen.get("cheeger", {})
    ratio = cheeger.get("best_ratio")
    if isinstance(ratio, dict):
        ratio = f"{ratio['num']}/{ratio['den']}"
    bound = (data.get("cogrowth") or {}).get("bound") or {}
    rows = [
        ["instance", data.get("instance", {}).get("config", {}).get("name")],
        ["schreier mode", data.get("schreier", {}).get("mode")],
        ["rho_hat", spectral.get("rho_hat")],
        ["best Cheeger ratio", ratio],
        ["doubling", amen.get("doubling", {}).get("verdict")],
        ["cogrowth bound", bound.get("bound", "n/a")],
        ["verdict", data.get("verdict")],
    ]
    for note in data.get("notes", []):
        rows.append(["note", note])
    print(tabulate(rows, tablefmt="fancy_grid"))
    return 0


HANDLERS = {
    "build-ball": cmd_build_ball,
    "schreier": cmd_schreier,
    "diagnose": cmd_diagnose,
    "cogrowth": cmd_cogrowth,
    "separate": cmd_separate,
    "export": cmd_export,
    "show": cmd_show,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_global_level(args.log_level.upper())
    try:
        return HANDLERS[args.command](args)
    except StageError as exc:
        logger.error(f"{exc.module}/{exc.stage} failed: {exc.cause}")
        return exc.exit_code
    except AtlasError as exc:
        logger.error(f"{args.command} failed: {exc}")
        return exc.exit_code
    except OSError as exc:
        logger.error(f"{args.command} failed: {exc}")
        return 2
