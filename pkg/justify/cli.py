#!/usr/bin/env python3
"""
Command-line front end.

Every command prints one JSON report on stdout and a one-line summary on
stderr. Exit codes: 0 pass/fit, 1 violation/reject, 2 input or usage error.

Examples:
  python -m justify.cli check data.json --axioms opt,iua --true-pref "a>b>d"
  python -m justify.cli fit justify/fixtures/example3.json
  python -m justify.cli fit --two-setting low.json high.json
  python -m justify.cli eu recover lotteries.json --anchor uniform
  python -m justify.cli sweep --theorem 1
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

import numpy as np

if __package__ is None and __name__ == "__main__":
    sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from justify import axioms, config, oracle, revealed, twosetting
from justify.axioms import Coverage, Violation, sort_violations
from justify.core import ChoiceDataset, DominanceRelation, WeakOrder, all_menus, menu_key
from justify.data import dataset as dataset_lib
from justify.errors import IdentificationError, InputError, JustifyError
from justify.eu import checks as eu_checks
from justify.eu import geometry, recover
from justify.eu.lottery import as_lottery, lottery_grid
from justify.eu.model import EUModel, eu_choose, normalize_utility
from justify.eu.model import model_from_dict as eu_model_from_dict
from justify.forward import choose, generate_dataset, justified_set, model_from_dict
from justify.reports import dump, envelope, error_report, write_report

logger = logging.getLogger("justify")

JSON = Dict[str, Any]
Result = Tuple[int, JSON]

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_INPUT = 2

KNOWN_PREFERENCE_AXIOMS = ("opt", "iua", "isa")
ALL_AXIOMS = KNOWN_PREFERENCE_AXIOMS + ("iea", "irea")


class UsageError(InputError):
    """Bad command line. Raised by the parser instead of exiting."""

    def __init__(self, prog: str, message: str) -> None:
        super().__init__(message)
        self.command = prog.split(" ", 1)[1] if " " in prog else prog


class ReportingParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(self.prog, message)


# ---------------------------------------------------------------------------
# Argument helpers
# ---------------------------------------------------------------------------


def _is_eu_document(raw: Any) -> bool:
    return isinstance(raw, dict) and "prizes" in raw


def _read_choice_data(path: str) -> ChoiceDataset:
    raw = dataset_lib.load_document(path)
    if _is_eu_document(raw):
        raise InputError(f"{path} is a lottery dataset; use the 'eu' commands")
    return dataset_lib.parse_dataset(raw)


def _pick(flag_value: Optional[Any], file_value: Optional[Any], what: str) -> Optional[Any]:
    if flag_value is not None and file_value is not None and flag_value != file_value:
        raise InputError(f"--{what} conflicts with the dataset's {what.replace('-', '_')}")
    return flag_value if flag_value is not None else file_value


def _resolve_known(data: ChoiceDataset, args: argparse.Namespace) -> Tuple[Optional[WeakOrder], Optional[DominanceRelation]]:
    pref_flag = dataset_lib.parse_tiers(args.true_pref) if getattr(args, "true_pref", None) else None
    dom_flag = dataset_lib.parse_dominance(args.dominance) if getattr(args, "dominance", None) else None
    pref = _pick(pref_flag, data.true_preference, "true-pref")
    dominance = _pick(dom_flag, data.dominance, "dominance")
    return pref, dominance


def _parse_vector(text: str, what: str) -> np.ndarray:
    try:
        return np.asarray([float(x) for x in text.split(",") if x.strip()], dtype=float)
    except ValueError:
        raise InputError(f"cannot parse {what}", [text]) from None


def _parse_anchor(text: str, size: int) -> np.ndarray:
    if text.strip().lower() == "uniform":
        return np.full(size, 1.0 / size)
    return as_lottery(_parse_vector(text, "anchor lottery"), size)


def _parse_lottery_menu(text: str, size: int) -> List[np.ndarray]:
    menu = [as_lottery(_parse_vector(chunk, "lottery"), size) for chunk in text.split(";") if chunk.strip()]
    if not menu:
        raise InputError("menu must list at least one lottery", [text])
    return menu


def _violation_summary(violations: Sequence[Violation]) -> str:
    if not violations:
        return "no violations"
    names = sorted({v.axiom for v in violations})
    return f"{len(violations)} violation(s): {', '.join(names)}"


def _vectors(rows: Any) -> List[List[float]]:
    return [[round(float(x), 12) for x in row] for row in rows]


# ---------------------------------------------------------------------------
# Finite-domain commands
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace, settings: config.Settings) -> Result:
    raw = dataset_lib.load_document(args.dataset)
    if _is_eu_document(raw):
        errors = eu_checks.validate_eu_dataset(raw)
        if not errors:
            try:
                eu_checks.eu_dataset_from_dict(raw)
            except InputError as exc:
                errors = exc.defects or [str(exc)]
        kind = "lottery"
    else:
        errors = dataset_lib.validate_dataset(dataset_lib.normalize_dataset(raw))
        kind = "choice"
    status = "valid" if not errors else "invalid"
    return (EXIT_OK if not errors else EXIT_INPUT), envelope("validate", status, {"kind": kind, "defects": errors})


def cmd_check(args: argparse.Namespace, settings: config.Settings) -> Result:
    names = [x.strip() for x in args.axioms.split(",") if x.strip()]
    unknown = sorted(set(names) - set(ALL_AXIOMS))
    if unknown or not names:
        raise InputError("unknown axioms", [f"{n}; choose from {', '.join(ALL_AXIOMS)}" for n in unknown] or ["none given"])
    data = _read_choice_data(args.dataset)
    pref, dominance = _resolve_known(data, args)

    violations: List[Violation] = []
    coverage: JSON = {}
    known = [n for n in names if n in KNOWN_PREFERENCE_AXIOMS]
    if known:
        if pref is None:
            raise InputError("axioms opt/iua/isa need a true preference (--true-pref or in the dataset)")
        if "isa" in known and dominance is None:
            raise InputError("ISA needs a dominance relation (--dominance or in the dataset)")
        for name, (found, cov) in axioms.check_known_preference(data, pref, dominance, known).items():
            violations += found
            coverage[name] = cov.to_dict()
    if "iea" in names:
        cov = Coverage()
        violations += revealed.check_iea(data, cov, settings.subset_cap)
        coverage["iea"] = cov.to_dict()
    if "irea" in names:
        if not args.high:
            raise InputError("IREA needs the high-pressure dataset (--high)")
        paired = twosetting.PairedDataset(data, _read_choice_data(args.high))
        cov = Coverage()
        violations += twosetting.check_irea(paired, cov, settings.subset_cap)
        coverage["irea"] = cov.to_dict()

    violations = sort_violations(violations)
    status = "pass" if not violations else "violation"
    report = envelope("check", status, {
        "axioms": names,
        "violations": [v.to_dict() for v in violations],
        "coverage": coverage,
    })
    print(f"check {','.join(names)}: {_violation_summary(violations)}", file=sys.stderr)
    return (EXIT_OK if not violations else EXIT_REJECT), report


def cmd_fit(args: argparse.Namespace, settings: config.Settings) -> Result:
    limit = settings.enumeration_limit
    if args.two_setting:
        if args.dataset:
            raise InputError("fit --two-setting takes the low and high datasets instead of a positional dataset")
        low, high = args.two_setting
        paired = twosetting.PairedDataset(_read_choice_data(low), _read_choice_data(high))
        result = twosetting.fit_two_setting(paired, limit, settings.subset_cap)
        print(f"two-setting fit: {result.status}; {_violation_summary(result.violations)}", file=sys.stderr)
        return (EXIT_OK if result.ok else EXIT_REJECT), envelope("fit", result.status, result.to_dict())
    if not args.dataset:
        raise InputError("fit needs a dataset (or --two-setting LOW HIGH)")

    data = _read_choice_data(args.dataset)
    if args.true_pref or args.dominance:
        pref, dominance = _resolve_known(data, args)
        result = revealed.fit_known_preference(data, pref, dominance, limit)
    else:
        result = revealed.fit(data, limit)
    print(f"fit: {result.status}; {_violation_summary(result.violations)}", file=sys.stderr)
    return (EXIT_OK if result.ok else EXIT_REJECT), envelope("fit", result.status, result.to_dict())


def cmd_predict(args: argparse.Namespace, settings: config.Settings) -> Result:
    model = model_from_dict(dataset_lib.load_document(args.model))
    menu = dataset_lib.parse_menu(args.menu)
    justified = justified_set(model, menu)
    chosen = choose(model, menu)
    print(f"predict: {','.join(menu_key(chosen))} from {','.join(menu_key(menu))}", file=sys.stderr)
    return EXIT_OK, envelope("predict", "ok", {
        "menu": list(menu_key(menu)),
        "justified": list(menu_key(justified)),
        "choice": list(menu_key(chosen)),
    })


def cmd_enumerate(args: argparse.Namespace, settings: config.Settings) -> Result:
    limit = settings.enumeration_limit
    data = _read_choice_data(args.data)
    if len(data.domain) > limit:
        raise InputError(f"domain of {len(data.domain)} items exceeds the enumeration limit {limit}")
    if args.true_pref or args.dominance or data.true_preference is not None:
        pref, dominance = _resolve_known(data, args)
        result = revealed.fit_known_preference(data, pref, dominance, limit)
    else:
        result = revealed.fit(data, limit)
    if not result.ok:
        print(f"enumerate: {result.status}; {_violation_summary(result.violations)}", file=sys.stderr)
        return EXIT_REJECT, envelope("enumerate", result.status, result.to_dict())
    model = result.model
    orders = [o.to_list() for o in model.justifications or ()]
    print(f"enumerate: {len(orders)} justification(s)", file=sys.stderr)
    return EXIT_OK, envelope("enumerate", "fit", {
        "true_preference": model.to_dict()["true_preference"],
        "justifications": orders,
        "count": len(orders),
    })


def _gen_menus(spec: str, domain: Sequence[str], rng: np.random.Generator) -> List[frozenset]:
    spec = spec.strip()
    if spec == "all":
        return all_menus(domain)
    if spec == "pairs":
        return all_menus(domain, 2, 2)
    if spec.startswith("random:"):
        try:
            count = int(spec.split(":", 1)[1])
        except ValueError:
            raise InputError("random menu spec must be random:<count>", [spec]) from None
        pool = all_menus(domain)
        count = max(0, min(count, len(pool)))
        picks = rng.choice(len(pool), size=count, replace=False)
        return [pool[i] for i in sorted(picks)]
    return [dataset_lib.parse_menu(chunk) for chunk in spec.split(";") if chunk.strip()]


def cmd_gen(args: argparse.Namespace, settings: config.Settings) -> Result:
    raw = dataset_lib.load_document(args.model)
    rng = np.random.default_rng(settings.seed)
    if _is_eu_document(raw):
        model = eu_model_from_dict(raw)
        grid = lottery_grid(model.space.size, settings.grid_step)
        anchor = _parse_anchor(args.anchor or "uniform", model.space.size)
        data = eu_checks.generate_eu_dataset(model, eu_checks.binary_menus_around(anchor, grid))
        print(f"gen: {len(data.observations)} binary lottery menus", file=sys.stderr)
        return EXIT_OK, data.to_dict()
    model = model_from_dict(raw)
    menus = _gen_menus(args.menus, sorted(model.domain), rng)
    data = generate_dataset(model, menus)
    print(f"gen: {len(data.observations)} menus", file=sys.stderr)
    return EXIT_OK, {**data.to_dict(), "seed": settings.seed}


SWEEP_KINDS = ("theorem1", "theorem4", "random", "revealed-exclusion", "round-trip", "two-setting", "subsets")


def cmd_sweep(args: argparse.Namespace, settings: config.Settings) -> Result:
    kind = args.kind or (f"theorem{args.theorem}" if args.theorem else None)
    if kind not in SWEEP_KINDS:
        raise InputError("choose a sweep with --theorem 1|4 or --kind", [f"one of {', '.join(SWEEP_KINDS)}"])
    if kind in ("theorem1", "theorem4") and args.n != 3:
        raise InputError("exhaustive theorem sweeps run on three-item domains (--n 3)")
    seed = settings.seed
    runners: Dict[str, Callable[[], oracle.SweepReport]] = {
        "theorem1": oracle.sweep_theorem1,
        "theorem4": oracle.sweep_theorem4,
        "random": lambda: oracle.sweep_random(args.n, args.count or 1000, seed),
        "revealed-exclusion": lambda: oracle.sweep_revealed_exclusion(args.n, args.count or 200, seed),
        "round-trip": lambda: oracle.sweep_round_trip(args.count or 100, seed),
        "two-setting": lambda: oracle.sweep_two_setting(args.count or 50, seed),
        "subsets": lambda: oracle.spot_check_subsets(args.count or 10000, seed, args.n),
    }
    report = runners[kind]()
    print(f"sweep {kind}: {report.agreements}/{report.instances_checked} agreements", file=sys.stderr)
    status = "pass" if report.ok else "counterexample"
    return (EXIT_OK if report.ok else EXIT_REJECT), envelope("sweep", status, report.to_dict())


# ---------------------------------------------------------------------------
# Lottery commands
# ---------------------------------------------------------------------------


def _read_eu_data(path: str) -> eu_checks.EUDataset:
    raw = dataset_lib.load_document(path)
    if not _is_eu_document(raw):
        raise InputError(f"{path} is not a lottery dataset (no 'prizes')")
    return eu_checks.eu_dataset_from_dict(raw)


def _utility(args: argparse.Namespace, data: eu_checks.EUDataset) -> Optional[np.ndarray]:
    flag = _parse_vector(args.true_utility, "utility") if getattr(args, "true_utility", None) else None
    if flag is not None and data.true_utility is not None:
        if not np.allclose(normalize_utility(flag), data.true_utility, atol=1e-9):
            raise InputError("--true-utility conflicts with the dataset's true_utility")
    return flag if flag is not None else data.true_utility


def _lottery_table(data: eu_checks.EUDataset) -> JSON:
    return {k: [round(float(x), 12) for x in v] for k, v in data.lotteries.items()}


def cmd_eu_check(args: argparse.Namespace, settings: config.Settings) -> Result:
    data = _read_eu_data(args.dataset)
    coverage = Coverage()
    violations = eu_checks.check_eu_axioms(data, _utility(args, data), coverage)
    print(f"eu check: {_violation_summary(violations)}", file=sys.stderr)
    report = envelope("eu check", "pass" if not violations else "violation", {
        "violations": [v.to_dict() for v in violations],
        "coverage": coverage.to_dict(),
        "lotteries": _lottery_table(data),
    })
    return (EXIT_OK if not violations else EXIT_REJECT), report


def cmd_eu_recover(args: argparse.Namespace, settings: config.Settings) -> Result:
    data = _read_eu_data(args.dataset)
    anchor = _parse_anchor(args.anchor, data.space.size)
    try:
        result = recover.recover_true_preference(data, anchor, settings.max_prizes)
    except IdentificationError as exc:
        print(f"eu recover: not identified ({exc})", file=sys.stderr)
        return EXIT_REJECT, envelope("eu recover", "unidentified", {"error": str(exc)})
    label = "unique direction" if result.unique else f"{len(result.candidates)} candidates (half-space data)"
    print(f"eu recover: {label}", file=sys.stderr)
    return EXIT_OK, envelope("eu recover", "identified" if result.unique else "family", result.to_dict())


def cmd_eu_fit(args: argparse.Namespace, settings: config.Settings) -> Result:
    data = _read_eu_data(args.dataset)
    anchor = _parse_anchor(args.anchor, data.space.size)
    utility = _utility(args, data)
    recovered = None
    if utility is None:
        recovered = recover.recover_true_preference(data, anchor, settings.max_prizes)
        if not recovered.unique:
            raise InputError("true utility is not identified from the data; pass --true-utility")
        utility = recovered.utility_direction
    sample = eu_checks.bsample_from_data(data, anchor, utility)
    vertices = geometry.construct_polytope(sample, utility, data.space, settings.max_prizes)
    model = EUModel(data.space, utility, tuple(vertices))
    mismatches = geometry.sample_mismatches(model, sample)
    print(f"eu fit: {len(model.vertices)} vertices, {len(mismatches)} mismatches", file=sys.stderr)
    report = envelope("eu fit", "fit" if not mismatches else "reject", {
        "model": model.to_dict(),
        "sample_counts": sample.counts(),
        "mismatches": [{"lottery": _vectors([q])[0], "observed": e.value, "predicted": g.value} for q, e, g in mismatches],
        "recovered": recovered.to_dict() if recovered is not None else None,
    })
    return (EXIT_OK if not mismatches else EXIT_REJECT), report


def _read_eu_model(path: str) -> EUModel:
    return eu_model_from_dict(dataset_lib.load_document(path))


def cmd_eu_compare(args: argparse.Namespace, settings: config.Settings) -> Result:
    first, second = _read_eu_model(args.model), _read_eu_model(args.other)
    anchor = _parse_anchor(args.anchor, first.space.size)
    result = geometry.compare_strictness(first, second, anchor, settings.epsilon, settings.max_prizes)
    print(f"eu compare: {result.relation}", file=sys.stderr)
    return EXIT_OK, envelope("eu compare", result.relation, result.to_dict())


def cmd_eu_predict(args: argparse.Namespace, settings: config.Settings) -> Result:
    model = _read_eu_model(args.model)
    menu = _parse_lottery_menu(args.menu, model.space.size)
    chosen = eu_choose(model, menu)
    print(f"eu predict: {len(chosen)} chosen of {len(menu)}", file=sys.stderr)
    return EXIT_OK, envelope("eu predict", "ok", {"menu": _vectors(menu), "choice": _vectors(chosen)})


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = ReportingParser(add_help=False)
    common.add_argument("--config", default=None, help="Settings file (YAML or JSON)")
    common.add_argument("--seed", type=int, default=None, help="Seed for stochastic commands")
    common.add_argument("--limit", type=int, default=None, help="Enumeration limit (overrides JUSTIFY_MAX_ENUM)")
    common.add_argument("--out", default=None, help="Also write the JSON report to this file")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    parser = ReportingParser(prog="justify", description="Fit and test justifiability models of choice")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="Validate a choice or lottery dataset")
    p.add_argument("dataset")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("check", parents=[common], help="Check axioms on a choice dataset")
    p.add_argument("dataset")
    p.add_argument("--axioms", default="opt,iua", help=f"Comma list from {','.join(ALL_AXIOMS)}")
    p.add_argument("--true-pref", default=None, help='True preference, e.g. "a>b~c>d"')
    p.add_argument("--dominance", default=None, help='Dominance pairs, e.g. "x>y,z>w"')
    p.add_argument("--high", default=None, help="High-pressure dataset (for irea)")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("fit", parents=[common], help="Fit a representation or reject with witnesses")
    p.add_argument("dataset", nargs="?")
    p.add_argument("--two-setting", nargs=2, metavar=("LOW", "HIGH"), default=None)
    p.add_argument("--true-pref", default=None)
    p.add_argument("--dominance", default=None)
    p.set_defaults(handler=cmd_fit)

    p = sub.add_parser("predict", parents=[common], help="Choice of a model from one menu")
    p.add_argument("--model", required=True)
    p.add_argument("--menu", required=True, help="Comma-separated items")
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("enumerate", parents=[common], help="List the justifications of the fitted model")
    p.add_argument("--data", required=True)
    p.add_argument("--true-pref", default=None)
    p.add_argument("--dominance", default=None)
    p.set_defaults(handler=cmd_enumerate)

    p = sub.add_parser("gen", parents=[common], help="Generate a dataset from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--menus", default="all", help='all | pairs | random:<k> | "a,b;a,b,c"')
    p.add_argument("--anchor", default=None, help="Anchor lottery for lottery models (default uniform)")
    p.set_defaults(handler=cmd_gen)

    p = sub.add_parser("sweep", parents=[common], help="Brute-force equivalence sweeps")
    p.add_argument("--theorem", choices=["1", "4"], default=None)
    p.add_argument("--kind", choices=SWEEP_KINDS, default=None)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--count", type=int, default=None)
    p.set_defaults(handler=cmd_sweep)

    eu = sub.add_parser("eu", help="Expected-utility analysis")
    eu_sub = eu.add_subparsers(dest="eu_command", required=True)

    p = eu_sub.add_parser("check", parents=[common], help="Check the lottery axioms")
    p.add_argument("dataset")
    p.add_argument("--true-utility", default=None)
    p.set_defaults(handler=cmd_eu_check)

    p = eu_sub.add_parser("fit", parents=[common], help="Construct the utility polytope at an anchor")
    p.add_argument("dataset")
    p.add_argument("--anchor", default="uniform")
    p.add_argument("--true-utility", default=None)
    p.set_defaults(handler=cmd_eu_fit)

    p = eu_sub.add_parser("recover", parents=[common], help="Identify the true utility at an anchor")
    p.add_argument("dataset")
    p.add_argument("--anchor", default="uniform")
    p.set_defaults(handler=cmd_eu_recover)

    p = eu_sub.add_parser("compare", parents=[common], help="Compare how strict two models are")
    p.add_argument("--model", required=True)
    p.add_argument("--other", required=True)
    p.add_argument("--anchor", default="uniform")
    p.set_defaults(handler=cmd_eu_compare)

    p = eu_sub.add_parser("predict", parents=[common], help="Choice of a lottery model from one menu")
    p.add_argument("--model", required=True)
    p.add_argument("--menu", required=True, help='Lotteries separated by ";", e.g. "0,1,0;0.7,0,0.3"')
    p.set_defaults(handler=cmd_eu_predict)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"{exc.command}: error: {exc}", file=sys.stderr)
        sys.stdout.write(dump(error_report(exc.command, "invalid command line", [str(exc)])))
        return EXIT_INPUT
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    command = args.command if args.command != "eu" else f"eu {args.eu_command}"
    try:
        settings = config.resolve(args.config, None, enumeration_limit=args.limit, seed=args.seed)
        code, report = args.handler(args, settings)
    except InputError as exc:
        print(f"{command}: {exc}", file=sys.stderr)
        code, report = EXIT_INPUT, error_report(command, str(exc.args[0]), exc.defects)
    except RuntimeError as exc:
        print(f"{command}: {exc}", file=sys.stderr)
        code, report = EXIT_INPUT, error_report(command, str(exc))
    except JustifyError as exc:
        logger.error("%s failed: %s", command, exc)
        code, report = EXIT_INPUT, error_report(command, str(exc))

    sys.stdout.write(dump(report))
    if args.out:
        write_report(args.out, report)
    return code


if __name__ == "__main__":
    sys.exit(main())
