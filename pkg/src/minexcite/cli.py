"""Command line front end.

Verbs: design, check, identify, recover, gain, counterexample, simulate,
bench.  Exit statuses: 0 when a verdict or artifact was produced, 2 when
the excitation plan is not sufficiently rich, 3 for malformed or
inapplicable input, 4 for an internal invariant failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from . import specio
from .adversary import counterexample_for, distinct_consistent_pair
from .errors import (
    DimensionMismatch,
    GainNotApplicable,
    InconsistentDataset,
    InfeasibleSigns,
    InternalFault,
    NotSufficientlyRich,
    SectionIsRich,
    SpecValidationError,
)
from .harness import (
    efficiency_csv,
    efficiency_text,
    property_label,
    report_efficiency,
    run,
)
from .identify import (
    NotIdentifiable,
    consistent_set_contains,
    gain_from_data,
    identify_controllability,
    identify_linear_structure,
    identify_sparsity,
    identify_stabilizability,
    recover_model,
)
from .properties import (
    Controllability,
    Identifiability,
    has_property,
    LinearStructure,
    Sparsity,
    Stabilizability,
)
from .ratmat import EIG_MARGIN, Mat, format_matrix, format_rational
from .richness import Dataset, design_minimum_input, is_sufficiently_rich, missing_directions

EXIT_OK = 0
EXIT_NOT_RICH = 2
EXIT_BAD_INPUT = 3
EXIT_INTERNAL = 4


def _emit(pairs, fmt: str) -> None:
    if fmt == "csv":
        print(",".join(str(k) for k, _ in pairs))
        print(",".join(str(v) for _, v in pairs))
    else:
        width = max(len(str(k)) for k, _ in pairs)
        for k, v in pairs:
            print(f"{str(k).ljust(width)}  {v}")


def _cmd_design(args) -> int:
    prop, dims = specio.load_property(args.property)
    section = design_minimum_input(prop, dims)
    text = specio.dump_input_section(section)
    if args.out:
        Path(args.out).write_text(text)
        if args.verbose:
            print(f"wrote {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_check(args) -> int:
    prop, dims = specio.load_property(args.property)
    section = specio.load_input_section(args.input)
    if section.dims != dims:
        raise SpecValidationError("plan dimensions disagree with the property document")
    rich = is_sufficiently_rich(section, prop)
    rows = [("property", property_label(prop)), ("k", section.k), ("sufficiently_rich", rich)]
    if not rich and args.verbose:
        for i, col in enumerate(missing_directions(section, prop)):
            rows.append((f"missing_{i + 1}", format_matrix(col.T)))
    _emit(rows, args.format)
    return EXIT_OK if rich else EXIT_NOT_RICH


def _cmd_identify(args) -> int:
    prop, dims = specio.load_property(args.property)
    data = specio.load_dataset(args.data)
    if data.section.dims != dims:
        raise SpecValidationError("dataset dimensions disagree with the property document")
    rows = [("property", property_label(prop))]
    if isinstance(prop, Sparsity):
        res = identify_sparsity(data, prop)
        rows.append(("verdict", res.verdict.value))
        if args.verbose:
            rows.append(("Q", format_matrix(res.q)))
            for e in res.checked:
                rows.append((f"entry_{e.row}_{e.col}", format_rational(e.value)))
    elif isinstance(prop, LinearStructure):
        res = identify_linear_structure(data, prop)
        rows.append(("verdict", res.verdict.value))
        if args.verbose:
            rows.append(("Q", format_matrix(res.q)))
            for i, (v, ok) in enumerate(zip(res.values, res.satisfied), start=1):
                rows.append((f"constraint_{i}", f"{format_rational(v)} ({'in' if ok else 'out'})"))
    elif isinstance(prop, Stabilizability):
        rows.append(("verdict", identify_stabilizability(data).value))
    elif isinstance(prop, Controllability):
        rows.append(("verdict", identify_controllability(data).value))
    elif isinstance(prop, Identifiability):
        result = recover_model(data)
        if isinstance(result, NotIdentifiable):
            rows.append(("verdict", "not_identifiable"))
            rows.append(("rank", result.stacked_rank))
            rows.append(("deficit", result.deficit))
            _emit(rows, args.format)
            return EXIT_NOT_RICH
        rows.append(("verdict", "identified"))
        rows.append(("A", format_matrix(result.a)))
        rows.append(("B", format_matrix(result.b)))
    _emit(rows, args.format)
    return EXIT_OK


def _cmd_recover(args) -> int:
    data = specio.load_dataset(args.data)
    result = recover_model(data)
    if isinstance(result, NotIdentifiable):
        _emit(
            [("verdict", "not_identifiable"), ("rank", result.stacked_rank), ("deficit", result.deficit)],
            args.format,
        )
        return EXIT_NOT_RICH
    _emit([("verdict", "identified"), ("A", format_matrix(result.a)), ("B", format_matrix(result.b))], args.format)
    return EXIT_OK


def _cmd_gain(args) -> int:
    data = specio.load_dataset(args.data)
    res = gain_from_data(data)
    stabilizing = res.radius < 1.0 - EIG_MARGIN
    rows = [
        ("K", format_matrix(res.gain)),
        ("closed_loop", format_matrix(res.closed_loop)),
        ("radius", f"{res.radius:.12g}"),
        ("stabilizing", stabilizing),
    ]
    if res.marginal:
        rows.append(("marginal", True))
    _emit(rows, args.format)
    return EXIT_OK


def _cmd_counterexample(args) -> int:
    prop, dims = specio.load_property(args.property)
    section = specio.load_input_section(args.input)
    if section.dims != dims:
        raise SpecValidationError("plan dimensions disagree with the property document")
    try:
        if isinstance(prop, Identifiability):
            # two distinct systems sharing the feedback of the zero system
            dataset = Dataset(section, Mat.zeros(dims.n, section.k))
            first, second = distinct_consistent_pair(dataset)
            _emit(
                [
                    ("verdict", "not_identifiable"),
                    ("system_1_A", format_matrix(first.a)),
                    ("system_1_B", format_matrix(first.b)),
                    ("system_2_A", format_matrix(second.a)),
                    ("system_2_B", format_matrix(second.b)),
                    ("shared_Xp", format_matrix(dataset.x_plus)),
                ],
                args.format,
            )
            return EXIT_OK
        pair = counterexample_for(section, prop, args.seed)
    except SectionIsRich as exc:
        _emit([("verdict", "section_is_rich"), ("detail", exc)], args.format)
        return EXIT_OK
    rows = [
        ("verdict", "counterexample"),
        ("seed", args.seed),
        ("with_A", format_matrix(pair.sys_with.a)),
        ("with_B", format_matrix(pair.sys_with.b)),
        ("without_A", format_matrix(pair.sys_without.a)),
        ("without_B", format_matrix(pair.sys_without.b)),
        ("shared_Xp", format_matrix(pair.shared_feedback)),
    ]
    if args.verbose:
        shared = Dataset(pair.section, pair.shared_feedback)
        rows += [
            ("with_consistent", consistent_set_contains(shared, pair.sys_with)),
            ("without_consistent", consistent_set_contains(shared, pair.sys_without)),
            ("with_has_property", has_property(pair.sys_with, prop)),
            ("without_has_property", has_property(pair.sys_without, prop)),
        ]
    _emit(rows, args.format)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    sc = specio.load_scenario(args.scenario)
    report = run(sc)
    rows = [
        ("property", property_label(sc.prop)),
        ("outcome", report.outcome),
        ("k_used", report.k_used),
        ("k_model_based", report.k_model_based),
    ]
    if report.recovered is not None:
        rows.append(("A", format_matrix(report.recovered.a)))
        rows.append(("B", format_matrix(report.recovered.b)))
    if args.verbose and report.q is not None:
        rows.append(("Q", format_matrix(report.q)))
    if report.counterexample is not None:
        pair = report.counterexample
        rows += [
            ("with_A", format_matrix(pair.sys_with.a)),
            ("with_B", format_matrix(pair.sys_with.b)),
            ("without_A", format_matrix(pair.sys_without.a)),
            ("without_B", format_matrix(pair.sys_without.b)),
        ]
    _emit(rows, args.format)
    return EXIT_NOT_RICH if report.outcome in ("not_sufficiently_rich", "not_identifiable") else EXIT_OK


def _cmd_bench(args) -> int:
    scenarios = [specio.load_scenario(path) for path in args.scenarios]
    rows = report_efficiency(scenarios)
    print(efficiency_csv(rows) if args.format == "csv" else efficiency_text(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minexcite",
        description="Minimum excitation design and direct property identification "
        "for unknown discrete linear systems.",
    )
    parser.add_argument("--format", choices=("text", "csv"), default="text")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="synthesize the minimum excitation plan")
    p.add_argument("--property", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("check", help="test a plan for sufficient richness")
    p.add_argument("--property", required=True)
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("identify", help="decide a property from a dataset")
    p.add_argument("--property", required=True)
    p.add_argument("--data", required=True)
    p.set_defaults(func=_cmd_identify)

    p = sub.add_parser("recover", help="recover the model from persistently exciting data")
    p.add_argument("--data", required=True)
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser("gain", help="read a feedback gain off square state data")
    p.add_argument("--data", required=True)
    p.set_defaults(func=_cmd_gain)

    p = sub.add_parser("counterexample", help="certify that a plan is insufficient")
    p.add_argument("--property", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_counterexample)

    p = sub.add_parser("simulate", help="run a scenario end to end")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("bench", help="data-efficiency table for scenario files")
    p.add_argument("scenarios", nargs="+")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotSufficientlyRich as exc:
        print(f"not sufficiently rich: {exc}", file=sys.stderr)
        return EXIT_NOT_RICH
    except (SpecValidationError, DimensionMismatch, GainNotApplicable, InconsistentDataset) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except FileNotFoundError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except yaml.YAMLError as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (InternalFault, InfeasibleSigns) as exc:
        print(f"internal fault: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
