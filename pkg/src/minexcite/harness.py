"""End-to-end scenario running and data-efficiency reporting.

A scenario holds a hidden system, a property of interest, and a plan:
either "designed", meaning the minimum excitation is synthesized, or an
explicit set of experiments.  Running a scenario excites the hidden
system one step per column (states are reset between excitations, never
continued along a trajectory), then applies the matching identifier.
Deficient explicit plans additionally get a certifying counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .adversary import CounterexamplePair, counterexample_for, distinct_consistent_pair
from .errors import DimensionMismatch, GainNotApplicable, NotSufficientlyRich
from .identify import (
    GainResult,
    NotIdentifiable,
    Verdict,
    gain_from_data,
    identify_controllability,
    identify_linear_structure,
    identify_sparsity,
    identify_stabilizability,
    recover_model,
)
from .properties import (
    Controllability,
    Dims,
    Identifiability,
    LinearStructure,
    PropertySpec,
    Sparsity,
    Stabilizability,
    SystemPair,
    minimum_subspace,
    validate_property,
)
from .ratmat import Mat
from .richness import Dataset, InputSection, design_minimum_input


@dataclass(frozen=True)
class Scenario:
    """One experiment description; `plan=None` requests a designed minimum input."""

    dims: Dims
    hidden: SystemPair
    prop: PropertySpec
    plan: Optional[InputSection] = None
    seed: int = 0

    def __post_init__(self):
        if self.hidden.dims != self.dims:
            raise DimensionMismatch("hidden system does not match the declared dimensions")
        if self.plan is not None and self.plan.dims != self.dims:
            raise DimensionMismatch("explicit plan does not match the declared dimensions")
        validate_property(self.prop, self.dims)


@dataclass
class RunReport:
    """Everything a scenario run produced.

    `outcome` is one of: has_property, lacks_property, identified,
    not_identifiable, not_sufficiently_rich.
    """

    dataset: Dataset
    outcome: str
    k_used: int
    k_model_based: int
    verdict: Optional[Verdict] = None
    q: Optional[Mat] = None
    recovered: Optional[SystemPair] = None
    gain: Optional[GainResult] = None
    counterexample: Optional[CounterexamplePair] = None
    model_pair: Optional[tuple] = None
    missing: tuple = ()


def excite(hidden: SystemPair, section: InputSection) -> Dataset:
    """One exact step per excitation column; no trajectory continuation."""
    if hidden.n != section.n or hidden.m != section.m:
        raise DimensionMismatch("system and plan dimensions do not match")
    x_plus = hidden.a @ section.x_minus + hidden.b @ section.u_minus
    return Dataset(section, x_plus)


def run(sc: Scenario) -> RunReport:
    section = sc.plan if sc.plan is not None else design_minimum_input(sc.prop, sc.dims)
    dataset = excite(sc.hidden, section)
    k_used = section.k
    k_full = sc.dims.total
    gain: Optional[GainResult] = None
    if sc.plan is not None:
        try:
            gain = gain_from_data(dataset)
        except GainNotApplicable:
            pass

    def report(outcome, **extra) -> RunReport:
        return RunReport(dataset, outcome, k_used, k_full, gain=gain, **extra)

    try:
        if isinstance(sc.prop, Identifiability):
            result = recover_model(dataset)
            if isinstance(result, NotIdentifiable):
                pair = distinct_consistent_pair(dataset)
                return report("not_identifiable", model_pair=pair)
            return report("identified", recovered=result)
        if isinstance(sc.prop, Stabilizability):
            verdict = identify_stabilizability(dataset)
            return report(verdict.value, verdict=verdict)
        if isinstance(sc.prop, Controllability):
            verdict = identify_controllability(dataset)
            return report(verdict.value, verdict=verdict)
        if isinstance(sc.prop, Sparsity):
            res = identify_sparsity(dataset, sc.prop)
            return report(res.verdict.value, verdict=res.verdict, q=res.q)
        if isinstance(sc.prop, LinearStructure):
            res = identify_linear_structure(dataset, sc.prop)
            return report(res.verdict.value, verdict=res.verdict, q=res.q)
        raise DimensionMismatch(f"no identifier for {sc.prop!r}")
    except NotSufficientlyRich as exc:
        pair = counterexample_for(section, sc.prop, sc.seed)
        return report("not_sufficiently_rich", counterexample=pair, missing=exc.missing)


@dataclass(frozen=True)
class EfficiencyRow:
    label: str
    n: int
    m: int
    k_minimum: int
    k_model_based: int
    savings: Fraction


def property_label(p: PropertySpec) -> str:
    if isinstance(p, Identifiability):
        return "identifiability"
    if isinstance(p, Stabilizability):
        return "stabilizability"
    if isinstance(p, Controllability):
        return "controllability"
    if isinstance(p, Sparsity):
        return f"sparsity({len(p.zeros_a) + len(p.zeros_b)} zeros)"
    return f"structure({len(p.constraints)} constraints, {p.mode.value})"


def report_efficiency(batch: Sequence[Scenario]) -> List[EfficiencyRow]:
    """Minimum excitation count against full-model excitation, per scenario."""
    rows = []
    for sc in batch:
        k = minimum_subspace(sc.prop, sc.dims).dim
        total = sc.dims.total
        rows.append(
            EfficiencyRow(
                property_label(sc.prop),
                sc.dims.n,
                sc.dims.m,
                k,
                total,
                Fraction(total - k, total),
            )
        )
    return rows


def efficiency_text(rows: Sequence[EfficiencyRow]) -> str:
    headers = ("property", "n", "m", "k_min", "n+m", "savings")
    table = [headers] + [
        (r.label, str(r.n), str(r.m), str(r.k_minimum), str(r.k_model_based), f"{float(r.savings):.3f}")
        for r in rows
    ]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in table]
    return "\n".join(lines)


def efficiency_csv(rows: Sequence[EfficiencyRow]) -> str:
    lines = ["property,n,m,k_min,n_plus_m,savings"]
    for r in rows:
        lines.append(f"{r.label},{r.n},{r.m},{r.k_minimum},{r.k_model_based},{float(r.savings)}")
    return "\n".join(lines)
