"""Deciding a zero pattern from data that cannot identify the model.

The hidden plant has two states and one input.  We ask: is the (1,1)
entry of A zero, and the (2,1) entry of B zero?  The minimum plan has two
excitations, one fewer than the three needed to identify the model, yet
the answer it produces is guaranteed for every system consistent with the
data.
"""

from minexcite import (
    Dims,
    NotIdentifiable,
    Sparsity,
    SystemPair,
    design_minimum_input,
    excite,
    format_matrix,
    identify_sparsity,
    parse_matrix,
    recover_model,
)

pattern = Sparsity(zeros_a=frozenset({(1, 1)}), zeros_b=frozenset({(2, 1)}))
dims = Dims(2, 1)

plan = design_minimum_input(pattern, dims)
print("Designed plan (one column per excitation):")
print(f"  X- = [{format_matrix(plan.x_minus)}]")
print(f"  U- = [{format_matrix(plan.u_minus)}]\n")

hidden = SystemPair(parse_matrix("0, 1; 2, 1"), parse_matrix("1; 0"))
data = excite(hidden, plan)
print(f"Feedback from the (hidden) plant: X+ = [{format_matrix(data.x_plus)}]")

outcome = recover_model(data)
assert isinstance(outcome, NotIdentifiable)
print(
    f"Model recovery fails as expected: plan rank {outcome.stacked_rank}, "
    f"{outcome.deficit} short of {dims.total}."
)

report = identify_sparsity(data, pattern)
print(f"\nPattern verdict: {report.verdict.value}")
print(f"  mapping Q = [{format_matrix(report.q)}]")
for entry in report.checked:
    print(f"  entry ({entry.row}, {entry.col}) of [A, B] evaluates to {entry.value}")

# A plant violating the pattern produces a different verdict on the same plan.
violator = SystemPair(parse_matrix("1, 1; 2, 1"), parse_matrix("1; 0"))
report2 = identify_sparsity(excite(violator, plan), pattern)
print(f"\nA violating plant on the same plan: {report2.verdict.value}")
