"""How many experiments does a question about an unknown system really need?

An experiment here is one excitation: place the system at a chosen state,
apply a chosen input, record the next state.  Identifying the full model
(A, B) of an n-state, m-input system needs n+m such excitations.  Many
weaker questions need far fewer, and the minimum is exactly the dimension
of a question-dependent subspace of R^(n+m).
"""

from minexcite import (
    Controllability,
    Dims,
    Identifiability,
    Sparsity,
    Stabilizability,
    design_minimum_input,
    format_matrix,
    minimum_subspace,
)

dims = Dims(n=4, m=2)
print(f"System size: {dims.n} states, {dims.m} inputs, so {dims.total} experiments")
print("identify the full model.\n")

questions = [
    ("full model", Identifiability()),
    ("stabilizability", Stabilizability()),
    ("controllability", Controllability()),
    ("is the (1,3) coupling absent?", Sparsity(frozenset({(1, 3)}), frozenset())),
    (
        "are rows 1 and 2 decoupled from state 4 and input 1?",
        Sparsity(frozenset({(1, 4), (2, 4)}), frozenset({(1, 1), (2, 1)})),
    ),
]

for label, prop in questions:
    subspace = minimum_subspace(prop, dims)
    section = design_minimum_input(prop, dims)
    print(f"{label}: {subspace.dim} excitation(s)")
    print(f"  states X- = [{format_matrix(section.x_minus)}]")
    print(f"  inputs U- = [{format_matrix(section.u_minus)}]")

print(
    "\nStabilizability and controllability cost as much as the full model;"
    "\nstructural questions can be dramatically cheaper.  A single coupling"
    "\nquestion takes one experiment regardless of the system size."
)

# For a scalar state the controllability question gets cheaper: only the
# input directions matter.
scalar = Dims(n=1, m=3)
print(
    f"\nScalar state, {scalar.m} inputs: controllability needs "
    f"{minimum_subspace(Controllability(), scalar).dim} excitations, "
    f"the model needs {scalar.total}."
)
