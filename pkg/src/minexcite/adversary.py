"""Certifying counterexamples for deficient excitation plans.

When a plan is not sufficiently rich for a property, two systems exist
that reproduce the exact same feedback data while exactly one has the
property; no amount of cleverness on such data can settle the question.
This module constructs such pairs explicitly, one recipe per property
family, and validates every pair against the exact membership oracle
before returning it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import InfeasibleSigns, InternalFault, SectionIsRich
from .properties import (
    Controllability,
    Leaf,
    LinearStructure,
    Mode,
    Or,
    PropertySpec,
    SetExpr,
    Sparsity,
    Stabilizability,
    SystemPair,
    build_constraint_matrix,
    expr_leaves,
    flat_chain_ops,
    has_property,
    sparsity_as_structure,
    validate_property,
    vec_inv,
)
from .ratmat import Mat, contains, image, kernel, solve_right
from .richness import Dataset, InputSection, stacked_image
from .identify import consistent_set_contains


@dataclass(frozen=True)
class Annihilator:
    """Nonzero direction orthogonal to every excitation column."""

    h: Mat  # (n+m) x 1

    def state_part(self, n: int) -> list:
        return [self.h[i, 0] for i in range(n)]

    def input_part(self, n: int) -> list:
        return [self.h[i, 0] for i in range(n, self.h.rows)]


@dataclass(frozen=True)
class CounterexamplePair:
    """Two systems sharing one dataset, exactly one with the property."""

    sys_with: SystemPair
    sys_without: SystemPair
    section: InputSection
    shared_feedback: Mat


def find_annihilator(section: InputSection) -> Optional[Annihilator]:
    """First kernel direction of the transposed plan, or None when full rank."""
    null = kernel(section.stacked().T)
    if null.cols == 0:
        return None
    return Annihilator(null.col(0))


def _verify_pair(pair: CounterexamplePair, p: PropertySpec) -> CounterexamplePair:
    data = Dataset(pair.section, pair.shared_feedback)
    if not consistent_set_contains(data, pair.sys_with):
        raise InternalFault("constructed system with the property is inconsistent")
    if not consistent_set_contains(data, pair.sys_without):
        raise InternalFault("constructed system without the property is inconsistent")
    if not has_property(pair.sys_with, p):
        raise InternalFault("constructed system fails to have the property")
    if has_property(pair.sys_without, p):
        raise InternalFault("constructed partner unexpectedly has the property")
    return pair


def _single_row(n: int, cols: int, row: int, entries: Sequence) -> Mat:
    cells = [[Fraction(0)] * cols for _ in range(n)]
    cells[row] = [Fraction(v) for v in entries]
    return Mat(cells)


def counterexample_stabilizability(section: InputSection) -> CounterexamplePair:
    """Stabilizable system and a consistent partner with an uncontrollable
    eigenvalue at 1, built along an annihilated direction.

    Raises SectionIsRich when the plan is persistently exciting.
    """
    ann = find_annihilator(section)
    if ann is None:
        raise SectionIsRich("the plan is persistently exciting; stabilizability is decidable")
    n, m = section.n, section.m
    hs = ann.state_part(n)
    hu = ann.input_part(n)
    if all(v == 0 for v in hs):
        # all annihilated weight sits on the input block
        a_with = _single_row(n, n, 0, [Fraction(1)] + [Fraction(0)] * (n - 1))
        b_with = _single_row(n, m, 0, hu)
        a_without = a_with
        b_without = Mat.zeros(n, m)
    else:
        l = next(i for i, v in enumerate(hs) if v != 0)
        scale = -1 / hs[l]
        a_row = [scale * v for v in hs]
        a_row[l] += 1
        a_with = _single_row(n, n, l, a_row)
        b_with = _single_row(n, m, l, [scale * v for v in hu])
        unit_row = [Fraction(0)] * n
        unit_row[l] = Fraction(1)
        a_without = _single_row(n, n, l, unit_row)
        b_without = Mat.zeros(n, m)
    feedback = a_with @ section.x_minus + b_with @ section.u_minus
    pair = CounterexamplePair(
        SystemPair(a_with, b_with), SystemPair(a_without, b_without), section, feedback
    )
    return _verify_pair(pair, Stabilizability())


def _swap_permutation(n: int, i: int, j: int) -> Mat:
    cells = [[Fraction(1) if (r == c and r not in (i, j)) else Fraction(0) for c in range(n)] for r in range(n)]
    cells[i][j] = Fraction(1)
    cells[j][i] = Fraction(1)
    if i == j:
        cells[i][i] = Fraction(1)
    return Mat(cells)


def counterexample_controllability(section: InputSection) -> CounterexamplePair:
    """Controllable system and a consistent uncontrollable partner.

    For a scalar state the pair is built from any annihilated direction
    with a nonzero input block against the zero system; otherwise a
    diagonal skeleton carries the annihilated direction in its first row
    and the partner simply drops that row's contribution.
    """
    n, m = section.n, section.m
    prop = Controllability()
    validate_property(prop, section.dims)
    if n == 1:
        null = kernel(section.stacked().T)
        h = None
        for j in range(null.cols):
            cand = null.col(j)
            if any(cand[i, 0] != 0 for i in range(1, 1 + m)):
                h = cand
                break
        if h is None:
            raise SectionIsRich("the plan already pins down the input-to-state map")
        a_with = Mat([[h[0, 0]]])
        b_with = Mat([[h[i, 0] for i in range(1, 1 + m)]])
        pair = CounterexamplePair(
            SystemPair(a_with, b_with),
            SystemPair(Mat.zeros(1, 1), Mat.zeros(1, m)),
            section,
            Mat.zeros(1, section.k),
        )
        return _verify_pair(pair, prop)

    ann = find_annihilator(section)
    if ann is None:
        raise SectionIsRich("the plan is persistently exciting; controllability is decidable")
    hs = ann.state_part(n)
    hu = ann.input_part(n)

    # arrange a nonzero second state coordinate by a symmetric swap
    perm = Mat.identity(n)
    if any(v != 0 for v in hs) and hs[1] == 0:
        first = next(i for i, v in enumerate(hs) if v != 0)
        perm = _swap_permutation(n, 1, first)
        hs = [sum(perm[i, j] * hs[j] for j in range(n)) for i in range(n)]

    ones = [Fraction(1)] * m
    if all(v == 0 for v in hs):
        diag = [Fraction(i) for i in range(1, n + 1)]
        first_a = [Fraction(0)] * n
        first_b = list(hu)
    elif hs[0] == 0:
        diag = [Fraction(1), Fraction(1)] + [Fraction(i) for i in range(2, n)]
        first_a = list(hs)
        first_b = list(hu)
    else:
        diag = [Fraction(i) for i in range(1, n + 1)]
        scale = 1 / hs[0]
        first_a = [scale * v for v in hs]
        first_b = [scale * v for v in hu]

    base_a = Mat.from_flat(n, n, [diag[i] if i == j else Fraction(0) for i in range(n) for j in range(n)])
    a_with = base_a + _single_row(n, n, 0, first_a)
    b_rows = [first_b] + [ones] * (n - 1)
    b_with = Mat(b_rows) if m else Mat.zeros(n, 0)
    b_without = Mat([[Fraction(0)] * m] + [ones] * (n - 1)) if m else Mat.zeros(n, 0)

    # undo the coordinate swap
    a_with = perm.T @ a_with @ perm
    b_with = perm.T @ b_with
    a_without = perm.T @ base_a @ perm
    b_without = perm.T @ b_without

    feedback = a_with @ section.x_minus + b_with @ section.u_minus
    pair = CounterexamplePair(
        SystemPair(a_with, b_with), SystemPair(a_without, b_without), section, feedback
    )
    return _verify_pair(pair, prop)


# -- sign selection for combined structures ---------------------------------

KEEP = "keep"
COMPLEMENT = "complement"


def algorithm1_signs(p: LinearStructure, c1: frozenset) -> tuple:
    """Signs for an unbracketed chain, scanned from the last constraint down.

    Returns one of KEEP or COMPLEMENT per constraint; kept constraints pin
    the reference system inside their value set, complemented ones outside.
    """
    ops = flat_chain_ops(p.expr)
    if ops is None:
        raise ValueError("the expression is not an unbracketed left-to-right chain")
    count = len(p.constraints)
    if not c1:
        raise InternalFault("the touched-constraint set cannot be empty")
    signs = [None] * count
    for i in range(count, 0, -1):
        before = ops[i - 2] if i >= 2 else None  # operator applied just before constraint i
        if i in c1 and i != 1:
            signs[i - 1] = KEEP
            fill = COMPLEMENT if before == "|" else KEEP
            for j in range(1, i):
                signs[j - 1] = fill
            break
        elif i not in c1:
            signs[i - 1] = COMPLEMENT if before == "|" else KEEP
        else:  # i == 1 and 1 in c1
            signs[0] = KEEP
    return tuple(signs)


def algorithm2_signs(expr: SetExpr, c1: frozenset) -> tuple:
    """Signs for an arbitrarily bracketed expression.

    Descends from the last-executed operator toward a touched constraint,
    fixing the discarded side at each step: complemented under a union,
    kept under an intersection.
    """
    if not c1:
        raise InternalFault("the touched-constraint set cannot be empty")
    total = len(expr_leaves(expr))
    signs = {}

    def assign_side(node: SetExpr, sign: str) -> None:
        for idx in expr_leaves(node):
            signs[idx] = sign

    node = expr
    while True:
        if isinstance(node, Leaf):
            if node.index not in c1:
                raise InternalFault("descent ended on an untouched constraint")
            signs[node.index] = KEEP
            break
        discard_sign = COMPLEMENT if isinstance(node, Or) else KEEP
        left_leaf_c1 = isinstance(node.left, Leaf) and node.left.index in c1
        right_leaf_c1 = isinstance(node.right, Leaf) and node.right.index in c1
        if left_leaf_c1 or right_leaf_c1:
            taken, other = (node.left, node.right) if left_leaf_c1 else (node.right, node.left)
            signs[taken.index] = KEEP
            assign_side(other, discard_sign)
            break
        left_has = any(i in c1 for i in expr_leaves(node.left))
        taken, other = (node.left, node.right) if left_has else (node.right, node.left)
        assign_side(other, discard_sign)
        node = taken
    return tuple(signs[i] for i in range(1, total + 1))


def counterexample_structure(
    section: InputSection, p: LinearStructure, seed: int = 0
) -> CounterexamplePair:
    """Property-split pair for a combined linear structure.

    Picks a constraint-matrix column the plan misses, strips its component
    inside the plan's span to get a direction invisible to the data, seats
    a reference system according to the sign selection, and perturbs it
    along the invisible direction far enough to break every touched
    constraint.  The perturbation scale for bracketed combinations uses a
    seeded generator so results are replayable.
    """
    dims = section.dims
    validate_property(p, dims)
    n = dims.n
    m_mat = build_constraint_matrix(p.constraints, dims)
    span = stacked_image(section)
    if contains(span, image(m_mat)):
        raise SectionIsRich("the plan spans the constraint directions; the structure is decidable")
    col_idx = next(
        j for j in range(m_mat.cols) if not span.contains_vector(m_mat.col(j))
    )
    l, j = col_idx // n, col_idx % n
    w = m_mat.col(col_idx)
    h = w - span.project(w)
    if h.is_zero():
        raise InternalFault("a missed column must leave a nonzero residual")

    touched_vectors = [vec_inv(c.h, n, dims.total) @ h for c in p.constraints]
    c1 = frozenset(i + 1 for i, v in enumerate(touched_vectors) if not v.is_zero())
    if (l + 1) not in c1:
        raise InternalFault("the missed column's constraint must be touched")

    ops = flat_chain_ops(p.expr)
    if ops is not None:
        signs = algorithm1_signs(p, c1)
    else:
        signs = algorithm2_signs(p.expr, c1)

    targets = [
        c.values.point_inside() if s == KEEP else c.values.point_outside()
        for c, s in zip(p.constraints, signs)
    ]
    hmat = Mat([list(c.h) for c in p.constraints])
    theta = solve_right(hmat, Mat.column(targets))
    if theta is None:
        raise InfeasibleSigns(
            "no system realizes the signed constraint targets; the constraint "
            "vectors are not independent enough for this combination"
        )
    ab0 = vec_inv([theta[i, 0] for i in range(theta.rows)], n, dims.total)
    a0 = ab0.take_cols(range(n))
    b0 = ab0.take_cols(range(n, dims.total))

    if p.mode is Mode.INTERSECTION:
        hw = touched_vectors[l][j, 0]
        scalar = (p.constraints[l].values.point_outside() - targets[l]) / hw
        perturbation = _single_row(n, dims.total, j, [scalar * h[i, 0] for i in range(dims.total)])
    else:
        rng = random.Random(seed)
        while True:
            g = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            if all(v == 0 for v in g):
                continue
            dots = []
            ok = True
            for i in sorted(idx - 1 for idx in c1):
                dot = sum((g[r] * touched_vectors[i][r, 0] for r in range(n)), Fraction(0))
                if dot == 0:
                    ok = False
                    break
                dots.append((i, dot))
            if ok:
                break
        alpha = Fraction(1)
        for i, dot in dots:
            bound = p.constraints[i].values.magnitude_bound()
            needed = (bound + abs(targets[i]) + 1) / abs(dot)
            alpha = max(alpha, 1 + needed)
        c_vec = Mat.column([alpha * v for v in g])
        perturbation = c_vec @ h.T

    ab1 = ab0 + perturbation
    a1 = ab1.take_cols(range(n))
    b1 = ab1.take_cols(range(n, dims.total))
    feedback = a0 @ section.x_minus + b0 @ section.u_minus
    pair = CounterexamplePair(SystemPair(a0, b0), SystemPair(a1, b1), section, feedback)
    return _verify_pair(pair, p)


def distinct_consistent_pair(d: Dataset) -> Tuple[SystemPair, SystemPair]:
    """Two different systems reproducing a rank-deficient dataset exactly.

    This certifies that the model cannot be identified from the data; it
    carries no property split.
    """
    from .identify import _any_consistent_model

    ann = find_annihilator(d.section)
    if ann is None:
        raise SectionIsRich("the plan is persistently exciting; the model is unique")
    base = _any_consistent_model(d)
    n, total = d.section.n, d.section.dims.total
    shift = _single_row(n, total, 0, [ann.h[i, 0] for i in range(total)])
    ab = base.ab() + shift
    other = SystemPair(ab.take_cols(range(n)), ab.take_cols(range(n, total)))
    for sys in (base, other):
        if not consistent_set_contains(d, sys):
            raise InternalFault("constructed consistent system fails to reproduce the data")
    if base == other:
        raise InternalFault("the two consistent systems must differ")
    return base, other


def counterexample_for(
    section: InputSection, p: PropertySpec, seed: int = 0
) -> CounterexamplePair:
    """Dispatch to the recipe matching the property family."""
    if isinstance(p, Stabilizability):
        return counterexample_stabilizability(section)
    if isinstance(p, Controllability):
        return counterexample_controllability(section)
    if isinstance(p, Sparsity):
        structure = sparsity_as_structure(p, section.dims)
        pair = counterexample_structure(section, structure, seed)
        return _verify_pair(pair, p)
    if isinstance(p, LinearStructure):
        return counterexample_structure(section, p, seed)
    raise ValueError(
        "identifiability admits no property-split pair; use distinct_consistent_pair"
    )
