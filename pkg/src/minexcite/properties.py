"""Property descriptions and their minimum excitation subspaces.

A property is a subset of the linear systems (A, B) with A of size n x n
and B of size n x m.  The catalog covers parameter identifiability,
stabilizability, controllability, sparsity patterns of [A, B], and
linearly constrained structures combined with intersections and unions.

Each property determines the smallest subspace of R^(n+m) that a set of
one-step excitations must span before the property can be decided from
input and feedback data alone; `minimum_subspace` computes it.
`has_property` is the ground-truth membership oracle used by tests and by
counterexample validation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import DimensionMismatch, SpecValidationError
from .ratmat import (
    EIG_MARGIN,
    Mat,
    Subspace,
    as_rational,
    format_rational,
    image,
    numeric_rank,
    rank,
)

import numpy as np


@dataclass(frozen=True)
class Dims:
    """State and input dimensions.

    m = 0 is allowed so that autonomous systems (no input channel) can be
    described; the input block of every stacked object is then empty.
    """

    n: int
    m: int

    def __post_init__(self):
        if self.n < 1:
            raise SpecValidationError("state dimension must be at least 1")
        if self.m < 0:
            raise SpecValidationError("input dimension must be nonnegative")

    @property
    def total(self) -> int:
        return self.n + self.m


@dataclass(frozen=True)
class SystemPair:
    """A concrete candidate model (A, B)."""

    a: Mat
    b: Mat

    def __post_init__(self):
        if self.a.rows != self.a.cols:
            raise DimensionMismatch("A must be square")
        if self.b.rows != self.a.rows:
            raise DimensionMismatch("B must have as many rows as A")

    @property
    def n(self) -> int:
        return self.a.rows

    @property
    def m(self) -> int:
        return self.b.cols

    @property
    def dims(self) -> Dims:
        return Dims(self.n, self.m)

    def ab(self) -> Mat:
        """The n x (n+m) block [A, B]."""
        return Mat.hstack([self.a, self.b])


# -- value sets ----------------------------------------------------------

@dataclass(frozen=True)
class BoundedSet:
    """Finite union of closed rational intervals, sorted and disjoint.

    Points are intervals with equal endpoints.  Being a finite union of
    closed bounded intervals, the set is always bounded, non-empty, and a
    proper subset of the reals, and a point outside it is computable.
    """

    pieces: tuple

    def __post_init__(self):
        if not self.pieces:
            raise SpecValidationError("value set must be non-empty")
        prev_hi = None
        for lo, hi in self.pieces:
            if lo > hi:
                raise SpecValidationError(f"interval [{lo}, {hi}] is empty")
            if prev_hi is not None and lo <= prev_hi:
                raise SpecValidationError("intervals must be sorted and disjoint")
            prev_hi = hi

    @classmethod
    def from_pairs(cls, pairs: Sequence) -> "BoundedSet":
        """Normalize arbitrary (lo, hi) pairs: sort and merge overlaps."""
        items = sorted((as_rational(lo), as_rational(hi)) for lo, hi in pairs)
        merged = []
        for lo, hi in items:
            if lo > hi:
                raise SpecValidationError(f"interval [{lo}, {hi}] is empty")
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return cls(tuple(merged))

    @classmethod
    def singleton(cls, value) -> "BoundedSet":
        v = as_rational(value)
        return cls(((v, v),))

    def contains(self, x: Fraction) -> bool:
        return any(lo <= x <= hi for lo, hi in self.pieces)

    def point_inside(self) -> Fraction:
        """Fixed representative: midpoint of the first interval."""
        lo, hi = self.pieces[0]
        return (lo + hi) / 2

    def point_outside(self) -> Fraction:
        """Fixed point not in the set: one past the largest endpoint."""
        return max(hi for _, hi in self.pieces) + 1

    def magnitude_bound(self) -> Fraction:
        """A rational B with the set contained in [-B, B]."""
        return max(max(abs(lo), abs(hi)) for lo, hi in self.pieces)

    def __str__(self) -> str:
        return " u ".join(f"[{format_rational(lo)}, {format_rational(hi)}]" for lo, hi in self.pieces)


@dataclass(frozen=True)
class LinearConstraint:
    """Requirement that h . vec([A, B]) lies in a bounded value set.

    `h` has length n*(n+m) and indexes vec([A, B]) column-major: the first
    n entries weigh column 1 of [A, B], the next n weigh column 2, and so
    on.
    """

    h: tuple
    values: BoundedSet

    def __post_init__(self):
        object.__setattr__(self, "h", tuple(as_rational(v) for v in self.h))
        if all(v == 0 for v in self.h):
            raise SpecValidationError("constraint vector must be nonzero")


# -- and/or expression trees ----------------------------------------------

class SetExpr:
    """Node of an and/or combination over constraint indices (1-based)."""

    __slots__ = ()


@dataclass(frozen=True)
class Leaf(SetExpr):
    index: int


@dataclass(frozen=True)
class And(SetExpr):
    left: SetExpr
    right: SetExpr


@dataclass(frozen=True)
class Or(SetExpr):
    left: SetExpr
    right: SetExpr


def expr_leaves(expr: SetExpr) -> list:
    """Leaf indices in left-to-right order."""
    if isinstance(expr, Leaf):
        return [expr.index]
    return expr_leaves(expr.left) + expr_leaves(expr.right)


def evaluate_expr(expr: SetExpr, truth: Sequence[bool]) -> bool:
    """Evaluate with truth[i-1] giving the i-th constraint's verdict."""
    if isinstance(expr, Leaf):
        return truth[expr.index - 1]
    if isinstance(expr, And):
        return evaluate_expr(expr.left, truth) and evaluate_expr(expr.right, truth)
    return evaluate_expr(expr.left, truth) or evaluate_expr(expr.right, truth)


def chain_expr(count: int, ops: Sequence[str]) -> SetExpr:
    """Left-associated chain 1 op[0] 2 op[1] 3 ... over `count` leaves."""
    if len(ops) != count - 1:
        raise SpecValidationError("need one operator between consecutive constraints")
    node: SetExpr = Leaf(1)
    for i, op in enumerate(ops, start=2):
        node = And(node, Leaf(i)) if op == "&" else Or(node, Leaf(i))
    return node


def flat_chain_ops(expr: SetExpr) -> Optional[list]:
    """Operators of a left-associated chain over leaves 1..count, else None.

    The i-th returned operator ('&' or '|') is the one applied just before
    constraint i+1 when the expression is read left to right without
    brackets.
    """
    ops = []
    node = expr
    while not isinstance(node, Leaf):
        if not isinstance(node.right, Leaf):
            return None
        ops.append("&" if isinstance(node, And) else "|")
        node = node.left
    ops.reverse()
    if expr_leaves(expr) != list(range(1, len(ops) + 2)):
        return None
    return ops


def parse_expr(text: str) -> SetExpr:
    """Parse `1 & (2 | 3)` style expressions over 1-based constraint indices.

    `&` and `|` have equal precedence and associate to the left, matching
    the unbracketed chain form; use parentheses to change the order.
    """
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "&|()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        else:
            raise SpecValidationError(f"unexpected character {ch!r} in expression")
    pos = 0

    def atom() -> SetExpr:
        nonlocal pos
        if pos >= len(tokens):
            raise SpecValidationError("expression ended unexpectedly")
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            node = chain()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise SpecValidationError("missing closing parenthesis")
            pos += 1
            return node
        if isinstance(tok, int):
            pos += 1
            return Leaf(tok)
        raise SpecValidationError(f"unexpected token {tok!r}")

    def chain() -> SetExpr:
        nonlocal pos
        node = atom()
        while pos < len(tokens) and tokens[pos] in ("&", "|"):
            op = tokens[pos]
            pos += 1
            rhs = atom()
            node = And(node, rhs) if op == "&" else Or(node, rhs)
        return node

    result = chain()
    if pos != len(tokens):
        raise SpecValidationError("trailing tokens after expression")
    return result


def format_expr(expr: SetExpr) -> str:
    def fmt(node: SetExpr) -> str:
        if isinstance(node, Leaf):
            return str(node.index)
        op = "&" if isinstance(node, And) else "|"
        left = fmt(node.left)
        right = fmt(node.right)
        if not isinstance(node.left, Leaf):
            left = f"({left})"
        if not isinstance(node.right, Leaf):
            right = f"({right})"
        return f"{left} {op} {right}"

    return fmt(expr)


# -- the property catalog --------------------------------------------------

class Mode(Enum):
    INTERSECTION = "intersection"
    EXPRESSION = "expression"


@dataclass(frozen=True)
class Identifiability:
    """The full model (A, B) itself."""


@dataclass(frozen=True)
class Stabilizability:
    """Existence of K with all eigenvalues of A + BK inside the unit circle."""


@dataclass(frozen=True)
class Controllability:
    """Full rank of the reachability matrix [B, AB, ..., A^(n-1) B]."""


@dataclass(frozen=True)
class Sparsity:
    """Zero patterns: positions (row, col), 1-based, that must vanish.

    `zeros_a` indexes entries of A, `zeros_b` entries of B.
    """

    zeros_a: frozenset
    zeros_b: frozenset

    def __post_init__(self):
        object.__setattr__(self, "zeros_a", frozenset((int(r), int(c)) for r, c in self.zeros_a))
        object.__setattr__(self, "zeros_b", frozenset((int(r), int(c)) for r, c in self.zeros_b))
        if not self.zeros_a and not self.zeros_b:
            raise SpecValidationError("sparsity pattern needs at least one position")


@dataclass(frozen=True)
class LinearStructure:
    """Combination of linear constraints through an and/or expression.

    In INTERSECTION mode the expression is the plain conjunction of all
    constraints.  In EXPRESSION mode the constraint vectors must be
    linearly independent (value sets are bounded by construction).
    """

    constraints: tuple
    expr: SetExpr
    mode: Mode

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if not self.constraints:
            raise SpecValidationError("need at least one constraint")
        leaves = sorted(expr_leaves(self.expr))
        if leaves != list(range(1, len(self.constraints) + 1)):
            raise SpecValidationError("expression must reference each constraint exactly once")

    @classmethod
    def intersection(cls, constraints: Sequence[LinearConstraint]) -> "LinearStructure":
        constraints = tuple(constraints)
        expr = chain_expr(len(constraints), ["&"] * (len(constraints) - 1))
        return cls(constraints, expr, Mode.INTERSECTION)


PropertySpec = Union[Identifiability, Stabilizability, Controllability, Sparsity, LinearStructure]


# -- vectorization ---------------------------------------------------------

def vec(m: Mat) -> tuple:
    """Column-major stacking of a matrix into a flat vector."""
    return tuple(m[i, j] for j in range(m.cols) for i in range(m.rows))


def vec_inv(v: Sequence, rows: int, cols: int) -> Mat:
    """Inverse of `vec`: reshape a flat vector column-major."""
    v = [as_rational(x) for x in v]
    if len(v) != rows * cols:
        raise DimensionMismatch(f"vector of length {len(v)} cannot fill {rows}x{cols}")
    return Mat.from_flat(rows, cols, [v[j * rows + i] for i in range(rows) for j in range(cols)])


def build_constraint_matrix(constraints: Sequence[LinearConstraint], dims: Dims) -> Mat:
    """The (n+m) x (len*n) matrix whose column blocks are the reshaped
    constraint vectors transposed; its column space is the minimum
    excitation subspace of the constrained structure."""
    blocks = []
    for c in constraints:
        if len(c.h) != dims.n * dims.total:
            raise DimensionMismatch(
                f"constraint vector has length {len(c.h)}, expected {dims.n * dims.total}"
            )
        blocks.append(vec_inv(c.h, dims.n, dims.total).T)
    return Mat.hstack(blocks)


def sparsity_columns(p: Sparsity, dims: Dims) -> list:
    """Affected column indices of [A, B], 0-based ascending."""
    cols = {c - 1 for _, c in p.zeros_a}
    cols.update(dims.n + c - 1 for _, c in p.zeros_b)
    return sorted(cols)


def sparsity_as_structure(p: Sparsity, dims: Dims) -> LinearStructure:
    """Equivalent constrained structure: one {0} singleton per zero position."""
    validate_property(p, dims)
    n, total = dims.n, dims.total
    constraints = []
    for r, c in sorted(p.zeros_a):
        h = [Fraction(0)] * (n * total)
        h[(c - 1) * n + (r - 1)] = Fraction(1)
        constraints.append(LinearConstraint(tuple(h), BoundedSet.singleton(0)))
    for r, c in sorted(p.zeros_b):
        h = [Fraction(0)] * (n * total)
        h[(n + c - 1) * n + (r - 1)] = Fraction(1)
        constraints.append(LinearConstraint(tuple(h), BoundedSet.singleton(0)))
    return LinearStructure.intersection(constraints)


# -- validation -------------------------------------------------------------

def validate_property(p: PropertySpec, dims: Dims) -> None:
    """Raise SpecValidationError when `p` violates its invariants for `dims`."""
    if isinstance(p, (Identifiability, Stabilizability)):
        return
    if isinstance(p, Controllability):
        if dims.m == 0:
            raise SpecValidationError("controllability needs at least one input channel")
        return
    if isinstance(p, Sparsity):
        for r, c in p.zeros_a:
            if not (1 <= r <= dims.n and 1 <= c <= dims.n):
                raise SpecValidationError(f"A position ({r}, {c}) outside {dims.n}x{dims.n}")
        for r, c in p.zeros_b:
            if not (1 <= r <= dims.n and 1 <= c <= dims.m):
                raise SpecValidationError(f"B position ({r}, {c}) outside {dims.n}x{dims.m}")
        return
    if isinstance(p, LinearStructure):
        width = dims.n * dims.total
        for c in p.constraints:
            if len(c.h) != width:
                raise SpecValidationError(
                    f"constraint vector has length {len(c.h)}, expected {width}"
                )
        if p.mode is Mode.EXPRESSION:
            hmat = Mat([list(c.h) for c in p.constraints])
            if rank(hmat) != len(p.constraints):
                raise SpecValidationError(
                    "expression mode requires linearly independent constraint vectors"
                )
        else:
            if _contains_or(p.expr):
                raise SpecValidationError(
                    "intersection mode admits only conjunctions; use expression mode for unions"
                )
            if not _intersection_nonempty(p.constraints):
                raise SpecValidationError("the constraint intersection is empty")
        return
    raise SpecValidationError(f"unknown property {p!r}")


def _contains_or(expr: SetExpr) -> bool:
    if isinstance(expr, Leaf):
        return False
    if isinstance(expr, Or):
        return True
    return _contains_or(expr.left) or _contains_or(expr.right)


def _intersection_nonempty(constraints: Sequence[LinearConstraint]) -> bool:
    """Exact feasibility of {theta : h_i . theta in S_i for all i}.

    The achievable value vectors (h_1.theta, ..., h_l.theta) form the
    column space of the stacked constraint matrix; the intersection is
    non-empty iff that space meets one of the boxes formed by choosing an
    interval from each value set.  Each box is decided by Fourier-Motzkin
    elimination over the rationals.
    """
    hmat = Mat([list(c.h) for c in constraints])
    if rank(hmat) == len(constraints):
        return True  # every value vector is achievable
    basis = image(hmat.T).basis  # value-space basis, one row per constraint
    combos = 1
    for c in constraints:
        combos *= len(c.values.pieces)
    if combos > 4096:
        raise SpecValidationError(
            "too many interval combinations to verify non-emptiness exactly"
        )
    piece_lists = [c.values.pieces for c in constraints]
    for choice in itertools.product(*piece_lists):
        ineqs = []
        for i, (lo, hi) in enumerate(choice):
            row = basis.row_list(i)
            ineqs.append((row, hi))
            ineqs.append(([-v for v in row], -lo))
        if _fourier_motzkin_feasible(ineqs, basis.cols):
            return True
    return False


def _fourier_motzkin_feasible(ineqs: list, nvars: int) -> bool:
    """Feasibility of {y : coeffs . y <= rhs for all (coeffs, rhs)}."""
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for coeffs, rhs in ineqs:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, rhs))
            elif c < 0:
                neg.append((coeffs, rhs))
            else:
                rest.append((coeffs, rhs))
        new = rest
        for pc, pr in pos:
            for nc, nr in neg:
                scale_p, scale_n = -nc[var], pc[var]
                coeffs = [scale_p * a + scale_n * b for a, b in zip(pc, nc)]
                new.append((coeffs, scale_p * pr + scale_n * nr))
        ineqs = new
    return all(rhs >= 0 for _, rhs in ineqs)


# -- minimum excitation subspaces -------------------------------------------

def minimum_subspace(p: PropertySpec, dims: Dims) -> Subspace:
    """Smallest subspace of R^(n+m) that a sufficiently rich plan must span."""
    validate_property(p, dims)
    total = dims.total
    if isinstance(p, (Identifiability, Stabilizability)):
        return Subspace.full(total)
    if isinstance(p, Controllability):
        if dims.n == 1:
            return Subspace.span_of_units(total, list(range(1, total)))
        return Subspace.full(total)
    if isinstance(p, Sparsity):
        return Subspace.span_of_units(total, sparsity_columns(p, dims))
    return image(build_constraint_matrix(p.constraints, dims))


# -- ground-truth membership oracle ------------------------------------------

def structure_values(sys: SystemPair, constraints: Sequence[LinearConstraint]) -> list:
    """Exact values h_i . vec([A, B]) for each constraint."""
    flat = vec(sys.ab())
    values = []
    for c in constraints:
        if len(c.h) != len(flat):
            raise DimensionMismatch("constraint length does not match the system size")
        values.append(sum((a * b for a, b in zip(c.h, flat)), Fraction(0)))
    return values


def kalman_matrix(sys: SystemPair) -> Mat:
    blocks = []
    power = sys.b
    for _ in range(sys.n):
        blocks.append(power)
        power = sys.a @ power
    return Mat.hstack(blocks)


def is_controllable(sys: SystemPair) -> bool:
    """Exact reachability-matrix rank test over the rationals."""
    if sys.m == 0:
        return False
    return rank(kalman_matrix(sys)) == sys.n


def is_stabilizable(sys: SystemPair, tol: float = EIG_MARGIN) -> bool:
    """Eigenvalue split plus a numeric rank test on each unstable mode.

    Any eigenvalue with modulus at least 1 - tol is treated as unstable
    and must pass rank [A - lambda I, B] = n at the same tolerance.
    """
    a = sys.a.to_float()
    b = sys.b.to_float().reshape(sys.n, sys.m)
    eigenvalues = np.linalg.eigvals(a)
    eye = np.eye(sys.n)
    for lam in eigenvalues:
        if abs(lam) >= 1.0 - tol:
            block = np.hstack([a - lam * eye, b]).astype(complex)
            if numeric_rank(block, tol) < sys.n:
                return False
    return True


def has_property(sys: SystemPair, p: PropertySpec) -> bool:
    """Ground-truth membership test for every decidable catalog entry."""
    validate_property(p, sys.dims)
    if isinstance(p, Identifiability):
        raise SpecValidationError(
            "identifiability is a property of data, not of a single system"
        )
    if isinstance(p, Stabilizability):
        return is_stabilizable(sys)
    if isinstance(p, Controllability):
        return is_controllable(sys)
    if isinstance(p, Sparsity):
        return all(sys.a[r - 1, c - 1] == 0 for r, c in p.zeros_a) and all(
            sys.b[r - 1, c - 1] == 0 for r, c in p.zeros_b
        )
    values = structure_values(sys, p.constraints)
    truth = [c.values.contains(v) for c, v in zip(p.constraints, values)]
    return evaluate_expr(p.expr, truth)
