"""Sufficient richness checks and minimum excitation design.

An excitation plan is a set of k one-step experiments, each a pair of
initial state and input; stacked, the columns span a subspace of
R^(n+m).  A plan can decide a property for every system consistent with
the resulting data exactly when that subspace contains the property's
minimum subspace, so richness checking reduces to exact containment and
design reduces to picking a basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import DimensionMismatch
from .properties import (
    Controllability,
    Dims,
    Identifiability,
    LinearStructure,
    PropertySpec,
    Sparsity,
    Stabilizability,
    build_constraint_matrix,
    minimum_subspace,
    sparsity_columns,
    validate_property,
)
from .ratmat import Mat, Subspace, contains, image


@dataclass(frozen=True)
class InputSection:
    """Excitation plan: column i holds the i-th experiment's state and input."""

    x_minus: Mat
    u_minus: Mat

    def __post_init__(self):
        if self.x_minus.cols != self.u_minus.cols:
            raise DimensionMismatch("state and input blocks need equal column counts")
        if self.x_minus.cols < 1:
            raise DimensionMismatch("an excitation plan needs at least one column")

    @property
    def n(self) -> int:
        return self.x_minus.rows

    @property
    def m(self) -> int:
        return self.u_minus.rows

    @property
    def k(self) -> int:
        return self.x_minus.cols

    @property
    def dims(self) -> Dims:
        return Dims(self.n, self.m)

    def stacked(self) -> Mat:
        return Mat.vstack([self.x_minus, self.u_minus])


@dataclass(frozen=True)
class Dataset:
    """Excitation plan together with the observed one-step responses."""

    section: InputSection
    x_plus: Mat

    def __post_init__(self):
        if self.x_plus.cols != self.section.k:
            raise DimensionMismatch("responses must be column-aligned with the plan")
        if self.x_plus.rows != self.section.n:
            raise DimensionMismatch("responses live in the state space")


def stacked_image(section: InputSection) -> Subspace:
    """Subspace of R^(n+m) spanned by the stacked excitation columns."""
    return image(section.stacked())


def is_sufficiently_rich(section: InputSection, p: PropertySpec) -> bool:
    """True when the plan decides `p` no matter what responses come back."""
    target = minimum_subspace(p, section.dims)
    return contains(stacked_image(section), target)


def missing_directions(section: InputSection, p: PropertySpec) -> list:
    """Basis columns of the minimum subspace the plan fails to span."""
    span = stacked_image(section)
    target = minimum_subspace(p, section.dims)
    return [
        target.basis.col(j)
        for j in range(target.basis.cols)
        if not span.contains_vector(target.basis.col(j))
    ]


def split_stacked(stacked: Mat, dims: Dims) -> InputSection:
    """Partition an (n+m) x k matrix into its state and input blocks."""
    if stacked.rows != dims.total:
        raise DimensionMismatch(f"expected {dims.total} rows, got {stacked.rows}")
    x_rows = [stacked.row_list(i) for i in range(dims.n)]
    u_rows = [stacked.row_list(i) for i in range(dims.n, dims.total)]
    x = Mat(x_rows) if x_rows else Mat.zeros(0, stacked.cols)
    u = Mat(u_rows) if u_rows else Mat.zeros(0, stacked.cols)
    return InputSection(x, u)


def design_minimum_input(p: PropertySpec, dims: Dims) -> InputSection:
    """Smallest excitation plan that is sufficiently rich for `p`.

    The plan is a fixed basis of the minimum subspace: unit vectors when
    that subspace is coordinate-aligned, the pivot columns of the
    constraint matrix otherwise, so designs are reproducible.
    """
    validate_property(p, dims)
    if isinstance(p, (Identifiability, Stabilizability)):
        stacked = Mat.identity(dims.total)
    elif isinstance(p, Controllability):
        if dims.n == 1:
            stacked = Mat.hstack([Mat.unit_column(dims.total, i) for i in range(1, dims.total)])
        else:
            stacked = Mat.identity(dims.total)
    elif isinstance(p, Sparsity):
        cols = sparsity_columns(p, dims)
        stacked = Mat.hstack([Mat.unit_column(dims.total, i) for i in cols])
    elif isinstance(p, LinearStructure):
        stacked = image(build_constraint_matrix(p.constraints, dims)).basis
    else:
        raise DimensionMismatch(f"cannot design for {p!r}")
    return split_stacked(stacked, dims)


def richness_oracle(p: PropertySpec, dims: Dims) -> Callable[[Subspace], bool]:
    """Containment test against the minimum subspace of `p`, as a callable."""
    target = minimum_subspace(p, dims)
    return lambda subspace: contains(subspace, target)


def reduce_to_minimum(start: Subspace, oracle: Callable[[Subspace], bool]) -> Subspace:
    """Greedily drop basis vectors of `start` while the oracle stays true.

    Candidates are scanned left to right and the first removable vector is
    dropped before rescanning, so the result is deterministic.  Terminates
    at a subspace from which no single basis vector can be removed; with a
    coordinate-aligned target and a canonical start this is the minimum
    subspace itself.
    """
    if not oracle(start):
        raise ValueError("the starting subspace must satisfy the oracle")
    basis = start.basis
    while True:
        for j in range(basis.cols):
            candidate = basis.drop_col(j)
            sub = Subspace(start.ambient_dim, candidate)
            if oracle(sub):
                basis = candidate
                break
        else:
            return Subspace(start.ambient_dim, basis)
