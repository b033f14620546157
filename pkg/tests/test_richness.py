"""Richness verdicts, minimum input design, greedy reduction."""

import random
from fractions import Fraction

import pytest

from minexcite import (
    Controllability,
    DimensionMismatch,
    Dims,
    Identifiability,
    InputSection,
    Mat,
    Sparsity,
    Stabilizability,
    Subspace,
    design_minimum_input,
    is_sufficiently_rich,
    minimum_subspace,
    missing_directions,
    parse_matrix,
    reduce_to_minimum,
    richness_oracle,
    stacked_image,
)
from minexcite.properties import BoundedSet, LinearConstraint, LinearStructure

from conftest import rand_invertible, rand_sparsity, rand_structure
from minexcite import Mode


TWO_COLUMN_PLAN = InputSection(parse_matrix("1, 0.5; 0, 1"), parse_matrix("-1, -1"))
CORNER_PLAN = InputSection(parse_matrix("1, 0; 0, 0"), parse_matrix("0, 1"))  # spans e1, e3
EXAMPLE_SPARSITY = Sparsity(frozenset({(1, 1)}), frozenset({(2, 1)}))


def catalog(dims: Dims, rng: random.Random):
    """A representative batch of properties for the given dimensions."""
    props = [Identifiability(), Stabilizability()]
    if dims.m >= 1:
        props.append(Controllability())
    for _ in range(3):
        props.append(rand_sparsity(rng, dims))
    for mode in (Mode.INTERSECTION, Mode.EXPRESSION):
        props.append(rand_structure(rng, dims, mode))
    return props


# -- stacked image -----------------------------------------------------------

def test_stacked_image_of_two_columns():
    assert stacked_image(TWO_COLUMN_PLAN).dim == 2


def test_stacked_image_full():
    sec = InputSection(parse_matrix("1, 0, 0; 0, 1, 0"), parse_matrix("0, 0, 1"))
    assert stacked_image(sec) == Subspace.full(3)


def test_stacked_image_zero_section():
    sec = InputSection(Mat.zeros(2, 2), Mat.zeros(1, 2))
    assert stacked_image(sec).dim == 0


# -- richness verdicts ---------------------------------------------------------

def test_two_columns_not_rich_for_stabilizability():
    assert not is_sufficiently_rich(TWO_COLUMN_PLAN, Stabilizability())


def test_pure_input_plan_rich_for_scalar_controllability():
    sec = InputSection(Mat.zeros(1, 2), Mat.identity(2))
    assert is_sufficiently_rich(sec, Controllability())


def test_corner_plan_rich_for_sparsity():
    assert is_sufficiently_rich(CORNER_PLAN, EXAMPLE_SPARSITY)


def test_missing_directions_reported():
    missing = missing_directions(TWO_COLUMN_PLAN, Stabilizability())
    assert missing  # the plan misses one dimension of R^3
    span = stacked_image(TWO_COLUMN_PLAN)
    assert all(not span.contains_vector(v) for v in missing)
    assert missing_directions(CORNER_PLAN, EXAMPLE_SPARSITY) == []


# -- design ----------------------------------------------------------------------

def test_design_stabilizability_is_identity():
    sec = design_minimum_input(Stabilizability(), Dims(2, 1))
    assert sec.stacked() == Mat.identity(3)
    assert sec.k == 3


def test_design_scalar_controllability():
    sec = design_minimum_input(Controllability(), Dims(1, 2))
    assert sec.x_minus == Mat.zeros(1, 2)
    assert sec.u_minus == Mat.identity(2)


def test_design_sparsity_corner():
    sec = design_minimum_input(EXAMPLE_SPARSITY, Dims(2, 1))
    assert sec.stacked() == Mat.hstack([Mat.unit_column(3, 0), Mat.unit_column(3, 2)])


def test_designed_plans_always_rich():
    rng = random.Random(13)
    for n in range(1, 5):
        for m in range(1, 5):
            dims = Dims(n, m)
            for p in catalog(dims, rng):
                sec = design_minimum_input(p, dims)
                assert is_sufficiently_rich(sec, p)
                assert sec.k == minimum_subspace(p, dims).dim


def test_design_minimality_column_drops():
    rng = random.Random(17)
    for n in range(1, 4):
        for m in range(1, 4):
            dims = Dims(n, m)
            for p in catalog(dims, rng):
                sec = design_minimum_input(p, dims)
                target = minimum_subspace(p, dims)
                stacked = sec.stacked()
                for j in range(stacked.cols):
                    from minexcite import contains, image

                    reduced = image(stacked.drop_col(j))
                    assert not contains(reduced, target)


# -- verdict invariances -----------------------------------------------------------

def test_appending_columns_is_monotone():
    rng = random.Random(29)
    for _ in range(20):
        dims = Dims(2, 1)
        p = rand_sparsity(rng, dims)
        sec = design_minimum_input(p, dims)
        extra = Mat.from_flat(3, 2, [Fraction(rng.randint(-3, 3)) for _ in range(6)])
        widened = Mat.hstack([sec.stacked(), extra])
        from minexcite import split_stacked

        assert is_sufficiently_rich(split_stacked(widened, dims), p)


def test_right_multiplication_preserves_verdict():
    rng = random.Random(37)
    dims = Dims(2, 1)
    for p in (Stabilizability(), EXAMPLE_SPARSITY):
        for sec in (TWO_COLUMN_PLAN, CORNER_PLAN, design_minimum_input(p, dims)):
            before = is_sufficiently_rich(sec, p)
            for _ in range(5):
                t = rand_invertible(rng, sec.k)
                from minexcite import split_stacked

                twisted = split_stacked(sec.stacked() @ t, dims)
                assert is_sufficiently_rich(twisted, p) == before


def test_column_permutation_preserves_verdict():
    sec = CORNER_PLAN
    swapped = InputSection(sec.x_minus.take_cols([1, 0]), sec.u_minus.take_cols([1, 0]))
    assert is_sufficiently_rich(swapped, EXAMPLE_SPARSITY)


# -- greedy reduction ----------------------------------------------------------------

def test_reduce_full_space_to_sparsity_minimum():
    oracle = richness_oracle(EXAMPLE_SPARSITY, Dims(2, 1))
    reduced = reduce_to_minimum(Subspace.full(3), oracle)
    assert reduced == minimum_subspace(EXAMPLE_SPARSITY, Dims(2, 1))


def test_reduce_fixed_point():
    target = minimum_subspace(EXAMPLE_SPARSITY, Dims(2, 1))
    oracle = richness_oracle(EXAMPLE_SPARSITY, Dims(2, 1))
    assert reduce_to_minimum(target, oracle) == target


def test_reduce_full_space_for_scalar_controllability():
    dims = Dims(1, 2)
    oracle = richness_oracle(Controllability(), dims)
    reduced = reduce_to_minimum(Subspace.full(3), oracle)
    assert reduced == minimum_subspace(Controllability(), dims)


def test_reduce_keeps_full_space_for_trace_constraint():
    dims = Dims(2, 0)
    p = LinearStructure.intersection(
        [LinearConstraint((1, 0, 0, 1), BoundedSet.singleton(0))]
    )
    oracle = richness_oracle(p, dims)
    assert reduce_to_minimum(Subspace.full(2), oracle) == Subspace.full(2)


def test_reduce_rejects_poor_start():
    oracle = richness_oracle(Stabilizability(), Dims(2, 1))
    with pytest.raises(ValueError):
        reduce_to_minimum(Subspace.span_of_units(3, [0]), oracle)


# -- section validation ----------------------------------------------------------------

def test_section_needs_matching_columns():
    with pytest.raises(DimensionMismatch):
        InputSection(Mat.zeros(2, 2), Mat.zeros(1, 3))


def test_section_needs_a_column():
    with pytest.raises(DimensionMismatch):
        InputSection(Mat.zeros(2, 0), Mat.zeros(1, 0))
