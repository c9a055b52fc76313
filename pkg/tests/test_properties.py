"""Standalone entry points for the randomized property suites."""

from .conftest import make_rng
from .property_suites import (
    hurwitz_products_invariant,
    q_preserved_by_unit_twists,
    refinement_identity,
    snf_determinantal_divisors,
    transvection_matrices_symplectic,
)

CASES = 500


def test_refinement_identity():
    assert refinement_identity(make_rng(100), CASES) == CASES


def test_q_preserved_by_unit_twists():
    assert q_preserved_by_unit_twists(make_rng(101), CASES) == CASES


def test_hurwitz_products_invariant():
    assert hurwitz_products_invariant(make_rng(102), CASES) == CASES


def test_transvection_matrices_symplectic():
    assert transvection_matrices_symplectic(make_rng(103), CASES) == CASES


def test_snf_determinantal_divisors():
    assert snf_determinantal_divisors(make_rng(104), CASES) == CASES
