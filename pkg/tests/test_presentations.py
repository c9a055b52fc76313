from itertools import combinations
from math import gcd

import pytest

from mcg_spinlab.factorization import Curve, PositiveFactorization
from mcg_spinlab.homology import PreconditionError, SurfaceBasis
from mcg_spinlab.presentations import (
    AbelianGroup,
    FinitePresentation,
    abelianization,
    cokernel,
    fibration_h1,
    is_normalized,
    korkmaz_relator_set,
    normalize_presentation,
    presentation_from_text,
    presentation_to_text,
    smith_normal_form,
)
from mcg_spinlab.constructions import bred_fibration, hyperelliptic_factorizations, korkmaz_cadavid

from .conftest import make_rng


def random_presentation(rng, max_gens=5, max_rels=4, max_len=8):
    n = rng.randint(1, max_gens)
    gens = tuple(f"g{i}" for i in range(1, n + 1))
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        length = rng.randint(0, max_len)
        rels.append(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(length)))
    return FinitePresentation(gens, tuple(rels))


def det(matrix):
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        total += (-1) ** j * matrix[0][j] * det(minor)
    return total


def determinantal_divisor(matrix, k):
    """gcd of all k x k minors; 0 when all vanish."""
    nrows, ncols = len(matrix), len(matrix[0])
    g = 0
    for rows in combinations(range(nrows), k):
        for cols in combinations(range(ncols), k):
            sub = [[matrix[i][j] for j in cols] for i in rows]
            g = gcd(g, det(sub))
    return g


class TestSmith:
    def test_identity(self):
        res = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert res.rank == 3
        assert res.invariant_factors == (1, 1, 1)

    def test_two_by_two(self):
        res = smith_normal_form([[2, 0], [0, 3]])
        assert res.invariant_factors == (1, 6)

    def test_zero_matrix(self):
        res = smith_normal_form([[0, 0], [0, 0]])
        assert res.rank == 0

    def test_transforms_multiply_out(self):
        rng = make_rng(40)
        for _ in range(60):
            nrows = rng.randint(1, 4)
            ncols = rng.randint(1, 4)
            m = [[rng.randint(-9, 9) for _ in range(ncols)] for _ in range(nrows)]
            res = smith_normal_form(m)
            # D = U M V
            um = [[sum(res.left[i][k] * m[k][j] for k in range(nrows)) for j in range(ncols)] for i in range(nrows)]
            umv = [[sum(um[i][k] * res.right[k][j] for k in range(ncols)) for j in range(ncols)] for i in range(nrows)]
            assert [list(r) for r in res.d] == umv
            assert abs(det([list(r) for r in res.left])) == 1
            assert abs(det([list(r) for r in res.right])) == 1

    def test_determinantal_divisors(self):
        rng = make_rng(41)
        for _ in range(60):
            nrows = rng.randint(1, 4)
            ncols = rng.randint(1, 4)
            m = [[rng.randint(-9, 9) for _ in range(ncols)] for _ in range(nrows)]
            res = smith_normal_form(m)
            product = 1
            for k in range(1, min(3, nrows, ncols) + 1):
                dk = determinantal_divisor(m, k)
                if k <= res.rank:
                    product *= res.invariant_factors[k - 1]
                    assert dk == product
                else:
                    assert dk == 0


class TestAbelianization:
    def test_surface_group(self):
        g = 3
        gens = tuple(f"x{i}" for i in range(1, g + 1)) + tuple(f"y{i}" for i in range(1, g + 1))
        relator = tuple()
        for i in range(1, g + 1):
            relator += (i, g + i, -i, -(g + i))
        pres = FinitePresentation(gens, (relator,))
        assert abelianization(pres) == AbelianGroup(2 * g)

    def test_cyclic_of_order_two(self):
        pres = presentation_from_text("gens: x; rel: x^2;")
        assert abelianization(pres) == AbelianGroup(0, (2,))

    def test_trivialized_cyclic(self):
        pres = presentation_from_text("gens: c1; rel: c1^2; rel: c1;")
        assert abelianization(pres).is_trivial()

    def test_print_format(self):
        assert str(AbelianGroup(0)) == "0"
        assert str(AbelianGroup(1)) == "Z"
        assert str(AbelianGroup(2, (2, 6))) == "Z^2 + Z/2 + Z/6"


class TestNormalization:
    def test_already_normalized_returned_as_is(self):
        pres = presentation_from_text("gens: x; rel: x;")
        assert normalize_presentation(pres) is pres

    def test_square_relator(self):
        pres = presentation_from_text("gens: x; rel: x^2;")
        out = normalize_presentation(pres)
        assert is_normalized(out)
        assert abelianization(out) == abelianization(pres) == AbelianGroup(0, (2,))

    def test_commutator(self):
        pres = presentation_from_text("gens: a b; rel: a b a^-1 b^-1;")
        out = normalize_presentation(pres)
        assert is_normalized(out)
        assert abelianization(out) == AbelianGroup(2)

    def test_checker_conditions(self):
        assert is_normalized(FinitePresentation(("a", "b", "c"), ((1, 2, 3),)))
        assert is_normalized(FinitePresentation(("a", "b", "c"), ((2, 3, 1),)))
        assert not is_normalized(FinitePresentation(("a", "b", "c"), ((2, 1, 3),)))
        assert not is_normalized(FinitePresentation(("a",), ((1, 1),)))
        assert not is_normalized(FinitePresentation(("a",), ((-1,),)))

    def test_random_sample(self):
        rng = make_rng(42)
        for _ in range(100):
            pres = random_presentation(rng)
            out = normalize_presentation(pres)
            assert is_normalized(out)
            assert abelianization(out) == abelianization(pres)


class TestFibrationH1:
    def test_hyperelliptic_simply_connected(self):
        u, _ = hyperelliptic_factorizations(5)
        res = fibration_h1(u)
        assert res.coefficients == "Z"
        assert res.group.is_trivial()

    def test_building_block(self):
        for g in (3, 5, 7):
            res = fibration_h1(korkmaz_cadavid(g))
            assert res.group == AbelianGroup(g - 1)  # Z^(2n) at g = 2n+1

    def test_bred_mod2_fallback(self):
        for k in (1, 12):
            p, _ = bred_fibration(5, k, certify=False)
            res = fibration_h1(p)
            assert res.coefficients == "Z/2"
            assert res.mod2_dimension == 0


class TestKorkmazRelatorSet:
    def test_theorem_a_shape(self):
        g = 5
        p = korkmaz_cadavid(g)
        basis = p.basis
        conjugators = [
            Curve(f"a{i}", basis.unit_mod2(i - 1), basis.unit_int(i - 1)) for i in range(1, g + 1)
        ]
        classes = korkmaz_relator_set(p, conjugators)
        assert len(classes) == len(p.twists) + g

    def test_single_conjugator(self):
        g = 3
        p = korkmaz_cadavid(g)
        basis = p.basis
        d = Curve("d", basis.unit_mod2(basis.y_index(1)), basis.unit_int(basis.y_index(1)))
        classes = korkmaz_relator_set(p, [d])
        assert classes[-1] == d.int_class

    def test_disjoint_conjugator_rejected(self):
        # the twist curve of a one-entry word never meets itself
        b = SurfaceBasis(2)
        c = Curve("c", b.unit_mod2(0), b.unit_int(0))
        p = PositiveFactorization(b, (c,), 1)
        with pytest.raises(PreconditionError):
            korkmaz_relator_set(p, [c])

    def test_shortcut_spans_full_word(self):
        # the base classes plus the conjugator classes span the same lattice
        # as the entries of the iterated twisted fiber sum they stand for
        from mcg_spinlab.constructions import relator_curves
        from mcg_spinlab.factorization import TwistWord, fiber_sum
        from mcg_spinlab.presentations import normalize_presentation

        pres = presentation_from_text("gens: u v; rel: u v;")
        normalized = normalize_presentation(pres)
        g = 2 * len(normalized.generators) + 1
        block = korkmaz_cadavid(g)
        basis = block.basis
        conjugators = [
            Curve(f"a{i}", basis.unit_mod2(i - 1), basis.unit_int(i - 1)) for i in range(1, g + 1)
        ] + relator_curves(normalized, basis)
        full = block
        for d in conjugators:
            full = fiber_sum(full, block, TwistWord.of(d))

        shortcut_rows = sorted({tuple(v.coords) for v in korkmaz_relator_set(block, conjugators)})
        full_rows = sorted({c.int_class.coords for c in full.twists})
        assert cokernel(shortcut_rows, basis.dim) == cokernel(full_rows, basis.dim)
        assert cokernel(shortcut_rows, basis.dim) == fibration_h1(full).group


class TestTextFormat:
    def test_round_trip(self):
        text = "gens: x1 x2; rel: x1 x2 x1^-1 x2^-1;"
        pres = presentation_from_text(text)
        assert presentation_to_text(pres) == text
        assert presentation_from_text(presentation_to_text(pres)) == pres

    def test_errors(self):
        with pytest.raises(PreconditionError):
            presentation_from_text("rel: x;")
        with pytest.raises(PreconditionError):
            presentation_from_text("gens: x; rel: y;")
