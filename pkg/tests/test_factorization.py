import pytest

from mcg_spinlab.factorization import (
    Curve,
    PositiveFactorization,
    SubsurfaceImage,
    TwistWord,
    apply_word,
    boundary_block_occurrences,
    breed,
    check_relation,
    check_spin,
    commuting_block_permute,
    conjugate,
    factorization_from_dict,
    factorization_to_dict,
    fiber_sum,
    hurwitz_move,
    product_matrix_int,
    product_matrix_mod2,
)
from mcg_spinlab.homology import ClassMod2, PreconditionError, SurfaceBasis, intersect
from mcg_spinlab.constructions import (
    boundary_conjugators,
    bred_fibration,
    chain_curves,
    hyperelliptic_factorizations,
    korkmaz_cadavid,
    pencil_images,
    spin_form_all_ones,
    spin_form_alternating,
    subsurface_boundary,
    twisted_double,
)

from .conftest import make_rng
from .helpers import random_int_class


def random_factorization(rng, g=None, length=None):
    g = g or rng.randint(1, 3)
    basis = SurfaceBasis(g)
    length = length or rng.randint(2, 7)
    twists = []
    for i in range(length):
        cls = random_int_class(rng, basis, odd=True)
        twists.append(Curve(f"r{i}", cls.mod2(), cls))
    return PositiveFactorization(basis, tuple(twists), rng.randint(0, 3))


class TestApplyWord:
    def test_identity_word(self):
        b = SurfaceBasis(3)
        v = ClassMod2.parse(b, "x1+y2")
        assert apply_word(TwistWord(()), v) == v

    def test_first_conjugator_sends_c1_to_y3(self):
        for g in (5, 11):
            ch = chain_curves(g)
            w_ab, _ = boundary_conjugators(g)
            image = apply_word(w_ab, ch[0].mod2)
            assert image.sparse() == "y3"

    def test_second_conjugator_sends_c3_to_y5(self):
        for g in (5, 11):
            ch = chain_curves(g)
            _, w_cd = boundary_conjugators(g)
            assert apply_word(w_cd, ch[2].mod2).sparse() == "y5"

    def test_word_inverse_round_trip(self):
        rng = make_rng(20)
        g = 5
        ch = chain_curves(g)
        w_ab, _ = boundary_conjugators(g)
        for cur in ch:
            v = cur.int_class
            assert apply_word(w_ab.inverse(), apply_word(w_ab, v)) == v


class TestConjugate:
    def test_identity_word_is_noop(self):
        p = korkmaz_cadavid(3)
        assert conjugate(p, TwistWord((), name="id")) == p

    def test_preserves_length_and_power(self):
        p = korkmaz_cadavid(5)
        a1 = p.basis.unit_int(0)
        w = TwistWord.of(Curve("a1", a1.mod2(), a1))
        q = conjugate(p, w)
        assert len(q) == len(p)
        assert q.boundary_power == p.boundary_power

    def test_spin_values_preserved_by_q_one_conjugator(self):
        p = korkmaz_cadavid(5)
        q = spin_form_all_ones(p.basis)
        a1 = p.basis.unit_int(0)
        assert q(a1.mod2()) == 1
        conj = conjugate(p, TwistWord.of(Curve("a1", a1.mod2(), a1)))
        assert all(q(c.mod2) == 1 for c in conj.twists)

    def test_rotation_has_same_q_multiset(self):
        u, v = hyperelliptic_factorizations(5)
        q = spin_form_alternating(u.basis)
        mu = sorted(q(c.mod2) for c in u.twists)
        mv = sorted(q(c.mod2) for c in v.twists)
        assert mu == mv


class TestHurwitz:
    def test_right_then_left_restores(self):
        rng = make_rng(21)
        for _ in range(30):
            p = random_factorization(rng)
            i = rng.randrange(len(p) - 1)
            q = hurwitz_move(hurwitz_move(p, i, "right"), i, "left")
            assert q.twists == p.twists

    def test_left_then_right_restores(self):
        rng = make_rng(22)
        for _ in range(30):
            p = random_factorization(rng)
            i = rng.randrange(len(p) - 1)
            q = hurwitz_move(hurwitz_move(p, i, "left"), i, "right")
            assert q.twists == p.twists

    def test_products_invariant(self):
        rng = make_rng(23)
        for _ in range(40):
            p = random_factorization(rng)
            i = rng.randrange(len(p) - 1)
            q = hurwitz_move(p, i, rng.choice(["left", "right"]))
            assert product_matrix_mod2(q) == product_matrix_mod2(p)
            assert product_matrix_int(q) == product_matrix_int(p)

    def test_q_multiset_preserved(self):
        p = korkmaz_cadavid(5)
        q = spin_form_all_ones(p.basis)
        moved = hurwitz_move(p, 3, "right")
        assert sorted(q(c.mod2) for c in moved.twists) == sorted(q(c.mod2) for c in p.twists)

    def test_index_out_of_range(self):
        p = korkmaz_cadavid(3)
        with pytest.raises(PreconditionError):
            hurwitz_move(p, len(p) - 1, "right")


class TestFiberSum:
    def test_boundary_powers_add(self):
        u, v = hyperelliptic_factorizations(5)
        w_ab, w_cd = boundary_conjugators(5)
        p = fiber_sum(conjugate(v, w_ab), u, w_cd)
        assert p.boundary_power == 2
        assert len(p) == 16 * 5 + 8

    def test_empty_conjugator_is_concatenation(self):
        p = korkmaz_cadavid(3)
        s = fiber_sum(p, p)
        assert s.twists == p.twists + p.twists
        assert s.boundary_power == 2

    def test_genus_mismatch(self):
        with pytest.raises(PreconditionError):
            fiber_sum(korkmaz_cadavid(3), korkmaz_cadavid(5))


class TestBreed:
    def test_length_grows_by_four(self):
        for k in (0, 1, 4):
            p, _ = bred_fibration(5, k, certify=False)
            assert len(p) == 16 * 5 + 8 + 4 * k

    def test_zero_breeds_is_block_form(self):
        p, _ = bred_fibration(5, 0, certify=False)
        assert p == twisted_double(5).with_note("family:bred-fibration g=5 k=0")

    def test_mod2_product_still_identity(self):
        for k in (1, 3, 12):
            p, _ = bred_fibration(5, k, certify=False)
            assert product_matrix_mod2(p).is_identity()

    def test_occurrence_accounting(self):
        g = 5
        image = pencil_images(g)
        p = twisted_double(g)
        occ = boundary_block_occurrences(p, image)
        assert len(occ) == 2 * g + 2
        bred_once = breed(p, len(occ) - 1, image)
        assert len(boundary_block_occurrences(bred_once, image)) == 2 * g + 1

    def test_missing_occurrence(self):
        p = twisted_double(5)
        image = pencil_images(5)
        with pytest.raises(PreconditionError):
            breed(p, 99, image)


class TestCommutingBlock:
    def test_rejects_crossing_curves(self):
        ch = chain_curves(5)
        basis = ch[0].basis
        p = PositiveFactorization(basis, (ch[0], ch[1], ch[2]), 1)
        with pytest.raises(PreconditionError):
            commuting_block_permute(p, 0, 3, [2, 1, 0])

    def test_preserves_products_on_disjoint_block(self):
        g = 5
        a, b, cc, d = subsurface_boundary(g)
        basis = a.basis
        p = PositiveFactorization(basis, (a, a, b, b, cc, cc, d, d), 2)
        q = commuting_block_permute(p, 0, 8, [0, 2, 4, 6, 1, 3, 5, 7])
        assert sorted(c.label for c in q.twists) == sorted(c.label for c in p.twists)
        assert product_matrix_mod2(q) == product_matrix_mod2(p)
        assert product_matrix_int(q) == product_matrix_int(p)


class TestCheckRelation:
    def test_building_blocks(self):
        for g in (3, 5, 7):
            r = check_relation(korkmaz_cadavid(g))
            assert r.mod2 and r.integral

    def test_hyperelliptic(self):
        u, v = hyperelliptic_factorizations(5)
        assert check_relation(u) == check_relation(v)
        assert check_relation(u).integral

    def test_bred_integral_unavailable(self):
        for k in (1, 6, 12):
            p, _ = bred_fibration(5, k, certify=False)
            r = check_relation(p)
            assert r.mod2 and r.integral is None

    def test_non_relation_detected(self):
        p = korkmaz_cadavid(3)
        truncated = PositiveFactorization(p.basis, p.twists[:-1], 1)
        r = check_relation(truncated)
        assert not r.mod2 and r.integral is False


class TestCheckSpin:
    def test_bred_fibration_passes(self):
        p, _ = bred_fibration(5, 1, certify=False)
        cert = check_spin(p, spin_form_alternating(p.basis))
        assert cert.verdict and cert.boundary_power == 2

    def test_odd_power_fails_parity(self):
        p = korkmaz_cadavid(5)
        odd = PositiveFactorization(p.basis, p.twists, 3)
        cert = check_spin(odd, spin_form_all_ones(p.basis))
        assert cert.all_values_one and not cert.power_even and not cert.verdict

    def test_single_lift_fails(self):
        u, _ = hyperelliptic_factorizations(5)
        cert = check_spin(u, spin_form_alternating(u.basis))
        assert cert.all_values_one
        assert cert.boundary_power == 1
        assert not cert.verdict


class TestSubsurfaceImage:
    def test_concrete_instance_invariants(self):
        image = pencil_images(5)
        a, b, cc, d = image.boundary
        assert (a.mod2 + b.mod2 + cc.mod2 + d.mod2).is_zero()
        for i, u in enumerate(image.boundary):
            for v in image.boundary[i + 1:]:
                assert intersect(u.mod2, v.mod2) == 0
        for c in image.interior:
            for u in image.boundary:
                assert intersect(c.mod2, u.mod2) == 0

    def test_bad_boundary_rejected(self):
        image = pencil_images(5)
        ch = chain_curves(5)
        with pytest.raises(PreconditionError):
            SubsurfaceImage((ch[0], ch[1], ch[2], ch[3]), image.interior)


class TestDeterminism:
    def test_pipeline_replay_is_bit_identical(self):
        first, _ = bred_fibration(7, 2, certify=False)
        second, _ = bred_fibration(7, 2, certify=False)
        assert first == second
        assert first.provenance == second.provenance

    def test_json_round_trip(self):
        for p in (korkmaz_cadavid(3), bred_fibration(5, 2, certify=False)[0]):
            d = factorization_to_dict(p)
            q = factorization_from_dict(d)
            assert q.basis == p.basis
            assert q.boundary_power == p.boundary_power
            assert [c.label for c in q.twists] == [c.label for c in p.twists]
            assert [c.mod2 for c in q.twists] == [c.mod2 for c in p.twists]
            assert [c.int_class for c in q.twists] == [c.int_class for c in p.twists]
