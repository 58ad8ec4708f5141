import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_form, rng_for
from qbic.fields import field_make
from qbic.forms import (QBicForm, TypeSignature, direct_sum, hermitian_gram,
                        hermitian_space, nu_index, nu_zero_bound, parse_type,
                        perp_filtration, perp_prime_filtration, radical,
                        rank_corank, type_of, type_report)
from qbic.classify import jordan_gram, standard_gram
from qbic.linalg import MatrixF, intersect, twist_subspace

GF4 = field_make(2, 1, 2)
RF4 = field_make(2, 1, 2, kind="rational-function")


def form_of(text, field=GF4):
    t = parse_type(text)
    return QBicForm(field, standard_gram(t, field))


class TestPerpFiltration:
    def test_jordan_block_chain(self):
        # for N_n the odd pieces are e_1, e_1+e_3, ... and the even pieces
        # shrink by the complementary pattern
        for n in range(1, 7):
            f = QBicForm(GF4, jordan_gram(GF4, n))
            filt = perp_filtration(f)
            for i in range(0, n + 2):
                if i % 2:
                    assert filt.piece(i).dim == min((i + 1) // 2,
                                                    (n + 1) // 2)
                else:
                    assert filt.piece(i).dim == n - min(i // 2, n // 2)

    def test_nonsingular_stabilizes_immediately(self):
        f = form_of("1^4")
        filt = perp_filtration(f)
        assert filt.p_minus.dim == 0 and filt.p_plus.dim == 4

    def test_pieces_nest(self):
        rng = rng_for("nest")
        for _ in range(25):
            f = random_form(GF4, rng.randint(1, 5), rng)
            filt = perp_filtration(f)
            for i in range(1, f.n + 2):
                if i >= 2:
                    odd, even = (i, i - 1) if i % 2 else (i - 1, i)
                    assert filt.piece(even).contains(filt.piece(odd))


class TestType:
    def test_standard_forms_have_their_type(self):
        for text in ["1", "0", "1^3", "N2", "N3", "0+N5", "1^2+N3",
                     "1+N2^2", "0+1^4", "N2^2+N4", "0^2+1+N3"]:
            t = parse_type(text)
            f = QBicForm(GF4, standard_gram(t, GF4))
            assert type_of(f) == t
            assert str(t) == text

    def test_parse_round_trip_all_small_types(self):
        from qbic.moduli import enumerate_types
        for n in range(1, 7):
            for t in enumerate_types(n):
                assert parse_type(str(t)) == t

    def test_type_additive_under_direct_sum(self):
        rng = rng_for("dsum")
        for _ in range(20):
            f = random_form(GF4, rng.randint(1, 3), rng)
            g = random_form(GF4, rng.randint(1, 3), rng)
            assert type_of(direct_sum(f, g)) == \
                type_of(f).direct_sum(type_of(g))

    def test_rank_and_radical(self):
        f = form_of("0^2+1+N3")
        r, c = rank_corank(f)
        assert (r, c) == (3, 3)
        t = type_of(f)
        assert t.corank == 3          # corank counts all blocks
        assert radical(f).dim == 2    # but only N_1 blocks are radical

    def test_type_signature_validation(self):
        with pytest.raises(ValueError):
            TypeSignature(-1, {})
        with pytest.raises(ValueError):
            TypeSignature(0, {0: 1})
        with pytest.raises(ValueError):
            parse_type("banana")


class TestDescentIndex:
    def test_nu_zero_over_finite_fields(self):
        rng = rng_for("nu-finite")
        for _ in range(30):
            f = random_form(GF4, rng.randint(1, 4), rng)
            assert nu_index(f) == 0

    def test_nu_zero_bound_cases(self):
        assert nu_zero_bound(parse_type("0+N5")) == 3   # all blocks odd
        assert nu_zero_bound(parse_type("1+N3")) == 1   # all blocks odd
        assert nu_zero_bound(parse_type("N4")) == 3     # mu even, a = 0
        assert nu_zero_bound(parse_type("1+N4")) == 4   # mu even, a > 0
        assert nu_zero_bound(parse_type("0^2")) == 0
        with pytest.raises(ValueError):
            nu_zero_bound(parse_type("1^3"))

    def test_nu_positive_example_over_function_field(self):
        # beta(x, y) = t on a 2-dim space with a radical line mixed in by
        # a basis change with entries involving t
        t = RF4.t_gen()
        one = RF4.one()
        zero = RF4.zero()
        gram = MatrixF(RF4, [[t, t * t], [zero, zero]])
        f = QBicForm(RF4, gram)
        nu = nu_index(f)
        ty = type_of(f)
        assert nu <= nu_zero_bound(ty)

    def test_nu_bound_on_random_function_field_forms(self):
        rng = rng_for("nu-rational")
        for _ in range(20):
            n = rng.randint(1, 3)
            f = QBicForm(RF4, MatrixF(RF4, [
                [RF4.random_element(rng) for _ in range(n)]
                for _ in range(n)]))
            ty = type_of(f)
            if ty.b:
                assert nu_index(f) <= nu_zero_bound(ty)
            else:
                assert nu_index(f) == 0


class TestFiltrationSymmetry:
    def test_dim_intersections_symmetric(self):
        rng = rng_for("symmetry")
        for _ in range(30):
            f = random_form(GF4, rng.randint(1, 5), rng)
            filt = perp_filtration(f)
            pfilt = perp_prime_filtration(f)
            hi = f.n + 2

            def d(i, j):
                return intersect(twist_subspace(filt.piece(i), j),
                                 pfilt.piece_on_twist(j)).dim

            for i in range(hi):
                for j in range(i, hi):
                    assert d(i, j) == d(j, i)


class TestHermitian:
    def test_nonsingular_counts(self):
        for n in range(1, 4):
            f = QBicForm(GF4, MatrixF.identity(GF4, n))
            h = hermitian_space(f, 1)
            assert h.point_count == 4 ** n

    def test_jordan_counts(self):
        f2 = QBicForm(GF4, jordan_gram(GF4, 2))
        for r in range(1, 4):
            assert hermitian_space(f2, r).point_count == 1
        f3 = QBicForm(GF4, jordan_gram(GF4, 3))
        for r in range(1, 4):
            assert hermitian_space(f3, r).point_count == 4 ** r

    def test_hermitian_gram_is_hermitian(self):
        f = QBicForm(GF4, MatrixF.identity(GF4, 2))
        h = hermitian_space(f, 2)
        H = hermitian_gram(h)
        q = h.fq2.q
        for i in range(H.nrows):
            for j in range(H.ncols):
                assert H[i, j] == H[j, i] ** q


class TestTypeReport:
    def test_report_shape(self):
        rep = type_report(form_of("0+N5"))
        assert rep == {"type": "0+N5", "n": 6, "a": 0,
                       "b": {"1": 1, "5": 1}, "corank": 2, "rank": 4,
                       "nu": 0, "nu0": 3}

    def test_nonsingular_report(self):
        rep = type_report(form_of("1^3"))
        assert rep["b"] == {} and rep["nu0"] is None
