"""Canonical-form and solver tests for the Z_d linear algebra layer.

Every algebraic fast path is checked against exhaustive set computation
from tests/oracles.py.
"""

from __future__ import annotations

import random

import pytest

from epitoy.errors import MixedModulus, TooLarge
from epitoy.zmod import (
    ModVector,
    Submodule,
    complement,
    direct_sum,
    enumerate_elements,
    howell_form,
    intersect,
    solve_linear,
    transversal,
)

from oracles import all_points, brute_complement, brute_solve_set, brute_span, coset

MODULI = [2, 3, 4, 5, 6, 7, 8, 9]


def mv(entries, d):
    return ModVector(tuple(entries), d)


def random_rows(rng, d, m, k):
    return [tuple(rng.randrange(d) for _ in range(m)) for _ in range(k)]


class TestHowellForm:
    def test_combination_collapses_to_unit_row(self):
        # span{(2,0),(3,0)} mod 6 contains (1,0) = (3,0) - (2,0)
        sub = howell_form([mv((2, 0), 6), mv((3, 0), 6)])
        assert sub.rows == ((1, 0),)

    def test_empty_span_is_zero_submodule(self):
        sub = howell_form([], d=3, m=2)
        assert sub.rows == ()
        assert sub.elements() == {(0, 0)}

    def test_single_coarse_row_kept(self):
        sub = howell_form([mv((2, 0), 6)])
        assert sub.rows == ((2, 0),)
        assert sub.elements() == {(0, 0), (2, 0), (4, 0)}

    def test_mixed_modulus_rejected(self):
        with pytest.raises(MixedModulus):
            howell_form([mv((1, 0), 6), mv((1, 0), 3)])
        with pytest.raises(MixedModulus):
            howell_form([mv((1, 0), 6), mv((1, 0, 0), 6)])

    def test_idempotent_and_span_preserving(self):
        rng = random.Random(101)
        for d in MODULI:
            for m in (2, 4):
                for _ in range(25):
                    rows = random_rows(rng, d, m, rng.randrange(0, m + 2))
                    sub = Submodule.span(rows, d=d, m=m)
                    again = Submodule.span(sub.rows, d=d, m=m)
                    assert sub == again
                    assert sub.elements() == brute_span(rows, d, m)

    def test_canonical_per_span(self):
        # The same span presented through recombined generators must give
        # the identical Howell matrix.
        rng = random.Random(202)
        for d in MODULI:
            for _ in range(20):
                m = 4
                rows = random_rows(rng, d, m, 3)
                recombined = list(rows)
                for _ in range(5):
                    coeffs = [rng.randrange(d) for _ in rows]
                    recombined.append(
                        tuple(
                            sum(c * r[i] for c, r in zip(coeffs, rows)) % d
                            for i in range(m)
                        )
                    )
                rng.shuffle(recombined)
                rng.shuffle(recombined)
                assert Submodule.span(rows, d=d, m=m) == Submodule.span(
                    recombined, d=d, m=m
                )

    def test_size_matches_enumeration(self):
        rng = random.Random(303)
        for d in MODULI:
            for m in (2, 3, 4):
                for _ in range(15):
                    rows = random_rows(rng, d, m, rng.randrange(0, m + 1))
                    sub = Submodule.span(rows, d=d, m=m)
                    assert sub.size() == len(sub.elements())

    def test_enumeration_guard(self):
        sub = Submodule.full(9, 8)
        with pytest.raises(TooLarge):
            sub.elements(guard=10**6)


class TestReduce:
    def test_reduce_is_lexicographic_minimum(self):
        rng = random.Random(404)
        for d in (4, 6, 9):
            for _ in range(20):
                rows = random_rows(rng, d, 3, 2)
                sub = Submodule.span(rows, d=d, m=3)
                shift = tuple(rng.randrange(d) for _ in range(3))
                expected = min(coset(sub.elements(), shift, d))
                assert sub.reduce(shift) == expected

    def test_membership(self):
        rng = random.Random(505)
        for d in MODULI:
            rows = random_rows(rng, d, 3, 2)
            sub = Submodule.span(rows, d=d, m=3)
            elems = sub.elements()
            for p in all_points(d, 3):
                assert (p in sub) == (p in elems)


class TestSolveLinear:
    def test_scalar_inverse_mod_5(self):
        particular, kernel = solve_linear([mv((2,), 5)], mv((1,), 5))
        assert particular.entries == (3,)
        assert kernel.size() == 1

    def test_no_solution_mod_6(self):
        assert solve_linear([mv((3,), 6)], mv((2,), 6)) is None

    def test_zero_map_full_kernel(self):
        particular, kernel = solve_linear([mv((0,), 3)], mv((0,), 3))
        assert particular.entries == (0,)
        assert kernel.elements() == {(0,), (1,), (2,)}

    def test_exhaustive_agreement(self):
        rng = random.Random(606)
        for d in MODULI:
            for _ in range(30):
                m = rng.choice((2, 3))
                k = rng.choice((1, 2, 3))
                rows = random_rows(rng, d, m, k)
                rhs = tuple(rng.randrange(d) for _ in range(k))
                expected = brute_solve_set(rows, rhs, d, m)
                got = solve_linear(rows, rhs, d=d)
                if not expected:
                    assert got is None
                else:
                    particular, kernel = got
                    solset = coset(kernel.elements(), particular.entries, d)
                    assert solset == expected

    def test_solvable_systems_sampled_from_images(self):
        # Force plenty of consistent systems by deriving rhs from a point.
        rng = random.Random(707)
        for d in MODULI:
            for _ in range(30):
                m, k = 4, rng.choice((1, 2, 3))
                rows = random_rows(rng, d, m, k)
                x = tuple(rng.randrange(d) for _ in range(m))
                rhs = tuple(sum(r[i] * x[i] for i in range(m)) % d for r in rows)
                got = solve_linear(rows, rhs, d=d)
                assert got is not None
                particular, kernel = got
                assert all(
                    sum(r[i] * particular.entries[i] for i in range(m)) % d == t
                    for r, t in zip(rows, rhs)
                )
                assert x in coset(kernel.elements(), particular.entries, d)


class TestComplement:
    def test_paper_fig5_complement(self):
        # d=6: span{(3,0)}^perp = span{(2,0),(0,1)}
        sub = Submodule.span([(3, 0)], d=6, m=2)
        comp = complement(sub)
        assert comp == Submodule.span([(2, 0), (0, 1)], d=6, m=2)

    def test_fig1a_complement(self):
        sub = Submodule.span([(1, 0)], d=3, m=2)
        assert complement(sub) == Submodule.span([(0, 1)], d=3, m=2)

    def test_zero_complement_is_everything(self):
        sub = Submodule.zero(3, 2)
        assert complement(sub) == Submodule.full(3, 2)

    @pytest.mark.parametrize("form", ["euclidean", "symplectic"])
    def test_matches_brute_force_and_double_complement(self, form):
        rng = random.Random(808)
        for d in MODULI:
            for m in (2, 4):
                for _ in range(10):
                    rows = random_rows(rng, d, m, rng.randrange(0, 3))
                    sub = Submodule.span(rows, d=d, m=m)
                    comp = complement(sub, form)
                    assert comp.elements() == brute_complement(sub.rows, d, m, form)
                    assert complement(comp, form) == sub

    def test_size_duality(self):
        rng = random.Random(909)
        for d in MODULI:
            for m in (2, 4):
                for _ in range(10):
                    rows = random_rows(rng, d, m, rng.randrange(0, 3))
                    sub = Submodule.span(rows, d=d, m=m)
                    assert sub.size() * complement(sub).size() == d**m


class TestLatticeOps:
    def test_intersect_trivial_cases(self):
        omega = Submodule.full(3, 2)
        line = Submodule.span([(1, 1)], d=3, m=2)
        assert intersect(omega, line) == line
        x_line = Submodule.span([(1, 0)], d=3, m=2)
        p_line = Submodule.span([(0, 1)], d=3, m=2)
        assert intersect(x_line, p_line) == Submodule.zero(3, 2)

    def test_intersect_d6(self):
        a = Submodule.span([(2, 0), (0, 1)], d=6, m=2)
        b = Submodule.span([(0, 1)], d=6, m=2)
        assert intersect(a, b) == b

    def test_direct_sum_examples(self):
        a = Submodule.span([(0, 1)], d=6, m=2)
        b = Submodule.span([(2, 0)], d=6, m=2)
        s = direct_sum(a, b)
        assert s.size() == 18
        zero = Submodule.zero(3, 2)
        line = Submodule.span([(1, 0)], d=3, m=2)
        assert direct_sum(line, zero) == line
        assert direct_sum(
            line, Submodule.span([(0, 1)], d=3, m=2)
        ) == Submodule.full(3, 2)

    def test_de_morgan_and_set_agreement(self):
        rng = random.Random(111)
        for d in MODULI:
            m = 2 if d > 5 else 4
            for _ in range(12):
                a = Submodule.span(random_rows(rng, d, m, 2), d=d, m=m)
                b = Submodule.span(random_rows(rng, d, m, 2), d=d, m=m)
                inter = intersect(a, b)
                assert inter.elements() == a.elements() & b.elements()
                assert direct_sum(a, b).elements() == brute_span(
                    a.rows + b.rows, d, m
                )
                assert complement(direct_sum(a, b)) == intersect(
                    complement(a), complement(b)
                )

    def test_transversal_partitions(self):
        big = Submodule.span([(2, 0), (0, 1)], d=6, m=2)
        small = Submodule.span([(0, 1)], d=6, m=2)
        reps = transversal(big, small)
        assert len(reps) == big.size() // small.size()
        union = set()
        for t in reps:
            block = coset(small.elements(), t, 6)
            assert not (union & block)
            union |= block
        assert union == big.elements()


def test_enumerate_elements_returns_modvectors():
    sub = Submodule.span([(0, 1)], d=3, m=2)
    elems = enumerate_elements(sub)
    assert {e.entries for e in elems} == {(0, 0), (0, 1), (0, 2)}
