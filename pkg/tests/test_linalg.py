"""Exact linear algebra: worked examples and randomized invariants."""

import random
from fractions import Fraction

import pytest

from jetsym.errors import NonSquareError, NotEigenvalueError, ZeroPolynomialError
from jetsym.linalg import (
    RatMatrix,
    UniPoly,
    char_poly,
    generalized_eigenspace,
    in_span,
    jordan_chains,
    nullspace,
    poly_matrix_pivots,
    rank,
    rank_modulo,
    rational_roots,
    rref,
    solve,
    squarefree_factors,
)

F = Fraction


def M(rows):
    return RatMatrix(rows)


class TestRref:
    def test_identity(self):
        red, pivots = rref(M([[1, 0], [0, 1]]))
        assert red == RatMatrix.identity(2)
        assert pivots == (0, 1)

    def test_rank_one(self):
        red, pivots = rref(M([[1, 1], [1, 1]]))
        assert red == M([[1, 1], [0, 0]])
        assert pivots == (0,)

    def test_shifted_pivot(self):
        red, pivots = rref(M([[0, 1], [0, 0]]))
        assert red == M([[0, 1], [0, 0]])
        assert pivots == (1,)

    def test_idempotent_on_random(self):
        rng = random.Random(7)
        for _ in range(60):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 4)
            m = M(
                [
                    [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(cols)]
                    for _ in range(rows)
                ]
            )
            red, pivots = rref(m)
            red2, pivots2 = rref(red)
            assert red2 == red
            assert pivots2 == pivots
            assert list(pivots) == sorted(pivots)


class TestNullspace:
    def test_identity_is_injective(self):
        assert nullspace(RatMatrix.identity(2)) == []

    def test_rank_one(self):
        basis = nullspace(M([[1, 1], [1, 1]]))
        assert len(basis) == 1
        # normalization: first nonzero entry is one
        assert basis[0] == (F(1), F(-1))

    def test_zero_matrix(self):
        basis = nullspace(RatMatrix.zero(2, 3))
        assert len(basis) == 3

    def test_exactness_and_rank_nullity(self):
        rng = random.Random(11)
        for _ in range(60):
            rows = rng.randint(1, 4)
            cols = rng.randint(1, 5)
            m = M(
                [[F(rng.randint(-3, 3)) for _ in range(cols)] for _ in range(rows)]
            )
            basis = nullspace(m)
            for v in basis:
                assert all(x == 0 for x in m.apply(v))
                first = next(x for x in v if x != 0)
                assert first == 1
            assert rank(m) + len(basis) == cols


class TestCharPoly:
    def test_nilpotent_block(self):
        assert char_poly(M([[0, 1], [0, 0]])) == UniPoly([0, 0, 1])

    def test_diag_plus_minus(self):
        assert char_poly(M([[1, 0], [0, -1]])) == UniPoly([-1, 0, 1])

    def test_one_by_one(self):
        assert char_poly(M([[5]])) == UniPoly([-5, 1])

    def test_non_square(self):
        with pytest.raises(NonSquareError):
            char_poly(M([[1, 2, 3], [4, 5, 6]]))

    def test_cayley_hamilton_random(self):
        rng = random.Random(13)
        for _ in range(40):
            n = rng.choice((2, 3))
            m = M(
                [
                    [F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)]
                    for _ in range(n)
                ]
            )
            assert char_poly(m).eval_matrix(m).is_zero()


class TestRationalRoots:
    def test_two_simple_roots(self):
        roots, residual = rational_roots(UniPoly([-1, 0, 1]))
        assert roots == [(F(-1), 1), (F(1), 1)]
        assert residual == UniPoly.one()

    def test_double_zero(self):
        roots, residual = rational_roots(UniPoly([0, 0, 1]))
        assert roots == [(F(0), 2)]
        assert residual == UniPoly.one()

    def test_no_rational_roots(self):
        roots, residual = rational_roots(UniPoly([1, 0, 1]))
        assert roots == []
        assert residual == UniPoly([1, 0, 1])

    def test_fractional_root(self):
        # (2x - 1)(x + 3) = 2x^2 + 5x - 3
        roots, residual = rational_roots(UniPoly([-3, 5, 2]))
        assert roots == [(F(-3), 1), (F(1, 2), 1)]
        assert residual == UniPoly.one()

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomialError):
            rational_roots(UniPoly.zero())


class TestGeneralizedEigenspace:
    def test_nilpotent_full(self):
        basis = generalized_eigenspace(M([[0, 1], [0, 0]]), 0)
        assert len(basis) == 2

    def test_simple_eigenvalue(self):
        basis = generalized_eigenspace(M([[1, 0], [0, -1]]), 1)
        assert basis == [(F(1), F(0))]

    def test_non_eigenvalue(self):
        assert generalized_eigenspace(M([[1, 0], [0, -1]]), 7) == []

    def test_dimension_sum_vs_splitting(self):
        rng = random.Random(17)
        for _ in range(40):
            n = rng.choice((2, 3))
            m = M([[F(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)])
            roots, residual = rational_roots(char_poly(m))
            total = sum(len(generalized_eigenspace(m, lam)) for lam, _ in roots)
            assert total <= n
            assert (total == n) == residual.is_constant()
            for lam, mult in roots:
                assert len(generalized_eigenspace(m, lam)) == mult


class TestJordanChains:
    def test_single_chain(self):
        chains = jordan_chains(M([[0, 1], [0, 0]]), 0)
        assert len(chains) == 1
        assert len(chains[0]) == 2

    def test_two_trivial_chains(self):
        chains = jordan_chains(RatMatrix.zero(2, 2), 0)
        assert [len(c) for c in chains] == [1, 1]

    def test_shifted_eigenvalue(self):
        chains = jordan_chains(M([[1, 1], [0, 1]]), 1)
        assert [len(c) for c in chains] == [2]

    def test_not_eigenvalue(self):
        with pytest.raises(NotEigenvalueError):
            jordan_chains(M([[1, 0], [0, 1]]), 2)

    def test_chain_relations_random(self):
        rng = random.Random(19)
        for _ in range(30):
            n = rng.choice((2, 3, 4))
            # build an upper-triangular matrix with a repeated eigenvalue
            lam = F(rng.randint(-2, 2))
            rows = [[lam if i == j else F(0) for j in range(n)] for i in range(n)]
            for i in range(n):
                for j in range(i + 1, n):
                    rows[i][j] = F(rng.randint(-1, 1))
            m = M(rows)
            chains = jordan_chains(m, lam)
            shifted = m - RatMatrix.identity(n).scale(lam)
            flat = []
            for chain in chains:
                for upper, lower in zip(chain, chain[1:]):
                    assert shifted.apply(upper) == lower
                assert all(x == 0 for x in shifted.apply(chain[-1]))
                flat.extend(chain)
            assert len(flat) == len(generalized_eigenspace(m, lam))
            assert rank(RatMatrix.from_columns(flat)) == len(flat)
            lengths = [len(c) for c in chains]
            assert lengths == sorted(lengths, reverse=True)


class TestPolyMatrixPivots:
    def test_one_by_one(self):
        p = UniPoly([-1, 0, 1])
        assert poly_matrix_pivots([[p]]) == [p]

    def test_diagonal(self):
        one = UniPoly.one()
        lam = UniPoly.variable()
        assert poly_matrix_pivots([[one, UniPoly.zero()], [UniPoly.zero(), lam]]) == [
            one,
            lam,
        ]

    def test_rank_drop_candidates(self):
        lam = UniPoly.variable()
        pivots = poly_matrix_pivots([[lam, lam], [lam, lam]])
        assert len(pivots) == 1  # generic rank one
        roots = set()
        for p in pivots:
            roots.update(r for r, _ in rational_roots(p)[0])
        assert Fraction(0) in roots

    def test_lowest_degree_pivot_preference(self):
        lam = UniPoly.variable()
        one = UniPoly.one()
        pivots = poly_matrix_pivots([[lam, one], [one, lam]])
        # the degree-0 entry is chosen first even though it sits in row 1
        assert pivots[0] == one

    def test_drop_set_containment_random(self):
        rng = random.Random(23)
        for _ in range(25):
            rows = rng.randint(1, 3)
            cols = rng.randint(1, 3)
            mat = [
                [
                    UniPoly([F(rng.randint(-2, 2)) for _ in range(rng.randint(1, 3))])
                    for _ in range(cols)
                ]
                for _ in range(rows)
            ]
            pivots = poly_matrix_pivots(mat)
            generic = len(pivots)
            cand = set()
            for p in pivots:
                cand.update(r for r, _ in rational_roots(p)[0])
            for val in [F(-2), F(-1), F(0), F(1), F(2)]:
                fixed = RatMatrix([[e.eval(val) for e in row] for row in mat])
                if rank(fixed) < generic:
                    assert val in cand


class TestRankModulo:
    def test_irreducible_modulus_rank_drop(self):
        lam = UniPoly.variable()
        mod = UniPoly([1, 0, 1])  # no rational roots
        entry = UniPoly([1, 0, 1])
        out = rank_modulo([[entry]], mod)
        assert out == [(mod.monic(), 0)]

    def test_full_rank_modulo(self):
        mod = UniPoly([1, 0, 1])
        out = rank_modulo([[UniPoly([2, 1])]], mod)
        assert out == [(mod.monic(), 1)]

    def test_splitting_modulus(self):
        # modulus (x^2 - 1) splits when the entry shares only one factor
        mod = UniPoly([-1, 0, 1])
        entry = UniPoly([-1, 1])  # x - 1
        out = dict((str(f), r) for f, r in rank_modulo([[entry]], mod))
        assert out["lambda - 1"] == 0
        assert out["lambda + 1"] == 1


class TestUniPolyBasics:
    def test_divmod_exact(self):
        p = UniPoly([-1, 0, 1])
        q, r = p.divmod(UniPoly([1, 1]))
        assert q == UniPoly([-1, 1])
        assert r.is_zero()

    def test_gcd(self):
        a = UniPoly([-1, 0, 1])  # (x-1)(x+1)
        b = UniPoly([1, 2, 1])  # (x+1)^2
        assert a.gcd(b) == UniPoly([1, 1])

    def test_squarefree_factors(self):
        p = UniPoly([1, 2, 1]) * UniPoly([1, 0, 1])
        factors = squarefree_factors(p)
        assert UniPoly([1, 1]) in factors

    def test_str(self):
        assert str(UniPoly([1, 0, 1])) == "lambda^2 + 1"
        assert str(UniPoly([-1, 0, 1])) == "lambda^2 - 1"
        assert str(UniPoly.zero()) == "0"


class TestSolveHelpers:
    def test_solve_consistent(self):
        m = M([[1, 1], [0, 1]])
        x = solve(m, (F(3), F(1)))
        assert m.apply(x) == (F(3), F(1))

    def test_solve_inconsistent(self):
        assert solve(M([[1, 1], [1, 1]]), (F(0), F(1))) is None

    def test_in_span(self):
        cols = [(F(1), F(0)), (F(0), F(1))]
        assert in_span(cols, (F(5), F(-2)))
        assert not in_span([(F(1), F(1))], (F(1), F(0)))
