#include <catch_amalgamated.hpp>

#include <random>

#include "amtopo/integer_matrix.hpp"
#include "oracles.hpp"

using namespace amtopo;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, int max_side, int lo = -5, int hi = 5)
{
    std::uniform_int_distribution<int> side(1, max_side);
    std::uniform_int_distribution<int> val(lo, hi);
    std::uniform_int_distribution<int> sparse(0, 2);
    const int r = side(rng);
    const int c = side(rng);
    std::vector<std::vector<long long>> rows(static_cast<std::size_t>(r), std::vector<long long>(static_cast<std::size_t>(c)));
    const bool dense = sparse(rng) == 0;
    for (auto& row : rows) {
        for (auto& x : row) {
            x = (dense || sparse(rng) == 0) ? val(rng) : 0;
        }
    }
    return IntMatrix::from_dense(rows);
}

oracle::Dense dense(const IntMatrix& m)
{
    return m.to_dense();
}

bool is_diagonal_chain(const IntMatrix& S, const std::vector<Integer>& diag)
{
    for (Index j = 0; j < S.cols(); ++j) {
        for (const auto& [i, v] : S.column(j)) {
            if (i != j) {
                return false;
            }
        }
    }
    for (std::size_t k = 0; k < diag.size(); ++k) {
        if (S.get(static_cast<Index>(k), static_cast<Index>(k)) != diag[k] || diag[k] <= 0) {
            return false;
        }
        if (k > 0 && diag[k] % diag[k - 1] != 0) {
            return false;
        }
    }
    return true;
}

bool unimodular(const IntMatrix& M)
{
    const Integer d = oracle::determinant(dense(M));
    return d == 1 || d == -1;
}

}  // namespace

TEST_CASE("snf of a 2x2 example with non-trivial torsion")
{
    const IntMatrix A = IntMatrix::from_dense({{2, 4}, {6, 8}});
    const SnfResult r = snf(A);
    REQUIRE(r.diag == std::vector<Integer>{2, 4});
    CHECK(r.U * A * r.V == r.S);
}

TEST_CASE("snf of the zero matrix and of empty matrices")
{
    const SnfResult z = snf(IntMatrix(3, 2));
    CHECK(z.diag.empty());
    CHECK(z.rank_total == 0);
    CHECK(z.U == IntMatrix::identity(3));
    CHECK(z.V == IntMatrix::identity(2));
    const SnfResult e = snf(IntMatrix(0, 0));
    CHECK(e.diag.empty());
}

TEST_CASE("snf diagonal matches an independent dense reduction on random matrices")
{
    std::mt19937_64 rng(20261015);
    for (int i = 0; i < 300; ++i) {
        const IntMatrix A = random_matrix(rng, 8);
        const SnfResult r = snf(A);
        INFO("matrix " << A);
        CHECK(r.diag == oracle::smith_diagonal(dense(A)));
        CHECK(r.U * A * r.V == r.S);
        CHECK(is_diagonal_chain(r.S, r.diag));
        CHECK(unimodular(r.U));
        CHECK(unimodular(r.V));
    }
}

TEST_CASE("snf diagonal equals determinantal-divisor invariant factors on small matrices")
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 150; ++i) {
        const IntMatrix A = random_matrix(rng, 4, -9, 9);
        CHECK(snf(A).diag == oracle::determinantal_factors(dense(A)));
    }
}

TEST_CASE("rank over the rationals counts the nonzero invariant factors")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const IntMatrix A = random_matrix(rng, 7);
        CHECK(rank_over_rationals(A) == static_cast<Index>(oracle::smith_diagonal(dense(A)).size()));
    }
    CHECK(rank_over_rationals(IntMatrix::from_dense({{2, 4}, {1, 2}})) == 1);
}

TEST_CASE("the operation log replays to U and V and undoes to identities")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 60; ++i) {
        const IntMatrix A = random_matrix(rng, 6);
        const SnfResult r = snf(A);
        const auto [U, V] = replay_ops(r.ops, A.rows(), A.cols());
        CHECK(U == r.U);
        CHECK(V == r.V);
        const auto [I1, I2] = undo_ops(r.ops, r.U, r.V);
        CHECK(I1 == IntMatrix::identity(A.rows()));
        CHECK(I2 == IntMatrix::identity(A.cols()));
    }
}

TEST_CASE("partial column snf restores Smith form after one column changes")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> val(-6, 6);
    for (int i = 0; i < 100; ++i) {
        const IntMatrix A = random_matrix(rng, 6);
        const SnfResult base = snf(A);
        IntMatrix B = base.S;
        const Index col = B.cols() - 1;
        SparseVector v;
        for (Index r = 0; r < B.rows(); ++r) {
            v.set(r, val(rng));
        }
        B.column_mut(col) = v;
        const SnfResult r = partial_column_snf(B, col);
        CHECK(r.U * B * r.V == r.S);
        CHECK(r.diag == oracle::smith_diagonal(dense(B)));
        CHECK(unimodular(r.U));
        CHECK(unimodular(r.V));
    }
}

TEST_CASE("partial column snf rejects matrices not in Smith form elsewhere")
{
    const IntMatrix A = IntMatrix::from_dense({{1, 1, 0}, {0, 1, 0}});
    CHECK_THROWS_AS(partial_column_snf(A, 2), std::invalid_argument);
    CHECK_THROWS_AS(partial_column_snf(IntMatrix::identity(2), 5), std::out_of_range);
}

TEST_CASE("matrix products and transposes")
{
    const IntMatrix A = IntMatrix::from_dense({{1, 2, 0}, {0, -1, 3}});
    const IntMatrix B = IntMatrix::from_dense({{1, 0}, {2, 1}, {0, 4}});
    CHECK(A * B == IntMatrix::from_dense({{5, 2}, {-2, 11}}));
    CHECK(A.transpose().transpose() == A);
    CHECK(A.nonzeros() == 4);
    CHECK(IntMatrix::identity(3) * B == B);
}
