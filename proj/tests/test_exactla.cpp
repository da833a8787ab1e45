#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/exactla.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <random>
#include <sstream>

using namespace hcm;
using hcm::testing::naive_rank;
using hcm::testing::random_low_rank;
using hcm::testing::random_matrix;

namespace {

void check_kernel(const SparseMatrix& m, const RankKernel& rk) {
    CHECK(rk.rank + rk.kernel_basis.size() == m.cols());
    for (const auto& v : rk.kernel_basis) {
        CHECK(m.apply(v).empty());
        for (const auto& e : v.entries()) CHECK(e.second != 0);
    }
    // Independence: the kernel vectors have full rank as rows.
    if (!rk.kernel_basis.empty()) {
        auto k = SparseMatrix::from_rows(m.cols(), rk.kernel_basis);
        CHECK(rank(k) == rk.kernel_basis.size());
    }
}

}  // namespace

TEST_CASE("rank_kernel of small fixed matrices") {
    SUBCASE("empty matrix") {
        auto rk = rank_kernel(SparseMatrix(0, 0));
        CHECK(rk.rank == 0);
        CHECK(rk.kernel_basis.empty());
    }
    SUBCASE("identity") {
        auto rk = rank_kernel(SparseMatrix::identity(2));
        CHECK(rk.rank == 2);
        CHECK(rk.kernel_basis.empty());
    }
    SUBCASE("rank one 2x2") {
        auto m = SparseMatrix::from_dense({{1, 2}, {2, 4}});
        auto rk = rank_kernel(m);
        CHECK(rk.rank == 1);
        REQUIRE(rk.kernel_basis.size() == 1);
        // Kernel of x + 2y = 0 is spanned by (2,-1) up to scale.
        CHECK(rk.kernel_basis[0] == SparseVector({{0, Rational(2)}, {1, Rational(-1)}}));
        check_kernel(m, rk);
    }
    SUBCASE("zero rows and columns") {
        SparseMatrix m(3, 4);
        auto rk = rank_kernel(m);
        CHECK(rk.rank == 0);
        CHECK(rk.kernel_basis.size() == 4);
        check_kernel(m, rk);
    }
}

TEST_CASE("rank agrees with naive elimination and with the transpose") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<int> dim(1, 14);
        const std::size_t rows = dim(rng);
        const std::size_t cols = dim(rng);
        const std::size_t r = std::uniform_int_distribution<int>(1, 6)(rng);
        const double density = trial % 3 == 0 ? 0.9 : 0.35;
        SparseMatrix m = trial % 2 == 0 ? random_low_rank(rng, rows, cols, r, density)
                                        : random_matrix(rng, rows, cols, density);
        const auto expected = naive_rank(m.to_dense());
        CHECK(rank(m) == expected);
        CHECK(rank(m.transpose()) == expected);
        auto rk = rank_kernel(m);
        CHECK(rk.rank == expected);
        check_kernel(m, rk);
    }
}

TEST_CASE("dense fallback agrees with sparse elimination") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        SparseMatrix m = random_low_rank(rng, 30, 30, 12, 1.0);
        CHECK(rank(m) == naive_rank(m.to_dense()));
        check_kernel(m, rank_kernel(m));
    }
}

TEST_CASE("rank_kernel is independent of entry insertion order") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        SparseMatrix m = random_low_rank(rng, 9, 11, 4, 0.5);
        auto trip = m.triplets();
        std::shuffle(trip.begin(), trip.end(), rng);
        SparseMatrix shuffled(m.rows(), m.cols(), trip);
        CHECK(shuffled == m);
        auto a = rank_kernel(m);
        auto b = rank_kernel(shuffled);
        CHECK(a.rank == b.rank);
        CHECK(a.kernel_basis == b.kernel_basis);
    }
}

TEST_CASE("homology_dims") {
    SUBCASE("zero maps give the middle dimension") {
        ComplexSlice s{SparseMatrix(5, 2), SparseMatrix(3, 5)};
        CHECK(homology_dims(s) == 5);
    }
    SUBCASE("exact slice gives zero") {
        // C_1 = Q -> C_0 = Q^2 -> C_-1 = Q, image of d_in equals kernel of d_out.
        ComplexSlice s{SparseMatrix::from_dense({{1}, {-1}}), SparseMatrix::from_dense({{1, 1}})};
        CHECK(homology_dims(s) == 0);
    }
    SUBCASE("one-dimensional abelian Lie algebra in even degree") {
        // The suspension is odd, so the exterior part stops at word length one and
        // the bracket differential vanishes: Lambda^2 = 0, Lambda^1 = Q, Lambda^0 = Q.
        ComplexSlice s{SparseMatrix(1, 0), SparseMatrix(1, 1)};
        CHECK(homology_dims(s) == 1);
    }
    SUBCASE("non-complex is rejected") {
        ComplexSlice s{SparseMatrix::identity(2), SparseMatrix::identity(2)};
        CHECK_THROWS_AS((void)homology_dims(s), ValidationError);
    }
}

TEST_CASE("fraction-free elimination never stores zeros") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        SparseMatrix m = random_low_rank(rng, 12, 12, 5, 0.6);
        std::vector<SparseVector> rows;
        for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
        for (bool reduced : {false, true}) {
            auto ech = row_echelon(rows, m.cols(), reduced);
            for (const auto& row : ech.rows)
                for (const auto& e : row.entries()) CHECK(e.second != 0);
            CHECK(std::is_sorted(ech.pivots.begin(), ech.pivots.end()));
        }
    }
}

TEST_CASE("SubspaceBasis coordinates and QuotientSpace projection") {
    std::mt19937_64 rng(9);
    SubspaceBasis basis(6);
    SparseMatrix gens = random_low_rank(rng, 5, 6, 3, 0.8);
    for (std::size_t r = 0; r < gens.rows(); ++r) basis.add(gens.row(r));
    CHECK(basis.dim() == rank(gens));
    SparseVector combo = Rational(2) * gens.row(0) - Rational(1, 3) * gens.row(1);
    auto coords = basis.coordinates(combo);
    SparseVector rebuilt;
    for (std::size_t i = 0; i < coords.size(); ++i) rebuilt += coords[i] * basis.generators()[i];
    CHECK(rebuilt == combo);

    std::vector<SparseVector> rel;
    for (std::size_t r = 0; r < gens.rows(); ++r) rel.push_back(gens.row(r));
    QuotientSpace q(6, rel);
    CHECK(q.dim() == 6 - basis.dim());
    CHECK(q.project(combo).empty());
    SparseVector e5({{5, Rational(1)}});
    SparseVector back = q.lift(q.project(e5));
    CHECK(basis.contains(e5 - back));
}

TEST_CASE("solve_right") {
    auto a = SparseMatrix::from_dense({{1, 2}, {3, 4}, {5, 6}});
    SparseVector x;
    SparseVector b({{0, Rational(5)}, {1, Rational(11)}, {2, Rational(17)}});
    REQUIRE(solve_right(a, b, x));
    CHECK(a.apply(x) == b);
    SparseVector bad({{0, Rational(1)}});
    CHECK_FALSE(solve_right(a, bad, x));
}

TEST_CASE("text format round trip") {
    std::mt19937_64 rng(1);
    SparseMatrix m = random_matrix(rng, 4, 5, 0.5);
    std::stringstream ss;
    write_matrix(ss, m);
    SparseMatrix back = read_matrix(ss);
    CHECK(back == m);
    std::stringstream bad("2 2\n0 0 1/0\n");
    CHECK_THROWS_AS((void)read_matrix(bad), ValidationError);
    std::stringstream oob("2 2\n3 0 1/1\n");
    CHECK_THROWS_AS((void)read_matrix(oob), ValidationError);
}
