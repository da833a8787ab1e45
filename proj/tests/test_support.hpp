#pragma once

#include "hcm/exactla.hpp"

#include <random>
#include <vector>

namespace hcm::testing {

// Plain rational Gaussian elimination, kept deliberately naive as an oracle.
inline std::size_t naive_rank(std::vector<std::vector<Rational>> a) {
    std::size_t rank = 0;
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

inline SparseMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                  double density, int range = 3) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> val(-range, range);
    std::uniform_int_distribution<int> den(1, 3);
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (coin(rng) < density) {
                Rational q(val(rng), den(rng));
                q.canonicalize();
                if (q != 0) trip.push_back({r, c, q});
            }
    return SparseMatrix(rows, cols, std::move(trip));
}

// Random matrix of prescribed rank at most r, built as a product of two factors.
inline SparseMatrix random_low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                    std::size_t r, double density) {
    return random_matrix(rng, rows, r, density) * random_matrix(rng, r, cols, density);
}

}  // namespace hcm::testing
