#pragma once

#include "hcm/cechains.hpp"

#include <algorithm>
#include <random>

namespace hcm::testing {

// Truncated free dg Lie algebra on 2-3 generators of degree 1-3. The lowest
// generators are cycles; each other generator is sent to a random element of the
// subalgebra generated by the cycles, so d^2 = 0 holds by construction.
inline DgLie random_truncated_dg_lie(std::mt19937_64& rng, int max_degree) {
    std::uniform_int_distribution<int> count(2, 3);
    std::uniform_int_distribution<int> deg(1, 3);
    std::uniform_int_distribution<int> coeff(-2, 2);
    const int n = count(rng);
    std::vector<int> degrees;
    for (int i = 0; i < n; ++i) degrees.push_back(deg(rng));
    std::sort(degrees.begin(), degrees.end());
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, char('a' + i)));
    const GeneratorSet gens(names, degrees);
    const auto alg = FreeLieAlgebra::create(gens);
    const std::size_t cycles = std::uniform_int_distribution<std::size_t>(1, std::size_t(n) - 1)(rng);
    std::vector<LieElement> diff;
    for (std::size_t i = 0; i < std::size_t(n); ++i) {
        LieElement value(alg);
        if (i >= cycles) {
            for (std::size_t len = 2; len <= 4; ++len) {
                const auto& basis = alg->basis(len);
                for (std::size_t b = 0; b < basis.size(); ++b) {
                    if (basis[b].degree != degrees[i] - 1) continue;
                    bool only_cycles = true;
                    for (std::size_t pos = 0; pos < len; ++pos)
                        if (basis[b].leading.at(pos) >= cycles) only_cycles = false;
                    if (only_cycles)
                        value += Rational(coeff(rng)) * LieElement::basis_element(alg, len, b);
                }
            }
        }
        diff.push_back(value);
    }
    return DgLie::free_truncated(gens, max_degree, diff);
}

}  // namespace hcm::testing
