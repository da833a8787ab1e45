#include "hcm/cechains.hpp"
#include "hcm/dercomplex.hpp"
#include "hcm/errors.hpp"
#include "hcm/quadmod.hpp"
#include "hcm/schurstab.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace hcm;

namespace {

Integer factorial(int k) {
    Integer out = 1;
    for (int i = 2; i <= k; ++i) out *= i;
    return out;
}

int moebius(int n) {
    int out = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        out = -out;
    }
    return n > 1 ? -out : out;
}

// Closed form for the Lie character: nonzero only on permutations whose cycles all
// have the same length m, where it is mu(m) (k/m - 1)! m^(k/m - 1).
Integer lie_character_oracle(const Partition& p) {
    const int m = p.front();
    if (std::any_of(p.begin(), p.end(), [m](int part) { return part != m; })) return 0;
    const int cycles = static_cast<int>(p.size());
    Integer value = moebius(m) * factorial(cycles - 1);
    for (int i = 0; i + 1 < cycles; ++i) value *= m;
    return value;
}

Integer binomial(long n, long r) {
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(r));
    return out;
}

}  // namespace

TEST_CASE("partitions and class sizes") {
    const std::vector<std::size_t> counts{1, 1, 2, 3, 5, 7, 11, 15, 22};
    for (int k = 0; k <= 8; ++k) {
        const auto parts = partitions(k);
        CHECK(parts.size() == counts[static_cast<std::size_t>(k)]);
        Rational total = 0;
        for (const auto& p : parts) {
            CHECK(std::is_sorted(p.begin(), p.end(), std::greater<>()));
            CHECK(std::accumulate(p.begin(), p.end(), 0) == k);
            total += Rational(1) / Rational(centralizer_order(p));
        }
        CHECK(total == 1);
    }
    CHECK(centralizer_order({2, 2, 1}) == 8);
    CHECK(permutation_sign({2, 1}) == -1);
    CHECK(permutation_sign({3}) == 1);
    CHECK_THROWS_AS((void)partitions(-1), ValidationError);
}

TEST_CASE("lie_rep small cases") {
    CHECK(lie_rep(1) == trivial_rep(1));
    CHECK(lie_rep(2) == sign_rep(2));
    const SymRep lie3 = lie_rep(3);
    CHECK(lie3.dim() == 2);
    CHECK(lie3.at({1, 1, 1}) == 2);
    CHECK(lie3.at({2, 1}) == 0);
    CHECK(lie3.at({3}) == -1);
    CHECK_THROWS_AS((void)lie_rep(0), ValidationError);
}

TEST_CASE("lie_rep matches the closed-form character") {
    for (int k = 1; k <= 7; ++k) {
        const SymRep lie = lie_rep(k);
        CHECK(lie.dim() == factorial(k - 1));
        for (const auto& p : partitions(k)) {
            CAPTURE(k);
            CHECK(lie.at(p) == lie_character_oracle(p));
        }
        // The regular-representation multiplicity of the trivial rep is 0 for k >= 2.
        CHECK(lie.inner_product(trivial_rep(k)) == (k == 1 ? 1 : 0));
    }
}

TEST_CASE("u_rep dimensions and small cases") {
    const SymRep u2 = u_rep(2);
    CHECK(u2 == trivial_rep(2));
    CHECK(u_rep(3) == sign_rep(3));
    for (int k = 2; k <= 7; ++k) {
        const SymRep u = u_rep(k);
        CHECK(u.dim() == k * factorial(k - 2) - factorial(k - 1));
        for (const SymRep& other : {trivial_rep(k), sign_rep(k)}) {
            const Rational multiplicity = u.inner_product(other);
            CHECK(multiplicity.get_den() == 1);
            CHECK(multiplicity >= 0);
        }
        for (int n = 0; n <= 8; ++n) {
            CHECK(schur_dim(u, n) >= 0);
            CHECK(schur_dim(u, n, true) >= 0);
        }
    }
    CHECK_THROWS_AS((void)u_rep(1), ValidationError);
}

TEST_CASE("u_rep agrees with the traced bracketing kernel") {
    for (int k = 2; k <= 6; ++k) {
        CAPTURE(k);
        CHECK(u_rep_from_kernel(k) == u_rep(k));
    }
}

TEST_CASE("induction from a point stabilizer") {
    // Ind of the trivial rep is the permutation rep: character = number of fixed points.
    const SymRep perm = induce_from_point_stabilizer(trivial_rep(2));
    CHECK(perm.at({1, 1, 1}) == 3);
    CHECK(perm.at({2, 1}) == 1);
    CHECK(perm.at({3}) == 0);
    // Frobenius reciprocity against the trivial rep.
    for (int k = 2; k <= 6; ++k) {
        const SymRep lie = lie_rep(k - 1);
        CHECK(induce_from_point_stabilizer(lie).inner_product(trivial_rep(k)) ==
              lie.inner_product(trivial_rep(k - 1)));
    }
}

TEST_CASE("schur_dim on symmetric and exterior powers") {
    CHECK(schur_dim(trivial_rep(2), 2) == 3);
    for (int k = 0; k <= 5; ++k) {
        for (long n = 0; n <= 6; ++n) {
            CHECK(schur_dim(trivial_rep(k), n) == binomial(n + k - 1 < 0 ? 0 : n + k - 1, k));
            CHECK(schur_dim(sign_rep(k), n) == binomial(n, k));
            // Odd V swaps the two.
            CHECK(schur_dim(trivial_rep(k), n, true) == binomial(n, k));
        }
    }
    CHECK(schur_dim(u_tilde(3, 3).components.at({3, 2}), 4) == 4);
    CHECK(schur_dim(u_tilde(4, 3).components.at({4, 4}), 2) == 1);
}

TEST_CASE("Schur dims match the bracketing kernel of omega-derivations") {
    for (int d : {3, 4}) {
        const auto twisted = u_tilde(6, d);
        for (std::size_t g = 1; g <= 4; ++g) {
            const QuadraticModule q = hyperbolic(g, d);
            const Integer n = static_cast<long>(2 * g);
            for (int k = 3; k <= 6; ++k) {
                CAPTURE(d);
                CAPTURE(g);
                CAPTURE(k);
                const Integer expected = static_cast<long>(g_basis(q, static_cast<std::size_t>(k)).size());
                const SymRep& component = twisted.components.at({k, (k - 2) * (d - 1)});
                CHECK(schur_dim(component, n) == expected);
                // The twist is the Koszul sign of V in degree d - 1.
                CHECK(schur_dim(u_rep(k), n, d % 2 == 0) == expected);
            }
        }
    }
    CHECK(schur_dim(u_rep(3), 2) == 0);
}

TEST_CASE("ce_schur degree bound and small arities") {
    for (int d : {3, 4, 5, 6}) {
        const auto chains = ce_schur(9, d);
        CHECK(chains.rep_dims(0) == std::map<int, Integer>{{0, 1}});
        CHECK(chains.rep_dims(1).empty());
        CHECK(chains.rep_dims(2).empty());
        CHECK(chains.lowest_degree(3) == d);
        CHECK(chains.lowest_degree(3) == ce_degree_floor(3, d));
        for (int k = 3; k <= 9; ++k) {
            CAPTURE(k);
            CHECK(3 * chains.lowest_degree(k) >= k * d);
        }
    }
    CHECK(ce_schur(6, 3).lowest_degree(6) == 6);
    CHECK(ce_schur_dims(3, 3) == std::map<int, Integer>{{3, 1}});
    CHECK(ce_schur_dims(1, 3).empty());
    CHECK_THROWS_AS((void)ce_schur_dims(-1, 3), ValidationError);
}

TEST_CASE("ce_schur arity 6 splits into one and two generators") {
    // d = 3: one arity-6 generator in degree 9, or two odd arity-3 generators in
    // degree 6. Their product has dim 20 / 2 (induced from Sigma_3 x Sigma_3, then
    // antisymmetrized under the swap).
    const auto dims = ce_schur_dims(6, 3);
    CHECK(dims.at(9) == u_rep(6).dim());
    CHECK(dims.at(6) == 10);
    CHECK(dims.size() == 2);
}

TEST_CASE("ce_schur evaluates to CE chain dims of omega-derivations") {
    for (int d : {3, 4}) {
        for (std::size_t g = 1; g <= 2; ++g) {
            const int max_total = d == 3 ? 8 : 9;
            const auto expected = ce_chain_dims(max_total, d, static_cast<long>(2 * g));
            // The truncated model is exact up to the degree (k - 2)(d - 1) of its top word length.
            const std::size_t max_length = static_cast<std::size_t>((max_total + d - 2) / (d - 1) + 2);
            const DgLie lie = omega_derivation_lie(OmegaDerivationAlgebra(hyperbolic(g, d)), max_length);
            const BigradedDims chains =
                CEComplex(lie, static_cast<std::size_t>(max_total), max_total).chain_dims();
            for (int n = 0; n <= max_total; ++n) {
                CAPTURE(d);
                CAPTURE(g);
                CAPTURE(n);
                const auto it = expected.find(n);
                const Integer value = it == expected.end() ? Integer(0) : it->second;
                CHECK(Integer(static_cast<long>(chains.total(n))) == value);
            }
        }
    }
}

TEST_CASE("CE chain dims are polynomial of degree at most the arity") {
    for (int d : {3, 4}) {
        const auto chains = ce_schur(7, d);
        for (const auto& [key, rep] : chains.components) {
            std::vector<Integer> values;
            for (long n = 0; n <= key.first + 2; ++n) values.push_back(schur_dim(rep, n));
            const int degree = finite_difference_degree(values);
            CHECK(degree <= key.first);
            CHECK(degree >= 0);
        }
    }
}

TEST_CASE("finite_difference_degree") {
    std::vector<Integer> cubic;
    for (long n = 0; n <= 6; ++n) cubic.push_back(n * n * n - 2 * n + 5);
    CHECK(finite_difference_degree(cubic) == 3);
    CHECK(finite_difference_degree({0, 0, 0}) == -1);
    CHECK(finite_difference_degree({7, 7}) == 0);
    CHECK_THROWS_AS((void)finite_difference_degree({1, 2}), ValidationError);
    CHECK_THROWS_AS((void)finite_difference_degree({}), ValidationError);
}

TEST_CASE("stability bounds") {
    CHECK(stability_bounds(0, 0) == std::pair{4, 4});
    CHECK(stability_bounds(1, 0) == std::pair{6, 6});
    CHECK(ce_polynomial_degree(3, 3) == 3);
    CHECK(ce_stability_bound(3, 1, 3).value() == 9);
    CHECK(total_stability_bound(2).value() == 8);
    for (int k = 0; k <= 6; ++k) {
        for (int ell = 0; ell <= 6; ++ell) {
            const StabilityBound bound{k, ell};
            CHECK(bound.value() == 2 * k + ell + 4);
            CHECK(stability_bounds(k, ell) == std::pair{bound.value(), bound.value()});
            CHECK(bound.is_onto(bound.value()));
            CHECK_FALSE(bound.is_iso(bound.value()));
            CHECK(bound.is_iso(bound.value() + 1));
        }
    }
    CHECK_THROWS_AS((void)stability_bounds(-1, 0), ValidationError);
}

TEST_CASE("pi_degrees and the product degree bound") {
    CHECK(pi_degrees(3, 9) == std::vector<int>{1, 5, 9});
    CHECK(pi_degrees(5, 11) == std::vector<int>{3, 7, 11});
    for (int d = 3; d <= 9; ++d) {
        const auto degrees = pi_degrees(d, 40);
        CHECK_FALSE(degrees.empty());
        for (int degree : degrees) {
            CHECK(degree >= 1);
            CHECK((degree + d) % 4 == 0);
        }
    }
    for (int d : {3, 4, 5}) {
        for (int k = 0; k <= 8; ++k) {
            CAPTURE(d);
            CAPTURE(k);
            CHECK(2 * ce_pi_lowest_degree(k, d) >= k);
        }
    }
    CHECK_THROWS_AS((void)pi_degrees(2, 10), ValidationError);
}

TEST_CASE("SymRep CSV and arithmetic") {
    const std::string csv = lie_rep(3).to_csv();
    CHECK(csv == "cycle_type,class_size,value\n3,2,-1\n2.1,3,0\n1.1.1,1,2\n");
    CHECK(sign_twist(sign_twist(lie_rep(4))) == lie_rep(4));
    CHECK((lie_rep(4) + u_rep(4) - u_rep(4)) == lie_rep(4));
    CHECK(SymRep{3, {}}.is_zero());
    CHECK_THROWS_AS((void)(lie_rep(3) + lie_rep(4)), ValidationError);
}
