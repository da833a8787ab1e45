#include "hcm/charclasses.hpp"
#include "hcm/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace hcm;

namespace {

SymPoly c(int i) { return SymPoly(Variable::chern(i)); }

Rational power(const Rational& x, int k) {
    Rational out = 1;
    for (int i = 0; i < k; ++i) out *= x;
    return out;
}

// Elementary symmetric polynomials of the values, e_0..e_top.
std::vector<Rational> elementary(const std::vector<Rational>& xs, int top) {
    std::vector<Rational> e(static_cast<std::size_t>(top) + 1, Rational(0));
    e[0] = 1;
    for (const auto& x : xs) {
        for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += x * e[k - 1];
    }
    return e;
}

std::map<Variable, Rational> class_values(const std::vector<Rational>& xs, int top,
                                          Variable (*make)(int)) {
    const auto e = elementary(xs, top);
    std::map<Variable, Rational> out;
    for (int i = 1; i <= top; ++i) out[make(i)] = e[static_cast<std::size_t>(i)];
    return out;
}

// sum over distinct rearrangements of the exponents I over the values.
Rational monomial_symmetric(const Partition& p, const std::vector<Rational>& xs) {
    std::vector<int> exponents(p.begin(), p.end());
    exponents.resize(xs.size(), 0);
    std::sort(exponents.begin(), exponents.end());
    Rational total = 0;
    do {
        Rational term = 1;
        for (std::size_t j = 0; j < xs.size(); ++j) term *= power(xs[j], exponents[j]);
        total += term;
    } while (std::next_permutation(exponents.begin(), exponents.end()));
    return total;
}

// Bernoulli numbers b_m from sum_{j<=m} C(m+1, j) b_j = 0, b_0 = 1.
std::vector<Rational> classical_bernoulli(int top) {
    std::vector<Rational> b{Rational(1)};
    for (int m = 1; m <= top; ++m) {
        Rational sum = 0;
        Integer binom = 1;  // C(m+1, j)
        for (int j = 0; j < m; ++j) {
            sum += Rational(binom) * b[static_cast<std::size_t>(j)];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        b.push_back(-sum / (m + 1));
    }
    return b;
}

}  // namespace

TEST_CASE("Newton classes") {
    CHECK(newton_class(1) == c(1));
    CHECK(newton_class(2) == c(1) * c(1) - Rational(2) * c(2));
    CHECK(newton_class(3) == c(1) * c(1) * c(1) - Rational(3) * c(1) * c(2) + Rational(3) * c(3));
    CHECK(newton_class(2).to_string() == "c1^2 - 2*c2");
    CHECK_THROWS_AS((void)newton_class(0), ValidationError);

    for (int n = 1; n <= 8; ++n) {
        const SymPoly s = newton_class(n);
        CHECK(s.degree() == 2 * n);
        // s_n = c_1 s_{n-1} - c_2 s_{n-2} + ... + (-1)^{n-1} n c_n
        SymPoly rhs = Rational(n % 2 == 1 ? n : -n) * c(n);
        for (int i = 1; i < n; ++i) rhs += Rational(i % 2 == 1 ? 1 : -1) * (c(i) * newton_class(n - i));
        CHECK(s == rhs);
    }

    // Chern classes of three line bundles are the elementary symmetric functions of
    // their roots; the Newton class is then the power sum.
    const std::vector<Rational> roots{Rational(2), Rational(-1, 3), Rational(5, 7)};
    const auto values = class_values(roots, 8, Variable::chern);
    for (int n = 1; n <= 8; ++n) {
        Rational direct = 0;
        for (const auto& x : roots) direct += power(x, n);
        CHECK(newton_class(n).evaluate(values) == direct);
    }
}

TEST_CASE("Chern character of a sum of line bundles") {
    // ch = rank + sum_k s_k/k!, against the expansion of sum_j exp(x_j t).
    const std::vector<Rational> roots{Rational(1, 2), Rational(3), Rational(-2, 5)};
    const auto values = class_values(roots, 6, Variable::chern);
    for (int k = 0; k <= 6; ++k) {
        Rational direct = 0;
        Rational kfact = 1;
        for (int i = 2; i <= k; ++i) kfact *= i;
        for (const auto& x : roots) direct += power(x, k) / kfact;
        const Rational from_classes =
            k == 0 ? Rational(static_cast<long>(roots.size())) : newton_class(k).evaluate(values) / kfact;
        CHECK(from_classes == direct);
    }
}

TEST_CASE("genus series and Bernoulli numbers") {
    const std::size_t order = 16;
    const Series f = ltilde_series(order);
    // f(t) tanh(t/2) = t, checked as f sinh(t/2) = t cosh(t/2).
    const Series lhs = f * sinh_half_series(order);
    Series rhs{std::vector<Rational>(order + 1, Rational(0))};
    const Series cosh = cosh_half_series(order);
    for (std::size_t k = 1; k <= order; ++k) rhs.coefficients[k] = cosh.at(k - 1);
    CHECK(lhs == rhs);

    CHECK(f.at(0) == 2);
    CHECK(f.at(2) == Rational(1, 6));
    for (std::size_t k = 1; k <= order; k += 2) CHECK(f.at(k) == 0);

    CHECK(ltilde_lambda(1) == Rational(1, 12));
    CHECK(ltilde_lambda(2) == Rational(-1, 720));
    CHECK(bernoulli(1) == Rational(1, 6));
    CHECK(bernoulli(2) == Rational(1, 30));
    CHECK(bernoulli(3) == Rational(1, 42));
    // Secondary table.
    CHECK(bernoulli(4) == Rational(1, 30));
    CHECK(bernoulli(5) == Rational(5, 66));
    CHECK(bernoulli(6) == Rational(691, 2730));

    // Against the classical recurrence: B_k = |b_{2k}|.
    const auto b = classical_bernoulli(16);
    for (int k = 1; k <= 8; ++k) {
        const Rational classical = b[static_cast<std::size_t>(2 * k)];
        CHECK(bernoulli(k) == (classical < 0 ? Rational(-classical) : classical));
        CHECK(ltilde_lambda(k) != 0);
    }

    const Series no_constant{{Rational(0), Rational(1)}};
    CHECK_THROWS_AS((void)no_constant.inverse(), ValidationError);
}

TEST_CASE("monomial symmetric classes") {
    CHECK(zero_one_matrix_count({2, 1}, {1, 1, 1}) == 3);
    CHECK(zero_one_matrix_count({1, 1, 1}, {1, 1, 1}) == 6);
    CHECK(zero_one_matrix_count({3}, {2, 1}) == 0);

    for (int n = 1; n <= 6; ++n) CHECK(monomial_class({n}) == newton_class(n));
    CHECK(monomial_class({1, 1}) == c(2));
    CHECK(monomial_class({2, 1}) == c(1) * c(2) - Rational(3) * c(3));

    const std::vector<Rational> xs{Rational(3), Rational(-1, 2), Rational(2, 3), Rational(5)};
    const auto chern = class_values(xs, 5, Variable::chern);
    const auto pontryagin = class_values(xs, 5, Variable::pontryagin);
    for (int n = 1; n <= 5; ++n) {
        for (const auto& p : partitions(n)) {
            if (p.size() > xs.size()) continue;
            const Rational direct = monomial_symmetric(p, xs);
            CHECK(monomial_class(p, "c").evaluate(chern) == direct);
            CHECK(monomial_class(p, "p").evaluate(pontryagin) == direct);
            CHECK(monomial_class(p, "p").degree() == 4 * n);
        }
    }
    CHECK_THROWS_AS((void)monomial_class({1, 2}), ValidationError);
    CHECK_THROWS_AS((void)monomial_class({1}, "q"), ValidationError);
}

TEST_CASE("genus coefficients") {
    const auto one = ltilde_coeffs(1, 3);
    REQUIRE(one.size() == 1);
    CHECK(one.at({1}) == Rational(2, 3));
    const auto two = ltilde_coeffs(2, 3);
    REQUIRE(two.size() == 2);
    CHECK(two.at({2}) == Rational(-8) / 720);
    CHECK(two.at({1, 1}) == Rational(8) / 144);
    for (int n = 1; n <= 6; ++n) CHECK(ltilde_coeffs(n, 5).at({n}) != 0);
    CHECK_THROWS_AS((void)ltilde_coeffs(0, 3), ValidationError);
    CHECK_THROWS_AS((void)ltilde_coeffs(1, 2), ValidationError);

    // Independent route: expand prod_j f(t_j)/2 in the squared roots and read off the
    // coefficient of x_1^{i_1} ... x_r^{i_r}.
    for (int n = 1; n <= 4; ++n) {
        SymPoly product(Rational(1));
        for (int j = 1; j <= n; ++j) {
            SymPoly factor(Rational(1));
            SymPoly x_power(Rational(1));
            for (int k = 1; k <= n; ++k) {
                x_power = x_power * SymPoly(Variable::root(j));
                factor += ltilde_lambda(k) * x_power;
            }
            product = product * factor;
        }
        for (const auto& [p, coeff] : ltilde_coeffs(n, 3)) {
            Monomial m;
            for (std::size_t j = 0; j < p.size(); ++j) m[Variable::root(static_cast<int>(j) + 1)] = p[j];
            CHECK(Rational(8) * product.coefficient(m) == coeff);
        }
        // The same part as a symmetric function of the Pontryagin roots.
        const std::vector<Rational> xs{Rational(1, 3), Rational(2), Rational(-3, 4), Rational(1, 5)};
        Rational degree_n = 0;
        for (const auto& [m, coeff] : product.terms()) {
            if (monomial_degree(m) != 2 * n) continue;
            Rational term = coeff;
            for (const auto& [v, e] : m) term *= power(xs[static_cast<std::size_t>(v.index - 1)], e);
            degree_n += term;
        }
        std::vector<Rational> used(xs.begin(), xs.begin() + n);
        CHECK(ltilde_class(n, 3).evaluate(class_values(used, n, Variable::pontryagin)) ==
              Rational(8) * degree_n);
    }
}

TEST_CASE("kappa and Borel class relation") {
    const auto r = kappa_borel_relation(1, 3);
    CHECK(r.s == 1);
    CHECK(r.degree == 2);
    CHECK(r.lhs_coefficient == -2);
    CHECK(r.rhs == ltilde_coeffs(2, 3));
    CHECK(r.single_part_coefficient == Rational(-1, 90));
    CHECK(r.single_part_nonzero());

    const auto r5 = kappa_borel_relation(1, 5);
    CHECK(r5.s == 2);
    CHECK(r5.rhs.size() == 3);
    CHECK(r5.single_part_coefficient == Rational(32) * ltilde_lambda(3));
    CHECK(r5.single_part_nonzero());

    for (int d : {3, 5, 7}) {
        for (int i = 1; i <= 4; ++i) {
            const auto rel = kappa_borel_relation(i, d);
            // s_{2i-1} has degree 2(2i-1); kappa_I has degree 4|I| - 2d.
            CHECK(rel.degree == 2 * (2 * i - 1));
            for (const auto& [p, coeff] : rel.rhs) {
                CHECK(4 * std::accumulate(p.begin(), p.end(), 0) - 2 * d == rel.degree);
            }
            CHECK(rel.single_part_nonzero());
        }
    }
    CHECK_THROWS_AS((void)kappa_borel_relation(1, 4), ValidationError);
    CHECK_THROWS_AS((void)kappa_borel_relation(0, 3), ValidationError);
    CHECK(r.to_text().find("kappa_2") != std::string::npos);
    CHECK(r.to_json().find("\"single_part_nonzero\":true") != std::string::npos);
}

TEST_CASE("kappa generators from Pontryagin and Euler classes") {
    const auto gens = grw_kappa_degrees(3, 6);
    std::map<int, std::vector<std::string>> by_degree;
    for (const auto& g : gens) {
        CHECK(g.kappa_degree % 2 == 0);
        CHECK(g.kappa_degree == monomial_degree(g.monomial) - 6);
        by_degree[g.kappa_degree].push_back(to_string(g.monomial));
    }
    CHECK(by_degree[2] == std::vector<std::string>{"p1^2", "p2"});
    CHECK(by_degree[4] == std::vector<std::string>{"e*p1"});
    CHECK(by_degree[6].size() == 3);  // p1^3, p1 p2, e^2

    // Counting by the degrees of the variables.
    for (int d : {3, 5, 7}) {
        const int max_degree = 12;
        std::vector<int> degrees;
        for (int j = (d + 4) / 4; j <= d - 1; ++j) degrees.push_back(4 * j);
        degrees.push_back(2 * d);
        std::vector<long> ways(static_cast<std::size_t>(2 * d + max_degree) + 1, 0);
        ways[0] = 1;
        for (int deg : degrees) {
            const auto step = static_cast<std::size_t>(deg);
            for (std::size_t t = step; t < ways.size(); ++t) ways[t] += ways[t - step];
        }
        std::map<int, long> counted;
        for (const auto& g : grw_kappa_degrees(d, max_degree)) ++counted[g.kappa_degree];
        for (int k = 1; k <= max_degree; ++k) {
            CHECK(counted[k] == ways[static_cast<std::size_t>(2 * d + k)]);
        }
    }
}

TEST_CASE("ring comparison") {
    const auto small = compare_rings(3, 2, OutFnTable{});
    REQUIRE(small.rows.size() == 2);
    CHECK(small.rows[1].degree == 2);
    CHECK(small.rows[1].aut_generators == 1);
    CHECK(small.rows[1].diff_generators == 2);
    CHECK(small.diff_surplus_degrees == std::vector<int>{2});
    CHECK(small.odd_aut_degrees.empty());
    CHECK(small.borel_relation.single_part_nonzero());

    OutFnTable table;
    table.dims[{6, 11}] = 1;
    const auto big = compare_rings(3, 25, table);
    CHECK(std::find(big.odd_aut_degrees.begin(), big.odd_aut_degrees.end(), 25) != big.odd_aut_degrees.end());
    CHECK(compare_rings(3, 25, table).to_json() == big.to_json());
    CHECK(big.to_text().find("not injective): 25") != std::string::npos);

    CHECK_THROWS_AS((void)compare_rings(4, 4, OutFnTable{}), ValidationError);
}
