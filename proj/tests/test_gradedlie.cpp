#include "doctest.h"
#include "hcm/errors.hpp"
#include "hcm/gradedlie.hpp"

#include <random>

using namespace hcm;

namespace {

std::vector<std::string> hyperbolic_names(std::size_t g) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= g; ++i) names.push_back("e" + std::to_string(i));
    for (std::size_t i = 1; i <= g; ++i) names.push_back("f" + std::to_string(i));
    return names;
}

Presentation hyperbolic_presentation(std::size_t g, int gen_degree) {
    auto alg = FreeLieAlgebra::create(GeneratorSet(hyperbolic_names(g), gen_degree));
    std::string omega;
    for (std::size_t i = 1; i <= g; ++i)
        omega += (i > 1 ? " + " : "") + std::string("[e") + std::to_string(i) + ",f" +
                 std::to_string(i) + "]";
    return {alg, {parse_lie_element(alg, omega)}};
}

// Necklace count (1/k) sum_{j | k} mu(j) n^{k/j}.
long witt(long n, long k) {
    auto mobius = [](long m) {
        long r = 1;
        for (long p = 2; p * p <= m; ++p) {
            if (m % p) continue;
            m /= p;
            if (m % p == 0) return 0L;
            r = -r;
        }
        return m > 1 ? -r : r;
    };
    long acc = 0;
    for (long j = 1; j <= k; ++j) {
        if (k % j) continue;
        long pw = 1;
        for (long i = 0; i < k / j; ++i) pw *= n;
        acc += mobius(j) * pw;
    }
    return acc / k;
}

LieElement random_element(std::mt19937_64& rng, const LieAlgebraPtr& alg, std::size_t length) {
    const auto& basis = alg->basis(length);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    LieElement e(alg);
    for (int t = 0; t < 3; ++t)
        e += Rational(coef(rng)) * LieElement::basis_element(alg, length, pick(rng));
    return e;
}

}  // namespace

TEST_CASE("lyndon_basis sizes") {
    CHECK(lyndon_basis(GeneratorSet({"x", "y"}, 2), 2).size() == 1);
    CHECK(lyndon_basis(GeneratorSet({"x", "y"}, 1), 2).size() == 3);
    CHECK(lyndon_basis(GeneratorSet({"a", "b", "c", "d"}, 2), 3).size() == 20);
    // Even generators: Witt numbers 2,1,2,3,6,9 for two letters.
    const std::vector<std::size_t> witt2{2, 1, 2, 3, 6, 9};
    for (std::size_t k = 1; k <= 6; ++k)
        CHECK(lyndon_basis(GeneratorSet({"x", "y"}, 2), k).size() == witt2[k - 1]);
}

TEST_CASE("basis sizes equal the PBW oracle for both parities") {
    for (int deg : {1, 2, 3, 4}) {
        for (std::size_t n = 1; n <= 6; ++n) {
            std::vector<std::string> names;
            for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
            GeneratorSet gens(names, deg);
            auto alg = FreeLieAlgebra::create(gens);
            for (std::size_t k = 1; k <= (n <= 4 ? 6u : 5u); ++k) {
                CAPTURE(deg);
                CAPTURE(n);
                CAPTURE(k);
                CHECK(Integer(static_cast<unsigned long>(alg->basis(k).size())) ==
                      pbw_dim_oracle(gens, k));
                if (deg % 2 == 0)
                    CHECK(static_cast<long>(alg->basis(k).size()) ==
                          witt(static_cast<long>(n), static_cast<long>(k)));
            }
        }
    }
}

TEST_CASE("pbw_dim_oracle examples") {
    CHECK(pbw_dim_oracle(GeneratorSet({"x", "y"}, 2), 3) == 2);
    CHECK(pbw_dim_oracle(GeneratorSet({"x", "y"}, 1), 1) == 2);
    CHECK(pbw_dim_oracle(GeneratorSet({"x", "y"}, 1), 2) == 3);
}

TEST_CASE("bracket axioms and examples") {
    auto even = FreeLieAlgebra::create(GeneratorSet({"x", "y"}, 2));
    auto odd = FreeLieAlgebra::create(GeneratorSet({"x", "y"}, 1));
    auto xe = LieElement::generator(even, 0);
    auto xo = LieElement::generator(odd, 0);
    CHECK(bracket(xe, xe).is_zero());
    CHECK_FALSE(bracket(xo, xo).is_zero());
    CHECK(bracket(xo, bracket(xo, xo)).is_zero());

    auto h1 = FreeLieAlgebra::create(GeneratorSet({"e", "f"}, 2));
    auto ef = bracket(LieElement::generator(h1, 0), LieElement::generator(h1, 1));
    auto terms = ef.terms();
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].coeff == 1);
    CHECK(ef.to_string() == "[e,f]");

    auto other = FreeLieAlgebra::create(GeneratorSet({"u", "v"}, 2));
    CHECK_THROWS_AS((void)bracket(ef, LieElement::generator(other, 0)), ValidationError);
}

TEST_CASE("graded antisymmetry and Jacobi on random triples") {
    std::mt19937_64 rng(42);
    auto alg = FreeLieAlgebra::create(GeneratorSet({"a", "b", "c"}, {1, 2, 3}));
    std::uniform_int_distribution<std::size_t> len(1, 3);
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random_element(rng, alg, len(rng));
        auto y = random_element(rng, alg, len(rng));
        auto z = random_element(rng, alg, len(rng));
        // Random sums of basis elements of one length need not be degree-homogeneous
        // for mixed generator degrees, so test on homogeneous pieces.
        if (!x.degree() || !y.degree() || !z.degree()) continue;
        const int dx = *x.degree();
        const int dy = *y.degree();
        const int dz = *z.degree();
        auto sgn = [](int e) { return Rational(e % 2 == 0 ? 1 : -1); };
        CHECK(bracket(x, y) == sgn(dx * dy + 1) * bracket(y, x));
        auto jac = sgn(dx * dz) * bracket(x, bracket(y, z)) + sgn(dy * dx) * bracket(y, bracket(z, x)) +
                   sgn(dz * dy) * bracket(z, bracket(x, y));
        CHECK(jac.is_zero());
    }
    auto alg2 = FreeLieAlgebra::create(GeneratorSet({"a", "b", "c"}, 1));
    for (int trial = 0; trial < 100; ++trial) {
        auto x = random_element(rng, alg2, len(rng));
        auto y = random_element(rng, alg2, len(rng));
        auto z = random_element(rng, alg2, len(rng));
        const int dx = *x.degree();
        const int dy = *y.degree();
        const int dz = *z.degree();
        auto sgn = [](int e) { return Rational(e % 2 == 0 ? 1 : -1); };
        auto jac = sgn(dx * dz) * bracket(x, bracket(y, z)) + sgn(dy * dx) * bracket(y, bracket(z, x)) +
                   sgn(dz * dy) * bracket(z, bracket(x, y));
        CHECK(jac.is_zero());
    }
}

TEST_CASE("brackets of integral basis elements have integral coordinates") {
    std::mt19937_64 rng(3);
    for (int deg : {1, 2}) {
        auto alg = FreeLieAlgebra::create(GeneratorSet({"a", "b", "c"}, deg));
        for (int trial = 0; trial < 40; ++trial) {
            std::uniform_int_distribution<std::size_t> len(1, 3);
            const std::size_t l1 = len(rng);
            const std::size_t l2 = len(rng);
            std::uniform_int_distribution<std::size_t> p1(0, alg->basis(l1).size() - 1);
            std::uniform_int_distribution<std::size_t> p2(0, alg->basis(l2).size() - 1);
            auto br = bracket(LieElement::basis_element(alg, l1, p1(rng)),
                              LieElement::basis_element(alg, l2, p2(rng)));
            for (const auto& t : br.terms()) CHECK(t.coeff.get_den() == 1);
        }
    }
}

TEST_CASE("parsing and printing") {
    auto alg = FreeLieAlgebra::create(GeneratorSet(hyperbolic_names(2), 2));
    auto e = parse_lie_element(alg, "3/2*[e1,f1] + [e2,f2] - [[e1,f1],e2]");
    CHECK(parse_lie_element(alg, e.to_string()) == e);
    CHECK(parse_lie_element(alg, "[e1,e1]").is_zero());
    CHECK(parse_lie_element(alg, "[f1,e1]") == Rational(-1) * parse_lie_element(alg, "[e1,f1]"));
    CHECK_THROWS_AS((void)parse_lie_element(alg, "[e1,g1]"), ValidationError);
    CHECK_THROWS_AS((void)parse_lie_element(alg, "[e1,f1"), ValidationError);
    CHECK_THROWS_AS((void)parse_lie_element(alg, "2 [e1,f1]"), ValidationError);
}

TEST_CASE("non-Lie tensors are rejected by coordinates") {
    auto alg = FreeLieAlgebra::create(GeneratorSet({"x", "y"}, 2));
    Tensor t = Tensor::word(Word::letter(0).concat(Word::letter(1)));
    CHECK_THROWS_AS((void)alg->coordinates(t, 2), ValidationError);
}

TEST_CASE("ideals and quotient dimensions") {
    auto alg = FreeLieAlgebra::create(GeneratorSet({"e", "f"}, 2));
    Presentation abelian{alg, {parse_lie_element(alg, "[e,f]")}};
    CHECK(ideal_basis(abelian, 2).size() == 1);
    CHECK(ideal_basis(abelian, 3).size() == 2);
    CHECK(quotient_dims(abelian, 5) == std::vector<std::size_t>{2, 0, 0, 0, 0});

    auto free_alg = FreeLieAlgebra::create(GeneratorSet({"x", "y", "z"}, 2));
    auto dims = quotient_dims(Presentation{free_alg, {}}, 5);
    for (std::size_t k = 1; k <= 5; ++k) CHECK(dims[k - 1] == static_cast<std::size_t>(witt(3, k)));

    for (int deg : {2, 3}) {
        auto p = hyperbolic_presentation(2, deg);
        QuotientLieAlgebra closure(p, false);
        QuotientLieAlgebra rewriting(p, true);
        CHECK(rewriting.uses_rewriting());
        CHECK_FALSE(closure.uses_rewriting());
        std::vector<std::size_t> qd;
        for (std::size_t m = 1; m <= 5; ++m) {
            // The closure dimension and the rank of normal-form images are independent.
            CHECK(closure.quotient_dim(m) == rewriting.quotient_basis(m).size());
            CHECK(closure.quotient_dim(m) + closure.ideal_dim(m) == p.algebra->basis(m).size());
            qd.push_back(closure.quotient_dim(m));
        }
        auto koszul = koszul_hilbert_check(qd, 4, deg);
        CHECK(koszul.holds);
        // Membership tests agree between the two models.
        for (const auto& v : closure.ideal_basis(4)) CHECK(rewriting.in_ideal(v.tensor(), 4));
    }
}

TEST_CASE("Koszul series check detects a wrong dimension list") {
    std::vector<std::size_t> right{4, 5, 16};
    CHECK(koszul_hilbert_check(right, 4, 2).holds);
    std::vector<std::size_t> wrong{4, 5, 15};
    CHECK_FALSE(koszul_hilbert_check(wrong, 4, 2).holds);
}

TEST_CASE("centers") {
    auto alg = FreeLieAlgebra::create(GeneratorSet({"e", "f"}, 2));
    Presentation abelian{alg, {parse_lie_element(alg, "[e,f]")}};
    auto c = center_up_to(abelian, 3);
    CHECK(c[0].size() == 2);
    CHECK(c[1].empty());
    CHECK(c[2].empty());

    auto free_c = center_up_to(Presentation{alg, {}}, 4);
    for (const auto& lvl : free_c) CHECK(lvl.empty());

    for (int deg : {2, 3}) {
        auto p = hyperbolic_presentation(2, deg);
        for (bool rewrite : {false, true}) {
            auto cc = QuotientLieAlgebra(p, rewrite).center_up_to(rewrite ? 6 : 4);
            for (const auto& lvl : cc) CHECK(lvl.empty());
        }
    }
}
