#include "doctest.h"
#include "hcm/dercomplex.hpp"
#include "hcm/errors.hpp"

#include <random>

using namespace hcm;

namespace {

LieElement random_element(std::mt19937_64& rng, const LieAlgebraPtr& alg, std::size_t k) {
    const auto& basis = alg->basis(k);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    LieElement x(alg);
    for (int t = 0; t < 3; ++t)
        x += Rational(coeff(rng)) * LieElement::basis_element(alg, k, pick(rng));
    return x;
}

SparseVector random_vector(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> coeff(-2, 2);
    std::vector<SparseVector::Entry> e;
    for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, Rational(coeff(rng)));
    return SparseVector(std::move(e));
}

// Derivation with random values of word length k-1 (so word length k overall).
Derivation random_derivation(std::mt19937_64& rng, const LieAlgebraPtr& alg, std::size_t k) {
    std::vector<LieElement> values;
    for (std::size_t i = 0; i < alg->rank(); ++i) values.push_back(random_element(rng, alg, k - 1));
    const int degree = static_cast<int>(k - 2) * alg->generators().degree(0);
    return Derivation(alg, degree, std::move(values));
}

LieElement gen(const QuadraticModule& q, std::size_t i) {
    return LieElement::generator(q.lie_algebra(), i);
}

SparseVector unit(std::size_t i) { return SparseVector({{i, Rational(1)}}); }

std::size_t oracle_dim(const QuadraticModule& q, std::size_t k) {
    const auto& gens = q.lie_algebra()->generators();
    const Integer src = Integer(static_cast<long>(q.rank())) * pbw_dim_oracle(gens, k - 1);
    return static_cast<std::size_t>(Integer(src - pbw_dim_oracle(gens, k)).get_ui());
}

}  // namespace

TEST_CASE("theta examples") {
    const auto h = hyperbolic(1, 3);
    const auto alg = h.lie_algebra();
    const auto xi = parse_lie_element(alg, "[e1,[e1,f1]]");
    const auto t = theta(h, unit(0), xi);
    CHECK(t.value(0).is_zero());
    CHECK(t.value(1) == xi);
    CHECK(t.degree() == 4);
    CHECK(ev_omega(t, h) == parse_lie_element(alg, "[e1,[e1,[e1,f1]]]"));

    const auto te = theta(h, unit(0), gen(h, 0));
    CHECK(te.value(0).is_zero());
    CHECK(te.value(1) == gen(h, 0));
    CHECK(ev_omega(te, h).is_zero());

    const auto xi2 = parse_lie_element(alg, "[f1,[e1,f1]]");
    CHECK(theta(h, unit(0), xi + xi2) == theta(h, unit(0), xi) + theta(h, unit(0), xi2));
    CHECK(ev_omega(Derivation::zero(alg, 2), h).is_zero());
}

TEST_CASE("theta(x, xi) evaluated at omega is [x, xi]") {
    std::mt19937_64 rng(41);
    int checked = 0;
    for (int d : {3, 4, 5, 6}) {
        for (std::size_t g : {1u, 2u}) {
            const auto q = hyperbolic(g, d);
            const auto alg = q.lie_algebra();
            for (int trial = 0; trial < 30; ++trial) {
                const std::size_t k = 1 + trial % 4;
                const auto x = random_vector(rng, q.rank());
                const auto xi = random_element(rng, alg, k);
                LieElement xe(alg);
                for (const auto& [i, c] : x.entries()) xe += c * gen(q, i);
                CHECK(ev_omega(theta(q, x, xi), q) == bracket(xe, xi));
                ++checked;
            }
        }
    }
    CHECK(checked >= 200);
}

TEST_CASE("theta is an isomorphism from V (x) L onto derivations") {
    std::mt19937_64 rng(2);
    for (int d : {3, 4}) {
        const auto q = hyperbolic(2, d);
        const auto alg = q.lie_algebra();
        const SparseMatrix ginv = q.gram_inverse();
        for (int trial = 0; trial < 10; ++trial) {
            const auto a = random_derivation(rng, alg, 3 + trial % 2);
            // x_j with <x_j, y_l> = delta_jl is row j of the inverse gram matrix.
            Derivation rebuilt = Derivation::zero(alg, a.degree());
            for (std::size_t j = 0; j < q.rank(); ++j) {
                if (a.value(j).is_zero()) continue;
                const auto t = theta(q, ginv.row(j), a.value(j));
                // theta carries a sign; it is the same for every j.
                rebuilt += t.value(j) == a.value(j) ? t : Rational(-1) * t;
            }
            CHECK(rebuilt == a);
            const auto v = derivation_vector(a, 3 + trial % 2);
            CHECK(derivation_from_vector(alg, 3 + trial % 2, v) == a);
        }
    }
}

TEST_CASE("derivation bracket") {
    std::mt19937_64 rng(8);
    for (int d : {3, 4}) {
        const auto q = hyperbolic(1, d);
        const auto alg = q.lie_algebra();
        for (int trial = 0; trial < 50; ++trial) {
            const auto a = random_derivation(rng, alg, 2 + trial % 2);
            const auto b = random_derivation(rng, alg, 3);
            const auto c = random_derivation(rng, alg, 2 + (trial / 2) % 2);
            const int da = a.degree(), db = b.degree(), dc = c.degree();
            auto s = [](int e) { return Rational(e % 2 == 0 ? 1 : -1); };
            const auto jac = s(da * dc) * der_bracket(a, der_bracket(b, c)) +
                             s(db * da) * der_bracket(b, der_bracket(c, a)) +
                             s(dc * db) * der_bracket(c, der_bracket(a, b));
            CHECK(jac.is_zero());
            CHECK(der_bracket(a, b) == Rational(-1) * s(da * db) * der_bracket(b, a));
            // The bracket is again a derivation: check Leibniz on a random bracket.
            const auto x = random_element(rng, alg, 1);
            const auto y = random_element(rng, alg, 2);
            const auto ab = der_bracket(a, b);
            const int dx = *x.degree();
            CHECK(ab.apply(bracket(x, y)) ==
                  bracket(ab.apply(x), y) + s(ab.degree() * dx) * bracket(x, ab.apply(y)));
        }
    }
    // Generators of degree 3: word-length-3 derivations have odd degree.
    const auto q = hyperbolic(1, 4);
    const auto alg = q.lie_algebra();
    const auto a = random_derivation(rng, alg, 3);
    REQUIRE(a.degree() % 2 == 1);
    const auto sq = der_bracket(a, a);
    for (std::size_t i = 0; i < alg->rank(); ++i)
        CHECK(sq.value(i) == Rational(2) * a.apply(a.value(i)));
    CHECK_THROWS_AS((void)der_bracket(a, Derivation::zero(hyperbolic(1, 3).lie_algebra(), 0)),
                    ValidationError);
}

TEST_CASE("g_basis dimensions and membership") {
    CHECK(g_basis(hyperbolic(1, 3), 3).empty());
    CHECK(g_basis(hyperbolic(2, 3), 3).size() == 4);
    CHECK(g_basis(hyperbolic(1, 3), 4).size() == 1);
    for (int d : {3, 4, 5}) {
        for (std::size_t g : {1u, 2u}) {
            OmegaDerivationAlgebra gv(hyperbolic(g, d));
            for (std::size_t k = 3; k <= (g == 1 ? 6u : 5u); ++k) {
                CHECK(gv.dim(k) == oracle_dim(gv.module(), k));
                CHECK(gv.report(k).surjective());
                for (const auto& a : gv.basis(k)) {
                    CHECK(a.degree() == gv.degree(k));
                    CHECK(ev_omega(a, gv.module()).is_zero());
                }
            }
        }
    }
    SUBCASE("non-hyperbolic module uses the unsplit kernel") {
        const QuadraticModule m(5, SparseMatrix::from_dense({{0, 1, 0, 0}, {-1, 0, 1, 0},
                                                            {0, -1, 0, 1}, {0, 0, -1, 0}}),
                                {0, 0, 0, 0});
        OmegaDerivationAlgebra gv(m);
        CHECK(gv.dim(3) == oracle_dim(m, 3));
        for (const auto& a : gv.basis(3)) CHECK(ev_omega(a, m).is_zero());
    }
}

TEST_CASE("omega-derivations are closed under bracket") {
    for (int d : {3, 4}) {
        OmegaDerivationAlgebra gv(hyperbolic(2, d));
        const auto& b3 = gv.basis(3);
        const auto& b4 = gv.basis(4);
        for (std::size_t i = 0; i < b3.size(); ++i) {
            for (std::size_t j = 0; j < b3.size(); ++j) {
                const auto c = der_bracket(b3[i], b3[j]);
                CHECK(ev_omega(c, gv.module()).is_zero());
                CHECK_NOTHROW((void)gv.coordinates(c, 4));
            }
        }
        std::mt19937_64 rng(d);
        for (int trial = 0; trial < 10; ++trial) {
            const auto& a = b3[rng() % b3.size()];
            const auto& b = b4[rng() % b4.size()];
            const auto c = der_bracket(a, b);
            CHECK(ev_omega(c, gv.module()).is_zero());
            const auto coords = gv.coordinates(c, 5);
            Derivation back = Derivation::zero(gv.module().lie_algebra(), c.degree());
            for (std::size_t t = 0; t < coords.size(); ++t) back += coords[t] * gv.basis(5)[t];
            CHECK(back == c);
        }
    }
}

TEST_CASE("functoriality along isometric embeddings") {
    std::mt19937_64 rng(13);
    for (int d : {3, 4}) {
        const auto v = hyperbolic(1, d);
        const auto w = hyperbolic(2, d);
        const auto u = hyperbolic(3, d);
        const SparseMatrix incl = hyperbolic_inclusion(1, 2);
        // e -> e1, f -> f1 + e2.
        const SparseMatrix twisted(4, 2, {{0, 0, Rational(1)}, {2, 1, Rational(1)}, {1, 1, Rational(1)}});
        const SparseMatrix incl23 = hyperbolic_inclusion(2, 3);

        SUBCASE("identity") {
            const auto a = random_derivation(rng, v.lie_algebra(), 3);
            CHECK(chi_f(SparseMatrix::identity(2), v, v, a) == a);
            CHECK(psi_f(SparseMatrix::identity(2), v, v, a) == a);
        }
        SUBCASE("standard inclusion extends by zero") {
            const auto a = random_derivation(rng, v.lie_algebra(), 3);
            const auto c = chi_f(incl, v, w, a);
            CHECK(c.value(1).is_zero());
            CHECK(c.value(3).is_zero());
            CHECK(c.value(0) == apply_linear(incl, a.value(0), w));
            CHECK(c.value(2) == apply_linear(incl, a.value(1), w));
            CHECK(stabilize(v, w, a) == c);
        }
        for (const auto* f : {&incl, &twisted}) {
            for (int trial = 0; trial < 25; ++trial) {
                const auto a = random_derivation(rng, v.lie_algebra(), 2 + trial % 3);
                const auto b = random_derivation(rng, v.lie_algebra(), 3);
                const auto ca = chi_f(*f, v, w, a);
                CHECK(psi_f(*f, v, w, ca) == a);
                CHECK(ev_omega(ca, w) == apply_linear(*f, ev_omega(a, v), w));
                CHECK(chi_f(*f, v, w, der_bracket(a, b)) == der_bracket(ca, chi_f(*f, v, w, b)));
                const SparseMatrix comp = incl23 * *f;
                CHECK(chi_f(comp, v, u, a) == chi_f(incl23, w, u, ca));
                // Naturality of theta.
                const auto x = random_vector(rng, 2);
                const auto xi = random_element(rng, v.lie_algebra(), 2);
                CHECK(chi_f(*f, v, w, theta(v, x, xi)) ==
                      theta(w, f->apply(x), apply_linear(*f, xi, w)));
            }
        }
        SUBCASE("retraction kills derivations supported on the complement") {
            // e2, f2 span the complement of the standard inclusion.
            std::vector<LieElement> values(4, LieElement(w.lie_algebra()));
            values[1] = parse_lie_element(w.lie_algebra(), "[e1,e2]");
            values[3] = parse_lie_element(w.lie_algebra(), "[f2,e2]");
            const Derivation b(w.lie_algebra(), d - 1, values);
            CHECK(psi_f(incl, v, w, b).is_zero());
        }
        CHECK_THROWS_AS((void)chi_f(Rational(2) * incl, v, w, Derivation::zero(v.lie_algebra(), 0)),
                        ValidationError);
    }
}

TEST_CASE("automorphism action") {
    std::mt19937_64 rng(19);
    for (int d : {3, 4, 5}) {
        const auto q = hyperbolic(2, d);
        const auto alg = q.lie_algebra();
        const Rational eps = d % 2 == 0 ? 1 : -1;
        const SparseMatrix swap(4, 4, {{2, 0, Rational(1)}, {0, 2, eps}, {1, 1, Rational(1)},
                                       {3, 3, Rational(1)}});
        const SparseMatrix mix(4, 4, {{0, 0, Rational(1)}, {1, 0, Rational(1)}, {1, 1, Rational(1)},
                                      {2, 2, Rational(1)}, {3, 3, Rational(1)}, {2, 3, Rational(-1)}});
        REQUIRE(is_automorphism(q, swap));
        REQUIRE(is_automorphism(q, mix));
        OmegaDerivationAlgebra gv(q);
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = random_derivation(rng, alg, 3);
            const auto b = random_derivation(rng, alg, 3);
            CHECK(act(SparseMatrix::identity(4), q, a) == a);
            CHECK(act(swap * mix, q, a) == act(swap, q, act(mix, q, a)));
            CHECK(act(mix, q, der_bracket(a, b)) == der_bracket(act(mix, q, a), act(mix, q, b)));
            const auto& gb = gv.basis(3 + trial % 2);
            const auto& member = gb[rng() % gb.size()];
            CHECK(ev_omega(act(swap * mix, q, member), q).is_zero());
        }
        CHECK_THROWS_AS((void)act(Rational(2) * SparseMatrix::identity(4), q,
                                  Derivation::zero(alg, 0)),
                        ValidationError);
    }
}

TEST_CASE("stabilization is injective on omega-derivations") {
    for (int d : {3, 4}) {
        const auto h1 = hyperbolic(1, d);
        const auto h2 = hyperbolic(2, d);
        OmegaDerivationAlgebra g1(h1), g2(h2);
        for (std::size_t k = 3; k <= 5; ++k) {
            std::vector<SparseVector> images;
            for (const auto& a : g1.basis(k)) {
                const auto s = stabilize(h1, h2, a);
                CHECK(ev_omega(s, h2).is_zero());
                images.push_back(derivation_vector(s, k));
            }
            if (images.empty()) continue;
            std::size_t cols = 4 * h2.lie_algebra()->basis(k - 1).size();
            CHECK(rank(SparseMatrix::from_rows(cols, images)) == g1.dim(k));
        }
    }
}

TEST_CASE("two-term complex") {
    for (int d : {3, 4}) {
        const auto q = hyperbolic(2, d);
        const auto alg = q.lie_algebra();
        const auto slots = two_term_complex(q, 5);
        REQUIRE(slots.size() == 5);
        CHECK(slots[0].target_degree == -d - 1);
        CHECK_FALSE(slots[0].surjective());
        CHECK(slots[0].boundary.rows() == 4);
        for (std::size_t m = 2; m <= 5; ++m) CHECK(slots[m - 1].surjective());

        // Independent count: derivations of the free algebra preserving the ideal of
        // omega, modulo those with values in the ideal.
        QuotientLieAlgebra closure(Presentation{alg, {omega_element(q)}}, false);
        for (std::size_t m = 2; m <= 5; ++m) {
            SubspaceBasis ideal_m;
            for (const auto& e : closure.ideal_basis(m)) {
                std::vector<SparseVector::Entry> v;
                for (const auto& [w, c] : e.tensor().terms()) v.emplace_back(w.code, c);
                ideal_m.add(SparseVector(std::move(v)));
            }
            std::vector<SparseVector> columns;
            const auto& src = alg->basis(m - 1);
            for (std::size_t i = 0; i < 4; ++i) {
                for (const auto& b : src) {
                    const auto a = Derivation::elementary(alg, i, LieElement::from_tensor(alg, b.expansion));
                    std::vector<SparseVector::Entry> v;
                    const Tensor image = a.apply(omega_element(q).tensor());
                    for (const auto& [w, c] : image.terms())
                        v.emplace_back(w.code, c);
                    columns.push_back(ideal_m.reduce(SparseVector(std::move(v))));
                }
            }
            const auto rk = column_rank_kernel(columns);
            const std::size_t preserving = columns.size() - rk.rank;
            const std::size_t trivial = 4 * closure.ideal_dim(m - 1);
            CHECK(slots[m - 1].kernel_dim() == preserving - trivial);
        }
    }
}
