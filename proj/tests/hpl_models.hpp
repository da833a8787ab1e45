#pragma once

#include "hcm/hpl.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

namespace hcm::testing {

inline SparseVector unit(std::size_t i) { return SparseVector({{i, Rational(1)}}); }

inline int koszul(long a) { return (a & 1) ? -1 : 1; }

// Random complex in degrees lo..hi: each d_n is a random combination of kernel
// vectors of d_{n-1}, so d^2 = 0 by construction.
inline ChainComplex random_complex(std::mt19937_64& rng, int lo, int hi, std::size_t max_dim) {
    std::uniform_int_distribution<std::size_t> dim(0, max_dim);
    std::vector<std::size_t> dims;
    std::vector<std::size_t> offset;
    std::size_t total = 0;
    for (int n = lo; n <= hi; ++n) {
        offset.push_back(total);
        dims.push_back(dim(rng));
        total += dims.back();
    }
    std::vector<int> degrees;
    for (int n = lo; n <= hi; ++n)
        for (std::size_t i = 0; i < dims[std::size_t(n - lo)]; ++i) degrees.push_back(n);
    std::vector<SparseMatrix::Triplet> trip;
    SparseMatrix prev;  // d_{n-1} as a block
    for (int n = lo; n <= hi; ++n) {
        const std::size_t k = std::size_t(n - lo);
        SparseMatrix block(k == 0 ? 0 : dims[k - 1], dims[k]);
        if (k > 0 && dims[k] > 0 && dims[k - 1] > 0) {
            std::vector<SparseVector> ker;
            if (k == 1) {
                for (std::size_t i = 0; i < dims[0]; ++i) ker.push_back(unit(i));
            } else {
                ker = rank_kernel(prev).kernel_basis;
            }
            if (!ker.empty()) {
                const SparseMatrix kmat = SparseMatrix::from_columns(dims[k - 1], ker);
                block = kmat * random_matrix(rng, ker.size(), dims[k], 0.7);
            }
        }
        for (const auto& t : block.triplets())
            trip.push_back({offset[k - 1] + t.row, offset[k] + t.col, t.value});
        prev = block;
    }
    return {degrees, SparseMatrix(total, total, std::move(trip))};
}

// A tensor B(q) with vertical differential (-1)^p 1 x d_B and horizontal part
// t = d_A x 1, which lowers the A-degree p; returns (complex, t).
inline std::pair<ChainComplex, SparseMatrix> tensor_pair(const ChainComplex& a, const ChainComplex& b) {
    const std::size_t na = a.size(), nb = b.size();
    std::vector<int> degrees;
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) degrees.push_back(a.degrees[i] + b.degrees[j]);
    std::vector<SparseMatrix::Triplet> dv, dh;
    for (const auto& t : b.differential.triplets())
        for (std::size_t i = 0; i < na; ++i)
            dv.push_back({i * nb + t.row, i * nb + t.col, Rational(koszul(a.degrees[i])) * t.value});
    for (const auto& t : a.differential.triplets())
        for (std::size_t j = 0; j < nb; ++j) dh.push_back({t.row * nb + j, t.col * nb + j, t.value});
    const std::size_t n = na * nb;
    return {{degrees, SparseMatrix(n, n, std::move(dv))}, SparseMatrix(n, n, std::move(dh))};
}

inline Contraction split_contraction(const ChainComplex& c) {
    return normalize_side_conditions(contraction_from_split(split_complex(c)));
}

inline std::vector<std::size_t> homology_only(const ChainComplex& c, const std::vector<int>& degrees) {
    std::vector<std::size_t> out;
    const auto dims = c.homology_dims();
    for (int deg : degrees) {
        std::size_t v = 0;
        for (const auto& [dd, h] : dims)
            if (dd == deg) v = h;
        out.push_back(v);
    }
    return out;
}

// Model with cycles a, b and a contractible pair x, y with dx = y + w, w a random
// bracket of a and b; projects onto the free algebra on a, b.
struct RandomPair {
    DgLie model, target;
    SparseMatrix projection;
};
inline RandomPair random_pair(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> low(1, 2), coeff(-2, 2);
    const int da = low(rng);
    const int db = da + std::uniform_int_distribution<int>(0, 1)(rng);
    const int dx = std::min(6, da + db + std::uniform_int_distribution<int>(1, 2)(rng));
    const int top = 6;
    const GeneratorSet gens({"a", "b", "y", "x"}, {da, db, dx - 1, dx});
    const auto alg = FreeLieAlgebra::create(gens);
    LieElement w(alg);
    for (std::size_t len = 2; len <= 3; ++len) {
        const auto& basis = alg->basis(len);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].degree != dx - 1) continue;
            bool ab_only = true;
            for (std::size_t pos = 0; pos < len; ++pos)
                if (basis[i].leading.at(pos) >= 2) ab_only = false;
            if (ab_only) w += Rational(coeff(rng)) * LieElement::basis_element(alg, len, i);
        }
    }
    std::vector<LieElement> diff(4, LieElement(alg));
    diff[3] = LieElement::generator(alg, 2) + w;
    RandomPair out;
    out.model = DgLie::free_truncated(gens, top, diff);
    out.target = DgLie::free_truncated(GeneratorSet({"a", "b"}, {da, db}), top);
    std::vector<std::size_t> generators;
    for (const char* name : {"a", "b", "y", "x"}) {
        const auto& nm = out.model.names();
        generators.push_back(std::size_t(std::find(nm.begin(), nm.end(), name) - nm.begin()));
    }
    auto target_index = [&](const char* name) {
        const auto& nm = out.target.names();
        return std::size_t(std::find(nm.begin(), nm.end(), name) - nm.begin());
    };
    std::vector<SparseVector> images{unit(target_index("a")), unit(target_index("b")), {}, {}};
    const SparseMatrix partial = extend_morphism(out.model, generators, out.target, images);
    const SparseVector wv = out.model.differential(generators[3]) - unit(generators[2]);
    images[2] = Rational(-1) * partial.apply(wv);
    out.projection = extend_morphism(out.model, generators, out.target, images);
    return out;
}

// Brute-force check of the arity-2 and arity-3 relations of an L-infinity morphism
// between dg Lie algebras, in the suspended symmetric convention:
// Q1(sa) = -s da, Q2(sa, sb) = (-1)^|a| s[a, b], F1 = psi1,
// F2(sa, sb) = (-1)^(|a|+1) s psi2(a, b), F3(sa, sb, sc) = s psi3(a, b, c).
struct LinftyCheck {
    const DgLie& big;
    const DgLie& small;
    const LinftyMorphism& psi;
    std::size_t m() const { return small.size(); }

    SparseVector f1(const SparseVector& a) const { return psi.psi1.apply(a); }
    SparseVector f2(const SparseVector& a, int deg_a, const SparseVector& b) const {
        SparseVector out;
        for (const auto& [i, ci] : a.entries())
            for (const auto& [j, cj] : b.entries())
                out += (ci * cj) * psi.psi2.apply(unit(i * m() + j));
        return Rational(-koszul(deg_a)) * out;
    }
    SparseVector f3(const SparseVector& a, const SparseVector& b, const SparseVector& c) const {
        SparseVector out;
        for (const auto& [i, ci] : a.entries())
            for (const auto& [j, cj] : b.entries())
                for (const auto& [k, ck] : c.entries())
                    out += (ci * cj * ck) * psi.psi3.apply(unit((i * m() + j) * m() + k));
        return out;
    }

    // Unshifted: d psi2(x, y) + psi2(dx, y) + (-1)^|x| psi2(x, dy) = g[x, y] - [gx, gy].
    bool arity_two(std::size_t i, std::size_t j) const {
        auto p2 = [&](const SparseVector& a, const SparseVector& b) {
            SparseVector out;
            for (const auto& [x, cx] : a.entries())
                for (const auto& [y, cy] : b.entries())
                    out += (cx * cy) * psi.psi2.apply(unit(x * m() + y));
            return out;
        };
        const SparseVector lhs = big.differential(p2(unit(i), unit(j))) +
                                 p2(small.differential(i), unit(j)) +
                                 Rational(koszul(small.degree(i))) * p2(unit(i), small.differential(j));
        const SparseVector rhs = f1(small.bracket(i, j)) - big.bracket(f1(unit(i)), f1(unit(j)));
        return lhs == rhs;
    }

    bool arity_three(std::size_t i, std::size_t j, std::size_t k) const {
        const int di = small.degree(i), dj = small.degree(j), dk = small.degree(k);
        const long si = di + 1, sj = dj + 1, sk = dk + 1;
        const SparseVector x = unit(i), y = unit(j), z = unit(k);
        auto q2s = [&](const SparseVector& a, int deg_a, const SparseVector& b) {
            return Rational(koszul(deg_a)) * small.bracket(a, b);
        };
        auto q2b = [&](const SparseVector& a, int deg_a, const SparseVector& b) {
            return Rational(koszul(deg_a)) * big.bracket(a, b);
        };
        SparseVector lhs = Rational(-1) * big.differential(f3(x, y, z));
        lhs += q2b(f1(x), di, f2(y, dj, z));
        lhs += Rational(koszul(si * sj)) * q2b(f1(y), dj, f2(x, di, z));
        lhs += Rational(koszul(sk * (si + sj))) * q2b(f1(z), dk, f2(x, di, y));
        SparseVector rhs = f3(Rational(-1) * small.differential(x), y, z);
        rhs += Rational(koszul(si)) * f3(x, Rational(-1) * small.differential(y), z);
        rhs += Rational(koszul(si + sj)) * f3(x, y, Rational(-1) * small.differential(z));
        rhs += f2(q2s(x, di, y), di + dj, z);
        rhs += Rational(koszul(sj * sk)) * f2(q2s(x, di, z), di + dk, y);
        rhs += Rational(koszul(si * (sj + sk))) * f2(q2s(y, dj, z), dj + dk, x);
        return lhs == rhs;
    }

    // F3 is graded symmetric in the suspended degrees.
    bool symmetric(std::size_t i, std::size_t j, std::size_t k) const {
        const long si = small.degree(i) + 1, sj = small.degree(j) + 1, sk = small.degree(k) + 1;
        const SparseVector base = f3(unit(i), unit(j), unit(k));
        return f3(unit(j), unit(i), unit(k)) == Rational(koszul(si * sj)) * base &&
               f3(unit(i), unit(k), unit(j)) == Rational(koszul(sj * sk)) * base;
    }
};

}  // namespace hcm::testing
