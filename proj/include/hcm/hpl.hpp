#pragma once

#include "hcm/cechains.hpp"
#include "hcm/exactla.hpp"
#include "hcm/quadmod.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hcm {

// Finite-dimensional graded chain complex over Q. The differential is one square
// matrix on the whole space whose column i is d(e_i).
struct ChainComplex {
    std::vector<int> degrees;
    SparseMatrix differential;

    [[nodiscard]] std::size_t size() const { return degrees.size(); }
    [[nodiscard]] std::vector<int> distinct_degrees() const;
    [[nodiscard]] std::vector<std::size_t> basis_of_degree(int degree) const;
    // Throws ValidationError unless d has degree -1 and squares to zero.
    void validate() const;
    // Homology dimension in each degree of distinct_degrees().
    [[nodiscard]] std::vector<std::pair<int, std::size_t>> homology_dims() const;
};

[[nodiscard]] ChainComplex chain_complex(const DgLie& lie);

// True if m sends each basis element of `source` of degree a into degree a + shift.
[[nodiscard]] bool is_homogeneous(const SparseMatrix& m, const std::vector<int>& source,
                                  const std::vector<int>& target, int shift);

struct SplitData {
    ChainComplex complex;
    SparseMatrix splitting;  // s of degree +1 with d s d = d
};

// Chooses s by sending a basis of each boundary space back to preimages and a
// coordinate complement to zero.
[[nodiscard]] SplitData split_complex(const ChainComplex& c);

// Contraction of `big` onto `small`: f g = 1 and 1 - g f = d h + h d.
struct Contraction {
    ChainComplex big;
    ChainComplex small;
    SparseMatrix f;  // big -> small
    SparseMatrix g;  // small -> big
    SparseMatrix h;  // big -> big, degree +1
    bool side_conditions_normalized = false;  // set when h was rewritten

    // Names of the violated identities (degrees, chain maps, fg = 1, homotopy).
    [[nodiscard]] std::vector<std::string> violations() const;
    // Names of the violated side conditions f h = 0, h g = 0, h h = 0.
    [[nodiscard]] std::vector<std::string> side_condition_violations() const;
    [[nodiscard]] bool is_valid() const { return violations().empty(); }
    [[nodiscard]] bool has_side_conditions() const { return side_condition_violations().empty(); }
};

// Contraction onto homology with f = p, g = nabla and h = s - s s d. The small
// complex has zero differential and one basis element per homology class.
[[nodiscard]] Contraction contraction_from_split(const SplitData& sd);

// Contraction along a surjective quasi-isomorphism f whose kernel is split off by
// a contraction of the kernel; g is a chain section of f.
[[nodiscard]] Contraction contraction_from_surjection(const ChainComplex& big,
                                                      const ChainComplex& small,
                                                      const SparseMatrix& f);

// Replaces h by (dh + hd) h (dh + hd), then by h d h; the result satisfies the
// side conditions and the same homotopy identity.
[[nodiscard]] Contraction normalize_side_conditions(const Contraction& c);

// Chain map between split complexes and its induced map on homology, with a
// homotopy K of degree +1 such that H(F) p_C - p_D F = K d_C.
struct HomotopySquare {
    SparseMatrix induced;   // H(C) -> H(D)
    SparseMatrix homotopy;  // C -> H(D)
};
[[nodiscard]] HomotopySquare homotopy_square(const SplitData& source, const SplitData& target,
                                             const SparseMatrix& map);

struct PerturbedContraction {
    Contraction contraction;           // big differential d + t, small d_H + t'
    SparseMatrix small_perturbation;   // t'
    std::size_t iterations = 0;        // number of nonzero terms in the series
};

// Basic perturbation lemma. With X = sum (-t h)^n and Y = sum (-h t)^n:
// f' = f X, g' = Y g, h' = h X, t' = f X t g. The default iteration bound is the
// degree span of the big complex plus one; a longer series raises DivergenceError.
[[nodiscard]] PerturbedContraction bpl(const Contraction& c, const SparseMatrix& t,
                                       std::optional<std::size_t> max_iterations = std::nullopt);

// Lie morphism out of a dg Lie algebra generated by `generators`, given by the
// images of the generators. Other basis elements are expanded as sums of brackets
// [generator, lower element].
[[nodiscard]] SparseMatrix extend_morphism(const DgLie& source,
                                           const std::vector<std::size_t>& generators,
                                           const DgLie& target,
                                           const std::vector<SparseVector>& images);
[[nodiscard]] bool is_lie_morphism(const DgLie& source, const DgLie& target,
                                   const SparseMatrix& map);

// Derivations of a model with generators V into a target along a morphism, in the
// form s(model) + Hom(V, model) and s(target) + Hom(V, target). Basis: s b_i first,
// then the map v_a -> b_j at index size + a * size + j.
struct DerivationPerturbation {
    Contraction contraction;         // induced by a contraction of model onto target
    SparseMatrix big_perturbation;   // t(s x) = ad_x, t(theta) = -(-1)^|theta| theta d
    SparseMatrix small_perturbation; // the same formulas along f
};
[[nodiscard]] DerivationPerturbation derivation_perturbation(
    const DgLie& model, const std::vector<std::size_t>& generators, const DgLie& target,
    const Contraction& c);

// Model L(alpha_1..alpha_n, rho, gamma) with d gamma = omega - rho of a manifold
// with a disc removed, the free target L(alpha_1..alpha_n), both truncated above
// max_degree, and the projection rho -> omega, gamma -> 0.
struct AttachingModel {
    DgLie model;
    std::vector<std::size_t> generators;  // alpha_1..alpha_n, rho, gamma
    DgLie target;
    SparseMatrix projection;
};
[[nodiscard]] AttachingModel attaching_model(const QuadraticModule& q, int max_degree);

// L-infinity morphism extending g: small -> big for a contraction whose f is a dg
// Lie morphism. psi2(x, y) = h(g[x, y] - [gx, gy]) satisfies
// d psi2 + psi2 d = g[-,-] - [g-, g-]. psi3 is the desuspension of the arity-3
// component of the coalgebra morphism, obtained as H applied to the arity-3 defect
// with H = -s h s^-1, so F3(sx, sy, sz) = s psi3(x, y, z). Column layouts:
// psi2 at i * m + j, psi3 at (i * m + j) * m + k, with m = dim small.
struct LinftyMorphism {
    SparseMatrix psi1;
    SparseMatrix psi2;
    SparseMatrix psi3;  // empty unless max_arity == 3
};
[[nodiscard]] LinftyMorphism linfty_transfer(const DgLie& big, const DgLie& small,
                                             const Contraction& c, int max_arity = 3);

}  // namespace hcm
