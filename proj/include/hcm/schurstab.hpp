#pragma once

#include "hcm/exactla.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hcm {

// Partition in non-increasing order; doubles as a cycle type.
using Partition = std::vector<int>;

[[nodiscard]] std::vector<Partition> partitions(int k);
// Order of the centralizer of a permutation of the given cycle type.
[[nodiscard]] Integer centralizer_order(const Partition& cycle_type);
[[nodiscard]] int permutation_sign(const Partition& cycle_type);

// Character of a Sigma_k representation, one value per cycle type.
struct SymRep {
    int k = 0;
    std::map<Partition, Integer> character;

    [[nodiscard]] Integer at(const Partition& cycle_type) const;
    [[nodiscard]] Integer dim() const;
    [[nodiscard]] bool is_zero() const;
    // Multiplicity-style pairing (1/k!) sum chi_a(s) chi_b(s).
    [[nodiscard]] Rational inner_product(const SymRep& other) const;
    // Columns "cycle_type,class_size,value"; cycle types written as 2.1.1.
    [[nodiscard]] std::string to_csv() const;
    friend bool operator==(const SymRep&, const SymRep&) = default;
};

[[nodiscard]] SymRep trivial_rep(int k);
[[nodiscard]] SymRep sign_rep(int k);
[[nodiscard]] SymRep sign_twist(const SymRep& rep);
[[nodiscard]] SymRep operator+(const SymRep& a, const SymRep& b);
[[nodiscard]] SymRep operator-(const SymRep& a, const SymRep& b);
// Induction from the stabilizer of a point, Sigma_{k-1} -> Sigma_k.
[[nodiscard]] SymRep induce_from_point_stabilizer(const SymRep& rep);

// Multilinear part of the free Lie algebra on k letters, by tracing the permutation
// action on the left-normed basis [[x_1, x_a], ..., x_z].
[[nodiscard]] SymRep lie_rep(int k);
// Kernel of the bracketing map Ind Lie(k-1) -> Lie(k), as the character difference.
[[nodiscard]] SymRep u_rep(int k);
// The same kernel computed as an explicit subspace and traced directly.
[[nodiscard]] SymRep u_rep_from_kernel(int k);

// dim(W tensor_{Sigma_k} V^{tensor k}) for V of dimension n; odd V adds the Koszul
// sign of each permutation.
[[nodiscard]] Integer schur_dim(const SymRep& rep, const Integer& n, bool odd = false);

// Graded Sigma-module: components keyed by (arity, degree).
struct GradedSchurFunctor {
    std::map<std::pair<int, int>, SymRep> components;

    // Degree -> dim of the arity-k component as a representation.
    [[nodiscard]] std::map<int, Integer> rep_dims(int k) const;
    // Degree -> dim of the value at an ungraded n-dimensional space, summed over arities.
    [[nodiscard]] std::map<int, Integer> evaluate(const Integer& n) const;
    // Lowest degree of a nonzero arity-k component; INT_MAX when there is none.
    [[nodiscard]] int lowest_degree(int k) const;
};

// The positive part: U(k) in degree (k-2)(d-1) for 3 <= k <= max_arity, sign-twisted
// for d even (evaluation is then on V regarded as ungraded).
[[nodiscard]] GradedSchurFunctor u_tilde(int max_arity, int d);
// Chevalley-Eilenberg chains as a composite: the graded-symmetric algebra on the
// suspension of u_tilde, through the given arity.
[[nodiscard]] GradedSchurFunctor ce_schur(int max_arity, int d);
// Degree -> dim of the arity-k component of ce_schur.
[[nodiscard]] std::map<int, Integer> ce_schur_dims(int k, int d);
// Total degree -> dim of the CE chains of the positive omega-derivations of a rank-n
// form, for degrees 0..max_total_degree.
[[nodiscard]] std::map<int, Integer> ce_chain_dims(int max_total_degree, int d, const Integer& n);
// Smallest integer >= kd/3, the degree below which the arity-k chains vanish.
[[nodiscard]] int ce_degree_floor(int k, int d);

// Stabilization is an isomorphism for g > value() and onto for g == value().
struct StabilityBound {
    int k = 0;    // homological degree
    int ell = 0;  // polynomial degree of the coefficients
    [[nodiscard]] int value() const { return 2 * k + ell + 4; }
    [[nodiscard]] bool is_iso(int g) const { return g > value(); }
    [[nodiscard]] bool is_onto(int g) const { return g >= value(); }
};
// (iso_above, surj_at) for homology in degree k with polynomial coefficients of degree ell.
[[nodiscard]] std::pair<int, int> stability_bounds(int k, int ell);
// Bound for total homology in degree k: 2k + 4.
[[nodiscard]] StabilityBound total_stability_bound(int k);
// Polynomial degree floor(3p/d) of CE p-chains.
[[nodiscard]] int ce_polynomial_degree(int p, int d);
// Bound for group homology in degree q with coefficients in CE p-chains.
[[nodiscard]] StabilityBound ce_stability_bound(int p, int q, int d);

// Degrees 4i - d of the generators pi_i, i >= ceil((d + 1) / 4), up to max_degree.
[[nodiscard]] std::vector<int> pi_degrees(int d, int max_degree);
// Lowest degree of the arity-k part of (C tensor D) with D(k) = Pi^{tensor k}.
[[nodiscard]] int ce_pi_lowest_degree(int k, int d);

// Smallest degree of a polynomial through equally spaced values (-1 for all zero),
// read off from iterated finite differences; throws if no difference vanishes.
[[nodiscard]] int finite_difference_degree(const std::vector<Integer>& values);

}  // namespace hcm
