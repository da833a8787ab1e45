#pragma once

#include "hcm/dercomplex.hpp"
#include "hcm/exactla.hpp"
#include "hcm/gradedlie.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hcm {

// Finite-dimensional dg Lie algebra over Q given by a homogeneous basis, structure
// constants and a differential of degree -1. Brackets are stored for both orders.
class DgLie {
public:
    DgLie() = default;
    DgLie(std::vector<std::string> names, std::vector<int> degrees);

    // Sets [b_i, b_j] and the graded-antisymmetric value of [b_j, b_i].
    void set_bracket(std::size_t i, std::size_t j, const SparseVector& value);
    void set_differential(std::size_t i, SparseVector value);
    // Degree N above which a truncated model no longer agrees with the algebra it
    // approximates. Unset for algebras that are exact as given.
    void set_truncation_degree(std::optional<int> n) { truncation_ = n; }

    [[nodiscard]] std::size_t size() const { return degrees_.size(); }
    [[nodiscard]] int degree(std::size_t i) const { return degrees_.at(i); }
    [[nodiscard]] const std::vector<int>& degrees() const { return degrees_; }
    [[nodiscard]] const std::string& name(std::size_t i) const { return names_.at(i); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] std::optional<int> truncation_degree() const { return truncation_; }
    [[nodiscard]] bool has_differential() const;
    [[nodiscard]] bool is_abelian() const;
    [[nodiscard]] bool is_positively_graded() const;
    [[nodiscard]] std::vector<std::size_t> basis_of_degree(int degree) const;

    [[nodiscard]] const SparseVector& bracket(std::size_t i, std::size_t j) const;
    [[nodiscard]] SparseVector bracket(const SparseVector& x, const SparseVector& y) const;
    [[nodiscard]] const SparseVector& differential(std::size_t i) const;
    [[nodiscard]] SparseVector differential(const SparseVector& x) const;
    // Degree of a nonzero homogeneous vector; throws if it mixes degrees.
    [[nodiscard]] int degree_of(const SparseVector& x) const;

    // Checks homogeneity, antisymmetry, Jacobi, d^2 = 0 and the Leibniz rule for d.
    // Throws ValidationError naming the first violation.
    void validate() const;

    // Free graded Lie algebra on positive-degree generators modulo the dg ideal
    // spanned by degrees above max_degree and d of degree max_degree + 1. The
    // differential is given on generators (empty for zero).
    static DgLie free_truncated(const GeneratorSet& gens, int max_degree,
                                const std::vector<LieElement>& differential = {});

private:
    std::vector<std::string> names_;
    std::vector<int> degrees_;
    std::vector<SparseVector> brackets_;  // i * size + j
    std::vector<SparseVector> differential_;
    std::optional<int> truncation_;
};

// Homology of a dg Lie algebra with its induced bracket, together with cycle
// representatives (one per basis element of the result).
struct LieHomology {
    DgLie lie;
    std::vector<SparseVector> representatives;
};
[[nodiscard]] LieHomology homology(const DgLie& lie);

// Monomial sx_{i_1} ^ ... ^ sx_{i_p} in normal form: factors sorted by suspended
// degree, then basis index; odd suspended factors appear at most once.
struct CEWord {
    std::vector<std::size_t> factors;
    int degree = 0;  // sum of |x_i| + 1

    [[nodiscard]] std::size_t word_length() const { return factors.size(); }
    friend auto operator<=>(const CEWord& a, const CEWord& b) { return a.factors <=> b.factors; }
    friend bool operator==(const CEWord& a, const CEWord& b) { return a.factors == b.factors; }
};

using CEChain = std::map<CEWord, Rational>;

// Sorts factors into normal form with the Koszul sign of the permutation. Returns
// nothing when an odd suspended factor repeats.
[[nodiscard]] std::optional<std::pair<int, CEWord>> ce_normal_form(const DgLie& lie,
                                                                   std::vector<std::size_t> factors);

// Dimension table over bidegrees (p, q) with total degree n = p + q, carrying the
// window in which the values are exact.
struct BigradedDims {
    std::size_t max_word_length = 0;
    int max_total_degree = 0;
    std::map<std::pair<int, int>, std::size_t> dims;  // (p, q) -> dim, zeros omitted

    [[nodiscard]] std::size_t at(int p, int q) const;
    [[nodiscard]] std::size_t total(int n) const;  // sum over p of dims at (p, n - p)
    [[nodiscard]] std::string to_csv() const;       // header "p,q,dim"
    [[nodiscard]] std::string to_json() const;
    friend bool operator==(const BigradedDims&, const BigradedDims&) = default;
};

// Chevalley-Eilenberg chains (Lambda sL, delta0 + delta1) in the window of word
// length <= max_word_length and total degree <= max_total_degree. One extra layer
// in each direction is built so homology is exact throughout the window.
class CEComplex {
public:
    CEComplex(DgLie lie, std::size_t max_word_length, int max_total_degree);

    [[nodiscard]] const DgLie& lie() const { return lie_; }
    [[nodiscard]] std::size_t max_word_length() const { return pmax_; }
    [[nodiscard]] int max_total_degree() const { return nmax_; }
    [[nodiscard]] int min_total_degree() const { return nmin_; }

    // Words of word length p and total degree n within the built range.
    [[nodiscard]] const std::vector<CEWord>& words(std::size_t p, int n) const;
    [[nodiscard]] std::size_t index_of(const CEWord& w) const;

    // Throws ValidationError for words outside the built range.
    [[nodiscard]] CEChain delta0(const CEWord& w) const;
    [[nodiscard]] CEChain delta1(const CEWord& w) const;
    [[nodiscard]] CEChain differential(const CEWord& w) const;
    [[nodiscard]] CEChain differential(const CEChain& c) const;

    // Matrices from the (p, n) slice to the (p, n - 1) and (p - 1, n - 1) slices.
    [[nodiscard]] SparseMatrix delta0_matrix(std::size_t p, int n) const;
    [[nodiscard]] SparseMatrix delta1_matrix(std::size_t p, int n) const;

    [[nodiscard]] BigradedDims chain_dims() const;

private:
    void check_in_range(const CEWord& w) const;
    CEWord make_word(const std::vector<std::size_t>& sorted) const;
    void add_term(CEChain& out, std::vector<std::size_t> factors, const Rational& c) const;

    DgLie lie_;
    std::size_t pmax_;
    int nmax_;
    int nmin_ = 0;
    std::vector<std::size_t> order_;  // basis sorted by (suspended degree, index)
    std::vector<std::size_t> rank_;   // position of each basis index in order_
    std::map<std::pair<std::size_t, int>, std::vector<CEWord>> slices_;
    std::map<std::vector<std::size_t>, std::size_t> index_;
};

// Bigraded homology for a Lie algebra with zero differential.
[[nodiscard]] BigradedDims ce_homology(const CEComplex& c);
// Homology of the total complex in degrees min_total_degree()..max_total_degree().
// Throws if a word longer than the window could reach these degrees.
[[nodiscard]] std::vector<std::size_t> ce_total_homology(const CEComplex& c);

struct SpectralSequencePages {
    std::vector<BigradedDims> pages;  // pages[r - 1] is E^r
    BigradedDims e_infinity;
    BigradedDims e2_from_homology;  // ce_homology of H(L)
    std::vector<std::size_t> total_homology;  // degrees 0..max_total_degree
    [[nodiscard]] const BigradedDims& page(std::size_t r) const { return pages.at(r - 1); }
    [[nodiscard]] bool e2_agrees() const { return page(2) == e2_from_homology; }
    [[nodiscard]] bool collapses_at_e2() const { return page(2) == e_infinity; }
    [[nodiscard]] bool converges() const;  // E^infinity totals equal total homology
};

// Word-length spectral sequence of a positively graded dg Lie algebra through
// total degree max_total_degree, pages E^1..E^max_page (max_page >= 2).
[[nodiscard]] SpectralSequencePages wordlength_ss(const DgLie& lie, int max_total_degree,
                                                  std::size_t max_page = 3);

// Mapping cone sL + Der L of ad: L -> Der L. Basis: s b_i first (names "s" + name),
// then a basis of Der L degree by degree.
struct MappingCone {
    DgLie lie;
    std::size_t suspension_size = 0;
    std::vector<SparseMatrix> derivations;  // matrix of each Der basis element on L
    [[nodiscard]] std::size_t derivation_index(std::size_t k) const {
        return suspension_size + k;
    }
};
[[nodiscard]] MappingCone cone_der_ad(const DgLie& lie);

// Derivations of a finite-dimensional dg Lie algebra of a given degree, as matrices.
[[nodiscard]] std::vector<SparseMatrix> derivations_of_degree(const DgLie& lie, int degree);

// Degrees >= 2 kept, degree 1 replaced by the cycles, degrees <= 0 removed.
[[nodiscard]] DgLie truncate_positive(const DgLie& lie);

// The positive-degree omega-derivations through word length max_word_length as a
// Lie algebra with zero differential, truncated above that word length.
[[nodiscard]] DgLie omega_derivation_lie(const OmegaDerivationAlgebra& g,
                                         std::size_t max_word_length);

}  // namespace hcm
