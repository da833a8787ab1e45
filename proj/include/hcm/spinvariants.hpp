#pragma once

#include "hcm/cechains.hpp"
#include "hcm/exactla.hpp"
#include "hcm/quadmod.hpp"
#include "hcm/schurstab.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hcm {

// Basis of the Lie algebra of the isometry group of the form on V (symplectic for
// d odd, split orthogonal for d even), as matrices in the module basis. Diagonal
// elements come first. The orthogonal group is disconnected, so for a symmetric
// form a reflection of determinant -1 is carried along and invariants must also be
// fixed by it.
struct LieAlgebraAction {
    std::size_t rank = 0;
    std::vector<SparseMatrix> generators;
    std::optional<SparseMatrix> reflection;

    [[nodiscard]] static LieAlgebraAction preserving(const QuadraticModule& q);
    [[nodiscard]] bool is_diagonal(std::size_t i) const;
};

enum class TensorKind { Tensor, Exterior, Symmetric };

// V^{(x)K}, Lambda^K V or Sym^K V (V ungraded), with basis the index tuples that are
// arbitrary, strictly increasing or non-decreasing respectively.
struct TensorSpace {
    std::size_t rank = 0;
    std::size_t slots = 0;
    TensorKind kind = TensorKind::Tensor;

    [[nodiscard]] std::vector<std::vector<std::size_t>> basis() const;
    // Base-rank encoding of a tuple; the index used for vectors in V^{(x)K}.
    [[nodiscard]] std::size_t encode(const std::vector<std::size_t>& tuple) const;
};

struct InvariantSpace {
    std::vector<std::vector<std::size_t>> tuples;  // tuples of the weight-zero basis used
    std::vector<SparseVector> basis;               // invariants, coordinates over tuples
    [[nodiscard]] std::size_t dim() const { return basis.size(); }
    // Invariants as vectors indexed by TensorSpace::encode.
    [[nodiscard]] std::vector<SparseVector> encoded(const TensorSpace& space) const;
};

// Joint kernel of the action on a tensor space. Basis tuples with a nonzero weight
// under some diagonal generator are discarded first; the remaining generators are
// then stacked into one column-sparse system.
[[nodiscard]] InvariantSpace invariants_kernel(const TensorSpace& space,
                                               const LieAlgebraAction& action);

// Perfect matching on K slots; pairs (i, j) with i < j sorted by i. decoration
// optionally assigns each slot a position (for example a CE factor).
struct MatchingDiagram {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> decoration;
    int sign = 1;

    [[nodiscard]] std::size_t slots() const { return 2 * pairs.size(); }
    [[nodiscard]] std::size_t partner(std::size_t slot) const;
    // Image under the slot permutation i -> perm[i]; each pair whose order flips
    // contributes form_sign (the symmetry sign of the form).
    [[nodiscard]] MatchingDiagram permuted(const std::vector<std::size_t>& perm,
                                           int form_sign) const;
    friend bool operator==(const MatchingDiagram& a, const MatchingDiagram& b) {
        return a.pairs == b.pairs;  // equality of shapes; signs compared separately
    }
};

// All (K-1)!! matchings on K slots in lexicographic order. Throws for odd K or a
// decoration of the wrong length.
[[nodiscard]] std::vector<MatchingDiagram> matchings_span(std::size_t slots,
                                                          std::vector<std::size_t> decoration = {});
// The matching as a tensor: each pair (i, j) carries sum_ab (G^-1)_ab e_a (x) e_b.
[[nodiscard]] SparseVector evaluate(const MatchingDiagram& m, const QuadraticModule& q);
// Pairing of two matching tensors under the form on every slot, from loop counting:
// each loop contributes n = 2g and a sign from its orientation.
[[nodiscard]] Integer gram_entry(const MatchingDiagram& a, const MatchingDiagram& b,
                                 std::size_t g, int d);
[[nodiscard]] SparseMatrix gram_matrix(const std::vector<MatchingDiagram>& diagrams,
                                       std::size_t g, int d);
[[nodiscard]] std::size_t gram_rank(const std::vector<MatchingDiagram>& diagrams, std::size_t g,
                                    int d);
// Character of the slot-permutation action on the span of the matchings, assuming
// they are independent (2g >= K).
[[nodiscard]] SymRep matching_character(int slots, int d);

// Invariant part of the CE chains of the positive omega-derivations of the
// hyperbolic module, with chains built through degree max_degree + 1.
class InvariantCEComplex {
public:
    // Throws UnstableRangeError when g < stable_genus(d, max_degree).
    InvariantCEComplex(int d, std::size_t g, int max_degree);

    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] std::size_t genus() const { return g_; }
    [[nodiscard]] int max_degree() const { return max_degree_; }
    [[nodiscard]] const CEComplex& chains() const { return *chains_; }
    [[nodiscard]] const LieAlgebraAction& action() const { return action_; }

    // Words of total degree n, concatenated over word length.
    [[nodiscard]] const std::vector<CEWord>& basis(int n) const;
    // Number of tensor slots (sum of word lengths) of a word.
    [[nodiscard]] int arity(const CEWord& w) const;
    // Generator i acting on basis(n) as a derivation.
    [[nodiscard]] SparseMatrix action_matrix(std::size_t i, int n) const;
    // The reflection acting on basis(n) factor by factor (d even only).
    [[nodiscard]] std::optional<SparseMatrix> reflection_matrix(int n) const;
    // CE differential from basis(n) to basis(n - 1).
    [[nodiscard]] SparseMatrix differential(int n) const;
    // Invariant chains in basis(n) coordinates.
    [[nodiscard]] const std::vector<SparseVector>& invariants(int n) const;
    // Differential restricted to invariants, in invariant coordinates; throws if an
    // invariant is sent outside the invariants.
    [[nodiscard]] SparseMatrix invariant_differential(int n) const;

    // Indexed by degree 0..max_degree.
    [[nodiscard]] std::vector<std::size_t> chain_dims() const;
    // Invariant chain dims by (word length p, q = degree - p) through max_degree.
    [[nodiscard]] BigradedDims bigraded_chain_dims() const;
    [[nodiscard]] std::vector<std::size_t> homology_dims() const;

private:
    int d_;
    std::size_t g_;
    int max_degree_;
    LieAlgebraAction action_;
    std::unique_ptr<CEComplex> chains_;
    std::vector<int> element_length_;                 // word length of each Lie basis element
    std::vector<SparseMatrix> element_action_;        // per generator, on the Lie basis
    std::optional<SparseMatrix> element_reflection_;  // the reflection on the Lie basis
    std::map<int, std::vector<CEWord>> basis_;
    std::map<int, std::vector<SparseVector>> invariants_;
    std::map<int, std::vector<std::size_t>> invariant_lengths_;  // word length of each invariant
};

// Smallest g for which every even arity occurring through degree max_degree + 1
// fits in 2g slots.
[[nodiscard]] std::size_t stable_genus(int d, int max_degree);

struct InvariantCEDims {
    std::vector<std::size_t> chain_dims;     // degrees 0..max_degree
    std::vector<std::size_t> homology_dims;  // degrees 0..max_degree
};
[[nodiscard]] InvariantCEDims invariant_ce_complex(int d, std::size_t g, int max_degree);
// Stable invariant chain dims from characters: sum over arities K of the pairing of
// the arity-K CE chains with matching_character(K).
[[nodiscard]] std::vector<Integer> invariant_chain_dims_from_characters(int d, int max_degree);

// Degree 2nd - k of the class attached to H_k(Out F_{n+1}).
[[nodiscard]] int kontsevich_degree(int n, int k, int d);

// Rational homology dims of Out F_{n+1}, supplied by the user.
struct OutFnTable {
    std::map<std::pair<int, int>, std::size_t> dims;  // (n, k) -> dim

    // Parses {"entries": [{"n": 1, "k": 0, "dim": 1}, ...]}; throws ValidationError.
    [[nodiscard]] static OutFnTable from_json(const std::string& text);
    [[nodiscard]] std::string to_json() const;
    void validate() const;
};

enum class GeneratorSource { Borel, Lambda };

struct RingGenerator {
    std::string label;
    int degree = 0;
    GeneratorSource source = GeneratorSource::Borel;
    int n = 0;  // Lambda only
    int k = 0;  // Lambda only
};

struct StableRing {
    int d = 0;
    int max_degree = 0;
    std::vector<RingGenerator> generators;  // sorted by degree, Borel before Lambda
    bool lambda_known = true;               // false for d even

    [[nodiscard]] std::string to_json() const;
};

// Free graded-commutative ring on Borel classes of degree 4i - 2 (d odd) or 4i
// (d even) and, for d odd, one class per basis element of H_k(Out F_{n+1}) in
// degree 2nd - k.
[[nodiscard]] StableRing stable_ring(int d, const OutFnTable& table, int max_degree);
// Coefficients of t^0..t^max_degree of the Poincare series.
[[nodiscard]] std::vector<Integer> poincare_series(const StableRing& ring, int max_degree);

}  // namespace hcm
