#pragma once

#include "hcm/exactla.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hcm {

// Ordered generator symbols with their homological degrees. The order fixes the
// Lyndon order. Module-level operations assume a single common degree; mixed
// degrees are accepted for auxiliary models built by other modules.
class GeneratorSet {
public:
    GeneratorSet(std::vector<std::string> names, int gen_degree);
    GeneratorSet(std::vector<std::string> names, std::vector<int> degrees);

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] const std::string& name(std::size_t i) const { return names_.at(i); }
    [[nodiscard]] int degree(std::size_t i) const { return degrees_.at(i); }
    [[nodiscard]] const std::vector<int>& degrees() const { return degrees_; }
    [[nodiscard]] bool uniform_degree() const;
    // Common generator degree; throws if degrees are mixed.
    [[nodiscard]] int gen_degree() const;
    [[nodiscard]] std::optional<std::size_t> find(std::string_view name) const;

    friend bool operator==(const GeneratorSet&, const GeneratorSet&) = default;

    static constexpr std::size_t kMaxGenerators = 16;

private:
    std::vector<std::string> names_;
    std::vector<int> degrees_;
};

// Word in the generators, packed four bits per letter with the first letter most
// significant, so words of equal length compare lexicographically by code.
struct Word {
    std::uint64_t code = 0;
    std::uint8_t len = 0;

    static constexpr std::size_t kMaxLength = 16;

    static Word letter(std::size_t i) { return Word{i, 1}; }
    [[nodiscard]] std::size_t at(std::size_t pos) const {
        return static_cast<std::size_t>((code >> (4 * (len - 1 - pos))) & 0xF);
    }
    [[nodiscard]] Word concat(Word other) const;
    [[nodiscard]] Word sub(std::size_t pos, std::size_t count) const;

    friend auto operator<=>(const Word& a, const Word& b) {
        if (a.len != b.len) return a.len <=> b.len;
        return a.code <=> b.code;
    }
    friend bool operator==(const Word&, const Word&) = default;
};

// Element of the tensor algebra: sorted (word, coefficient) pairs without zeros.
class Tensor {
public:
    using Term = std::pair<Word, Rational>;

    Tensor() = default;
    explicit Tensor(std::vector<Term> terms);  // normalizes
    static Tensor word(Word w, Rational c = 1) { return Tensor({{w, std::move(c)}}); }

    [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] Rational coeff(Word w) const;

    Tensor& operator+=(const Tensor& o);
    Tensor& operator-=(const Tensor& o);
    Tensor& operator*=(const Rational& s);
    friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
    friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
    friend Tensor operator*(const Rational& s, Tensor a) { return a *= s; }
    friend bool operator==(const Tensor&, const Tensor&) = default;

    // Concatenation product.
    [[nodiscard]] Tensor times(const Tensor& o) const;
    void add_scaled(const Tensor& o, const Rational& s);

private:
    std::vector<Term> terms_;
};

// Basis element of a free graded Lie algebra: the standard bracketing of a Lyndon
// word, or the self-bracket of an odd-degree one. Its smallest word is `leading`.
struct LieBasisElement {
    Word leading;
    Rational leading_coeff;
    Tensor expansion;
    std::string text;
    int degree = 0;
    bool is_square = false;
};

class FreeLieAlgebra;
using LieAlgebraPtr = std::shared_ptr<const FreeLieAlgebra>;

class FreeLieAlgebra : public std::enable_shared_from_this<FreeLieAlgebra> {
public:
    static LieAlgebraPtr create(GeneratorSet gens);

    [[nodiscard]] const GeneratorSet& generators() const { return gens_; }
    [[nodiscard]] std::size_t rank() const { return gens_.size(); }

    // Basis of the word-length-k component in increasing order of leading word.
    [[nodiscard]] const std::vector<LieBasisElement>& basis(std::size_t length) const;
    [[nodiscard]] std::optional<std::size_t> basis_index(Word leading) const;
    [[nodiscard]] int word_degree(Word w) const;
    [[nodiscard]] int word_parity(Word w) const { return word_degree(w) & 1; }

    // Coordinates of a homogeneous-length Lie tensor in basis(length); throws
    // ValidationError if the tensor is not in the image of the Lie algebra.
    [[nodiscard]] SparseVector coordinates(const Tensor& t, std::size_t length) const;
    // Graded commutator xy - (-1)^{|x||y|} yx, word by word.
    [[nodiscard]] Tensor commutator(const Tensor& x, const Tensor& y) const;

    explicit FreeLieAlgebra(GeneratorSet gens);

private:
    struct Level {
        std::vector<LieBasisElement> elements;
        std::map<std::uint64_t, std::size_t> by_leading;
    };
    const Level& level(std::size_t length) const;
    void build_level(std::size_t length) const;

    GeneratorSet gens_;
    mutable std::mutex mutex_;
    mutable std::map<std::size_t, std::unique_ptr<Level>> levels_;
};

// Element of a free graded Lie algebra, stored through its faithful image in the
// tensor algebra. Basis coordinates are recovered on demand.
class LieElement {
public:
    struct Term {
        std::size_t length;
        std::size_t index;
        Rational coeff;
    };

    explicit LieElement(LieAlgebraPtr algebra) : algebra_(std::move(algebra)) {}
    static LieElement generator(LieAlgebraPtr algebra, std::size_t i);
    static LieElement basis_element(LieAlgebraPtr algebra, std::size_t length, std::size_t index);
    // The caller guarantees the tensor is a Lie element.
    static LieElement from_tensor(LieAlgebraPtr algebra, Tensor t);
    static LieElement from_coordinates(LieAlgebraPtr algebra, std::size_t length,
                                       const SparseVector& coords);

    [[nodiscard]] const LieAlgebraPtr& algebra() const { return algebra_; }
    [[nodiscard]] const Tensor& tensor() const { return tensor_; }
    [[nodiscard]] bool is_zero() const { return tensor_.empty(); }
    // Degree and word length when homogeneous (empty for zero or mixed elements).
    [[nodiscard]] std::optional<int> degree() const;
    [[nodiscard]] std::optional<std::size_t> length() const;
    [[nodiscard]] std::vector<Term> terms() const;
    // Coordinates in basis(length) of the given length component.
    [[nodiscard]] SparseVector coordinates(std::size_t length) const;
    [[nodiscard]] std::string to_string() const;

    LieElement& operator+=(const LieElement& o);
    LieElement& operator-=(const LieElement& o);
    LieElement& operator*=(const Rational& s);
    friend LieElement operator+(LieElement a, const LieElement& b) { return a += b; }
    friend LieElement operator-(LieElement a, const LieElement& b) { return a -= b; }
    friend LieElement operator*(const Rational& s, LieElement a) { return a *= s; }
    friend bool operator==(const LieElement& a, const LieElement& b) {
        return a.tensor_ == b.tensor_;
    }

private:
    void check_same(const LieElement& o) const;
    LieAlgebraPtr algebra_;
    Tensor tensor_;
};

[[nodiscard]] LieElement bracket(const LieElement& x, const LieElement& y);

// Image under the algebra map induced by a linear map on generators: generator i
// goes to sum_j images[i][j] * (generator j of target). Degrees must match.
[[nodiscard]] LieElement map_generators(const LieElement& x, const LieAlgebraPtr& target,
                                        std::span<const SparseVector> images);

// Parses sums like "3/2*[e1,f1] - [[e1,f1],e2] + e3".
[[nodiscard]] LieElement parse_lie_element(const LieAlgebraPtr& algebra, std::string_view text);

// Basis of the word-length-k component (Lyndon brackets plus odd self-brackets).
[[nodiscard]] std::vector<LieBasisElement> lyndon_basis(const GeneratorSet& gens, std::size_t k);

// Dimension of the word-length-k component from the graded PBW identity, solved
// degree by degree. Independent of the basis construction.
[[nodiscard]] Integer pbw_dim_oracle(const GeneratorSet& gens, std::size_t k);

// Dimensions of the universal enveloping algebra from Lie dimensions a_1..a_N by
// word length, for generators of degree gen_degree (symmetric on even, exterior on odd).
[[nodiscard]] std::vector<Integer> enveloping_dims(std::span<const std::size_t> lie_dims,
                                                   int gen_degree);

struct Presentation {
    LieAlgebraPtr algebra;
    std::vector<LieElement> relations;
};

// Degreewise model of a quotient of a free Lie algebra by the ideal generated by
// homogeneous relations. Ideal components are kept in tensor-word coordinates and
// split into blocks of a grading for which every relation is homogeneous.
class QuotientLieAlgebra {
public:
    // With allow_rewriting, a single quadratic relation is handled by normal forms in
    // the enveloping algebra; otherwise (and always for ideal dimensions) the ideal is
    // built by closure under brackets with generators.
    explicit QuotientLieAlgebra(Presentation p, bool allow_rewriting = true);
    [[nodiscard]] bool uses_rewriting() const;

    [[nodiscard]] const Presentation& presentation() const { return p_; }
    [[nodiscard]] const LieAlgebraPtr& algebra() const { return p_.algebra; }
    [[nodiscard]] std::size_t ideal_dim(std::size_t length) const;
    [[nodiscard]] std::size_t quotient_dim(std::size_t length) const;
    [[nodiscard]] std::vector<LieElement> ideal_basis(std::size_t length) const;
    [[nodiscard]] bool in_ideal(const Tensor& t, std::size_t length) const;
    // Lyndon basis elements whose classes form a basis of the quotient in this length.
    [[nodiscard]] const std::vector<std::size_t>& quotient_basis(std::size_t length) const;
    // Coordinates of the class of a Lie element in quotient_basis(length).
    [[nodiscard]] SparseVector quotient_coordinates(const Tensor& t, std::size_t length) const;
    // Central elements per word length 1..maxlen, as representatives in the free algebra.
    [[nodiscard]] std::vector<std::vector<LieElement>> center_up_to(std::size_t maxlen) const;

    ~QuotientLieAlgebra();
    QuotientLieAlgebra(QuotientLieAlgebra&&) noexcept;
    QuotientLieAlgebra& operator=(QuotientLieAlgebra&&) noexcept;

private:
    struct Impl;
    Presentation p_;
    std::unique_ptr<Impl> impl_;
};

[[nodiscard]] std::vector<LieElement> ideal_basis(const Presentation& p, std::size_t m);
[[nodiscard]] std::vector<std::size_t> quotient_dims(const Presentation& p, std::size_t maxlen);
[[nodiscard]] std::vector<std::vector<LieElement>> center_up_to(const Presentation& p,
                                                                std::size_t maxlen);

// Degreewise check of the quadratic one-relator Hilbert series: the enveloping
// algebra built from quotient dims must have series 1/(1 - n t + t^2).
struct KoszulCheck {
    std::vector<Integer> enveloping;
    std::vector<Integer> expected;
    bool holds = false;
};
[[nodiscard]] KoszulCheck koszul_hilbert_check(std::span<const std::size_t> quotient_dims,
                                               std::size_t n, int gen_degree);

}  // namespace hcm
