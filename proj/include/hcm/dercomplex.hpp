#pragma once

#include "hcm/exactla.hpp"
#include "hcm/gradedlie.hpp"
#include "hcm/quadmod.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace hcm {

// Homogeneous derivation of a free graded Lie algebra, stored by its values on the
// generators. Value i has degree degree(generator i) + degree().
class Derivation {
public:
    Derivation(LieAlgebraPtr algebra, int degree, std::vector<LieElement> values);
    static Derivation zero(LieAlgebraPtr algebra, int degree);
    // Sends generator i to value and the others to zero.
    static Derivation elementary(LieAlgebraPtr algebra, std::size_t i, const LieElement& value);

    [[nodiscard]] const LieAlgebraPtr& algebra() const { return algebra_; }
    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] const std::vector<LieElement>& values() const { return values_; }
    [[nodiscard]] const LieElement& value(std::size_t i) const { return values_.at(i); }
    [[nodiscard]] bool is_zero() const;

    // Extension to the whole algebra by the graded Leibniz rule.
    [[nodiscard]] Tensor apply(const Tensor& t) const;
    [[nodiscard]] LieElement apply(const LieElement& x) const;

    // "name -> value" per generator with nonzero value, separated by "; ".
    [[nodiscard]] std::string to_string() const;

    Derivation& operator+=(const Derivation& o);
    Derivation& operator-=(const Derivation& o);
    Derivation& operator*=(const Rational& s);
    friend Derivation operator+(Derivation a, const Derivation& b) { return a += b; }
    friend Derivation operator-(Derivation a, const Derivation& b) { return a -= b; }
    friend Derivation operator*(const Rational& s, Derivation a) { return a *= s; }
    friend bool operator==(const Derivation& a, const Derivation& b);

private:
    void check_compatible(const Derivation& o) const;
    LieAlgebraPtr algebra_;
    int degree_;
    std::vector<LieElement> values_;
};

// Graded commutator a o b - (-1)^{|a||b|} b o a.
[[nodiscard]] Derivation der_bracket(const Derivation& a, const Derivation& b);

// theta_{x,xi}(y) = (-1)^{(|xi|-1)(d-1)} <x,y> xi for generators y.
[[nodiscard]] Derivation theta(const QuadraticModule& q, const SparseVector& x, const LieElement& xi);

// a(omega_V).
[[nodiscard]] LieElement ev_omega(const Derivation& a, const QuadraticModule& q);

// Transport along an isometric embedding f: V -> W and its retraction.
[[nodiscard]] Derivation chi_f(const SparseMatrix& f, const QuadraticModule& v,
                               const QuadraticModule& w, const Derivation& a);
[[nodiscard]] Derivation psi_f(const SparseMatrix& f, const QuadraticModule& v,
                               const QuadraticModule& w, const Derivation& b);
// Conjugation by the algebra automorphism induced by an automorphism of the module.
[[nodiscard]] Derivation act(const SparseMatrix& m, const QuadraticModule& q, const Derivation& a);

// Extension by zero along the standard inclusion H_g -> H_{g+1}.
[[nodiscard]] Derivation stabilize(const QuadraticModule& hg, const QuadraticModule& hg1,
                                   const Derivation& a);

// Derivations with values of word length k-1 as vectors: generator i, value
// coordinate j maps to index i * dim L^{k-1} + j.
[[nodiscard]] SparseVector derivation_vector(const Derivation& a, std::size_t k);
[[nodiscard]] Derivation derivation_from_vector(const LieAlgebraPtr& algebra, std::size_t k,
                                                const SparseVector& v);

struct BracketingReport {
    std::size_t source_dim = 0;  // n * dim L^{k-1}
    std::size_t target_dim = 0;  // dim L^k
    std::size_t rank = 0;
    [[nodiscard]] bool surjective() const { return rank == target_dim; }
    [[nodiscard]] std::size_t kernel_dim() const { return source_dim - rank; }
};

// Positive-degree derivations killing omega, word length by word length. The
// word-length-k part is the kernel of V (x) L^{k-1} -> L^k, a -> a(omega).
class OmegaDerivationAlgebra {
public:
    explicit OmegaDerivationAlgebra(QuadraticModule q);

    [[nodiscard]] const QuadraticModule& module() const { return q_; }
    [[nodiscard]] const LieElement& omega() const { return omega_; }
    [[nodiscard]] const std::vector<Derivation>& basis(std::size_t k) const;
    [[nodiscard]] std::size_t dim(std::size_t k) const { return basis(k).size(); }
    [[nodiscard]] const BracketingReport& report(std::size_t k) const;
    [[nodiscard]] int degree(std::size_t k) const;
    // Coordinates in basis(k); throws if a is not in the word-length-k part.
    [[nodiscard]] std::vector<Rational> coordinates(const Derivation& a, std::size_t k) const;

private:
    struct Level {
        std::vector<Derivation> basis;
        BracketingReport report;
        SubspaceBasis span;
    };
    const Level& level(std::size_t k) const;

    QuadraticModule q_;
    LieElement omega_;
    mutable std::mutex mutex_;
    mutable std::map<std::size_t, std::unique_ptr<Level>> levels_;
};

[[nodiscard]] std::vector<Derivation> g_basis(const QuadraticModule& q, std::size_t k);

// The two-term complex L^n -> L, zeta -> sum_{i,j} <e_i,e_j> [alpha_i, zeta_j], with
// L the quotient by omega. One entry per target word length m: source L^{m-1} (x) n,
// target L^m. Degrees follow the shifted labels: target m(d-1) - 2d, source one higher.
struct TwoTermDegree {
    std::size_t word_length = 0;
    int source_degree = 0;
    int target_degree = 0;
    SparseMatrix boundary;
    std::size_t rank = 0;
    [[nodiscard]] bool surjective() const { return rank == boundary.rows(); }
    [[nodiscard]] std::size_t kernel_dim() const { return boundary.cols() - rank; }
};

[[nodiscard]] std::vector<TwoTermDegree> two_term_complex(const QuadraticModule& q,
                                                          std::size_t max_word_length);

}  // namespace hcm
