#pragma once

#include "hcm/exactla.hpp"
#include "hcm/schurstab.hpp"
#include "hcm/spinvariants.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace hcm {

// A graded polynomial variable: Chern classes c_i (degree 2i), Pontryagin classes p_i
// (degree 4i), the Euler class e (degree 2d) or a formal root x_i (degree 2).
struct Variable {
    std::string family;
    int index = 0;
    int degree = 0;

    [[nodiscard]] static Variable chern(int i);
    [[nodiscard]] static Variable pontryagin(int i);
    [[nodiscard]] static Variable euler(int d);
    [[nodiscard]] static Variable root(int i);
    [[nodiscard]] std::string name() const;  // "c2", "p1", "e", "x3"

    friend auto operator<=>(const Variable& a, const Variable& b) {
        if (auto c = a.family <=> b.family; c != 0) return c;
        return a.index <=> b.index;
    }
    friend bool operator==(const Variable& a, const Variable& b) {
        return a.family == b.family && a.index == b.index;
    }
};

// Variable -> positive exponent.
using Monomial = std::map<Variable, int>;
[[nodiscard]] int monomial_degree(const Monomial& m);
[[nodiscard]] std::string to_string(const Monomial& m);  // "c1^2*c2", "1" when empty

class SymPoly {
public:
    SymPoly() = default;
    explicit SymPoly(const Rational& constant);
    explicit SymPoly(const Variable& v);
    SymPoly(const Monomial& m, const Rational& coefficient);

    [[nodiscard]] const std::map<Monomial, Rational>& terms() const { return terms_; }
    [[nodiscard]] Rational coefficient(const Monomial& m) const;
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] bool is_homogeneous() const;
    // Degree of a homogeneous polynomial; throws ValidationError otherwise or when zero.
    [[nodiscard]] int degree() const;
    // Substitutes a rational value for every variable; throws on a missing one.
    [[nodiscard]] Rational evaluate(const std::map<Variable, Rational>& values) const;
    [[nodiscard]] std::string to_string() const;

    SymPoly& operator+=(const SymPoly& other);
    SymPoly& operator-=(const SymPoly& other);
    SymPoly& operator*=(const Rational& c);
    friend SymPoly operator+(SymPoly a, const SymPoly& b) { return a += b; }
    friend SymPoly operator-(SymPoly a, const SymPoly& b) { return a -= b; }
    friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
    friend SymPoly operator*(const Rational& c, SymPoly a) { return a *= c; }
    friend bool operator==(const SymPoly&, const SymPoly&) = default;

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> terms_;
};

// Power series in one variable, coefficients of t^0..t^order.
struct Series {
    std::vector<Rational> coefficients;

    [[nodiscard]] std::size_t order() const { return coefficients.size() - 1; }
    [[nodiscard]] Rational at(std::size_t k) const;
    [[nodiscard]] Series operator*(const Series& other) const;
    // Multiplicative inverse; throws ValidationError when the constant term is zero.
    [[nodiscard]] Series inverse() const;
    friend bool operator==(const Series&, const Series&) = default;
};

[[nodiscard]] Series sinh_half_series(std::size_t order);  // sinh(t/2)
[[nodiscard]] Series cosh_half_series(std::size_t order);  // cosh(t/2)
// t / tanh(t/2), computed as cosh(t/2) divided by sinh(t/2)/t.
[[nodiscard]] Series ltilde_series(std::size_t order);

// Power sum t_1^n + ... in the Chern classes, from Newton's recurrence.
[[nodiscard]] SymPoly newton_class(int n);
// Bernoulli numbers normalized by t/tanh(t/2) = 2(1 + sum (-1)^{k-1} B_k t^{2k}/(2k)!),
// so that B_1 = 1/6, B_2 = 1/30.
[[nodiscard]] Rational bernoulli(int k);
// Coefficient of t^{2k} in (t/tanh(t/2))/2, equal to (-1)^{k-1} B_k/(2k)!.
[[nodiscard]] Rational ltilde_lambda(int k);

// Number of 0-1 matrices with the given row and column sums.
[[nodiscard]] Integer zero_one_matrix_count(const Partition& rows, const Partition& cols);
// The symmetric function sum t^I over distinct monomials (s_n is the power sum),
// written in the elementary classes of the family ("c" for Chern, "p" for
// Pontryagin); computed by inverting the elementary-to-monomial transition matrix.
[[nodiscard]] SymPoly monomial_class(const Partition& partition, const std::string& family = "c");

// I -> 2^d lambda_{i_1} ... lambda_{i_r} over the partitions I of n.
[[nodiscard]] std::map<Partition, Rational> ltilde_coeffs(int n, int d);
// The degree-n part of the genus as a polynomial in Pontryagin classes.
[[nodiscard]] SymPoly ltilde_class(int n, int d);

// -2 s_{2i-1}(eta)/(2i-1)! = sum_I 2^d lambda_I kappa_I, for d = 2s + 1.
struct KappaBorelRelation {
    int i = 0;
    int d = 0;
    int s = 0;
    int degree = 0;                  // 4i - 2 on both sides
    Rational lhs_coefficient;        // -2/(2i-1)!
    std::map<Partition, Rational> rhs;  // over partitions of i + s
    Rational single_part_coefficient;   // coefficient of kappa_{(i+s)}

    [[nodiscard]] bool single_part_nonzero() const { return single_part_coefficient != 0; }
    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string to_text() const;
};
// Throws ValidationError for even d or i < 1.
[[nodiscard]] KappaBorelRelation kappa_borel_relation(int i, int d);

struct KappaGenerator {
    Monomial monomial;  // in p_j for ceil((d+1)/4) <= j <= d-1 and e
    int kappa_degree = 0;  // |c| - 2d
};
// Monomials c of degree > 2d with kappa degree <= max_degree, sorted by (degree, monomial).
[[nodiscard]] std::vector<KappaGenerator> grw_kappa_degrees(int d, int max_degree);

struct RingComparisonRow {
    int degree = 0;
    std::size_t aut_generators = 0;   // stable ring of the automorphism side
    std::size_t diff_generators = 0;  // kappa generators
};

struct RingComparison {
    int d = 0;
    int max_degree = 0;
    std::vector<RingComparisonRow> rows;  // degrees 1..max_degree
    std::vector<int> odd_aut_degrees;     // aut generators in odd degree
    std::vector<int> diff_surplus_degrees;  // more diff than aut generators
    KappaBorelRelation borel_relation;   // i = 1

    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string to_text() const;
};
// Throws ValidationError for even d.
[[nodiscard]] RingComparison compare_rings(int d, int max_degree, const OutFnTable& table);

}  // namespace hcm
