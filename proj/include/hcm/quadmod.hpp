#pragma once

#include "hcm/exactla.hpp"
#include "hcm/gradedlie.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hcm {

// The cyclic group generated by the boundary of the fundamental class of S^d in
// pi_{d-1}(SO(d)). Quadratic forms take values in it.
enum class QTargetKind { InfiniteCyclic, OrderTwo, Zero };

[[nodiscard]] QTargetKind qtarget_kind(int d);

// A multiple of the generator, reduced modulo the group order.
struct QValue {
    QTargetKind kind = QTargetKind::Zero;
    Integer multiple = 0;

    static QValue make(QTargetKind kind, Integer multiple);
    [[nodiscard]] bool is_zero() const { return multiple == 0; }
    [[nodiscard]] std::string to_string() const;
    friend bool operator==(const QValue&, const QValue&) = default;
};

// Unimodular (-1)^d-symmetric integral form with a quadratic refinement given by its
// values on the basis. Generators of the associated free Lie algebra have degree d-1.
class QuadraticModule {
public:
    // qvals are multiples of the generator. For d even they must equal half the
    // diagonal of the gram matrix.
    QuadraticModule(int d, SparseMatrix gram, std::vector<Integer> qvals,
                    std::vector<std::string> names = {});

    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] int sign() const { return d_ % 2 == 0 ? 1 : -1; }
    [[nodiscard]] std::size_t rank() const { return gram_.rows(); }
    [[nodiscard]] QTargetKind target_kind() const { return qtarget_kind(d_); }
    [[nodiscard]] const SparseMatrix& gram() const { return gram_; }
    [[nodiscard]] const SparseMatrix& gram_inverse() const { return gram_inv_; }
    [[nodiscard]] const std::vector<Integer>& qvals() const { return qvals_; }
    [[nodiscard]] const std::vector<std::string>& names() const { return names_; }
    [[nodiscard]] const LieAlgebraPtr& lie_algebra() const { return algebra_; }

    [[nodiscard]] Rational pairing(const SparseVector& x, const SparseVector& y) const;
    // Gram matrix of the dual basis: entry (i,j) is <e_i^#, e_j^#>.
    [[nodiscard]] SparseMatrix dual_gram() const;

private:
    int d_;
    SparseMatrix gram_;
    SparseMatrix gram_inv_;
    std::vector<Integer> qvals_;
    std::vector<std::string> names_;
    LieAlgebraPtr algebra_;
};

// Basis e1..eg, f1..fg with <e_i,f_j> = delta_ij and vanishing q on the basis.
[[nodiscard]] QuadraticModule hyperbolic(std::size_t g, int d);

// Basis of the first module followed by the second. Names are kept when disjoint and
// replaced by u1..un otherwise.
[[nodiscard]] QuadraticModule orthogonal_sum(const QuadraticModule& a, const QuadraticModule& b);

// q of the integer vector x, expanded from the basis values by the sum rule.
[[nodiscard]] QValue q_eval(const QuadraticModule& q, const SparseVector& x);

// Whether the matrix (columns are images of basis vectors) preserves both the
// form and q. Throws on size mismatch.
[[nodiscard]] bool is_automorphism(const QuadraticModule& q, const SparseMatrix& m);

// Whether f: V -> W (columns are images) preserves the form.
[[nodiscard]] bool is_isometry(const SparseMatrix& f, const QuadraticModule& v,
                               const QuadraticModule& w);

// The element of L^2(V) dual to the form; integral for hyperbolic modules.
[[nodiscard]] LieElement omega_element(const QuadraticModule& q);

// Pairing of a word-length-2 element with a wedge a^b: <[x,y], a^b> =
// <x,a><y,b> + (-1)^d <y,a><x,b>.
[[nodiscard]] Rational pair_with_wedge(const QuadraticModule& q, const LieElement& x,
                                       const SparseVector& a, const SparseVector& b);

struct AdjointSplitting {
    SparseMatrix adjoint;             // W -> V, left inverse of f
    SparseMatrix complement_projector;  // W -> W, x -> x - f f^! x, image ker f^!
};

// Adjoint of an isometric embedding and the projector onto the orthogonal complement.
[[nodiscard]] AdjointSplitting adjoint_and_complement(const SparseMatrix& f, const QuadraticModule& v,
                                                      const QuadraticModule& w);

// Image of a Lie element under the algebra map induced by f: V -> W.
[[nodiscard]] LieElement apply_linear(const SparseMatrix& f, const LieElement& x,
                                      const QuadraticModule& w);

// Standard inclusion H_g -> H_{g'} for g <= g'.
[[nodiscard]] SparseMatrix hyperbolic_inclusion(std::size_t g, std::size_t g_target);

// JSON form {"d":3,"gram":[[0,1],[-1,0]],"q":[0,0],"names":["e","f"]}; names optional.
[[nodiscard]] QuadraticModule parse_quadratic_module(std::string_view json_text);
[[nodiscard]] std::string to_json(const QuadraticModule& q);

}  // namespace hcm
