#include "hcm/dercomplex.hpp"

#include "hcm/errors.hpp"

#include <sstream>

namespace hcm {

// ---------------------------------------------------------------- Derivation

Derivation::Derivation(LieAlgebraPtr algebra, int degree, std::vector<LieElement> values)
    : algebra_(std::move(algebra)), degree_(degree), values_(std::move(values)) {
    const auto& gens = algebra_->generators();
    if (values_.size() != gens.size()) throw ValidationError("one value per generator required");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i].algebra() != algebra_) throw ValidationError("value in a different algebra");
        if (values_[i].is_zero()) continue;
        const auto deg = values_[i].degree();
        if (!deg || *deg != gens.degree(i) + degree_)
            throw ValidationError("derivation value has the wrong degree");
    }
}

Derivation Derivation::zero(LieAlgebraPtr algebra, int degree) {
    std::vector<LieElement> values(algebra->rank(), LieElement(algebra));
    return Derivation(std::move(algebra), degree, std::move(values));
}

Derivation Derivation::elementary(LieAlgebraPtr algebra, std::size_t i, const LieElement& value) {
    const auto deg = value.degree();
    if (!deg) throw ValidationError("elementary derivation needs a nonzero homogeneous value");
    const int degree = *deg - algebra->generators().degree(i);
    std::vector<LieElement> values(algebra->rank(), LieElement(algebra));
    values.at(i) = value;
    return Derivation(std::move(algebra), degree, std::move(values));
}

bool Derivation::is_zero() const {
    for (const auto& v : values_)
        if (!v.is_zero()) return false;
    return true;
}

Tensor Derivation::apply(const Tensor& t) const {
    std::vector<Tensor::Term> out;
    for (const auto& [w, c] : t.terms()) {
        int prefix_degree = 0;
        for (std::size_t pos = 0; pos < w.len; ++pos) {
            const std::size_t letter = w.at(pos);
            const Tensor& image = values_[letter].tensor();
            if (!image.empty()) {
                const Rational sign = (degree_ * prefix_degree) % 2 == 0 ? 1 : -1;
                const Word left = w.sub(0, pos);
                const Word right = w.sub(pos + 1, w.len - pos - 1);
                for (const auto& [iw, ic] : image.terms())
                    out.emplace_back(left.concat(iw).concat(right), sign * c * ic);
            }
            prefix_degree += algebra_->generators().degree(letter);
        }
    }
    return Tensor(std::move(out));
}

LieElement Derivation::apply(const LieElement& x) const {
    if (x.algebra() != algebra_) throw ValidationError("element in a different algebra");
    return LieElement::from_tensor(algebra_, apply(x.tensor()));
}

std::string Derivation::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (values_[i].is_zero()) continue;
        if (!first) out << "; ";
        out << algebra_->generators().name(i) << " -> " << values_[i].to_string();
        first = false;
    }
    return first ? "0" : out.str();
}

void Derivation::check_compatible(const Derivation& o) const {
    if (o.algebra_ != algebra_) throw ValidationError("derivations of different algebras");
    if (o.degree_ != degree_ && !o.is_zero() && !is_zero())
        throw ValidationError("derivations of different degrees");
}

Derivation& Derivation::operator+=(const Derivation& o) {
    check_compatible(o);
    if (is_zero()) degree_ = o.degree_;
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Derivation& Derivation::operator-=(const Derivation& o) {
    check_compatible(o);
    if (is_zero()) degree_ = o.degree_;
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Derivation& Derivation::operator*=(const Rational& s) {
    for (auto& v : values_) v *= s;
    return *this;
}

bool operator==(const Derivation& a, const Derivation& b) {
    if (a.algebra_ != b.algebra_) return false;
    if (a.is_zero() && b.is_zero()) return true;
    return a.degree_ == b.degree_ && a.values_ == b.values_;
}

// ---------------------------------------------------------------- operations

Derivation der_bracket(const Derivation& a, const Derivation& b) {
    if (a.algebra() != b.algebra()) throw ValidationError("derivations of different algebras");
    const auto& alg = a.algebra();
    const Rational sign = (a.degree() * b.degree()) % 2 == 0 ? 1 : -1;
    std::vector<LieElement> values;
    values.reserve(alg->rank());
    for (std::size_t i = 0; i < alg->rank(); ++i) {
        Tensor t = a.apply(b.value(i).tensor());
        t.add_scaled(b.apply(a.value(i).tensor()), -sign);
        values.push_back(LieElement::from_tensor(alg, std::move(t)));
    }
    return Derivation(alg, a.degree() + b.degree(), std::move(values));
}

Derivation theta(const QuadraticModule& q, const SparseVector& x, const LieElement& xi) {
    const auto& alg = q.lie_algebra();
    if (xi.algebra() != alg) throw ValidationError("element not in the module's Lie algebra");
    if (xi.is_zero()) return Derivation::zero(alg, 0);
    const auto deg = xi.degree();
    if (!deg) throw ValidationError("theta needs a homogeneous element");
    const int d = q.d();
    const Rational sign = ((*deg - 1) * (d - 1)) % 2 == 0 ? 1 : -1;
    std::vector<LieElement> values;
    for (std::size_t y = 0; y < q.rank(); ++y) {
        const Rational c = sign * q.pairing(x, SparseVector({{y, Rational(1)}}));
        values.push_back(c * xi);
    }
    return Derivation(alg, *deg - (d - 1), std::move(values));
}

LieElement ev_omega(const Derivation& a, const QuadraticModule& q) {
    if (a.algebra() != q.lie_algebra()) throw ValidationError("derivation of a different algebra");
    return a.apply(omega_element(q));
}

namespace {

// Values of a as elements of the target algebra under the map on generators.
LieElement map_value(const SparseMatrix& f, const LieElement& x, const QuadraticModule& w) {
    return apply_linear(f, x, w);
}

}  // namespace

Derivation chi_f(const SparseMatrix& f, const QuadraticModule& v, const QuadraticModule& w,
                 const Derivation& a) {
    if (a.algebra() != v.lie_algebra()) throw ValidationError("derivation of a different algebra");
    const auto split = adjoint_and_complement(f, v, w);
    std::vector<LieElement> mapped;
    for (std::size_t i = 0; i < v.rank(); ++i) mapped.push_back(map_value(f, a.value(i), w));
    std::vector<LieElement> values;
    for (std::size_t x = 0; x < w.rank(); ++x) {
        LieElement val(w.lie_algebra());
        for (std::size_t i = 0; i < v.rank(); ++i) {
            const Rational c = split.adjoint.at(i, x);
            if (c != 0) val += c * mapped[i];
        }
        values.push_back(std::move(val));
    }
    return Derivation(w.lie_algebra(), a.degree(), std::move(values));
}

Derivation psi_f(const SparseMatrix& f, const QuadraticModule& v, const QuadraticModule& w,
                 const Derivation& b) {
    if (b.algebra() != w.lie_algebra()) throw ValidationError("derivation of a different algebra");
    const auto split = adjoint_and_complement(f, v, w);
    const SparseMatrix ft = f.transpose();
    std::vector<LieElement> values;
    for (std::size_t y = 0; y < v.rank(); ++y) {
        LieElement image(w.lie_algebra());
        for (const auto& [x, c] : ft.row(y).entries()) image += c * b.value(x);
        values.push_back(apply_linear(split.adjoint, image, v));
    }
    return Derivation(v.lie_algebra(), b.degree(), std::move(values));
}

Derivation act(const SparseMatrix& m, const QuadraticModule& q, const Derivation& a) {
    if (!is_automorphism(q, m)) throw ValidationError("matrix is not an automorphism");
    const SparseMatrix inv = inverse(m);
    std::vector<LieElement> values;
    for (std::size_t y = 0; y < q.rank(); ++y) {
        // phi theta phi^{-1}(y) with phi^{-1}(y) = sum_j inv(j,y) y_j.
        LieElement inner(q.lie_algebra());
        for (std::size_t j = 0; j < q.rank(); ++j) {
            const Rational c = inv.at(j, y);
            if (c != 0) inner += c * a.value(j);
        }
        values.push_back(apply_linear(m, inner, q));
    }
    return Derivation(q.lie_algebra(), a.degree(), std::move(values));
}

Derivation stabilize(const QuadraticModule& hg, const QuadraticModule& hg1, const Derivation& a) {
    if (hg1.rank() != hg.rank() + 2) throw ValidationError("stabilization adds one hyperbolic plane");
    return chi_f(hyperbolic_inclusion(hg.rank() / 2, hg1.rank() / 2), hg, hg1, a);
}

SparseVector derivation_vector(const Derivation& a, std::size_t k) {
    if (k < 2) throw ValidationError("derivation word length must be >= 2");
    const auto& alg = a.algebra();
    const std::size_t block = alg->basis(k - 1).size();
    std::vector<SparseVector::Entry> entries;
    for (std::size_t i = 0; i < alg->rank(); ++i) {
        if (a.value(i).is_zero()) continue;
        const SparseVector c = alg->coordinates(a.value(i).tensor(), k - 1);
        for (const auto& [j, x] : c.entries()) entries.emplace_back(i * block + j, x);
    }
    return SparseVector(std::move(entries));
}

Derivation derivation_from_vector(const LieAlgebraPtr& algebra, std::size_t k,
                                  const SparseVector& v) {
    const std::size_t block = algebra->basis(k - 1).size();
    std::vector<Tensor> parts(algebra->rank());
    const auto& basis = algebra->basis(k - 1);
    for (const auto& [idx, c] : v.entries()) {
        if (idx >= block * algebra->rank()) throw ValidationError("derivation vector out of range");
        parts[idx / block].add_scaled(basis[idx % block].expansion, c);
    }
    std::vector<LieElement> values;
    int degree = 0;
    bool have_degree = false;
    for (std::size_t i = 0; i < algebra->rank(); ++i) {
        values.push_back(LieElement::from_tensor(algebra, std::move(parts[i])));
        if (!have_degree && !values.back().is_zero()) {
            degree = *values.back().degree() - algebra->generators().degree(i);
            have_degree = true;
        }
    }
    return Derivation(algebra, degree, std::move(values));
}

// ---------------------------------------------------------------- OmegaDerivationAlgebra

OmegaDerivationAlgebra::OmegaDerivationAlgebra(QuadraticModule q)
    : q_(std::move(q)), omega_(omega_element(q_)) {}

int OmegaDerivationAlgebra::degree(std::size_t k) const {
    return static_cast<int>(k - 2) * (q_.d() - 1);
}

const std::vector<Derivation>& OmegaDerivationAlgebra::basis(std::size_t k) const {
    return level(k).basis;
}

const BracketingReport& OmegaDerivationAlgebra::report(std::size_t k) const {
    return level(k).report;
}

std::vector<Rational> OmegaDerivationAlgebra::coordinates(const Derivation& a, std::size_t k) const {
    const Level& lv = level(k);
    if (a.is_zero()) return std::vector<Rational>(lv.basis.size(), 0);
    if (a.degree() != degree(k)) throw ValidationError("derivation has the wrong degree");
    return lv.span.coordinates(derivation_vector(a, k));
}

const OmegaDerivationAlgebra::Level& OmegaDerivationAlgebra::level(std::size_t k) const {
    std::lock_guard lock(mutex_);
    if (auto it = levels_.find(k); it != levels_.end()) return *it->second;
    if (k < 3) throw ValidationError("omega-derivations are computed for word length >= 3");
    const auto& alg = q_.lie_algebra();
    const std::size_t n = alg->rank();
    const auto& source = alg->basis(k - 1);
    const std::size_t block = source.size();

    // The value a(omega) of the elementary derivation y_i -> b has letter content
    // content(b) + (partner of i) when every dual-basis vector is a multiple of a
    // single basis vector; then the map splits into blocks by content.
    const SparseMatrix dual = q_.dual_gram();
    std::vector<long> partner(n, -1);
    bool monomial = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = dual.row(i).entries();
        const auto col = dual.transpose().row(i).entries();
        if (row.size() != 1 || col.size() != 1 || row[0].first != col[0].first) {
            monomial = false;
            break;
        }
        partner[i] = static_cast<long>(row[0].first);
    }
    auto content_key = [&](Word w, long extra) {
        std::vector<std::uint8_t> key(n, 0);
        if (!monomial) return key;
        for (std::size_t p = 0; p < w.len; ++p) ++key[w.at(p)];
        ++key[static_cast<std::size_t>(extra)];
        return key;
    };
    std::map<std::vector<std::uint8_t>, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < block; ++j)
            blocks[content_key(source[j].leading, partner[i])].push_back(i * block + j);

    auto lv = std::make_unique<Level>();
    lv->report.source_dim = n * block;
    lv->report.target_dim = alg->basis(k).size();
    const Tensor& omega = omega_.tensor();
    for (const auto& [key, members] : blocks) {
        std::vector<SparseVector> columns;
        columns.reserve(members.size());
        for (std::size_t idx : members) {
            const auto elem = Derivation::elementary(
                alg, idx / block, LieElement::from_tensor(alg, source[idx % block].expansion));
            std::vector<SparseVector::Entry> col;
            const Tensor image = elem.apply(omega);
            for (const auto& [w, c] : image.terms()) col.emplace_back(w.code, c);
            columns.emplace_back(std::move(col));
        }
        RankKernel rk = column_rank_kernel(columns);
        lv->report.rank += rk.rank;
        for (const auto& kv : rk.kernel_basis) {
            std::vector<SparseVector::Entry> entries;
            for (const auto& [local, c] : kv.entries()) entries.emplace_back(members[local], c);
            SparseVector v(std::move(entries));
            lv->span.add(v);
            lv->basis.push_back(derivation_from_vector(alg, k, v));
        }
    }
    return *levels_.emplace(k, std::move(lv)).first->second;
}

std::vector<Derivation> g_basis(const QuadraticModule& q, std::size_t k) {
    return OmegaDerivationAlgebra(q).basis(k);
}

// ---------------------------------------------------------------- two-term complex

std::vector<TwoTermDegree> two_term_complex(const QuadraticModule& q, std::size_t max_word_length) {
    const auto& alg = q.lie_algebra();
    const std::size_t n = alg->rank();
    QuotientLieAlgebra quotient(Presentation{alg, {omega_element(q)}});
    std::vector<TwoTermDegree> out;
    const int d = q.d();
    for (std::size_t m = 1; m <= max_word_length; ++m) {
        TwoTermDegree slot;
        slot.word_length = m;
        slot.target_degree = static_cast<int>(m) * (d - 1) - 2 * d;
        slot.source_degree = slot.target_degree + 1;
        const std::size_t target_dim = quotient.quotient_dim(m);
        std::vector<SparseVector> columns;
        if (m >= 2) {
            const auto& src = quotient.quotient_basis(m - 1);
            const auto& lifts = alg->basis(m - 1);
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t idx : src) {
                    Tensor t;
                    for (std::size_t i = 0; i < n; ++i) {
                        const Rational c = q.gram().at(i, j);
                        if (c == 0) continue;
                        t.add_scaled(alg->commutator(Tensor::word(Word::letter(i)),
                                                     lifts[idx].expansion),
                                     c);
                    }
                    columns.push_back(quotient.quotient_coordinates(t, m));
                }
            }
        }
        slot.boundary = SparseMatrix::from_columns(target_dim, columns);
        slot.rank = rank(slot.boundary);
        out.push_back(std::move(slot));
    }
    return out;
}

}  // namespace hcm
