#include "hcm/quadmod.hpp"

#include "hcm/errors.hpp"

#include <json.hpp>

#include <set>

namespace hcm {

QTargetKind qtarget_kind(int d) {
    if (d % 2 == 0) return QTargetKind::InfiniteCyclic;
    if (d == 1 || d == 3 || d == 7) return QTargetKind::Zero;
    return QTargetKind::OrderTwo;
}

QValue QValue::make(QTargetKind kind, Integer multiple) {
    switch (kind) {
        case QTargetKind::InfiniteCyclic: break;
        case QTargetKind::OrderTwo:
            multiple %= 2;
            if (multiple < 0) multiple += 2;
            break;
        case QTargetKind::Zero: multiple = 0; break;
    }
    return QValue{kind, std::move(multiple)};
}

std::string QValue::to_string() const {
    if (multiple == 0) return "0";
    if (multiple == 1) return "d(iota)";
    return multiple.get_str() + "*d(iota)";
}

namespace {

bool is_integer(const Rational& x) { return x.get_den() == 1; }

void require_integral(const SparseMatrix& m, const char* what) {
    for (const auto& t : m.triplets())
        if (!is_integer(t.value)) throw ValidationError(std::string(what) + " must be integral");
}

void require_integral(const SparseVector& v) {
    for (const auto& [i, c] : v.entries())
        if (!is_integer(c)) throw ValidationError("vector must be integral");
}

}  // namespace

QuadraticModule::QuadraticModule(int d, SparseMatrix gram, std::vector<Integer> qvals,
                                 std::vector<std::string> names)
    : d_(d), gram_(std::move(gram)) {
    if (d_ < 3) throw ValidationError("quadratic modules require d >= 3");
    const std::size_t n = gram_.rows();
    if (n == 0 || gram_.cols() != n) throw ValidationError("gram matrix must be square and non-empty");
    require_integral(gram_, "gram matrix");
    if (gram_.transpose() != Rational(sign()) * gram_)
        throw ValidationError(d_ % 2 == 0 ? "gram matrix must be symmetric for d even"
                                          : "gram matrix must be antisymmetric for d odd");
    const Rational det = determinant(gram_);
    if (det != 1 && det != -1) throw ValidationError("gram matrix must be unimodular");
    gram_inv_ = inverse(gram_);
    if (qvals.size() != n) throw ValidationError("one q-value per basis vector required");
    qvals_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (d_ % 2 == 0 && 2 * qvals[i] != gram_.at(i, i))
            throw ValidationError("for d even q(b) must be half of <b,b>");
        qvals_.push_back(QValue::make(target_kind(), qvals[i]).multiple);
    }
    if (names.empty()) {
        for (std::size_t i = 0; i < n; ++i) names.push_back("b" + std::to_string(i + 1));
    }
    if (names.size() != n) throw ValidationError("one name per basis vector required");
    names_ = names;
    algebra_ = FreeLieAlgebra::create(GeneratorSet(std::move(names), d_ - 1));
}

Rational QuadraticModule::pairing(const SparseVector& x, const SparseVector& y) const {
    return x.dot(gram_.apply(y));
}

SparseMatrix QuadraticModule::dual_gram() const { return gram_inv_.transpose(); }

QuadraticModule hyperbolic(std::size_t g, int d) {
    if (g == 0) throw ValidationError("hyperbolic module needs g >= 1");
    if (d < 3) throw ValidationError("hyperbolic module needs d >= 3");
    const Rational eps = d % 2 == 0 ? 1 : -1;
    std::vector<SparseMatrix::Triplet> trip;
    std::vector<std::string> names(2 * g);
    for (std::size_t i = 0; i < g; ++i) {
        trip.push_back({i, g + i, Rational(1)});
        trip.push_back({g + i, i, eps});
        names[i] = "e" + std::to_string(i + 1);
        names[g + i] = "f" + std::to_string(i + 1);
    }
    return QuadraticModule(d, SparseMatrix(2 * g, 2 * g, std::move(trip)),
                           std::vector<Integer>(2 * g, 0), std::move(names));
}

QuadraticModule orthogonal_sum(const QuadraticModule& a, const QuadraticModule& b) {
    if (a.d() != b.d()) throw ValidationError("orthogonal sum needs equal d");
    const std::size_t na = a.rank();
    std::vector<SparseMatrix::Triplet> trip = a.gram().triplets();
    for (auto t : b.gram().triplets()) trip.push_back({t.row + na, t.col + na, t.value});
    std::vector<Integer> q = a.qvals();
    q.insert(q.end(), b.qvals().begin(), b.qvals().end());
    std::vector<std::string> names = a.names();
    names.insert(names.end(), b.names().begin(), b.names().end());
    if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
        for (std::size_t i = 0; i < names.size(); ++i) names[i] = "u" + std::to_string(i + 1);
    const std::size_t n = na + b.rank();
    return QuadraticModule(a.d(), SparseMatrix(n, n, std::move(trip)), std::move(q),
                           std::move(names));
}

QValue q_eval(const QuadraticModule& q, const SparseVector& x) {
    require_integral(x);
    const auto& entries = x.entries();
    if (!entries.empty() && entries.back().first >= q.rank())
        throw ValidationError("vector index out of range");
    // q(sum x_i b_i) = sum_i (x_i q_i + C(x_i,2) <b_i,b_i>) + sum_{i<j} x_i x_j <b_i,b_j>.
    Integer total = 0;
    for (std::size_t a = 0; a < entries.size(); ++a) {
        const auto& [i, xi] = entries[a];
        const Integer xi_int = xi.get_num();
        const Integer binom = xi_int * (xi_int - 1) / 2;
        total += xi_int * q.qvals()[i] + binom * Integer(q.gram().at(i, i).get_num());
        for (std::size_t b = a + 1; b < entries.size(); ++b) {
            const auto& [j, xj] = entries[b];
            total += xi_int * Integer(xj.get_num()) * Integer(q.gram().at(i, j).get_num());
        }
    }
    return QValue::make(q.target_kind(), total);
}

bool is_isometry(const SparseMatrix& f, const QuadraticModule& v, const QuadraticModule& w) {
    if (f.rows() != w.rank() || f.cols() != v.rank())
        throw ValidationError("map size does not match the modules");
    return f.transpose() * w.gram() * f == v.gram();
}

bool is_automorphism(const QuadraticModule& q, const SparseMatrix& m) {
    if (m.rows() != q.rank() || m.cols() != q.rank())
        throw ValidationError("matrix size does not match the module rank");
    require_integral(m, "automorphism matrix");
    if (!is_isometry(m, q, q)) return false;
    // The form is preserved, so by the sum rule q is preserved iff it is on the basis.
    const auto cols = m.columns();
    for (std::size_t i = 0; i < q.rank(); ++i)
        if (q_eval(q, cols[i]) != QValue::make(q.target_kind(), q.qvals()[i])) return false;
    return true;
}

LieElement omega_element(const QuadraticModule& q) {
    const auto& alg = q.lie_algebra();
    LieElement twice(alg);
    const SparseMatrix dual = q.dual_gram();
    for (std::size_t i = 0; i < q.rank(); ++i)
        for (const auto& [j, c] : dual.row(i).entries())
            twice += c * bracket(LieElement::generator(alg, i), LieElement::generator(alg, j));
    return Rational(1, 2) * twice;
}

Rational pair_with_wedge(const QuadraticModule& q, const LieElement& x, const SparseVector& a,
                         const SparseVector& b) {
    const SparseVector ga = q.gram().apply(a);  // i -> <b_i, a>
    const SparseVector gb = q.gram().apply(b);
    Rational total = 0;
    for (const auto& [w, c] : x.tensor().terms()) {
        if (w.len != 2) throw ValidationError("pairing needs a word-length-2 element");
        total += c * ga.at(w.at(0)) * gb.at(w.at(1));
    }
    return total;
}

AdjointSplitting adjoint_and_complement(const SparseMatrix& f, const QuadraticModule& v,
                                        const QuadraticModule& w) {
    require_integral(f, "embedding matrix");
    if (!is_isometry(f, v, w)) throw ValidationError("map is not an isometric embedding");
    // <f^! x, y>_V = <x, f y>_W for all x, y.
    SparseMatrix adj = inverse(v.gram().transpose()) * f.transpose() * w.gram().transpose();
    SparseMatrix proj = SparseMatrix::identity(w.rank()) - f * adj;
    return {std::move(adj), std::move(proj)};
}

LieElement apply_linear(const SparseMatrix& f, const LieElement& x, const QuadraticModule& w) {
    const auto cols = f.columns();
    return map_generators(x, w.lie_algebra(), cols);
}

SparseMatrix hyperbolic_inclusion(std::size_t g, std::size_t g_target) {
    if (g > g_target) throw ValidationError("inclusion needs g <= target genus");
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t i = 0; i < g; ++i) {
        trip.push_back({i, i, Rational(1)});
        trip.push_back({g_target + i, g + i, Rational(1)});
    }
    return SparseMatrix(2 * g_target, 2 * g, std::move(trip));
}

QuadraticModule parse_quadratic_module(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid quadratic module JSON: ") + e.what());
    }
    try {
        const int d = j.at("d").get<int>();
        std::vector<std::vector<Rational>> dense;
        for (const auto& row : j.at("gram")) {
            std::vector<Rational> r;
            for (const auto& x : row) r.emplace_back(x.get<long>());
            dense.push_back(std::move(r));
        }
        std::vector<Integer> q;
        if (j.contains("q"))
            for (const auto& x : j.at("q")) q.emplace_back(x.get<long>());
        else
            for (std::size_t i = 0; i < dense.size() && i < dense[i].size(); ++i)
                q.emplace_back(d % 2 == 0 ? Integer(dense[i][i].get_num() / 2) : Integer(0));
        std::vector<std::string> names;
        if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
        return QuadraticModule(d, SparseMatrix::from_dense(dense), std::move(q), std::move(names));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("invalid quadratic module JSON: ") + e.what());
    }
}

std::string to_json(const QuadraticModule& q) {
    nlohmann::json j;
    j["d"] = q.d();
    nlohmann::json gram = nlohmann::json::array();
    for (const auto& row : q.gram().to_dense()) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& x : row) r.push_back(x.get_num().get_si());
        gram.push_back(r);
    }
    j["gram"] = gram;
    nlohmann::json qv = nlohmann::json::array();
    for (const auto& x : q.qvals()) qv.push_back(x.get_si());
    j["q"] = qv;
    j["names"] = q.names();
    return j.dump();
}

}  // namespace hcm
