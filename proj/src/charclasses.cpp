#include "hcm/charclasses.hpp"

#include "hcm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace hcm {

namespace {

Rational factorial(int n) {
    Integer out = 1;
    for (int i = 2; i <= n; ++i) out *= i;
    return Rational(out);
}

// "2", "-1/90"; integers without a denominator.
std::string format_rational(const Rational& q) { return q.get_str(); }

std::string partition_label(const Partition& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i > 0) out += '.';
        out += std::to_string(p[i]);
    }
    return out;
}

}  // namespace

Variable Variable::chern(int i) { return {"c", i, 2 * i}; }
Variable Variable::pontryagin(int i) { return {"p", i, 4 * i}; }
Variable Variable::euler(int d) { return {"e", 0, 2 * d}; }
Variable Variable::root(int i) { return {"x", i, 2}; }

std::string Variable::name() const {
    return family == "e" ? family : family + std::to_string(index);
}

int monomial_degree(const Monomial& m) {
    int out = 0;
    for (const auto& [v, power] : m) out += v.degree * power;
    return out;
}

std::string to_string(const Monomial& m) {
    if (m.empty()) return "1";
    std::string out;
    for (const auto& [v, power] : m) {
        if (!out.empty()) out += '*';
        out += v.name();
        if (power != 1) out += '^' + std::to_string(power);
    }
    return out;
}

SymPoly::SymPoly(const Rational& constant) { add_term({}, constant); }
SymPoly::SymPoly(const Variable& v) { add_term({{v, 1}}, Rational(1)); }
SymPoly::SymPoly(const Monomial& m, const Rational& coefficient) { add_term(m, coefficient); }

void SymPoly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rational SymPoly::coefficient(const Monomial& m) const {
    const auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

bool SymPoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    const int first = monomial_degree(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const auto& t) { return monomial_degree(t.first) == first; });
}

int SymPoly::degree() const {
    if (terms_.empty()) throw ValidationError("degree of the zero polynomial");
    if (!is_homogeneous()) throw ValidationError("degree of an inhomogeneous polynomial");
    return monomial_degree(terms_.begin()->first);
}

Rational SymPoly::evaluate(const std::map<Variable, Rational>& values) const {
    Rational total = 0;
    for (const auto& [m, c] : terms_) {
        Rational term = c;
        for (const auto& [v, power] : m) {
            const auto it = values.find(v);
            if (it == values.end()) throw ValidationError("no value for " + v.name());
            for (int k = 0; k < power; ++k) term *= it->second;
        }
        total += term;
    }
    return total;
}

std::string SymPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        const bool negative = c < 0;
        const Rational size = negative ? Rational(-c) : c;
        if (out.empty()) {
            if (negative) out += '-';
        } else {
            out += negative ? " - " : " + ";
        }
        if (m.empty()) {
            out += format_rational(size);
        } else if (size == 1) {
            out += hcm::to_string(m);
        } else {
            out += format_rational(size) + '*' + hcm::to_string(m);
        }
    }
    return out;
}

SymPoly& SymPoly::operator+=(const SymPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& other) {
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
}

SymPoly& SymPoly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, value] : terms_) value *= c;
    return *this;
}

SymPoly operator*(const SymPoly& a, const SymPoly& b) {
    SymPoly out;
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma;
            for (const auto& [v, power] : mb) m[v] += power;
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

Rational Series::at(std::size_t k) const {
    return k < coefficients.size() ? coefficients[k] : Rational(0);
}

Series Series::operator*(const Series& other) const {
    const std::size_t n = std::min(order(), other.order());
    Series out{std::vector<Rational>(n + 1, Rational(0))};
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; i + j <= n; ++j) out.coefficients[i + j] += coefficients[i] * other.coefficients[j];
    }
    return out;
}

Series Series::inverse() const {
    if (coefficients.empty() || coefficients[0] == 0) {
        throw ValidationError("series with zero constant term is not invertible");
    }
    Series out{std::vector<Rational>(coefficients.size(), Rational(0))};
    out.coefficients[0] = 1 / coefficients[0];
    for (std::size_t k = 1; k < coefficients.size(); ++k) {
        Rational sum = 0;
        for (std::size_t j = 1; j <= k; ++j) sum += coefficients[j] * out.coefficients[k - j];
        out.coefficients[k] = -sum / coefficients[0];
    }
    return out;
}

Series sinh_half_series(std::size_t order) {
    Series out{std::vector<Rational>(order + 1, Rational(0))};
    Rational power = Rational(1, 2);
    for (std::size_t k = 1; k <= order; k += 2) {
        out.coefficients[k] = power / factorial(static_cast<int>(k));
        power /= 4;
    }
    return out;
}

Series cosh_half_series(std::size_t order) {
    Series out{std::vector<Rational>(order + 1, Rational(0))};
    Rational power = 1;
    for (std::size_t k = 0; k <= order; k += 2) {
        out.coefficients[k] = power / factorial(static_cast<int>(k));
        power /= 4;
    }
    return out;
}

Series ltilde_series(std::size_t order) {
    // sinh(t/2)/t, shifted down one place.
    const Series sinh = sinh_half_series(order + 1);
    Series shifted{std::vector<Rational>(sinh.coefficients.begin() + 1, sinh.coefficients.end())};
    return cosh_half_series(order) * shifted.inverse();
}

SymPoly newton_class(int n) {
    if (n < 1) throw ValidationError("newton_class needs n >= 1");
    std::vector<SymPoly> s{SymPoly()};
    for (int m = 1; m <= n; ++m) {
        SymPoly next;
        for (int i = 1; i < m; ++i) {
            const Rational sign = i % 2 == 1 ? 1 : -1;
            next += sign * (SymPoly(Variable::chern(i)) * s[static_cast<std::size_t>(m - i)]);
        }
        const Rational sign = m % 2 == 1 ? 1 : -1;
        next += Rational(sign * m) * SymPoly(Variable::chern(m));
        s.push_back(std::move(next));
    }
    return s.back();
}

Rational ltilde_lambda(int k) {
    if (k < 1) throw ValidationError("lambda index must be >= 1");
    return ltilde_series(static_cast<std::size_t>(2 * k)).at(static_cast<std::size_t>(2 * k)) / 2;
}

Rational bernoulli(int k) {
    const Rational sign = k % 2 == 1 ? 1 : -1;
    return sign * ltilde_lambda(k) * factorial(2 * k);
}

Integer zero_one_matrix_count(const Partition& rows, const Partition& cols) {
    std::vector<int> remaining(cols.begin(), cols.end());
    // Fill row r by choosing rows[r] distinct columns with positive remaining sum.
    std::function<Integer(std::size_t)> fill_row;
    std::function<Integer(std::size_t, std::size_t, int)> choose = [&](std::size_t r, std::size_t from,
                                                                       int left) -> Integer {
        if (left == 0) return fill_row(r + 1);
        Integer total = 0;
        for (std::size_t c = from; c < remaining.size(); ++c) {
            if (remaining[c] == 0) continue;
            --remaining[c];
            total += choose(r, c + 1, left - 1);
            ++remaining[c];
        }
        return total;
    };
    fill_row = [&](std::size_t r) -> Integer {
        if (r == rows.size()) {
            return std::all_of(remaining.begin(), remaining.end(), [](int x) { return x == 0; }) ? 1 : 0;
        }
        return choose(r, 0, rows[r]);
    };
    return fill_row(0);
}

SymPoly monomial_class(const Partition& partition, const std::string& family) {
    if (partition.empty()) return SymPoly(Rational(1));
    if (family != "c" && family != "p") throw ValidationError("family must be c or p");
    const int n = std::accumulate(partition.begin(), partition.end(), 0);
    const auto parts = partitions(n);
    const auto target = std::find(parts.begin(), parts.end(), partition);
    if (target == parts.end()) throw ValidationError("not a partition: " + partition_label(partition));
    // transition(mu, lambda): coefficient of m_lambda in e_mu.
    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        for (std::size_t b = 0; b < parts.size(); ++b) {
            const Integer count = zero_one_matrix_count(parts[a], parts[b]);
            if (count != 0) entries.push_back({a, b, Rational(count)});
        }
    }
    const SparseMatrix transition(parts.size(), parts.size(), std::move(entries));
    // e = M m with M symmetric (transpose the 0-1 matrices), so m = M^{-1} e.
    const SparseMatrix solved = inverse(transition);
    const auto row = static_cast<std::size_t>(target - parts.begin());
    SymPoly out;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        const Rational c = solved.at(row, a);
        if (c == 0) continue;
        Monomial m;
        for (int part : parts[a]) {
            ++m[family == "c" ? Variable::chern(part) : Variable::pontryagin(part)];
        }
        out += SymPoly(m, c);
    }
    return out;
}

std::map<Partition, Rational> ltilde_coeffs(int n, int d) {
    if (n < 1) throw ValidationError("ltilde_coeffs needs n >= 1");
    if (d < 3) throw ValidationError("ltilde_coeffs needs d >= 3");
    std::map<int, Rational> lambda;
    for (int k = 1; k <= n; ++k) lambda[k] = ltilde_lambda(k);
    const Rational scale = Rational(Integer(1) << static_cast<unsigned>(d));
    std::map<Partition, Rational> out;
    for (const auto& p : partitions(n)) {
        Rational c = scale;
        for (int part : p) c *= lambda.at(part);
        out.emplace(p, c);
    }
    return out;
}

SymPoly ltilde_class(int n, int d) {
    SymPoly out;
    for (const auto& [p, c] : ltilde_coeffs(n, d)) out += c * monomial_class(p, "p");
    return out;
}

KappaBorelRelation kappa_borel_relation(int i, int d) {
    if (d % 2 == 0) throw ValidationError("the kappa/Borel relation is implemented for odd d only");
    if (d < 3) throw ValidationError("kappa_borel_relation needs d >= 3");
    if (i < 1) throw ValidationError("kappa_borel_relation needs i >= 1");
    KappaBorelRelation out;
    out.i = i;
    out.d = d;
    out.s = (d - 1) / 2;
    out.degree = 4 * i - 2;
    out.lhs_coefficient = Rational(-2) / factorial(2 * i - 1);
    out.rhs = ltilde_coeffs(i + out.s, d);
    out.single_part_coefficient = out.rhs.at(Partition{i + out.s});
    return out;
}

std::string KappaBorelRelation::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [p, c] : rhs) terms.push_back({{"partition", p}, {"coefficient", format_rational(c)}});
    return nlohmann::json{{"i", i},
                          {"d", d},
                          {"s", s},
                          {"degree", degree},
                          {"lhs", {{"class", "s_" + std::to_string(2 * i - 1)},
                                   {"coefficient", format_rational(lhs_coefficient)}}},
                          {"rhs", terms},
                          {"single_part_coefficient", format_rational(single_part_coefficient)},
                          {"single_part_nonzero", single_part_nonzero()}}
        .dump();
}

std::string KappaBorelRelation::to_text() const {
    std::ostringstream out;
    out << "degree " << degree << ": " << format_rational(lhs_coefficient) << " * s_" << 2 * i - 1 << "(eta) =";
    bool first = true;
    for (const auto& [p, c] : rhs) {
        out << (first ? " " : " + ") << '(' << format_rational(c) << ") * kappa_" << partition_label(p);
        first = false;
    }
    out << "\nsingle-part coefficient " << format_rational(single_part_coefficient)
        << (single_part_nonzero() ? " (nonzero)" : " (zero)") << '\n';
    return out.str();
}

std::vector<KappaGenerator> grw_kappa_degrees(int d, int max_degree) {
    if (d < 3) throw ValidationError("grw_kappa_degrees needs d >= 3");
    std::vector<Variable> variables;
    for (int j = (d + 1 + 3) / 4; j <= d - 1; ++j) variables.push_back(Variable::pontryagin(j));
    variables.push_back(Variable::euler(d));
    const int top = 2 * d + max_degree;
    std::vector<KappaGenerator> out;
    Monomial current;
    std::function<void(std::size_t, int)> extend = [&](std::size_t v, int degree) {
        if (v == variables.size()) {
            if (degree > 2 * d) out.push_back({current, degree - 2 * d});
            return;
        }
        extend(v + 1, degree);
        int power = 0;
        while (degree + variables[v].degree * (power + 1) <= top) {
            ++power;
            current[variables[v]] = power;
            extend(v + 1, degree + variables[v].degree * power);
        }
        current.erase(variables[v]);
    };
    extend(0, 0);
    std::sort(out.begin(), out.end(), [](const KappaGenerator& a, const KappaGenerator& b) {
        if (a.kappa_degree != b.kappa_degree) return a.kappa_degree < b.kappa_degree;
        return a.monomial < b.monomial;
    });
    return out;
}

RingComparison compare_rings(int d, int max_degree, const OutFnTable& table) {
    if (d % 2 == 0) throw ValidationError("ring comparison is implemented for odd d only");
    if (max_degree < 1) throw ValidationError("ring comparison needs max_degree >= 1");
    RingComparison out;
    out.d = d;
    out.max_degree = max_degree;
    std::map<int, std::size_t> aut;
    std::map<int, std::size_t> diff;
    for (const auto& g : stable_ring(d, table, max_degree).generators) ++aut[g.degree];
    for (const auto& g : grw_kappa_degrees(d, max_degree)) ++diff[g.kappa_degree];
    for (int n = 1; n <= max_degree; ++n) {
        RingComparisonRow row{n, aut[n], diff[n]};
        if (row.aut_generators > 0 && n % 2 == 1) out.odd_aut_degrees.push_back(n);
        if (row.diff_generators > row.aut_generators) out.diff_surplus_degrees.push_back(n);
        out.rows.push_back(row);
    }
    out.borel_relation = kappa_borel_relation(1, d);
    return out;
}

std::string RingComparison::to_json() const {
    nlohmann::json table = nlohmann::json::array();
    for (const auto& r : rows) {
        table.push_back({{"degree", r.degree},
                         {"aut_generators", r.aut_generators},
                         {"diff_generators", r.diff_generators}});
    }
    return nlohmann::json{{"d", d},
                          {"max_degree", max_degree},
                          {"rows", table},
                          {"odd_aut_degrees", odd_aut_degrees},
                          {"diff_surplus_degrees", diff_surplus_degrees},
                          {"borel_relation", nlohmann::json::parse(borel_relation.to_json())}}
        .dump();
}

std::string RingComparison::to_text() const {
    std::ostringstream out;
    out << "degree aut diff\n";
    for (const auto& r : rows) out << r.degree << ' ' << r.aut_generators << ' ' << r.diff_generators << '\n';
    auto list = [&](const std::vector<int>& xs) {
        if (xs.empty()) return std::string("none");
        std::string s;
        for (int x : xs) s += (s.empty() ? "" : ",") + std::to_string(x);
        return s;
    };
    out << "odd-degree aut generators (not injective): " << list(odd_aut_degrees) << '\n';
    out << "degrees with more diff generators (not surjective): " << list(diff_surplus_degrees) << '\n';
    out << "Borel class x_1 relation: " << borel_relation.to_text();
    return out.str();
}

}  // namespace hcm
