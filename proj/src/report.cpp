#include "hcm/report.hpp"

#include "hcm/cechains.hpp"
#include "hcm/charclasses.hpp"
#include "hcm/dercomplex.hpp"
#include "hcm/errors.hpp"
#include "hcm/gradedlie.hpp"
#include "hcm/quadmod.hpp"
#include "hcm/schurstab.hpp"
#include "hcm/spinvariants.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hcm {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
    Int value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw ValidationError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
    }
    return value;
}

std::string str(std::size_t x) { return std::to_string(x); }
std::string str(int x) { return std::to_string(x); }
std::string str(const Integer& x) { return x.get_str(); }
std::string str(const Rational& x) { return x.get_str(); }
std::string str(bool x) { return x ? "true" : "false"; }

std::string partition_label(const Partition& p) {
    std::string out;
    for (std::size_t i = 0; i < p.size(); ++i) out += (i > 0 ? "." : "") + std::to_string(p[i]);
    return out;
}

std::vector<std::size_t> genus_range(const RunConfig& config) {
    std::vector<std::size_t> out;
    for (std::size_t g = config.g_min; g <= config.g_max; ++g) out.push_back(g);
    return out;
}

ResultTable start_table(std::string_view command, const RunConfig& config,
                        std::vector<std::string> columns) {
    ResultTable t;
    t.command = std::string(command);
    t.metadata = {{"command", t.command}, {"version", kVersion}, {"config", config.describe()}};
    t.columns = std::move(columns);
    return t;
}

// Word length of the omega-derivations needed for chains through total degree top.
std::size_t derivation_length_for(int top, int d) {
    return static_cast<std::size_t>((top + d - 2) / (d - 1) + 2);
}

DgLie derivation_lie(std::size_t g, int d, int top) {
    const OmegaDerivationAlgebra algebra(hyperbolic(g, d));
    return omega_derivation_lie(algebra, derivation_length_for(top, d));
}

ResultTable run_dims(const RunConfig& config) {
    if (config.max_length < 3) throw ValidationError("dims needs maxlen >= 3");
    auto t = start_table("dims", config, {"g", "k", "degree", "dim", "schur_dim", "agree"});
    const int max_k = static_cast<int>(config.max_length);
    t.metadata.emplace_back("window", "word length 3.." + str(max_k) + ", g " + str(config.g_min) +
                                          ".." + str(config.g_max));
    t.metadata.emplace_back("stability", "exact for every g; each column is a polynomial in 2g of degree k");
    const GradedSchurFunctor schur = u_tilde(max_k, config.d);
    std::vector<std::pair<std::size_t, int>> jobs;
    for (std::size_t g : genus_range(config)) {
        for (int k = 3; k <= max_k; ++k) jobs.emplace_back(g, k);
    }
    const auto dims = parallel_map<std::size_t>(jobs.size(), config.jobs, [&](std::size_t j) {
        return g_basis(hyperbolic(jobs[j].first, config.d), static_cast<std::size_t>(jobs[j].second)).size();
    });
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        const auto [g, k] = jobs[j];
        const int degree = (k - 2) * (config.d - 1);
        const auto it = schur.components.find({k, degree});
        const Integer predicted = it == schur.components.end()
                                      ? Integer(0)
                                      : schur_dim(it->second, Integer(static_cast<unsigned long>(2 * g)));
        t.add_row({str(g), str(k), str(degree), str(dims[j]), str(predicted),
                   str(Integer(static_cast<unsigned long>(dims[j])) == predicted)});
    }
    return t;
}

ResultTable run_ce(const RunConfig& config) {
    auto t = start_table("ce", config, {"g", "p", "q", "dim", "stable_for_g_above"});
    const int top = config.max_degree;
    const auto max_p = static_cast<std::size_t>(std::max(1, top / config.d));
    t.metadata.emplace_back("window", "total degree 0.." + str(top) + ", word length <= " + str(max_p));
    t.metadata.emplace_back("stability", "bidegree (p,q) is stable for g > 2q + floor(3p/d) + 4");
    const auto gs = genus_range(config);
    const auto tables = parallel_map<BigradedDims>(gs.size(), config.jobs, [&](std::size_t j) {
        const CEComplex c(derivation_lie(gs[j], config.d, top + 1), max_p, top);
        return ce_homology(c);
    });
    for (std::size_t j = 0; j < gs.size(); ++j) {
        for (const auto& [pq, dim] : tables[j].dims) {
            if (pq.first + pq.second > top) continue;
            t.add_row({str(gs[j]), str(pq.first), str(pq.second), str(dim),
                       str(ce_stability_bound(pq.first, pq.second, config.d).value())});
        }
    }
    return t;
}

ResultTable run_ss(const RunConfig& config) {
    auto t = start_table("ss", config, {"g", "page", "p", "q", "dim"});
    const int top = config.max_degree;
    t.metadata.emplace_back("window", "total degree 0.." + str(top) + ", pages 1..3 and infinity");
    t.metadata.emplace_back("stability", "exact at each listed g; no stable range assumed");
    const auto gs = genus_range(config);
    const auto results = parallel_map<SpectralSequencePages>(gs.size(), config.jobs, [&](std::size_t j) {
        return wordlength_ss(derivation_lie(gs[j], config.d, top + 1), top, 3);
    });
    for (std::size_t j = 0; j < gs.size(); ++j) {
        const auto& ss = results[j];
        const std::string prefix = "g=" + str(gs[j]) + " ";
        t.metadata.emplace_back(prefix + "e2_agrees", str(ss.e2_agrees()));
        t.metadata.emplace_back(prefix + "collapses_at_e2", str(ss.collapses_at_e2()));
        t.metadata.emplace_back(prefix + "converges", str(ss.converges()));
        auto emit = [&](const std::string& page, const BigradedDims& dims) {
            for (const auto& [pq, dim] : dims.dims) {
                if (pq.first + pq.second > top) continue;
                t.add_row({str(gs[j]), page, str(pq.first), str(pq.second), str(dim)});
            }
        };
        for (std::size_t r = 1; r <= ss.pages.size(); ++r) emit(str(r), ss.page(r));
        emit("inf", ss.e_infinity);
    }
    return t;
}

ResultTable run_invariants(const RunConfig& config) {
    auto t = start_table("invariants", config, {"g", "degree", "chain_dim", "homology_dim"});
    const std::size_t needed = stable_genus(config.d, config.max_degree);
    t.metadata.emplace_back("window", "total degree 0.." + str(config.max_degree));
    t.metadata.emplace_back("stability", "requires g >= " + str(needed) +
                                             " so that 2g covers every tensor arity in the window");
    const auto gs = genus_range(config);
    const auto results = parallel_map<InvariantCEDims>(gs.size(), config.jobs, [&](std::size_t j) {
        return invariant_ce_complex(config.d, gs[j], config.max_degree);
    });
    for (std::size_t j = 0; j < gs.size(); ++j) {
        for (std::size_t n = 0; n < results[j].chain_dims.size(); ++n) {
            t.add_row({str(gs[j]), str(n), str(results[j].chain_dims[n]), str(results[j].homology_dims[n])});
        }
    }
    return t;
}

OutFnTable load_table(const RunConfig& config) {
    if (config.table_path.empty()) return {};
    std::ifstream in(config.table_path);
    if (!in) throw ValidationError("cannot read table file " + config.table_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return OutFnTable::from_json(buffer.str());
}

ResultTable run_stable_ring(const RunConfig& config) {
    const bool odd = config.d % 2 != 0;
    std::vector<std::string> columns{"degree", "generators", "poincare"};
    if (odd) columns.emplace_back("kappa_generators");
    auto t = start_table("stable-ring", config, columns);
    const OutFnTable table = load_table(config);
    const StableRing ring = stable_ring(config.d, table, config.max_degree);
    const auto series = poincare_series(ring, config.max_degree);
    t.metadata.emplace_back("window", "degree 0.." + str(config.max_degree));
    t.metadata.emplace_back("stability", "stable range g > 2k + 4 in degree k");
    t.metadata.emplace_back("lambda_known", str(ring.lambda_known));
    t.metadata.emplace_back("table_entries", str(table.dims.size()));
    std::map<int, std::vector<std::string>> labels;
    for (const auto& g : ring.generators) labels[g.degree].push_back(g.label);
    std::map<int, std::size_t> kappa;
    if (odd) {
        const auto comparison = compare_rings(config.d, std::max(1, config.max_degree), table);
        for (const auto& row : comparison.rows) kappa[row.degree] = row.diff_generators;
        auto join = [](const std::vector<int>& xs) {
            std::string s;
            for (int x : xs) s += (s.empty() ? "" : ";") + std::to_string(x);
            return s.empty() ? std::string("none") : s;
        };
        t.metadata.emplace_back("odd_aut_degrees", join(comparison.odd_aut_degrees));
        t.metadata.emplace_back("kappa_surplus_degrees", join(comparison.diff_surplus_degrees));
    }
    for (int n = 0; n <= config.max_degree; ++n) {
        std::string joined;
        for (const auto& label : labels[n]) joined += (joined.empty() ? "" : ";") + label;
        std::vector<std::string> row{str(n), joined, str(series[static_cast<std::size_t>(n)])};
        if (odd) row.push_back(str(kappa[n]));
        t.add_row(std::move(row));
    }
    return t;
}

ResultTable run_stability(const RunConfig& config) {
    auto t = start_table("stability", config, {"kind", "degree", "p", "q", "ell", "g", "value"});
    const int top = config.max_degree;
    t.metadata.emplace_back("window", "total degree 0.." + str(top) + ", g " + str(config.g_min) + ".." +
                                          str(config.g_max));
    t.metadata.emplace_back("stability",
                            "total_bound 2k+4, charney_bound 2k+ell+4, ce_bound 2q+floor(3p/d)+4; "
                            "iso for g above the value");
    for (int k = 0; k <= top; ++k) {
        t.add_row({"total_bound", str(k), "", "", "", "", str(total_stability_bound(k).value())});
    }
    const int max_ell = ce_polynomial_degree(std::max(1, top / config.d), config.d);
    for (int k = 0; k <= top; ++k) {
        for (int ell = 0; ell <= max_ell; ++ell) {
            t.add_row({"charney_bound", str(k), "", "", str(ell), "", str(stability_bounds(k, ell).first)});
        }
    }
    for (int p = 0; p * config.d <= top; ++p) {
        for (int q = 0; p + q <= top; ++q) {
            t.add_row({"ce_bound", str(p + q), str(p), str(q), str(ce_polynomial_degree(p, config.d)), "",
                       str(ce_stability_bound(p, q, config.d).value())});
        }
    }
    const auto gs = genus_range(config);
    const auto observed = parallel_map<BigradedDims>(gs.size(), config.jobs, [&](std::size_t j) {
        return InvariantCEComplex(config.d, gs[j], top).bigraded_chain_dims();
    });
    for (std::size_t j = 0; j < gs.size(); ++j) {
        for (const auto& [pq, dim] : observed[j].dims) {
            t.add_row({"invariant_chains", str(pq.first + pq.second), str(pq.first), str(pq.second), "",
                       str(gs[j]), str(dim)});
        }
    }
    if (gs.size() >= 2) {
        const bool constant = observed[gs.size() - 1].dims == observed[gs.size() - 2].dims;
        t.metadata.emplace_back("observed_constant_top_two_g", str(constant));
    } else {
        t.metadata.emplace_back("observed_constant_top_two_g", "n/a");
    }
    return t;
}

ResultTable run_genus(const RunConfig& config) {
    auto t = start_table("genus", config, {"kind", "key", "value"});
    const bool odd = config.d % 2 != 0;
    const int n = odd ? config.index + (config.d - 1) / 2 : config.index;
    t.metadata.emplace_back("window", "classes through index " + str(std::max(3, n)));
    t.metadata.emplace_back("stability", "formal identities; no genus bound");
    for (int k = 1; k <= std::max(3, n); ++k) t.add_row({"newton", str(k), newton_class(k).to_string()});
    for (int k = 1; k <= std::max(3, n); ++k) t.add_row({"bernoulli", str(k), str(bernoulli(k))});
    for (int k = 1; k <= std::max(3, n); ++k) t.add_row({"lambda", str(k), str(ltilde_lambda(k))});
    for (const auto& [p, c] : ltilde_coeffs(n, config.d)) t.add_row({"ltilde", partition_label(p), str(c)});
    if (odd) {
        const auto r = kappa_borel_relation(config.index, config.d);
        t.add_row({"relation", "degree", str(r.degree)});
        t.add_row({"relation", "lhs_coefficient", str(r.lhs_coefficient)});
        for (const auto& [p, c] : r.rhs) t.add_row({"relation", "kappa_" + partition_label(p), str(c)});
        t.add_row({"relation", "single_part_coefficient", str(r.single_part_coefficient)});
        t.add_row({"relation", "single_part_nonzero", str(r.single_part_nonzero())});
    } else {
        t.metadata.emplace_back("relation", "unsupported for even d");
    }
    for (const auto& g : grw_kappa_degrees(config.d, config.max_degree)) {
        t.add_row({"kappa_generator", to_string(g.monomial), str(g.kappa_degree)});
    }
    return t;
}

// Each check returns (passed, detail).
using Check = std::pair<bool, std::string>;

Check check_free_lie(const RunConfig&) {
    for (int d : {3, 4}) {
        const GeneratorSet gens({"a", "b"}, d - 1);
        for (std::size_t k = 1; k <= 6; ++k) {
            if (Integer(static_cast<unsigned long>(lyndon_basis(gens, k).size())) != pbw_dim_oracle(gens, k)) {
                return {false, "d=" + str(d) + " k=" + str(k)};
            }
        }
    }
    return {true, "two generators, word length <= 6"};
}

Check check_schur(const RunConfig&) {
    for (int d : {3, 4}) {
        const auto schur = u_tilde(5, d);
        for (std::size_t g = 1; g <= 2; ++g) {
            for (int k = 3; k <= 5; ++k) {
                const auto& rep = schur.components.at({k, (k - 2) * (d - 1)});
                const Integer expected = schur_dim(rep, Integer(static_cast<unsigned long>(2 * g)));
                const auto dim = g_basis(hyperbolic(g, d), static_cast<std::size_t>(k)).size();
                if (Integer(static_cast<unsigned long>(dim)) != expected) {
                    return {false, "d=" + str(d) + " g=" + str(g) + " k=" + str(k)};
                }
            }
        }
    }
    return {true, "g <= 2, k <= 5"};
}

Check check_theta(const RunConfig& config) {
    std::mt19937_64 rng(config.seed);
    std::uniform_int_distribution<int> coeff(-2, 2);
    int checked = 0;
    for (int d : {3, 4}) {
        const auto q = hyperbolic(2, d);
        const auto alg = q.lie_algebra();
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<SparseVector::Entry> entries;
            LieElement x_element(alg);
            for (std::size_t i = 0; i < q.rank(); ++i) {
                const Rational c(coeff(rng));
                entries.emplace_back(i, c);
                x_element += c * LieElement::generator(alg, i);
            }
            const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
            const auto& basis = alg->basis(k);
            std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
            LieElement xi(alg);
            for (int s = 0; s < 3; ++s) xi += Rational(coeff(rng)) * LieElement::basis_element(alg, k, pick(rng));
            if (ev_omega(theta(q, SparseVector(std::move(entries)), xi), q) != bracket(x_element, xi)) {
                return {false, "d=" + str(d) + " trial " + str(trial)};
            }
            ++checked;
        }
    }
    return {true, str(static_cast<std::size_t>(checked)) + " random pairs, seed " + std::to_string(config.seed)};
}

Check check_ce_square(const RunConfig&) {
    for (int d : {3, 4}) {
        const CEComplex c(derivation_lie(1, d, 8), 2, 8);
        for (std::size_t p = 0; p <= 2; ++p) {
            for (int n = c.min_total_degree(); n <= 8; ++n) {
                for (const auto& w : c.words(p, n)) {
                    const CEChain square = c.differential(c.differential(w));
                    for (const auto& [word, value] : square) {
                        if (value != 0) return {false, "d=" + str(d)};
                    }
                }
            }
        }
    }
    return {true, "g=1, total degree <= 8"};
}

Check check_invariants(const RunConfig&) {
    const std::vector<std::size_t> expected{2, 3, 3};
    for (std::size_t g = 1; g <= 3; ++g) {
        const auto action = LieAlgebraAction::preserving(hyperbolic(g, 3));
        const auto dim = invariants_kernel({2 * g, 4, TensorKind::Tensor}, action).dim();
        if (dim != expected[g - 1]) return {false, "g=" + str(g) + " dim " + str(dim)};
    }
    for (std::size_t k = 0; k <= 8; k += 2) {
        std::size_t count = 1;
        for (std::size_t i = k; i > 1; i -= 2) count *= i - 1;
        if (matchings_span(k).size() != count) return {false, "matchings on " + str(k)};
    }
    return {true, "V^(x)4 invariants 2,3,3 for g = 1,2,3; (K-1)!! matchings"};
}

Check check_kontsevich(const RunConfig&) {
    const auto dims = invariant_ce_complex(3, 2, 4);
    const std::vector<std::size_t> expected{1, 0, 0, 0, 0};
    return {dims.homology_dims == expected, "d=3, g=2, degrees 0..4"};
}

Check check_genus(const RunConfig&) {
    const SymPoly c1(Variable::chern(1));
    const SymPoly c2(Variable::chern(2));
    const bool newton = newton_class(2) == c1 * c1 - Rational(2) * c2;
    const bool lambda = ltilde_lambda(1) == Rational(1, 12) && ltilde_lambda(2) == Rational(-1, 720);
    const bool relation = kappa_borel_relation(1, 3).single_part_nonzero();
    std::size_t kappa2 = 0;
    for (const auto& g : grw_kappa_degrees(3, 2)) kappa2 += g.kappa_degree == 2 ? 1 : 0;
    return {newton && lambda && relation && kappa2 == 2, "Newton, lambda_1, lambda_2, relation, kappa count"};
}

Check check_bounds(const RunConfig&) {
    const bool ok = total_stability_bound(3).value() == 10 && stability_bounds(3, 2).first == 12 &&
                    ce_stability_bound(3, 2, 3).value() == 11;
    return {ok, "2k+4, 2k+ell+4, 2q+floor(3p/d)+4"};
}

ResultTable run_selftest(const RunConfig& config) {
    auto t = start_table("selftest", config, {"check", "status", "detail"});
    t.metadata.emplace_back("window", "fixed small instances");
    t.metadata.emplace_back("stability", "instances chosen inside the stable range where one is needed");
    const std::vector<std::pair<std::string, Check (*)(const RunConfig&)>> checks{
        {"free_lie_dims", check_free_lie},   {"schur_dims", check_schur},
        {"theta_identity", check_theta},     {"ce_square_zero", check_ce_square},
        {"invariants", check_invariants},    {"invariant_homology", check_kontsevich},
        {"genus_identities", check_genus},   {"stability_bounds", check_bounds},
    };
    const auto results = parallel_map<Check>(checks.size(), config.jobs, [&](std::size_t j) {
        try {
            return checks[j].second(config);
        } catch (const std::exception& e) {
            return Check{false, std::string("exception: ") + e.what()};
        }
    });
    for (std::size_t j = 0; j < checks.size(); ++j) {
        t.add_row({checks[j].first, results[j].first ? "pass" : "fail", results[j].second});
    }
    return t;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "d") {
        d = parse_int<int>(key, value);
    } else if (key == "g") {
        const auto dots = value.find("..");
        if (dots == std::string_view::npos) {
            g_min = g_max = parse_int<std::size_t>(key, value);
        } else {
            g_min = parse_int<std::size_t>(key, trim(value.substr(0, dots)));
            g_max = parse_int<std::size_t>(key, trim(value.substr(dots + 2)));
        }
    } else if (key == "maxdeg") {
        max_degree = parse_int<int>(key, value);
    } else if (key == "maxlen") {
        max_length = parse_int<std::size_t>(key, value);
    } else if (key == "jobs") {
        jobs = parse_int<std::size_t>(key, value);
    } else if (key == "format") {
        if (value == "csv") {
            format = OutputFormat::Csv;
        } else if (value == "json") {
            format = OutputFormat::Json;
        } else {
            throw ValidationError("format must be csv or json");
        }
    } else if (key == "seed") {
        seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "i") {
        index = parse_int<int>(key, value);
    } else if (key == "table") {
        table_path = std::string(value);
    } else {
        throw ValidationError("unknown config key '" + std::string(key) + "'");
    }
}

void RunConfig::validate() const {
    if (d < 3) throw ValidationError("d must be >= 3");
    if (g_min < 1 || g_min > g_max) throw ValidationError("g range must satisfy 1 <= min <= max");
    if (max_degree < 1) throw ValidationError("maxdeg must be positive");
    if (max_length < 1) throw ValidationError("maxlen must be positive");
    if (jobs < 1) throw ValidationError("jobs must be positive");
    if (index < 1) throw ValidationError("i must be positive");
}

std::string RunConfig::describe() const {
    std::string out = "d=" + std::to_string(d) + " g=" + std::to_string(g_min);
    if (g_max != g_min) out += ".." + std::to_string(g_max);
    out += " maxdeg=" + std::to_string(max_degree) + " maxlen=" + std::to_string(max_length) +
           " seed=" + std::to_string(seed) + " i=" + std::to_string(index);
    if (!table_path.empty()) out += " table=" + table_path;
    return out;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    std::size_t line_number = 0;
    while (!text.empty()) {
        const auto end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(line_number) + ": expected key = value");
        }
        base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

void ResultTable::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::logic_error("row width does not match the columns");
    rows.push_back(std::move(row));
}

std::string ResultTable::metadata_value(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return {};
}

std::string ResultTable::to_csv() const {
    std::ostringstream out;
    for (const auto& [k, v] : metadata) out << "# " << k << ": " << v << '\n';
    auto write = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out << ',';
            const bool quote = cells[i].find_first_of(",\"") != std::string::npos;
            if (!quote) {
                out << cells[i];
                continue;
            }
            out << '"';
            for (char ch : cells[i]) out << (ch == '"' ? "\"\"" : std::string(1, ch));
            out << '"';
        }
        out << '\n';
    };
    write(columns);
    for (const auto& r : rows) write(r);
    return out.str();
}

std::string ResultTable::to_json() const {
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : metadata) meta[k] = v;
    nlohmann::ordered_json body = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json row = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < r.size(); ++i) {
            long long value = 0;
            const auto* end = r[i].data() + r[i].size();
            const auto [ptr, ec] = std::from_chars(r[i].data(), end, value);
            if (!r[i].empty() && ec == std::errc() && ptr == end) {
                row[columns[i]] = value;
            } else {
                row[columns[i]] = r[i];
            }
        }
        body.push_back(std::move(row));
    }
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["metadata"] = meta;
    doc["columns"] = columns;
    doc["rows"] = body;
    return doc.dump(2) + "\n";
}

std::string ResultTable::render(OutputFormat format) const {
    return format == OutputFormat::Json ? to_json() : to_csv();
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"dims",      "ce",        "ss",    "invariants",
                                                "stable-ring", "stability", "genus", "selftest"};
    return names;
}

std::string command_help(std::string_view command) {
    if (command == "dims") return "omega-derivation dims per word length vs Schur functor dims. CSV: g,k,degree,dim,schur_dim,agree";
    if (command == "ce") return "bigraded CE homology of the omega-derivations. CSV: g,p,q,dim,stable_for_g_above";
    if (command == "ss") return "word-length spectral sequence pages. CSV: g,page,p,q,dim";
    if (command == "invariants") return "invariant CE complex and its homology. CSV: g,degree,chain_dim,homology_dim";
    if (command == "stable-ring") return "stable ring generators and Poincare series. CSV: degree,generators,poincare[,kappa_generators]";
    if (command == "stability") return "stability bounds and observed invariant chain dims. CSV: kind,degree,p,q,ell,g,value";
    if (command == "genus") return "Newton classes, genus coefficients, kappa relation. CSV: kind,key,value";
    if (command == "selftest") return "property suite. CSV: check,status,detail";
    throw ValidationError("unknown command '" + std::string(command) + "'");
}

ResultTable run(std::string_view command, const RunConfig& config) {
    config.validate();
    if (command == "dims") return run_dims(config);
    if (command == "ce") return run_ce(config);
    if (command == "ss") return run_ss(config);
    if (command == "invariants") return run_invariants(config);
    if (command == "stable-ring") return run_stable_ring(config);
    if (command == "stability") return run_stability(config);
    if (command == "genus") return run_genus(config);
    if (command == "selftest") return run_selftest(config);
    throw ValidationError("unknown command '" + std::string(command) + "'");
}

bool selftest_passed(const ResultTable& table) {
    return std::all_of(table.rows.begin(), table.rows.end(), [](const auto& r) { return r.at(1) == "pass"; });
}

}  // namespace hcm
