#include "hcm/schurstab.hpp"

#include "hcm/errors.hpp"

#include <algorithm>
#include <climits>
#include <numeric>
#include <sstream>

namespace hcm {

namespace {

Integer factorial(int k) {
    Integer out = 1;
    for (int i = 2; i <= k; ++i) out *= i;
    return out;
}

void extend_partitions(int remaining, int largest, Partition& prefix, std::vector<Partition>& out) {
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (int part = std::min(remaining, largest); part >= 1; --part) {
        prefix.push_back(part);
        extend_partitions(remaining - part, part, prefix, out);
        prefix.pop_back();
    }
}

// Permutation made of consecutive cycles of the given lengths.
std::vector<int> representative(const Partition& cycle_type) {
    std::vector<int> perm;
    int start = 0;
    for (int length : cycle_type) {
        for (int i = 0; i < length; ++i) perm.push_back(start + (i + 1) % length);
        start += length;
    }
    return perm;
}

// Coefficient of the word `word` in the left-normed bracket [[l_0, l_1], ..., l_j] of
// distinct letters. Peeling the last letter of the bracket: it sits either at the end
// of the word (sign +) or at the front (sign -).
int left_normed_coefficient(const std::vector<int>& letters, const std::vector<int>& word) {
    std::size_t lo = 0;
    std::size_t hi = word.size() - 1;
    int sign = 1;
    for (std::size_t i = letters.size() - 1; i >= 1; --i) {
        if (word[hi] == letters[i]) {
            --hi;
        } else if (word[lo] == letters[i]) {
            ++lo;
            sign = -sign;
        } else {
            return 0;
        }
    }
    return word[lo] == letters[0] ? sign : 0;
}

std::vector<std::pair<std::vector<int>, int>> left_normed_words(const std::vector<int>& letters) {
    std::vector<std::pair<std::vector<int>, int>> terms{{{letters[0]}, 1}};
    for (std::size_t i = 1; i < letters.size(); ++i) {
        std::vector<std::pair<std::vector<int>, int>> next;
        next.reserve(terms.size() * 2);
        for (const auto& [word, sign] : terms) {
            auto right = word;
            right.push_back(letters[i]);
            next.emplace_back(std::move(right), sign);
            std::vector<int> left{letters[i]};
            left.insert(left.end(), word.begin(), word.end());
            next.emplace_back(std::move(left), -sign);
        }
        terms = std::move(next);
    }
    return terms;
}

std::size_t permutation_rank(const std::vector<int>& perm) {
    std::size_t rank = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        std::size_t smaller = 0;
        for (std::size_t j = i + 1; j < perm.size(); ++j) {
            if (perm[j] < perm[i]) ++smaller;
        }
        rank = rank * (perm.size() - i) + smaller;
    }
    return rank;
}

void check_arity(int k, int minimum, const char* what) {
    if (k < minimum) {
        throw ValidationError(std::string(what) + ": arity must be at least " +
                              std::to_string(minimum));
    }
}

// Symmetric functions in the power-sum basis, graded by degree.
using PowerSum = std::map<Partition, Rational>;
using GradedPowerSum = std::map<int, PowerSum>;

int arity(const Partition& p) { return std::accumulate(p.begin(), p.end(), 0); }

Partition merge(const Partition& a, const Partition& b) {
    Partition out(a);
    out.insert(out.end(), b.begin(), b.end());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

GradedPowerSum multiply(const GradedPowerSum& a, const GradedPowerSum& b, int max_arity) {
    GradedPowerSum out;
    for (const auto& [da, fa] : a) {
        for (const auto& [db, fb] : b) {
            for (const auto& [pa, ca] : fa) {
                for (const auto& [pb, cb] : fb) {
                    if (arity(pa) + arity(pb) > max_arity) continue;
                    out[da + db][merge(pa, pb)] += ca * cb;
                }
            }
        }
    }
    return out;
}

// p_m applied to a graded super symmetric function: p_j -> p_{jm}, degree a -> am,
// and the Koszul sign (-1)^{(m-1)a}.
GradedPowerSum adams(int m, const GradedPowerSum& f) {
    GradedPowerSum out;
    for (const auto& [degree, terms] : f) {
        const int sign = ((m - 1) * degree) % 2 == 0 ? 1 : -1;
        for (const auto& [p, c] : terms) {
            Partition scaled(p);
            for (int& part : scaled) part *= m;
            out[degree * m][scaled] += sign * c;
        }
    }
    return out;
}

GradedPowerSum unit() { return {{0, {{Partition{}, Rational(1)}}}}; }

GradedPowerSum to_power_sum(const GradedSchurFunctor& f) {
    GradedPowerSum out;
    for (const auto& [key, rep] : f.components) {
        for (const auto& [p, value] : rep.character) {
            if (value == 0) continue;
            out[key.second][p] += Rational(value) / Rational(centralizer_order(p));
        }
    }
    return out;
}

GradedSchurFunctor from_power_sum(const GradedPowerSum& f) {
    GradedSchurFunctor out;
    for (const auto& [degree, terms] : f) {
        for (const auto& [p, c] : terms) {
            if (c == 0) continue;
            const Rational value = c * Rational(centralizer_order(p));
            if (value.get_den() != 1) {
                throw ValidationError("plethysm produced a non-integral character value");
            }
            const int k = arity(p);
            auto& rep = out.components[{k, degree}];
            rep.k = k;
            rep.character[p] = value.get_num();
        }
    }
    for (auto& [key, rep] : out.components) {
        for (const auto& p : partitions(key.first)) rep.character.try_emplace(p, 0);
    }
    return out;
}

// Graded-symmetric algebra through the given arity; f must vanish in arity 0.
GradedPowerSum symmetric_algebra(const GradedPowerSum& f, int max_arity, int min_arity) {
    GradedPowerSum total = unit();
    if (min_arity <= 0) throw ValidationError("symmetric_algebra: input has an arity-0 part");
    std::map<int, GradedPowerSum> powers;  // adams(m, f), cached
    for (int r = 1; r * min_arity <= max_arity; ++r) {
        for (const auto& lambda : partitions(r)) {
            GradedPowerSum term = unit();
            for (int part : lambda) {
                auto it = powers.find(part);
                if (it == powers.end()) it = powers.emplace(part, adams(part, f)).first;
                term = multiply(term, it->second, max_arity);
            }
            const Rational weight = Rational(1) / Rational(centralizer_order(lambda));
            for (const auto& [degree, terms] : term) {
                for (const auto& [p, c] : terms) total[degree][p] += weight * c;
            }
        }
    }
    return total;
}

Integer power(const Integer& base, int exponent) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(exponent));
    return out;
}

}  // namespace

std::vector<Partition> partitions(int k) {
    if (k < 0) throw ValidationError("partitions: negative size");
    std::vector<Partition> out;
    Partition prefix;
    extend_partitions(k, k, prefix, out);
    return out;
}

Integer centralizer_order(const Partition& cycle_type) {
    Integer out = 1;
    std::map<int, int> multiplicity;
    for (int part : cycle_type) ++multiplicity[part];
    for (const auto& [part, count] : multiplicity) {
        out *= power(Integer(part), count) * factorial(count);
    }
    return out;
}

int permutation_sign(const Partition& cycle_type) {
    const int even_cycles = static_cast<int>(
        std::count_if(cycle_type.begin(), cycle_type.end(), [](int p) { return p % 2 == 0; }));
    return even_cycles % 2 == 0 ? 1 : -1;
}

Integer SymRep::at(const Partition& cycle_type) const {
    auto it = character.find(cycle_type);
    return it == character.end() ? Integer(0) : it->second;
}

Integer SymRep::dim() const { return at(Partition(static_cast<std::size_t>(k), 1)); }

bool SymRep::is_zero() const {
    return std::all_of(character.begin(), character.end(),
                       [](const auto& entry) { return entry.second == 0; });
}

Rational SymRep::inner_product(const SymRep& other) const {
    if (k != other.k) throw ValidationError("inner_product: arities differ");
    Rational out = 0;
    for (const auto& p : partitions(k)) {
        out += Rational(at(p) * other.at(p)) / Rational(centralizer_order(p));
    }
    return out;
}

std::string SymRep::to_csv() const {
    std::ostringstream out;
    out << "cycle_type,class_size,value\n";
    const Integer order = factorial(k);
    for (const auto& p : partitions(k)) {
        for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "." : "") << p[i];
        const Integer size = order / centralizer_order(p);
        out << ',' << size.get_str() << ',' << at(p).get_str() << '\n';
    }
    return out.str();
}

SymRep trivial_rep(int k) {
    SymRep out{k, {}};
    for (const auto& p : partitions(k)) out.character[p] = 1;
    return out;
}

SymRep sign_rep(int k) {
    SymRep out{k, {}};
    for (const auto& p : partitions(k)) out.character[p] = permutation_sign(p);
    return out;
}

SymRep sign_twist(const SymRep& rep) {
    SymRep out = rep;
    for (auto& [p, value] : out.character) value *= permutation_sign(p);
    return out;
}

SymRep operator+(const SymRep& a, const SymRep& b) {
    if (a.k != b.k) throw ValidationError("SymRep sum: arities differ");
    SymRep out{a.k, {}};
    for (const auto& p : partitions(a.k)) out.character[p] = a.at(p) + b.at(p);
    return out;
}

SymRep operator-(const SymRep& a, const SymRep& b) {
    if (a.k != b.k) throw ValidationError("SymRep difference: arities differ");
    SymRep out{a.k, {}};
    for (const auto& p : partitions(a.k)) out.character[p] = a.at(p) - b.at(p);
    return out;
}

SymRep induce_from_point_stabilizer(const SymRep& rep) {
    SymRep out{rep.k + 1, {}};
    for (const auto& p : partitions(rep.k + 1)) {
        const auto fixed = std::count(p.begin(), p.end(), 1);
        if (fixed == 0) {
            out.character[p] = 0;
            continue;
        }
        Partition rest(p);
        rest.pop_back();  // one fixed point; 1-parts are last
        out.character[p] = Integer(static_cast<long>(fixed)) * rep.at(rest);
    }
    return out;
}

SymRep lie_rep(int k) {
    check_arity(k, 1, "lie_rep");
    SymRep out{k, {}};
    for (const auto& p : partitions(k)) {
        const auto sigma = representative(p);
        // word = (0, tail), basis element = [[x_0, x_tail...]]; its coordinate in an
        // element is the coefficient of that word.
        std::vector<int> tail(static_cast<std::size_t>(k - 1));
        std::iota(tail.begin(), tail.end(), 1);
        long trace = 0;
        std::vector<int> word(static_cast<std::size_t>(k));
        std::vector<int> moved(static_cast<std::size_t>(k));
        do {
            word[0] = 0;
            std::copy(tail.begin(), tail.end(), word.begin() + 1);
            for (int i = 0; i < k; ++i) moved[i] = sigma[word[i]];
            trace += left_normed_coefficient(moved, word);
        } while (std::next_permutation(tail.begin(), tail.end()));
        out.character[p] = trace;
    }
    return out;
}

SymRep u_rep(int k) {
    check_arity(k, 2, "u_rep");
    return induce_from_point_stabilizer(lie_rep(k - 1)) - lie_rep(k);
}

SymRep u_rep_from_kernel(int k) {
    check_arity(k, 2, "u_rep_from_kernel");
    // Basis of Ind Lie(k-1): a slot i and a left-normed bracket on the other letters
    // starting with their minimum. The map sends it to [x_i, bracket] in T(k).
    struct IndBasis {
        int slot;
        std::vector<int> letters;
    };
    std::vector<IndBasis> basis;
    std::map<std::pair<int, std::vector<int>>, std::size_t> index;
    for (int slot = 0; slot < k; ++slot) {
        std::vector<int> rest;
        for (int x = 0; x < k; ++x) {
            if (x != slot) rest.push_back(x);
        }
        do {
            index[{slot, rest}] = basis.size();
            basis.push_back({slot, rest});
        } while (std::next_permutation(rest.begin() + 1, rest.end()));
    }

    std::vector<SparseVector> columns;
    columns.reserve(basis.size());
    for (const auto& element : basis) {
        std::vector<SparseVector::Entry> entries;
        for (const auto& [word, sign] : left_normed_words(element.letters)) {
            std::vector<int> front{element.slot};
            front.insert(front.end(), word.begin(), word.end());
            auto back = word;
            back.push_back(element.slot);
            entries.emplace_back(permutation_rank(front), Rational(sign));
            entries.emplace_back(permutation_rank(back), Rational(-sign));
        }
        columns.emplace_back(std::move(entries));
    }
    const auto kernel = rank_kernel(SparseMatrix::from_columns(
                                        static_cast<std::size_t>(factorial(k).get_ui()), columns))
                            .kernel_basis;
    SubspaceBasis span(basis.size());
    for (const auto& v : kernel) span.add(v);

    SymRep out{k, {}};
    for (const auto& p : partitions(k)) {
        const auto sigma = representative(p);
        // Image of each Ind basis vector under sigma, re-expanded in the basis.
        std::vector<SparseVector> image(basis.size());
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const int slot = sigma[basis[b].slot];
            std::vector<int> moved;
            for (int x : basis[b].letters) moved.push_back(sigma[x]);
            std::vector<int> target(moved);
            std::sort(target.begin(), target.end());
            std::vector<SparseVector::Entry> entries;
            do {
                const int c = left_normed_coefficient(moved, target);
                if (c != 0) entries.emplace_back(index.at({slot, target}), Rational(c));
            } while (std::next_permutation(target.begin() + 1, target.end()));
            image[b] = SparseVector(std::move(entries));
        }
        Rational trace = 0;
        const auto& gens = span.generators();
        for (std::size_t a = 0; a < gens.size(); ++a) {
            SparseVector moved_vector;
            for (const auto& [b, c] : gens[a].entries()) moved_vector += c * image[b];
            trace += span.coordinates(moved_vector)[a];
        }
        if (trace.get_den() != 1) throw ValidationError("u_rep_from_kernel: non-integral trace");
        out.character[p] = trace.get_num();
    }
    return out;
}

Integer schur_dim(const SymRep& rep, const Integer& n, bool odd) {
    Rational total = 0;
    for (const auto& p : partitions(rep.k)) {
        Integer term = rep.at(p) * power(n, static_cast<int>(p.size()));
        if (odd) term *= permutation_sign(p);
        total += Rational(term) / Rational(centralizer_order(p));
    }
    if (total.get_den() != 1) throw ValidationError("schur_dim: character is not a genuine rep");
    return total.get_num();
}

std::map<int, Integer> GradedSchurFunctor::rep_dims(int k) const {
    std::map<int, Integer> out;
    for (const auto& [key, rep] : components) {
        if (key.first == k && !rep.is_zero()) out[key.second] += rep.dim();
    }
    return out;
}

std::map<int, Integer> GradedSchurFunctor::evaluate(const Integer& n) const {
    std::map<int, Integer> out;
    for (const auto& [key, rep] : components) {
        const Integer value = schur_dim(rep, n);
        if (value != 0) out[key.second] += value;
    }
    return out;
}

int GradedSchurFunctor::lowest_degree(int k) const {
    int lowest = INT_MAX;
    for (const auto& [key, rep] : components) {
        if (key.first == k && !rep.is_zero()) lowest = std::min(lowest, key.second);
    }
    return lowest;
}

GradedSchurFunctor u_tilde(int max_arity, int d) {
    if (d < 2) throw ValidationError("u_tilde: d must be at least 2");
    GradedSchurFunctor out;
    for (int k = 3; k <= max_arity; ++k) {
        const SymRep u = u_rep(k);
        out.components[{k, (k - 2) * (d - 1)}] = d % 2 == 0 ? sign_twist(u) : u;
    }
    return out;
}

GradedSchurFunctor ce_schur(int max_arity, int d) {
    // Suspension raises every degree by one.
    GradedPowerSum generators;
    for (const auto& [degree, terms] : to_power_sum(u_tilde(max_arity, d))) {
        generators[degree + 1] = terms;
    }
    return from_power_sum(symmetric_algebra(generators, max_arity, 3));
}

std::map<int, Integer> ce_schur_dims(int k, int d) {
    if (k < 0) throw ValidationError("ce_schur_dims: negative arity");
    return ce_schur(k, d).rep_dims(k);
}

std::map<int, Integer> ce_chain_dims(int max_total_degree, int d, const Integer& n) {
    const int max_arity = 3 * max_total_degree / d;
    std::map<int, Integer> out;
    for (const auto& [degree, value] : ce_schur(max_arity, d).evaluate(n)) {
        if (degree <= max_total_degree) out[degree] = value;
    }
    return out;
}

int ce_degree_floor(int k, int d) { return (k * d + 2) / 3; }

std::pair<int, int> stability_bounds(int k, int ell) {
    if (k < 0 || ell < 0) throw ValidationError("stability_bounds: negative degree");
    const StabilityBound bound{k, ell};
    return {bound.value(), bound.value()};
}

StabilityBound total_stability_bound(int k) {
    if (k < 0) throw ValidationError("total_stability_bound: negative degree");
    return {k, 0};
}

int ce_polynomial_degree(int p, int d) {
    if (p < 0 || d < 1) throw ValidationError("ce_polynomial_degree: bad arguments");
    return 3 * p / d;
}

StabilityBound ce_stability_bound(int p, int q, int d) {
    if (q < 0) throw ValidationError("ce_stability_bound: negative degree");
    return {q, ce_polynomial_degree(p, d)};
}

std::vector<int> pi_degrees(int d, int max_degree) {
    if (d < 3) throw ValidationError("pi_degrees: d must be at least 3");
    std::vector<int> out;
    for (int i = (d + 4) / 4; 4 * i - d <= max_degree; ++i) out.push_back(4 * i - d);
    return out;
}

int ce_pi_lowest_degree(int k, int d) {
    const auto pis = pi_degrees(d, 4 + d);
    const int lowest_pi = pis.front();
    const auto chains = ce_schur(k, d);
    int lowest = INT_MAX;
    for (int a = 0; a <= k; ++a) {
        const int from_chains = a == 0 ? 0 : chains.lowest_degree(a);
        if (from_chains == INT_MAX) continue;
        lowest = std::min(lowest, from_chains + (k - a) * lowest_pi);
    }
    return lowest;
}

int finite_difference_degree(const std::vector<Integer>& values) {
    std::vector<Integer> row = values;
    for (int level = 0; !row.empty(); ++level) {
        if (std::all_of(row.begin(), row.end(), [](const Integer& v) { return v == 0; })) {
            return level - 1;
        }
        if (row.size() == 1) break;
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = row[i + 1] - row[i];
        row.pop_back();
    }
    throw ValidationError("finite_difference_degree: too few values to detect the degree");
}

}  // namespace hcm
