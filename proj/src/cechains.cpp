#include "hcm/cechains.hpp"

#include "hcm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hcm {

namespace {

int koszul(long a) { return (a & 1) ? -1 : 1; }

SparseVector unit(std::size_t i) { return SparseVector({{i, Rational(1)}}); }

// Sparse vector keyed by r * n + c for an n x n matrix.
SparseVector flatten(const SparseMatrix& m) {
    std::vector<SparseVector::Entry> e;
    const std::size_t n = m.cols();
    for (const auto& t : m.triplets()) e.emplace_back(t.row * n + t.col, t.value);
    return SparseVector(std::move(e));
}

SparseVector remap(const SparseVector& v, const std::vector<std::size_t>& to) {
    std::vector<SparseVector::Entry> e;
    for (const auto& [i, c] : v.entries()) e.emplace_back(to.at(i), c);
    return SparseVector(std::move(e));
}

SparseVector from_coords(const std::vector<Rational>& coords, std::size_t skip,
                         const std::vector<std::size_t>& to) {
    std::vector<SparseVector::Entry> e;
    for (std::size_t t = skip; t < coords.size(); ++t)
        if (coords[t] != 0) e.emplace_back(to.at(t - skip), coords[t]);
    return SparseVector(std::move(e));
}

}  // namespace

// ---------------------------------------------------------------- DgLie

DgLie::DgLie(std::vector<std::string> names, std::vector<int> degrees)
    : names_(std::move(names)), degrees_(std::move(degrees)) {
    if (names_.size() != degrees_.size()) throw ValidationError("one degree per basis name required");
    brackets_.assign(size() * size(), SparseVector());
    differential_.assign(size(), SparseVector());
}

void DgLie::set_bracket(std::size_t i, std::size_t j, const SparseVector& value) {
    if (i >= size() || j >= size()) throw ValidationError("bracket index out of range");
    const Rational sign = -koszul(long(degree(i)) * degree(j));
    if (i == j && value != sign * value)
        throw ValidationError("an even-degree element must bracket to zero with itself");
    brackets_[i * size() + j] = value;
    brackets_[j * size() + i] = sign * value;
}

void DgLie::set_differential(std::size_t i, SparseVector value) {
    if (i >= size()) throw ValidationError("differential index out of range");
    differential_[i] = std::move(value);
}

bool DgLie::has_differential() const {
    return std::any_of(differential_.begin(), differential_.end(),
                       [](const SparseVector& v) { return !v.empty(); });
}

bool DgLie::is_abelian() const {
    return std::all_of(brackets_.begin(), brackets_.end(),
                       [](const SparseVector& v) { return v.empty(); });
}

bool DgLie::is_positively_graded() const {
    return std::all_of(degrees_.begin(), degrees_.end(), [](int d) { return d >= 1; });
}

std::vector<std::size_t> DgLie::basis_of_degree(int deg) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (degrees_[i] == deg) out.push_back(i);
    return out;
}

const SparseVector& DgLie::bracket(std::size_t i, std::size_t j) const {
    return brackets_.at(i * size() + j);
}

SparseVector DgLie::bracket(const SparseVector& x, const SparseVector& y) const {
    SparseVector out;
    for (const auto& [i, a] : x.entries())
        for (const auto& [j, b] : y.entries()) {
            const auto& v = bracket(i, j);
            if (!v.empty()) out += (a * b) * v;
        }
    return out;
}

const SparseVector& DgLie::differential(std::size_t i) const { return differential_.at(i); }

SparseVector DgLie::differential(const SparseVector& x) const {
    SparseVector out;
    for (const auto& [i, a] : x.entries())
        if (!differential_[i].empty()) out += a * differential_[i];
    return out;
}

int DgLie::degree_of(const SparseVector& x) const {
    if (x.empty()) throw ValidationError("the zero vector has no degree");
    const int deg = degree(x.entries().front().first);
    for (const auto& [i, c] : x.entries())
        if (degree(i) != deg) throw ValidationError("vector is not homogeneous");
    return deg;
}

void DgLie::validate() const {
    const std::size_t n = size();
    auto fail = [&](const std::string& what, std::size_t i, std::size_t j) {
        throw ValidationError(what + " fails at (" + name(i) + ", " + name(j) + ")");
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [k, c] : differential_[i].entries())
            if (k >= n || degree(k) != degree(i) - 1) fail("degree of the differential", i, i);
        if (!differential(differential_[i]).empty()) fail("d^2 = 0", i, i);
        for (std::size_t j = 0; j < n; ++j) {
            const auto& b = bracket(i, j);
            for (const auto& [k, c] : b.entries())
                if (k >= n || degree(k) != degree(i) + degree(j)) fail("bracket degree", i, j);
            if (bracket(j, i) != Rational(-koszul(long(degree(i)) * degree(j))) * b)
                fail("antisymmetry", i, j);
            // d[x,y] = [dx,y] + (-1)^{|x|} [x,dy]
            const SparseVector lhs = differential(b);
            const SparseVector rhs = bracket(differential_[i], unit(j)) +
                                     Rational(koszul(degree(i))) * bracket(unit(i), differential_[j]);
            if (lhs != rhs) fail("Leibniz rule for d", i, j);
        }
    }
    // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const SparseVector lhs = bracket(unit(i), bracket(j, k));
                const SparseVector rhs =
                    bracket(bracket(i, j), unit(k)) +
                    Rational(koszul(long(degree(i)) * degree(j))) * bracket(unit(j), bracket(i, k));
                if (lhs != rhs)
                    throw ValidationError("Jacobi identity fails at (" + name(i) + ", " + name(j) +
                                          ", " + name(k) + ")");
            }
}

DgLie DgLie::free_truncated(const GeneratorSet& gens, int max_degree,
                            const std::vector<LieElement>& differential) {
    if (max_degree < 1) throw ValidationError("truncation degree must be positive");
    for (int deg : gens.degrees())
        if (deg < 1) throw ValidationError("truncated free models need positive generator degrees");
    if (!differential.empty() && differential.size() != gens.size())
        throw ValidationError("one differential value per generator required");
    const LieAlgebraPtr alg = FreeLieAlgebra::create(gens);
    for (std::size_t i = 0; i < differential.size(); ++i) {
        const auto& v = differential[i];
        if (v.algebra()->generators() != gens)
            throw ValidationError("differential values must live in the same free algebra");
        if (!v.is_zero() && v.degree() != gens.degree(i) - 1)
            throw ValidationError("differential must have degree -1");
    }
    const int min_deg = *std::min_element(gens.degrees().begin(), gens.degrees().end());
    const std::size_t max_len = static_cast<std::size_t>((max_degree + 1) / min_deg);
    if (max_len > Word::kMaxLength) throw ValidationError("truncation needs words longer than 16");

    // Slots are free Lie basis elements of degree <= max_degree + 1.
    struct Slot {
        std::size_t length, index;
        int degree;
    };
    std::vector<Slot> slots;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> slot_of;
    std::vector<std::size_t> top_block;    // slots of degree max_degree
    std::vector<std::size_t> above_block;  // slots of degree max_degree + 1
    std::vector<long> block_pos;
    for (std::size_t len = 1; len <= max_len; ++len) {
        const auto& basis = alg->basis(len);
        for (std::size_t idx = 0; idx < basis.size(); ++idx) {
            if (basis[idx].degree > max_degree + 1) continue;
            const std::size_t s = slots.size();
            slots.push_back({len, idx, basis[idx].degree});
            slot_of[{len, idx}] = s;
            block_pos.push_back(-1);
            if (basis[idx].degree == max_degree) {
                block_pos[s] = long(top_block.size());
                top_block.push_back(s);
            } else if (basis[idx].degree == max_degree + 1) {
                above_block.push_back(s);
            }
        }
    }
    auto expansion = [&](std::size_t s) -> const Tensor& {
        return alg->basis(slots[s].length)[slots[s].index].expansion;
    };
    // Slot coordinates of a Lie tensor of mixed word length, restricted to degree <= cap.
    auto slot_coords = [&](const Tensor& t, int cap) {
        std::map<std::size_t, std::vector<Tensor::Term>> by_len;
        for (const auto& term : t.terms()) by_len[term.first.len].push_back(term);
        std::vector<SparseVector::Entry> out;
        for (auto& [len, terms] : by_len) {
            const SparseVector coords = alg->coordinates(Tensor(std::move(terms)), len);
            for (const auto& [idx, c] : coords.entries()) {
                if (alg->basis(len)[idx].degree > cap) continue;
                out.emplace_back(slot_of.at({len, idx}), c);
            }
        }
        return SparseVector(std::move(out));
    };
    auto d_tensor = [&](const Tensor& t) {
        Tensor out;
        if (differential.empty()) return out;
        for (const auto& [w, c] : t.terms()) {
            int prefix = 0;
            for (std::size_t pos = 0; pos < w.len; ++pos) {
                const std::size_t letter = w.at(pos);
                const auto& value = differential[letter];
                if (!value.is_zero()) {
                    std::vector<Tensor::Term> terms;
                    for (const auto& [u, cu] : value.tensor().terms()) {
                        Word nw = pos > 0 ? w.sub(0, pos).concat(u) : u;
                        if (pos + 1 < w.len) nw = nw.concat(w.sub(pos + 1, w.len - pos - 1));
                        terms.emplace_back(nw, Rational(koszul(prefix)) * c * cu);
                    }
                    out += Tensor(std::move(terms));
                }
                prefix += gens.degree(letter);
            }
        }
        return out;
    };

    // Degree max_degree is divided by the image of d from degree max_degree + 1.
    std::vector<SparseVector> relations;
    for (std::size_t s : above_block) {
        const SparseVector img = slot_coords(d_tensor(expansion(s)), max_degree);
        std::vector<SparseVector::Entry> e;
        for (const auto& [t, c] : img.entries()) e.emplace_back(std::size_t(block_pos[t]), c);
        if (!e.empty()) relations.push_back(SparseVector(std::move(e)));
    }
    const QuotientSpace top(top_block.size(), relations);

    std::vector<std::size_t> global_of_slot(slots.size(), SIZE_MAX);
    std::vector<std::size_t> slot_of_global;
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (std::size_t s = 0; s < slots.size(); ++s) {
        if (slots[s].degree >= max_degree) continue;
        global_of_slot[s] = slot_of_global.size();
        slot_of_global.push_back(s);
    }
    const std::size_t top_base = slot_of_global.size();
    for (std::size_t col : top.free_columns()) {
        global_of_slot[top_block[col]] = slot_of_global.size();
        slot_of_global.push_back(top_block[col]);
    }
    for (std::size_t s : slot_of_global) {
        const auto& el = alg->basis(slots[s].length)[slots[s].index];
        names.push_back(el.text);
        degrees.push_back(el.degree);
    }
    auto to_global = [&](const Tensor& t) {
        const SparseVector sc = slot_coords(t, max_degree);
        std::vector<SparseVector::Entry> out;
        std::vector<SparseVector::Entry> top_part;
        for (const auto& [s, c] : sc.entries()) {
            if (slots[s].degree < max_degree)
                out.emplace_back(global_of_slot[s], c);
            else
                top_part.emplace_back(std::size_t(block_pos[s]), c);
        }
        if (!top_part.empty()) {
            const SparseVector projected = top.project(SparseVector(std::move(top_part)));
            for (const auto& [j, c] : projected.entries()) out.emplace_back(top_base + j, c);
        }
        return SparseVector(std::move(out));
    };

    DgLie lie(std::move(names), std::move(degrees));
    const std::size_t n = lie.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Tensor& ti = expansion(slot_of_global[i]);
        for (std::size_t j = i; j < n; ++j) {
            if (lie.degree(i) + lie.degree(j) > max_degree) continue;
            const Tensor br = alg->commutator(ti, expansion(slot_of_global[j]));
            if (!br.empty()) lie.set_bracket(i, j, to_global(br));
        }
        lie.set_differential(i, to_global(d_tensor(ti)));
    }
    lie.set_truncation_degree(max_degree);
    return lie;
}

// ---------------------------------------------------------------- homology

LieHomology homology(const DgLie& lie) {
    const std::size_t n = lie.size();
    if (n == 0) return {DgLie({}, {}), {}};
    const int lo = *std::min_element(lie.degrees().begin(), lie.degrees().end());
    const int hi = *std::max_element(lie.degrees().begin(), lie.degrees().end());

    // Per degree: boundaries first, then chosen cycle representatives.
    struct Level {
        SubspaceBasis span;
        std::size_t boundary_dim = 0;
        std::vector<std::size_t> reps;  // indices into the result basis
    };
    std::map<int, Level> levels;
    std::vector<SparseVector> reps;
    std::vector<int> rep_degrees;
    for (int k = lo; k <= hi; ++k) {
        Level& level = levels[k];
        for (std::size_t b : lie.basis_of_degree(k + 1)) level.span.add(lie.differential(b));
        level.boundary_dim = level.span.dim();
        const auto basis = lie.basis_of_degree(k);
        std::vector<SparseVector> images;
        for (std::size_t b : basis) images.push_back(lie.differential(b));
        for (const auto& z : column_rank_kernel(images).kernel_basis) {
            const SparseVector cycle = remap(z, basis);
            if (level.span.add(cycle)) {
                level.reps.push_back(reps.size());
                reps.push_back(cycle);
                rep_degrees.push_back(k);
            }
        }
    }
    std::vector<std::string> names;
    for (std::size_t r = 0; r < reps.size(); ++r) {
        const auto& e = reps[r].entries();
        names.push_back(e.size() == 1 ? "[" + lie.name(e.front().first) + "]"
                                      : "h" + std::to_string(r + 1));
    }
    DgLie h(std::move(names), rep_degrees);
    for (std::size_t a = 0; a < reps.size(); ++a)
        for (std::size_t b = a; b < reps.size(); ++b) {
            const SparseVector v = lie.bracket(reps[a], reps[b]);
            if (v.empty()) continue;
            const auto it = levels.find(rep_degrees[a] + rep_degrees[b]);
            if (it == levels.end()) throw std::logic_error("bracket leaves the degree range");
            const Level& level = it->second;
            h.set_bracket(a, b, from_coords(level.span.coordinates(v), level.boundary_dim,
                                            level.reps));
        }
    h.set_truncation_degree(lie.truncation_degree());
    return {std::move(h), std::move(reps)};
}

// ---------------------------------------------------------------- CE words

std::optional<std::pair<int, CEWord>> ce_normal_form(const DgLie& lie,
                                                     std::vector<std::size_t> factors) {
    auto key = [&](std::size_t i) { return std::pair(lie.degree(i) + 1, i); };
    int sign = 1;
    // Insertion sort; each adjacent transposition contributes (-1)^{|sa||sb|}.
    for (std::size_t a = 1; a < factors.size(); ++a)
        for (std::size_t b = a; b > 0 && key(factors[b - 1]) > key(factors[b]); --b) {
            sign *= koszul(long(lie.degree(factors[b - 1]) + 1) * (lie.degree(factors[b]) + 1));
            std::swap(factors[b - 1], factors[b]);
        }
    int degree = 0;
    for (std::size_t a = 0; a < factors.size(); ++a) {
        const int sd = lie.degree(factors[a]) + 1;
        if (a > 0 && factors[a] == factors[a - 1] && (sd & 1)) return std::nullopt;
        degree += sd;
    }
    return std::pair(sign, CEWord{std::move(factors), degree});
}

std::size_t BigradedDims::at(int p, int q) const {
    const auto it = dims.find({p, q});
    return it == dims.end() ? 0 : it->second;
}

std::size_t BigradedDims::total(int n) const {
    std::size_t sum = 0;
    for (const auto& [pq, dim] : dims)
        if (pq.first + pq.second == n) sum += dim;
    return sum;
}

std::string BigradedDims::to_csv() const {
    std::ostringstream out;
    out << "p,q,dim\n";
    for (const auto& [pq, dim] : dims) out << pq.first << ',' << pq.second << ',' << dim << '\n';
    return out.str();
}

std::string BigradedDims::to_json() const {
    nlohmann::json j;
    j["max_word_length"] = max_word_length;
    j["max_total_degree"] = max_total_degree;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [pq, dim] : dims)
        entries.push_back({{"p", pq.first}, {"q", pq.second}, {"dim", dim}});
    j["dims"] = entries;
    return j.dump();
}

// ---------------------------------------------------------------- CEComplex

CEComplex::CEComplex(DgLie lie, std::size_t max_word_length, int max_total_degree)
    : lie_(std::move(lie)), pmax_(max_word_length), nmax_(max_total_degree) {
    if (const auto trunc = lie_.truncation_degree()) {
        const int limit = *trunc - (lie_.has_differential() ? 1 : 0);
        if (nmax_ > limit)
            throw ValidationError("total degree " + std::to_string(nmax_) +
                                  " exceeds the exact range of the truncated model (" +
                                  std::to_string(limit) + ")");
    }
    order_.resize(lie_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(lie_.degree(a), a) < std::pair(lie_.degree(b), b);
    });
    rank_.resize(lie_.size());
    for (std::size_t r = 0; r < order_.size(); ++r) rank_[order_[r]] = r;

    // Enumerate normal-form words of length <= pmax + 1 and degree <= nmax + 1.
    const std::size_t plimit = pmax_ + 1;
    const int nlimit = nmax_ + 1;
    nmin_ = 0;
    std::vector<std::size_t> current;
    auto record = [&](int degree) {
        if (degree > nlimit) return;
        auto& slice = slices_[{current.size(), degree}];
        index_[current] = slice.size();
        slice.push_back(CEWord{current, degree});
        if (current.size() <= pmax_) nmin_ = std::min(nmin_, degree);
    };
    auto extend = [&](auto&& self, std::size_t start, int degree) -> void {
        record(degree);
        if (current.size() == plimit) return;
        for (std::size_t pos = start; pos < order_.size(); ++pos) {
            const std::size_t idx = order_[pos];
            const int sd = lie_.degree(idx) + 1;
            // Later factors have suspended degree >= sd, so nothing else fits.
            if (sd >= 0 && degree + sd > nlimit) break;
            current.push_back(idx);
            self(self, (sd & 1) ? pos + 1 : pos, degree + sd);
            current.pop_back();
        }
    };
    extend(extend, 0, 0);
}

const std::vector<CEWord>& CEComplex::words(std::size_t p, int n) const {
    static const std::vector<CEWord> none;
    const auto it = slices_.find({p, n});
    return it == slices_.end() ? none : it->second;
}

std::size_t CEComplex::index_of(const CEWord& w) const {
    const auto it = index_.find(w.factors);
    if (it == index_.end()) throw ValidationError("word is outside the chain window");
    return it->second;
}

void CEComplex::check_in_range(const CEWord& w) const {
    for (std::size_t f : w.factors)
        if (f >= lie_.size()) throw ValidationError("word factor out of range");
    const auto nf = ce_normal_form(lie_, w.factors);
    if (!nf || nf->first != 1 || nf->second.factors != w.factors || nf->second.degree != w.degree)
        throw ValidationError("word is not in normal form");
    if (w.word_length() > pmax_ + 1 || w.degree > nmax_ + 1)
        throw ValidationError("word is outside the chain window (length " +
                              std::to_string(w.word_length()) + ", degree " +
                              std::to_string(w.degree) + ")");
}

void CEComplex::add_term(CEChain& out, std::vector<std::size_t> factors, const Rational& c) const {
    auto nf = ce_normal_form(lie_, std::move(factors));
    if (!nf) return;
    Rational& slot = out[nf->second];
    slot += nf->first * c;
    if (slot == 0) out.erase(nf->second);
}

CEChain CEComplex::delta0(const CEWord& w) const {
    check_in_range(w);
    CEChain out;
    int eps = 0;
    for (std::size_t i = 0; i < w.factors.size(); ++i) {
        const Rational sign = koszul(1 + eps);
        for (const auto& [k, c] : lie_.differential(w.factors[i]).entries()) {
            auto f = w.factors;
            f[i] = k;
            add_term(out, std::move(f), sign * c);
        }
        eps += lie_.degree(w.factors[i]) + 1;
    }
    return out;
}

CEChain CEComplex::delta1(const CEWord& w) const {
    check_in_range(w);
    CEChain out;
    const std::size_t p = w.factors.size();
    std::vector<int> sdeg(p), eps(p + 1, 0);
    for (std::size_t i = 0; i < p; ++i) {
        sdeg[i] = lie_.degree(w.factors[i]) + 1;
        eps[i + 1] = eps[i] + sdeg[i];
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            const auto& br = lie_.bracket(w.factors[i], w.factors[j]);
            if (br.empty()) continue;
            // Moving sx_i, then sx_j, to the front.
            const long eta = long(sdeg[i]) * eps[i] + long(sdeg[j]) * (eps[j] - sdeg[i]);
            const Rational sign = koszul(sdeg[i] + eta);
            std::vector<std::size_t> rest;
            for (std::size_t k = 0; k < p; ++k)
                if (k != i && k != j) rest.push_back(w.factors[k]);
            for (const auto& [k, c] : br.entries()) {
                std::vector<std::size_t> f{k};
                f.insert(f.end(), rest.begin(), rest.end());
                add_term(out, std::move(f), sign * c);
            }
        }
    return out;
}

CEChain CEComplex::differential(const CEWord& w) const {
    CEChain out = delta1(w);
    for (const auto& [word, c] : delta0(w)) {
        Rational& slot = out[word];
        slot += c;
        if (slot == 0) out.erase(word);
    }
    return out;
}

CEChain CEComplex::differential(const CEChain& chain) const {
    CEChain out;
    for (const auto& [w, c] : chain)
        for (const auto& [word, v] : differential(w)) {
            Rational& slot = out[word];
            slot += c * v;
            if (slot == 0) out.erase(word);
        }
    return out;
}

SparseMatrix CEComplex::delta0_matrix(std::size_t p, int n) const {
    const auto& src = words(p, n);
    const auto& dst = words(p, n - 1);
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t col = 0; col < src.size(); ++col)
        for (const auto& [w, c] : delta0(src[col])) trip.push_back({index_of(w), col, c});
    return SparseMatrix(dst.size(), src.size(), std::move(trip));
}

SparseMatrix CEComplex::delta1_matrix(std::size_t p, int n) const {
    const auto& src = words(p, n);
    if (p == 0) return SparseMatrix(0, src.size());
    const auto& dst = words(p - 1, n - 1);
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t col = 0; col < src.size(); ++col)
        for (const auto& [w, c] : delta1(src[col])) trip.push_back({index_of(w), col, c});
    return SparseMatrix(dst.size(), src.size(), std::move(trip));
}

BigradedDims CEComplex::chain_dims() const {
    BigradedDims out{pmax_, nmax_, {}};
    for (const auto& [key, words] : slices_) {
        const auto [p, n] = key;
        if (p <= pmax_ && n <= nmax_ && !words.empty())
            out.dims[{int(p), n - int(p)}] = words.size();
    }
    return out;
}

BigradedDims ce_homology(const CEComplex& c) {
    if (c.lie().has_differential())
        throw ValidationError("bigraded homology needs a Lie algebra with zero differential");
    std::map<std::pair<std::size_t, int>, std::size_t> ranks;
    auto rank_at = [&](std::size_t p, int n) {
        const auto key = std::pair(p, n);
        auto it = ranks.find(key);
        if (it == ranks.end()) it = ranks.emplace(key, rank(c.delta1_matrix(p, n))).first;
        return it->second;
    };
    BigradedDims out{c.max_word_length(), c.max_total_degree(), {}};
    for (std::size_t p = 0; p <= c.max_word_length(); ++p)
        for (int n = c.min_total_degree(); n <= c.max_total_degree(); ++n) {
            const std::size_t dim = c.words(p, n).size();
            if (dim == 0) continue;
            const std::size_t h = dim - rank_at(p, n) - rank_at(p + 1, n + 1);
            if (h > 0) out.dims[{int(p), n - int(p)}] = h;
        }
    return out;
}

namespace {

// Total-degree slice of the chains, ordered by word length.
struct TotalSlice {
    std::vector<std::size_t> offset;  // offset[p] = first coordinate of word length p
    std::size_t dim() const { return offset.back(); }
    std::size_t filtration_end(long p) const {  // coordinates of F_p
        if (p < 0) return 0;
        return offset[std::min<std::size_t>(std::size_t(p) + 1, offset.size() - 1)];
    }
};

TotalSlice total_slice(const CEComplex& c, int n, std::size_t plimit) {
    TotalSlice s;
    s.offset.push_back(0);
    for (std::size_t p = 0; p <= plimit; ++p) s.offset.push_back(s.offset.back() + c.words(p, n).size());
    return s;
}

// Total differential from degree n to n - 1 in the ordered coordinates.
SparseMatrix total_differential(const CEComplex& c, int n, std::size_t plimit) {
    const TotalSlice src = total_slice(c, n, plimit);
    const TotalSlice dst = total_slice(c, n - 1, plimit);
    std::vector<SparseMatrix::Triplet> trip;
    for (std::size_t p = 0; p <= plimit; ++p) {
        const auto& words = c.words(p, n);
        for (std::size_t i = 0; i < words.size(); ++i)
            for (const auto& [w, v] : c.differential(words[i]))
                trip.push_back({dst.offset[w.word_length()] + c.index_of(w), src.offset[p] + i, v});
    }
    return SparseMatrix(dst.dim(), src.dim(), std::move(trip));
}

SparseMatrix submatrix(const SparseMatrix& m, std::size_t row_begin, std::size_t col_end) {
    std::vector<SparseMatrix::Triplet> trip;
    for (const auto& t : m.triplets())
        if (t.row >= row_begin && t.col < col_end) trip.push_back({t.row - row_begin, t.col, t.value});
    return SparseMatrix(m.rows() - row_begin, col_end, std::move(trip));
}

}  // namespace

std::vector<std::size_t> ce_total_homology(const CEComplex& c) {
    const DgLie& lie = c.lie();
    // Words one longer than the built range must lie above the window.
    std::vector<int> candidates;
    for (std::size_t i = 0; i < lie.size(); ++i) {
        const int sd = lie.degree(i) + 1;
        if (sd < 1) throw ValidationError("total homology needs a non-negatively graded Lie algebra");
        const std::size_t copies = (sd & 1) ? 1 : c.max_word_length() + 2;
        candidates.insert(candidates.end(), copies, sd);
    }
    std::sort(candidates.begin(), candidates.end());
    const std::size_t longer = c.max_word_length() + 2;
    if (candidates.size() >= longer &&
        std::accumulate(candidates.begin(), candidates.begin() + long(longer), 0) <=
            c.max_total_degree() + 1)
        throw ValidationError("word-length window too small for the requested total degrees");

    const std::size_t plimit = c.max_word_length() + 1;
    std::vector<std::size_t> out;
    std::size_t rank_in = 0;
    std::vector<std::size_t> ranks;
    for (int n = c.min_total_degree(); n <= c.max_total_degree() + 1; ++n)
        ranks.push_back(rank(total_differential(c, n, plimit)));
    for (int n = c.min_total_degree(); n <= c.max_total_degree(); ++n) {
        const std::size_t i = std::size_t(n - c.min_total_degree());
        rank_in = ranks[i + 1];
        out.push_back(total_slice(c, n, plimit).dim() - ranks[i] - rank_in);
    }
    return out;
}

bool SpectralSequencePages::converges() const {
    for (std::size_t n = 0; n < total_homology.size(); ++n)
        if (e_infinity.total(int(n)) != total_homology[n]) return false;
    return true;
}

SpectralSequencePages wordlength_ss(const DgLie& lie, int max_total_degree, std::size_t max_page) {
    if (!lie.is_positively_graded())
        throw ValidationError("the word-length spectral sequence needs a positively graded algebra");
    if (max_page < 2) throw ValidationError("at least two pages are required");
    if (max_total_degree < 0) throw ValidationError("total degree window must be non-negative");
    // Suspended degrees are >= 2, so word length is at most half the total degree.
    const std::size_t pmax = std::max<std::size_t>(1, std::size_t(max_total_degree + 1) / 2);
    const CEComplex c(lie, pmax, max_total_degree);
    const std::size_t plimit = pmax + 1;
    const int top = max_total_degree + 1;

    std::vector<TotalSlice> slices;
    std::vector<SparseMatrix> diffs;  // diffs[n]: degree n -> n - 1
    for (int n = 0; n <= top; ++n) {
        slices.push_back(total_slice(c, n, plimit));
        diffs.push_back(total_differential(c, n, plimit));
    }

    // Z^r_p(n) = {x in F_p C_n : Dx in F_{p-r}}.
    std::map<std::tuple<long, long, int>, std::vector<SparseVector>> zcache;
    auto cycles = [&](long r, long p, int n) -> const std::vector<SparseVector>& {
        const long rr = std::clamp<long>(r, 0, std::max<long>(p + 1, 0));
        const auto key = std::tuple(rr, p, n);
        auto it = zcache.find(key);
        if (it != zcache.end()) return it->second;
        std::vector<SparseVector> basis;
        const std::size_t cend = slices[std::size_t(n)].filtration_end(p);
        if (rr == 0 || n == 0) {
            for (std::size_t i = 0; i < cend; ++i) basis.push_back(unit(i));
        } else {
            const std::size_t row_begin = slices[std::size_t(n - 1)].filtration_end(p - rr);
            basis = rank_kernel(submatrix(diffs[std::size_t(n)], row_begin, cend)).kernel_basis;
        }
        return zcache.emplace(key, std::move(basis)).first->second;
    };
    auto page = [&](long r) {
        BigradedDims out{pmax, max_total_degree, {}};
        for (int n = 0; n <= max_total_degree; ++n)
            for (long p = 0; p <= long(plimit); ++p) {
                const std::size_t z = cycles(r, p, n).size();
                if (z == 0) continue;
                SubspaceBasis span;
                for (const auto& v : cycles(r - 1, p - 1, n)) span.add(v);
                for (const auto& v : cycles(r - 1, p + r - 1, n + 1))
                    span.add(diffs[std::size_t(n + 1)].apply(v));
                const std::size_t dim = z - span.dim();
                if (dim > 0) out.dims[{int(p), n - int(p)}] = dim;
            }
        return out;
    };

    SpectralSequencePages out;
    for (std::size_t r = 1; r <= max_page; ++r) out.pages.push_back(page(long(r)));
    out.e_infinity = page(long(plimit) + 2);
    const LieHomology h = homology(lie);
    out.e2_from_homology = ce_homology(CEComplex(h.lie, pmax, max_total_degree));
    out.total_homology = ce_total_homology(c);
    return out;
}

// ---------------------------------------------------------------- mapping cone

std::vector<SparseMatrix> derivations_of_degree(const DgLie& lie, int degree) {
    const std::size_t n = lie.size();
    // Unknown t_{ij}: coefficient of b_j in theta(b_i), for |b_j| = |b_i| + degree.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> var;
    std::vector<std::pair<std::size_t, std::size_t>> vars;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (lie.degree(j) == lie.degree(i) + degree) {
                var[{i, j}] = vars.size();
                vars.emplace_back(i, j);
            }
    if (vars.empty()) return {};
    auto lookup = [&](std::size_t i, std::size_t j) -> std::optional<std::size_t> {
        const auto it = var.find({i, j});
        if (it == var.end()) return std::nullopt;
        return it->second;
    };
    // theta[a,b] - [theta a, b] - (-1)^{degree |a|} [a, theta b] = 0, componentwise.
    std::vector<SparseVector> rows;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            std::map<std::size_t, std::vector<SparseVector::Entry>> by_component;
            for (const auto& [m, c] : lie.bracket(a, b).entries())
                for (std::size_t out = 0; out < n; ++out)
                    if (auto v = lookup(m, out)) by_component[out].emplace_back(*v, c);
            for (std::size_t j = 0; j < n; ++j) {
                if (auto v = lookup(a, j))
                    for (const auto& [out, c] : lie.bracket(j, b).entries())
                        by_component[out].emplace_back(*v, -c);
                if (auto v = lookup(b, j)) {
                    const Rational sign = -koszul(long(degree) * lie.degree(a));
                    for (const auto& [out, c] : lie.bracket(a, j).entries())
                        by_component[out].emplace_back(*v, sign * c);
                }
            }
            for (auto& [out, e] : by_component) {
                SparseVector row(std::move(e));
                if (!row.empty()) rows.push_back(std::move(row));
            }
        }
    const auto kernel = rank_kernel(SparseMatrix::from_rows(vars.size(), rows)).kernel_basis;
    std::vector<SparseMatrix> out;
    for (const auto& k : kernel) {
        std::vector<SparseMatrix::Triplet> trip;
        for (const auto& [v, c] : k.entries()) trip.push_back({vars[v].second, vars[v].first, c});
        out.emplace_back(n, n, std::move(trip));
    }
    return out;
}

MappingCone cone_der_ad(const DgLie& lie) {
    const std::size_t n = lie.size();
    MappingCone cone;
    cone.suspension_size = n;
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("s" + lie.name(i));
        degrees.push_back(lie.degree(i) + 1);
    }
    struct DerLevel {
        SubspaceBasis span;
        std::vector<std::size_t> global;
    };
    std::map<int, DerLevel> levels;
    if (n > 0) {
        const int lo = *std::min_element(lie.degrees().begin(), lie.degrees().end());
        const int hi = *std::max_element(lie.degrees().begin(), lie.degrees().end());
        for (int k = lo - hi; k <= hi - lo; ++k) {
            auto ders = derivations_of_degree(lie, k);
            for (std::size_t t = 0; t < ders.size(); ++t) {
                DerLevel& level = levels[k];
                level.span.add(flatten(ders[t]));
                level.global.push_back(n + cone.derivations.size());
                names.push_back("D" + std::to_string(k) + "_" + std::to_string(t + 1));
                degrees.push_back(k);
                cone.derivations.push_back(std::move(ders[t]));
            }
        }
    }
    auto der_coords = [&](const SparseMatrix& m, int k) {
        const SparseVector flat = flatten(m);
        if (flat.empty()) return SparseVector();
        const auto it = levels.find(k);
        if (it == levels.end()) throw std::logic_error("derivation outside the computed degrees");
        return from_coords(it->second.span.coordinates(flat), 0, it->second.global);
    };

    std::vector<SparseVector> dcols;
    for (std::size_t i = 0; i < n; ++i) dcols.push_back(lie.differential(i));
    const SparseMatrix dmat = SparseMatrix::from_columns(n, dcols);

    cone.lie = DgLie(std::move(names), std::move(degrees));
    DgLie& out = cone.lie;
    const std::size_t nd = cone.derivations.size();
    for (std::size_t a = 0; a < nd; ++a) {
        const SparseMatrix& ta = cone.derivations[a];
        const int ka = out.degree(n + a);
        for (std::size_t b = a; b < nd; ++b) {
            const SparseMatrix& tb = cone.derivations[b];
            const int kb = out.degree(n + b);
            const SparseMatrix comm = ta * tb - Rational(koszul(long(ka) * kb)) * (tb * ta);
            if (!comm.is_zero()) out.set_bracket(n + a, n + b, der_coords(comm, ka + kb));
        }
        // [theta, s x] = (-1)^{|theta|} s theta(x)
        const auto cols = ta.columns();
        for (std::size_t i = 0; i < n; ++i)
            if (!cols[i].empty()) out.set_bracket(n + a, i, Rational(koszul(ka)) * cols[i]);
        // D(theta) = d theta - (-1)^{|theta|} theta d
        out.set_differential(n + a, der_coords(dmat * ta - Rational(koszul(ka)) * (ta * dmat), ka - 1));
    }
    // D(s x) = ad_x - s dx
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<SparseVector> ad;
        for (std::size_t j = 0; j < n; ++j) ad.push_back(lie.bracket(i, j));
        SparseVector value = der_coords(SparseMatrix::from_columns(n, ad), lie.degree(i));
        value -= lie.differential(i);
        out.set_differential(i, std::move(value));
    }
    return cone;
}

DgLie truncate_positive(const DgLie& lie) {
    const std::size_t n = lie.size();
    std::vector<SparseVector> basis;
    std::vector<int> degrees;
    std::vector<std::string> names;
    const auto ones = lie.basis_of_degree(1);
    std::vector<SparseVector> dimages;
    for (std::size_t i : ones) dimages.push_back(lie.differential(i));
    SubspaceBasis cycles;
    std::vector<std::size_t> cycle_index;
    for (const auto& z : column_rank_kernel(dimages).kernel_basis) {
        const SparseVector v = remap(z, ones);
        cycles.add(v);
        cycle_index.push_back(basis.size());
        const auto& e = v.entries();
        names.push_back(e.size() == 1 && e.front().second == 1 ? lie.name(e.front().first)
                                                               : "z" + std::to_string(basis.size() + 1));
        basis.push_back(v);
        degrees.push_back(1);
    }
    std::vector<std::size_t> new_index(n, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i)
        if (lie.degree(i) >= 2) {
            new_index[i] = basis.size();
            basis.push_back(unit(i));
            degrees.push_back(lie.degree(i));
            names.push_back(lie.name(i));
        }
    auto to_new = [&](const SparseVector& v) {
        if (v.empty()) return SparseVector();
        const int deg = lie.degree_of(v);
        if (deg >= 2) return remap(v, new_index);
        if (deg == 1) return from_coords(cycles.coordinates(v), 0, cycle_index);
        throw std::logic_error("positive truncation is not closed");
    };
    DgLie out(std::move(names), degrees);
    for (std::size_t a = 0; a < basis.size(); ++a) {
        for (std::size_t b = a; b < basis.size(); ++b) {
            const SparseVector br = lie.bracket(basis[a], basis[b]);
            if (!br.empty()) out.set_bracket(a, b, to_new(br));
        }
        if (degrees[a] >= 2) out.set_differential(a, to_new(lie.differential(basis[a])));
    }
    out.set_truncation_degree(lie.truncation_degree());
    return out;
}

DgLie omega_derivation_lie(const OmegaDerivationAlgebra& g, std::size_t max_word_length) {
    struct Entry {
        std::size_t k, index;
    };
    std::vector<Entry> entries;
    std::map<std::size_t, std::size_t> first_of;
    std::vector<std::string> names;
    std::vector<int> degrees;
    for (std::size_t k = 3; k <= max_word_length; ++k) {
        first_of[k] = entries.size();
        for (std::size_t i = 0; i < g.dim(k); ++i) {
            entries.push_back({k, i});
            names.push_back("g" + std::to_string(k) + "_" + std::to_string(i + 1));
            degrees.push_back(g.degree(k));
        }
    }
    DgLie lie(std::move(names), std::move(degrees));
    for (std::size_t a = 0; a < entries.size(); ++a)
        for (std::size_t b = a; b < entries.size(); ++b) {
            const std::size_t k = entries[a].k + entries[b].k - 2;
            if (k > max_word_length) continue;
            const Derivation br = der_bracket(g.basis(entries[a].k)[entries[a].index],
                                              g.basis(entries[b].k)[entries[b].index]);
            if (br.is_zero()) continue;
            const auto coords = g.coordinates(br, k);
            std::vector<SparseVector::Entry> e;
            for (std::size_t t = 0; t < coords.size(); ++t)
                if (coords[t] != 0) e.emplace_back(first_of.at(k) + t, coords[t]);
            lie.set_bracket(a, b, SparseVector(std::move(e)));
        }
    if (max_word_length >= 3)
        lie.set_truncation_degree(g.degree(max_word_length));
    return lie;
}

}  // namespace hcm
