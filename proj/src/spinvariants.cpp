#include "hcm/spinvariants.hpp"

#include "hcm/dercomplex.hpp"
#include "hcm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace hcm {

namespace {

std::vector<std::size_t> cycle_permutation(const Partition& cycle_type) {
    std::vector<std::size_t> perm;
    std::size_t start = 0;
    for (int length : cycle_type) {
        const auto len = static_cast<std::size_t>(length);
        for (std::size_t i = 0; i < len; ++i) perm.push_back(start + (i + 1) % len);
        start += len;
    }
    return perm;
}

// Sorts a tuple for the exterior or symmetric power; returns 0 when an exterior
// tuple repeats an index, else the sign of the sort.
int normalize(std::vector<std::size_t>& tuple, TensorKind kind) {
    if (kind == TensorKind::Tensor) return 1;
    int sign = 1;
    for (std::size_t a = 1; a < tuple.size(); ++a) {
        for (std::size_t b = a; b > 0 && tuple[b - 1] > tuple[b]; --b) {
            std::swap(tuple[b - 1], tuple[b]);
            sign = -sign;
        }
    }
    if (kind == TensorKind::Symmetric) return 1;
    for (std::size_t a = 1; a < tuple.size(); ++a) {
        if (tuple[a] == tuple[a - 1]) return 0;
    }
    return sign;
}

int form_sign(int d) { return d % 2 == 0 ? 1 : -1; }

// The matrix with the given columns applied to every entry of a tuple at once.
std::vector<std::pair<std::vector<std::size_t>, Rational>> apply_to_every_slot(
    const std::vector<SparseVector>& columns, const std::vector<std::size_t>& tuple) {
    std::vector<std::pair<std::vector<std::size_t>, Rational>> terms{{{}, Rational(1)}};
    for (std::size_t a : tuple) {
        std::vector<std::pair<std::vector<std::size_t>, Rational>> next;
        for (const auto& [prefix, c] : terms) {
            for (const auto& [b, value] : columns[a].entries()) {
                auto extended = prefix;
                extended.push_back(b);
                next.emplace_back(std::move(extended), c * value);
            }
        }
        terms = std::move(next);
    }
    return terms;
}

void enumerate_tuples(std::size_t rank, std::size_t slots, TensorKind kind,
                      std::vector<std::size_t>& prefix, std::vector<std::vector<std::size_t>>& out) {
    if (prefix.size() == slots) {
        out.push_back(prefix);
        return;
    }
    std::size_t start = 0;
    if (!prefix.empty() && kind == TensorKind::Exterior) start = prefix.back() + 1;
    if (!prefix.empty() && kind == TensorKind::Symmetric) start = prefix.back();
    for (std::size_t a = start; a < rank; ++a) {
        prefix.push_back(a);
        enumerate_tuples(rank, slots, kind, prefix, out);
        prefix.pop_back();
    }
}

void extend_matchings(std::vector<bool>& used, MatchingDiagram& current,
                      std::vector<MatchingDiagram>& out) {
    const auto first = std::find(used.begin(), used.end(), false);
    if (first == used.end()) {
        out.push_back(current);
        return;
    }
    const auto i = static_cast<std::size_t>(first - used.begin());
    used[i] = true;
    for (std::size_t j = i + 1; j < used.size(); ++j) {
        if (used[j]) continue;
        used[j] = true;
        current.pairs.emplace_back(i, j);
        extend_matchings(used, current, out);
        current.pairs.pop_back();
        used[j] = false;
    }
    used[i] = false;
}

}  // namespace

// ---------------------------------------------------------------- Lie algebra

LieAlgebraAction LieAlgebraAction::preserving(const QuadraticModule& q) {
    const std::size_t n = q.rank();
    const SparseMatrix& gram = q.gram();
    // Unknown X(i, j) at column i * n + j; equation (X^T G + G X)(a, b) = 0 at row a * n + b.
    std::vector<SparseMatrix::Triplet> triplets;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t i = 0; i < n; ++i) {
                const Rational left = gram.at(i, b);  // X(i, a) G(i, b)
                if (left != 0) triplets.push_back({a * n + b, i * n + a, left});
                const Rational right = gram.at(a, i);  // G(a, i) X(i, b)
                if (right != 0) triplets.push_back({a * n + b, i * n + b, right});
            }
        }
    }
    const auto kernel = rank_kernel(SparseMatrix(n * n, n * n, std::move(triplets))).kernel_basis;
    LieAlgebraAction out;
    out.rank = n;
    std::vector<SparseMatrix> off_diagonal;
    for (const auto& v : kernel) {
        std::vector<SparseMatrix::Triplet> entries;
        bool diagonal = true;
        const SparseVector scaled = v.primitive();
        for (const auto& [index, value] : scaled.entries()) {
            entries.push_back({index / n, index % n, value});
            diagonal = diagonal && index / n == index % n;
        }
        (diagonal ? out.generators : off_diagonal).emplace_back(n, n, std::move(entries));
    }
    for (auto& m : off_diagonal) out.generators.push_back(std::move(m));

    if (gram == gram.transpose()) {
        // Reflection in a vector v of nonzero norm: x -> x - 2 <x, v> / <v, v> v.
        std::vector<SparseVector::Entry> v_entries;
        for (std::size_t i = 0; i < n && v_entries.empty(); ++i) {
            if (gram.at(i, i) != 0) v_entries.emplace_back(i, Rational(1));
        }
        for (std::size_t i = 0; i < n && v_entries.empty(); ++i) {
            for (std::size_t j = i + 1; j < n && v_entries.empty(); ++j) {
                if (gram.at(i, j) != 0) v_entries = {{i, Rational(1)}, {j, Rational(-1)}};
            }
        }
        const SparseVector v(std::move(v_entries));
        const Rational norm = q.pairing(v, v);
        std::vector<SparseVector> columns;
        for (std::size_t k = 0; k < n; ++k) {
            const SparseVector e({{k, Rational(1)}});
            columns.push_back(e - (Rational(2) * q.pairing(e, v) / norm) * v);
        }
        out.reflection = SparseMatrix::from_columns(n, columns);
    }    return out;
}

bool LieAlgebraAction::is_diagonal(std::size_t i) const {
    const auto entries = generators.at(i).triplets();
    return std::all_of(entries.begin(), entries.end(), [](const auto& t) { return t.row == t.col; });
}

// ---------------------------------------------------------------- tensor spaces

std::vector<std::vector<std::size_t>> TensorSpace::basis() const {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> prefix;
    enumerate_tuples(rank, slots, kind, prefix, out);
    return out;
}

std::size_t TensorSpace::encode(const std::vector<std::size_t>& tuple) const {
    std::size_t code = 0;
    for (std::size_t a : tuple) code = code * rank + a;
    return code;
}

std::vector<SparseVector> InvariantSpace::encoded(const TensorSpace& space) const {
    std::vector<SparseVector> out;
    for (const auto& v : basis) {
        std::vector<SparseVector::Entry> entries;
        for (const auto& [i, c] : v.entries()) entries.emplace_back(space.encode(tuples[i]), c);
        out.emplace_back(std::move(entries));
    }
    return out;
}

InvariantSpace invariants_kernel(const TensorSpace& space, const LieAlgebraAction& action) {
    if (space.rank != action.rank) throw ValidationError("invariants_kernel: rank mismatch");
    std::size_t block = 1;
    for (std::size_t i = 0; i < space.slots; ++i) block *= space.rank;

    std::vector<std::vector<SparseVector>> columns_of(action.generators.size());
    std::vector<std::size_t> moving;
    std::vector<std::size_t> diagonal;
    for (std::size_t g = 0; g < action.generators.size(); ++g) {
        columns_of[g] = action.generators[g].columns();
        (action.is_diagonal(g) ? diagonal : moving).push_back(g);
    }

    InvariantSpace out;
    for (auto& tuple : space.basis()) {
        const bool weight_zero = std::all_of(diagonal.begin(), diagonal.end(), [&](std::size_t g) {
            Rational weight = 0;
            for (std::size_t a : tuple) weight += action.generators[g].at(a, a);
            return weight == 0;
        });
        if (weight_zero) out.tuples.push_back(std::move(tuple));
    }

    std::optional<std::vector<SparseVector>> reflected;
    if (action.reflection) reflected = action.reflection->columns();
    std::vector<SparseVector> columns;
    columns.reserve(out.tuples.size());
    for (const auto& tuple : out.tuples) {
        std::vector<SparseVector::Entry> entries;
        for (std::size_t g : moving) {
            for (std::size_t slot = 0; slot < tuple.size(); ++slot) {
                for (const auto& [b, c] : columns_of[g][tuple[slot]].entries()) {
                    auto image = tuple;
                    image[slot] = b;
                    const int sign = normalize(image, space.kind);
                    if (sign != 0) entries.emplace_back(g * block + space.encode(image), sign * c);
                }
            }
        }
        if (reflected) {
            const std::size_t offset = action.generators.size() * block;
            for (auto& [image, c] : apply_to_every_slot(*reflected, tuple)) {
                const int sign = normalize(image, space.kind);
                if (sign != 0) entries.emplace_back(offset + space.encode(image), sign * c);
            }
            entries.emplace_back(offset + space.encode(tuple), Rational(-1));
        }
        columns.emplace_back(std::move(entries));
    }
    out.basis = column_rank_kernel(columns).kernel_basis;
    return out;
}

// ---------------------------------------------------------------- matchings

std::size_t MatchingDiagram::partner(std::size_t slot) const {
    for (const auto& [i, j] : pairs) {
        if (i == slot) return j;
        if (j == slot) return i;
    }
    throw ValidationError("matching has no slot " + std::to_string(slot));
}

MatchingDiagram MatchingDiagram::permuted(const std::vector<std::size_t>& perm,
                                          int form_sign) const {
    if (perm.size() != slots()) throw ValidationError("permutation size does not match the slots");
    MatchingDiagram out;
    out.sign = sign;
    for (auto [i, j] : pairs) {
        std::size_t a = perm[i];
        std::size_t b = perm[j];
        if (a > b) {
            std::swap(a, b);
            out.sign *= form_sign;
        }
        out.pairs.emplace_back(a, b);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    if (!decoration.empty()) {
        out.decoration.resize(decoration.size());
        for (std::size_t i = 0; i < decoration.size(); ++i) out.decoration[perm[i]] = decoration[i];
    }
    return out;
}

std::vector<MatchingDiagram> matchings_span(std::size_t slots, std::vector<std::size_t> decoration) {
    if (slots % 2 != 0) throw ValidationError("matchings need an even number of slots");
    if (!decoration.empty() && decoration.size() != slots) {
        throw ValidationError("decoration must label every slot");
    }
    std::vector<MatchingDiagram> out;
    std::vector<bool> used(slots, false);
    MatchingDiagram current;
    extend_matchings(used, current, out);
    for (auto& m : out) m.decoration = decoration;
    return out;
}

SparseVector evaluate(const MatchingDiagram& m, const QuadraticModule& q) {
    const auto pairing = q.gram_inverse().triplets();
    std::vector<std::pair<std::vector<std::size_t>, Rational>> terms{
        {std::vector<std::size_t>(m.slots(), 0), Rational(m.sign)}};
    for (const auto& [i, j] : m.pairs) {
        std::vector<std::pair<std::vector<std::size_t>, Rational>> next;
        for (const auto& [tuple, c] : terms) {
            for (const auto& t : pairing) {
                auto extended = tuple;
                extended[i] = t.row;
                extended[j] = t.col;
                next.emplace_back(std::move(extended), c * t.value);
            }
        }
        terms = std::move(next);
    }
    const TensorSpace space{q.rank(), m.slots(), TensorKind::Tensor};
    std::vector<SparseVector::Entry> entries;
    for (const auto& [tuple, c] : terms) entries.emplace_back(space.encode(tuple), c);
    return SparseVector(std::move(entries));
}

Integer gram_entry(const MatchingDiagram& a, const MatchingDiagram& b, std::size_t g, int d) {
    if (a.slots() != b.slots()) throw ValidationError("gram_entry: slot counts differ");
    const int epsilon = form_sign(d);
    const Integer n = static_cast<unsigned long>(2 * g);
    Integer value = a.sign * b.sign;
    std::vector<bool> visited(a.slots(), false);
    for (std::size_t start = 0; start < a.slots(); ++start) {
        if (visited[start]) continue;
        // Walk alternately along a and b; each traversal against the stored order of
        // a pair, and each slot entered along b, contributes epsilon.
        int flips = 0;
        std::size_t current = start;
        do {
            const std::size_t across = a.partner(current);
            const std::size_t back = b.partner(across);
            visited[current] = visited[across] = true;
            if (current > across) ++flips;
            if (across > back) ++flips;
            ++flips;
            current = back;
        } while (current != start);
        value *= n;
        if (flips % 2 != 0 && epsilon < 0) value = -value;
    }
    return value;
}

SparseMatrix gram_matrix(const std::vector<MatchingDiagram>& diagrams, std::size_t g, int d) {
    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
        for (std::size_t j = 0; j < diagrams.size(); ++j) {
            const Integer value = gram_entry(diagrams[i], diagrams[j], g, d);
            if (value != 0) entries.push_back({i, j, Rational(value)});
        }
    }
    return SparseMatrix(diagrams.size(), diagrams.size(), std::move(entries));
}

std::size_t gram_rank(const std::vector<MatchingDiagram>& diagrams, std::size_t g, int d) {
    return rank(gram_matrix(diagrams, g, d));
}

SymRep matching_character(int slots, int d) {
    if (slots < 0) throw ValidationError("matching_character: negative slot count");
    SymRep out{slots, {}};
    if (slots % 2 != 0) {
        for (const auto& p : partitions(slots)) out.character[p] = 0;
        return out;
    }
    const auto diagrams = matchings_span(static_cast<std::size_t>(slots));
    for (const auto& p : partitions(slots)) {
        const auto perm = cycle_permutation(p);
        long trace = 0;
        for (const auto& m : diagrams) {
            const auto image = m.permuted(perm, form_sign(d));
            if (image.pairs == m.pairs) trace += image.sign * m.sign;
        }
        out.character[p] = trace;
    }
    return out;
}

// ---------------------------------------------------------------- invariant CE complex

std::size_t stable_genus(int d, int max_degree) {
    if (d < 3) throw ValidationError("stable_genus: d must be at least 3");
    const int top = max_degree + 1;
    const auto chains = ce_schur(std::max(0, 3 * top / d), d);
    int widest = 0;
    for (const auto& [key, rep] : chains.components) {
        if (key.first % 2 == 0 && key.second <= top && !rep.is_zero()) {
            widest = std::max(widest, key.first);
        }
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(widest / 2));
}

InvariantCEComplex::InvariantCEComplex(int d, std::size_t g, int max_degree)
    : d_(d), g_(g), max_degree_(max_degree) {
    if (max_degree < 0) throw ValidationError("invariant CE complex: negative degree");
    const std::size_t needed = stable_genus(d, max_degree);
    if (g < needed) {
        throw UnstableRangeError("genus " + std::to_string(g) + " is below the stable bound " +
                                 std::to_string(needed) + " for degrees through " +
                                 std::to_string(max_degree));
    }
    const QuadraticModule q = hyperbolic(g, d);
    action_ = LieAlgebraAction::preserving(q);
    const OmegaDerivationAlgebra algebra(q);
    const int top = max_degree + 1;
    // Word lengths up to k_max give an exact truncation through degree top.
    const int k_max = (top + d - 2) / (d - 1) + 2;
    DgLie lie = omega_derivation_lie(algebra, static_cast<std::size_t>(k_max));
    const auto max_factors = static_cast<std::size_t>(std::max(1, top / d));

    std::map<std::size_t, std::size_t> first_of;
    for (std::size_t b = 0; b < lie.size(); ++b) {
        const int k = lie.degree(b) / (d - 1) + 2;
        element_length_.push_back(k);
        first_of.try_emplace(static_cast<std::size_t>(k), b);
    }

    // Generator action on the Lie basis, X.theta = [D_X, theta], for elements that can
    // occur in chains of degree <= top.
    const auto& free = q.lie_algebra();
    for (const auto& x : action_.generators) {
        std::vector<LieElement> values;
        for (std::size_t i = 0; i < q.rank(); ++i) {
            LieElement value(free);
            for (std::size_t j = 0; j < q.rank(); ++j) {
                const Rational c = x.at(j, i);
                if (c != 0) value += c * LieElement::generator(free, j);
            }
            values.push_back(std::move(value));
        }
        const Derivation dx(free, 0, std::move(values));
        std::vector<SparseMatrix::Triplet> entries;
        for (std::size_t b = 0; b < lie.size(); ++b) {
            if (lie.degree(b) + 1 > top) continue;
            const auto k = static_cast<std::size_t>(element_length_[b]);
            const Derivation& theta = algebra.basis(k)[b - first_of.at(k)];
            const Derivation moved = der_bracket(dx, theta);
            if (moved.is_zero()) continue;
            const auto coords = algebra.coordinates(moved, k);
            for (std::size_t t = 0; t < coords.size(); ++t) {
                if (coords[t] != 0) entries.push_back({first_of.at(k) + t, b, coords[t]});
            }
        }
        element_action_.emplace_back(lie.size(), lie.size(), std::move(entries));
    }

    if (action_.reflection) {
        std::vector<SparseMatrix::Triplet> entries;
        for (std::size_t b = 0; b < lie.size(); ++b) {
            if (lie.degree(b) + 1 > top) continue;
            const auto k = static_cast<std::size_t>(element_length_[b]);
            const Derivation moved = act(*action_.reflection, q, algebra.basis(k)[b - first_of.at(k)]);
            const auto coords = algebra.coordinates(moved, k);
            for (std::size_t t = 0; t < coords.size(); ++t) {
                if (coords[t] != 0) entries.push_back({first_of.at(k) + t, b, coords[t]});
            }
        }
        element_reflection_ = SparseMatrix(lie.size(), lie.size(), std::move(entries));
    }

    chains_ = std::make_unique<CEComplex>(std::move(lie), max_factors, top);
    for (int n = 0; n <= top; ++n) {
        auto& words = basis_[n];
        for (std::size_t p = 0; p <= max_factors; ++p) {
            const auto& slice = chains_->words(p, n);
            words.insert(words.end(), slice.begin(), slice.end());
        }
    }

    for (int n = 0; n <= top; ++n) {
        const auto& words = basis_.at(n);
        std::vector<SparseMatrix> moves;
        for (std::size_t i = 0; i < action_.generators.size(); ++i) moves.push_back(action_matrix(i, n));
        if (const auto r = reflection_matrix(n)) {
            const auto identity = SparseMatrix::identity(words.size()).triplets();
            auto entries = r->triplets();
            for (auto t : identity) {
                t.value = -1;
                entries.push_back(std::move(t));
            }
            moves.emplace_back(words.size(), words.size(), std::move(entries));
        }
        std::vector<std::vector<SparseVector>> columns_of;
        for (const auto& m : moves) columns_of.push_back(m.columns());
        // Arity and word length are preserved by the action. -1 lies in the group and
        // acts on an arity-K word by (-1)^K, so odd arities carry no invariants.
        std::map<std::pair<int, std::size_t>, std::vector<std::size_t>> blocks;
        for (std::size_t w = 0; w < words.size(); ++w) {
            blocks[{arity(words[w]), words[w].word_length()}].push_back(w);
        }
        auto& result = invariants_[n];
        auto& lengths = invariant_lengths_[n];
        for (const auto& [key, members] : blocks) {
            if (key.first % 2 != 0) continue;
            std::vector<SparseVector> columns;
            for (std::size_t w : members) {
                std::vector<SparseVector::Entry> entries;
                for (std::size_t i = 0; i < moves.size(); ++i) {
                    for (const auto& [row, c] : columns_of[i][w].entries()) {
                        entries.emplace_back(i * words.size() + row, c);
                    }
                }
                columns.emplace_back(std::move(entries));
            }
            for (const auto& v : column_rank_kernel(columns).kernel_basis) {
                std::vector<SparseVector::Entry> lifted;
                for (const auto& [local, c] : v.entries()) lifted.emplace_back(members[local], c);
                result.emplace_back(std::move(lifted));
                lengths.push_back(key.second);
            }
        }
    }
}

const std::vector<CEWord>& InvariantCEComplex::basis(int n) const {
    const auto it = basis_.find(n);
    if (it == basis_.end()) throw ValidationError("degree outside the invariant complex window");
    return it->second;
}

int InvariantCEComplex::arity(const CEWord& w) const {
    int total = 0;
    for (std::size_t f : w.factors) total += element_length_.at(f);
    return total;
}

SparseMatrix InvariantCEComplex::action_matrix(std::size_t i, int n) const {
    const auto& words = basis(n);
    std::map<CEWord, std::size_t> position;
    for (std::size_t w = 0; w < words.size(); ++w) position.emplace(words[w], w);
    const auto moved_columns = element_action_.at(i).columns();
    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t w = 0; w < words.size(); ++w) {
        const auto& factors = words[w].factors;
        for (std::size_t slot = 0; slot < factors.size(); ++slot) {
            for (const auto& [b, c] : moved_columns[factors[slot]].entries()) {
                auto image = factors;
                image[slot] = b;
                const auto nf = ce_normal_form(chains_->lie(), std::move(image));
                if (!nf) continue;
                entries.push_back({position.at(nf->second), w, nf->first * c});
            }
        }
    }
    return SparseMatrix(words.size(), words.size(), std::move(entries));
}

std::optional<SparseMatrix> InvariantCEComplex::reflection_matrix(int n) const {
    if (!element_reflection_) return std::nullopt;
    const auto& words = basis(n);
    std::map<CEWord, std::size_t> position;
    for (std::size_t w = 0; w < words.size(); ++w) position.emplace(words[w], w);
    const auto moved_columns = element_reflection_->columns();
    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t w = 0; w < words.size(); ++w) {
        for (auto& [image, c] : apply_to_every_slot(moved_columns, words[w].factors)) {
            const auto nf = ce_normal_form(chains_->lie(), std::move(image));
            if (nf) entries.push_back({position.at(nf->second), w, nf->first * c});
        }
    }
    return SparseMatrix(words.size(), words.size(), std::move(entries));
}

SparseMatrix InvariantCEComplex::differential(int n) const {
    const auto& source = basis(n);
    if (n == 0) return SparseMatrix(0, source.size());
    const auto& target = basis(n - 1);
    std::map<CEWord, std::size_t> position;
    for (std::size_t w = 0; w < target.size(); ++w) position.emplace(target[w], w);
    std::vector<SparseMatrix::Triplet> entries;
    for (std::size_t w = 0; w < source.size(); ++w) {
        for (const auto& [word, c] : chains_->differential(source[w])) {
            if (c != 0) entries.push_back({position.at(word), w, c});
        }
    }
    return SparseMatrix(target.size(), source.size(), std::move(entries));
}

const std::vector<SparseVector>& InvariantCEComplex::invariants(int n) const {
    const auto it = invariants_.find(n);
    if (it == invariants_.end()) throw ValidationError("degree outside the invariant complex window");
    return it->second;
}

SparseMatrix InvariantCEComplex::invariant_differential(int n) const {
    const auto& source = invariants(n);
    if (n == 0) return SparseMatrix(0, source.size());
    const auto& target = invariants(n - 1);
    SubspaceBasis span;
    for (const auto& v : target) span.add(v);
    const SparseMatrix full = differential(n);
    std::vector<SparseVector> columns;
    for (const auto& v : source) {
        const SparseVector image = full.apply(v);
        if (!span.contains(image)) {
            throw ValidationError("differential leaves the invariant subspace in degree " +
                                  std::to_string(n));
        }
        std::vector<SparseVector::Entry> entries;
        const auto coords = span.coordinates(image);
        for (std::size_t t = 0; t < coords.size(); ++t) {
            if (coords[t] != 0) entries.emplace_back(t, coords[t]);
        }
        columns.emplace_back(std::move(entries));
    }
    return SparseMatrix::from_columns(target.size(), columns);
}

BigradedDims InvariantCEComplex::bigraded_chain_dims() const {
    BigradedDims out;
    out.max_word_length = chains_->max_word_length();
    out.max_total_degree = max_degree_;
    for (int n = 0; n <= max_degree_; ++n) {
        for (std::size_t p : invariant_lengths_.at(n)) {
            ++out.dims[{static_cast<int>(p), n - static_cast<int>(p)}];
        }
    }
    return out;
}

std::vector<std::size_t> InvariantCEComplex::chain_dims() const {
    std::vector<std::size_t> out;
    for (int n = 0; n <= max_degree_; ++n) out.push_back(invariants(n).size());
    return out;
}

std::vector<std::size_t> InvariantCEComplex::homology_dims() const {
    std::vector<std::size_t> ranks;  // rank of the invariant differential out of degree n
    for (int n = 0; n <= max_degree_ + 1; ++n) ranks.push_back(rank(invariant_differential(n)));
    std::vector<std::size_t> out;
    for (int n = 0; n <= max_degree_; ++n) {
        const auto un = static_cast<std::size_t>(n);
        out.push_back(invariants(n).size() - ranks[un] - ranks[un + 1]);
    }
    return out;
}

InvariantCEDims invariant_ce_complex(int d, std::size_t g, int max_degree) {
    const InvariantCEComplex complex(d, g, max_degree);
    return {complex.chain_dims(), complex.homology_dims()};
}

std::vector<Integer> invariant_chain_dims_from_characters(int d, int max_degree) {
    if (max_degree < 0) throw ValidationError("negative degree");
    std::vector<Integer> out(static_cast<std::size_t>(max_degree) + 1, 0);
    const auto chains = ce_schur(3 * max_degree / d, d);
    std::map<int, SymRep> matching;
    for (const auto& [key, rep] : chains.components) {
        const auto [k, degree] = key;
        if (degree > max_degree) continue;
        auto it = matching.find(k);
        if (it == matching.end()) it = matching.emplace(k, matching_character(k, d)).first;
        const Rational value = rep.inner_product(it->second);
        if (value.get_den() != 1 || value < 0) {
            throw ValidationError("matching pairing is not a multiplicity");
        }
        out[static_cast<std::size_t>(degree)] += value.get_num();
    }
    return out;
}

// ---------------------------------------------------------------- stable ring

int kontsevich_degree(int n, int k, int d) {
    if (n < 1 || k < 0) throw ValidationError("kontsevich_degree: need n >= 1 and k >= 0");
    const int degree = 2 * n * d - k;
    if (degree <= 0) throw ValidationError("kontsevich_degree: degree must be positive");
    return degree;
}

void OutFnTable::validate() const {
    for (const auto& [key, dim] : dims) {
        const auto [n, k] = key;
        if (n < 1 || k < 0) throw ValidationError("Out(F_n) table: need n >= 1 and k >= 0");
        if (k == 0 && dim < 1) throw ValidationError("Out(F_n) table: H_0 must be nonzero");
    }
}

OutFnTable OutFnTable::from_json(const std::string& text) {
    OutFnTable table;
    try {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& entry : doc.at("entries")) {
            const int n = entry.at("n").get<int>();
            const int k = entry.at("k").get<int>();
            const long dim = entry.at("dim").get<long>();
            if (dim < 0) throw ValidationError("Out(F_n) table: negative dimension");
            if (!table.dims.emplace(std::pair{n, k}, static_cast<std::size_t>(dim)).second) {
                throw ValidationError("Out(F_n) table: duplicate entry");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("Out(F_n) table: ") + e.what());
    }
    table.validate();
    return table;
}

std::string OutFnTable::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [key, dim] : dims) {
        entries.push_back({{"n", key.first}, {"k", key.second}, {"dim", dim}});
    }
    return nlohmann::json{{"entries", entries}}.dump();
}

std::string StableRing::to_json() const {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : generators) {
        nlohmann::json entry{{"label", g.label},
                             {"degree", g.degree},
                             {"source", g.source == GeneratorSource::Borel ? "borel" : "lambda"}};
        if (g.source == GeneratorSource::Lambda) {
            entry["n"] = g.n;
            entry["k"] = g.k;
        }
        gens.push_back(std::move(entry));
    }
    return nlohmann::json{{"d", d},
                          {"max_degree", max_degree},
                          {"lambda_known", lambda_known},
                          {"generators", gens}}
        .dump();
}

StableRing stable_ring(int d, const OutFnTable& table, int max_degree) {
    if (d < 3) throw ValidationError("stable_ring: d must be at least 3");
    table.validate();
    StableRing ring;
    ring.d = d;
    ring.max_degree = max_degree;
    ring.lambda_known = d % 2 != 0;
    for (int i = 1;; ++i) {
        const int degree = d % 2 != 0 ? 4 * i - 2 : 4 * i;
        if (degree > max_degree) break;
        ring.generators.push_back({"x" + std::to_string(i), degree, GeneratorSource::Borel, 0, 0});
    }
    if (ring.lambda_known) {
        for (const auto& [key, dim] : table.dims) {
            const auto [n, k] = key;
            const int degree = kontsevich_degree(n, k, d);
            if (degree > max_degree) continue;
            for (std::size_t j = 1; j <= dim; ++j) {
                ring.generators.push_back({"lambda_" + std::to_string(n) + "_" + std::to_string(k) +
                                               "_" + std::to_string(j),
                                           degree, GeneratorSource::Lambda, n, k});
            }
        }
    }
    std::stable_sort(ring.generators.begin(), ring.generators.end(),
                     [](const RingGenerator& a, const RingGenerator& b) {
                         return std::pair(a.degree, a.source) < std::pair(b.degree, b.source);
                     });
    return ring;
}

std::vector<Integer> poincare_series(const StableRing& ring, int max_degree) {
    if (max_degree < 0) throw ValidationError("poincare_series: negative degree");
    const auto top = static_cast<std::size_t>(max_degree);
    std::vector<Integer> series(top + 1, 0);
    series[0] = 1;
    for (const auto& g : ring.generators) {
        if (g.degree <= 0) throw ValidationError("poincare_series: generator of nonpositive degree");
        const auto step = static_cast<std::size_t>(g.degree);
        if (g.degree % 2 == 0) {
            for (std::size_t t = step; t <= top; ++t) series[t] += series[t - step];
        } else {
            for (std::size_t t = top + 1; t-- > step;) series[t] += series[t - step];
        }
    }
    return series;
}

}  // namespace hcm
