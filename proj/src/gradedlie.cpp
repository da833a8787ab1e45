#include "hcm/gradedlie.hpp"

#include "hcm/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hcm {

// ---------------------------------------------------------------- GeneratorSet

GeneratorSet::GeneratorSet(std::vector<std::string> names, int gen_degree)
    : GeneratorSet(names, std::vector<int>(names.size(), gen_degree)) {}

GeneratorSet::GeneratorSet(std::vector<std::string> names, std::vector<int> degrees)
    : names_(std::move(names)), degrees_(std::move(degrees)) {
    if (names_.empty()) throw ValidationError("generator set must be non-empty");
    if (names_.size() > kMaxGenerators) throw ValidationError("at most 16 generators supported");
    if (names_.size() != degrees_.size()) throw ValidationError("one degree per generator");
    std::set<std::string> seen;
    for (const auto& n : names_) {
        if (n.empty() || !std::isalpha(static_cast<unsigned char>(n[0])))
            throw ValidationError("generator names must start with a letter: '" + n + "'");
        for (char c : n)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
                throw ValidationError("invalid generator name '" + n + "'");
        if (!seen.insert(n).second) throw ValidationError("duplicate generator '" + n + "'");
    }
    for (int d : degrees_)
        if (d < 1) throw ValidationError("generator degrees must be >= 1");
}

bool GeneratorSet::uniform_degree() const {
    return std::all_of(degrees_.begin(), degrees_.end(),
                       [&](int d) { return d == degrees_.front(); });
}

int GeneratorSet::gen_degree() const {
    if (!uniform_degree()) throw ValidationError("generators have mixed degrees");
    return degrees_.front();
}

std::optional<std::size_t> GeneratorSet::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

// ---------------------------------------------------------------- Word

Word Word::concat(Word other) const {
    if (len + other.len > kMaxLength) throw ValidationError("word length exceeds 16");
    return Word{(code << (4 * other.len)) | other.code,
                static_cast<std::uint8_t>(len + other.len)};
}

Word Word::sub(std::size_t pos, std::size_t count) const {
    const std::size_t shift = 4 * (len - pos - count);
    const std::uint64_t mask = count == 16 ? ~0ULL : ((1ULL << (4 * count)) - 1);
    return Word{(code >> shift) & mask, static_cast<std::uint8_t>(count)};
}

// ---------------------------------------------------------------- Tensor

namespace {

std::vector<Tensor::Term> merge_scaled(const std::vector<Tensor::Term>& a, const Rational& s,
                                       const std::vector<Tensor::Term>& b) {
    std::vector<Tensor::Term> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, s * b[j].second);
            ++j;
        } else {
            Rational v = a[i].second + s * b[j].second;
            if (v != 0) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Tensor::Tensor(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.first < b.first; });
    for (auto& [w, c] : terms) {
        if (!terms_.empty() && terms_.back().first == w) {
            terms_.back().second += c;
            if (terms_.back().second == 0) terms_.pop_back();
        } else if (c != 0) {
            terms_.emplace_back(w, std::move(c));
        }
    }
}

Rational Tensor::coeff(Word w) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), w,
                               [](const Term& t, Word x) { return t.first < x; });
    if (it != terms_.end() && it->first == w) return it->second;
    return 0;
}

Tensor& Tensor::operator+=(const Tensor& o) {
    terms_ = merge_scaled(terms_, Rational(1), o.terms_);
    return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
    terms_ = merge_scaled(terms_, Rational(-1), o.terms_);
    return *this;
}

Tensor& Tensor::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
    } else {
        for (auto& t : terms_) t.second *= s;
    }
    return *this;
}

void Tensor::add_scaled(const Tensor& o, const Rational& s) {
    if (s == 0) return;
    terms_ = merge_scaled(terms_, s, o.terms_);
}

Tensor Tensor::times(const Tensor& o) const {
    std::vector<Term> out;
    out.reserve(terms_.size() * o.terms_.size());
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) out.emplace_back(a.concat(b), ca * cb);
    return Tensor(std::move(out));
}

// ---------------------------------------------------------------- FreeLieAlgebra

namespace {

bool is_lyndon(const std::vector<std::size_t>& w) {
    const std::size_t n = w.size();
    for (std::size_t i = 1; i < n; ++i) {
        // Compare w with its rotation starting at i; Lyndon iff strictly smaller.
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t a = w[k];
            const std::size_t b = w[(i + k) % n];
            if (a < b) break;
            if (a > b) return false;
            if (k + 1 == n) return false;  // periodic
        }
    }
    return true;
}

Word pack(const std::vector<std::size_t>& letters) {
    Word w;
    for (auto l : letters) w = w.concat(Word::letter(l));
    return w;
}

// All Lyndon words of exactly the given length over an alphabet of size n, in
// lexicographic order (Duval's generation).
std::vector<std::vector<std::size_t>> lyndon_words(std::size_t n, std::size_t length) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<long> w{-1};
    while (!w.empty()) {
        ++w.back();
        if (w.size() == length) {
            out.emplace_back(w.begin(), w.end());
        }
        const std::size_t m = w.size();
        while (w.size() < length) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == static_cast<long>(n) - 1) w.pop_back();
    }
    return out;
}

}  // namespace

FreeLieAlgebra::FreeLieAlgebra(GeneratorSet gens) : gens_(std::move(gens)) {}

LieAlgebraPtr FreeLieAlgebra::create(GeneratorSet gens) {
    return std::make_shared<const FreeLieAlgebra>(std::move(gens));
}

int FreeLieAlgebra::word_degree(Word w) const {
    int d = 0;
    for (std::size_t i = 0; i < w.len; ++i) d += gens_.degree(w.at(i));
    return d;
}

Tensor FreeLieAlgebra::commutator(const Tensor& x, const Tensor& y) const {
    std::vector<Tensor::Term> out;
    out.reserve(2 * x.terms().size() * y.terms().size());
    for (const auto& [a, ca] : x.terms()) {
        const int da = word_degree(a);
        for (const auto& [b, cb] : y.terms()) {
            const int db = word_degree(b);
            Rational c = ca * cb;
            out.emplace_back(a.concat(b), c);
            if ((da * db) % 2 == 0) c = -c;
            out.emplace_back(b.concat(a), std::move(c));
        }
    }
    return Tensor(std::move(out));
}

const FreeLieAlgebra::Level& FreeLieAlgebra::level(std::size_t length) const {
    if (length == 0 || length > Word::kMaxLength)
        throw ValidationError("word length must be between 1 and 16");
    std::lock_guard lock(mutex_);
    for (std::size_t k = 1; k <= length; ++k)
        if (!levels_.count(k)) build_level(k);
    return *levels_.at(length);
}

void FreeLieAlgebra::build_level(std::size_t length) const {
    auto lvl = std::make_unique<Level>();
    const std::size_t n = gens_.size();
    auto lookup = [&](const std::vector<std::size_t>& letters) -> const LieBasisElement& {
        const Level& l = *levels_.at(letters.size());
        return l.elements[l.by_leading.at(pack(letters).code)];
    };
    for (const auto& w : lyndon_words(n, length)) {
        LieBasisElement e;
        e.leading = pack(w);
        e.degree = word_degree(e.leading);
        if (length == 1) {
            e.expansion = Tensor::word(e.leading);
            e.text = gens_.name(w[0]);
        } else {
            // Standard factorization: the right factor is the longest proper Lyndon suffix.
            std::size_t split = 1;
            for (; split < length; ++split) {
                std::vector<std::size_t> suffix(w.begin() + static_cast<long>(split), w.end());
                if (is_lyndon(suffix)) break;
            }
            std::vector<std::size_t> left(w.begin(), w.begin() + static_cast<long>(split));
            std::vector<std::size_t> right(w.begin() + static_cast<long>(split), w.end());
            const auto& bl = lookup(left);
            const auto& br = lookup(right);
            e.expansion = commutator(bl.expansion, br.expansion);
            e.text = "[" + bl.text + "," + br.text + "]";
        }
        lvl->elements.push_back(std::move(e));
    }
    if (length % 2 == 0) {
        for (const auto& w : lyndon_words(n, length / 2)) {
            const auto& half = lookup(w);
            if (half.degree % 2 == 0) continue;
            LieBasisElement e;
            e.leading = half.leading.concat(half.leading);
            e.degree = 2 * half.degree;
            e.expansion = commutator(half.expansion, half.expansion);
            e.text = "[" + half.text + "," + half.text + "]";
            e.is_square = true;
            lvl->elements.push_back(std::move(e));
        }
    }
    std::sort(lvl->elements.begin(), lvl->elements.end(),
              [](const LieBasisElement& a, const LieBasisElement& b) { return a.leading < b.leading; });
    for (std::size_t i = 0; i < lvl->elements.size(); ++i) {
        auto& e = lvl->elements[i];
        if (e.expansion.empty() || !(e.expansion.terms().front().first == e.leading))
            throw std::logic_error("basis element does not start at its leading word");
        e.leading_coeff = e.expansion.terms().front().second;
        lvl->by_leading.emplace(e.leading.code, i);
    }
    levels_.emplace(length, std::move(lvl));
}

const std::vector<LieBasisElement>& FreeLieAlgebra::basis(std::size_t length) const {
    return level(length).elements;
}

std::optional<std::size_t> FreeLieAlgebra::basis_index(Word leading) const {
    const Level& l = level(leading.len);
    auto it = l.by_leading.find(leading.code);
    if (it == l.by_leading.end()) return std::nullopt;
    return it->second;
}

SparseVector FreeLieAlgebra::coordinates(const Tensor& t, std::size_t length) const {
    const Level& l = level(length);
    std::map<std::uint64_t, Rational> work;
    for (const auto& [w, c] : t.terms()) {
        if (w.len != length) throw ValidationError("tensor is not of the requested word length");
        work.emplace(w.code, c);
    }
    std::vector<SparseVector::Entry> coords;
    while (!work.empty()) {
        auto first = work.begin();
        auto hit = l.by_leading.find(first->first);
        if (hit == l.by_leading.end()) throw ValidationError("tensor is not a Lie element");
        const auto& e = l.elements[hit->second];
        const Rational c = first->second / e.leading_coeff;
        for (const auto& [w, ec] : e.expansion.terms()) {
            auto [it, inserted] = work.emplace(w.code, Rational(0));
            it->second -= c * ec;
            if (it->second == 0) work.erase(it);
        }
        coords.emplace_back(hit->second, c);
    }
    return SparseVector(std::move(coords));
}

// ---------------------------------------------------------------- LieElement

LieElement LieElement::generator(LieAlgebraPtr algebra, std::size_t i) {
    if (i >= algebra->rank()) throw ValidationError("generator index out of range");
    LieElement e(std::move(algebra));
    e.tensor_ = Tensor::word(Word::letter(i));
    return e;
}

LieElement LieElement::basis_element(LieAlgebraPtr algebra, std::size_t length, std::size_t index) {
    LieElement e(algebra);
    e.tensor_ = algebra->basis(length).at(index).expansion;
    return e;
}

LieElement LieElement::from_tensor(LieAlgebraPtr algebra, Tensor t) {
    LieElement e(std::move(algebra));
    e.tensor_ = std::move(t);
    return e;
}

LieElement LieElement::from_coordinates(LieAlgebraPtr algebra, std::size_t length,
                                        const SparseVector& coords) {
    const auto& basis = algebra->basis(length);
    Tensor t;
    for (const auto& [i, c] : coords.entries()) t.add_scaled(basis.at(i).expansion, c);
    return from_tensor(std::move(algebra), std::move(t));
}

std::optional<int> LieElement::degree() const {
    if (tensor_.empty()) return std::nullopt;
    const int d = algebra_->word_degree(tensor_.terms().front().first);
    for (const auto& [w, c] : tensor_.terms())
        if (algebra_->word_degree(w) != d) return std::nullopt;
    return d;
}

std::optional<std::size_t> LieElement::length() const {
    if (tensor_.empty()) return std::nullopt;
    const std::size_t l = tensor_.terms().front().first.len;
    if (tensor_.terms().back().first.len != l) return std::nullopt;
    return l;
}

SparseVector LieElement::coordinates(std::size_t length) const {
    std::vector<Tensor::Term> part;
    for (const auto& t : tensor_.terms())
        if (t.first.len == length) part.push_back(t);
    return algebra_->coordinates(Tensor(std::move(part)), length);
}

std::vector<LieElement::Term> LieElement::terms() const {
    std::vector<Term> out;
    std::set<std::size_t> lengths;
    for (const auto& t : tensor_.terms()) lengths.insert(t.first.len);
    for (auto l : lengths) {
        const SparseVector coords = coordinates(l);
        for (const auto& [i, c] : coords.entries()) out.push_back({l, i, c});
    }
    return out;
}

std::string LieElement::to_string() const {
    auto ts = terms();
    if (ts.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& t : ts) {
        Rational c = t.coeff;
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        if (c < 0) c = -c;
        if (c != 1) out << c.get_str() << "*";
        out << algebra_->basis(t.length)[t.index].text;
        first = false;
    }
    return out.str();
}

void LieElement::check_same(const LieElement& o) const {
    if (algebra_ != o.algebra_ && !(algebra_->generators() == o.algebra_->generators()))
        throw ValidationError("Lie elements belong to different algebras");
}

LieElement& LieElement::operator+=(const LieElement& o) {
    check_same(o);
    tensor_ += o.tensor_;
    return *this;
}

LieElement& LieElement::operator-=(const LieElement& o) {
    check_same(o);
    tensor_ -= o.tensor_;
    return *this;
}

LieElement& LieElement::operator*=(const Rational& s) {
    tensor_ *= s;
    return *this;
}

LieElement bracket(const LieElement& x, const LieElement& y) {
    if (x.algebra() != y.algebra() && !(x.algebra()->generators() == y.algebra()->generators()))
        throw ValidationError("bracket of elements from different algebras");
    return LieElement::from_tensor(x.algebra(), x.algebra()->commutator(x.tensor(), y.tensor()));
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
public:
    Parser(const LieAlgebraPtr& alg, std::string_view text) : alg_(alg), text_(text) {}

    LieElement parse() {
        LieElement e = sum();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ValidationError("cannot parse Lie element at position " + std::to_string(pos_) +
                              ": " + msg);
    }
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    LieElement sum() {
        LieElement acc(alg_);
        bool negative = accept('-');
        if (!negative) accept('+');
        acc = term();
        if (negative) acc *= Rational(-1);
        while (true) {
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }
    LieElement term() {
        skip();
        Rational coeff = 1;
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            coeff = number();
            if (!accept('*')) {
                // A bare number is only meaningful as zero.
                if (coeff != 0) fail("a bare coefficient must be followed by '*'");
                return LieElement(alg_);
            }
        }
        LieElement a = atom();
        a *= coeff;
        return a;
    }
    Rational number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
            ++pos_;
        Rational q;
        if (q.set_str(std::string(text_.substr(start, pos_ - start)), 10) != 0 || q.get_den() == 0)
            fail("bad coefficient");
        q.canonicalize();
        return q;
    }
    LieElement atom() {
        skip();
        if (accept('[')) {
            LieElement l = sum();
            if (!accept(',')) fail("expected ','");
            LieElement r = sum();
            if (!accept(']')) fail("expected ']'");
            return bracket(l, r);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (start == pos_) fail("expected generator or '['");
        auto name = text_.substr(start, pos_ - start);
        auto idx = alg_->generators().find(name);
        if (!idx) fail("unknown generator '" + std::string(name) + "'");
        return LieElement::generator(alg_, *idx);
    }

    const LieAlgebraPtr& alg_;
    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

LieElement map_generators(const LieElement& x, const LieAlgebraPtr& target,
                          std::span<const SparseVector> images) {
    const auto& src = x.algebra()->generators();
    if (images.size() != src.size()) throw ValidationError("one image per generator required");
    std::vector<Tensor> letter(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) {
        std::vector<Tensor::Term> terms;
        for (const auto& [j, c] : images[i].entries()) {
            if (j >= target->rank()) throw ValidationError("generator image out of range");
            if (target->generators().degree(j) != src.degree(i))
                throw ValidationError("generator map must preserve degrees");
            terms.emplace_back(Word::letter(j), c);
        }
        letter[i] = Tensor(std::move(terms));
    }
    Tensor out;
    for (const auto& [w, c] : x.tensor().terms()) {
        Tensor prod = Tensor::word(Word{}, c);
        for (std::size_t pos = 0; pos < w.len && !prod.empty(); ++pos)
            prod = prod.times(letter[w.at(pos)]);
        out += prod;
    }
    return LieElement::from_tensor(target, std::move(out));
}

LieElement parse_lie_element(const LieAlgebraPtr& algebra, std::string_view text) {
    return Parser(algebra, text).parse();
}

// ---------------------------------------------------------------- bases and oracles

std::vector<LieBasisElement> lyndon_basis(const GeneratorSet& gens, std::size_t k) {
    if (k == 0) throw ValidationError("word length must be >= 1");
    return FreeLieAlgebra::create(gens)->basis(k);
}

namespace {

Integer binomial(const Integer& n, unsigned long k) {
    Integer r;
    mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
    return r;
}

// Multiplies a truncated series by (1 - t^j)^{-a} (even) or (1 + t^j)^{a} (odd).
void multiply_pbw_factor(std::vector<Integer>& series, std::size_t j, const Integer& a, bool odd) {
    const std::size_t top = series.size() - 1;
    std::vector<Integer> out(series.size(), Integer(0));
    for (std::size_t m = 0; m * j <= top; ++m) {
        const Integer c = odd ? binomial(a, m) : binomial(a + m - 1, m);
        if (c == 0) continue;
        for (std::size_t i = 0; i + m * j <= top; ++i) out[i + m * j] += c * series[i];
    }
    series = std::move(out);
}

}  // namespace

Integer pbw_dim_oracle(const GeneratorSet& gens, std::size_t k) {
    if (k == 0) throw ValidationError("word length must be >= 1");
    const int dprime = gens.gen_degree();
    const Integer n = static_cast<unsigned long>(gens.size());
    std::vector<Integer> series(k + 1, Integer(0));
    series[0] = 1;
    Integer a = 0;
    for (std::size_t j = 1; j <= k; ++j) {
        Integer target;
        mpz_pow_ui(target.get_mpz_t(), n.get_mpz_t(), j);
        a = target - series[j];
        multiply_pbw_factor(series, j, a, (static_cast<long>(j) * dprime) % 2 != 0);
    }
    return a;
}

std::vector<Integer> enveloping_dims(std::span<const std::size_t> lie_dims, int gen_degree) {
    std::vector<Integer> series(lie_dims.size() + 1, Integer(0));
    series[0] = 1;
    for (std::size_t j = 1; j <= lie_dims.size(); ++j)
        multiply_pbw_factor(series, j, Integer(static_cast<unsigned long>(lie_dims[j - 1])),
                            (static_cast<long>(j) * gen_degree) % 2 != 0);
    return series;
}

KoszulCheck koszul_hilbert_check(std::span<const std::size_t> qdims, std::size_t n,
                                 int gen_degree) {
    KoszulCheck out;
    out.enveloping = enveloping_dims(qdims, gen_degree);
    out.expected.assign(out.enveloping.size(), Integer(0));
    out.expected[0] = 1;
    if (out.expected.size() > 1) out.expected[1] = static_cast<unsigned long>(n);
    for (std::size_t m = 2; m < out.expected.size(); ++m)
        out.expected[m] = Integer(static_cast<unsigned long>(n)) * out.expected[m - 1] -
                          out.expected[m - 2];
    out.holds = out.enveloping == out.expected;
    return out;
}

// ---------------------------------------------------------------- quotients

namespace {

SparseVector to_vector(const Tensor& t) {
    std::vector<SparseVector::Entry> e;
    e.reserve(t.terms().size());
    for (const auto& [w, c] : t.terms()) e.emplace_back(static_cast<std::size_t>(w.code), c);
    return SparseVector(std::move(e));
}

Tensor to_tensor(const SparseVector& v, std::size_t length) {
    std::vector<Tensor::Term> terms;
    for (const auto& [i, c] : v.entries())
        terms.emplace_back(Word{static_cast<std::uint64_t>(i), static_cast<std::uint8_t>(length)}, c);
    return Tensor(std::move(terms));
}

std::size_t uniform_length(const LieElement& e) {
    auto l = e.length();
    if (!l) throw ValidationError("relations must be nonzero and homogeneous in word length");
    return *l;
}

}  // namespace

// Rewriting system for a single quadratic relation whose largest word has two
// distinct letters: that word has no self-overlap, so replacing it everywhere gives
// normal forms of the enveloping algebra, into which the quotient Lie algebra embeds.
struct OneRelatorRewriter {
    Word lead;                          // two-letter word being eliminated
    std::vector<Tensor::Term> replace;  // lead == sum of these

    static std::optional<OneRelatorRewriter> detect(const std::vector<LieElement>& rels) {
        if (rels.size() != 1 || rels[0].length() != std::optional<std::size_t>(2)) return std::nullopt;
        const auto& terms = rels[0].tensor().terms();
        const auto& [lead, lc] = terms.back();
        if (lead.at(0) == lead.at(1)) return std::nullopt;
        OneRelatorRewriter r;
        r.lead = lead;
        for (std::size_t i = 0; i + 1 < terms.size(); ++i)
            r.replace.emplace_back(terms[i].first, -terms[i].second / lc);
        return r;
    }

    [[nodiscard]] SparseVector normal_form(const Tensor& t) const {
        std::map<std::uint64_t, Rational> work;
        std::size_t length = 0;
        for (const auto& [w, c] : t.terms()) {
            work.emplace(w.code, c);
            length = w.len;
        }
        std::vector<SparseVector::Entry> done;
        while (!work.empty()) {
            auto last = std::prev(work.end());
            const Word w{last->first, static_cast<std::uint8_t>(length)};
            std::size_t pos = length;
            for (std::size_t i = 0; i + 1 < length; ++i)
                if (w.sub(i, 2) == lead) {
                    pos = i;
                    break;
                }
            Rational c = last->second;
            work.erase(last);
            if (pos == length) {
                done.emplace_back(static_cast<std::size_t>(w.code), std::move(c));
                continue;
            }
            const Word prefix = w.sub(0, pos);
            const Word suffix = w.sub(pos + 2, length - pos - 2);
            for (const auto& [rw, rc] : replace) {
                const Word nw = prefix.concat(rw).concat(suffix);
                auto [it, inserted] = work.emplace(nw.code, Rational(0));
                it->second += c * rc;
                if (it->second == 0) work.erase(it);
            }
        }
        return SparseVector(std::move(done));
    }
};

struct QuotientLieAlgebra::Impl {
    std::optional<OneRelatorRewriter> rewriter;
    mutable std::mutex mutex;
    mutable std::map<std::size_t, SubspaceBasis> ideal;          // closure, word coordinates
    mutable std::map<std::size_t, std::vector<std::size_t>> qbasis;
    mutable std::map<std::size_t, SubspaceBasis> qimages;         // canonical images of qbasis
};

QuotientLieAlgebra::QuotientLieAlgebra(Presentation p, bool allow_rewriting)
    : p_(std::move(p)), impl_(std::make_unique<Impl>()) {
    if (!p_.algebra) throw ValidationError("presentation without algebra");
    for (const auto& r : p_.relations) {
        if (r.algebra()->generators() != p_.algebra->generators())
            throw ValidationError("relation from a different algebra");
        (void)uniform_length(r);
        if (!r.degree()) throw ValidationError("relations must be homogeneous");
    }
    if (allow_rewriting) impl_->rewriter = OneRelatorRewriter::detect(p_.relations);
}

bool QuotientLieAlgebra::uses_rewriting() const { return impl_->rewriter.has_value(); }

QuotientLieAlgebra::~QuotientLieAlgebra() = default;
QuotientLieAlgebra::QuotientLieAlgebra(QuotientLieAlgebra&&) noexcept = default;
QuotientLieAlgebra& QuotientLieAlgebra::operator=(QuotientLieAlgebra&&) noexcept = default;

namespace {

const SubspaceBasis& ideal_level(const Presentation& p, std::map<std::size_t, SubspaceBasis>& cache,
                                 std::size_t length) {
    if (auto it = cache.find(length); it != cache.end()) return it->second;
    SubspaceBasis span;
    for (const auto& r : p.relations)
        if (uniform_length(r) == length) span.add(to_vector(r.tensor()));
    if (length > 1) {
        const SubspaceBasis& below = ideal_level(p, cache, length - 1);
        const auto& alg = *p.algebra;
        for (const auto& v : below.generators()) {
            const Tensor t = to_tensor(v, length - 1);
            for (std::size_t x = 0; x < alg.rank(); ++x)
                span.add(to_vector(alg.commutator(Tensor::word(Word::letter(x)), t)));
        }
    }
    return cache.emplace(length, std::move(span)).first->second;
}

}  // namespace

std::size_t QuotientLieAlgebra::ideal_dim(std::size_t length) const {
    std::lock_guard lock(impl_->mutex);
    return ideal_level(p_, impl_->ideal, length).dim();
}

std::size_t QuotientLieAlgebra::quotient_dim(std::size_t length) const {
    return p_.algebra->basis(length).size() - ideal_dim(length);
}

std::vector<LieElement> QuotientLieAlgebra::ideal_basis(std::size_t length) const {
    std::lock_guard lock(impl_->mutex);
    std::vector<LieElement> out;
    for (const auto& v : ideal_level(p_, impl_->ideal, length).generators())
        out.push_back(LieElement::from_tensor(p_.algebra, to_tensor(v, length)));
    return out;
}

namespace {

// Canonical representative of the class of t modulo the ideal: zero iff t is in the ideal.
SparseVector canonical(const std::optional<OneRelatorRewriter>& rw,
                       const std::function<const SubspaceBasis&(std::size_t)>& ideal_at,
                       const Tensor& t, std::size_t length) {
    if (rw) return rw->normal_form(t);
    return ideal_at(length).reduce(to_vector(t));
}

}  // namespace

bool QuotientLieAlgebra::in_ideal(const Tensor& t, std::size_t length) const {
    std::lock_guard lock(impl_->mutex);
    auto ideal_at = [&](std::size_t l) -> const SubspaceBasis& { return ideal_level(p_, impl_->ideal, l); };
    return canonical(impl_->rewriter, ideal_at, t, length).empty();
}

const std::vector<std::size_t>& QuotientLieAlgebra::quotient_basis(std::size_t length) const {
    std::lock_guard lock(impl_->mutex);
    if (auto it = impl_->qbasis.find(length); it != impl_->qbasis.end()) return it->second;
    auto ideal_at = [&](std::size_t l) -> const SubspaceBasis& { return ideal_level(p_, impl_->ideal, l); };
    SubspaceBasis images;
    std::vector<std::size_t> chosen;
    const auto& basis = p_.algebra->basis(length);
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (images.add(canonical(impl_->rewriter, ideal_at, basis[j].expansion, length)))
            chosen.push_back(j);
    impl_->qimages.emplace(length, std::move(images));
    return impl_->qbasis.emplace(length, std::move(chosen)).first->second;
}

SparseVector QuotientLieAlgebra::quotient_coordinates(const Tensor& t, std::size_t length) const {
    (void)quotient_basis(length);
    std::lock_guard lock(impl_->mutex);
    auto ideal_at = [&](std::size_t l) -> const SubspaceBasis& { return ideal_level(p_, impl_->ideal, l); };
    const auto coords = impl_->qimages.at(length).coordinates(
        canonical(impl_->rewriter, ideal_at, t, length));
    std::vector<SparseVector::Entry> e;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (coords[i] != 0) e.emplace_back(i, coords[i]);
    return SparseVector(std::move(e));
}

std::vector<std::vector<LieElement>> QuotientLieAlgebra::center_up_to(std::size_t maxlen) const {
    std::vector<std::vector<LieElement>> out;
    const auto& alg = *p_.algebra;
    std::lock_guard lock(impl_->mutex);
    auto ideal_at = [&](std::size_t l) -> const SubspaceBasis& { return ideal_level(p_, impl_->ideal, l); };
    for (std::size_t m = 1; m <= maxlen; ++m) {
        // Candidates start as the whole free component; each generator cuts them down
        // to the kernel of z -> [z, x] modulo the ideal.
        std::vector<Tensor> candidates;
        for (const auto& b : alg.basis(m)) candidates.push_back(b.expansion);
        for (std::size_t x = 0; x < alg.rank() && !candidates.empty(); ++x) {
            const Tensor gen = Tensor::word(Word::letter(x));
            std::vector<SparseVector> cols;
            cols.reserve(candidates.size());
            for (const auto& z : candidates)
                cols.push_back(canonical(impl_->rewriter, ideal_at, alg.commutator(z, gen), m + 1));
            auto rk = column_rank_kernel(cols);
            std::vector<Tensor> next;
            for (const auto& k : rk.kernel_basis) {
                Tensor z;
                for (const auto& [i, c] : k.entries()) z.add_scaled(candidates[i], c);
                next.push_back(std::move(z));
            }
            candidates = std::move(next);
        }
        // Discard the part lying in the ideal.
        SubspaceBasis classes;
        std::vector<LieElement> level;
        for (const auto& z : candidates)
            if (classes.add(canonical(impl_->rewriter, ideal_at, z, m)))
                level.push_back(LieElement::from_tensor(p_.algebra, z));
        out.push_back(std::move(level));
    }
    return out;
}

std::vector<LieElement> ideal_basis(const Presentation& p, std::size_t m) {
    if (m == 0) throw ValidationError("word length must be >= 1");
    return QuotientLieAlgebra(p).ideal_basis(m);
}

std::vector<std::size_t> quotient_dims(const Presentation& p, std::size_t maxlen) {
    QuotientLieAlgebra q(p);
    std::vector<std::size_t> out;
    for (std::size_t m = 1; m <= maxlen; ++m) out.push_back(q.quotient_dim(m));
    return out;
}

std::vector<std::vector<LieElement>> center_up_to(const Presentation& p, std::size_t maxlen) {
    return QuotientLieAlgebra(p).center_up_to(maxlen);
}

}  // namespace hcm
