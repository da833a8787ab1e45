#include "hcm/exactla.hpp"

#include "hcm/errors.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace hcm {

// ---------------------------------------------------------------- SparseVector

SparseVector::SparseVector(std::vector<Entry> entries) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& [idx, val] : entries) {
        if (!entries_.empty() && entries_.back().first == idx) {
            entries_.back().second += val;
            if (entries_.back().second == 0) entries_.pop_back();
        } else if (val != 0) {
            entries_.emplace_back(idx, std::move(val));
        }
    }
}

Rational SparseVector::at(std::size_t index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const Entry& e, std::size_t i) { return e.first < i; });
    if (it != entries_.end() && it->first == index) return it->second;
    return 0;
}

namespace {

// out = a + scale * b, merged by index.
std::vector<SparseVector::Entry> axpy(const std::vector<SparseVector::Entry>& a,
                                      const Rational& scale,
                                      const std::vector<SparseVector::Entry>& b) {
    std::vector<SparseVector::Entry> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            out.push_back(a[i++]);
        } else if (i == a.size() || b[j].first < a[i].first) {
            out.emplace_back(b[j].first, scale * b[j].second);
            ++j;
        } else {
            Rational v = a[i].second + scale * b[j].second;
            if (v != 0) out.emplace_back(a[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

SparseVector& SparseVector::operator+=(const SparseVector& other) {
    entries_ = axpy(entries_, Rational(1), other.entries_);
    return *this;
}

SparseVector& SparseVector::operator-=(const SparseVector& other) {
    entries_ = axpy(entries_, Rational(-1), other.entries_);
    return *this;
}

SparseVector& SparseVector::operator*=(const Rational& scalar) {
    if (scalar == 0) {
        entries_.clear();
    } else {
        for (auto& e : entries_) e.second *= scalar;
    }
    return *this;
}

Rational SparseVector::dot(const SparseVector& other) const {
    Rational acc = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < entries_.size() && j < other.entries_.size()) {
        if (entries_[i].first < other.entries_[j].first) {
            ++i;
        } else if (other.entries_[j].first < entries_[i].first) {
            ++j;
        } else {
            acc += entries_[i].second * other.entries_[j].second;
            ++i;
            ++j;
        }
    }
    return acc;
}

SparseVector SparseVector::primitive() const {
    if (entries_.empty()) return {};
    Integer den_lcm = 1;
    for (const auto& e : entries_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(),
                                           e.second.get_den_mpz_t());
    Integer num_gcd = 0;
    for (const auto& e : entries_) {
        Integer scaled = e.second.get_num() * (den_lcm / e.second.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled.get_mpz_t());
    }
    Rational factor(den_lcm, num_gcd);
    factor.canonicalize();
    if (entries_.front().second < 0) factor = -factor;
    SparseVector out = *this;
    out *= factor;
    return out;
}

// ---------------------------------------------------------------- SparseMatrix

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), row_data_(rows) {}

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
    : SparseMatrix(rows, cols) {
    std::vector<std::vector<SparseVector::Entry>> buckets(rows);
    for (auto& t : triplets) {
        if (t.row >= rows || t.col >= cols) throw ValidationError("matrix entry out of range");
        buckets[t.row].emplace_back(t.col, std::move(t.value));
    }
    for (std::size_t r = 0; r < rows; ++r) row_data_[r] = SparseVector(std::move(buckets[r]));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.row_data_[i] = SparseVector({{i, Rational(1)}});
    return m;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, std::span<const SparseVector> columns) {
    std::vector<Triplet> trip;
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (const auto& [r, v] : columns[c].entries()) trip.push_back({r, c, v});
    return SparseMatrix(rows, columns.size(), std::move(trip));
}

SparseMatrix SparseMatrix::from_rows(std::size_t cols, std::span<const SparseVector> rows) {
    SparseMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
    return m;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<Rational>>& dense) {
    const std::size_t rows = dense.size();
    const std::size_t cols = rows == 0 ? 0 : dense.front().size();
    std::vector<Triplet> trip;
    for (std::size_t r = 0; r < rows; ++r) {
        if (dense[r].size() != cols) throw ValidationError("ragged dense matrix");
        for (std::size_t c = 0; c < cols; ++c)
            if (dense[r][c] != 0) trip.push_back({r, c, dense[r][c]});
    }
    return SparseMatrix(rows, cols, std::move(trip));
}

std::size_t SparseMatrix::nnz() const {
    std::size_t n = 0;
    for (const auto& r : row_data_) n += r.nnz();
    return n;
}

std::vector<SparseMatrix::Triplet> SparseMatrix::triplets() const {
    std::vector<Triplet> out;
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : row_data_[r].entries()) out.push_back({r, c, v});
    return out;
}

void SparseMatrix::set_row(std::size_t r, SparseVector v) {
    if (r >= rows_) throw ValidationError("row index out of range");
    if (!v.empty() && v.entries().back().first >= cols_)
        throw ValidationError("column index out of range");
    row_data_[r] = std::move(v);
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<std::vector<SparseVector::Entry>> cols(cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : row_data_[r].entries()) cols[c].emplace_back(r, v);
    SparseMatrix t(cols_, rows_);
    for (std::size_t c = 0; c < cols_; ++c) t.row_data_[c] = SparseVector(std::move(cols[c]));
    return t;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const {
    std::vector<SparseVector::Entry> out;
    for (std::size_t r = 0; r < rows_; ++r) {
        Rational x = row_data_[r].dot(v);
        if (x != 0) out.emplace_back(r, std::move(x));
    }
    return SparseVector(std::move(out));
}

std::vector<SparseVector> SparseMatrix::columns() const {
    SparseMatrix t = transpose();
    return std::move(t.row_data_);
}

std::vector<std::vector<Rational>> SparseMatrix::to_dense() const {
    std::vector<std::vector<Rational>> out(rows_, std::vector<Rational>(cols_, Rational(0)));
    for (std::size_t r = 0; r < rows_; ++r)
        for (const auto& [c, v] : row_data_[r].entries()) out[r][c] = v;
    return out;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows_) throw ValidationError("matrix product dimension mismatch");
    SparseMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r) {
        std::vector<SparseVector::Entry> acc;
        for (const auto& [k, v] : a.row_data_[r].entries())
            acc = axpy(acc, v, b.row_data_[k].entries());
        out.row_data_[r] = SparseVector(std::move(acc));
    }
    return out;
}

SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix sum mismatch");
    SparseMatrix out = a;
    for (std::size_t r = 0; r < a.rows_; ++r) out.row_data_[r] += b.row_data_[r];
    return out;
}

SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix sum mismatch");
    SparseMatrix out = a;
    for (std::size_t r = 0; r < a.rows_; ++r) out.row_data_[r] -= b.row_data_[r];
    return out;
}

SparseMatrix operator*(const Rational& s, const SparseMatrix& a) {
    SparseMatrix out = a;
    for (auto& row : out.row_data_) row *= s;
    return out;
}

SparseMatrix SparseMatrix::vstack(std::span<const SparseMatrix> blocks) {
    std::size_t rows = 0;
    const std::size_t cols = blocks.empty() ? 0 : blocks.front().cols_;
    for (const auto& b : blocks) {
        if (b.cols_ != cols) throw ValidationError("vstack column mismatch");
        rows += b.rows_;
    }
    SparseMatrix out(rows, cols);
    std::size_t at = 0;
    for (const auto& b : blocks)
        for (const auto& row : b.row_data_) out.row_data_[at++] = row;
    return out;
}

SparseMatrix SparseMatrix::hstack(std::span<const SparseMatrix> blocks) {
    std::vector<SparseMatrix> transposed;
    transposed.reserve(blocks.size());
    for (const auto& b : blocks) transposed.push_back(b.transpose());
    return vstack(transposed).transpose();
}

// ---------------------------------------------------------------- elimination

namespace {

using IntEntry = std::pair<std::size_t, Integer>;
using IntRow = std::vector<IntEntry>;

IntRow to_primitive_int(const SparseVector& v) {
    SparseVector p = v.primitive();
    IntRow out;
    out.reserve(p.nnz());
    for (const auto& [c, q] : p.entries()) out.emplace_back(c, q.get_num());
    return out;
}

void remove_content(IntRow& row) {
    if (row.empty()) return;
    Integer g = 0;
    for (const auto& e : row) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) return;
    }
    for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

// row <- (a/g) row - (b/g) pivot, where a, b are the leading entries; cancels the lead.
IntRow cancel_lead(const IntRow& row, const IntRow& pivot) {
    const Integer& a = pivot.front().second;
    const Integer& b = row.front().second;
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Integer ra = a / g;
    Integer rb = b / g;
    IntRow out;
    out.reserve(row.size() + pivot.size());
    std::size_t i = 1;
    std::size_t j = 1;
    Integer tmp;
    while (i < row.size() || j < pivot.size()) {
        if (j == pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
            out.emplace_back(row[i].first, ra * row[i].second);
            ++i;
        } else if (i == row.size() || pivot[j].first < row[i].first) {
            out.emplace_back(pivot[j].first, -rb * pivot[j].second);
            ++j;
        } else {
            tmp = ra * row[i].second - rb * pivot[j].second;
            if (tmp != 0) out.emplace_back(row[i].first, tmp);
            ++i;
            ++j;
        }
    }
    remove_content(out);
    return out;
}

// Fraction-free Gaussian elimination on dense integer rows; returns echelon rows.
std::vector<IntRow> dense_echelon(std::vector<IntRow> sparse_rows, std::size_t cols) {
    std::vector<std::vector<Integer>> rows;
    rows.reserve(sparse_rows.size());
    for (const auto& sr : sparse_rows) {
        std::vector<Integer> d(cols, Integer(0));
        for (const auto& [c, v] : sr) d[c] = v;
        rows.push_back(std::move(d));
    }
    std::vector<IntRow> out;
    std::size_t top = 0;
    Integer prev = 1;
    for (std::size_t c = 0; c < cols && top < rows.size(); ++c) {
        // Largest magnitude entry in this column, earliest row on ties.
        std::size_t best = rows.size();
        for (std::size_t r = top; r < rows.size(); ++r) {
            if (rows[r][c] == 0) continue;
            if (best == rows.size() || abs(rows[r][c]) > abs(rows[best][c])) best = r;
        }
        if (best == rows.size()) continue;
        std::swap(rows[top], rows[best]);
        const Integer piv = rows[top][c];
        for (std::size_t r = top + 1; r < rows.size(); ++r) {
            const Integer lead = rows[r][c];
            for (std::size_t k = c; k < cols; ++k) {
                Integer v = piv * rows[r][k] - lead * rows[top][k];
                mpz_divexact(rows[r][k].get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = piv;
        ++top;
    }
    for (std::size_t r = 0; r < top; ++r) {
        IntRow sr;
        for (std::size_t c = 0; c < cols; ++c)
            if (rows[r][c] != 0) sr.emplace_back(c, rows[r][c]);
        remove_content(sr);
        out.push_back(std::move(sr));
    }
    return out;
}

// Integer echelon basis of the row span; rows sorted by pivot column.
std::vector<IntRow> integer_echelon(std::span<const SparseVector> input, std::size_t cols) {
    std::vector<std::pair<std::size_t, std::size_t>> order;  // (nnz, original index)
    std::size_t total_nnz = 0;
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (!input[i].empty()) order.emplace_back(input[i].nnz(), i);
        total_nnz += input[i].nnz();
    }
    std::sort(order.begin(), order.end());

    auto finish = [](std::vector<IntRow> rows) {
        std::sort(rows.begin(), rows.end(),
                  [](const IntRow& a, const IntRow& b) { return a.front().first < b.front().first; });
        return rows;
    };

    const bool dense_input =
        cols > 0 && !order.empty() && 2 * total_nnz > order.size() * cols && cols <= 400;
    if (dense_input) {
        std::vector<IntRow> rows;
        for (auto [nnz, i] : order) rows.push_back(to_primitive_int(input[i]));
        return finish(dense_echelon(std::move(rows), cols));
    }

    std::vector<long> pivot_of(cols, -1);
    std::vector<IntRow> pivots;
    std::size_t pivot_nnz = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        IntRow row = to_primitive_int(input[order[k].second]);
        while (!row.empty()) {
            const long p = pivot_of[row.front().first];
            if (p < 0) break;
            row = cancel_lead(row, pivots[static_cast<std::size_t>(p)]);
        }
        if (row.empty()) continue;
        if (row.front().second < 0)
            for (auto& e : row) e.second = -e.second;
        pivot_of[row.front().first] = static_cast<long>(pivots.size());
        pivot_nnz += row.size();
        pivots.push_back(std::move(row));
        // Switch to dense elimination once stored pivot rows are more than half full.
        if (pivots.size() >= 8 && cols <= 400 && 2 * pivot_nnz > pivots.size() * cols) {
            std::vector<IntRow> rest = std::move(pivots);
            for (std::size_t m = k + 1; m < order.size(); ++m)
                rest.push_back(to_primitive_int(input[order[m].second]));
            return finish(dense_echelon(std::move(rest), cols));
        }
    }
    return finish(std::move(pivots));
}

SparseVector to_rational(const IntRow& row) {
    std::vector<SparseVector::Entry> e;
    e.reserve(row.size());
    for (const auto& [c, v] : row) e.emplace_back(c, Rational(v));
    return SparseVector(std::move(e));
}

// Reduced echelon form with unit pivots, from integer echelon rows.
EchelonBasis reduce_fully(const std::vector<IntRow>& ech, std::size_t cols) {
    EchelonBasis out;
    std::vector<SparseVector> rows;
    rows.reserve(ech.size());
    for (const auto& r : ech) {
        SparseVector v = to_rational(r);
        Rational inv = 1 / v.entries().front().second;
        v *= inv;
        out.pivots.push_back(r.front().first);
        rows.push_back(std::move(v));
    }
    std::vector<long> row_of(cols, -1);
    for (std::size_t i = 0; i < rows.size(); ++i) row_of[out.pivots[i]] = static_cast<long>(i);
    // Back-substitute from the last pivot upward.
    for (std::size_t ii = rows.size(); ii-- > 0;) {
        std::vector<SparseVector::Entry> acc = rows[ii].entries();
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [c, v] : acc) {
                if (c == out.pivots[ii]) continue;
                const long j = row_of[c];
                if (j < 0) continue;
                acc = axpy(acc, -v, rows[static_cast<std::size_t>(j)].entries());
                changed = true;
                break;
            }
        }
        rows[ii] = SparseVector(std::move(acc));
    }
    out.rows = std::move(rows);
    return out;
}

}  // namespace

EchelonBasis row_echelon(std::span<const SparseVector> rows, std::size_t cols, bool reduced) {
    auto ech = integer_echelon(rows, cols);
    if (reduced) return reduce_fully(ech, cols);
    EchelonBasis out;
    for (const auto& r : ech) {
        out.pivots.push_back(r.front().first);
        out.rows.push_back(to_rational(r));
    }
    return out;
}

std::size_t rank(const SparseMatrix& m) {
    std::vector<SparseVector> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
    return integer_echelon(rows, m.cols()).size();
}

RankKernel rank_kernel(const SparseMatrix& m) {
    std::vector<SparseVector> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(m.row(r));
    EchelonBasis rref = row_echelon(rows, m.cols(), true);
    RankKernel out;
    out.rank = rref.rows.size();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : rref.pivots) is_pivot[p] = true;
    // Column-indexed view of the non-pivot entries of the RREF.
    std::vector<std::vector<std::pair<std::size_t, Rational>>> by_free_col(m.cols());
    for (std::size_t i = 0; i < rref.rows.size(); ++i)
        for (const auto& [c, v] : rref.rows[i].entries())
            if (!is_pivot[c]) by_free_col[c].emplace_back(rref.pivots[i], v);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        std::vector<SparseVector::Entry> e;
        e.emplace_back(c, Rational(1));
        for (const auto& [p, v] : by_free_col[c]) e.emplace_back(p, -v);
        out.kernel_basis.push_back(SparseVector(std::move(e)).primitive());
    }
    return out;
}

std::size_t homology_dims(const ComplexSlice& s) {
    if (s.d_out.cols() != s.d_in.rows())
        throw ValidationError("complex slice has incompatible inner dimensions");
    if (!(s.d_out * s.d_in).is_zero()) throw ValidationError("complex slice: d_out * d_in != 0");
    return s.d_out.cols() - rank(s.d_out) - rank(s.d_in);
}

// ---------------------------------------------------------------- SubspaceBasis

void SubspaceBasis::reduce_in_place(SparseVector& v, SparseVector* combo) const {
    std::size_t cursor = 0;
    while (true) {
        const auto& ent = v.entries();
        auto it = std::lower_bound(ent.begin(), ent.end(), cursor,
                                   [](const SparseVector::Entry& e, std::size_t i) {
                                       return e.first < i;
                                   });
        std::unordered_map<std::size_t, std::size_t>::const_iterator hit = pivot_row_.end();
        for (; it != ent.end(); ++it) {
            hit = pivot_row_.find(it->first);
            if (hit != pivot_row_.end()) break;
        }
        if (it == ent.end()) return;
        const auto& row = echelon_[hit->second];
        const Rational factor = it->second;  // echelon pivots are normalized to 1
        cursor = it->first + 1;
        v -= factor * row.vec;
        if (combo != nullptr) *combo -= factor * row.combo;
    }
}

bool SubspaceBasis::add(const SparseVector& v) {
    if (!v.empty() && v.entries().back().first >= ambient_)
        throw ValidationError("vector exceeds ambient dimension");
    SparseVector r = v;
    SparseVector combo({{generators_.size(), Rational(1)}});
    reduce_in_place(r, &combo);
    if (r.empty()) return false;
    const Rational inv = 1 / r.entries().front().second;
    r *= inv;
    combo *= inv;
    pivot_row_.emplace(r.entries().front().first, echelon_.size());
    echelon_.push_back({std::move(r), std::move(combo)});
    generators_.push_back(v);
    return true;
}

SparseVector SubspaceBasis::reduce(const SparseVector& v) const {
    SparseVector r = v;
    reduce_in_place(r, nullptr);
    return r;
}

bool SubspaceBasis::contains(const SparseVector& v) const { return reduce(v).empty(); }

std::vector<Rational> SubspaceBasis::coordinates(const SparseVector& v) const {
    std::vector<Rational> out(generators_.size(), Rational(0));
    SparseVector r = v;
    SparseVector combo;
    reduce_in_place(r, &combo);
    if (!r.empty()) throw ValidationError("vector not in span");
    // v - sum(combo) reduces to zero, so v = -combo in generator coordinates.
    for (const auto& [i, q] : combo.entries()) out[i] = -q;
    return out;
}

std::vector<std::size_t> SubspaceBasis::pivot_columns() const {
    std::vector<std::size_t> out;
    for (const auto& row : echelon_) out.push_back(row.vec.entries().front().first);
    return out;
}

RankKernel column_rank_kernel(std::span<const SparseVector> columns) {
    SubspaceBasis span;
    std::vector<std::size_t> accepted;
    RankKernel out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (span.add(columns[i])) {
            accepted.push_back(i);
            continue;
        }
        auto coords = span.coordinates(columns[i]);
        std::vector<SparseVector::Entry> e;
        e.emplace_back(i, Rational(1));
        for (std::size_t j = 0; j < coords.size(); ++j)
            if (coords[j] != 0) e.emplace_back(accepted[j], -coords[j]);
        out.kernel_basis.push_back(SparseVector(std::move(e)).primitive());
    }
    out.rank = accepted.size();
    return out;
}

// ---------------------------------------------------------------- QuotientSpace

QuotientSpace::QuotientSpace(std::size_t ambient_dim, std::span<const SparseVector> relations)
    : ambient_(ambient_dim),
      relations_(row_echelon(relations, ambient_dim, true)),
      pivot_row_(ambient_dim, -1),
      free_index_(ambient_dim, -1) {
    for (std::size_t i = 0; i < relations_.pivots.size(); ++i)
        pivot_row_[relations_.pivots[i]] = static_cast<long>(i);
    for (std::size_t c = 0; c < ambient_dim; ++c) {
        if (pivot_row_[c] >= 0) continue;
        free_index_[c] = static_cast<long>(free_columns_.size());
        free_columns_.push_back(c);
    }
}

SparseVector QuotientSpace::project(const SparseVector& v) const {
    // Fully reduced relation rows vanish on other pivots, so one pass suffices.
    std::vector<SparseVector::Entry> acc;
    for (const auto& [c, q] : v.entries()) {
        if (c >= ambient_) throw ValidationError("vector exceeds ambient dimension");
        const long r = pivot_row_[c];
        if (r < 0) {
            acc.emplace_back(static_cast<std::size_t>(free_index_[c]), q);
            continue;
        }
        for (const auto& [c2, q2] : relations_.rows[static_cast<std::size_t>(r)].entries())
            if (c2 != c) acc.emplace_back(static_cast<std::size_t>(free_index_[c2]), -q * q2);
    }
    return SparseVector(std::move(acc));
}

SparseVector QuotientSpace::lift(const SparseVector& coords) const {
    std::vector<SparseVector::Entry> acc;
    for (const auto& [i, q] : coords.entries()) acc.emplace_back(free_columns_.at(i), q);
    return SparseVector(std::move(acc));
}

// ---------------------------------------------------------------- solve

namespace {

// Gauss-Jordan on [m | rhs] over Q; returns the determinant of m (zero if singular).
Rational gauss_jordan(std::vector<std::vector<Rational>>& a, std::vector<std::vector<Rational>>& rhs) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            std::swap(rhs[p], rhs[c]);
            det = -det;
        }
        const Rational piv = a[c][c];
        det *= piv;
        for (auto& x : a[c]) x /= piv;
        for (auto& x : rhs[c]) x /= piv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) a[r][k] -= f * a[c][k];
            for (std::size_t k = 0; k < rhs[r].size(); ++k) rhs[r][k] -= f * rhs[c][k];
        }
    }
    return det;
}

}  // namespace

Rational determinant(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("determinant of a non-square matrix");
    auto a = m.to_dense();
    std::vector<std::vector<Rational>> rhs(m.rows());
    return gauss_jordan(a, rhs);
}

SparseMatrix inverse(const SparseMatrix& m) {
    if (m.rows() != m.cols()) throw ValidationError("inverse of a non-square matrix");
    auto a = m.to_dense();
    auto rhs = SparseMatrix::identity(m.rows()).to_dense();
    if (gauss_jordan(a, rhs) == 0) throw ValidationError("matrix is singular");
    return SparseMatrix::from_dense(rhs);
}

bool solve_right(const SparseMatrix& a, const SparseVector& b, SparseVector& x) {
    const std::size_t n = a.cols();
    std::vector<SparseVector> aug;
    aug.reserve(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto e = a.row(r).entries();
        Rational rhs = b.at(r);
        if (rhs != 0) e.emplace_back(n, rhs);
        aug.emplace_back(std::move(e));
    }
    EchelonBasis rref = row_echelon(aug, n + 1, true);
    std::vector<SparseVector::Entry> sol;
    for (std::size_t i = 0; i < rref.rows.size(); ++i) {
        if (rref.pivots[i] == n) return false;
        Rational rhs = rref.rows[i].at(n);
        if (rhs != 0) sol.emplace_back(rref.pivots[i], rhs);
    }
    x = SparseVector(std::move(sol));
    return true;
}

// ---------------------------------------------------------------- text format

std::string to_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

void write_matrix(std::ostream& out, const SparseMatrix& m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (const auto& t : m.triplets()) out << t.row << ' ' << t.col << ' ' << to_string(t.value) << '\n';
}

SparseMatrix read_matrix(std::istream& in) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    if (!(in >> rows >> cols)) throw ValidationError("matrix header must be 'rows cols'");
    std::vector<SparseMatrix::Triplet> trip;
    std::size_t r = 0;
    std::size_t c = 0;
    std::string val;
    while (in >> r >> c >> val) {
        Rational q;
        if (q.set_str(val, 10) != 0) throw ValidationError("bad rational '" + val + "'");
        if (q.get_den() == 0) throw ValidationError("zero denominator");
        q.canonicalize();
        trip.push_back({r, c, q});
    }
    if (!in.eof()) throw ValidationError("malformed matrix entry line");
    return SparseMatrix(rows, cols, std::move(trip));
}

}  // namespace hcm
