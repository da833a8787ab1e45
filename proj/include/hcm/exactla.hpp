#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hcm {

using Rational = mpq_class;
using Integer = mpz_class;

// Sorted list of (index, value) pairs with no stored zeros.
class SparseVector {
public:
    using Entry = std::pair<std::size_t, Rational>;

    SparseVector() = default;
    // Entries may be unsorted and contain repeats or zeros; they are normalized.
    explicit SparseVector(std::vector<Entry> entries);

    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t nnz() const { return entries_.size(); }
    [[nodiscard]] Rational at(std::size_t index) const;

    SparseVector& operator+=(const SparseVector& other);
    SparseVector& operator-=(const SparseVector& other);
    SparseVector& operator*=(const Rational& scalar);
    friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
    friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }
    friend SparseVector operator*(const Rational& s, SparseVector a) { return a *= s; }
    friend bool operator==(const SparseVector&, const SparseVector&) = default;

    [[nodiscard]] Rational dot(const SparseVector& other) const;
    // Rescales to a primitive integer vector with positive leading entry.
    [[nodiscard]] SparseVector primitive() const;

private:
    std::vector<Entry> entries_;
};

class SparseMatrix {
public:
    struct Triplet {
        std::size_t row;
        std::size_t col;
        Rational value;
    };

    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols);
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix from_columns(std::size_t rows, std::span<const SparseVector> columns);
    static SparseMatrix from_rows(std::size_t cols, std::span<const SparseVector> rows);
    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& dense);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] std::size_t nnz() const;
    [[nodiscard]] const SparseVector& row(std::size_t r) const { return row_data_[r]; }
    [[nodiscard]] Rational at(std::size_t r, std::size_t c) const { return row_data_[r].at(c); }
    [[nodiscard]] bool is_zero() const { return nnz() == 0; }
    [[nodiscard]] std::vector<Triplet> triplets() const;

    void set_row(std::size_t r, SparseVector v);

    [[nodiscard]] SparseMatrix transpose() const;
    [[nodiscard]] SparseVector apply(const SparseVector& v) const;
    [[nodiscard]] std::vector<SparseVector> columns() const;
    [[nodiscard]] std::vector<std::vector<Rational>> to_dense() const;

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b);
    friend SparseMatrix operator*(const Rational& s, const SparseMatrix& a);
    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

    [[nodiscard]] static SparseMatrix vstack(std::span<const SparseMatrix> blocks);
    [[nodiscard]] static SparseMatrix hstack(std::span<const SparseMatrix> blocks);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<SparseVector> row_data_;
};

struct RankKernel {
    std::size_t rank = 0;
    std::vector<SparseVector> kernel_basis;
};

struct ComplexSlice {
    SparseMatrix d_in;   // C_{n+1} -> C_n
    SparseMatrix d_out;  // C_n -> C_{n-1}
};

[[nodiscard]] std::size_t rank(const SparseMatrix& m);
[[nodiscard]] RankKernel rank_kernel(const SparseMatrix& m);
[[nodiscard]] std::size_t homology_dims(const ComplexSlice& s);

// Basis of the row space in reduced echelon form (pivot columns ascending).
struct EchelonBasis {
    std::vector<SparseVector> rows;
    std::vector<std::size_t> pivots;
};
[[nodiscard]] EchelonBasis row_echelon(std::span<const SparseVector> rows, std::size_t cols,
                                       bool reduced);

// Incremental span over Q with membership and coordinates relative to the
// vectors that were accepted as independent. Indices may be sparse (for example
// packed word codes), so the ambient dimension is only an upper bound.
class SubspaceBasis {
public:
    explicit SubspaceBasis(std::size_t ambient_dim = SIZE_MAX) : ambient_(ambient_dim) {}

    // Returns true if v was independent of the current span (and adds it).
    bool add(const SparseVector& v);
    [[nodiscard]] bool contains(const SparseVector& v) const;
    [[nodiscard]] std::size_t dim() const { return generators_.size(); }
    [[nodiscard]] std::size_t ambient_dim() const { return ambient_; }
    [[nodiscard]] const std::vector<SparseVector>& generators() const { return generators_; }
    // Coordinates of v in terms of generators(); throws if v is not in the span.
    [[nodiscard]] std::vector<Rational> coordinates(const SparseVector& v) const;
    // Reduction of v modulo the span; zero iff v is in the span.
    [[nodiscard]] SparseVector reduce(const SparseVector& v) const;
    // Pivot column of each echelon row (useful for choosing complements).
    [[nodiscard]] std::vector<std::size_t> pivot_columns() const;

private:
    struct Row {
        SparseVector vec;
        SparseVector combo;  // expression in generators_
    };
    void reduce_in_place(SparseVector& v, SparseVector* combo) const;

    std::size_t ambient_;
    std::vector<SparseVector> generators_;
    std::vector<Row> echelon_;
    std::unordered_map<std::size_t, std::size_t> pivot_row_;  // column -> echelon row
};

// Kernel of the linear map sending e_i to columns[i], with one kernel vector per
// column that depends on earlier ones. Suited to maps with few columns and a
// large, sparsely indexed target.
[[nodiscard]] RankKernel column_rank_kernel(std::span<const SparseVector> columns);

// Quotient of Q^n by a subspace, with coordinates on a complement spanned by
// standard basis vectors of the non-pivot columns.
class QuotientSpace {
public:
    QuotientSpace(std::size_t ambient_dim, std::span<const SparseVector> relations);
    [[nodiscard]] std::size_t dim() const { return free_columns_.size(); }
    [[nodiscard]] std::size_t ambient_dim() const { return ambient_; }
    [[nodiscard]] const std::vector<std::size_t>& free_columns() const { return free_columns_; }
    [[nodiscard]] SparseVector project(const SparseVector& v) const;  // coordinates in Q^dim
    [[nodiscard]] SparseVector lift(const SparseVector& coords) const;

private:
    std::size_t ambient_;
    EchelonBasis relations_;
    std::vector<long> pivot_row_;
    std::vector<std::size_t> free_columns_;
    std::vector<long> free_index_;
};

// Determinant of a square matrix; throws ValidationError if not square.
[[nodiscard]] Rational determinant(const SparseMatrix& m);
// Inverse of a square matrix; throws ValidationError if singular or not square.
[[nodiscard]] SparseMatrix inverse(const SparseMatrix& m);

// Solves a * x = b; returns false if the system is inconsistent.
[[nodiscard]] bool solve_right(const SparseMatrix& a, const SparseVector& b, SparseVector& x);

// Text fixture format: first line "rows cols", then "row col num/den" per entry.
void write_matrix(std::ostream& out, const SparseMatrix& m);
[[nodiscard]] SparseMatrix read_matrix(std::istream& in);
[[nodiscard]] std::string to_string(const Rational& q);

}  // namespace hcm
