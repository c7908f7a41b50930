#pragma once

#include <cstdint>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace uat {

/// Immutable compressed-row sparse matrix with canonical (ascending) column
/// order inside each row. Rows are appended once through the Builder; the
/// finished matrix is safe to share across threads.
class SparseMatrix {
public:
    using Entry = std::pair<std::int32_t, double>;

    SparseMatrix() = default;

    class Builder {
    public:
        Builder(std::size_t rows, std::size_t cols);
        /// Entries must be sorted by column and free of duplicates.
        void append_row(std::span<const Entry> entries);
        SparseMatrix finish();

    private:
        std::size_t rows_ = 0, cols_ = 0, next_row_ = 0;
        std::vector<std::int64_t> row_ptr_;
        std::vector<std::int32_t> col_idx_;
        std::vector<double> values_;
    };

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    std::span<const std::int32_t> row_cols(std::size_t row) const;
    std::span<const double> row_values(std::size_t row) const;
    double row_sum(std::size_t row) const;

    /// y = A x. Sizes must match exactly.
    void apply(std::span<const double> x, std::span<double> y) const;
    /// y = A^T v.
    void apply_transpose(std::span<const double> v, std::span<double> y) const;

    std::vector<double> multiply(const std::vector<double>& x) const;
    std::vector<double> multiply_transpose(const std::vector<double>& v) const;

    /// One "row,col,value" line per stored entry, %.12e values, row-major.
    void export_triplets(std::ostream& os) const;

    bool operator==(const SparseMatrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::int64_t> row_ptr_{0};
    std::vector<std::int32_t> col_idx_;
    std::vector<double> values_;
};

}  // namespace uat
