#include "uat/sparse_matrix.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "uat/errors.hpp"

namespace uat {

SparseMatrix::Builder::Builder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    row_ptr_.reserve(rows + 1);
    row_ptr_.push_back(0);
}

void SparseMatrix::Builder::append_row(std::span<const Entry> entries) {
    if (next_row_ >= rows_)
        throw ValidationError("sparse builder: more rows appended than declared");
    std::int32_t prev_col = -1;
    for (const auto& [col, value] : entries) {
        if (col < 0 || static_cast<std::size_t>(col) >= cols_)
            throw ValidationError("sparse builder: column index out of range");
        if (col <= prev_col)
            throw ValidationError("sparse builder: row entries must be strictly ascending by column");
        prev_col = col;
        col_idx_.push_back(col);
        values_.push_back(value);
    }
    row_ptr_.push_back(static_cast<std::int64_t>(values_.size()));
    ++next_row_;
}

SparseMatrix SparseMatrix::Builder::finish() {
    if (next_row_ != rows_)
        throw ValidationError("sparse builder: fewer rows appended than declared");
    SparseMatrix m;
    m.rows_ = rows_;
    m.cols_ = cols_;
    m.row_ptr_ = std::move(row_ptr_);
    m.col_idx_ = std::move(col_idx_);
    m.values_ = std::move(values_);
    return m;
}

std::span<const std::int32_t> SparseMatrix::row_cols(std::size_t row) const {
    const auto begin = static_cast<std::size_t>(row_ptr_[row]);
    const auto end = static_cast<std::size_t>(row_ptr_[row + 1]);
    return {col_idx_.data() + begin, end - begin};
}

std::span<const double> SparseMatrix::row_values(std::size_t row) const {
    const auto begin = static_cast<std::size_t>(row_ptr_[row]);
    const auto end = static_cast<std::size_t>(row_ptr_[row + 1]);
    return {values_.data() + begin, end - begin};
}

double SparseMatrix::row_sum(std::size_t row) const {
    double sum = 0.0;
    for (double v : row_values(row)) sum += v;
    return sum;
}

void SparseMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != cols_ || y.size() != rows_)
        throw ValidationError("sparse apply: dimension mismatch");
    for (std::size_t i = 0; i < rows_; ++i) {
        double sum = 0.0;
        const auto begin = static_cast<std::size_t>(row_ptr_[i]);
        const auto end = static_cast<std::size_t>(row_ptr_[i + 1]);
        for (std::size_t k = begin; k < end; ++k)
            sum += values_[k] * x[static_cast<std::size_t>(col_idx_[k])];
        y[i] = sum;
    }
}

void SparseMatrix::apply_transpose(std::span<const double> v, std::span<double> y) const {
    if (v.size() != rows_ || y.size() != cols_)
        throw ValidationError("sparse apply_transpose: dimension mismatch");
    for (std::size_t j = 0; j < cols_; ++j) y[j] = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        const double vi = v[i];
        if (vi == 0.0) continue;
        const auto begin = static_cast<std::size_t>(row_ptr_[i]);
        const auto end = static_cast<std::size_t>(row_ptr_[i + 1]);
        for (std::size_t k = begin; k < end; ++k)
            y[static_cast<std::size_t>(col_idx_[k])] += values_[k] * vi;
    }
}

std::vector<double> SparseMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(rows_);
    apply(x, y);
    return y;
}

std::vector<double> SparseMatrix::multiply_transpose(const std::vector<double>& v) const {
    std::vector<double> y(cols_);
    apply_transpose(v, y);
    return y;
}

void SparseMatrix::export_triplets(std::ostream& os) const {
    char line[96];
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto begin = static_cast<std::size_t>(row_ptr_[i]);
        const auto end = static_cast<std::size_t>(row_ptr_[i + 1]);
        for (std::size_t k = begin; k < end; ++k) {
            std::snprintf(line, sizeof line, "%zu,%d,%.12e\n", i, col_idx_[k], values_[k]);
            os << line;
        }
    }
}

}  // namespace uat
