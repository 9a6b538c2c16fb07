#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "few/errors.hpp"

namespace few {

// Dense column-major matrix of doubles. Column-major because almost every hot
// loop in this library walks one feature column over all samples.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_columns(std::size_t rows, std::vector<std::vector<double>> columns) {
        Matrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows) throw ShapeError("column length mismatch");
            std::copy(columns[j].begin(), columns[j].end(), m.col(j).begin());
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    std::span<double> flat() { return {data_.data(), data_.size()}; }
    std::span<const double> flat() const { return {data_.data(), data_.size()}; }

    std::vector<double> row(std::size_t i) const {
        std::vector<double> r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    Matrix select_rows(std::span<const std::size_t> idx) const {
        Matrix out(idx.size(), cols_);
        for (std::size_t j = 0; j < cols_; ++j) {
            auto src = col(j);
            auto dst = out.col(j);
            for (std::size_t i = 0; i < idx.size(); ++i) dst[i] = src[idx[i]];
        }
        return out;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace few
