#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wmd {

/// Row-major fp64 matrix. Public constructors reject non-finite contents.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    DenseMatrix transposed() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// True when shapes match and every entry has the same bit pattern.
bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) noexcept;
bool bitwise_equal(std::span<const double> a, std::span<const double> b) noexcept;

/// Largest |a - b| over all entries; shapes must match.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

} // namespace wmd
