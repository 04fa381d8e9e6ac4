#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ddcor {

/// Dense row-major matrix of doubles. Rows are observations.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols);
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// n x 1 matrix from a vector of values.
    static RealMatrix column(std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

    std::vector<double> column_values(std::size_t j) const;

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

/// Throws invalid_data_error when any entry is NaN or infinite.
void require_finite(const RealMatrix& x, const char* what);
void require_finite(std::span<const double> v, const char* what);

} // namespace ddcor
