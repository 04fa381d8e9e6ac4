#include "ddcor/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "ddcor/errors.hpp"

namespace ddcor {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw invalid_data_error("matrix data size does not match rows * cols");
    }
}

RealMatrix RealMatrix::column(std::vector<double> values) {
    const std::size_t n = values.size();
    return RealMatrix(n, 1, std::move(values));
}

std::vector<double> RealMatrix::column_values(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

bool RealMatrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() == 1) return std::fabs(a[0] - b[0]);
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

void require_finite(const RealMatrix& x, const char* what) {
    if (!x.all_finite()) {
        throw invalid_data_error(std::string(what) + ": non-finite entry");
    }
}

void require_finite(std::span<const double> v, const char* what) {
    for (double e : v) {
        if (!std::isfinite(e)) {
            throw invalid_data_error(std::string(what) + ": non-finite entry");
        }
    }
}

} // namespace ddcor
