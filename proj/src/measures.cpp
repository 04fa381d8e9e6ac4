#include "ddcor/measures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ddcor/errors.hpp"

namespace ddcor {

std::string method_name(Method m) {
    switch (m) {
        case Method::DDC: return "ddc";
        case Method::Chatterjee: return "chatterjee";
        case Method::DC: return "dc";
        case Method::HSIC: return "hsic";
        case Method::PCor: return "pcor";
    }
    return "ddc";
}

Method method_from_name(const std::string& name) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "ddc") return Method::DDC;
    if (lower == "chatterjee" || lower == "xi") return Method::Chatterjee;
    if (lower == "dc" || lower == "dcor") return Method::DC;
    if (lower == "hsic") return Method::HSIC;
    if (lower == "pcor") return Method::PCor;
    throw config_error("unknown method '" + name +
                       "' (expected one of: ddc, chatterjee, dc, hsic, pcor)");
}

namespace detail {

double pairwise_distance_sum(const RealMatrix& x) {
    const std::size_t n = x.rows();
    if (x.cols() == 1) {
        // Order-statistic form: sum_{i>j} (x_(i) - x_(j)) = sum_i (2i - n - 1) x_(i).
        std::vector<double> sorted(x.data());
        std::sort(sorted.begin(), sorted.end());
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double coeff = 2.0 * static_cast<double>(i + 1) - static_cast<double>(n) - 1.0;
            total += coeff * sorted[i];
        }
        return total;
    }
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto ri = x.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            total += euclidean_distance(ri, x.row(j));
        }
    }
    return total;
}

double adjacent_distance_sum(const RealMatrix& x, const std::vector<std::size_t>& order) {
    double total = 0;
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        total += euclidean_distance(x.row(order[k]), x.row(order[k + 1]));
    }
    return total;
}

double ddc_from_sums(std::size_t n, double adjacent_sum, double pair_sum) {
    if (pair_sum <= 0) return 0.0; // all rows identical
    return 1.0 - static_cast<double>(n) * adjacent_sum / (2.0 * pair_sum);
}

std::vector<double> y_leq_ranks(const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> sorted(y);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = static_cast<double>(
            std::upper_bound(sorted.begin(), sorted.end(), y[i]) - sorted.begin());
    }
    return r;
}

double chatterjee_denominator(const std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> sorted(y);
    std::sort(sorted.begin(), sorted.end());
    double den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double l = static_cast<double>(
            n - (std::lower_bound(sorted.begin(), sorted.end(), y[i]) - sorted.begin()));
        den += l * (static_cast<double>(n) - l);
    }
    return 2.0 * den;
}

CenteredDistanceStats centered_distance_stats(const RealMatrix& x, const RealMatrix& y) {
    const std::size_t n = x.rows();
    CenteredDistanceStats s;
    s.row_sum_x.assign(n, 0.0);
    s.row_sum_y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        const auto yi = y.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = euclidean_distance(xi, x.row(j));
            const double b = euclidean_distance(yi, y.row(j));
            s.row_sum_x[i] += a;
            s.row_sum_x[j] += a;
            s.row_sum_y[i] += b;
            s.row_sum_y[j] += b;
            s.sum_xx += 2.0 * a * a;
            s.sum_yy += 2.0 * b * b;
            s.sum_xy += 2.0 * a * b;
        }
    }
    return s;
}

double centered_product(std::size_t n, const std::vector<double>& row_sum_a,
                        const std::vector<double>& row_sum_b, double sum_ab) {
    // sum_{kl} A_kl B_kl = sum a.b - (2/n) sum_k s^a_k s^b_k + S^a S^b / n^2.
    const double dn = static_cast<double>(n);
    double cross = 0, total_a = 0, total_b = 0;
    for (std::size_t k = 0; k < n; ++k) {
        cross += row_sum_a[k] * row_sum_b[k];
        total_a += row_sum_a[k];
        total_b += row_sum_b[k];
    }
    const double centered = sum_ab - 2.0 / dn * cross + total_a * total_b / (dn * dn);
    return centered / (dn * dn);
}

} // namespace detail

namespace {

void require_rows_match(const RealMatrix& x, const RealMatrix& y, const char* what) {
    if (x.rows() != y.rows()) {
        throw invalid_data_error(std::string(what) + ": x and y row counts differ");
    }
}

} // namespace

double gini_mean_difference(const RealMatrix& x) {
    const std::size_t n = x.rows();
    if (n < 2) throw insufficient_sample_error("gini_mean_difference: need n >= 2");
    require_finite(x, "gini_mean_difference");
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return detail::pairwise_distance_sum(x) / pairs;
}

double ddc(const PairedSample& sample, std::uint64_t tie_seed) {
    const std::size_t n = sample.n();
    if (n < 2) throw insufficient_sample_error("ddc: need n >= 2");
    const auto order = y_order(sample.y, tie_seed);
    const double adjacent = detail::adjacent_distance_sum(sample.x, order);
    const double pair_sum = detail::pairwise_distance_sum(sample.x);
    return detail::ddc_from_sums(n, adjacent, pair_sum);
}

double ddc(const SortedPairedSample& sorted) {
    const std::size_t n = sorted.sample.n();
    if (n < 2) throw insufficient_sample_error("ddc: need n >= 2");
    const double adjacent = detail::adjacent_distance_sum(sorted.sample.x, sorted.permutation);
    const double pair_sum = detail::pairwise_distance_sum(sorted.sample.x);
    return detail::ddc_from_sums(n, adjacent, pair_sum);
}

double chatterjee_xi(const std::vector<double>& x, const std::vector<double>& y,
                     std::uint64_t tie_seed) {
    const std::size_t n = x.size();
    if (y.size() != n) throw invalid_data_error("chatterjee_xi: x and y lengths differ");
    if (n < 2) throw insufficient_sample_error("chatterjee_xi: need n >= 2");
    require_finite(std::span<const double>(x), "chatterjee_xi x");
    require_finite(std::span<const double>(y), "chatterjee_xi y");

    const double den = detail::chatterjee_denominator(y);
    if (den <= 0) throw degenerate_response_error("chatterjee_xi: y is constant");

    const auto order = y_order(x, tie_seed); // sort by x, ties broken at random
    const auto r = detail::y_leq_ranks(y);
    double num = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        num += std::fabs(r[order[k + 1]] - r[order[k]]);
    }
    return 1.0 - static_cast<double>(n) * num / den;
}

double distance_correlation(const RealMatrix& x, const RealMatrix& y) {
    const std::size_t n = x.rows();
    require_rows_match(x, y, "distance_correlation");
    if (n < 2) throw insufficient_sample_error("distance_correlation: need n >= 2");
    require_finite(x, "distance_correlation x");
    require_finite(y, "distance_correlation y");

    const auto s = detail::centered_distance_stats(x, y);
    const double dvar_x = detail::centered_product(n, s.row_sum_x, s.row_sum_x, s.sum_xx);
    const double dvar_y = detail::centered_product(n, s.row_sum_y, s.row_sum_y, s.sum_yy);
    if (dvar_x <= 0 || dvar_y <= 0) return 0.0;
    const double dcov = detail::centered_product(n, s.row_sum_x, s.row_sum_y, s.sum_xy);
    return std::clamp(dcov / std::sqrt(dvar_x * dvar_y), 0.0, 1.0);
}

double hsic(const RealMatrix& x, const RealMatrix& y, double bandwidth) {
    const std::size_t n = x.rows();
    require_rows_match(x, y, "hsic");
    if (bandwidth <= 0 || !std::isfinite(bandwidth)) {
        throw invalid_parameter_error("hsic: bandwidth must be positive");
    }
    if (n < 4) throw insufficient_sample_error("hsic: need n >= 4");
    require_finite(x, "hsic x");
    require_finite(y, "hsic y");

    const double inv_two_h_sq = 1.0 / (2.0 * bandwidth * bandwidth);
    const double dn = static_cast<double>(n);
    std::vector<double> krow(n, 1.0), lrow(n, 1.0); // diagonal k(., .) = 1
    double sum_kl = dn;                             // diagonal K_ii * L_ii
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        const auto yi = y.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = std::exp(-squared_distance(xi, x.row(j)) * inv_two_h_sq);
            const double l = std::exp(-squared_distance(yi, y.row(j)) * inv_two_h_sq);
            krow[i] += k;
            krow[j] += k;
            lrow[i] += l;
            lrow[j] += l;
            sum_kl += 2.0 * k * l;
        }
    }
    double cross = 0, total_k = 0, total_l = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cross += krow[i] * lrow[i];
        total_k += krow[i];
        total_l += lrow[i];
    }
    const double trace = sum_kl - 2.0 / dn * cross + total_k * total_l / (dn * dn);
    return std::max(0.0, trace / (dn * dn));
}

namespace detail {

double pcov_from_sums(std::size_t n, double sum_prod, double cross, double total_u,
                      double total_v) {
    const double dn = static_cast<double>(n);
    const double t1 = sum_prod / (dn * (dn - 1));
    const double t2 = (cross - sum_prod) / (dn * (dn - 1) * (dn - 2));
    const double t3 = (total_u * total_v - 4.0 * cross + 2.0 * sum_prod) /
                      (dn * (dn - 1) * (dn - 2) * (dn - 3));
    return t1 - 2.0 * t2 + t3;
}

} // namespace detail

double projection_correlation(const RealMatrix& x, const RealMatrix& y, double sigma_sq) {
    const std::size_t n = x.rows();
    require_rows_match(x, y, "projection_correlation");
    if (sigma_sq <= 0 || !std::isfinite(sigma_sq)) {
        throw invalid_parameter_error("projection_correlation: sigma_sq must be positive");
    }
    if (n < 4) throw insufficient_sample_error("projection_correlation: need n >= 4");
    require_finite(x, "projection_correlation x");
    require_finite(y, "projection_correlation y");

    std::vector<double> qx(n), qy(n); // sigma^2 + <z, z>
    for (std::size_t i = 0; i < n; ++i) {
        qx[i] = sigma_sq + dot(x.row(i), x.row(i));
        qy[i] = sigma_sq + dot(y.row(i), y.row(i));
    }

    std::vector<double> rx(n, 0.0), ry(n, 0.0); // kernel row sums (zero diagonal)
    double pxx = 0, pyy = 0, pxy = 0;           // sum_{ij} of Au Av products
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        const auto yi = y.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double cx =
                std::clamp((sigma_sq + dot(xi, x.row(j))) / std::sqrt(qx[i] * qx[j]), -1.0, 1.0);
            const double cy =
                std::clamp((sigma_sq + dot(yi, y.row(j))) / std::sqrt(qy[i] * qy[j]), -1.0, 1.0);
            const double ax = std::acos(cx);
            const double ay = std::acos(cy);
            rx[i] += ax;
            rx[j] += ax;
            ry[i] += ay;
            ry[j] += ay;
            pxx += 2.0 * ax * ax;
            pyy += 2.0 * ay * ay;
            pxy += 2.0 * ax * ay;
        }
    }
    double cross_xx = 0, cross_yy = 0, cross_xy = 0, total_x = 0, total_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cross_xx += rx[i] * rx[i];
        cross_yy += ry[i] * ry[i];
        cross_xy += rx[i] * ry[i];
        total_x += rx[i];
        total_y += ry[i];
    }
    const double pcov_xx = detail::pcov_from_sums(n, pxx, cross_xx, total_x, total_x);
    const double pcov_yy = detail::pcov_from_sums(n, pyy, cross_yy, total_y, total_y);
    if (pcov_xx <= 0 || pcov_yy <= 0) return 0.0;
    const double pcov_xy = detail::pcov_from_sums(n, pxy, cross_xy, total_x, total_y);
    return pcov_xy / std::sqrt(pcov_xx * pcov_yy);
}

} // namespace ddcor
