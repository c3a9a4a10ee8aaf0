// stats.cpp

#include "qosrec/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qosrec {

Level binarize(int rating) {
    if (rating < 1 || rating > 5)
        throw std::out_of_range("rating " + std::to_string(rating) + " outside 1..5");
    return rating <= 3 ? Level::Low : Level::High;
}

std::string_view level_name(Level level) { return level == Level::Low ? "Low" : "High"; }

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), counts_(rows * cols, 0) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("contingency table must be at least 2x2");
}

ContingencyTable::ContingencyTable(std::vector<std::vector<std::uint64_t>> counts)
    : ContingencyTable(counts.size(), counts.empty() ? 0 : counts.front().size()) {
    for (std::size_t r = 0; r < rows_; ++r) {
        if (counts[r].size() != cols_) throw std::invalid_argument("ragged contingency table");
        for (std::size_t c = 0; c < cols_; ++c) at(r, c) = counts[r][c];
    }
}

std::uint64_t ContingencyTable::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ContingencyTable cross_tabulate(std::span<const int> row_codes, std::span<const int> col_codes,
                                std::size_t n_rows, std::size_t n_cols) {
    if (row_codes.size() != col_codes.size())
        throw std::invalid_argument("cross_tabulate: length mismatch");
    ContingencyTable t(n_rows, n_cols);
    for (std::size_t i = 0; i < row_codes.size(); ++i) {
        const int r = row_codes[i], c = col_codes[i];
        if (r < 0 || c < 0 || static_cast<std::size_t>(r) >= n_rows || static_cast<std::size_t>(c) >= n_cols)
            throw std::out_of_range("cross_tabulate: category code out of range");
        ++t.at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    }
    return t;
}

ChiSquareResult chi_square(const ContingencyTable& table, bool yates) {
    const std::size_t R = table.rows(), C = table.cols();
    std::vector<double> row_sum(R, 0.0), col_sum(C, 0.0);
    double n = 0.0;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            const double o = static_cast<double>(table.at(r, c));
            row_sum[r] += o;
            col_sum[c] += o;
            n += o;
        }
    for (double s : row_sum)
        if (s == 0.0) throw std::invalid_argument("chi_square: zero row marginal");
    for (double s : col_sum)
        if (s == 0.0) throw std::invalid_argument("chi_square: zero column marginal");
    if (yates && (R != 2 || C != 2)) throw std::invalid_argument("Yates correction applies to 2x2 tables");

    ChiSquareResult res;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            const double e = row_sum[r] * col_sum[c] / n;
            double diff = std::abs(static_cast<double>(table.at(r, c)) - e);
            if (yates) diff = std::max(0.0, diff - 0.5);
            res.statistic += diff * diff / e;
        }
    res.dof = static_cast<int>((R - 1) * (C - 1));
    res.log10_p = chi_square_log10_sf(res.statistic, res.dof);
    return res;
}

double log_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("log_gamma_q: a must be positive");
    if (x <= 0.0) return 0.0;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);
    constexpr double eps = 1e-16;
    constexpr int max_iter = 10000;

    if (x < a + 1.0) {
        // Series for the lower tail P, then Q = 1 - P.
        double term = 1.0 / a, sum = term;
        for (int n = 1; n < max_iter; ++n) {
            term *= x / (a + n);
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        return std::log1p(-std::exp(log_prefix) * sum);
    }

    // Continued fraction for Q (modified Lentz).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return log_prefix + std::log(h);
}

double chi_square_log10_sf(double statistic, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi-square needs positive degrees of freedom");
    return log_gamma_q(0.5 * dof, 0.5 * statistic) / std::log(10.0);
}

double pearson_corr(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson_corr: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("pearson_corr: need at least two points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson_corr: zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

struct Moments {
    double n, mean, var;
};

Moments moments(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {n, mean, ss / (n - 1.0)};
}

}  // namespace

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t_test: need two values per sample");
    const Moments ma = moments(a), mb = moments(b);
    const double va = ma.var / ma.n, vb = mb.var / mb.n;
    if (va + vb == 0.0) throw std::invalid_argument("welch_t_test: both samples have zero variance");

    WelchResult r;
    r.t = (ma.mean - mb.mean) / std::sqrt(va + vb);
    r.dof = (va + vb) * (va + vb) /
            (va * va / (ma.n - 1.0) + vb * vb / (mb.n - 1.0));
    if (r.t == 0.0) {
        r.p = 1.0;
    } else {
        boost::math::students_t dist(r.dof);
        r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
    }
    return r;
}

}  // namespace qosrec
