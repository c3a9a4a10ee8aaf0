// qosrec/stats.hpp
//
// Contingency tables and chi-square independence tests, Pearson
// correlation, the Welch t-test, and High/Low rating binarization.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qosrec {

enum class Level { Low, High };

/// Ratings 1..3 are Low, 4..5 are High. Throws std::out_of_range otherwise.
Level binarize(int rating);
std::string_view level_name(Level level);

class ContingencyTable {
public:
    ContingencyTable(std::size_t rows, std::size_t cols);
    ContingencyTable(std::vector<std::vector<std::uint64_t>> counts);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::uint64_t& at(std::size_t r, std::size_t c) { return counts_[r * cols_ + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return counts_[r * cols_ + c]; }
    std::uint64_t total() const;

    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint64_t> counts_;
};

/// Counts pairs of category codes; codes must lie in [0, n_rows) and [0, n_cols).
ContingencyTable cross_tabulate(std::span<const int> row_codes, std::span<const int> col_codes,
                                std::size_t n_rows, std::size_t n_cols);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double log10_p = 0.0;
};

/// Pearson chi-square test of independence. `yates` applies the continuity
/// correction (2x2 tables only). Throws std::invalid_argument for a zero
/// row or column marginal.
ChiSquareResult chi_square(const ContingencyTable& table, bool yates = false);

/// log10 of the chi-square upper tail P(X ≥ statistic) with `dof` degrees
/// of freedom, accurate far below the double underflow limit.
double chi_square_log10_sf(double statistic, double dof);

/// log of the regularized upper incomplete gamma function Q(a, x).
double log_gamma_q(double a, double x);

/// Throws std::invalid_argument for mismatched lengths, n < 2 or zero variance.
double pearson_corr(std::span<const double> x, std::span<const double> y);

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;  // two-sided
};

/// Throws std::invalid_argument if either sample has fewer than two values
/// or both have zero variance.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace qosrec
