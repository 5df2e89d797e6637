#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskest/error.hpp"

namespace riskest::stats {

/// Named columns of equal length. Dummy columns hold only 0/1.
class DesignMatrix {
public:
    void add_column(std::string name, std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& column(std::size_t i) const { return columns_[i]; }

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::size_t rows_ = 0;
};

struct DummyColumn {
    std::string level;
    std::vector<double> values; // 0/1 indicator
};

/// One indicator column per non-reference level, levels in lexicographic
/// order. The reference level must occur among the observed labels.
std::vector<DummyColumn> dummy_encode(std::span<const std::string> labels,
                                      const std::string& reference);

/// Most frequent label; ties broken by the lexicographically smallest.
std::string choose_reference(std::span<const std::string> labels);

struct Coefficient {
    std::string name;
    double value = 0.0;
};

struct OlsFit {
    double intercept = 0.0;
    std::vector<Coefficient> coefficients; // design-column order
    std::vector<double> residuals;         // y - fitted, one per row
    double r_squared = 0.0;                // 1 - SSE/SST on the training rows
    std::size_t n = 0;
    std::size_t rank = 0; // including the intercept column
    /// Set when the target has zero variance; r_squared is then reported as 1
    /// for the exact constant fit but carries no information.
    bool degenerate_target = false;
};

/// Ordinary least squares with an implicit intercept, solved by
/// column-pivoted Householder QR. Rank deficiency (relative tolerance 1e-10
/// against the largest column norm) raises an error naming the columns that
/// could not be separated. Requires rows > cols + 1. A design without
/// columns fits the intercept alone (the mean of y).
OlsFit ols(const DesignMatrix& design, std::span<const double> y);

} // namespace riskest::stats
