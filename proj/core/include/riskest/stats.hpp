#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "riskest/error.hpp"
#include "riskest/special_functions.hpp"

namespace riskest::stats {

/// Outcome of a significance test. Pearson fills statistic = r with
/// df1 = n - 2 (df2 unused, 0); ANOVA fills statistic = F with
/// df1 = groups - 1 and df2 = N - groups.
struct TestResult {
    double statistic = 0.0;
    int df1 = 0;
    int df2 = 0;
    double p_value = 1.0;
    /// Set when within-group variance is zero but group means differ; the
    /// statistic is +infinity and p is 0. Callers should treat the driver as
    /// maximally significant but degenerate.
    bool infinite_statistic = false;
};

/// Samples keyed by category label.
using GroupedSample = std::map<std::string, std::vector<double>>;

/// Pearson correlation of two equal-length samples (n >= 3) with a two-sided
/// significance from t = r * sqrt((n-2)/(1-r^2)), df = n - 2.
/// Throws on length mismatch or a constant sample.
TestResult pearson(std::span<const double> x, std::span<const double> y);

/// One-way ANOVA: F = MSB/MSW with df (g-1, N-g). Requires at least two
/// non-empty groups and N >= g + 1.
TestResult one_way_anova(const GroupedSample& groups);

} // namespace riskest::stats
