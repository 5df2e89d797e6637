#include "riskest/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskest::stats {

namespace {

bool is_constant(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *lo == *hi;
}

double mean(std::span<const double> values) {
    double sum = 0.0;
    for (double v : values)
        sum += v;
    return sum / static_cast<double>(values.size());
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v))
            throw ValidationError(std::string(what) + " contains a non-finite value");
}

} // namespace

TestResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("pearson: sample length mismatch (" +
                              std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 3)
        throw ValidationError("pearson: need at least 3 observations, got " + std::to_string(n));
    require_finite(x, "pearson: x");
    require_finite(y, "pearson: y");
    if (is_constant(x) || is_constant(y))
        throw ValidationError("pearson: constant sample");

    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

    TestResult result;
    result.statistic = r;
    result.df1 = static_cast<int>(n) - 2;
    result.df2 = 0;
    const double denom = 1.0 - r * r;
    if (denom <= 0.0) {
        result.p_value = 0.0;
    } else {
        const double t = r * std::sqrt(static_cast<double>(n - 2) / denom);
        result.p_value = t_pvalue(t, result.df1);
    }
    return result;
}

TestResult one_way_anova(const GroupedSample& groups) {
    if (groups.size() < 2)
        throw ValidationError("one_way_anova: need at least two groups");

    std::size_t total_n = 0;
    double grand_sum = 0.0;
    for (const auto& [label, values] : groups) {
        if (values.empty())
            throw ValidationError("one_way_anova: group '" + label + "' is empty");
        require_finite(values, "one_way_anova: group");
        total_n += values.size();
        for (double v : values)
            grand_sum += v;
    }
    const std::size_t g = groups.size();
    if (total_n < g + 1)
        throw ValidationError("one_way_anova: need at least groups + 1 observations in total");

    const double grand_mean = grand_sum / static_cast<double>(total_n);
    double ss_between = 0.0;
    double ss_within = 0.0;
    bool all_groups_constant = true;
    for (const auto& [label, values] : groups) {
        const double gm = mean(values);
        const double dg = gm - grand_mean;
        ss_between += static_cast<double>(values.size()) * dg * dg;
        for (double v : values)
            ss_within += (v - gm) * (v - gm);
        if (!is_constant(values))
            all_groups_constant = false;
    }

    TestResult result;
    result.df1 = static_cast<int>(g) - 1;
    result.df2 = static_cast<int>(total_n - g);

    if (all_groups_constant) {
        // Zero within-group variance. Differing means make F unbounded;
        // identical means (constant data) are reported as no effect.
        if (ss_between > 0.0) {
            result.statistic = std::numeric_limits<double>::infinity();
            result.p_value = 0.0;
            result.infinite_statistic = true;
        } else {
            result.statistic = 0.0;
            result.p_value = 1.0;
        }
        return result;
    }

    const double msb = ss_between / result.df1;
    const double msw = ss_within / result.df2;
    result.statistic = std::max(msb / msw, 0.0);
    result.p_value = f_pvalue(result.statistic, result.df1, result.df2);
    return result;
}

} // namespace riskest::stats
