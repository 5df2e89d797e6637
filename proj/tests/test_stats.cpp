#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "riskest/error.hpp"
#include "riskest/stats.hpp"

using namespace riskest;
using riskest::stats::GroupedSample;
using riskest::stats::one_way_anova;
using riskest::stats::pearson;

TEST_CASE("pearson reproduces a hand-computed correlation") {
    // x deviations (-1,0,1), y deviations (1,-1,0): sxy=-1, sxx=syy=2,
    // so r = -1/2 and t = -1/sqrt(3) with df 1, giving p = 2/3 exactly.
    std::vector<double> x = {1, 2, 3};
    std::vector<double> y = {6, 4, 5};
    auto result = pearson(x, y);
    CHECK(result.statistic == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(result.df1 == 1);
    CHECK(result.p_value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("pearson agrees with tail-probability references") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
    std::vector<double> y = {2.1, 2.9, 4.4, 3.9, 6.2, 5.8, 7.4, 8.3};
    auto result = pearson(x, y);
    REQUIRE(result.df1 == 6);
    double r = result.statistic;
    double t = r * std::sqrt(6.0 / (1.0 - r * r));
    CHECK(result.p_value ==
          doctest::Approx(oracles::t_pvalue_from_density(t, 6)).epsilon(1e-8));
}

TEST_CASE("perfectly collinear samples give unit correlation and zero p") {
    std::vector<double> x = {1, 2, 3, 4};
    std::vector<double> y = {2, 4, 6, 8};
    auto result = pearson(x, y);
    CHECK(result.statistic == 1.0);
    CHECK(result.p_value == 0.0);

    std::vector<double> neg = {8, 6, 4, 2};
    auto flipped = pearson(x, neg);
    CHECK(flipped.statistic == -1.0);
    CHECK(flipped.p_value == 0.0);
}

TEST_CASE("pearson is invariant under positive affine maps") {
    std::vector<double> x = {0.4, 1.9, 2.2, 3.3, 5.1};
    std::vector<double> y = {1.0, 0.7, 2.6, 2.9, 4.0};
    auto base = pearson(x, y);

    std::vector<double> scaled;
    for (double v : x)
        scaled.push_back(2.5 * v + 7.0);
    auto mapped = pearson(scaled, y);
    CHECK(mapped.statistic == doctest::Approx(base.statistic).epsilon(1e-12));
    CHECK(mapped.p_value == doctest::Approx(base.p_value).epsilon(1e-12));

    std::vector<double> negated;
    for (double v : x)
        negated.push_back(-v);
    auto flipped = pearson(negated, y);
    CHECK(flipped.statistic == doctest::Approx(-base.statistic).epsilon(1e-12));
    CHECK(flipped.p_value == doctest::Approx(base.p_value).epsilon(1e-12));
}

TEST_CASE("pearson rejects unusable samples") {
    std::vector<double> x = {1, 2, 3};
    std::vector<double> longer = {1, 2, 3, 4};
    std::vector<double> constant = {5, 5, 5};
    std::vector<double> y = {1, 4, 2};
    std::vector<double> pair_x = {1, 2};
    std::vector<double> pair_y = {3, 4};

    CHECK_THROWS_AS(pearson(x, longer), ValidationError);
    CHECK_THROWS_AS(pearson(pair_x, pair_y), ValidationError);
    CHECK_THROWS_AS(pearson(constant, y), ValidationError);
    CHECK_THROWS_AS(pearson(y, constant), ValidationError);

    std::vector<double> with_nan = {1, std::nan(""), 3};
    CHECK_THROWS_AS(pearson(with_nan, y), ValidationError);
}

TEST_CASE("anova reproduces a hand-computed two-group design") {
    // Means 2 and 3 around grand mean 2.5: SSB = 1.5, SSW = 4,
    // df (1,4), so F = (1.5/1)/(4/4) = 1.5.
    GroupedSample groups = {{"a", {1, 2, 3}}, {"b", {2, 3, 4}}};
    auto result = one_way_anova(groups);
    CHECK(result.statistic == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(result.df1 == 1);
    CHECK(result.df2 == 4);
    CHECK_FALSE(result.infinite_statistic);
    CHECK(result.p_value ==
          doctest::Approx(oracles::f_pvalue(1.5, 1, 4)).epsilon(1e-9));
}

TEST_CASE("anova reproduces a hand-computed three-group design") {
    // Group means 2, 3, 7 with grand mean 4: SSB = 42, SSW = 6,
    // df (2,6), F = 21/1 = 21.
    GroupedSample groups = {
        {"low", {1, 2, 3}}, {"mid", {2, 3, 4}}, {"high", {6, 7, 8}}};
    auto result = one_way_anova(groups);
    CHECK(result.statistic == doctest::Approx(21.0).epsilon(1e-12));
    CHECK(result.df1 == 2);
    CHECK(result.df2 == 6);
    CHECK(result.p_value ==
          doctest::Approx(oracles::f_pvalue(21.0, 2, 6)).epsilon(1e-9));
}

TEST_CASE("anova with identical group distributions reports no effect") {
    GroupedSample groups = {{"a", {1, 2, 3}}, {"b", {1, 2, 3}}};
    auto result = one_way_anova(groups);
    CHECK(result.statistic == 0.0);
    CHECK(result.p_value == 1.0);
    CHECK_FALSE(result.infinite_statistic);
}

TEST_CASE("anova flags zero within-group variance with distinct means") {
    GroupedSample groups = {{"a", {1, 1, 1}}, {"b", {2, 2}}};
    auto result = one_way_anova(groups);
    CHECK(std::isinf(result.statistic));
    CHECK(result.p_value == 0.0);
    CHECK(result.infinite_statistic);

    GroupedSample flat = {{"a", {3, 3}}, {"b", {3, 3}}};
    auto no_effect = one_way_anova(flat);
    CHECK(no_effect.statistic == 0.0);
    CHECK(no_effect.p_value == 1.0);
    CHECK_FALSE(no_effect.infinite_statistic);
}

TEST_CASE("anova is invariant under renaming the groups") {
    GroupedSample first = {{"alpha", {1, 2, 3, 4}}, {"beta", {2, 4, 6}}};
    GroupedSample second = {{"zz", {1, 2, 3, 4}}, {"aa", {2, 4, 6}}};
    auto a = one_way_anova(first);
    auto b = one_way_anova(second);
    CHECK(a.statistic == doctest::Approx(b.statistic).epsilon(1e-15));
    CHECK(a.p_value == doctest::Approx(b.p_value).epsilon(1e-15));
    CHECK(a.df1 == b.df1);
    CHECK(a.df2 == b.df2);
}

TEST_CASE("anova rejects unusable groupings") {
    CHECK_THROWS_AS(one_way_anova({{"only", {1, 2, 3}}}), ValidationError);
    CHECK_THROWS_AS(one_way_anova({{"a", {1, 2}}, {"b", {}}}), ValidationError);
    // Two singleton groups leave no residual degrees of freedom.
    CHECK_THROWS_AS(one_way_anova({{"a", {1}}, {"b", {2}}}), ValidationError);

    GroupedSample with_nan = {{"a", {1, std::nan("")}}, {"b", {2, 3}}};
    CHECK_THROWS_AS(one_way_anova(with_nan), ValidationError);
}
