#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "riskest/error.hpp"
#include "riskest/regression.hpp"
#include "riskest/rng.hpp"

using namespace riskest;
using riskest::stats::DesignMatrix;
using riskest::stats::choose_reference;
using riskest::stats::dummy_encode;
using riskest::stats::ols;

namespace {

DesignMatrix single_column(std::vector<double> values) {
    DesignMatrix design;
    design.add_column("x", std::move(values));
    return design;
}

} // namespace

TEST_CASE("reference level is the most frequent label") {
    std::vector<std::string> labels = {"pc", "mainframe", "pc", "midrange", "pc"};
    CHECK(choose_reference(labels) == "pc");
}

TEST_CASE("reference ties resolve to the lexicographically smallest") {
    std::vector<std::string> labels = {"web", "business", "web", "business"};
    CHECK(choose_reference(labels) == "business");
    std::vector<std::string> singles = {"z", "m", "a"};
    CHECK(choose_reference(singles) == "a");
    CHECK_THROWS_AS(choose_reference({}), ValidationError);
}

TEST_CASE("dummy encoding yields one indicator per non-reference level") {
    std::vector<std::string> labels = {"b", "a", "c", "b", "a", "b"};
    auto dummies = dummy_encode(labels, "b");
    REQUIRE(dummies.size() == 2);
    CHECK(dummies[0].level == "a");
    CHECK(dummies[1].level == "c");
    CHECK(dummies[0].values == std::vector<double>{0, 1, 0, 0, 1, 0});
    CHECK(dummies[1].values == std::vector<double>{0, 0, 1, 0, 0, 0});
}

TEST_CASE("dummy encoding of a two-level factor is a single indicator") {
    std::vector<std::string> labels = {"yes", "no", "yes", "yes"};
    auto dummies = dummy_encode(labels, "no");
    REQUIRE(dummies.size() == 1);
    CHECK(dummies[0].level == "yes");
    CHECK(dummies[0].values == std::vector<double>{1, 0, 1, 1});
}

TEST_CASE("dummy encoding validates the reference level") {
    std::vector<std::string> labels = {"x", "y"};
    CHECK_THROWS_AS(dummy_encode(labels, "z"), ValidationError);
    CHECK_THROWS_AS(dummy_encode({}, "x"), ValidationError);
}

TEST_CASE("design matrix enforces consistent shape") {
    DesignMatrix design;
    design.add_column("a", {1, 2, 3});
    CHECK_THROWS_AS(design.add_column("b", {1, 2}), ValidationError);
    CHECK_THROWS_AS(design.add_column("a", {4, 5, 6}), ValidationError);
    CHECK_THROWS_AS(design.add_column("", {4, 5, 6}), ValidationError);
    CHECK_THROWS_AS(design.add_column("c", {1, std::nan(""), 3}),
                    ValidationError);
    design.add_column("b", {4, 5, 6});
    CHECK(design.rows() == 3);
    CHECK(design.cols() == 2);
}

TEST_CASE("least squares recovers an exact linear law") {
    DesignMatrix design = single_column({1, 2, 3, 4});
    std::vector<double> y = {3, 5, 7, 9}; // 1 + 2x
    auto fit = ols(design, y);
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(fit.coefficients.size() == 1);
    CHECK(fit.coefficients[0].name == "x");
    CHECK(fit.coefficients[0].value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.rank == 2);
    CHECK(fit.n == 4);
    for (double r : fit.residuals)
        CHECK(std::abs(r) < 1e-10);
}

TEST_CASE("least squares matches hand-solved normal equations") {
    // X = (1,2,3), y = (1,2,2): slope = cov/var = 1/2, intercept = 2/3,
    // SSE = 1/6, SST = 2/3, so r^2 = 3/4.
    DesignMatrix design = single_column({1, 2, 3});
    std::vector<double> y = {1, 2, 2};
    auto fit = ols(design, y);
    CHECK(fit.intercept == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(fit.coefficients[0].value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(0.75).epsilon(1e-12));
    REQUIRE(fit.residuals.size() == 3);
    CHECK(fit.residuals[0] == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
    CHECK(fit.residuals[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(fit.residuals[2] == doctest::Approx(-1.0 / 6.0).epsilon(1e-10));
}

TEST_CASE("least squares recovers multi-column coefficients exactly") {
    rng::Engine engine(7);
    DesignMatrix design;
    std::vector<double> a, b, c;
    for (int i = 0; i < 40; ++i) {
        a.push_back(engine.uniform01() * 10.0);
        b.push_back(engine.normal(0.0, 3.0));
        c.push_back(engine.uniform01() - 0.5);
    }
    design.add_column("a", a);
    design.add_column("b", b);
    design.add_column("c", c);
    std::vector<double> y;
    for (int i = 0; i < 40; ++i)
        y.push_back(4.0 - 1.5 * a[i] + 0.25 * b[i] + 11.0 * c[i]);
    auto fit = ols(design, y);
    CHECK(fit.intercept == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(fit.coefficients[0].value == doctest::Approx(-1.5).epsilon(1e-10));
    CHECK(fit.coefficients[1].value == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(fit.coefficients[2].value == doctest::Approx(11.0).epsilon(1e-10));
    CHECK(fit.rank == 4);
}

TEST_CASE("residuals are orthogonal to the design columns") {
    rng::Engine engine(99);
    DesignMatrix design;
    std::vector<double> a, b;
    std::vector<double> y;
    for (int i = 0; i < 25; ++i) {
        a.push_back(engine.normal(0.0, 2.0));
        b.push_back(engine.uniform01() * 5.0);
        y.push_back(1.0 + a.back() - 2.0 * b.back() + engine.normal(0.0, 1.0));
    }
    design.add_column("a", a);
    design.add_column("b", b);
    auto fit = ols(design, y);

    auto dot = [&](const std::vector<double>& u) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            s += u[i] * fit.residuals[i];
        return s;
    };
    auto norm = [](const std::vector<double>& u) {
        double s = 0.0;
        for (double v : u)
            s += v * v;
        return std::sqrt(s);
    };
    double rn = norm(fit.residuals);
    std::vector<double> ones(25, 1.0);
    CHECK(std::abs(dot(ones)) <= 1e-8 * norm(ones) * rn + 1e-12);
    CHECK(std::abs(dot(a)) <= 1e-8 * norm(a) * rn + 1e-12);
    CHECK(std::abs(dot(b)) <= 1e-8 * norm(b) * rn + 1e-12);
}

TEST_CASE("duplicated columns are reported as rank deficiency") {
    DesignMatrix design;
    design.add_column("fs", {1, 2, 3, 4, 5});
    design.add_column("fs_copy", {1, 2, 3, 4, 5});
    std::vector<double> y = {1, 2, 3, 4, 5};
    CHECK_THROWS_WITH_AS(
        ols(design, y),
        "design matrix is rank deficient; collinear column(s): fs_copy",
        ValidationError);
}

TEST_CASE("a column equal to a scaled copy plus noise below tolerance fails") {
    DesignMatrix design;
    std::vector<double> base = {1, 2, 3, 4, 5, 6};
    std::vector<double> nearly = base;
    for (auto& v : nearly)
        v = 2.0 * v + 1e-15;
    design.add_column("a", base);
    design.add_column("b", nearly);
    std::vector<double> y = {2, 4, 5, 7, 9, 12};
    CHECK_THROWS_AS(ols(design, y), ValidationError);
}

TEST_CASE("constant column collides with the implicit intercept") {
    DesignMatrix design;
    design.add_column("flat", {3, 3, 3, 3});
    std::vector<double> y = {1, 2, 3, 4};
    CHECK_THROWS_AS(ols(design, y), ValidationError);
}

TEST_CASE("constant target marks the fit degenerate") {
    DesignMatrix design = single_column({1, 2, 3, 4});
    std::vector<double> y = {5, 5, 5, 5};
    auto fit = ols(design, y);
    CHECK(fit.degenerate_target);
    CHECK(fit.r_squared == 1.0);
    CHECK(fit.intercept == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(fit.coefficients[0].value == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("least squares requires more rows than parameters") {
    DesignMatrix design = single_column({1, 2});
    std::vector<double> y = {1, 2};
    CHECK_THROWS_AS(ols(design, y), ValidationError);

    DesignMatrix wide;
    wide.add_column("a", {1, 2, 3});
    wide.add_column("b", {2, 1, 5});
    std::vector<double> y3 = {1, 2, 3};
    CHECK_THROWS_AS(ols(wide, y3), ValidationError);

    // A column-free design fits the intercept alone: the mean of y.
    DesignMatrix empty;
    auto mean_fit = ols(empty, y3);
    CHECK(mean_fit.intercept == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mean_fit.coefficients.empty());
    std::vector<double> y1 = {1.0};
    CHECK_THROWS_AS(ols(empty, y1), ValidationError);

    DesignMatrix mismatch = single_column({1, 2, 3, 4});
    std::vector<double> y_short = {1, 2, 3};
    CHECK_THROWS_AS(ols(mismatch, y_short), ValidationError);
}

TEST_CASE("fit is reproducible for permuted column order") {
    DesignMatrix first;
    first.add_column("a", {1, 2, 3, 4, 7});
    first.add_column("b", {5, 1, 2, 2, 6});
    DesignMatrix second;
    second.add_column("b", {5, 1, 2, 2, 6});
    second.add_column("a", {1, 2, 3, 4, 7});
    std::vector<double> y = {3, 1, 4, 1, 5};

    auto fa = ols(first, y);
    auto fb = ols(second, y);
    CHECK(fa.intercept == doctest::Approx(fb.intercept).epsilon(1e-10));
    CHECK(fa.coefficients[0].value ==
          doctest::Approx(fb.coefficients[1].value).epsilon(1e-10));
    CHECK(fa.coefficients[1].value ==
          doctest::Approx(fb.coefficients[0].value).epsilon(1e-10));
    CHECK(fa.r_squared == doctest::Approx(fb.r_squared).epsilon(1e-10));
}
