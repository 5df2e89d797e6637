#include "riskest/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "riskest/error.hpp"

namespace riskest::stats {

namespace {

constexpr int kMaxIterations = 300;
constexpr double kConvergence = 1e-12;
constexpr double kTiny = 1e-300;

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for I_x(a,b), modified Lentz form.
double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;

    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;

    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kConvergence)
            return h;
    }
    throw ValidationError("reg_inc_beta: continued fraction did not converge");
}

} // namespace

double reg_inc_beta(double x, double a, double b) {
    if (!(x >= 0.0 && x <= 1.0))
        throw ValidationError("reg_inc_beta: x must be in [0,1], got " + std::to_string(x));
    if (!(a > 0.0) || !(b > 0.0))
        throw ValidationError("reg_inc_beta: a and b must be positive");
    if (x == 0.0)
        return 0.0;
    if (x == 1.0)
        return 1.0;

    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    double result;
    if (x <= (a + 1.0) / (a + b + 2.0))
        result = front * beta_cf(a, b, x) / a;
    else
        result = 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
    return std::clamp(result, 0.0, 1.0);
}

double t_pvalue(double t, int df) {
    if (df < 1)
        throw ValidationError("t_pvalue: df must be at least 1");
    if (!std::isfinite(t))
        throw ValidationError("t_pvalue: statistic must be finite");
    const double nu = static_cast<double>(df);
    return reg_inc_beta(nu / (nu + t * t), nu / 2.0, 0.5);
}

double f_pvalue(double f, int df1, int df2) {
    if (df1 < 1 || df2 < 1)
        throw ValidationError("f_pvalue: degrees of freedom must be at least 1");
    if (std::isnan(f) || f < 0.0)
        throw ValidationError("f_pvalue: statistic must be nonnegative");
    if (std::isinf(f))
        return 0.0;
    const double nu1 = static_cast<double>(df1);
    const double nu2 = static_cast<double>(df2);
    return reg_inc_beta(nu2 / (nu2 + nu1 * f), nu2 / 2.0, nu1 / 2.0);
}

} // namespace riskest::stats
