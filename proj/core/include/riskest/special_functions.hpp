#pragma once

namespace riskest::stats {

/// Regularized incomplete beta function I_x(a,b), evaluated by the standard
/// continued fraction with the symmetry switch at x > (a+1)/(a+b+2).
/// Absolute error is within 1e-10 over the tested parameter range.
/// Requires 0 <= x <= 1, a > 0, b > 0.
double reg_inc_beta(double x, double a, double b);

/// Two-sided Student-t tail probability P(|T_df| >= |t|), df >= 1.
double t_pvalue(double t, int df);

/// Upper-tail probability P(F_{df1,df2} >= f), f >= 0.
double f_pvalue(double f, int df1, int df2);

} // namespace riskest::stats
