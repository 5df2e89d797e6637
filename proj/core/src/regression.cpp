#include "riskest/regression.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace riskest::stats {
namespace {

constexpr double kRankTolerance = 1e-10;

void require_finite_column(const std::string& name, const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError("column '" + name + "' contains a non-finite value");
        }
    }
}

} // namespace

void DesignMatrix::add_column(std::string name, std::vector<double> values) {
    if (name.empty()) {
        throw ValidationError("design column name must not be empty");
    }
    for (const auto& existing : names_) {
        if (existing == name) {
            throw ValidationError("duplicate design column: " + name);
        }
    }
    if (names_.empty()) {
        if (values.empty()) {
            throw ValidationError("design column '" + name + "' is empty");
        }
        rows_ = values.size();
    } else if (values.size() != rows_) {
        throw ValidationError("design column '" + name + "' has " +
                              std::to_string(values.size()) + " rows, expected " +
                              std::to_string(rows_));
    }
    require_finite_column(name, values);
    names_.push_back(std::move(name));
    columns_.push_back(std::move(values));
}

std::string choose_reference(std::span<const std::string> labels) {
    if (labels.empty()) {
        throw ValidationError("cannot choose a reference level from no labels");
    }
    std::map<std::string, std::size_t> counts;
    for (const auto& label : labels) {
        ++counts[label];
    }
    // std::map iterates lexicographically, so the first maximum wins ties.
    const std::string* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [level, count] : counts) {
        if (count > best_count) {
            best = &level;
            best_count = count;
        }
    }
    return *best;
}

std::vector<DummyColumn> dummy_encode(std::span<const std::string> labels,
                                      const std::string& reference) {
    if (labels.empty()) {
        throw ValidationError("cannot dummy-encode an empty label column");
    }
    std::set<std::string> levels(labels.begin(), labels.end());
    if (levels.find(reference) == levels.end()) {
        throw ValidationError("reference level '" + reference +
                              "' does not occur in the data");
    }
    std::vector<DummyColumn> out;
    for (const auto& level : levels) {
        if (level == reference) {
            continue;
        }
        DummyColumn col;
        col.level = level;
        col.values.reserve(labels.size());
        for (const auto& label : labels) {
            col.values.push_back(label == level ? 1.0 : 0.0);
        }
        out.push_back(std::move(col));
    }
    return out;
}

OlsFit ols(const DesignMatrix& design, std::span<const double> y) {
    // With no columns the fit is intercept-only and the row count comes from y.
    const std::size_t n = design.cols() > 0 ? design.rows() : y.size();
    const std::size_t p = design.cols() + 1; // intercept prepended
    if (y.size() != n) {
        throw ValidationError("response has " + std::to_string(y.size()) +
                              " rows, design has " + std::to_string(n));
    }
    if (n <= p) {
        throw ValidationError("least squares needs more than " + std::to_string(p) +
                              " rows, got " + std::to_string(n));
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw ValidationError("response contains a non-finite value");
        }
    }

    // Column-major working copy, intercept first.
    std::vector<std::vector<double>> a(p, std::vector<double>(n));
    std::vector<std::string> col_names(p);
    col_names[0] = "intercept";
    std::fill(a[0].begin(), a[0].end(), 1.0);
    for (std::size_t j = 0; j < design.cols(); ++j) {
        a[j + 1] = design.column(j);
        col_names[j + 1] = design.names()[j];
    }
    std::vector<double> rhs(y.begin(), y.end());

    auto tail_norm = [&](std::size_t col, std::size_t from) {
        double s = 0.0;
        for (std::size_t i = from; i < n; ++i) {
            s += a[col][i] * a[col][i];
        }
        return std::sqrt(s);
    };

    double max_initial_norm = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        max_initial_norm = std::max(max_initial_norm, tail_norm(j, 0));
    }
    const double tol = kRankTolerance * max_initial_norm;

    // Householder QR with column pivoting. perm[k] is the original index of
    // the column reduced at step k; pivoting stops at the first column whose
    // remaining norm falls under the rank tolerance.
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::vector<double> beta_diag(p, 0.0);
    std::size_t rank = p;

    for (std::size_t k = 0; k < p; ++k) {
        std::size_t best = k;
        double best_norm = tail_norm(perm[k], k);
        for (std::size_t j = k + 1; j < p; ++j) {
            double norm = tail_norm(perm[j], k);
            if (norm > best_norm) {
                best_norm = norm;
                best = j;
            }
        }
        std::swap(perm[k], perm[best]);
        if (best_norm <= tol) {
            rank = k;
            break;
        }

        auto& pivot = a[perm[k]];
        double alpha = (pivot[k] >= 0.0 ? -best_norm : best_norm);
        // Householder vector overwrites the pivot column below the diagonal;
        // v_k = pivot_k - alpha, v_i = pivot_i for i > k.
        double vk = pivot[k] - alpha;
        pivot[k] = vk;
        double vtv = vk * vk;
        for (std::size_t i = k + 1; i < n; ++i) {
            vtv += pivot[i] * pivot[i];
        }
        if (vtv == 0.0) {
            rank = k;
            break;
        }
        auto apply = [&](std::vector<double>& col) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) {
                dot += pivot[i] * col[i];
            }
            double scale = 2.0 * dot / vtv;
            for (std::size_t i = k; i < n; ++i) {
                col[i] -= scale * pivot[i];
            }
        };
        for (std::size_t j = k + 1; j < p; ++j) {
            apply(a[perm[j]]);
        }
        apply(rhs);
        beta_diag[k] = alpha;
        // Restore R's diagonal entry; the Householder vector below it stays.
        // (kept implicitly in beta_diag, pivot[k] still holds v_k)
    }

    if (rank < p) {
        // The unreduced columns are the ones dependent on the reduced set.
        std::vector<std::string> leftover;
        for (std::size_t j = rank; j < p; ++j) {
            leftover.push_back(col_names[perm[j]]);
        }
        std::sort(leftover.begin(), leftover.end());
        std::ostringstream msg;
        msg << "design matrix is rank deficient; collinear column(s):";
        for (const auto& name : leftover) {
            msg << ' ' << name;
        }
        throw ValidationError(msg.str());
    }

    // Back substitution on R (diagonal in beta_diag, strict upper part in the
    // transformed columns above the Householder vectors).
    std::vector<double> coef_permuted(p, 0.0);
    for (std::size_t k = p; k-- > 0;) {
        double s = rhs[k];
        for (std::size_t j = k + 1; j < p; ++j) {
            s -= a[perm[j]][k] * coef_permuted[j];
        }
        coef_permuted[k] = s / beta_diag[k];
    }
    std::vector<double> coef(p, 0.0);
    for (std::size_t k = 0; k < p; ++k) {
        coef[perm[k]] = coef_permuted[k];
    }

    OlsFit fit;
    fit.intercept = coef[0];
    fit.coefficients.reserve(design.cols());
    for (std::size_t j = 0; j < design.cols(); ++j) {
        fit.coefficients.push_back({design.names()[j], coef[j + 1]});
    }
    fit.n = n;
    fit.rank = rank;

    // Residuals and R^2 from the original columns.
    fit.residuals.resize(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = fit.intercept;
        for (std::size_t j = 0; j < design.cols(); ++j) {
            fitted += fit.coefficients[j].value * design.column(j)[i];
        }
        fit.residuals[i] = y[i] - fitted;
        sse += fit.residuals[i] * fit.residuals[i];
    }
    double y_mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sst = 0.0;
    for (double v : y) {
        sst += (v - y_mean) * (v - y_mean);
    }
    if (sst == 0.0) {
        fit.degenerate_target = true;
        fit.r_squared = 1.0;
    } else {
        fit.r_squared = std::clamp(1.0 - sse / sst, 0.0, 1.0);
    }
    return fit;
}

} // namespace riskest::stats
