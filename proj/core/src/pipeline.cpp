#include "riskest/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "riskest/error.hpp"
#include "riskest/rng.hpp"
#include "riskest/stats.hpp"

namespace riskest::pipeline {
namespace {

std::string fmt_short(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string record_label(const ProjectRecord& record) {
    return record.project_id.empty() ? std::string("record")
                                     : "record '" + record.project_id + "'";
}

bool exactly_constant(std::span<const double> values) {
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *lo == *hi;
}

double quantile_linear(const std::vector<double>& sorted, double p) {
    // Linear interpolation of order statistics: h = (n-1)p.
    const std::size_t n = sorted.size();
    double h = static_cast<double>(n - 1) * p;
    auto i = static_cast<std::size_t>(h);
    if (i + 1 >= n) {
        return sorted.back();
    }
    double frac = h - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

void check_driver_specs(std::span<const DriverSpec> drivers) {
    if (drivers.empty()) {
        throw ValidationError("driver list is empty");
    }
    std::set<std::string> seen;
    for (const auto& spec : drivers) {
        if (spec.name == "pre") {
            throw ValidationError(
                "driver list must not name pre; it is appended for EEMR models");
        }
        if (!seen.insert(spec.name).second) {
            throw ValidationError("duplicate driver: " + spec.name);
        }
        if (spec.scale == Scale::ratio) {
            if (!is_numeric_column(spec.name) || spec.name == "effort") {
                throw ValidationError("not a ratio driver column: " + spec.name);
            }
        } else if (!is_category_column(spec.name)) {
            throw ValidationError("not a nominal driver column: " + spec.name);
        }
    }
}

const stats::Coefficient& find_coefficient(const FittedModel& model,
                                           const std::string& name) {
    for (const auto& coef : model.coefficients) {
        if (coef.name == name) {
            return coef;
        }
    }
    throw ValidationError("model has no coefficient named '" + name + "'");
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string digest_hex(const std::string& text) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a(text);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

MetricSummary mean_summary(const std::vector<FoldOutcome>& folds, bool test_side) {
    MetricSummary m;
    for (const auto& outcome : folds) {
        const AccuracyReport& r = test_side ? outcome.test : outcome.train;
        m.mmre += r.mmre;
        m.pred_25 += r.pred_25;
        m.r_squared += r.r_squared;
    }
    auto n = static_cast<double>(folds.size());
    m.mmre /= n;
    m.pred_25 /= n;
    m.r_squared /= n;
    return m;
}

} // namespace

std::vector<DriverSpec> standard_driver_specs(const Dataset& dataset) {
    std::vector<DriverSpec> specs = {
        {"fs", Scale::ratio},    {"mts", Scale::ratio},  {"dt", Scale::nominal},
        {"dp", Scale::nominal},  {"lt", Scale::nominal}, {"um", Scale::nominal},
        {"ma", Scale::nominal},  {"at", Scale::nominal},
    };
    bool has_pre = std::any_of(dataset.records.begin(), dataset.records.end(),
                               [](const ProjectRecord& r) { return r.pre.has_value(); });
    if (has_pre) {
        specs.push_back({"pre", Scale::ratio});
    }
    return specs;
}

SelectionReport select_drivers(const Dataset& dataset,
                               std::span<const DriverSpec> specs,
                               const SelectionConfig& config) {
    if (dataset.records.empty()) {
        throw ValidationError("dataset is empty");
    }
    if (specs.empty()) {
        throw ValidationError("no candidate drivers given");
    }
    if (!(config.r_threshold >= 0.0 && config.r_threshold <= 1.0)) {
        throw ValidationError("r_threshold must be in [0,1]");
    }
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw ValidationError("alpha must be in (0,1)");
    }
    std::set<std::string> names;
    for (const auto& spec : specs) {
        bool numeric_ok = spec.scale == Scale::ratio &&
                          is_numeric_column(spec.name) && spec.name != "effort";
        bool nominal_ok = spec.scale == Scale::nominal && is_category_column(spec.name);
        if (!numeric_ok && !nominal_ok) {
            throw ValidationError("unknown or mis-scaled driver: " + spec.name);
        }
        if (!names.insert(spec.name).second) {
            throw ValidationError("duplicate driver spec: " + spec.name);
        }
    }
    std::set<std::string> include(config.force_include.begin(), config.force_include.end());
    std::set<std::string> exclude(config.force_exclude.begin(), config.force_exclude.end());
    for (const auto& name : include) {
        if (names.find(name) == names.end()) {
            throw ValidationError("force_include names unknown driver: " + name);
        }
        if (exclude.find(name) != exclude.end()) {
            throw ValidationError("driver forced both ways: " + name);
        }
    }
    for (const auto& name : exclude) {
        if (names.find(name) == names.end()) {
            throw ValidationError("force_exclude names unknown driver: " + name);
        }
    }

    SelectionReport report;
    for (const auto& spec : specs) {
        SelectionEntry entry;
        entry.name = spec.name;
        entry.scale = spec.scale;
        entry.test = spec.scale == Scale::ratio ? "pearson" : "anova";

        if (spec.scale == Scale::ratio) {
            std::vector<double> xs;
            std::vector<double> ys;
            for (const auto& record : dataset.records) {
                auto x = numeric_value(record, spec.name);
                if (x && record.effort) {
                    xs.push_back(*x);
                    ys.push_back(*record.effort);
                }
            }
            entry.observations = xs.size();
            if (xs.size() < 3) {
                entry.reason = "insufficient data (n=" + std::to_string(xs.size()) + ")";
            } else if (exactly_constant(xs)) {
                entry.reason = "zero variance";
            } else if (exactly_constant(ys)) {
                entry.reason = "zero variance in effort";
            } else {
                auto result = stats::pearson(xs, ys);
                entry.statistic = result.statistic;
                entry.selected = std::abs(result.statistic) >= config.r_threshold;
                entry.reason = entry.selected
                                   ? "|r| >= " + fmt_short(config.r_threshold)
                                   : "|r| < " + fmt_short(config.r_threshold);
            }
        } else {
            stats::GroupedSample groups;
            for (const auto& record : dataset.records) {
                const auto& level = category_value(record, spec.name);
                if (level && record.effort) {
                    groups[*level].push_back(*record.effort);
                }
            }
            std::size_t n = 0;
            for (const auto& [level, efforts] : groups) {
                n += efforts.size();
            }
            entry.observations = n;
            if (groups.size() < 2) {
                entry.reason = groups.empty() ? "insufficient data (n=0)"
                                              : "fewer than two levels";
            } else if (n < groups.size() + 1) {
                entry.reason = "insufficient data (n=" + std::to_string(n) + ")";
            } else {
                auto result = stats::one_way_anova(groups);
                entry.statistic = result.statistic;
                entry.p_value = result.p_value;
                entry.selected = result.p_value <= config.alpha;
                entry.reason = entry.selected ? "p <= " + fmt_short(config.alpha)
                                              : "p > " + fmt_short(config.alpha);
            }
        }

        if (include.find(spec.name) != include.end()) {
            entry.selected = true;
            entry.reason = "forced include";
        } else if (exclude.find(spec.name) != exclude.end()) {
            entry.selected = false;
            entry.reason = "forced exclude";
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

std::vector<DriverSpec> selected_drivers(const SelectionReport& report, bool include_pre) {
    std::vector<DriverSpec> out;
    for (const auto& entry : report.entries) {
        if (!entry.selected) {
            continue;
        }
        if (!include_pre && entry.name == "pre") {
            continue;
        }
        out.push_back({entry.name, entry.scale});
    }
    return out;
}

std::pair<Dataset, PreparationReport> prepare(const Dataset& dataset,
                                              std::span<const DriverSpec> drivers,
                                              const PrepareConfig& config) {
    if (dataset.records.empty()) {
        throw ValidationError("dataset is empty");
    }
    if (!(std::isfinite(config.iqr_multiplier) && config.iqr_multiplier > 0.0)) {
        throw ValidationError("iqr_multiplier must be positive");
    }
    PreparationReport report;
    report.input = dataset.records.size();

    auto has_driver = [](const ProjectRecord& record, const DriverSpec& spec) {
        if (spec.name == "pre") {
            return record.pre.has_value();
        }
        if (spec.scale == Scale::ratio) {
            return numeric_value(record, spec.name).has_value();
        }
        return category_value(record, spec.name).has_value();
    };

    std::vector<const ProjectRecord*> complete;
    for (const auto& record : dataset.records) {
        bool missing = !record.effort.has_value();
        for (const auto& spec : drivers) {
            if (missing) {
                break;
            }
            missing = !has_driver(record, spec);
        }
        if (missing) {
            report.dropped_missing.push_back(record.project_id);
        } else {
            complete.push_back(&record);
        }
    }
    if (complete.empty()) {
        throw ValidationError("all records dropped during preparation");
    }

    std::vector<double> logs;
    logs.reserve(complete.size());
    for (const auto* record : complete) {
        if (!(*record->effort > 0.0)) {
            throw ValidationError(record_label(*record) + " has nonpositive effort");
        }
        logs.push_back(std::log(*record->effort));
    }
    std::vector<double> sorted = logs;
    std::sort(sorted.begin(), sorted.end());
    double q1 = quantile_linear(sorted, 0.25);
    double q3 = quantile_linear(sorted, 0.75);
    double iqr = q3 - q1;
    report.fence_low = q1 - config.iqr_multiplier * iqr;
    report.fence_high = q3 + config.iqr_multiplier * iqr;

    Dataset out;
    out.extra_columns = dataset.extra_columns;
    for (std::size_t i = 0; i < complete.size(); ++i) {
        if (logs[i] < report.fence_low || logs[i] > report.fence_high) {
            report.dropped_outlier.push_back(complete[i]->project_id);
        } else {
            out.records.push_back(*complete[i]);
        }
    }
    if (out.records.empty()) {
        throw ValidationError("all records dropped during preparation");
    }
    report.retained = out.records.size();
    return {std::move(out), std::move(report)};
}

FoldAssignment kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) {
        throw ValidationError("fold count must be at least 2, got " + std::to_string(k));
    }
    if (n < k) {
        throw ValidationError("record count " + std::to_string(n) +
                              " is below fold count " + std::to_string(k));
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng::Engine engine(seed);
    engine.shuffle(std::span<std::size_t>(perm));

    FoldAssignment folds;
    folds.k = k;
    folds.seed = seed;
    folds.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        folds.assignment[perm[i]] = i % k;
    }
    return folds;
}

std::string to_string(ModelKind kind) {
    return kind == ModelKind::teem ? "TEEM" : "EEMR";
}

ModelKind model_kind_from_string(const std::string& text) {
    if (text == "TEEM") {
        return ModelKind::teem;
    }
    if (text == "EEMR") {
        return ModelKind::eemr;
    }
    throw ValidationError("unknown model kind: " + text);
}

FittedModel fit_model(const Dataset& dataset, std::span<const DriverSpec> drivers,
                      ModelKind kind) {
    if (dataset.records.empty()) {
        throw ValidationError("dataset is empty");
    }
    check_driver_specs(drivers);

    std::vector<double> actuals;
    actuals.reserve(dataset.records.size());
    for (const auto& record : dataset.records) {
        if (!record.effort) {
            throw ValidationError(record_label(record) + " has no effort; cannot train");
        }
        actuals.push_back(*record.effort);
    }

    stats::DesignMatrix design;
    FittedModel model;
    model.kind = kind;
    model.drivers.assign(drivers.begin(), drivers.end());

    for (const auto& spec : drivers) {
        if (spec.scale == Scale::ratio) {
            std::vector<double> column;
            column.reserve(dataset.records.size());
            for (const auto& record : dataset.records) {
                auto v = numeric_value(record, spec.name);
                if (!v) {
                    throw ValidationError(record_label(record) + " is missing driver '" +
                                          spec.name + "'");
                }
                column.push_back(*v);
            }
            design.add_column(spec.name, std::move(column));
        } else {
            std::vector<std::string> labels;
            labels.reserve(dataset.records.size());
            for (const auto& record : dataset.records) {
                const auto& v = category_value(record, spec.name);
                if (!v) {
                    throw ValidationError(record_label(record) + " is missing driver '" +
                                          spec.name + "'");
                }
                labels.push_back(*v);
            }
            std::string reference = stats::choose_reference(labels);
            auto dummies = stats::dummy_encode(labels, reference);
            model.reference_levels[spec.name] = std::move(reference);
            for (auto& dummy : dummies) {
                design.add_column(spec.name + "=" + dummy.level, std::move(dummy.values));
            }
        }
    }
    if (kind == ModelKind::eemr) {
        std::vector<double> column;
        column.reserve(dataset.records.size());
        for (const auto& record : dataset.records) {
            if (!record.pre) {
                throw ValidationError("EEMR requires project risk exposure; " +
                                      record_label(record) + " has none");
            }
            column.push_back(*record.pre);
        }
        design.add_column("pre", std::move(column));
    }

    auto fit = stats::ols(design, actuals);
    model.intercept = fit.intercept;
    model.coefficients = fit.coefficients;

    std::vector<double> fitted(actuals.size());
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        fitted[i] = actuals[i] - fit.residuals[i];
    }
    model.training = accuracy_metrics(actuals, fitted).summary();

    std::string canonical = "kind=" + to_string(kind) + ";drivers=";
    for (std::size_t i = 0; i < model.drivers.size(); ++i) {
        if (i > 0) {
            canonical += ',';
        }
        canonical += model.drivers[i].name;
        canonical += model.drivers[i].scale == Scale::ratio ? ":ratio" : ":nominal";
    }
    model.provenance.config_digest = digest_hex(canonical);
    return model;
}

EstimateResult estimate(const FittedModel& model, const ProjectRecord& record,
                        const EstimateOptions& options) {
    EstimateResult result;
    double value = model.intercept;

    for (const auto& spec : model.drivers) {
        if (spec.scale == Scale::ratio) {
            auto v = numeric_value(record, spec.name);
            if (!v) {
                throw ValidationError(record_label(record) + " is missing driver '" +
                                      spec.name + "'");
            }
            if (!std::isfinite(*v)) {
                throw ValidationError(record_label(record) + " has a non-finite '" +
                                      spec.name + "'");
            }
            value += find_coefficient(model, spec.name).value * *v;
        } else {
            const auto& level = category_value(record, spec.name);
            if (!level) {
                throw ValidationError(record_label(record) + " is missing driver '" +
                                      spec.name + "'");
            }
            auto ref = model.reference_levels.find(spec.name);
            if (ref == model.reference_levels.end()) {
                throw ValidationError("model has no reference level for driver '" +
                                      spec.name + "'");
            }
            if (*level == ref->second) {
                continue; // reference level contributes nothing
            }
            const std::string coef_name = spec.name + "=" + *level;
            bool found = false;
            for (const auto& coef : model.coefficients) {
                if (coef.name == coef_name) {
                    value += coef.value;
                    found = true;
                    break;
                }
            }
            if (!found) {
                if (!options.fallback_to_reference) {
                    throw ValidationError("unseen level '" + *level + "' for driver '" +
                                          spec.name + "'");
                }
                result.used_reference_fallback = true;
            }
        }
    }
    if (model.kind == ModelKind::eemr) {
        if (!record.pre) {
            throw ValidationError(record_label(record) +
                                  " is missing project risk exposure");
        }
        value += find_coefficient(model, "pre").value * *record.pre;
    }

    result.value = value;
    result.nonpositive = !(value > 0.0);
    return result;
}

AccuracyReport accuracy_metrics(std::span<const double> actuals,
                                std::span<const double> estimates) {
    if (actuals.empty()) {
        throw ValidationError("accuracy metrics need at least one project");
    }
    if (actuals.size() != estimates.size()) {
        throw ValidationError("actuals and estimates differ in length");
    }
    AccuracyReport report;
    report.mres.reserve(actuals.size());
    bool exact_match = true;
    std::size_t within = 0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        if (!(std::isfinite(actuals[i]) && actuals[i] > 0.0)) {
            throw ValidationError("actual effort must be positive");
        }
        if (!std::isfinite(estimates[i])) {
            throw ValidationError("estimate is not finite");
        }
        double mre = std::abs(actuals[i] - estimates[i]) / actuals[i];
        report.mres.push_back(mre);
        report.mmre += mre;
        if (mre <= 0.25) {
            ++within;
        }
        exact_match = exact_match && actuals[i] == estimates[i];
    }
    auto n = static_cast<double>(actuals.size());
    report.mmre /= n;
    report.pred_25 = static_cast<double>(within) / n;

    bool computable = actuals.size() >= 3 && !exactly_constant(actuals) &&
                      !exactly_constant(estimates);
    if (exact_match) {
        report.r_squared = 1.0;
        report.r_squared_degenerate = !computable;
    } else if (computable) {
        double r = stats::pearson(actuals, estimates).statistic;
        report.r_squared = r * r;
    } else {
        report.r_squared = 0.0;
        report.r_squared_degenerate = true;
    }
    return report;
}

AccuracyReport validate(const FittedModel& model, const Dataset& test_set) {
    if (test_set.records.empty()) {
        throw ValidationError("test set is empty");
    }
    std::vector<double> actuals;
    std::vector<double> estimates;
    actuals.reserve(test_set.records.size());
    estimates.reserve(test_set.records.size());
    for (const auto& record : test_set.records) {
        if (!record.effort) {
            throw ValidationError(record_label(record) + " has no actual effort");
        }
        actuals.push_back(*record.effort);
        estimates.push_back(estimate(model, record).value);
    }
    return accuracy_metrics(actuals, estimates);
}

CvReport cross_validate(const Dataset& dataset, std::span<const DriverSpec> drivers,
                        const CvConfig& config) {
    if (dataset.records.empty()) {
        throw ValidationError("dataset is empty");
    }
    check_driver_specs(drivers);
    for (const auto& record : dataset.records) {
        if (!record.pre) {
            throw ValidationError("cross-validation requires project risk exposure; " +
                                  record_label(record) + " has none");
        }
    }

    CvReport report;
    report.k = config.k;
    report.seed = config.seed;
    report.folds = kfold_split(dataset.records.size(), config.k, config.seed);
    report.teem.kind = ModelKind::teem;
    report.eemr.kind = ModelKind::eemr;

    for (std::size_t fold = 0; fold < config.k; ++fold) {
        Dataset train;
        Dataset test;
        train.extra_columns = dataset.extra_columns;
        test.extra_columns = dataset.extra_columns;
        for (std::size_t i = 0; i < dataset.records.size(); ++i) {
            (report.folds.assignment[i] == fold ? test : train)
                .records.push_back(dataset.records[i]);
        }
        try {
            for (auto* side : {&report.teem, &report.eemr}) {
                auto model = fit_model(train, drivers, side->kind);
                model.provenance.seed = config.seed;
                model.provenance.fold = static_cast<std::int64_t>(fold);
                FoldOutcome outcome;
                outcome.fold = fold;
                outcome.train = validate(model, train);
                outcome.test = validate(model, test);
                side->folds.push_back(std::move(outcome));
            }
        } catch (const Error& e) {
            throw ValidationError("fold " + std::to_string(fold) + ": " + e.what());
        }
    }
    for (auto* side : {&report.teem, &report.eemr}) {
        side->mean_train = mean_summary(side->folds, false);
        side->mean_test = mean_summary(side->folds, true);
    }
    return report;
}

double risk_factor_adjust(double effort, double factor) {
    if (!(std::isfinite(effort) && effort > 0.0)) {
        throw ValidationError("effort must be positive");
    }
    if (!(std::isfinite(factor) && factor >= 1.0)) {
        throw ValidationError("risk factor must be at least 1");
    }
    return effort * factor;
}

double productivity_estimate(double size, double productivity) {
    if (!(std::isfinite(size) && size > 0.0)) {
        throw ValidationError("functional size must be positive");
    }
    if (!(std::isfinite(productivity) && productivity > 0.0)) {
        throw ValidationError("productivity must be positive");
    }
    return size * productivity;
}

} // namespace riskest::pipeline
