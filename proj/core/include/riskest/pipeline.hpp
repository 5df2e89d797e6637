#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskest/project.hpp"
#include "riskest/regression.hpp"

namespace riskest::pipeline {

enum class Scale { ratio, nominal };

struct DriverSpec {
    std::string name;
    Scale scale = Scale::ratio;
};

/// The candidate drivers present in the dataset schema: fs and mts (ratio),
/// the six category drivers (nominal), and pre (ratio) when any record
/// carries it.
std::vector<DriverSpec> standard_driver_specs(const Dataset& dataset);

struct SelectionConfig {
    double r_threshold = 0.2; // minimum |r| for ratio drivers, in [0,1]
    double alpha = 0.05;      // maximum ANOVA p for nominal drivers, in (0,1)
    std::vector<std::string> force_include;
    std::vector<std::string> force_exclude;
};

struct SelectionEntry {
    std::string name;
    Scale scale = Scale::ratio;
    std::string test;  // "pearson", "anova", or "none" when not computable
    std::optional<double> statistic; // r for ratio, F for nominal
    std::optional<double> p_value;   // nominal drivers only
    std::size_t observations = 0;    // pairwise-complete rows used
    bool selected = false;
    std::string reason;
};

struct SelectionReport {
    std::vector<SelectionEntry> entries; // one per candidate, in spec order
};

/// Tests each candidate driver against effort on the pairwise-complete
/// records: ratio drivers by Pearson correlation (selected iff
/// |r| >= r_threshold), nominal drivers by one-way ANOVA over effort grouped
/// by level (selected iff p <= alpha). Constant or data-starved drivers are
/// excluded with a reason rather than failing. Force lists override the
/// outcome and must name candidate drivers.
SelectionReport select_drivers(const Dataset& dataset,
                               std::span<const DriverSpec> specs,
                               const SelectionConfig& config = {});

/// The selected drivers of a report, in report order. pre is dropped when
/// include_pre is false; model fitting appends it itself for EEMR.
std::vector<DriverSpec> selected_drivers(const SelectionReport& report,
                                         bool include_pre = true);

struct PrepareConfig {
    double iqr_multiplier = 1.5; // log-effort fence half-width, > 0
};

struct PreparationReport {
    std::size_t input = 0;
    std::vector<std::string> dropped_missing; // project ids
    std::vector<std::string> dropped_outlier; // project ids
    std::size_t retained = 0;
    double fence_low = 0.0;  // natural-log effort fence
    double fence_high = 0.0;
};

/// Drops records missing effort or any of the given drivers, then drops
/// effort outliers outside [Q1 - m*IQR, Q3 + m*IQR] on natural-log effort
/// (quantiles by linear interpolation of order statistics). Applied once.
std::pair<Dataset, PreparationReport> prepare(const Dataset& dataset,
                                              std::span<const DriverSpec> drivers,
                                              const PrepareConfig& config = {});

struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> assignment; // fold index per record
    std::uint64_t seed = 0;
};

/// Random near-equal partition: fold sizes differ by at most one and the
/// assignment is fully determined by the seed. Requires n >= k >= 2.
FoldAssignment kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

enum class ModelKind { teem, eemr };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& text);

struct MetricSummary {
    double mmre = 0.0;
    double pred_25 = 0.0;
    double r_squared = 0.0;
};

struct Provenance {
    std::uint64_t seed = 0;
    std::int64_t fold = -1; // -1 when fitted on the whole dataset
    std::string config_digest;
};

struct FittedModel {
    ModelKind kind = ModelKind::teem;
    std::vector<DriverSpec> drivers; // excludes pre, even for EEMR
    std::map<std::string, std::string> reference_levels; // per nominal driver
    double intercept = 0.0;
    /// Ratio drivers keep their name; category levels appear as
    /// "driver=level"; EEMR carries a final "pre" entry.
    std::vector<stats::Coefficient> coefficients;
    MetricSummary training;
    Provenance provenance;
};

/// Fits effort on the given drivers by least squares: ratio drivers enter
/// as-is, nominal drivers are dummy-encoded against their most frequent
/// level, and EEMR appends the pre column. Every record must supply effort
/// and all driver values. The driver list must not name pre itself.
FittedModel fit_model(const Dataset& dataset, std::span<const DriverSpec> drivers,
                      ModelKind kind);

struct EstimateOptions {
    /// Treat a category level unseen in training as the reference level
    /// instead of failing.
    bool fallback_to_reference = false;
};

struct EstimateResult {
    double value = 0.0;
    bool nonpositive = false;          // estimate <= 0, returned unclamped
    bool used_reference_fallback = false;
};

EstimateResult estimate(const FittedModel& model, const ProjectRecord& record,
                        const EstimateOptions& options = {});

struct AccuracyReport {
    double mmre = 0.0;
    double pred_25 = 0.0;
    double r_squared = 0.0;
    /// Set when the actual/estimate correlation is undefined (fewer than
    /// three pairs or a constant sequence); r_squared is then 1 for an exact
    /// match and 0 otherwise.
    bool r_squared_degenerate = false;
    std::vector<double> mres; // |actual - estimate| / actual, per project

    MetricSummary summary() const { return {mmre, pred_25, r_squared}; }
};

/// MRE per project, their mean, the fraction at or below 0.25, and the
/// squared Pearson correlation of actuals with estimates. Actuals must be
/// positive.
AccuracyReport accuracy_metrics(std::span<const double> actuals,
                                std::span<const double> estimates);

/// Estimates every record of the test set and scores it.
AccuracyReport validate(const FittedModel& model, const Dataset& test_set);

struct CvConfig {
    std::size_t k = 3;
    std::uint64_t seed = 42;
};

struct FoldOutcome {
    std::size_t fold = 0;
    AccuracyReport train;
    AccuracyReport test;
};

struct CvModelReport {
    ModelKind kind = ModelKind::teem;
    std::vector<FoldOutcome> folds;
    MetricSummary mean_train;
    MetricSummary mean_test; // fold-averaged; the headline comparison
};

struct CvReport {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    FoldAssignment folds;
    CvModelReport teem;
    CvModelReport eemr;
};

/// For each fold trains both model kinds on the remaining folds and scores
/// both sides. The dataset must be prepared and must carry pre on every
/// record. A fold failure aborts, naming the fold.
CvReport cross_validate(const Dataset& dataset, std::span<const DriverSpec> drivers,
                        const CvConfig& config = {});

/// Multiplies an effort estimate by a risk factor of at least 1; a factor of
/// exactly 1 leaves the estimate unchanged.
double risk_factor_adjust(double effort, double factor);

/// Baseline conversion: functional size times a productivity rate.
double productivity_estimate(double size, double productivity);

} // namespace riskest::pipeline
