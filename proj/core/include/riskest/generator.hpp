#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskest/project.hpp"

namespace riskest::dataio {

struct LevelSpec {
    std::string label;
    double weight = 0.0; // relative sampling frequency, >= 0
    double offset = 0.0; // planted additive effect on effort
};

struct CategoricalSpec {
    std::string name; // one of the six category columns
    std::vector<LevelSpec> levels;
};

/// How simulated managers rate the 27 taxonomy risks: each project draws a
/// tendency on the 1..5 level scale, then every probability and impact level
/// is the tendency plus jitter, rounded and clamped to 1..5.
struct RiskProfile {
    double level_mean = 2.8;
    double tendency_sd = 1.0;
    double jitter_sd = 1.1;
};

std::vector<CategoricalSpec> default_categorical_specs();

/// Sampling parameters and the planted effort law
///   effort = intercept + fs_coef*fs + mts_coef*mts + level offsets
///            + pre_coef*pre + Normal(0, noise_sd),
/// floored at effort_floor. Defaults are calibrated so that the sample
/// correlation between pre and effort lands near 0.44.
struct GeneratorConfig {
    std::size_t n = 200;
    std::uint64_t seed = 42;

    double fs_log_mean = 5.0;  // log-normal parameters of functional size
    double fs_log_sd = 0.55;
    int mts_min = 2;           // uniform integer team size
    int mts_max = 20;
    std::vector<CategoricalSpec> categoricals = default_categorical_specs();
    RiskProfile risk;

    double intercept = 800.0;
    double fs_coef = 3.0;
    double mts_coef = 55.0;
    double pre_coef = 95.0;
    double noise_sd = 260.0;
    double effort_floor = 1.0;
};

/// The generated dataset together with the config that planted it, so tests
/// can predict coefficients and distributions.
struct SyntheticData {
    Dataset dataset;
    GeneratorConfig config;
};

/// Deterministic under config.seed. Per record the draw order is pinned:
/// fs, mts, each categorical in config order, risk tendency, then for each
/// of the 27 taxonomy risks a probability and four impact levels, then the
/// noise term.
SyntheticData generate_synthetic(const GeneratorConfig& config = {});

} // namespace riskest::dataio
