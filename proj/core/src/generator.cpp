#include "riskest/generator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <span>

#include "riskest/error.hpp"
#include "riskest/risk_model.hpp"
#include "riskest/rng.hpp"

namespace riskest::dataio {
namespace {

int level_draw(rng::Engine& engine, double mean, double sd) {
    auto level = static_cast<int>(std::lround(engine.normal(mean, sd)));
    return std::clamp(level, 1, 5);
}

void require_finite(const char* what, double v) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(what) + " must be finite");
    }
}

void check_config(const GeneratorConfig& config) {
    if (config.n < 10) {
        throw ValidationError("record count must be at least 10");
    }
    require_finite("fs_log_mean", config.fs_log_mean);
    require_finite("fs_log_sd", config.fs_log_sd);
    if (config.fs_log_sd < 0.0) {
        throw ValidationError("fs_log_sd must be nonnegative");
    }
    if (config.mts_min < 1 || config.mts_max < config.mts_min) {
        throw ValidationError("team size range must satisfy 1 <= min <= max");
    }
    require_finite("intercept", config.intercept);
    require_finite("fs_coef", config.fs_coef);
    require_finite("mts_coef", config.mts_coef);
    require_finite("pre_coef", config.pre_coef);
    require_finite("noise_sd", config.noise_sd);
    if (config.noise_sd < 0.0) {
        throw ValidationError("noise_sd must be nonnegative");
    }
    if (!(std::isfinite(config.effort_floor) && config.effort_floor > 0.0)) {
        throw ValidationError("effort_floor must be positive");
    }
    const auto& risk = config.risk;
    if (!(risk.level_mean >= 1.0 && risk.level_mean <= 5.0)) {
        throw ValidationError("risk level_mean must be in [1,5]");
    }
    if (!(std::isfinite(risk.tendency_sd) && risk.tendency_sd >= 0.0) ||
        !(std::isfinite(risk.jitter_sd) && risk.jitter_sd >= 0.0)) {
        throw ValidationError("risk spreads must be nonnegative");
    }

    std::set<std::string> names;
    for (const auto& spec : config.categoricals) {
        if (!is_category_column(spec.name)) {
            throw ValidationError("not a category column: " + spec.name);
        }
        if (!names.insert(spec.name).second) {
            throw ValidationError("duplicate categorical spec: " + spec.name);
        }
        if (spec.levels.empty()) {
            throw ValidationError("driver '" + spec.name + "' has no levels");
        }
        std::set<std::string> labels;
        double weight_sum = 0.0;
        std::size_t effective = 0;
        const LevelSpec* only_effective = nullptr;
        for (const auto& level : spec.levels) {
            if (level.label.empty() ||
                level.label.find_first_of(",\r\n") != std::string::npos) {
                throw ValidationError("driver '" + spec.name + "' has an invalid label");
            }
            if (!labels.insert(level.label).second) {
                throw ValidationError("driver '" + spec.name + "' repeats level '" +
                                      level.label + "'");
            }
            if (!(std::isfinite(level.weight) && level.weight >= 0.0)) {
                throw ValidationError("driver '" + spec.name +
                                      "' has an invalid weight");
            }
            require_finite("level offset", level.offset);
            weight_sum += level.weight;
            if (level.weight > 0.0) {
                ++effective;
                only_effective = &level;
            }
        }
        if (weight_sum <= 0.0) {
            throw ValidationError("driver '" + spec.name + "' has zero total weight");
        }
        if (effective == 1 && only_effective->offset != 0.0) {
            throw ValidationError("degenerate config: driver '" + spec.name +
                                  "' has a single effective level with a planted offset");
        }
    }
    if (names.size() != 6) {
        throw ValidationError("categorical specs must cover dt, dp, lt, um, ma, at");
    }
}

std::string make_project_id(std::size_t index, std::size_t n) {
    std::size_t width = 4;
    for (std::size_t v = n; v >= 10000; v /= 10) {
        ++width;
    }
    std::string digits = std::to_string(index + 1);
    return "P" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

} // namespace

std::vector<CategoricalSpec> default_categorical_specs() {
    return {
        {"dt", {{"new_development", 0.55, 0.0}, {"enhancement", 0.45, 0.0}}},
        {"dp", {{"mainframe", 0.40, 0.0}, {"midrange", 0.35, 0.0}, {"pc", 0.25, 0.0}}},
        {"lt", {{"3gl", 0.45, 0.0}, {"4gl", 0.35, 700.0}, {"apg", 0.20, 1400.0}}},
        {"um", {{"yes", 0.60, 0.0}, {"no", 0.40, 0.0}}},
        {"ma", {{"developed", 0.40, 0.0}, {"purchased", 0.35, 700.0},
                {"combined", 0.25, 1400.0}}},
        {"at", {{"business", 0.50, 0.0}, {"realtime", 0.30, 0.0}, {"web", 0.20, 0.0}}},
    };
}

SyntheticData generate_synthetic(const GeneratorConfig& config) {
    check_config(config);
    const auto& taxonomy = risk::builtin_taxonomy();
    rng::Engine engine(config.seed);

    SyntheticData out;
    out.config = config;
    out.dataset.records.reserve(config.n);

    for (std::size_t i = 0; i < config.n; ++i) {
        ProjectRecord record;
        record.project_id = make_project_id(i, config.n);
        record.fs = engine.lognormal(config.fs_log_mean, config.fs_log_sd);
        record.mts = static_cast<double>(engine.uniform_int(config.mts_min, config.mts_max));

        double offset_sum = 0.0;
        for (const auto& spec : config.categoricals) {
            std::vector<double> weights;
            weights.reserve(spec.levels.size());
            for (const auto& level : spec.levels) {
                weights.push_back(level.weight);
            }
            const auto& chosen = spec.levels[engine.pick_weighted(weights)];
            set_category_value(record, spec.name, chosen.label);
            offset_sum += chosen.offset;
        }

        double tendency = engine.normal(config.risk.level_mean, config.risk.tendency_sd);
        risk::RiskAssessment assessment;
        for (const auto& item : taxonomy.items()) {
            risk::RiskRating rating;
            rating.risk = item.id;
            rating.probability = level_draw(engine, tendency, config.risk.jitter_sd);
            rating.impact.technical = level_draw(engine, tendency, config.risk.jitter_sd);
            rating.impact.cost = level_draw(engine, tendency, config.risk.jitter_sd);
            rating.impact.schedule = level_draw(engine, tendency, config.risk.jitter_sd);
            rating.impact.team = level_draw(engine, tendency, config.risk.jitter_sd);
            assessment.ratings.push_back(rating);
        }
        record.pre = risk::project_risk_exposure(assessment).value;

        double noise = engine.normal(0.0, config.noise_sd);
        double effort = config.intercept + config.fs_coef * *record.fs +
                        config.mts_coef * *record.mts + offset_sum +
                        config.pre_coef * *record.pre + noise;
        record.effort = std::max(config.effort_floor, effort);

        out.dataset.records.push_back(std::move(record));
    }
    return out;
}

} // namespace riskest::dataio
