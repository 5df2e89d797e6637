// Command-line workflow: assess risk, pick drivers, prepare data, fit and
// cross-validate models, estimate new projects, generate synthetic datasets.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error. Every
// failure prints "error: <message>" as its first line. Human tables print
// three decimals; --porcelain switches to line-oriented key/value output
// with full precision (the model-file convention).

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "riskest/dataio.hpp"
#include "riskest/error.hpp"
#include "riskest/generator.hpp"
#include "riskest/pipeline.hpp"
#include "riskest/project.hpp"
#include "riskest/risk_model.hpp"

namespace {

using riskest::DataError;
using riskest::Dataset;
using riskest::ValidationError;
namespace pl = riskest::pipeline;
namespace io = riskest::dataio;

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string g17(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, ptr);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open file: '" + path + "'");
    }
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write file: '" + path + "'");
    }
    return out;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("RISKEST_SEED")) {
        std::uint64_t value = 0;
        std::string text(env);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw ValidationError("RISKEST_SEED is not a valid seed: '" + text + "'");
        }
        return value;
    }
    return 42;
}

Dataset load_dataset(const std::string& path) {
    auto in = open_input(path);
    return io::load_projects(in);
}

pl::Scale scale_of(const std::string& name) {
    if (riskest::is_numeric_column(name) && name != "effort") {
        return pl::Scale::ratio;
    }
    if (riskest::is_category_column(name)) {
        return pl::Scale::nominal;
    }
    throw ValidationError("unknown driver: " + name);
}

std::vector<pl::DriverSpec> named_drivers(const std::vector<std::string>& names) {
    std::vector<pl::DriverSpec> specs;
    specs.reserve(names.size());
    for (const auto& name : names) {
        specs.push_back({name, scale_of(name)});
    }
    return specs;
}

// Default driver set: run selection with default thresholds and keep what
// passes. pre is excluded for model fitting, which appends it on its own.
std::vector<pl::DriverSpec> auto_drivers(const Dataset& dataset, bool include_pre) {
    auto candidates = pl::standard_driver_specs(dataset);
    auto report = pl::select_drivers(dataset, candidates, {});
    auto drivers = pl::selected_drivers(report, include_pre);
    if (drivers.empty()) {
        throw ValidationError("no drivers selected; pass --drivers explicitly");
    }
    return drivers;
}

struct CommonOptions {
    bool porcelain = false;
};

void cmd_taxonomy(const CommonOptions& common) {
    const auto& taxonomy = riskest::risk::builtin_taxonomy();
    if (common.porcelain) {
        for (const auto& dim : taxonomy.dimensions()) {
            std::cout << "dimension " << dim.id << ' ' << dim.name << '\n';
        }
        for (const auto& item : taxonomy.items()) {
            std::cout << "risk " << item.id << ' ' << item.description << '\n';
        }
        return;
    }
    for (const auto& dim : taxonomy.dimensions()) {
        std::cout << dim.name << '\n';
        for (const auto* item : taxonomy.items_in(dim.id)) {
            std::cout << "  " << item->id << "  " << item->description << '\n';
        }
    }
}

void cmd_assess(const std::string& path, const CommonOptions& common) {
    auto in = open_input(path);
    auto assessment = io::load_assessment(in);
    auto exposure = riskest::risk::project_risk_exposure(assessment);
    const auto& taxonomy = riskest::risk::builtin_taxonomy();

    for (const auto& dim : exposure.unrated_dimensions) {
        std::cerr << "warning: dimension '" << dim
                  << "' has no rated risks; excluded from the project average\n";
    }
    if (common.porcelain) {
        for (const auto& [dim, value] : exposure.dimension_exposures) {
            std::cout << "dimension " << dim << ' ' << g17(value) << '\n';
        }
        for (const auto& dim : exposure.unrated_dimensions) {
            std::cout << "unrated " << dim << '\n';
        }
        std::cout << "pre " << g17(exposure.value) << '\n';
        return;
    }
    for (const auto& dim : taxonomy.dimensions()) {
        auto it = exposure.dimension_exposures.find(dim.id);
        std::cout << dim.name << ": "
                  << (it == exposure.dimension_exposures.end() ? "unrated"
                                                               : fixed3(it->second))
                  << '\n';
    }
    std::cout << "project risk exposure: " << fixed3(exposure.value) << '\n';
}

struct SelectOptions {
    std::string data;
    double r_threshold = 0.2;
    double alpha = 0.05;
    std::vector<std::string> force_include;
    std::vector<std::string> force_exclude;
};

void cmd_select(const SelectOptions& opt, const CommonOptions& common) {
    auto dataset = load_dataset(opt.data);
    pl::SelectionConfig config;
    config.r_threshold = opt.r_threshold;
    config.alpha = opt.alpha;
    config.force_include = opt.force_include;
    config.force_exclude = opt.force_exclude;
    auto report = pl::select_drivers(dataset, pl::standard_driver_specs(dataset), config);

    if (common.porcelain) {
        for (const auto& entry : report.entries) {
            std::cout << "driver " << entry.name << '\n';
            std::cout << "scale " << (entry.scale == pl::Scale::ratio ? "ratio" : "nominal")
                      << '\n';
            std::cout << "test " << entry.test << '\n';
            if (entry.statistic) {
                std::cout << "statistic " << g17(*entry.statistic) << '\n';
            }
            if (entry.p_value) {
                std::cout << "p_value " << g17(*entry.p_value) << '\n';
            }
            std::cout << "observations " << entry.observations << '\n';
            std::cout << "selected " << (entry.selected ? 1 : 0) << '\n';
            std::cout << "reason " << entry.reason << '\n';
        }
        return;
    }
    std::printf("%-8s %-8s %-8s %10s %10s %-9s %s\n", "driver", "scale", "test",
                "statistic", "p-value", "selected", "reason");
    for (const auto& entry : report.entries) {
        std::printf("%-8s %-8s %-8s %10s %10s %-9s %s\n", entry.name.c_str(),
                    entry.scale == pl::Scale::ratio ? "ratio" : "nominal",
                    entry.test.c_str(),
                    entry.statistic ? fixed3(*entry.statistic).c_str() : "-",
                    entry.p_value ? fixed3(*entry.p_value).c_str() : "-",
                    entry.selected ? "yes" : "no", entry.reason.c_str());
    }
}

struct PrepareOptions {
    std::string data;
    std::string out;
    std::vector<std::string> drivers;
    double iqr_multiplier = 1.5;
};

void cmd_prepare(const PrepareOptions& opt, const CommonOptions& common) {
    auto dataset = load_dataset(opt.data);
    auto drivers = opt.drivers.empty() ? auto_drivers(dataset, true)
                                       : named_drivers(opt.drivers);
    pl::PrepareConfig config;
    config.iqr_multiplier = opt.iqr_multiplier;
    auto [cleaned, report] = pl::prepare(dataset, drivers, config);
    auto out = open_output(opt.out);
    io::serialize_projects(out, cleaned);

    if (common.porcelain) {
        std::cout << "input " << report.input << '\n';
        for (const auto& id : report.dropped_missing) {
            std::cout << "dropped_missing " << id << '\n';
        }
        for (const auto& id : report.dropped_outlier) {
            std::cout << "dropped_outlier " << id << '\n';
        }
        std::cout << "retained " << report.retained << '\n';
        std::cout << "fence_low " << g17(report.fence_low) << '\n';
        std::cout << "fence_high " << g17(report.fence_high) << '\n';
        return;
    }
    auto list_ids = [](const std::vector<std::string>& ids) {
        std::string text;
        for (const auto& id : ids) {
            text += ' ';
            text += id;
        }
        return text;
    };
    std::cout << "input records: " << report.input << '\n';
    std::cout << "dropped (missing values): " << report.dropped_missing.size()
              << list_ids(report.dropped_missing) << '\n';
    std::cout << "dropped (effort outliers): " << report.dropped_outlier.size()
              << list_ids(report.dropped_outlier) << '\n';
    std::cout << "retained: " << report.retained << '\n';
    std::cout << "log-effort fence: [" << fixed3(report.fence_low) << ", "
              << fixed3(report.fence_high) << "]\n";
}

struct FitOptions {
    std::string data;
    std::string out;
    std::string kind = "teem";
    std::vector<std::string> drivers;
    std::optional<std::uint64_t> seed;
};

void cmd_fit(const FitOptions& opt, const CommonOptions& common) {
    auto dataset = load_dataset(opt.data);
    auto drivers = opt.drivers.empty() ? auto_drivers(dataset, false)
                                       : named_drivers(opt.drivers);
    auto kind = opt.kind == "eemr" ? pl::ModelKind::eemr : pl::ModelKind::teem;
    auto model = pl::fit_model(dataset, drivers, kind);
    model.provenance.seed = resolve_seed(opt.seed);
    auto out = open_output(opt.out);
    io::save_model(out, model);

    if (common.porcelain) {
        std::cout << "kind " << pl::to_string(model.kind) << '\n';
        for (const auto& spec : model.drivers) {
            std::cout << "driver " << spec.name << ' '
                      << (spec.scale == pl::Scale::ratio ? "ratio" : "nominal") << '\n';
        }
        for (const auto& [driver, level] : model.reference_levels) {
            std::cout << "reference " << driver << ' ' << level << '\n';
        }
        std::cout << "intercept " << g17(model.intercept) << '\n';
        for (const auto& coef : model.coefficients) {
            std::cout << "coef " << coef.name << ' ' << g17(coef.value) << '\n';
        }
        std::cout << "metric mmre " << g17(model.training.mmre) << '\n';
        std::cout << "metric pred25 " << g17(model.training.pred_25) << '\n';
        std::cout << "metric r2 " << g17(model.training.r_squared) << '\n';
        std::cout << "seed " << model.provenance.seed << '\n';
        std::cout << "fold " << model.provenance.fold << '\n';
        std::cout << "config_digest " << model.provenance.config_digest << '\n';
        return;
    }
    std::cout << "kind: " << pl::to_string(model.kind) << '\n';
    std::cout << "intercept: " << fixed3(model.intercept) << '\n';
    for (const auto& coef : model.coefficients) {
        std::cout << "coef " << coef.name << ": " << fixed3(coef.value) << '\n';
    }
    for (const auto& [driver, level] : model.reference_levels) {
        std::cout << "reference " << driver << ": " << level << '\n';
    }
    std::cout << "training MMRE " << fixed3(model.training.mmre) << ", Pred(0.25) "
              << fixed3(model.training.pred_25) << ", R2 "
              << fixed3(model.training.r_squared) << '\n';
    std::cout << "model written to " << opt.out << '\n';
}

struct CvOptions {
    std::string data;
    std::size_t k = 3;
    std::vector<std::string> drivers;
    std::optional<std::uint64_t> seed;
};

void cmd_cross_validate(const CvOptions& opt, const CommonOptions& common) {
    auto dataset = load_dataset(opt.data);
    auto drivers = opt.drivers.empty() ? auto_drivers(dataset, false)
                                       : named_drivers(opt.drivers);
    pl::CvConfig config;
    config.k = opt.k;
    config.seed = resolve_seed(opt.seed);
    auto report = pl::cross_validate(dataset, drivers, config);

    if (common.porcelain) {
        std::cout << "k " << report.k << '\n';
        std::cout << "seed " << report.seed << '\n';
        for (const auto* side : {&report.teem, &report.eemr}) {
            std::cout << "model " << pl::to_string(side->kind) << '\n';
            for (const auto& fold : side->folds) {
                std::cout << "fold " << fold.fold << '\n';
                std::cout << "train_mmre " << g17(fold.train.mmre) << '\n';
                std::cout << "train_pred25 " << g17(fold.train.pred_25) << '\n';
                std::cout << "train_r2 " << g17(fold.train.r_squared) << '\n';
                std::cout << "test_mmre " << g17(fold.test.mmre) << '\n';
                std::cout << "test_pred25 " << g17(fold.test.pred_25) << '\n';
                std::cout << "test_r2 " << g17(fold.test.r_squared) << '\n';
            }
            std::cout << "mean_train_mmre " << g17(side->mean_train.mmre) << '\n';
            std::cout << "mean_train_pred25 " << g17(side->mean_train.pred_25) << '\n';
            std::cout << "mean_train_r2 " << g17(side->mean_train.r_squared) << '\n';
            std::cout << "mean_test_mmre " << g17(side->mean_test.mmre) << '\n';
            std::cout << "mean_test_pred25 " << g17(side->mean_test.pred_25) << '\n';
            std::cout << "mean_test_r2 " << g17(side->mean_test.r_squared) << '\n';
        }
        return;
    }
    std::printf("%zu-fold cross-validation, seed %llu\n", report.k,
                static_cast<unsigned long long>(report.seed));
    std::printf("%-6s %10s %10s %10s %10s %10s %10s\n", "model", "tr-MMRE",
                "tr-Pred25", "tr-R2", "te-MMRE", "te-Pred25", "te-R2");
    for (const auto* side : {&report.teem, &report.eemr}) {
        std::printf("%-6s %10s %10s %10s %10s %10s %10s\n",
                    pl::to_string(side->kind).c_str(),
                    fixed3(side->mean_train.mmre).c_str(),
                    fixed3(side->mean_train.pred_25).c_str(),
                    fixed3(side->mean_train.r_squared).c_str(),
                    fixed3(side->mean_test.mmre).c_str(),
                    fixed3(side->mean_test.pred_25).c_str(),
                    fixed3(side->mean_test.r_squared).c_str());
    }
    std::printf("per fold (test side):\n");
    std::printf("%-6s %-6s %10s %10s %10s\n", "fold", "model", "MMRE", "Pred25", "R2");
    for (const auto* side : {&report.teem, &report.eemr}) {
        for (const auto& fold : side->folds) {
            std::printf("%-6zu %-6s %10s %10s %10s\n", fold.fold,
                        pl::to_string(side->kind).c_str(), fixed3(fold.test.mmre).c_str(),
                        fixed3(fold.test.pred_25).c_str(),
                        fixed3(fold.test.r_squared).c_str());
        }
    }
}

struct EstimateOptions {
    std::string model;
    std::string project;
    std::optional<double> risk_factor;
    bool fallback_to_reference = false;
};

void cmd_estimate(const EstimateOptions& opt, const CommonOptions& common) {
    auto model_in = open_input(opt.model);
    auto model = io::load_model(model_in);
    auto dataset = load_dataset(opt.project);
    if (dataset.records.size() != 1) {
        throw DataError("expected exactly one project record, got " +
                        std::to_string(dataset.records.size()));
    }
    const auto& record = dataset.records.front();
    pl::EstimateOptions options;
    options.fallback_to_reference = opt.fallback_to_reference;
    auto result = pl::estimate(model, record, options);
    std::optional<double> adjusted;
    if (opt.risk_factor) {
        adjusted = pl::risk_factor_adjust(result.value, *opt.risk_factor);
    }

    if (result.nonpositive) {
        std::cerr << "warning: nonpositive estimate\n";
    }
    if (result.used_reference_fallback) {
        std::cerr << "warning: unseen level replaced by the reference level\n";
    }
    if (common.porcelain) {
        std::cout << "project " << record.project_id << '\n';
        std::cout << "estimate " << g17(result.value) << '\n';
        std::cout << "nonpositive " << (result.nonpositive ? 1 : 0) << '\n';
        std::cout << "fallback_used " << (result.used_reference_fallback ? 1 : 0) << '\n';
        if (adjusted) {
            std::cout << "risk_factor " << g17(*opt.risk_factor) << '\n';
            std::cout << "adjusted " << g17(*adjusted) << '\n';
        }
        return;
    }
    std::cout << "project: " << record.project_id << '\n';
    std::cout << "estimated effort: " << fixed3(result.value) << '\n';
    if (adjusted) {
        std::cout << "risk factor: " << fixed3(*opt.risk_factor) << '\n';
        std::cout << "adjusted effort: " << fixed3(*adjusted) << '\n';
    }
}

struct GenOptions {
    std::string out;
    std::size_t n = 200;
    std::optional<std::uint64_t> seed;
};

void cmd_gen(const GenOptions& opt) {
    io::GeneratorConfig config;
    config.n = opt.n;
    config.seed = resolve_seed(opt.seed);
    auto synthetic = io::generate_synthetic(config);
    auto out = open_output(opt.out);
    io::serialize_projects(out, synthetic.dataset);
    std::cout << "records " << synthetic.dataset.records.size() << '\n';
    std::cout << "seed " << config.seed << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effort estimation toolkit integrating software risk"};
    app.require_subcommand(1);

    CommonOptions common;

    auto* taxonomy_cmd = app.add_subcommand("taxonomy", "Print the risk checklist");
    taxonomy_cmd->add_flag("--porcelain", common.porcelain, "Key/value output");

    std::string assess_path;
    auto* assess_cmd =
        app.add_subcommand("assess", "Score a risk assessment file");
    assess_cmd->add_option("file", assess_path, "Assessment CSV")->required();
    assess_cmd->add_flag("--porcelain", common.porcelain, "Key/value output");

    SelectOptions select_opt;
    auto* select_cmd = app.add_subcommand("select", "Test candidate effort drivers");
    select_cmd->add_option("--data", select_opt.data, "Project CSV")->required();
    select_cmd->add_option("--r-threshold", select_opt.r_threshold,
                           "Minimum |r| for ratio drivers");
    select_cmd->add_option("--alpha", select_opt.alpha, "Maximum ANOVA p-value");
    select_cmd->add_option("--force-include", select_opt.force_include,
                           "Drivers selected regardless of tests")
        ->delimiter(',');
    select_cmd->add_option("--force-exclude", select_opt.force_exclude,
                           "Drivers rejected regardless of tests")
        ->delimiter(',');
    select_cmd->add_flag("--porcelain", common.porcelain, "Key/value output");

    PrepareOptions prepare_opt;
    auto* prepare_cmd =
        app.add_subcommand("prepare", "Drop incomplete records and effort outliers");
    prepare_cmd->add_option("--data", prepare_opt.data, "Project CSV")->required();
    prepare_cmd->add_option("--out", prepare_opt.out, "Cleaned CSV path")->required();
    prepare_cmd->add_option("--drivers", prepare_opt.drivers,
                            "Driver columns (default: auto-selected)")
        ->delimiter(',');
    prepare_cmd->add_option("--iqr-multiplier", prepare_opt.iqr_multiplier,
                            "Log-effort fence width");
    prepare_cmd->add_flag("--porcelain", common.porcelain, "Key/value output");

    FitOptions fit_opt;
    auto* fit_cmd = app.add_subcommand("fit", "Fit an effort model");
    fit_cmd->add_option("--data", fit_opt.data, "Project CSV")->required();
    fit_cmd->add_option("--out", fit_opt.out, "Model file path")->required();
    fit_cmd->add_option("--kind", fit_opt.kind, "Model kind (teem or eemr)")
        ->required()
        ->check(CLI::IsMember({"teem", "eemr"}));
    fit_cmd->add_option("--drivers", fit_opt.drivers,
                        "Driver columns (default: auto-selected)")
        ->delimiter(',');
    fit_cmd->add_option("--seed", fit_opt.seed, "Provenance seed");
    fit_cmd->add_flag("--porcelain", common.porcelain, "Key/value output");

    CvOptions cv_opt;
    auto* cv_cmd = app.add_subcommand("cross-validate",
                                      "Compare TEEM and EEMR across folds");
    cv_cmd->add_option("--data", cv_opt.data, "Project CSV")->required();
    cv_cmd->add_option("--k", cv_opt.k, "Fold count");
    cv_cmd->add_option("--drivers", cv_opt.drivers,
                       "Driver columns (default: auto-selected)")
        ->delimiter(',');
    cv_cmd->add_option("--seed", cv_opt.seed, "Fold-split seed");
    cv_cmd->add_flag("--porcelain", common.porcelain, "Key/value output");

    EstimateOptions estimate_opt;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate one project");
    estimate_cmd->add_option("--model", estimate_opt.model, "Model file")->required();
    estimate_cmd->add_option("--project", estimate_opt.project,
                             "Project CSV with one record")
        ->required();
    estimate_cmd->add_option("--risk-factor", estimate_opt.risk_factor,
                             "Multiplier >= 1 applied to the estimate");
    estimate_cmd->add_flag("--fallback-to-reference",
                           estimate_opt.fallback_to_reference,
                           "Map unseen category levels to the reference level");
    estimate_cmd->add_flag("--porcelain", common.porcelain, "Key/value output");

    GenOptions gen_opt;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic project dataset");
    gen_cmd->add_option("--out", gen_opt.out, "Output CSV path")->required();
    gen_cmd->add_option("--n", gen_opt.n, "Record count");
    gen_cmd->add_option("--seed", gen_opt.seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        std::cerr << app.help();
        return 1;
    }

    try {
        if (app.got_subcommand(taxonomy_cmd)) {
            cmd_taxonomy(common);
        } else if (app.got_subcommand(assess_cmd)) {
            cmd_assess(assess_path, common);
        } else if (app.got_subcommand(select_cmd)) {
            cmd_select(select_opt, common);
        } else if (app.got_subcommand(prepare_cmd)) {
            cmd_prepare(prepare_opt, common);
        } else if (app.got_subcommand(fit_cmd)) {
            cmd_fit(fit_opt, common);
        } else if (app.got_subcommand(cv_cmd)) {
            cmd_cross_validate(cv_opt, common);
        } else if (app.got_subcommand(estimate_cmd)) {
            cmd_estimate(estimate_opt, common);
        } else if (app.got_subcommand(gen_cmd)) {
            cmd_gen(gen_opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
