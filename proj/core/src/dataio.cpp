#include "riskest/dataio.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string_view>
#include <vector>

#include "riskest/error.hpp"

namespace riskest::dataio {
namespace {

constexpr std::array<std::string_view, 11> kSchemaColumns = {
    "project_id", "effort", "fs", "mts", "dt", "dp",
    "lt",         "um",     "ma", "at", "pre"};

std::string shortest(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string digits17(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, ptr);
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) {
        return false;
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return true;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string where(std::size_t line) { return "line " + std::to_string(line); }

std::string where(std::size_t line, std::string_view column) {
    return "line " + std::to_string(line) + ", column '" + std::string(column) + "'";
}

double parse_double(const std::string& cell, std::size_t line, std::string_view column) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
        throw DataError(where(line, column) + ": malformed number '" + cell + "'");
    }
    return value;
}

int parse_level(const std::string& cell, std::size_t line, std::string_view column) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw DataError(where(line, column) + ": malformed level '" + cell + "'");
    }
    if (value < 1 || value > 5) {
        throw DataError(where(line, column) + ": level must be in [1,5]");
    }
    return value;
}

void check_cell(const std::string& text) {
    if (text.find_first_of(",\r\n") != std::string::npos) {
        throw DataError("cell contains a separator: '" + text + "'");
    }
}

std::string now_utc_iso8601() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

Dataset load_projects(std::istream& source) {
    std::string line;
    if (!next_line(source, line)) {
        throw DataError("missing header row");
    }
    auto header = split_csv(line);
    std::map<std::string_view, std::size_t> schema_index;
    std::vector<std::pair<std::string, std::size_t>> extras;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string& name = header[i];
        if (name.empty()) {
            throw DataError("line 1: empty column name");
        }
        if (!seen.insert(name).second) {
            throw DataError("line 1: duplicate column '" + name + "'");
        }
        bool standard = false;
        for (auto column : kSchemaColumns) {
            if (name == column) {
                schema_index[column] = i;
                standard = true;
                break;
            }
        }
        if (!standard) {
            extras.emplace_back(name, i);
        }
    }
    for (auto column : kSchemaColumns) {
        if (schema_index.find(column) == schema_index.end()) {
            throw DataError("line 1: missing required column: " + std::string(column));
        }
    }

    Dataset dataset;
    for (const auto& [name, index] : extras) {
        dataset.extra_columns.push_back(name);
    }

    std::set<std::string> ids;
    std::size_t line_no = 1;
    while (next_line(source, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto cells = split_csv(line);
        if (cells.size() != header.size()) {
            throw DataError(where(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(cells.size()));
        }
        ProjectRecord record;
        record.project_id = cells[schema_index["project_id"]];
        if (record.project_id.empty()) {
            throw DataError(where(line_no) + ": project_id is empty");
        }
        if (!ids.insert(record.project_id).second) {
            throw DataError(where(line_no) + ": duplicate project_id '" +
                            record.project_id + "'");
        }

        auto numeric = [&](std::string_view column) -> std::optional<double> {
            const std::string& cell = cells[schema_index[column]];
            if (cell.empty()) {
                return std::nullopt;
            }
            return parse_double(cell, line_no, column);
        };
        record.effort = numeric("effort");
        if (record.effort && !(*record.effort > 0.0)) {
            throw DataError(where(line_no, "effort") + ": must be positive");
        }
        record.fs = numeric("fs");
        if (record.fs && !(*record.fs > 0.0)) {
            throw DataError(where(line_no, "fs") + ": must be positive");
        }
        record.mts = numeric("mts");
        if (record.mts && !(*record.mts > 0.0)) {
            throw DataError(where(line_no, "mts") + ": must be positive");
        }
        record.pre = numeric("pre");
        if (record.pre && !(*record.pre >= 1.0 && *record.pre <= 25.0)) {
            throw DataError(where(line_no, "pre") + ": must be in [1,25]");
        }

        for (auto column : {"dt", "dp", "lt", "um", "ma", "at"}) {
            const std::string& cell = cells[schema_index[column]];
            if (!cell.empty()) {
                set_category_value(record, column, cell);
            }
        }
        for (const auto& [name, index] : extras) {
            record.extras.push_back(cells[index]);
        }
        dataset.records.push_back(std::move(record));
    }
    return dataset;
}

void serialize_projects(std::ostream& sink, const Dataset& dataset) {
    for (std::size_t i = 0; i < kSchemaColumns.size(); ++i) {
        if (i > 0) {
            sink << ',';
        }
        sink << kSchemaColumns[i];
    }
    for (const auto& name : dataset.extra_columns) {
        check_cell(name);
        sink << ',' << name;
    }
    sink << '\n';

    for (const auto& record : dataset.records) {
        if (record.extras.size() != dataset.extra_columns.size()) {
            throw DataError("record '" + record.project_id + "' has " +
                            std::to_string(record.extras.size()) +
                            " extra cells, expected " +
                            std::to_string(dataset.extra_columns.size()));
        }
        check_cell(record.project_id);
        sink << record.project_id << ',';
        auto put_numeric = [&](const std::optional<double>& v) {
            if (v) {
                sink << shortest(*v);
            }
            sink << ',';
        };
        put_numeric(record.effort);
        put_numeric(record.fs);
        put_numeric(record.mts);
        for (auto column : {"dt", "dp", "lt", "um", "ma", "at"}) {
            const auto& v = category_value(record, column);
            if (v) {
                check_cell(*v);
                sink << *v;
            }
            sink << ',';
        }
        if (record.pre) {
            sink << shortest(*record.pre);
        }
        for (const auto& cell : record.extras) {
            check_cell(cell);
            sink << ',' << cell;
        }
        sink << '\n';
    }
}

risk::RiskAssessment load_assessment(std::istream& source) {
    constexpr std::array<std::string_view, 6> kColumns = {
        "risk_id", "probability", "technical", "cost", "schedule", "team"};
    const auto& taxonomy = risk::builtin_taxonomy();

    risk::RiskAssessment assessment;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    while (next_line(source, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto cells = split_csv(line);
        if (first_content && cells[0] == "risk_id") {
            first_content = false;
            continue; // header line
        }
        first_content = false;
        if (cells.size() != kColumns.size()) {
            throw DataError(where(line_no) + ": expected " +
                            std::to_string(kColumns.size()) + " fields, got " +
                            std::to_string(cells.size()));
        }
        risk::RiskRating rating;
        rating.risk = cells[0];
        if (taxonomy.find_item(rating.risk) == nullptr) {
            throw DataError(where(line_no) + ": unknown risk id '" + rating.risk + "'");
        }
        if (!seen.insert(rating.risk).second) {
            throw DataError(where(line_no) + ": duplicate rating for risk id '" +
                            rating.risk + "'");
        }
        rating.probability = parse_level(cells[1], line_no, kColumns[1]);
        rating.impact.technical = parse_level(cells[2], line_no, kColumns[2]);
        rating.impact.cost = parse_level(cells[3], line_no, kColumns[3]);
        rating.impact.schedule = parse_level(cells[4], line_no, kColumns[4]);
        rating.impact.team = parse_level(cells[5], line_no, kColumns[5]);
        assessment.ratings.push_back(std::move(rating));
    }
    return assessment;
}

void merge_assessment(Dataset& dataset, const std::string& project_id,
                      const risk::RiskAssessment& assessment) {
    const double value = risk::project_risk_exposure(assessment).value;
    for (auto& record : dataset.records) {
        if (record.project_id != project_id) {
            continue;
        }
        if (record.pre) {
            if (std::abs(*record.pre - value) > 1e-9) {
                throw DataError("stored project risk exposure " + shortest(*record.pre) +
                                " disagrees with assessment value " + shortest(value) +
                                " for '" + project_id + "'");
            }
        } else {
            record.pre = value;
        }
        return;
    }
    throw DataError("unknown project id: '" + project_id + "'");
}

void save_model(std::ostream& sink, const pipeline::FittedModel& model,
                std::string_view created) {
    std::string stamp = created.empty() ? now_utc_iso8601() : std::string(created);
    if (stamp.find_first_of("\r\n") != std::string::npos) {
        throw DataError("creation timestamp contains a line break");
    }
    sink << "format eemr-model/1\n";
    sink << "created " << stamp << '\n';
    sink << "kind " << pipeline::to_string(model.kind) << '\n';
    for (const auto& spec : model.drivers) {
        sink << "driver " << spec.name << ' '
             << (spec.scale == pipeline::Scale::ratio ? "ratio" : "nominal") << '\n';
    }
    for (const auto& [driver, level] : model.reference_levels) {
        sink << "reference " << driver << ' ' << level << '\n';
    }
    sink << "intercept " << digits17(model.intercept) << '\n';
    for (const auto& coef : model.coefficients) {
        sink << "coef " << coef.name << ' ' << digits17(coef.value) << '\n';
    }
    sink << "metric mmre " << digits17(model.training.mmre) << '\n';
    sink << "metric pred25 " << digits17(model.training.pred_25) << '\n';
    sink << "metric r2 " << digits17(model.training.r_squared) << '\n';
    sink << "seed " << model.provenance.seed << '\n';
    sink << "fold " << model.provenance.fold << '\n';
    sink << "config_digest " << model.provenance.config_digest << '\n';
}

pipeline::FittedModel load_model(std::istream& source, std::string* created) {
    pipeline::FittedModel model;
    std::string stamp;
    bool has_format = false;
    bool has_created = false;
    bool has_kind = false;
    bool has_intercept = false;
    bool has_mmre = false;
    bool has_pred = false;
    bool has_r2 = false;
    bool has_seed = false;
    bool has_fold = false;
    bool has_digest = false;

    auto scalar_once = [](bool& flag, std::size_t line_no, const std::string& key) {
        if (flag) {
            throw DataError(where(line_no) + ": repeated field '" + key + "'");
        }
        flag = true;
    };
    auto value_double = [](const std::string& text, std::size_t line_no,
                           const std::string& key) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            throw DataError(where(line_no) + ": malformed number for '" + key + "'");
        }
        return v;
    };

    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    while (next_line(source, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        auto space = line.find(' ');
        std::string key = line.substr(0, space);
        std::string value = space == std::string::npos ? "" : line.substr(space + 1);

        if (first) {
            if (key != "format") {
                throw DataError("not a model file");
            }
            first = false;
        }

        if (key == "format") {
            scalar_once(has_format, line_no, key);
            if (value != "eemr-model/1") {
                throw DataError("unsupported model format: '" + value + "'");
            }
        } else if (key == "created") {
            scalar_once(has_created, line_no, key);
            stamp = value;
        } else if (key == "kind") {
            scalar_once(has_kind, line_no, key);
            if (value == "TEEM") {
                model.kind = pipeline::ModelKind::teem;
            } else if (value == "EEMR") {
                model.kind = pipeline::ModelKind::eemr;
            } else {
                throw DataError(where(line_no) + ": unknown model kind '" + value + "'");
            }
        } else if (key == "driver") {
            auto sep = value.find(' ');
            if (sep == std::string::npos) {
                throw DataError(where(line_no) + ": malformed driver line");
            }
            pipeline::DriverSpec spec;
            spec.name = value.substr(0, sep);
            std::string scale = value.substr(sep + 1);
            if (scale == "ratio") {
                spec.scale = pipeline::Scale::ratio;
            } else if (scale == "nominal") {
                spec.scale = pipeline::Scale::nominal;
            } else {
                throw DataError(where(line_no) + ": unknown scale '" + scale + "'");
            }
            for (const auto& existing : model.drivers) {
                if (existing.name == spec.name) {
                    throw DataError(where(line_no) + ": repeated driver '" + spec.name +
                                    "'");
                }
            }
            model.drivers.push_back(std::move(spec));
        } else if (key == "reference") {
            auto sep = value.find(' ');
            if (sep == std::string::npos || sep + 1 >= value.size()) {
                throw DataError(where(line_no) + ": malformed reference line");
            }
            std::string driver = value.substr(0, sep);
            std::string level = value.substr(sep + 1);
            bool nominal = false;
            for (const auto& spec : model.drivers) {
                if (spec.name == driver) {
                    nominal = spec.scale == pipeline::Scale::nominal;
                    break;
                }
            }
            if (!nominal) {
                throw DataError(where(line_no) + ": reference for unknown nominal driver '" +
                                driver + "'");
            }
            if (!model.reference_levels.emplace(driver, level).second) {
                throw DataError(where(line_no) + ": repeated reference for '" + driver +
                                "'");
            }
        } else if (key == "intercept") {
            scalar_once(has_intercept, line_no, key);
            model.intercept = value_double(value, line_no, key);
        } else if (key == "coef") {
            auto sep = value.rfind(' ');
            if (sep == std::string::npos || sep == 0) {
                throw DataError(where(line_no) + ": malformed coefficient line");
            }
            stats::Coefficient coef;
            coef.name = value.substr(0, sep);
            coef.value = value_double(value.substr(sep + 1), line_no, key);
            for (const auto& existing : model.coefficients) {
                if (existing.name == coef.name) {
                    throw DataError(where(line_no) + ": repeated coefficient '" +
                                    coef.name + "'");
                }
            }
            model.coefficients.push_back(std::move(coef));
        } else if (key == "metric") {
            auto sep = value.find(' ');
            if (sep == std::string::npos) {
                throw DataError(where(line_no) + ": malformed metric line");
            }
            std::string which = value.substr(0, sep);
            double v = value_double(value.substr(sep + 1), line_no, key);
            if (which == "mmre") {
                scalar_once(has_mmre, line_no, "metric mmre");
                model.training.mmre = v;
            } else if (which == "pred25") {
                scalar_once(has_pred, line_no, "metric pred25");
                model.training.pred_25 = v;
            } else if (which == "r2") {
                scalar_once(has_r2, line_no, "metric r2");
                model.training.r_squared = v;
            } else {
                throw DataError(where(line_no) + ": unknown metric '" + which + "'");
            }
        } else if (key == "seed") {
            scalar_once(has_seed, line_no, key);
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                             model.provenance.seed);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw DataError(where(line_no) + ": malformed seed");
            }
        } else if (key == "fold") {
            scalar_once(has_fold, line_no, key);
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(),
                                             model.provenance.fold);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw DataError(where(line_no) + ": malformed fold");
            }
        } else if (key == "config_digest") {
            scalar_once(has_digest, line_no, key);
            model.provenance.config_digest = value;
        } else {
            throw DataError(where(line_no) + ": unknown key '" + key + "'");
        }
    }

    if (!has_format) {
        throw DataError("not a model file");
    }
    auto require = [](bool flag, const char* field) {
        if (!flag) {
            throw DataError(std::string("missing field: ") + field);
        }
    };
    require(has_created, "created");
    require(has_kind, "kind");
    require(!model.drivers.empty(), "driver");
    require(has_intercept, "intercept");
    require(has_mmre, "metric mmre");
    require(has_pred, "metric pred25");
    require(has_r2, "metric r2");
    require(has_seed, "seed");
    require(has_fold, "fold");
    require(has_digest, "config_digest");

    auto has_coef = [&](const std::string& name) {
        for (const auto& coef : model.coefficients) {
            if (coef.name == name) {
                return true;
            }
        }
        return false;
    };
    for (const auto& spec : model.drivers) {
        if (spec.scale == pipeline::Scale::ratio) {
            if (!has_coef(spec.name)) {
                throw DataError("missing coefficient for driver '" + spec.name + "'");
            }
        } else if (model.reference_levels.find(spec.name) ==
                   model.reference_levels.end()) {
            throw DataError("missing reference level for driver '" + spec.name + "'");
        }
    }
    for (const auto& coef : model.coefficients) {
        auto eq = coef.name.find('=');
        std::string driver = eq == std::string::npos ? coef.name : coef.name.substr(0, eq);
        bool known = driver == "pre";
        for (const auto& spec : model.drivers) {
            if (spec.name == driver) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw DataError("coefficient '" + coef.name + "' does not match any driver");
        }
    }
    bool pre_coef = has_coef("pre");
    if (model.kind == pipeline::ModelKind::eemr && !pre_coef) {
        throw DataError("missing coefficient for pre");
    }
    if (model.kind == pipeline::ModelKind::teem && pre_coef) {
        throw DataError("TEEM model must not carry a pre coefficient");
    }

    if (created != nullptr) {
        *created = stamp;
    }
    return model;
}

} // namespace riskest::dataio
