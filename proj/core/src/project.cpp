#include "riskest/project.hpp"

#include "riskest/error.hpp"

namespace riskest {

bool is_numeric_column(const std::string& name) {
    return name == "effort" || name == "fs" || name == "mts" || name == "pre";
}

bool is_category_column(const std::string& name) {
    return name == "dt" || name == "dp" || name == "lt" || name == "um" ||
           name == "ma" || name == "at";
}

std::optional<double> numeric_value(const ProjectRecord& record, const std::string& name) {
    if (name == "effort") return record.effort;
    if (name == "fs") return record.fs;
    if (name == "mts") return record.mts;
    if (name == "pre") return record.pre;
    throw ValidationError("unknown numeric column: " + name);
}

const std::optional<std::string>& category_value(const ProjectRecord& record,
                                                 const std::string& name) {
    if (name == "dt") return record.dt;
    if (name == "dp") return record.dp;
    if (name == "lt") return record.lt;
    if (name == "um") return record.um;
    if (name == "ma") return record.ma;
    if (name == "at") return record.at;
    throw ValidationError("unknown category column: " + name);
}

void set_numeric_value(ProjectRecord& record, const std::string& name,
                       std::optional<double> value) {
    if (name == "effort") {
        record.effort = value;
    } else if (name == "fs") {
        record.fs = value;
    } else if (name == "mts") {
        record.mts = value;
    } else if (name == "pre") {
        record.pre = value;
    } else {
        throw ValidationError("unknown numeric column: " + name);
    }
}

void set_category_value(ProjectRecord& record, const std::string& name,
                        std::optional<std::string> value) {
    if (name == "dt") {
        record.dt = std::move(value);
    } else if (name == "dp") {
        record.dp = std::move(value);
    } else if (name == "lt") {
        record.lt = std::move(value);
    } else if (name == "um") {
        record.um = std::move(value);
    } else if (name == "ma") {
        record.ma = std::move(value);
    } else if (name == "at") {
        record.at = std::move(value);
    } else {
        throw ValidationError("unknown category column: " + name);
    }
}

} // namespace riskest
