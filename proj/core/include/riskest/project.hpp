#pragma once

#include <optional>
#include <string>
#include <vector>

namespace riskest {

/// One project row. Numeric fields use nullopt for an empty cell; effort is
/// optional so that records awaiting estimation can be carried through.
struct ProjectRecord {
    std::string project_id;
    std::optional<double> effort; // person-hours of realized effort, > 0
    std::optional<double> fs;     // functional size, > 0
    std::optional<double> mts;    // maximum team size, > 0
    std::optional<std::string> dt; // development type
    std::optional<std::string> dp; // development platform
    std::optional<std::string> lt; // language type
    std::optional<std::string> um; // methodology usage
    std::optional<std::string> ma; // methodology acquisition
    std::optional<std::string> at; // application type
    std::optional<double> pre;    // project risk exposure, in [1, 25]
    /// Cells of columns outside the standard schema, aligned with
    /// Dataset::extra_columns. Preserved verbatim.
    std::vector<std::string> extras;
};

struct Dataset {
    std::vector<ProjectRecord> records;
    std::vector<std::string> extra_columns;
};

/// Ratio-scale driver and target names: effort, fs, mts, pre.
bool is_numeric_column(const std::string& name);
/// Nominal-scale driver names: dt, dp, lt, um, ma, at.
bool is_category_column(const std::string& name);

/// Field access by column name. Unknown names raise a validation error.
std::optional<double> numeric_value(const ProjectRecord& record, const std::string& name);
const std::optional<std::string>& category_value(const ProjectRecord& record,
                                                 const std::string& name);
void set_numeric_value(ProjectRecord& record, const std::string& name,
                       std::optional<double> value);
void set_category_value(ProjectRecord& record, const std::string& name,
                        std::optional<std::string> value);

} // namespace riskest
