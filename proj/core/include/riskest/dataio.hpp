#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "riskest/pipeline.hpp"
#include "riskest/project.hpp"
#include "riskest/risk_model.hpp"

namespace riskest::dataio {

/// Reads the project CSV. The header row must contain all schema columns
/// (project_id, effort, fs, mts, dt, dp, lt, um, ma, at, pre) in any order;
/// further columns are carried through untouched. An empty cell is a missing
/// value; effort, when present, must be positive, as must fs and mts, and
/// pre must lie in [1,25]. Errors carry the 1-based line number.
Dataset load_projects(std::istream& source);

/// Writes the schema columns in canonical order followed by the extra
/// columns. Numbers are printed in shortest round-trip form. Cells must not
/// contain separators (comma, newline).
void serialize_projects(std::ostream& sink, const Dataset& dataset);

/// Reads a risk-assessment CSV with lines
///   risk_id,probability,technical,cost,schedule,team
/// and integer levels in 1..5. A leading header line is allowed. The
/// returned assessment has an empty project name.
risk::RiskAssessment load_assessment(std::istream& source);

/// Folds an assessment into the dataset record with the given id: computes
/// its project risk exposure and stores it, unless the record already holds
/// one, in which case the two must agree within 1e-9.
void merge_assessment(Dataset& dataset, const std::string& project_id,
                      const risk::RiskAssessment& assessment);

/// Writes the line-oriented "eemr-model/1" format. Numbers carry 17
/// significant digits so the model round-trips exactly. With an empty
/// `created` the current UTC time is stamped.
void save_model(std::ostream& sink, const pipeline::FittedModel& model,
                std::string_view created = {});

/// Parses a model file, rejecting unknown format tags, unknown keys, and
/// missing fields. The creation timestamp is returned through `created`
/// when given.
pipeline::FittedModel load_model(std::istream& source, std::string* created = nullptr);

} // namespace riskest::dataio
