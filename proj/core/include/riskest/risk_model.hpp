#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskest/error.hpp"

namespace riskest::risk {

// Wallace software-risk checklist: 27 risks grouped into 6 dimensions,
// assessed on the DoD five-level scales. Probability levels 1..5 carry the
// labels "Not likely (~10)", "Unlikely (~30)", "Likely (~50)",
// "Highly likely (~70)" and "Near certainty (~90)"; the percentages are
// documentation only, scoring uses the level integers directly.

struct RiskDimension {
    std::string id;   // lowercase token, e.g. "user"
    std::string name; // display text, e.g. "User"
};

struct RiskItem {
    std::string id;        // dimension id + ordinal, e.g. "user.1"
    std::string dimension; // owning dimension id
    std::string description;
};

class Taxonomy {
public:
    Taxonomy(std::vector<RiskDimension> dimensions, std::vector<RiskItem> items);

    const std::vector<RiskDimension>& dimensions() const { return dimensions_; }
    const std::vector<RiskItem>& items() const { return items_; }

    const RiskDimension* find_dimension(std::string_view id) const;
    const RiskItem* find_item(std::string_view id) const;
    std::vector<const RiskItem*> items_in(std::string_view dimension_id) const;

private:
    std::vector<RiskDimension> dimensions_;
    std::vector<RiskItem> items_;
};

/// The built-in 6-dimension, 27-item checklist. The same immutable instance
/// is returned on every call.
const Taxonomy& builtin_taxonomy();

/// Impact levels for the four assessment components, each an integer in [1,5].
struct ImpactVector {
    int technical = 1;
    int cost = 1;
    int schedule = 1;
    int team = 1;
};

struct RiskRating {
    std::string risk; // RiskItem id, must exist in the taxonomy
    int probability = 1;
    ImpactVector impact;
};

struct RiskAssessment {
    std::string project;
    std::vector<RiskRating> ratings; // at most one per risk id
};

/// Per-dimension and project-level exposure summary. Rated dimensions carry
/// the mean exposure of their rated risks; dimensions with no rated risk are
/// listed separately and excluded from the project average.
struct ProjectExposure {
    double value = 0.0; // PRE, in [1,25]
    std::map<std::string, double> dimension_exposures;
    std::vector<std::string> unrated_dimensions;
};

/// Mean of the four impact components; result in [1,5].
double composite_impact(const ImpactVector& impact);

/// Probability level times composite impact; result in [1,25].
double risk_exposure(const RiskRating& rating);

/// Mean exposure over the ratings of one dimension. Empty input is an error.
double dimension_exposure(std::span<const RiskRating> ratings);

/// Project risk exposure: mean over rated dimensions of the per-dimension
/// mean exposure. Throws when the assessment has no ratings, an unknown or
/// duplicated risk id, or a level outside [1,5].
ProjectExposure project_risk_exposure(const RiskAssessment& assessment);

/// Validates ids, duplicates and level ranges; throws ValidationError.
void validate(const RiskAssessment& assessment);

} // namespace riskest::risk
