#include "riskest/risk_model.hpp"

#include <algorithm>
#include <set>

namespace riskest::risk {

Taxonomy::Taxonomy(std::vector<RiskDimension> dimensions, std::vector<RiskItem> items)
    : dimensions_(std::move(dimensions)), items_(std::move(items)) {}

const RiskDimension* Taxonomy::find_dimension(std::string_view id) const {
    for (const auto& dim : dimensions_)
        if (dim.id == id)
            return &dim;
    return nullptr;
}

const RiskItem* Taxonomy::find_item(std::string_view id) const {
    for (const auto& item : items_)
        if (item.id == id)
            return &item;
    return nullptr;
}

std::vector<const RiskItem*> Taxonomy::items_in(std::string_view dimension_id) const {
    std::vector<const RiskItem*> out;
    for (const auto& item : items_)
        if (item.dimension == dimension_id)
            out.push_back(&item);
    return out;
}

namespace {

Taxonomy build_taxonomy() {
    std::vector<RiskDimension> dims = {
        {"user", "User"},
        {"requirement", "Requirement"},
        {"complexity", "Project complexity"},
        {"planning", "Planning & control"},
        {"team", "Team"},
        {"org_env", "Organizational environment"},
    };

    struct Entry {
        const char* dimension;
        const char* description;
    };
    const Entry entries[] = {
        {"user", "Users resist to change"},
        {"user", "Conflict between users"},
        {"user", "Users with negative attitudes toward the project"},
        {"user", "Users not committed to the project"},
        {"user", "Lack of cooperation from users"},
        {"requirement", "Continually changing system requirements"},
        {"requirement", "System requirements not adequately identified"},
        {"requirement", "Unclear system requirements"},
        {"requirement", "Incorrect system requirements"},
        {"complexity", "Project involved the use of new technology"},
        {"complexity", "High level of technical complexity"},
        {"complexity", "Immature technology"},
        {"complexity", "Project involves use of technology that has not been used in prior projects"},
        {"planning", "Lack of effective project management methodology"},
        {"planning", "Project progress not monitored closely enough"},
        {"planning", "Inadequate estimation of required resources"},
        {"planning", "Poor project planning"},
        {"planning", "Project milestones not clearly defined"},
        {"planning", "Inexperienced project manager"},
        {"planning", "Ineffective communication"},
        {"team", "Inexperienced team members"},
        {"team", "Inadequately trained development team members"},
        {"team", "Team members lack specialized skills required by the project"},
        {"org_env", "Change in organizational management during the project"},
        {"org_env", "Corporate politics with negative effect on project"},
        {"org_env", "Unstable organizational environment"},
        {"org_env", "Organization undergoing restructuring during the project"},
    };

    std::vector<RiskItem> items;
    std::map<std::string, int> ordinal;
    for (const auto& entry : entries) {
        const int n = ++ordinal[entry.dimension];
        items.push_back({std::string(entry.dimension) + "." + std::to_string(n),
                         entry.dimension, entry.description});
    }
    return Taxonomy(std::move(dims), std::move(items));
}

void check_level(int level, const char* what) {
    if (level < 1 || level > 5)
        throw ValidationError(std::string(what) + " level must be in [1,5], got " +
                              std::to_string(level));
}

} // namespace

const Taxonomy& builtin_taxonomy() {
    static const Taxonomy taxonomy = build_taxonomy();
    return taxonomy;
}

double composite_impact(const ImpactVector& impact) {
    check_level(impact.technical, "technical impact");
    check_level(impact.cost, "cost impact");
    check_level(impact.schedule, "schedule impact");
    check_level(impact.team, "team impact");
    return (impact.technical + impact.cost + impact.schedule + impact.team) / 4.0;
}

double risk_exposure(const RiskRating& rating) {
    check_level(rating.probability, "probability");
    return rating.probability * composite_impact(rating.impact);
}

double dimension_exposure(std::span<const RiskRating> ratings) {
    if (ratings.empty())
        throw ValidationError("dimension unassessed: no ratings to average");
    double sum = 0.0;
    for (const auto& rating : ratings)
        sum += risk_exposure(rating);
    return sum / static_cast<double>(ratings.size());
}

void validate(const RiskAssessment& assessment) {
    const Taxonomy& taxonomy = builtin_taxonomy();
    std::set<std::string> seen;
    for (const auto& rating : assessment.ratings) {
        if (taxonomy.find_item(rating.risk) == nullptr)
            throw ValidationError("unknown risk id: " + rating.risk);
        if (!seen.insert(rating.risk).second)
            throw ValidationError("duplicate rating for risk id: " + rating.risk);
        check_level(rating.probability, "probability");
        composite_impact(rating.impact);
    }
}

ProjectExposure project_risk_exposure(const RiskAssessment& assessment) {
    if (assessment.ratings.empty())
        throw ValidationError("assessment has no ratings");
    validate(assessment);

    const Taxonomy& taxonomy = builtin_taxonomy();
    std::map<std::string, std::vector<RiskRating>> by_dimension;
    for (const auto& rating : assessment.ratings) {
        const RiskItem* item = taxonomy.find_item(rating.risk);
        by_dimension[item->dimension].push_back(rating);
    }

    ProjectExposure result;
    double sum = 0.0;
    for (const auto& dim : taxonomy.dimensions()) {
        auto it = by_dimension.find(dim.id);
        if (it == by_dimension.end()) {
            result.unrated_dimensions.push_back(dim.id);
            continue;
        }
        const double exposure = dimension_exposure(it->second);
        result.dimension_exposures.emplace(dim.id, exposure);
        sum += exposure;
    }
    result.value = sum / static_cast<double>(result.dimension_exposures.size());
    return result;
}

} // namespace riskest::risk
