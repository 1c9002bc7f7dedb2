#pragma once

#include <map>
#include <string>
#include <vector>

#include "riskscout/errors.hpp"
#include "riskscout/schema.hpp"

#include <json.hpp>

namespace riskscout {

// One additive term: coef * product of latent factors. Empty factor list is a
// constant offset.
struct Term {
    double coef = 0.0;
    std::vector<std::string> factors;
};

struct Component {
    std::string name;
    double weight = 1.0;
    double threshold = 0.5;
    std::vector<Term> terms;
};

struct LandscapeProfile {
    std::string name;
    std::vector<Component> components;
    double lambda = 0.2;
    double noise_sigma = 0.03;

    size_t k() const { return components.size(); }
    std::vector<std::string> component_names() const;
};

LandscapeProfile profile_from_json(const nlohmann::json& doc);
nlohmann::ordered_json profile_to_json(const LandscapeProfile& p);

// Built-in default: idp-sim-v1 (K=6 document-processing error components).
LandscapeProfile builtin_profile(const std::string& name);
bool is_builtin_profile(const std::string& name);

// Structural validation; latent names are checked lazily against a schema via
// inert_latents because profiles may be shared across schemas.
void validate_profile(const LandscapeProfile& p);

// Latent names referenced by the profile that the given schema can never
// produce (they evaluate to 0 there).
std::vector<std::string> inert_latents(const LandscapeProfile& p, const FeatureSchema& schema);

std::string term_product_string(const Term& t);
std::vector<std::string> parse_product(const std::string& s);

// Per-feature value frequencies for the rarity term. The map's key set
// designates which features participate.
struct ReferenceStats {
    std::map<std::string, std::vector<double>> frequencies;
};

ReferenceStats default_reference_stats(const FeatureSchema& schema);
ReferenceStats stats_from_json(const nlohmann::json& doc);
nlohmann::ordered_json stats_to_json(const ReferenceStats& stats);

} // namespace riskscout
