#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "riskscout/bitvector.hpp"
#include "riskscout/landscape.hpp"
#include "riskscout/schema.hpp"

namespace riskscout {

using LatentMap = std::map<std::string, double>;

// Normalized scalars feeding the term tables. Every non-categorical feature F
// yields lower(F)_n = value/(cardinality-1); categoricals yield one-hot
// indicators. Canonical document features additionally get short aliases
// (kv_n, eta, s_hard, template_t, ...) plus the density composite d.
LatentMap derive_latents(const FeatureAssignment& features, const FeatureSchema& schema);
std::vector<std::string> latent_names(const FeatureSchema& schema);

struct FailureSignature {
    std::vector<bool> bits;

    std::string to_string() const; // "0101..."
    bool operator==(const FailureSignature&) const = default;
};

enum class DensityRegime { Low, Medium, High };
enum class NoiseRegime { No, Low, Mid, High };
enum class LayoutMode { NoSplit, SoftSplit, HardSplit };

const char* density_regime_name(DensityRegime d);
const char* noise_regime_name(NoiseRegime n);
const char* layout_mode_name(LayoutMode l);

struct CoreRiskMode {
    std::vector<std::string> failures; // sorted component names
    DensityRegime density = DensityRegime::Low;
    NoiseRegime noise = NoiseRegime::No;
    LayoutMode layout = LayoutMode::NoSplit;

    // "DENSITY:HIGH | FAILURE:A | FAILURE:B | LAYOUT:HARD_SPLIT | NOISE:MID"
    std::string to_string() const;
    // Accepts strings without the NOISE clause (defaults to NO).
    static CoreRiskMode parse(const std::string& s);

    auto operator<=>(const CoreRiskMode&) const = default;
};

struct Evaluation {
    BitVector z;
    FeatureAssignment features;
    std::vector<double> r;
    double base_risk = 0.0;
    double rarity = 0.0;
    double risk = 0.0;
    FailureSignature signature;
    CoreRiskMode core_mode;
    uint64_t render_seed = 0;
    int64_t iteration = 0;
    std::string solver;
    uint64_t seed = 0;
    bool cached = false;
};

double evaluate_terms(const std::vector<Term>& terms, const LatentMap& latents);

// r_k = clamp01(terms_k(latents) + eps_k), eps_k ~ U(-sigma, sigma) from a
// stream keyed by (z, render_seed, k) so evaluation order never matters.
std::vector<double> component_errors(const LatentMap& latents, const BitVector& z,
                                     uint64_t render_seed, const LandscapeProfile& profile);
std::vector<double> component_errors(const BitVector& z, const FeatureAssignment& features,
                                     const FeatureSchema& schema, uint64_t render_seed,
                                     const LandscapeProfile& profile);

double rarity_score(const FeatureAssignment& features, const ReferenceStats& stats);

// Returns (base_risk, risk).
std::pair<double, double> aggregate_risk(const std::vector<double>& r, double rarity,
                                         const LandscapeProfile& profile);

FailureSignature signature_of(const std::vector<double>& r, const LandscapeProfile& profile);

CoreRiskMode core_risk_mode(const FeatureAssignment& features, const FeatureSchema& schema,
                            const FailureSignature& sig, const LandscapeProfile& profile);

Evaluation evaluate(const BitVector& z, uint64_t render_seed, const FeatureSchema& schema,
                    const LandscapeProfile& profile, const ReferenceStats& stats);

} // namespace riskscout
