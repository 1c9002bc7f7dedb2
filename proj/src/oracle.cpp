#include "riskscout/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace riskscout {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double norm_value(const FeatureSpec& f, int v) {
    if (f.cardinality <= 1) return 0.0;
    return static_cast<double>(v) / static_cast<double>(f.cardinality - 1);
}

struct Alias {
    const char* feature;
    const char* latent;
};

// Canonical short names used by the shipped term tables.
constexpr Alias kCountAliases[] = {
    {"MAX_KV", "kv_n"},           {"MAX_TEXT", "text_n"},
    {"MAX_TBL_ROWS", "rows_n"},   {"MAX_TBL_COLS", "cols_n"},
    {"MAX_SUMMARY_ROWS", "srows_n"}, {"MAX_SUMMARY_COLS", "scols_n"},
    {"NUM_PAGES", "pages_n"},     {"NOISE_LEVEL", "eta"},
    {"TABLE_CONTINUE_PAGE", "cont"}, {"SUMMARY_LAST_PAGE", "slast"},
};

} // namespace

LatentMap derive_latents(const FeatureAssignment& features, const FeatureSchema& schema) {
    LatentMap m;
    for (const auto& f : schema.features()) {
        auto it = features.find(f.name);
        if (it == features.end())
            fail(Errc::UnknownFeature, "assignment missing feature '" + f.name + "'");
        int v = it->second;
        if (f.kind == FeatureKind::Categorical) {
            for (int t = 0; t < f.cardinality; ++t)
                m[lower(f.name) + "_" + std::to_string(t)] = (t == v) ? 1.0 : 0.0;
        } else {
            m[lower(f.name) + "_n"] = norm_value(f, v);
        }
    }
    for (const auto& a : kCountAliases) {
        if (!schema.has_feature(a.feature)) continue;
        const FeatureSpec& f = schema.at(a.feature);
        m[a.latent] = norm_value(f, features.at(a.feature));
    }
    if (schema.has_feature("TEMPLATE_ID")) {
        const FeatureSpec& f = schema.at("TEMPLATE_ID");
        int v = features.at("TEMPLATE_ID");
        for (int t = 0; t < f.cardinality; ++t)
            m["template_" + std::to_string(t)] = (t == v) ? 1.0 : 0.0;
    }
    if (schema.has_feature("LAYOUT_SPLIT")) {
        int v = features.at("LAYOUT_SPLIT");
        m["s_soft"] = (v == 1) ? 1.0 : 0.0;
        m["s_hard"] = (v == 2) ? 1.0 : 0.0;
    }
    auto get0 = [&](const char* k) {
        auto it = m.find(k);
        return it == m.end() ? 0.0 : it->second;
    };
    m["d"] = (get0("kv_n") + get0("text_n") + get0("rows_n") * get0("cols_n") +
              get0("srows_n") * get0("scols_n")) /
             4.0;
    return m;
}

std::vector<std::string> latent_names(const FeatureSchema& schema) {
    FeatureAssignment a;
    for (const auto& f : schema.features()) a[f.name] = f.fixed() ? *f.fixed_value : 0;
    LatentMap m = derive_latents(a, schema);
    std::vector<std::string> names;
    names.reserve(m.size());
    for (const auto& [k, v] : m) names.push_back(k);
    return names;
}

double evaluate_terms(const std::vector<Term>& terms, const LatentMap& latents) {
    double acc = 0.0;
    for (const Term& t : terms) {
        double prod = t.coef;
        for (const auto& f : t.factors) {
            auto it = latents.find(f);
            prod *= (it == latents.end()) ? 0.0 : it->second;
        }
        acc += prod;
    }
    return acc;
}

std::vector<double> component_errors(const BitVector& z, const FeatureAssignment& features,
                                     const FeatureSchema& schema, uint64_t render_seed,
                                     const LandscapeProfile& profile) {
    return component_errors(derive_latents(features, schema), z, render_seed, profile);
}

std::vector<double> component_errors(const LatentMap& latents, const BitVector& z,
                                     uint64_t render_seed, const LandscapeProfile& profile) {
    std::vector<double> r(profile.k(), 0.0);
    for (size_t k = 0; k < profile.k(); ++k) {
        double v = evaluate_terms(profile.components[k].terms, latents);
        if (profile.noise_sigma > 0.0) {
            Rng noise(hash3(z.word(), render_seed, static_cast<uint64_t>(k)));
            v += noise.uniform(-profile.noise_sigma, profile.noise_sigma);
        }
        r[k] = std::clamp(v, 0.0, 1.0);
    }
    return r;
}

double rarity_score(const FeatureAssignment& features, const ReferenceStats& stats) {
    if (stats.frequencies.empty())
        fail(Errc::MissingStats, "reference stats designate no features");
    double acc = 0.0;
    for (const auto& [name, freqs] : stats.frequencies) {
        auto it = features.find(name);
        if (it == features.end())
            fail(Errc::MissingStats, "no value for rarity feature '" + name + "'");
        int v = it->second;
        if (v < 0 || static_cast<size_t>(v) >= freqs.size())
            fail(Errc::MissingStats, "no frequency for '" + name + "' value " + std::to_string(v));
        acc += 1.0 - freqs[static_cast<size_t>(v)];
    }
    return acc / static_cast<double>(stats.frequencies.size());
}

std::pair<double, double> aggregate_risk(const std::vector<double>& r, double rarity,
                                         const LandscapeProfile& profile) {
    if (r.size() != profile.k())
        fail(Errc::LengthMismatch, "error vector size != component count");
    double base = 0.0;
    for (size_t k = 0; k < r.size(); ++k) base += profile.components[k].weight * r[k];
    return {base, base * (1.0 + profile.lambda * rarity)};
}

FailureSignature signature_of(const std::vector<double>& r, const LandscapeProfile& profile) {
    if (r.size() != profile.k())
        fail(Errc::LengthMismatch, "error vector size != component count");
    FailureSignature sig;
    sig.bits.resize(r.size());
    for (size_t k = 0; k < r.size(); ++k)
        sig.bits[k] = r[k] > profile.components[k].threshold; // strict
    return sig;
}

std::string FailureSignature::to_string() const {
    std::string s(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

const char* density_regime_name(DensityRegime d) {
    switch (d) {
        case DensityRegime::Low: return "LOW";
        case DensityRegime::Medium: return "MEDIUM";
        case DensityRegime::High: return "HIGH";
    }
    return "?";
}

const char* noise_regime_name(NoiseRegime n) {
    switch (n) {
        case NoiseRegime::No: return "NO";
        case NoiseRegime::Low: return "LOW";
        case NoiseRegime::Mid: return "MID";
        case NoiseRegime::High: return "HIGH";
    }
    return "?";
}

const char* layout_mode_name(LayoutMode l) {
    switch (l) {
        case LayoutMode::NoSplit: return "NO_SPLIT";
        case LayoutMode::SoftSplit: return "SOFT_SPLIT";
        case LayoutMode::HardSplit: return "HARD_SPLIT";
    }
    return "?";
}

std::string CoreRiskMode::to_string() const {
    std::string s = std::string("DENSITY:") + density_regime_name(density);
    for (const auto& f : failures) s += " | FAILURE:" + f;
    s += std::string(" | LAYOUT:") + layout_mode_name(layout);
    s += std::string(" | NOISE:") + noise_regime_name(noise);
    return s;
}

CoreRiskMode CoreRiskMode::parse(const std::string& s) {
    CoreRiskMode mode;
    size_t pos = 0;
    bool saw_density = false, saw_layout = false;
    while (pos < s.size()) {
        size_t end = s.find(" | ", pos);
        std::string part = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? s.size() : end + 3;
        auto starts = [&](const char* prefix) {
            return part.rfind(prefix, 0) == 0;
        };
        if (starts("DENSITY:")) {
            std::string v = part.substr(8);
            if (v == "LOW") mode.density = DensityRegime::Low;
            else if (v == "MEDIUM") mode.density = DensityRegime::Medium;
            else if (v == "HIGH") mode.density = DensityRegime::High;
            else fail(Errc::BadConfig, "bad density regime '" + v + "'");
            saw_density = true;
        } else if (starts("FAILURE:")) {
            mode.failures.push_back(part.substr(8));
        } else if (starts("LAYOUT:")) {
            std::string v = part.substr(7);
            if (v == "NO_SPLIT") mode.layout = LayoutMode::NoSplit;
            else if (v == "SOFT_SPLIT") mode.layout = LayoutMode::SoftSplit;
            else if (v == "HARD_SPLIT") mode.layout = LayoutMode::HardSplit;
            else fail(Errc::BadConfig, "bad layout mode '" + v + "'");
            saw_layout = true;
        } else if (starts("NOISE:")) {
            std::string v = part.substr(6);
            if (v == "NO") mode.noise = NoiseRegime::No;
            else if (v == "LOW") mode.noise = NoiseRegime::Low;
            else if (v == "MID") mode.noise = NoiseRegime::Mid;
            else if (v == "HIGH") mode.noise = NoiseRegime::High;
            else fail(Errc::BadConfig, "bad noise regime '" + v + "'");
        } else {
            fail(Errc::BadConfig, "unrecognized mode clause '" + part + "'");
        }
    }
    if (!saw_density || !saw_layout)
        fail(Errc::BadConfig, "mode string missing DENSITY or LAYOUT clause: '" + s + "'");
    std::sort(mode.failures.begin(), mode.failures.end());
    return mode;
}

CoreRiskMode core_risk_mode(const FeatureAssignment& features, const FeatureSchema& schema,
                            const FailureSignature& sig, const LandscapeProfile& profile) {
    if (sig.bits.size() != profile.k())
        fail(Errc::LengthMismatch, "signature size != component count");
    CoreRiskMode mode;
    for (size_t k = 0; k < sig.bits.size(); ++k)
        if (sig.bits[k]) mode.failures.push_back(profile.components[k].name);
    std::sort(mode.failures.begin(), mode.failures.end());

    LatentMap latents = derive_latents(features, schema);
    double d = latents.at("d");
    mode.density = d < (1.0 / 3.0)  ? DensityRegime::Low
                   : d < (2.0 / 3.0) ? DensityRegime::Medium
                                     : DensityRegime::High;
    int noise = schema.has_feature("NOISE_LEVEL") ? features.at("NOISE_LEVEL") : 0;
    mode.noise = static_cast<NoiseRegime>(std::clamp(noise, 0, 3));
    int layout = schema.has_feature("LAYOUT_SPLIT") ? features.at("LAYOUT_SPLIT") : 0;
    mode.layout = static_cast<LayoutMode>(std::clamp(layout, 0, 2));
    return mode;
}

Evaluation evaluate(const BitVector& z, uint64_t render_seed, const FeatureSchema& schema,
                    const LandscapeProfile& profile, const ReferenceStats& stats) {
    Evaluation e;
    e.z = z;
    e.features = decode(z, schema);
    LatentMap latents = derive_latents(e.features, schema);
    e.r = component_errors(latents, z, render_seed, profile);
    e.rarity = rarity_score(e.features, stats);
    auto [base, risk] = aggregate_risk(e.r, e.rarity, profile);
    e.base_risk = base;
    e.risk = risk;
    e.signature = signature_of(e.r, profile);
    e.core_mode = core_risk_mode(e.features, schema, e.signature, profile);
    e.render_seed = render_seed;
    return e;
}

} // namespace riskscout
