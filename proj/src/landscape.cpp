#include "riskscout/landscape.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "riskscout/oracle.hpp"

namespace riskscout {

std::vector<std::string> LandscapeProfile::component_names() const {
    std::vector<std::string> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.name);
    return out;
}

std::vector<std::string> parse_product(const std::string& s) {
    std::vector<std::string> factors;
    std::string cur;
    auto push = [&] {
        while (!cur.empty() && std::isspace(static_cast<unsigned char>(cur.back()))) cur.pop_back();
        size_t b = 0;
        while (b < cur.size() && std::isspace(static_cast<unsigned char>(cur[b]))) ++b;
        cur = cur.substr(b);
        if (!cur.empty() && cur != "1") factors.push_back(cur);
        cur.clear();
    };
    for (char ch : s) {
        if (ch == '*')
            push();
        else
            cur += ch;
    }
    push();
    return factors;
}

std::string term_product_string(const Term& t) {
    if (t.factors.empty()) return "";
    std::string s = t.factors[0];
    for (size_t i = 1; i < t.factors.size(); ++i) s += "*" + t.factors[i];
    return s;
}

LandscapeProfile profile_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("name") || !doc.contains("components"))
        fail(Errc::BadConfig, "profile document needs 'name' and 'components'");
    LandscapeProfile p;
    p.name = doc.at("name").get<std::string>();
    p.lambda = doc.value("lambda", 0.2);
    p.noise_sigma = doc.value("noise_sigma", 0.03);
    for (const auto& jc : doc.at("components")) {
        Component c;
        c.name = jc.at("name").get<std::string>();
        c.weight = jc.at("weight").get<double>();
        c.threshold = jc.value("threshold", 0.5);
        for (const auto& jt : jc.at("terms")) {
            Term t;
            t.coef = jt.at("coef").get<double>();
            t.factors = parse_product(jt.value("product", std::string()));
            c.terms.push_back(std::move(t));
        }
        p.components.push_back(std::move(c));
    }
    validate_profile(p);
    return p;
}

nlohmann::ordered_json profile_to_json(const LandscapeProfile& p) {
    nlohmann::ordered_json doc;
    doc["name"] = p.name;
    doc["lambda"] = p.lambda;
    doc["noise_sigma"] = p.noise_sigma;
    doc["components"] = nlohmann::ordered_json::array();
    for (const auto& c : p.components) {
        nlohmann::ordered_json jc;
        jc["name"] = c.name;
        jc["weight"] = c.weight;
        jc["threshold"] = c.threshold;
        jc["terms"] = nlohmann::ordered_json::array();
        for (const auto& t : c.terms) {
            nlohmann::ordered_json jt;
            jt["coef"] = t.coef;
            std::string prod = term_product_string(t);
            if (!prod.empty()) jt["product"] = prod;
            jc["terms"].push_back(std::move(jt));
        }
        doc["components"].push_back(std::move(jc));
    }
    return doc;
}

void validate_profile(const LandscapeProfile& p) {
    if (p.components.empty()) fail(Errc::BadConfig, "profile '" + p.name + "' has no components");
    if (!(p.lambda >= 0.0) || !std::isfinite(p.lambda))
        fail(Errc::BadConfig, "lambda must be finite and >= 0");
    if (!(p.noise_sigma >= 0.0) || !std::isfinite(p.noise_sigma))
        fail(Errc::BadConfig, "noise_sigma must be finite and >= 0");
    std::set<std::string> seen;
    for (const auto& c : p.components) {
        if (!seen.insert(c.name).second)
            fail(Errc::BadConfig, "component '" + c.name + "' declared twice");
        if (!std::isfinite(c.weight) || c.weight < 0.0)
            fail(Errc::BadConfig, "component '" + c.name + "' weight must be finite and >= 0");
        if (!(c.threshold > 0.0 && c.threshold < 1.0))
            fail(Errc::BadConfig, "component '" + c.name + "' threshold must lie strictly in (0,1)");
        for (const auto& t : c.terms) {
            if (!std::isfinite(t.coef))
                fail(Errc::BadConfig, "component '" + c.name + "' has a non-finite coefficient");
            for (const auto& f : t.factors)
                if (f.empty())
                    fail(Errc::BadConfig, "component '" + c.name + "' has an empty latent factor");
        }
    }
}

std::vector<std::string> inert_latents(const LandscapeProfile& p, const FeatureSchema& schema) {
    auto known = latent_names(schema);
    std::set<std::string> known_set(known.begin(), known.end());
    std::set<std::string> inert;
    for (const auto& c : p.components)
        for (const auto& t : c.terms)
            for (const auto& f : t.factors)
                if (!known_set.count(f)) inert.insert(f);
    return {inert.begin(), inert.end()};
}

namespace {

constexpr const char* kDefaultProfileJson = R"PROFILE({
  "name": "idp-sim-v1",
  "lambda": 0.2,
  "noise_sigma": 0.03,
  "components": [
    {
      "name": "OCR_DEGRADED", "weight": 1.0, "threshold": 0.5,
      "terms": [
        {"coef": 0.05},
        {"coef": 1.45, "product": "eta"},
        {"coef": 0.10, "product": "text_n"},
        {"coef": 0.05, "product": "d"},
        {"coef": 0.05, "product": "s_hard*eta"}
      ]
    },
    {
      "name": "LAYOUT_FRAGMENTED", "weight": 0.8, "threshold": 0.5,
      "terms": [
        {"coef": 0.05},
        {"coef": 1.00, "product": "s_hard"},
        {"coef": 0.40, "product": "s_soft"},
        {"coef": 0.20, "product": "d"},
        {"coef": 0.10, "product": "template_1"}
      ]
    },
    {
      "name": "KV_MISSED", "weight": 0.8, "threshold": 0.5,
      "terms": [
        {"coef": 0.05},
        {"coef": 1.45, "product": "kv_n"},
        {"coef": 0.15, "product": "eta"},
        {"coef": 0.10, "product": "d"},
        {"coef": 0.15, "product": "cont*pages_n"}
      ]
    },
    {
      "name": "TABLE_TRUNCATED", "weight": 1.2, "threshold": 0.5,
      "terms": [
        {"coef": 0.10},
        {"coef": 0.30, "product": "rows_n*cols_n"},
        {"coef": 0.25, "product": "rows_n*eta"},
        {"coef": 0.20, "product": "s_hard*rows_n"},
        {"coef": 0.15, "product": "cont*pages_n"}
      ]
    },
    {
      "name": "SUMMARY_MISSING", "weight": 0.6, "threshold": 0.5,
      "terms": [
        {"coef": 0.05},
        {"coef": 1.70, "product": "srows_n"},
        {"coef": 0.15, "product": "scols_n"},
        {"coef": 0.10, "product": "slast"}
      ]
    },
    {
      "name": "TEXT_GARBLED", "weight": 0.6, "threshold": 0.5,
      "terms": [
        {"coef": 0.05},
        {"coef": 1.45, "product": "eta"},
        {"coef": 0.25, "product": "text_n"},
        {"coef": 0.10, "product": "text_n*s_soft"}
      ]
    }
  ]
})PROFILE";

} // namespace

LandscapeProfile builtin_profile(const std::string& name) {
    if (name == "idp-sim-v1")
        return profile_from_json(nlohmann::json::parse(kDefaultProfileJson));
    fail(Errc::BadConfig, "unknown built-in profile '" + name + "'");
}

bool is_builtin_profile(const std::string& name) { return name == "idp-sim-v1"; }

namespace {

// Rarity defaults cover the density counts plus noise and pagination; these
// are the features §-style reference statistics would plausibly track.
const char* kRarityFeatures[] = {
    "MAX_KV", "MAX_TEXT", "MAX_TBL_ROWS", "MAX_TBL_COLS",
    "MAX_SUMMARY_ROWS", "MAX_SUMMARY_COLS", "NOISE_LEVEL", "NUM_PAGES",
};

} // namespace

ReferenceStats default_reference_stats(const FeatureSchema& schema) {
    ReferenceStats stats;
    for (const char* name : kRarityFeatures) {
        if (!schema.has_feature(name)) continue;
        const FeatureSpec& f = schema.at(name);
        stats.frequencies[name] =
            std::vector<double>(static_cast<size_t>(f.cardinality), 1.0 / f.cardinality);
    }
    if (stats.frequencies.empty()) {
        // Schemas without any canonical features (synthetic test spaces) fall
        // back to uniform stats over every non-fixed feature.
        for (const auto& f : schema.features()) {
            if (f.fixed()) continue;
            stats.frequencies[f.name] =
                std::vector<double>(static_cast<size_t>(f.cardinality), 1.0 / f.cardinality);
        }
    }
    return stats;
}

ReferenceStats stats_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("features"))
        fail(Errc::BadConfig, "stats document needs a 'features' map");
    ReferenceStats stats;
    for (const auto& [name, freqs] : doc.at("features").items()) {
        std::vector<double> v = freqs.get<std::vector<double>>();
        if (v.empty()) fail(Errc::MissingStats, "empty frequency vector for '" + name + "'");
        double sum = 0.0;
        for (double x : v) {
            if (!(x >= 0.0) || !std::isfinite(x))
                fail(Errc::BadConfig, "negative or non-finite frequency for '" + name + "'");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-6)
            fail(Errc::BadConfig, "frequencies for '" + name + "' must sum to 1");
        stats.frequencies[name] = std::move(v);
    }
    return stats;
}

nlohmann::ordered_json stats_to_json(const ReferenceStats& stats) {
    nlohmann::ordered_json doc;
    doc["features"] = nlohmann::ordered_json::object();
    for (const auto& [name, freqs] : stats.frequencies) doc["features"][name] = freqs;
    return doc;
}

} // namespace riskscout
