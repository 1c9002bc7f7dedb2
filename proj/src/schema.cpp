#include "riskscout/schema.hpp"

#include <algorithm>

namespace riskscout {

FeatureKind feature_kind_from_name(const std::string& s) {
    if (s == "categorical") return FeatureKind::Categorical;
    if (s == "ordinal") return FeatureKind::Ordinal;
    if (s == "flag") return FeatureKind::Flag;
    fail(Errc::UnknownKind, "feature kind '" + s + "'");
}

const char* feature_kind_name(FeatureKind k) {
    switch (k) {
        case FeatureKind::Categorical: return "categorical";
        case FeatureKind::Ordinal: return "ordinal";
        case FeatureKind::Flag: return "flag";
    }
    return "?";
}

const FeatureSpec& FeatureSchema::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail(Errc::UnknownFeature, "'" + name + "' not in schema " + name_);
    return features_[it->second];
}

size_t FeatureSchema::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail(Errc::UnknownFeature, "'" + name + "' not in schema " + name_);
    return it->second;
}

FeatureSchema build_schema(const std::string& name, std::vector<FeatureSpec> features) {
    if (features.empty()) fail(Errc::EmptySchema, "schema '" + name + "' has no features");

    FeatureSchema s;
    s.name_ = name;
    int offset = 0;
    for (auto& f : features) {
        if (s.index_.count(f.name))
            fail(Errc::DuplicateFeature, "'" + f.name + "' declared twice in schema '" + name + "'");
        if (f.cardinality < (f.fixed() ? 1 : 2))
            fail(Errc::BadConfig, "feature '" + f.name + "' cardinality must be >= 2");
        if (f.kind == FeatureKind::Flag && f.cardinality != 2)
            fail(Errc::BadConfig, "flag feature '" + f.name + "' must have cardinality 2");
        if (f.fixed()) {
            if (*f.fixed_value < 0 || *f.fixed_value >= f.cardinality)
                fail(Errc::ValueOutOfRange, "fixed value for '" + f.name + "' outside cardinality");
            f.bits = 0;
        } else {
            if (f.bits < 1)
                fail(Errc::WidthTooSmall, "feature '" + f.name + "' needs at least 1 bit");
            if (f.bits < 63 && (uint64_t{1} << f.bits) < static_cast<uint64_t>(f.cardinality))
                fail(Errc::WidthTooSmall, "feature '" + f.name + "': 2^" + std::to_string(f.bits) +
                                              " < cardinality " + std::to_string(f.cardinality));
        }
        s.index_[f.name] = s.features_.size();
        s.offsets_.push_back(offset);
        offset += f.bits;
        s.features_.push_back(f);
    }
    if (offset < 1 || offset > 63)
        fail(Errc::WidthTooSmall, "schema '" + name + "' total width " + std::to_string(offset) +
                                      " outside supported range [1, 63]");
    s.total_bits_ = offset;
    return s;
}

FeatureSchema schema_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("name") || !doc.contains("features"))
        fail(Errc::BadConfig, "schema document needs 'name' and 'features'");
    std::vector<FeatureSpec> specs;
    for (const auto& jf : doc.at("features")) {
        FeatureSpec f;
        f.name = jf.at("name").get<std::string>();
        f.kind = feature_kind_from_name(jf.value("kind", std::string("ordinal")));
        f.cardinality = jf.value("cardinality", 2);
        if (jf.contains("fixed")) {
            f.fixed_value = jf.at("fixed").get<int>();
            f.bits = 0;
        } else {
            f.bits = jf.value("bits", 1);
        }
        specs.push_back(std::move(f));
    }
    return build_schema(doc.at("name").get<std::string>(), std::move(specs));
}

nlohmann::ordered_json schema_to_json(const FeatureSchema& schema) {
    nlohmann::ordered_json doc;
    doc["name"] = schema.name();
    doc["total_bits"] = schema.total_bits();
    doc["features"] = nlohmann::ordered_json::array();
    for (const auto& f : schema.features()) {
        nlohmann::ordered_json jf;
        jf["name"] = f.name;
        jf["kind"] = feature_kind_name(f.kind);
        jf["cardinality"] = f.cardinality;
        if (f.fixed())
            jf["fixed"] = *f.fixed_value;
        else
            jf["bits"] = f.bits;
        doc["features"].push_back(std::move(jf));
    }
    return doc;
}

namespace {

FeatureSpec feat(std::string name, FeatureKind kind, int card, int bits) {
    FeatureSpec f;
    f.name = std::move(name);
    f.kind = kind;
    f.cardinality = card;
    f.bits = bits;
    return f;
}

FeatureSpec fixed_feat(std::string name, FeatureKind kind, int card, int value) {
    FeatureSpec f;
    f.name = std::move(name);
    f.kind = kind;
    f.cardinality = card;
    f.bits = 0;
    f.fixed_value = value;
    return f;
}

} // namespace

FeatureSchema builtin_schema(const std::string& name) {
    using FK = FeatureKind;
    if (name == "single_page_24") {
        return build_schema(name, {
            feat("TEMPLATE_ID", FK::Categorical, 8, 3),
            fixed_feat("NUM_PAGES", FK::Ordinal, 3, 0),
            feat("MAX_KV", FK::Ordinal, 4, 2),
            feat("MAX_TEXT", FK::Ordinal, 4, 2),
            feat("MAX_TBL_ROWS", FK::Ordinal, 8, 3),
            feat("MAX_TBL_COLS", FK::Ordinal, 8, 3),
            feat("MAX_SUMMARY_ROWS", FK::Ordinal, 8, 3),
            feat("MAX_SUMMARY_COLS", FK::Ordinal, 8, 3),
            feat("NOISE_LEVEL", FK::Ordinal, 4, 2),
            fixed_feat("TABLE_CONTINUE_PAGE", FK::Flag, 2, 0),
            feat("LAYOUT_SPLIT", FK::Categorical, 3, 2),
            feat("SUMMARY_LAST_PAGE", FK::Flag, 2, 1),
        });
    }
    if (name == "multi_page_27") {
        return build_schema(name, {
            feat("TEMPLATE_ID", FK::Categorical, 8, 3),
            feat("NUM_PAGES", FK::Ordinal, 3, 2),
            feat("MAX_KV", FK::Ordinal, 8, 3),
            feat("MAX_TEXT", FK::Ordinal, 8, 3),
            feat("MAX_TBL_ROWS", FK::Ordinal, 8, 3),
            feat("MAX_TBL_COLS", FK::Ordinal, 8, 3),
            feat("MAX_SUMMARY_ROWS", FK::Ordinal, 4, 2),
            feat("MAX_SUMMARY_COLS", FK::Ordinal, 4, 2),
            feat("NOISE_LEVEL", FK::Ordinal, 4, 2),
            feat("TABLE_CONTINUE_PAGE", FK::Flag, 2, 1),
            feat("LAYOUT_SPLIT", FK::Categorical, 3, 2),
            feat("SUMMARY_LAST_PAGE", FK::Flag, 2, 1),
        });
    }
    if (name == "mini_8") {
        return build_schema(name, {
            feat("MAX_TBL_ROWS", FK::Ordinal, 4, 2),
            feat("MAX_TBL_COLS", FK::Ordinal, 4, 2),
            feat("NOISE_LEVEL", FK::Ordinal, 4, 2),
            feat("LAYOUT_SPLIT", FK::Categorical, 3, 2),
        });
    }
    fail(Errc::BadConfig, "unknown built-in schema '" + name + "'");
}

bool is_builtin_schema(const std::string& name) {
    return name == "single_page_24" || name == "multi_page_27" || name == "mini_8";
}

std::vector<std::string> builtin_schema_names() {
    return {"single_page_24", "multi_page_27", "mini_8"};
}

BitVector encode(const FeatureAssignment& assignment, const FeatureSchema& schema) {
    for (const auto& [k, v] : assignment)
        if (!schema.has_feature(k))
            fail(Errc::UnknownFeature, "assignment names '" + k + "' which is not in schema");

    BitVector z = BitVector::zeros(schema.total_bits());
    for (size_t i = 0; i < schema.feature_count(); ++i) {
        const FeatureSpec& f = schema.features()[i];
        auto it = assignment.find(f.name);
        if (it == assignment.end())
            fail(Errc::UnknownFeature, "assignment missing feature '" + f.name + "'");
        int v = it->second;
        if (v < 0 || v >= f.cardinality)
            fail(Errc::ValueOutOfRange, "'" + f.name + "' value " + std::to_string(v) +
                                            " outside cardinality " + std::to_string(f.cardinality));
        if (f.fixed()) {
            if (v != *f.fixed_value)
                fail(Errc::ValueOutOfRange, "'" + f.name + "' is fixed to " +
                                                std::to_string(*f.fixed_value));
            continue;
        }
        z.write_field(schema.offset(i), f.bits, static_cast<uint64_t>(v));
    }
    return z;
}

FeatureAssignment decode(const BitVector& z, const FeatureSchema& schema) {
    if (z.size() != schema.total_bits())
        fail(Errc::LengthMismatch, "bitvector width " + std::to_string(z.size()) +
                                       " != schema width " + std::to_string(schema.total_bits()));
    FeatureAssignment out;
    for (size_t i = 0; i < schema.feature_count(); ++i) {
        const FeatureSpec& f = schema.features()[i];
        if (f.fixed()) {
            out[f.name] = *f.fixed_value;
            continue;
        }
        uint64_t raw = z.read_field(schema.offset(i), f.bits);
        // Clamp rule: every bit pattern decodes.
        out[f.name] = static_cast<int>(std::min<uint64_t>(raw, static_cast<uint64_t>(f.cardinality - 1)));
    }
    return out;
}

SpaceSize space_size(const FeatureSchema& schema) {
    SpaceSize s;
    s.bit_space = uint64_t{1} << schema.total_bits();
    s.semantic_space = 1;
    for (const auto& f : schema.features())
        if (!f.fixed()) s.semantic_space *= static_cast<uint64_t>(f.cardinality);
    return s;
}

BitVector random_config(const FeatureSchema& schema, Rng& rng) {
    return BitVector::random(schema.total_bits(), rng);
}

} // namespace riskscout
