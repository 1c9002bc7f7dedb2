#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riskscout/bitvector.hpp"
#include "riskscout/errors.hpp"
#include "riskscout/rng.hpp"

#include <json.hpp>

namespace riskscout {

enum class FeatureKind { Categorical, Ordinal, Flag };

FeatureKind feature_kind_from_name(const std::string& s);
const char* feature_kind_name(FeatureKind k);

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Ordinal;
    int cardinality = 2;
    int bits = 1; // 0 for fixed features
    std::optional<int> fixed_value;

    bool fixed() const { return fixed_value.has_value(); }
};

// Value indices per feature, 0-based. std::map keeps deterministic iteration.
using FeatureAssignment = std::map<std::string, int>;

class FeatureSchema {
public:
    FeatureSchema() = default;

    const std::string& name() const { return name_; }
    int total_bits() const { return total_bits_; }
    const std::vector<FeatureSpec>& features() const { return features_; }
    size_t feature_count() const { return features_.size(); }

    // Bit offset of feature i; fixed features share the offset of the next
    // encoded field but occupy zero bits.
    int offset(size_t i) const { return offsets_[i]; }

    bool has_feature(const std::string& name) const { return index_.count(name) != 0; }
    const FeatureSpec& at(const std::string& name) const;
    size_t index_of(const std::string& name) const;

private:
    friend FeatureSchema build_schema(const std::string&, std::vector<FeatureSpec>);

    std::string name_;
    std::vector<FeatureSpec> features_;
    std::vector<int> offsets_;
    int total_bits_ = 0;
    std::map<std::string, size_t> index_;
};

FeatureSchema build_schema(const std::string& name, std::vector<FeatureSpec> features);
FeatureSchema schema_from_json(const nlohmann::json& doc);
nlohmann::ordered_json schema_to_json(const FeatureSchema& schema);

// Built-ins: single_page_24 (N=24), multi_page_27 (N=27), mini_8 (N=8).
FeatureSchema builtin_schema(const std::string& name);
bool is_builtin_schema(const std::string& name);
std::vector<std::string> builtin_schema_names();

BitVector encode(const FeatureAssignment& assignment, const FeatureSchema& schema);
FeatureAssignment decode(const BitVector& z, const FeatureSchema& schema);

struct SpaceSize {
    uint64_t bit_space;      // 2^N
    uint64_t semantic_space; // product of cardinalities (clamping collisions kept)
};
SpaceSize space_size(const FeatureSchema& schema);

BitVector random_config(const FeatureSchema& schema, Rng& rng);

} // namespace riskscout
