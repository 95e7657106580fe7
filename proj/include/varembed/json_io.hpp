// JSON (de)serialization of every domain type, with schema-path error
// reporting. Round-trip (parse -> serialize -> parse) is value-identical.
#pragma once

#include <string>

#include "json.hpp"
#include "varembed/embeddings.hpp"
#include "varembed/functions.hpp"
#include "varembed/gauges.hpp"
#include "varembed/variation.hpp"
#include "varembed/verify.hpp"

namespace varembed::io {

using nlohmann::json;

// --- serialization -----------------------------------------------------------

json to_json(const WeightSequence& w);
json to_json(const VariationModulus& h);
json to_json(const ConvexGauge& g);
json to_json(const SchrammSequence& phi);
json to_json(const SampledFunction& f);
json to_json(const IntervalFamily& fam);
json to_json(const ClassSpec& spec);
json to_json(const TracePoint& t);
json to_json(const VariationResult& r);
json to_json(const ModulusResult& r);
json to_json(const EmbeddingVerdict& v);
json to_json(const verify::CheckReport& r);
json to_json(const verify::WitnessReport& r);
json to_json(const verify::SearchReport& r);

// --- parsing (path-tracked; throws SchemaError) --------------------------------

WeightSequence weights_from_json(const json& j, const std::string& path);
VariationModulus modulus_from_json(const json& j, const std::string& path);
ConvexGauge gauge_from_json(const json& j, const std::string& path);
SchrammSequence schramm_from_json(const json& j, const std::string& path);
SampledFunction function_from_json(const json& j, const std::string& path);
IntervalFamily family_from_json(const json& j, const std::string& path);
ClassSpec class_from_json(const json& j, const std::string& path);

// Function given either inline or as a generator spec {"generate": {...},
// "seed": n}.
SampledFunction function_or_generate(const json& j, const std::string& path);

// Generic field access with schema-path diagnostics.
const json& require_field(const json& obj, const char* key, const std::string& path);
double require_number(const json& obj, const char* key, const std::string& path);
long long require_integer(const json& obj, const char* key, const std::string& path);
std::string require_string(const json& obj, const char* key, const std::string& path);
std::vector<double> require_number_array(const json& obj, const char* key, const std::string& path);

// CSV export of a sampled function (two columns t, f).
std::string function_to_csv(const SampledFunction& f);

}  // namespace varembed::io
